//! Three-layered diagrams: components, a cut and an erasure.

use spherical::diagram::{cut_v, erase, Diagram};
use spherical::dsl::{parse_triple, print};

fn main() -> Result<(), spherical::Error> {
    let t = parse_triple("(sl(4)+sl(2), sl(3)+sl(2), w1 w1')")?;
    let d = Diagram::new(&t);
    println!("primitive {}, tree {}", d.is_primitive(), d.is_tree());
    for c in d.decompose() {
        println!("{:?}: {}", c.kind, print(&c.triple));
    }
    println!("cut at the summand: {}", print(&cut_v(&t, 0, &[1])?));
    println!("erased edge:        {}", print(&erase(&t, &[(1, 0)])?));
    println!("{}", d.to_dot());
    Ok(())
}

//! Classification with provenance, rule reduction and enumeration.

use spherical::classify::{classify, enumerate, replay, Options};
use spherical::dsl::{parse_triple, print};
use spherical::rules::reduce;

fn main() -> Result<(), spherical::Error> {
    let t = parse_triple("(sp(6)+sl(3), sp(4)+sl(2)+sl(3), w1' w1'')")?;
    let (red, steps) = reduce(&t);
    println!("reduced: {} after {} steps", print(&red), steps.len());

    let r = classify(&t, &Options::default())?;
    println!("{:?}", r.decision);
    for c in &r.components {
        for p in &c.provenance {
            let back = replay(p)?.map(|x| print(&x));
            println!("  {:?} replays to {back:?}", p);
        }
    }
    for k in 1..=3 {
        println!("enumerate({k}): {} triples", enumerate(k).len());
    }
    Ok(())
}

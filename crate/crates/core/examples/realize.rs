//! Matrix realizations of simple factors and of an embedding.

use spherical::dsl::parse_pair;
use spherical::embed::embedding_images;
use spherical::lie::SimpleFactor;
use spherical::realize::realize_factor;

fn main() -> Result<(), spherical::Error> {
    for f in [SimpleFactor::a(2), SimpleFactor::c(2), SimpleFactor::d(4), SimpleFactor::g2()] {
        let r = realize_factor(f)?;
        println!("{f}: {} matrices of size {}", r.dim(), r.n);
    }
    // so(7) inside so(8) through the spin module.
    let t = parse_pair("(so(8), so(7)) [embed=spin]")?;
    let imgs = embedding_images(&t)?;
    println!("{} basis images of so(7) in so(8)", imgs[0].len());
    Ok(())
}

//! Weyl dimensions, a tensor product and the start of a symmetric algebra.

use spherical::character::{sym_power_decompose, tensor_decompose};
use spherical::dsl::{parse_algebra_text, parse_module_text};
use spherical::lie::{weyl_dim, SimpleFactor};

fn main() -> Result<(), spherical::Error> {
    let g2 = SimpleFactor::g2();
    for hw in [[1, 0], [0, 1], [2, 0]] {
        println!("G2 {hw:?}: dim {}", weyl_dim(g2, &hw)?);
    }

    let a2 = SimpleFactor::a(2);
    println!("sl(3): w1 (x) w2 =");
    for (w, m) in tensor_decompose(a2, &[1, 0], &[0, 1])? {
        println!("  {m} x {w:?}");
    }

    // Sym(V) of a spherical module is multiplicity free.
    let h = parse_algebra_text("sl(2)")?;
    let v = parse_module_text(&h, "w1 + w1")?;
    for d in 1..=3 {
        let parts = sym_power_decompose(&h, &v, d)?;
        let worst = parts.iter().map(|c| c.multiplicity.clone()).max().unwrap_or_default();
        println!("Sym^{d}: {} constituents, largest multiplicity {worst}", parts.len());
    }
    Ok(())
}

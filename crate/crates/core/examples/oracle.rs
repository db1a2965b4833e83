//! Rank oracle: a positive witness, a negative certificate and a generic isotropy.

use spherical::dsl::parse_triple;
use spherical::oracle::{check_triple, generic_isotropy, replay_exact, Certificate, OracleConfig};

fn main() -> Result<(), spherical::Error> {
    let cfg = OracleConfig::default();

    let t = parse_triple("(sp(6)+sl(3), sp(4)+sl(2)+sl(3), w1' w1'')")?;
    let v = check_triple(&t, &cfg)?;
    println!("{:?}", v.status);
    if let Certificate::Witness(w) = &v.certificate {
        let exact = replay_exact(&t, w, None)?;
        println!("replayed over Q: ranks {exact:?}, needed ({}, {})", w.pair_needed, w.module_needed);
    }

    let t = parse_triple("(sl(4), sp(4), w1 + w1)")?;
    println!("{:?}", check_triple(&t, &cfg)?);

    let iso = generic_isotropy(&parse_triple("(sl(4), sp(4), 0)")?, &cfg)?;
    println!("(sl(4), sp(4)): l has dim {}, derived {}", iso.dim_l, iso.derived_dim_l);
    Ok(())
}

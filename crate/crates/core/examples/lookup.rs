//! Database lookups up to isomorphism and principal subalgebras.

use spherical::classify::principal_subalgebra;
use spherical::dsl::parse_triple;
use spherical::oracle::OracleConfig;
use spherical::tables::{database, Table};

fn main() -> Result<(), spherical::Error> {
    let db = database();
    println!("checksum {}", db.checksum);
    for (t, n) in db.counts() {
        println!("  {t}: {n}");
    }
    for text in ["(so(8), so(7), spin)", "(so(10), so(9), spin)", "(sl(5), sl(5), w4)"] {
        let hits: Vec<String> = db
            .lookup(&parse_triple(text)?, &[Table::Modules, Table::Triples])
            .iter()
            .map(|i| i.binding.to_string())
            .collect();
        println!("{text}: {hits:?}");
    }
    let r = principal_subalgebra(&parse_triple("(sl(4), sl(3), 0)")?, &OracleConfig::default())?;
    println!("(sl(4), sl(3)): dim {:?}, derived {:?}, star {}", r.dim, r.derived_dim, r.star());
    Ok(())
}

use std::time::Instant;

use spherical::oracle::OracleConfig;
use spherical::verify;

fn main() {
    let max_rank: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let cfg = OracleConfig::default();
    let t = Instant::now();
    let m = verify::verify_modules(max_rank, &cfg);
    println!("modules: {} checks, {} failed, {:?}", m.len(), m.iter().filter(|c| !c.ok).count(), t.elapsed());
    let t = Instant::now();
    let (tr, _) = verify::verify_triples(&cfg);
    println!("triples: {} checks, {} failed, {:?}", tr.len(), tr.iter().filter(|c| !c.ok).count(), t.elapsed());
    let t = Instant::now();
    let (p, _) = verify::verify_principal(max_rank, &cfg);
    println!("principal: {} checks, {} failed, {:?}", p.len(), p.iter().filter(|c| !c.ok).count(), t.elapsed());
    let t = Instant::now();
    let c = verify::verify_c_subspaces(&cfg);
    println!("c-subspaces: {} checks, {} failed, {:?}", c.len(), c.iter().filter(|c| !c.ok).count(), t.elapsed());
    for x in m.iter().chain(&tr).chain(&p).chain(&c).filter(|c| !c.ok) {
        println!("  FAIL {} {} expected {} found {}", x.id, x.triple, x.expected, x.found);
    }
}

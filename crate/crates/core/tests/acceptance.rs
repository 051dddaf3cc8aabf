//! Runs every acceptance criterion, printing one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::Instant;

use hecke_core::lattice::{det_int, IMat};
use hecke_core::suite::{run_criterion, SuiteConfig};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random unimodular matrices: products of elementary moves, signs and swaps.
fn random_unimodular(n: usize, count: usize) -> Vec<IMat> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0011);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut g: IMat = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        for _ in 0..rng.gen_range(1..=4) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            match rng.gen_range(0..3) {
                0 if a != b => {
                    let c = if rng.gen_bool(0.5) { 1 } else { -1 };
                    for row in g.iter_mut() {
                        row[a] += c * row[b];
                    }
                }
                1 => g.iter_mut().for_each(|row| row[a] = -row[a]),
                _ => g.iter_mut().for_each(|row| row.swap(a, b)),
            }
        }
        assert_eq!(det_int(&g).to_i64().map(i64::abs), Some(1));
        out.push(g);
    }
    out
}

fn run(id: u32, cfg: &SuiteConfig) -> bool {
    let start = Instant::now();
    let rep = match run_criterion(id, cfg) {
        Ok(rep) => rep,
        Err(e) => {
            println!("criterion {id:>2}: FAIL (error: {e})");
            return false;
        }
    };
    let verdict = if rep.pass { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:>2} [{}]: {verdict} ({} checks, {} failures, {:.1}s)",
        rep.title,
        rep.checked,
        rep.failures,
        start.elapsed().as_secs_f64()
    );
    for m in &rep.shown {
        println!("    {}: {} != {}", m.case, m.lhs, m.rhs);
    }
    rep.pass
}

fn main() -> ExitCode {
    let default = SuiteConfig::default();
    let seeded = SuiteConfig {
        unimodular: random_unimodular,
        ..SuiteConfig::default()
    };
    let mut failed = 0;
    for id in 1..=11 {
        let cfg = if id == 11 { &seeded } else { &default };
        failed += usize::from(!run(id, cfg));
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

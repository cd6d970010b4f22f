//! Checks every vertex-operator commutator on a root lattice over a mode window.
//!
//! `cargo run --example gamma_commutators -- D4 4`

use std::time::Instant;

use ade_vertex::lattice::RootLattice;
use ade_vertex::rep::{verify_gamma_commutators, VerificationPlan};

fn main() -> ade_vertex::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let name = args.get(1).map(String::as_str).unwrap_or("D4");
    let window: i64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(3);
    let l = RootLattice::parse(name)?;
    let plan = if l.roots().len() > 40 {
        VerificationPlan::sampled(&l, window, 50, 7)
    } else {
        VerificationPlan::all_pairs(&l, window)
    };
    let t = Instant::now();
    let report = verify_gamma_commutators(&l, &plan);
    println!("{} window {} pairs {} states {}", report.algebra, window, plan.pairs.len(), report.states);
    for (case, tally) in &report.by_case {
        println!("  {case:9} pairs {:5} checks {:8} passed {:8}", tally.pairs, tally.checks, tally.passed);
    }
    println!("direct evaluations {}", report.direct_checks);
    println!("failures {}", report.failures.len());
    for f in report.failures.iter().take(3) {
        println!("  {} {} {} m={} k={} {}\n    lhs {}\n    rhs {}", f.case, f.alpha, f.beta, f.m, f.k, f.state_id, f.lhs, f.rhs);
    }
    println!("elapsed {:.1?}", t.elapsed());
    Ok(())
}

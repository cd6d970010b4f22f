//! Evaluates the closed-form action of `2X̂_α` on the partial-product basis
//! of C{Q/2Q} and compares it with the direct computation.
//!
//! `cargo run --example action_tables -- E7`

use ade_vertex::groupalg::verify_action_lemmas;
use ade_vertex::lattice::RootLattice;

fn main() -> ade_vertex::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "D5".into());
    let l = RootLattice::parse(&name)?;
    let r = verify_action_lemmas(&l);
    println!("{}: {} formulas, {} evaluations", r.algebra, r.formulas.len(), r.entries.len());
    for f in &r.formulas {
        println!("  {:28} {:16} tuples {:4} mismatches {}", f.case, f.root, f.tuples, f.mismatches);
    }
    if let Some(e) = r.entries.iter().find(|e| !e.matched) {
        println!("first mismatch {} {}: expected {} got {}", e.case, e.tuple, e.expected, e.actual);
    }
    Ok(())
}

//! Prints the ν table of a lattice and checks the cocycle axioms.
//!
//! `cargo run --example asymmetry_axioms -- E6`

use ade_vertex::lattice::{verify_asymmetry_axioms, RootLattice};

fn main() -> ade_vertex::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "D4".into());
    let l = RootLattice::parse(&name)?;
    println!("{} with {} roots, arrows {:?}", l.kind(), l.roots().len(), l.orientation().arrows());
    for row in l.nu_table() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:+}")).collect();
        println!("  {}", cells.join(" "));
    }
    let r = verify_asymmetry_axioms(&l);
    println!(
        "vectors {} pairs {} triples {} failures {}",
        r.vectors,
        r.pairs_checked,
        r.triples_checked,
        r.failures.len()
    );
    Ok(())
}

//! Splits C{Q/2Q} into irreducible pieces and lists singular vectors.
//!
//! `cargo run --example decomposition -- A5`

use ade_vertex::affine::{decompose, find_singular_vectors};
use ade_vertex::lattice::{RootLattice, Series};

fn main() -> ade_vertex::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "D4".into());
    let l = RootLattice::parse(&name)?;
    if l.kind().series != Series::E {
        for v in find_singular_vectors(&l)? {
            println!("singular {} weight {} eigenvalues {:?}", v.tuple, v.weight, v.eigenvalues);
        }
    }
    let r = decompose(&l)?;
    for s in &r.submodules {
        println!("{:24} dim {:3} commutant {}", s.label, s.dim, s.commutant_dim);
    }
    let c = &r.certificate;
    println!(
        "invariant {} disjoint {} total {}/{} labels separate {}",
        c.invariant, c.disjoint, c.total_dim, c.expected_total, c.labels_separate
    );
    for d in &r.weight_table_deviations {
        println!("weight table differs: {d}");
    }
    Ok(())
}

//! The D8 subsystem of E8 that fixes the spans of the E8 lattice part.

use ade_vertex::affine::check_d8_in_e8;
use ade_vertex::lattice::RootLattice;

fn main() -> ade_vertex::Result<()> {
    let l = RootLattice::parse("E8")?;
    let r = check_d8_in_e8(&l)?;
    println!("roots {} closed {} rank {} type {}", r.subsystem_size, r.closed, r.span_rank, r.cartan_type);
    println!("simple roots {}", r.simple_roots.join(", "));
    for s in r.spans.iter().take(4) {
        println!("  {} dim {} commutant {} joined {}", s.signs, s.dim, s.commutant_dim, s.joined_by_outside_root);
    }
    println!("{} spans, all irreducible: {}", r.spans.len(), r.spans.iter().all(|s| s.commutant_dim == 1));
    Ok(())
}

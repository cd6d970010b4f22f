//! The action of `2X̂_α` on a two-dimensional piece of the D4 lattice part,
//! written in Pauli matrices.
//!
//! `cargo run --example spin_matrices -- +,-,+,+`

use ade_vertex::affine::pauli_example;
use ade_vertex::groupalg::SignTuple;
use ade_vertex::lattice::RootLattice;

fn main() -> ade_vertex::Result<()> {
    let signs: Vec<i8> = std::env::args()
        .nth(1)
        .map(|s| s.split(',').map(|x| if x.trim() == "-" { -1 } else { 1 }).collect())
        .unwrap_or_else(|| vec![1; 4]);
    let l = RootLattice::parse("D4")?;
    let r = pauli_example(&l, SignTuple::from_signs(&signs))?;
    println!("pair {} {}", r.tuple, r.partner);
    for e in &r.entries {
        println!(
            "  {:14} {:8} class {} computed {:4} stated {:16} {}",
            e.root,
            e.epsilon,
            e.class,
            e.computed,
            e.stated,
            if e.sign_matches { "" } else { "sign differs" }
        );
    }
    println!(
        "classes exact {} closed {} sums in third class {}",
        r.classes_exact, r.closed_within_class, r.sums_land_in_third_class
    );
    Ok(())
}

//! Graded dimensions of the submodules against the closed-form products.
//!
//! `cargo run --example characters -- 20`

use ade_vertex::charq::{phi_ratio, verify_character_table};

fn main() -> ade_vertex::Result<()> {
    let order: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(12);
    println!("φ(q²)/φ(q) = {}", phi_ratio(order));
    let r = verify_character_table(order)?;
    for row in &r.rows {
        println!(
            "{:8} {:3} {:22} submodules {:2} {}",
            row.affine,
            row.lattice,
            row.closed_form,
            row.submodules,
            if row.passed { "ok" } else { "MISMATCH" }
        );
        println!("    {}", row.expected.join(" "));
    }
    Ok(())
}

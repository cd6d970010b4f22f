//! Builds the affine Chevalley generators of the twisted algebra and reads
//! back their Cartan matrix. Pass `printed` to use the formulas as printed.
//!
//! `cargo run --example affine_generators -- D5 printed`

use ade_vertex::affine::{build_chevalley_with, verify_cartan_matrix, verify_z_brackets, GeneratorForm};
use ade_vertex::lattice::{RootLattice, Series};

fn main() -> ade_vertex::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let l = RootLattice::parse(args.get(1).map(String::as_str).unwrap_or("D4"))?;
    let form = match args.get(2).map(String::as_str) {
        Some("printed") => GeneratorForm::Printed,
        _ => GeneratorForm::Corrected,
    };
    if l.kind().series == Series::D {
        let z = verify_z_brackets(&l)?;
        for (family, t) in &z.families {
            println!("Z brackets, {family}: {}/{}", t.passed, t.checks);
        }
    }
    let cs = build_chevalley_with(&l, form)?;
    let r = verify_cartan_matrix(&l, &cs);
    println!("target {} with nodes {:?}", r.target.name, r.target.nodes.iter().map(|n| n.to_string()).collect::<Vec<_>>());
    for (want, got) in r.target.cartan.iter().zip(&r.recovered) {
        let got: Vec<String> = got.iter().map(|x| x.map_or("?".into(), |v| v.to_string())).collect();
        println!("  {want:?}  recovered [{}]", got.join(", "));
    }
    for (rel, t) in &r.relations {
        println!("{rel}: {}/{}", t.passed, t.checks);
    }
    for f in r.failures.iter().take(4) {
        println!("  failed {} expected {} got {}", f.bracket, f.expected, f.actual);
    }
    println!("all relations hold: {}", r.all_passed());
    Ok(())
}

//! Deviations from the closed-form tables, pinned to a golden file.

use ade_vertex::affine::{decompose, pauli_example};
use ade_vertex::groupalg::{verify_action_lemmas, SignTuple};
use ade_vertex::lattice::RootLattice;
use serde_json::Value;

fn golden() -> Value {
    let text = include_str!("golden/deviations.json");
    serde_json::from_str(text).unwrap()
}

fn lattice(name: &str) -> RootLattice {
    RootLattice::parse(name).unwrap()
}

#[test]
fn action_table_deviation_counts() {
    let g = golden();
    for (name, want) in g["action_table_deviations"].as_object().unwrap() {
        let r = verify_action_lemmas(&lattice(name));
        assert_eq!(r.deviations().len() as u64, want.as_u64().unwrap(), "{name}");
        assert!(!r.entries.is_empty());
    }
}

#[test]
fn weight_table_deviation_counts() {
    let g = golden();
    for (name, want) in g["weight_table_deviations"].as_object().unwrap() {
        let r = decompose(&lattice(name)).unwrap();
        assert_eq!(r.weight_table_deviations.len() as u64, want.as_u64().unwrap(), "{name}");
        assert!(r.all_passed(), "{name}");
    }
}

#[test]
fn spin_matrix_sign_deviations() {
    let g = golden();
    let want: Vec<&str> = g["spin_matrix_sign_deviations"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let l = lattice("D4");
    for t in SignTuple::all(4) {
        let r = pauli_example(&l, t).unwrap();
        let mut got: Vec<&str> = r.entries.iter().filter(|e| !e.sign_matches).map(|e| e.root.as_str()).collect();
        got.sort();
        assert_eq!(got, want, "{t}");
        assert!(r.structure_holds());
    }
}

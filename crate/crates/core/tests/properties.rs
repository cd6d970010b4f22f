use ade_vertex::affine::{build_chevalley, decompose, ZeroModes};
use ade_vertex::charq::{enumerate_fock_monomials, phi_ratio, QSeries};
use ade_vertex::dist::{diff_coeff, iota_diff, Kernel};
use ade_vertex::fock::{FockSpace, StateVector};
use ade_vertex::groupalg::{root_v_ops, CosetLabel, SignTuple, VMonomialOp};
use ade_vertex::lattice::{LatticeVector, RootLattice};
use ade_vertex::rep::{commutator_lhs, commutator_rhs, CommutatorCase};
use ade_vertex::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    let q = (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d));
    (q.clone(), q.clone(), q.clone(), q).prop_map(|(a, b, c, d)| Scalar::new(a, b, c, d))
}

fn vector(n: usize) -> impl Strategy<Value = LatticeVector> {
    prop::collection::vec(-3i64..=3, n).prop_map(LatticeVector)
}

fn lattice(name: &str) -> RootLattice {
    RootLattice::parse(name).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a * &b).sqrt2_conj(), &a.sqrt2_conj() * &b.sqrt2_conj());
    }

    #[test]
    fn asymmetry_on_random_vectors(
        name in prop::sample::select(vec!["A4", "D5", "E6", "E8"]),
        seed in any::<[i64; 24]>(),
    ) {
        let l = lattice(name);
        let n = l.rank();
        let v = |off: usize| LatticeVector((0..n).map(|j| seed[off + j].rem_euclid(7) - 3).collect());
        let (a, b, c) = (v(0), v(8), v(16));
        let sign = |x: i64| if x.rem_euclid(2) == 0 { 1i8 } else { -1 };
        prop_assert_eq!(l.nu(&a, &a), sign(l.inner(&a, &a) / 2));
        prop_assert_eq!(l.nu(&a, &b), sign(l.inner(&a, &b)) * l.nu(&b, &a));
        prop_assert_eq!(l.nu(&a.add(&b), &c), l.nu(&a, &c) * l.nu(&b, &c));
        prop_assert_eq!(l.nu(&a, &b.add(&c)), l.nu(&a, &b) * l.nu(&a, &c));
        // ν only sees classes mod 2Q
        prop_assert_eq!(l.nu(&a.add(&b.scale(2)), &c), l.nu(&a, &c));
    }

    #[test]
    fn inner_product_is_symmetric(a in vector(7), b in vector(7)) {
        let l = lattice("E7");
        prop_assert_eq!(l.inner(&a, &b), l.inner(&b, &a));
        prop_assert_eq!(l.inner(&a, &a) % 2, 0);
    }

    #[test]
    fn root_operators_square_to_minus_one(
        name in prop::sample::select(vec!["A5", "D6", "E6", "E7"]),
        idx in any::<prop::sample::Index>(),
    ) {
        let l = lattice(name);
        let ops = root_v_ops(&l);
        let op = &ops[idx.index(ops.len())];
        let minus = VMonomialOp::identity(l.rank()).scale(&Scalar::from_int(-1));
        prop_assert_eq!(op.compose(op), minus);
    }

    #[test]
    fn commutator_is_antisymmetric(
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        m in -3i64..=3,
        k in -3i64..=3,
        g in 0u32..16,
    ) {
        let l = lattice("D4");
        let roots = l.roots();
        let (a, b) = (&roots[i.index(roots.len())], &roots[j.index(roots.len())]);
        let fs = FockSpace::new(&l);
        let s = StateVector::vacuum(4, CosetLabel(g));
        let ab = commutator_lhs(&fs, &CommutatorCase::classify(&l, a, b).unwrap(), m, k, &s);
        let ba = commutator_lhs(&fs, &CommutatorCase::classify(&l, b, a).unwrap(), k, m, &s);
        prop_assert_eq!(ab, ba.scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn commutator_formula_on_e7_vacua(
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
        m in -2i64..=2,
        k in -2i64..=2,
        g in 0u32..128,
    ) {
        let l = lattice("E7");
        let roots = l.roots();
        let (a, b) = (&roots[i.index(roots.len())], &roots[j.index(roots.len())]);
        let fs = FockSpace::new(&l);
        let s = StateVector::vacuum(7, CosetLabel(g));
        let case = CommutatorCase::classify(&l, a, b).unwrap();
        prop_assert_eq!(commutator_lhs(&fs, &case, m, k, &s), commutator_rhs(&fs, &case, m, k, &s));
    }

    #[test]
    fn delta_from_simple_pole(m in -40i64..=40, k in -40i64..=40) {
        let want = if m + k == 1 { Rational::one() } else { Rational::zero() };
        prop_assert_eq!(diff_coeff(&Kernel::inv_minus(), m, k), want);
    }

    #[test]
    fn polynomial_kernels_have_no_difference(a in 0i64..4, b in 0i64..4, p in 0u32..3, q in 0u32..3) {
        let kern = Kernel::term(Rational::one(), a, b, p, q);
        prop_assert!(iota_diff(&kern, 6, 6).is_zero());
    }

    #[test]
    fn phi_ratio_times_odd_product_is_one(order in 0usize..60) {
        let mut odd = QSeries::one(order);
        for r in (1..=order).step_by(2) {
            let mut c = vec![0i64; order + 1];
            c[0] = 1;
            c[r] = -1;
            odd = odd.mul(&QSeries::from_coeffs(order, &c));
        }
        prop_assert_eq!(phi_ratio(order).mul(&odd), QSeries::one(order));
    }

    #[test]
    fn monomial_listing_matches_series(rank in 1usize..4, order in 0usize..8) {
        let listed = enumerate_fock_monomials(rank, order);
        let series = phi_ratio(order).pow(rank as u32);
        for (d, c) in listed.iter().enumerate() {
            prop_assert_eq!(&BigInt::from(*c), series.coeff(d));
        }
    }

    #[test]
    fn cartan_generators_commute(
        name in prop::sample::select(vec!["A3", "A4", "A5", "D4", "D5", "D6"]),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
    ) {
        let l = lattice(name);
        let cs = build_chevalley(&l).unwrap();
        let ops = ZeroModes::new(&l);
        let a = cs.nodes[i.index(cs.nodes.len())].h.matrix(&ops).unwrap();
        let b = cs.nodes[j.index(cs.nodes.len())].h.matrix(&ops).unwrap();
        prop_assert!(a.bracket(&b).is_zero());
        prop_assert!(a.diagonal().is_some());
    }

    #[test]
    fn root_operators_preserve_submodules(
        name in prop::sample::select(vec!["A3", "A5", "D4", "D5", "E6", "E7"]),
        r in any::<prop::sample::Index>(),
        t in any::<u32>(),
    ) {
        let l = lattice(name);
        let n = l.rank();
        let report = decompose(&l).unwrap();
        let ops = root_v_ops(&l);
        let op = &ops[r.index(ops.len())];
        let start = SignTuple::new(n, t & ((1 << n) - 1));
        let (image, _) = op.image(start);
        let home = report.submodules.iter().find(|s| s.basis.contains(&start));
        prop_assert!(home.is_some());
        prop_assert!(home.unwrap().basis.contains(&image));
    }
}

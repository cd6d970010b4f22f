//! The group algebra C{Q/2Q}, the zero-mode operators X̂_α and the v-basis.
//!
//! Cosets are bit masks: bit `j` holds the coefficient of α_{j+1} mod 2.
//! `2X̂_α` maps `e^γ` to `ν(α,γ) e^{α+γ}`, a signed permutation, so most
//! routines here work with the doubled operator and avoid the factor ½.

pub mod lemmas;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::lattice::{LatticeVector, RootLattice};
use crate::scalar::{Rational, Scalar};

pub use lemmas::{verify_action_lemmas, FormulaSummary, LemmaEntry, LemmaReport};

/// A coset of 2Q in Q, as a bit mask on the simple roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetLabel(pub u32);

impl CosetLabel {
    pub fn of(v: &LatticeVector) -> Self {
        CosetLabel(v.parity_bits())
    }

    pub fn zero() -> Self {
        CosetLabel(0)
    }

    pub fn add(self, o: CosetLabel) -> Self {
        CosetLabel(self.0 ^ o.0)
    }

    /// Bit string `b_1 b_2 ... b_n`.
    pub fn render(&self, rank: usize) -> String {
        (0..rank).map(|j| if self.0 >> j & 1 == 1 { '1' } else { '0' }).collect()
    }
}

/// The units `i^k`, `k = 0..4`.
pub fn i_pow(k: u32) -> Scalar {
    match k % 4 {
        0 => Scalar::one(),
        1 => Scalar::i(),
        2 => Scalar::from_int(-1),
        _ => -Scalar::i(),
    }
}

/// A finitely supported function on Q/2Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgElement {
    rank: usize,
    terms: BTreeMap<u32, Scalar>,
}

impl GroupAlgElement {
    pub fn zero(rank: usize) -> Self {
        GroupAlgElement { rank, terms: BTreeMap::new() }
    }

    /// The basis element `e^γ`.
    pub fn basis(rank: usize, g: CosetLabel) -> Self {
        let mut u = Self::zero(rank);
        u.terms.insert(g.0, Scalar::one());
        u
    }

    pub fn from_dense(rank: usize, x: &[Scalar]) -> Self {
        let mut u = Self::zero(rank);
        for (g, c) in x.iter().enumerate() {
            if !c.is_zero() {
                u.terms.insert(g as u32, c.clone());
            }
        }
        u
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (CosetLabel, &Scalar)> {
        self.terms.iter().map(|(g, c)| (CosetLabel(*g), c))
    }

    pub fn coeff(&self, g: CosetLabel) -> Scalar {
        self.terms.get(&g.0).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: CosetLabel, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(g.0).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&g.0);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in o.terms() {
            out.add_term(g, c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.rank);
        if s.is_zero() {
            return out;
        }
        for (g, c) in &self.terms {
            out.terms.insert(*g, c * s);
        }
        out
    }

    /// Multiplication in the (commutative) group algebra.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for (g, c) in &self.terms {
            for (h, d) in &o.terms {
                out.add_term(CosetLabel(g ^ h), &(c * d));
            }
        }
        out
    }

    pub fn dense(&self) -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); 1 << self.rank];
        for (g, c) in &self.terms {
            x[*g as usize] = c.clone();
        }
        x
    }
}

impl fmt::Display for GroupAlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}) e^{}", CosetLabel(*g).render(self.rank))?;
        }
        Ok(())
    }
}

/// A tuple `(c_1, ..., c_n)` of signs; bit `j` of `neg` set means `c_{j+1} = -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignTuple {
    rank: usize,
    neg: u32,
}

impl SignTuple {
    pub fn new(rank: usize, neg: u32) -> Self {
        debug_assert!(rank == 32 || neg >> rank == 0);
        SignTuple { rank, neg }
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        let neg = signs.iter().enumerate().filter(|(_, &s)| s < 0).fold(0, |m, (j, _)| m | 1 << j);
        SignTuple { rank: signs.len(), neg }
    }

    pub fn all_plus(rank: usize) -> Self {
        SignTuple { rank, neg: 0 }
    }

    /// Every tuple of the given length, in the order of `neg` masks.
    pub fn all(rank: usize) -> impl Iterator<Item = SignTuple> {
        (0..1u32 << rank).map(move |neg| SignTuple { rank, neg })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn neg_mask(&self) -> u32 {
        self.neg
    }

    /// `c_{j+1}` as ±1.
    pub fn c(&self, j: usize) -> i8 {
        if self.neg >> j & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Product of `c_{j+1}` over the nodes in `mask`.
    pub fn prod(&self, mask: u32) -> i8 {
        if (self.neg & mask).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The tuple with the signs in `mask` negated.
    pub fn flip(&self, mask: u32) -> Self {
        SignTuple { rank: self.rank, neg: self.neg ^ mask }
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.rank).map(|j| self.c(j)).collect()
    }
}

/// Renders as `(+,-,+,+)`.
impl fmt::Display for SignTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for j in 0..self.rank {
            if j > 0 {
                f.write_str(",")?;
            }
            f.write_str(if self.c(j) > 0 { "+" } else { "-" })?;
        }
        f.write_str(")")
    }
}

impl Serialize for SignTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `2X̂_α` for α given by its coset bits.
pub fn xhat2_bits(l: &RootLattice, a: u32, u: &GroupAlgElement) -> GroupAlgElement {
    let mut out = GroupAlgElement::zero(u.rank);
    for (g, c) in &u.terms {
        let s = l.nu_bits(a, *g);
        let v = if s > 0 { c.clone() } else { -c };
        out.terms.insert(a ^ g, v);
    }
    out
}

/// `X̂_α(e^γ) = ν(α,γ)/2 · e^{α+γ}`, extended linearly.
pub fn xhat_apply(l: &RootLattice, alpha: &LatticeVector, u: &GroupAlgElement) -> GroupAlgElement {
    xhat2_bits(l, alpha.parity_bits(), u).scale(&Scalar::from_ratio(1, 2))
}

/// `∏_{j ∈ support} (1 + i c_j e^{α_j})`; the full v-basis vector when
/// `support` covers every node.
pub fn partial_product(rank: usize, c: SignTuple, support: u32) -> GroupAlgElement {
    let mut u = GroupAlgElement::zero(rank);
    let mut s = support;
    // enumerate subsets of `support`
    loop {
        let sign = c.prod(s);
        let unit = i_pow(s.count_ones());
        u.terms.insert(s, if sign > 0 { unit } else { -unit });
        if s == 0 {
            break;
        }
        s = (s - 1) & support;
    }
    u
}

/// The basis vector `v(c) = ∏_j (1 + i c_j e^{α_j})`.
pub fn v_basis(l: &RootLattice, c: SignTuple) -> GroupAlgElement {
    let n = l.rank();
    partial_product(n, c, full_mask(n))
}

pub fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Coordinates of `u` on the v-basis, computed one node at a time: the
/// change of basis is a tensor product of 2×2 blocks `[[1, 1], [i, -i]]`.
pub fn to_v_coords_dense(rank: usize, u: &GroupAlgElement) -> Vec<Scalar> {
    let mut x = u.dense();
    let half = Rational::new(1, 2);
    let i = Scalar::i();
    for j in 0..rank {
        let bit = 1usize << j;
        for s in 0..x.len() {
            if s & bit != 0 {
                continue;
            }
            let (u0, u1) = (&x[s], &x[s | bit]);
            if u0.is_zero() && u1.is_zero() {
                continue;
            }
            let iu1 = &i * u1;
            let plus = (u0 - &iu1).scale(&half);
            let minus = (u0 + &iu1).scale(&half);
            x[s] = plus;
            x[s | bit] = minus;
        }
    }
    x
}

/// `u = Σ x_c v(c)`; zero coordinates are omitted.
pub fn to_v_coords(l: &RootLattice, u: &GroupAlgElement) -> BTreeMap<SignTuple, Scalar> {
    let n = l.rank();
    to_v_coords_dense(n, u)
        .into_iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(neg, x)| (SignTuple::new(n, neg as u32), x))
        .collect()
}

/// If `u` is a multiple of one v-basis vector over the nodes in `support`,
/// returns the multiple and the tuple (nodes outside `support` read as `+`).
pub fn as_single_v(rank: usize, u: &GroupAlgElement, support: u32) -> Option<(Scalar, SignTuple)> {
    let phase = u.coeff(CosetLabel(0));
    if phase.is_zero() {
        return None;
    }
    let inv = phase.inv()?;
    let mut neg = 0u32;
    for j in 0..rank {
        if support >> j & 1 == 0 {
            continue;
        }
        // coefficient of e^{α_j} is i c_j times the phase
        let cj = &(&u.coeff(CosetLabel(1 << j)) * &inv) * &(-Scalar::i());
        match cj.as_integer() {
            Some(1) => {}
            Some(-1) => neg |= 1 << j,
            _ => return None,
        }
    }
    let c = SignTuple::new(rank, neg);
    let candidate = partial_product(rank, c, support).scale(&phase);
    if &candidate == u {
        Some((phase, c))
    } else {
        None
    }
}

/// Renders `u` in v-coordinates, e.g. `(-i) v(+,-,+)`.
pub fn render_v(rank: usize, u: &GroupAlgElement) -> String {
    if u.is_zero() {
        return "0".into();
    }
    if let Some((p, c)) = as_single_v(rank, u, full_mask(rank)) {
        return format!("({p}) v{c}");
    }
    let x = to_v_coords_dense(rank, u);
    let parts: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(neg, s)| format!("({s}) v{}", SignTuple::new(rank, neg as u32)))
        .collect();
    parts.join(" + ")
}

/// An operator on C{Q/2Q} that maps every v-basis vector to a multiple of
/// a v-basis vector; column `c` holds `(target tuple mask, coefficient)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VMonomialOp {
    rank: usize,
    cols: Vec<(u32, Scalar)>,
}

impl VMonomialOp {
    pub fn identity(rank: usize) -> Self {
        VMonomialOp { rank, cols: (0..1u32 << rank).map(|c| (c, Scalar::one())).collect() }
    }

    /// `2X̂_α` on the v-basis, evaluated column by column through the
    /// defining formula on `e^γ`. Returns `None` if some column is not a
    /// single v-basis vector.
    pub fn xhat2_from_oracle(l: &RootLattice, alpha: &LatticeVector) -> Option<Self> {
        let n = l.rank();
        let a = alpha.parity_bits();
        let mut cols = Vec::with_capacity(1 << n);
        for c in SignTuple::all(n) {
            let w = xhat2_bits(l, a, &v_basis(l, c));
            let (p, t) = as_single_v(n, &w, full_mask(n))?;
            cols.push((t.neg, p));
        }
        Some(VMonomialOp { rank: n, cols })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Image of `v(c)`.
    pub fn image(&self, c: SignTuple) -> (SignTuple, &Scalar) {
        let (t, p) = &self.cols[c.neg as usize];
        (SignTuple::new(self.rank, *t), p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let cols = other
            .cols
            .iter()
            .map(|(t, p)| {
                let (t2, p2) = &self.cols[*t as usize];
                (*t2, p2 * p)
            })
            .collect();
        VMonomialOp { rank: self.rank, cols }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        VMonomialOp {
            rank: self.rank,
            cols: self.cols.iter().map(|(t, p)| (*t, p * s)).collect(),
        }
    }

    /// Flip mask of column `c` (target xor source).
    pub fn flip_of(&self, c: SignTuple) -> u32 {
        self.cols[c.neg as usize].0 ^ c.neg
    }
}

/// `2X̂_α` on the v-basis for every root α, in the order of `l.roots()`.
///
/// Simple roots come from the defining formula; the rest are assembled by
/// `2X̂_{α+β} = ν(α,β)(2X̂_α)(2X̂_β)` along a chain of simple-root additions,
/// using `X̂_{−α} = X̂_α` (X̂ depends on α only mod 2Q).
pub fn root_v_ops(l: &RootLattice) -> Vec<VMonomialOp> {
    let n = l.rank();
    let simple: Vec<VMonomialOp> = (0..n)
        .map(|j| VMonomialOp::xhat2_from_oracle(l, &l.simple(j)).expect("simple X̂ is monomial"))
        .collect();
    let mut by_root: BTreeMap<LatticeVector, VMonomialOp> = BTreeMap::new();
    let mut positive = l.positive_roots();
    positive.sort_by_key(|r| r.0.iter().sum::<i64>());
    for r in &positive {
        let op = if r.0.iter().sum::<i64>() == 1 {
            let j = r.0.iter().position(|&c| c == 1).expect("simple root");
            simple[j].clone()
        } else {
            // some r - α_j is a positive root
            let (j, prev) = (0..n)
                .find_map(|j| {
                    let p = r.sub(&l.simple(j));
                    (p.is_positive() && l.is_root(&p)).then_some((j, p))
                })
                .expect("root chain");
            let s = l.nu(&prev, &l.simple(j));
            by_root[&prev].compose(&simple[j]).scale(&Scalar::from_int(s as i64))
        };
        by_root.insert(r.clone(), op);
    }
    l.roots()
        .iter()
        .map(|r| {
            if r.is_positive() {
                by_root[r].clone()
            } else {
                by_root[&r.neg()].clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::AlgebraKind;

    #[test]
    fn v_basis_small_cases() {
        let l1 = RootLattice::new(AlgebraKind::a(1));
        let v = v_basis(&l1, SignTuple::from_signs(&[1]));
        assert_eq!(v.to_string(), "(1) e^0 + (i) e^1");
        let l2 = RootLattice::new(AlgebraKind::a(2));
        let v = v_basis(&l2, SignTuple::from_signs(&[1, -1]));
        assert_eq!(v.coeff(CosetLabel(0)), Scalar::one());
        assert_eq!(v.coeff(CosetLabel(1)), Scalar::i());
        assert_eq!(v.coeff(CosetLabel(2)), -Scalar::i());
        assert_eq!(v.coeff(CosetLabel(3)), Scalar::one());
    }

    #[test]
    fn v_coords_of_vacuum() {
        let l1 = RootLattice::new(AlgebraKind::a(1));
        let x = to_v_coords(&l1, &GroupAlgElement::basis(1, CosetLabel(0)));
        let half = Scalar::from_ratio(1, 2);
        assert_eq!(x.len(), 2);
        assert!(x.values().all(|v| *v == half));
        assert!(to_v_coords(&l1, &GroupAlgElement::zero(1)).is_empty());
    }

    #[test]
    fn v_coords_invert_basis() {
        for kind in [AlgebraKind::a(3), AlgebraKind::d(4), AlgebraKind::e(6)] {
            let l = RootLattice::new(kind);
            for c in SignTuple::all(l.rank()) {
                let x = to_v_coords(&l, &v_basis(&l, c));
                assert_eq!(x.len(), 1);
                assert_eq!(x[&c], Scalar::one());
            }
        }
    }

    #[test]
    fn xhat_on_vacuum() {
        let l = RootLattice::new(AlgebraKind::d(4));
        for a in l.roots() {
            let u = xhat_apply(&l, a, &GroupAlgElement::basis(4, CosetLabel(0)));
            assert_eq!(u.coeff(CosetLabel::of(a)), Scalar::from_ratio(1, 2));
        }
    }

    #[test]
    fn d4_alpha2_flips_neighbours() {
        let l = RootLattice::new(AlgebraKind::d(4));
        for c in SignTuple::all(4) {
            let w = xhat2_bits(&l, 0b0010, &v_basis(&l, c));
            let expect = v_basis(&l, c.flip(0b1101)).scale(&(-Scalar::i()).scale_int(c.c(1) as i64));
            assert_eq!(w, expect);
        }
    }

    #[test]
    fn square_of_doubled_xhat_is_minus_one() {
        let l = RootLattice::new(AlgebraKind::e(6));
        let u = v_basis(&l, SignTuple::new(6, 0b101001));
        for a in l.roots() {
            let b = a.parity_bits();
            let w = xhat2_bits(&l, b, &xhat2_bits(&l, b, &u));
            assert_eq!(w, u.scale(&Scalar::from_int(-1)));
        }
    }

    #[test]
    fn composed_ops_match_oracle() {
        for kind in [AlgebraKind::a(4), AlgebraKind::d(5), AlgebraKind::e(6)] {
            let l = RootLattice::new(kind);
            let ops = root_v_ops(&l);
            for (r, op) in l.roots().iter().zip(&ops) {
                let oracle = VMonomialOp::xhat2_from_oracle(&l, r).unwrap();
                assert_eq!(&oracle, op, "{kind} {}", l.root_name(r));
            }
        }
    }

    #[test]
    fn single_v_detection() {
        let l = RootLattice::new(AlgebraKind::a(3));
        let c = SignTuple::from_signs(&[1, -1, -1]);
        let u = v_basis(&l, c).scale(&Scalar::from_ratio(-3, 2));
        let (p, t) = as_single_v(3, &u, 0b111).unwrap();
        assert_eq!(p, Scalar::from_ratio(-3, 2));
        assert_eq!(t, c);
        let sum = v_basis(&l, c).add(&v_basis(&l, c.flip(1)));
        assert!(as_single_v(3, &sum, 0b111).is_none());
        assert!(render_v(3, &sum).contains(" + "));
    }
}

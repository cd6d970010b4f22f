//! The twisted Fock space, Heisenberg modes and modes of the vertex
//! operators `Γ_α(z)` acting on `V = C{Q/2Q} ⊗ Fock`.
//!
//! Generators are indexed by the simple-root vectors `h_j` instead of an
//! orthonormal basis `S_j`: the generator `(j, r)` stands for
//! `a_{-r}(h_j)·1 = Σ_i (h_j|S_i) r x^{(i)}_r`. Every formula only sees the
//! `S_j` through `Σ_i (λ|S_i)(μ|S_i) = (λ|μ)`, so the Gram matrix of the
//! generators is the Cartan matrix and all contractions are integers.
//!
//! Mode convention: `Γ_α(z) = Σ_m Γ_{α,m} z^{-m}` and
//! `a(h)(z) = Σ_{r odd} a_r(h) z^{-r-1}`. On a state of degree `d`,
//! `Γ_{α,m}` produces degree `d − m`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::groupalg::{CosetLabel, GroupAlgElement};
use crate::lattice::{LatticeVector, RootLattice};
use crate::scalar::{Rational, Scalar};

/// A creation generator packed as `r * 64 + j` (0-based `j`), so the
/// natural order is lexicographic on `(r, j)`.
pub type Gen = u16;

pub fn gen(j: usize, r: u32) -> Gen {
    debug_assert!(j < 64 && r % 2 == 1 && r < 1024);
    (r as u16) << 6 | j as u16
}

/// `(j, r)` with 0-based `j`.
pub fn gen_parts(g: Gen) -> (usize, u32) {
    ((g & 63) as usize, (g >> 6) as u32)
}

/// A multiset of creation generators, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial(SmallVec<[Gen; 16]>);

impl FockMonomial {
    pub fn one() -> Self {
        FockMonomial::default()
    }

    /// From `(j, r)` pairs with 0-based `j` and odd positive `r`.
    pub fn new(pairs: &[(usize, u32)]) -> Result<Self> {
        let mut g: SmallVec<[Gen; 16]> = SmallVec::new();
        for &(j, r) in pairs {
            if r % 2 == 0 || r >= 1024 || j >= 64 {
                return Err(Error::InvalidArgument(format!("bad generator ({j},{r})")));
            }
            g.push(gen(j, r));
        }
        g.sort_unstable();
        Ok(FockMonomial(g))
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&g| (g >> 6) as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if o.0.is_empty() {
            return self.clone();
        }
        if self.0.is_empty() {
            return o.clone();
        }
        let (a, b) = (&self.0, &o.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        FockMonomial(out)
    }

    pub fn with(&self, g: Gen) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&x| x <= g);
        v.insert(pos, g);
        FockMonomial(v)
    }

    /// `(generator, multiplicity)` runs.
    pub fn runs(&self) -> Vec<(Gen, u32)> {
        let mut out: Vec<(Gen, u32)> = Vec::new();
        for &g in &self.0 {
            match out.last_mut() {
                Some((h, n)) if *h == g => *n += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }

    fn from_runs(runs: &[(Gen, u32)]) -> Self {
        let mut v = SmallVec::new();
        for &(g, n) in runs {
            for _ in 0..n {
                v.push(g);
            }
        }
        FockMonomial(v)
    }
}

/// Renders as `[(1,1),(2,3)]` with 1-based generator index.
impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &g) in self.0.iter().enumerate() {
            let (j, r) = gen_parts(g);
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{r})", j + 1)?;
        }
        f.write_str("]")
    }
}

/// A finite combination of Fock monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    terms: FxHashMap<FockMonomial, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(FockMonomial::one(), Scalar::one())
    }

    pub fn monomial(m: FockMonomial, c: Scalar) -> Self {
        let mut v = Self::zero();
        v.add_term(m, &c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FockMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: FockMonomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, o: &FockVector, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), &(c * s));
        }
    }

    /// `self == s·o`, without building `s·o`.
    pub fn equals_scaled(&self, o: &FockVector, s: &Scalar) -> bool {
        if s.is_zero() {
            return self.is_zero();
        }
        self.terms.len() == o.terms.len()
            && self.terms.iter().all(|(m, c)| o.terms.get(m).is_some_and(|d| &(d * s) == c))
    }

    pub fn add(&self, o: &FockVector) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::one());
        out
    }

    pub fn sub(&self, o: &FockVector) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    /// Terms sorted by monomial.
    pub fn sorted(&self) -> Vec<(&FockMonomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(FockMonomial::degree).max()
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.sorted().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m} ({c})")?;
        }
        Ok(())
    }
}

/// An element of `V`, grouped by coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVector {
    rank: usize,
    parts: BTreeMap<u32, FockVector>,
}

impl StateVector {
    pub fn zero(rank: usize) -> Self {
        StateVector { rank, parts: BTreeMap::new() }
    }

    /// `e^γ ⊗ 1`.
    pub fn vacuum(rank: usize, g: CosetLabel) -> Self {
        Self::pure(rank, g, FockVector::vacuum())
    }

    /// `e^γ ⊗ f`.
    pub fn pure(rank: usize, g: CosetLabel, f: FockVector) -> Self {
        let mut s = Self::zero(rank);
        s.add_part(g, &f, &Scalar::one());
        s
    }

    /// `u ⊗ 1`.
    pub fn from_group_alg(u: &GroupAlgElement) -> Self {
        let mut s = Self::zero(u.rank());
        for (g, c) in u.terms() {
            s.add_part(g, &FockVector::vacuum(), c);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (CosetLabel, &FockVector)> {
        self.parts.iter().map(|(g, f)| (CosetLabel(*g), f))
    }

    pub fn part(&self, g: CosetLabel) -> Option<&FockVector> {
        self.parts.get(&g.0)
    }

    pub fn add_part(&mut self, g: CosetLabel, f: &FockVector, s: &Scalar) {
        let e = self.parts.entry(g.0).or_default();
        e.add_scaled(f, s);
        if e.is_zero() {
            self.parts.remove(&g.0);
        }
    }

    pub fn add_term(&mut self, g: CosetLabel, m: FockMonomial, c: &Scalar) {
        let e = self.parts.entry(g.0).or_default();
        e.add_term(m, c);
        if e.is_zero() {
            self.parts.remove(&g.0);
        }
    }

    pub fn add_scaled(&mut self, o: &StateVector, s: &Scalar) {
        for (g, f) in &o.parts {
            self.add_part(CosetLabel(*g), f, s);
        }
    }

    pub fn add(&self, o: &StateVector) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::one());
        out
    }

    pub fn sub(&self, o: &StateVector) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.rank);
        out.add_scaled(self, s);
        out
    }

    /// The degree-0 part as a group algebra element.
    pub fn lattice_part(&self) -> GroupAlgElement {
        let mut u = GroupAlgElement::zero(self.rank);
        for (g, f) in &self.parts {
            u.add_term(CosetLabel(*g), &f.coeff(&FockMonomial::one()));
        }
        u
    }

    pub fn terms(&self) -> Vec<(CosetLabel, &FockMonomial, &Scalar)> {
        let mut out = Vec::new();
        for (g, f) in &self.parts {
            for (m, c) in f.sorted() {
                out.push((CosetLabel(*g), m, c));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.parts.values().map(FockVector::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Renders as `(0110 | [(1,1)]) 1/2 + ...`.
impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (g, m, c)) in self.terms().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({} | {m}) {c}", g.render(self.rank))?;
        }
        Ok(())
    }
}

/// `L_0`: multiplies each term by its degree.
pub fn l0(s: &StateVector) -> StateVector {
    let mut out = StateVector::zero(s.rank);
    for (g, m, c) in s.terms() {
        out.add_term(g, m.clone(), &c.scale_int(m.degree() as i64));
    }
    out
}

type Poly = Rc<[(FockMonomial, Scalar)]>;

/// One way of contracting part of a monomial: what is left, the removed
/// degree on each side, and the weight.
struct Removal {
    rest: FockMonomial,
    qz: u32,
    qw: u32,
    weight: Scalar,
}

/// Rational coefficients `c` standing for `c · √2^{#generators}`.
#[derive(Clone, Debug, Default)]
struct Normalized(FxHashMap<FockMonomial, Rational>);

impl Normalized {
    fn add(&mut self, m: FockMonomial, c: Rational) {
        use std::collections::hash_map::Entry;
        match self.0.entry(m) {
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn absorb(&mut self, o: Normalized) {
        if self.0.is_empty() {
            *self = o;
            return;
        }
        for (m, c) in o.0 {
            self.add(m, c);
        }
    }

    /// Splits `f` as `Σ_u u · part_u` over the units `1, i, √2, i√2`.
    fn split(f: &FockVector) -> Vec<(Scalar, Normalized)> {
        let units = [Scalar::one(), Scalar::i(), Scalar::sqrt2(), Scalar::i_sqrt2()];
        let mut parts: Vec<Normalized> = vec![Normalized::default(); 4];
        for (m, c) in f.iter() {
            let g = m.gens().len() as i64;
            let x = c.coords();
            // c / √2^g, written back in the basis 1, i, √2, i√2
            let (vals, e) = if g % 2 == 0 {
                ([x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()], g / 2)
            } else {
                let two = Rational::from_int(2);
                ([&x[2] * &two, &x[3] * &two, x[0].clone(), x[1].clone()], (g + 1) / 2)
            };
            let d = Rational::new(1, 1i64 << e);
            for (k, v) in vals.iter().enumerate() {
                if !v.is_zero() {
                    parts[k].add(m.clone(), v * &d);
                }
            }
        }
        units.into_iter().zip(parts).filter(|(_, p)| !p.0.is_empty()).collect()
    }

    /// `slot += unit · self`, undoing the normalization.
    fn join_into(self, unit: &Scalar, slot: &mut FockVector) {
        let odd = unit * &Scalar::sqrt2();
        for (m, c) in self.0 {
            let g = m.gens().len() as i64;
            let base = if g % 2 == 0 { unit } else { &odd };
            let c = &c * &Rational::from_int(1i64 << (g / 2));
            slot.add_term(m, &base.scale(&c));
        }
    }

    /// The normalized creation step: the new generator `(j, r)` contributes `s · v_j`.
    fn raise_into(&self, v: &LatticeVector, r: u32, s: &Rational, out: &mut Normalized) {
        let colors: Vec<(usize, Rational)> =
            v.0.iter().enumerate().filter(|(_, x)| **x != 0).map(|(j, x)| (j, s * &Rational::from_int(*x))).collect();
        for (mono, c) in &self.0 {
            for (j, w) in &colors {
                out.add(mono.with(gen(*j, r)), c * w);
            }
        }
    }

    /// The normalized derivation step: removing one of `n` copies of
    /// `(j, r)` contributes `s · n r (v|h_j)`.
    fn lower_into(&self, pairs: &[i64], r: u32, s: &Rational, out: &mut Normalized) {
        for (mono, c) in &self.0 {
            let gens = mono.gens();
            let mut i = 0;
            while i < gens.len() {
                let g = gens[i];
                let mut n = 1;
                while i + n < gens.len() && gens[i + n] == g {
                    n += 1;
                }
                let (j, gr) = gen_parts(g);
                if gr == r && pairs[j] != 0 {
                    let mut rest = mono.0.clone();
                    rest.remove(i);
                    out.add(FockMonomial(rest), &(c * s) * &Rational::from_int(n as i64 * r as i64 * pairs[j]));
                }
                i += n;
            }
        }
    }
}

/// Mode computations on `V` for one lattice. Caches creation polynomials.
pub struct FockSpace<'a> {
    lattice: &'a RootLattice,
    creation: RefCell<FxHashMap<(LatticeVector, u32), Poly>>,
    sqrt2: Vec<Scalar>,
}

impl<'a> FockSpace<'a> {
    pub fn new(lattice: &'a RootLattice) -> Self {
        let mut sqrt2 = vec![Scalar::one()];
        for k in 1..64 {
            let next = &sqrt2[k - 1] * &Scalar::sqrt2();
            sqrt2.push(next);
        }
        FockSpace { lattice, creation: RefCell::new(FxHashMap::default()), sqrt2 }
    }

    pub fn lattice(&self) -> &RootLattice {
        self.lattice
    }

    fn rank(&self) -> usize {
        self.lattice.rank()
    }

    fn sqrt2_pow(&self, k: u32) -> Scalar {
        match self.sqrt2.get(k as usize) {
            Some(s) => s.clone(),
            None => Scalar::sqrt2().pow(k),
        }
    }

    /// Degree-`p` part of `exp(Σ_{r odd} √2 a_{-r}(v) z^r / r)` applied to 1.
    pub fn creation(&self, v: &LatticeVector, p: u32) -> Poly {
        let key = (v.clone(), p);
        if let Some(c) = self.creation.borrow().get(&key) {
            return c.clone();
        }
        let colors: Vec<usize> = (0..v.rank()).filter(|&j| v.0[j] != 0).collect();
        let mut gens: Vec<(Gen, u32, i64)> = Vec::new();
        let mut r = 1;
        while r <= p {
            for &j in &colors {
                gens.push((gen(j, r), r, v.0[j]));
            }
            r += 2;
        }
        let mut out: Vec<(FockMonomial, Scalar)> = Vec::new();
        let mut runs: Vec<(Gen, u32)> = Vec::new();
        creation_rec(&gens, 0, p, &mut runs, Rational::one(), 0, &mut out, self);
        let poly: Poly = out.into();
        self.creation.borrow_mut().insert(key, poly.clone());
        poly
    }

    /// Contractions of `m` against `exp(−√2 Σ a_r(v) z^{-r}/r)`, and
    /// optionally a second operator in `w` with vector `v2`.
    fn removals(&self, m: &FockMonomial, v: &LatticeVector, v2: Option<&LatticeVector>) -> Vec<Removal> {
        let runs = m.runs();
        let pz: Vec<i64> = runs.iter().map(|(g, _)| self.pair_with(v, gen_parts(*g).0)).collect();
        let pw: Vec<i64> = match v2 {
            Some(v2) => runs.iter().map(|(g, _)| self.pair_with(v2, gen_parts(*g).0)).collect(),
            None => vec![0; runs.len()],
        };
        let mut out = Vec::new();
        let mut left: Vec<(Gen, u32)> = runs.clone();
        removal_rec(&runs, &pz, &pw, 0, &mut left, 0, 0, 1, 0, &mut out, self);
        out
    }

    fn pair_with(&self, v: &LatticeVector, j: usize) -> i64 {
        self.lattice.cartan()[j].iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    /// Coefficient of `z^{-m}` in `U_{√2 v}(z) f`, at the Fock level.
    pub fn u_mode(&self, v: &LatticeVector, m: i64, f: &FockVector) -> FockVector {
        self.u_modes(v, m, m, f).pop().expect("one mode")
    }

    /// `u_mode` by expanding both exponentials into monomials and
    /// contracting term by term. Slow; kept as an independent evaluation.
    pub fn u_mode_expanded(&self, v: &LatticeVector, m: i64, f: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (mono, c) in f.iter() {
            if (mono.degree() as i64) < m {
                continue;
            }
            for rem in self.removals(mono, v, None) {
                let p = rem.qz as i64 - m;
                if p < 0 {
                    continue;
                }
                let cw = c * &rem.weight;
                for (cm, cc) in self.creation(v, p as u32).iter() {
                    out.add_term(rem.rest.mul(cm), &(&cw * cc));
                }
            }
        }
        out
    }

    /// `u_mode` for every `m` in `lo..=hi`.
    ///
    /// With `U(z) = exp(L(z)) exp(M(z))`, `zL' = √2 Σ a_{-r}(v) z^r` and
    /// `zM' = −√2 Σ a_r(v) z^{-r}`, the `z^{-q}` part `A_q` of `exp(M) f` and
    /// the `z^p` part `E_p` of `exp(L) A_q` obey
    /// `q A_q = −√2 Σ_r a_r(v) A_{q−r}` and `p E_p = √2 Σ_r a_{-r}(v) E_{p−r}`,
    /// so neither exponential is ever expanded. Each step adds or removes
    /// one generator together with one factor `√2`, so the recursion runs on
    /// rational coefficients of `√2^{#generators}` ([`Normalized`]).
    pub fn u_modes(&self, v: &LatticeVector, lo: i64, hi: i64, f: &FockVector) -> Vec<FockVector> {
        let mut out = vec![FockVector::zero(); (hi - lo + 1).max(0) as usize];
        if f.is_zero() || hi < lo {
            return out;
        }
        let pairs: Vec<i64> = (0..self.rank()).map(|j| self.pair_with(v, j)).collect();
        for (unit, part) in Normalized::split(f) {
            let modes = self.u_modes_normalized(v, &pairs, lo, hi, part);
            for (slot, n) in out.iter_mut().zip(modes) {
                n.join_into(&unit, slot);
            }
        }
        out
    }

    fn u_modes_normalized(&self, v: &LatticeVector, pairs: &[i64], lo: i64, hi: i64, f: Normalized) -> Vec<Normalized> {
        let mut out = vec![Normalized::default(); (hi - lo + 1) as usize];
        let maxq = f.0.keys().map(FockMonomial::degree).max().unwrap_or(0) as usize;
        let mut ann: Vec<Normalized> = vec![f];
        for q in 1..=maxq {
            let mut a = Normalized::default();
            let s = Rational::new(-2, q as i64);
            for r in (1..=q).step_by(2) {
                ann[q - r].lower_into(pairs, r as u32, &s, &mut a);
            }
            ann.push(a);
        }
        for (q, a) in ann.into_iter().enumerate() {
            let q = q as i64;
            if a.0.is_empty() || q < lo {
                continue;
            }
            let top = (q - lo) as usize;
            let mut cre: Vec<Normalized> = vec![a];
            for p in 1..=top {
                let mut e = Normalized::default();
                let s = Rational::new(1, p as i64);
                for r in (1..=p).step_by(2) {
                    cre[p - r].raise_into(v, r as u32, &s, &mut e);
                }
                cre.push(e);
            }
            for m in lo..=hi.min(q) {
                let e = std::mem::take(&mut cre[(q - m) as usize]);
                out[(m - lo) as usize].absorb(e);
            }
        }
        out
    }

    /// Coefficient of `z^{-m} w^{-k}` in `U_{√2 a; √2 b}(z, w) f`.
    pub fn u_pair(&self, a: &LatticeVector, b: &LatticeVector, m: i64, k: i64, f: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (mono, c) in f.iter() {
            for rem in self.removals(mono, a, Some(b)) {
                let p = rem.qz as i64 - m;
                let p2 = rem.qw as i64 - k;
                if p < 0 || p2 < 0 {
                    continue;
                }
                let cw = c * &rem.weight;
                let cz = self.creation(a, p as u32);
                let cwp = self.creation(b, p2 as u32);
                for (m1, c1) in cz.iter() {
                    let c1w = &cw * c1;
                    for (m2, c2) in cwp.iter() {
                        out.add_term(rem.rest.mul(m1).mul(m2), &(&c1w * c2));
                    }
                }
            }
        }
        out
    }

    /// `a_r(h)` at the Fock level; `r` must be odd.
    pub fn a_mode_fock(&self, h: &LatticeVector, r: i64, f: &FockVector) -> Result<FockVector> {
        if r.rem_euclid(2) == 0 {
            return Err(Error::InvalidArgument(format!("Heisenberg mode {r} is not odd")));
        }
        let mut out = FockVector::zero();
        if r < 0 {
            let rr = (-r) as u32;
            for (mono, c) in f.iter() {
                for j in 0..self.rank() {
                    if h.0[j] != 0 {
                        out.add_term(mono.with(gen(j, rr)), &c.scale_int(h.0[j]));
                    }
                }
            }
        } else {
            let rr = r as u32;
            for (mono, c) in f.iter() {
                for (g, n) in mono.runs() {
                    let (j, gr) = gen_parts(g);
                    if gr != rr {
                        continue;
                    }
                    let pair = self.pair_with(h, j);
                    if pair == 0 {
                        continue;
                    }
                    let mut rest = mono.0.clone();
                    let pos = rest.iter().position(|&x| x == g).expect("present");
                    rest.remove(pos);
                    out.add_term(FockMonomial(rest), &c.scale_int(n as i64 * r * pair));
                }
            }
        }
        Ok(out)
    }

    /// `a_r(h)` on `V`.
    pub fn a_mode(&self, h: &LatticeVector, r: i64, s: &StateVector) -> Result<StateVector> {
        let mut out = StateVector::zero(s.rank);
        for (g, f) in s.parts() {
            out.add_part(g, &self.a_mode_fock(h, r, f)?, &Scalar::one());
        }
        Ok(out)
    }

    /// `Γ_{α,m}` on `V`.
    pub fn gamma_mode(&self, alpha: &LatticeVector, m: i64, s: &StateVector) -> Result<StateVector> {
        self.lattice.require_root(alpha)?;
        Ok(self.gamma_mode_unchecked(alpha, m, s))
    }

    pub(crate) fn gamma_mode_unchecked(&self, alpha: &LatticeVector, m: i64, s: &StateVector) -> StateVector {
        let a = alpha.parity_bits();
        let mut out = StateVector::zero(s.rank);
        for (g, f) in s.parts() {
            let u = self.u_mode(alpha, m, f);
            let sign = self.lattice.nu_bits(a, g.0) as i64;
            out.add_part(CosetLabel(a ^ g.0), &u, &Scalar::from_ratio(sign, 2));
        }
        out
    }

    /// Coefficient of `z^{-m} w^{-k}` of
    /// `¼ ν(α,β) ν(α+β,·) e^{α+β} ⊗ U_{√2α; √2β}(z, w)` on `V`.
    pub fn u_pair_mode(
        &self,
        alpha: &LatticeVector,
        beta: &LatticeVector,
        m: i64,
        k: i64,
        s: &StateVector,
    ) -> Result<StateVector> {
        self.lattice.require_root(alpha)?;
        self.lattice.require_root(beta)?;
        let ab = alpha.add(beta);
        let bits = ab.parity_bits();
        let nab = self.lattice.nu(alpha, beta) as i64;
        let mut out = StateVector::zero(s.rank);
        for (g, f) in s.parts() {
            let u = self.u_pair(alpha, beta, m, k, f);
            let sign = nab * self.lattice.nu_bits(bits, g.0) as i64;
            out.add_part(CosetLabel(bits ^ g.0), &u, &Scalar::from_ratio(sign, 4));
        }
        Ok(out)
    }
}

#[allow(clippy::too_many_arguments)]
fn creation_rec(
    gens: &[(Gen, u32, i64)],
    idx: usize,
    left: u32,
    runs: &mut Vec<(Gen, u32)>,
    coeff: Rational,
    count: u32,
    out: &mut Vec<(FockMonomial, Scalar)>,
    fs: &FockSpace,
) {
    if left == 0 {
        out.push((FockMonomial::from_runs(runs), fs.sqrt2_pow(count).scale(&coeff)));
        return;
    }
    if idx == gens.len() {
        return;
    }
    let (g, r, vj) = gens[idx];
    // multiplicity n of this generator: (vj / r)^n / n!
    let step = Rational::new(vj, r as i64);
    let mut c = coeff.clone();
    let mut n = 0u32;
    loop {
        if n > 0 {
            runs.push((g, n));
        }
        creation_rec(gens, idx + 1, left - n * r, runs, c.clone(), count + n, out, fs);
        if n > 0 {
            runs.pop();
        }
        if (n + 1) * r > left {
            break;
        }
        n += 1;
        c = &(&c * &step) * &Rational::new(1, n as i64);
    }
}

#[allow(clippy::too_many_arguments)]
fn removal_rec(
    runs: &[(Gen, u32)],
    pz: &[i64],
    pw: &[i64],
    idx: usize,
    left: &mut Vec<(Gen, u32)>,
    qz: u32,
    qw: u32,
    weight: i64,
    count: u32,
    out: &mut Vec<Removal>,
    fs: &FockSpace,
) {
    if idx == runs.len() {
        let rest: Vec<(Gen, u32)> = left.iter().copied().filter(|x| x.1 > 0).collect();
        out.push(Removal {
            rest: FockMonomial::from_runs(&rest),
            qz,
            qw,
            weight: fs.sqrt2_pow(count).scale_int(weight),
        });
        return;
    }
    let (g, n) = runs[idx];
    let r = gen_parts(g).1;
    // each removed copy carries −√2 (v|h_j); s via z, t via w, multinomial count
    let (a, b) = (-pz[idx], -pw[idx]);
    for s in 0..=n {
        if s > 0 && a == 0 {
            break;
        }
        for t in 0..=n - s {
            if t > 0 && b == 0 {
                break;
            }
            let mult = multinomial(n, s, t);
            let w = weight * mult * a.pow(s) * b.pow(t);
            left[idx].1 = n - s - t;
            removal_rec(runs, pz, pw, idx + 1, left, qz + s * r, qw + t * r, w, count + s + t, out, fs);
        }
    }
    left[idx].1 = n;
}

fn multinomial(n: u32, s: u32, t: u32) -> i64 {
    let f = |k: u32| (1..=k as i64).product::<i64>();
    f(n) / (f(s) * f(t) * f(n - s - t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::AlgebraKind;

    fn mono(p: &[(usize, u32)]) -> FockMonomial {
        FockMonomial::new(p).unwrap()
    }

    #[test]
    fn monomial_order_and_degree() {
        let m = mono(&[(1, 3), (0, 1), (1, 1)]);
        assert_eq!(m.to_string(), "[(1,1),(2,1),(2,3)]");
        assert_eq!(m.degree(), 5);
        assert!(FockMonomial::new(&[(0, 2)]).is_err());
    }

    #[test]
    fn annihilators_kill_vacuum() {
        let l = RootLattice::new(AlgebraKind::d(4));
        let fs = FockSpace::new(&l);
        let s = StateVector::vacuum(4, CosetLabel(5));
        for r in [1, 3, 5] {
            assert!(fs.a_mode(&l.simple(0), r, &s).unwrap().is_zero());
        }
        assert!(fs.a_mode(&l.simple(0), 2, &s).is_err());
        let c = fs.a_mode(&l.simple(0), -3, &StateVector::vacuum(4, CosetLabel(0))).unwrap();
        assert_eq!(c, StateVector::pure(4, CosetLabel(0), FockVector::monomial(mono(&[(0, 3)]), Scalar::one())));
    }

    #[test]
    fn oscillator_relation() {
        let l = RootLattice::new(AlgebraKind::d(4));
        let fs = FockSpace::new(&l);
        let s = StateVector::pure(4, CosetLabel(3), FockVector::monomial(mono(&[(0, 1), (1, 1), (3, 3)]), Scalar::one()));
        for j in 0..4 {
            for k in 0..4 {
                let (hj, hk) = (l.simple(j), l.simple(k));
                let ab = fs.a_mode(&hj, 1, &fs.a_mode(&hk, -1, &s).unwrap()).unwrap();
                let ba = fs.a_mode(&hk, -1, &fs.a_mode(&hj, 1, &s).unwrap()).unwrap();
                assert_eq!(ab.sub(&ba), s.scale(&Scalar::from_int(l.cartan()[j][k])));
            }
        }
    }

    #[test]
    fn l0_degrees() {
        let s = StateVector::pure(2, CosetLabel(1), FockVector::monomial(mono(&[(0, 1), (1, 3)]), Scalar::one()));
        assert_eq!(l0(&s), s.scale(&Scalar::from_int(4)));
        assert!(l0(&StateVector::vacuum(2, CosetLabel(0))).is_zero());
    }

    #[test]
    fn gamma_on_vacuum() {
        let l = RootLattice::new(AlgebraKind::a(2));
        let fs = FockSpace::new(&l);
        for a in l.roots() {
            for g in 0..4 {
                let s = StateVector::vacuum(2, CosetLabel(g));
                for m in 1..4 {
                    assert!(fs.gamma_mode(a, m, &s).unwrap().is_zero());
                }
                let z = fs.gamma_mode(a, 0, &s).unwrap();
                let x = crate::groupalg::xhat_apply(&l, a, &GroupAlgElement::basis(2, CosetLabel(g)));
                assert_eq!(z, StateVector::from_group_alg(&x));
            }
        }
    }

    #[test]
    fn a1_first_modes() {
        // U_{√2α}: creation of degree 1 is √2 a_{-1}(α); Γ_{α,-1}(1) = ½ e^α √2 (1,1)
        let l = RootLattice::new(AlgebraKind::a(1));
        let fs = FockSpace::new(&l);
        let a = l.simple(0);
        let s = StateVector::vacuum(1, CosetLabel(0));
        let out = fs.gamma_mode(&a, -1, &s).unwrap();
        let expect = StateVector::pure(
            1,
            CosetLabel(1),
            FockVector::monomial(mono(&[(0, 1)]), Scalar::sqrt2().scale(&Rational::new(1, 2))),
        );
        assert_eq!(out, expect);
    }

    #[test]
    fn creation_counts() {
        let l = RootLattice::new(AlgebraKind::a(1));
        let fs = FockSpace::new(&l);
        // odd partitions of 7: 7, 5+1+1, 3+3+1, 3+1*4, 1*7 and 5+... = 5
        assert_eq!(fs.creation(&l.simple(0), 7).len(), 5);
        assert_eq!(fs.creation(&l.simple(0), 0).len(), 1);
    }

    #[test]
    fn recursive_modes_match_expansion() {
        for name in ["A3", "D4", "E6"] {
            let l = RootLattice::parse(name).unwrap();
            let fs = FockSpace::new(&l);
            let n = l.rank();
            let mut f = FockVector::monomial(mono(&[(0, 1), (n - 1, 3)]), Scalar::one());
            f.add_term(mono(&[(1, 1), (1, 1), (2, 1)]), &Scalar::from_ratio(-2, 3));
            f.add_term(FockMonomial::one(), &Scalar::sqrt2());
            let roots = l.positive_roots();
            for v in [roots[0].clone(), roots[roots.len() / 2].clone(), l.highest_root(), l.highest_root().neg()] {
                let all = fs.u_modes(&v, -4, 5, &f);
                for (i, m) in (-4..=5).enumerate() {
                    assert_eq!(all[i], fs.u_mode_expanded(&v, m, &f), "{name} {v:?} m={m}");
                }
            }
        }
    }
}

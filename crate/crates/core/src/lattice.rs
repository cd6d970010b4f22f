//! Simply-laced root lattices, oriented Dynkin diagrams and the asymmetry
//! function ν.
//!
//! Nodes are indexed from 0 in code; node `j` is the simple root α_{j+1}.
//! Orientation files and rendered labels use 1-based indices.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Series {
    A,
    D,
    E,
}

/// A simply-laced Dynkin type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AlgebraKind {
    pub series: Series,
    pub rank: usize,
}

/// Largest supported rank; coset labels are stored as bit masks in a `u32`.
pub const MAX_RANK: usize = 24;

impl AlgebraKind {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
        };
        if !ok || rank > MAX_RANK {
            return Err(Error::UnsupportedAlgebra(format!("{series:?}{rank}")));
        }
        Ok(AlgebraKind { series, rank })
    }

    pub fn a(n: usize) -> Self {
        Self::new(Series::A, n).expect("valid A rank")
    }

    pub fn d(n: usize) -> Self {
        Self::new(Series::D, n).expect("valid D rank")
    }

    pub fn e(n: usize) -> Self {
        Self::new(Series::E, n).expect("valid E rank")
    }

    /// Undirected edges `(j, k)` with `j < k`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        let mut e = Vec::new();
        match self.series {
            Series::A => e.extend((0..n.saturating_sub(1)).map(|j| (j, j + 1))),
            Series::D => {
                e.extend((0..n - 2).map(|j| (j, j + 1)));
                e.push((n - 3, n - 1));
            }
            Series::E => {
                e.extend((0..n - 2).map(|j| (j, j + 1)));
                let fork = if n == 8 { 4 } else { 2 };
                e.push((fork, n - 1));
            }
        }
        e
    }

    /// The pictured orientation: a list of arrows `(from, to)`.
    fn default_arrows(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        // 1-based source predicate
        let is_source = |j1: usize| -> bool {
            match self.series {
                Series::A => j1 % 2 == 1,
                Series::D if n.is_multiple_of(2) => j1 % 2 == 1 || j1 == n,
                Series::D => j1 % 2 == 1 && j1 <= n - 2,
                Series::E => j1.is_multiple_of(2) || j1 == n,
            }
        };
        self.edges()
            .into_iter()
            .map(|(j, k)| if is_source(j + 1) { (j, k) } else { (k, j) })
            .collect()
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.series, self.rank)
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedAlgebra(s.to_string());
        let mut chars = s.chars();
        let series = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Series::A,
            Some('D') => Series::D,
            Some('E') => Series::E,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        Self::new(series, rank)
    }
}

/// An element of the root lattice in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![0; n])
    }

    pub fn simple(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        LatticeVector(v)
    }

    /// Sum of the simple roots with the given indices (with repetition).
    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = vec![0; n];
        for j in idx {
            v[j] += 1;
        }
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Coefficients mod 2 as a bit mask (bit `j` is node `j`).
    pub fn parity_bits(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rem_euclid(2) == 1)
            .fold(0, |m, (j, _)| m | (1 << j))
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.0.iter().all(|&c| c >= 0)
    }
}

/// Compact coefficient string, e.g. `(1,2,1,1)`.
impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A direction for every edge of a Dynkin diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// arrows `(from, to)`, 0-based
    arrows: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn from_arrows(kind: &AlgebraKind, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let edges: BTreeSet<(usize, usize)> = kind.edges().into_iter().collect();
        let mut seen = BTreeSet::new();
        for &(a, b) in &arrows {
            let e = (a.min(b), a.max(b));
            if !edges.contains(&e) {
                return Err(Error::InvalidOrientation(format!(
                    "{} -> {} is not an edge of {kind}",
                    a + 1,
                    b + 1
                )));
            }
            if !seen.insert(e) {
                return Err(Error::InvalidOrientation(format!(
                    "edge {{{}, {}}} directed twice",
                    e.0 + 1,
                    e.1 + 1
                )));
            }
        }
        if let Some(e) = edges.difference(&seen).next() {
            return Err(Error::InvalidOrientation(format!(
                "edge {{{}, {}}} has no direction",
                e.0 + 1,
                e.1 + 1
            )));
        }
        Ok(Orientation { arrows })
    }

    pub fn default_for(kind: &AlgebraKind) -> Self {
        Orientation { arrows: kind.default_arrows() }
    }

    /// Parses lines `j k` (1-based, arrow α_j → α_k); `#` starts a comment.
    pub fn parse(kind: &AlgebraKind, text: &str) -> Result<Self> {
        let mut arrows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| {
                    Error::InvalidOrientation(format!("line {}: bad index {s:?}", lineno + 1))
                })?;
                if v == 0 || v > kind.rank {
                    return Err(Error::InvalidOrientation(format!(
                        "line {}: index {v} out of range 1..={}",
                        lineno + 1,
                        kind.rank
                    )));
                }
                Ok(v - 1)
            };
            if nums.len() != 2 {
                return Err(Error::InvalidOrientation(format!(
                    "line {}: expected two indices",
                    lineno + 1
                )));
            }
            arrows.push((parse(nums[0])?, parse(nums[1])?));
        }
        Self::from_arrows(kind, arrows)
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn has_arrow(&self, from: usize, to: usize) -> bool {
        self.arrows.contains(&(from, to))
    }
}

/// A root lattice with a fixed orientation and its root system.
#[derive(Clone, Debug)]
pub struct RootLattice {
    kind: AlgebraKind,
    cartan: Vec<Vec<i64>>,
    orientation: Orientation,
    nu_table: Vec<Vec<i8>>,
    /// bit `k` of `nu_neg[j]` is set iff `nu_table[j][k] == -1`
    nu_neg: Vec<u32>,
    roots: Vec<LatticeVector>,
    root_set: HashSet<LatticeVector>,
}

impl RootLattice {
    /// Builds the lattice with the pictured orientation.
    pub fn new(kind: AlgebraKind) -> Self {
        Self::with_orientation(kind, Orientation::default_for(&kind))
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(Self::new(name.parse()?))
    }

    pub fn with_orientation(kind: AlgebraKind, orientation: Orientation) -> Self {
        let n = kind.rank;
        let mut cartan = vec![vec![0i64; n]; n];
        for (j, row) in cartan.iter_mut().enumerate() {
            row[j] = 2;
        }
        for (j, k) in kind.edges() {
            cartan[j][k] = -1;
            cartan[k][j] = -1;
        }
        let mut nu_table = vec![vec![1i8; n]; n];
        for (j, row) in nu_table.iter_mut().enumerate() {
            row[j] = -1;
        }
        for &(from, to) in orientation.arrows() {
            nu_table[from][to] = 1;
            nu_table[to][from] = -1;
        }
        let nu_neg = nu_table
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &s)| s < 0)
                    .fold(0u32, |m, (k, _)| m | (1 << k))
            })
            .collect();
        let mut lat = RootLattice {
            kind,
            cartan,
            orientation,
            nu_table,
            nu_neg,
            roots: Vec::new(),
            root_set: HashSet::new(),
        };
        lat.roots = lat.reflection_closure();
        lat.root_set = lat.roots.iter().cloned().collect();
        lat
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn nu_table(&self) -> &[Vec<i8>] {
        &self.nu_table
    }

    pub fn simple(&self, j: usize) -> LatticeVector {
        LatticeVector::simple(self.rank(), j)
    }

    pub fn inner(&self, a: &LatticeVector, b: &LatticeVector) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for j in 0..n {
            if a.0[j] == 0 {
                continue;
            }
            let mut t = 0;
            for k in 0..n {
                t += self.cartan[j][k] * b.0[k];
            }
            s += a.0[j] * t;
        }
        s
    }

    /// `(α | α_j)` for every node `j`.
    pub fn pairings(&self, a: &LatticeVector) -> Vec<i64> {
        (0..self.rank())
            .map(|j| (0..self.rank()).map(|k| a.0[k] * self.cartan[k][j]).sum())
            .collect()
    }

    /// ν on coset bit masks.
    pub fn nu_bits(&self, a: u32, b: u32) -> i8 {
        let mut parity = 0u32;
        let mut rest = a;
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            parity ^= (self.nu_neg[j] & b).count_ones();
        }
        if parity & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// The asymmetry function, extended bimultiplicatively from the table.
    pub fn nu(&self, a: &LatticeVector, b: &LatticeVector) -> i8 {
        self.nu_bits(a.parity_bits(), b.parity_bits())
    }

    /// All roots, sorted.
    pub fn roots(&self) -> &[LatticeVector] {
        &self.roots
    }

    pub fn positive_roots(&self) -> Vec<LatticeVector> {
        self.roots.iter().filter(|r| r.is_positive()).cloned().collect()
    }

    pub fn is_root(&self, v: &LatticeVector) -> bool {
        self.root_set.contains(v)
    }

    pub fn require_root(&self, v: &LatticeVector) -> Result<()> {
        if v.rank() != self.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: v.rank() });
        }
        if self.is_root(v) {
            Ok(())
        } else {
            Err(Error::NotARoot(v.to_string()))
        }
    }

    /// The highest root (the unique root of maximal height).
    pub fn highest_root(&self) -> LatticeVector {
        self.roots
            .iter()
            .max_by_key(|r| r.0.iter().sum::<i64>())
            .expect("nonempty root system")
            .clone()
    }

    fn reflect(&self, v: &LatticeVector, j: usize) -> LatticeVector {
        let p: i64 = (0..self.rank()).map(|k| v.0[k] * self.cartan[k][j]).sum();
        let mut out = v.clone();
        out.0[j] -= p;
        out
    }

    /// Closure of the simple roots under simple reflections.
    fn reflection_closure(&self) -> Vec<LatticeVector> {
        let n = self.rank();
        let mut seen: HashSet<LatticeVector> = HashSet::new();
        let mut queue: VecDeque<LatticeVector> = VecDeque::new();
        for j in 0..n {
            let s = self.simple(j);
            seen.insert(s.clone());
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for j in 0..n {
                let w = self.reflect(&v, j);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        let mut roots: Vec<_> = seen.into_iter().collect();
        roots.sort();
        roots
    }

    /// Sets of nodes `k != j` with an arrow `k -> j`, as a bit mask.
    pub fn flip_set(&self, j: usize) -> u32 {
        self.orientation
            .arrows()
            .iter()
            .filter(|&&(_, to)| to == j)
            .fold(0, |m, &(from, _)| m | (1 << from))
    }

    /// ε_j ± ε_k in simple-root coordinates for D_n (0-based `j < k`).
    pub fn epsilon_root(&self, j: usize, k: usize, plus: bool) -> Result<LatticeVector> {
        let n = self.rank();
        if self.kind.series != Series::D {
            return Err(Error::UnsupportedAlgebra(format!("epsilon coordinates on {}", self.kind)));
        }
        if !(j < k && k < n) {
            return Err(Error::InvalidArgument(format!(
                "epsilon indices need 1 <= j < k <= {n}, got {} {}",
                j + 1,
                k + 1
            )));
        }
        // twice ε_l in simple-root coordinates
        let twice_eps = |l: usize| -> Vec<i64> {
            let mut v = vec![0i64; n];
            v[n - 1] += 1;
            v[n - 2] -= 1;
            for t in l..n - 1 {
                v[t] += 2;
            }
            v
        };
        let (a, b) = (twice_eps(j), twice_eps(k));
        let sum: Vec<i64> =
            a.iter().zip(&b).map(|(x, y)| if plus { x + y } else { x - y }).collect();
        debug_assert!(sum.iter().all(|c| c % 2 == 0));
        Ok(LatticeVector(sum.into_iter().map(|c| c / 2).collect()))
    }

    /// Renders a lattice vector as a sum of simple roots, e.g. `a1+2a2+a3`.
    pub fn root_name(&self, v: &LatticeVector) -> String {
        let mut s = String::new();
        for (j, &c) in v.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if c < 0 {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            if c.abs() != 1 {
                s.push_str(&c.abs().to_string());
            }
            s.push_str(&format!("a{}", j + 1));
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Outcome of checking the asymmetry axioms on a lattice.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub algebra: String,
    pub vectors: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `ν(α,α) = (−1)^{(α|α)/2}` and `ν(α,β) = (−1)^{(α|β)} ν(β,α)` over
/// the roots together with all sums of two simple roots, bimultiplicativity
/// over all triples of simple roots and roots, and coset independence.
pub fn verify_asymmetry_axioms(l: &RootLattice) -> AxiomReport {
    let n = l.rank();
    let mut set: Vec<LatticeVector> = l.roots().to_vec();
    for j in 0..n {
        for k in j..n {
            set.push(l.simple(j).add(&l.simple(k)));
        }
    }
    set.sort();
    set.dedup();
    let sign = |e: i64| if e.rem_euclid(2) == 0 { 1i8 } else { -1 };
    let mut failures = Vec::new();
    let mut pairs = 0;
    for a in &set {
        let aa = l.inner(a, a);
        if l.nu(a, a) != sign(aa / 2) {
            failures.push(format!("nu({0},{0}) != (-1)^((a|a)/2)", l.root_name(a)));
        }
        for b in &set {
            pairs += 1;
            if l.nu(a, b) != sign(l.inner(a, b)) * l.nu(b, a) {
                failures.push(format!(
                    "nu({},{}) != (-1)^(a|b) nu(b,a)",
                    l.root_name(a),
                    l.root_name(b)
                ));
            }
        }
    }
    let mut triples = 0;
    for j in 0..n {
        let s = l.simple(j);
        for a in l.roots() {
            for b in l.roots() {
                triples += 1;
                let left = l.nu(&s.add(a), b);
                let right = l.nu(&s, b) * l.nu(a, b);
                let left2 = l.nu(b, &s.add(a));
                let right2 = l.nu(b, &s) * l.nu(b, a);
                if left != right || left2 != right2 {
                    failures.push(format!(
                        "bimultiplicativity fails at {}, {}, {}",
                        l.root_name(&s),
                        l.root_name(a),
                        l.root_name(b)
                    ));
                }
                let shifted = a.add(&s.scale(2));
                if l.nu(&shifted, b) != l.nu(a, b) {
                    failures.push(format!("nu depends on representative of {}", l.root_name(a)));
                }
            }
        }
    }
    AxiomReport {
        algebra: l.kind().to_string(),
        vectors: set.len(),
        pairs_checked: pairs,
        triples_checked: triples,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every integer vector with coefficients bounded by the highest root
    /// and norm 2, found by exhaustive search.
    fn brute_force_roots(l: &RootLattice) -> Vec<LatticeVector> {
        let hi = l.highest_root();
        let n = l.rank();
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        fn rec(
            l: &RootLattice,
            hi: &LatticeVector,
            j: usize,
            cur: &mut Vec<i64>,
            out: &mut Vec<LatticeVector>,
        ) {
            if j == cur.len() {
                let v = LatticeVector(cur.clone());
                if l.inner(&v, &v) == 2 {
                    out.push(v);
                }
                return;
            }
            for c in -hi.0[j]..=hi.0[j] {
                cur[j] = c;
                rec(l, hi, j + 1, cur, out);
            }
        }
        rec(l, &hi, 0, &mut cur, &mut out);
        out.sort();
        out
    }

    #[test]
    fn root_counts_match_brute_force() {
        for kind in [
            AlgebraKind::a(1),
            AlgebraKind::a(2),
            AlgebraKind::a(4),
            AlgebraKind::d(4),
            AlgebraKind::d(5),
            AlgebraKind::e(6),
            AlgebraKind::e(7),
        ] {
            let l = RootLattice::new(kind);
            assert_eq!(l.roots(), brute_force_roots(&l).as_slice(), "{kind}");
        }
    }

    #[test]
    fn root_counts() {
        assert_eq!(RootLattice::new(AlgebraKind::a(2)).roots().len(), 6);
        assert_eq!(RootLattice::new(AlgebraKind::d(4)).roots().len(), 24);
        assert_eq!(RootLattice::new(AlgebraKind::e(6)).roots().len(), 72);
        assert_eq!(RootLattice::new(AlgebraKind::e(7)).roots().len(), 126);
        assert_eq!(RootLattice::new(AlgebraKind::e(8)).roots().len(), 240);
        for n in 1..7 {
            assert_eq!(RootLattice::new(AlgebraKind::a(n)).roots().len(), n * (n + 1));
        }
        for n in 3..8 {
            assert_eq!(RootLattice::new(AlgebraKind::d(n)).roots().len(), 2 * n * (n - 1));
        }
    }

    #[test]
    fn e8_highest_root() {
        let l = RootLattice::new(AlgebraKind::e(8));
        // branch at the fifth node of the chain 1..7
        assert_eq!(l.highest_root(), LatticeVector(vec![2, 3, 4, 5, 6, 4, 2, 3]));
    }

    #[test]
    fn d4_default_arrows() {
        let l = RootLattice::new(AlgebraKind::d(4));
        let (a1, a2) = (l.simple(0), l.simple(1));
        assert_eq!(l.nu(&a1, &a2), 1);
        assert_eq!(l.nu(&a2, &a1), -1);
        assert!(l.orientation().has_arrow(2, 1));
        assert!(l.orientation().has_arrow(3, 1));
    }

    #[test]
    fn a1_table() {
        let l = RootLattice::new(AlgebraKind::a(1));
        assert_eq!(l.nu_table(), &[vec![-1i8]]);
    }

    #[test]
    fn e8_arrows_alternate() {
        let l = RootLattice::new(AlgebraKind::e(8));
        // even-numbered nodes and the branch node are sources
        for &(from, to) in l.orientation().arrows() {
            assert!((from + 1) % 2 == 0, "arrow {} -> {}", from + 1, to + 1);
            assert!((to + 1) % 2 == 1);
        }
        assert!(l.orientation().has_arrow(7, 4));
    }

    #[test]
    fn inner_products() {
        let l = RootLattice::new(AlgebraKind::d(4));
        let a = LatticeVector(vec![1, 1, 0, 0]);
        let b = LatticeVector(vec![0, 1, 0, 1]);
        // α_4 hangs off α_2, so the two cross terms cancel the diagonal
        assert_eq!(l.inner(&a, &b), 0);
        assert_eq!(l.inner(&a, &l.simple(1)), 1);
        let a2 = RootLattice::new(AlgebraKind::a(2));
        assert_eq!(a2.inner(&a2.simple(0), &a2.simple(1)), -1);
    }

    #[test]
    fn nu_special_values() {
        let l = RootLattice::new(AlgebraKind::e(7));
        let z = LatticeVector::zero(7);
        for b in l.roots() {
            assert_eq!(l.nu(&z, b), 1);
            assert_eq!(l.nu(&l.simple(0).scale(2), b), 1);
        }
        for j in 0..7 {
            assert_eq!(l.nu(&l.simple(j), &l.simple(j)), -1);
        }
    }

    #[test]
    fn epsilon_coordinates() {
        let l = RootLattice::new(AlgebraKind::d(4));
        assert_eq!(l.epsilon_root(0, 1, false).unwrap(), l.simple(0));
        assert_eq!(l.epsilon_root(2, 3, true).unwrap(), l.simple(3));
        assert_eq!(l.epsilon_root(0, 1, true).unwrap(), LatticeVector(vec![1, 2, 1, 1]));
        assert!(RootLattice::new(AlgebraKind::a(3)).epsilon_root(0, 1, true).is_err());
    }

    #[test]
    fn d_roots_are_epsilon_roots() {
        for n in 3..8 {
            let l = RootLattice::new(AlgebraKind::d(n));
            let mut eps = BTreeSet::new();
            for j in 0..n {
                for k in j + 1..n {
                    for plus in [false, true] {
                        let v = l.epsilon_root(j, k, plus).unwrap();
                        eps.insert(v.neg());
                        eps.insert(v);
                    }
                }
            }
            let roots: BTreeSet<_> = l.roots().iter().cloned().collect();
            assert_eq!(eps, roots, "D{n}");
        }
    }

    #[test]
    fn orientation_file_validation() {
        let kind = AlgebraKind::a(3);
        let o = Orientation::parse(&kind, "# chain\n2 1\n2 3\n").unwrap();
        let l = RootLattice::with_orientation(kind, o);
        assert_eq!(l.nu(&l.simple(1), &l.simple(0)), 1);
        assert!(Orientation::parse(&kind, "1 2\n").is_err());
        assert!(Orientation::parse(&kind, "1 2\n2 1\n2 3\n").is_err());
        assert!(Orientation::parse(&kind, "1 3\n1 2\n2 3\n").is_err());
        assert!(Orientation::parse(&kind, "1 9\n").is_err());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("D4".parse::<AlgebraKind>().unwrap(), AlgebraKind::d(4));
        assert_eq!("e_8".parse::<AlgebraKind>().unwrap(), AlgebraKind::e(8));
        assert!("E9".parse::<AlgebraKind>().is_err());
        assert!("D2".parse::<AlgebraKind>().is_err());
        assert!("A0".parse::<AlgebraKind>().is_err());
    }
}

//! Chevalley generators of the affinizations realized on `V`, the bracket
//! tables of the `Z`/`Z′` elements, singular vectors and the irreducible
//! decomposition of `V`.
//!
//! Zero-mode generators act on C{Q/2Q} as sparse matrices in the v-basis,
//! where `Y_β = X_β + X_{−β}` acts as `X̂_β`. The index-0 generators involve
//! `Γ_{α_1,±1}` and `a_{±1}(α_1)` and are evaluated on states of `V`.

mod decompose;
mod matrix;

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;
use serde::Serialize;

pub use decompose::{
    check_d8_in_e8, decompose, find_singular_vectors, pauli_example, D8Report, DecompositionReport, PauliEntry,
    PauliReport, SingularVector, Submodule,
};
pub use matrix::SparseMatrix;

use crate::error::{Error, Result};
use crate::fock::{gen, FockMonomial, FockSpace, FockVector, StateVector};
use crate::groupalg::{root_v_ops, CosetLabel};
use crate::lattice::{AlgebraKind, LatticeVector, Orientation, RootLattice, Series};
use crate::scalar::Scalar;

/// Which family a `ZElement` belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ZKind {
    Z,
    ZPrime,
    Y,
}

/// `Z_{j,k}`, `Z′_{j,k}` (D series) or `Y_{j,k}` (A series); indices are
/// 1-based node numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ZElement {
    pub kind: ZKind,
    pub j: usize,
    pub k: usize,
}

/// `α_j + ... + α_k` (1-based, empty when `j > k`).
fn root_range(n: usize, j: usize, k: usize) -> LatticeVector {
    let mut v = vec![0i64; n];
    for t in j..=k {
        v[t - 1] += 1;
    }
    LatticeVector(v)
}

impl ZElement {
    pub fn new(l: &RootLattice, kind: ZKind, j: usize, k: usize) -> Result<Self> {
        let n = l.rank();
        let (series_ok, top) = match kind {
            ZKind::Z | ZKind::ZPrime => (l.kind().series == Series::D && n >= 4, n - 1),
            ZKind::Y => (l.kind().series == Series::A, n),
        };
        if !series_ok {
            return Err(Error::UnsupportedAlgebra(format!("{kind:?} elements on {}", l.kind())));
        }
        if !(1 <= j && j <= k && k <= top) {
            return Err(Error::InvalidArgument(format!("indices ({j}, {k}) outside 1..={top}")));
        }
        let z = ZElement { kind, j, k };
        for (_, r) in z.expansion(n) {
            l.require_root(&r)?;
        }
        Ok(z)
    }

    /// `Σ c · Y_β` as `(c, β)` pairs.
    pub fn expansion(&self, n: usize) -> Vec<(Scalar, LatticeVector)> {
        let (j, k) = (self.j, self.k);
        if self.kind == ZKind::Y {
            return vec![(Scalar::one(), root_range(n, j, k))];
        }
        let (a, b, sign) = if k <= n.saturating_sub(3) {
            let a = root_range(n, j, k);
            let tail = root_range(n, k + 1, n - 2).scale(2).add(&root_range(n, n - 1, n));
            let b = a.add(&tail);
            (a, b, 1)
        } else if k == n - 2 {
            let a = root_range(n, j, n - 2);
            let b = a.add(&root_range(n, n - 1, n));
            (a, b, 1)
        } else {
            let a = root_range(n, j, n - 1);
            let b = root_range(n, j, n - 2).add(&root_range(n, n, n));
            (a, b, -1)
        };
        let sign = if self.kind == ZKind::ZPrime { -sign } else { sign };
        vec![(Scalar::one(), a), (Scalar::from_int(sign), b)]
    }

    pub fn matrix(&self, ops: &ZeroModes) -> SparseMatrix {
        let mut m = SparseMatrix::zero(ops.dim());
        for (c, r) in self.expansion(ops.rank) {
            m.add_scaled(ops.y(&r), &c);
        }
        m
    }
}

impl fmt::Display for ZElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            ZKind::Z => "Z",
            ZKind::ZPrime => "Z'",
            ZKind::Y => "Y",
        };
        write!(f, "{name}_{{{},{}}}", self.j, self.k)
    }
}

/// The matrices of `Y_β = X̂_β` on C{Q/2Q} in the v-basis, for every root.
pub struct ZeroModes {
    rank: usize,
    y: BTreeMap<LatticeVector, SparseMatrix>,
}

impl ZeroModes {
    pub fn new(l: &RootLattice) -> Self {
        let half = Scalar::from_ratio(1, 2);
        let y = l
            .roots()
            .iter()
            .zip(root_v_ops(l))
            .map(|(r, op)| (r.clone(), SparseMatrix::from_monomial(&op).scale(&half)))
            .collect();
        ZeroModes { rank: l.rank(), y }
    }

    pub fn dim(&self) -> usize {
        1 << self.rank
    }

    pub fn y(&self, root: &LatticeVector) -> &SparseMatrix {
        &self.y[root]
    }
}

/// A building block of a generator: `Y_β` (the zero mode `Γ_{β,0}`), a mode
/// `Γ_{β,m}`, `H_h ⊗ t^r` (acting as `a_r(h)/√2`), or the central `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Zero(LatticeVector),
    Mode(LatticeVector, i64),
    Heis(LatticeVector, i64),
    Central,
}

/// A formal linear combination of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenOp {
    pub terms: Vec<(Scalar, Atom)>,
}

impl GenOp {
    fn push(&mut self, c: Scalar, a: Atom) {
        if !c.is_zero() {
            self.terms.push((c, a));
        }
    }

    fn add_z(&mut self, c: &Scalar, z: &ZElement, n: usize) {
        for (d, r) in z.expansion(n) {
            self.push(c * &d, Atom::Zero(r));
        }
    }

    pub fn is_zero_mode(&self) -> bool {
        self.terms.iter().all(|(_, a)| matches!(a, Atom::Zero(_) | Atom::Central))
    }

    /// The action on C{Q/2Q}, for zero-mode combinations.
    pub fn matrix(&self, ops: &ZeroModes) -> Option<SparseMatrix> {
        let mut m = SparseMatrix::zero(ops.dim());
        for (c, a) in &self.terms {
            match a {
                Atom::Zero(r) => m.add_scaled(ops.y(r), c),
                Atom::Central => m.add_scaled(&SparseMatrix::identity(ops.dim()), c),
                _ => return None,
            }
        }
        Some(m)
    }

    pub fn render(&self, l: &RootLattice) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, a)| {
                let op = match a {
                    Atom::Zero(r) => format!("Y[{}]", l.root_name(r)),
                    Atom::Mode(r, m) => format!("G[{}]_{m}", l.root_name(r)),
                    Atom::Heis(h, r) => format!("H[{}]t^{r}", l.root_name(h)),
                    Atom::Central => "K".into(),
                };
                format!("({c}) {op}")
            })
            .collect();
        parts.join(" + ")
    }
}

/// Applies generators to states of `V`, caching the Fock factors of modes
/// per monomial.
pub struct ModeEvaluator<'a> {
    fs: FockSpace<'a>,
    cache: FxHashMap<(LatticeVector, i64, FockMonomial), FockVector>,
    inv_sqrt2: Scalar,
}

impl<'a> ModeEvaluator<'a> {
    pub fn new(l: &'a RootLattice) -> Self {
        ModeEvaluator {
            fs: FockSpace::new(l),
            cache: FxHashMap::default(),
            inv_sqrt2: Scalar::sqrt2().inv().expect("nonzero"),
        }
    }

    fn gamma(&mut self, beta: &LatticeVector, m: i64, s: &StateVector) -> StateVector {
        let l = self.fs.lattice();
        let b = beta.parity_bits();
        let mut out = StateVector::zero(s.rank());
        for (g, f) in s.parts() {
            let mut u = FockVector::zero();
            for (mono, c) in f.iter() {
                let key = (beta.clone(), m, mono.clone());
                if !self.cache.contains_key(&key) {
                    let v = self.fs.u_mode(beta, m, &FockVector::monomial(mono.clone(), Scalar::one()));
                    self.cache.insert(key.clone(), v);
                }
                u.add_scaled(&self.cache[&key], c);
            }
            let sign = l.nu_bits(b, g.0) as i64;
            out.add_part(CosetLabel(b ^ g.0), &u, &Scalar::from_ratio(sign, 2));
        }
        out
    }

    pub fn apply(&mut self, op: &GenOp, s: &StateVector) -> StateVector {
        let mut out = StateVector::zero(s.rank());
        for (c, a) in &op.terms {
            let v = match a {
                Atom::Zero(r) => self.gamma(r, 0, s),
                Atom::Mode(r, m) => self.gamma(r, *m, s),
                Atom::Heis(h, r) => self.fs.a_mode(h, *r, s).expect("odd mode").scale(&self.inv_sqrt2),
                Atom::Central => s.clone(),
            };
            out.add_scaled(&v, c);
        }
        out
    }

    /// `[a, b]` applied to `s`.
    pub fn bracket(&mut self, a: &GenOp, b: &GenOp, s: &StateVector) -> StateVector {
        let ab = {
            let t = self.apply(b, s);
            self.apply(a, &t)
        };
        let ba = {
            let t = self.apply(a, s);
            self.apply(b, &t)
        };
        ab.sub(&ba)
    }
}

/// A node of the affine diagram, `α̃_j` or `α̃′_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub index: usize,
    pub primed: bool,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, if self.primed { "'" } else { "" })
    }
}

impl Serialize for Node {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug)]
pub struct ChevalleyNode {
    pub node: Node,
    pub e: GenOp,
    pub f: GenOp,
    pub h: GenOp,
}

/// The affine diagram the generators should realize, in the node order of
/// the generator set.
#[derive(Clone, Debug, Serialize)]
pub struct AffineTarget {
    pub name: String,
    pub nodes: Vec<Node>,
    pub cartan: Vec<Vec<i64>>,
}

/// Bond between two nodes: simple, or double with the short node named.
enum Bond {
    Single(usize, usize),
    Double { long: usize, short: usize },
}

impl AffineTarget {
    fn from_bonds(name: String, nodes: Vec<Node>, bonds: &[Bond]) -> Self {
        let k = nodes.len();
        let mut cartan = vec![vec![0i64; k]; k];
        for (i, row) in cartan.iter_mut().enumerate() {
            row[i] = 2;
        }
        for b in bonds {
            match *b {
                Bond::Single(x, y) => {
                    cartan[x][y] = -1;
                    cartan[y][x] = -1;
                }
                Bond::Double { long, short } => {
                    cartan[short][long] = -2;
                    cartan[long][short] = -1;
                }
            }
        }
        AffineTarget { name, nodes, cartan }
    }
}

#[derive(Clone, Debug)]
pub struct ChevalleySet {
    pub algebra: AlgebraKind,
    pub target: AffineTarget,
    pub nodes: Vec<ChevalleyNode>,
}

impl ChevalleySet {
    pub fn position(&self, node: Node) -> Option<usize> {
        self.nodes.iter().position(|c| c.node == node)
    }

    pub fn m(&self) -> usize {
        self.nodes.iter().map(|c| c.node.index).max().unwrap_or(0)
    }
}

fn require_default_orientation(l: &RootLattice) -> Result<()> {
    let mut a = l.orientation().arrows().to_vec();
    let mut b = Orientation::default_for(&l.kind()).arrows().to_vec();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::InvalidOrientation(format!(
            "the generator formulas for {} assume the default orientation",
            l.kind()
        )));
    }
    Ok(())
}

/// Builds `ẽ_j, f̃_j, h̃_j` (and the primed copies for D) for `A_n` (n ≥ 3)
/// and `D_n` (n ≥ 4).
pub fn build_chevalley(l: &RootLattice) -> Result<ChevalleySet> {
    build_chevalley_with(l, GeneratorForm::Corrected)
}

/// Which reading of the generator formulas to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratorForm {
    /// The formulas exactly as printed.
    Printed,
    /// Index `2m−1, 2m` for the last node of `D_{2m+1}` and `A_{2m}`, and
    /// `ẽ_j, f̃_j` halved for the D series (except the short node of
    /// `D_{2m+1}`) so that `[ẽ_j, f̃_j] = h̃_j`.
    Corrected,
}

pub fn build_chevalley_with(l: &RootLattice, form: GeneratorForm) -> Result<ChevalleySet> {
    let kind = l.kind();
    let n = kind.rank;
    match kind.series {
        Series::A if n >= 3 => {}
        Series::D if n >= 4 => {}
        _ => return Err(Error::UnsupportedAlgebra(format!("no Chevalley generators are built for {kind}"))),
    }
    require_default_orientation(l)?;
    let m = match kind.series {
        Series::A => n.div_ceil(2),
        _ => n / 2,
    };
    let even = match kind.series {
        Series::A => n == 2 * m - 1,
        _ => n == 2 * m,
    };
    let half = Scalar::from_ratio(1, 2);
    let i = Scalar::i();
    let hi = &i * &half;
    let families: Vec<(ZKind, bool)> = match kind.series {
        Series::A => vec![(ZKind::Y, false)],
        _ => vec![(ZKind::Z, false), (ZKind::ZPrime, true)],
    };
    let h_factor = if kind.series == Series::A { i.clone() } else { hi.clone() };
    let corrected = form == GeneratorForm::Corrected;
    let ef = if corrected && kind.series == Series::D { Scalar::from_ratio(1, 4) } else { half.clone() };

    let mut nodes = Vec::new();
    let a1 = l.simple(0);
    nodes.push(ChevalleyNode {
        node: Node { index: 0, primed: false },
        e: GenOp {
            terms: vec![(hi.clone(), Atom::Mode(a1.clone(), 1)), (half.clone(), Atom::Heis(a1.clone(), 1))],
        },
        f: GenOp {
            terms: vec![(-&hi, Atom::Mode(a1.clone(), -1)), (half.clone(), Atom::Heis(a1.clone(), -1))],
        },
        h: GenOp { terms: vec![(-&i, Atom::Zero(a1.clone())), (half.clone(), Atom::Central)] },
    });
    let mut primed_nodes = Vec::new();
    for (zk, primed) in families {
        let w = |j: usize, k: usize| ZElement::new(l, zk, j, k);
        let combo = |parts: &[(Scalar, ZElement)]| {
            let mut g = GenOp::default();
            for (c, z) in parts {
                g.add_z(c, z, n);
            }
            g
        };
        let one = Scalar::one();
        let neg = Scalar::from_int(-1);
        let mi = -&i;
        for j in 1..m {
            let (a, b, c, d) = (w(2 * j - 1, 2 * j)?, w(2 * j, 2 * j + 1)?, w(2 * j - 1, 2 * j + 1)?, w(2 * j, 2 * j)?);
            let e = combo(&[(one.clone(), a), (neg.clone(), b), (mi.clone(), c), (mi.clone(), d)]).scaled(&ef);
            let f = combo(&[(neg.clone(), a), (one.clone(), b), (mi.clone(), c), (mi.clone(), d)]).scaled(&ef);
            let h = combo(&[(one.clone(), w(2 * j - 1, 2 * j - 1)?), (neg.clone(), w(2 * j + 1, 2 * j + 1)?)])
                .scaled(&h_factor);
            let node = ChevalleyNode { node: Node { index: j, primed }, e, f, h };
            if primed {
                primed_nodes.push(node);
            } else {
                nodes.push(node);
            }
        }
        let (e, f, h) = if even {
            let (a, b, c, d) =
                (w(2 * m - 3, 2 * m - 2)?, w(2 * m - 2, 2 * m - 1)?, w(2 * m - 3, 2 * m - 1)?, w(2 * m - 2, 2 * m - 2)?);
            let e = combo(&[(one.clone(), a), (one.clone(), b), (i.clone(), c), (mi.clone(), d)]).scaled(&ef);
            let f = combo(&[(neg.clone(), a), (neg.clone(), b), (i.clone(), c), (mi.clone(), d)]).scaled(&ef);
            let h = combo(&[(one.clone(), w(2 * m - 3, 2 * m - 3)?), (one.clone(), w(2 * m - 1, 2 * m - 1)?)])
                .scaled(&h_factor);
            (e, f, h)
        } else {
            let (a, d) = if corrected {
                (w(2 * m - 1, 2 * m)?, w(2 * m, 2 * m)?)
            } else {
                (w(2 * m - 2, 2 * m - 1)?, w(2 * m - 2, 2 * m - 2)?)
            };
            // the A series drops the overall ½ and doubles h̃_m
            let s = if kind.series == Series::A { one.clone() } else { half.clone() };
            let e = combo(&[(one.clone(), a), (mi.clone(), d)]).scaled(&s);
            let f = combo(&[(neg.clone(), a), (mi.clone(), d)]).scaled(&s);
            let hf = if kind.series == Series::A { i.scale_int(2) } else { i.clone() };
            let h = combo(&[(one.clone(), w(2 * m - 1, 2 * m - 1)?)]).scaled(&hf);
            (e, f, h)
        };
        let node = ChevalleyNode { node: Node { index: m, primed }, e, f, h };
        if primed {
            primed_nodes.push(node);
        } else {
            nodes.push(node);
        }
    }
    nodes.extend(primed_nodes);
    let target = affine_target(kind, m, nodes.iter().map(|c| c.node).collect());
    Ok(ChevalleySet { algebra: kind, target, nodes })
}

impl GenOp {
    fn scaled(mut self, s: &Scalar) -> Self {
        for (c, _) in &mut self.terms {
            *c = &*c * s;
        }
        self
    }
}

/// The pictured affine diagram in the node order `0, 1..m, 1′..m′`.
fn affine_target(kind: AlgebraKind, m: usize, nodes: Vec<Node>) -> AffineTarget {
    let n = kind.rank;
    let pos = |index: usize, primed: bool| {
        nodes.iter().position(|x| *x == Node { index, primed }).expect("node present")
    };
    let mut bonds = Vec::new();
    let name;
    match kind.series {
        Series::D => {
            let tw = n % 2 == 1;
            name = if tw { format!("D^(2)_{n}") } else { format!("D^(1)_{n}") };
            for primed in [false, true] {
                bonds.push(Bond::Single(pos(0, false), pos(1, primed)));
                let last = if tw { m - 1 } else { m.saturating_sub(1) };
                for j in 1..last {
                    bonds.push(Bond::Single(pos(j, primed), pos(j + 1, primed)));
                }
                if tw {
                    // α̃_{m-1} ⇒ α̃_m with α̃_m short
                    let prev = if m == 1 { pos(0, false) } else { pos(m - 1, primed) };
                    bonds.push(Bond::Double { long: prev, short: pos(m, primed) });
                } else {
                    // α̃_m hangs off α̃_{m-2}
                    let anchor = if m == 2 { pos(0, false) } else { pos(m - 2, primed) };
                    bonds.push(Bond::Single(anchor, pos(m, primed)));
                }
            }
        }
        _ => {
            let tw_odd = n % 2 == 1;
            name = format!("A^(2)_{n}");
            if tw_odd && m == 2 {
                // three nodes, α̃_0 long in the middle
                bonds.push(Bond::Double { long: pos(0, false), short: pos(1, false) });
                bonds.push(Bond::Double { long: pos(0, false), short: pos(2, false) });
            } else {
                bonds.push(Bond::Double { long: pos(0, false), short: pos(1, false) });
                let chain_end = m - 1;
                for j in 1..chain_end {
                    bonds.push(Bond::Single(pos(j, false), pos(j + 1, false)));
                }
                if tw_odd {
                    bonds.push(Bond::Single(pos(m - 2, false), pos(m, false)));
                } else {
                    bonds.push(Bond::Double { long: pos(m - 1, false), short: pos(m, false) });
                }
            }
        }
    }
    AffineTarget::from_bonds(name, nodes, &bonds)
}

/// One family tally of a bracket verification.
#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Tally {
    pub checks: usize,
    pub passed: usize,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checks += 1;
        if ok {
            self.passed += 1;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketFailure {
    pub family: String,
    pub bracket: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZBracketReport {
    pub algebra: String,
    pub families: BTreeMap<String, Tally>,
    pub checks: usize,
    pub passed: usize,
    pub failures: Vec<BracketFailure>,
}

impl ZBracketReport {
    pub fn all_passed(&self) -> bool {
        self.checks > 0 && self.checks == self.passed
    }
}

/// Checks the bracket table of the `Z`/`Z′` elements as exact matrix
/// identities on C{Q/2Q}, over every index combination in range.
pub fn verify_z_brackets(l: &RootLattice) -> Result<ZBracketReport> {
    let n = l.rank();
    if l.kind().series != Series::D || n < 4 {
        return Err(Error::UnsupportedAlgebra(format!("Z brackets need D_n, n >= 4, got {}", l.kind())));
    }
    let ops = ZeroModes::new(l);
    let top = n - 1;
    let mut mats: BTreeMap<ZElement, SparseMatrix> = BTreeMap::new();
    for kind in [ZKind::Z, ZKind::ZPrime] {
        for j in 1..=top {
            for k in j..=top {
                let z = ZElement::new(l, kind, j, k)?;
                mats.insert(z, z.matrix(&ops));
            }
        }
    }
    let nu = |a: usize| l.nu(&l.simple(a - 1), &l.simple(a)) as i64;
    let mut report = ZBracketReport {
        algebra: l.kind().to_string(),
        families: BTreeMap::new(),
        checks: 0,
        passed: 0,
        failures: Vec::new(),
    };
    let mut check = |family: &str, a: ZElement, b: ZElement, rhs: Option<(i64, ZElement)>| {
        let lhs = mats[&a].bracket(&mats[&b]);
        let expected = match rhs {
            Some((c, z)) => mats[&z].scale(&Scalar::from_int(c)),
            None => SparseMatrix::zero(ops.dim()),
        };
        let ok = lhs == expected;
        report.families.entry(family.to_string()).or_default().record(ok);
        if !ok {
            report.failures.push(BracketFailure {
                family: family.to_string(),
                bracket: format!("[{a}, {b}]"),
                expected: match rhs {
                    Some((c, z)) => format!("{c} {z}"),
                    None => "0".into(),
                },
                actual: lhs.to_string(),
            });
        }
    };
    let z = |kind, j, k| ZElement { kind, j, k };
    for j in 1..=top {
        for k in j..=top {
            for r in 1..=top {
                for s in r..=top {
                    check("unprimed and primed commute", z(ZKind::Z, j, k), z(ZKind::ZPrime, r, s), None);
                }
            }
        }
    }
    for (kind, tag) in [(ZKind::Z, "unprimed"), (ZKind::ZPrime, "primed")] {
        for j in 1..=top {
            for r in j..=top {
                for s in j..=top {
                    if r < s {
                        let rhs = Some((-2 * nu(r), z(kind, r + 1, s)));
                        check(&format!("shared start, {tag}"), z(kind, j, r), z(kind, j, s), rhs);
                    } else if s < r {
                        let rhs = Some((2 * nu(s), z(kind, s + 1, r)));
                        check(&format!("shared start, {tag}"), z(kind, j, r), z(kind, j, s), rhs);
                    }
                }
            }
        }
        for r in 1..=top {
            for j in 1..=r {
                for k in 1..=r {
                    if j < k {
                        let rhs = Some((-2 * nu(k - 1), z(kind, j, k - 1)));
                        check(&format!("shared end, {tag}"), z(kind, j, r), z(kind, k, r), rhs);
                    } else if k < j {
                        let rhs = Some((2 * nu(j - 1), z(kind, k, j - 1)));
                        check(&format!("shared end, {tag}"), z(kind, j, r), z(kind, k, r), rhs);
                    }
                }
            }
        }
        for k in 2..=top {
            for j in 1..k {
                for s in k..=top {
                    let rhs = Some((2 * nu(k - 1), z(kind, j, s)));
                    check(&format!("adjacent, {tag}"), z(kind, j, k - 1), z(kind, k, s), rhs);
                    let rhs = Some((-2 * nu(k - 1), z(kind, j, s)));
                    // same identity with the roles of the two ranges swapped
                    check(&format!("adjacent reversed, {tag}"), z(kind, k, s), z(kind, j, k - 1), rhs);
                }
            }
        }
    }
    report.checks = report.families.values().map(|t| t.checks).sum();
    report.passed = report.families.values().map(|t| t.passed).sum();
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CartanReport {
    pub algebra: String,
    pub target: AffineTarget,
    /// `a_ij` read from `[h̃_i, ẽ_j] = a_ij ẽ_j`; `None` where `[h̃_i, ẽ_j]`
    /// is not a multiple of `ẽ_j`.
    pub recovered: Vec<Vec<Option<i64>>>,
    pub matrix_matches: bool,
    pub h_diagonal: bool,
    pub relations: BTreeMap<String, Tally>,
    pub fock_states: usize,
    pub failures: Vec<BracketFailure>,
}

impl CartanReport {
    pub fn all_passed(&self) -> bool {
        self.matrix_matches && self.h_diagonal && self.failures.is_empty()
    }
}

/// Lattice basis states tensored with every Fock monomial of degree ≤ 2.
fn test_surface(l: &RootLattice) -> Vec<StateVector> {
    let n = l.rank();
    let mut monos = vec![FockMonomial::one()];
    for j in 0..n {
        monos.push(FockMonomial::one().with(gen(j, 1)));
        for k in j..n {
            monos.push(FockMonomial::one().with(gen(j, 1)).with(gen(k, 1)));
        }
    }
    let mut out = Vec::new();
    for g in 0..1u32 << n {
        for mono in &monos {
            out.push(StateVector::pure(n, CosetLabel(g), FockVector::monomial(mono.clone(), Scalar::one())));
        }
    }
    out
}

fn state_coeff(s: &StateVector, g: CosetLabel, m: &FockMonomial) -> Scalar {
    s.part(g).map(|f| f.coeff(m)).unwrap_or_else(Scalar::zero)
}

/// The scalar `c` with `lhs[t] = c · base[t]` for every `t`, if one exists.
fn state_ratio(lhs: &[StateVector], base: &[StateVector]) -> Option<Scalar> {
    let (idx, (g, mono, v)) = base
        .iter()
        .enumerate()
        .find_map(|(t, s)| s.terms().first().map(|(g, m, c)| (t, (*g, (*m).clone(), (*c).clone()))))?;
    let c = &state_coeff(&lhs[idx], g, &mono) * &v.inv()?;
    lhs.iter().zip(base).all(|(a, b)| *a == b.scale(&c)).then_some(c)
}

/// Checks the Chevalley relations: `[h̃_i, h̃_j] = 0`, `[ẽ_i, f̃_j] = δ_ij h̃_i`,
/// `[h̃_i, ẽ_j] = a_ij ẽ_j`, `[h̃_i, f̃_j] = −a_ij f̃_j`, and that `(a_ij)` is
/// the Cartan matrix of the target diagram. Brackets of zero-mode
/// generators are compared as matrices on C{Q/2Q}; brackets involving
/// `ẽ_0` or `f̃_0` are compared on every state of degree ≤ 2.
pub fn verify_cartan_matrix(l: &RootLattice, cs: &ChevalleySet) -> CartanReport {
    let ops = ZeroModes::new(l);
    let k = cs.nodes.len();
    let surface = test_surface(l);
    let mut ev = ModeEvaluator::new(l);
    let mut relations: BTreeMap<String, Tally> = BTreeMap::new();
    let mut failures = Vec::new();

    let mat = |g: &GenOp| g.matrix(&ops);
    let hm: Vec<SparseMatrix> = cs.nodes.iter().map(|c| mat(&c.h).expect("h̃ is a zero mode")).collect();
    let h_diagonal = hm.iter().all(|m| m.diagonal().is_some());

    // action of every generator on the surface, computed once
    let on_surface = |ev: &mut ModeEvaluator, g: &GenOp| -> Vec<StateVector> {
        surface.iter().map(|s| ev.apply(g, s)).collect()
    };
    let e_v: Vec<Vec<StateVector>> = cs.nodes.iter().map(|c| on_surface(&mut ev, &c.e)).collect();
    let f_v: Vec<Vec<StateVector>> = cs.nodes.iter().map(|c| on_surface(&mut ev, &c.f)).collect();
    let h_v: Vec<Vec<StateVector>> = cs.nodes.iter().map(|c| on_surface(&mut ev, &c.h)).collect();

    let mut record = |rel: &str, i: usize, j: usize, ok: bool, expected: String, actual: String| {
        relations.entry(rel.to_string()).or_default().record(ok);
        if !ok {
            failures.push(BracketFailure {
                family: rel.to_string(),
                bracket: format!("{} {}", cs.nodes[i].node, cs.nodes[j].node),
                expected,
                actual,
            });
        }
    };

    // [a, b] on the surface
    let bracket_on = |ev: &mut ModeEvaluator, a: &GenOp, b_v: &[StateVector], a_v: &[StateVector], b: &GenOp| {
        let out: Vec<StateVector> = (0..surface.len())
            .map(|t| {
                let ab = ev.apply(a, &b_v[t]);
                let ba = ev.apply(b, &a_v[t]);
                ab.sub(&ba)
            })
            .collect();
        out
    };

    let mut recovered = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            let (ci, cj) = (&cs.nodes[i], &cs.nodes[j]);
            // [h_i, h_j] = 0
            let hh = hm[i].bracket(&hm[j]);
            record("[h,h] = 0", i, j, hh.is_zero(), "0".into(), hh.to_string());

            let zero_pair = ci.e.is_zero_mode() && cj.f.is_zero_mode();
            // [e_i, f_j] = δ_ij h_i
            if zero_pair {
                let b = mat(&ci.e).unwrap().bracket(&mat(&cj.f).unwrap());
                let expect = if i == j { hm[i].clone() } else { SparseMatrix::zero(ops.dim()) };
                record("[e,f] = δ h", i, j, b == expect, expect.to_string(), b.to_string());
            } else {
                let b = bracket_on(&mut ev, &ci.e, &f_v[j], &e_v[i], &cj.f);
                let ok = b.iter().zip(&h_v[i]).all(|(x, h)| if i == j { x == h } else { x.is_zero() });
                let bad = b.iter().zip(&h_v[i]).position(|(x, h)| if i == j { x != h } else { !x.is_zero() });
                let actual = bad.map(|t| format!("on {}: {}", surface[t], b[t])).unwrap_or_default();
                record("[e,f] = δ h", i, j, ok, if i == j { "h".into() } else { "0".into() }, actual);
            }

            // [h_i, e_j] = a_ij e_j and [h_i, f_j] = −a_ij f_j
            let (ce, cf) = if cj.e.is_zero_mode() {
                let e = mat(&cj.e).unwrap();
                let f = mat(&cj.f).unwrap();
                (hm[i].bracket(&e).ratio_to(&e), hm[i].bracket(&f).ratio_to(&f))
            } else {
                let he = bracket_on(&mut ev, &ci.h, &e_v[j], &h_v[i], &cj.e);
                let hf = bracket_on(&mut ev, &ci.h, &f_v[j], &h_v[i], &cj.f);
                (state_ratio(&he, &e_v[j]), state_ratio(&hf, &f_v[j]))
            };
            let aij = ce.as_ref().and_then(|c| c.as_integer());
            recovered[i][j] = aij;
            record("[h,e] = a e", i, j, aij.is_some(), "integer multiple".into(), format!("{ce:?}"));
            let ok = match (&ce, &cf) {
                (Some(a), Some(b)) => *b == -a,
                _ => false,
            };
            record("[h,f] = -a f", i, j, ok, format!("{:?}", ce.map(|c| -c)), format!("{cf:?}"));
        }
    }
    let matrix_matches = recovered
        .iter()
        .zip(&cs.target.cartan)
        .all(|(r, t)| r.iter().zip(t).all(|(a, b)| *a == Some(*b)));
    CartanReport {
        algebra: l.kind().to_string(),
        target: cs.target.clone(),
        recovered,
        matrix_matches,
        h_diagonal,
        relations,
        fock_states: surface.len(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupalg::SignTuple;

    fn lat(s: &str) -> RootLattice {
        RootLattice::parse(s).unwrap()
    }

    #[test]
    fn z_expansions_are_roots() {
        let l = lat("D5");
        for kind in [ZKind::Z, ZKind::ZPrime] {
            for j in 1..=4 {
                for k in j..=4 {
                    assert!(ZElement::new(&l, kind, j, k).is_ok());
                }
            }
        }
        assert!(ZElement::new(&l, ZKind::Z, 1, 5).is_err());
        assert!(ZElement::new(&l, ZKind::Y, 1, 2).is_err());
        let z = ZElement { kind: ZKind::Z, j: 1, k: 1 };
        // Y_{α1} + Y_{α1+2α2+2α3+α4+α5}
        let ex = z.expansion(5);
        assert_eq!(ex[1].1, LatticeVector(vec![1, 2, 2, 1, 1]));
    }

    #[test]
    fn d4_h0_eigenvalues() {
        let l = lat("D4");
        let cs = build_chevalley(&l).unwrap();
        let ops = ZeroModes::new(&l);
        let h0 = cs.nodes[0].h.matrix(&ops).unwrap();
        let d = h0.diagonal().unwrap();
        for c in SignTuple::all(4) {
            let expect = Scalar::from_ratio(1 - c.c(0) as i64, 2);
            assert_eq!(d[c.neg_mask() as usize], expect);
        }
    }

    #[test]
    fn a4_hm_is_twice_c3() {
        let l = lat("A4");
        let cs = build_chevalley(&l).unwrap();
        let ops = ZeroModes::new(&l);
        let pos = cs.position(Node { index: 2, primed: false }).unwrap();
        let d = cs.nodes[pos].h.matrix(&ops).unwrap().diagonal().unwrap();
        for c in SignTuple::all(4) {
            assert_eq!(d[c.neg_mask() as usize], Scalar::from_int(c.c(2) as i64));
        }
    }

    #[test]
    fn z_brackets_on_d4() {
        let r = verify_z_brackets(&lat("D4")).unwrap();
        assert!(r.all_passed(), "{:?}", &r.failures[..r.failures.len().min(5)]);
    }

    #[test]
    fn e_series_has_no_generators() {
        assert!(build_chevalley(&lat("E6")).is_err());
        assert!(build_chevalley(&lat("A2")).is_err());
    }

    #[test]
    fn cartan_of_a3() {
        let l = lat("A3");
        let cs = build_chevalley(&l).unwrap();
        let r = verify_cartan_matrix(&l, &cs);
        assert!(r.all_passed(), "{:?} {:?}", r.recovered, &r.failures[..r.failures.len().min(3)]);
    }
}

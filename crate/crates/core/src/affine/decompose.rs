//! Singular vectors, orbit decomposition of C{Q/2Q}, the D_4 spin-matrix
//! table and the D_8 subsystem of E_8.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{build_chevalley, ModeEvaluator, Node, ZeroModes};
use crate::error::{Error, Result};
use crate::fock::StateVector;
use crate::groupalg::{root_v_ops, v_basis, SignTuple, VMonomialOp};
use crate::lattice::{AlgebraKind, LatticeVector, RootLattice, Series};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Serialize)]
pub struct SingularVector {
    pub tuple: SignTuple,
    /// `h̃` eigenvalue per node.
    pub eigenvalues: BTreeMap<String, i64>,
    pub weight: String,
    /// The weight the closed-form table assigns to this tuple.
    pub table_weight: String,
    /// `ẽ_j v = 0` for every node, `ẽ_0` evaluated on `v ⊗ 1`.
    pub annihilated: bool,
}

fn weight_name(node: Node) -> String {
    format!("Λ̃{}_{}", if node.primed { "'" } else { "" }, node.index)
}

/// 1-based sign access.
fn c(t: &SignTuple, j: usize) -> i8 {
    t.c(j - 1)
}

/// The weight assigned by the closed-form singular-vector tables.
fn table_weight(kind: AlgebraKind, t: &SignTuple) -> String {
    let n = kind.rank;
    let node = match kind.series {
        Series::D if n.is_multiple_of(2) => {
            let m = n / 2;
            match (c(t, 2 * m - 1), c(t, 2 * m)) {
                (1, 1) => Node { index: m, primed: true },
                (1, _) => Node { index: m, primed: false },
                (_, 1) => Node { index: m - 1, primed: true },
                _ => Node { index: m - 1, primed: false },
            }
        }
        Series::D => {
            let m = n / 2;
            let primed = c(t, 2 * m) * c(t, 2 * m + 1) == 1;
            Node { index: m, primed }
        }
        Series::A if n % 2 == 1 => {
            let m = n.div_ceil(2);
            let index = if c(t, 2 * m - 1) == 1 { m } else { m - 1 };
            Node { index, primed: false }
        }
        _ => Node { index: n / 2, primed: false },
    };
    weight_name(node)
}

/// Scans the v-basis for vectors on which every `h̃` has a non-negative
/// integral eigenvalue, and checks that the raising generators kill them.
pub fn find_singular_vectors(l: &RootLattice) -> Result<Vec<SingularVector>> {
    let cs = build_chevalley(l)?;
    let ops = ZeroModes::new(l);
    let n = l.rank();
    let hs: Vec<Vec<Scalar>> = cs
        .nodes
        .iter()
        .map(|c| {
            c.h.matrix(&ops)
                .and_then(|m| m.diagonal())
                .ok_or_else(|| Error::InvalidArgument(format!("h̃_{} is not diagonal", c.node)))
        })
        .collect::<Result<_>>()?;
    let es: Vec<Option<super::SparseMatrix>> = cs.nodes.iter().map(|c| c.e.matrix(&ops)).collect();
    let mut ev = ModeEvaluator::new(l);
    let mut out = Vec::new();
    for t in SignTuple::all(n) {
        let col = t.neg_mask() as usize;
        let eig: Option<Vec<i64>> =
            hs.iter().map(|d| d[col].as_integer().filter(|&x| x >= 0)).collect();
        let Some(eig) = eig else { continue };
        let state = StateVector::from_group_alg(&v_basis(l, t));
        let annihilated = cs.nodes.iter().zip(&es).all(|(node, e)| match e {
            Some(m) => m.col(col).is_empty(),
            None => ev.apply(&node.e, &state).is_zero(),
        });
        let eigenvalues: BTreeMap<String, i64> =
            cs.nodes.iter().zip(&eig).map(|(node, x)| (node.node.to_string(), *x)).collect();
        let ones: Vec<Node> = cs.nodes.iter().zip(&eig).filter(|(_, &x)| x != 0).map(|(c, _)| c.node).collect();
        let weight = if ones.len() == 1 && eig.contains(&1) {
            weight_name(ones[0])
        } else {
            let parts: Vec<String> = eigenvalues.iter().map(|(k, v)| format!("{k}:{v}")).collect();
            format!("({})", parts.join(","))
        };
        out.push(SingularVector { tuple: t, eigenvalues, weight, table_weight: table_weight(l.kind(), &t), annihilated });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Submodule {
    /// The singular vector (A and D series).
    pub singular: Option<SignTuple>,
    /// Weight name, or the conserved sign tuple for the E series.
    pub label: String,
    pub basis: Vec<SignTuple>,
    pub dim: usize,
    /// The basis is exactly the set described by the closed-form conditions.
    pub matches_description: bool,
    /// Dimension of the commutant of the root operators on this span;
    /// 1 means the lattice part is irreducible.
    pub commutant_dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub invariant: bool,
    pub disjoint: bool,
    pub total_dim: usize,
    pub expected_total: usize,
    /// Every submodule contains exactly one singular vector (A, D), or the
    /// conserved functionals separate the submodules (E).
    pub labels_separate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub algebra: String,
    pub submodules: Vec<Submodule>,
    pub certificate: Certificate,
    pub mismatches: Vec<String>,
    /// Singular vectors whose eigenvalue-derived weight differs from the
    /// closed-form weight table. Reported, not counted as failures.
    pub weight_table_deviations: Vec<String>,
}

impl DecompositionReport {
    pub fn all_passed(&self) -> bool {
        let c = &self.certificate;
        c.invariant
            && c.disjoint
            && c.labels_separate
            && c.total_dim == c.expected_total
            && self.mismatches.is_empty()
            && self.submodules.iter().all(|s| s.matches_description && s.commutant_dim == 1)
    }
}

/// Orbit of `start` under the flips of `ops`.
fn orbit(ops: &[&VMonomialOp], start: SignTuple) -> BTreeSet<SignTuple> {
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(t) = stack.pop() {
        for op in ops {
            let (u, _) = op.image(t);
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen
}

/// Weighted union-find over the unknown entries of a matrix commuting with
/// monomial operators; returns the dimension of the commutant on `basis`.
pub(crate) fn commutant_dim(ops: &[&VMonomialOp], basis: &[SignTuple]) -> usize {
    let d = basis.len();
    let index: BTreeMap<SignTuple, usize> = basis.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut parent: Vec<usize> = (0..d * d).collect();
    let mut weight: Vec<Scalar> = vec![Scalar::one(); d * d];
    let mut dead = vec![false; d * d];

    fn find(parent: &mut [usize], weight: &mut [Scalar], u: usize) -> (usize, Scalar) {
        let mut path = Vec::new();
        let mut x = u;
        while parent[x] != x {
            path.push(x);
            x = parent[x];
        }
        // compress, accumulating factors from the top down
        let mut acc = Scalar::one();
        for &y in path.iter().rev() {
            acc = &weight[y] * &acc;
            weight[y] = acc.clone();
            parent[y] = x;
        }
        let f = if u == x { Scalar::one() } else { weight[u].clone() };
        (x, f)
    }

    for op in ops {
        // A v_b = p_b v_{π(b)}
        let mut pi = vec![0usize; d];
        let mut p = Vec::with_capacity(d);
        for (b, t) in basis.iter().enumerate() {
            let (u, s) = op.image(*t);
            pi[b] = index[&u];
            p.push(s.clone());
        }
        let mut inv = vec![0usize; d];
        for b in 0..d {
            inv[pi[b]] = b;
        }
        for a in 0..d {
            for b in 0..d {
                // p_b X[a, π b] = p_{π⁻¹ a} X[π⁻¹ a, b]
                let u = a * d + pi[b];
                let v = inv[a] * d + b;
                let lambda = &p[inv[a]] * &p[b].inv().expect("unit");
                let (ru, fu) = find(&mut parent, &mut weight, u);
                let (rv, fv) = find(&mut parent, &mut weight, v);
                // X_u = λ X_v, X_u = fu X_ru, X_v = fv X_rv
                if ru == rv {
                    if fu != &lambda * &fv {
                        dead[ru] = true;
                    }
                } else {
                    parent[ru] = rv;
                    weight[ru] = &(&lambda * &fv) * &fu.inv().expect("unit");
                    dead[rv] |= dead[ru];
                }
            }
        }
    }
    (0..d * d).filter(|&u| parent[u] == u && !dead[u]).count()
}

/// The span described by the closed-form conditions, from a member `t`.
fn described(kind: AlgebraKind, t: &SignTuple) -> Box<dyn Fn(&SignTuple) -> bool> {
    let n = kind.rank;
    let t = *t;
    let odd_prod = move |b: &SignTuple, upto: usize| (1..=upto).step_by(2).map(|j| c(b, j)).product::<i8>();
    let evens_fixed = move |b: &SignTuple, upto: usize| (2..=upto).step_by(2).all(|j| c(b, j) == c(&t, j));
    match (kind.series, n % 2) {
        (Series::D, 0) => {
            let m = n / 2;
            Box::new(move |b| {
                evens_fixed(b, 2 * m - 2)
                    && c(b, 2 * m - 1) * c(b, 2 * m) == c(&t, 2 * m - 1) * c(&t, 2 * m)
                    && odd_prod(b, 2 * m - 1) == odd_prod(&t, 2 * m - 1)
            })
        }
        (Series::D, _) => Box::new(move |b| evens_fixed(b, n - 1) && c(b, n) == c(&t, n)),
        (Series::A, 1) => Box::new(move |b| evens_fixed(b, n) && odd_prod(b, n) == odd_prod(&t, n)),
        (Series::A, _) => Box::new(move |b| evens_fixed(b, n)),
        (Series::E, _) => {
            let conserved = conserved_values(kind, &t);
            Box::new(move |b| conserved_values(kind, b) == conserved)
        }
    }
}

/// The sign functionals preserved by every `X̂_α` for `E_n`.
fn conserved_functionals(n: usize) -> Vec<Vec<usize>> {
    match n {
        6 => vec![vec![1], vec![3], vec![5]],
        7 => vec![vec![1], vec![3], vec![5], vec![4, 6, 7]],
        _ => vec![vec![1], vec![3], vec![5], vec![7]],
    }
}

fn conserved_values(kind: AlgebraKind, t: &SignTuple) -> Vec<i8> {
    conserved_functionals(kind.rank).iter().map(|f| f.iter().map(|&j| c(t, j)).product()).collect()
}

fn conserved_label(kind: AlgebraKind, t: &SignTuple) -> String {
    let parts: Vec<String> = conserved_functionals(kind.rank)
        .iter()
        .zip(conserved_values(kind, t))
        .map(|(f, v)| {
            let name: String = f.iter().map(|j| format!("c{j}")).collect();
            format!("{name}={}", if v > 0 { '+' } else { '-' })
        })
        .collect();
    parts.join(",")
}

/// Splits C{Q/2Q} into orbits of the root operators and certifies the
/// decomposition: invariance, disjointness, total dimension, agreement
/// with the closed-form span descriptions and irreducibility of each part.
pub fn decompose(l: &RootLattice) -> Result<DecompositionReport> {
    let kind = l.kind();
    let n = l.rank();
    let all_ops = root_v_ops(l);
    let ops: Vec<&VMonomialOp> = all_ops.iter().collect();
    let mut mismatches = Vec::new();
    let mut weight_table_deviations = Vec::new();

    let singulars = match kind.series {
        Series::E => None,
        _ => Some(find_singular_vectors(l)?),
    };
    if let Some(s) = &singulars {
        for v in s {
            if v.weight != v.table_weight {
                weight_table_deviations.push(format!("v{}: {} from the eigenvalues, table lists {}", v.tuple, v.weight, v.table_weight));
            }
            if !v.annihilated {
                mismatches.push(format!("v{}: not killed by every ẽ_j", v.tuple));
            }
        }
    }

    let mut remaining: BTreeSet<SignTuple> = SignTuple::all(n).collect();
    let mut submodules = Vec::new();
    let mut labels_separate = true;
    let mut seen_labels = BTreeSet::new();
    while let Some(&start) = remaining.iter().next() {
        let orb = orbit(&ops, start);
        for t in &orb {
            remaining.remove(t);
        }
        let basis: Vec<SignTuple> = orb.iter().copied().collect();
        let (singular, label) = match &singulars {
            Some(s) => {
                let inside: Vec<&super::decompose::SingularVector> =
                    s.iter().filter(|v| orb.contains(&v.tuple)).collect();
                if inside.len() != 1 {
                    labels_separate = false;
                }
                match inside.first() {
                    Some(v) => (Some(v.tuple), v.weight.clone()),
                    None => (None, "none".into()),
                }
            }
            None => (None, conserved_label(kind, &start)),
        };
        if !seen_labels.insert(label.clone()) && singulars.is_none() {
            labels_separate = false;
        }
        let reference = singular.unwrap_or(start);
        let pred = described(kind, &reference);
        let predicted: BTreeSet<SignTuple> = SignTuple::all(n).filter(|b| pred(b)).collect();
        let matches_description = predicted == orb;
        let commutant = commutant_dim(&ops, &basis);
        submodules.push(Submodule {
            singular,
            label,
            dim: basis.len(),
            basis,
            matches_description,
            commutant_dim: commutant,
        });
    }
    if let Some(s) = &singulars {
        // singular vectors counted once each
        let placed: usize = submodules.iter().filter(|m| m.singular.is_some()).count();
        if placed != s.len() {
            labels_separate = false;
        }
    }
    submodules.sort_by(|a, b| a.basis[0].neg_mask().cmp(&b.basis[0].neg_mask()));

    let invariant = submodules.iter().all(|m| {
        let set: BTreeSet<SignTuple> = m.basis.iter().copied().collect();
        ops.iter().all(|op| m.basis.iter().all(|t| set.contains(&op.image(*t).0)))
    });
    let mut union = BTreeSet::new();
    let disjoint = submodules.iter().all(|m| m.basis.iter().all(|t| union.insert(*t)));
    let total_dim = submodules.iter().map(|m| m.dim).sum();
    Ok(DecompositionReport {
        algebra: kind.to_string(),
        submodules,
        certificate: Certificate { invariant, disjoint, total_dim, expected_total: 1 << n, labels_separate },
        mismatches,
        weight_table_deviations,
    })
}

/// One positive root of the D_4 spin-matrix table.
#[derive(Clone, Debug, Serialize)]
pub struct PauliEntry {
    pub root: String,
    pub epsilon: String,
    pub class: usize,
    /// The class read from the computed 2×2 matrix.
    pub computed_class: Option<usize>,
    pub stated: String,
    /// `κ` with `2X̂_α = κ σ_p` on `(v, v′)`.
    pub computed: String,
    pub sign_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PauliReport {
    pub tuple: SignTuple,
    pub partner: SignTuple,
    pub entries: Vec<PauliEntry>,
    pub classes_exact: bool,
    pub closed_within_class: bool,
    pub sums_land_in_third_class: bool,
    pub sign_deviations: Vec<String>,
}

impl PauliReport {
    /// Class structure exact and every matrix equal to the stated one up
    /// to an overall sign (deviations are listed, not hidden).
    pub fn structure_holds(&self) -> bool {
        self.classes_exact && self.closed_within_class && self.sums_land_in_third_class
    }
}

/// `(m1 m2 m3; m4)`, class, stated sign of `i`, phase nodes (1-based).
const PAULI_TABLE: [([i64; 4], usize, i64, &[usize]); 12] = [
    ([0, 1, 0, 0], 1, 1, &[2]),
    ([1, 1, 1, 0], 1, 1, &[1, 2, 3]),
    ([1, 1, 0, 1], 1, 1, &[1, 2, 4]),
    ([0, 1, 1, 1], 1, 1, &[2, 3, 4]),
    ([1, 1, 0, 0], 2, -1, &[1, 2]),
    ([0, 1, 1, 0], 2, -1, &[2, 3]),
    ([0, 1, 0, 1], 2, -1, &[2, 4]),
    ([1, 1, 1, 1], 2, -1, &[1, 2, 3, 4]),
    ([1, 0, 0, 0], 3, -1, &[1]),
    ([0, 0, 1, 0], 3, -1, &[3]),
    ([0, 0, 0, 1], 3, -1, &[4]),
    ([1, 2, 1, 1], 3, -1, &[1, 3, 4]),
];

fn epsilon_name(l: &RootLattice, r: &LatticeVector) -> String {
    let n = l.rank();
    for j in 0..n {
        for k in j + 1..n {
            for plus in [false, true] {
                if l.epsilon_root(j, k, plus).ok().as_ref() == Some(r) {
                    return format!("e{}{}e{}", j + 1, if plus { '+' } else { '-' }, k + 1);
                }
            }
        }
    }
    "?".into()
}

/// The 2×2 matrices of `2X̂_α` on `span{v(c), v(−c_1, c_2, −c_3, −c_4)}` for
/// the twelve positive roots of D_4, compared with the spin-matrix table.
pub fn pauli_example(l: &RootLattice, t: SignTuple) -> Result<PauliReport> {
    if l.kind() != AlgebraKind::d(4) {
        return Err(Error::UnsupportedAlgebra(format!("the spin-matrix table is for D4, got {}", l.kind())));
    }
    let partner = t.flip(0b1101);
    let i = Scalar::i();
    let mut entries = Vec::new();
    let mut sign_deviations = Vec::new();
    let mut classes_exact = true;
    for (coords, class, sign, phase) in PAULI_TABLE {
        let root = LatticeVector(coords.to_vec());
        l.require_root(&root)?;
        let op = VMonomialOp::xhat2_from_oracle(l, &root)
            .ok_or_else(|| Error::InvalidArgument("root operator is not monomial".into()))?;
        // m[row][col] in the basis (v, v')
        let mut m = [[Scalar::zero(), Scalar::zero()], [Scalar::zero(), Scalar::zero()]];
        let mut closed = true;
        for (col, src) in [t, partner].iter().enumerate() {
            let (img, p) = op.image(*src);
            if img == t {
                m[0][col] = p.clone();
            } else if img == partner {
                m[1][col] = p.clone();
            } else {
                closed = false;
            }
        }
        let (computed_class, kappa) = if !closed {
            (None, Scalar::zero())
        } else if m[0][1].is_zero() && m[1][0].is_zero() && m[1][1] == -&m[0][0] {
            (Some(3), m[0][0].clone())
        } else if m[0][0].is_zero() && m[1][1].is_zero() && m[0][1] == m[1][0] {
            (Some(1), m[1][0].clone())
        } else if m[0][0].is_zero() && m[1][1].is_zero() && m[0][1] == -&m[1][0] {
            let k = &m[1][0] * &(-&i);
            (Some(2), k)
        } else {
            (None, Scalar::zero())
        };
        let mono: i64 = phase.iter().map(|&j| c(&t, j) as i64).product();
        let stated = i.scale_int(sign * mono);
        let sign_matches = computed_class == Some(class) && kappa == stated;
        if computed_class != Some(class) {
            classes_exact = false;
        }
        let name = l.root_name(&root);
        let phase_name: String = phase.iter().map(|j| format!("c{j}")).collect();
        let stated_str = format!("{}i {phase_name} σ{class}", if sign > 0 { "" } else { "-" });
        if computed_class == Some(class) && !sign_matches {
            sign_deviations.push(format!("2X̂[{name}] = {kappa} σ{class}, table: {stated_str}"));
        }
        entries.push(PauliEntry {
            epsilon: epsilon_name(l, &root),
            root: name,
            class,
            computed_class,
            stated: stated_str,
            computed: kappa.to_string(),
            sign_matches,
        });
    }
    let classes: Vec<(LatticeVector, usize)> =
        PAULI_TABLE.iter().map(|(c, p, _, _)| (LatticeVector(c.to_vec()), *p)).collect();
    let mut closed_within_class = true;
    let mut sums_land_in_third_class = true;
    for (a, pa) in &classes {
        for (b, pb) in &classes {
            if pa == pb {
                if l.is_root(&a.add(b)) || l.is_root(&a.sub(b)) {
                    closed_within_class = false;
                }
            } else {
                let s = a.add(b);
                if l.is_root(&s) {
                    let third = 6 - pa - pb;
                    if !classes.iter().any(|(r, p)| *r == s && *p == third) {
                        sums_land_in_third_class = false;
                    }
                }
            }
        }
    }
    Ok(PauliReport {
        tuple: t,
        partner,
        entries,
        classes_exact,
        closed_within_class,
        sums_land_in_third_class,
        sign_deviations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct D8Span {
    /// `(c1, c3, c5, c7)` and `c = b6 b8`.
    pub signs: String,
    pub dim: usize,
    pub commutant_dim: usize,
    /// Some root outside the subsystem maps this span into its complement.
    pub joined_by_outside_root: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct D8Report {
    pub subsystem_size: usize,
    pub closed: bool,
    pub span_rank: usize,
    pub simple_roots: Vec<String>,
    pub cartan_type: String,
    pub spans: Vec<D8Span>,
}

impl D8Report {
    pub fn all_passed(&self) -> bool {
        self.subsystem_size == 112
            && self.closed
            && self.span_rank == 8
            && self.cartan_type == "D8"
            && self.spans.len() == 32
            && self.spans.iter().all(|s| s.dim == 8 && s.commutant_dim == 1 && s.joined_by_outside_root)
    }
}

/// Rank of integer vectors, by exact elimination.
fn rank_of(vs: &[LatticeVector]) -> usize {
    let mut rows: Vec<Vec<i128>> = vs.iter().map(|v| v.0.iter().map(|&x| x as i128).collect()).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let (a, b) = (rows[rank][col], rows[r][col]);
                let g = num_integer::gcd(a, b);
                let (fa, fb) = (b / g, a / g);
                for k in 0..cols {
                    rows[r][k] = rows[r][k] * fb - rows[rank][k] * fa;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Names the Dynkin type of a simply-laced Cartan matrix when it is `D_n`.
fn dynkin_type(cartan: &[Vec<i64>]) -> String {
    let n = cartan.len();
    let deg: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| j != i && cartan[i][j] != 0).count()).collect();
    let edges: usize = deg.iter().sum::<usize>() / 2;
    let entries_ok = (0..n).all(|i| (0..n).all(|j| if i == j { cartan[i][j] == 2 } else { matches!(cartan[i][j], 0 | -1) }));
    if !entries_ok || edges + 1 != n {
        return "other".into();
    }
    let branch: Vec<usize> = (0..n).filter(|&i| deg[i] == 3).collect();
    if branch.len() != 1 || deg.iter().any(|&d| d > 3) {
        return if branch.is_empty() { format!("A{n}") } else { "other".into() };
    }
    // lengths of the three arms from the branch node
    let b = branch[0];
    let mut arms = Vec::new();
    for start in (0..n).filter(|&j| cartan[b][j] == -1) {
        let (mut prev, mut cur, mut len) = (b, start, 1);
        loop {
            let next = (0..n).find(|&j| j != prev && j != cur && cartan[cur][j] == -1);
            match next {
                Some(x) => {
                    prev = cur;
                    cur = x;
                    len += 1;
                }
                None => break,
            }
        }
        arms.push(len);
    }
    arms.sort();
    if arms.len() == 3 && arms[0] == 1 && arms[1] == 1 {
        format!("D{n}")
    } else if arms.len() == 3 && arms[0] == 1 && arms[1] == 2 && (2..=4).contains(&arms[2]) {
        format!("E{n}")
    } else {
        "other".into()
    }
}

/// Finds the roots of E_8 whose operators preserve `b_6 b_8`, checks they
/// form a D_8 root system, and that each constrained span is irreducible
/// under them while the full root set joins the two halves.
pub fn check_d8_in_e8(l: &RootLattice) -> Result<D8Report> {
    if l.kind() != AlgebraKind::e(8) {
        return Err(Error::UnsupportedAlgebra(format!("the D8 check needs E8, got {}", l.kind())));
    }
    let all_ops = root_v_ops(l);
    let pair = (1u32 << 5) | (1u32 << 7);
    let keeps = |op: &VMonomialOp| SignTuple::all(8).all(|t| (op.flip_of(t) & pair).count_ones().is_multiple_of(2));
    let inside: Vec<bool> = all_ops.iter().map(keeps).collect();
    let sub: Vec<LatticeVector> =
        l.roots().iter().zip(&inside).filter(|(_, &k)| k).map(|(r, _)| r.clone()).collect();
    let set: BTreeSet<&LatticeVector> = sub.iter().collect();
    let closed = sub.iter().all(|a| set.contains(&a.neg()))
        && sub
            .iter()
            .all(|a| sub.iter().all(|b| !l.is_root(&a.add(b)) || set.contains(&a.add(b))));
    let span_rank = rank_of(&sub);
    let positive: Vec<&LatticeVector> = sub.iter().filter(|r| r.is_positive()).collect();
    let pos_set: BTreeSet<&LatticeVector> = positive.iter().copied().collect();
    let simple: Vec<&LatticeVector> = positive
        .iter()
        .copied()
        .filter(|r| !positive.iter().any(|a| pos_set.contains(&r.sub(a)) && r.sub(a).is_positive()))
        .collect();
    let cartan: Vec<Vec<i64>> =
        simple.iter().map(|a| simple.iter().map(|b| l.inner(a, b)).collect()).collect();
    let cartan_type = dynkin_type(&cartan);

    let sub_ops: Vec<&VMonomialOp> = all_ops.iter().zip(&inside).filter(|(_, &k)| k).map(|(o, _)| o).collect();
    let out_ops: Vec<&VMonomialOp> = all_ops.iter().zip(&inside).filter(|(_, &k)| !k).map(|(o, _)| o).collect();
    let mut spans = Vec::new();
    for fixed in 0..16u32 {
        for cval in [1i8, -1] {
            let ok = |t: &SignTuple| {
                [1usize, 3, 5, 7].iter().enumerate().all(|(bit, &j)| (c(t, j) < 0) == (fixed >> bit & 1 == 1))
                    && c(t, 6) * c(t, 8) == cval
            };
            let basis: Vec<SignTuple> = SignTuple::all(8).filter(|t| ok(t)).collect();
            let commutant = commutant_dim(&sub_ops, &basis);
            let joined = out_ops.iter().any(|op| basis.iter().any(|t| !ok(&op.image(*t).0)));
            let sign = |x: bool| if x { '-' } else { '+' };
            spans.push(D8Span {
                signs: format!(
                    "c1={},c3={},c5={},c7={},b6b8={}",
                    sign(fixed & 1 == 1),
                    sign(fixed & 2 == 2),
                    sign(fixed & 4 == 4),
                    sign(fixed & 8 == 8),
                    sign(cval < 0)
                ),
                dim: basis.len(),
                commutant_dim: commutant,
                joined_by_outside_root: joined,
            });
        }
    }
    Ok(D8Report {
        subsystem_size: sub.len(),
        closed,
        span_rank,
        simple_roots: simple.iter().map(|r| l.root_name(r)).collect(),
        cartan_type,
        spans,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(s: &str) -> RootLattice {
        RootLattice::parse(s).unwrap()
    }

    #[test]
    fn d4_singular_vectors() {
        let s = find_singular_vectors(&lat("D4")).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.iter().all(|v| v.tuple.c(0) == 1 && v.annihilated));
        // the table swaps primed and unprimed at node m−1
        let swapped = s.iter().filter(|v| v.weight != v.table_weight).count();
        assert_eq!(swapped, 4);
        assert!(s.iter().filter(|v| v.tuple.c(2) == 1).all(|v| v.weight == v.table_weight));
    }

    /// `4h̃_j v`, `4h̃'_j v` and `2h̃_0 v` from the closed-form eigenvalues.
    fn d_eigen_closed_form(n: usize, t: &SignTuple) -> BTreeMap<String, i64> {
        let m = n / 2;
        let ci = |j: usize| c(t, j) as i64;
        let mut out = BTreeMap::new();
        out.insert("0".to_string(), (1 - ci(1)) / 2);
        let tail = if n.is_multiple_of(2) { ci(2 * m - 1) * ci(2 * m) } else { ci(2 * m) * ci(2 * m + 1) };
        for (primed, s) in [(false, -1), (true, 1)] {
            let mark = if primed { "'" } else { "" };
            for j in 1..m {
                let x = ci(2 * j - 1) * (1 - ci(2 * j - 1) * ci(2 * j + 1)) * (1 + s * tail);
                out.insert(format!("{j}{mark}"), x / 4);
            }
            let x = if n.is_multiple_of(2) {
                ci(2 * m - 3) * (1 + ci(2 * m - 3) * ci(2 * m - 1)) * (1 + s * tail) / 4
            } else {
                ci(2 * m - 1) * (1 + s * tail) / 2
            };
            out.insert(format!("{m}{mark}"), x);
        }
        out
    }

    #[test]
    fn d_eigenvalues_match_closed_form() {
        for n in [4, 5, 6] {
            for v in find_singular_vectors(&lat(&format!("D{n}"))).unwrap() {
                assert_eq!(v.eigenvalues, d_eigen_closed_form(n, &v.tuple), "D{n} {}", v.tuple);
            }
        }
    }

    #[test]
    fn a_series_weights() {
        let s = find_singular_vectors(&lat("A3")).unwrap();
        assert_eq!(s.len(), 4);
        for v in &s {
            let w = if v.tuple.c(2) == 1 { "Λ̃_2" } else { "Λ̃_1" };
            assert_eq!(v.weight, w);
        }
        let s = find_singular_vectors(&lat("A4")).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|v| v.weight == "Λ̃_2"));
    }

    #[test]
    fn decomposition_certificates() {
        for (name, count, dim) in [("D4", 8, 2), ("A3", 4, 2), ("A4", 4, 4), ("E6", 8, 8), ("D5", 8, 4)] {
            let r = decompose(&lat(name)).unwrap();
            assert!(r.all_passed(), "{name}: {:?}", r.mismatches);
            assert_eq!(r.submodules.len(), count, "{name}");
            assert!(r.submodules.iter().all(|m| m.dim == dim), "{name}");
        }
    }

    #[test]
    fn commutant_of_full_space_is_large_without_operators() {
        let basis: Vec<SignTuple> = SignTuple::all(2).collect();
        assert_eq!(commutant_dim(&[], &basis), 16);
        let l = lat("D4");
        let ops = root_v_ops(&l);
        let refs: Vec<&VMonomialOp> = ops.iter().collect();
        let full: Vec<SignTuple> = SignTuple::all(4).collect();
        assert!(commutant_dim(&refs, &full) >= 8);
        let orb: Vec<SignTuple> = orbit(&refs, full[0]).into_iter().collect();
        assert_eq!(commutant_dim(&refs, &orb), 1);
    }

    #[test]
    fn pauli_structure() {
        let l = lat("D4");
        for t in SignTuple::all(4) {
            let r = pauli_example(&l, t).unwrap();
            assert!(r.structure_holds(), "{t}");
        }
    }

    #[test]
    fn dynkin_names() {
        let d4 = vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]];
        assert_eq!(dynkin_type(&d4), "D4");
        let a3 = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(dynkin_type(&a3), "A3");
        assert_eq!(rank_of(&[LatticeVector(vec![1, 2]), LatticeVector(vec![2, 4])]), 1);
    }
}

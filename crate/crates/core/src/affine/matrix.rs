//! Sparse square matrices over `Scalar`, stored by column.

use std::collections::BTreeMap;
use std::fmt;

use crate::groupalg::VMonomialOp;
use crate::scalar::Scalar;

/// Column `j` maps row index to entry; zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    cols: Vec<BTreeMap<u32, Scalar>>,
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix { dim, cols: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for j in 0..dim {
            m.cols[j].insert(j as u32, Scalar::one());
        }
        m
    }

    /// The matrix of a monomial operator in the v-basis (tuple masks index
    /// rows and columns).
    pub fn from_monomial(op: &VMonomialOp) -> Self {
        let dim = 1usize << op.rank();
        let mut m = Self::zero(dim);
        for (j, col) in m.cols.iter_mut().enumerate() {
            let (t, p) = op.image(crate::groupalg::SignTuple::new(op.rank(), j as u32));
            col.insert(t.neg_mask(), p.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.cols[j].get(&(i as u32)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn col(&self, j: usize) -> &BTreeMap<u32, Scalar> {
        &self.cols[j]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    fn add_to(col: &mut BTreeMap<u32, Scalar>, i: u32, v: Scalar) {
        if v.is_zero() {
            return;
        }
        let e = col.entry(i).or_insert_with(Scalar::zero);
        *e += &v;
        if e.is_zero() {
            col.remove(&i);
        }
    }

    /// `self += s · o`.
    pub fn add_scaled(&mut self, o: &SparseMatrix, s: &Scalar) {
        assert_eq!(self.dim, o.dim);
        for (a, b) in self.cols.iter_mut().zip(&o.cols) {
            for (i, v) in b {
                Self::add_to(a, *i, v * s);
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut m = Self::zero(self.dim);
        m.add_scaled(self, s);
        m
    }

    pub fn sub(&self, o: &SparseMatrix) -> Self {
        let mut m = self.clone();
        m.add_scaled(o, &Scalar::from_int(-1));
        m
    }

    /// `self · o`.
    pub fn mul(&self, o: &SparseMatrix) -> Self {
        assert_eq!(self.dim, o.dim);
        let mut m = Self::zero(self.dim);
        for (j, col) in o.cols.iter().enumerate() {
            for (k, v) in col {
                for (i, w) in &self.cols[*k as usize] {
                    Self::add_to(&mut m.cols[j], *i, w * v);
                }
            }
        }
        m
    }

    /// `[self, o] = self·o − o·self`.
    pub fn bracket(&self, o: &SparseMatrix) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Diagonal entries, if the matrix is diagonal.
    pub fn diagonal(&self) -> Option<Vec<Scalar>> {
        let mut d = Vec::with_capacity(self.dim);
        for (j, col) in self.cols.iter().enumerate() {
            match col.len() {
                0 => d.push(Scalar::zero()),
                1 if col.contains_key(&(j as u32)) => d.push(col[&(j as u32)].clone()),
                _ => return None,
            }
        }
        Some(d)
    }

    /// The scalar `c` with `self = c · o`, if any. `o` must be nonzero.
    pub fn ratio_to(&self, o: &SparseMatrix) -> Option<Scalar> {
        let (j, i, v) = o
            .cols
            .iter()
            .enumerate()
            .find_map(|(j, c)| c.iter().next().map(|(i, v)| (j, *i, v)))?;
        let c = &self.entry(i as usize, j) * &v.inv()?;
        (o.scale(&c) == *self).then_some(c)
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "[{i},{j}]={v}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_pauli_like_matrices() {
        let mut x = SparseMatrix::zero(2);
        x.cols[0].insert(1, Scalar::one());
        x.cols[1].insert(0, Scalar::one());
        let mut z = SparseMatrix::zero(2);
        z.cols[0].insert(0, Scalar::one());
        z.cols[1].insert(1, Scalar::from_int(-1));
        // [σ1, σ3] = −2i σ2 with σ2 = [[0, −i], [i, 0]]
        let b = x.bracket(&z);
        assert_eq!(b.entry(0, 1), Scalar::from_int(-2));
        assert_eq!(b.entry(1, 0), Scalar::from_int(2));
        assert!(z.diagonal().is_some());
        assert!(x.diagonal().is_none());
        assert_eq!(x.scale(&Scalar::i()).ratio_to(&x), Some(Scalar::i()));
        assert_eq!(z.ratio_to(&x), None);
        assert!(x.mul(&x) == SparseMatrix::identity(2));
    }
}

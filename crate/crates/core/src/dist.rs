//! Two-variable formal distributions: expansions of `(z−w)^a (z+w)^b z^p w^q`
//! in the regions `|z| > |w|` and `|w| > |z|`, their differences, and mode tables.
//!
//! A coefficient at `(m, k)` always means the coefficient of `z^{-m} w^{-k}`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::scalar::{Rational, Scalar};

/// `coeff · (z−w)^a (z+w)^b z^p w^q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KernelTerm {
    pub a: i64,
    pub b: i64,
    pub p: u32,
    pub q: u32,
    pub coeff: Rational,
}

impl KernelTerm {
    /// Total homogeneous degree; the term's δ-part lives on `m + k = −degree`.
    pub fn degree(&self) -> i64 {
        self.a + self.b + self.p as i64 + self.q as i64
    }
}

/// A finite sum of kernel terms, sorted and merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Kernel {
    terms: Vec<KernelTerm>,
}

impl Kernel {
    pub fn zero() -> Self {
        Kernel::default()
    }

    pub fn term(coeff: Rational, a: i64, b: i64, p: u32, q: u32) -> Self {
        Kernel::zero().plus(coeff, a, b, p, q)
    }

    /// Adds one more term.
    pub fn plus(mut self, coeff: Rational, a: i64, b: i64, p: u32, q: u32) -> Self {
        self.terms.push(KernelTerm { a, b, p, q, coeff });
        self.normalize();
        self
    }

    pub fn add(&self, o: &Kernel) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        let mut k = Kernel { terms };
        k.normalize();
        k
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut k = Kernel {
            terms: self.terms.iter().map(|t| KernelTerm { coeff: &t.coeff * r, ..t.clone() }).collect(),
        };
        k.normalize();
        k
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    fn normalize(&mut self) {
        self.terms.sort_by_key(|x| (x.a, x.b, x.p, x.q));
        let mut out: Vec<KernelTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            match out.last_mut() {
                Some(last) if (last.a, last.b, last.p, last.q) == (t.a, t.b, t.p, t.q) => {
                    last.coeff = &last.coeff + &t.coeff;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        self.terms = out;
    }

    /// `1/(z−w)`.
    pub fn inv_minus() -> Self {
        Kernel::term(Rational::one(), -1, 0, 0, 0)
    }

    /// `1/(z+w)`.
    pub fn inv_plus() -> Self {
        Kernel::term(Rational::one(), 0, -1, 0, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `|z| > |w|`
    Zw,
    /// `|w| > |z|`
    Wz,
}

/// Generalized binomial coefficient `C(a, i)` for any integer `a`.
pub fn binom(a: i64, i: u32) -> Rational {
    let mut c = Rational::one();
    for t in 0..i as i64 {
        c = &(&c * &Rational::from_int(a - t)) * &Rational::new(1, t + 1);
    }
    c
}

/// Coefficient of `t^n` in `(1−t)^a (1+t)^b`.
pub fn series_coeff(a: i64, b: i64, n: u32) -> Rational {
    let mut s = Rational::zero();
    for i in 0..=n {
        let mut x = &binom(a, i) * &binom(b, n - i);
        if i % 2 == 1 {
            x = -x;
        }
        s = &s + &x;
    }
    s
}

fn term_coeff(t: &KernelTerm, region: Region, m: i64, k: i64) -> Rational {
    let (p, q) = (t.p as i64, t.q as i64);
    match region {
        // z^{a+b} (1 − w/z)^a (1 + w/z)^b z^p w^q
        Region::Zw => {
            let n = -k - q;
            if n < 0 || m != n - t.a - t.b - p {
                return Rational::zero();
            }
            &t.coeff * &series_coeff(t.a, t.b, n as u32)
        }
        // (−1)^a w^{a+b} (1 − z/w)^a (1 + z/w)^b z^p w^q
        Region::Wz => {
            let n = -m - p;
            if n < 0 || k != n - t.a - t.b - q {
                return Rational::zero();
            }
            let c = &t.coeff * &series_coeff(t.a, t.b, n as u32);
            if t.a.rem_euclid(2) == 1 {
                -c
            } else {
                c
            }
        }
    }
}

/// Exact coefficient of `z^{-m} w^{-k}` in the expansion of `kernel` in `region`.
pub fn coeff(kernel: &Kernel, region: Region, m: i64, k: i64) -> Rational {
    kernel.terms.iter().fold(Rational::zero(), |s, t| &s + &term_coeff(t, region, m, k))
}

/// Coefficient of `z^{-m} w^{-k}` in `(ι_{z,w} − ι_{w,z}) kernel`.
pub fn diff_coeff(kernel: &Kernel, m: i64, k: i64) -> Rational {
    &coeff(kernel, Region::Zw, m, k) - &coeff(kernel, Region::Wz, m, k)
}

/// A dense table of coefficients for `|m| ≤ mz`, `|k| ≤ mw`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiSeriesWindow {
    mz: i64,
    mw: i64,
    data: Vec<Scalar>,
}

impl BiSeriesWindow {
    pub fn zero(mz: i64, mw: i64) -> Self {
        assert!(mz >= 0 && mw >= 0);
        let len = ((2 * mz + 1) * (2 * mw + 1)) as usize;
        BiSeriesWindow { mz, mw, data: vec![Scalar::zero(); len] }
    }

    pub fn from_fn(mz: i64, mw: i64, f: impl Fn(i64, i64) -> Scalar) -> Self {
        let mut w = Self::zero(mz, mw);
        for m in -mz..=mz {
            for k in -mw..=mw {
                let i = w.index(m, k);
                w.data[i] = f(m, k);
            }
        }
        w
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.mz, self.mw)
    }

    fn index(&self, m: i64, k: i64) -> usize {
        assert!(m.abs() <= self.mz && k.abs() <= self.mw, "({m},{k}) outside window");
        ((m + self.mz) * (2 * self.mw + 1) + (k + self.mw)) as usize
    }

    pub fn get(&self, m: i64, k: i64) -> &Scalar {
        &self.data[self.index(m, k)]
    }

    pub fn set(&mut self, m: i64, k: i64, v: Scalar) {
        let i = self.index(m, k);
        self.data[i] = v;
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.bounds(), o.bounds());
        BiSeriesWindow {
            mz: self.mz,
            mw: self.mw,
            data: self.data.iter().zip(&o.data).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        BiSeriesWindow { mz: self.mz, mw: self.mw, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries as `(m, k, value)`.
    pub fn nonzero(&self) -> Vec<(i64, i64, Scalar)> {
        let mut out = Vec::new();
        for m in -self.mz..=self.mz {
            for k in -self.mw..=self.mw {
                let v = self.get(m, k);
                if !v.is_zero() {
                    out.push((m, k, v.clone()));
                }
            }
        }
        out
    }

    /// Tab-separated rows `m k value`, zero entries skipped.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("m\tk\tcoeff\n");
        for (m, k, v) in self.nonzero() {
            let _ = writeln!(s, "{m}\t{k}\t{v}");
        }
        s
    }
}

pub fn iota_expand(kernel: &Kernel, region: Region, mz: i64, mw: i64) -> BiSeriesWindow {
    BiSeriesWindow::from_fn(mz, mw, |m, k| Scalar::from_rational(coeff(kernel, region, m, k)))
}

pub fn iota_diff(kernel: &Kernel, mz: i64, mw: i64) -> BiSeriesWindow {
    BiSeriesWindow::from_fn(mz, mw, |m, k| Scalar::from_rational(diff_coeff(kernel, m, k)))
}

/// `Σ_{r odd} z^{-r-1} w^r`.
pub fn odd_delta(mz: i64, mw: i64) -> BiSeriesWindow {
    BiSeriesWindow::from_fn(mz, mw, |m, k| {
        let r = -k;
        if m == r + 1 && r.rem_euclid(2) == 1 {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn geometric_expansion() {
        let w = iota_expand(&Kernel::inv_minus(), Region::Zw, 6, 6);
        for rr in 0..=5 {
            assert_eq!(*w.get(rr + 1, -rr), s(1));
        }
        assert_eq!(*w.get(0, 0), s(0));
        assert_eq!(*w.get(-1, 2), s(0));
    }

    #[test]
    fn w_over_z_plus_w() {
        let k = Kernel::term(r(1), 0, -1, 0, 1);
        let w = iota_expand(&k, Region::Zw, 8, 8);
        for p in 0..=6 {
            let sign = if p % 2 == 0 { 1 } else { -1 };
            assert_eq!(*w.get(p + 1, -p - 1), s(sign));
        }
        assert_eq!(w.nonzero().len(), 8);
    }

    #[test]
    fn ratio_leading_term() {
        let k = Kernel::term(r(1), 1, -1, 0, 0);
        assert_eq!(coeff(&k, Region::Zw, 0, 0), r(1));
        assert_eq!(coeff(&k, Region::Zw, 1, -1), r(-2));
    }

    #[test]
    fn delta_tables() {
        let m = 12;
        let d = iota_diff(&Kernel::inv_minus(), m, m);
        let b = iota_diff(&Kernel::inv_plus(), m, m);
        let c = iota_diff(&Kernel::term(r(1), -2, 0, 0, 1), m, m);
        let dd = iota_diff(&Kernel::term(r(-1), 0, -2, 0, 1), m, m);
        for mm in -m..=m {
            for k in -m..=m {
                let on = mm == -k + 1;
                let rr = -k;
                let sign = if rr.rem_euclid(2) == 0 { 1 } else { -1 };
                assert_eq!(*d.get(mm, k), s(on as i64));
                assert_eq!(*b.get(mm, k), s(if on { sign } else { 0 }));
                assert_eq!(*c.get(mm, k), s(if on { rr } else { 0 }));
                assert_eq!(*dd.get(mm, k), s(if on { sign * rr } else { 0 }));
            }
        }
        let half = Rational::new(1, 2);
        let odd = Kernel::inv_minus().scale(&half).add(&Kernel::inv_plus().scale(&-half.clone()));
        assert_eq!(iota_diff(&odd, m, m), odd_delta(m, m));
        // w/(z²−w²)
        let alt = Kernel::term(r(1), -1, -1, 0, 1);
        assert_eq!(iota_diff(&alt, m, m), odd_delta(m, m));
        assert_eq!(*odd_delta(4, 4).get(2, -1), s(1));
        assert_eq!(*odd_delta(4, 4).get(1, 0), s(0));
    }

    #[test]
    fn polynomial_kernels_have_no_delta_part() {
        let k = Kernel::term(r(3), 2, 1, 1, 0).plus(r(-1), 0, 3, 0, 2);
        assert!(iota_diff(&k, 8, 8).is_zero());
    }

    #[test]
    fn square_rewrite() {
        let sq = Kernel::term(r(1), 2, -2, 0, 0);
        let rw = Kernel::term(r(1), 0, 0, 0, 0).plus(r(-4), 0, -1, 0, 1).plus(r(4), 0, -2, 0, 2);
        for region in [Region::Zw, Region::Wz] {
            assert_eq!(iota_expand(&sq, region, 10, 10), iota_expand(&rw, region, 10, 10));
        }
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binom(-1, 3), r(-1));
        assert_eq!(binom(-2, 2), r(3));
        assert_eq!(binom(5, 2), r(10));
        assert_eq!(binom(2, 3), r(0));
    }
}

//! Exact arithmetic in the field Q(i, √2).
//!
//! Elements are stored on the basis `{1, i, √2, i√2}` with rational
//! coordinates. Rationals keep an `i64` fast path and promote to
//! arbitrary precision on overflow, so every result is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number.
///
/// Small values live in machine words; anything that would overflow is
/// carried as a [`BigRational`]. The representation is canonical, so
/// derived equality and hashing are value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// numerator, denominator; denominator > 0 and the pair is reduced
    Small(i64, i64),
    /// only used when the reduced value does not fit `Small`
    Big(Box<BigRational>),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// `n / d`; panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d != 0);
        if n == 0 {
            return Self::zero();
        }
        let neg = (n < 0) != (d < 0);
        let (un, ud) = (n.unsigned_abs(), d.unsigned_abs());
        if ud == 1 && un <= i64::MAX as u128 {
            let sn = if neg { -(un as i64) } else { un as i64 };
            return Rational(Repr::Small(sn, 1));
        }
        if un <= u64::MAX as u128 && ud <= u64::MAX as u128 {
            let g = (un as u64).gcd(&(ud as u64)) as u128;
            let (un, ud) = (un / g, ud / g);
            if un <= i64::MAX as u128 && ud <= i64::MAX as u128 {
                let sn = if neg { -(un as i64) } else { un as i64 };
                return Rational(Repr::Small(sn, ud as i64));
            }
        }
        let g = un.gcd(&ud);
        let (un, ud) = (un / g, ud / g);
        if un <= i64::MAX as u128 && ud <= i64::MAX as u128 {
            let sn = if neg { -(un as i64) } else { un as i64 };
            Rational(Repr::Small(sn, ud as i64))
        } else {
            let bn = BigInt::from(un);
            let bn = if neg { -bn } else { bn };
            Rational(Repr::Big(Box::new(BigRational::new_raw(bn, BigInt::from(ud)))))
        }
    }

    pub fn from_big(r: BigRational) -> Self {
        // BigRational arithmetic keeps values reduced with a positive denominator
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            Rational(Repr::Small(n, d))
        } else {
            Rational(Repr::Big(Box::new(r)))
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// The value as an `i64` if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            _ => None,
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Self::from_i128(*d as i128, *n as i128)),
            Repr::Big(b) => Some(Self::from_big(b.recip())),
        }
    }

    fn add_ref(&self, o: &Self) -> Self {
        match (&self.0, &o.0) {
            (Repr::Small(0, _), _) => o.clone(),
            (_, Repr::Small(0, _)) => self.clone(),
            (Repr::Small(a, 1), Repr::Small(b, 1)) => match a.checked_add(*b) {
                Some(s) => Rational(Repr::Small(s, 1)),
                None => Self::from_i128(*a as i128 + *b as i128, 1),
            },
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if b == d {
                    Self::from_i128(*a as i128 + *c as i128, *b as i128)
                } else {
                    let n = *a as i128 * *d as i128 + *c as i128 * *b as i128;
                    Self::from_i128(n, *b as i128 * *d as i128)
                }
            }
            _ => Self::from_big(self.to_big() + o.to_big()),
        }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        match (&self.0, &o.0) {
            (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Self::zero(),
            (Repr::Small(1, 1), _) => o.clone(),
            (_, Repr::Small(1, 1)) => self.clone(),
            (Repr::Small(a, 1), Repr::Small(c, 1)) => match a.checked_mul(*c) {
                Some(p) => Rational(Repr::Small(p, 1)),
                None => Self::from_i128(*a as i128 * *c as i128, 1),
            },
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                // cross-cancel so the result is already reduced
                let g1 = a.unsigned_abs().gcd(&d.unsigned_abs()) as i64;
                let g2 = c.unsigned_abs().gcd(&b.unsigned_abs()) as i64;
                let (n1, d1) = (a / g1, d / g1);
                let (n2, d2) = (c / g2, b / g2);
                match (n1.checked_mul(n2), d1.checked_mul(d2)) {
                    (Some(n), Some(d)) => Rational(Repr::Small(n, d)),
                    _ => Self::from_i128(n1 as i128 * n2 as i128, d1 as i128 * d2 as i128),
                }
            }
            _ => Self::from_big(self.to_big() * o.to_big()),
        }
    }

    fn neg_ref(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, *d)),
                None => Self::from_big(-self.to_big()),
            },
            Repr::Big(b) => Self::from_big(-(**b).clone()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_big(BigRational::new(n, d)))
    }
}

macro_rules! rational_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                $body(self, o)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                $body(&self, &o)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                $body(&self, o)
            }
        }
    };
}

rational_binop!(Add, add, |a: &Rational, b: &Rational| a.add_ref(b));
rational_binop!(Sub, sub, |a: &Rational, b: &Rational| a.add_ref(&b.neg_ref()));
rational_binop!(Mul, mul, |a: &Rational, b: &Rational| a.mul_ref(b));

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.neg_ref()
    }
}

/// Index of a basis element of Q(i, √2) over Q.
const ONE: usize = 0;
const I: usize = 1;
const R2: usize = 2;
const IR2: usize = 3;

/// Products of basis elements: `e_a * e_b = MUL_TABLE[a][b].1 * e_{MUL_TABLE[a][b].0}`.
const MUL_TABLE: [[(usize, i64); 4]; 4] = [
    [(ONE, 1), (I, 1), (R2, 1), (IR2, 1)],
    [(I, 1), (ONE, -1), (IR2, 1), (R2, -1)],
    [(R2, 1), (IR2, 1), (ONE, 2), (I, 2)],
    [(IR2, 1), (R2, -1), (I, 2), (ONE, -2)],
];

/// An element `a + b i + c √2 + d i√2` of Q(i, √2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    c: [Rational; 4],
}

impl Scalar {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Scalar { c: [a, b, c, d] }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(n, d))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar { c: [r, Rational::zero(), Rational::zero(), Rational::zero()] }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::unit(I)
    }

    /// The positive square root of 2.
    pub fn sqrt2() -> Self {
        Self::unit(R2)
    }

    /// `i √2`.
    pub fn i_sqrt2() -> Self {
        Self::unit(IR2)
    }

    fn unit(k: usize) -> Self {
        let mut s = Self::zero();
        s.c[k] = Rational::one();
        s
    }

    /// Coordinates on `{1, i, √2, i√2}`.
    pub fn coords(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rational::is_zero)
    }

    /// The value as a rational number if it lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.c[1..].iter().all(Rational::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    /// The value as an integer if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational().and_then(Rational::to_i64)
    }

    /// Complex conjugation `i -> -i`.
    pub fn conj(&self) -> Self {
        Scalar {
            c: [self.c[0].clone(), -&self.c[1], self.c[2].clone(), -&self.c[3]],
        }
    }

    /// The Galois conjugate `√2 -> -√2`.
    pub fn sqrt2_conj(&self) -> Self {
        Scalar {
            c: [self.c[0].clone(), self.c[1].clone(), -&self.c[2], -&self.c[3]],
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar { c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r] }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        match n {
            0 => Self::zero(),
            1 => self.clone(),
            -1 => -self,
            _ => self.scale(&Rational::from_int(n)),
        }
    }

    /// Multiplicative inverse, or `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x * conj(x) lies in Q(√2); multiply again by its √2-conjugate to reach Q.
        let x_bar = self.conj();
        let n1 = self * &x_bar;
        let n1_bar = n1.sqrt2_conj();
        let n2 = &n1 * &n1_bar;
        let q = n2.as_rational().expect("norm lies in Q").recip()?;
        Some((&x_bar * &n1_bar).scale(&q))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Index of the only nonzero coordinate, if there is exactly one.
    fn single(&self) -> Option<usize> {
        let mut found = None;
        for (i, x) in self.c.iter().enumerate() {
            if !x.is_zero() {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.single(), o.single()) {
            let (k, f) = MUL_TABLE[a][b];
            let mut p = &self.c[a] * &o.c[b];
            if f != 1 {
                p = p * Rational::from_int(f);
            }
            let mut out = Self::zero();
            out.c[k] = p;
            return out;
        }
        let mut out = Self::zero();
        for (a, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in o.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let (k, f) = MUL_TABLE[a][b];
                let mut p = x * y;
                if f != 1 {
                    p = p * Rational::from_int(f);
                }
                out.c[k] = &out.c[k] + &p;
            }
        }
        out
    }

    /// `self += a * b`.
    pub fn add_mul(&mut self, a: &Scalar, b: &Scalar) {
        let p = a.mul_ref(b);
        *self += &p;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        for k in 0..4 {
            if !o.c[k].is_zero() {
                self.c[k] = &self.c[k] + &o.c[k];
            }
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        for k in 0..4 {
            if !o.c[k].is_zero() {
                self.c[k] = &self.c[k] - &o.c[k];
            }
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = self.mul_ref(o);
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut s = self.clone();
        s += o;
        s
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        let mut s = self.clone();
        s -= o;
        s
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_ref(o)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, o: Scalar) -> Scalar {
        self += &o;
        self
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, o: Scalar) -> Scalar {
        self -= &o;
        self
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.mul_ref(&o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

const UNIT_NAMES: [&str; 4] = ["", "i", "r2", "i*r2"];

/// Renders as e.g. `1/2 - i + 3*r2 - 2/3*i*r2`; zero renders as `0`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let neg = x.signum() < 0;
            let mag = if neg { -x } else { x.clone() };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit_only = k != ONE && mag == Rational::one();
            match (k, unit_only) {
                (ONE, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(UNIT_NAMES[k])?,
                _ => write!(f, "{mag}*{}", UNIT_NAMES[k])?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let mut out = Scalar::zero();
        let mut terms: Vec<(bool, String)> = Vec::new();
        for ch in compact.chars() {
            match ch {
                '+' | '-' => terms.push((ch == '-', String::new())),
                _ => {
                    if terms.is_empty() {
                        terms.push((false, String::new()));
                    }
                    terms.last_mut().expect("nonempty").1.push(ch);
                }
            }
        }
        for (neg, body) in terms {
            let (coef, unit) = split_term(&body)?;
            let coef = if neg { -coef } else { coef };
            out.c[unit] = &out.c[unit] + &coef;
        }
        Ok(out)
    }
}

fn split_term(body: &str) -> Result<(Rational, usize)> {
    for k in [IR2, R2, I] {
        let name = UNIT_NAMES[k];
        if body == name {
            return Ok((Rational::one(), k));
        }
        if let Some(head) = body.strip_suffix(name) {
            if let Some(c) = head.strip_suffix('*') {
                return Ok((c.parse()?, k));
            }
        }
    }
    Ok((body.parse()?, ONE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_products() {
        let i = Scalar::i();
        let r = Scalar::sqrt2();
        assert_eq!(&i * &i, Scalar::from_int(-1));
        assert_eq!(&r * &r, Scalar::from_int(2));
        assert_eq!(&i * &r, Scalar::i_sqrt2());
        let ir = Scalar::i_sqrt2();
        assert_eq!(&ir * &ir, Scalar::from_int(-2));
    }

    #[test]
    fn inverse_of_mixed_element() {
        let x: Scalar = "1/2 - i + 3*r2 - 2/3*i*r2".parse().unwrap();
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Scalar::one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn render_and_parse() {
        let x = Scalar::new(
            Rational::new(1, 2),
            Rational::from_int(-1),
            Rational::from_int(3),
            Rational::new(-2, 3),
        );
        assert_eq!(x.to_string(), "1/2 - i + 3*r2 - 2/3*i*r2");
        assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!("-i*r2".parse::<Scalar>().unwrap(), -Scalar::i_sqrt2());
    }

    #[test]
    fn overflow_promotes_to_big() {
        let big = Rational::from_int(i64::MAX);
        let sum = &big + &big;
        assert_eq!(sum.to_string(), "18446744073709551614");
        let back = &sum - &big;
        assert_eq!(back, big);
        let tiny = Rational::new(1, i64::MAX);
        let sq = &tiny * &tiny;
        assert_eq!(&sq * &Rational::from_int(i64::MAX), tiny);
    }

    #[test]
    fn rational_parse_reduces() {
        let r: Rational = "6/-4".parse().unwrap();
        assert_eq!(r, Rational::new(-3, 2));
        assert!("1/0".parse::<Rational>().is_err());
    }
}

//! The skein algebra of the torus in the `(p,q)_T` basis, and curve
//! reduction in the skein module of the 3-torus.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactalg::RationalFunc;

/// Representative of `(p,q) ~ (-p,-q)` with `p > 0`, or `p = 0` and `q >= 0`.
pub fn canonical(p: i64, q: i64) -> (i64, i64) {
    if p < 0 || (p == 0 && q < 0) {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// Linear combination of the `(p,q)_T`; the key `(0,0)` is the empty
/// multicurve, so `(0,0)_T` is stored as `2` at `(0,0)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct T2Element {
    terms: BTreeMap<(i64, i64), RationalFunc>,
}

impl T2Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn empty() -> Self {
        let mut t = Self::zero();
        t.add_raw((0, 0), RationalFunc::one());
        t
    }

    /// The element `(p,q)_T`.
    pub fn from_curve(p: i64, q: i64) -> Self {
        let mut t = Self::zero();
        t.add_term((p, q), RationalFunc::one());
        t
    }

    fn add_term(&mut self, (p, q): (i64, i64), c: RationalFunc) {
        let (key, c) = if (p, q) == (0, 0) { ((0, 0), &c + &c) } else { (canonical(p, q), c) };
        let e = self.terms.entry(key).or_insert_with(RationalFunc::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Coefficient of `(p,q)_T`, or of the empty multicurve at `(0,0)`.
    pub fn coeff(&self, p: i64, q: i64) -> RationalFunc {
        self.terms.get(&canonical(p, q)).cloned().unwrap_or_else(RationalFunc::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &RationalFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            let e = out.terms.entry(k).or_insert_with(RationalFunc::zero);
            *e = &*e + c;
            if e.is_zero() {
                out.terms.remove(&k);
            }
        }
        out
    }

    pub fn scale(&self, c: &RationalFunc) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&RationalFunc::from(-1)))
    }

    /// Bilinear extension of the product-to-sum formula.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (&(p, q), c) in &self.terms {
            for (&(r, s), d) in &o.terms {
                let cd = c * d;
                if (p, q) == (0, 0) {
                    out.add_raw((r, s), cd);
                } else if (r, s) == (0, 0) {
                    out.add_raw((p, q), cd);
                } else {
                    out = out.add(&fg_product((p, q), (r, s)).scale(&cd));
                }
            }
        }
        out
    }

    fn add_raw(&mut self, k: (i64, i64), c: RationalFunc) {
        let e = self.terms.entry(k).or_insert_with(RationalFunc::zero);
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl fmt::Display for T2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(p, q), c)| {
                let b = if (p, q) == (0, 0) { "\u{2205}".to_string() } else { format!("({p},{q})_T") };
                if c.is_one() {
                    b
                } else {
                    format!("({c})*{b}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(p,q)_T * (r,s)_T = A^d (p+r,q+s)_T + A^-d (p-r,q-s)_T` with `d = ps - qr`.
pub fn fg_product(a: (i64, i64), b: (i64, i64)) -> T2Element {
    let ((p, q), (r, s)) = (a, b);
    let d = p * s - q * r;
    let mut out = T2Element::zero();
    out.add_term((p + r, q + s), RationalFunc::monomial(1, d));
    out.add_term((p - r, q - s), RationalFunc::monomial(1, -d));
    out
}

/// `T_n(gamma)` by the recursion `T_{n+1} = gamma T_n - T_{n-1}`.
pub fn tn_expand(gamma: (i64, i64), n: usize) -> Result<T2Element> {
    let (p, q) = gamma;
    if p.gcd(&q) != 1 {
        return Err(Error::Invalid(format!("({p},{q}) is not primitive")));
    }
    let g = T2Element::from_curve(p, q);
    let mut prev = T2Element::from_curve(0, 0);
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = g.clone();
    for _ in 1..n {
        let next = g.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Classes of curves in the abelianized torus algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbClass {
    X10,
    X01,
    X11,
    X20,
    TwoEmpty,
}

impl fmt::Display for AbClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AbClass::X10 => "(1,0)_T",
            AbClass::X01 => "(0,1)_T",
            AbClass::X11 => "(1,1)_T",
            AbClass::X20 => "(2,0)_T",
            AbClass::TwoEmpty => "2\u{2205}",
        };
        write!(f, "{s}")
    }
}

pub fn abelianize(p: i64, q: i64) -> AbClass {
    match (p.rem_euclid(2), q.rem_euclid(2)) {
        _ if (p, q) == (0, 0) => AbClass::TwoEmpty,
        (1, 0) => AbClass::X10,
        (0, 1) => AbClass::X01,
        (1, 1) => AbClass::X11,
        _ => AbClass::X20,
    }
}

/// The nine generators of the skein module of the 3-torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum T3Basis {
    Empty,
    Curve([u8; 3]),
    Alpha,
}

impl fmt::Display for T3Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            T3Basis::Empty => write!(f, "\u{2205}"),
            T3Basis::Curve([x, y, z]) => write!(f, "[{x},{y},{z}]"),
            T3Basis::Alpha => write!(f, "\u{3b1}"),
        }
    }
}

/// A primitive curve `(p,q,r)` equals the generator with the same parities.
pub fn reduce_t3_curve(p: i64, q: i64, r: i64) -> Result<T3Basis> {
    if p.gcd(&q).gcd(&r) != 1 {
        return Err(Error::Invalid(format!("({p},{q},{r}) is not primitive")));
    }
    Ok(T3Basis::Curve([p, q, r].map(|x| x.rem_euclid(2) as u8)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(e: i64) -> RationalFunc {
        RationalFunc::monomial(1, e)
    }

    #[test]
    fn products() {
        let x = fg_product((1, 0), (0, 1));
        assert_eq!(x.coeff(1, 1), mono(1));
        assert_eq!(x.coeff(1, -1), mono(-1));
        assert_eq!(x.len(), 2);
        let y = fg_product((1, 0), (1, 0));
        assert_eq!(y.coeff(2, 0), RationalFunc::one());
        assert_eq!(y.coeff(0, 0), RationalFunc::from(2));
        let z = fg_product((3, -2), (0, 0));
        assert_eq!(z, T2Element::from_curve(3, -2).scale(&RationalFunc::from(2)));
        assert_eq!(T2Element::from_curve(-1, 2), T2Element::from_curve(1, -2));
    }

    #[test]
    fn chebyshev() {
        assert_eq!(tn_expand((1, 0), 0).unwrap(), T2Element::from_curve(0, 0));
        assert_eq!(tn_expand((2, 3), 1).unwrap(), T2Element::from_curve(2, 3));
        let g = T2Element::from_curve(1, 2);
        assert_eq!(tn_expand((1, 2), 2).unwrap(), g.mul(&g).sub(&T2Element::from_curve(0, 0)));
        assert!(tn_expand((2, 4), 3).is_err());
        for n in 1..=6 {
            for &(p, q) in &[(1, 0), (0, 1), (1, 1), (2, -3), (3, 5)] {
                assert_eq!(tn_expand((p, q), n).unwrap(), T2Element::from_curve(n as i64 * p, n as i64 * q));
            }
        }
        assert_eq!(T2Element::empty().mul(&T2Element::from_curve(4, 1)), T2Element::from_curve(4, 1));
    }

    #[test]
    fn abelian_classes() {
        assert_eq!(abelianize(3, 2), AbClass::X10);
        assert_eq!(abelianize(2, 2), AbClass::X20);
        assert_eq!(abelianize(5, 3), AbClass::X11);
        assert_eq!(abelianize(-2, 7), AbClass::X01);
        assert_eq!(abelianize(0, 0), AbClass::TwoEmpty);
    }

    #[test]
    fn t3_curves() {
        assert_eq!(reduce_t3_curve(2, 3, 6).unwrap(), T3Basis::Curve([0, 1, 0]));
        assert_eq!(reduce_t3_curve(1, 0, 0).unwrap(), T3Basis::Curve([1, 0, 0]));
        assert_eq!(reduce_t3_curve(1, 1, 1).unwrap(), T3Basis::Curve([1, 1, 1]));
        assert!(reduce_t3_curve(2, 4, 6).is_err());
        assert!(reduce_t3_curve(0, 0, 0).is_err());
    }

    fn curve() -> impl Strategy<Value = (i64, i64)> {
        (-4i64..5, -4i64..5)
    }

    fn classes(t: &T2Element) -> Vec<AbClass> {
        let mut v: Vec<AbClass> = t.terms().map(|(&(p, q), _)| abelianize(p, q)).collect();
        v.sort();
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn associative(a in curve(), b in curve(), c in curve()) {
            let (x, y, z) = (T2Element::from_curve(a.0, a.1), T2Element::from_curve(b.0, b.1), T2Element::from_curve(c.0, c.1));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn abelianization_commutes(a in curve(), b in curve()) {
            prop_assert_eq!(classes(&fg_product(a, b)), classes(&fg_product(b, a)));
        }

        #[test]
        fn t3_parities(p in -9i64..10, q in -9i64..10, r in -9i64..10) {
            match reduce_t3_curve(p, q, r) {
                Ok(T3Basis::Curve(v)) => prop_assert_eq!(v, [p, q, r].map(|x| x.rem_euclid(2) as u8)),
                Ok(other) => prop_assert!(false, "unexpected {other}"),
                Err(_) => prop_assert!(p.gcd(&q).gcd(&r) != 1),
            }
        }
    }
}

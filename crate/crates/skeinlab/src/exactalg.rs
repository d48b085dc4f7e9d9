//! Laurent polynomials in `A` with integer coefficients and their fraction field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Tolerance below which a denominator counts as vanishing.
pub const POLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// The variable `A`.
    pub fn a() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial<T: Into<BigInt>>(c: T, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms<I, T>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, T)>,
        T: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next()
    }

    /// Multiplies by `A^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Substitutes `A -> A^-1`.
    pub fn mirror(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Substitutes `A -> A^k`.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0);
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn eval_complex(&self, a: Complex64) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::NAN);
            s += a.powi(*e as i32) * c;
        }
        s
    }

    pub fn eval_i64(&self, a: i64) -> Option<BigInt> {
        if a == 0 && self.min_exp().is_some_and(|e| e < 0) {
            return None;
        }
        let base = BigInt::from(a);
        let mut s = BigInt::zero();
        for (e, c) in &self.terms {
            if *e >= 0 {
                s += c * num_traits::pow(base.clone(), *e as usize);
            } else {
                let d = num_traits::pow(base.clone(), (-*e) as usize);
                let (q, r) = c.div_rem(&d);
                if !r.is_zero() {
                    return None;
                }
                s += q;
            }
        }
        Some(s)
    }

    /// Dense coefficients from the lowest exponent upwards.
    fn to_dense(&self) -> (i64, Vec<BigInt>) {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return (0, Vec::new());
        };
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(shift: i64, v: &[BigInt]) -> Self {
        Self::from_terms(v.iter().enumerate().map(|(i, c)| (shift + i as i64, c.clone())))
    }

    /// Exact quotient in `Z[A, A^-1]`, if it exists.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (sa, a) = self.to_dense();
        let (sb, b) = other.to_dense();
        let q = dense_div_exact(&a, &b)?;
        Some(Self::from_dense(sa - sb, &q))
    }

    /// Multiplicity of the factor `A^4 + 1`.
    pub fn ord_at_i(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let (_, mut v) = self.to_dense();
        let f = cyclo8();
        let mut k = 0;
        while let Some(q) = dense_div_exact(&v, &f) {
            v = q;
            k += 1;
        }
        Some(k)
    }
}

fn cyclo8() -> Vec<BigInt> {
    vec![
        BigInt::one(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::zero(),
        BigInt::one(),
    ]
}

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn dense_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r: Vec<BigInt> = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    if b.is_empty() {
        return None;
    }
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let lb = b.last().unwrap().clone();
    let n = r.len() - b.len() + 1;
    let mut q = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let top = &r[i + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (qi, rem) = top.div_rem(&lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &qi * bj;
            r[i + j] -= t;
        }
        q[i] = qi;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

fn dense_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = dense_content(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder of `a` by `b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        trim(&mut r);
    }
    r
}

/// Primitive gcd of two non-zero dense polynomials.
fn dense_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut x = primitive(a);
    let mut y = primitive(b);
    trim(&mut x);
    trim(&mut y);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![BigInt::one()];
        }
        let r = prem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    if x.last().is_some_and(|c| c.is_negative()) {
        x = x.into_iter().map(|c| -c).collect();
    }
    x
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(LaurentPoly, Add add, Sub sub, Mul mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

fn fmt_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (i64, &'a BigInt)>,
{
    let mut first = true;
    for (e, c) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = abs.is_one();
        match e {
            0 => write!(f, "{abs}")?,
            _ => {
                if !unit {
                    write!(f, "{abs}")?;
                }
                if e == 1 {
                    write!(f, "A")?;
                } else {
                    write!(f, "A^{e}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().rev().map(|(e, c)| (*e, c)))
    }
}

/// Element of `Q(A)` kept reduced: coprime numerator and denominator, the
/// denominator starting at `A^0` with a positive coefficient, and no common
/// integer content.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for RationalFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<LaurentPoly> for RationalFunc {
    fn from(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }
}

impl From<i64> for RationalFunc {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c).into()
    }
}

impl RationalFunc {
    pub fn zero() -> Self {
        LaurentPoly::zero().into()
    }

    pub fn one() -> Self {
        LaurentPoly::one().into()
    }

    pub fn monomial<T: Into<BigInt>>(c: T, e: i64) -> Self {
        LaurentPoly::monomial(c, e).into()
    }

    /// `-A^2 - A^-2`, the value of a trivial loop.
    pub fn delta() -> Self {
        LaurentPoly::from_terms([(2, -1), (-2, -1)]).into()
    }

    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.is_laurent().then_some(&self.num)
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (mut num, mut den) = (num, den);
        if !den.is_monomial() && !num.is_monomial() {
            let (sn, dn) = num.to_dense();
            let (sd, dd) = den.to_dense();
            let g = dense_gcd(&dn, &dd);
            if g.len() > 1 {
                num = LaurentPoly::from_dense(sn, &dense_div_exact(&dn, &g).expect("gcd divides"));
                den = LaurentPoly::from_dense(sd, &dense_div_exact(&dd, &g).expect("gcd divides"));
            }
        }
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = LaurentPoly { terms: num.terms.into_iter().map(|(e, x)| (e, x / &c)).collect() };
            den = LaurentPoly { terms: den.terms.into_iter().map(|(e, x)| (e, x / &c)).collect() };
        }
        if den.lowest_coeff().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        let lo = den.min_exp().unwrap();
        if lo != 0 {
            num = num.shift(-lo);
            den = den.shift(-lo);
        }
        Self { num, den }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            let n = n as u32;
            Ok(Self { num: self.num.pow(n), den: self.den.pow(n) }.renormalized_sign())
        } else {
            self.inv()?.pow(-n)
        }
    }

    // powers of a canonical fraction stay reduced; only the denominator sign
    // and offset can need adjusting
    fn renormalized_sign(self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let Self { mut num, mut den } = self;
        if den.lowest_coeff().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        let lo = den.min_exp().unwrap();
        if lo != 0 {
            num = num.shift(-lo);
            den = den.shift(-lo);
        }
        Self { num, den }
    }

    pub fn scale_monomial(&self, c: i64, e: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let num = self.num.scale(&BigInt::from(c)).shift(e);
        if self.den.is_one() {
            Self { num, den: self.den.clone() }
        } else {
            Self::normalize(num, self.den.clone())
        }
    }

    /// Lowest order of `f` at `A = 0`; `None` for `f = 0`.
    pub fn ord_zero(&self) -> Option<i64> {
        Some(self.num.min_exp()? - self.den.min_exp()?)
    }

    /// Order at infinity; `None` for `f = 0`.
    pub fn ord_infty(&self) -> Option<i64> {
        Some(self.num.max_exp()? - self.den.max_exp()?)
    }

    pub fn breadth(&self) -> i64 {
        match (self.ord_infty(), self.ord_zero()) {
            (Some(hi), Some(lo)) => hi - lo,
            _ => 0,
        }
    }

    /// Order at `q = A^2 = i`; `None` stands for `+inf`.
    pub fn ord_at_i(&self) -> Option<i64> {
        Some(self.num.ord_at_i()? - self.den.ord_at_i().unwrap())
    }

    pub fn mirror(&self) -> Self {
        Self::normalize(self.num.mirror(), self.den.mirror())
    }

    pub fn substitute_power(&self, k: i64) -> Self {
        Self::normalize(self.num.substitute_power(k), self.den.substitute_power(k))
    }

    pub fn eval_complex(&self, a: Complex64) -> Result<Complex64> {
        let d = self.den.eval_complex(a);
        if d.norm() < POLE_TOL {
            return Err(Error::Pole);
        }
        Ok(self.num.eval_complex(a) / d)
    }
}

impl Add for &RationalFunc {
    type Output = RationalFunc;
    fn add(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return (&self.num + &rhs.num).into();
            }
            return RationalFunc::normalize(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunc::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RationalFunc {
    type Output = RationalFunc;
    fn sub(self, rhs: &RationalFunc) -> RationalFunc {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunc {
    type Output = RationalFunc;
    fn mul(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return (&self.num * &rhs.num).into();
        }
        RationalFunc::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunc {
    type Output = RationalFunc;
    /// Panics on division by zero; use [`RationalFunc::checked_div`] otherwise.
    fn div(self, rhs: &RationalFunc) -> RationalFunc {
        self.checked_div(rhs).expect("division by zero")
    }
}

forward_owned!(RationalFunc, Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        -&self
    }
}

impl std::iter::Sum for RationalFunc {
    fn sum<I: Iterator<Item = RationalFunc>>(iter: I) -> Self {
        iter.fold(RationalFunc::zero(), |a, b| &a + &b)
    }
}

impl std::iter::Product for RationalFunc {
    fn product<I: Iterator<Item = RationalFunc>>(iter: I) -> Self {
        iter.fold(RationalFunc::one(), |a, b| &a * &b)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly| {
            if p.len() > 1 {
                format!("({p})")
            } else {
                format!("{p}")
            }
        };
        write!(f, "{} / {}", wrap(&self.num), wrap(&self.den))
    }
}

impl FromStr for RationalFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        let mut p = Parser { toks, pos: 0 };
        let v = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(v)
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let f: RationalFunc = s.parse()?;
        f.as_laurent()
            .cloned()
            .ok_or_else(|| Error::Parse(format!("{s:?} is not a Laurent polynomial")))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\n' => {}
            'A' | 'a' => out.push(Tok::Var),
            '+' => out.push(Tok::Plus),
            '-' | '\u{2212}' => out.push(Tok::Minus),
            '*' | '\u{b7}' => out.push(Tok::Star),
            '/' => out.push(Tok::Slash),
            '^' => out.push(Tok::Caret),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            d if d.is_ascii_digit() => {
                let st = i;
                while i + 1 < cs.len() && cs[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = cs[st..=i].iter().collect();
                out.push(Tok::Num(lit.parse().map_err(|_| Error::Parse(lit.clone()))?));
            }
            _ => return Err(Error::Parse(format!("unexpected character {c:?}"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<RationalFunc> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunc> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc * self.power()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let d = self.power()?;
                    acc = acc.checked_div(&d)?;
                }
                Some(Tok::Var) | Some(Tok::LParen) | Some(Tok::Num(_)) => {
                    acc = acc * self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<RationalFunc> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let neg = match self.peek() {
                Some(Tok::Minus) => {
                    self.bump();
                    true
                }
                Some(Tok::Plus) => {
                    self.bump();
                    false
                }
                _ => false,
            };
            let Some(Tok::Num(n)) = self.bump() else {
                return Err(Error::Parse("expected exponent".into()));
            };
            let n = n.to_i64().ok_or_else(|| Error::Parse("exponent too large".into()))?;
            return base.pow(if neg { -n } else { n });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunc> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(LaurentPoly::constant(n).into()),
            Some(Tok::Var) => Ok(LaurentPoly::a().into()),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(v)
            }
            Some(Tok::Minus) => Ok(-self.power()?),
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

//! Quantum integers, trivalent graph evaluations and 6j symbols over `Q(A)`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, RationalFunc};

/// The quantum integer `[n]` in `q = A^2`, valid for any integer `n`.
pub fn qint_poly(n: i64) -> LaurentPoly {
    if n < 0 {
        return -qint_poly(-n);
    }
    LaurentPoly::from_terms((0..n).map(|j| (2 * (n - 1 - 2 * j), 1)))
}

pub fn qint(n: i64) -> RationalFunc {
    qint_poly(n).into()
}

fn fact_table() -> &'static RwLock<Vec<LaurentPoly>> {
    static T: OnceLock<RwLock<Vec<LaurentPoly>>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(vec![LaurentPoly::one()]))
}

pub fn qfact_poly(n: usize) -> LaurentPoly {
    if let Some(p) = fact_table().read().unwrap().get(n) {
        return p.clone();
    }
    let mut t = fact_table().write().unwrap();
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * &qint_poly(k as i64);
        t.push(next);
    }
    t[n].clone()
}

pub fn qfact(n: usize) -> RationalFunc {
    qfact_poly(n).into()
}

/// `prod [m_i]! / prod [n_j]!`, requiring equal sums.
pub fn qmultinomial(ms: &[usize], ns: &[usize]) -> Result<RationalFunc> {
    if ms.iter().sum::<usize>() != ns.iter().sum::<usize>() {
        return Err(Error::Invalid(format!("multinomial sums differ: {ms:?} vs {ns:?}")));
    }
    Ok(multinomial_unchecked(ms, ns))
}

fn multinomial_unchecked(ms: &[usize], ns: &[usize]) -> RationalFunc {
    let num = ms.iter().fold(LaurentPoly::one(), |acc, &m| &acc * &qfact_poly(m));
    let den = ns.iter().fold(LaurentPoly::one(), |acc, &n| &acc * &qfact_poly(n));
    match num.div_exact(&den) {
        Some(q) => q.into(),
        None => RationalFunc::new(num, den).expect("factorials are non-zero"),
    }
}

pub fn circle(n: usize) -> RationalFunc {
    let v = qint(n as i64 + 1);
    if n % 2 == 1 {
        -v
    } else {
        v
    }
}

pub fn is_admissible(a: usize, b: usize, c: usize) -> bool {
    a <= b + c && b <= a + c && c <= a + b && (a + b + c) % 2 == 0
}

pub fn is_q_admissible(a: usize, b: usize, c: usize, r: usize) -> bool {
    is_admissible(a, b, c) && a + b + c + 4 <= 2 * r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleTriple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl AdmissibleTriple {
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self> {
        if !is_admissible(a, b, c) {
            return Err(Error::Inadmissible(format!("({a},{b},{c})")));
        }
        Ok(Self { a, b, c })
    }

    pub fn angles(&self) -> [usize; 3] {
        let (a, b, c) = (self.a, self.b, self.c);
        [(a + b - c) / 2, (b + c - a) / 2, (c + a - b) / 2]
    }

    pub fn is_red(&self) -> bool {
        self.angles().iter().filter(|x| *x % 2 == 1).count() >= 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QAdmissibleTriple {
    pub triple: AdmissibleTriple,
    pub r: usize,
}

impl QAdmissibleTriple {
    pub fn new(a: usize, b: usize, c: usize, r: usize) -> Result<Self> {
        let triple = AdmissibleTriple::new(a, b, c)?;
        if r < 3 || !is_q_admissible(a, b, c, r) {
            return Err(Error::Inadmissible(format!("({a},{b},{c}) at r={r}")));
        }
        Ok(Self { triple, r })
    }
}

fn check(a: usize, b: usize, c: usize) -> Result<()> {
    AdmissibleTriple::new(a, b, c).map(|_| ())
}

pub fn angles(a: usize, b: usize, c: usize) -> Result<[usize; 3]> {
    Ok(AdmissibleTriple::new(a, b, c)?.angles())
}

pub fn is_red(a: usize, b: usize, c: usize) -> Result<bool> {
    Ok(AdmissibleTriple::new(a, b, c)?.is_red())
}

pub fn theta(a: usize, b: usize, c: usize) -> Result<RationalFunc> {
    check(a, b, c)?;
    let s = (a + b + c) / 2;
    let [i, j, k] = AdmissibleTriple { a, b, c }.angles();
    let v = multinomial_unchecked(&[s + 1, i, j, k], &[a, b, c, 1]);
    Ok(if s % 2 == 1 { -v } else { v })
}

/// Sum bounds `(triangles, squares)` of the tetrahedron with edges `a..f`.
fn tet_sums(t: [usize; 6]) -> ([usize; 4], [usize; 3]) {
    let [a, b, c, d, e, f] = t;
    (
        [(a + b + c) / 2, (a + e + f) / 2, (d + b + f) / 2, (d + e + c) / 2],
        [(a + b + d + e) / 2, (a + c + d + f) / 2, (b + c + e + f) / 2],
    )
}

fn tet_table() -> &'static RwLock<HashMap<[usize; 6], RationalFunc>> {
    static T: OnceLock<RwLock<HashMap<[usize; 6], RationalFunc>>> = OnceLock::new();
    T.get_or_init(Default::default)
}

/// Tetrahedron with vertex triples `(a,b,c)`, `(a,e,f)`, `(d,b,f)`, `(d,e,c)`;
/// opposite edges are `a-d`, `b-e`, `c-f`.
pub fn tet(a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Result<RationalFunc> {
    for (x, y, z) in [(a, b, c), (a, e, f), (d, b, f), (d, e, c)] {
        check(x, y, z)?;
    }
    let key = [a, b, c, d, e, f];
    if let Some(v) = tet_table().read().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let (tri, sq) = tet_sums(key);
    let mut pre_num = LaurentPoly::one();
    for s in sq {
        for t in tri {
            pre_num = &pre_num * &qfact_poly(s - t);
        }
    }
    let pre_den = key.iter().fold(LaurentPoly::one(), |acc, &x| &acc * &qfact_poly(x));
    let lo = *tri.iter().max().unwrap();
    let hi = *sq.iter().min().unwrap();
    let mut sum = RationalFunc::zero();
    for z in lo..=hi {
        let den = tri
            .iter()
            .map(|t| z - t)
            .chain(sq.iter().map(|s| s - z))
            .collect::<Vec<_>>();
        let term = multinomial_unchecked(&[z + 1], &den);
        sum = if z % 2 == 1 { &sum - &term } else { &sum + &term };
    }
    let v = &sum * &RationalFunc::new(pre_num, pre_den).expect("non-zero");
    tet_table().write().unwrap().insert(key, v.clone());
    Ok(v)
}

/// Recoupling coefficient: the `i`-channel coefficient of the `j`-channel
/// basis element, where `a,b` and `c,d` meet at `j` and `a,d` and `c,b` at `i`.
pub fn sixj(a: usize, b: usize, c: usize, d: usize, i: usize, j: usize) -> Result<RationalFunc> {
    let t = tet(i, a, d, j, c, b)?;
    let den = &theta(a, d, i)? * &theta(c, b, i)?;
    Ok(&(&circle(i) * &t) / &den)
}

/// The phase `i^i_pow * A^(half_exp/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    pub i_pow: u8,
    pub half_exp: i64,
}

impl Phase {
    pub const ONE: Phase = Phase { i_pow: 0, half_exp: 0 };

    pub fn new(i_pow: i64, half_exp: i64) -> Self {
        Self { i_pow: i_pow.rem_euclid(4) as u8, half_exp }
    }

    pub fn mul(self, o: Phase) -> Phase {
        Phase::new(self.i_pow as i64 + o.i_pow as i64, self.half_exp + o.half_exp)
    }

    pub fn inv(self) -> Phase {
        Phase::new(-(self.i_pow as i64), -self.half_exp)
    }

    pub fn pow(self, k: i64) -> Phase {
        Phase::new(self.i_pow as i64 * k, self.half_exp * k)
    }

    /// Signed monomial in `A`, if the phase has no `sqrt(A)` or `i` part.
    pub fn resolve(self) -> Result<RationalFunc> {
        if self.half_exp % 2 != 0 || self.i_pow % 2 != 0 {
            return Err(Error::HalfPhase);
        }
        let sign = if self.i_pow == 2 { -1 } else { 1 };
        Ok(RationalFunc::monomial(sign, self.half_exp / 2))
    }

    /// Numeric value given a square root of `A`.
    pub fn eval(self, sqrt_a: Complex64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        i.powi(self.i_pow as i32) * sqrt_a.powi(self.half_exp as i32)
    }
}

/// Phase of `k2/2` positive full twists on an edge colored `n`.
pub fn full_twist_phase(n: usize, k2: i64) -> Phase {
    let n = n as i64;
    Phase::new(n * k2, n * (n + 2) * k2)
}

pub fn ord_i_qint(n: u64) -> i64 {
    i64::from(n > 0 && n % 2 == 0)
}

pub fn ord_i_qfact(n: u64) -> i64 {
    (n / 2) as i64
}

pub fn ord_i_multinomial(ms: &[u64], ns: &[u64]) -> i64 {
    ms.iter().map(|&m| ord_i_qfact(m)).sum::<i64>() - ns.iter().map(|&n| ord_i_qfact(n)).sum::<i64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(s: &str) -> RationalFunc {
        s.parse().unwrap()
    }

    #[test]
    fn quantum_integers() {
        assert!(qint(1).is_one());
        assert_eq!(qint(2), rf("A^2 + A^-2"));
        for n in 1..8 {
            let a = Complex64::new((1.0f64 + 1e-6).sqrt(), 0.0);
            let v = qint(n).eval_complex(a).unwrap();
            assert!((v.re - n as f64).abs() < 1e-3);
        }
    }

    #[test]
    fn factorials() {
        assert!(qfact(0).is_one());
        assert_eq!(qfact(3), &qint(2) * &qint(3));
        assert_eq!(qmultinomial(&[2], &[1, 1]).unwrap(), qint(2));
        assert!(qmultinomial(&[2], &[1]).is_err());
    }

    #[test]
    fn circles() {
        assert!(circle(0).is_one());
        assert_eq!(circle(1), RationalFunc::delta());
        assert_eq!(circle(2), rf("A^4 + 1 + A^-4"));
    }

    #[test]
    fn thetas() {
        assert!(theta(0, 0, 0).unwrap().is_one());
        assert_eq!(theta(1, 1, 0).unwrap(), -qint(2));
        assert_eq!(theta(1, 1, 0).unwrap(), circle(1));
        for a in 0..=6 {
            assert_eq!(theta(a, a, 0).unwrap(), circle(a));
        }
        assert!(theta(1, 0, 0).is_err());
        assert!(theta(3, 1, 1).is_err());
    }

    #[test]
    fn tetrahedra() {
        assert!(tet(0, 0, 0, 0, 0, 0).unwrap().is_one());
        let expect = &(&qfact(4) / &qint(2).pow(6).unwrap()) * &(&qint(5) - &RationalFunc::one());
        assert_eq!(tet(2, 2, 2, 2, 2, 2).unwrap(), expect);
        assert!(tet(1, 1, 1, 0, 0, 0).is_err());
    }

    #[test]
    fn tet_with_zero_edge_is_theta() {
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    if !is_admissible(a, b, c) {
                        continue;
                    }
                    // d = 0 forces e = c, f = b
                    assert_eq!(tet(a, b, c, 0, c, b).unwrap(), theta(a, b, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn theta_symmetric() {
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    if !is_admissible(a, b, c) {
                        continue;
                    }
                    let t = theta(a, b, c).unwrap();
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        assert_eq!(theta(x, y, z).unwrap(), t);
                    }
                }
            }
        }
    }

    fn tets(max: usize) -> Vec<[usize; 6]> {
        let mut out = Vec::new();
        let r = 0..=max;
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    if !is_admissible(a, b, c) {
                        continue;
                    }
                    for d in r.clone() {
                        for e in r.clone() {
                            for f in r.clone() {
                                if is_admissible(a, e, f)
                                    && is_admissible(d, b, f)
                                    && is_admissible(d, e, c)
                                {
                                    out.push([a, b, c, d, e, f]);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn tet_symmetric() {
        // the tetrahedral group acts on the edges; generated by two permutations
        let gens: [fn([usize; 6]) -> [usize; 6]; 3] = [
            |[a, b, c, d, e, f]| [b, a, c, e, d, f],
            |[a, b, c, d, e, f]| [b, c, a, e, f, d],
            |[a, b, c, d, e, f]| [a, e, f, d, b, c],
        ];
        for t in tets(3) {
            let v = tet(t[0], t[1], t[2], t[3], t[4], t[5]).unwrap();
            for g in gens {
                let u = g(t);
                assert_eq!(tet(u[0], u[1], u[2], u[3], u[4], u[5]).unwrap(), v, "{t:?} -> {u:?}");
            }
        }
    }

    #[test]
    fn sixj_values() {
        assert!(sixj(0, 0, 0, 0, 0, 0).unwrap().is_one());
        for a in 0..=3 {
            for c in 0..=3 {
                for i in 0..=6 {
                    if !is_admissible(a, c, i) {
                        continue;
                    }
                    let f = &circle(i) / &theta(a, c, i).unwrap();
                    assert_eq!(sixj(a, a, c, c, i, 0).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn sixj_orthogonality() {
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    for d in 0..=2 {
                        let js: Vec<usize> =
                            (0..=4).filter(|&j| is_admissible(a, b, j) && is_admissible(c, d, j)).collect();
                        let is: Vec<usize> =
                            (0..=4).filter(|&i| is_admissible(a, d, i) && is_admissible(c, b, i)).collect();
                        for &j in &js {
                            for &j2 in &js {
                                let s: RationalFunc = is
                                    .iter()
                                    .map(|&i| &sixj(a, b, c, d, i, j).unwrap() * &sixj(d, a, b, c, j2, i).unwrap())
                                    .sum();
                                assert_eq!(s.is_one(), j == j2, "{a}{b}{c}{d} {j} {j2}: {s}");
                                if j != j2 {
                                    assert!(s.is_zero());
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn twist_phases() {
        assert_eq!(full_twist_phase(1, 2).resolve().unwrap(), rf("-A^3"));
        assert!(full_twist_phase(0, 7).resolve().unwrap().is_one());
        assert_eq!(full_twist_phase(2, 2).resolve().unwrap(), rf("A^8"));
        assert_eq!(full_twist_phase(1, 1).resolve(), Err(Error::HalfPhase));
        let h = full_twist_phase(3, 1);
        assert_eq!(h.pow(2), full_twist_phase(3, 2));
    }

    #[test]
    fn order_formulas() {
        assert_eq!(ord_i_qint(4), 1);
        assert_eq!(ord_i_qfact(5), 2);
        assert_eq!(angles(1, 1, 2).unwrap(), [0, 1, 1]);
        assert!(is_red(1, 1, 2).unwrap());
        assert!(!is_red(1, 1, 0).unwrap());
        for n in 1..=12u64 {
            assert_eq!(qint(n as i64).ord_at_i().unwrap(), ord_i_qint(n));
            assert_eq!(qfact(n as usize).ord_at_i().unwrap(), ord_i_qfact(n));
        }
    }

    #[test]
    fn theta_order_equality() {
        for a in 0..=8 {
            for b in 0..=8 {
                for c in 0..=8 {
                    if !is_admissible(a, b, c) {
                        continue;
                    }
                    let l = i64::from(a % 2 + b % 2 + c % 2 > 0);
                    let red = if is_red(a, b, c).unwrap() { 2 } else { 0 };
                    assert_eq!(theta(a, b, c).unwrap().ord_at_i().unwrap(), l - red / 2);
                }
            }
        }
    }

    #[test]
    fn tet_order_bound() {
        for t in tets(4) {
            let [a, b, c, d, e, f] = t;
            let l = i64::from(t.iter().any(|x| x % 2 == 1));
            let red = [(a, b, c), (a, e, f), (d, b, f), (d, e, c)]
                .iter()
                .filter(|(x, y, z)| is_red(*x, *y, *z).unwrap())
                .count() as i64;
            let o = tet(a, b, c, d, e, f).unwrap().ord_at_i().unwrap();
            assert!(2 * o >= 2 * l - red, "{t:?}: {o} < {l} - {red}/2");
        }
        assert_eq!(tet(2, 2, 2, 2, 2, 2).unwrap().ord_at_i(), Some(-2));
    }

    proptest! {
        #[test]
        fn multinomial_order_matches(parts in prop::collection::vec(0u64..6, 1..4), split in prop::collection::vec(0u64..6, 0..3)) {
            let total: u64 = parts.iter().sum();
            let mut ns = Vec::new();
            let mut left = total;
            for s in split {
                let s = s.min(left);
                ns.push(s);
                left -= s;
            }
            ns.push(left);
            let ms_u: Vec<usize> = parts.iter().map(|&x| x as usize).collect();
            let ns_u: Vec<usize> = ns.iter().map(|&x| x as usize).collect();
            let v = qmultinomial(&ms_u, &ns_u).unwrap();
            prop_assert_eq!(v.ord_at_i().unwrap(), ord_i_multinomial(&parts, &ns));
        }

        #[test]
        fn phase_group(n in 0usize..6, k in -4i64..4, l in -4i64..4) {
            prop_assert_eq!(full_twist_phase(n, k).mul(full_twist_phase(n, l)), full_twist_phase(n, k + l));
            prop_assert_eq!(full_twist_phase(n, k).mul(full_twist_phase(n, k).inv()), Phase::ONE);
        }
    }
}

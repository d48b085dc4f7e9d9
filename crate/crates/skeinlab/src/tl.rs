//! Temperley-Lieb algebras, Jones-Wenzl projectors and the annulus skein.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactalg::RationalFunc;
use crate::qnum::circle;

/// Largest projector index built by [`jones_wenzl`].
pub const MAX_PROJECTOR: usize = 8;

/// Non-crossing perfect matching of `n` top points `0..n` and `n` bottom
/// points `n..2n`, both read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarMatching {
    n: usize,
    pair: Vec<usize>,
}

impl PlanarMatching {
    pub fn new(n: usize, pair: Vec<usize>) -> Result<Self> {
        if pair.len() != 2 * n {
            return Err(Error::Invalid(format!("matching needs {} points", 2 * n)));
        }
        for (p, &q) in pair.iter().enumerate() {
            if q >= 2 * n || q == p || pair[q] != p {
                return Err(Error::Invalid("matching is not a fixed-point-free involution".into()));
            }
        }
        let m = Self { n, pair };
        if !m.is_planar() {
            return Err(Error::Invalid("matching has crossing arcs".into()));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let pair = (0..2 * n).map(|p| if p < n { p + n } else { p - n }).collect();
        Self { n, pair }
    }

    /// The generator `e_i`, `1 <= i < n`.
    pub fn e(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::Invalid(format!("e_{i} does not exist in TL_{n}")));
        }
        let mut m = Self::identity(n);
        let (a, b) = (i - 1, i);
        m.pair[a] = b;
        m.pair[b] = a;
        m.pair[n + a] = n + b;
        m.pair[n + b] = n + a;
        Ok(m)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn partner(&self, p: usize) -> usize {
        self.pair[p]
    }

    // position on the boundary circle: top left to right, then bottom right to left
    fn circ(&self, p: usize) -> usize {
        if p < self.n {
            p
        } else {
            3 * self.n - 1 - p
        }
    }

    fn is_planar(&self) -> bool {
        let arcs: Vec<(usize, usize)> = (0..2 * self.n)
            .filter(|&p| p < self.pair[p])
            .map(|p| {
                let (a, b) = (self.circ(p), self.circ(self.pair[p]));
                (a.min(b), a.max(b))
            })
            .collect();
        arcs.iter().all(|&(a, b)| {
            arcs.iter().all(|&(c, d)| !(a < c && c < b && b < d))
        })
    }

    /// Adds a vertical strand on the right.
    pub fn tensor_id(&self) -> Self {
        let n = self.n;
        let re = |p: usize| if p < n { p } else { p + 1 };
        let mut pair = vec![0; 2 * n + 2];
        for p in 0..2 * n {
            pair[re(p)] = re(self.pair[p]);
        }
        pair[n] = 2 * n + 1;
        pair[2 * n + 1] = n;
        Self { n: n + 1, pair }
    }

    /// Stacks `self` on top of `other`; returns the product and the number of
    /// closed loops.
    pub fn compose(&self, other: &Self) -> (Self, usize) {
        let n = self.n;
        assert_eq!(n, other.n);
        // nodes 0..2n are self, 2n..4n are other; self bottom i glues to other top i
        let next = |p: usize| -> usize {
            if p < 2 * n {
                self.pair[p]
            } else {
                2 * n + other.pair[p - 2 * n]
            }
        };
        let glue = |p: usize| -> Option<usize> {
            if (n..2 * n).contains(&p) {
                Some(p + n)
            } else if (2 * n..3 * n).contains(&p) {
                Some(p - n)
            } else {
                None
            }
        };
        let out_index = |p: usize| if p < n { p } else { p - 2 * n };
        let mut seen = vec![false; 4 * n];
        let mut pair = vec![0; 2 * n];
        for start in (0..n).chain(3 * n..4 * n) {
            if seen[start] {
                continue;
            }
            let mut p = start;
            loop {
                seen[p] = true;
                let q = next(p);
                seen[q] = true;
                match glue(q) {
                    Some(g) => p = g,
                    None => {
                        pair[out_index(start)] = out_index(q);
                        pair[out_index(q)] = out_index(start);
                        break;
                    }
                }
            }
        }
        let mut loops = 0;
        for start in n..3 * n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                let q = next(p);
                seen[q] = true;
                p = glue(q).expect("interior point");
            }
        }
        (Self { n, pair }, loops)
    }

    /// Number of loops in the closure joining top `i` to bottom `i`.
    pub fn closure_loops(&self) -> usize {
        let n = self.n;
        let mut seen = vec![false; 2 * n];
        let mut loops = 0;
        for s in 0..2 * n {
            if seen[s] {
                continue;
            }
            loops += 1;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                let q = self.pair[p];
                seen[q] = true;
                p = if q < n { q + n } else { q - n };
            }
        }
        loops
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLElement {
    n: usize,
    terms: BTreeMap<PlanarMatching, RationalFunc>,
}

impl TLElement {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_matching(PlanarMatching::identity(n))
    }

    pub fn e(n: usize, i: usize) -> Result<Self> {
        Ok(Self::from_matching(PlanarMatching::e(n, i)?))
    }

    pub fn from_matching(m: PlanarMatching) -> Self {
        let n = m.n;
        let mut terms = BTreeMap::new();
        terms.insert(m, RationalFunc::one());
        Self { n, terms }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PlanarMatching, &RationalFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PlanarMatching) -> RationalFunc {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: PlanarMatching, c: RationalFunc) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_default();
        *e = &*e + &c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_arity(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RationalFunc) -> Self {
        let mut out = Self::zero(self.n);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&RationalFunc::from(-1)))
    }

    fn same_arity(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::Invalid(format!("arity mismatch: {} vs {}", self.n, o.n)));
        }
        Ok(())
    }

    pub fn tensor_id(&self) -> Self {
        let mut out = Self::zero(self.n + 1);
        for (m, c) in &self.terms {
            out.add_term(m.tensor_id(), c.clone());
        }
        out
    }

    pub fn trace_closure(&self) -> RationalFunc {
        let d = RationalFunc::delta();
        self.terms
            .iter()
            .map(|(m, c)| c * &d.pow(m.closure_loops() as i64).unwrap())
            .sum()
    }
}

/// Product `x * y`, with `x` stacked on top of `y`.
pub fn tl_mul(x: &TLElement, y: &TLElement) -> Result<TLElement> {
    x.same_arity(y)?;
    let d = RationalFunc::delta();
    let mut out = TLElement::zero(x.n);
    for (m1, c1) in &x.terms {
        for (m2, c2) in &y.terms {
            let (m, loops) = m1.compose(m2);
            out.add_term(m, &(c1 * c2) * &d.pow(loops as i64).unwrap());
        }
    }
    Ok(out)
}

fn jw_table() -> &'static RwLock<HashMap<usize, TLElement>> {
    static T: OnceLock<RwLock<HashMap<usize, TLElement>>> = OnceLock::new();
    T.get_or_init(Default::default)
}

/// The Jones-Wenzl projector `f^(n)` in `TL_n`.
pub fn jones_wenzl(n: usize) -> Result<TLElement> {
    if n > MAX_PROJECTOR {
        return Err(Error::Invalid(format!("projector f^({n}) exceeds the cap {MAX_PROJECTOR}")));
    }
    if n <= 1 {
        return Ok(TLElement::one(n));
    }
    if let Some(f) = jw_table().read().unwrap().get(&n) {
        return Ok(f.clone());
    }
    let g = jones_wenzl(n - 1)?.tensor_id();
    let e = TLElement::e(n, n - 1)?;
    let geg = tl_mul(&tl_mul(&g, &e)?, &g)?;
    let c = &circle(n - 2) / &circle(n - 1);
    let f = g.sub(&geg.scale(&c))?;
    jw_table().write().unwrap().insert(n, f.clone());
    Ok(f)
}

/// Chebyshev polynomial `y_n` as coefficients of `1, x, x^2, ...`.
pub fn colored_core_expand(n: usize) -> Vec<BigInt> {
    let mut prev: Vec<BigInt> = vec![BigInt::from(1)];
    if n == 0 {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(1)];
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// Coefficients of `x^k` in the basis `y_0, y_1, ...`.
pub fn power_in_chebyshev(k: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(1)];
    for _ in 0..k {
        let mut w = vec![BigInt::zero(); v.len() + 1];
        for (j, c) in v.iter().enumerate() {
            w[j + 1] += c;
            if j > 0 {
                w[j - 1] += c;
            }
        }
        v = w;
    }
    v
}

/// Bracket of `k` parallel cores in `S^1 x S^2`.
pub fn annulus_parallel_cores(k: usize) -> RationalFunc {
    let c = power_in_chebyshev(k).swap_remove(0);
    crate::exactalg::LaurentPoly::constant(c).into()
}

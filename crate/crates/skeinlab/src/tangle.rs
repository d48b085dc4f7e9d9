//! Two-string tangles: reduction to the crossingless tangles, the Conway
//! number at `A = sqrt(i)`, and the Montesinos sliceness obstruction.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::diagram::{Dart, Diagram, KauffmanState, Sign, VertexKind};
use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, RationalFunc};

/// Boundary ports of a tangle, in the order of the boundary vertex.
pub const NW: usize = 0;
pub const NE: usize = 1;
pub const SE: usize = 2;
pub const SW: usize = 3;

/// A genus-0 diagram with one boundary vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleDiagram {
    d: Diagram,
    boundary: usize,
}

impl TangleDiagram {
    pub fn new(d: Diagram) -> Result<Self> {
        if d.genus() != 0 {
            return Err(Error::Invalid("tangles live in genus 0".into()));
        }
        let b: Vec<usize> = (0..d.num_vertices()).filter(|&v| d.kind(v) == VertexKind::Boundary).collect();
        if b.len() != 1 {
            return Err(Error::Invalid("a tangle needs exactly one boundary vertex".into()));
        }
        Ok(Self { d, boundary: b[0] })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let mut j: crate::diagram::DiagramJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if j.holes.is_empty() {
            j.holes.insert("0".into(), 0);
        }
        Self::new(Diagram::from_json(&j)?)
    }

    pub fn diagram(&self) -> &Diagram {
        &self.d
    }

    /// Non-boundary vertex kinds, all edges, and the new index of each kept vertex.
    fn parts(&self) -> (Vec<VertexKind>, Vec<(Dart, Dart)>, Vec<usize>) {
        let d = &self.d;
        let keep: Vec<usize> = (0..d.num_vertices()).filter(|&v| v != self.boundary).collect();
        let mut index = vec![usize::MAX; d.num_vertices()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let kinds = keep.iter().map(|&v| d.kind(v)).collect();
        let mut edges = Vec::new();
        for v in 0..d.num_vertices() {
            for p in 0..d.kind(v).degree() {
                let (w, q) = d.opposite(v, p);
                if (v, p) < (w, q) {
                    edges.push(((v, p), (w, q)));
                }
            }
        }
        (kinds, edges, index)
    }

    fn glue(pieces: &[(&TangleDiagram, [Dart; 4])], extra: Vec<VertexKind>) -> Result<TangleDiagram> {
        let mut kinds = vec![VertexKind::Boundary];
        let mut edges = Vec::new();
        let base_extra = 1;
        kinds.extend(extra.iter().copied());
        for (t, ports) in pieces {
            let (k, es, index) = t.parts();
            let shift = kinds.len();
            kinds.extend(k);
            let map = |(v, p): Dart| -> Dart {
                if v == t.boundary {
                    let (w, q) = ports[p];
                    if w == usize::MAX {
                        (0, q)
                    } else {
                        (base_extra + w, q)
                    }
                } else {
                    (shift + index[v], p)
                }
            };
            edges.extend(es.into_iter().map(|(a, b)| (map(a), map(b))));
        }
        let d = Diagram::new(0, kinds, &edges, vec![0], Vec::new())?;
        TangleDiagram::new(d)
    }

    /// Horizontal juxtaposition: the east ports of `self` meet the west
    /// ports of `other` at two markers.
    pub fn sum(&self, other: &TangleDiagram) -> Result<TangleDiagram> {
        const B: usize = usize::MAX;
        let left = [(B, NW), (0, 0), (1, 0), (B, SW)];
        let right = [(0, 1), (B, NE), (B, SE), (1, 1)];
        Self::glue(&[(self, left), (other, right)], vec![VertexKind::Marker, VertexKind::Marker])
    }

    /// Quarter turn: the port formerly at `p` is now at `p + 1`.
    pub fn rotate(&self) -> Result<TangleDiagram> {
        const B: usize = usize::MAX;
        let ports = [(B, NE), (B, SE), (B, SW), (B, NW)];
        Self::glue(&[(self, ports)], Vec::new())
    }

    /// Closure joining NW to NE and SW to SE outside the square.
    pub fn closure(&self) -> Result<Diagram> {
        let (mut kinds, es, index) = self.parts();
        let n = kinds.len();
        kinds.push(VertexKind::Marker);
        kinds.push(VertexKind::Marker);
        let ports = [(n, 0), (n, 1), (n + 1, 0), (n + 1, 1)];
        let map = |(v, p): Dart| if v == self.boundary { ports[p] } else { (index[v], p) };
        let edges: Vec<(Dart, Dart)> = es.into_iter().map(|(a, b)| (map(a), map(b))).collect();
        Diagram::new(0, kinds, &edges, vec![0], Vec::new())
    }

    pub fn mirror(&self) -> TangleDiagram {
        TangleDiagram { d: self.d.mirror(), boundary: self.boundary }
    }
}

/// The tangle with no crossings joining NW to NE and SW to SE.
pub fn zero_tangle() -> TangleDiagram {
    let d = Diagram::new(0, vec![VertexKind::Boundary], &[((0, NW), (0, NE)), ((0, SE), (0, SW))], vec![0], Vec::new())
        .expect("planar");
    TangleDiagram::new(d).unwrap()
}

/// The tangle with no crossings joining NW to SW and NE to SE.
pub fn infinity_tangle() -> TangleDiagram {
    zero_tangle().rotate().expect("planar")
}

/// One crossing whose overstrand runs from NW to SE.
pub fn crossing_tangle() -> TangleDiagram {
    let kinds = vec![VertexKind::Boundary, VertexKind::Crossing { over: 0 }];
    let edges = [((0, NW), (1, 0)), ((0, SW), (1, 1)), ((0, SE), (1, 2)), ((0, NE), (1, 3))];
    TangleDiagram::new(Diagram::new(0, kinds, &edges, vec![0], Vec::new()).expect("planar")).unwrap()
}

/// Coefficients of the 0-tangle and the infinity-tangle.
pub fn tangle_reduce(t: &TangleDiagram) -> Result<(RationalFunc, RationalFunc)> {
    let d = &t.d;
    let xs = d.crossing_vertices().to_vec();
    let n = xs.len();
    if n >= 63 {
        return Err(Error::StateCap { crossings: n, cap: 62 });
    }
    let mut sign_of = vec![Sign::Plus; d.num_vertices()];
    let mut a = LaurentPoly::zero();
    let mut b = LaurentPoly::zero();
    let delta = LaurentPoly::from_terms([(2, -1), (-2, -1)]);
    let total: usize = (0..d.num_vertices()).map(|v| d.kind(v).degree()).sum();
    for bits in 0..1u64 << n {
        let st = KauffmanState::from_bits(n, bits);
        for (i, &v) in xs.iter().enumerate() {
            sign_of[v] = st.0[i];
        }
        let mut seen = vec![false; total];
        let mark = |v: usize, p: usize, seen: &mut Vec<bool>| seen[d.dart(v, p)] = true;
        let mut end_of = [0usize; 4];
        for p in 0..4 {
            let (mut v, mut q) = (t.boundary, p);
            mark(v, q, &mut seen);
            loop {
                let (w, r) = d.opposite(v, q);
                mark(w, r, &mut seen);
                if w == t.boundary {
                    end_of[p] = r;
                    break;
                }
                let s = d.smoothing_partner(w, r, sign_of[w]);
                mark(w, s, &mut seen);
                (v, q) = (w, s);
            }
        }
        let mut loops = 0u32;
        for v in 0..d.num_vertices() {
            for p in 0..d.kind(v).degree() {
                if seen[d.dart(v, p)] {
                    continue;
                }
                loops += 1;
                let (mut w, mut q) = (v, p);
                loop {
                    mark(w, q, &mut seen);
                    let (x, r) = d.opposite(w, q);
                    mark(x, r, &mut seen);
                    let s = d.smoothing_partner(x, r, sign_of[x]);
                    if seen[d.dart(x, s)] {
                        break;
                    }
                    (w, q) = (x, s);
                }
            }
        }
        let term = &LaurentPoly::monomial(1, st.sum()) * &delta.pow(loops);
        match end_of[NW] {
            NE => a = &a + &term,
            SW => b = &b + &term,
            _ => return Err(Error::Invalid("arc joins diagonal boundary points".into())),
        }
    }
    Ok((a.into(), b.into()))
}

/// Reduction of a horizontal juxtaposition from the summands' reductions.
pub fn sum_coefficients(x: &(RationalFunc, RationalFunc), y: &(RationalFunc, RationalFunc)) -> (RationalFunc, RationalFunc) {
    let (a1, b1) = x;
    let (a2, b2) = y;
    let a = a1 * a2;
    let b = &(&(a1 * b2) + &(b1 * a2)) + &(&RationalFunc::delta() * &(b1 * b2));
    (a, b)
}

/// Element of `Q(i)[A]/(A^4+1)`, coefficients of `1, A, A^2, A^3`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Cyclo8([BigRational; 4]);

impl Cyclo8 {
    fn from_poly(p: &LaurentPoly) -> Self {
        let mut c: [BigRational; 4] = Default::default();
        for (e, k) in p.terms() {
            let r = e.rem_euclid(8);
            let (idx, neg) = if r >= 4 { (r - 4, true) } else { (r, false) };
            let v = BigRational::from_integer(k.clone());
            if neg {
                c[idx as usize] -= v;
            } else {
                c[idx as usize] += v;
            }
        }
        Cyclo8(c)
    }

    fn mul(&self, o: &Self) -> Self {
        let mut c: [BigRational; 4] = Default::default();
        for i in 0..4 {
            for j in 0..4 {
                let v = &self.0[i] * &o.0[j];
                if i + j >= 4 {
                    c[i + j - 4] -= v;
                } else {
                    c[i + j] += v;
                }
            }
        }
        Cyclo8(c)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConwayNumber {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for ConwayNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConwayNumber::Finite(q) => write!(f, "{q}"),
            ConwayNumber::Infinity => write!(f, "\u{221e}"),
        }
    }
}

/// `-i b/a` at `A = exp(i pi/4)`, computed exactly.
pub fn conway_from_coefficients(a: &RationalFunc, b: &RationalFunc) -> Result<ConwayNumber> {
    let ev = |p: &LaurentPoly| Cyclo8::from_poly(p);
    let (an, ad) = (ev(a.numer()), ev(a.denom()));
    let (bn, bd) = (ev(b.numer()), ev(b.denom()));
    if ad.is_zero() || bd.is_zero() {
        return Err(Error::Pole);
    }
    let minus_i = Cyclo8::from_poly(&LaurentPoly::monomial(-1, 2));
    let num = minus_i.mul(&bn).mul(&ad);
    let den = bd.mul(&an);
    match (num.is_zero(), den.is_zero()) {
        (true, true) => Err(Error::Computation("both tangle coefficients vanish at sqrt(i)".into())),
        (false, true) => Ok(ConwayNumber::Infinity),
        (true, false) => Ok(ConwayNumber::Finite(BigRational::zero())),
        (false, false) => {
            let k = (0..4).find(|&k| !den.0[k].is_zero()).unwrap();
            let q = &num.0[k] / &den.0[k];
            if (0..4).all(|j| num.0[j] == &q * &den.0[j]) {
                Ok(ConwayNumber::Finite(q))
            } else {
                Err(Error::Computation("the quotient at sqrt(i) is not rational".into()))
            }
        }
    }
}

pub fn conway_number(t: &TangleDiagram) -> Result<ConwayNumber> {
    let (a, b) = tangle_reduce(t)?;
    conway_from_coefficients(&a, &b)
}

/// True when `sum(fractions) - e` is non-zero.
pub fn montesinos_obstruction(e: i64, fractions: &[BigRational]) -> bool {
    let s: BigRational = fractions.iter().sum();
    !(s - BigRational::from_integer(BigInt::from(e))).is_zero()
}

/// Parses `a/b` or an integer.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("fraction {s:?}"));
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
}

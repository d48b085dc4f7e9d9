//! Link diagrams in the disk with `g` holes, Kauffman states and splittings.
//!
//! A diagram is a ribbon graph on the sphere. Crossings have four ports in
//! counterclockwise order, markers have two and carry crossingless loops.
//! Corner `(v, p)` is the angle between ports `p` and `p + 1` of `v`. Holes
//! are punctures placed in faces; hole 0 is the outer boundary.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, RationalFunc};
use crate::qnum::circle;

pub const DEFAULT_STATE_CAP: usize = 24;

/// State cap from `SKEINLAB_STATE_CAP`, falling back to the default.
pub fn state_cap() -> usize {
    std::env::var("SKEINLAB_STATE_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_STATE_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexKind {
    /// `over` is 0 when ports 0-2 form the overstrand, 1 for ports 1-3.
    Crossing { over: u8 },
    Marker,
    /// The outside of a tangle; ports are NW, NE, SE, SW.
    Boundary,
}

impl VertexKind {
    pub fn degree(self) -> usize {
        match self {
            VertexKind::Marker => 2,
            _ => 4,
        }
    }
}

pub type Dart = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    genus: usize,
    ids: Vec<i64>,
    kinds: Vec<VertexKind>,
    offset: Vec<usize>,
    opp: Vec<usize>,
    face: Vec<usize>,
    nfaces: usize,
    holes: Vec<usize>,
    nesting: Vec<(usize, usize)>,
    starts: Vec<Dart>,
    crossings: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingJson {
    pub id: i64,
    pub over_ports: [usize; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub genus: usize,
    #[serde(default)]
    pub crossings: Vec<CrossingJson>,
    #[serde(default)]
    pub markers: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<i64>,
    #[serde(default)]
    pub edges: Vec<[[i64; 2]; 2]>,
    #[serde(default)]
    pub holes: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<[i64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nesting: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// A Kauffman state: one sign per crossing, in crossing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KauffmanState(pub Vec<Sign>);

impl KauffmanState {
    pub fn all(n: usize, s: Sign) -> Self {
        Self(vec![s; n])
    }

    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self((0..n).map(|i| if bits >> i & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect())
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|s| if *s == Sign::Plus { 1 } else { -1 }).sum()
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.0[i] = match s.0[i] {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRegion {
    pub chi: i64,
    pub holes: Vec<usize>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitLoop {
    /// Region on the side of hole 0.
    pub outer: usize,
    pub inner: usize,
    pub trivial: bool,
}

/// The multicurve left after smoothing every crossing, with its
/// complementary regions organised as a tree rooted at hole 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub genus: usize,
    pub regions: Vec<SplitRegion>,
    pub loops: Vec<SplitLoop>,
    pub root: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

impl Splitting {
    /// Builds the region tree from loops given as pairs of region labels.
    pub fn from_loops(genus: usize, nregions: usize, loops: &[(usize, usize)], hole_region: &[usize]) -> Result<Self> {
        if hole_region.len() != genus + 1 {
            return Err(Error::Invalid("one region per hole required".into()));
        }
        let mut adj = vec![Vec::new(); nregions];
        for (i, &(a, b)) in loops.iter().enumerate() {
            if a == b {
                return Err(Error::Invalid("loop with the same region on both sides".into()));
            }
            adj[a].push((i, b));
            adj[b].push((i, a));
        }
        let root = hole_region[0];
        let mut parent = vec![None; nregions];
        let mut seen = vec![false; nregions];
        let mut order = vec![root];
        let mut out_loops: Vec<Option<SplitLoop>> = vec![None; loops.len()];
        seen[root] = true;
        let mut k = 0;
        while k < order.len() {
            let r = order[k];
            k += 1;
            for &(l, o) in &adj[r] {
                if out_loops[l].is_some() {
                    continue;
                }
                if seen[o] {
                    return Err(Error::Invalid("loops do not separate".into()));
                }
                seen[o] = true;
                parent[o] = Some(l);
                out_loops[l] = Some(SplitLoop { outer: r, inner: o, trivial: false });
                order.push(o);
            }
        }
        if order.len() != nregions {
            return Err(Error::Invalid("regions are not connected through loops".into()));
        }
        let mut regions: Vec<SplitRegion> = (0..nregions)
            .map(|_| SplitRegion { chi: 2, holes: Vec::new(), parent: None, children: Vec::new() })
            .collect();
        for (h, &r) in hole_region.iter().enumerate() {
            regions[r].holes.push(h);
            regions[r].chi -= 1;
        }
        let loops: Vec<SplitLoop> = out_loops.into_iter().map(|l| l.expect("every loop reached")).collect();
        for (i, l) in loops.iter().enumerate() {
            regions[l.outer].children.push(i);
            regions[l.outer].chi -= 1;
            regions[l.inner].parent = Some(i);
            regions[l.inner].chi -= 1;
        }
        let mut sp = Splitting { genus, regions, loops, root };
        let mut holes_below = vec![0usize; nregions];
        for &r in order.iter().rev() {
            holes_below[r] += sp.regions[r].holes.len();
            if let Some(l) = sp.regions[r].parent {
                let o = sp.loops[l].outer;
                holes_below[o] += holes_below[r];
            }
        }
        for l in sp.loops.iter_mut() {
            l.trivial = holes_below[l.inner] == 0;
        }
        Ok(sp)
    }

    /// Number of homotopically trivial loops.
    pub fn trivial_count(&self) -> usize {
        self.loops.iter().filter(|l| l.trivial).count()
    }

    pub fn nontrivial_count(&self) -> usize {
        self.loops.len() - self.trivial_count()
    }

    /// Removes every trivial loop together with what it bounds.
    pub fn stripped(&self) -> Splitting {
        let mut keep = vec![false; self.regions.len()];
        let mut stack = vec![self.root];
        keep[self.root] = true;
        while let Some(r) = stack.pop() {
            for &l in &self.regions[r].children {
                if !self.loops[l].trivial {
                    keep[self.loops[l].inner] = true;
                    stack.push(self.loops[l].inner);
                }
            }
        }
        let map: Vec<Option<usize>> = {
            let mut k = 0;
            keep.iter()
                .map(|&b| {
                    b.then(|| {
                        k += 1;
                        k - 1
                    })
                })
                .collect()
        };
        let nreg = keep.iter().filter(|b| **b).count();
        let loops: Vec<(usize, usize)> = self
            .loops
            .iter()
            .filter(|l| !l.trivial)
            .map(|l| (map[l.outer].unwrap(), map[l.inner].unwrap()))
            .collect();
        let mut hole_region = vec![0; self.genus + 1];
        for (r, reg) in self.regions.iter().enumerate() {
            for &h in &reg.holes {
                hole_region[h] = map[r].expect("hole regions are kept");
            }
        }
        Splitting::from_loops(self.genus, nreg, &loops, &hole_region).expect("sub-tree of a valid tree")
    }

    fn encode(&self, r: usize, out: &mut Vec<i64>) {
        let reg = &self.regions[r];
        let mut kids: Vec<Vec<i64>> = reg
            .children
            .iter()
            .map(|&l| {
                let mut v = Vec::new();
                self.encode(self.loops[l].inner, &mut v);
                v
            })
            .collect();
        kids.sort();
        out.push(-1);
        out.push(reg.chi);
        out.push(i64::from(!reg.holes.is_empty()));
        for k in kids {
            out.extend(k);
        }
        out.push(-2);
    }

    /// Canonical key: equal keys give equal brackets.
    pub fn tree_key(&self) -> Vec<i64> {
        let mut v = Vec::new();
        self.encode(self.root, &mut v);
        v
    }

    fn val(&self, r: usize, c: i64, memo: &mut HashMap<(usize, i64), RationalFunc>) -> RationalFunc {
        if c < 0 || (c != 0 && !self.regions[r].holes.is_empty()) {
            return RationalFunc::zero();
        }
        if let Some(v) = memo.get(&(r, c)) {
            return v.clone();
        }
        let mut acc = circle(c as usize).pow(self.regions[r].chi).expect("circle is non-zero");
        for &l in &self.regions[r].children {
            let ch = self.loops[l].inner;
            let s = &self.val(ch, c - 1, memo) + &self.val(ch, c + 1, memo);
            acc = &acc * &s;
            if acc.is_zero() {
                break;
            }
        }
        memo.insert((r, c), acc.clone());
        acc
    }

    /// Sum over colorings differing by one across each loop, zero at holes,
    /// of the product of `circle(color)^chi` over regions.
    pub fn bracket(&self) -> RationalFunc {
        self.val(self.root, 0, &mut HashMap::new())
    }

    /// Depth of each region below the root.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.regions.len()];
        let mut stack = vec![self.root];
        while let Some(r) = stack.pop() {
            for &l in &self.regions[r].children {
                let ch = self.loops[l].inner;
                d[ch] = d[r] + 1;
                stack.push(ch);
            }
        }
        d
    }

    /// The 0/1 coloring of the stripped splitting, if it exists.
    pub fn zero_one_coloring(&self) -> Result<Vec<u32>> {
        let d = self.depths();
        for (r, reg) in self.regions.iter().enumerate() {
            if !reg.holes.is_empty() && d[r] % 2 == 1 {
                return Err(Error::Invalid(format!("hole region {r} lies at odd depth")));
            }
        }
        Ok(d.iter().map(|x| (x % 2) as u32).collect())
    }
}

pub fn splitting_bracket(sp: &Splitting) -> RationalFunc {
    sp.bracket()
}

/// Breadth data reported by [`Diagram::tait_breadth_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaitReport {
    pub breadth: i64,
    pub n: usize,
    pub g: usize,
    pub k: usize,
    pub expected: Option<i64>,
    pub holds: Option<bool>,
    pub bound: Option<i64>,
    pub bound_holds: Option<bool>,
    pub violations: Vec<String>,
}

impl Diagram {
    /// Builds a diagram from vertex kinds, edges between darts, hole faces
    /// and face-merging pairs for disconnected pieces.
    pub fn new(
        genus: usize,
        kinds: Vec<VertexKind>,
        edges: &[(Dart, Dart)],
        holes: Vec<usize>,
        nesting: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let ids = (0..kinds.len() as i64).collect();
        Self::build(genus, ids, kinds, edges, holes, nesting, Vec::new())
    }

    fn build(
        genus: usize,
        ids: Vec<i64>,
        kinds: Vec<VertexKind>,
        edges: &[(Dart, Dart)],
        holes: Vec<usize>,
        nesting: Vec<(usize, usize)>,
        starts: Vec<Dart>,
    ) -> Result<Self> {
        let mut offset = Vec::with_capacity(kinds.len() + 1);
        let mut total = 0;
        for k in &kinds {
            offset.push(total);
            total += k.degree();
        }
        offset.push(total);
        let mut opp = vec![usize::MAX; total];
        for &((v, p), (w, q)) in edges {
            for &(x, y) in &[(v, p), (w, q)] {
                if x >= kinds.len() || y >= kinds[x].degree() {
                    return Err(Error::Invalid(format!("dart ({x},{y}) does not exist")));
                }
            }
            let a = offset[v] + p;
            let b = offset[w] + q;
            if a == b || opp[a] != usize::MAX || opp[b] != usize::MAX {
                return Err(Error::Invalid(format!("dart ({v},{p}) or ({w},{q}) used twice")));
            }
            opp[a] = b;
            opp[b] = a;
        }
        if let Some(d) = opp.iter().position(|&x| x == usize::MAX) {
            return Err(Error::Invalid(format!("dart {d} is not on any edge")));
        }
        let crossings = (0..kinds.len())
            .filter(|&v| matches!(kinds[v], VertexKind::Crossing { .. }))
            .collect();
        let mut d = Diagram {
            genus,
            ids,
            kinds,
            offset,
            opp,
            face: Vec::new(),
            nfaces: 0,
            holes,
            nesting,
            starts,
            crossings,
        };
        d.trace_faces();
        d.validate()?;
        Ok(d)
    }

    fn trace_faces(&mut self) {
        let total = self.opp.len();
        self.face = vec![usize::MAX; total];
        let mut f = 0;
        for s in 0..total {
            if self.face[s] != usize::MAX {
                continue;
            }
            let mut d = s;
            while self.face[d] == usize::MAX {
                self.face[d] = f;
                d = self.face_next(d);
            }
            f += 1;
        }
        self.nfaces = f.max(1);
    }

    fn face_next(&self, d: usize) -> usize {
        let (w, q) = self.dart_of(self.opp[d]);
        let deg = self.kinds[w].degree();
        self.offset[w] + (q + deg - 1) % deg
    }

    fn validate(&self) -> Result<()> {
        if self.holes.len() != self.genus + 1 {
            return Err(Error::Invalid(format!(
                "expected {} hole assignments, found {}",
                self.genus + 1,
                self.holes.len()
            )));
        }
        if let Some(h) = self.holes.iter().find(|&&h| h >= self.nfaces) {
            return Err(Error::Invalid(format!("hole face {h} out of range ({} faces)", self.nfaces)));
        }
        let v = self.kinds.len() as i64;
        let e = (self.opp.len() / 2) as i64;
        let f = if self.kinds.is_empty() { 0 } else { self.nfaces as i64 };
        let c = self.graph_components().len() as i64;
        if v - e + f != 2 * c {
            return Err(Error::Invalid(format!("rotation system is not planar: V-E+F = {}", v - e + f)));
        }
        if self.nesting.len() as i64 != (c - 1).max(0) {
            return Err(Error::Invalid(format!(
                "{c} connected pieces need {} nesting pairs, found {}",
                (c - 1).max(0),
                self.nesting.len()
            )));
        }
        let mut uf = UnionFind::new(c.max(1) as usize);
        let piece = self.piece_of_face();
        for &(a, b) in &self.nesting {
            if a >= self.nfaces || b >= self.nfaces {
                return Err(Error::Invalid("nesting face out of range".into()));
            }
            let (pa, pb) = (piece[a], piece[b]);
            if uf.find(pa) == uf.find(pb) {
                return Err(Error::Invalid("nesting pairs must join distinct pieces".into()));
            }
            uf.union(pa, pb);
        }
        let nb = self.kinds.iter().filter(|k| **k == VertexKind::Boundary).count();
        if nb > 1 {
            return Err(Error::Invalid("at most one boundary vertex".into()));
        }
        for &(v, p) in &self.starts {
            if v >= self.kinds.len() || p >= self.kinds[v].degree() {
                return Err(Error::Invalid("component start dart does not exist".into()));
            }
        }
        Ok(())
    }

    fn graph_components(&self) -> Vec<Vec<usize>> {
        let n = self.kinds.len();
        let mut uf = UnionFind::new(n);
        for d in 0..self.opp.len() {
            uf.union(self.dart_of(d).0, self.dart_of(self.opp[d]).0);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }

    fn piece_of_face(&self) -> Vec<usize> {
        let comps = self.graph_components();
        let mut piece_of_vertex = vec![0; self.kinds.len()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                piece_of_vertex[v] = i;
            }
        }
        let mut out = vec![0; self.nfaces];
        for d in 0..self.opp.len() {
            out[self.face[d]] = piece_of_vertex[self.dart_of(d).0];
        }
        out
    }

    pub fn from_json(j: &DiagramJson) -> Result<Self> {
        let mut all: Vec<(i64, VertexKind)> = j
            .crossings
            .iter()
            .map(|c| {
                let over = match c.over_ports {
                    [0, 2] | [2, 0] => Ok(0),
                    [1, 3] | [3, 1] => Ok(1),
                    p => Err(Error::Invalid(format!("crossing {}: over_ports {p:?}", c.id))),
                }?;
                Ok((c.id, VertexKind::Crossing { over }))
            })
            .collect::<Result<_>>()?;
        all.extend(j.markers.iter().map(|&m| (m, VertexKind::Marker)));
        all.extend(j.boundary.iter().map(|&b| (b, VertexKind::Boundary)));
        all.sort_by_key(|x| x.0);
        if all.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid("duplicate vertex id".into()));
        }
        let index: HashMap<i64, usize> = all.iter().enumerate().map(|(i, x)| (x.0, i)).collect();
        let dart = |[id, p]: [i64; 2]| -> Result<Dart> {
            let v = *index.get(&id).ok_or_else(|| Error::Invalid(format!("unknown vertex id {id}")))?;
            usize::try_from(p).map(|p| (v, p)).map_err(|_| Error::Invalid(format!("bad port {p}")))
        };
        let edges = j.edges.iter().map(|[a, b]| Ok((dart(*a)?, dart(*b)?))).collect::<Result<Vec<_>>>()?;
        let mut holes = vec![usize::MAX; j.genus + 1];
        for (k, &f) in &j.holes {
            let h: usize = k.parse().map_err(|_| Error::Invalid(format!("hole key {k:?}")))?;
            if h > j.genus {
                return Err(Error::Invalid(format!("hole {h} exceeds genus {}", j.genus)));
            }
            holes[h] = f;
        }
        if holes.contains(&usize::MAX) {
            return Err(Error::Invalid("every hole 0..g needs a face".into()));
        }
        let starts = match &j.components {
            Some(c) => c.iter().map(|d| dart(*d)).collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let nesting = j.nesting.iter().flatten().map(|[a, b]| (*a, *b)).collect();
        Self::build(
            j.genus,
            all.iter().map(|x| x.0).collect(),
            all.iter().map(|x| x.1).collect(),
            &edges,
            holes,
            nesting,
            starts,
        )
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: DiagramJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json(&self) -> DiagramJson {
        let mut j = DiagramJson { genus: self.genus, ..Default::default() };
        for (v, k) in self.kinds.iter().enumerate() {
            match k {
                VertexKind::Crossing { over } => j.crossings.push(CrossingJson {
                    id: self.ids[v],
                    over_ports: if *over == 0 { [0, 2] } else { [1, 3] },
                }),
                VertexKind::Marker => j.markers.push(self.ids[v]),
                VertexKind::Boundary => j.boundary = Some(self.ids[v]),
            }
        }
        for d in 0..self.opp.len() {
            let e = self.opp[d];
            if d < e {
                let (v, p) = self.dart_of(d);
                let (w, q) = self.dart_of(e);
                j.edges.push([[self.ids[v], p as i64], [self.ids[w], q as i64]]);
            }
        }
        for (h, &f) in self.holes.iter().enumerate() {
            j.holes.insert(h.to_string(), f);
        }
        if !self.starts.is_empty() {
            j.components = Some(self.starts.iter().map(|&(v, p)| [self.ids[v], p as i64]).collect());
        }
        if !self.nesting.is_empty() {
            j.nesting = Some(self.nesting.iter().map(|&(a, b)| [a, b]).collect());
        }
        j
    }

    /// Diagram from a planar diagram code: `[i, j, k, l]` lists the edges
    /// counterclockwise from the incoming understrand. Genus 0, hole in face 0.
    pub fn from_pd(pd: &[[usize; 4]]) -> Result<Self> {
        let mut ends: BTreeMap<usize, Vec<Dart>> = BTreeMap::new();
        for (v, x) in pd.iter().enumerate() {
            for (p, &e) in x.iter().enumerate() {
                ends.entry(e).or_default().push((v, p));
            }
        }
        let mut edges = Vec::new();
        for (e, ds) in &ends {
            if ds.len() != 2 {
                return Err(Error::Invalid(format!("edge label {e} appears {} times", ds.len())));
            }
            edges.push((ds[0], ds[1]));
        }
        let kinds = vec![VertexKind::Crossing { over: 1 }; pd.len()];
        let mut d = Self::new(0, kinds, &edges, vec![0], Vec::new())
            .map_err(|_| Error::Invalid("planar diagram code is not connected or not planar".into()))?;
        // the understrand leaves through port 2; components passing only over
        // are oriented by increasing edge labels
        d.starts = d
            .strand_components_from(&[])
            .iter()
            .map(|comp| match comp.iter().find(|&&(_, q)| q % 2 == 0) {
                Some(&(w, _)) => (w, 2),
                None => {
                    let (v, _) = comp[0];
                    let (j, l) = (pd[v][1], pd[v][3]);
                    let j_out = if j.abs_diff(l) == 1 { j > l } else { j < l };
                    (v, if j_out { 1 } else { 3 })
                }
            })
            .collect();
        Ok(d)
    }

    /// Closure of a braid on `m` strands; letter `i > 0` is `sigma_i`,
    /// `-i` its inverse. Genus 0 with the hole in face 0.
    pub fn from_braid(m: usize, word: &[i32]) -> Result<Self> {
        let mut kinds = Vec::new();
        let mut edges = Vec::new();
        let mut bottom: Vec<Option<Dart>> = vec![None; m];
        let mut top: Vec<Option<Dart>> = vec![None; m];
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if i == 0 || i >= m {
                return Err(Error::Invalid(format!("generator {g} out of range for {m} strands")));
            }
            let v = kinds.len();
            // ports: 0 SW, 1 SE, 2 NE, 3 NW
            kinds.push(VertexKind::Crossing { over: if g > 0 { 0 } else { 1 } });
            for (pos, port_in, port_out) in [(i - 1, 0, 3), (i, 1, 2)] {
                match top[pos] {
                    Some(d) => edges.push((d, (v, port_in))),
                    None => bottom[pos] = Some((v, port_in)),
                }
                top[pos] = Some((v, port_out));
            }
        }
        for pos in 0..m {
            match (top[pos], bottom[pos]) {
                (Some(t), Some(b)) => edges.push((t, b)),
                _ => {
                    let v = kinds.len();
                    kinds.push(VertexKind::Marker);
                    edges.push(((v, 0), (v, 1)));
                }
            }
        }
        let base = Self::build_unchecked(kinds.clone(), &edges);
        let pieces = base.graph_components();
        let host = base.corner_face(pieces[0][0], 0);
        let nest = pieces[1..].iter().map(|p| (base.corner_face(p[0], 0), host)).collect();
        Self::new(0, kinds, &edges, vec![host], nest)
    }

    fn build_unchecked(kinds: Vec<VertexKind>, edges: &[(Dart, Dart)]) -> Self {
        let mut offset = Vec::new();
        let mut total = 0;
        for k in &kinds {
            offset.push(total);
            total += k.degree();
        }
        offset.push(total);
        let mut opp = vec![0; total];
        for &((v, p), (w, q)) in edges {
            opp[offset[v] + p] = offset[w] + q;
            opp[offset[w] + q] = offset[v] + p;
        }
        let mut d = Diagram {
            genus: 0,
            ids: (0..kinds.len() as i64).collect(),
            crossings: Vec::new(),
            kinds,
            offset,
            opp,
            face: Vec::new(),
            nfaces: 0,
            holes: vec![0],
            nesting: Vec::new(),
            starts: Vec::new(),
        };
        d.trace_faces();
        d
    }

    /// Same underlying graph with new genus, hole faces and nesting.
    pub fn with_holes(&self, genus: usize, holes: Vec<usize>) -> Result<Self> {
        let mut d = self.clone();
        d.genus = genus;
        d.holes = holes;
        d.validate()?;
        Ok(d)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn num_vertices(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossing_vertices(&self) -> &[usize] {
        &self.crossings
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn id(&self, v: usize) -> i64 {
        self.ids[v]
    }

    pub fn num_faces(&self) -> usize {
        self.nfaces
    }

    pub fn hole_faces(&self) -> &[usize] {
        &self.holes
    }

    pub fn nesting(&self) -> &[(usize, usize)] {
        &self.nesting
    }

    pub fn dart(&self, v: usize, p: usize) -> usize {
        self.offset[v] + p
    }

    pub fn dart_of(&self, d: usize) -> Dart {
        let v = self.offset.partition_point(|&o| o <= d) - 1;
        (v, d - self.offset[v])
    }

    /// The dart at the other end of the edge through `(v, p)`.
    pub fn opposite(&self, v: usize, p: usize) -> Dart {
        self.dart_of(self.opp[self.dart(v, p)])
    }

    /// Face containing corner `(v, p)`.
    pub fn corner_face(&self, v: usize, p: usize) -> usize {
        self.face[self.dart(v, p)]
    }

    /// Faces on the left and right of the edge leaving `v` through port `p`.
    pub fn edge_sides(&self, v: usize, p: usize) -> (usize, usize) {
        let deg = self.kinds[v].degree();
        (self.corner_face(v, p), self.corner_face(v, (p + deg - 1) % deg))
    }

    pub fn mirror(&self) -> Self {
        let mut d = self.clone();
        for k in d.kinds.iter_mut() {
            if let VertexKind::Crossing { over } = k {
                *over ^= 1;
            }
        }
        d
    }

    fn straight(&self, v: usize, q: usize) -> usize {
        match self.kinds[v] {
            VertexKind::Marker => 1 - q,
            _ => (q + 2) % 4,
        }
    }

    /// Link components as sequences of outgoing darts, oriented by the
    /// declared start darts where given.
    pub fn components(&self) -> Vec<Vec<Dart>> {
        self.strand_components_from(&self.starts)
    }

    fn strand_components_from(&self, starts: &[Dart]) -> Vec<Vec<Dart>> {
        let total = self.opp.len();
        let mut seen = vec![false; total];
        let mut out = Vec::new();
        let order: Vec<usize> = starts.iter().map(|&(v, p)| self.dart(v, p)).chain(0..total).collect();
        for s in order {
            if seen[s] || self.kinds[self.dart_of(s).0] == VertexKind::Boundary {
                continue;
            }
            let mut comp = Vec::new();
            let mut d = s;
            loop {
                seen[d] = true;
                comp.push(self.dart_of(d));
                let e = self.opp[d];
                seen[e] = true;
                let (w, q) = self.dart_of(e);
                if self.kinds[w] == VertexKind::Boundary {
                    break;
                }
                d = self.dart(w, self.straight(w, q));
                if d == s {
                    break;
                }
            }
            out.push(comp);
        }
        out
    }

    /// Port joined to `q` at vertex `v` when its crossing is smoothed by `s`.
    pub fn smoothing_partner(&self, v: usize, q: usize, s: Sign) -> usize {
        match self.kinds[v] {
            VertexKind::Marker => 1 - q,
            VertexKind::Crossing { over } => {
                let o = over as usize;
                // A-smoothing joins corners o and o+2
                let r = (q + 4 - o) % 4;
                let r2 = match (s, r) {
                    (Sign::Plus, 1) => 2,
                    (Sign::Plus, 2) => 1,
                    (Sign::Plus, 3) => 0,
                    (Sign::Plus, _) => 3,
                    (Sign::Minus, 0) => 1,
                    (Sign::Minus, 1) => 0,
                    (Sign::Minus, 2) => 3,
                    (Sign::Minus, _) => 2,
                };
                (r2 + o) % 4
            }
            VertexKind::Boundary => unreachable!("boundary vertices are never smoothed"),
        }
    }

    fn check_state(&self, s: &KauffmanState) -> Result<()> {
        if s.0.len() != self.crossings.len() {
            return Err(Error::Invalid(format!(
                "state has {} signs for {} crossings",
                s.0.len(),
                self.crossings.len()
            )));
        }
        if self.kinds.contains(&VertexKind::Boundary) {
            return Err(Error::Invalid("tangle diagrams have no closed splitting".into()));
        }
        Ok(())
    }

    pub fn resolve(&self, s: &KauffmanState) -> Result<Splitting> {
        self.check_state(s)?;
        Ok(self.resolve_unchecked(s))
    }

    fn resolve_unchecked(&self, s: &KauffmanState) -> Splitting {
        let mut sign = vec![Sign::Plus; self.kinds.len()];
        for (i, &v) in self.crossings.iter().enumerate() {
            sign[v] = s.0[i];
        }
        let mut uf = UnionFind::new(self.nfaces);
        for &(a, b) in &self.nesting {
            uf.union(a, b);
        }
        for &v in &self.crossings {
            let VertexKind::Crossing { over } = self.kinds[v] else { unreachable!() };
            let c = over as usize + if sign[v] == Sign::Plus { 0 } else { 1 };
            uf.union(self.corner_face(v, c % 4), self.corner_face(v, (c + 2) % 4));
        }
        let total = self.opp.len();
        let mut seen = vec![false; total];
        let mut loops = Vec::new();
        for st in 0..total {
            if seen[st] {
                continue;
            }
            let (v0, p0) = self.dart_of(st);
            let (l, r) = self.edge_sides(v0, p0);
            loops.push((uf.find(l), uf.find(r)));
            let mut d = st;
            loop {
                seen[d] = true;
                let e = self.opp[d];
                seen[e] = true;
                let (w, q) = self.dart_of(e);
                d = self.dart(w, self.smoothing_partner(w, q, sign[w]));
                if d == st {
                    break;
                }
            }
        }
        let mut label = HashMap::new();
        for f in 0..self.nfaces {
            let r = uf.find(f);
            let n = label.len();
            label.entry(r).or_insert(n);
        }
        let loops: Vec<(usize, usize)> = loops.iter().map(|(a, b)| (label[a], label[b])).collect();
        let hole_region: Vec<usize> = self.holes.iter().map(|&f| label[&uf.find(f)]).collect();
        Splitting::from_loops(self.genus, label.len(), &loops, &hole_region)
            .expect("splittings of planar diagrams are trees")
    }

    /// Kauffman bracket via the state sum, with the default state cap.
    pub fn bracket(&self) -> Result<RationalFunc> {
        self.bracket_with_cap(state_cap())
    }

    pub fn bracket_with_cap(&self, cap: usize) -> Result<RationalFunc> {
        let n = self.crossings.len();
        if n > cap || n >= 63 {
            return Err(Error::StateCap { crossings: n, cap });
        }
        self.check_state(&KauffmanState::all(n, Sign::Plus))?;
        if self.genus == 0 {
            return Ok(self.planar_bracket());
        }
        let groups = (0..1u64 << n)
            .into_par_iter()
            .fold(HashMap::<Vec<i64>, (BTreeMap<i64, i64>, u64)>::new, |mut acc, bits| {
                let st = KauffmanState::from_bits(n, bits);
                let sp = self.resolve_unchecked(&st);
                let e = acc.entry(sp.tree_key()).or_insert_with(|| (BTreeMap::new(), bits));
                *e.0.entry(st.sum()).or_default() += 1;
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, (poly, rep)) in b {
                    let e = a.entry(k).or_insert_with(|| (BTreeMap::new(), rep));
                    e.1 = e.1.min(rep);
                    for (x, c) in poly {
                        *e.0.entry(x).or_default() += c;
                    }
                }
                a
            });
        let mut keys: Vec<_> = groups.into_iter().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0));
        let total: RationalFunc = keys
            .into_par_iter()
            .map(|(_, (poly, rep))| {
                let weight = LaurentPoly::from_terms(poly.into_iter().map(|(e, c)| (e, BigInt::from(c))));
                let sp = self.resolve_unchecked(&KauffmanState::from_bits(n, rep));
                &RationalFunc::from(weight) * &sp.bracket()
            })
            .collect::<Vec<_>>()
            .into_iter()
            .sum();
        Ok(total)
    }

    /// Loop count of the state `bits`, reusing `seen` as scratch space.
    fn count_loops(&self, bits: u64, pos: &[usize], seen: &mut [bool]) -> usize {
        seen.iter_mut().for_each(|x| *x = false);
        let mut loops = 0;
        for st in 0..self.opp.len() {
            if seen[st] {
                continue;
            }
            loops += 1;
            let mut d = st;
            loop {
                seen[d] = true;
                let e = self.opp[d];
                seen[e] = true;
                let (w, q) = self.dart_of(e);
                let sign = if pos[w] != usize::MAX && bits >> pos[w] & 1 == 1 { Sign::Minus } else { Sign::Plus };
                d = self.dart(w, self.smoothing_partner(w, q, sign));
                if d == st {
                    break;
                }
            }
        }
        loops
    }

    /// State sum in the sphere, where every loop is trivial.
    fn planar_bracket(&self) -> RationalFunc {
        let n = self.crossings.len();
        let mut pos = vec![usize::MAX; self.kinds.len()];
        for (i, &v) in self.crossings.iter().enumerate() {
            pos[v] = i;
        }
        let counts = (0..1u64 << n)
            .into_par_iter()
            .fold(
                || (BTreeMap::<(i64, usize), i64>::new(), vec![false; self.opp.len()]),
                |(mut acc, mut seen), bits| {
                    let l = self.count_loops(bits, &pos, &mut seen);
                    let minus = bits.count_ones() as i64;
                    *acc.entry((n as i64 - 2 * minus, l)).or_default() += 1;
                    (acc, seen)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, c) in b {
                    *a.entry(k).or_default() += c;
                }
                a
            });
        let delta = LaurentPoly::from_terms([(2, BigInt::from(-1)), (-2, BigInt::from(-1))]);
        let mut total = LaurentPoly::zero();
        for ((e, l), c) in counts {
            total = &total + &(&LaurentPoly::monomial(c, e) * &delta.pow(l as u32));
        }
        total.into()
    }

    /// Parity of the intersection of the diagram with a dual path from each
    /// hole `1..=g` to hole 0.
    pub fn z2_class(&self) -> Vec<u8> {
        let pot = self.dual_potential(|_, _| 1);
        self.holes[1..].iter().map(|&f| (pot[f] - pot[self.holes[0]]).rem_euclid(2) as u8).collect()
    }

    /// Per-component version of [`Diagram::z2_class`].
    pub fn z2_class_components(&self) -> Vec<Vec<u8>> {
        let comp = self.dart_component();
        (0..self.components().len())
            .map(|c| {
                let pot = self.dual_potential(|d, _| i64::from(comp[d].0 == c));
                self.holes[1..].iter().map(|&f| (pot[f] - pot[self.holes[0]]).rem_euclid(2) as u8).collect()
            })
            .collect()
    }

    /// Component index of each dart and whether it points along the
    /// orientation.
    fn dart_component(&self) -> Vec<(usize, bool)> {
        let mut out = vec![(usize::MAX, false); self.opp.len()];
        for (c, comp) in self.components().iter().enumerate() {
            for &(v, p) in comp {
                let d = self.dart(v, p);
                out[d] = (c, true);
                out[self.opp[d]] = (c, false);
            }
        }
        out
    }

    /// Potential on faces: crossing the edge at dart `d` from its left face
    /// to its right face adds `w(d, forward)`.
    fn dual_potential(&self, w: impl Fn(usize, bool) -> i64) -> Vec<i64> {
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); self.nfaces];
        let comp = self.dart_component();
        for d in 0..self.opp.len() {
            if !comp[d].1 {
                continue;
            }
            let (v, p) = self.dart_of(d);
            let (l, r) = self.edge_sides(v, p);
            let x = w(d, true);
            adj[l].push((r, x));
            adj[r].push((l, -x));
        }
        for &(a, b) in &self.nesting {
            adj[a].push((b, 0));
            adj[b].push((a, 0));
        }
        let mut pot = vec![i64::MIN; self.nfaces];
        let start = self.holes.first().copied().unwrap_or(0);
        pot[start] = 0;
        let mut q = VecDeque::from([start]);
        while let Some(f) = q.pop_front() {
            for &(g, x) in &adj[f] {
                if pot[g] == i64::MIN {
                    pot[g] = pot[f] + x;
                    q.push_back(g);
                }
            }
        }
        pot.iter().map(|&x| if x == i64::MIN { 0 } else { x }).collect()
    }

    pub fn is_z2_trivial(&self) -> bool {
        self.z2_class().iter().all(|&x| x == 0)
    }

    /// Half the top degree of the bracket of the non-trivial part of the
    /// splitting, read off the 0/1 coloring.
    pub fn psi(&self, s: &KauffmanState) -> Result<i64> {
        if !self.is_z2_trivial() {
            return Err(Error::Invalid("psi needs a Z2-homologically trivial diagram".into()));
        }
        Ok(psi_of(&self.resolve(s)?))
    }

    pub fn adequacy(&self) -> Result<(bool, bool)> {
        let n = self.crossings.len();
        let check = |s0: Sign| -> Result<bool> {
            let base = KauffmanState::all(n, s0);
            let t = self.resolve(&base)?.trivial_count();
            for i in 0..n {
                if self.resolve(&base.flipped(i))?.trivial_count() >= t {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        Ok((check(Sign::Plus)?, check(Sign::Minus)?))
    }

    pub fn connected(&self) -> bool {
        self.graph_components().len() <= 1
    }

    pub fn alternating(&self) -> bool {
        self.components().iter().all(|comp| {
            let seq: Vec<bool> = comp
                .iter()
                .filter_map(|&(v, p)| match self.kinds[v] {
                    VertexKind::Crossing { over } => Some(p % 2 == over as usize),
                    _ => None,
                })
                .collect();
            seq.iter().zip(seq.iter().cycle().skip(1)).all(|(a, b)| a != b)
        })
    }

    /// Merged faces after nesting.
    fn region_of_face(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.nfaces);
        for &(a, b) in &self.nesting {
            uf.union(a, b);
        }
        (0..self.nfaces).map(|f| uf.find(f)).collect()
    }

    fn external_regions(&self) -> Vec<bool> {
        let reg = self.region_of_face();
        let mut ext = vec![false; self.nfaces];
        for &h in &self.holes {
            ext[reg[h]] = true;
        }
        (0..self.nfaces).map(|f| ext[reg[f]]).collect()
    }

    /// Crossings cut off by a disk meeting the diagram in that crossing only.
    pub fn nugatory_crossings(&self) -> Vec<usize> {
        let reg = self.region_of_face();
        let mut has_hole = vec![false; self.nfaces];
        for &f in &self.holes {
            has_hole[reg[f]] = true;
        }
        let mut out = Vec::new();
        for (i, &v) in self.crossings.iter().enumerate() {
            for c in 0..2 {
                let f = reg[self.corner_face(v, c)];
                if f != reg[self.corner_face(v, c + 2)] {
                    continue;
                }
                let Some((a, b)) = self.sides_at(v, c, f, &reg) else { continue };
                let holes_in = |s: &[bool]| (0..self.nfaces).any(|g| s[g] && has_hole[g]);
                if !holes_in(&a) || !holes_in(&b) {
                    out.push(i);
                    break;
                }
            }
        }
        out
    }

    /// Regions on the two sides of a curve through region `f` and crossing
    /// `v` separating ports `c+1, c+2` from `c+3, c`; `None` when the
    /// crossing is not a cut vertex between these port pairs.
    fn sides_at(&self, v: usize, c: usize, f: usize, reg: &[usize]) -> Option<(Vec<bool>, Vec<bool>)> {
        let n = self.kinds.len();
        let mut uf = UnionFind::new(n + 4);
        for d in 0..self.opp.len() {
            let node = |(w, q): Dart| if w == v { n + q } else { w };
            uf.union(node(self.dart_of(d)), node(self.dart_of(self.opp[d])));
        }
        uf.union(n + (c + 1) % 4, n + (c + 2) % 4);
        uf.union(n + (c + 3) % 4, n + c % 4);
        let (ra, rb) = (uf.find(n + (c + 1) % 4), uf.find(n + c % 4));
        if ra == rb {
            return None;
        }
        let root: Vec<usize> = (0..n + 4).map(|x| uf.find(x)).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.nfaces];
        for d in 0..self.opp.len() {
            let (w, p) = self.dart_of(d);
            let (l, r) = self.edge_sides(w, p);
            adj[reg[l]].push(reg[r]);
        }
        let side = |r0: usize| {
            let mut seen = vec![false; self.nfaces];
            let mut stack = Vec::new();
            for d in 0..self.opp.len() {
                let (w, q) = self.dart_of(d);
                let node = if w == v { n + q } else { w };
                let g = reg[self.face[d]];
                if root[node] == r0 && g != f && !seen[g] {
                    seen[g] = true;
                    stack.push(g);
                }
            }
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if y != f && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            seen
        };
        Some((side(ra), side(rb)))
    }

    /// Crossings with two corners in external regions, split into those
    /// meeting two distinct external regions and those meeting one twice.
    pub fn external_crossings(&self) -> (Vec<usize>, Vec<usize>) {
        let ext = self.external_regions();
        let reg = self.region_of_face();
        let (mut two, mut twice) = (Vec::new(), Vec::new());
        for (i, &v) in self.crossings.iter().enumerate() {
            let fs: Vec<usize> = (0..4).map(|c| self.corner_face(v, c)).filter(|&f| ext[f]).map(|f| reg[f]).collect();
            if fs.len() < 2 {
                continue;
            }
            let mut u = fs.clone();
            u.sort();
            u.dedup();
            if u.len() >= 2 {
                two.push(i);
            } else {
                twice.push(i);
            }
        }
        (two, twice)
    }

    pub fn simple(&self) -> bool {
        let (two, twice) = self.external_crossings();
        self.nugatory_crossings().is_empty() && two.is_empty() && twice.is_empty()
    }

    /// Number of holes the diagram actually needs: the count of regions
    /// carrying holes, minus one. Meaningful for connected diagrams.
    pub fn effective_genus(&self) -> usize {
        let reg = self.region_of_face();
        let mut rs: Vec<usize> = self.holes.iter().map(|&f| reg[f]).collect();
        rs.sort();
        rs.dedup();
        rs.len() - 1
    }

    pub fn tait_breadth_check(&self) -> Result<TaitReport> {
        let b = self.bracket()?;
        let n = self.crossings.len();
        let g = self.genus;
        let (two, twice) = self.external_crossings();
        let mut violations = Vec::new();
        if !self.connected() {
            violations.push("not connected".to_string());
        }
        if !self.alternating() {
            violations.push("not alternating".to_string());
        }
        if !self.is_z2_trivial() {
            violations.push("not Z2-homologically trivial".to_string());
        }
        if !self.nugatory_crossings().is_empty() {
            violations.push("has nugatory crossings".to_string());
        }
        if self.effective_genus() != g {
            violations.push(format!("diagram fits in a disk with {} holes", self.effective_genus()));
        }
        if !twice.is_empty() {
            violations.push("crossing adjacent twice to one external region".to_string());
        }
        let k = two.len();
        let breadth = b.breadth();
        let expected = violations.is_empty().then(|| 4 * n as i64 + 4 - 4 * g as i64 - 4 * k as i64);
        let bound = if self.connected() && self.is_z2_trivial() {
            let p = KauffmanState::all(n, Sign::Plus);
            let m = KauffmanState::all(n, Sign::Minus);
            let sp = self.resolve(&p)?;
            let sm = self.resolve(&m)?;
            Some(
                2 * (n as i64
                    + sp.trivial_count() as i64
                    + sm.trivial_count() as i64
                    + psi_of(&sp)
                    + psi_of(&sm)),
            )
        } else {
            None
        };
        Ok(TaitReport {
            breadth,
            n,
            g,
            k,
            expected,
            holds: expected.map(|e| e == breadth),
            bound,
            bound_holds: bound.map(|x| breadth <= x),
            violations,
        })
    }

    /// Signs of the crossings, in crossing order, for the current orientation.
    pub fn crossing_signs(&self) -> Vec<i64> {
        let mut enter = vec![[usize::MAX; 2]; self.kinds.len()];
        for comp in self.components() {
            for &(v, p) in &comp {
                let (w, q) = self.opposite(v, p);
                if let VertexKind::Crossing { over } = self.kinds[w] {
                    enter[w][usize::from(q % 2 != over as usize)] = q;
                }
            }
        }
        self.crossings
            .iter()
            .map(|&v| {
                let [o, u] = enter[v];
                if (u + 4 - o) % 4 == 1 {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }

    pub fn writhe(&self) -> i64 {
        self.crossing_signs().iter().sum()
    }

    /// Linking matrix of a genus-0 oriented diagram, writhes on the diagonal.
    pub fn linking_matrix(&self) -> Result<Vec<Vec<i64>>> {
        if self.genus != 0 {
            return Err(Error::Invalid("linking matrix needs a genus 0 diagram".into()));
        }
        let comps = self.components();
        let mut comp_of = HashMap::new();
        for (c, comp) in comps.iter().enumerate() {
            for &(v, p) in comp {
                comp_of.insert((v, p), c);
            }
        }
        let signs = self.crossing_signs();
        let k = comps.len();
        let mut m = vec![vec![0i64; k]; k];
        for (i, &v) in self.crossings.iter().enumerate() {
            let VertexKind::Crossing { over } = self.kinds[v] else { unreachable!() };
            let o = over as usize;
            let c1 = comp_of.get(&(v, o)).or_else(|| comp_of.get(&(v, o + 2))).copied().unwrap();
            let c2 = comp_of.get(&(v, o + 1)).or_else(|| comp_of.get(&(v, (o + 3) % 4))).copied().unwrap();
            if c1 == c2 {
                m[c1][c1] += signs[i];
            } else {
                m[c1][c2] += signs[i];
                m[c2][c1] += signs[i];
            }
        }
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                if i != j {
                    *x /= 2;
                }
            }
        }
        Ok(m)
    }

    pub fn linking_signature(&self) -> Result<i64> {
        Ok(crate::linalg::signature_i64(&self.linking_matrix()?))
    }

    /// Winding number of each component around hole 1, for `g = 1`.
    pub fn winding_numbers_g1(&self) -> Result<Vec<i64>> {
        if self.genus != 1 {
            return Err(Error::Invalid("winding numbers are defined for g = 1".into()));
        }
        let comp = self.dart_component();
        Ok((0..self.components().len())
            .map(|c| {
                let pot = self.dual_potential(|d, _| i64::from(comp[d].0 == c));
                pot[self.holes[1]] - pot[self.holes[0]]
            })
            .collect())
    }

    pub fn homotopy_trivial_g1(&self) -> Result<bool> {
        Ok(self.winding_numbers_g1()?.iter().all(|&w| w == 0))
    }
}

/// `psi` of a splitting whose stripped part admits the 0/1 coloring.
pub fn psi_of(sp: &Splitting) -> i64 {
    let st = sp.stripped();
    match st.zero_one_coloring() {
        Ok(col) => st.regions.iter().zip(col).map(|(r, c)| r.chi * c as i64).sum(),
        Err(_) => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rf(s: &str) -> RationalFunc {
        s.parse().unwrap()
    }

    fn trefoil_pd() -> Vec<[usize; 4]> {
        vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]]
    }

    fn unknot() -> Diagram {
        Diagram::new(0, vec![VertexKind::Marker], &[((0, 0), (0, 1))], vec![0], vec![]).unwrap()
    }

    /// `k` concentric loops around hole 1.
    fn cores(k: usize) -> Diagram {
        let kinds = vec![VertexKind::Marker; k];
        let edges: Vec<_> = (0..k).map(|i| ((i, 0), (i, 1))).collect();
        if k == 0 {
            return Diagram::new(1, kinds, &edges, vec![0, 0], vec![]).unwrap();
        }
        let base = Diagram::build_unchecked(kinds.clone(), &edges);
        // loop i has faces (i,0) and (i,1); nest loop i+1 inside face (i,1)
        let nest = (0..k - 1).map(|i| (base.corner_face(i, 1), base.corner_face(i + 1, 0))).collect();
        Diagram::new(1, kinds, &edges, vec![base.corner_face(0, 0), base.corner_face(k - 1, 1)], nest).unwrap()
    }

    #[test]
    fn trivial_diagrams() {
        let u = unknot();
        let sp = u.resolve(&KauffmanState(vec![])).unwrap();
        assert_eq!(sp.trivial_count(), 1);
        assert_eq!(u.bracket().unwrap(), RationalFunc::delta());
        let e = Diagram::new(0, vec![], &[], vec![0], vec![]).unwrap();
        assert!(e.bracket().unwrap().is_one());
        assert!(e.z2_class().is_empty());
        let c = cores(1);
        let sp = c.resolve(&KauffmanState(vec![])).unwrap();
        assert_eq!((sp.trivial_count(), sp.nontrivial_count()), (0, 1));
        assert_eq!(c.z2_class(), vec![1]);
        assert!(c.bracket().unwrap().is_zero());
    }

    #[test]
    fn knot_atlas_trefoil() {
        let d = Diagram::from_pd(&trefoil_pd()).unwrap();
        let delta = RationalFunc::delta();
        assert_eq!(d.bracket().unwrap(), &delta * &rf("A^7 - A^3 - A^-5"));
        assert_eq!(d.writhe(), -3);
        assert_eq!(d.mirror().bracket().unwrap(), &delta * &rf("-A^5 - A^-3 + A^-7"));
        assert!(d.alternating());
        assert!(d.simple());
        assert_eq!(d.adequacy().unwrap(), (true, true));
        let r = d.tait_breadth_check().unwrap();
        assert_eq!((r.breadth, r.holds), (16, Some(true)));
    }

    #[test]
    fn curl() {
        // one crossing with ports 1,2 joined: a kink
        let kinds = vec![VertexKind::Crossing { over: 0 }];
        let d = Diagram::new(0, kinds, &[((0, 0), (0, 3)), ((0, 1), (0, 2))], vec![0], vec![]).unwrap();
        let b = &d.bracket().unwrap() / &RationalFunc::delta();
        assert!(b == rf("-A^3") || b == rf("-A^-3"));
        assert!(!d.simple());
        assert_eq!(d.nugatory_crossings(), vec![0]);
    }

    #[test]
    fn parallel_cores_match_annulus() {
        for k in 0..=6 {
            assert_eq!(cores(k).bracket().unwrap(), crate::tl::annulus_parallel_cores(k), "k = {k}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let d = Diagram::from_pd(&trefoil_pd()).unwrap();
        let j = serde_json::to_string(&d.to_json()).unwrap();
        let e = Diagram::from_json_str(&j).unwrap();
        assert_eq!(e.bracket().unwrap(), d.bracket().unwrap());
        assert_eq!(e.writhe(), d.writhe());
        assert!(Diagram::from_json_str("{\"genus\": 0, \"holes\": {\"0\": 0}}").is_ok());
        assert!(Diagram::from_json_str("{\"genus\": 1, \"holes\": {\"0\": 0}}").is_err());
        assert!(Diagram::from_json_str("nope").is_err());
    }

    #[test]
    fn invalid_rotation_rejected() {
        // trefoil with two ports swapped is no longer planar
        let mut pd = trefoil_pd();
        pd[0].swap(1, 3);
        pd[0].swap(0, 1);
        assert!(Diagram::from_pd(&pd).is_err());
    }

    #[test]
    fn hopf_link() {
        let d = Diagram::from_braid(2, &[1, 1]).unwrap();
        let m = d.linking_matrix().unwrap();
        assert_eq!(m[0][1].abs(), 1);
        assert_eq!(m[0][0], 0);
        let u = unknot();
        assert_eq!(u.linking_matrix().unwrap(), vec![vec![0]]);
        assert_eq!(u.linking_signature().unwrap(), 0);
    }

    #[test]
    fn state_cap() {
        let d = Diagram::from_pd(&trefoil_pd()).unwrap();
        assert_eq!(d.bracket_with_cap(2), Err(Error::StateCap { crossings: 3, cap: 2 }));
    }

    fn random_braid() -> impl Strategy<Value = (usize, Vec<i32>)> {
        (2usize..5).prop_flat_map(|m| {
            let letters = prop::collection::vec((1..m as i32, any::<bool>()), 1..8)
                .prop_map(|v| v.into_iter().map(|(i, s)| if s { i } else { -i }).collect::<Vec<_>>());
            (Just(m), letters)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn mirror_is_antilinear((m, w) in random_braid()) {
            let d = Diagram::from_braid(m, &w).unwrap();
            prop_assert_eq!(d.mirror().bracket().unwrap(), d.bracket().unwrap().mirror());
        }

        #[test]
        fn stripped_splitting_identity((m, w) in random_braid(), bits in any::<u64>(), hole_seed in prop::collection::vec(any::<usize>(), 3)) {
            let d = Diagram::from_braid(m, &w).unwrap();
            let f = d.num_faces();
            let holes: Vec<usize> = hole_seed.iter().map(|x| x % f).collect();
            let d = d.with_holes(2, holes).unwrap();
            let n = d.num_crossings();
            let sp = d.resolve(&KauffmanState::from_bits(n, bits)).unwrap();
            let lhs = sp.bracket();
            let rhs = &RationalFunc::delta().pow(sp.trivial_count() as i64).unwrap() * &sp.stripped().bracket();
            prop_assert_eq!(lhs, rhs);
            let chi: i64 = sp.regions.iter().map(|r| r.chi).sum();
            prop_assert_eq!(chi, 1 - 2);
        }

        #[test]
        fn parity_of_exponents((m, w) in random_braid()) {
            let d = Diagram::from_braid(m, &w).unwrap();
            let b = d.bracket().unwrap();
            let n = d.num_crossings() as i64;
            let l = b.as_laurent().unwrap();
            prop_assert!(l.terms().all(|(e, _)| (e - n).rem_euclid(2) == 0));
        }
    }
}

//! Shadow polyhedra: regions with gleams, trivalent edges, tetrahedral
//! vertices, admissible colorings and the state sum over `Q(A)`.

use std::collections::{BTreeSet, VecDeque};

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::Splitting;
use crate::error::{Error, Result};
use crate::exactalg::RationalFunc;
use crate::linalg;
use crate::qnum::{self, circle, is_admissible, Phase};

pub const DEFAULT_COLOR_CAP_ENV: &str = "SKEINLAB_COLOR_CAP";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub chi: i64,
    /// Twice the gleam.
    pub gleam2: i64,
    /// Fixed color of a region touching the boundary.
    pub color: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub regions: [usize; 3],
    pub chi: i64,
}

/// Six regions around a vertex, in the edge order of `qnum::tet`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub regions: [usize; 6],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub region: usize,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryVertex {
    pub regions: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Shadow {
    pub regions: Vec<Region>,
    pub edges: Vec<Edge>,
    pub vertices: Vec<Vertex>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub boundary_vertices: Vec<BoundaryVertex>,
    /// Signed region-by-edge incidence matrix.
    pub incidence: Option<Vec<Vec<i64>>>,
    pub declared_chi: Option<i64>,
}

/// A color for every region.
pub type Coloring = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GleamJson {
    Int(i64),
    Str(String),
}

impl GleamJson {
    fn doubled(&self) -> Result<i64> {
        match self {
            GleamJson::Int(n) => Ok(2 * n),
            GleamJson::Str(s) => {
                let s = s.trim();
                let bad = || Error::Parse(format!("gleam {s:?}"));
                match s.split_once('/') {
                    Some((p, "2")) => p.trim().parse().map_err(|_| bad()),
                    Some(_) => Err(bad()),
                    None => s.parse::<i64>().map(|n| 2 * n).map_err(|_| bad()),
                }
            }
        }
    }

    fn from_doubled(g2: i64) -> Self {
        if g2 % 2 == 0 {
            GleamJson::Int(g2 / 2)
        } else {
            GleamJson::Str(format!("{g2}/2"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionJson {
    pub chi: i64,
    #[serde(default = "zero_gleam")]
    pub gleam: GleamJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
}

fn zero_gleam() -> GleamJson {
    GleamJson::Int(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub regions: [usize; 3],
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEdgeJson {
    pub region: usize,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BoundaryJson {
    #[serde(default)]
    pub edges: Vec<BoundaryEdgeJson>,
    #[serde(default)]
    pub vertices: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShadowJson {
    pub regions: Vec<RegionJson>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
    #[serde(default)]
    pub vertices: Vec<[usize; 6]>,
    #[serde(default)]
    pub boundary: BoundaryJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incidence: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
}

impl Shadow {
    pub fn validate(&self) -> Result<()> {
        let n = self.regions.len();
        let bad = |m: String| Err(Error::Invalid(m));
        for (i, r) in self.regions.iter().enumerate() {
            if r.chi > 2 {
                return bad(format!("region {i} has euler characteristic {} > 2", r.chi));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.regions.iter().any(|&r| r >= n) {
                return bad(format!("edge {i} references a missing region"));
            }
            if !(0..=1).contains(&e.chi) {
                return bad(format!("edge {i} has euler characteristic {}", e.chi));
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.regions.iter().any(|&r| r >= n) {
                return bad(format!("vertex {i} references a missing region"));
            }
        }
        for (i, e) in self.boundary_edges.iter().enumerate() {
            if e.region >= n || !(0..=1).contains(&e.chi) {
                return bad(format!("boundary edge {i} is malformed"));
            }
            if self.regions[e.region].color.is_none() {
                return bad(format!("region {} meets the boundary but has no color", e.region));
            }
        }
        for (i, v) in self.boundary_vertices.iter().enumerate() {
            if v.regions.iter().any(|&r| r >= n || self.regions[r].color.is_none()) {
                return bad(format!("boundary vertex {i} needs three colored regions"));
            }
        }
        if let Some(m) = &self.incidence {
            if m.len() != n || m.iter().any(|row| row.len() != self.edges.len()) {
                return bad("incidence matrix must be regions x edges".into());
            }
        }
        if let Some(c) = self.declared_chi {
            if c != self.chi() {
                return bad(format!("declared euler characteristic {c}, computed {}", self.chi()));
            }
        }
        Ok(())
    }

    pub fn from_json(j: &ShadowJson) -> Result<Self> {
        let regions = j
            .regions
            .iter()
            .map(|r| Ok(Region { chi: r.chi, gleam2: r.gleam.doubled()?, color: r.color }))
            .collect::<Result<Vec<_>>>()?;
        let x = Shadow {
            regions,
            edges: j.edges.iter().map(|e| Edge { regions: e.regions, chi: e.chi }).collect(),
            vertices: j.vertices.iter().map(|&regions| Vertex { regions }).collect(),
            boundary_edges: j.boundary.edges.iter().map(|e| BoundaryEdge { region: e.region, chi: e.chi }).collect(),
            boundary_vertices: j.boundary.vertices.iter().map(|&regions| BoundaryVertex { regions }).collect(),
            incidence: j.incidence.clone(),
            declared_chi: j.chi,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: ShadowJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json(&self) -> ShadowJson {
        ShadowJson {
            regions: self
                .regions
                .iter()
                .map(|r| RegionJson { chi: r.chi, gleam: GleamJson::from_doubled(r.gleam2), color: r.color })
                .collect(),
            edges: self.edges.iter().map(|e| EdgeJson { regions: e.regions, chi: e.chi }).collect(),
            vertices: self.vertices.iter().map(|v| v.regions).collect(),
            boundary: BoundaryJson {
                edges: self.boundary_edges.iter().map(|e| BoundaryEdgeJson { region: e.region, chi: e.chi }).collect(),
                vertices: self.boundary_vertices.iter().map(|v| v.regions).collect(),
            },
            incidence: self.incidence.clone(),
            chi: self.declared_chi,
        }
    }

    /// Euler characteristic from the cell counts.
    pub fn chi(&self) -> i64 {
        self.vertices.len() as i64 + self.boundary_vertices.len() as i64
            - self.edges.iter().map(|e| e.chi).sum::<i64>()
            - self.boundary_edges.iter().map(|e| e.chi).sum::<i64>()
            + self.regions.iter().map(|r| r.chi).sum::<i64>()
    }

    pub fn gleam_sum2(&self) -> i64 {
        self.regions.iter().map(|r| r.gleam2).sum()
    }

    /// A sphere with the given doubled gleam.
    pub fn sphere(gleam2: i64) -> Self {
        Shadow {
            regions: vec![Region { chi: 2, gleam2, color: None }],
            incidence: Some(vec![vec![]]),
            ..Default::default()
        }
    }

    /// The disk with `g` holes, gleam 0, every boundary circle colored 0.
    pub fn holed_disk(g: usize) -> Self {
        Shadow {
            regions: vec![Region { chi: 1 - g as i64, gleam2: 0, color: Some(0) }],
            boundary_edges: (0..=g).map(|_| BoundaryEdge { region: 0, chi: 0 }).collect(),
            incidence: Some(vec![vec![]]),
            ..Default::default()
        }
    }

    /// The shadow of a splitting: the surface regions, one annulus colored 1
    /// per loop, and hole regions colored 0.
    pub fn from_splitting(sp: &Splitting) -> Self {
        let nr = sp.regions.len();
        let mut regions: Vec<Region> = sp
            .regions
            .iter()
            .map(|r| Region { chi: r.chi, gleam2: 0, color: (!r.holes.is_empty()).then_some(0) })
            .collect();
        let mut boundary_edges: Vec<BoundaryEdge> = Vec::new();
        for (i, r) in sp.regions.iter().enumerate() {
            boundary_edges.extend(r.holes.iter().map(|_| BoundaryEdge { region: i, chi: 0 }));
        }
        let mut edges = Vec::new();
        let nl = sp.loops.len();
        let mut incidence = vec![vec![0i64; nl]; nr + nl];
        for (k, l) in sp.loops.iter().enumerate() {
            let ann = nr + k;
            regions.push(Region { chi: 0, gleam2: 0, color: Some(1) });
            edges.push(Edge { regions: [l.outer, l.inner, ann], chi: 0 });
            boundary_edges.push(BoundaryEdge { region: ann, chi: 0 });
            incidence[l.outer][k] += 1;
            incidence[l.inner][k] -= 1;
            incidence[ann][k] += 1;
        }
        Shadow { regions, edges, boundary_edges, incidence: Some(incidence), ..Default::default() }
    }

    fn touches_boundary(&self) -> Vec<bool> {
        let mut t: Vec<bool> = self.regions.iter().map(|r| r.color.is_some()).collect();
        for e in &self.boundary_edges {
            t[e.region] = true;
        }
        t
    }
}

/// Default coloring cap: `SKEINLAB_COLOR_CAP`, else `max(1, boundary max) * #regions + 1`.
pub fn default_color_cap(x: &Shadow) -> u32 {
    if let Some(c) = std::env::var(DEFAULT_COLOR_CAP_ENV).ok().and_then(|v| v.parse().ok()) {
        return c;
    }
    let mb = x.regions.iter().filter_map(|r| r.color).max().unwrap_or(0).max(1);
    mb * x.regions.len() as u32 + 1
}

struct Plan {
    order: Vec<usize>,
    /// Edges whose last region is assigned at each position of `order`.
    closing: Vec<Vec<usize>>,
}

fn plan(x: &Shadow) -> Plan {
    let n = x.regions.len();
    let mut adj = vec![Vec::new(); n];
    for e in &x.edges {
        for &a in &e.regions {
            for &b in &e.regions {
                if a != b {
                    adj[a].push(b);
                }
            }
        }
    }
    let mut seen: Vec<bool> = x.regions.iter().map(|r| r.color.is_some()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&r| seen[r]).collect();
    let mut order = Vec::new();
    let mut start = 0;
    loop {
        while let Some(r) = queue.pop_front() {
            if x.regions[r].color.is_none() {
                order.push(r);
            }
            for &o in &adj[r] {
                if !seen[o] {
                    seen[o] = true;
                    queue.push_back(o);
                }
            }
        }
        while start < n && seen[start] {
            start += 1;
        }
        if start == n {
            break;
        }
        seen[start] = true;
        queue.push_back(start);
    }
    let mut pos = vec![None; n];
    for (i, &r) in order.iter().enumerate() {
        pos[r] = Some(i);
    }
    let mut closing = vec![Vec::new(); order.len()];
    for (i, e) in x.edges.iter().enumerate() {
        if let Some(p) = e.regions.iter().filter_map(|&r| pos[r]).max() {
            closing[p].push(i);
        }
    }
    Plan { order, closing }
}

fn enumerate_with<F>(x: &Shadow, max: u32, ok: &F) -> Result<Vec<Coloring>>
where
    F: Fn(u32, u32, u32) -> bool + Sync,
{
    x.validate()?;
    let base: Vec<u32> = x.regions.iter().map(|r| r.color.unwrap_or(0)).collect();
    let fixed_ok = x.edges.iter().all(|e| {
        if e.regions.iter().all(|&r| x.regions[r].color.is_some()) {
            let [a, b, c] = e.regions.map(|r| base[r]);
            ok(a, b, c)
        } else {
            true
        }
    });
    if !fixed_ok {
        return Ok(Vec::new());
    }
    let p = plan(x);
    if p.order.is_empty() {
        return Ok(vec![base]);
    }
    let cands = candidates(x, &p, 0, &base, max);
    let out: Vec<Vec<Coloring>> = cands
        .into_par_iter()
        .map(|c| {
            let mut col = base.clone();
            col[p.order[0]] = c;
            let mut out = Vec::new();
            if closes(x, &p, 0, &col, ok) {
                extend(x, &p, 1, &mut col, max, ok, &mut out);
            }
            out
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// Colors allowed at a position given edges with two earlier distinct slots.
fn candidates(x: &Shadow, p: &Plan, i: usize, col: &[u32], max: u32) -> Vec<u32> {
    let r = p.order[i];
    let (mut lo, mut hi, mut parity) = (0u32, max, None);
    for &e in &p.closing[i] {
        let s = x.edges[e].regions;
        if s.iter().filter(|&&t| t == r).count() != 1 {
            continue;
        }
        let others: Vec<u32> = s.iter().filter(|&&t| t != r).map(|&t| col[t]).collect();
        let (a, b) = (others[0], others[1]);
        lo = lo.max(a.abs_diff(b));
        hi = hi.min(a + b);
        parity = Some((a + b) % 2);
    }
    (lo..=hi).filter(|c| parity.map_or(true, |q| c % 2 == q)).collect()
}

fn closes<F: Fn(u32, u32, u32) -> bool>(x: &Shadow, p: &Plan, i: usize, col: &[u32], ok: &F) -> bool {
    p.closing[i].iter().all(|&e| {
        let [a, b, c] = x.edges[e].regions.map(|r| col[r]);
        ok(a, b, c)
    })
}

fn extend<F: Fn(u32, u32, u32) -> bool>(
    x: &Shadow,
    p: &Plan,
    i: usize,
    col: &mut Vec<u32>,
    max: u32,
    ok: &F,
    out: &mut Vec<Coloring>,
) {
    if i == p.order.len() {
        out.push(col.clone());
        return;
    }
    for c in candidates(x, p, i, col, max) {
        col[p.order[i]] = c;
        if closes(x, p, i, col, ok) {
            extend(x, p, i + 1, col, max, ok, out);
        }
    }
}

fn admissible(a: u32, b: u32, c: u32) -> bool {
    is_admissible(a as usize, b as usize, c as usize)
}

/// All admissible colorings with colors at most `max_color`; reaching the
/// bound on a free region is an error.
pub fn enumerate_colorings(x: &Shadow, max_color: u32) -> Result<Vec<Coloring>> {
    let all = enumerate_with(x, max_color, &admissible)?;
    for c in &all {
        for (r, reg) in x.regions.iter().enumerate() {
            if reg.color.is_none() && c[r] == max_color {
                return Err(Error::ColorBound { region: r, bound: max_color });
            }
        }
    }
    Ok(all)
}

/// All colorings with colors at most `r - 2` that are `r`-admissible on every edge.
pub fn enumerate_q_colorings(x: &Shadow, r: usize) -> Result<Vec<Coloring>> {
    if r < 3 {
        return Err(Error::Invalid(format!("r = {r} < 3")));
    }
    let max = (r - 2) as u32;
    if let Some(i) = x.regions.iter().position(|g| g.color.is_some_and(|c| c > max)) {
        return Err(Error::Invalid(format!("boundary color of region {i} exceeds r-2")));
    }
    let ok = |a: u32, b: u32, c: u32| qnum::is_q_admissible(a as usize, b as usize, c as usize, r);
    enumerate_with(x, max, &ok)
}

fn check_coloring(x: &Shadow, xi: &[u32]) -> Result<()> {
    if xi.len() != x.regions.len() {
        return Err(Error::Invalid("coloring length differs from region count".into()));
    }
    for (i, r) in x.regions.iter().enumerate() {
        if r.color.is_some_and(|c| c != xi[i]) {
            return Err(Error::Invalid(format!("region {i} must carry its boundary color")));
        }
    }
    for e in &x.edges {
        let [a, b, c] = e.regions.map(|r| xi[r]);
        if !admissible(a, b, c) {
            return Err(Error::Inadmissible(format!("({a},{b},{c})")));
        }
    }
    Ok(())
}

/// Phase of a region with doubled gleam `g2` and color `c`; `sign` is the
/// sign of the exponent of `A`.
pub fn region_phase(g2: i64, c: u32, sign: i64) -> Phase {
    let c = c as i64;
    Phase::new(g2 * c, sign * g2 * c * (c + 2))
}

/// The summand of one coloring.
pub fn coloring_value(x: &Shadow, xi: &[u32]) -> Result<RationalFunc> {
    check_coloring(x, xi)?;
    let u = |r: usize| xi[r] as usize;
    let mut phase = Phase::ONE;
    let mut v = RationalFunc::one();
    for (i, r) in x.regions.iter().enumerate() {
        v = &v * &circle(u(i)).pow(r.chi)?;
        phase = phase.mul(region_phase(r.gleam2, xi[i], -1));
    }
    for vx in &x.vertices {
        let [a, b, c, d, e, f] = vx.regions.map(u);
        v = &v * &qnum::tet(a, b, c, d, e, f)?;
    }
    for bv in &x.boundary_vertices {
        let [a, b, c] = bv.regions.map(u);
        v = &v * &qnum::theta(a, b, c)?;
    }
    for e in &x.edges {
        let [a, b, c] = e.regions.map(u);
        v = v.checked_div(&qnum::theta(a, b, c)?.pow(e.chi)?)?;
    }
    for e in &x.boundary_edges {
        v = v.checked_div(&circle(u(e.region)).pow(e.chi)?)?;
    }
    Ok(&v * &phase.resolve()?)
}

/// State sum over all admissible colorings, under the default color cap.
pub fn shadow_eval_q(x: &Shadow) -> Result<RationalFunc> {
    shadow_eval_q_with_cap(x, default_color_cap(x))
}

pub fn shadow_eval_q_with_cap(x: &Shadow, cap: u32) -> Result<RationalFunc> {
    let cols = enumerate_colorings(x, cap)?;
    let terms = cols.par_iter().map(|c| coloring_value(x, c)).collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().sum())
}

/// Euler characteristic and regions of the surface of odd colors.
pub fn odd_surface(x: &Shadow, xi: &[u32]) -> (i64, Vec<usize>) {
    let odd = |r: usize| xi[r] % 2 == 1;
    let two_odd = |s: &[usize]| s.iter().filter(|&&r| odd(r)).count() >= 2;
    let regions: Vec<usize> = (0..x.regions.len()).filter(|&r| odd(r)).collect();
    let mut chi: i64 = regions.iter().map(|&r| x.regions[r].chi).sum();
    chi -= x.edges.iter().filter(|e| two_odd(&e.regions)).map(|e| e.chi).sum::<i64>();
    chi += x
        .vertices
        .iter()
        .filter(|v| {
            let [a, b, c, d, e, f] = v.regions;
            [[a, b, c], [a, e, f], [d, b, f], [d, e, c]].iter().any(|t| two_odd(t))
        })
        .count() as i64;
    (chi, regions)
}

pub fn red_boundary_vertices(x: &Shadow, xi: &[u32]) -> Result<usize> {
    let mut n = 0;
    for v in &x.boundary_vertices {
        let [a, b, c] = v.regions.map(|r| xi[r] as usize);
        if qnum::is_red(a, b, c)? {
            n += 1;
        }
    }
    Ok(n)
}

/// Checks `ord_i <X>_xi >= chi(S_xi) - r/2`.
pub fn order_theorem_check(x: &Shadow, xi: &[u32]) -> Result<bool> {
    let v = coloring_value(x, xi)?;
    let (chi, _) = odd_surface(x, xi);
    let red = red_boundary_vertices(x, xi)? as i64;
    Ok(match v.ord_at_i() {
        None => true,
        Some(o) => 2 * o >= 2 * chi - red,
    })
}

/// Integer basis of second homology and twice the intersection form on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub basis: Vec<Vec<i64>>,
    pub doubled: Vec<Vec<i64>>,
}

impl IntersectionForm {
    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.doubled[i][j].into(), 2.into())
    }
}

pub fn intersection_form(x: &Shadow) -> Result<IntersectionForm> {
    x.validate()?;
    let m = match &x.incidence {
        Some(m) => m.clone(),
        None if x.edges.is_empty() => vec![Vec::new(); x.regions.len()],
        None => return Err(Error::Invalid("no incidence matrix".into())),
    };
    let touch = x.touches_boundary();
    let forced: Vec<usize> = (0..x.regions.len()).filter(|&r| touch[r]).collect();
    let rows: Vec<Vec<i64>> = m
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut row = row.clone();
            row.extend(forced.iter().map(|&f| i64::from(f == r)));
            row
        })
        .collect();
    let basis = linalg::left_kernel(&rows, x.regions.len());
    let doubled = basis
        .iter()
        .map(|h1| {
            basis
                .iter()
                .map(|h2| (0..x.regions.len()).map(|r| h1[r] * h2[r] * x.regions[r].gleam2).sum())
                .collect()
        })
        .collect();
    Ok(IntersectionForm { basis, doubled })
}

pub fn signature(x: &Shadow) -> Result<i64> {
    Ok(linalg::signature_i64(&intersection_form(x)?.doubled))
}

/// Connected sum along a disk in `rx` and a disk in `ry`, joined by a new
/// disk region with gleam `k`; the two regions lose `k` from their gleams.
pub fn connected_sum(x: &Shadow, y: &Shadow, rx: usize, ry: usize, k: i64) -> Result<Shadow> {
    if rx >= x.regions.len() || ry >= y.regions.len() {
        return Err(Error::Invalid("connected sum region out of range".into()));
    }
    let nx = x.regions.len();
    let ex = x.edges.len();
    let shift = |s: &[usize]| s.iter().map(|&r| r + nx).collect::<Vec<_>>();
    let mut out = x.clone();
    out.declared_chi = None;
    out.regions.extend(y.regions.iter().cloned());
    out.edges.extend(y.edges.iter().map(|e| Edge { regions: shift(&e.regions).try_into().unwrap(), chi: e.chi }));
    out.vertices
        .extend(y.vertices.iter().map(|v| Vertex { regions: shift(&v.regions).try_into().unwrap() }));
    out.boundary_edges
        .extend(y.boundary_edges.iter().map(|e| BoundaryEdge { region: e.region + nx, chi: e.chi }));
    out.boundary_vertices
        .extend(y.boundary_vertices.iter().map(|v| BoundaryVertex { regions: shift(&v.regions).try_into().unwrap() }));
    let (ryy, d) = (ry + nx, nx + y.regions.len());
    for r in [rx, ryy] {
        out.regions[r].chi -= 1;
        out.regions[r].gleam2 -= 2 * k;
    }
    out.regions.push(Region { chi: 1, gleam2: 2 * k, color: None });
    out.edges.push(Edge { regions: [rx, ryy, d], chi: 0 });
    out.incidence = match (&x.incidence, &y.incidence) {
        (Some(mx), Some(my)) => {
            let ey = y.edges.len();
            let mut m = vec![vec![0i64; ex + ey + 1]; d + 1];
            for (r, row) in mx.iter().enumerate() {
                m[r][..ex].copy_from_slice(row);
            }
            for (r, row) in my.iter().enumerate() {
                m[r + nx][ex..ex + ey].copy_from_slice(row);
            }
            m[rx][ex + ey] -= 1;
            m[ryy][ex + ey] -= 1;
            m[d][ex + ey] += 1;
            Some(m)
        }
        _ => None,
    };
    Ok(out)
}

/// Bubble move: connected sum with a sphere of gleam `kind`.
pub fn bubble_move(x: &Shadow, region: usize, kind: i64) -> Result<Shadow> {
    if !(-1..=1).contains(&kind) {
        return Err(Error::Invalid(format!("bubble kind {kind} not in {{0, 1, -1}}")));
    }
    connected_sum(x, &Shadow::sphere(2 * kind), region, 0, 0)
}

/// Regions of `x` touching the boundary, in index order.
pub fn boundary_regions(x: &Shadow) -> BTreeSet<usize> {
    let t = x.touches_boundary();
    (0..t.len()).filter(|&r| t[r]).collect()
}

//! Evaluation at `A = exp(i pi / 2r)`: quantum integers, the shadow formula
//! for Reshetikhin-Turaev-Witten invariants, lens spaces and Turaev-Viro.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qnum::is_q_admissible;
use crate::shadow::{self, connected_sum, enumerate_q_colorings, region_phase, Shadow};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub construction: f64,
    pub identity: f64,
    pub zero_guard: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { construction: 1e-12, identity: 1e-8, zero_guard: 1e-12 }
    }
}

#[derive(Clone, Debug)]
pub struct RootContext {
    pub r: usize,
    pub a: Complex64,
    pub sqrt_a: Complex64,
    pub eta: f64,
    pub kappa: Complex64,
    pub tol: Tolerances,
    qints: Vec<f64>,
}

impl RootContext {
    pub fn new(r: usize) -> Result<Self> {
        Self::with_tolerances(r, Tolerances::default())
    }

    pub fn with_tolerances(r: usize, tol: Tolerances) -> Result<Self> {
        if r < 3 {
            return Err(Error::Invalid(format!("r = {r} < 3")));
        }
        let rf = r as f64;
        let a = Complex64::from_polar(1.0, PI / (2.0 * rf));
        let sqrt_a = Complex64::from_polar(1.0, PI / (4.0 * rf));
        let eta = (2.0 / rf).sqrt() * (PI / rf).sin();
        let kappa = -Complex64::i() * Complex64::from_polar(1.0, -PI * (2.0 * rf * rf - rf + 6.0) / (4.0 * rf));
        let qints = (0..2 * r).map(|n| sine_qint(r, n as i64)).collect();
        let ctx = RootContext { r, a, sqrt_a, eta, kappa, tol, qints };
        if (ctx.a.powu(4 * r as u32) - 1.0).norm() > tol.construction {
            return Err(Error::Computation("A is not a 4r-th root of unity".into()));
        }
        if ctx.circle_at(r - 1).abs() > tol.construction * 1e3 {
            return Err(Error::Computation("circle(r-1) does not vanish".into()));
        }
        Ok(ctx)
    }

    pub fn qint_at(&self, n: i64) -> f64 {
        match usize::try_from(n) {
            Ok(k) if k < self.qints.len() => self.qints[k],
            _ => sine_qint(self.r, n),
        }
    }

    pub fn qfact_at(&self, n: usize) -> f64 {
        (1..=n as i64).map(|k| self.qint_at(k)).product()
    }

    pub fn circle_at(&self, n: usize) -> f64 {
        let v = self.qint_at(n as i64 + 1);
        if n % 2 == 1 {
            -v
        } else {
            v
        }
    }

    fn check_q(&self, a: usize, b: usize, c: usize) -> Result<()> {
        if !is_q_admissible(a, b, c, self.r) {
            return Err(Error::Inadmissible(format!("({a},{b},{c}) at r={}", self.r)));
        }
        Ok(())
    }

    /// `num / prod [d]!`, guarding each factorial in the denominator.
    fn ratio(&self, num: f64, dens: &[usize]) -> Result<f64> {
        let mut v = num;
        for &d in dens {
            let f = self.qfact_at(d);
            if f.abs() < self.tol.zero_guard {
                return Err(Error::Computation(format!("vanishing factor [{d}]! at r={}", self.r)));
            }
            v /= f;
        }
        Ok(v)
    }

    pub fn theta_at(&self, a: usize, b: usize, c: usize) -> Result<f64> {
        self.check_q(a, b, c)?;
        let s = (a + b + c) / 2;
        let (i, j, k) = (s - c, s - a, s - b);
        let num = self.qfact_at(s + 1) * self.qfact_at(i) * self.qfact_at(j) * self.qfact_at(k);
        let v = self.ratio(num, &[a, b, c, 1])?;
        Ok(if s % 2 == 1 { -v } else { v })
    }

    /// Tetrahedron in the edge order of `qnum::tet`.
    pub fn tet_at(&self, a: usize, b: usize, c: usize, d: usize, e: usize, f: usize) -> Result<f64> {
        for (x, y, z) in [(a, b, c), (a, e, f), (d, b, f), (d, e, c)] {
            self.check_q(x, y, z)?;
        }
        let tri = [(a + b + c) / 2, (a + e + f) / 2, (d + b + f) / 2, (d + e + c) / 2];
        let sq = [(a + b + d + e) / 2, (a + c + d + f) / 2, (b + c + e + f) / 2];
        let mut pre = 1.0;
        for s in sq {
            for t in tri {
                pre *= self.qfact_at(s - t);
            }
        }
        let pre = self.ratio(pre, &[a, b, c, d, e, f])?;
        let lo = *tri.iter().max().unwrap();
        let hi = *sq.iter().min().unwrap();
        let mut sum = 0.0;
        for z in lo..=hi {
            let dens: Vec<usize> = tri.iter().map(|t| z - t).chain(sq.iter().map(|s| s - z)).collect();
            let term = self.ratio(self.qfact_at(z + 1), &dens)?;
            sum += if z % 2 == 1 { -term } else { term };
        }
        Ok(pre * sum)
    }

    pub fn eta_c(&self) -> Complex64 {
        Complex64::new(self.eta, 0.0)
    }
}

fn sine_qint(r: usize, n: i64) -> f64 {
    let rf = r as f64;
    (n as f64 * PI / rf).sin() / (PI / rf).sin()
}

/// Sum in a fixed pairwise order.
fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Summand of one coloring; `sign` is the sign of the gleam exponent of `A`,
/// `None` drops the gleam phases.
fn coloring_value_at(ctx: &RootContext, x: &Shadow, xi: &[u32], sign: Option<i64>) -> Result<Complex64> {
    let u = |r: usize| xi[r] as usize;
    let mut v = Complex64::new(1.0, 0.0);
    for (i, reg) in x.regions.iter().enumerate() {
        v *= ctx.circle_at(u(i)).powi(reg.chi as i32);
        if let Some(s) = sign {
            v *= region_phase(reg.gleam2, xi[i], s).eval(ctx.sqrt_a);
        }
    }
    for vx in &x.vertices {
        let [a, b, c, d, e, f] = vx.regions.map(u);
        v *= ctx.tet_at(a, b, c, d, e, f)?;
    }
    for bv in &x.boundary_vertices {
        let [a, b, c] = bv.regions.map(u);
        v *= ctx.theta_at(a, b, c)?;
    }
    for e in &x.edges {
        let [a, b, c] = e.regions.map(u);
        let t = ctx.theta_at(a, b, c)?;
        if e.chi != 0 && t.abs() < ctx.tol.zero_guard {
            return Err(Error::Computation(format!("vanishing theta({a},{b},{c}) at r={}", ctx.r)));
        }
        v /= t.powi(e.chi as i32);
    }
    for e in &x.boundary_edges {
        v /= ctx.circle_at(u(e.region)).powi(e.chi as i32);
    }
    Ok(v)
}

fn state_sum(ctx: &RootContext, x: &Shadow, sign: Option<i64>) -> Result<Complex64> {
    let cols = enumerate_q_colorings(x, ctx.r)?;
    let terms = cols.par_iter().map(|c| coloring_value_at(ctx, x, c, sign)).collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&terms))
}

/// Signature used by the shadow formula: from the incidence data when present,
/// otherwise 0 (the shadow is taken to collapse onto a graph).
pub fn shadow_signature(x: &Shadow) -> Result<i64> {
    if x.incidence.is_some() || x.edges.is_empty() {
        shadow::signature(x)
    } else {
        Ok(0)
    }
}

pub fn rtw_from_shadow(ctx: &RootContext, x: &Shadow) -> Result<Complex64> {
    let sigma = shadow_signature(x)?;
    let sum = state_sum(ctx, x, Some(1))?;
    Ok(ctx.kappa.powi(-sigma as i32) * ctx.eta.powi(x.chi() as i32) * sum)
}

pub fn lens_rtw_closed(ctx: &RootContext, n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let terms: Vec<Complex64> = (0..=ctx.r - 2)
        .map(|a| {
            let ai = a as i64;
            let sign = if (ai * n) % 2 == 0 { 1.0 } else { -1.0 };
            ctx.circle_at(a).powi(2) * sign * ctx.a.powf((ai * n * (ai + 2)) as f64)
        })
        .collect();
    ctx.eta * ctx.eta * ctx.kappa.powi(-(n.signum() as i32)) * pairwise_sum(&terms)
}

/// Turaev-Viro state sum of a closed simple polyhedron with zero gleams.
pub fn tv_from_polyhedron(ctx: &RootContext, x: &Shadow) -> Result<f64> {
    if x.regions.is_empty() {
        return Err(Error::Invalid("empty polyhedron".into()));
    }
    if x.regions.iter().any(|r| r.gleam2 != 0) {
        return Err(Error::Invalid("polyhedron has non-zero gleams".into()));
    }
    if !x.boundary_edges.is_empty() || !x.boundary_vertices.is_empty() || x.regions.iter().any(|r| r.color.is_some()) {
        return Err(Error::Invalid("polyhedron has boundary".into()));
    }
    let sum = state_sum(ctx, x, None)?;
    let v = ctx.eta.powi(2 * x.chi() as i32) * sum;
    if v.im.abs() > ctx.tol.identity {
        return Err(Error::Computation(format!("Turaev-Viro value {v} is not real")));
    }
    Ok(v.re)
}

/// Checks `rtw(x # y) = rtw(x) rtw(y) / eta`, summing along region 0 of each.
pub fn conn_sum_identity_check(ctx: &RootContext, x: &Shadow, y: &Shadow) -> Result<bool> {
    let s = connected_sum(x, y, 0, 0, 0)?;
    let lhs = rtw_from_shadow(ctx, &s)?;
    let rhs = rtw_from_shadow(ctx, x)? * rtw_from_shadow(ctx, y)? / ctx.eta;
    Ok((lhs - rhs).norm() <= ctx.tol.identity)
}

/// Renders a real number with 12 significant digits.
pub fn format_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{}", format!("{x:.11e}").parse::<f64>().unwrap_or(x))
}

/// Renders `a+bi` with 12 significant digits; parts below `1e-12 |z|` print as 0.
pub fn format_complex(z: Complex64) -> String {
    let floor = 1e-12 * z.norm().max(1.0);
    let chop = |x: f64| if x.abs() < floor { 0.0 } else { x };
    let (re, im) = (chop(z.re), chop(z.im));
    let sign = if im < 0.0 { "-" } else { "+" };
    format!("{}{}{}i", format_real(re), sign, format_real(im.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rp2() -> Shadow {
        Shadow { regions: vec![shadow::Region { chi: 1, gleam2: 0, color: None }], ..Default::default() }
    }

    /// Disk attached to a circle by a degree three map.
    fn p3() -> Shadow {
        Shadow {
            regions: vec![shadow::Region { chi: 1, gleam2: 0, color: None }],
            edges: vec![shadow::Edge { regions: [0, 0, 0], chi: 0 }],
            ..Default::default()
        }
    }

    #[test]
    fn context_constants() {
        for r in 3..10 {
            let ctx = RootContext::new(r).unwrap();
            assert!((ctx.a.norm() - 1.0).abs() < 1e-12);
            assert!(ctx.circle_at(r - 1).abs() < 1e-9);
            assert!((ctx.kappa.norm() - 1.0).abs() < 1e-12);
            let s: f64 = (0..=r - 2).map(|a| ctx.circle_at(a).powi(2)).sum();
            assert!((s * ctx.eta * ctx.eta - 1.0).abs() < 1e-12);
        }
        assert!(RootContext::new(2).is_err());
        let ctx = RootContext::new(5).unwrap();
        assert!((ctx.circle_at(1) + 2.0 * (PI / 5.0).cos()).abs() < 1e-12);
        assert!((ctx.theta_at(1, 1, 0).unwrap() - ctx.circle_at(1)).abs() < 1e-12);
        assert!(ctx.theta_at(3, 3, 2).is_err());
    }

    #[test]
    fn symbolic_values_agree() {
        for r in 3..=7 {
            let ctx = RootContext::new(r).unwrap();
            let m = r - 2;
            for a in 0..=m {
                let s = qnum::circle(a).eval_complex(ctx.a).unwrap();
                assert!(close(s, c(ctx.circle_at(a)), 1e-9));
                for b in 0..=m {
                    for cc in 0..=m {
                        if !is_q_admissible(a, b, cc, r) {
                            continue;
                        }
                        let s = qnum::theta(a, b, cc).unwrap().eval_complex(ctx.a).unwrap();
                        assert!(close(s, c(ctx.theta_at(a, b, cc).unwrap()), 1e-9));
                    }
                }
            }
            for t in [[1, 1, 0, 1, 1, 0], [1, 1, 2, 1, 1, 2], [2, 2, 2, 2, 2, 2], [2, 1, 1, 2, 1, 1], [3, 2, 1, 1, 2, 3]] {
                let [a, b, cc, d, e, f] = t;
                let Ok(n) = ctx.tet_at(a, b, cc, d, e, f) else { continue };
                let s = qnum::tet(a, b, cc, d, e, f).unwrap().eval_complex(ctx.a).unwrap();
                assert!(close(s, c(n), 1e-9), "r={r} {t:?}");
            }
        }
    }

    #[test]
    fn holed_disks() {
        for r in 3..8 {
            let ctx = RootContext::new(r).unwrap();
            for g in 0..4 {
                let v = rtw_from_shadow(&ctx, &Shadow::holed_disk(g)).unwrap();
                assert!(close(v, c(ctx.eta.powi(1 - g as i32)), 1e-10));
                let tv = tv_from_polyhedron(&ctx, &Shadow::holed_disk(g));
                assert!(tv.is_err());
            }
        }
    }

    #[test]
    fn spheres_are_lens_spaces() {
        for r in 4..=8 {
            let ctx = RootContext::new(r).unwrap();
            let s3 = rtw_from_shadow(&ctx, &Shadow::sphere(2)).unwrap();
            assert!(close(s3, ctx.eta_c(), 1e-8));
            assert!(close(lens_rtw_closed(&ctx, 1), ctx.eta_c(), 1e-8));
            assert!(close(lens_rtw_closed(&ctx, -1), ctx.eta_c(), 1e-8));
            for n in -4..=4 {
                let v = rtw_from_shadow(&ctx, &Shadow::sphere(2 * n)).unwrap();
                assert!(close(v, lens_rtw_closed(&ctx, n), 1e-8), "r={r} n={n}");
                assert!(close(lens_rtw_closed(&ctx, -n), lens_rtw_closed(&ctx, n).conj(), 1e-9));
            }
            let p = rtw_from_shadow(&ctx, &Shadow::sphere(2)).unwrap() * rtw_from_shadow(&ctx, &Shadow::sphere(-2)).unwrap();
            assert!(close(p, c(ctx.eta * ctx.eta), 1e-9));
        }
    }

    #[test]
    fn spines_of_small_lens_spaces() {
        for r in 3..=9 {
            let ctx = RootContext::new(r).unwrap();
            let pairs = [(Shadow::sphere(0), 1), (rp2(), 2), (p3(), 3)];
            for (spine, n) in pairs {
                let spine = if n == 1 {
                    Shadow { regions: vec![shadow::Region { chi: 2, gleam2: 0, color: None }], ..Default::default() }
                } else {
                    spine
                };
                let tv = tv_from_polyhedron(&ctx, &spine).unwrap();
                assert!((tv - lens_rtw_closed(&ctx, n).norm_sqr()).abs() < 1e-7, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn connected_sums() {
        let ctx = RootContext::new(5).unwrap();
        let s1 = Shadow::sphere(2);
        assert!(conn_sum_identity_check(&ctx, &s1, &s1).unwrap());
        let s = connected_sum(&s1, &s1, 0, 0, 0).unwrap();
        assert!(close(rtw_from_shadow(&ctx, &s).unwrap(), ctx.eta_c(), 1e-8));
        assert!(conn_sum_identity_check(&ctx, &Shadow::sphere(4), &Shadow::holed_disk(1)).unwrap());
        let x = Shadow::sphere(6);
        let base = rtw_from_shadow(&ctx, &x).unwrap();
        for kind in [1, -1] {
            let b = shadow::bubble_move(&x, 0, kind).unwrap();
            assert!(close(rtw_from_shadow(&ctx, &b).unwrap(), base, 1e-8));
        }
        let b0 = shadow::bubble_move(&x, 0, 0).unwrap();
        assert!(close(rtw_from_shadow(&ctx, &b0).unwrap(), base / ctx.eta, 1e-8));
    }

    #[test]
    fn complex_format() {
        assert_eq!(format_complex(Complex64::new(1.0, -0.5)), "1-0.5i");
        assert_eq!(format_complex(Complex64::new(1.0 / 3.0, 2.0)), "0.333333333333+2i");
        assert_eq!(format_complex(Complex64::new(0.5, -3e-16)), "0.5+0i");
        assert_eq!(format_real(-0.0), "0");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn negated_gleams_conjugate(r in 3usize..8, g in prop::collection::vec(-3i64..4, 1..3), k in -2i64..3) {
            let ctx = RootContext::new(r).unwrap();
            let mut x = Shadow::sphere(2 * g[0]);
            for &n in &g[1..] {
                x = connected_sum(&x, &Shadow::sphere(2 * n), 0, 0, k).unwrap();
            }
            let mut y = x.clone();
            for reg in y.regions.iter_mut() {
                reg.gleam2 = -reg.gleam2;
            }
            let a = rtw_from_shadow(&ctx, &x).unwrap();
            let b = rtw_from_shadow(&ctx, &y).unwrap();
            prop_assert!(close(a, b.conj(), 1e-8));
        }
    }
}

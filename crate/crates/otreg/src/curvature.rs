//! Cost-sectional curvature by nested fourth-order differencing, condition
//! sweeps, and the sphere cross-checks (triangle quotient, distance
//! expansion along diverging geodesics).

use crate::cexp::c_exponential;
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{orthonormalize_pair, sphere_exp, tangent_project, BoxDomain, Chart, Point, SphereCap};
use crate::rng::split_rng;
use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;

/// Scale of the reported curvature. Fixed so that the squared geodesic
/// distance on the unit sphere reports 8 at coincident points, i.e. eight
/// times the sectional curvature; the raw mixed fourth difference of
/// -c(x, T_x0(p)) carries a factor 1/12 relative to that convention.
pub const CURVATURE_SCALE: f64 = 12.0;

/// Default outer stencil step. Large enough that the 12-point fourth-order
/// stencil stays far above the roundoff floor (values near machine epsilon
/// divided by h^4), small enough for percent-level truncation after
/// extrapolation.
pub const DEFAULT_H: f64 = 0.04;

/// Absolute floor below which sweep minima are treated as zero when deciding
/// a verdict; covers the stencil's roundoff noise on unit-scale costs.
pub const VERDICT_FLOOR: f64 = 1e-5;

/// A base pair with an orthonormalized direction pair.
#[derive(Debug, Clone)]
pub struct TangentPair {
    pub x: Point,
    pub y: Point,
    pub xi: DVector<f64>,
    pub nu: DVector<f64>,
}

impl TangentPair {
    /// Builds the pair, projecting directions onto the tangent plane for
    /// sphere points and Gram-Schmidt orthonormalizing (nu against xi).
    pub fn new(x: Point, y: Point, xi_raw: &DVector<f64>, nu_raw: &DVector<f64>) -> Result<TangentPair> {
        x.validate()?;
        y.validate()?;
        if x.dim() < 2 {
            return Err(Error::BadDimension { min: 2, got: x.dim() });
        }
        let (mut xi, mut nu) = (xi_raw.clone(), nu_raw.clone());
        if x.chart == Chart::SphereEmbedded {
            xi = tangent_project(&x.coords, &xi);
            nu = tangent_project(&x.coords, &nu);
        }
        let (xi, nu) = orthonormalize_pair(&xi, &nu)?;
        Ok(TangentPair { x, y, xi, nu })
    }
}

/// One curvature evaluation.
#[derive(Debug, Clone)]
pub struct CurvatureSample {
    pub value: f64,
    pub h_used: f64,
    pub richardson_err: f64,
}

impl CurvatureSample {
    /// Error estimate within 5% of the value scale.
    pub fn reliable(&self) -> bool {
        self.richardson_err <= 0.05 * self.value.abs().max(1.0)
    }
}

fn shift_base(x: &Point, dir: &DVector<f64>, t: f64) -> Point {
    match x.chart {
        Chart::Euclidean => Point { coords: &x.coords + dir * t, chart: Chart::Euclidean },
        Chart::SphereEmbedded => Point { coords: sphere_exp(&x.coords, &(dir * t)), chart: Chart::SphereEmbedded },
    }
}

/// The raw 3x3 mixed fourth difference of (t, s) -> -c(x_t, T_x(p0 + s nu))
/// at step h. The inner cotangent inversion is re-solved at every s node
/// with the center target as Newton seed; x_t is a straight shift in the
/// Euclidean chart and a geodesic shift on the sphere.
fn fourth_difference(
    model: &CostModel,
    x: &Point,
    y_center: &Point,
    p0: &DVector<f64>,
    xi: &DVector<f64>,
    nu: &DVector<f64>,
    h: f64,
) -> Result<f64> {
    let mut targets: Vec<Point> = Vec::with_capacity(3);
    for s_idx in [-1.0_f64, 0.0, 1.0] {
        let p = p0 + nu * (s_idx * h);
        let sol = c_exponential(model, x, &p, y_center).map_err(|e| Error::StencilInvalid {
            t: 0.0,
            s: s_idx * h,
            reason: e.to_string(),
        })?;
        targets.push(sol.y);
    }
    let mut f = [[0.0_f64; 3]; 3];
    for (ti, t_idx) in [-1.0_f64, 0.0, 1.0].iter().enumerate() {
        let xt = shift_base(x, xi, t_idx * h);
        for (si, y_s) in targets.iter().enumerate() {
            if !model.valid(&xt, y_s) {
                return Err(Error::StencilInvalid {
                    t: t_idx * h,
                    s: (si as f64 - 1.0) * h,
                    reason: "pair outside validity domain".into(),
                });
            }
            f[ti][si] = -model.eval(&xt, y_s);
        }
    }
    let num = f[2][2] + f[2][0] + f[0][2] + f[0][0] - 2.0 * (f[2][1] + f[0][1] + f[1][2] + f[1][0])
        + 4.0 * f[1][1];
    Ok(num / (h * h * h * h))
}

/// Curvature for directions taken exactly as given (no normalization); the
/// value is then bilinear in |xi|^2 and |nu|^2. Sphere directions must be
/// tangent at the base point.
pub fn cost_sectional_curvature_raw(
    model: &CostModel,
    x: &Point,
    y: &Point,
    xi: &DVector<f64>,
    nu: &DVector<f64>,
    h: f64,
) -> Result<CurvatureSample> {
    if !(h > 0.0) {
        return Err(Error::OutOfRange("stencil step must be positive".into()));
    }
    if !model.valid(x, y) {
        return Err(Error::InvalidPair("curvature base pair invalid".into()));
    }
    let p0 = -model.grad_x(x, y);
    let coarse = fourth_difference(model, x, y, &p0, xi, nu, h)?;
    let fine = fourth_difference(model, x, y, &p0, xi, nu, 0.5 * h)?;
    Ok(CurvatureSample {
        value: CURVATURE_SCALE * (4.0 * fine - coarse) / 3.0,
        h_used: h,
        richardson_err: CURVATURE_SCALE * (fine - coarse).abs() / 3.0,
    })
}

/// Cost-sectional curvature of the pair in its orthonormalized directions,
/// Richardson-extrapolated over (h, h/2) with the coarse/fine disagreement
/// as error estimate.
pub fn cost_sectional_curvature(model: &CostModel, pair: &TangentPair, h: f64) -> Result<CurvatureSample> {
    cost_sectional_curvature_raw(model, &pair.x, &pair.y, &pair.xi, &pair.nu, h)
}

/// Where sweep samples are drawn from.
#[derive(Debug, Clone)]
pub enum SweepDomain {
    Boxes { source: BoxDomain, target: BoxDomain },
    SphereCaps { source: SphereCap, target: SphereCap },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// Uniformly positive minimum (the estimate is the reported constant).
    As(f64),
    /// Nonnegative within noise.
    Aw,
    Violated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::As(c0) => write!(f, "As(C0={c0:.6e})"),
            Verdict::Aw => write!(f, "Aw"),
            Verdict::Violated => write!(f, "violated"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSample {
    pub x: Point,
    pub y: Point,
    pub xi: DVector<f64>,
    pub nu: DVector<f64>,
    pub value: f64,
    pub err: f64,
    pub reliable: bool,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub descriptor: String,
    pub h: f64,
    pub samples: Vec<SweepSample>,
    pub reliable_count: usize,
    pub min_value: f64,
    pub argmin: Option<usize>,
    pub c0_estimate: f64,
    pub verdict: Verdict,
    pub inconclusive: bool,
}

fn draw_euclidean(b: &BoxDomain, rng: &mut rand_chacha::ChaCha8Rng) -> Point {
    let c: Vec<f64> = b.min.iter().zip(&b.max).map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect();
    Point::euclidean(&c)
}

fn draw_cap(cap: &SphereCap, rng: &mut rand_chacha::ChaCha8Rng) -> Point {
    let n = cap.center.len();
    loop {
        let v = DVector::from_fn(n, |_, _| {
            // Box-Muller from two uniforms
            let u1: f64 = rng.gen::<f64>().max(1e-12);
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        });
        let norm = v.norm();
        if norm < 1e-9 {
            continue;
        }
        let u = v / norm;
        if crate::geometry::sphere_distance(&u, &cap.center) <= cap.radius {
            return Point { coords: u, chart: Chart::SphereEmbedded };
        }
    }
}

fn draw_directions(x: &Point, rng: &mut rand_chacha::ChaCha8Rng) -> Option<(DVector<f64>, DVector<f64>)> {
    let n = x.dim();
    for _ in 0..64 {
        let a = DVector::from_fn(n, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
        let b = DVector::from_fn(n, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
        let (a, b) = if x.chart == Chart::SphereEmbedded {
            (tangent_project(&x.coords, &a), tangent_project(&x.coords, &b))
        } else {
            (a, b)
        };
        if let Ok(pair) = orthonormalize_pair(&a, &b) {
            return Some(pair);
        }
    }
    None
}

/// Options controlling verdict thresholds.
#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// A verdict needs |min| to clear `err_multiplier` times the local error
    /// estimate as well as `floor`.
    pub err_multiplier: f64,
    pub floor: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { err_multiplier: 3.0, floor: VERDICT_FLOOR }
    }
}

pub fn sweep_condition(
    model: &CostModel,
    domain: &SweepDomain,
    samples: usize,
    seed: u64,
    h: f64,
) -> Result<SweepReport> {
    sweep_condition_opts(model, domain, samples, seed, h, SweepOptions::default())
}

pub fn sweep_condition_opts(
    model: &CostModel,
    domain: &SweepDomain,
    samples: usize,
    seed: u64,
    h: f64,
    opts: SweepOptions,
) -> Result<SweepReport> {
    if samples < 1 {
        return Err(Error::OutOfRange("samples must be >= 1".into()));
    }
    let mut rng = split_rng(seed, "mtw-sweep");
    // inputs drawn sequentially for determinism, evaluated in parallel
    let mut inputs: Vec<(Point, Point, DVector<f64>, DVector<f64>)> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (x, y) = match domain {
            SweepDomain::Boxes { source, target } => (draw_euclidean(source, &mut rng), draw_euclidean(target, &mut rng)),
            SweepDomain::SphereCaps { source, target } => (draw_cap(source, &mut rng), draw_cap(target, &mut rng)),
        };
        let dirs = draw_directions(&x, &mut rng);
        match dirs {
            Some((xi, nu)) => inputs.push((x, y, xi, nu)),
            None => {
                // keep the slot; it will be emitted as unreliable
                let zero = DVector::zeros(x.dim());
                inputs.push((x.clone(), y, zero.clone(), zero));
            }
        }
    }
    let samples_out: Vec<SweepSample> = inputs
        .into_par_iter()
        .map(|(x, y, xi, nu)| {
            if xi.norm() == 0.0 || !model.valid(&x, &y) {
                return SweepSample { x, y, xi, nu, value: f64::NAN, err: f64::INFINITY, reliable: false };
            }
            match cost_sectional_curvature_raw(model, &x, &y, &xi, &nu, h) {
                Ok(cs) => {
                    let reliable = cs.reliable();
                    SweepSample { x, y, xi, nu, value: cs.value, err: cs.richardson_err, reliable }
                }
                Err(_) => SweepSample { x, y, xi, nu, value: f64::NAN, err: f64::INFINITY, reliable: false },
            }
        })
        .collect();

    let mut min_value = f64::INFINITY;
    let mut argmin = None;
    let mut reliable_count = 0usize;
    for (i, s) in samples_out.iter().enumerate() {
        if s.reliable {
            reliable_count += 1;
            if s.value < min_value {
                min_value = s.value;
                argmin = Some(i);
            }
        }
    }
    let inconclusive = (reliable_count as f64) < 0.1 * samples as f64;
    let (verdict, c0_estimate) = if let Some(idx) = argmin {
        let gate = (opts.err_multiplier * samples_out[idx].err).max(opts.floor);
        if min_value < -gate {
            (Verdict::Violated, min_value)
        } else if min_value > gate {
            (Verdict::As(min_value), min_value)
        } else {
            (Verdict::Aw, 0.0)
        }
    } else {
        (Verdict::Aw, 0.0)
    };
    Ok(SweepReport {
        descriptor: model.descriptor(),
        h,
        samples: samples_out,
        reliable_count,
        min_value,
        argmin,
        c0_estimate,
        verdict,
        inconclusive,
    })
}

/// The four geodesic-triangle defects and their normalized quotient.
#[derive(Debug, Clone)]
pub struct TriangleQuotient {
    pub h: f64,
    /// defects c(x_i, y_j) - c(x0, x_i) - c(x0, y_j), on the reported
    /// curvature scale (each is -2 kappa h^4 + o(h^4) on a sphere of
    /// sectional curvature kappa)
    pub brackets: [f64; 4],
    /// -(sum of brackets)/h^4; equals 8 kappa in the flat-defect limit
    pub q: f64,
}

/// Evaluates the right-angle geodesic triangle defect quotient of the unit
/// sphere at `x0` in the orthonormalized tangent directions (xi, nu).
pub fn triangle_quotient(x0: &Point, xi: &DVector<f64>, nu: &DVector<f64>, h: f64) -> Result<TriangleQuotient> {
    if x0.chart != Chart::SphereEmbedded {
        return Err(Error::InvalidPair("triangle quotient requires a sphere base point".into()));
    }
    x0.validate()?;
    if !(h > 0.0 && h <= 0.3) {
        return Err(Error::OutOfRange(format!("h = {h} outside (0, 0.3]")));
    }
    let xi_t = tangent_project(&x0.coords, xi);
    let nu_t = tangent_project(&x0.coords, nu);
    let (e_xi, e_nu) = orthonormalize_pair(&xi_t, &nu_t)?;
    let half_sq = |a: &DVector<f64>, b: &DVector<f64>| {
        let d = crate::geometry::sphere_distance(a, b);
        0.5 * d * d
    };
    let xs = [sphere_exp(&x0.coords, &(&e_xi * h)), sphere_exp(&x0.coords, &(&e_xi * -h))];
    let ys = [sphere_exp(&x0.coords, &(&e_nu * h)), sphere_exp(&x0.coords, &(&e_nu * -h))];
    let mut brackets = [0.0_f64; 4];
    let mut k = 0;
    for xi_pt in &xs {
        for yj_pt in &ys {
            let defect = half_sq(xi_pt, yj_pt) - half_sq(&x0.coords, xi_pt) - half_sq(&x0.coords, yj_pt);
            brackets[k] = CURVATURE_SCALE * defect;
            k += 1;
        }
    }
    let q = -brackets.iter().sum::<f64>() / h.powi(4);
    Ok(TriangleQuotient { h, brackets, q })
}

/// Deviation of the exact squared distance between diverging unit-speed
/// geodesics from the model curve 2(1 - cos(theta)) t^2 (1 - cos^2(theta/2) t^2)^2,
/// measured in units of t^4.
#[derive(Debug, Clone)]
pub struct VillaniCheck {
    pub theta: f64,
    pub t_max: f64,
    pub max_deviation: f64,
    /// (t, |exact - model|/t^4) pairs on the probe grid
    pub series: Vec<(f64, f64)>,
}

pub fn villani_expansion_check(theta: f64, t_max: f64) -> Result<VillaniCheck> {
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside (0, pi)")));
    }
    if !(t_max > 0.0 && t_max <= 0.3) {
        return Err(Error::OutOfRange(format!("t_max = {t_max} outside (0, 0.3]")));
    }
    let x0 = DVector::from_column_slice(&[0.0, 0.0, 1.0]);
    let u = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
    let w = DVector::from_column_slice(&[theta.cos(), theta.sin(), 0.0]);
    let cos_half_sq = (0.5 * theta).cos().powi(2);
    let pref = 2.0 * (1.0 - theta.cos());
    let n_grid = 48;
    let mut series = Vec::with_capacity(n_grid);
    let mut max_dev: f64 = 0.0;
    for k in 1..=n_grid {
        let t = t_max * k as f64 / n_grid as f64;
        let g1 = sphere_exp(&x0, &(&u * t));
        let g2 = sphere_exp(&x0, &(&w * t));
        let d = crate::geometry::sphere_distance(&g1, &g2);
        let model = pref * t * t * (1.0 - cos_half_sq * t * t).powi(2);
        let dev = (d * d - model).abs() / t.powi(4);
        max_dev = max_dev.max(dev);
        series.push((t, dev));
    }
    Ok(VillaniCheck { theta, t_max, max_deviation: max_dev, series })
}

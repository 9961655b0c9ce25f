//! Central-difference stencils with two-step Richardson error control, plus
//! the derivative consistency report for cost models.

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{tangent_project, Chart, Point};
use crate::rng::split_rng;
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Step for first derivatives, relative to 1 + |x|.
pub const STEP_FIRST: f64 = 1e-5;
/// Step for second derivatives, relative to 1 + |x|. Chosen above the
/// classical eps^(1/4) optimum so the 4 eps/h^2 roundoff floor stays below
/// the polynomial-cost error budget of 1e-8; the lost truncation accuracy is
/// recovered by Richardson extrapolation over (h, h/2).
pub const STEP_SECOND: f64 = 2e-3;

/// Central first derivative with Richardson extrapolation over (h, h/2).
pub fn central_d1<F: Fn(f64) -> f64>(f: F, h: f64) -> f64 {
    let d = |hh: f64| (f(hh) - f(-hh)) / (2.0 * hh);
    let coarse = d(h);
    let fine = d(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Central second derivative on the axis, Richardson-extrapolated.
pub fn central_d2<F: Fn(f64) -> f64>(f: F, h: f64) -> f64 {
    let d = |hh: f64| (f(hh) - 2.0 * f(0.0) + f(-hh)) / (hh * hh);
    let coarse = d(h);
    let fine = d(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Mixed second derivative d^2 f / da db via the 4-point cross stencil,
/// Richardson-extrapolated.
pub fn central_d2_mixed<F: Fn(f64, f64) -> f64>(f: F, h: f64) -> f64 {
    let d = |hh: f64| (f(hh, hh) - f(hh, -hh) - f(-hh, hh) + f(-hh, -hh)) / (4.0 * hh * hh);
    let coarse = d(h);
    let fine = d(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

/// Finite-difference gradient of `f` around `x0` along ambient axes.
pub fn fd_gradient<F: Fn(&DVector<f64>) -> f64>(f: &F, x0: &DVector<f64>, h: f64) -> DVector<f64> {
    let n = x0.len();
    DVector::from_fn(n, |i, _| {
        central_d1(
            |t| {
                let mut x = x0.clone();
                x[i] += t;
                f(&x)
            },
            h,
        )
    })
}

/// Max relative derivative discrepancies of a model against central
/// differences of its own `eval`.
#[derive(Debug, Clone)]
pub struct FdReport {
    pub samples_used: usize,
    pub max_err_grad_x: f64,
    pub max_err_grad_y: f64,
    pub max_err_hess_xx: f64,
    pub max_err_hess_xy: f64,
}

impl FdReport {
    pub fn max_overall(&self) -> f64 {
        self.max_err_grad_x
            .max(self.max_err_grad_y)
            .max(self.max_err_hess_xx)
            .max(self.max_err_hess_xy)
    }
}

fn rel(analytic: f64, fd: f64) -> f64 {
    (analytic - fd).abs() / (1.0 + analytic.abs())
}

/// Draws a valid pair for the model. Euclidean costs sample both points from
/// a centered box; the sphere cost samples unit vectors with a cut-locus
/// margin. Rejection is bounded.
pub fn sample_valid_pair<R: Rng>(model: &CostModel, rng: &mut R) -> Result<(Point, Point)> {
    let attempts = 200;
    for _ in 0..attempts {
        let (x, y) = if model.is_sphere() {
            let mut draw = || {
                let v = DVector::from_fn(model.dim, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
                Point::sphere(v.as_slice())
            };
            match (draw(), draw()) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            }
        } else {
            let a = DVector::from_fn(model.dim, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
            let b = DVector::from_fn(model.dim, |_, _| rng.gen::<f64>() * 2.0 - 1.0);
            (
                Point { coords: a, chart: Chart::Euclidean },
                Point { coords: b, chart: Chart::Euclidean },
            )
        };
        // keep a buffer so that difference stencils stay in the valid region
        if model.valid(&x, &y) && stencil_safe(model, &x, &y) {
            return Ok((x, y));
        }
    }
    Err(Error::NoValidSample { attempts })
}

fn stencil_safe(model: &CostModel, x: &Point, y: &Point) -> bool {
    if model.is_sphere() {
        // lower bound keeps x . y away from the arccos clamp under stencil shifts
        let d = crate::geometry::sphere_distance(&x.coords, &y.coords);
        d < std::f64::consts::PI - 0.2 && d > 0.1
    } else {
        let z = (&x.coords - &y.coords).norm();
        match model.kind {
            crate::cost::CostKind::NegLog | crate::cost::CostKind::PowerP => z > 0.1,
            crate::cost::CostKind::SqrtMinus => z * z < 0.8,
            crate::cost::CostKind::PowerRatio => true,
            _ => true,
        }
    }
}

/// Compares analytic derivatives with central differences of `eval` on
/// seeded valid pairs. Deterministic given the seed.
pub fn fd_consistency_report(model: &CostModel, samples: usize, seed: u64) -> Result<FdReport> {
    if samples < 1 {
        return Err(Error::OutOfRange("samples must be >= 1".into()));
    }
    let mut rng = split_rng(seed, "fd-consistency");
    let mut report = FdReport {
        samples_used: 0,
        max_err_grad_x: 0.0,
        max_err_grad_y: 0.0,
        max_err_hess_xx: 0.0,
        max_err_hess_xy: 0.0,
    };
    let n = model.dim;
    for _ in 0..samples {
        let (x, y) = sample_valid_pair(model, &mut rng)?;
        let scale_x = 1.0 + x.coords.norm();
        let scale_y = 1.0 + y.coords.norm();
        let h1x = STEP_FIRST * scale_x;
        let h1y = STEP_FIRST * scale_y;
        let h2x = STEP_SECOND * scale_x;
        let h2y = STEP_SECOND * scale_y;

        let eval_at = |xc: &DVector<f64>, yc: &DVector<f64>| {
            let xp = Point { coords: xc.clone(), chart: x.chart };
            let yp = Point { coords: yc.clone(), chart: y.chart };
            model.eval(&xp, &yp)
        };

        let fd_gx = fd_gradient(&|xc| eval_at(xc, &y.coords), &x.coords, h1x);
        let fd_gy = fd_gradient(&|yc| eval_at(&x.coords, yc), &y.coords, h1y);
        let (gx, gy, fd_gx, fd_gy) = if model.is_sphere() {
            // tangential convention: compare projections
            (
                model.grad_x(&x, &y),
                model.grad_y(&x, &y),
                tangent_project(&x.coords, &fd_gx),
                tangent_project(&y.coords, &fd_gy),
            )
        } else {
            (model.grad_x(&x, &y), model.grad_y(&x, &y), fd_gx, fd_gy)
        };
        for i in 0..n {
            report.max_err_grad_x = report.max_err_grad_x.max(rel(gx[i], fd_gx[i]));
            report.max_err_grad_y = report.max_err_grad_y.max(rel(gy[i], fd_gy[i]));
        }

        let hxx = model.hess_xx(&x, &y);
        let hxy = model.hess_xy(&x, &y);
        let mut fd_hxx = DMatrix::zeros(n, n);
        let mut fd_hxy = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                fd_hxx[(i, j)] = if i == j {
                    central_d2(
                        |t| {
                            let mut xc = x.coords.clone();
                            xc[i] += t;
                            eval_at(&xc, &y.coords)
                        },
                        h2x,
                    )
                } else {
                    central_d2_mixed(
                        |a, b| {
                            let mut xc = x.coords.clone();
                            xc[i] += a;
                            xc[j] += b;
                            eval_at(&xc, &y.coords)
                        },
                        h2x,
                    )
                };
                fd_hxy[(i, j)] = central_d2_mixed(
                    |a, b| {
                        let mut xc = x.coords.clone();
                        let mut yc = y.coords.clone();
                        xc[i] += a;
                        yc[j] += b;
                        eval_at(&xc, &yc)
                    },
                    0.5 * (h2x + h2y),
                );
            }
        }
        for i in 0..n {
            for j in 0..n {
                report.max_err_hess_xx = report.max_err_hess_xx.max(rel(hxx[(i, j)], fd_hxx[(i, j)]));
                report.max_err_hess_xy = report.max_err_hess_xy.max(rel(hxy[(i, j)], fd_hxy[(i, j)]));
            }
        }
        report.samples_used += 1;
    }
    Ok(report)
}

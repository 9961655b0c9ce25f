//! Closed-form quantities of the squared geodesic distance on the round
//! sphere: the normal-coordinate Hessian, its radial profile, and the
//! auxiliary inequalities that make the profile convex along lines.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Hessian in x of d^2(x, y)/2 in geodesic normal coordinates at x, for a
/// target y at distance `r` along the first coordinate axis. The result is
/// diag(1, r cot r, ..., r cot r) of order `n - 1` (the sphere dimension of
/// an ambient dimension `n`).
pub fn hess_xx_sphere_normal(r: f64, n: usize) -> Result<DMatrix<f64>> {
    if !(r > 0.0 && r < std::f64::consts::PI) {
        return Err(Error::OutOfRange(format!("radius {r} outside (0, pi)")));
    }
    if n < 2 {
        return Err(Error::BadDimension { min: 2, got: n });
    }
    let m = n - 1;
    let mut h = DMatrix::zeros(m, m);
    h[(0, 0)] = 1.0;
    let rc = r_cot_r(r);
    for i in 1..m {
        h[(i, i)] = rc;
    }
    Ok(h)
}

/// r cos(r)/sin(r), with the series value 1 - r^2/3 - ... near r = 0.
pub fn r_cot_r(r: f64) -> f64 {
    if r.abs() < 1e-4 {
        let r2 = r * r;
        1.0 - r2 / 3.0 - r2 * r2 / 45.0
    } else {
        r * r.cos() / r.sin()
    }
}

/// (sin r - r cos r) / r^3; limit 1/3 at r = 0.
pub fn sin_minus_rcos_over_r3(r: f64) -> f64 {
    if r.abs() < 1e-3 {
        let r2 = r * r;
        1.0 / 3.0 - r2 / 30.0 + r2 * r2 / 840.0
    } else {
        (r.sin() - r * r.cos()) / (r * r * r)
    }
}

/// (r - sin r cos r) / r^3; limit 2/3 at r = 0.
pub fn r_minus_sincos_over_r3(r: f64) -> f64 {
    if r.abs() < 1e-3 {
        let r2 = r * r;
        2.0 / 3.0 - 2.0 * r2 / 15.0 + 4.0 * r2 * r2 / 315.0
    } else {
        (r - r.sin() * r.cos()) / (r * r * r)
    }
}

/// Radial profile G(r) = (1 - r cot r)(1 - c^2/r^2) of the normal-coordinate
/// Hessian along a direction with component `c` on the radial axis.
pub fn radial_profile(r: f64, c: f64) -> f64 {
    (1.0 - r_cot_r(r)) * (1.0 - (c * c) / (r * r))
}

/// First derivative of [`radial_profile`] in r.
pub fn radial_profile_d1(r: f64, c: f64) -> f64 {
    let s = r.sin();
    let c2 = c * c;
    let a_prime = (r - s * r.cos()) / (s * s);
    let b = 1.0 - c2 / (r * r);
    let a = 1.0 - r_cot_r(r);
    let b_prime = 2.0 * c2 / (r * r * r);
    a_prime * b + a * b_prime
}

/// Second derivative of [`radial_profile`] in r.
pub fn radial_profile_d2(r: f64, c: f64) -> f64 {
    let s = r.sin();
    let c2 = c * c;
    let b = 1.0 - c2 / (r * r);
    let a_dd = 2.0 * (s - r * r.cos()) / (s * s * s);
    let a_d = (r - s * r.cos()) / (s * s);
    let b_d = 2.0 * c2 / (r * r * r);
    let a = 1.0 - r_cot_r(r);
    let b_dd = -6.0 * c2 / (r * r * r * r);
    a_dd * b + 2.0 * a_d * b_d + a * b_dd
}

/// Second t-derivative of t -> G(|alpha + t beta|) with alpha orthogonal to
/// beta, assembled from the chain rule: G''(r) b^4 t^2 / r^2 + G'(r) a^2 b^2 / r^3.
///
/// `c` is the radial component of the probed direction and must satisfy
/// |c| <= min(alpha, r).
pub fn profile_second_derivative_along_line(alpha: f64, beta: f64, t: f64, c: f64) -> Result<f64> {
    let r = (alpha * alpha + t * t * beta * beta).sqrt();
    if !(r > 0.0 && r < std::f64::consts::PI) {
        return Err(Error::OutOfRange(format!("|alpha + t beta| = {r} outside (0, pi)")));
    }
    if c.abs() > alpha.min(r) + 1e-12 {
        return Err(Error::OutOfRange(format!("|c| = {} exceeds min(alpha, r) = {}", c.abs(), alpha.min(r))));
    }
    let g1 = radial_profile_d1(r, c);
    let g2 = radial_profile_d2(r, c);
    Ok(g2 * beta.powi(4) * t * t / (r * r) + g1 * alpha * alpha * beta * beta / (r * r * r))
}

//! The cost-function library.
//!
//! Every Euclidean cost here is radial, c(x, y) = F(|x - y|^2), so first and
//! second derivatives reduce to F' and F''. The squared geodesic distance of
//! the embedded unit sphere is handled separately; its gradients are
//! tangential and its second derivatives are ambient matrices of the
//! extension (x, y) -> arccos^2(x . y)/2.

use crate::error::{Error, Result};
use crate::geometry::{tangent_project, Chart, Point};
use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostKind {
    /// |x - y|^2 / 2
    Quadratic,
    /// sqrt(1 + |x - y|^2)
    SqrtPlus,
    /// sqrt(1 - |x - y|^2), valid for |x - y| < 1
    SqrtMinus,
    /// (1 + |x - y|^2)^(p/2), 1 < p < 2, valid for |x - y|^2 < 1/(p - 1)
    PowerRatio,
    /// |x - y|^p / p, p != 0, valid away from the diagonal
    PowerP,
    /// -log |x - y|, valid away from the diagonal
    NegLog,
    /// d(x, y)^2 / 2 on the unit sphere, valid inside the cut-locus margin
    SphereSqDist,
}

/// How the derivative callbacks of a model are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
}

/// Margin below which log/power costs refuse pairs near the diagonal.
pub const DEFAULT_MIN_SEPARATION: f64 = 1e-3;
/// Default cut-locus margin of the sphere cost: pairs need d(x, y) <= pi - margin.
pub const DEFAULT_CUT_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct CostModel {
    pub name: String,
    pub kind: CostKind,
    pub params: BTreeMap<String, f64>,
    pub dim: usize,
    pub derivatives: DerivativeMode,
    exponent: f64,
    min_separation: f64,
    cut_margin: f64,
    domain_cap: f64,
}

/// Builds a cost model from its name.
///
/// Recognized names: `quadratic`, `sqrt_plus`, `sqrt_minus`, `power_ratio`,
/// `power_p`, `neg_log`, `sphere_sq_dist`. The power variants require an
/// exponent under the key `p`; `min_sep` and `cut_margin` override the
/// singular-locus exclusions.
pub fn make_cost(name: &str, params: &BTreeMap<String, f64>, dim: usize) -> Result<CostModel> {
    if dim < 1 {
        return Err(Error::BadDimension { min: 1, got: dim });
    }
    let kind = match name {
        "quadratic" => CostKind::Quadratic,
        "sqrt_plus" => CostKind::SqrtPlus,
        "sqrt_minus" => CostKind::SqrtMinus,
        "power_ratio" => CostKind::PowerRatio,
        "power_p" => CostKind::PowerP,
        "neg_log" => CostKind::NegLog,
        "sphere_sq_dist" => CostKind::SphereSqDist,
        other => return Err(Error::UnknownCost(other.to_string())),
    };
    let mut exponent = f64::NAN;
    let mut domain_cap = f64::INFINITY;
    match kind {
        CostKind::PowerP => {
            let p = *params.get("p").ok_or_else(|| Error::InvalidParams("power_p requires `p`".into()))?;
            if p == 0.0 || !p.is_finite() {
                return Err(Error::InvalidParams(format!("power_p exponent p = {p} must be finite and nonzero")));
            }
            exponent = p;
        }
        CostKind::PowerRatio => {
            let p = *params.get("p").ok_or_else(|| Error::InvalidParams("power_ratio requires `p`".into()))?;
            if !(p > 1.0 && p < 2.0) {
                return Err(Error::InvalidParams(format!("power_ratio exponent p = {p} must lie in (1, 2)")));
            }
            exponent = p;
            domain_cap = 1.0 / (p - 1.0);
        }
        CostKind::SqrtMinus => {
            domain_cap = 1.0;
        }
        CostKind::SphereSqDist => {
            if dim < 2 {
                return Err(Error::BadDimension { min: 2, got: dim });
            }
        }
        _ => {}
    }
    let min_separation = params.get("min_sep").copied().unwrap_or(DEFAULT_MIN_SEPARATION);
    let cut_margin = params.get("cut_margin").copied().unwrap_or(DEFAULT_CUT_MARGIN);
    if min_separation < 0.0 || cut_margin <= 0.0 {
        return Err(Error::InvalidParams("exclusion margins must be positive".into()));
    }
    Ok(CostModel {
        name: name.to_string(),
        kind,
        params: params.clone(),
        dim,
        derivatives: DerivativeMode::Analytic,
        exponent,
        min_separation,
        cut_margin,
        domain_cap,
    })
}

/// Convenience constructor without parameters.
pub fn make_cost_simple(name: &str, dim: usize) -> Result<CostModel> {
    make_cost(name, &BTreeMap::new(), dim)
}

/// F, F', F'' of the radial representation c = F(s), s = |x - y|^2.
fn radial(kind: CostKind, exponent: f64, s: f64) -> (f64, f64, f64) {
    match kind {
        CostKind::Quadratic => (0.5 * s, 0.5, 0.0),
        CostKind::SqrtPlus => {
            let r = (1.0 + s).sqrt();
            (r, 0.5 / r, -0.25 / (r * r * r))
        }
        CostKind::SqrtMinus => {
            let r = (1.0 - s).sqrt();
            (r, -0.5 / r, -0.25 / (r * r * r))
        }
        CostKind::PowerRatio => {
            let p = exponent;
            let b = 1.0 + s;
            let v = b.powf(0.5 * p);
            let d1 = 0.5 * p * b.powf(0.5 * p - 1.0);
            let d2 = 0.5 * p * (0.5 * p - 1.0) * b.powf(0.5 * p - 2.0);
            (v, d1, d2)
        }
        CostKind::PowerP => {
            let p = exponent;
            let v = s.powf(0.5 * p) / p;
            let d1 = 0.5 * s.powf(0.5 * p - 1.0);
            let d2 = 0.5 * (0.5 * p - 1.0) * s.powf(0.5 * p - 2.0);
            (v, d1, d2)
        }
        CostKind::NegLog => (-0.5 * s.ln(), -0.5 / s, 0.5 / (s * s)),
        CostKind::SphereSqDist => unreachable!("sphere cost is not radial in the ambient metric"),
    }
}

/// -theta/sin(theta) as a function of u = cos(theta), with its u-derivative.
/// Series fallbacks keep both stable near the diagonal.
fn sphere_g(u: f64) -> (f64, f64) {
    let u = u.clamp(-1.0, 1.0);
    let theta = u.acos();
    if theta < 1e-4 {
        let t2 = theta * theta;
        // theta/sin(theta) = 1 + t^2/6 + 7 t^4/360
        let g = -(1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
        // (sin - theta cos)/sin^3 = 1/3 + 2 t^2/15 (g' expressed in u)
        let gp = 1.0 / 3.0 + 2.0 * t2 / 15.0;
        (g, gp)
    } else {
        let s = theta.sin();
        let g = -theta / s;
        let gp = (s - theta * u) / (s * s * s);
        (g, gp)
    }
}

impl CostModel {
    fn z(&self, x: &Point, y: &Point) -> DVector<f64> {
        &x.coords - &y.coords
    }

    fn check_dims(&self, x: &Point, y: &Point) -> Result<()> {
        if x.dim() != self.dim || y.dim() != self.dim {
            return Err(Error::BadDimension { min: self.dim, got: x.dim().min(y.dim()) });
        }
        Ok(())
    }

    /// Whether the pair lies in the cost's smooth validity domain.
    pub fn valid(&self, x: &Point, y: &Point) -> bool {
        if x.dim() != self.dim || y.dim() != self.dim {
            return false;
        }
        match self.kind {
            CostKind::Quadratic | CostKind::SqrtPlus => true,
            CostKind::SqrtMinus | CostKind::PowerRatio => {
                let s = self.z(x, y).norm_squared();
                s < self.domain_cap * (1.0 - 1e-9)
            }
            CostKind::PowerP | CostKind::NegLog => self.z(x, y).norm() >= self.min_separation,
            CostKind::SphereSqDist => {
                x.chart == Chart::SphereEmbedded
                    && y.chart == Chart::SphereEmbedded
                    && x.validate().is_ok()
                    && y.validate().is_ok()
                    && crate::geometry::sphere_distance(&x.coords, &y.coords)
                        <= std::f64::consts::PI - self.cut_margin
            }
        }
    }

    fn ensure_valid(&self, x: &Point, y: &Point) -> Result<()> {
        self.check_dims(x, y)?;
        if !self.valid(x, y) {
            return Err(Error::InvalidPair(format!(
                "cost `{}` rejects the pair (separation {:.3e})",
                self.name,
                self.z(x, y).norm()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        match self.kind {
            CostKind::SphereSqDist => {
                let u = x.coords.dot(&y.coords).clamp(-1.0, 1.0);
                let theta = u.acos();
                0.5 * theta * theta
            }
            kind => {
                let s = self.z(x, y).norm_squared();
                radial(kind, self.exponent, s).0
            }
        }
    }

    /// Gradient in x. Tangential (ambient vector in the tangent plane at x)
    /// for the sphere cost, plain ambient gradient otherwise.
    pub fn grad_x(&self, x: &Point, y: &Point) -> DVector<f64> {
        match self.kind {
            CostKind::SphereSqDist => {
                let u = x.coords.dot(&y.coords);
                let (g, _) = sphere_g(u);
                tangent_project(&x.coords, &y.coords) * g
            }
            kind => {
                let z = self.z(x, y);
                let s = z.norm_squared();
                let (_, f1, _) = radial(kind, self.exponent, s);
                z * (2.0 * f1)
            }
        }
    }

    /// Gradient in y; tangential at y for the sphere cost.
    pub fn grad_y(&self, x: &Point, y: &Point) -> DVector<f64> {
        match self.kind {
            CostKind::SphereSqDist => {
                let u = x.coords.dot(&y.coords);
                let (g, _) = sphere_g(u);
                tangent_project(&y.coords, &x.coords) * g
            }
            kind => {
                let z = self.z(x, y);
                let s = z.norm_squared();
                let (_, f1, _) = radial(kind, self.exponent, s);
                z * (-2.0 * f1)
            }
        }
    }

    /// Ambient second-derivative matrix in x. For the sphere cost this is the
    /// Hessian of the ambient extension arccos^2(x . y)/2, namely g'(u) y y^T.
    pub fn hess_xx(&self, x: &Point, y: &Point) -> DMatrix<f64> {
        match self.kind {
            CostKind::SphereSqDist => {
                let u = x.coords.dot(&y.coords);
                let (_, gp) = sphere_g(u);
                let n = self.dim;
                DMatrix::from_fn(n, n, |i, j| gp * y.coords[i] * y.coords[j])
            }
            kind => {
                let z = self.z(x, y);
                let s = z.norm_squared();
                let (_, f1, f2) = radial(kind, self.exponent, s);
                let n = self.dim;
                let mut h = DMatrix::from_fn(n, n, |i, j| 4.0 * f2 * z[i] * z[j]);
                for i in 0..n {
                    h[(i, i)] += 2.0 * f1;
                }
                h
            }
        }
    }

    /// Ambient mixed second derivatives, entry (i, j) = d^2 c / dx_i dy_j.
    pub fn hess_xy(&self, x: &Point, y: &Point) -> DMatrix<f64> {
        match self.kind {
            CostKind::SphereSqDist => {
                let u = x.coords.dot(&y.coords);
                let (g, gp) = sphere_g(u);
                let n = self.dim;
                let mut h = DMatrix::from_fn(n, n, |i, j| gp * y.coords[i] * x.coords[j]);
                for i in 0..n {
                    h[(i, i)] += g;
                }
                h
            }
            kind => {
                let z = self.z(x, y);
                let s = z.norm_squared();
                let (_, f1, f2) = radial(kind, self.exponent, s);
                let n = self.dim;
                let mut h = DMatrix::from_fn(n, n, |i, j| -4.0 * f2 * z[i] * z[j]);
                for i in 0..n {
                    h[(i, i)] -= 2.0 * f1;
                }
                h
            }
        }
    }

    /// eval with a validity check; the building block of grid transforms.
    pub fn eval_checked(&self, x: &Point, y: &Point) -> Result<f64> {
        self.ensure_valid(x, y)?;
        Ok(self.eval(x, y))
    }

    pub fn is_sphere(&self) -> bool {
        self.kind == CostKind::SphereSqDist
    }

    /// Whether eval(x, y) = eval(y, x) holds structurally.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    /// A descriptor line used by reports.
    pub fn descriptor(&self) -> String {
        if self.exponent.is_finite() {
            format!("{} (dim {}, p = {})", self.name, self.dim, self.exponent)
        } else {
            format!("{} (dim {})", self.name, self.dim)
        }
    }
}

pub use crate::sphere::hess_xx_sphere_normal;

//! Points, charts and the handful of vector helpers used everywhere else.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Which chart a point lives in.
///
/// `SphereEmbedded` points are unit vectors of the ambient space; tangent
/// vectors at such a point are ambient vectors orthogonal to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Euclidean,
    SphereEmbedded,
}

/// A point of the source or target domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub coords: DVector<f64>,
    pub chart: Chart,
}

pub const UNIT_NORM_TOL: f64 = 1e-12;

impl Point {
    pub fn euclidean(coords: &[f64]) -> Point {
        Point {
            coords: DVector::from_column_slice(coords),
            chart: Chart::Euclidean,
        }
    }

    /// Builds an embedded sphere point, normalizing the input.
    pub fn sphere(coords: &[f64]) -> Result<Point> {
        let v = DVector::from_column_slice(coords);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::OutOfRange("cannot normalize zero vector onto the sphere".into()));
        }
        Ok(Point {
            coords: v / n,
            chart: Chart::SphereEmbedded,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.coords.is_empty() {
            return Err(Error::BadDimension { min: 1, got: 0 });
        }
        if !self.coords.iter().all(|c| c.is_finite()) {
            return Err(Error::OutOfRange("non-finite coordinate".into()));
        }
        if self.chart == Chart::SphereEmbedded && (self.coords.norm() - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::OutOfRange(format!(
                "sphere point norm {} deviates from 1 beyond {UNIT_NORM_TOL}",
                self.coords.norm()
            )));
        }
        Ok(())
    }
}

/// Projection of `v` onto the tangent plane at unit vector `x`.
pub fn tangent_project(x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    v - x * x.dot(v)
}

/// Geodesic distance on the unit sphere, accurate near both 0 and pi.
pub fn sphere_distance(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let chord = (x - y).norm();
    if x.dot(y) >= 0.0 {
        2.0 * (0.5 * chord).asin()
    } else {
        let anti = (x + y).norm();
        std::f64::consts::PI - 2.0 * (0.5 * anti).asin()
    }
}

/// Exponential map of the unit sphere: follows the great circle leaving `x`
/// with tangent velocity `v` for unit time.
pub fn sphere_exp(x: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let r = v.norm();
    if r < 1e-300 {
        return x.clone();
    }
    let mut y = x * r.cos() + v * (r.sin() / r);
    let n = y.norm();
    y /= n;
    y
}

/// Inverse of [`sphere_exp`]: the tangent vector at `x` pointing to `y` with
/// length d(x, y). Undefined at the antipode.
pub fn sphere_log(x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let theta = sphere_distance(x, y);
    if theta < 1e-14 {
        return Ok(DVector::zeros(x.len()));
    }
    let t = tangent_project(x, y);
    let tn = t.norm();
    if tn < 1e-14 {
        return Err(Error::OutOfRange("log map undefined at the antipode".into()));
    }
    Ok(t * (theta / tn))
}

/// An orthonormal basis of the tangent plane at unit vector `x`
/// (columns of the returned matrix).
pub fn tangent_basis(x: &DVector<f64>) -> DMatrix<f64> {
    let n = x.len();
    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    for i in 0..n {
        if cols.len() == n - 1 {
            break;
        }
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        let mut v = tangent_project(x, &e);
        for c in &cols {
            let d = c.dot(&v);
            v -= c * d;
        }
        let nv = v.norm();
        if nv > 1e-8 {
            cols.push(v / nv);
        }
    }
    assert_eq!(cols.len(), n - 1, "tangent basis construction failed");
    DMatrix::from_columns(&cols)
}

/// Gram-Schmidt orthonormalization of a direction pair; `nu` is projected
/// against `xi`. Fails when the projected remainder is shorter than 1e-8.
pub fn orthonormalize_pair(xi: &DVector<f64>, nu: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let nxi = xi.norm();
    if nxi < 1e-14 {
        return Err(Error::OutOfRange("zero direction".into()));
    }
    let e1 = xi / nxi;
    let mut w = nu - &e1 * e1.dot(nu);
    let nw = w.norm();
    if nw < 1e-8 {
        return Err(Error::OutOfRange(format!(
            "directions are numerically parallel (projected remainder {nw:.2e})"
        )));
    }
    w /= nw;
    Ok((e1, w))
}

/// Axis-aligned box used to describe sampling domains.
#[derive(Debug, Clone)]
pub struct BoxDomain {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl BoxDomain {
    pub fn new(min: Vec<f64>, max: Vec<f64>) -> Result<BoxDomain> {
        if min.len() != max.len() || min.is_empty() {
            return Err(Error::InvalidGrid("box corner dimensions mismatch".into()));
        }
        if min.iter().zip(&max).any(|(a, b)| a > b) {
            return Err(Error::InvalidGrid("box min exceeds max".into()));
        }
        Ok(BoxDomain { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn contains(&self, p: &DVector<f64>) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.min.iter().zip(&self.max))
                .all(|(c, (lo, hi))| *c >= *lo && *c <= *hi)
    }
}

/// A geodesic cap on the unit sphere: points within `radius` of `center`.
#[derive(Debug, Clone)]
pub struct SphereCap {
    pub center: DVector<f64>,
    pub radius: f64,
}

impl SphereCap {
    pub fn new(center: &[f64], radius: f64) -> Result<SphereCap> {
        if !(radius > 0.0 && radius <= std::f64::consts::PI) {
            return Err(Error::OutOfRange(format!("cap radius {radius} outside (0, pi]")));
        }
        let p = Point::sphere(center)?;
        Ok(SphereCap { center: p.coords, radius })
    }
}

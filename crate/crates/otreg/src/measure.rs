//! Discrete measures, ball-mass growth fitting, and the singular test
//! measures used to probe the integrability conditions.

use crate::error::{Error, Result};
use crate::geometry::Point;
use nalgebra::DVector;

/// A finitely supported probability measure.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    pub support: Vec<Point>,
    pub weights: Vec<f64>,
}

pub const MASS_TOL: f64 = 1e-10;

impl DiscreteMeasure {
    pub fn new(support: Vec<Point>, weights: Vec<f64>) -> Result<DiscreteMeasure> {
        if support.is_empty() || support.len() != weights.len() {
            return Err(Error::InvalidMeasure("support/weight length mismatch or empty".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMeasure("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { support, weights })
    }

    /// Normalizes arbitrary nonnegative masses into a probability measure.
    pub fn normalized(support: Vec<Point>, masses: Vec<f64>) -> Result<DiscreteMeasure> {
        let total: f64 = masses.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidMeasure("total mass must be positive".into()));
        }
        let weights = masses.into_iter().map(|m| m / total).collect();
        DiscreteMeasure::new(support, weights)
    }

    pub fn uniform(support: Vec<Point>) -> Result<DiscreteMeasure> {
        let n = support.len();
        DiscreteMeasure::new(support, vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Total mass within Euclidean distance `r` of `center`.
    pub fn ball_mass(&self, center: &DVector<f64>, r: f64) -> f64 {
        self.support
            .iter()
            .zip(&self.weights)
            .filter(|(p, _)| (&p.coords - center).norm() <= r)
            .map(|(_, w)| w)
            .sum()
    }
}

/// Log-log fit of sup_x mu(B_r(x)) against r.
#[derive(Debug, Clone)]
pub struct GrowthFit {
    pub radii: Vec<f64>,
    pub sup_masses: Vec<f64>,
    pub exponent: f64,
    pub log_constant: f64,
}

impl GrowthFit {
    /// Does the fitted growth match mu(B_r) <= C r^(n (1 - 1/p)) for the
    /// given dimension and integrability exponent?
    pub fn satisfies_lp_condition(&self, n: usize, p: f64, slack: f64) -> bool {
        let target = n as f64 * (1.0 - if p.is_infinite() { 0.0 } else { 1.0 / p });
        self.exponent >= target - slack
    }
}

/// Fits the growth exponent of the worst-case ball mass over the measure's
/// own support points. Needs at least 3 radii and a non-flat mass profile.
pub fn measure_growth_exponent(mu: &DiscreteMeasure, radii: &[f64]) -> Result<GrowthFit> {
    if radii.len() < 3 {
        return Err(Error::OutOfRange("need at least 3 radii".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::OutOfRange("radii must be positive".into()));
    }
    let mut sup_masses = Vec::with_capacity(radii.len());
    for &r in radii {
        let sup = mu
            .support
            .iter()
            .map(|c| mu.ball_mass(&c.coords, r))
            .fold(0.0_f64, f64::max);
        sup_masses.push(sup);
    }
    if sup_masses.iter().any(|m| !(*m > 0.0)) {
        return Err(Error::DegenerateFit("a radius captured no mass".into()));
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = sup_masses.iter().map(|m| m.ln()).collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::DegenerateFit("radii are not spread".into()));
    }
    let spread = ys.iter().map(|y| (y - sy / n).abs()).fold(0.0_f64, f64::max);
    if spread < 1e-12 {
        return Err(Error::DegenerateFit("all ball masses equal".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Ok(GrowthFit { radii: radii.to_vec(), sup_masses, exponent: slope, log_constant: intercept })
}

/// The middle-thirds Cantor measure at the given subdivision depth, as
/// 2^depth equal atoms at interval midpoints.
pub fn cantor_measure_atoms(depth: u32) -> Vec<f64> {
    let mut intervals = vec![(0.0_f64, 1.0_f64)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (a, b) in intervals {
            let third = (b - a) / 3.0;
            next.push((a, a + third));
            next.push((b - third, b));
        }
        intervals = next;
    }
    intervals.into_iter().map(|(a, b)| 0.5 * (a + b)).collect()
}

/// Product measure in the plane: uniform atoms along the first axis times
/// the depth-`depth` Cantor measure along the second.
pub fn uniform_times_cantor(m_uniform: usize, depth: u32) -> Result<DiscreteMeasure> {
    if m_uniform < 2 {
        return Err(Error::OutOfRange("need at least 2 uniform atoms".into()));
    }
    let cantor = cantor_measure_atoms(depth);
    let mut support = Vec::with_capacity(m_uniform * cantor.len());
    for i in 0..m_uniform {
        let x = i as f64 / (m_uniform - 1) as f64;
        for &y in &cantor {
            support.push(Point::euclidean(&[x, y]));
        }
    }
    DiscreteMeasure::uniform(support)
}

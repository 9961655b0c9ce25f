//! Inversion of the cotangent map p = -grad_x c(x, .): the generalized
//! exponential that everything downstream (curvature stencils, generalized
//! segments) leans on. The solve is damped Newton with the mixed-derivative
//! matrix as Jacobian; sphere iterates are reprojected onto the unit sphere
//! after every step.

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{tangent_basis, tangent_project, Chart, Point};
use crate::rng::split_rng;
use nalgebra::DVector;
use rand::Rng;

pub const NEWTON_TOL: f64 = 1e-10;
pub const MAX_ITER: usize = 50;
pub const DET_FLOOR: f64 = 1e-12;
const MAX_HALVINGS: usize = 20;

/// Outcome of one cotangent inversion.
#[derive(Debug, Clone)]
pub struct CotangentTarget {
    pub x: Point,
    pub p: DVector<f64>,
    pub y: Point,
    pub residual: f64,
    pub iterations: usize,
}

/// Solver knobs; the defaults match the crate constants.
#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub det_floor: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: NEWTON_TOL, max_iter: MAX_ITER, det_floor: DET_FLOOR }
    }
}

fn residual_vec(model: &CostModel, x: &Point, y: &Point, p: &DVector<f64>) -> DVector<f64> {
    let r = -model.grad_x(x, y) - p;
    if model.is_sphere() {
        tangent_project(&x.coords, &r)
    } else {
        r
    }
}

/// Solves -grad_x c(x, y) = p for y, seeded at `y_init`.
pub fn c_exponential(model: &CostModel, x: &Point, p: &DVector<f64>, y_init: &Point) -> Result<CotangentTarget> {
    c_exponential_opts(model, x, p, y_init, NewtonOptions::default())
}

pub fn c_exponential_opts(
    model: &CostModel,
    x: &Point,
    p: &DVector<f64>,
    y_init: &Point,
    opts: NewtonOptions,
) -> Result<CotangentTarget> {
    if !model.valid(x, y_init) {
        return Err(Error::InvalidPair("seed point is outside the valid region".into()));
    }
    let mut y = y_init.clone();
    let mut f = residual_vec(model, x, &y, p);
    let mut fnorm = f.norm();
    let mut iterations = 0;
    while fnorm > opts.tol {
        if iterations >= opts.max_iter {
            return Err(Error::NewtonDiverged { iterations, residual: fnorm });
        }
        iterations += 1;
        let step = newton_step(model, x, &y, &f, opts.det_floor)?;
        // damping: halve until the residual decreases
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let cand = advance(model, &y, &step, lambda);
            if model.valid(x, &cand) {
                let fc = residual_vec(model, x, &cand, p);
                let fcn = fc.norm();
                if fcn < fnorm {
                    accepted = Some((cand, fc, fcn));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((cand, fc, fcn)) => {
                y = cand;
                f = fc;
                fnorm = fcn;
            }
            None => {
                // a full step that leaves the region with no shrinking rescue
                let cand = advance(model, &y, &step, 1.0);
                if !model.valid(x, &cand) {
                    return Err(Error::IterateEscaped { iteration: iterations });
                }
                return Err(Error::NewtonDiverged { iterations, residual: fnorm });
            }
        }
    }
    Ok(CotangentTarget { x: x.clone(), p: p.clone(), y, residual: fnorm, iterations })
}

fn advance(model: &CostModel, y: &Point, step: &DVector<f64>, lambda: f64) -> Point {
    let mut c = &y.coords + step * lambda;
    if model.is_sphere() {
        let n = c.norm();
        if n > 0.0 {
            c /= n;
        }
        Point { coords: c, chart: Chart::SphereEmbedded }
    } else {
        Point { coords: c, chart: y.chart }
    }
}

/// One Newton direction: solve dF/dy * step = -F with dF/dy = -hess_xy
/// (projected to the tangent planes on the sphere).
fn newton_step(model: &CostModel, x: &Point, y: &Point, f: &DVector<f64>, det_floor: f64) -> Result<DVector<f64>> {
    let hxy = model.hess_xy(x, y);
    if model.is_sphere() {
        let bx = tangent_basis(&x.coords);
        let by = tangent_basis(&y.coords);
        // residual lives in T_x, unknown displacement in T_y
        let a = bx.transpose() * (-&hxy) * &by;
        let det = a.determinant();
        if det.abs() < det_floor {
            return Err(Error::JacobianSingular { det });
        }
        let rhs = bx.transpose() * (-f);
        let sol = a
            .lu()
            .solve(&rhs)
            .ok_or(Error::JacobianSingular { det })?;
        Ok(by * sol)
    } else {
        let a = -hxy;
        let det = a.determinant();
        if det.abs() < det_floor {
            return Err(Error::JacobianSingular { det });
        }
        let sol = a
            .lu()
            .solve(&(-f))
            .ok_or(Error::JacobianSingular { det })?;
        Ok(sol)
    }
}

/// A sampled generalized segment of targets seen from the base point `x`.
#[derive(Debug, Clone)]
pub struct CSegment {
    pub x: Point,
    pub y0: Point,
    pub y1: Point,
    pub thetas: Vec<f64>,
    pub points: Vec<Point>,
    pub max_residual: f64,
}

/// Traces theta -> T_x((1-theta) v0 + theta v1) with v_i = -grad_x c(x, y_i)
/// on a uniform theta grid, solving by continuation from the previous point.
pub fn c_segment(model: &CostModel, x: &Point, y0: &Point, y1: &Point, steps: usize) -> Result<CSegment> {
    if steps < 2 {
        return Err(Error::OutOfRange("steps must be >= 2".into()));
    }
    for (label, y) in [("y0", y0), ("y1", y1)] {
        if !model.valid(x, y) {
            return Err(Error::InvalidPair(format!("{label} is not valid for the base point")));
        }
    }
    let thetas: Vec<f64> = (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect();
    if (&y0.coords - &y1.coords).norm() == 0.0 {
        return Ok(CSegment {
            x: x.clone(),
            y0: y0.clone(),
            y1: y1.clone(),
            points: vec![y0.clone(); steps],
            thetas,
            max_residual: 0.0,
        });
    }
    let v0 = -model.grad_x(x, y0);
    let v1 = -model.grad_x(x, y1);
    let mut points = Vec::with_capacity(steps);
    let mut max_residual: f64 = 0.0;
    let mut seed = y0.clone();
    for &theta in &thetas {
        let p = &v0 * (1.0 - theta) + &v1 * theta;
        let sol = c_exponential(model, x, &p, &seed)
            .map_err(|e| Error::SegmentFailed { theta, source: Box::new(e) })?;
        max_residual = max_residual.max(sol.residual);
        seed = sol.y.clone();
        points.push(sol.y);
    }
    Ok(CSegment { x: x.clone(), y0: y0.clone(), y1: y1.clone(), thetas, points, max_residual })
}

/// Sampled certification of the injectivity / nondegeneracy assumptions on a
/// box (or cap) of targets, for sources drawn from the same region family.
#[derive(Debug, Clone)]
pub struct A1A2Report {
    pub x_samples: usize,
    pub y_samples: usize,
    pub min_abs_det_hess_xy: f64,
    pub injectivity_collisions: usize,
    /// fraction of p-midpoints whose preimage exists and stays valid
    pub midpoint_coverage: f64,
}

pub struct A1A2Domain<'a> {
    pub x_box: &'a crate::geometry::BoxDomain,
    pub y_box: &'a crate::geometry::BoxDomain,
}

pub fn check_a1_a2(
    model: &CostModel,
    domain: &A1A2Domain,
    x_samples: usize,
    y_samples: usize,
    seed: u64,
) -> Result<A1A2Report> {
    if x_samples < 2 || y_samples < 2 {
        return Err(Error::OutOfRange("sample counts must be >= 2".into()));
    }
    let mut rng = split_rng(seed, "a1a2");
    let draw_box = |b: &crate::geometry::BoxDomain, rng: &mut rand_chacha::ChaCha8Rng| {
        let c: Vec<f64> = b
            .min
            .iter()
            .zip(&b.max)
            .map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>())
            .collect();
        Point::euclidean(&c)
    };
    let mut min_det = f64::INFINITY;
    let mut collisions = 0usize;
    let mut midpoint_hits = 0usize;
    let mut midpoint_trials = 0usize;
    for _ in 0..x_samples {
        let x = draw_box(domain.x_box, &mut rng);
        let mut ys = Vec::with_capacity(y_samples);
        let mut ps: Vec<DVector<f64>> = Vec::with_capacity(y_samples);
        for _ in 0..y_samples {
            let y = draw_box(domain.y_box, &mut rng);
            if !model.valid(&x, &y) {
                continue;
            }
            min_det = min_det.min(model.hess_xy(&x, &y).determinant().abs());
            ps.push(-model.grad_x(&x, &y));
            ys.push(y);
        }
        for i in 0..ps.len() {
            for j in (i + 1)..ps.len() {
                if (&ps[i] - &ps[j]).norm() < 1e-8 && (&ys[i].coords - &ys[j].coords).norm() > 1e-6 {
                    collisions += 1;
                }
            }
        }
        // convexity of the cotangent image, probed on midpoints
        for i in (0..ps.len().saturating_sub(1)).step_by(2) {
            let mid = (&ps[i] + &ps[i + 1]) * 0.5;
            midpoint_trials += 1;
            if let Ok(sol) = c_exponential(model, &x, &mid, &ys[i]) {
                if model.valid(&x, &sol.y) {
                    midpoint_hits += 1;
                }
            }
        }
    }
    Ok(A1A2Report {
        x_samples,
        y_samples,
        min_abs_det_hess_xy: min_det,
        injectivity_collisions: collisions,
        midpoint_coverage: if midpoint_trials == 0 { 0.0 } else { midpoint_hits as f64 / midpoint_trials as f64 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{make_cost, make_cost_simple};
    use crate::geometry::{sphere_exp, BoxDomain};
    use approx::assert_relative_eq;
    use std::collections::BTreeMap;

    #[test]
    fn quadratic_inversion_is_translation() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let x = Point::euclidean(&[0.0, 0.0]);
        let p = DVector::from_column_slice(&[1.0, 2.0]);
        let seed = Point::euclidean(&[0.3, 0.3]);
        let sol = c_exponential(&m, &x, &p, &seed).unwrap();
        assert_relative_eq!(sol.y.coords[0], 1.0, epsilon = 1e-10);
        assert_relative_eq!(sol.y.coords[1], 2.0, epsilon = 1e-10);
        assert!(sol.iterations <= 2);
    }

    #[test]
    fn sphere_inversion_matches_exponential_map() {
        let m = make_cost_simple("sphere_sq_dist", 3).unwrap();
        let north = Point::sphere(&[0.0, 0.0, 1.0]).unwrap();
        // tangent vector of length pi/2 pointing along e1
        let p = DVector::from_column_slice(&[std::f64::consts::FRAC_PI_2, 0.0, 0.0]);
        let seed = Point::sphere(&[0.4, 0.1, 0.9]).unwrap();
        let sol = c_exponential(&m, &north, &p, &seed).unwrap();
        assert_relative_eq!(sol.y.coords[0], 1.0, epsilon = 1e-9);
        assert!(sol.y.coords[2].abs() < 1e-9);

        // generic direction: compare against the closed-form great circle
        let v = tangent_project(&north.coords, &DVector::from_column_slice(&[0.7, -0.4, 0.0]));
        let expected = sphere_exp(&north.coords, &v);
        let sol = c_exponential(&m, &north, &v, &seed).unwrap();
        assert!((sol.y.coords - expected).norm() < 1e-9);
    }

    #[test]
    fn neg_log_inversion_matches_closed_form() {
        // -grad_x c = (x - y)/|x - y|^2, so y = x - p/|p|^2
        let m = make_cost_simple("neg_log", 2).unwrap();
        let x = Point::euclidean(&[0.0, 0.0]);
        let p = DVector::from_column_slice(&[2.0, 0.0]);
        let seed = Point::euclidean(&[-0.4, 0.1]);
        let sol = c_exponential(&m, &x, &p, &seed).unwrap();
        assert_relative_eq!(sol.y.coords[0], -0.5, epsilon = 1e-9);
        assert!(sol.y.coords[1].abs() < 1e-9);
    }

    #[test]
    fn roundtrip_across_library() {
        let mut params = BTreeMap::new();
        params.insert("p".to_string(), 4.0);
        let models = vec![
            make_cost_simple("quadratic", 2).unwrap(),
            make_cost_simple("sqrt_plus", 2).unwrap(),
            make_cost_simple("neg_log", 2).unwrap(),
            make_cost("power_p", &params, 2).unwrap(),
        ];
        let mut rng = split_rng(3, "roundtrip");
        for m in &models {
            for _ in 0..20 {
                let x = Point::euclidean(&[rng.gen::<f64>(), rng.gen::<f64>()]);
                let y = Point::euclidean(&[1.2 + rng.gen::<f64>(), 1.2 + rng.gen::<f64>()]);
                if !m.valid(&x, &y) {
                    continue;
                }
                let p = -m.grad_x(&x, &y);
                let perturbed = Point::euclidean(&[y.coords[0] + 0.04, y.coords[1] - 0.03]);
                if !m.valid(&x, &perturbed) {
                    continue;
                }
                let sol = c_exponential(m, &x, &p, &perturbed).unwrap();
                assert!(
                    (sol.y.coords - &y.coords).norm() < 1e-8,
                    "roundtrip failed for {}",
                    m.name
                );
            }
        }
    }

    #[test]
    fn quadratic_segment_is_euclidean() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let x = Point::euclidean(&[0.2, -0.1]);
        let y0 = Point::euclidean(&[1.0, 0.0]);
        let y1 = Point::euclidean(&[0.0, 1.0]);
        let seg = c_segment(&m, &x, &y0, &y1, 5).unwrap();
        for (k, pt) in seg.points.iter().enumerate() {
            let th = seg.thetas[k];
            let expect = &y0.coords * (1.0 - th) + &y1.coords * th;
            assert!((pt.coords.clone() - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn sphere_segment_follows_tangent_segment_image() {
        let m = make_cost_simple("sphere_sq_dist", 3).unwrap();
        let north = Point::sphere(&[0.0, 0.0, 1.0]).unwrap();
        let y0 = Point::sphere(&[1.0, 0.0, 0.0]).unwrap();
        let y1 = Point::sphere(&[0.0, 1.0, 0.0]).unwrap();
        let seg = c_segment(&m, &north, &y0, &y1, 7).unwrap();
        let v0 = crate::geometry::sphere_log(&north.coords, &y0.coords).unwrap();
        let v1 = crate::geometry::sphere_log(&north.coords, &y1.coords).unwrap();
        for (k, pt) in seg.points.iter().enumerate() {
            let th = seg.thetas[k];
            let v = &v0 * (1.0 - th) + &v1 * th;
            let expect = sphere_exp(&north.coords, &v);
            assert!((pt.coords.clone() - expect).norm() < 1e-8, "theta {th}");
        }
    }

    #[test]
    fn neg_log_segment_midpoint_closed_form() {
        let m = make_cost_simple("neg_log", 2).unwrap();
        let x = Point::euclidean(&[0.0, 0.0]);
        let y0 = Point::euclidean(&[1.0, 0.0]);
        let y1 = Point::euclidean(&[0.0, 1.0]);
        let seg = c_segment(&m, &x, &y0, &y1, 3).unwrap();
        // v_i = (x - y_i)/|x - y_i|^2 = -y_i; midpoint p = -(y0 + y1)/2,
        // closed-form inverse y = x - p/|p|^2
        let p = DVector::from_column_slice(&[-0.5_f64, -0.5]);
        let expect = -(&p) / p.norm_squared();
        assert!((seg.points[1].coords.clone() - expect).norm() < 1e-9);
    }

    #[test]
    fn degenerate_segment_is_constant() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let x = Point::euclidean(&[0.0, 0.0]);
        let y = Point::euclidean(&[1.0, 1.0]);
        let seg = c_segment(&m, &x, &y, &y, 4).unwrap();
        assert!(seg.points.iter().all(|p| (p.coords.clone() - &y.coords).norm() == 0.0));
    }

    #[test]
    fn segment_endpoints_reproduce_inputs() {
        let mut params = BTreeMap::new();
        params.insert("p".to_string(), 4.0);
        let models = vec![
            make_cost_simple("quadratic", 2).unwrap(),
            make_cost_simple("sqrt_plus", 2).unwrap(),
            make_cost_simple("sqrt_minus", 2).unwrap(),
            make_cost_simple("neg_log", 2).unwrap(),
            make_cost("power_p", &params, 2).unwrap(),
        ];
        let x = Point::euclidean(&[0.05, -0.02]);
        let y0 = Point::euclidean(&[0.5, 0.1]);
        let y1 = Point::euclidean(&[0.1, 0.55]);
        for m in &models {
            let seg = c_segment(m, &x, &y0, &y1, 9).unwrap();
            assert!((seg.points[0].coords.clone() - &y0.coords).norm() < 1e-8, "{}", m.name);
            assert!((seg.points[8].coords.clone() - &y1.coords).norm() < 1e-8, "{}", m.name);
        }
    }

    #[test]
    fn a1a2_quadratic_certificate() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let b = BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        let r = check_a1_a2(&m, &A1A2Domain { x_box: &b, y_box: &b }, 10, 40, 5).unwrap();
        assert_relative_eq!(r.min_abs_det_hess_xy, 1.0, epsilon = 1e-12);
        assert_eq!(r.injectivity_collisions, 0);
        assert!(r.midpoint_coverage > 0.99);
    }

    #[test]
    fn a1a2_neg_log_no_collisions() {
        let m = make_cost_simple("neg_log", 2).unwrap();
        let xb = BoxDomain::new(vec![0.0, 0.0], vec![0.2, 0.2]).unwrap();
        let yb = BoxDomain::new(vec![0.5, 0.5], vec![1.5, 1.5]).unwrap();
        let r = check_a1_a2(&m, &A1A2Domain { x_box: &xb, y_box: &yb }, 8, 40, 5).unwrap();
        assert_eq!(r.injectivity_collisions, 0);
        assert!(r.min_abs_det_hess_xy > 0.0);
    }
}

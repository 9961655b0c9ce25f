//! Discrete c-convex analysis on finite grids: generalized conjugates by
//! exact full scan, double-conjugate regularization, contact sets with their
//! connectivity, and the two-support-function test potential that separates
//! nonnegative from violated cost-curvature.

use crate::cexp::c_exponential;
use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{BoxDomain, Chart, Point};
use nalgebra::DVector;
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Box,
    SpherePoints,
}

/// A finite point set with a neighbor graph.
#[derive(Debug, Clone)]
pub struct GridDomain {
    pub kind: GridKind,
    pub points: Vec<Point>,
    /// max nearest-neighbor separation; the resolution scale of the grid
    pub spacing: f64,
    pub bounds: Option<BoxDomain>,
    pub neighbors: Vec<Vec<usize>>,
}

impl GridDomain {
    /// Regular lattice over a box with `res[k]` nodes per axis and the
    /// axis-neighbor graph.
    pub fn rectangular(bounds: BoxDomain, res: &[usize]) -> Result<Arc<GridDomain>> {
        let d = bounds.dim();
        if res.len() != d || res.iter().any(|&r| r < 2) {
            return Err(Error::InvalidGrid("need at least 2 nodes per axis".into()));
        }
        let total: usize = res.iter().product();
        let mut steps = vec![0.0; d];
        for k in 0..d {
            steps[k] = (bounds.max[k] - bounds.min[k]) / (res[k] - 1) as f64;
            if steps[k] <= 0.0 {
                return Err(Error::InvalidGrid(format!("axis {k} is degenerate")));
            }
        }
        let spacing = steps.iter().cloned().fold(0.0_f64, f64::max);
        let mut points = Vec::with_capacity(total);
        let mut neighbors = vec![Vec::new(); total];
        let strides = {
            let mut s = vec![1usize; d];
            for k in (0..d.saturating_sub(1)).rev() {
                s[k] = s[k + 1] * res[k + 1];
            }
            s
        };
        let mut idx = vec![0usize; d];
        for flat in 0..total {
            let mut rem = flat;
            for k in 0..d {
                idx[k] = rem / strides[k];
                rem %= strides[k];
            }
            let coords: Vec<f64> = (0..d).map(|k| bounds.min[k] + steps[k] * idx[k] as f64).collect();
            points.push(Point::euclidean(&coords));
            for k in 0..d {
                if idx[k] + 1 < res[k] {
                    let other = flat + strides[k];
                    neighbors[flat].push(other);
                    neighbors[other].push(flat);
                }
            }
        }
        let g = GridDomain { kind: GridKind::Box, points, spacing, bounds: Some(bounds), neighbors };
        g.validate()?;
        Ok(Arc::new(g))
    }

    /// Cloud of sphere points with a k-nearest-neighbor graph (k = 6 by
    /// convention at the resolutions used here).
    pub fn sphere_cloud(points: Vec<Point>, k: usize) -> Result<Arc<GridDomain>> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid("cloud needs at least 2 points".into()));
        }
        for p in &points {
            if p.chart != Chart::SphereEmbedded {
                return Err(Error::InvalidGrid("cloud points must be sphere-embedded".into()));
            }
            p.validate()?;
        }
        let n = points.len();
        let k = k.min(n - 1);
        let mut neighbors = vec![Vec::new(); n];
        let mut spacing = 0.0_f64;
        for i in 0..n {
            let mut d: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (crate::geometry::sphere_distance(&points[i].coords, &points[j].coords), j))
                .collect();
            d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            spacing = spacing.max(d[0].0);
            for &(_, j) in d.iter().take(k) {
                if !neighbors[i].contains(&j) {
                    neighbors[i].push(j);
                }
                if !neighbors[j].contains(&i) {
                    neighbors[j].push(i);
                }
            }
        }
        let g = GridDomain { kind: GridKind::SpherePoints, points, spacing, bounds: None, neighbors };
        g.validate()?;
        Ok(Arc::new(g))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn validate(&self) -> Result<()> {
        // connectivity of the neighbor graph
        let n = self.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &self.neighbors[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        if count != n {
            return Err(Error::InvalidGrid(format!("neighbor graph is disconnected ({count}/{n} reachable)")));
        }
        Ok(())
    }

    /// Index of the grid node nearest to `p`.
    pub fn nearest(&self, p: &Point) -> usize {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, q) in self.points.iter().enumerate() {
            let d = (&q.coords - &p.coords).norm();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }
}

/// A scalar field on a grid.
#[derive(Debug, Clone)]
pub struct GridPotential {
    pub domain: Arc<GridDomain>,
    pub values: Vec<f64>,
}

impl GridPotential {
    pub fn new(domain: Arc<GridDomain>, values: Vec<f64>) -> Result<GridPotential> {
        if values.len() != domain.len() {
            return Err(Error::InvalidGrid("value count differs from grid size".into()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidGrid("potential has non-finite values".into()));
        }
        Ok(GridPotential { domain, values })
    }

    pub fn zero(domain: Arc<GridDomain>) -> GridPotential {
        let n = domain.len();
        GridPotential { domain, values: vec![0.0; n] }
    }

    pub fn from_fn<F: Fn(&Point) -> f64>(domain: Arc<GridDomain>, f: F) -> GridPotential {
        let values = domain.points.iter().map(|p| f(p)).collect();
        GridPotential { domain, values }
    }
}

/// The generalized conjugate on the target grid:
/// phi^c(y) = max over grid x of { -c(x, y) - phi(x) }, by exact full scan.
pub fn c_transform(model: &CostModel, phi: &GridPotential, target: &Arc<GridDomain>) -> Result<GridPotential> {
    let src = &phi.domain;
    let values: Result<Vec<f64>> = target
        .points
        .par_iter()
        .map(|y| {
            let mut best = f64::NEG_INFINITY;
            for (i, x) in src.points.iter().enumerate() {
                if !model.valid(x, y) {
                    return Err(Error::InvalidPair(format!("c-transform hit an invalid pair at target {:?}", y.coords.as_slice())));
                }
                let v = -model.eval(x, y) - phi.values[i];
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        })
        .collect();
    GridPotential::new(target.clone(), values?)
}

/// The adjoint conjugate back onto a source grid:
/// psi^{c*}(x) = max over grid y of { -c(x, y) - psi(y) }.
pub fn c_star_transform(model: &CostModel, psi: &GridPotential, source: &Arc<GridDomain>) -> Result<GridPotential> {
    let tgt = &psi.domain;
    let values: Result<Vec<f64>> = source
        .points
        .par_iter()
        .map(|x| {
            let mut best = f64::NEG_INFINITY;
            for (j, y) in tgt.points.iter().enumerate() {
                if !model.valid(x, y) {
                    return Err(Error::InvalidPair("c*-transform hit an invalid pair".into()));
                }
                let v = -model.eval(x, y) - psi.values[j];
                if v > best {
                    best = v;
                }
            }
            Ok(best)
        })
        .collect();
    GridPotential::new(source.clone(), values?)
}

/// Double conjugate phi^{cc*} through the given target grid: the largest
/// c-convex minorant of phi at grid resolution. Idempotent; never above phi.
pub fn c_convexify(model: &CostModel, phi: &GridPotential, target: &Arc<GridDomain>) -> Result<GridPotential> {
    let phic = c_transform(model, phi, target)?;
    c_star_transform(model, &phic, &phi.domain)
}

/// The contact set of a potential at `x`: target nodes attaining the
/// conjugate supremum within `tol`, partitioned into neighbor-graph
/// components.
#[derive(Debug, Clone)]
pub struct ContactSet {
    pub x: Point,
    pub members: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub tol_used: f64,
}

/// Default contact tolerance: 4 x (grid spacing) x (max |grad_y c(x, .)| on
/// the target grid).
pub fn default_contact_tol(model: &CostModel, x: &Point, target: &GridDomain) -> f64 {
    let gmax = target
        .points
        .iter()
        .filter(|y| model.valid(x, y))
        .map(|y| model.grad_y(x, y).norm())
        .fold(0.0_f64, f64::max);
    4.0 * target.spacing * gmax
}

pub fn contact_set(
    model: &CostModel,
    phi: &GridPotential,
    phic: &GridPotential,
    x: &Point,
    tol: f64,
) -> Result<ContactSet> {
    let target = &phic.domain;
    // phi(x) at the nearest source node when x is not exactly a node
    let xi = phi.domain.nearest(x);
    let phi_x = if (&phi.domain.points[xi].coords - &x.coords).norm() < 1e-12 {
        phi.values[xi]
    } else {
        // off-node query: evaluate the c-convex extension sup_y(-c - phi^c)
        let mut best = f64::NEG_INFINITY;
        for (j, y) in target.points.iter().enumerate() {
            if model.valid(x, y) {
                best = best.max(-model.eval(x, y) - phic.values[j]);
            }
        }
        best
    };
    let mut members = Vec::new();
    for (j, y) in target.points.iter().enumerate() {
        if !model.valid(x, y) {
            continue;
        }
        let slack = phi_x + phic.values[j] + model.eval(x, y);
        if slack <= tol {
            members.push(j);
        }
    }
    if members.is_empty() {
        return Err(Error::EmptyContact { tol });
    }
    let components = split_components(target, &members);
    Ok(ContactSet { x: x.clone(), members, components, tol_used: tol })
}

fn split_components(domain: &GridDomain, members: &[usize]) -> Vec<Vec<usize>> {
    use std::collections::{BTreeMap, BTreeSet};
    let member_set: BTreeSet<usize> = members.iter().copied().collect();
    let mut comp_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &m in members {
        if comp_of.contains_key(&m) {
            continue;
        }
        let cid = components.len();
        let mut stack = vec![m];
        comp_of.insert(m, cid);
        let mut comp = vec![m];
        while let Some(i) = stack.pop() {
            for &j in &domain.neighbors[i] {
                if member_set.contains(&j) && !comp_of.contains_key(&j) {
                    comp_of.insert(j, cid);
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

/// Secondary diagnostic: the fraction of member-pair c-segment midpoints
/// (with respect to x) that are themselves members, probing generalized
/// convexity of the contact set beyond connectedness.
pub fn contact_midpoint_fraction(
    model: &CostModel,
    contact: &ContactSet,
    phic: &GridPotential,
    max_pairs: usize,
) -> f64 {
    let members: std::collections::BTreeSet<usize> = contact.members.iter().copied().collect();
    let target = &phic.domain;
    let mut trials = 0usize;
    let mut hits = 0usize;
    'outer: for (a_idx, &a) in contact.members.iter().enumerate() {
        for &b in contact.members.iter().skip(a_idx + 1) {
            if trials >= max_pairs {
                break 'outer;
            }
            let ya = &target.points[a];
            let yb = &target.points[b];
            let va = -model.grad_x(&contact.x, ya);
            let vb = -model.grad_x(&contact.x, yb);
            let mid = (&va + &vb) * 0.5;
            if let Ok(sol) = c_exponential(model, &contact.x, &mid, ya) {
                trials += 1;
                if members.contains(&target.nearest(&sol.y)) {
                    hits += 1;
                }
            }
        }
    }
    if trials == 0 {
        1.0
    } else {
        hits as f64 / trials as f64
    }
}

/// The two-support-function test potential centered at x0:
/// max(-c(x, y0) + c(x0, y0), -c(x, y1) + c(x0, y1)); vanishes at x0.
pub fn build_phibar(
    model: &CostModel,
    x0: &Point,
    y0: &Point,
    y1: &Point,
    domain: &Arc<GridDomain>,
) -> Result<GridPotential> {
    let c00 = model.eval_checked(x0, y0)?;
    let c01 = model.eval_checked(x0, y1)?;
    let mut values = Vec::with_capacity(domain.len());
    for x in &domain.points {
        let a = -model.eval_checked(x, y0)? + c00;
        let b = -model.eval_checked(x, y1)? + c01;
        values.push(a.max(b));
    }
    GridPotential::new(domain.clone(), values)
}

/// Result of probing the interpolation inequality of the test potential
/// along the generalized segment between its two anchors.
#[derive(Debug, Clone)]
pub struct AwGeometricReport {
    /// min over the grid and theta of phibar(x) - [-c(x, y_theta) + c(x0, y_theta)]
    pub min_gap: f64,
    pub argmin_theta: f64,
    pub argmin_index: usize,
    /// least-squares quadratic coefficient of the gap near x0, normalized by
    /// theta (1 - theta) |y1 - y0|^2, minimized over interior theta
    pub delta_fit: Option<f64>,
    pub fit_radius: f64,
}

/// Evaluates, for each requested theta, the gap between the test potential
/// and the interpolating supporting function; nonnegative gaps certify the
/// connectedness side of the dichotomy, a markedly negative minimum exhibits
/// the counterexample.
pub fn verify_aw_geometric(
    model: &CostModel,
    x0: &Point,
    y0: &Point,
    y1: &Point,
    thetas: &[f64],
    domain: &Arc<GridDomain>,
) -> Result<AwGeometricReport> {
    if thetas.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::OutOfRange("thetas must lie in [0, 1]".into()));
    }
    let phibar = build_phibar(model, x0, y0, y1, domain)?;
    let v0 = -model.grad_x(x0, y0);
    let v1 = -model.grad_x(x0, y1);
    let mut order: Vec<usize> = (0..thetas.len()).collect();
    order.sort_by(|&a, &b| thetas[a].partial_cmp(&thetas[b]).unwrap());

    let fit_radius = 10.0 * domain.spacing;
    let sep_sq = (&y1.coords - &y0.coords).norm_squared();
    let mut min_gap = f64::INFINITY;
    let mut argmin_theta = f64::NAN;
    let mut argmin_index = 0usize;
    let mut delta_fit: Option<f64> = None;

    let mut seed = y0.clone();
    for &k in &order {
        let theta = thetas[k];
        let p = &v0 * (1.0 - theta) + &v1 * theta;
        let sol = c_exponential(model, x0, &p, &seed)
            .map_err(|e| Error::SegmentFailed { theta, source: Box::new(e) })?;
        seed = sol.y.clone();
        let y_theta = sol.y;
        let c0t = model.eval_checked(x0, &y_theta)?;
        // least-squares slope of gap against |x - x0|^2 through the origin
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, x) in domain.points.iter().enumerate() {
            let f_theta = -model.eval_checked(x, &y_theta)? + c0t;
            let gap = phibar.values[i] - f_theta;
            if gap < min_gap {
                min_gap = gap;
                argmin_theta = theta;
                argmin_index = i;
            }
            let r2 = (&x.coords - &x0.coords).norm_squared();
            if r2 > 0.0 && r2 <= fit_radius * fit_radius {
                num += gap * r2;
                den += r2 * r2;
            }
        }
        if den > 0.0 && theta > 0.0 && theta < 1.0 && sep_sq > 0.0 {
            let coeff = num / den / (theta * (1.0 - theta) * sep_sq);
            delta_fit = Some(match delta_fit {
                Some(d) => d.min(coeff),
                None => coeff,
            });
        }
    }
    Ok(AwGeometricReport { min_gap, argmin_theta, argmin_index, delta_fit, fit_radius })
}

/// Map regularity exponents from the mass-growth exponent of the source:
/// alpha = 1 - n/p and beta = alpha / (4n - 2 + alpha). `p` may be infinite.
pub fn holder_exponent(n: usize, p: f64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::BadDimension { min: 1, got: n });
    }
    if !(p > n as f64) {
        return Err(Error::OutOfRange(format!("p = {p} must exceed n = {n}")));
    }
    let alpha = if p.is_infinite() { 1.0 } else { 1.0 - n as f64 / p };
    let beta = alpha / (4.0 * n as f64 - 2.0 + alpha);
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::make_cost_simple;
    use approx::assert_relative_eq;

    fn unit_grid(res: usize) -> Arc<GridDomain> {
        GridDomain::rectangular(
            BoxDomain::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap(),
            &[res, res],
        )
        .unwrap()
    }

    #[test]
    fn grid_is_connected_and_spaced() {
        let g = unit_grid(5);
        assert_eq!(g.len(), 25);
        assert_relative_eq!(g.spacing, 0.5, epsilon = 1e-12);
        assert_eq!(g.neighbors[0].len(), 2);
        assert_eq!(g.neighbors[6].len(), 4);
    }

    #[test]
    fn zero_potential_conjugate_of_quadratic_vanishes_inside() {
        // sup_x of -|x-y|^2/2 over the box is attained at x = y for interior y
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = GridDomain::rectangular(BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(), &[11, 11]).unwrap();
        let phi = GridPotential::zero(g.clone());
        let phic = c_transform(&m, &phi, &g).unwrap();
        for v in &phic.values {
            assert_relative_eq!(*v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_shift_moves_conjugate_oppositely() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(9);
        let phi = GridPotential::from_fn(g.clone(), |p| p.coords.norm_squared());
        let mut shifted = phi.clone();
        for v in &mut shifted.values {
            *v += 3.25;
        }
        let a = c_transform(&m, &phi, &g).unwrap();
        let b = c_transform(&m, &shifted, &g).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_relative_eq!(*x - 3.25, *y, epsilon = 1e-12);
        }
    }

    #[test]
    fn conjugate_matches_closed_form_for_quadratic_potential() {
        // phi = |x|^2/2: -c - phi = x.y - |x|^2 - |y|^2/2 maximized at x = y/2
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(21);
        let phi = GridPotential::from_fn(g.clone(), |p| 0.5 * p.coords.norm_squared());
        let phic = c_transform(&m, &phi, &g).unwrap();
        for (j, y) in g.points.iter().enumerate() {
            // exact maximizer y/2 rounded to the grid
            let half = Point::euclidean(&[y.coords[0] / 2.0, y.coords[1] / 2.0]);
            let i = g.nearest(&half);
            let x = &g.points[i];
            let expect = -m.eval(x, y) - 0.5 * x.coords.norm_squared();
            assert_relative_eq!(phic.values[j], expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn convexification_is_monotone_and_idempotent() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(15);
        let mut phi = GridPotential::from_fn(g.clone(), |p| p.coords.norm_squared());
        phi.values[37] -= 1.0; // a spike
        let cc = c_convexify(&m, &phi, &g).unwrap();
        for (a, b) in cc.values.iter().zip(&phi.values) {
            assert!(*a <= *b + 1e-12);
        }
        let cc2 = c_convexify(&m, &cc, &g).unwrap();
        for (a, b) in cc2.values.iter().zip(&cc.values) {
            assert_relative_eq!(*a, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn upward_spike_is_shaved_elsewhere_untouched() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(7);
        let base = GridPotential::from_fn(g.clone(), |p| p.coords.norm_squared());
        let smooth = c_convexify(&m, &base, &g).unwrap();
        let mut spiked = smooth.clone();
        let center = g.nearest(&Point::euclidean(&[0.0, 0.0]));
        spiked.values[center] += 1.0;
        let fixed = c_convexify(&m, &spiked, &g).unwrap();
        // the raised node is shaved back towards the envelope (up to the
        // coarse grid's argmax margin), every other node is reproduced
        assert!(fixed.values[center] < spiked.values[center] - 0.5);
        assert!(fixed.values[center] >= smooth.values[center] - 1e-12);
        for (i, (a, b)) in fixed.values.iter().zip(&smooth.values).enumerate() {
            if i != center {
                assert_relative_eq!(*a, *b, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn phibar_vanishes_at_center_and_is_c_convex() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(21);
        let x0 = Point::euclidean(&[0.0, 0.0]);
        // anchors on the target grid so the double transform is exact
        let y0 = g.points[g.nearest(&Point::euclidean(&[0.5, 0.3]))].clone();
        let y1 = g.points[g.nearest(&Point::euclidean(&[-0.3, 0.5]))].clone();
        let pb = build_phibar(&m, &x0, &y0, &y1, &g).unwrap();
        let i0 = g.nearest(&x0);
        assert_relative_eq!(pb.values[i0], 0.0, epsilon = 1e-12);
        let cc = c_convexify(&m, &pb, &g).unwrap();
        for (a, b) in cc.values.iter().zip(&pb.values) {
            assert_relative_eq!(*a, *b, epsilon = 1e-10);
        }
    }

    #[test]
    fn contact_set_of_strictly_convex_potential_is_a_single_node() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(21);
        // coarser target grid so the argmax block around the image holds a
        // single node (equal spacings tie at block boundaries)
        let tgt = unit_grid(11);
        let phi = GridPotential::from_fn(g.clone(), |p| 0.5 * p.coords.norm_squared());
        let phic = c_transform(&m, &phi, &tgt).unwrap();
        let x = g.points[g.nearest(&Point::euclidean(&[0.2, 0.2]))].clone();
        let tol = 1e-9;
        let cs = contact_set(&m, &phi, &phic, &x, tol).unwrap();
        assert_eq!(cs.components.len(), 1);
        // the image 2x = (0.4, 0.4) is a target node and the block is tight
        assert_eq!(cs.members.len(), 1);
        assert!((tgt.points[cs.members[0]].coords[0] - 0.4).abs() < 1e-9);
    }

    #[test]
    fn empty_contact_reports_tolerance_error() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(5);
        let phi = GridPotential::zero(g.clone());
        let phic = c_transform(&m, &phi, &g).unwrap();
        let x = Point::euclidean(&[0.13, 0.13]); // off-node
        let r = contact_set(&m, &phi, &phic, &x, -1.0);
        assert!(matches!(r, Err(Error::EmptyContact { .. })));
    }

    #[test]
    fn holder_exponents() {
        assert_eq!(holder_exponent(2, f64::INFINITY).unwrap(), (1.0, 1.0 / 7.0));
        assert_eq!(holder_exponent(1, f64::INFINITY).unwrap(), (1.0, 1.0 / 3.0));
        let (a, b) = holder_exponent(3, 6.0).unwrap();
        assert_relative_eq!(a, 0.5, epsilon = 1e-15);
        assert_relative_eq!(b, 0.5 / 10.5, epsilon = 1e-15);
        assert!(holder_exponent(3, 2.0).is_err());
    }

    #[test]
    fn order_reversal() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let g = unit_grid(9);
        let lo = GridPotential::from_fn(g.clone(), |p| p.coords[0]);
        let hi = GridPotential::from_fn(g.clone(), |p| p.coords[0] + 0.5 + p.coords[1].abs());
        let lo_c = c_transform(&m, &lo, &g).unwrap();
        let hi_c = c_transform(&m, &hi, &g).unwrap();
        for (a, b) in lo_c.values.iter().zip(&hi_c.values) {
            assert!(*a >= *b - 1e-12);
        }
    }
}

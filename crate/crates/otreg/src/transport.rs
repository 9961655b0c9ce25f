//! Exact discrete optimal transport at desk scale by successive shortest
//! paths on the complete bipartite graph, with dual potentials recovered
//! from the node potentials and tightened by a conjugate pass. No
//! regularization anywhere: the diagnostics downstream need sharp maps.

use crate::cost::CostModel;
use crate::error::{Error, Result};
use crate::geometry::{sphere_distance, Chart, Point};
use crate::measure::DiscreteMeasure;
use crate::rng::split_rng_indexed;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

pub const FEASIBILITY_TOL: f64 = 1e-8;
pub const DUALITY_GAP_TOL: f64 = 1e-6;
const AUGMENT_EPS: f64 = 1e-14;

/// Solution of one transport instance.
#[derive(Debug, Clone)]
pub struct TransportResult {
    pub sources: Vec<Point>,
    pub targets: Vec<Point>,
    pub source_weights: Vec<f64>,
    pub target_weights: Vec<f64>,
    /// sparse optimal plan as (source, target, mass)
    pub plan: Vec<(usize, usize, f64)>,
    /// dual potential on the source support
    pub phi: Vec<f64>,
    /// dual potential on the target support (a conjugate of phi)
    pub psi: Vec<f64>,
    pub cost_total: f64,
    /// heaviest target per source
    pub map: Vec<usize>,
    /// mass fraction of each source not following `map`
    pub split_fraction: Vec<f64>,
}

impl TransportResult {
    /// |primal - dual| relative duality gap witness.
    pub fn duality_gap(&self) -> f64 {
        let dual: f64 = -self
            .phi
            .iter()
            .zip(&self.source_weights)
            .map(|(p, w)| p * w)
            .sum::<f64>()
            - self.psi.iter().zip(&self.target_weights).map(|(p, w)| p * w).sum::<f64>();
        (self.cost_total - dual).abs()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut r = vec![0.0; self.sources.len()];
        for &(i, _, m) in &self.plan {
            r[i] += m;
        }
        r
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.targets.len()];
        for &(_, j, m) in &self.plan {
            c[j] += m;
        }
        c
    }
}

#[derive(Copy, Clone, Debug)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapItem {}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap by distance, ties by node index for determinism
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact optimal transport between two discrete measures under a cost model.
///
/// The support product must be valid for the cost and weights must agree in
/// total mass. Runs successive shortest paths with Johnson potentials;
/// tie-breaking inside the Dijkstra heap is by node index, so the result is
/// deterministic for a given input ordering.
pub fn solve_exact(model: &CostModel, mu0: &DiscreteMeasure, mu1: &DiscreteMeasure) -> Result<TransportResult> {
    let m = mu0.len();
    let k = mu1.len();
    if m * k > 10_000_000 {
        return Err(Error::OutOfRange(format!("cost matrix {m} x {k} exceeds the desk-scale cap")));
    }
    let gap = (mu0.weights.iter().sum::<f64>() - mu1.weights.iter().sum::<f64>()).abs();
    if gap > FEASIBILITY_TOL {
        return Err(Error::Infeasible { gap });
    }
    // cost matrix, validity-checked
    let cost: Vec<f64> = (0..m)
        .into_par_iter()
        .flat_map_iter(|i| {
            let row: Vec<f64> = (0..k)
                .map(|j| {
                    if model.valid(&mu0.support[i], &mu1.support[j]) {
                        model.eval(&mu0.support[i], &mu1.support[j])
                    } else {
                        f64::NAN
                    }
                })
                .collect();
            row
        })
        .collect();
    if let Some(pos) = cost.iter().position(|c| c.is_nan()) {
        return Err(Error::InvalidPair(format!(
            "support pair ({}, {}) is invalid for cost `{}`",
            pos / k,
            pos % k,
            model.name
        )));
    }
    // Deterministic sub-tolerance jitter makes shortest paths unique on
    // highly symmetric instances (regular grids tie massively, and tied
    // paths make successive shortest paths reroute each other forever).
    // The final plan cost and the duals are reported against true costs;
    // the perturbation is orders of magnitude below every feasibility and
    // duality tolerance.
    let scale = cost.iter().cloned().fold(0.0_f64, |a, b| a.max(b.abs())).max(1.0);
    let jitter = |i: usize, j: usize| -> f64 {
        let mut h = (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (j as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f);
        h ^= h >> 29;
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 32;
        (h % 1_000_003) as f64 * 1e-13 * scale / 1_000_003.0
    };
    let solver_cost: Vec<f64> = (0..m * k).map(|idx| cost[idx] + jitter(idx / k, idx % k)).collect();

    let mut plan = vec![0.0_f64; m * k];
    let mut supply = mu0.weights.clone();
    let mut demand = mu1.weights.clone();
    let mut pot_src = vec![0.0_f64; m];
    let mut pot_snk = vec![0.0_f64; k];
    // warm start: valid potentials for the empty flow
    for j in 0..k {
        let mut best = f64::INFINITY;
        for i in 0..m {
            best = best.min(solver_cost[i * k + j]);
        }
        pot_snk[j] = best;
    }
    // sinks with inbound flow, for backward arcs
    let mut flow_sources: Vec<Vec<usize>> = vec![Vec::new(); k];

    let mut remaining: f64 = demand.iter().sum();
    let max_rounds = 50 * (m + k) + 1000;
    let mut rounds = 0usize;

    let n_nodes = m + k;
    let mut dist = vec![f64::INFINITY; n_nodes];
    let mut parent = vec![usize::MAX; n_nodes];
    let mut done = vec![false; n_nodes];

    while remaining > 1e-12 {
        rounds += 1;
        if rounds > max_rounds {
            return Err(Error::OutOfRange("transport solver exceeded its augmentation budget".into()));
        }
        if std::env::var_os("OTREG_SOLVER_TRACE").is_some() {
            eprintln!("round {rounds}: remaining mass {remaining:.3e}");
        }
        // multi-source Dijkstra on reduced costs
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        parent.iter_mut().for_each(|p| *p = usize::MAX);
        done.iter_mut().for_each(|d| *d = false);
        let mut heap = BinaryHeap::new();
        for i in 0..m {
            if supply[i] > AUGMENT_EPS {
                dist[i] = 0.0;
                heap.push(HeapItem { dist: 0.0, node: i });
            }
        }
        let mut best_sink: Option<usize> = None;
        let mut best_sink_dist = f64::INFINITY;
        while let Some(HeapItem { dist: d, node }) = heap.pop() {
            if done[node] || d > dist[node] {
                continue;
            }
            done[node] = true;
            if d >= best_sink_dist {
                // every remaining label is at least the settled sink
                break;
            }
            if node < m {
                let i = node;
                for j in 0..k {
                    let rc = (solver_cost[i * k + j] + pot_src[i] - pot_snk[j]).max(0.0);
                    let nd = d + rc;
                    let sink_node = m + j;
                    if nd < dist[sink_node] {
                        dist[sink_node] = nd;
                        parent[sink_node] = i;
                        heap.push(HeapItem { dist: nd, node: sink_node });
                        if demand[j] > AUGMENT_EPS && nd < best_sink_dist {
                            best_sink_dist = nd;
                            best_sink = Some(j);
                        }
                    }
                }
            } else {
                let j = node - m;
                if demand[j] > AUGMENT_EPS && d < best_sink_dist {
                    best_sink_dist = d;
                    best_sink = Some(j);
                }
                flow_sources[j].retain(|&i| plan[i * k + j] > 0.0);
                for &i in &flow_sources[j] {
                    // backward arc j -> i
                    let rc = (-solver_cost[i * k + j] - pot_src[i] + pot_snk[j]).max(0.0);
                    let nd = d + rc;
                    if nd < dist[i] {
                        dist[i] = nd;
                        parent[i] = node;
                        heap.push(HeapItem { dist: nd, node: i });
                    }
                }
            }
        }
        let sink = best_sink.ok_or_else(|| Error::Infeasible { gap: remaining })?;
        let t_dist = dist[m + sink];

        // potential update capped at the settled sink distance
        for i in 0..m {
            pot_src[i] += dist[i].min(t_dist);
        }
        for j in 0..k {
            pot_snk[j] += dist[m + j].min(t_dist);
        }

        // walk the path back, find bottleneck
        let mut bottleneck = demand[sink];
        let mut node = m + sink;
        loop {
            let p = parent[node];
            if node >= m {
                if p == usize::MAX {
                    break;
                }
                node = p; // arrived from source p via forward arc
            } else {
                if p == usize::MAX {
                    bottleneck = bottleneck.min(supply[node]);
                    break;
                }
                // arrived from sink p via backward arc: bounded by its flow
                bottleneck = bottleneck.min(plan[node * k + (p - m)]);
                node = p;
            }
        }
        // apply augmentation
        let mut node = m + sink;
        loop {
            let p = parent[node];
            if node >= m {
                if p == usize::MAX {
                    break;
                }
                let j = node - m;
                let cell = p * k + j;
                if plan[cell] == 0.0 {
                    flow_sources[j].push(p);
                }
                plan[cell] += bottleneck;
                node = p;
            } else {
                if p == usize::MAX {
                    supply[node] -= bottleneck;
                    break;
                }
                plan[node * k + (p - m)] -= bottleneck;
                node = p;
            }
        }
        demand[sink] -= bottleneck;
        remaining -= bottleneck;
        if std::env::var_os("OTREG_SOLVER_TRACE").is_some() {
            if !(bottleneck > 0.0) {
                eprintln!("round {rounds}: NONPOSITIVE bottleneck {bottleneck:.3e}");
            }
            if demand[sink] < -1e-15 {
                eprintln!("round {rounds}: demand[{sink}] went negative: {:.3e}", demand[sink]);
            }
            let true_remaining: f64 = demand.iter().sum();
            if (true_remaining - remaining).abs() > 1e-9 {
                eprintln!("round {rounds}: remaining drift {:.3e}", true_remaining - remaining);
            }
        }
    }

    // Kantorovich-convention duals from the node potentials, psi tightened
    // to the conjugate of phi on the target support
    let phi: Vec<f64> = pot_src.clone();
    let psi: Vec<f64> = (0..k)
        .map(|j| {
            let mut best = f64::NEG_INFINITY;
            for i in 0..m {
                best = best.max(-cost[i * k + j] - phi[i]);
            }
            best
        })
        .collect();

    let mut sparse = Vec::new();
    let mut cost_total = 0.0;
    for i in 0..m {
        for j in 0..k {
            let mass = plan[i * k + j];
            if mass > 0.0 {
                sparse.push((i, j, mass));
                cost_total += mass * cost[i * k + j];
            }
        }
    }
    let mut map = vec![0usize; m];
    let mut split_fraction = vec![0.0_f64; m];
    for i in 0..m {
        let mut best_j = 0;
        let mut best_mass = -1.0;
        let mut row_mass = 0.0;
        for j in 0..k {
            let mass = plan[i * k + j];
            row_mass += mass;
            if mass > best_mass {
                best_mass = mass;
                best_j = j;
            }
        }
        map[i] = best_j;
        split_fraction[i] = if row_mass > 0.0 { 1.0 - best_mass / row_mass } else { 0.0 };
    }

    Ok(TransportResult {
        sources: mu0.support.clone(),
        targets: mu1.support.clone(),
        source_weights: mu0.weights.clone(),
        target_weights: mu1.weights.clone(),
        plan: sparse,
        phi,
        psi,
        cost_total,
        map,
        split_fraction,
    })
}

/// Scatter data for the empirical modulus of continuity of the map.
#[derive(Debug, Clone)]
pub struct MapDiagnostics {
    /// sampled (|x1 - x0|, |G(x1) - G(x0)|) pairs
    pub modulus: Vec<(f64, f64)>,
    /// largest image jump between adjacent sources and the pair realizing it
    pub max_adjacent_jump: f64,
    pub max_jump_pair: (usize, usize),
    /// adjacency distance used (sources closer than this are adjacent)
    pub adjacency_radius: f64,
    /// slope of log |dG| against log |dx| over the sampled pairs
    pub modulus_slope: Option<f64>,
    /// sources whose plan splits mass beyond 1%
    pub split_sources: usize,
}

fn point_dist(a: &Point, b: &Point) -> f64 {
    if a.chart == Chart::SphereEmbedded && b.chart == Chart::SphereEmbedded {
        sphere_distance(&a.coords, &b.coords)
    } else {
        (&a.coords - &b.coords).norm()
    }
}

/// Samples source pairs and reports the map's empirical modulus of
/// continuity plus the worst adjacent-source image jump.
pub fn extract_map_diagnostics(result: &TransportResult, pairs: usize, seed: u64) -> Result<MapDiagnostics> {
    let m = result.sources.len();
    if m < 2 {
        return Err(Error::OutOfRange("need at least 2 sources".into()));
    }
    let mut rng = split_rng_indexed(seed, "map-diagnostics", 0);
    let mut modulus = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let a = rng.gen_range(0..m);
        let mut b = rng.gen_range(0..m);
        if a == b {
            b = (b + 1) % m;
        }
        let dx = point_dist(&result.sources[a], &result.sources[b]);
        let dg = point_dist(&result.targets[result.map[a]], &result.targets[result.map[b]]);
        modulus.push((dx, dg));
    }
    // adjacency radius: 1.5 x median nearest-neighbor distance
    let mut nn = vec![f64::INFINITY; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                nn[i] = nn[i].min(point_dist(&result.sources[i], &result.sources[j]));
            }
        }
    }
    let mut nn_sorted = nn.clone();
    nn_sorted.sort_by(f64::total_cmp);
    let adjacency_radius = 1.5 * nn_sorted[m / 2];
    let mut max_adjacent_jump = 0.0_f64;
    let mut max_jump_pair = (0usize, 0usize);
    for i in 0..m {
        for j in (i + 1)..m {
            if point_dist(&result.sources[i], &result.sources[j]) <= adjacency_radius {
                let dg = point_dist(&result.targets[result.map[i]], &result.targets[result.map[j]]);
                if dg > max_adjacent_jump {
                    max_adjacent_jump = dg;
                    max_jump_pair = (i, j);
                }
            }
        }
    }
    let pts: Vec<(f64, f64)> = modulus
        .iter()
        .filter(|(dx, dg)| *dx > 0.0 && *dg > 0.0)
        .map(|(dx, dg)| (dx.ln(), dg.ln()))
        .collect();
    let modulus_slope = if pts.len() >= 8 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let den = n * sxx - sx * sx;
        if den.abs() > 1e-12 {
            Some((n * sxy - sx * sy) / den)
        } else {
            None
        }
    } else {
        None
    };
    let split_sources = result.split_fraction.iter().filter(|s| **s > 0.01).count();
    Ok(MapDiagnostics {
        modulus,
        max_adjacent_jump,
        max_jump_pair,
        adjacency_radius,
        modulus_slope,
        split_sources,
    })
}

/// Which singular set the map must avoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StayAwayGeometry {
    /// squared-distance cost: report max d(x, G(x)) and its margin to pi
    SphereCutLocus,
    /// reflector cost: report min d(x, G(x)) and its margin to 0
    AntennaDiagonal,
}

/// Extremal map displacement against the relevant singular set.
pub fn stay_away_check(result: &TransportResult, geometry: StayAwayGeometry) -> Result<(f64, f64)> {
    let spherical = result
        .sources
        .iter()
        .chain(&result.targets)
        .all(|p| p.chart == Chart::SphereEmbedded);
    if !spherical {
        return Err(Error::InvalidPair("stay-away checks need sphere supports".into()));
    }
    let displacements = result
        .sources
        .iter()
        .enumerate()
        .map(|(i, x)| sphere_distance(&x.coords, &result.targets[result.map[i]].coords));
    match geometry {
        StayAwayGeometry::SphereCutLocus => {
            let max_d = displacements.fold(0.0_f64, f64::max);
            Ok((max_d, std::f64::consts::PI - max_d))
        }
        StayAwayGeometry::AntennaDiagonal => {
            let min_d = displacements.fold(f64::INFINITY, f64::min);
            Ok((min_d, min_d))
        }
    }
}

/// Re-solves under permuted input orders and reports the worst mean-centered
/// dual discrepancy: small values witness dual uniqueness on the support.
pub fn uniqueness_probe(
    model: &CostModel,
    mu0: &DiscreteMeasure,
    mu1: &DiscreteMeasure,
    perturbation_seeds: usize,
) -> Result<f64> {
    let base = solve_exact(model, mu0, mu1)?;
    let m = mu0.len();
    let centered = |phi: &[f64]| -> Vec<f64> {
        let mean = phi.iter().sum::<f64>() / phi.len() as f64;
        phi.iter().map(|p| p - mean).collect()
    };
    let base_phi = centered(&base.phi);
    let mut worst = 0.0_f64;
    for s in 0..perturbation_seeds {
        let mut rng = split_rng_indexed(7, "uniqueness-probe", s as u64);
        let mut perm: Vec<usize> = (0..m).collect();
        perm.shuffle(&mut rng);
        let mu0p = DiscreteMeasure::new(
            perm.iter().map(|&i| mu0.support[i].clone()).collect(),
            perm.iter().map(|&i| mu0.weights[i]).collect(),
        )?;
        let solved = solve_exact(model, &mu0p, mu1)?;
        let mut unperm = vec![0.0; m];
        for (slot, &orig) in perm.iter().enumerate() {
            unperm[orig] = solved.phi[slot];
        }
        let probe_phi = centered(&unperm);
        for (a, b) in base_phi.iter().zip(&probe_phi) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::make_cost_simple;

    fn pts1d(xs: &[f64]) -> Vec<Point> {
        xs.iter().map(|&x| Point::euclidean(&[x])).collect()
    }

    #[test]
    fn identity_instance_costs_nothing() {
        let m = make_cost_simple("quadratic", 1).unwrap();
        let mu0 = DiscreteMeasure::uniform(pts1d(&[0.0, 1.0])).unwrap();
        let mu1 = DiscreteMeasure::uniform(pts1d(&[0.0, 1.0])).unwrap();
        let r = solve_exact(&m, &mu0, &mu1).unwrap();
        assert!(r.cost_total.abs() < 1e-14);
        assert_eq!(r.map, vec![0, 1]);
        assert!(r.duality_gap() < 1e-10);
    }

    #[test]
    fn forced_plan_single_target() {
        let m = make_cost_simple("quadratic", 1).unwrap();
        let mu0 = DiscreteMeasure::uniform(pts1d(&[0.0, 1.0])).unwrap();
        let mu1 = DiscreteMeasure::new(pts1d(&[0.0, 1.0]), vec![0.0, 1.0]).unwrap();
        let r = solve_exact(&m, &mu0, &mu1).unwrap();
        // both sources feed target 1; cost = (1/2)(1 + 0)/2
        assert!((r.cost_total - 0.25).abs() < 1e-12);
        assert_eq!(r.map, vec![1, 1]);
    }

    #[test]
    fn marginals_and_duality_on_weighted_instance() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let mu0 = DiscreteMeasure::new(
            vec![
                Point::euclidean(&[0.0, 0.0]),
                Point::euclidean(&[1.0, 0.0]),
                Point::euclidean(&[0.0, 1.0]),
            ],
            vec![0.5, 0.25, 0.25],
        )
        .unwrap();
        let mu1 = DiscreteMeasure::new(
            vec![Point::euclidean(&[2.0, 0.5]), Point::euclidean(&[0.5, 2.0])],
            vec![0.6, 0.4],
        )
        .unwrap();
        let r = solve_exact(&m, &mu0, &mu1).unwrap();
        for (rs, w) in r.row_sums().iter().zip(&mu0.weights) {
            assert!((rs - w).abs() < 1e-10);
        }
        for (cs, w) in r.col_sums().iter().zip(&mu1.weights) {
            assert!((cs - w).abs() < 1e-10);
        }
        assert!(r.duality_gap() < 1e-9, "gap {}", r.duality_gap());
        // dual feasibility and complementary slackness
        for (i, x) in r.sources.iter().enumerate() {
            for (j, y) in r.targets.iter().enumerate() {
                assert!(r.phi[i] + r.psi[j] >= -m.eval(x, y) - 1e-8);
            }
        }
        for &(i, j, _) in &r.plan {
            let slack = r.phi[i] + r.psi[j] + m.eval(&r.sources[i], &r.targets[j]);
            assert!(slack.abs() <= 1e-8, "slack {slack}");
        }
    }

    #[test]
    fn infeasible_masses_are_rejected() {
        let m = make_cost_simple("quadratic", 1).unwrap();
        let mu0 = DiscreteMeasure::uniform(pts1d(&[0.0, 1.0])).unwrap();
        let bad = DiscreteMeasure {
            support: pts1d(&[0.0, 1.0]),
            weights: vec![0.3, 0.3],
        };
        assert!(matches!(solve_exact(&m, &mu0, &bad), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn one_dimensional_monotone_rearrangement() {
        // quadratic cost in 1d: the optimal map is the monotone coupling
        let m = make_cost_simple("quadratic", 1).unwrap();
        let src: Vec<f64> = (0..8).map(|i| i as f64 / 7.0).collect();
        let tgt: Vec<f64> = (0..8).map(|i| 2.0 + i as f64 / 7.0).collect();
        let mu0 = DiscreteMeasure::uniform(pts1d(&src)).unwrap();
        let mu1 = DiscreteMeasure::uniform(pts1d(&tgt)).unwrap();
        let r = solve_exact(&m, &mu0, &mu1).unwrap();
        assert_eq!(r.map, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn cyclical_monotonicity_spot_check() {
        let m = make_cost_simple("quadratic", 2).unwrap();
        let mut rng = split_rng_indexed(5, "cyc-mono", 0);
        let src: Vec<Point> = (0..12)
            .map(|_| Point::euclidean(&[rng.gen::<f64>(), rng.gen::<f64>()]))
            .collect();
        let tgt: Vec<Point> = (0..12)
            .map(|_| Point::euclidean(&[2.0 + rng.gen::<f64>(), rng.gen::<f64>()]))
            .collect();
        let mu0 = DiscreteMeasure::uniform(src).unwrap();
        let mu1 = DiscreteMeasure::uniform(tgt).unwrap();
        let r = solve_exact(&m, &mu0, &mu1).unwrap();
        for a in 0..12 {
            for b in 0..12 {
                let (ta, tb) = (r.map[a], r.map[b]);
                let lhs = m.eval(&r.sources[a], &r.targets[ta]) + m.eval(&r.sources[b], &r.targets[tb]);
                let rhs = m.eval(&r.sources[a], &r.targets[tb]) + m.eval(&r.sources[b], &r.targets[ta]);
                assert!(lhs <= rhs + 1e-8);
            }
        }
    }

    #[test]
    fn uniqueness_probe_small_on_generic_instance() {
        let m = make_cost_simple("quadratic", 1).unwrap();
        let src: Vec<f64> = (0..10).map(|i| i as f64 * 0.11).collect();
        let tgt: Vec<f64> = (0..10).map(|i| 3.0 + i as f64 * 0.13).collect();
        let mu0 = DiscreteMeasure::uniform(pts1d(&src)).unwrap();
        let mu1 = DiscreteMeasure::uniform(pts1d(&tgt)).unwrap();
        let d = uniqueness_probe(&m, &mu0, &mu1, 4).unwrap();
        assert!(d <= 1e-8, "discrepancy {d}");
    }
}

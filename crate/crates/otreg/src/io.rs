//! Plain CSV and structured-text serialization of the crate's data types.
//! Floats are written with Rust's shortest round-trip formatting, so a
//! written file re-read yields bit-identical values and identical inputs
//! yield byte-identical files.

use crate::ctransform::{ContactSet, GridDomain, GridPotential};
use crate::curvature::SweepReport;
use crate::error::{Error, Result};
use crate::geometry::{Chart, Point};
use crate::measure::DiscreteMeasure;
use crate::transport::TransportResult;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

fn join_floats(vals: impl Iterator<Item = f64>) -> String {
    vals.map(|v| format!("{v}")).collect::<Vec<_>>().join(",")
}

/// Writes one (coords..., value) row per grid node.
pub fn write_potential_csv(path: &Path, phi: &GridPotential) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    let dim = phi.domain.points.first().map(|p| p.dim()).unwrap_or(0);
    let header: Vec<String> = (0..dim).map(|k| format!("x{k}")).collect();
    writeln!(f, "{},value", header.join(","))?;
    for (p, v) in phi.domain.points.iter().zip(&phi.values) {
        writeln!(f, "{},{v}", join_floats(p.coords.iter().copied()))?;
    }
    Ok(())
}

/// Reads a potential written by [`write_potential_csv`] onto a cloud domain
/// reconstructed from the coordinates (box neighbor structure is not
/// recoverable from a bare CSV, so the file's own point list is used).
pub fn read_measure_csv(path: &Path, chart: Chart) -> Result<DiscreteMeasure> {
    let text = std::fs::read_to_string(path)?;
    let mut support = Vec::new();
    let mut weights = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if lineno == 0 && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            continue; // header
        }
        let nums: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.trim().parse::<f64>()).collect();
        let nums = nums.map_err(|e| Error::Parse(format!("{path:?}:{}: {e}", lineno + 1)))?;
        if nums.len() < 2 {
            return Err(Error::Parse(format!("{path:?}:{}: need coords and a weight", lineno + 1)));
        }
        let (coords, w) = nums.split_at(nums.len() - 1);
        support.push(match chart {
            Chart::Euclidean => Point::euclidean(coords),
            Chart::SphereEmbedded => Point::sphere(coords)?,
        });
        weights.push(w[0]);
    }
    DiscreteMeasure::new(support, weights)
}

pub fn write_measure_csv(path: &Path, mu: &DiscreteMeasure) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    let dim = mu.support.first().map(|p| p.dim()).unwrap_or(0);
    let header: Vec<String> = (0..dim).map(|k| format!("x{k}")).collect();
    writeln!(f, "{},weight", header.join(","))?;
    for (p, w) in mu.support.iter().zip(&mu.weights) {
        writeln!(f, "{},{w}", join_floats(p.coords.iter().copied()))?;
    }
    Ok(())
}

/// (theta, coords...) rows of a generalized segment.
pub fn write_segment_csv(path: &Path, seg: &crate::cexp::CSegment) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    let dim = seg.x.dim();
    let header: Vec<String> = (0..dim).map(|k| format!("y{k}")).collect();
    writeln!(f, "theta,{}", header.join(","))?;
    for (t, p) in seg.thetas.iter().zip(&seg.points) {
        writeln!(f, "{t},{}", join_floats(p.coords.iter().copied()))?;
    }
    Ok(())
}

/// Sample array of a sweep: x, y, xi, nu, value, err, reliable.
pub fn write_sweep_samples_csv(path: &Path, report: &SweepReport) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    let dim = report.samples.first().map(|s| s.x.dim()).unwrap_or(0);
    let cols = |tag: &str| -> String {
        (0..dim).map(|k| format!("{tag}{k}")).collect::<Vec<_>>().join(",")
    };
    writeln!(f, "{},{},{},{},value,err,reliable", cols("x"), cols("y"), cols("xi"), cols("nu"))?;
    for s in &report.samples {
        writeln!(
            f,
            "{},{},{},{},{},{},{}",
            join_floats(s.x.coords.iter().copied()),
            join_floats(s.y.coords.iter().copied()),
            join_floats(s.xi.iter().copied()),
            join_floats(s.nu.iter().copied()),
            s.value,
            s.err,
            u8::from(s.reliable)
        )?;
    }
    Ok(())
}

/// The structured text face of a sweep report.
pub fn format_sweep_report(report: &SweepReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("cost: {}\n", report.descriptor));
    out.push_str(&format!("stencil_h: {}\n", report.h));
    out.push_str(&format!("samples: {}\n", report.samples.len()));
    out.push_str(&format!("reliable: {}\n", report.reliable_count));
    out.push_str(&format!("min_value: {}\n", report.min_value));
    if let Some(idx) = report.argmin {
        let s = &report.samples[idx];
        out.push_str(&format!(
            "argmin_x: {}\nargmin_y: {}\nargmin_xi: {}\nargmin_nu: {}\n",
            join_floats(s.x.coords.iter().copied()),
            join_floats(s.y.coords.iter().copied()),
            join_floats(s.xi.iter().copied()),
            join_floats(s.nu.iter().copied())
        ));
    }
    out.push_str(&format!("c0_estimate: {}\n", report.c0_estimate));
    out.push_str(&format!("verdict: {}\n", report.verdict));
    out.push_str(&format!("inconclusive: {}\n", report.inconclusive));
    out
}

pub fn format_contact_report(cs: &ContactSet) -> String {
    let mut out = String::new();
    out.push_str(&format!("x: {}\n", join_floats(cs.x.coords.iter().copied())));
    out.push_str(&format!("members: {}\n", cs.members.len()));
    out.push_str(&format!("components: {}\n", cs.components.len()));
    out.push_str(&format!("tol: {}\n", cs.tol_used));
    for (k, comp) in cs.components.iter().enumerate() {
        out.push_str(&format!("component_{k}_size: {}\n", comp.len()));
    }
    out
}

/// Plan triplets (i, j, mass).
pub fn write_plan_csv(path: &Path, result: &TransportResult) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "source,target,mass")?;
    for &(i, j, m) in &result.plan {
        writeln!(f, "{i},{j},{m}")?;
    }
    Ok(())
}

/// Both dual vectors, one row per index (blank where one side is shorter).
pub fn write_duals_csv(path: &Path, result: &TransportResult) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "index,phi,psi")?;
    let n = result.phi.len().max(result.psi.len());
    for i in 0..n {
        let phi = result.phi.get(i).map(|v| format!("{v}")).unwrap_or_default();
        let psi = result.psi.get(i).map(|v| format!("{v}")).unwrap_or_default();
        writeln!(f, "{i},{phi},{psi}")?;
    }
    Ok(())
}

/// Generic two-column series, the unit of plot-data output.
pub fn write_series_csv(path: &Path, header: (&str, &str), rows: &[(f64, f64)]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    writeln!(f, "{},{}", header.0, header.1)?;
    for (a, b) in rows {
        writeln!(f, "{a},{b}")?;
    }
    Ok(())
}

/// Reads grid potential values written by [`write_potential_csv`], matching
/// rows to `domain` nodes by nearest coordinates.
pub fn read_potential_csv(path: &Path, domain: &Arc<GridDomain>) -> Result<GridPotential> {
    let text = std::fs::read_to_string(path)?;
    let mut values = vec![f64::NAN; domain.len()];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if lineno == 0 && fields.iter().any(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        let nums: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.trim().parse::<f64>()).collect();
        let nums = nums.map_err(|e| Error::Parse(format!("{path:?}:{}: {e}", lineno + 1)))?;
        if nums.len() < 2 {
            return Err(Error::Parse(format!("{path:?}:{}: need coords and a value", lineno + 1)));
        }
        let (coords, v) = nums.split_at(nums.len() - 1);
        let p = Point::euclidean(coords);
        let idx = domain.nearest(&p);
        if (&domain.points[idx].coords - &p.coords).norm() > 1e-9 {
            return Err(Error::Parse(format!(
                "{path:?}:{}: row does not match any grid node",
                lineno + 1
            )));
        }
        values[idx] = v[0];
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::Parse(format!("{path:?}: rows do not cover the grid")));
    }
    GridPotential::new(domain.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoxDomain;

    #[test]
    fn potential_roundtrip() {
        let dir = std::env::temp_dir().join("otreg-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("phi.csv");
        let g = GridDomain::rectangular(BoxDomain::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap(), &[4, 4]).unwrap();
        let phi = GridPotential::from_fn(g.clone(), |p| p.coords[0] * 1.5 - p.coords[1] / 3.0);
        write_potential_csv(&path, &phi).unwrap();
        let back = read_potential_csv(&path, &g).unwrap();
        assert_eq!(phi.values, back.values);
    }

    #[test]
    fn measure_roundtrip() {
        let dir = std::env::temp_dir().join("otreg-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("mu.csv");
        let mu = DiscreteMeasure::normalized(
            vec![Point::euclidean(&[0.1, 0.2]), Point::euclidean(&[0.4, 0.9])],
            vec![1.0, 3.0],
        )
        .unwrap();
        write_measure_csv(&path, &mu).unwrap();
        let back = read_measure_csv(&path, Chart::Euclidean).unwrap();
        assert_eq!(mu.weights, back.weights);
        assert_eq!(mu.support[1].coords, back.support[1].coords);
    }
}

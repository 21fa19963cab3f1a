//! Polar-grid samples: OBJ meshes of the end and CSV profiles of `η`, the
//! Gauss density and the Gauss map.

use std::fmt::Write as _;

use harmonic_ends_core::curvature::{eta_from_jet, gauss_density_from_jet};
use harmonic_ends_core::endspec::EndDefinition;
use harmonic_ends_core::immersion::{eval_jet, eval_point, tangent_plane, PolarPoint};
use rayon::prelude::*;

use crate::config::GridSpec;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SampleKind {
    /// OBJ mesh of the first three coordinates.
    Surface,
    /// CSV `r,t,eta,degenerate`.
    Eta,
    /// CSV `r,t,K,dA,degenerate`.
    Density,
    /// CSV `r,t,e1_*,e2_*,p_ij,degenerate`.
    Gaussmap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub text: String,
    pub rows: usize,
    pub degenerate_rows: usize,
    pub warnings: Vec<String>,
}

pub fn sample(end: &EndDefinition, kind: SampleKind, grid: &GridSpec) -> Result<Sample, CliError> {
    match kind {
        SampleKind::Surface => surface_obj(end, grid),
        SampleKind::Eta => eta_profile(end, &grid.radii(), grid.nt),
        SampleKind::Density => csv_rows(end, &points(grid), &["K", "dA"], |end, p| {
            let jet = eval_jet(end, p).ok()?;
            gauss_density_from_jet(&jet, p).ok().map(|g| vec![g.k, g.da])
        }),
        SampleKind::Gaussmap => {
            let d = end.dimension();
            let mut cols: Vec<String> = (1..=d).map(|i| format!("e1_{i}")).collect();
            cols.extend((1..=d).map(|i| format!("e2_{i}")));
            for i in 1..=d {
                for j in i + 1..=d {
                    cols.push(format!("p_{i}_{j}"));
                }
            }
            let cols: Vec<&str> = cols.iter().map(String::as_str).collect();
            csv_rows(end, &points(grid), &cols, |end, p| {
                let jet = eval_jet(end, p).ok()?;
                let plane = tangent_plane(&jet, p).ok()?;
                let mut row = plane.e1.clone();
                row.extend_from_slice(&plane.e2);
                row.extend(plane.plucker());
                Some(row)
            })
        }
    }
}

/// `η` on `nt` equally spaced angles at each radius.
pub fn eta_profile(end: &EndDefinition, radii: &[f64], nt: usize) -> Result<Sample, CliError> {
    let grid = GridSpec {
        nt,
        ..GridSpec::default()
    };
    csv_rows(end, &rings(radii, &grid.angles()), &["eta"], |end, p| {
        let jet = eval_jet(end, p).ok()?;
        eta_from_jet(&jet, p).ok().map(|v| vec![v])
    })
}

fn rings(radii: &[f64], angles: &[f64]) -> Vec<Vec<PolarPoint>> {
    radii
        .iter()
        .map(|&r| angles.iter().map(|&t| PolarPoint { r, t }).collect())
        .collect()
}

fn points(grid: &GridSpec) -> Vec<Vec<PolarPoint>> {
    rings(&grid.radii(), &grid.angles())
}

/// One row per grid point; a point where `eval` fails is written with empty
/// value columns and `degenerate = 1`.
fn csv_rows<F>(
    end: &EndDefinition,
    rings: &[Vec<PolarPoint>],
    columns: &[&str],
    eval: F,
) -> Result<Sample, CliError>
where
    F: Fn(&EndDefinition, PolarPoint) -> Option<Vec<f64>> + Sync,
{
    let values: Vec<Vec<Option<Vec<f64>>>> = rings
        .par_iter()
        .map(|ring| ring.iter().map(|&p| eval(end, p)).collect())
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["r", "t"];
    header.extend_from_slice(columns);
    header.push("degenerate");
    w.write_record(&header).map_err(output_error)?;
    let mut rows = 0;
    let mut degenerate_rows = 0;
    for (ring, vals) in rings.iter().zip(&values) {
        for (p, v) in ring.iter().zip(vals) {
            let mut record = vec![p.r.to_string(), p.t.to_string()];
            match v {
                Some(v) => {
                    record.extend(v.iter().map(f64::to_string));
                    record.push("0".into());
                }
                None => {
                    record.extend(columns.iter().map(|_| String::new()));
                    record.push("1".into());
                    degenerate_rows += 1;
                }
            }
            w.write_record(&record).map_err(output_error)?;
            rows += 1;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    let text = String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))?;
    Ok(Sample {
        text,
        rows,
        degenerate_rows,
        warnings: Vec::new(),
    })
}

fn output_error(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

/// Quad mesh over the polar grid, periodic in `t`. Vertex `(i, j)` is
/// `f(r_i e^{i t_j})` truncated or zero-padded to three coordinates.
fn surface_obj(end: &EndDefinition, grid: &GridSpec) -> Result<Sample, CliError> {
    let d = end.dimension();
    let mut warnings = Vec::new();
    if d > 3 {
        warnings.push(format!(
            "dimension {d} > 3: coordinates 4..{d} are dropped from the mesh"
        ));
    }
    let rings = points(grid);
    let coords: Vec<Vec<Vec<f64>>> = rings
        .par_iter()
        .map(|ring| ring.iter().map(|&p| eval_point(end, p)).collect())
        .collect::<Result<_, _>>()?;
    let (nr, nt) = (grid.nr, grid.nt);
    let mut text = String::new();
    let _ = writeln!(text, "# harmonic-ends surface {}", end.label());
    let _ = writeln!(text, "# polar grid {nr} x {nt}, r in [{}, {}]", grid.r_min, grid.r_max);
    for ring in &coords {
        for x in ring {
            let c = |k: usize| x.get(k).copied().unwrap_or(0.0);
            let _ = writeln!(text, "v {} {} {}", c(0), c(1), c(2));
        }
    }
    let index = |i: usize, j: usize| i * nt + (j % nt) + 1;
    for i in 0..nr.saturating_sub(1) {
        for j in 0..nt {
            let _ = writeln!(
                text,
                "f {} {} {} {}",
                index(i, j),
                index(i + 1, j),
                index(i + 1, j + 1),
                index(i, j + 1)
            );
        }
    }
    Ok(Sample {
        text,
        rows: nr * nt,
        degenerate_rows: 0,
        warnings,
    })
}

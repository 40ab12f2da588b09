//! Realization and trajectory files.
//!
//! Binary trajectory layout (all little-endian):
//!
//! ```text
//! bytes 0..8    magic "GWTRAJ01"
//! bytes 8..16   n, number of steps (u64)
//! then three columns of n f64 each: u, line (0.0 or 1.0), dist
//! ```

use std::path::Path;

use gwlab_core::analysis::realization_clusters;
use gwlab_core::{Line, Realization, Site, Trajectory};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::write_json;

pub const BINARY_MAGIC: &[u8; 8] = b"GWTRAJ01";

pub fn write_realization(real: &Realization, path: &Path) -> Result<()> {
    write_json(real, path)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads and validates a realization.
pub fn read_realization(path: &Path) -> Result<Realization> {
    let real: Realization = read_json(path)?;
    real.validate()?;
    Ok(real)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRow {
    pub step: usize,
    pub line: u8,
    pub u: f64,
    /// `d(S_{step-1}, S_step)`.
    pub dist: f64,
}

pub fn trajectory_rows(traj: &Trajectory) -> Vec<StepRow> {
    traj.steps
        .iter()
        .zip(&traj.step_distances)
        .enumerate()
        .map(|(i, (s, &dist))| StepRow {
            step: i + 1,
            line: s.line.into(),
            u: s.u,
            dist,
        })
        .collect()
}

pub fn write_trajectory(traj: &Trajectory, path: &Path) -> Result<()> {
    write_json(&trajectory_rows(traj), path)
}

pub fn read_trajectory_rows(path: &Path) -> Result<Vec<StepRow>> {
    let rows: Vec<StepRow> = read_json(path)?;
    let bad = rows.iter().enumerate().find(|(i, r)| r.step != i + 1 || r.line > 1);
    if let Some((i, _)) = bad {
        return Err(Error::Format {
            path: path.to_path_buf(),
            reason: format!("row {i} is out of sequence or has a bad line label"),
        });
    }
    Ok(rows)
}

pub fn write_trajectory_binary(traj: &Trajectory, path: &Path) -> Result<()> {
    let n = traj.len();
    let mut buf = Vec::with_capacity(16 + 24 * n);
    buf.extend_from_slice(BINARY_MAGIC);
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    for s in &traj.steps {
        buf.extend_from_slice(&s.u.to_le_bytes());
    }
    for s in &traj.steps {
        buf.extend_from_slice(&(s.line.index() as f64).to_le_bytes());
    }
    for d in &traj.step_distances {
        buf.extend_from_slice(&d.to_le_bytes());
    }
    std::fs::write(path, buf).map_err(Error::io(path))
}

pub fn read_trajectory_binary(path: &Path) -> Result<Vec<StepRow>> {
    let bytes = std::fs::read(path).map_err(Error::io(path))?;
    let format = |reason: &str| Error::Format {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    if bytes.len() < 16 || &bytes[..8] != BINARY_MAGIC {
        return Err(format("missing header"));
    }
    let n = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    if bytes.len() != 16 + 24 * n {
        return Err(format("length does not match the step count"));
    }
    let col = |c: usize, i: usize| {
        let at = 16 + 8 * (c * n + i);
        f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"))
    };
    (0..n)
        .map(|i| {
            let line = col(1, i);
            if line != 0.0 && line != 1.0 {
                return Err(format("bad line label"));
            }
            Ok(StepRow {
                step: i + 1,
                line: line as u8,
                u: col(0, i),
                dist: col(2, i),
            })
        })
        .collect()
}

/// One cluster of a parallel realization, for plot annotations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterRow {
    pub cluster: usize,
    pub label: isize,
    pub lo: f64,
    pub hi: f64,
    pub lead: f64,
    pub size: usize,
}

pub fn cluster_rows(real: &Realization) -> Result<Vec<ClusterRow>> {
    let dec = realization_clusters(real)?;
    Ok(dec
        .clusters
        .iter()
        .enumerate()
        .map(|(i, c)| ClusterRow {
            cluster: i,
            label: dec.label(i),
            lo: dec.points[c.start],
            hi: dec.points[c.end - 1],
            lead: dec.points[c.lead],
            size: c.len(),
        })
        .collect())
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `(step, line, u)` rows to `out`; for parallel realizations also
/// writes the cluster table to `<stem>.clusters.csv`. Returns the number of
/// cluster rows written.
pub fn export_plot_data(rows: &[StepRow], real: Option<&Realization>, out: &Path) -> Result<Option<usize>> {
    let csv_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Csv { path, source }
    };
    let mut w = csv_writer(out)?;
    w.write_record(["step", "line", "u"]).map_err(csv_err(out))?;
    for r in rows {
        w.write_record([r.step.to_string(), r.line.to_string(), r.u.to_string()])
            .map_err(csv_err(out))?;
    }
    w.flush().map_err(Error::io(out))?;
    let Some(real) = real.filter(|r| r.spec.separation().is_some()) else {
        return Ok(None);
    };
    let clusters = cluster_rows(real)?;
    let path = out.with_extension("clusters.csv");
    let mut w = csv_writer(&path)?;
    w.write_record(["cluster", "label", "lo", "hi", "lead", "size"])
        .map_err(csv_err(&path))?;
    for c in &clusters {
        w.write_record([
            c.cluster.to_string(),
            c.label.to_string(),
            c.lo.to_string(),
            c.hi.to_string(),
            c.lead.to_string(),
            c.size.to_string(),
        ])
        .map_err(csv_err(&path))?;
    }
    w.flush().map_err(Error::io(&path))?;
    Ok(Some(clusters.len()))
}

/// Sites of trajectory rows.
pub fn row_sites(rows: &[StepRow]) -> Vec<Site> {
    rows.iter()
        .map(|r| Site::new(r.u, if r.line == 0 { Line::Zero } else { Line::One }))
        .collect()
}

//! CSV and JSON serialization.
//!
//! CSV layouts are fixed so files diff cleanly between runs:
//!
//! * tomogram: header `X,theta,w`, rows theta-major, X ascending inside
//!   each angle block;
//! * phase-plane field: header `q,p,f`, rows q-major;
//! * spin tomogram: header `u,m,w`, rows sample-major, m descending from +j.
//!
//! Floats are printed with `{}`, which emits the shortest decimal that
//! parses back to the same f64, so write -> read is bit-exact.

use std::io::{BufRead, BufReader, Read, Write};

use ndarray::Array2;
use serde::Serialize;

use crate::entropy::InequalityVerdict;
use crate::error::{Result, TomoError};
use crate::grid::{AngleGrid, Grid1D};
use crate::qtomo::WignerField;
use crate::radon::OpticalTomogram;
use crate::spin::SpinTomogram;
use crate::states::PhaseSpaceDensity;

pub const TOMOGRAM_HEADER: &str = "X,theta,w";
pub const PLANE_HEADER: &str = "q,p,f";
pub const SPIN_HEADER: &str = "u,m,w";

/// Write an optical tomogram in the canonical layout.
pub fn write_tomogram_csv<W: Write>(w: &OpticalTomogram, out: &mut W) -> Result<()> {
    writeln!(out, "{TOMOGRAM_HEADER}")?;
    for (k, &theta) in w.angles().thetas().iter().enumerate() {
        let slice = w.slice(k);
        for (i, &x) in w.xgrid().points().iter().enumerate() {
            writeln!(out, "{x},{theta},{}", slice[i])?;
        }
    }
    Ok(())
}

fn parse_row(line: &str, line_no: usize, want_cols: usize) -> Result<Vec<f64>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != want_cols {
        return Err(TomoError::Csv(format!(
            "line {line_no}: expected {want_cols} columns, got {}",
            fields.len()
        )));
    }
    fields
        .iter()
        .map(|f| {
            let v: f64 = f
                .trim()
                .parse()
                .map_err(|_| TomoError::Csv(format!("line {line_no}: bad number `{f}`")))?;
            if !v.is_finite() {
                return Err(TomoError::Csv(format!(
                    "line {line_no}: non-finite value `{f}`"
                )));
            }
            Ok(v)
        })
        .collect()
}

/// Ingest a tomogram CSV (measured or previously written). The X grid and
/// angle grid are rebuilt from the coordinate columns; slices off
/// normalization by more than 1e-2 are rejected, smaller drifts are
/// renormalized.
pub fn read_tomogram_csv<R: Read>(input: R) -> Result<OpticalTomogram> {
    let mut lines = BufReader::new(input).lines();
    let header = lines
        .next()
        .ok_or_else(|| TomoError::Csv("empty file".into()))??;
    if header.trim() != TOMOGRAM_HEADER {
        return Err(TomoError::Csv(format!(
            "expected header `{TOMOGRAM_HEADER}`, got `{}`",
            header.trim()
        )));
    }
    let mut rows: Vec<[f64; 3]> = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            return Err(TomoError::Csv(format!("line {}: blank row", idx + 2)));
        }
        let r = parse_row(&line, idx + 2, 3)?;
        rows.push([r[0], r[1], r[2]]);
    }
    if rows.is_empty() {
        return Err(TomoError::Csv("no data rows".into()));
    }
    // Theta-major layout: the leading block of rows shares the first angle.
    let t0 = rows[0][1];
    let nx = rows.iter().take_while(|r| r[1] == t0).count();
    if nx < 2 || rows.len() % nx != 0 {
        return Err(TomoError::Csv(format!(
            "ragged angle blocks: {} rows with a leading block of {nx}",
            rows.len()
        )));
    }
    let ntheta = rows.len() / nx;
    let xs: Vec<f64> = rows[..nx].iter().map(|r| r[0]).collect();
    let mut thetas = Vec::with_capacity(ntheta);
    let mut values = Array2::zeros((ntheta, nx));
    for k in 0..ntheta {
        let block = &rows[k * nx..(k + 1) * nx];
        let theta = block[0][1];
        for (i, row) in block.iter().enumerate() {
            if row[1] != theta {
                return Err(TomoError::Csv(format!(
                    "angle changes mid-block near row {}",
                    k * nx + i + 2
                )));
            }
            if row[0] != xs[i] {
                return Err(TomoError::Csv(format!(
                    "X grid differs between angle blocks at row {}",
                    k * nx + i + 2
                )));
            }
            values[[k, i]] = row[2];
        }
        thetas.push(theta);
    }
    let xgrid = Grid1D::from_points(xs)?;
    let angles = AngleGrid::from_samples(thetas)?;
    OpticalTomogram::new(xgrid, angles, values)
}

fn write_plane<W: Write>(
    qgrid: &Grid1D,
    pgrid: &Grid1D,
    values: &Array2<f64>,
    out: &mut W,
) -> Result<()> {
    writeln!(out, "{PLANE_HEADER}")?;
    for (iq, &q) in qgrid.points().iter().enumerate() {
        for (ip, &p) in pgrid.points().iter().enumerate() {
            writeln!(out, "{q},{p},{}", values[[iq, ip]])?;
        }
    }
    Ok(())
}

/// Write a classical phase-space density, q-major.
pub fn write_phase_density_csv<W: Write>(f: &PhaseSpaceDensity, out: &mut W) -> Result<()> {
    write_plane(f.qgrid(), f.pgrid(), f.values(), out)
}

/// Write a reconstructed Wigner field in the same plane layout.
pub fn write_wigner_csv<W: Write>(w: &WignerField, out: &mut W) -> Result<()> {
    write_plane(w.qgrid(), w.pgrid(), w.values(), out)
}

/// Write a spin tomogram: one block per unitary sample, projection m
/// descending from +j inside each block.
pub fn write_spin_csv<W: Write>(w: &SpinTomogram, out: &mut W) -> Result<()> {
    writeln!(out, "{SPIN_HEADER}")?;
    for k in 0..w.n_samples() {
        let row = w.row(k);
        for (i, &v) in row.iter().enumerate() {
            let m = w.j() - i as f64;
            writeln!(out, "{k},{m},{v}")?;
        }
    }
    Ok(())
}

/// An inequality verdict plus the run provenance that produced it. The
/// spin fields appear only on spin-tomographic checks.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    #[serde(flatten)]
    pub verdict: InequalityVerdict,
    pub state: serde_json::Value,
    pub grid: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_unitaries: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerdictReport {
    pub fn new(
        verdict: InequalityVerdict,
        state: serde_json::Value,
        grid: serde_json::Value,
    ) -> Self {
        Self {
            verdict,
            state,
            grid,
            j: None,
            d: None,
            n_unitaries: None,
            seed: None,
        }
    }

    pub fn with_spin(mut self, j: f64, d: usize, n_unitaries: usize, seed: u64) -> Self {
        self.j = Some(j);
        self.d = Some(d);
        self.n_unitaries = Some(n_unitaries);
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn vacuum_tomogram(nx: usize, ntheta: usize) -> OpticalTomogram {
        let xgrid = Grid1D::uniform(nx, 8.0).unwrap();
        let angles = AngleGrid::offset(ntheta).unwrap();
        let norm = 1.0 / PI.sqrt();
        let values = Array2::from_shape_fn((ntheta, nx), |(_, i)| {
            let x = xgrid.point(i);
            norm * (-x * x).exp()
        });
        OpticalTomogram::new(xgrid, angles, values).unwrap()
    }

    #[test]
    fn tomogram_csv_round_trips_bit_exactly() {
        let w = vacuum_tomogram(201, 16);
        let mut buf = Vec::new();
        write_tomogram_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("X,theta,w\n"));
        assert_eq!(text.lines().count(), 1 + 201 * 16);

        let back = read_tomogram_csv(buf.as_slice()).unwrap();
        assert_eq!(back.xgrid().len(), 201);
        assert_eq!(back.angles().len(), 16);
        assert!((back.xgrid().step() - w.xgrid().step()).abs() < 1e-15);
        for k in 0..16 {
            for i in 0..201 {
                // Shortest round-trip decimals parse to the same bits; the
                // only drift is the second renormalization pass (ulps).
                assert!((back.values()[[k, i]] - w.values()[[k, i]]).abs() < 1e-12);
            }
        }

        // A rewrite of the ingested tomogram is byte-identical.
        let mut buf2 = Vec::new();
        write_tomogram_csv(&back, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn tomogram_reader_rejects_malformed_payloads() {
        let w = vacuum_tomogram(64, 8);
        let mut buf = Vec::new();
        write_tomogram_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();

        let wrong_header = text.replacen("X,theta,w", "x,angle,value", 1);
        assert!(matches!(
            read_tomogram_csv(wrong_header.as_bytes()),
            Err(TomoError::Csv(_))
        ));

        let mut lines: Vec<&str> = text.lines().collect();
        lines.remove(40);
        let ragged = lines.join("\n");
        assert!(matches!(
            read_tomogram_csv(ragged.as_bytes()),
            Err(TomoError::Csv(_))
        ));

        let bad_cell = text.replacen("0.5", "zero", 1);
        assert!(matches!(
            read_tomogram_csv(bad_cell.as_bytes()),
            Err(TomoError::Csv(_))
        ));

        assert!(read_tomogram_csv(b"X,theta,w\n".as_slice()).is_err());
    }

    #[test]
    fn tomogram_reader_enforces_normalization_and_circle_coverage() {
        let w = vacuum_tomogram(64, 8);
        // Scale one slice by 1.2: a 20% deficit must be rejected.
        let mut buf = Vec::new();
        write_tomogram_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut out = String::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 {
                out.push_str(line);
            } else if (1..=64).contains(&i) {
                let parts: Vec<&str> = line.split(',').collect();
                let v: f64 = parts[2].parse().unwrap();
                out.push_str(&format!("{},{},{}", parts[0], parts[1], 1.2 * v));
            } else {
                out.push_str(line);
            }
            out.push('\n');
        }
        assert!(matches!(
            read_tomogram_csv(out.as_bytes()),
            Err(TomoError::Numeric(_))
        ));

        // Half-circle angle coverage is a grid error.
        let mut half = String::from("X,theta,w\n");
        let xg = Grid1D::uniform(64, 8.0).unwrap();
        for k in 0..8 {
            let theta = (k as f64 + 0.5) * PI / 8.0;
            for &x in xg.points() {
                half.push_str(&format!(
                    "{x},{theta},{}\n",
                    (-x * x).exp() / PI.sqrt()
                ));
            }
        }
        assert!(matches!(
            read_tomogram_csv(half.as_bytes()),
            Err(TomoError::Grid(_))
        ));
    }

    #[test]
    fn plane_csv_is_q_major() {
        let qg = Grid1D::uniform(17, 4.0).unwrap();
        let pg = Grid1D::uniform(17, 4.0).unwrap();
        let f = PhaseSpaceDensity::gaussian(0.0, 0.0, 0.8, 0.8, &qg, &pg).unwrap();
        let mut buf = Vec::new();
        write_phase_density_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "q,p,f");
        assert_eq!(lines.len(), 1 + 17 * 17);
        // First block holds q = -4 with p ascending.
        assert!(lines[1].starts_with("-4,-4,"));
        assert!(lines[2].starts_with("-4,-3.5,"));
        assert!(lines[18].starts_with("-3.5,-4,"));
    }

    #[test]
    fn spin_csv_blocks_by_sample_with_descending_m() {
        let rho = crate::states::DensityMatrix::maximally_mixed(3).unwrap();
        let set = crate::spin::WeightedUnitarySet::haar(3, 2, 4).unwrap();
        let w = crate::spin::SpinTomogram::collect(&rho, &set).unwrap();
        let mut buf = Vec::new();
        write_spin_csv(&w, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "u,m,w");
        assert_eq!(lines.len(), 1 + 2 * 3);
        for (idx, expect) in [(1, "0,1,"), (2, "0,0,"), (3, "0,-1,"), (4, "1,1,")] {
            assert!(lines[idx].starts_with(expect), "line {idx}: {}", lines[idx]);
        }
    }

    #[test]
    fn verdict_report_serializes_flat_with_optional_spin_fields() {
        let verdict = InequalityVerdict::new("pair: S(q) + S(p) >= ln(pi e)", 2.2, 2.1, 1e-9);
        let report = VerdictReport::new(
            verdict.clone(),
            serde_json::json!({"type": "fock", "n": 0}),
            serde_json::json!({"n": 1024, "half_width": 8.0, "angles": 64}),
        );
        let parsed: serde_json::Value =
            serde_json::from_str(&report.to_json().unwrap()).unwrap();
        for key in ["inequality", "lhs", "rhs", "slack", "holds", "tol", "state", "grid"] {
            assert!(parsed.get(key).is_some(), "missing {key}");
        }
        assert!(parsed.get("j").is_none());
        assert_eq!(parsed["holds"], serde_json::json!(true));
        assert!((parsed["slack"].as_f64().unwrap() - 0.1).abs() < 1e-12);

        let spin = VerdictReport::new(
            verdict,
            serde_json::json!({"type": "random", "d": 3, "seed": 7}),
            serde_json::json!(null),
        )
        .with_spin(1.0, 3, 20, 7);
        let parsed: serde_json::Value =
            serde_json::from_str(&spin.to_json().unwrap()).unwrap();
        assert_eq!(parsed["d"], serde_json::json!(3));
        assert_eq!(parsed["n_unitaries"], serde_json::json!(20));
        assert_eq!(parsed["seed"], serde_json::json!(7));
    }
}

//! Parameter sweeps over the detuning and coupling axes, method
//! comparison rows, and CSV/JSON emission.
//!
//! Grid points are evaluated in parallel; every solver involved is
//! deterministic, so output files are bit-identical regardless of the
//! degree of parallelism.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::exact;
use crate::grwa;
use crate::gvm;
use crate::model::{ModelParams, TruncationConfig};
use crate::{RabiError, Result};

/// Sweep axis: the atomic resonant frequency Ω or the coupling g, in
/// units of ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    Omega,
    G,
}

/// A ground-state method entering a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Exact diagonalization (numerical simulation).
    Ns,
    /// Closed-form variational expressions.
    GvmClosed,
    /// Exact variational root with the full perturbation series.
    GvmFull,
    /// GRWA baseline closed forms.
    Grwa,
}

impl Method {
    pub fn column_name(self) -> &'static str {
        match self {
            Method::Ns => "ns",
            Method::GvmClosed => "gvm_closed",
            Method::GvmFull => "gvm_full",
            Method::Grwa => "grwa",
        }
    }
}

/// Observable compared across methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Observable {
    Energy,
    MeanPhoton,
}

/// One sweep: axis, inclusive range, held-constant parameter, methods,
/// observable.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    /// The parameter not on the axis: g when sweeping Ω, Ω when
    /// sweeping g.
    pub fixed: f64,
    pub methods: Vec<Method>,
    pub observable: Observable,
    /// Photon frequency; the figure presets all use ω = 1.
    pub omega: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(RabiError::InvalidParameter(format!(
                "sweep needs at least 2 points, got {}",
                self.count
            )));
        }
        let hi = 3.0 * self.omega;
        if !(0.0..=hi).contains(&self.start) || !(0.0..=hi).contains(&self.stop) {
            return Err(RabiError::InvalidParameter(format!(
                "sweep range [{}, {}] outside the validity envelope [0, 3ω]",
                self.start, self.stop
            )));
        }
        if self.methods.is_empty() {
            return Err(RabiError::InvalidParameter("no methods requested".into()));
        }
        Ok(())
    }

    fn params_at(&self, x: f64) -> Result<ModelParams> {
        match self.axis {
            Axis::Omega => ModelParams::new(self.omega, x, self.fixed),
            Axis::G => ModelParams::new(self.omega, self.fixed, x),
        }
    }
}

/// One grid point with per-method values and errors against NS.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gvm_closed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gvm_full: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grwa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_gvm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub err_grwa: Option<f64>,
    /// NS convergence flag (absent when NS was not requested).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns_converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns_n_max: Option<usize>,
}

impl ComparisonRow {
    pub fn value(&self, method: Method) -> Option<f64> {
        match method {
            Method::Ns => self.ns,
            Method::GvmClosed => self.gvm_closed,
            Method::GvmFull => self.gvm_full,
            Method::Grwa => self.grwa,
        }
    }
}

fn evaluate_point(spec: &SweepSpec, cutoff: &TruncationConfig, x: f64) -> Result<ComparisonRow> {
    let params = spec.params_at(x)?;
    let mut row = ComparisonRow {
        x,
        ns: None,
        gvm_closed: None,
        gvm_full: None,
        grwa: None,
        err_gvm: None,
        err_grwa: None,
        ns_converged: None,
        ns_n_max: None,
    };
    for &method in &spec.methods {
        let value = match (method, spec.observable) {
            (Method::Ns, _) => {
                // Non-convergence is flagged, never fatal to the sweep.
                let result = exact::ground_state(&params, cutoff)?;
                row.ns_converged = Some(result.converged);
                row.ns_n_max = Some(result.n_max_used);
                match spec.observable {
                    Observable::Energy => result.ground_energy,
                    Observable::MeanPhoton => exact::mean_photon_exact(&result),
                }
            }
            (Method::GvmClosed, Observable::Energy) => gvm::energy_closed_form(&params),
            (Method::GvmClosed, Observable::MeanPhoton) => gvm::mean_photon_closed(&params),
            (Method::GvmFull, Observable::Energy) => {
                gvm::solve(&params, gvm::ROOT_TOL, gvm::SERIES_TOL)?.energy
            }
            (Method::GvmFull, Observable::MeanPhoton) => {
                gvm::mean_photon_full(&gvm::solve(&params, gvm::ROOT_TOL, gvm::SERIES_TOL)?)
            }
            (Method::Grwa, Observable::Energy) => grwa::grwa_energy(&params),
            (Method::Grwa, Observable::MeanPhoton) => grwa::grwa_mean_photon(&params),
        };
        match method {
            Method::Ns => row.ns = Some(value),
            Method::GvmClosed => row.gvm_closed = Some(value),
            Method::GvmFull => row.gvm_full = Some(value),
            Method::Grwa => row.grwa = Some(value),
        }
    }
    if let Some(ns) = row.ns {
        // Error columns are always measured against NS; the full-series
        // value wins when both variational columns are present.
        let gvm_value = row.gvm_full.or(row.gvm_closed);
        row.err_gvm = gvm_value.map(|v| (v - ns).abs());
        row.err_grwa = row.grwa.map(|v| (v - ns).abs());
    }
    Ok(row)
}

/// Evaluate every requested method on the sweep grid. Rows come back
/// ordered by x; evaluation order does not affect any emitted digit.
pub fn run_sweep(spec: &SweepSpec, cutoff: &TruncationConfig) -> Result<Vec<ComparisonRow>> {
    spec.validate()?;
    let step = (spec.stop - spec.start) / (spec.count - 1) as f64;
    (0..spec.count)
        .into_par_iter()
        .map(|i| evaluate_point(spec, cutoff, spec.start + step * i as f64))
        .collect()
}

/// Sweep presets matching the published comparison figures.
///
/// * `1a`/`1b` — energy vs Ω ∈ [0, 2ω] at g = 0.2ω / 0.6ω;
/// * `2a`/`2b` — energy vs g ∈ [0, 0.8ω] at Ω = 1.0ω / 1.5ω;
/// * `3` — energy vs Ω ∈ [0, 1.5ω] at g = 1.0ω, with the full-series
///   variational result (the closed form is out of its validity range
///   at this coupling);
/// * `4` — mean photon number vs Ω ∈ [0, 2ω] at g = 0.6ω;
/// * `4-inset` — mean photon number vs g ∈ [0, 0.8ω] at Ω = 1.5ω.
pub fn figure_preset(id: &str) -> Result<SweepSpec> {
    let spec = match id {
        "1a" | "1b" => SweepSpec {
            axis: Axis::Omega,
            start: 0.0,
            stop: 2.0,
            count: 41,
            fixed: if id == "1a" { 0.2 } else { 0.6 },
            methods: vec![Method::Ns, Method::GvmClosed, Method::Grwa],
            observable: Observable::Energy,
            omega: 1.0,
        },
        "2a" | "2b" => SweepSpec {
            axis: Axis::G,
            start: 0.0,
            stop: 0.8,
            count: 41,
            fixed: if id == "2a" { 1.0 } else { 1.5 },
            methods: vec![Method::Ns, Method::GvmClosed, Method::Grwa],
            observable: Observable::Energy,
            omega: 1.0,
        },
        "3" => SweepSpec {
            axis: Axis::Omega,
            start: 0.0,
            stop: 1.5,
            count: 41,
            fixed: 1.0,
            methods: vec![Method::Ns, Method::GvmFull, Method::Grwa],
            observable: Observable::Energy,
            omega: 1.0,
        },
        "4" => SweepSpec {
            axis: Axis::Omega,
            start: 0.0,
            stop: 2.0,
            count: 41,
            fixed: 0.6,
            methods: vec![Method::Ns, Method::GvmClosed, Method::Grwa],
            observable: Observable::MeanPhoton,
            omega: 1.0,
        },
        "4-inset" => SweepSpec {
            axis: Axis::G,
            start: 0.0,
            stop: 0.8,
            count: 41,
            fixed: 1.5,
            methods: vec![Method::Ns, Method::GvmClosed, Method::Grwa],
            observable: Observable::MeanPhoton,
            omega: 1.0,
        },
        other => return Err(RabiError::UnknownFigure(other.to_string())),
    };
    Ok(spec)
}

pub const FIGURE_IDS: &[&str] = &["1a", "1b", "2a", "2b", "3", "4", "4-inset"];

/// Output format for [`emit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

/// 12-significant-digit rendering used by both machine formats.
pub fn format_sig12(value: f64) -> String {
    format!("{value:.11e}")
}

fn round_sig12(value: f64) -> f64 {
    format_sig12(value).parse().expect("rendered f64 parses back")
}

/// Write rows as CSV (fixed header: x, one column per present method,
/// then error columns; 12 significant digits; LF line endings) or as a
/// JSON array of row objects with the same field names. JSON rows also
/// carry the NS convergence metadata.
pub fn emit<W: Write>(rows: &[ComparisonRow], format: EmitFormat, mut dest: W) -> Result<()> {
    if rows.is_empty() {
        return Err(RabiError::EmptyRows);
    }
    match format {
        EmitFormat::Csv => {
            let methods: Vec<Method> = [Method::Ns, Method::GvmClosed, Method::GvmFull, Method::Grwa]
                .into_iter()
                .filter(|&m| rows[0].value(m).is_some())
                .collect();
            let mut header = vec!["x".to_string()];
            header.extend(methods.iter().map(|m| m.column_name().to_string()));
            if rows[0].err_gvm.is_some() {
                header.push("err_gvm".into());
            }
            if rows[0].err_grwa.is_some() {
                header.push("err_grwa".into());
            }
            writeln!(dest, "{}", header.join(","))?;
            for row in rows {
                let mut fields = vec![format_sig12(row.x)];
                for &m in &methods {
                    fields.push(format_sig12(row.value(m).unwrap_or(f64::NAN)));
                }
                if let Some(e) = row.err_gvm {
                    fields.push(format_sig12(e));
                }
                if let Some(e) = row.err_grwa {
                    fields.push(format_sig12(e));
                }
                writeln!(dest, "{}", fields.join(","))?;
            }
        }
        EmitFormat::Json => {
            let rounded: Vec<ComparisonRow> = rows
                .iter()
                .map(|r| ComparisonRow {
                    x: round_sig12(r.x),
                    ns: r.ns.map(round_sig12),
                    gvm_closed: r.gvm_closed.map(round_sig12),
                    gvm_full: r.gvm_full.map(round_sig12),
                    grwa: r.grwa.map(round_sig12),
                    err_gvm: r.err_gvm.map(round_sig12),
                    err_grwa: r.err_grwa.map(round_sig12),
                    ns_converged: r.ns_converged,
                    ns_n_max: r.ns_n_max,
                })
                .collect();
            serde_json::to_writer_pretty(&mut dest, &rounded)
                .map_err(|e| RabiError::Io(e.into()))?;
            writeln!(dest)?;
        }
    }
    Ok(())
}

/// [`emit`] into a file.
pub fn emit_to_path(rows: &[ComparisonRow], format: EmitFormat, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    emit(rows, format, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn small_cutoff() -> TruncationConfig {
        TruncationConfig::with_n_max(40).unwrap()
    }

    #[test]
    fn degenerate_two_point_sweep() {
        let spec = SweepSpec {
            axis: Axis::Omega,
            start: 0.5,
            stop: 1.5,
            count: 2,
            fixed: 0.0,
            methods: vec![Method::Ns],
            observable: Observable::Energy,
            omega: 1.0,
        };
        let rows = run_sweep(&spec, &TruncationConfig::with_n_max(8).unwrap()).unwrap();
        assert_eq!(rows.len(), 2);
        // g = 0: E = (ω − Ω)/2.
        assert_relative_eq!(rows[0].ns.unwrap(), 0.25, epsilon = 1e-10);
        assert_relative_eq!(rows[1].ns.unwrap(), -0.25, epsilon = 1e-10);
        assert!(rows.iter().all(|r| r.ns_converged == Some(true)));
    }

    #[test]
    fn sweep_validation() {
        let mut spec = figure_preset("1a").unwrap();
        spec.count = 1;
        assert!(run_sweep(&spec, &small_cutoff()).is_err());
        let mut spec = figure_preset("1a").unwrap();
        spec.stop = 4.0;
        assert!(run_sweep(&spec, &small_cutoff()).is_err());
    }

    #[test]
    fn preset_shapes() {
        let s = figure_preset("1a").unwrap();
        assert_eq!((s.axis, s.fixed, s.count), (Axis::Omega, 0.2, 41));
        let s = figure_preset("3").unwrap();
        assert!(s.methods.contains(&Method::GvmFull) && !s.methods.contains(&Method::GvmClosed));
        let s = figure_preset("4-inset").unwrap();
        assert_eq!((s.axis, s.fixed), (Axis::G, 1.5));
        assert_eq!(s.observable, Observable::MeanPhoton);
        assert!(figure_preset("5").is_err());
    }

    #[test]
    fn figure_4_closed_column_is_monotone() {
        let rows = run_sweep(&figure_preset("4").unwrap(), &small_cutoff()).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].gvm_closed.unwrap() <= pair[0].gvm_closed.unwrap());
        }
    }

    #[test]
    fn csv_emission_shape_and_roundtrip() {
        let spec = SweepSpec {
            axis: Axis::Omega,
            start: 0.0,
            stop: 1.0,
            count: 2,
            fixed: 0.3,
            methods: vec![Method::Ns, Method::GvmClosed, Method::Grwa],
            observable: Observable::Energy,
            omega: 1.0,
        };
        let rows = run_sweep(&spec, &small_cutoff()).unwrap();
        let mut buf = Vec::new();
        emit(&rows, EmitFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "x,ns,gvm_closed,grwa,err_gvm,err_grwa");
        assert!(text.ends_with('\n'));
        // Re-render each parsed value: identical at 12 significant digits.
        for line in &lines[1..] {
            for field in line.split(',') {
                let value: f64 = field.parse().unwrap();
                assert_eq!(format_sig12(value), *field);
            }
        }
    }

    #[test]
    fn json_emission_roundtrip() {
        let rows = vec![ComparisonRow {
            x: 0.5,
            ns: Some(-0.123456789012345),
            gvm_closed: None,
            gvm_full: Some(-0.12),
            grwa: Some(-0.11),
            err_gvm: Some(0.003456789012345),
            err_grwa: Some(0.013),
            ns_converged: Some(true),
            ns_n_max: Some(60),
        }];
        let mut buf = Vec::new();
        emit(&rows, EmitFormat::Json, &mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let row = &parsed[0];
        assert_eq!(row["ns_n_max"], 60);
        assert!(row.get("gvm_closed").is_none());
        assert_relative_eq!(
            row["ns"].as_f64().unwrap(),
            -0.123456789012,
            epsilon = 1e-12
        );
    }

    #[test]
    fn empty_rows_are_rejected() {
        let mut buf = Vec::new();
        assert!(matches!(
            emit(&[], EmitFormat::Csv, &mut buf),
            Err(RabiError::EmptyRows)
        ));
    }

    #[test]
    fn sweep_output_is_deterministic() {
        let spec = figure_preset("4-inset").unwrap();
        let a = run_sweep(&spec, &small_cutoff()).unwrap();
        let b = run_sweep(&spec, &small_cutoff()).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        emit(&a, EmitFormat::Csv, &mut buf_a).unwrap();
        emit(&b, EmitFormat::Csv, &mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
    }
}

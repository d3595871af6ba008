use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::run::{AggregateRow, ExperimentOutput, ResultRow};
use crate::error::{Error, Result};

pub const RESULTS_FILE: &str = "results.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const TIMINGS_FILE: &str = "timings.csv";

pub const AGGREGATE_HEADER: [&str; 13] = [
    "dataset",
    "method",
    "mode",
    "model",
    "mse_mean",
    "mse_std",
    "mae_mean",
    "mae_std",
    "mape_mean",
    "mape_std",
    "r2_mean",
    "r2_std",
    "p_vs_causal",
];

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("dataset,method,mode,model,seed,mse,mae,mape,r2,n,error\n");
    for r in rows {
        let m = r.metrics.as_ref();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.dataset),
            r.method,
            r.mode,
            r.model,
            r.seed,
            opt(m.map(|m| m.mse)),
            opt(m.map(|m| m.mae)),
            opt(m.map(|m| m.mape)),
            opt(m.and_then(|m| m.r2)),
            m.map(|m| m.n.to_string()).unwrap_or_default(),
            csv_field(r.error.as_deref().unwrap_or("")),
        );
    }
    out
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = AGGREGATE_HEADER.join(",");
    out.push('\n');
    for a in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&a.dataset),
            a.method,
            a.mode,
            a.model,
            num(a.mse_mean),
            num(a.mse_std),
            num(a.mae_mean),
            num(a.mae_std),
            num(a.mape_mean),
            num(a.mape_std),
            opt(a.r2_mean),
            opt(a.r2_std),
            opt(a.p_vs_causal),
        );
    }
    out
}

fn history_csv(h: &crate::models::TrainingHistory) -> String {
    let mut out = String::from("epoch,train_loss,val_loss,test_loss\n");
    for e in 0..h.epochs() {
        let test = h.test_loss.as_ref().map(|t| num(t[e])).unwrap_or_default();
        let _ = writeln!(out, "{e},{},{},{test}", num(h.train_loss[e]), num(h.val_loss[e]));
    }
    out
}

fn spectrum_csv(s: &crate::spectral::Spectrum) -> String {
    let mut out = String::from("frequency,power\n");
    for (f, p) in s.frequencies.iter().zip(&s.power) {
        let _ = writeln!(out, "{},{}", num(*f), num(*p));
    }
    out
}

#[derive(Serialize)]
struct ManifestFile {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    name: &'a str,
    version: &'static str,
    config_hash: String,
    config: super::config::ExperimentConfig,
    rows: usize,
    failures: usize,
    files: Vec<ManifestFile>,
}

/// Write all report files under `out_dir` and return their paths, manifest
/// last. Everything except the opt-in timings file is a pure function of
/// the output.
pub fn emit_reports(output: &ExperimentOutput, out_dir: &Path) -> Result<Vec<PathBuf>> {
    if output.rows.is_empty() {
        return Err(Error::InvalidInput("no result rows to report".into()));
    }
    let mut files: Vec<(String, String)> = vec![
        (RESULTS_FILE.into(), results_csv(&output.rows)),
        (AGGREGATE_FILE.into(), aggregate_csv(&output.aggregates)),
    ];
    for r in &output.rows {
        for (component, h) in &r.histories {
            let suffix = if component.is_empty() { String::new() } else { format!("_{component}") };
            let name = format!("history/{}_{}_{}_seed{}{suffix}.csv", r.method, r.mode, r.model, r.seed);
            files.push((name, history_csv(h)));
        }
    }
    for s in &output.spectra {
        files.push((format!("spectra/{}_{}.csv", s.method, s.label), spectrum_csv(&s.spectrum)));
    }

    let mut written = Vec::with_capacity(files.len() + 2);
    let mut entries = Vec::with_capacity(files.len());
    for (name, body) in &files {
        let path = out_dir.join(name);
        write_file(&path, body)?;
        entries.push(ManifestFile {
            path: name.clone(),
            sha256: hex::encode(Sha256::digest(body.as_bytes())),
        });
        written.push(path);
    }
    if output.config.emit_timings {
        let mut t = String::from("method,mode,model,seed,wall_time_ms\n");
        for r in &output.rows {
            let _ = writeln!(t, "{},{},{},{},{:.3}", r.method, r.mode, r.model, r.seed, r.wall_time_ms);
        }
        let path = out_dir.join(TIMINGS_FILE);
        write_file(&path, &t)?;
        written.push(path);
    }
    let manifest = Manifest {
        name: &output.config.name,
        version: env!("CARGO_PKG_VERSION"),
        config_hash: output.config.hash()?,
        config: output.config.canonical(),
        rows: output.rows.len(),
        failures: output.rows.iter().filter(|r| r.error.is_some()).count(),
        files: entries,
    };
    let mut json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::InvalidInput(e.to_string()))?;
    json.push('\n');
    let path = out_dir.join(MANIFEST_FILE);
    write_file(&path, &json)?;
    written.push(path);
    Ok(written)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ExperimentConfig;
    use crate::models::ModelKind;

    #[test]
    fn empty_rows_rejected() {
        let out = ExperimentOutput {
            config: ExperimentConfig::standard(vec![ModelKind::Persistence]),
            rows: vec![],
            aggregates: vec![],
            spectra: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(emit_reports(&out, dir.path()), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("plain"), "plain");
    }
}

//! Machine-readable outputs: the estimate report JSON, the per-radius CSV
//! ladder, and two-column plot data with a fitted-line sidecar.
//!
//! Every float in a machine file is printed with 17 significant digits
//! (`d.dddddddddddddddde±x`), enough to reproduce the exact bit pattern on
//! parse, so byte-identical files mean identical results. JSON has no
//! notation for IEEE infinity; unbounded values are written as `null`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::Formatter;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::hardy::{HardyEstimate, RadiusLadder};
use crate::walk::MeasureEstimate;

/// Exact header of the ladder CSV.
pub const LADDER_CSV_HEADER: &str =
    "R,omega_hat,omega_raw,stderr,n_success,n_total,n_truncated,eps_rel,seed";

/// serde_json formatter that prints every f64 with 17 significant digits.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize a value as compact JSON with 17-significant-digit floats and a
/// trailing newline. Non-finite floats become `null`.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Write a text file, reporting the path on failure.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io_at(path, e))
}

/// One ladder row; mirrors the CSV columns exactly.
#[derive(Debug, Clone, Serialize)]
pub struct LadderRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub omega_hat: f64,
    pub omega_raw: f64,
    pub stderr: f64,
    pub n_success: u64,
    pub n_total: u64,
    pub n_truncated: u64,
    pub eps_rel: f64,
    pub seed: u64,
}

impl From<&MeasureEstimate> for LadderRow {
    fn from(p: &MeasureEstimate) -> Self {
        LadderRow {
            r: p.r,
            omega_hat: p.value,
            omega_raw: p.value_raw,
            stderr: p.stderr,
            n_success: p.n_success,
            n_total: p.n_total,
            n_truncated: p.n_truncated,
            eps_rel: p.eps_rel,
            seed: p.seed,
        }
    }
}

/// Analytic band attached to a report, with the consistency verdict. The
/// estimate is never clipped to the band; a failed flag is the signal.
#[derive(Debug, Clone, Serialize)]
pub struct BandReport {
    #[serde(with = "crate::serde_util::maybe_infinite")]
    pub lo: f64,
    #[serde(with = "crate::serde_util::maybe_infinite")]
    pub hi: f64,
    pub provenance: Vec<String>,
    /// True when the fit's confidence interval intersects the band.
    pub pass: bool,
}

/// Full estimate report. Field order is the file's key order.
#[derive(Debug, Clone, Serialize)]
pub struct HardyReport {
    pub domain: DomainSpec,
    #[serde(with = "crate::serde_util::complex")]
    pub z0: Complex64,
    pub ladder: RadiusLadder,
    pub points: Vec<LadderRow>,
    pub h_hat: f64,
    /// Two-element [lo, hi]; hi is `null` when the fit diverges.
    #[serde(with = "crate::serde_util::maybe_infinite_vec")]
    pub ci: Vec<f64>,
    pub tail_slope: f64,
    pub divergent_slope: bool,
    pub band: Option<BandReport>,
}

/// Closed intervals intersect, allowing a hair of rounding slack so exact
/// endpoint contact (sector exponents sit on band edges) still counts.
fn intervals_touch(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> bool {
    let scale = [a_lo, a_hi, b_lo, b_hi]
        .into_iter()
        .filter(|v| v.is_finite())
        .fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * scale;
    a_lo <= b_hi + tol && b_lo <= a_hi + tol
}

/// Assemble the report for a completed ladder estimate.
pub fn hardy_report(domain: &DomainSpec, est: &HardyEstimate) -> Result<HardyReport> {
    let first = est.points.first().ok_or(Error::TooFewPoints(0))?;
    let ladder = est.ladder.clone().ok_or_else(|| {
        Error::InvalidParameter("estimate carries no ladder description".into())
    })?;
    let band = est.band.as_ref().map(|b| BandReport {
        lo: b.lo,
        hi: b.hi,
        provenance: b.provenance.clone(),
        pass: intervals_touch(est.ci_lo, est.ci_hi, b.lo, b.hi),
    });
    Ok(HardyReport {
        domain: domain.clone(),
        z0: first.z0,
        ladder,
        points: est.points.iter().map(LadderRow::from).collect(),
        h_hat: est.h_hat,
        ci: vec![est.ci_lo, est.ci_hi],
        tail_slope: est.tail_slope,
        divergent_slope: est.divergent_slope,
        band,
    })
}

/// Render ladder points as CSV (header plus one row per radius).
pub fn ladder_csv(points: &[MeasureEstimate]) -> Result<String> {
    if points.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let mut out = String::with_capacity(64 + 160 * points.len());
    out.push_str(LADDER_CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{:.16e},{}\n",
            p.r, p.value, p.value_raw, p.stderr, p.n_success, p.n_total, p.n_truncated,
            p.eps_rel, p.seed
        ));
    }
    Ok(out)
}

/// Fitted-line parameters accompanying the plot data.
#[derive(Debug, Clone, Serialize)]
pub struct PlotSidecar {
    /// Slope of the fitted line through the TSV points (−h_hat).
    pub slope: f64,
    pub intercept: f64,
    pub divergent_slope: bool,
}

/// Render plot data: one `log R <TAB> log omega_hat` row per point, plus
/// the sidecar JSON describing the fitted line.
pub fn plot_tsv(est: &HardyEstimate) -> Result<(String, String)> {
    if est.points.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    let mut tsv = String::new();
    for p in &est.points {
        tsv.push_str(&format!("{:.16e}\t{:.16e}\n", p.r.ln(), p.value.ln()));
    }
    let sidecar = to_json_string(&PlotSidecar {
        slope: -est.h_hat,
        intercept: est.intercept,
        divergent_slope: est.divergent_slope,
    })?;
    Ok((tsv, sidecar))
}

/// Write the plot TSV at `tsv_path` and the sidecar next to it as
/// `<stem>.fit.json`. Nothing is written when the estimate has no points.
pub fn emit_plotdata(est: &HardyEstimate, tsv_path: &Path) -> Result<PathBuf> {
    let (tsv, sidecar) = plot_tsv(est)?;
    let sidecar_path = tsv_path.with_extension("fit.json");
    write_text(tsv_path, &tsv)?;
    write_text(&sidecar_path, &sidecar)?;
    Ok(sidecar_path)
}

/// Exclusive marker claiming an output directory; the marker file is
/// removed when the lock is dropped. A second concurrent run fails fast
/// instead of interleaving writes.
pub struct DirLock {
    path: PathBuf,
}

impl DirLock {
    pub fn acquire(dir: &Path) -> Result<DirLock> {
        fs::create_dir_all(dir).map_err(|e| Error::io_at(dir, e))?;
        let path = dir.join(".lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(DirLock { path }),
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                Err(Error::OutputLocked(dir.display().to_string()))
            }
            Err(e) => Err(Error::io_at(&path, e)),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::{fit_hardy_exponent, BoundInterval};
    use serde_json::Value;

    fn synth_points(h: f64, n: usize) -> Vec<MeasureEstimate> {
        (0..n)
            .map(|j| {
                let r = 4.0 * 2f64.powi(j as i32);
                let value = r.powf(-h);
                MeasureEstimate {
                    r,
                    z0: Complex64::new(0.0, 1.0),
                    value,
                    value_raw: value,
                    stderr: 1e-4 * value,
                    n_success: (value * 1e5) as u64,
                    n_total: 100_000,
                    n_truncated: 0,
                    eps_rel: 1e-3,
                    seed: 42 ^ j as u64,
                }
            })
            .collect()
    }

    fn synth_estimate(h: f64) -> HardyEstimate {
        let points = synth_points(h, 8);
        let fit = fit_hardy_exponent(&points).unwrap();
        HardyEstimate {
            h_hat: fit.h_hat,
            ci_lo: fit.ci_lo,
            ci_hi: fit.ci_hi,
            slope_stderr: fit.slope_stderr,
            tail_slope: fit.tail_slope,
            divergent_slope: fit.divergent_slope,
            intercept: fit.intercept,
            ladder: Some(RadiusLadder::default()),
            points,
            band: Some(BoundInterval {
                lo: h,
                hi: h,
                provenance: vec!["closed_form".to_string()],
            }),
        }
    }

    #[test]
    fn floats_carry_17_significant_digits() {
        #[derive(Serialize)]
        struct One {
            x: f64,
        }
        let text = to_json_string(&One { x: 0.1 }).unwrap();
        assert!(text.contains("1.0000000000000001e-1"), "got {text}");
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["x"].as_f64().unwrap(), 0.1, "round trip must be exact");
    }

    #[test]
    fn infinities_become_null() {
        assert_eq!(to_json_string(&f64::INFINITY).unwrap(), "null\n");
        let band = BandReport {
            lo: 0.5,
            hi: f64::INFINITY,
            provenance: vec!["simply_connected".to_string()],
            pass: true,
        };
        let text = to_json_string(&band).unwrap();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        assert!(parsed["hi"].is_null(), "got {text}");
        assert_eq!(parsed["lo"].as_f64().unwrap(), 0.5);
    }

    #[test]
    fn report_uses_the_exact_key_set() {
        let est = synth_estimate(2.0);
        let report = hardy_report(&DomainSpec::Sector { alpha: 0.5 }, &est).unwrap();
        let text = to_json_string(&report).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        // Value maps sort keys; compare as sets, then pin the file's own
        // key order on the raw text
        let key_set = |val: &Value| -> Vec<String> {
            let mut k: Vec<String> = val.as_object().unwrap().keys().cloned().collect();
            k.sort();
            k
        };
        let mut expect =
            vec!["domain", "z0", "ladder", "points", "h_hat", "ci", "tail_slope",
                 "divergent_slope", "band"];
        expect.sort_unstable();
        assert_eq!(key_set(&v), expect);
        let mut ladder_expect = vec!["R0", "ratio", "count"];
        ladder_expect.sort_unstable();
        assert_eq!(key_set(&v["ladder"]), ladder_expect);
        let mut row_expect = vec!["R", "omega_hat", "omega_raw", "stderr", "n_success",
                                  "n_total", "n_truncated", "eps_rel", "seed"];
        row_expect.sort_unstable();
        assert_eq!(key_set(&v["points"][0]), row_expect);
        let mut band_expect = vec!["lo", "hi", "provenance", "pass"];
        band_expect.sort_unstable();
        assert_eq!(key_set(&v["band"]), band_expect);
        assert!(text.starts_with(r#"{"domain":"#), "domain leads the file: {text}");
        assert!(text.contains(r#""ladder":{"R0":"#), "ladder keys ordered: {text}");
        assert_eq!(v["ci"].as_array().unwrap().len(), 2);
        assert_eq!(v["z0"].as_array().unwrap().len(), 2);
        assert!((v["h_hat"].as_f64().unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(v["band"]["pass"].as_bool(), Some(true));
    }

    #[test]
    fn band_verdict_reflects_interval_contact() {
        assert!(intervals_touch(1.9, 2.1, 2.0, 2.0));
        assert!(!intervals_touch(1.0, 1.2, 2.0, 2.0));
        assert!(intervals_touch(3.0, f64::INFINITY, 1.0, f64::INFINITY));
        // exact endpoint contact must pass despite rounding
        assert!(intervals_touch(0.5, 0.7500000000000001, 0.75, 1.5));
        let mut est = synth_estimate(2.0);
        est.band = Some(BoundInterval {
            lo: 0.2,
            hi: 0.4,
            provenance: vec!["subset".to_string()],
        });
        let report = hardy_report(&DomainSpec::Sector { alpha: 0.5 }, &est).unwrap();
        assert!(!report.band.unwrap().pass, "estimate far outside the band");
    }

    #[test]
    fn csv_has_exact_header_and_parses_back() {
        let points = synth_points(1.0, 4);
        let text = ladder_csv(&points).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), LADDER_CSV_HEADER);
        assert_eq!(lines.count(), 4);
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row.len(), 9);
        assert_eq!(row[0].parse::<f64>().unwrap(), 4.0);
        assert_eq!(row[1].parse::<f64>().unwrap(), 0.25, "omega at R=4 for h=1");
        assert_eq!(row[4].parse::<u64>().unwrap(), 25_000);
        assert!(ladder_csv(&[]).is_err(), "empty ladder must not emit a file");
    }

    #[test]
    fn plot_data_rows_and_sidecar() {
        let est = synth_estimate(2.0);
        let (tsv, sidecar) = plot_tsv(&est).unwrap();
        assert_eq!(tsv.lines().count(), 8);
        let first: Vec<&str> = tsv.lines().next().unwrap().split('\t').collect();
        assert_eq!(first.len(), 2);
        assert!((first[0].parse::<f64>().unwrap() - 4f64.ln()).abs() < 1e-15);
        let v: Value = serde_json::from_str(&sidecar).unwrap();
        assert!((v["slope"].as_f64().unwrap() + 2.0).abs() < 1e-9);
        assert_eq!(v["divergent_slope"].as_bool(), Some(false));
        assert!(v["intercept"].is_number());

        let empty = HardyEstimate { points: vec![], ..est };
        assert!(plot_tsv(&empty).is_err());
    }

    #[test]
    fn plotdata_files_land_next_to_each_other() {
        let dir = tempfile::tempdir().unwrap();
        let tsv_path = dir.path().join("plot.tsv");
        let sidecar = emit_plotdata(&synth_estimate(1.0), &tsv_path).unwrap();
        assert_eq!(sidecar, dir.path().join("plot.fit.json"));
        assert!(tsv_path.exists() && sidecar.exists());
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("missing").join("report.json");
        let err = write_text(&bad, "x").unwrap_err();
        assert!(err.to_string().contains("report.json"), "error was: {err}");
    }

    #[test]
    fn directory_lock_is_exclusive_and_released() {
        let dir = tempfile::tempdir().unwrap();
        let lock = DirLock::acquire(dir.path()).unwrap();
        let second = DirLock::acquire(dir.path());
        assert!(matches!(second, Err(Error::OutputLocked(_))));
        drop(lock);
        DirLock::acquire(dir.path()).unwrap();
    }
}

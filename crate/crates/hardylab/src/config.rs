//! Run configuration: one flat JSON document selects a command and carries
//! the inputs it needs.
//!
//! Parsing is strict — unknown keys are rejected and error messages name
//! the offending field — and every sampler parameter has a default, so the
//! minimal useful config is just a command plus a domain or map. A parsed
//! config serializes back to a canonical form with the defaults
//! materialized; parsing that form reproduces the config exactly.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::hardy::RadiusLadder;
use crate::hnorm::AnalyticMapSpec;
use crate::walk::WalkConfig;

/// Pipeline selected by a config document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Full ladder run: measures, exponent fit, analytic band.
    EstimateH,
    /// One harmonic-measure estimate at a single radius.
    Measure,
    /// Arc-width exponent for starlike domains.
    Hansen,
    /// Circular symmetrization of a domain into a radial profile.
    Symmetrize,
    /// Integral-mean growth of an analytic test map.
    Hnorm,
    /// Ring modulus bounds for a Beltrami field.
    Modulus,
    /// Built-in cross-check suite.
    Verify,
}

impl Command {
    /// Config key name, as written in JSON.
    pub fn name(&self) -> &'static str {
        match self {
            Command::EstimateH => "estimate-h",
            Command::Measure => "measure",
            Command::Hansen => "hansen",
            Command::Symmetrize => "symmetrize",
            Command::Hnorm => "hnorm",
            Command::Modulus => "modulus",
            Command::Verify => "verify",
        }
    }
}

/// Which machine-readable files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Both,
}

/// Beltrami field selector for the modulus command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    /// μ ≡ 0 (conformal).
    Zero,
    /// 0 above the real axis, κ·z/z̄ below.
    Fold,
    /// Sampled field loaded from `grid_file`.
    Grid,
}

/// One run of the tool: a command plus its inputs. Keys not used by the
/// selected command may be present (a shared config can drive several
/// commands) but unknown keys are rejected outright.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    /// Domain under study (estimate-h, measure, hansen, symmetrize).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    /// Start point override; defaults to the domain's canonical base point.
    #[serde(default, with = "crate::serde_util::complex_opt", skip_serializing_if = "Option::is_none")]
    pub z0: Option<Complex64>,
    /// Sampler parameters; every field defaults.
    #[serde(default)]
    pub walk: WalkConfig,
    /// Sampling radii for estimate-h; defaults to 4·2^j, j = 0..7.
    #[serde(default)]
    pub ladder: RadiusLadder,
    /// Single sampling radius (measure only).
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Analytic test map (hnorm only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<AnalyticMapSpec>,
    /// Mean-order bracket for hnorm; defaults to [0.25, 8] at tolerance 0.05.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_tol: Option<f64>,
    /// Beltrami field selector (modulus only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldKind>,
    /// Fold coefficient, |κ| < 1 (modulus with field = "fold").
    #[serde(default, with = "crate::serde_util::complex_opt", skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Complex64>,
    /// Sampled-field file (modulus with field = "grid"); ring radii come
    /// from the file header.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_file: Option<PathBuf>,
    /// Ring radii for the closed-form fields; default ring is 0.1 < |z| < 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_r: Option<f64>,
    #[serde(rename = "ring_R", default, skip_serializing_if = "Option::is_none")]
    pub ring_big_r: Option<f64>,
    /// Where reports and data files go; created if missing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Which machine files to write.
    #[serde(default)]
    pub format: Format,
}

impl RunConfig {
    /// Minimal config for a command; fill the rest as needed.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            domain: None,
            z0: None,
            walk: WalkConfig::default(),
            ladder: RadiusLadder::default(),
            radius: None,
            map: None,
            p_lo: None,
            p_hi: None,
            p_tol: None,
            field: None,
            kappa: None,
            grid_file: None,
            ring_r: None,
            ring_big_r: None,
            output_dir: None,
            format: Format::default(),
        }
    }

    /// Mean-order bracket with defaults applied: (p_lo, p_hi, tol).
    pub fn hnorm_bracket(&self) -> (f64, f64, f64) {
        (self.p_lo.unwrap_or(0.25), self.p_hi.unwrap_or(8.0), self.p_tol.unwrap_or(0.05))
    }

    /// Ring radii with defaults applied: (r, R).
    pub fn modulus_ring(&self) -> (f64, f64) {
        (self.ring_r.unwrap_or(0.1), self.ring_big_r.unwrap_or(1.0))
    }

    /// Output directory with the default applied.
    pub fn resolved_output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    fn require<T>(&self, value: &Option<T>, key: &str) -> Result<()> {
        if value.is_none() {
            return Err(Error::Config(format!(
                "{key}: required for command '{}'",
                self.command.name()
            )));
        }
        Ok(())
    }

    /// Check that the fields the command needs are present and coherent.
    /// Runs before any computation.
    pub fn validate(&self) -> Result<()> {
        self.walk.validate()?;
        self.ladder.validate()?;
        if let Some(domain) = &self.domain {
            domain.validate()?;
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Config(format!("R: must be a positive radius, got {r}")));
            }
        }
        let (p_lo, p_hi, p_tol) = self.hnorm_bracket();
        if !(p_lo > 0.0 && p_lo < p_hi && p_hi.is_finite()) {
            return Err(Error::Config(format!(
                "p_lo/p_hi: need 0 < p_lo < p_hi, got [{p_lo}, {p_hi}]"
            )));
        }
        if !(p_tol > 0.0 && p_tol.is_finite()) {
            return Err(Error::Config(format!("p_tol: must be positive, got {p_tol}")));
        }
        let (ring_r, ring_big_r) = self.modulus_ring();
        if !(ring_r > 0.0 && ring_r < ring_big_r) {
            return Err(Error::Config(format!(
                "ring_r/ring_R: need 0 < r < R, got [{ring_r}, {ring_big_r}]"
            )));
        }
        match self.command {
            Command::EstimateH | Command::Hansen | Command::Symmetrize => {
                self.require(&self.domain, "domain")?;
            }
            Command::Measure => {
                self.require(&self.domain, "domain")?;
                self.require(&self.radius, "R")?;
            }
            Command::Hnorm => {
                self.require(&self.map, "map")?;
                if let Some(map) = &self.map {
                    map.validate()?;
                }
            }
            Command::Modulus => {
                self.require(&self.field, "field")?;
                match self.field {
                    Some(FieldKind::Fold) => self.require(&self.kappa, "kappa")?,
                    Some(FieldKind::Grid) => self.require(&self.grid_file, "grid_file")?,
                    _ => {}
                }
            }
            Command::Verify => {}
        }
        Ok(())
    }

    /// Canonical JSON form: defaults materialized, optional fields present
    /// only when set. Parsing the canonical form reproduces the config.
    pub fn canonical_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

/// Parse a config document without checking per-command requirements.
/// Used when command-line flags may still fill in missing fields.
pub fn parse_config_lenient(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::Config(inner.to_string())
        } else {
            Error::Config(format!("{path}: {inner}"))
        }
    })
}

/// Parse and validate a config document. Schema violations name the field
/// that failed (JSON-path style, e.g. `domain.alpha`).
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg = parse_config_lenient(text)?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_estimate_config_fills_all_defaults() {
        let cfg =
            parse_config(r#"{"command":"estimate-h","domain":{"type":"sector","alpha":0.5}}"#)
                .unwrap();
        assert_eq!(cfg.command, Command::EstimateH);
        assert_eq!(cfg.domain, Some(DomainSpec::Sector { alpha: 0.5 }));
        assert_eq!(cfg.walk, WalkConfig::default());
        assert_eq!(cfg.walk.n_walkers, 100_000);
        assert_eq!(cfg.walk.eps_rel, 1e-3);
        assert_eq!(cfg.walk.seed, 42);
        assert_eq!(cfg.ladder, RadiusLadder::default());
        assert_eq!((cfg.ladder.r0, cfg.ladder.ratio, cfg.ladder.count), (4.0, 2.0, 8));
        assert_eq!(cfg.format, Format::Both);
        assert_eq!(cfg.z0, None);
    }

    #[test]
    fn missing_domain_is_named_in_the_error() {
        let err = parse_config(r#"{"command":"estimate-h"}"#).unwrap_err();
        assert!(err.to_string().contains("domain"), "error was: {err}");
    }

    #[test]
    fn modulus_fold_config_parses() {
        let cfg = parse_config(
            r#"{"command":"modulus","field":"fold","kappa":[0.3333333333333333,0]}"#,
        )
        .unwrap();
        assert_eq!(cfg.command, Command::Modulus);
        assert_eq!(cfg.field, Some(FieldKind::Fold));
        let kappa = cfg.kappa.unwrap();
        assert!((kappa.re - 1.0 / 3.0).abs() < 1e-15 && kappa.im == 0.0);
        assert_eq!(cfg.modulus_ring(), (0.1, 1.0));
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = parse_config(r#"{"command":"verify","walkers":5}"#).unwrap_err();
        assert!(err.to_string().contains("walkers"), "error was: {err}");
        let err = parse_config(r#"{"command":"verify","walk":{"n_walker":5}}"#).unwrap_err();
        assert!(err.to_string().contains("n_walker"), "error was: {err}");
    }

    #[test]
    fn unknown_domain_type_is_quoted_verbatim() {
        let err =
            parse_config(r#"{"command":"estimate-h","domain":{"type":"blob"}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("blob"), "error was: {msg}");
        assert!(msg.contains("domain"), "error should carry the field path: {msg}");
    }

    #[test]
    fn field_paths_reach_into_nested_values() {
        // tagged enums buffer their content, so the path stops at the field
        // holding the enum; the offending value and its line/column follow
        let err = parse_config(r#"{"command":"estimate-h","domain":{"type":"sector","alpha":"wide"}}"#)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("domain"), "error was: {msg}");
        assert!(msg.contains("wide"), "error was: {msg}");
        // plain struct fields keep the full path
        let err = parse_config(r#"{"command":"verify","walk":{"seed":-3}}"#).unwrap_err();
        assert!(err.to_string().contains("walk.seed"), "error was: {err}");
    }

    #[test]
    fn partial_walk_keeps_other_defaults() {
        let cfg = parse_config(r#"{"command":"verify","walk":{"seed":7}}"#).unwrap();
        assert_eq!(cfg.walk.seed, 7);
        assert_eq!(cfg.walk.n_walkers, 100_000);
        assert_eq!(cfg.walk.max_steps, 10_000);
    }

    #[test]
    fn canonical_form_round_trips() {
        let texts = [
            r#"{"command":"estimate-h","domain":{"type":"spiral","beta":0.785,"alpha":1.0},"z0":[1.0,2.0]}"#,
            r#"{"command":"measure","domain":{"type":"half_plane"},"R":10.0}"#,
            r#"{"command":"hnorm","map":{"type":"cayley"},"p_hi":4.0}"#,
            r#"{"command":"modulus","field":"zero","ring_r":0.2,"ring_R":0.9}"#,
            r#"{"command":"verify","format":"csv"}"#,
        ];
        for text in texts {
            let cfg = parse_config(text).unwrap();
            let canon = cfg.canonical_json().unwrap();
            let back = parse_config(&canon).unwrap();
            assert_eq!(cfg, back, "round trip drifted for {text}");
            assert_eq!(back.canonical_json().unwrap(), canon, "canonical form not idempotent");
        }
    }

    #[test]
    fn per_command_requirements_are_enforced() {
        let err = parse_config(r#"{"command":"measure","domain":{"type":"half_plane"}}"#)
            .unwrap_err();
        assert!(err.to_string().contains('R'), "error was: {err}");
        let err = parse_config(r#"{"command":"modulus","field":"fold"}"#).unwrap_err();
        assert!(err.to_string().contains("kappa"), "error was: {err}");
        let err = parse_config(r#"{"command":"modulus","field":"grid"}"#).unwrap_err();
        assert!(err.to_string().contains("grid_file"), "error was: {err}");
        let err = parse_config(r#"{"command":"hnorm"}"#).unwrap_err();
        assert!(err.to_string().contains("map"), "error was: {err}");
        let err =
            parse_config(r#"{"command":"hnorm","map":{"type":"cayley"},"p_lo":3.0,"p_hi":1.0}"#)
                .unwrap_err();
        assert!(err.to_string().contains("p_lo"), "error was: {err}");
        assert!(parse_config(r#"{"command":"verify"}"#).is_ok());
    }

    #[test]
    fn invalid_walk_values_fail_validation() {
        let err = parse_config(r#"{"command":"verify","walk":{"eps_rel":0.5}}"#).unwrap_err();
        assert!(err.to_string().contains("eps_rel"), "error was: {err}");
        let err = parse_config(r#"{"command":"verify","ladder":{"count":1}}"#).unwrap_err();
        assert!(!err.to_string().is_empty());
    }
}

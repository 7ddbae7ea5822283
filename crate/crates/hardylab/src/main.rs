//! Command-line front end: parses flags and config files, orchestrates the
//! estimators, and writes machine-readable reports.
//!
//! Exit codes: 0 success, 1 usage, 2 configuration, 3 numerical or I/O
//! failure during a run, 4 cross-check failure (`verify`, or a `modulus`
//! run whose integrals leave their analytic band).

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use hardylab::config::{parse_config_lenient, Command, FieldKind, Format, RunConfig};
use hardylab::domain::{symmetrize, symmetrize_about, DomainSpec};
use hardylab::error::{Error, Result};
use hardylab::hardy::{estimate_hardy, hansen_starlike, BoundInterval};
use hardylab::hnorm::{estimate_hf, AnalyticMapSpec};
use hardylab::modulus::{conformal_halfplane_band, modulus_bounds, BeltramiField, GridField};
use hardylab::report::{
    hardy_report, ladder_csv, to_json_string, write_text, DirLock, LadderRow,
};
use hardylab::verify;
use hardylab::walk::estimate_omega;

#[derive(Parser)]
#[command(
    name = "hardylab",
    version,
    about = "Estimate decay exponents of harmonic measure on unbounded plane domains",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit the harmonic-measure decay exponent over a radius ladder
    EstimateH(RunArgs),
    /// Estimate harmonic measure of one circle from one base point
    Measure(RunArgs),
    /// Arc-width exponent for domains starlike about the origin
    Hansen(RunArgs),
    /// Circular symmetrization of a domain into a radial profile
    Symmetrize(RunArgs),
    /// Bracket the critical integral-mean order of an analytic test map
    Hnorm(RunArgs),
    /// Ring modulus bounds for a Beltrami coefficient field
    Modulus(RunArgs),
    /// Run the built-in cross-check suite
    Verify(RunArgs),
}

impl Cmd {
    fn split(&self) -> (Command, &RunArgs) {
        match self {
            Cmd::EstimateH(a) => (Command::EstimateH, a),
            Cmd::Measure(a) => (Command::Measure, a),
            Cmd::Hansen(a) => (Command::Hansen, a),
            Cmd::Symmetrize(a) => (Command::Symmetrize, a),
            Cmd::Hnorm(a) => (Command::Hnorm, a),
            Cmd::Modulus(a) => (Command::Modulus, a),
            Cmd::Verify(a) => (Command::Verify, a),
        }
    }
}

/// Flags mirror config keys one-to-one. A flag set on the command line
/// overrides the config file unless --config-priority is given.
#[derive(Args, Default)]
struct RunArgs {
    /// Config file (JSON); flags override it unless --config-priority
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Let the config file win where both it and a flag set the same key
    #[arg(long)]
    config_priority: bool,
    /// Domain as JSON, e.g. '{"type":"sector","alpha":0.5}'
    #[arg(long, value_name = "JSON")]
    domain: Option<String>,
    /// Base point as [re,im] or a bare real
    #[arg(long, value_name = "JSON")]
    z0: Option<String>,
    /// Walkers per estimate (config key walk.n_walkers)
    #[arg(long, value_name = "N")]
    walkers: Option<u64>,
    /// Relative absorbing-shell width (walk.eps_rel)
    #[arg(long, value_name = "EPS")]
    eps_rel: Option<f64>,
    /// Step budget per walker (walk.max_steps)
    #[arg(long, value_name = "N")]
    max_steps: Option<u64>,
    /// Base RNG seed (walk.seed)
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// First ladder radius (ladder.R0)
    #[arg(long = "r0", value_name = "R")]
    r0: Option<f64>,
    /// Ladder ratio (ladder.ratio)
    #[arg(long, value_name = "Q")]
    ratio: Option<f64>,
    /// Ladder length (ladder.count)
    #[arg(long, value_name = "N")]
    count: Option<usize>,
    /// Sampling radius for measure (config key R)
    #[arg(long = "R", alias = "radius", value_name = "RADIUS")]
    big_r: Option<f64>,
    /// Analytic test map as JSON, e.g. '{"type":"cayley"}'
    #[arg(long, value_name = "JSON")]
    map: Option<String>,
    /// Lower mean-order bracket for hnorm
    #[arg(long, value_name = "P")]
    p_lo: Option<f64>,
    /// Upper mean-order bracket for hnorm
    #[arg(long, value_name = "P")]
    p_hi: Option<f64>,
    /// Bisection tolerance for hnorm
    #[arg(long, value_name = "TOL")]
    p_tol: Option<f64>,
    /// Beltrami field kind: zero, fold, or grid
    #[arg(long, value_name = "KIND")]
    field: Option<String>,
    /// Fold coefficient as [re,im] or a bare real
    #[arg(long, value_name = "JSON")]
    kappa: Option<String>,
    /// Sampled-field file for field=grid
    #[arg(long, value_name = "FILE")]
    grid_file: Option<PathBuf>,
    /// Inner ring radius for modulus
    #[arg(long, value_name = "R")]
    ring_r: Option<f64>,
    /// Outer ring radius for modulus (config key ring_R)
    #[arg(long = "ring-R", value_name = "R")]
    ring_big_r: Option<f64>,
    /// Output directory (config key output_dir)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Which machine files to write: json, csv, or both
    #[arg(long, value_name = "FMT")]
    format: Option<String>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let (command, args) = cli.command.split();

    // configuration phase: anything wrong here is exit 2
    let cfg = match configure_threads().and_then(|()| merged_config(command, args)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            std::process::exit(2);
        }
    };

    match run(&cfg) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    }
}

/// Apply HARDYLAB_THREADS to the global worker pool. Results never depend
/// on the thread count; only wall time does.
fn configure_threads() -> Result<()> {
    let raw = match std::env::var("HARDYLAB_THREADS") {
        Ok(raw) => raw,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(Error::Config(format!("HARDYLAB_THREADS: {e}"))),
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("HARDYLAB_THREADS: not a thread count: {raw:?}")))?;
    if n == 0 {
        return Err(Error::Config("HARDYLAB_THREADS: must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("HARDYLAB_THREADS: {e}")))
}

/// Merge the config file (if any) with command-line flags and validate the
/// result. Flags win conflicts unless --config-priority is set, in which
/// case any key present in the file keeps the file's value.
fn merged_config(command: Command, args: &RunArgs) -> Result<RunConfig> {
    let (mut cfg, file_json) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let raw: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            (parse_config_lenient(&text)?, Some(raw))
        }
        None => (RunConfig::new(command), None),
    };

    let file_has = |key: &str| -> bool {
        let Some(raw) = &file_json else { return false };
        let mut cur = raw;
        for part in key.split('.') {
            match cur.get(part) {
                Some(next) => cur = next,
                None => return false,
            }
        }
        true
    };
    // the subcommand is itself a flag value for the "command" key
    let keep = |key: &str| args.config_priority && file_has(key);
    if !keep("command") {
        cfg.command = command;
    }

    fn overlay<T>(slot: &mut T, flag: Option<T>, locked: bool) {
        if let (Some(v), false) = (flag, locked) {
            *slot = v;
        }
    }

    let domain = args.domain.as_deref().map(parse_domain_flag).transpose()?;
    let z0 = args.z0.as_deref().map(|s| parse_complex_flag("--z0", s)).transpose()?;
    let map = args.map.as_deref().map(parse_map_flag).transpose()?;
    let kappa = args.kappa.as_deref().map(|s| parse_complex_flag("--kappa", s)).transpose()?;
    let field = args.field.as_deref().map(parse_field_flag).transpose()?;
    let format = args.format.as_deref().map(parse_format_flag).transpose()?;

    overlay(&mut cfg.domain, domain.map(Some), keep("domain"));
    overlay(&mut cfg.z0, z0.map(Some), keep("z0"));
    overlay(&mut cfg.walk.n_walkers, args.walkers, keep("walk.n_walkers"));
    overlay(&mut cfg.walk.eps_rel, args.eps_rel, keep("walk.eps_rel"));
    overlay(&mut cfg.walk.max_steps, args.max_steps, keep("walk.max_steps"));
    overlay(&mut cfg.walk.seed, args.seed, keep("walk.seed"));
    overlay(&mut cfg.ladder.r0, args.r0, keep("ladder.R0"));
    overlay(&mut cfg.ladder.ratio, args.ratio, keep("ladder.ratio"));
    overlay(&mut cfg.ladder.count, args.count, keep("ladder.count"));
    overlay(&mut cfg.radius, args.big_r.map(Some), keep("R"));
    overlay(&mut cfg.map, map.map(Some), keep("map"));
    overlay(&mut cfg.p_lo, args.p_lo.map(Some), keep("p_lo"));
    overlay(&mut cfg.p_hi, args.p_hi.map(Some), keep("p_hi"));
    overlay(&mut cfg.p_tol, args.p_tol.map(Some), keep("p_tol"));
    overlay(&mut cfg.field, field.map(Some), keep("field"));
    overlay(&mut cfg.kappa, kappa.map(Some), keep("kappa"));
    overlay(&mut cfg.grid_file, args.grid_file.clone().map(Some), keep("grid_file"));
    overlay(&mut cfg.ring_r, args.ring_r.map(Some), keep("ring_r"));
    overlay(&mut cfg.ring_big_r, args.ring_big_r.map(Some), keep("ring_R"));
    overlay(&mut cfg.output_dir, args.out.clone().map(Some), keep("output_dir"));
    overlay(&mut cfg.format, format, keep("format"));

    cfg.validate()?;
    Ok(cfg)
}

fn parse_domain_flag(s: &str) -> Result<DomainSpec> {
    serde_json::from_str(s).map_err(|e| Error::Config(format!("--domain: {e}")))
}

fn parse_map_flag(s: &str) -> Result<AnalyticMapSpec> {
    serde_json::from_str(s).map_err(|e| Error::Config(format!("--map: {e}")))
}

/// Accepts `[re,im]` or a bare real.
fn parse_complex_flag(flag: &str, s: &str) -> Result<Complex64> {
    if let Ok([re, im]) = serde_json::from_str::<[f64; 2]>(s) {
        return Ok(Complex64::new(re, im));
    }
    match s.trim().parse::<f64>() {
        Ok(re) => Ok(Complex64::new(re, 0.0)),
        Err(_) => Err(Error::Config(format!("{flag}: expected [re,im] or a number, got {s:?}"))),
    }
}

fn parse_field_flag(s: &str) -> Result<FieldKind> {
    match s {
        "zero" => Ok(FieldKind::Zero),
        "fold" => Ok(FieldKind::Fold),
        "grid" => Ok(FieldKind::Grid),
        other => Err(Error::Config(format!("--field: expected zero, fold, or grid, got {other:?}"))),
    }
}

fn parse_format_flag(s: &str) -> Result<Format> {
    match s {
        "json" => Ok(Format::Json),
        "csv" => Ok(Format::Csv),
        "both" => Ok(Format::Both),
        other => Err(Error::Config(format!("--format: expected json, csv, or both, got {other:?}"))),
    }
}

/// Render with 4 significant digits for human-readable summaries.
fn sig4(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (3 - mag).clamp(0, 17) as usize;
    format!("{x:.decimals$}")
}

fn run(cfg: &RunConfig) -> Result<i32> {
    match cfg.command {
        Command::Verify => run_verify(),
        Command::EstimateH => run_estimate(cfg).map(|()| 0),
        Command::Measure => run_measure(cfg).map(|()| 0),
        Command::Hansen => run_hansen(cfg).map(|()| 0),
        Command::Symmetrize => run_symmetrize(cfg).map(|()| 0),
        Command::Hnorm => run_hnorm(cfg).map(|()| 0),
        Command::Modulus => run_modulus(cfg),
    }
}

fn run_verify() -> Result<i32> {
    let outcomes = verify::run_all();
    for o in &outcomes {
        println!("{}", o.summary());
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    if failed == 0 {
        println!("all {} checks passed", outcomes.len());
        Ok(0)
    } else {
        println!("{failed} of {} checks failed", outcomes.len());
        Ok(4)
    }
}

/// Lock the output directory, write the canonical config beside the
/// products, and hold the lock for the rest of the run.
fn open_output(cfg: &RunConfig) -> Result<(PathBuf, DirLock)> {
    let dir = cfg.resolved_output_dir();
    let lock = DirLock::acquire(&dir)?;
    write_text(&dir.join("config.json"), &cfg.canonical_json()?)?;
    Ok((dir, lock))
}

fn wants_json(cfg: &RunConfig) -> bool {
    matches!(cfg.format, Format::Json | Format::Both)
}

fn wants_csv(cfg: &RunConfig) -> bool {
    matches!(cfg.format, Format::Csv | Format::Both)
}

fn domain_and_base(cfg: &RunConfig) -> (&DomainSpec, Complex64) {
    let domain = cfg.domain.as_ref().expect("validated per command");
    (domain, cfg.z0.unwrap_or_else(|| domain.default_base_point()))
}

fn run_estimate(cfg: &RunConfig) -> Result<()> {
    let (domain, z0) = domain_and_base(cfg);
    let (dir, _lock) = open_output(cfg)?;
    let est = estimate_hardy(domain, z0, &cfg.ladder, &cfg.walk)?;
    let report = hardy_report(domain, &est)?;
    if wants_json(cfg) {
        write_text(&dir.join("report.json"), &to_json_string(&report)?)?;
    }
    if wants_csv(cfg) {
        write_text(&dir.join("ladder.csv"), &ladder_csv(&est.points)?)?;
    }
    hardylab::report::emit_plotdata(&est, &dir.join("plotdata.tsv"))?;
    if est.divergent_slope {
        println!(
            "h_hat diverges: measure decays faster than any power (tail slope {})",
            sig4(est.tail_slope)
        );
    } else {
        println!(
            "h_hat = {} (95% CI [{}, {}]), tail slope {}",
            sig4(est.h_hat),
            sig4(est.ci_lo),
            sig4(est.ci_hi),
            sig4(est.tail_slope)
        );
    }
    if let Some(band) = &report.band {
        println!(
            "analytic band [{}, {}] ({}): {}",
            sig4(band.lo),
            sig4(band.hi),
            band.provenance.join(", "),
            if band.pass { "PASS" } else { "FAIL" }
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}

fn run_measure(cfg: &RunConfig) -> Result<()> {
    let (domain, z0) = domain_and_base(cfg);
    let radius = cfg.radius.expect("validated per command");
    let (dir, _lock) = open_output(cfg)?;
    let est = estimate_omega(domain, z0, radius, &cfg.walk)?;
    if wants_json(cfg) {
        write_text(&dir.join("measure.json"), &to_json_string(&LadderRow::from(&est))?)?;
    }
    if wants_csv(cfg) {
        write_text(&dir.join("measure.csv"), &ladder_csv(std::slice::from_ref(&est))?)?;
    }
    println!(
        "omega_hat = {} ± {} at R = {} ({} of {} walkers reached the circle)",
        sig4(est.value),
        sig4(est.stderr),
        sig4(est.r),
        est.n_success,
        est.n_total
    );
    println!("wrote {}", dir.display());
    Ok(())
}

fn run_hansen(cfg: &RunConfig) -> Result<()> {
    let (domain, _) = domain_and_base(cfg);
    let (dir, _lock) = open_output(cfg)?;
    let est = hansen_starlike(domain, &cfg.ladder.radii())?;
    if wants_json(cfg) {
        write_text(&dir.join("hansen.json"), &to_json_string(&est)?)?;
    }
    if wants_csv(cfg) {
        let mut csv = String::from("t,max_arc\n");
        for (t, a) in &est.alphas {
            csv.push_str(&format!("{t:.16e},{a:.16e}\n"));
        }
        write_text(&dir.join("hansen.csv"), &csv)?;
    }
    println!(
        "h = {} (raw {}), extrapolated: {}, divergent: {}",
        sig4(est.h),
        sig4(est.h_raw),
        est.extrapolated,
        est.divergent
    );
    println!("wrote {}", dir.display());
    Ok(())
}

fn run_symmetrize(cfg: &RunConfig) -> Result<()> {
    let domain = cfg.domain.as_ref().expect("validated per command");
    let (dir, _lock) = open_output(cfg)?;
    // profile grid: four points per ladder octave, extended one octave
    // inward so the profile is sampled below the first sampling circle
    let radii = cfg.ladder.radii();
    let lo = radii[0] / cfg.ladder.ratio;
    let hi = *radii.last().unwrap();
    let steps = 4 * (cfg.ladder.count + 1);
    let grid: Vec<f64> = (0..=steps)
        .map(|k| lo * (hi / lo).powf(k as f64 / steps as f64))
        .collect();
    let profile = match cfg.z0 {
        Some(z0) => symmetrize_about(domain, z0, &grid)?,
        None => symmetrize(domain, &grid)?,
    };
    write_text(&dir.join("symmetrized.json"), &to_json_string(&profile)?)?;
    if wants_csv(cfg) {
        if let DomainSpec::RadialProfile { r, half_width } = &profile {
            let mut csv = String::from("r,half_width\n");
            for (r, w) in r.iter().zip(half_width) {
                csv.push_str(&format!("{r:.16e},{w:.16e}\n"));
            }
            write_text(&dir.join("profile.csv"), &csv)?;
        }
    }
    println!("symmetrized into a {}-point radial profile", grid.len());
    println!("wrote {}", dir.display());
    Ok(())
}

/// JSON verdict for an hnorm run.
#[derive(Serialize)]
struct HnormVerdict<'a> {
    map: &'a AnalyticMapSpec,
    h_f: f64,
    bracket: [f64; 2],
    tol: f64,
    infinite: bool,
}

fn run_hnorm(cfg: &RunConfig) -> Result<()> {
    let map = cfg.map.as_ref().expect("validated per command");
    let (p_lo, p_hi, tol) = cfg.hnorm_bracket();
    let (dir, _lock) = open_output(cfg)?;
    let est = estimate_hf(map, p_lo, p_hi, tol)?;
    if wants_json(cfg) {
        let verdict = HnormVerdict {
            map,
            h_f: est.p_crit,
            bracket: [p_lo, p_hi],
            tol,
            infinite: est.infinite,
        };
        write_text(&dir.join("hnorm.json"), &to_json_string(&verdict)?)?;
    }
    if wants_csv(cfg) {
        let mut csv = String::from("p,r,M_p,slope\n");
        for fit in &est.fits {
            for (r, m) in fit.r_grid.iter().zip(&fit.means) {
                csv.push_str(&format!("{:.16e},{r:.16e},{m:.16e},{:.16e}\n", fit.p, fit.slope));
            }
        }
        write_text(&dir.join("hnorm.csv"), &csv)?;
    }
    if est.infinite {
        println!(
            "means stay bounded through p = {}; h(f) is at or beyond the bracket",
            sig4(est.p_crit)
        );
    } else {
        println!("h(f) bracketed at {} ({} orders probed)", sig4(est.p_crit), est.probes.len());
    }
    println!("wrote {}", dir.display());
    Ok(())
}

/// JSON report for a modulus run.
#[derive(Serialize)]
struct ModulusReport {
    field: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    kappa: Option<[f64; 2]>,
    #[serde(rename = "I")]
    i: f64,
    #[serde(rename = "J")]
    j: f64,
    band: BoundInterval,
    pass: bool,
}

fn run_modulus(cfg: &RunConfig) -> Result<i32> {
    let kind = cfg.field.expect("validated per command");
    let (ring_r, ring_big_r) = cfg.modulus_ring();
    let (dir, _lock) = open_output(cfg)?;

    let (field, r, big_r, n_theta, n_t) = match kind {
        FieldKind::Zero => (BeltramiField::Zero, ring_r, ring_big_r, 512, 256),
        FieldKind::Fold => {
            let kappa = cfg.kappa.expect("validated per command");
            (BeltramiField::Fold { kappa }, ring_r, ring_big_r, 512, 256)
        }
        FieldKind::Grid => {
            let path = cfg.grid_file.as_ref().expect("validated per command");
            let grid = GridField::read_from(path)?;
            let (r, big_r) = (grid.r, grid.big_r);
            let n_theta = grid.n_theta.next_power_of_two().max(512);
            let n_t = grid.n_t.next_power_of_two().max(256);
            (BeltramiField::Grid(grid), r, big_r, n_theta, n_t)
        }
    };

    let bounds = modulus_bounds(&field, r, big_r, n_theta, n_t)?;
    let band = band_for(&field, r, big_r)?;
    let tol = 1e-9 * band.hi.max(1.0);
    let pass = bounds.i >= band.lo - tol
        && bounds.i <= band.hi + tol
        && bounds.j >= band.lo - tol
        && bounds.j <= band.hi + tol
        && bounds.i <= bounds.j + tol;

    let (name, kappa) = match &field {
        BeltramiField::Zero => ("zero", None),
        BeltramiField::Fold { kappa } => ("fold", Some([kappa.re, kappa.im])),
        BeltramiField::Grid(_) => ("grid", None),
    };
    if wants_json(cfg) {
        let report =
            ModulusReport { field: name, kappa, i: bounds.i, j: bounds.j, band: band.clone(), pass };
        write_text(&dir.join("modulus.json"), &to_json_string(&report)?)?;
    }
    println!(
        "I = {}, J = {}, band [{}, {}] ({}): {}",
        sig4(bounds.i),
        sig4(bounds.j),
        sig4(band.lo),
        sig4(band.hi),
        band.provenance.join(", "),
        if pass { "PASS" } else { "FAIL" }
    );
    println!("wrote {}", dir.display());
    Ok(if pass { 0 } else { 4 })
}

/// Band the integrals must respect: the sharp half-plane-conformal band
/// for the built-in fields, the plain dilatation band K = (1+k)/(1−k) for
/// sampled fields (which need not be conformal anywhere).
fn band_for(field: &BeltramiField, r: f64, big_r: f64) -> Result<BoundInterval> {
    match field {
        BeltramiField::Zero => conformal_halfplane_band(1.0, r, big_r),
        BeltramiField::Fold { kappa } => {
            let k = kappa.norm();
            conformal_halfplane_band((1.0 + k) / (1.0 - k), r, big_r)
        }
        BeltramiField::Grid(grid) => {
            let k = grid.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let big_k = (1.0 + k) / (1.0 - k);
            let length = (big_r / r).ln();
            Ok(BoundInterval {
                lo: length / big_k,
                hi: length * big_k,
                provenance: vec!["dilatation_band".to_string()],
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flag_args() -> RunArgs {
        RunArgs {
            domain: Some(r#"{"type":"sector","alpha":0.5}"#.into()),
            walkers: Some(2_000),
            seed: Some(7),
            out: Some(PathBuf::from("elsewhere")),
            ..RunArgs::default()
        }
    }

    #[test]
    fn flags_alone_build_a_config() {
        let cfg = merged_config(Command::EstimateH, &flag_args()).unwrap();
        assert_eq!(cfg.command, Command::EstimateH);
        assert_eq!(cfg.domain, Some(DomainSpec::Sector { alpha: 0.5 }));
        assert_eq!(cfg.walk.n_walkers, 2_000);
        assert_eq!(cfg.walk.seed, 7);
        assert_eq!(cfg.walk.eps_rel, 1e-3, "untouched keys keep defaults");
        assert_eq!(cfg.output_dir, Some(PathBuf::from("elsewhere")));
    }

    #[test]
    fn flags_override_the_file_by_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(
            &path,
            r#"{"command":"estimate-h","domain":{"type":"half_plane"},"walk":{"seed":1,"n_walkers":500}}"#,
        )
        .unwrap();
        let mut args = flag_args();
        args.config = Some(path);
        let cfg = merged_config(Command::EstimateH, &args).unwrap();
        assert_eq!(cfg.domain, Some(DomainSpec::Sector { alpha: 0.5 }), "flag wins");
        assert_eq!(cfg.walk.seed, 7, "flag wins");
        assert_eq!(cfg.walk.n_walkers, 2_000, "flag wins");
    }

    #[test]
    fn config_priority_lets_the_file_win_existing_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(
            &path,
            r#"{"command":"estimate-h","domain":{"type":"half_plane"},"walk":{"seed":1}}"#,
        )
        .unwrap();
        let mut args = flag_args();
        args.config = Some(path);
        args.config_priority = true;
        let cfg = merged_config(Command::EstimateH, &args).unwrap();
        assert_eq!(cfg.domain, Some(DomainSpec::HalfPlane), "file wins the conflict");
        assert_eq!(cfg.walk.seed, 1, "file wins the conflict");
        assert_eq!(cfg.walk.n_walkers, 2_000, "keys absent from the file still take flags");
        assert_eq!(cfg.output_dir, Some(PathBuf::from("elsewhere")));
    }

    #[test]
    fn merged_config_still_validates() {
        let args = RunArgs::default();
        let err = merged_config(Command::EstimateH, &args).unwrap_err();
        assert!(err.to_string().contains("domain"), "error was: {err}");
    }

    #[test]
    fn flag_parsers_reject_garbage() {
        assert!(parse_domain_flag("{\"type\":\"blob\"}").is_err());
        assert!(parse_complex_flag("--z0", "[1.0]").is_err());
        assert_eq!(parse_complex_flag("--z0", "2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex_flag("--z0", "[1,2]").unwrap(), Complex64::new(1.0, 2.0));
        assert!(parse_field_flag("spiral").is_err());
        assert!(parse_format_flag("yaml").is_err());
    }

    #[test]
    fn four_significant_digits() {
        assert_eq!(sig4(2.00111), "2.001");
        assert_eq!(sig4(0.126902), "0.1269");
        assert_eq!(sig4(512.0), "512.0");
        assert_eq!(sig4(-0.0034567), "-0.003457");
        assert_eq!(sig4(f64::INFINITY), "inf");
        assert_eq!(sig4(0.0), "0");
    }

    #[test]
    fn command_line_shape_is_sound() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

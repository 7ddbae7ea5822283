//! Built-in cross-check suite.
//!
//! Every closed form, analytic band, and integral identity the library
//! claims is exercised here: exact identities at machine precision,
//! Monte Carlo consistency at reduced sample sizes with statistically
//! justified gates. All sampling is seeded, so the suite is deterministic:
//! once green, it stays green until the numerics change.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::{symmetrize, DomainSpec};
use crate::error::Result;
use crate::hardy::{
    closed_form_h, domain_band, estimate_hardy, hansen_starlike, quasidisk_band, HardyEstimate,
    RadiusLadder,
};
use crate::hnorm::{estimate_hf, AnalyticMapSpec};
use crate::modulus::{conformal_halfplane_band, modulus_bounds, BeltramiField};
use crate::walk::{estimate_omega, WalkConfig};

/// One suite entry: what was checked, whether it held, and the numbers
/// behind the verdict.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    /// One-line rendering: `PASS name — detail`.
    pub fn summary(&self) -> String {
        format!("{} {} — {}", if self.pass { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

pub fn all_passed(outcomes: &[CheckOutcome]) -> bool {
    outcomes.iter().all(|c| c.pass)
}

/// Run a fallible check; an error is a failed check, not a crash.
fn guarded(
    name: &'static str,
    f: impl FnOnce() -> Result<(bool, String)>,
) -> CheckOutcome {
    match f() {
        Ok((pass, detail)) => CheckOutcome { name, pass, detail },
        Err(e) => CheckOutcome { name, pass: false, detail: format!("error: {e}") },
    }
}

/// Sampler settings for the suite: a fifth of the default walker budget
/// and a shorter ladder keep the whole suite fast while the gates stay
/// statistically sound.
fn suite_walk(seed: u64) -> WalkConfig {
    WalkConfig { n_walkers: 20_000, seed, ..WalkConfig::default() }
}

fn suite_ladder() -> RadiusLadder {
    RadiusLadder { r0: 4.0, ratio: 2.0, count: 6 }
}

fn mc(domain: &DomainSpec, seed: u64) -> Result<HardyEstimate> {
    let z0 = domain.default_base_point();
    estimate_hardy(domain, z0, &suite_ladder(), &suite_walk(seed))
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Execute the full suite in a fixed order.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        closed_form_sector(),
        closed_form_spiral(),
        closed_form_halfplane(),
        disk_complement_zero(),
        measure_oracle_halfplane(),
        sector_mc(),
        halfplane_mc(),
        strip_divergence(),
        symmetrization_inequality(),
        quasidisk_band_algebra(),
        hansen_sector_exact(),
        hansen_mc_agreement(),
        modulus_conformal_identity(),
        modulus_fold_values(),
        modulus_fold_band(),
        hnorm_halfplane_map(),
        hnorm_sector_map(),
    ]
}

fn closed_form_sector() -> CheckOutcome {
    guarded("sector closed form", || {
        let narrow = closed_form_h(&DomainSpec::Sector { alpha: 0.5 }).unwrap();
        let wide = closed_form_h(&DomainSpec::Sector { alpha: 2.0 }).unwrap();
        Ok((narrow == 2.0 && wide == 0.5, format!("h(opening π/2) = {narrow}, h(slit plane) = {wide}")))
    })
}

fn closed_form_spiral() -> CheckOutcome {
    guarded("spiral closed form", || {
        let h = closed_form_h(&DomainSpec::Spiral { beta: PI / 4.0, alpha: 1.0 }).unwrap();
        Ok(((h - 2.0).abs() < 1e-12, format!("h(twist π/4) = {h}, expected 2")))
    })
}

fn closed_form_halfplane() -> CheckOutcome {
    guarded("half-plane closed form", || {
        let h = closed_form_h(&DomainSpec::HalfPlane).unwrap();
        Ok((h == 1.0, format!("h = {h}, expected 1")))
    })
}

fn disk_complement_zero() -> CheckOutcome {
    guarded("disk complement has exponent zero", || {
        let domain = DomainSpec::DiskComplement { radius: 1.0 };
        let h = closed_form_h(&domain).unwrap();
        let band = domain_band(&domain)?.unwrap();
        Ok((
            h == 0.0 && band.lo == 0.0 && band.hi == 0.0,
            format!("h = {h}, band = [{}, {}]", band.lo, band.hi),
        ))
    })
}

fn measure_oracle_halfplane() -> CheckOutcome {
    guarded("harmonic measure against the conformal oracle", || {
        // exact arc measure for the half plane seen from i at radius 10
        let oracle = 0.12690206972221427;
        let est = estimate_omega(&DomainSpec::HalfPlane, c(0.0, 1.0), 10.0, &suite_walk(42))?;
        let gap = (est.value - oracle).abs();
        let gate = 3.0 * est.stderr + 2e-3;
        Ok((gap < gate, format!("estimate {:.4} vs oracle {:.4} (|Δ| = {:.2e}, gate {:.2e})", est.value, oracle, gap, gate)))
    })
}

fn sector_mc() -> CheckOutcome {
    guarded("sector Monte Carlo matches 1/α", || {
        let est = mc(&DomainSpec::Sector { alpha: 0.5 }, 42)?;
        Ok(((est.h_hat - 2.0).abs() < 0.2, format!("h_hat = {:.3} ± {:.3}, expected 2", est.h_hat, est.slope_stderr)))
    })
}

fn halfplane_mc() -> CheckOutcome {
    guarded("half-plane Monte Carlo matches 1", || {
        let est = mc(&DomainSpec::HalfPlane, 42)?;
        Ok(((est.h_hat - 1.0).abs() < 0.1, format!("h_hat = {:.3} ± {:.3}, expected 1", est.h_hat, est.slope_stderr)))
    })
}

fn strip_divergence() -> CheckOutcome {
    guarded("strip decay outruns every power law", || {
        let est = mc(&DomainSpec::Strip { width: PI }, 42)?;
        Ok((
            est.divergent_slope && est.tail_slope > 3.0,
            format!("divergent = {}, tail slope = {:.2}", est.divergent_slope, est.tail_slope),
        ))
    })
}

fn symmetrization_inequality() -> CheckOutcome {
    guarded("symmetrization cannot raise the exponent", || {
        let spiral = DomainSpec::Spiral { beta: PI / 4.0, alpha: 1.0 };
        let grid: Vec<f64> = (0..13).map(|k| 0.25 * 2f64.powi(k)).collect();
        let profile = symmetrize(&spiral, &grid)?;
        let est_spiral = mc(&spiral, 42)?;
        let est_profile = mc(&profile, 43)?;
        let combined = (est_spiral.slope_stderr.powi(2) + est_profile.slope_stderr.powi(2)).sqrt();
        let ordered = est_spiral.h_hat >= est_profile.h_hat - 2.0 * combined;
        let sector_like = (est_profile.h_hat - 1.0).abs() < 0.15;
        Ok((
            ordered && sector_like,
            format!(
                "h(domain) = {:.3} vs h(symmetrized) = {:.3} (combined σ = {:.3})",
                est_spiral.h_hat, est_profile.h_hat, combined
            ),
        ))
    })
}

fn quasidisk_band_algebra() -> CheckOutcome {
    guarded("fold images sit on the distortion band edges", || {
        let mut worst: f64 = 0.0;
        for big_k in [1.5, 2.0, 3.0, 5.0] {
            let band = quasidisk_band(big_k)?;
            let kappa = (big_k - 1.0) / (big_k + 1.0);
            // folding down: sector of opening π(1+κ), exponent = band floor
            let low = closed_form_h(&DomainSpec::Sector { alpha: 1.0 + kappa }).unwrap();
            // folding up: opening π(1−κ), exponent = band ceiling
            let high = closed_form_h(&DomainSpec::Sector { alpha: 1.0 - kappa }).unwrap();
            worst = worst.max((low - band.lo).abs()).max((high - band.hi).abs());
        }
        Ok((worst < 1e-12, format!("max endpoint mismatch {worst:.2e} over K ∈ {{1.5, 2, 3, 5}}")))
    })
}

fn hansen_sector_exact() -> CheckOutcome {
    guarded("arc-width formula is exact on sectors", || {
        let est = hansen_starlike(&DomainSpec::Sector { alpha: 0.5 }, &[1.0, 2.0, 4.0, 8.0])?;
        Ok(((est.h - 2.0).abs() < 1e-9, format!("h = {} (widths constant at π/2)", est.h)))
    })
}

fn hansen_mc_agreement() -> CheckOutcome {
    guarded("arc-width and Monte Carlo agree on a starlike profile", || {
        let profile = DomainSpec::RadialProfile { r: vec![1.0], half_width: vec![PI / 4.0] };
        let hansen = hansen_starlike(&profile, &[1.0, 2.0, 4.0, 8.0, 16.0])?;
        let est = mc(&profile, 42)?;
        let gap = (hansen.h - est.h_hat).abs();
        let gate = 2.0 * est.slope_stderr;
        Ok((gap <= gate, format!("arc-width {:.3} vs sampled {:.3} ± {:.3}", hansen.h, est.h_hat, est.slope_stderr)))
    })
}

fn modulus_conformal_identity() -> CheckOutcome {
    guarded("conformal field collapses both ring integrals", || {
        let b = modulus_bounds(&BeltramiField::Zero, 0.1, 1.0, 512, 256)?;
        let exact = 10f64.ln();
        let gap = (b.i - exact).abs().max((b.j - exact).abs());
        Ok((gap < 1e-9, format!("I = J = log 10 to {gap:.2e}")))
    })
}

fn modulus_fold_values() -> CheckOutcome {
    guarded("fold field integrals match the closed form", || {
        let b = modulus_bounds(&BeltramiField::Fold { kappa: c(1.0 / 3.0, 0.0) }, 0.1, 1.0, 512, 256)?;
        let exact = 4.0 / 3.0 * 10f64.ln();
        let gap = (b.i - exact).abs().max((b.j - exact).abs());
        Ok((gap < 1e-4, format!("I, J = (4/3)·log 10 to {gap:.2e}")))
    })
}

fn modulus_fold_band() -> CheckOutcome {
    guarded("fold integrals stay inside the conformal-above band", || {
        let mut detail = String::new();
        let mut pass = true;
        for kappa in [0.2, 0.5, 0.8] {
            let b = modulus_bounds(&BeltramiField::Fold { kappa: c(kappa, 0.0) }, 0.1, 1.0, 512, 256)?;
            let big_k = (1.0 + kappa) / (1.0 - kappa);
            let band = conformal_halfplane_band(big_k, 0.1, 1.0)?;
            let tol = 1e-9 * band.hi;
            let inside = b.i >= band.lo - tol
                && b.i <= band.hi + tol
                && b.j >= band.lo - tol
                && b.j <= band.hi + tol
                && b.i <= b.j + tol;
            pass &= inside;
            detail.push_str(&format!("κ={kappa}: I={:.4}, J={:.4} in [{:.4}, {:.4}]; ", b.i, b.j, band.lo, band.hi));
        }
        detail.pop();
        detail.pop();
        Ok((pass, detail))
    })
}

fn hnorm_halfplane_map() -> CheckOutcome {
    guarded("integral means bracket the half-plane map at 1", || {
        let est = estimate_hf(&AnalyticMapSpec::Cayley, 0.25, 4.0, 0.05)?;
        let closed = closed_form_h(&DomainSpec::HalfPlane).unwrap();
        let pass = est.p_crit > 0.95 && est.p_crit < 1.05 && (est.p_crit - closed).abs() <= 0.1;
        Ok((pass, format!("bracketed at {:.3}, domain value {closed}", est.p_crit)))
    })
}

fn hnorm_sector_map() -> CheckOutcome {
    guarded("integral means bracket the squared map at 1/2", || {
        let squared = AnalyticMapSpec::PowerOfCayley { lambda: c(2.0, 0.0) };
        let est = estimate_hf(&squared, 0.1, 2.0, 0.05)?;
        let closed = closed_form_h(&DomainSpec::Sector { alpha: 2.0 }).unwrap();
        let pass = est.p_crit > 0.45 && est.p_crit < 0.55 && (est.p_crit - closed).abs() <= 0.1;
        Ok((pass, format!("bracketed at {:.3}, domain value {closed}", est.p_crit)))
    })
}

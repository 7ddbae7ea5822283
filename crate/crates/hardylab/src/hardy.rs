//! Hardy-exponent estimation from harmonic-measure decay, plus every
//! analytic cross-check the catalogue admits: closed forms, convexity and
//! simple-connectivity bounds, quasidisk dilatation bands, domain
//! monotonicity, and the starlike arc-width method.
//!
//! The estimator rests on the decay law ω(R) ≍ R^{-h}: the harmonic measure
//! of the circle |z| = R seen from a fixed base point falls off with the
//! domain's Hardy exponent as the rate. A weighted log-log fit over a
//! geometric ladder of radii recovers h; super-polynomial decay (domains
//! thinner than any sector) is flagged instead of fitted.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::walk::{estimate_omega, MeasureEstimate, WalkConfig};

const PI: f64 = std::f64::consts::PI;

/// Geometric ladder of sampling radii r0 · ratio^j. Every field has a serde
/// default so partial configs fill in the standard values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusLadder {
    #[serde(rename = "R0", default = "default_r0")]
    pub r0: f64,
    #[serde(default = "default_ratio")]
    pub ratio: f64,
    #[serde(default = "default_count")]
    pub count: usize,
}

fn default_r0() -> f64 {
    4.0
}
fn default_ratio() -> f64 {
    2.0
}
fn default_count() -> usize {
    8
}

impl Default for RadiusLadder {
    fn default() -> Self {
        RadiusLadder { r0: default_r0(), ratio: default_ratio(), count: default_count() }
    }
}

impl RadiusLadder {
    pub fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(Error::InvalidParameter(format!("ladder base must be positive, got {}", self.r0)));
        }
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ladder ratio must exceed 1, got {}",
                self.ratio
            )));
        }
        if self.count < 3 {
            return Err(Error::TooFewPoints(self.count));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.r0 * self.ratio.powi(j as i32)).collect()
    }
}

/// Interval bound on a Hardy exponent with the list of rules that produced
/// it (each rule narrowed the interval).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    #[serde(with = "crate::serde_util::maybe_infinite")]
    pub lo: f64,
    #[serde(with = "crate::serde_util::maybe_infinite")]
    pub hi: f64,
    pub provenance: Vec<String>,
}

impl BoundInterval {
    pub(crate) fn new(lo: f64, hi: f64, rule: &str) -> Self {
        BoundInterval { lo, hi, provenance: vec![rule.to_string()] }
    }

    pub fn contains(&self, h: f64) -> bool {
        h >= self.lo && h <= self.hi
    }
}

/// Result of the log-log decay fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    /// Estimated Hardy exponent, −slope of log ω against log R.
    pub h_hat: f64,
    /// Intercept of the fitted line (log ω at log R = 0).
    pub intercept: f64,
    /// Standard error of the slope under the per-point binomial variances.
    pub slope_stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Decay exponent over the last three retained rungs.
    pub tail_slope: f64,
    /// Set when the decay outruns every power law the ladder can resolve.
    pub divergent_slope: bool,
    /// Rungs actually used after dropping uninformative trailing zeros.
    pub n_kept: usize,
}

/// Full estimate: the fit plus the raw points and the analytic band the
/// domain supports.
#[derive(Debug, Clone)]
pub struct HardyEstimate {
    pub h_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub slope_stderr: f64,
    pub tail_slope: f64,
    pub divergent_slope: bool,
    pub intercept: f64,
    pub ladder: Option<RadiusLadder>,
    pub points: Vec<MeasureEstimate>,
    pub band: Option<BoundInterval>,
}

/// Weighted least squares for y = a + b·x. Returns (slope, intercept,
/// slope standard error) under the supplied inverse variances.
fn wls_line(xs: &[f64], ys: &[f64], ws: &[f64]) -> Result<(f64, f64, f64)> {
    let sw: f64 = ws.iter().sum();
    let xbar = xs.iter().zip(ws).map(|(x, w)| x * w).sum::<f64>() / sw;
    let ybar = ys.iter().zip(ws).map(|(y, w)| y * w).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((x, y), w) in xs.iter().zip(ys).zip(ws) {
        sxx += w * (x - xbar) * (x - xbar);
        sxy += w * (x - xbar) * (y - ybar);
    }
    if !(sxx > 0.0) {
        return Err(Error::InvalidParameter("fit needs at least two distinct radii".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, ybar - slope * xbar, (1.0 / sxx).sqrt()))
}

/// Inverse variance of log ω̂ by the delta method, using the shrunken value
/// so it stays finite at zero successes.
fn log_weight(p: &MeasureEstimate) -> f64 {
    let v = p.value;
    let var = ((1.0 - v) / (v * p.n_total as f64)).max(1e-30);
    1.0 / var
}

/// Fit the decay exponent of a ladder of measure estimates.
///
/// Trailing rungs with zero successes beyond the first carry no slope
/// information (the shrunken values are all equal) and are dropped. The
/// estimate is declared divergent — decay faster than any power law — when
/// either the tail steepens significantly past the global fit, or at least
/// three trailing rungs saw no walker at all while an earlier rung still
/// had hundreds of successes. In that case `h_hat` is the tail exponent and
/// the confidence interval is open above.
pub fn fit_hardy_exponent(points: &[MeasureEstimate]) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let mut sorted: Vec<&MeasureEstimate> = points.iter().collect();
    sorted.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
    if sorted.windows(2).any(|w| w[0].r >= w[1].r) {
        return Err(Error::InvalidParameter("ladder radii must be distinct".into()));
    }
    if sorted.iter().all(|p| p.n_success == 0) {
        return Err(Error::AllZeroSuccesses);
    }
    let zero_run = sorted.iter().rev().take_while(|p| p.n_success == 0).count();
    let kept = &sorted[..sorted.len() - zero_run.saturating_sub(1)];
    if kept.len() < 3 {
        return Err(Error::TooFewPoints(kept.len()));
    }

    let xs: Vec<f64> = kept.iter().map(|p| p.r.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.value.ln()).collect();
    let ws: Vec<f64> = kept.iter().map(|p| log_weight(p)).collect();
    let (slope, intercept, se) = wls_line(&xs, &ys, &ws)?;
    let h_glob = -slope;

    let t = kept.len() - 3;
    let (tail_raw, _, tail_se) = wls_line(&xs[t..], &ys[t..], &ws[t..])?;
    let tail_h = -tail_raw;

    let steepening = tail_h.is_finite() && tail_h > 1.5 * h_glob + 2.0 * tail_se;
    let saturated = zero_run >= 3 && kept.iter().any(|p| p.n_success >= 100);
    let divergent = steepening || saturated;

    Ok(if divergent {
        ExponentFit {
            h_hat: tail_h,
            intercept,
            slope_stderr: tail_se,
            ci_lo: tail_h - 2.0 * tail_se,
            ci_hi: f64::INFINITY,
            tail_slope: tail_h,
            divergent_slope: true,
            n_kept: kept.len(),
        }
    } else {
        ExponentFit {
            h_hat: h_glob,
            intercept,
            slope_stderr: se,
            ci_lo: h_glob - 2.0 * se,
            ci_hi: h_glob + 2.0 * se,
            tail_slope: tail_h,
            divergent_slope: false,
            n_kept: kept.len(),
        }
    })
}

/// Run the sampler over a radius ladder and fit the exponent. Each rung
/// mixes its index into the seed so rungs draw independent walker sets.
pub fn estimate_hardy(
    domain: &DomainSpec,
    z0: Complex64,
    ladder: &RadiusLadder,
    cfg: &WalkConfig,
) -> Result<HardyEstimate> {
    ladder.validate()?;
    let mut points = Vec::with_capacity(ladder.count);
    for (j, r) in ladder.radii().into_iter().enumerate() {
        let rung_cfg = WalkConfig { seed: cfg.seed ^ j as u64, ..*cfg };
        points.push(estimate_omega(domain, z0, r, &rung_cfg)?);
    }
    let fit = fit_hardy_exponent(&points)?;
    Ok(HardyEstimate {
        h_hat: fit.h_hat,
        ci_lo: fit.ci_lo,
        ci_hi: fit.ci_hi,
        slope_stderr: fit.slope_stderr,
        tail_slope: fit.tail_slope,
        divergent_slope: fit.divergent_slope,
        intercept: fit.intercept,
        ladder: Some(ladder.clone()),
        points,
        band: domain_band(domain)?,
    })
}

/// Exact Hardy exponent where the catalogue has one.
///
/// Rigid motions never change the exponent, so wrappers delegate.
pub fn closed_form_h(domain: &DomainSpec) -> Option<f64> {
    match domain {
        DomainSpec::Sector { alpha } => Some(1.0 / alpha),
        DomainSpec::Spiral { beta, alpha } => Some(1.0 / (alpha * beta.cos().powi(2))),
        DomainSpec::HalfPlane => Some(1.0),
        DomainSpec::Strip { .. } => Some(f64::INFINITY),
        DomainSpec::DiskComplement { .. } => Some(0.0),
        DomainSpec::Disk { .. } => Some(f64::INFINITY),
        DomainSpec::Rotated { inner, .. } | DomainSpec::Translated { inner, .. } => {
            closed_form_h(inner)
        }
        DomainSpec::RadialProfile { .. } | DomainSpec::Union { .. } => None,
    }
}

/// Structural facts about a domain that translate into exponent bounds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DomainMetadata {
    pub bounded: bool,
    pub complement_bounded: bool,
    pub simply_connected: bool,
    pub convex: bool,
    /// Dilatation of a global quasiconformal reflection across the boundary,
    /// when one is known. Only meaningful for unbounded domains here.
    pub quasidisk_k: Option<f64>,
    /// Exponent of a known superset: a larger domain has a smaller
    /// exponent, so this bounds h from below.
    pub superset_h: Option<f64>,
    /// Exponent of a known subset, bounding h from above.
    pub subset_h: Option<f64>,
}

pub fn metadata(domain: &DomainSpec) -> DomainMetadata {
    let blank = DomainMetadata::default();
    match domain {
        DomainSpec::Sector { alpha } => DomainMetadata {
            simply_connected: true,
            convex: *alpha <= 1.0,
            // the sector of opening πα is the fold image of a half plane
            // with dilatation max(α, 2−α)/min(α, 2−α); the slit plane α = 2
            // is not a quasidisk
            quasidisk_k: if *alpha < 2.0 {
                let big = alpha.max(2.0 - alpha);
                let small = alpha.min(2.0 - alpha);
                Some(big / small)
            } else {
                None
            },
            ..blank
        },
        DomainSpec::Spiral { beta, alpha } => {
            if *beta == 0.0 {
                metadata(&DomainSpec::Sector { alpha: *alpha })
            } else {
                DomainMetadata { simply_connected: true, ..blank }
            }
        }
        DomainSpec::HalfPlane => DomainMetadata {
            simply_connected: true,
            convex: true,
            quasidisk_k: Some(1.0),
            ..blank
        },
        DomainSpec::Strip { .. } => DomainMetadata { simply_connected: true, convex: true, ..blank },
        DomainSpec::DiskComplement { .. } => DomainMetadata { complement_bounded: true, ..blank },
        // the quasidisk band speaks about unbounded quasidisks, so the
        // bounded disk does not claim one
        DomainSpec::Disk { .. } => {
            DomainMetadata { bounded: true, simply_connected: true, convex: true, ..blank }
        }
        DomainSpec::RadialProfile { half_width, .. } => DomainMetadata {
            // an infinite half width row puts a full annulus in the domain,
            // creating loops around the (excluded) origin
            simply_connected: half_width.iter().all(|w| w.is_finite()),
            ..blank
        },
        DomainSpec::Rotated { inner, .. } | DomainSpec::Translated { inner, .. } => metadata(inner),
        DomainSpec::Union { parts } => {
            if parts.is_empty() {
                // whole plane: complement is empty, hence trivially bounded;
                // the simply-connected lower bound h >= 1/2 assumes a proper
                // subdomain of the plane and must not be claimed here
                DomainMetadata { complement_bounded: true, ..blank }
            } else {
                // every part sits inside the union, so each part's exponent
                // caps the union's from above
                let hi = parts.iter().filter_map(closed_form_h).fold(f64::INFINITY, f64::min);
                DomainMetadata {
                    subset_h: if hi.is_finite() { Some(hi) } else { None },
                    ..blank
                }
            }
        }
    }
}

/// Exponent band for an unbounded domain bounded by a K-quasicircle:
/// h ∈ [(K+1)/(2K), (K+1)/2].
pub fn quasidisk_band(k: f64) -> Result<BoundInterval> {
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("dilatation must be at least 1, got {k}")));
    }
    Ok(BoundInterval::new((k + 1.0) / (2.0 * k), (k + 1.0) / 2.0, "quasidisk"))
}

/// Bounds from inclusion. A larger domain admits wilder maps, so its
/// exponent is smaller: a known subset's exponent caps h from above, a
/// known superset's exponent supports it from below.
pub fn comparison_bound(
    subset_h: Option<f64>,
    superset_h: Option<f64>,
) -> Result<Option<BoundInterval>> {
    if subset_h.is_none() && superset_h.is_none() {
        return Ok(None);
    }
    let lo = superset_h.unwrap_or(0.0);
    let hi = subset_h.unwrap_or(f64::INFINITY);
    if lo > hi {
        return Err(Error::InconsistentBounds { lo, hi });
    }
    let mut provenance = Vec::new();
    if superset_h.is_some() {
        provenance.push("superset".to_string());
    }
    if subset_h.is_some() {
        provenance.push("subset".to_string());
    }
    Ok(Some(BoundInterval { lo, hi, provenance }))
}

/// Intersect every exponent bound the structural facts support. Returns
/// None when no rule applies, and an error when the rules contradict each
/// other (inconsistent metadata).
pub fn analytic_bounds(md: &DomainMetadata) -> Result<Option<BoundInterval>> {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    let mut provenance: Vec<String> = Vec::new();
    let mut apply = |lo_new: f64, hi_new: f64, rule: &str| {
        lo = lo.max(lo_new);
        hi = hi.min(hi_new);
        provenance.push(rule.to_string());
    };
    if md.bounded {
        apply(f64::INFINITY, f64::INFINITY, "bounded");
    }
    if md.complement_bounded {
        apply(0.0, 0.0, "complement_bounded");
    }
    if md.simply_connected {
        apply(0.5, f64::INFINITY, "simply_connected");
    }
    if md.convex {
        apply(1.0, f64::INFINITY, "convex");
    }
    if let Some(k) = md.quasidisk_k {
        let band = quasidisk_band(k)?;
        apply(band.lo, band.hi, "quasidisk");
    }
    if let Some(h) = md.superset_h {
        apply(h, f64::INFINITY, "superset");
    }
    if let Some(h) = md.subset_h {
        apply(0.0, h, "subset");
    }
    drop(apply);
    if provenance.is_empty() {
        return Ok(None);
    }
    if lo > hi {
        return Err(Error::InconsistentBounds { lo, hi });
    }
    Ok(Some(BoundInterval { lo, hi, provenance }))
}

/// Band a domain's exponent by everything known about it: the closed form
/// when the catalogue has one, intersected with the structural rules.
///
/// A closed form inconsistent with the rule band (beyond rounding) is an
/// error; within rounding, the closed form wins.
pub fn domain_band(domain: &DomainSpec) -> Result<Option<BoundInterval>> {
    let rules = analytic_bounds(&metadata(domain))?;
    match (closed_form_h(domain), rules) {
        (None, band) => Ok(band),
        (Some(h), None) => Ok(Some(BoundInterval::new(h, h, "closed_form"))),
        (Some(h), Some(band)) => {
            let tol = 1e-9 * h.abs().max(1.0);
            if h.is_finite() && (h < band.lo - tol || h > band.hi + tol) {
                return Err(Error::InconsistentBounds {
                    lo: band.lo.max(h),
                    hi: band.hi.min(h),
                });
            }
            let mut provenance = vec!["closed_form".to_string()];
            provenance.extend(band.provenance);
            Ok(Some(BoundInterval { lo: h, hi: h, provenance }))
        }
    }
}

/// Arc-width estimate for domains starlike about the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HansenEstimate {
    /// Extrapolated exponent; infinite when the widths shrink to nothing.
    pub h: f64,
    /// Unextrapolated value π / α(t_max).
    pub h_raw: f64,
    /// (radius, widest arc) along the grid.
    pub alphas: Vec<(f64, f64)>,
    pub extrapolated: bool,
    pub divergent: bool,
}

/// Estimate the exponent of a starlike domain from the width of its widest
/// circular arc: h = lim π / α(t). The limit is accelerated with one
/// Aitken Δ² step over the last three grid values when they still move.
///
/// Widths that grow along the grid contradict starlikeness and abort.
pub fn hansen_starlike(domain: &DomainSpec, t_grid: &[f64]) -> Result<HansenEstimate> {
    if t_grid.len() < 2 || !t_grid.windows(2).all(|w| w[0] < w[1]) || t_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter(
            "arc-width grid must be positive, increasing, length at least 2".into(),
        ));
    }
    let alphas: Vec<(f64, f64)> =
        t_grid.iter().map(|&t| (t, domain.angular_stats(t).max_arc)).collect();
    for w in alphas.windows(2) {
        if w[1].1 > w[0].1 + 1e-9 {
            return Err(Error::NotStarlike { t: w[1].0 });
        }
    }
    let a_last = alphas.last().unwrap().1;
    if a_last <= 0.0 {
        // the outermost circle misses the domain entirely
        return Ok(HansenEstimate {
            h: f64::INFINITY,
            h_raw: f64::INFINITY,
            alphas,
            extrapolated: false,
            divergent: true,
        });
    }
    let h_raw = PI / a_last;
    let n = alphas.len();
    if n < 3 {
        return Ok(HansenEstimate { h: h_raw, h_raw, alphas, extrapolated: false, divergent: false });
    }
    let x: Vec<f64> = alphas[n - 3..].iter().map(|(_, a)| PI / a).collect();
    let (d1, d2) = (x[1] - x[0], x[2] - x[1]);
    let scale = x[2].abs().max(1.0);
    if d2.abs() <= 1e-9 * scale {
        // already settled
        return Ok(HansenEstimate { h: x[2], h_raw, alphas, extrapolated: false, divergent: false });
    }
    if d2.abs() >= d1.abs() * (1.0 - 1e-9) {
        // increments do not contract: widths keep shrinking, no finite limit
        return Ok(HansenEstimate {
            h: f64::INFINITY,
            h_raw,
            alphas,
            extrapolated: false,
            divergent: true,
        });
    }
    let h = x[2] - d2 * d2 / (d2 - d1);
    Ok(HansenEstimate { h, h_raw, alphas, extrapolated: true, divergent: false })
}

//! Plane domain descriptions and the geometric queries the walker needs.
//!
//! A [`DomainSpec`] is a small closed-form catalogue (sector, logarithmic
//! spiral domain, half plane, strip, disk complement, disk) plus a radial
//! profile type produced by circular symmetrization, and wrappers for
//! rotation, translation and union. Every variant supports exact membership
//! and a certified lower bound on the distance to the boundary; the sampler
//! never needs the exact distance, only a positive radius that is guaranteed
//! not to overshoot the boundary.
//!
//! Angles follow the principal convention (−π, π] except where a set is
//! naturally described by an argument window, which is then reduced mod 2π.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::principal_arg;

const TAU: f64 = 2.0 * std::f64::consts::PI;
const PI: f64 = std::f64::consts::PI;

/// Description of an open plane domain.
///
/// JSON encoding is tagged by `type` with snake_case names, e.g.
/// `{"type":"sector","alpha":0.5}` or
/// `{"type":"rotated","theta":1.57,"inner":{...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    /// Sector 0 < arg z < πα with vertex at the origin, α ∈ (0, 2].
    Sector { alpha: f64 },
    /// Union of the logarithmic spirals e^{iθ}·exp(t(1 + i·tanβ)), t ∈ ℝ,
    /// over 0 < θ < πα. β = 0 degenerates to the sector above.
    Spiral { beta: f64, alpha: f64 },
    /// Upper half plane Im z > 0.
    HalfPlane,
    /// Horizontal strip 0 < Im z < width.
    Strip { width: f64 },
    /// Exterior of the closed disk of the given radius about the origin.
    DiskComplement { radius: f64 },
    /// Open disk, the one bounded variant (useful as a control: a walker
    /// inside can never escape to a large circle).
    Disk {
        #[serde(with = "crate::serde_util::complex")]
        center: Complex64,
        radius: f64,
    },
    /// Circularly symmetric domain {r e^{iθ} : |θ| < half_width(r)} where
    /// half_width is interpolated linearly in log r between grid points and
    /// extended by its end values. Entries are in (0, π]; an infinite entry
    /// (JSON `null`) marks a radius whose whole circle lies in the domain.
    RadialProfile {
        r: Vec<f64>,
        #[serde(with = "crate::serde_util::maybe_infinite_vec")]
        half_width: Vec<f64>,
    },
    /// Rotation e^{iθ}·Ω of the inner domain.
    Rotated { theta: f64, inner: Box<DomainSpec> },
    /// Translation Ω + offset of the inner domain.
    Translated {
        #[serde(with = "crate::serde_util::complex")]
        offset: Complex64,
        inner: Box<DomainSpec>,
    },
    /// Union of the parts. An empty union is the degenerate "whole plane"
    /// domain: membership is always true and the boundary is empty.
    Union { parts: Vec<DomainSpec> },
}

/// Angular trace of a domain on the circle |z| = r.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularStats {
    /// Open arcs (start, end) with start ∈ [0, 2π) and end − start ∈ (0, 2π].
    pub arcs: Vec<(f64, f64)>,
    /// Length of the longest arc (2π when the whole circle is inside).
    pub max_arc: f64,
    /// Total angular measure; +∞ when the whole circle is inside.
    pub total: f64,
    /// True when the circle lies entirely in the domain.
    pub full_circle: bool,
}

impl AngularStats {
    fn empty() -> Self {
        AngularStats { arcs: Vec::new(), max_arc: 0.0, total: 0.0, full_circle: false }
    }

    fn full() -> Self {
        AngularStats { arcs: vec![(0.0, TAU)], max_arc: TAU, total: f64::INFINITY, full_circle: true }
    }

    fn from_arcs(arcs: Vec<(f64, f64)>) -> Self {
        let max_arc = arcs.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
        let total = arcs.iter().map(|(a, b)| b - a).sum();
        AngularStats { arcs, max_arc, total, full_circle: false }
    }

    /// Total measure as a finite number (2π when full_circle).
    pub fn finite_total(&self) -> f64 {
        if self.full_circle {
            TAU
        } else {
            self.total
        }
    }
}

/// Reduce an angle to [0, 2π).
fn wrap_tau(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    if w == TAU {
        0.0
    } else {
        w
    }
}

/// Distance from r·e^{i·delta} to the ray {t·e^{i·0} : t ≥ 0}, where delta is
/// the angular separation in [0, 2π). Beyond ±π/2 the nearest ray point is
/// the origin.
fn ray_distance(r: f64, delta: f64) -> f64 {
    if delta <= PI / 2.0 {
        r * delta.sin()
    } else if delta < 1.5 * PI {
        r
    } else {
        r * (TAU - delta).sin()
    }
}

fn dist_point_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let denom = ab.norm_sqr();
    if denom == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).conj() * ab).re / denom;
    let t = t.clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Exact distance from an interior point to the boundary of the annular
/// sector {ρ e^{iφ} : a < ρ < b, |φ| < w}, w ≤ π.
fn annular_sector_distance(r: f64, theta: f64, a: f64, b: f64, w: f64) -> f64 {
    let mut d = (r - a).min(b - r);
    let z = Complex64::from_polar(r, theta);
    for sign in [1.0, -1.0] {
        let e = Complex64::from_polar(1.0, sign * w);
        d = d.min(dist_point_segment(z, e * a, e * b));
    }
    d
}

/// Half-width profile in log-radius coordinates.
struct ProfileTable<'a> {
    u: Vec<f64>,
    hw: &'a [f64],
}

impl<'a> ProfileTable<'a> {
    fn new(r: &[f64], hw: &'a [f64]) -> Self {
        ProfileTable { u: r.iter().map(|x| x.ln()).collect(), hw }
    }

    /// Interpolated half width at log-radius u. Segments with one infinite
    /// endpoint take the finite endpoint's value (a conservative reading of
    /// mixed finite/infinite rows); both infinite gives infinity.
    fn eval(&self, u: f64) -> f64 {
        let n = self.u.len();
        if n == 1 || u <= self.u[0] {
            return self.hw[0];
        }
        if u >= self.u[n - 1] {
            return self.hw[n - 1];
        }
        let j = match self.u.binary_search_by(|x| x.partial_cmp(&u).unwrap()) {
            Ok(j) => return self.hw[j],
            Err(j) => j,
        };
        let (u0, u1) = (self.u[j - 1], self.u[j]);
        let (w0, w1) = (self.hw[j - 1], self.hw[j]);
        match (w0.is_finite(), w1.is_finite()) {
            (true, true) => w0 + (w1 - w0) * (u - u0) / (u1 - u0),
            (true, false) => w0,
            (false, true) => w1,
            (false, false) => f64::INFINITY,
        }
    }

    /// Infimum of the profile over [u_lo, u_hi].
    fn window_min(&self, u_lo: f64, u_hi: f64) -> f64 {
        let mut m = self.eval(u_lo).min(self.eval(u_hi));
        let n = self.u.len();
        for j in 0..n {
            if self.u[j] > u_lo && self.u[j] < u_hi {
                m = m.min(self.hw[j]);
            }
            // midpoints catch constant stretches next to infinite nodes
            if j + 1 < n {
                let a = self.u[j].max(u_lo);
                let b = self.u[j + 1].min(u_hi);
                if a < b {
                    m = m.min(self.eval(0.5 * (a + b)));
                }
            }
        }
        m
    }
}

/// Scaled distance from z to the logarithmic spiral through angle offset θ0
/// with twist slope tau: returns dist(z, curve)/|z|. The minimizer in
/// log-radius offset s is bracketed by |e^s − 1| ≤ F and by a fixed window,
/// scanned coarsely, then refined by golden-section search.
fn spiral_curve_gap(psi: f64, tau: f64) -> f64 {
    // normalized squared distance to the curve point at log-radius offset s
    let f2 = |s: f64| -> f64 {
        let es = s.exp();
        1.0 + es * es - 2.0 * es * (psi - tau * s).cos()
    };
    let d0 = 2.0 * (0.5 * psi).sin().abs();
    if d0 == 0.0 {
        return 0.0;
    }
    let window = PI * (1.0 + tau.abs());
    // the lower cutoff is deep enough that the certified floor below it,
    // 1 − e^{s_lo}, costs at most half a percent
    let deep = window.max(5.3);
    let s_hi = window.min((1.0 + d0).ln());
    let (s_lo, clipped) = if d0 < 1.0 && (1.0 - d0).ln() >= -deep {
        ((1.0 - d0).ln(), false)
    } else {
        (-deep, true)
    };
    if s_lo >= s_hi {
        return d0;
    }
    // coarse scan dense enough to land in the global basin: candidate
    // minima repeat on the scale π/|tau| from the oscillating cosine
    let spacing = (0.25f64).min(PI / (6.0 * (1.0 + tau.abs())));
    let n = (((s_hi - s_lo) / spacing).ceil() as usize).clamp(1, 512);
    let mut best_s = 0.0f64.clamp(s_lo, s_hi);
    let mut best = f2(best_s);
    for i in 0..=n {
        let s = s_lo + (s_hi - s_lo) * (i as f64) / (n as f64);
        let v = f2(s);
        if v < best {
            best = v;
            best_s = s;
        }
    }
    // golden-section refinement within one scan cell of the best sample
    let h = (s_hi - s_lo) / (n as f64);
    let mut a = (best_s - h).max(s_lo);
    let mut b = (best_s + h).min(s_hi);
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f2(x1);
    let mut f2v = f2(x2);
    for _ in 0..24 {
        if f1 <= f2v {
            b = x2;
            x2 = x1;
            f2v = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f2(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2v;
            x2 = a + INV_PHI * (b - a);
            f2v = f2(x2);
        }
    }
    best = best.min(f1).min(f2v);
    let mut gap = best.max(0.0).sqrt();
    if clipped {
        gap = gap.min(1.0 - s_lo.exp());
    }
    gap
}

impl DomainSpec {
    /// Check parameter ranges. Called when a spec is built from config.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            DomainSpec::Sector { alpha } => {
                if !(*alpha > 0.0 && *alpha <= 2.0) {
                    return bad(format!("sector opening fraction must be in (0, 2], got {alpha}"));
                }
            }
            DomainSpec::Spiral { beta, alpha } => {
                if !(*alpha > 0.0 && *alpha <= 2.0) {
                    return bad(format!("spiral opening fraction must be in (0, 2], got {alpha}"));
                }
                if !(beta.abs() < PI / 2.0) {
                    return bad(format!("spiral twist must be in (-pi/2, pi/2), got {beta}"));
                }
            }
            DomainSpec::HalfPlane => {}
            DomainSpec::Strip { width } => {
                if !(*width > 0.0 && width.is_finite()) {
                    return bad(format!("strip width must be positive, got {width}"));
                }
            }
            DomainSpec::DiskComplement { radius } | DomainSpec::Disk { radius, .. } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("radius must be positive, got {radius}"));
                }
            }
            DomainSpec::RadialProfile { r, half_width } => {
                if r.is_empty() || r.len() != half_width.len() {
                    return bad("radial profile needs matching nonempty r/half_width grids".into());
                }
                if !r.windows(2).all(|w| w[0] < w[1]) || !r.iter().all(|x| *x > 0.0 && x.is_finite()) {
                    return bad("radial profile radii must be positive and increasing".into());
                }
                for w in half_width {
                    if !(*w > 0.0 && (*w <= PI || *w == f64::INFINITY)) {
                        return bad(format!("half widths must lie in (0, pi] or be infinite, got {w}"));
                    }
                }
            }
            DomainSpec::Rotated { theta, inner } => {
                if !theta.is_finite() {
                    return bad("rotation angle must be finite".into());
                }
                inner.validate()?;
            }
            DomainSpec::Translated { offset, inner } => {
                if !offset.re.is_finite() || !offset.im.is_finite() {
                    return bad("translation offset must be finite".into());
                }
                inner.validate()?;
            }
            DomainSpec::Union { parts } => {
                for p in parts {
                    p.validate()?;
                }
            }
        }
        Ok(())
    }

    /// Exact membership. Boundary points count as outside (domains are open).
    pub fn contains(&self, z: Complex64) -> bool {
        match self {
            DomainSpec::Sector { alpha } => {
                if z.re == 0.0 && z.im == 0.0 {
                    return false;
                }
                let phi = wrap_tau(principal_arg(z));
                phi > 0.0 && phi < PI * alpha
            }
            DomainSpec::Spiral { beta, alpha } => {
                if z.re == 0.0 && z.im == 0.0 {
                    return false;
                }
                let tau = beta.tan();
                let psi = wrap_tau(principal_arg(z) - tau * z.norm().ln());
                psi > 0.0 && psi < PI * alpha
            }
            DomainSpec::HalfPlane => z.im > 0.0,
            DomainSpec::Strip { width } => z.im > 0.0 && z.im < *width,
            DomainSpec::DiskComplement { radius } => z.norm() > *radius,
            DomainSpec::Disk { center, radius } => (z - center).norm() < *radius,
            DomainSpec::RadialProfile { r, half_width } => {
                if z.re == 0.0 && z.im == 0.0 {
                    return false;
                }
                let table = ProfileTable::new(r, half_width);
                principal_arg(z).abs() < table.eval(z.norm().ln())
            }
            DomainSpec::Rotated { theta, inner } => {
                inner.contains(z * Complex64::from_polar(1.0, -theta))
            }
            DomainSpec::Translated { offset, inner } => inner.contains(z - offset),
            DomainSpec::Union { parts } => {
                parts.is_empty() || parts.iter().any(|p| p.contains(z))
            }
        }
    }

    /// Positive lower bound on dist(z, ∂Ω) for interior z. Exact for the
    /// closed forms; certified (never above the true distance) for spirals
    /// and radial profiles. Returns +∞ for the boundaryless empty union.
    pub fn boundary_distance_lb(&self, z: Complex64) -> f64 {
        match self {
            DomainSpec::Sector { alpha } => {
                let r = z.norm();
                let phi = wrap_tau(principal_arg(z));
                ray_distance(r, phi).min(ray_distance(r, wrap_tau(PI * alpha - phi)))
            }
            DomainSpec::Spiral { beta, alpha } => {
                if *beta == 0.0 {
                    return DomainSpec::Sector { alpha: *alpha }.boundary_distance_lb(z);
                }
                let tau = beta.tan();
                let r = z.norm();
                let base = principal_arg(z) - tau * r.ln();
                let g0 = spiral_curve_gap(wrap_tau(base), tau);
                let g1 = spiral_curve_gap(wrap_tau(base - PI * alpha), tau);
                0.99 * r * g0.min(g1)
            }
            DomainSpec::HalfPlane => z.im,
            DomainSpec::Strip { width } => z.im.min(width - z.im),
            DomainSpec::DiskComplement { radius } => z.norm() - radius,
            DomainSpec::Disk { center, radius } => radius - (z - center).norm(),
            DomainSpec::RadialProfile { r, half_width } => {
                let table = ProfileTable::new(r, half_width);
                let rr = z.norm();
                let u0 = rr.ln();
                let theta = principal_arg(z);
                let mut best = 0.0f64;
                for delta in [1.0, 0.5, 0.25, 0.1, 0.04, 0.01] {
                    let wmin = table.window_min(u0 - delta, u0 + delta);
                    let (a, b) = ((u0 - delta).exp(), (u0 + delta).exp());
                    if wmin == f64::INFINITY {
                        // whole annulus inside: only the radial walls bound
                        best = best.max((rr - a).min(b - rr));
                    } else {
                        let w = wmin.min(PI);
                        if theta.abs() < w {
                            best = best.max(annular_sector_distance(rr, theta, a, b, w));
                        }
                    }
                }
                // interior points always admit some window; keep a positive
                // floor in pathological profiles so the walker can move
                best.max(1e-12 * rr)
            }
            DomainSpec::Rotated { theta, inner } => {
                inner.boundary_distance_lb(z * Complex64::from_polar(1.0, -theta))
            }
            DomainSpec::Translated { offset, inner } => inner.boundary_distance_lb(z - offset),
            DomainSpec::Union { parts } => {
                if parts.is_empty() {
                    return f64::INFINITY;
                }
                // any containing part is an inscribed subdomain, so the
                // largest of their bounds is still a valid bound
                parts
                    .iter()
                    .filter(|p| p.contains(z))
                    .map(|p| p.boundary_distance_lb(z))
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Arcs of {θ : r·e^{iθ} ∈ Ω}. Analytic for the closed-form variants,
    /// sampled (4096 points, bisection refinement to 1e−10 rad) for unions
    /// and translated domains.
    pub fn angular_stats(&self, r: f64) -> AngularStats {
        assert!(r > 0.0 && r.is_finite(), "angular_stats needs r > 0");
        match self {
            DomainSpec::Sector { alpha } => AngularStats::from_arcs(vec![(0.0, PI * alpha)]),
            DomainSpec::Spiral { beta, alpha } => {
                let start = wrap_tau(beta.tan() * r.ln());
                AngularStats::from_arcs(vec![(start, start + PI * alpha)])
            }
            DomainSpec::HalfPlane => AngularStats::from_arcs(vec![(0.0, PI)]),
            DomainSpec::Strip { width } => {
                if r < *width {
                    AngularStats::from_arcs(vec![(0.0, PI)])
                } else {
                    let phi = (width / r).asin();
                    if phi <= 0.0 {
                        AngularStats::empty()
                    } else if phi >= PI / 2.0 {
                        // r == width: the top of the circle touches the wall
                        AngularStats::from_arcs(vec![(0.0, PI / 2.0), (PI / 2.0, PI)])
                    } else {
                        AngularStats::from_arcs(vec![(0.0, phi), (PI - phi, PI)])
                    }
                }
            }
            DomainSpec::DiskComplement { radius } => {
                if r > *radius {
                    AngularStats::full()
                } else {
                    AngularStats::empty()
                }
            }
            DomainSpec::Disk { center, radius } => {
                let d = center.norm();
                if r + d < *radius {
                    return AngularStats::full();
                }
                if d == 0.0 || (r - d).abs() >= *radius {
                    return AngularStats::empty();
                }
                let cosg = (r * r + d * d - radius * radius) / (2.0 * r * d);
                if cosg >= 1.0 {
                    return AngularStats::empty();
                }
                if cosg <= -1.0 {
                    return AngularStats::full();
                }
                let g = cosg.acos();
                let c = wrap_tau(principal_arg(*center));
                AngularStats::from_arcs(vec![(wrap_tau(c - g), wrap_tau(c - g) + 2.0 * g)])
            }
            DomainSpec::RadialProfile { r: grid, half_width } => {
                let hw = ProfileTable::new(grid, half_width).eval(r.ln());
                if hw == f64::INFINITY {
                    AngularStats::full()
                } else {
                    AngularStats::from_arcs(vec![(wrap_tau(-hw), wrap_tau(-hw) + 2.0 * hw)])
                }
            }
            DomainSpec::Rotated { theta, inner } => {
                let inner_stats = inner.angular_stats(r);
                if inner_stats.full_circle {
                    return inner_stats;
                }
                let arcs = inner_stats
                    .arcs
                    .iter()
                    .map(|(a, b)| {
                        let s = wrap_tau(a + theta);
                        (s, s + (b - a))
                    })
                    .collect();
                AngularStats::from_arcs(arcs)
            }
            DomainSpec::Translated { .. } | DomainSpec::Union { .. } => self.scan_arcs(r),
        }
    }

    /// Membership scan around the circle with bisection refinement.
    fn scan_arcs(&self, r: f64) -> AngularStats {
        const N: usize = 4096;
        let inside: Vec<bool> =
            (0..N).map(|k| self.contains(Complex64::from_polar(r, TAU * k as f64 / N as f64))).collect();
        let n_in = inside.iter().filter(|b| **b).count();
        if n_in == N {
            return AngularStats::full();
        }
        if n_in == 0 {
            return AngularStats::empty();
        }
        let refine = |mut a: f64, mut b: f64| -> f64 {
            // invariant: membership differs at the two ends
            let ia = self.contains(Complex64::from_polar(r, a));
            while b - a > 1e-10 {
                let m = 0.5 * (a + b);
                if self.contains(Complex64::from_polar(r, m)) == ia {
                    a = m;
                } else {
                    b = m;
                }
            }
            0.5 * (a + b)
        };
        let step = TAU / N as f64;
        let mut arcs = Vec::new();
        // walk runs of inside samples cyclically, starting at an outside one
        let start = inside.iter().position(|b| !*b).unwrap();
        let mut k = 0;
        while k < N {
            let i = (start + k) % N;
            if inside[i] {
                let run_start = k;
                while k < N && inside[(start + k) % N] {
                    k += 1;
                }
                let i0 = (start + run_start) % N;
                let i1 = (start + k - 1) % N;
                let a = refine((i0 as f64 - 1.0) * step, i0 as f64 * step);
                let b = refine(i1 as f64 * step, (i1 as f64 + 1.0) * step);
                let a2 = wrap_tau(a);
                let len = if b > a { b - a } else { b + TAU - a };
                arcs.push((a2, a2 + len));
            } else {
                k += 1;
            }
        }
        AngularStats::from_arcs(arcs)
    }

    /// A deterministic interior point, roughly unit distance from the
    /// boundary where the geometry allows it. Used as the default walk base.
    pub fn default_base_point(&self) -> Complex64 {
        match self {
            DomainSpec::Sector { alpha } => {
                let mid = PI * alpha / 2.0;
                let r = if *alpha >= 1.0 { 1.0 } else { 1.0 / mid.sin() };
                Complex64::from_polar(r, mid)
            }
            DomainSpec::Spiral { beta, alpha } => {
                if *beta == 0.0 {
                    return DomainSpec::Sector { alpha: *alpha }.default_base_point();
                }
                // middle of the spiral channel at unit radius
                Complex64::from_polar(1.0, PI * alpha / 2.0)
            }
            DomainSpec::HalfPlane => Complex64::new(0.0, 1.0),
            DomainSpec::Strip { width } => Complex64::new(0.0, width / 2.0),
            DomainSpec::DiskComplement { radius } => Complex64::new(radius + 1.0, 0.0),
            DomainSpec::Disk { center, .. } => *center,
            DomainSpec::RadialProfile { .. } => Complex64::new(1.0, 0.0),
            DomainSpec::Rotated { theta, inner } => {
                inner.default_base_point() * Complex64::from_polar(1.0, *theta)
            }
            DomainSpec::Translated { offset, inner } => inner.default_base_point() + offset,
            DomainSpec::Union { parts } => parts
                .first()
                .map(|p| p.default_base_point())
                .unwrap_or_else(|| Complex64::new(0.0, 0.0)),
        }
    }

    /// Sample points on the boundary, used by safety tests and diagnostics.
    /// The samples cover log radii in [1e−3, 1e3] for unbounded variants.
    pub fn boundary_points(&self, n: usize) -> Vec<Complex64> {
        let logspace = |k: usize| -> f64 { 10f64.powf(-3.0 + 6.0 * (k as f64) / (n.max(2) as f64 - 1.0)) };
        match self {
            DomainSpec::Sector { alpha } => (0..n)
                .map(|k| {
                    // alternate between the two edge rays
                    let ang = if k % 2 == 0 { 0.0 } else { PI * alpha };
                    Complex64::from_polar(logspace(k), ang)
                })
                .collect(),
            DomainSpec::Spiral { beta, alpha } => {
                let tau = beta.tan();
                (0..n)
                    .map(|k| {
                        let t = -7.0 + 14.0 * (k as f64) / (n as f64 - 1.0);
                        let ang = if k % 2 == 0 { 0.0 } else { PI * alpha };
                        Complex64::from_polar(t.exp(), tau * t + ang)
                    })
                    .collect()
            }
            DomainSpec::HalfPlane => (0..n)
                .map(|k| {
                    let x = logspace(k);
                    Complex64::new(if k % 2 == 0 { x } else { -x }, 0.0)
                })
                .collect(),
            DomainSpec::Strip { width } => (0..n)
                .map(|k| {
                    let x = logspace(k) - 500.0;
                    Complex64::new(x, if k % 2 == 0 { 0.0 } else { *width })
                })
                .collect(),
            DomainSpec::DiskComplement { radius } => (0..n)
                .map(|k| Complex64::from_polar(*radius, TAU * k as f64 / n as f64))
                .collect(),
            DomainSpec::Disk { center, radius } => (0..n)
                .map(|k| center + Complex64::from_polar(*radius, TAU * k as f64 / n as f64))
                .collect(),
            DomainSpec::RadialProfile { r, half_width } => {
                let table = ProfileTable::new(r, half_width);
                let (u0, u1) = (r[0].ln() - 3.0, r[r.len() - 1].ln() + 3.0);
                (0..n)
                    .filter_map(|k| {
                        let u = u0 + (u1 - u0) * (k as f64) / (n as f64 - 1.0);
                        let hw = table.eval(u);
                        if hw.is_finite() {
                            let side = if k % 2 == 0 { 1.0 } else { -1.0 };
                            Some(Complex64::from_polar(u.exp(), side * hw))
                        } else {
                            None
                        }
                    })
                    .collect()
            }
            DomainSpec::Rotated { theta, inner } => {
                let rot = Complex64::from_polar(1.0, *theta);
                inner.boundary_points(n).into_iter().map(|z| z * rot).collect()
            }
            DomainSpec::Translated { offset, inner } => {
                inner.boundary_points(n).into_iter().map(|z| z + offset).collect()
            }
            DomainSpec::Union { parts } => parts
                .iter()
                .flat_map(|p| p.boundary_points(n / parts.len().max(1) + 1))
                .filter(|z| !self.contains(*z))
                .take(n)
                .collect(),
        }
    }
}

/// Circular symmetrization onto a radial profile: at each grid radius the
/// angular measure L(r) of the domain trace becomes a centered arc of half
/// width min(L(r)/2, π). A full circle maps to half width π (the slit-free
/// cap). Errors if some grid circle misses the domain entirely.
pub fn symmetrize(domain: &DomainSpec, r_grid: &[f64]) -> Result<DomainSpec> {
    if r_grid.is_empty() || !r_grid.windows(2).all(|w| w[0] < w[1]) || r_grid[0] <= 0.0 {
        return Err(Error::InvalidParameter(
            "symmetrization grid must be positive and increasing".into(),
        ));
    }
    let mut hw = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let stats = domain.angular_stats(r);
        if stats.full_circle {
            hw.push(PI);
        } else if stats.total <= 0.0 {
            return Err(Error::EmptyCircle { radius: r });
        } else {
            hw.push((stats.total / 2.0).min(PI));
        }
    }
    Ok(DomainSpec::RadialProfile { r: r_grid.to_vec(), half_width: hw })
}

/// Symmetrize about an arbitrary base point: the domain is first translated
/// so the base point sits at the origin.
pub fn symmetrize_about(domain: &DomainSpec, z0: Complex64, r_grid: &[f64]) -> Result<DomainSpec> {
    if z0 == Complex64::new(0.0, 0.0) {
        symmetrize(domain, r_grid)
    } else {
        let shifted = DomainSpec::Translated { offset: -z0, inner: Box::new(domain.clone()) };
        symmetrize(&shifted, r_grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sector_membership() {
        let s = DomainSpec::Sector { alpha: 0.5 };
        assert!(s.contains(Complex64::from_polar(1.0, PI / 4.0)));
        assert!(!s.contains(Complex64::from_polar(1.0, -PI / 4.0)));
        assert!(!s.contains(c(1.0, 0.0)));
        assert!(!s.contains(c(0.0, 0.0)));
        // slit plane: everything except the positive real axis
        let slit = DomainSpec::Sector { alpha: 2.0 };
        assert!(slit.contains(c(-1.0, 0.0)));
        assert!(!slit.contains(c(2.0, 0.0)));
    }

    #[test]
    fn spiral_membership_matches_angular_window() {
        let sp = DomainSpec::Spiral { beta: PI / 4.0, alpha: 1.0 };
        // exp(1 + i(1 + π/2)) has arg − tanβ·log|z| = π/2, inside
        let z = Complex64::from_polar(1f64.exp(), 1.0 + PI / 2.0);
        assert!(sp.contains(z));
        // the generating flow preserves membership
        let tau = (PI / 4.0f64).tan();
        for k in 0..30 {
            let t = -3.0 + 0.2 * k as f64;
            let flow = Complex64::from_polar(t.exp(), tau * t);
            assert_eq!(sp.contains(z * flow), sp.contains(z), "flow step t={}", t);
        }
        // boundary spiral itself is outside
        let b = Complex64::from_polar(2f64.exp(), tau * 2.0);
        assert!(!sp.contains(b));
    }

    #[test]
    fn halfplane_strip_disk_membership() {
        assert!(DomainSpec::HalfPlane.contains(c(3.0, 0.1)));
        assert!(!DomainSpec::HalfPlane.contains(c(3.0, 0.0)));
        let st = DomainSpec::Strip { width: PI };
        assert!(st.contains(c(-7.0, 1.0)));
        assert!(!st.contains(c(0.0, PI)));
        let dc = DomainSpec::DiskComplement { radius: 1.0 };
        assert!(dc.contains(c(2.0, 0.0)));
        assert!(!dc.contains(c(0.5, 0.5)));
        let disk = DomainSpec::Disk { center: c(1.0, 1.0), radius: 2.0 };
        assert!(disk.contains(c(1.0, 1.0)));
        assert!(!disk.contains(c(4.0, 1.0)));
    }

    #[test]
    fn wrapper_membership() {
        let rot = DomainSpec::Rotated {
            theta: PI / 2.0,
            inner: Box::new(DomainSpec::Sector { alpha: 0.5 }),
        };
        assert!(rot.contains(Complex64::from_polar(1.0, 3.0 * PI / 4.0)));
        assert!(!rot.contains(Complex64::from_polar(1.0, PI / 4.0)));
        let tr = DomainSpec::Translated {
            offset: c(0.0, 1.0),
            inner: Box::new(DomainSpec::HalfPlane),
        };
        assert!(tr.contains(c(0.0, 1.5)));
        assert!(!tr.contains(c(0.0, 0.5)));
        let u = DomainSpec::Union { parts: vec![] };
        assert!(u.contains(c(123.0, -456.0)));
    }

    #[test]
    fn sector_distance_is_exact() {
        let s = DomainSpec::Sector { alpha: 0.5 };
        let d = s.boundary_distance_lb(Complex64::from_polar(5.0, PI / 4.0));
        assert!((d - 5.0 * (PI / 4.0).sin()).abs() < 1e-12);
        // wide sector: past a right angle from both edges the apex rules
        let wide = DomainSpec::Sector { alpha: 2.0 };
        let d2 = wide.boundary_distance_lb(Complex64::from_polar(3.0, PI));
        assert!((d2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn simple_distances() {
        assert_eq!(DomainSpec::HalfPlane.boundary_distance_lb(c(3.0, 2.0)), 2.0);
        let st = DomainSpec::Strip { width: 2.0 };
        assert_eq!(st.boundary_distance_lb(c(10.0, 0.5)), 0.5);
        let dc = DomainSpec::DiskComplement { radius: 1.0 };
        assert_eq!(dc.boundary_distance_lb(c(2.0, 0.0)), 1.0);
        let un = DomainSpec::Union { parts: vec![] };
        assert_eq!(un.boundary_distance_lb(c(5.0, 5.0)), f64::INFINITY);
    }

    #[test]
    fn spiral_distance_is_a_safe_lower_bound() {
        let sp = DomainSpec::Spiral { beta: PI / 4.0, alpha: 1.0 };
        let boundary = sp.boundary_points(4000);
        assert!(boundary.len() > 1000);
        let mut checked = 0;
        for i in 0..60 {
            for j in 0..30 {
                let r = 10f64.powf(-1.5 + 3.0 * i as f64 / 59.0);
                let th = TAU * j as f64 / 30.0;
                let z = Complex64::from_polar(r, th);
                if !sp.contains(z) {
                    continue;
                }
                checked += 1;
                let lb = sp.boundary_distance_lb(z);
                assert!(lb > 0.0, "nonpositive bound at {}", z);
                let true_min = boundary.iter().map(|b| (z - b).norm()).fold(f64::MAX, f64::min);
                assert!(
                    lb <= true_min * (1.0 + 1e-9),
                    "bound {} exceeds sampled distance {} at {}",
                    lb,
                    true_min,
                    z
                );
            }
        }
        assert!(checked > 200, "too few interior samples: {}", checked);
    }

    #[test]
    fn spiral_distance_near_sector_limit() {
        // tiny twist should be close to the exact sector distance
        let sp = DomainSpec::Spiral { beta: 1e-7, alpha: 1.0 };
        let sec = DomainSpec::Sector { alpha: 1.0 };
        for k in 1..20 {
            let z = Complex64::from_polar(2.0, PI * k as f64 / 20.0);
            let a = sp.boundary_distance_lb(z);
            let b = sec.boundary_distance_lb(z);
            assert!(a <= b * (1.0 + 1e-6));
            assert!(a >= 0.97 * b, "spiral bound too loose: {} vs {}", a, b);
        }
    }

    #[test]
    fn radial_profile_distance_bounds() {
        // constant half width π/2 is the right half plane
        let p = DomainSpec::RadialProfile { r: vec![0.5, 2.0], half_width: vec![PI / 2.0, PI / 2.0] };
        for k in 1..=10 {
            let r = 0.3 * k as f64;
            let z = c(r, 0.0);
            let lb = p.boundary_distance_lb(z);
            assert!(lb > 0.0 && lb <= r + 1e-12);
            assert!(lb >= 0.5 * r, "cone bound too weak: {} vs true {}", lb, r);
        }
        let boundary = p.boundary_points(2000);
        for k in 0..200 {
            let z = Complex64::from_polar(
                10f64.powf(-1.0 + 2.0 * (k as f64) / 199.0),
                (k as f64 / 199.0 - 0.5) * PI * 0.9,
            );
            if !p.contains(z) {
                continue;
            }
            let lb = p.boundary_distance_lb(z);
            let true_min = boundary.iter().map(|b| (z - b).norm()).fold(f64::MAX, f64::min);
            assert!(lb <= true_min * (1.0 + 1e-9), "profile bound overshoots at {}", z);
        }
    }

    #[test]
    fn angular_stats_closed_forms() {
        let s = DomainSpec::Sector { alpha: 0.5 }.angular_stats(3.0);
        assert_eq!(s.arcs, vec![(0.0, PI / 2.0)]);
        assert!((s.total - PI / 2.0).abs() < 1e-15);
        let h = DomainSpec::HalfPlane.angular_stats(1.0);
        assert!((h.max_arc - PI).abs() < 1e-15);
        let d = DomainSpec::DiskComplement { radius: 1.0 }.angular_stats(0.5);
        assert_eq!(d.total, 0.0);
        let d2 = DomainSpec::DiskComplement { radius: 1.0 }.angular_stats(2.0);
        assert!(d2.full_circle && d2.total.is_infinite() && (d2.max_arc - TAU).abs() < 1e-15);
    }

    #[test]
    fn angular_stats_strip() {
        let st = DomainSpec::Strip { width: 1.0 };
        let near = st.angular_stats(0.5);
        assert!((near.total - PI).abs() < 1e-15);
        let far = st.angular_stats(2.0);
        let phi = 0.5f64.asin();
        assert_eq!(far.arcs.len(), 2);
        assert!((far.total - 2.0 * phi).abs() < 1e-12);
        assert!((far.max_arc - phi).abs() < 1e-12);
    }

    #[test]
    fn angular_stats_spiral_arc_rotates_with_radius() {
        let sp = DomainSpec::Spiral { beta: PI / 4.0, alpha: 1.0 };
        let r = 2.0f64;
        let st = sp.angular_stats(r);
        assert!((st.total - PI).abs() < 1e-12);
        let expected_start = wrap_tau(r.ln());
        assert!((st.arcs[0].0 - expected_start).abs() < 1e-12);
    }

    #[test]
    fn angular_stats_union_scan() {
        // sector of opening π/4 plus its rotation by π
        let u = DomainSpec::Union {
            parts: vec![
                DomainSpec::Sector { alpha: 0.25 },
                DomainSpec::Rotated {
                    theta: PI,
                    inner: Box::new(DomainSpec::Sector { alpha: 0.25 }),
                },
            ],
        };
        let st = u.angular_stats(1.0);
        assert_eq!(st.arcs.len(), 2);
        assert!((st.total - PI / 2.0).abs() < 1e-8, "total {}", st.total);
        assert!((st.max_arc - PI / 4.0).abs() < 1e-8, "max {}", st.max_arc);
        assert!(st.total >= st.max_arc);
    }

    #[test]
    fn scan_detects_full_and_empty() {
        let tr = DomainSpec::Translated {
            offset: c(0.25, 0.0),
            inner: Box::new(DomainSpec::DiskComplement { radius: 1.0 }),
        };
        assert_eq!(tr.angular_stats(0.2).total, 0.0);
        assert!(tr.angular_stats(10.0).full_circle);
    }

    #[test]
    fn symmetrize_rotated_sector() {
        let dom = DomainSpec::Rotated {
            theta: PI / 2.0,
            inner: Box::new(DomainSpec::Sector { alpha: 0.5 }),
        };
        let grid: Vec<f64> = (0..20).map(|k| 0.5 * 1.3f64.powi(k)).collect();
        let sym = symmetrize(&dom, &grid).unwrap();
        match sym {
            DomainSpec::RadialProfile { half_width, .. } => {
                for w in half_width {
                    assert!((w - PI / 4.0).abs() < 1e-12);
                }
            }
            other => panic!("expected radial profile, got {:?}", other),
        }
    }

    #[test]
    fn symmetrize_spiral_gives_sector_profile() {
        let dom = DomainSpec::Spiral { beta: PI / 4.0, alpha: 1.0 };
        let grid: Vec<f64> = (0..30).map(|k| 0.25 * 1.4f64.powi(k)).collect();
        let sym = symmetrize(&dom, &grid).unwrap();
        match sym {
            DomainSpec::RadialProfile { half_width, .. } => {
                for w in half_width {
                    assert!((w - PI / 2.0).abs() < 1e-12);
                }
            }
            other => panic!("expected radial profile, got {:?}", other),
        }
    }

    #[test]
    fn symmetrize_union_of_arcs_adds_measure() {
        let u = DomainSpec::Union {
            parts: vec![
                DomainSpec::Sector { alpha: 0.25 },
                DomainSpec::Rotated {
                    theta: PI / 2.0,
                    inner: Box::new(DomainSpec::Sector { alpha: 0.25 }),
                },
            ],
        };
        let sym = symmetrize(&u, &[1.0, 2.0]).unwrap();
        match sym {
            DomainSpec::RadialProfile { half_width, .. } => {
                for w in half_width {
                    assert!((w - PI / 4.0).abs() < 1e-8);
                }
            }
            other => panic!("expected radial profile, got {:?}", other),
        }
    }

    #[test]
    fn symmetrize_empty_circle_is_an_error() {
        let dc = DomainSpec::DiskComplement { radius: 1.0 };
        let err = symmetrize(&dc, &[0.5, 2.0]).unwrap_err();
        match err {
            Error::EmptyCircle { radius } => assert_eq!(radius, 0.5),
            other => panic!("unexpected error {:?}", other),
        }
    }

    #[test]
    fn symmetrize_preserves_angular_measure() {
        let dom = DomainSpec::Union {
            parts: vec![
                DomainSpec::Sector { alpha: 0.3 },
                DomainSpec::Rotated { theta: 2.0, inner: Box::new(DomainSpec::Sector { alpha: 0.4 }) },
            ],
        };
        let grid = [0.7, 1.3, 4.2];
        let sym = symmetrize(&dom, &grid).unwrap();
        for &r in &grid {
            let orig = dom.angular_stats(r).finite_total().min(TAU);
            let new = sym.angular_stats(r).finite_total();
            assert!((orig - new).abs() < 1e-7, "measure changed at r={}: {} vs {}", r, orig, new);
        }
    }

    #[test]
    fn default_base_points_are_interior() {
        let domains = vec![
            DomainSpec::Sector { alpha: 0.5 },
            DomainSpec::Sector { alpha: 2.0 },
            DomainSpec::Spiral { beta: PI / 4.0, alpha: 1.0 },
            DomainSpec::Spiral { beta: -0.3, alpha: 0.6 },
            DomainSpec::HalfPlane,
            DomainSpec::Strip { width: PI },
            DomainSpec::DiskComplement { radius: 1.0 },
            DomainSpec::RadialProfile { r: vec![1.0, 10.0], half_width: vec![0.7, 0.4] },
            DomainSpec::Rotated { theta: 1.0, inner: Box::new(DomainSpec::Sector { alpha: 0.5 }) },
            DomainSpec::Translated { offset: c(1.0, 1.0), inner: Box::new(DomainSpec::HalfPlane) },
        ];
        for d in domains {
            let z0 = d.default_base_point();
            assert!(d.contains(z0), "{:?} does not contain its base point {}", d, z0);
            assert!(d.boundary_distance_lb(z0) > 0.0);
        }
        // the disk complement base point is at unit distance, matching the
        // usual benchmark configuration
        let z0 = DomainSpec::DiskComplement { radius: 1.0 }.default_base_point();
        assert_eq!(z0, c(2.0, 0.0));
    }

    #[test]
    fn json_schema_round_trip() {
        let txt = r#"{"type":"sector","alpha":0.5}"#;
        let d: DomainSpec = serde_json::from_str(txt).unwrap();
        assert_eq!(d, DomainSpec::Sector { alpha: 0.5 });
        let spiral = r#"{"type":"spiral","beta":0.7853981633974483,"alpha":1.0}"#;
        let d2: DomainSpec = serde_json::from_str(spiral).unwrap();
        let round = serde_json::to_string(&d2).unwrap();
        let d3: DomainSpec = serde_json::from_str(&round).unwrap();
        assert_eq!(d2, d3);
        let nested = r#"{"type":"rotated","theta":1.5707963267948966,"inner":{"type":"union","parts":[{"type":"half_plane"},{"type":"strip","width":2.0}]}}"#;
        let d4: DomainSpec = serde_json::from_str(nested).unwrap();
        assert!(matches!(d4, DomainSpec::Rotated { .. }));
        let profile = r#"{"type":"radial_profile","r":[1.0,2.0],"half_width":[0.5,null]}"#;
        let d5: DomainSpec = serde_json::from_str(profile).unwrap();
        match &d5 {
            DomainSpec::RadialProfile { half_width, .. } => {
                assert!(half_width[1].is_infinite())
            }
            _ => panic!(),
        }
    }

    #[test]
    fn unknown_domain_type_is_named_in_the_error() {
        let txt = r#"{"type":"pentagon","size":1.0}"#;
        let err = serde_json::from_str::<DomainSpec>(txt).unwrap_err();
        assert!(err.to_string().contains("pentagon"), "error was: {}", err);
    }

    #[test]
    fn validation_catches_bad_parameters() {
        assert!(DomainSpec::Sector { alpha: 0.0 }.validate().is_err());
        assert!(DomainSpec::Sector { alpha: 2.5 }.validate().is_err());
        assert!(DomainSpec::Spiral { beta: 1.6, alpha: 1.0 }.validate().is_err());
        assert!(DomainSpec::Strip { width: -1.0 }.validate().is_err());
        assert!(DomainSpec::RadialProfile { r: vec![2.0, 1.0], half_width: vec![0.5, 0.5] }
            .validate()
            .is_err());
        assert!(DomainSpec::RadialProfile { r: vec![1.0], half_width: vec![4.0] }.validate().is_err());
        assert!(DomainSpec::Sector { alpha: 1.0 }.validate().is_ok());
    }
}

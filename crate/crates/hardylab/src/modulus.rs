//! Modulus distortion of circular rings under quasiconformal maps.
//!
//! Given a Beltrami coefficient μ on the ring r < |z| < R, the module
//! computes the two length–area integrals that bracket the conformal
//! modulus of the image ring:
//!
//! I = ∫ 2π du / ∮ D₋ dθ,   J = 2π / ∮ (dθ / ∫ D₊ du),
//!
//! with u = log t and the directional distortions
//! D±(z) = |1 ± μ(z)·z̄/z|² / (1 − |μ(z)|²). For μ ≡ 0 both collapse to
//! log(R/r), the plain modulus (times 2π). The integrals use composite
//! midpoint rules in θ and u, which are exact for fields that are constant
//! on each grid cell.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::BoundInterval;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Largest Beltrami modulus the quadrature accepts; beyond this the
/// distortion weights blow up faster than any grid can resolve.
pub const KAPPA_CAP: f64 = 0.99;

/// Beltrami coefficient μ sampled on the midpoint grid of a ring, stored
/// row-major with θ as the outer index and t as the inner one.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub n_theta: usize,
    pub n_t: usize,
    pub r: f64,
    pub big_r: f64,
    pub values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct GridHeader {
    n_theta: usize,
    n_t: usize,
    r: f64,
    #[serde(rename = "R")]
    big_r: f64,
}

impl GridField {
    pub fn new(n_theta: usize, n_t: usize, r: f64, big_r: f64, values: Vec<Complex64>) -> Result<Self> {
        let field = GridField { n_theta, n_t, r, big_r, values };
        field.validate()?;
        Ok(field)
    }

    /// Sample a coefficient function at the cell midpoints.
    pub fn from_fn(
        n_theta: usize,
        n_t: usize,
        r: f64,
        big_r: f64,
        mut mu: impl FnMut(Complex64) -> Complex64,
    ) -> Result<Self> {
        let du = (big_r / r).ln() / n_t as f64;
        let dtheta = TAU / n_theta as f64;
        let mut values = Vec::with_capacity(n_theta * n_t);
        for j in 0..n_theta {
            let theta = (j as f64 + 0.5) * dtheta;
            for i in 0..n_t {
                let t = r * ((i as f64 + 0.5) * du).exp();
                values.push(mu(Complex64::from_polar(t, theta)));
            }
        }
        GridField::new(n_theta, n_t, r, big_r, values)
    }

    pub fn validate(&self) -> Result<()> {
        validate_ring(self.r, self.big_r)?;
        if self.n_theta == 0 || self.n_t == 0 {
            return Err(Error::InvalidParameter("grid field needs a nonempty grid".into()));
        }
        if self.values.len() != self.n_theta * self.n_t {
            return Err(Error::InvalidParameter(format!(
                "grid field has {} values for a {}x{} grid",
                self.values.len(),
                self.n_theta,
                self.n_t
            )));
        }
        for (idx, v) in self.values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() || v.norm() > KAPPA_CAP {
                return Err(Error::InvalidParameter(format!(
                    "grid entry {} has |mu| = {} beyond the {} cap",
                    idx,
                    v.norm(),
                    KAPPA_CAP
                )));
            }
        }
        Ok(())
    }

    /// Piecewise-constant lookup of the cell containing z.
    pub fn mu(&self, z: Complex64) -> Complex64 {
        let theta = z.arg().rem_euclid(TAU);
        let u = (z.norm() / self.r).ln();
        let l = (self.big_r / self.r).ln();
        let j = ((theta / TAU * self.n_theta as f64) as usize).min(self.n_theta - 1);
        let i = ((u / l * self.n_t as f64) as usize).min(self.n_t - 1);
        self.values[j * self.n_t + i]
    }

    /// Write as a one-line JSON header followed by one `re,im` CSV row per
    /// grid value, θ-major.
    pub fn write_to(&self, path: &Path) -> Result<()> {
        self.validate()?;
        let mut f = File::create(path)?;
        let header = GridHeader {
            n_theta: self.n_theta,
            n_t: self.n_t,
            r: self.r,
            big_r: self.big_r,
        };
        writeln!(f, "{}", serde_json::to_string(&header)?)?;
        for v in &self.values {
            writeln!(f, "{:.17e},{:.17e}", v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self> {
        let reader = BufReader::new(File::open(path)?);
        let mut lines = reader.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::Config("grid field file is empty".into()))??;
        let header: GridHeader = serde_json::from_str(&header_line)
            .map_err(|e| Error::Config(format!("bad grid field header: {e}")))?;
        let mut values = Vec::with_capacity(header.n_theta * header.n_t);
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, ',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.map(str::trim)
                    .ok_or_else(|| Error::Config(format!("grid line {} is not re,im", lineno + 2)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("grid line {}: {e}", lineno + 2)))
            };
            let re = parse(parts.next())?;
            let im = parse(parts.next())?;
            values.push(Complex64::new(re, im));
        }
        GridField::new(header.n_theta, header.n_t, header.r, header.big_r, values)
    }
}

/// Beltrami coefficient of the map whose ring distortion is being bounded.
#[derive(Debug, Clone, PartialEq)]
pub enum BeltramiField {
    /// Conformal map, μ ≡ 0.
    Zero,
    /// Fold-type coefficient: zero above the real axis, κ·z/z̄ below.
    Fold { kappa: Complex64 },
    /// Arbitrary coefficient sampled on a ring grid.
    Grid(GridField),
}

impl BeltramiField {
    pub fn validate(&self) -> Result<()> {
        match self {
            BeltramiField::Zero => Ok(()),
            BeltramiField::Fold { kappa } => {
                if kappa.norm() > KAPPA_CAP {
                    return Err(Error::InvalidParameter(format!(
                        "fold parameter |kappa| = {} beyond the {} cap",
                        kappa.norm(),
                        KAPPA_CAP
                    )));
                }
                Ok(())
            }
            BeltramiField::Grid(g) => g.validate(),
        }
    }

    /// Coefficient at z; points on the fold axis take the conformal side.
    pub fn mu(&self, z: Complex64) -> Complex64 {
        match self {
            BeltramiField::Zero => Complex64::new(0.0, 0.0),
            BeltramiField::Fold { kappa } => {
                if z.im < 0.0 {
                    kappa * z / z.conj()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            BeltramiField::Grid(g) => g.mu(z),
        }
    }
}

/// Directional distortion weights of a coefficient value at z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionPair {
    /// Weight D₋ of radial stretching, entering the lower integral I.
    pub d_minus: f64,
    /// Weight D₊ of angular stretching, entering the upper integral J.
    pub d_plus: f64,
}

/// Evaluate D±(z) = |1 ± μ·z̄/z|²/(1 − |μ|²).
pub fn distortion_fields(field: &BeltramiField, z: Complex64) -> Result<DistortionPair> {
    let m = field.mu(z);
    let denom = 1.0 - m.norm_sqr();
    if denom <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "degenerate dilatation |mu| >= 1 at {z}"
        )));
    }
    let w = m * z.conj() / z;
    let one = Complex64::new(1.0, 0.0);
    Ok(DistortionPair {
        d_minus: (one - w).norm_sqr() / denom,
        d_plus: (one + w).norm_sqr() / denom,
    })
}

/// The two ring integrals (I, J).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusBounds {
    #[serde(rename = "I")]
    pub i: f64,
    #[serde(rename = "J")]
    pub j: f64,
}

fn validate_ring(r: f64, big_r: f64) -> Result<()> {
    if !(r > 0.0 && r < big_r && big_r <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "ring radii must satisfy 0 < r < R <= 1, got r = {r}, R = {big_r}"
        )));
    }
    Ok(())
}

fn validate_grid_size(n_theta: usize, n_t: usize) -> Result<()> {
    if n_theta < 512 || !n_theta.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "angular grid must be a power of two of at least 512, got {n_theta}"
        )));
    }
    if n_t < 256 || !n_t.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "radial grid must be a power of two of at least 256, got {n_t}"
        )));
    }
    Ok(())
}

/// Compute the bracketing integrals on the ring r < |z| < R with composite
/// midpoint rules of the given sizes. For fold fields the θ rule is exact
/// because the grid midpoints split evenly between the two half planes.
pub fn modulus_bounds(
    field: &BeltramiField,
    r: f64,
    big_r: f64,
    n_theta: usize,
    n_t: usize,
) -> Result<ModulusBounds> {
    field.validate()?;
    validate_ring(r, big_r)?;
    validate_grid_size(n_theta, n_t)?;

    let length = (big_r / r).ln();
    let du = length / n_t as f64;
    let dtheta = TAU / n_theta as f64;
    let mut row_minus = vec![0.0f64; n_t];
    let mut col_plus = vec![0.0f64; n_theta];
    for j in 0..n_theta {
        let theta = (j as f64 + 0.5) * dtheta;
        for i in 0..n_t {
            let t = r * ((i as f64 + 0.5) * du).exp();
            let z = Complex64::from_polar(t, theta);
            let d = distortion_fields(field, z)?;
            row_minus[i] += d.d_minus;
            col_plus[j] += d.d_plus;
        }
    }
    // I: each u-slice contributes du weighted by the circle average of D₋
    let i_val: f64 = row_minus.iter().map(|s| du * n_theta as f64 / s).sum();
    // J: harmonic combination of the per-ray integrals of D₊
    let denom: f64 = col_plus.iter().map(|s| dtheta / (s * du)).sum();
    Ok(ModulusBounds { i: i_val, j: TAU / denom })
}

/// Range the ring integrals can take for a map of maximal dilatation K that
/// is conformal in the upper half plane: both lie in
/// [2/(K+1)·L, 2K/(K+1)·L] where L = log(R/r). In terms of the dilatation
/// bound κ = (K−1)/(K+1) on the lower half plane the band is
/// [(1−κ)·L, (1+κ)·L].
pub fn conformal_halfplane_band(big_k: f64, r: f64, big_r: f64) -> Result<BoundInterval> {
    if !(big_k >= 1.0 && big_k.is_finite()) {
        return Err(Error::InvalidParameter(format!("band needs K >= 1, got {big_k}")));
    }
    if !(r > 0.0 && r < big_r && big_r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "band needs ring radii 0 < r < R, got r = {r}, R = {big_r}"
        )));
    }
    let length = (big_r / r).ln();
    Ok(BoundInterval {
        lo: 2.0 / (big_k + 1.0) * length,
        hi: 2.0 * big_k / (big_k + 1.0) * length,
        provenance: vec!["halfplane_conformal_ring".to_string()],
    })
}

//! Conformal and quasiconformal model maps of the plane.
//!
//! The estimators in this crate are cross-checked against image domains of a
//! few explicit maps: the power map z^λ on the upper half plane (its image is
//! a spiral domain), the fold map that stretches the lower half plane across
//! the real axis, and a piecewise sector map with constant Beltrami
//! coefficient. All of them use double precision and principal branches.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Principal argument in (−π, π]. `atan2` returns −π for a negative real
/// number approached with a negative zero imaginary part; we fold that single
/// value back to +π so the convention is half-open.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// Principal logarithm with the argument convention of [`principal_arg`].
pub fn principal_ln(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), principal_arg(z))
}

/// The power map z ↦ z^λ = exp(λ log z) restricted to the upper half plane,
/// with the branch 0 < Im log z < π.
///
/// For λ = α e^{iβ} cos β the image of the upper half plane is the spiral
/// domain with twist β and opening πα, which is why this map shows up in the
/// closed-form catalogue of Hardy numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerMapSpec {
    pub lambda: Complex64,
}

impl PowerMapSpec {
    /// Requires |λ − 1| ≤ 1 and λ ≠ 0 so the image is a spiral domain with
    /// opening at most 2π and the map is injective on the half plane.
    pub fn new(lambda: Complex64) -> Result<Self> {
        if lambda == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParameter("power map exponent must be nonzero".into()));
        }
        if (lambda - 1.0).norm() > 1.0 + 1e-15 {
            return Err(Error::InvalidParameter(format!(
                "power map exponent {} outside the disk |lambda - 1| <= 1",
                lambda
            )));
        }
        Ok(Self { lambda })
    }

    /// Evaluate z^λ for Im z > 0.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if !(z.im > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "power map is defined on the open upper half plane, got {}",
                z
            )));
        }
        // principal log has arg in (0, π) here, matching the branch cut on
        // the positive real axis
        Ok((self.lambda * z.ln()).exp())
    }

    /// Twist angle of the image spiral domain, arg λ.
    pub fn image_twist(&self) -> f64 {
        principal_arg(self.lambda)
    }

    /// Opening parameter of the image spiral domain, |λ|²/Re λ (the image is
    /// the union of spirals through angles 0 < θ < π·opening).
    pub fn image_opening(&self) -> f64 {
        self.lambda.norm_sqr() / self.lambda.re
    }
}

/// The fold map g_κ: identity-like power z^{1+κ} on the closed upper half
/// plane, z·z̄^κ below the real axis. It is a quasiconformal homeomorphism of
/// the plane whose Beltrami coefficient is supported on the lower half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldMapSpec {
    pub kappa: Complex64,
}

impl FoldMapSpec {
    /// Requires |κ| < 1 so the map stays quasiconformal.
    pub fn new(kappa: Complex64) -> Result<Self> {
        if kappa.norm() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "fold parameter must satisfy |kappa| < 1, got |{}| = {}",
                kappa,
                kappa.norm()
            )));
        }
        Ok(Self { kappa })
    }

    /// Evaluate the fold map. g(0) = 0 by continuity.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.re == 0.0 && z.im == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if z.im >= 0.0 {
            // z^{1+κ} with arg z in [0, π]
            ((1.0 + self.kappa) * principal_ln(z)).exp()
        } else {
            // z · z̄^κ; conj(z) lies in the upper half plane so the principal
            // log continues the branch of the other side
            z * (self.kappa * principal_ln(z.conj())).exp()
        }
    }

    /// Beltrami coefficient μ(z) = ∂̄g/∂g: zero above the real axis,
    /// κ·z/z̄ below, undefined on the axis itself.
    pub fn beltrami(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Err(Error::InvalidParameter(
                "Beltrami coefficient of the fold map is undefined on the real axis".into(),
            ));
        }
        if z.im > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Ok(self.kappa * z / z.conj())
        }
    }
}

/// Maximal dilatation K = (1 + |κ|)/(1 − |κ|) of a map with Beltrami
/// coefficient of modulus |κ| < 1.
pub fn maximal_dilatation(kappa: Complex64) -> Result<f64> {
    let k = kappa.norm();
    if k >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "dilatation requires |kappa| < 1, got {}",
            k
        )));
    }
    Ok((1.0 + k) / (1.0 - k))
}

/// Magnitude of the Beltrami coefficient of g_{κ'} ∘ g_κ^{−1}:
/// |(κ' − κ)/(1 − κ̄ κ')|. This is < 1 whenever both inputs are, which is the
/// composition rule used to compare two fold maps.
pub fn composed_dilatation_magnitude(kappa: Complex64, kappa2: Complex64) -> Result<f64> {
    for k in [kappa, kappa2] {
        if k.norm() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "composition requires |kappa| < 1, got {}",
                k.norm()
            )));
        }
    }
    Ok(((kappa2 - kappa) / (Complex64::new(1.0, 0.0) - kappa.conj() * kappa2)).norm())
}

/// Piecewise-defined quasiconformal map that compresses the sector
/// 0 < arg z < πα onto the thinner sector 0 < arg z < πβ while expanding the
/// complementary sector, with constant Beltrami modulus. Its dilatation is
/// exactly the prescribed K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorQcMapSpec {
    pub k: f64,
    pub alpha: f64,
}

impl SectorQcMapSpec {
    /// K ≥ 1 is the dilatation budget; α ∈ (0, 2) is the source sector
    /// opening as a fraction of π.
    pub fn new(k: f64, alpha: f64) -> Result<Self> {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!("dilatation must be >= 1, got {}", k)));
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::InvalidParameter(format!(
                "sector opening fraction must lie in (0, 2), got {}",
                alpha
            )));
        }
        Ok(Self { k, alpha })
    }

    /// Interpolation factor L = (1 − α/2)·K + α/2.
    pub fn stretch(&self) -> f64 {
        (1.0 - self.alpha / 2.0) * self.k + self.alpha / 2.0
    }

    /// Target sector opening β = α/L.
    pub fn target_opening(&self) -> f64 {
        self.alpha / self.stretch()
    }

    /// Constant modulus of the Beltrami coefficient,
    /// (α − β)/(1 − (α − 1)(β − 1)). Equals (K − 1)/(K + 1).
    pub fn dilatation_norm(&self) -> f64 {
        let a = self.alpha;
        let b = self.target_opening();
        (a - b) / (1.0 - (a - 1.0) * (b - 1.0))
    }

    /// Evaluate the map. The argument is taken in (−π(2−α), πα] so that the
    /// two branches tile the punctured plane exactly once; this is the one
    /// place in the crate that does not use the principal convention.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.re == 0.0 && z.im == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let a = self.alpha;
        let b = self.target_opening();
        let mut phi = principal_arg(z);
        if phi > std::f64::consts::PI * a {
            phi -= 2.0 * std::f64::consts::PI;
        }
        let ln_r = z.norm().ln();
        if phi >= 0.0 {
            // contraction branch on the source sector
            Complex64::new(b / a * ln_r, b / a * phi).exp()
        } else {
            // expansion branch on the complementary sector
            Complex64::new(b / a * ln_r, (2.0 - b) / (2.0 - a) * phi).exp()
        }
    }
}

/// Cayley transform z ↦ i(1+z)/(1−z) from the unit disk onto the upper half
/// plane. The benchmark map whose Hardy exponent is exactly 1.
pub fn cayley(z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "cayley transform needs |z| < 1, got |{}| = {}",
            z,
            z.norm()
        )));
    }
    Ok(Complex64::new(0.0, 1.0) * (1.0 + z) / (1.0 - z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64, what: &str) {
        assert!(
            (a - b).norm() <= tol,
            "{}: {} vs {} differ by {:e}",
            what,
            a,
            b,
            (a - b).norm()
        );
    }

    #[test]
    fn power_map_identity_exponent_fixes_points() {
        let m = PowerMapSpec::new(c(1.0, 0.0)).unwrap();
        assert_close(m.eval(c(0.0, 2.0)).unwrap(), c(0.0, 2.0), 1e-15, "z^1 at 2i");
    }

    #[test]
    fn power_map_square_of_i_is_minus_one() {
        let m = PowerMapSpec::new(c(2.0, 0.0)).unwrap();
        assert_close(m.eval(c(0.0, 1.0)).unwrap(), c(-1.0, 0.0), 1e-12, "i^2");
    }

    #[test]
    fn power_map_complex_exponent_shrinks_modulus() {
        // i^(1+i) = exp((1+i)·iπ/2) = e^{-π/2}·i
        let m = PowerMapSpec::new(c(1.0, 1.0)).unwrap();
        let want = c(0.0, (-PI / 2.0).exp());
        assert_close(m.eval(c(0.0, 1.0)).unwrap(), want, 1e-12, "i^(1+i)");
    }

    #[test]
    fn power_map_rejects_bad_inputs() {
        assert!(PowerMapSpec::new(c(0.0, 0.0)).is_err());
        assert!(PowerMapSpec::new(c(2.5, 0.0)).is_err());
        let m = PowerMapSpec::new(c(1.5, 0.0)).unwrap();
        assert!(m.eval(c(1.0, 0.0)).is_err());
        assert!(m.eval(c(1.0, -0.5)).is_err());
    }

    #[test]
    fn power_map_modulus_law() {
        // |z^λ| = e^{−Im λ · arg z} · |z|^{Re λ} on a deterministic grid
        let m = PowerMapSpec::new(c(0.8, 0.35)).unwrap();
        for i in 0..40 {
            for j in 1..20 {
                let r = 0.05 * ((i as f64) + 1.0);
                let th = PI * (j as f64) / 20.0;
                let z = Complex64::from_polar(r, th);
                let w = m.eval(z).unwrap();
                let want = (-m.lambda.im * th).exp() * r.powf(m.lambda.re);
                assert!(
                    (w.norm() - want).abs() <= 1e-12 * (1.0 + want),
                    "modulus law failed at r={} th={}",
                    r,
                    th
                );
            }
        }
    }

    #[test]
    fn fold_map_rotates_i_by_two_thirds_pi() {
        let m = FoldMapSpec::new(c(1.0 / 3.0, 0.0)).unwrap();
        let want = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert_close(m.eval(c(0.0, 1.0)), want, 1e-12, "fold at i");
    }

    #[test]
    fn fold_map_lower_half_plane_branch() {
        let m = FoldMapSpec::new(c(1.0 / 3.0, 0.0)).unwrap();
        let want = Complex64::from_polar(1.0, -PI / 3.0);
        assert_close(m.eval(c(0.0, -1.0)), want, 1e-12, "fold at -i");
    }

    #[test]
    fn fold_map_fixes_origin_and_positive_axis() {
        let m = FoldMapSpec::new(c(0.25, 0.1)).unwrap();
        assert_eq!(m.eval(c(0.0, 0.0)), c(0.0, 0.0));
        let w = m.eval(c(2.0, 0.0));
        // positive reals map to 2^{1+κ}, still on a fixed logarithmic curve
        let want = ((1.0 + m.kappa) * c(2.0f64.ln(), 0.0)).exp();
        assert_close(w, want, 1e-14, "fold on positive axis");
    }

    #[test]
    fn fold_map_is_continuous_across_the_real_axis() {
        // approach 1000 points of R \ {0} from both sides at height 1e-8·|x|
        let m = FoldMapSpec::new(c(0.37, -0.21)).unwrap();
        for i in 0..1000 {
            let t = -6.0 + 12.0 * (i as f64) / 999.0;
            for sign in [1.0f64, -1.0] {
                let x = sign * 10f64.powf(t);
                let above = m.eval(c(x, 1e-8 * x.abs()));
                let below = m.eval(c(x, -1e-8 * x.abs()));
                let scale = 1.0 + above.norm();
                assert!(
                    (above - below).norm() <= 1e-6 * scale,
                    "seam jump at x={}: {:e}",
                    x,
                    (above - below).norm() / scale
                );
            }
        }
    }

    #[test]
    fn fold_seam_mismatch_vanishes_with_height() {
        // the two one-sided limits agree in the limit; halving the height
        // should roughly halve the mismatch, and at 1e-12·|x| it is tiny
        let m = FoldMapSpec::new(c(0.37, -0.21)).unwrap();
        let x = -3.7;
        let above = m.eval(c(x, 1e-12 * x.abs()));
        let below = m.eval(c(x, -1e-12 * x.abs()));
        assert!((above - below).norm() <= 1e-10 * (1.0 + above.norm()));
    }

    #[test]
    fn beltrami_of_fold_map() {
        let m = FoldMapSpec::new(c(0.0, 0.5)).unwrap();
        assert_eq!(m.beltrami(c(3.0, 2.0)).unwrap(), c(0.0, 0.0));
        // (i/2)·(1−i)/(1+i) = (i/2)(−i) = 1/2
        assert_close(m.beltrami(c(1.0, -1.0)).unwrap(), c(0.5, 0.0), 1e-15, "fold beltrami");
        assert!(m.beltrami(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn beltrami_magnitude_is_constant_kappa() {
        let m = FoldMapSpec::new(c(0.3, 0.4)).unwrap();
        for i in 1..50 {
            let z = Complex64::from_polar(0.3 * i as f64, -PI * (i as f64) / 51.0);
            let mu = m.beltrami(z).unwrap();
            assert!((mu.norm() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn dilatation_values() {
        assert!((maximal_dilatation(c(1.0 / 3.0, 0.0)).unwrap() - 2.0).abs() < 1e-15);
        assert!((maximal_dilatation(c(-0.5, 0.0)).unwrap() - 3.0).abs() < 1e-15);
        assert!(maximal_dilatation(c(0.0, 1.0)).is_err());
    }

    #[test]
    fn composed_dilatation_examples() {
        assert_eq!(composed_dilatation_magnitude(c(0.0, 0.3), c(0.0, 0.3)).unwrap(), 0.0);
        let v = composed_dilatation_magnitude(c(0.5, 0.0), c(-0.5, 0.0)).unwrap();
        assert!((v - 0.8).abs() < 1e-15, "got {}", v);
        assert!((composed_dilatation_magnitude(c(0.0, 0.0), c(0.4, 0.0)).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn sector_map_examples() {
        let m = SectorQcMapSpec::new(2.0, 1.0).unwrap();
        assert!((m.stretch() - 1.5).abs() < 1e-15);
        assert!((m.target_opening() - 2.0 / 3.0).abs() < 1e-15);
        assert_close(m.eval(c(1.0, 0.0)), c(1.0, 0.0), 1e-15, "fixed ray");
        assert_close(
            m.eval(c(-1.0, 0.0)),
            Complex64::from_polar(1.0, 2.0 * PI / 3.0),
            1e-12,
            "upper branch at e^{i pi}",
        );
        assert_close(
            m.eval(c(0.0, -1.0)),
            Complex64::from_polar(1.0, -2.0 * PI / 3.0),
            1e-12,
            "lower branch at e^{-i pi/2}",
        );
    }

    #[test]
    fn sector_map_seams_are_continuous() {
        // both seams: arg = 0 (shared ray) and the wrap seam at arg = πα
        let m = SectorQcMapSpec::new(3.0, 0.7).unwrap();
        let a = m.alpha;
        for i in 1..=1000 {
            let x = 10f64.powf(-4.0 + 8.0 * (i as f64) / 1000.0);
            let eps = 1e-9;
            // seam on the positive real axis
            let up = m.eval(Complex64::from_polar(x, eps));
            let down = m.eval(Complex64::from_polar(x, -eps));
            assert!((up - down).norm() <= 1e-7 * (1.0 + up.norm()), "axis seam at {}", x);
            // wrap seam at arg = πα vs arg = πα − 2π
            let inside = m.eval(Complex64::from_polar(x, PI * a - eps));
            let outside = m.eval(Complex64::from_polar(x, PI * a + eps));
            assert!(
                (inside - outside).norm() <= 1e-7 * (1.0 + inside.norm()),
                "wrap seam at {}",
                x
            );
        }
    }

    #[test]
    fn sector_map_dilatation_norm_identity() {
        // ‖μ‖ = (K−1)/(K+1) for a grid of K and α values
        for ik in 0..40 {
            let k = 1.0 + 0.25 * ik as f64;
            for ia in 1..20 {
                let alpha = ia as f64 / 10.0;
                let m = SectorQcMapSpec::new(k, alpha).unwrap();
                let want = (k - 1.0) / (k + 1.0);
                assert!(
                    (m.dilatation_norm() - want).abs() <= 1e-12,
                    "K={} alpha={}: {} vs {}",
                    k,
                    alpha,
                    m.dilatation_norm(),
                    want
                );
            }
        }
    }

    #[test]
    fn holder_exponent_identity_for_fold_maps() {
        // on the upper half plane |g_k(z)| = |z|^{1+k} and 1+k = 2K/(K+1)
        for ik in 1..40 {
            let k = ik as f64 / 40.0;
            let kk = maximal_dilatation(c(k, 0.0)).unwrap();
            assert!(((1.0 + k) - 2.0 * kk / (kk + 1.0)).abs() < 1e-12);
            let m = FoldMapSpec::new(c(k, 0.0)).unwrap();
            let z = Complex64::from_polar(3.0, 1.1);
            assert!((m.eval(z).norm() - 3f64.powf(1.0 + k)).abs() < 1e-12 * 3f64.powf(1.0 + k));
        }
    }

    #[test]
    fn cayley_examples() {
        assert_close(cayley(c(0.0, 0.0)).unwrap(), c(0.0, 1.0), 1e-15, "cayley at 0");
        assert_close(cayley(c(0.9, 0.0)).unwrap(), c(0.0, 19.0), 1e-12, "cayley at 0.9");
        assert!(cayley(c(-1.0, 0.0)).is_err());
        // boundary behaviour as a limit: values blow up but stay in the
        // upper half plane
        let w = cayley(c(0.999999, 0.0)).unwrap();
        assert!(w.im > 1e5);
    }

    #[test]
    fn cayley_maps_into_upper_half_plane() {
        for i in 0..200 {
            let r = (i as f64 / 200.0) * 0.999;
            let th = 2.0 * PI * (i as f64) / 199.2;
            let w = cayley(Complex64::from_polar(r, th)).unwrap();
            assert!(w.im > 0.0, "image left the half plane at r={} th={}", r, th);
        }
    }
}

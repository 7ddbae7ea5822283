//! Serde adapters shared by the JSON schemas.
//!
//! Complex numbers travel as two-element arrays `[re, im]`. JSON has no
//! representation for IEEE infinity, so quantities that may be unbounded
//! (half widths, confidence limits) are encoded as `null` when infinite.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `#[serde(with = "complex")]` for Complex64 fields: `[re, im]`.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        if !re.is_finite() || !im.is_finite() {
            return Err(D::Error::custom("complex components must be finite"));
        }
        Ok(Complex64::new(re, im))
    }
}

/// `#[serde(with = "complex_or_real")]` for Complex64 fields that are
/// usually real: accepts a bare number or `[re, im]`, and writes a bare
/// number back when the imaginary part is zero.
pub mod complex_or_real {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        if v.im == 0.0 {
            s.serialize_f64(v.re)
        } else {
            [v.re, v.im].serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Real(f64),
            Pair([f64; 2]),
        }
        let z = match Raw::deserialize(d)? {
            Raw::Real(re) => Complex64::new(re, 0.0),
            Raw::Pair([re, im]) => Complex64::new(re, im),
        };
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(D::Error::custom("complex components must be finite"));
        }
        Ok(z)
    }
}

/// `#[serde(with = "complex_opt")]` for Option<Complex64> fields: absent or
/// `null` means None, otherwise `[re, im]`.
pub mod complex_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|z| [z.re, z.im]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        let pair = Option::<[f64; 2]>::deserialize(d)?;
        match pair {
            None => Ok(None),
            Some([re, im]) => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom("complex components must be finite"));
                }
                Ok(Some(Complex64::new(re, im)))
            }
        }
    }
}

/// `#[serde(with = "maybe_infinite")]` for a single f64 that may be +∞.
pub mod maybe_infinite {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let v = Option::<f64>::deserialize(d)?;
        Ok(v.unwrap_or(f64::INFINITY))
    }
}

/// `#[serde(with = "maybe_infinite_vec")]` for Vec<f64> entries that may be
/// +∞ (encoded entry-wise as `null`).
pub mod maybe_infinite_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let opts: Vec<Option<f64>> =
            v.iter().map(|x| if x.is_finite() { Some(*x) } else { None }).collect();
        opts.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let opts = Vec::<Option<f64>>::deserialize(d)?;
        Ok(opts.into_iter().map(|x| x.unwrap_or(f64::INFINITY)).collect())
    }
}

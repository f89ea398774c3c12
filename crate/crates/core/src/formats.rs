//! JSON file forms for series, disk unions, point lists and function
//! representations. Floats are written in shortest round-trip form, so
//! write-then-read reproduces every value bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::holo::HoloSeries;
use crate::opcalc::QFunctionRep;
use crate::qalgebra::QSeries;
use crate::qtopology::DiskUnion;

/// Which multiplication a stored table is meant for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Standard,
    Opposite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub i: usize,
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub q: [f64; 2],
    pub trunc: usize,
    pub terms: Vec<TermRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<Plane>,
}

impl SeriesFile {
    pub fn from_series(f: &QSeries, plane: Option<Plane>) -> Self {
        Self {
            q: [f.q().re, f.q().im],
            trunc: f.degree(),
            terms: f
                .terms()
                .map(|(i, k, c)| TermRecord {
                    i,
                    k,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
            plane,
        }
    }

    pub fn to_series(&self) -> Result<QSeries> {
        let q = Complex64::new(self.q[0], self.q[1]);
        ensure_finite(&[q], "q")?;
        QSeries::from_terms(
            q,
            self.trunc,
            self.terms.iter().map(|t| (t.i, t.k, Complex64::new(t.re, t.im))),
        )
        .map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn write_series(f: &QSeries, plane: Option<Plane>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SeriesFile::from_series(f, plane))?)
}

pub fn read_series(text: &str) -> Result<(QSeries, Option<Plane>)> {
    let file: SeriesFile = serde_json::from_str(text)?;
    Ok((file.to_series()?, file.plane))
}

pub fn write_disks(u: &DiskUnion) -> Result<String> {
    Ok(serde_json::to_string_pretty(u)?)
}

pub fn read_disks(text: &str) -> Result<DiskUnion> {
    let u: DiskUnion = serde_json::from_str(text)?;
    u.validate().map_err(|e| Error::Format(e.to_string()))?;
    Ok(u)
}

pub fn write_points(points: &[Complex64]) -> Result<String> {
    let pairs: Vec<[f64; 2]> = points.iter().map(|z| [z.re, z.im]).collect();
    Ok(serde_json::to_string(&pairs)?)
}

pub fn read_points(text: &str) -> Result<Vec<Complex64>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    let points: Vec<_> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    ensure_finite(&points, "points")?;
    Ok(points)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub q: [f64; 2],
    pub r_x: f64,
    pub r_y: f64,
    pub f_list: Vec<Vec<[f64; 2]>>,
}

impl FunctionFile {
    pub fn from_rep(f: &QFunctionRep) -> Self {
        Self {
            q: [f.q().re, f.q().im],
            r_x: f.r_x(),
            r_y: f.r_y(),
            f_list: f
                .f_list()
                .iter()
                .map(|h| h.coeffs().iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        }
    }

    pub fn to_rep(&self) -> Result<QFunctionRep> {
        let rows = self
            .f_list
            .iter()
            .map(|row| HoloSeries::new(row.iter().map(|p| Complex64::new(p[0], p[1])).collect()))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Format(e.to_string()))?;
        QFunctionRep::new(Complex64::new(self.q[0], self.q[1]), rows, self.r_x, self.r_y)
            .map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn write_function(f: &QFunctionRep) -> Result<String> {
    Ok(serde_json::to_string_pretty(&FunctionFile::from_rep(f))?)
}

pub fn read_function(text: &str) -> Result<QFunctionRep> {
    serde_json::from_str::<FunctionFile>(text)?.to_rep()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::log_mixture;
    use crate::qtopology::{Disk, QSet};
    use crate::sampling::{random_qseries, SeriesShape};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn series_layout() {
        let q = Complex64::new(0.5, 0.0);
        let f = QSeries::monomial(q, 2, 1, 1, Complex64::new(0.5, -1.0)).unwrap();
        let text = write_series(&f, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["q"], serde_json::json!([0.5, 0.0]));
        assert_eq!(v["trunc"], 2);
        assert_eq!(v["terms"], serde_json::json!([{"i": 1, "k": 1, "re": 0.5, "im": -1.0}]));
        assert!(v.get("plane").is_none());
    }

    #[test]
    fn rejects_terms_beyond_truncation() {
        let text = r#"{"q":[0.5,0],"trunc":1,"terms":[{"i":2,"k":0,"re":1,"im":0}]}"#;
        assert!(matches!(read_series(text), Err(Error::Format(_))));
        assert!(matches!(read_series("{"), Err(Error::Format(_))));
        let zero_q = r#"{"q":[0,0],"trunc":1,"terms":[]}"#;
        assert!(read_series(zero_q).is_err());
    }

    #[test]
    fn plane_marker_round_trips() {
        let f = QSeries::x(Complex64::new(0.5, 0.0), 3).unwrap();
        let (g, plane) = read_series(&write_series(&f, Some(Plane::Opposite)).unwrap()).unwrap();
        assert_eq!(plane, Some(Plane::Opposite));
        assert_eq!(g, f);
    }

    proptest! {
        #[test]
        fn series_round_trip_is_bit_exact(seed in any::<u64>(), re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = Complex64::new(re, im);
            prop_assume!(q.norm() > 1e-3);
            let f = random_qseries(&mut rng, q, 5, 8, 5, SeriesShape::Any);
            let (g, _) = read_series(&write_series(&f, None).unwrap()).unwrap();
            for ((a, b), c) in f.terms().zip(g.terms()).zip(0..) {
                prop_assert_eq!(a.2.re.to_bits(), b.2.re.to_bits(), "term {}", c);
                prop_assert_eq!(a.2.im.to_bits(), b.2.im.to_bits());
            }
            prop_assert_eq!(f.q().re.to_bits(), g.q().re.to_bits());
            prop_assert_eq!(f, g);
        }
    }

    #[test]
    fn disks_and_points() {
        let u = DiskUnion::new(vec![Disk::new(Complex64::new(1.0, -0.5), 0.1).unwrap()]);
        let text = write_disks(&u).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v, serde_json::json!([{"re": 1.0, "im": -0.5, "radius": 0.1}]));
        let back = read_disks(&text).unwrap();
        assert!(back.contains(Complex64::new(1.05, -0.5)));
        assert!(read_disks(r#"[{"re":0,"im":0,"radius":-1}]"#).is_err());
        let pts = vec![Complex64::new(0.1, 0.2), Complex64::new(-3.0, 1e-300)];
        assert_eq!(read_points(&write_points(&pts).unwrap()).unwrap(), pts);
    }

    #[test]
    fn function_round_trip() {
        let f = log_mixture(Complex64::new(0.5, 0.0), 5, 7).unwrap();
        let back = read_function(&write_function(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"q":[0.5,0],"r_x":-1,"r_y":1,"f_list":[[[1,0]]]}"#;
        assert!(read_function(bad).is_err());
    }
}

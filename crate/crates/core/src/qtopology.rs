//! Finite descriptions of q-open sets: unions of open disks, their q-hulls,
//! spiral neighbourhoods of points and the q-closure of a point.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A set with decidable membership and a finite bounding radius.
pub trait QSet {
    /// Whether `z ∈ scale·S`. `scale = 0` gives `{0}` for nonempty `S`.
    fn contains_scaled(&self, z: Complex64, scale: Complex64) -> bool;

    /// Some `R` with `S ⊆ B̄(0, R)`; `0` for the empty set.
    fn bound(&self) -> f64;

    fn contains(&self, z: Complex64) -> bool {
        self.contains_scaled(z, Complex64::new(1.0, 0.0))
    }
}

/// The open disk `B(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(rename = "re")]
    center_re: f64,
    #[serde(rename = "im")]
    center_im: f64,
    radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        ensure_finite(&[center], "disk center")?;
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            center_re: center.re,
            center_im: center.im,
            radius,
        })
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center_re, self.center_im)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Strict inequality: boundary points are outside.
    pub fn contains_scaled(&self, z: Complex64, scale: Complex64) -> bool {
        (z - scale * self.center()).norm() < scale.norm() * self.radius
    }
}

/// A finite union of open disks; may be empty.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DiskUnion {
    disks: Vec<Disk>,
}

impl DiskUnion {
    pub fn new(disks: Vec<Disk>) -> Self {
        Self { disks }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn push(&mut self, disk: Disk) {
        self.disks.push(disk);
    }

    /// Re-validates disks read from an untrusted source.
    pub fn validate(&self) -> Result<()> {
        for d in &self.disks {
            Disk::new(d.center(), d.radius)?;
        }
        Ok(())
    }
}

impl QSet for DiskUnion {
    fn contains_scaled(&self, z: Complex64, scale: Complex64) -> bool {
        self.disks.iter().any(|d| d.contains_scaled(z, scale))
    }

    fn bound(&self) -> f64 {
        self.disks
            .iter()
            .map(|d| d.center().norm() + d.radius)
            .fold(0.0, f64::max)
    }
}

/// The q-hull `{0} ∪ ⋃_{n≥0} qⁿS` of a base set, evaluated lazily.
#[derive(Clone, Debug, PartialEq)]
pub struct QHull<S> {
    base: S,
    q: Complex64,
}

impl<S: QSet> QHull<S> {
    pub fn new(base: S, q: Complex64) -> Result<Self> {
        check_contractive(q)?;
        Ok(Self { base, q })
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }
}

impl<S: QSet> QSet for QHull<S> {
    fn contains_scaled(&self, z: Complex64, scale: Complex64) -> bool {
        if z == ZERO {
            return true;
        }
        let (r, target) = (self.base.bound(), z.norm());
        let mut s = scale;
        // beyond this point every copy qⁿS lies inside B(0, |z|)
        while s.norm() * r > target {
            if self.base.contains_scaled(z, s) {
                return true;
            }
            s *= self.q;
        }
        false
    }

    fn bound(&self) -> f64 {
        self.base.bound()
    }
}

/// Membership through an arbitrary predicate with a known bounding radius.
pub struct PredicateSet<F> {
    predicate: F,
    bound: f64,
}

impl<F: Fn(Complex64) -> bool> PredicateSet<F> {
    pub fn new(predicate: F, bound: f64) -> Self {
        Self { predicate, bound }
    }
}

impl<F: Fn(Complex64) -> bool> QSet for PredicateSet<F> {
    fn contains_scaled(&self, z: Complex64, scale: Complex64) -> bool {
        if scale == ZERO {
            return z == ZERO && (self.predicate)(ZERO);
        }
        (self.predicate)(z / scale)
    }

    fn bound(&self) -> f64 {
        self.bound
    }
}

fn check_contractive(q: Complex64) -> Result<()> {
    let a = q.norm();
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("need 0 < |q| < 1, got |q| = {a}")))
    }
}

pub fn qhull_contains<S: QSet>(hull: &QHull<S>, z: Complex64) -> bool {
    hull.contains(z)
}

/// `B(0, ε) ∪ ⋃_{m=0}^{n} B(qᵐλ, |q|ᵐδ)` with `n` minimal such that
/// `|q|ⁿ⁺¹(|λ| + δ) ≤ ε`.
pub fn spiral_neighborhood(lambda: Complex64, eps: f64, delta: f64, q: Complex64) -> Result<DiskUnion> {
    check_contractive(q)?;
    if lambda == ZERO {
        return Err(Error::InvalidArgument(
            "lambda = 0: use the single disk B(0, eps)".into(),
        ));
    }
    let mut out = DiskUnion::new(vec![Disk::new(ZERO, eps)?]);
    let (qa, reach) = (q.norm(), lambda.norm() + delta);
    let mut center = lambda;
    let mut scale = 1.0;
    loop {
        out.push(Disk::new(center, scale * delta)?);
        scale *= qa;
        center *= q;
        if scale * reach <= eps {
            return Ok(out);
        }
    }
}

/// `{q⁻ᵏx : 0 ≤ k ≤ k_max}`, the first points of the q-closure of `x`.
pub fn point_q_closure(x: Complex64, k_max: usize, q: Complex64) -> Result<Vec<Complex64>> {
    check_contractive(q)?;
    let mut out = Vec::with_capacity(k_max + 1);
    let mut p = x;
    for _ in 0..=k_max {
        out.push(p);
        p /= q;
    }
    Ok(out)
}

/// Quasicompactness in the disk topology is boundedness.
pub fn is_quasicompact_d<S: QSet>(set: &S) -> bool {
    set.bound().is_finite()
}

/// Boundedness of an explicit point set.
pub fn points_bounded(points: &[Complex64]) -> bool {
    points.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// One-sided randomized test of the q-spiraling property: `0 ∈ S` and
/// `q·z ∈ S` for `samples` points drawn uniformly from `S` by rejection in
/// its bounding box. A `false` answer carries a counterexample; `true` is
/// evidence only.
pub fn is_q_spiraling<S: QSet>(set: &S, q: Complex64, samples: usize, seed: u64) -> Result<bool> {
    check_contractive(q)?;
    if !set.contains(ZERO) {
        return Ok(false);
    }
    let r = set.bound();
    if r == 0.0 || samples == 0 {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = samples.saturating_mul(1000).saturating_add(1000);
    let mut accepted = 0;
    for _ in 0..budget {
        let z = Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r));
        if !set.contains(z) {
            continue;
        }
        if !set.contains(q * z) {
            return Ok(false);
        }
        accepted += 1;
        if accepted == samples {
            return Ok(true);
        }
    }
    Err(Error::Sampling {
        accepted,
        requested: samples,
    })
}

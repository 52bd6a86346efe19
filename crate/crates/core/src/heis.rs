//! The Heisenberg group `ℂ × ℝ`: group law, Korányi norm and gauge distance,
//! the circle-bundle projection `Π(z,t) = t + i|z|²` onto the Poincaré
//! half-plane, its trivializing chart, and the contact form
//! `ω = dt - i z̄ dz + i z dz̄`.

use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// A point `(z, t)` of the Heisenberg group, `z` the horizontal coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    pub z: Complex64,
    pub t: f64,
}

impl HPoint {
    /// Panics on non-finite components; the group operations assume finiteness.
    pub fn new(z: Complex64, t: f64) -> Self {
        assert!(
            z.re.is_finite() && z.im.is_finite() && t.is_finite(),
            "HPoint components must be finite"
        );
        HPoint { z, t }
    }

    pub fn origin() -> Self {
        HPoint { z: Complex64::new(0.0, 0.0), t: 0.0 }
    }

    pub fn from_parts(x: f64, y: f64, t: f64) -> Self {
        Self::new(Complex64::new(x, y), t)
    }
}

/// A point of the Poincaré half-plane, `Im(w) > 0` enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    w: Complex64,
}

impl HalfPlanePoint {
    pub fn new(w: Complex64) -> Result<Self> {
        if !(w.re.is_finite() && w.im.is_finite()) {
            return Err(Error::NotFinite);
        }
        if w.im <= 0.0 {
            return Err(Error::NotUpperHalfPlane);
        }
        Ok(HalfPlanePoint { w })
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn re(&self) -> f64 {
        self.w.re
    }

    pub fn im(&self) -> f64 {
        self.w.im
    }
}

/// A tangent vector `(dz, dt)` at a point of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangent {
    pub dz: Complex64,
    pub dt: f64,
}

impl Tangent {
    pub fn new(dz: Complex64, dt: f64) -> Self {
        assert!(
            dz.re.is_finite() && dz.im.is_finite() && dt.is_finite(),
            "Tangent components must be finite"
        );
        Tangent { dz, dt }
    }
}

/// Group law `(z,t) * (z',t') = (z + z', t + t' + 2 Im(z conj(z')))`.
pub fn group_mul(p: HPoint, q: HPoint) -> HPoint {
    HPoint {
        z: p.z + q.z,
        t: p.t + q.t + 2.0 * (p.z * q.z.conj()).im,
    }
}

/// Group inverse `(z,t) ↦ (-z, -t)`.
pub fn group_inv(p: HPoint) -> HPoint {
    HPoint { z: -p.z, t: -p.t }
}

/// Korányi norm `(|z|^4 + t^2)^(1/4)`.
pub fn heis_norm(p: HPoint) -> f64 {
    let zz = p.z.norm_sqr();
    (zz * zz + p.t * p.t).sqrt().sqrt()
}

/// Left-invariant gauge distance `‖p⁻¹ * q‖`. Not symmetric in general.
pub fn heis_dist(p: HPoint, q: HPoint) -> f64 {
    heis_norm(group_mul(group_inv(p), q))
}

/// The projection `Π(z,t) = t + i|z|²`, undefined on the vertical axis.
pub fn project_pi(p: HPoint) -> Result<HalfPlanePoint> {
    let zz = p.z.norm_sqr();
    if zz == 0.0 {
        return Err(Error::AxisPoint);
    }
    HalfPlanePoint::new(Complex64::new(p.t, zz))
}

/// The chart `Ψ(e^{iθ}, w) = (√(Im w) e^{iθ}, Re w)`; inverse of
/// [`chart_from_heis`]. Angles are taken as raw reals so that lifted curves
/// can carry an unwrapped, continuous angle.
pub fn chart_to_heis(theta: f64, w: HalfPlanePoint) -> HPoint {
    let r = w.im().sqrt();
    HPoint {
        z: Complex64::from_polar(r, theta),
        t: w.re(),
    }
}

/// The chart inverse `(z,t) ↦ (arg z mod 2π, t + i|z|²)`.
pub fn chart_from_heis(p: HPoint) -> Result<(f64, HalfPlanePoint)> {
    let w = project_pi(p)?;
    let mut theta = p.z.arg();
    if theta < 0.0 {
        theta += TAU;
    }
    Ok((theta, w))
}

/// Evaluates the contact form at `p` on a tangent vector:
/// `ω(v) = dt + 2 Im(conj(z) dz)`. Zero exactly on the horizontal plane.
pub fn contact_eval(p: HPoint, v: Tangent) -> f64 {
    v.dt + 2.0 * (p.z.conj() * v.dz).im
}

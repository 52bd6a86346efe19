//! Horizontal curves in the Heisenberg group, horizontal lifts of half-plane
//! curves, line integrals of densities along curves, and foliations by
//! horizontal curves.
//!
//! A curve `γ = (γ₁, γ₂)` is horizontal when `γ̇₂ = -2 Im(γ̄₁ γ̇₁)`. The only
//! horizontal curves projecting under `Π` onto a given half-plane curve `γ`
//! are `(√(Im γ) e^{iτ}, Re γ)` with `τ̇ = -Re(γ̇) / (2 Im γ)`; the lift
//! integrates that angle with fixed-step RK4 and interpolates it with cubic
//! Hermite polynomials between the integration knots.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::heis::{HPoint, Tangent};
use crate::hol::Biholomorphism;
use crate::modulus::Density;
use crate::quad::{hermite, rk4, try_simpson};
use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// Cutoff below which `Im` of a half-plane curve counts as touching the real
/// axis; the lift ODE blows up there.
pub const EPS_AXIS: f64 = 1e-9;

/// Default number of RK4 steps for the lift angle.
pub const DEFAULT_N_ODE: usize = 1000;

type PosFn = Arc<dyn Fn(f64) -> HPoint + Send + Sync>;
type VelFn = Arc<dyn Fn(f64) -> Tangent + Send + Sync>;
type CPosFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Velocity of a parameterized Heisenberg curve: analytic when supplied,
/// otherwise central finite differences of the position.
#[derive(Clone)]
enum Velocity {
    Analytic(VelFn),
    CentralDiff { step: f64 },
}

/// A parameterized curve in the Heisenberg group with evaluable position and
/// velocity on a closed interval.
#[derive(Clone)]
pub struct HorizontalCurve {
    interval: (f64, f64),
    pos: PosFn,
    vel: Velocity,
}

impl core::fmt::Debug for HorizontalCurve {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("HorizontalCurve").field("interval", &self.interval).finish()
    }
}

impl HorizontalCurve {
    /// Central-difference velocity with step `1e-6 * (interval length)`.
    pub fn new<F>(interval: (f64, f64), pos: F) -> Self
    where
        F: Fn(f64) -> HPoint + Send + Sync + 'static,
    {
        let step = 1e-6 * (interval.1 - interval.0).abs().max(f64::MIN_POSITIVE);
        HorizontalCurve { interval, pos: Arc::new(pos), vel: Velocity::CentralDiff { step } }
    }

    pub fn with_velocity<F, V>(interval: (f64, f64), pos: F, vel: V) -> Self
    where
        F: Fn(f64) -> HPoint + Send + Sync + 'static,
        V: Fn(f64) -> Tangent + Send + Sync + 'static,
    {
        HorizontalCurve { interval, pos: Arc::new(pos), vel: Velocity::Analytic(Arc::new(vel)) }
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn position(&self, s: f64) -> HPoint {
        (self.pos)(s)
    }

    pub fn velocity(&self, s: f64) -> Tangent {
        match &self.vel {
            Velocity::Analytic(v) => v(s),
            Velocity::CentralDiff { step } => {
                let (s0, s1) = self.interval;
                let h = *step;
                // shift the stencil inside near the endpoints
                let (pm, pp, denom) = if s - h < s0 {
                    (self.position(s), self.position(s + 2.0 * h), 2.0 * h)
                } else if s + h > s1 {
                    (self.position(s - 2.0 * h), self.position(s), 2.0 * h)
                } else {
                    (self.position(s - h), self.position(s + h), 2.0 * h)
                };
                Tangent::new((pp.z - pm.z) / denom, (pp.t - pm.t) / denom)
            }
        }
    }
}

/// A `C¹` curve in the Poincaré half-plane; the velocity defaults to central
/// differences with step `1e-6 * (interval length)`.
#[derive(Clone)]
pub struct PlaneCurve {
    interval: (f64, f64),
    pos: CPosFn,
    vel: Option<CPosFn>,
}

impl core::fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PlaneCurve").field("interval", &self.interval).finish()
    }
}

impl PlaneCurve {
    pub fn new<F>(interval: (f64, f64), pos: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        PlaneCurve { interval, pos: Arc::new(pos), vel: None }
    }

    pub fn with_velocity<F, V>(interval: (f64, f64), pos: F, vel: V) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
        V: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        PlaneCurve { interval, pos: Arc::new(pos), vel: Some(Arc::new(vel)) }
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn position(&self, s: f64) -> Complex64 {
        (self.pos)(s)
    }

    pub fn velocity(&self, s: f64) -> Complex64 {
        match &self.vel {
            Some(v) => v(s),
            None => {
                let (s0, s1) = self.interval;
                let h = 1e-6 * (s1 - s0).abs().max(f64::MIN_POSITIVE);
                if s - h < s0 {
                    (self.position(s + 2.0 * h) - self.position(s)) / (2.0 * h)
                } else if s + h > s1 {
                    (self.position(s) - self.position(s - 2.0 * h)) / (2.0 * h)
                } else {
                    (self.position(s + h) - self.position(s - h)) / (2.0 * h)
                }
            }
        }
    }
}

/// A two-parameter family of horizontal curves covering a domain. The
/// parameter domain is a rectangle; the per-curve parameter interval is
/// carried explicitly.
#[derive(Clone)]
pub struct Foliation {
    parameter_domain: [(f64, f64); 2],
    interval: (f64, f64),
    gen: Arc<dyn Fn([f64; 2]) -> Result<HorizontalCurve> + Send + Sync>,
}

impl core::fmt::Debug for Foliation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Foliation")
            .field("parameter_domain", &self.parameter_domain)
            .field("interval", &self.interval)
            .finish()
    }
}

impl Foliation {
    pub fn new<G>(parameter_domain: [(f64, f64); 2], interval: (f64, f64), gen: G) -> Self
    where
        G: Fn([f64; 2]) -> Result<HorizontalCurve> + Send + Sync + 'static,
    {
        Foliation { parameter_domain, interval, gen: Arc::new(gen) }
    }

    pub fn parameter_domain(&self) -> [(f64, f64); 2] {
        self.parameter_domain
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn curve(&self, lambda: [f64; 2]) -> Result<HorizontalCurve> {
        (self.gen)(lambda)
    }
}

/// A one-parameter family of half-plane curves (the plane-side analogue of a
/// [`Foliation`]).
#[derive(Clone)]
pub struct PlaneFamily {
    parameter_range: (f64, f64),
    gen: Arc<dyn Fn(f64) -> PlaneCurve + Send + Sync>,
}

impl core::fmt::Debug for PlaneFamily {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PlaneFamily").field("parameter_range", &self.parameter_range).finish()
    }
}

impl PlaneFamily {
    pub fn new<G>(parameter_range: (f64, f64), gen: G) -> Self
    where
        G: Fn(f64) -> PlaneCurve + Send + Sync + 'static,
    {
        PlaneFamily { parameter_range, gen: Arc::new(gen) }
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        self.parameter_range
    }

    pub fn curve(&self, lambda: f64) -> PlaneCurve {
        (self.gen)(lambda)
    }
}

/// Maximum over a uniform sample grid of the horizontality defect
/// `|γ̇₂ + 2 Im(γ̄₁ γ̇₁)|`, normalized by `max(1, |γ̇₁|)`.
pub fn horizontality_residual(c: &HorizontalCurve, n_samples: usize) -> f64 {
    let n = n_samples.max(2);
    let (s0, s1) = c.interval();
    let mut worst = 0.0f64;
    for i in 0..n {
        let s = s0 + (s1 - s0) * i as f64 / (n - 1) as f64;
        let p = c.position(s);
        let v = c.velocity(s);
        let defect = (v.dt + 2.0 * (p.z.conj() * v.dz).im).abs();
        let scale = v.dz.norm().max(1.0);
        worst = worst.max(defect / scale);
    }
    worst
}

/// Horizontal lift with the default RK4 resolution.
pub fn lift_halfplane_curve(c: &PlaneCurve, theta0: f64) -> Result<HorizontalCurve> {
    lift_halfplane_curve_with(c, theta0, DEFAULT_N_ODE)
}

/// Lifts a half-plane curve to the horizontal curve
/// `s ↦ (√(Im γ(s)) e^{iτ(s)}, Re γ(s))` with `τ(s₀) = theta0`, integrating
/// `τ̇ = -Re(γ̇)/(2 Im γ)` by fixed-step RK4 with `n_ode` steps. The angle is
/// evaluated between knots by cubic Hermite interpolation with the exact
/// slope; positions project back onto the plane curve exactly, so only the
/// angle carries integration error.
pub fn lift_halfplane_curve_with(c: &PlaneCurve, theta0: f64, n_ode: usize) -> Result<HorizontalCurve> {
    let (s0, s1) = c.interval();
    let n = n_ode.max(2);

    let rhs = {
        let c = c.clone();
        move |s: f64| -> f64 {
            let im = c.position(s).im;
            -c.velocity(s).re / (2.0 * im)
        }
    };

    // reject curves that touch the axis anywhere on the integration grid
    for i in 0..=n {
        let s = s0 + (s1 - s0) * i as f64 / n as f64;
        if c.position(s).im < EPS_AXIS {
            return Err(Error::DegenerateCurve);
        }
    }

    let knots = rk4(|s, _| rhs(s), s0, theta0, s1, n);
    let taus: Vec<f64> = knots.iter().map(|&(_, tau)| tau).collect();
    let slopes: Vec<f64> = knots.iter().map(|&(s, _)| rhs(s)).collect();
    let h = (s1 - s0) / n as f64;

    let tau_of = {
        let taus = taus.clone();
        let slopes = slopes.clone();
        move |s: f64| -> f64 {
            let u = ((s - s0) / h).floor();
            let i = (u.max(0.0) as usize).min(n - 1);
            let (xa, xb) = (s0 + i as f64 * h, s0 + (i + 1) as f64 * h);
            hermite(xa, taus[i], slopes[i], xb, taus[i + 1], slopes[i + 1], s)
        }
    };

    let pos = {
        let c = c.clone();
        let tau_of = tau_of.clone();
        move |s: f64| -> HPoint {
            let w = c.position(s);
            HPoint::new(Complex64::from_polar(w.im.sqrt(), tau_of(s)), w.re)
        }
    };
    let vel = {
        let c = c.clone();
        move |s: f64| -> Tangent {
            let w = c.position(s);
            let dw = c.velocity(s);
            let tau = tau_of(s);
            let tdot = -dw.re / (2.0 * w.im);
            let radial = dw.im / (2.0 * w.im.sqrt());
            let dz = Complex64::from_polar(1.0, tau) * Complex64::new(radial, tdot * w.im.sqrt());
            Tangent::new(dz, dw.re)
        }
    };
    Ok(HorizontalCurve::with_velocity((s0, s1), pos, vel))
}

/// Line integral `∫ ρ(γ(s)) |γ̇₁(s)| ds` by composite Simpson quadrature.
/// Fails with `DomainEscape` if a sample leaves the density's domain.
pub fn curve_density_integral(rho: &Density, c: &HorizontalCurve, n_samples: usize) -> Result<f64> {
    let (s0, s1) = c.interval();
    try_simpson(
        |s| {
            let p = c.position(s);
            if !rho.domain().contains_heis(p) {
                return Err(Error::DomainEscape);
            }
            Ok(rho.eval_heis(p)? * c.velocity(s).dz.norm())
        },
        s0,
        s1,
        n_samples,
    )
}

/// Plane-side line integral `∫ ρ(γ(s)) |γ̇(s)| ds`.
pub fn plane_curve_integral(rho: &Density, c: &PlaneCurve, n_samples: usize) -> Result<f64> {
    let (s0, s1) = c.interval();
    try_simpson(
        |s| {
            let w = c.position(s);
            if !rho.domain().contains_plane(w) {
                return Err(Error::DomainEscape);
            }
            Ok(rho.eval_plane_raw(w)? * c.velocity(s).norm())
        },
        s0,
        s1,
        n_samples,
    )
}

/// The standard foliation of the cylinder `{0 < t < a, |z| < √b}` by the
/// horizontal spirals `s ↦ (r e^{i(α - s/(2r²))}, s)`, parameterized by
/// `(r, α) ∈ (0, √b) × [0, 2π)`.
pub fn foliation_gamma0(a: f64, b: f64) -> Foliation {
    let sqrt_b = b.sqrt();
    Foliation::new([(0.0, sqrt_b), (0.0, core::f64::consts::TAU)], (0.0, a), move |[r, alpha]| {
        if !(r > 0.0) {
            return Err(Error::AxisPoint);
        }
        let pos = move |s: f64| HPoint::new(Complex64::from_polar(r, alpha - s / (2.0 * r * r)), s);
        let vel = move |s: f64| {
            let dz = Complex64::from_polar(1.0 / (2.0 * r), alpha - s / (2.0 * r * r))
                * Complex64::new(0.0, -1.0);
            Tangent::new(dz, 1.0)
        };
        Ok(HorizontalCurve::with_velocity((0.0, a), pos, vel))
    })
}

/// The vertical counterexample family: radial horizontal segments
/// `(u^{3/2} e^{iα}, t)` at height `t`, parameterized by
/// `(t, α) ∈ (0, a) × [0, 2π)`. The parameter `u = s^{2/3}` flattens the
/// `s^{-1/3}` axis singularity of the family's extremal density so that
/// Simpson quadrature applies along the curve.
pub fn foliation_vertical(a: f64, b: f64) -> Foliation {
    let u_hi = b.sqrt().powf(2.0 / 3.0);
    let u_lo = 1e-12 * u_hi;
    Foliation::new([(0.0, a), (0.0, core::f64::consts::TAU)], (u_lo, u_hi), move |[t, alpha]| {
        let pos = move |u: f64| HPoint::new(Complex64::from_polar(u.powf(1.5), alpha), t);
        let vel = move |u: f64| {
            Tangent::new(Complex64::from_polar(1.5 * u.sqrt(), alpha), 0.0)
        };
        Ok(HorizontalCurve::with_velocity((u_lo, u_hi), pos, vel))
    })
}

/// Foliates the chart image of a biholomorphism `φ : (0,a) x (0,b) → ℍ` by
/// the horizontal lifts of the curves `s ↦ φ(s + ix)`, parameterized by
/// `(x, α) ∈ (0, b) × [0, 2π)` where `α` is the initial lift angle.
pub fn foliation_from_biholomorphism(phi: &Biholomorphism, a: f64, b: f64) -> Foliation {
    let phi = phi.clone();
    Foliation::new([(0.0, b), (0.0, core::f64::consts::TAU)], (0.0, a), move |[x, alpha]| {
        let phi_pos = phi.clone();
        let phi_vel = phi.clone();
        let plane = PlaneCurve::with_velocity(
            (0.0, a),
            move |s| phi_pos.eval(Complex64::new(s, x)),
            move |s| phi_vel.deriv(Complex64::new(s, x)),
        );
        lift_halfplane_curve(&plane, alpha)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::project_pi;
    use crate::hol::builtin_biholomorphism;
    use crate::modulus::{Density, DomainDescriptor};
    use approx::assert_relative_eq;
    use core::f64::consts::{FRAC_PI_2, PI, TAU};

    fn gamma0_curve(r: f64, alpha: f64, a: f64) -> HorizontalCurve {
        foliation_gamma0(a, 1.0).curve([r, alpha]).unwrap()
    }

    #[test]
    fn gamma0_curves_are_horizontal() {
        for (r, alpha) in [(1.0, 0.0), (0.3, 1.2), (0.05, 4.0)] {
            let c = gamma0_curve(r, alpha, 1.0);
            assert!(horizontality_residual(&c, 200) <= 1e-9);
        }
    }

    #[test]
    fn gamma0_formula_value() {
        let c = gamma0_curve(1.0, 0.0, PI);
        let p = c.position(PI);
        // (e^{-i pi/2}, pi) = (-i, pi)
        assert_relative_eq!(p.z.re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(p.z.im, -1.0, epsilon = 1e-14);
        assert_relative_eq!(p.t, PI, epsilon = 1e-14);
        // projection has constant imaginary part r^2
        for s in [0.0, 1.0, 2.0] {
            let w = project_pi(c.position(s)).unwrap();
            assert_relative_eq!(w.im(), 1.0, epsilon = 1e-14);
            assert_relative_eq!(w.re(), s, epsilon = 1e-14);
        }
    }

    #[test]
    fn vertical_segment_fails_horizontality() {
        let c = HorizontalCurve::with_velocity(
            (0.0, 1.0),
            |s| HPoint::new(Complex64::new(1.0, 0.0), s),
            |_| Tangent::new(Complex64::new(0.0, 0.0), 1.0),
        );
        assert_relative_eq!(horizontality_residual(&c, 50), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn constant_curve_residual_is_zero() {
        let c = HorizontalCurve::new((0.0, 1.0), |_| HPoint::from_parts(0.7, -0.2, 1.0));
        assert!(horizontality_residual(&c, 50) <= 1e-12);
    }

    #[test]
    fn lift_of_horizontal_line_is_gamma0() {
        // γ(s) = s + i lifts to (e^{-is/2}, s) for θ₀ = 0
        let plane = PlaneCurve::with_velocity(
            (0.0, 1.0),
            |s| Complex64::new(s, 1.0),
            |_| Complex64::new(1.0, 0.0),
        );
        let lifted = lift_halfplane_curve(&plane, 0.0).unwrap();
        for s in [0.0, 0.25, 0.8, 1.0] {
            let p = lifted.position(s);
            let want = Complex64::from_polar(1.0, -s / 2.0);
            assert!((p.z - want).norm() <= 1e-10, "s = {s}");
            assert_relative_eq!(p.t, s, epsilon = 1e-14);
        }
        assert!(horizontality_residual(&lifted, 200) <= 1e-9);
    }

    #[test]
    fn lift_of_constant_curve_is_constant() {
        let y = 2.5;
        let plane = PlaneCurve::new((0.0, 1.0), move |_| Complex64::new(0.0, y));
        let lifted = lift_halfplane_curve(&plane, 1.1).unwrap();
        let p0 = lifted.position(0.0);
        let p1 = lifted.position(1.0);
        assert!((p0.z - p1.z).norm() <= 1e-12);
        assert!((p0.z - Complex64::from_polar(y.sqrt(), 1.1)).norm() <= 1e-12);
        assert_relative_eq!(p0.t, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn lift_of_imaginary_ray_keeps_angle() {
        // γ(s) = e^s * i: Re(γ̇) = 0, so τ stays at θ₀
        let plane = PlaneCurve::with_velocity(
            (0.0, 1.0),
            |s| Complex64::new(0.0, s.exp()),
            |s| Complex64::new(0.0, s.exp()),
        );
        let coarse = lift_halfplane_curve_with(&plane, 0.0, 100).unwrap();
        let fine = lift_halfplane_curve_with(&plane, 0.0, 2000).unwrap();
        for s in [0.0, 0.5, 1.0] {
            let p = coarse.position(s);
            assert!(p.z.arg().abs() <= 1e-12, "tau drifted: {}", p.z.arg());
            assert!((p.z - fine.position(s).z).norm() <= 1e-12);
        }
    }

    #[test]
    fn lift_projects_back_and_rotates_equivariantly() {
        // curved test curve: γ(s) = s + i (1 + s^2/2)
        let plane = PlaneCurve::new((0.0, 1.0), |s| Complex64::new(s, 1.0 + 0.5 * s * s));
        let lifted = lift_halfplane_curve(&plane, 0.4).unwrap();
        for i in 0..=20 {
            let s = i as f64 / 20.0;
            let w = project_pi(lifted.position(s)).unwrap();
            assert!((w.w() - plane.position(s)).norm() <= 1e-8);
        }
        assert!(horizontality_residual(&lifted, 200) <= 1e-6);

        let delta = 0.9;
        let rotated = lift_halfplane_curve(&plane, 0.4 + delta).unwrap();
        let rot = Complex64::from_polar(1.0, delta);
        for s in [0.1, 0.6, 1.0] {
            let got = rotated.position(s).z;
            let want = rot * lifted.position(s).z;
            assert!((got - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn lift_rejects_axis_touching_curves() {
        let plane = PlaneCurve::new((0.0, 1.0), |s| Complex64::new(s, s));
        assert_eq!(lift_halfplane_curve(&plane, 0.0).unwrap_err(), Error::DegenerateCurve);
    }

    #[test]
    fn density_integral_on_gamma0_is_one() {
        let rho = Density::heisenberg(
            DomainDescriptor::cylinder(1.0, 1.0).unwrap(),
            |p: HPoint| 2.0 * p.z.norm() / 1.0,
        );
        for (r, alpha) in [(0.9, 0.0), (0.5, 2.0), (0.17, 5.5)] {
            let c = gamma0_curve(r, alpha, 1.0);
            let v = curve_density_integral(&rho, &c, 64).unwrap();
            assert_relative_eq!(v, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn density_integral_is_linear_and_zero_on_zero() {
        let dom = DomainDescriptor::cylinder(1.0, 1.0).unwrap();
        let zero = Density::heisenberg(dom.clone(), |_| 0.0);
        let rho = Density::heisenberg(dom.clone(), |p: HPoint| 1.0 + p.t * p.z.norm_sqr());
        let rho2 = Density::heisenberg(dom, |p: HPoint| 2.0 * (1.0 + p.t * p.z.norm_sqr()));
        let c = gamma0_curve(0.6, 0.3, 1.0);
        assert_eq!(curve_density_integral(&zero, &c, 50).unwrap(), 0.0);
        let a = curve_density_integral(&rho, &c, 64).unwrap();
        let b = curve_density_integral(&rho2, &c, 64).unwrap();
        assert_relative_eq!(b, 2.0 * a, epsilon = 1e-13);
    }

    #[test]
    fn density_integral_escapes_domain() {
        let rho = Density::heisenberg(DomainDescriptor::cylinder(0.5, 1.0).unwrap(), |_| 1.0);
        let c = gamma0_curve(0.6, 0.0, 1.0); // t runs to 1 > 0.5
        assert_eq!(curve_density_integral(&rho, &c, 64).unwrap_err(), Error::DomainEscape);
    }

    #[test]
    fn simpson_convergence_order_on_curve_integral() {
        let rho = Density::heisenberg(
            DomainDescriptor::cylinder(1.0, 1.0).unwrap(),
            |p: HPoint| (p.t).exp() * (1.0 + p.z.norm()),
        );
        let c = gamma0_curve(0.55, 0.9, 1.0);
        let i1 = curve_density_integral(&rho, &c, 8).unwrap();
        let i2 = curve_density_integral(&rho, &c, 16).unwrap();
        let i3 = curve_density_integral(&rho, &c, 32).unwrap();
        let order = ((i1 - i2).abs() / (i2 - i3).abs()).log2();
        assert!(order >= 2.0, "observed order {order}");
    }

    #[test]
    fn chart_foliation_identity_matches_gamma0() {
        let id = builtin_biholomorphism("identity", &[]).unwrap();
        let fol = foliation_from_biholomorphism(&id, 1.0, 1.0);
        // x = r^2, lift angle alpha
        let (r, alpha) = (0.8, 0.7);
        let lifted = fol.curve([r * r, alpha]).unwrap();
        let direct = gamma0_curve(r, alpha, 1.0);
        for s in [0.0, 0.3, 1.0] {
            let p = lifted.position(s);
            let q = direct.position(s);
            assert!((p.z - q.z).norm() <= 1e-9, "s={s}: {:?} vs {:?}", p.z, q.z);
            assert_relative_eq!(p.t, q.t, epsilon = 1e-12);
        }
    }

    #[test]
    fn chart_foliation_exp_gives_radial_annulus_curves() {
        let a_outer: f64 = 2.0;
        let e = builtin_biholomorphism("exp", &[]).unwrap();
        let fol = foliation_from_biholomorphism(&e, 2.0 * a_outer.ln(), PI);
        let x = FRAC_PI_2 * 0.8;
        let alpha = 0.3;
        let c = fol.curve([x, alpha]).unwrap();
        assert!(horizontality_residual(&c, 200) <= 1e-9);
        for s in [0.0, 0.7, 2.0 * a_outer.ln()] {
            let p = c.position(s);
            // |γ₁|² = e^s sin x and γ₂ = e^s cos x
            assert_relative_eq!(p.z.norm_sqr(), s.exp() * x.sin(), epsilon = 1e-10);
            assert_relative_eq!(p.t, s.exp() * x.cos(), epsilon = 1e-10);
            // speed |γ̇₁| = e^{s/2} / (2 √(sin x))
            let v = c.velocity(s);
            let want = (0.5 * s).exp() / (2.0 * x.sin().sqrt());
            assert_relative_eq!(v.dz.norm(), want, epsilon = 1e-9);
        }
        // velocity also agrees with a finite-difference copy of the position
        let pos_copy = {
            let c2 = c.clone();
            HorizontalCurve::new(c.interval(), move |s| c2.position(s))
        };
        for s in [0.3, 1.0] {
            let v1 = c.velocity(s);
            let v2 = pos_copy.velocity(s);
            assert!((v1.dz - v2.dz).norm() <= 1e-6 * v1.dz.norm().max(1.0));
            assert!((v1.dt - v2.dt).abs() <= 1e-6 * v1.dt.abs().max(1.0));
        }
    }

    #[test]
    fn foliation_parameters_carry_intervals() {
        let fol = foliation_gamma0(2.0, 4.0);
        assert_eq!(fol.interval(), (0.0, 2.0));
        assert_eq!(fol.parameter_domain(), [(0.0, 2.0), (0.0, TAU)]);
    }
}

#[cfg(test)]
mod prop_tests {
    use super::*;
    use crate::heis::project_pi;
    use proptest::prelude::*;

    prop_compose! {
        // quadratic half-plane curves bounded away from the real axis
        fn arb_plane_curve()(c1 in -2.0..2.0f64, y0 in 0.5..3.0f64,
                             c2 in -0.4..0.4f64, c3 in -0.3..0.3f64) -> PlaneCurve {
            PlaneCurve::with_velocity(
                (0.0, 1.0),
                move |s| Complex64::new(c1 * s, y0 + c2 * s + c3 * s * s),
                move |s| Complex64::new(c1, c2 + 2.0 * c3 * s),
            )
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn lift_projects_back_is_horizontal_and_rotates(curve in arb_plane_curve(),
                                                        theta0 in -3.0..3.0f64,
                                                        delta in -3.0..3.0f64) {
            let lifted = lift_halfplane_curve(&curve, theta0).unwrap();
            for i in 0..=10 {
                let s = i as f64 / 10.0;
                let w = project_pi(lifted.position(s)).unwrap();
                prop_assert!((w.w() - curve.position(s)).norm() <= 1e-8);
            }
            prop_assert!(horizontality_residual(&lifted, 100) <= 1e-6);

            let rotated = lift_halfplane_curve(&curve, theta0 + delta).unwrap();
            let rot = Complex64::from_polar(1.0, delta);
            for s in [0.2, 0.9] {
                let got = rotated.position(s).z;
                let want = rot * lifted.position(s).z;
                prop_assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()));
            }
        }
    }
}

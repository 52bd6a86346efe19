//! Densities and moduli of curve families.
//!
//! The modulus of a family of horizontal curves is the infimum of
//! `∫ ρ⁴ dL³` over densities with `∫_γ ρ dl ≥ 1` on every member; in the
//! half-plane the energy is `∫ ρ² dL²`. This module evaluates energies on
//! the supported domain shapes, scans admissibility over foliations, returns
//! the closed-form moduli with their extremal densities, and implements the
//! pull-back (by `Π`) and push-forward (by a quasiconformal map) density
//! constructions.
//!
//! Moduli are never computed by infimizing over densities; energies of given
//! densities plus the closed forms serve as the oracles.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::curves::{curve_density_integral, plane_curve_integral, Foliation, PlaneFamily};
use crate::heis::{chart_to_heis, project_pi, HalfPlanePoint, HPoint};
use crate::hol::{builtin_biholomorphism, Biholomorphism};
use crate::qcmaps::{horizontal_derivatives, PlaneMap, QCMap};
use crate::quad::try_simpson;
use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

/// Orientation gap floor: `|Zf₁| - |Z̄f₁|` at or below this counts as degenerate.
pub const EPS_DERIV: f64 = 1e-10;

/// Admissibility slack: a family minimum of `1 - TOL_ADM` still counts admissible.
pub const TOL_ADM: f64 = 1e-6;

/// Relative inset of integration grids from degenerate boundary loci
/// (the vertical axis, chart-image edges).
const BOUNDARY_INSET: f64 = 1e-12;

/// Membership slack so that curves touching the closure still pass domain checks.
const CONTAINS_SLACK: f64 = 1e-9;

/// Supported integration domains, in the Heisenberg group or the half-plane.
#[derive(Debug, Clone)]
pub enum DomainDescriptor {
    /// `{0 < t < a, |z|² < b}`.
    Cylinder { a: f64, b: f64 },
    /// `{0 < t < a, b_lo < |z|² < b_hi}`.
    CylinderShell { a: f64, b_lo: f64, b_hi: f64 },
    /// `{r_lo < ‖p‖ < r_hi}` in the Korányi norm.
    SphericalAnnulus { r_lo: f64, r_hi: f64 },
    /// The chart image `Ψ(S¹ × φ((0,a) x (0,b)))`.
    ChartImage { phi: Biholomorphism, a: f64, b: f64 },
    /// `{0 < Re w < a, 0 < Im w < b}` in the half-plane.
    PlaneRectangle { a: f64, b: f64 },
    /// `φ((0,a) x (0,b))` in the half-plane.
    PlaneImage { phi: Biholomorphism, a: f64, b: f64 },
}

impl DomainDescriptor {
    pub fn cylinder(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 {
            Ok(DomainDescriptor::Cylinder { a, b })
        } else {
            Err(Error::BadDomain)
        }
    }

    pub fn cylinder_shell(a: f64, b_lo: f64, b_hi: f64) -> Result<Self> {
        if a > 0.0 && b_lo >= 0.0 && b_lo < b_hi {
            Ok(DomainDescriptor::CylinderShell { a, b_lo, b_hi })
        } else {
            Err(Error::BadDomain)
        }
    }

    pub fn spherical_annulus(r_lo: f64, r_hi: f64) -> Result<Self> {
        if r_lo > 0.0 && r_lo < r_hi {
            Ok(DomainDescriptor::SphericalAnnulus { r_lo, r_hi })
        } else {
            Err(Error::BadDomain)
        }
    }

    pub fn chart_image(phi: Biholomorphism, a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 {
            Ok(DomainDescriptor::ChartImage { phi, a, b })
        } else {
            Err(Error::BadDomain)
        }
    }

    pub fn plane_rectangle(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 {
            Ok(DomainDescriptor::PlaneRectangle { a, b })
        } else {
            Err(Error::BadDomain)
        }
    }

    pub fn plane_image(phi: Biholomorphism, a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 {
            Ok(DomainDescriptor::PlaneImage { phi, a, b })
        } else {
            Err(Error::BadDomain)
        }
    }

    pub fn is_plane(&self) -> bool {
        matches!(
            self,
            DomainDescriptor::PlaneRectangle { .. } | DomainDescriptor::PlaneImage { .. }
        )
    }

    /// Closure membership for a Heisenberg point, with a small slack so that
    /// curves running to the boundary still pass.
    pub fn contains_heis(&self, p: HPoint) -> bool {
        match self {
            DomainDescriptor::Cylinder { a, b } => {
                let tol = CONTAINS_SLACK * a.max(*b);
                -tol <= p.t && p.t <= a + tol && p.z.norm_sqr() <= b + tol
            }
            DomainDescriptor::CylinderShell { a, b_lo, b_hi } => {
                let tol = CONTAINS_SLACK * a.max(*b_hi);
                -tol <= p.t && p.t <= a + tol && {
                    let x = p.z.norm_sqr();
                    b_lo - tol <= x && x <= b_hi + tol
                }
            }
            DomainDescriptor::SphericalAnnulus { r_lo, r_hi } => {
                let tol = CONTAINS_SLACK * r_hi;
                let n = crate::heis::heis_norm(p);
                r_lo - tol <= n && n <= r_hi + tol
            }
            DomainDescriptor::ChartImage { phi, a, b } => match project_pi(p) {
                Ok(w) => phi.invert(w.w(), *a, *b).is_ok(),
                Err(_) => false,
            },
            _ => false,
        }
    }

    /// Closure membership for a half-plane point.
    pub fn contains_plane(&self, w: Complex64) -> bool {
        match self {
            DomainDescriptor::PlaneRectangle { a, b } => {
                let tol = CONTAINS_SLACK * a.max(*b);
                -tol <= w.re && w.re <= a + tol && -tol <= w.im && w.im <= b + tol
            }
            DomainDescriptor::PlaneImage { phi, a, b } => phi.invert(w, *a, *b).is_ok(),
            _ => false,
        }
    }

    /// Rough linear extent, used to scale finite-difference steps.
    pub fn scale(&self) -> f64 {
        match self {
            DomainDescriptor::Cylinder { a, b } => a.max(2.0 * b.sqrt()),
            DomainDescriptor::CylinderShell { a, b_hi, .. } => a.max(2.0 * b_hi.sqrt()),
            DomainDescriptor::SphericalAnnulus { r_hi, .. } => 2.0 * r_hi,
            DomainDescriptor::ChartImage { phi, a, b } | DomainDescriptor::PlaneImage { phi, a, b } => {
                let mut im_max = 0.0f64;
                let mut re_lo = f64::INFINITY;
                let mut re_hi = f64::NEG_INFINITY;
                for i in 0..5 {
                    for j in 0..5 {
                        let zeta = Complex64::new(
                            (i as f64 + 0.5) * a / 5.0,
                            (j as f64 + 0.5) * b / 5.0,
                        );
                        let w = phi.eval(zeta);
                        im_max = im_max.max(w.im);
                        re_lo = re_lo.min(w.re);
                        re_hi = re_hi.max(w.re);
                    }
                }
                (re_hi - re_lo).max(2.0 * im_max.sqrt()).max(1e-6)
            }
            DomainDescriptor::PlaneRectangle { a, b } => a.max(*b),
        }
    }
}

/// Radial quadrature rule for cylinder-type domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadialRule {
    /// Integrate directly in `r`.
    #[default]
    Plain,
    /// Substitute `u = r^{2/3}`, which removes an `r^{-1/3}` singularity of
    /// the density at the axis.
    CubeRootSubst,
}

type HeisEval = Arc<dyn Fn(HPoint) -> Result<f64> + Send + Sync>;
type PlaneEval = Arc<dyn Fn(HalfPlanePoint) -> Result<f64> + Send + Sync>;

#[derive(Clone)]
enum DensityEval {
    Heis(HeisEval),
    Plane(PlaneEval),
}

/// Which space a density lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityKind {
    Heisenberg,
    Plane,
}

/// A nonnegative scalar field on a Heisenberg or half-plane domain.
#[derive(Clone)]
pub struct Density {
    domain: DomainDescriptor,
    eval: DensityEval,
    radial_rule: RadialRule,
}

impl core::fmt::Debug for Density {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Density")
            .field("kind", &self.kind())
            .field("domain", &self.domain)
            .finish()
    }
}

impl Density {
    pub fn heisenberg<F>(domain: DomainDescriptor, f: F) -> Self
    where
        F: Fn(HPoint) -> f64 + Send + Sync + 'static,
    {
        Self::heisenberg_fallible(domain, move |p| Ok(f(p)))
    }

    pub fn heisenberg_fallible<F>(domain: DomainDescriptor, f: F) -> Self
    where
        F: Fn(HPoint) -> Result<f64> + Send + Sync + 'static,
    {
        Density {
            domain,
            eval: DensityEval::Heis(Arc::new(f)),
            radial_rule: RadialRule::Plain,
        }
    }

    pub fn plane<F>(domain: DomainDescriptor, f: F) -> Self
    where
        F: Fn(HalfPlanePoint) -> f64 + Send + Sync + 'static,
    {
        Density {
            domain,
            eval: DensityEval::Plane(Arc::new(move |w| Ok(f(w)))),
            radial_rule: RadialRule::Plain,
        }
    }

    pub fn with_radial_rule(mut self, rule: RadialRule) -> Self {
        self.radial_rule = rule;
        self
    }

    pub fn kind(&self) -> DensityKind {
        match self.eval {
            DensityEval::Heis(_) => DensityKind::Heisenberg,
            DensityEval::Plane(_) => DensityKind::Plane,
        }
    }

    pub fn domain(&self) -> &DomainDescriptor {
        &self.domain
    }

    pub fn radial_rule(&self) -> RadialRule {
        self.radial_rule
    }

    pub fn eval_heis(&self, p: HPoint) -> Result<f64> {
        match &self.eval {
            DensityEval::Heis(f) => f(p),
            DensityEval::Plane(_) => Err(Error::UnsupportedDomain),
        }
    }

    pub fn eval_plane(&self, w: HalfPlanePoint) -> Result<f64> {
        match &self.eval {
            DensityEval::Plane(f) => f(w),
            DensityEval::Heis(_) => Err(Error::UnsupportedDomain),
        }
    }

    /// Plane evaluation from a raw complex number.
    pub fn eval_plane_raw(&self, w: Complex64) -> Result<f64> {
        self.eval_plane(HalfPlanePoint::new(w)?)
    }
}

/// Result of an admissibility scan over a curve family, together with the
/// energy of the density on its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModulusReport {
    pub energy: f64,
    pub min_curve_integral: f64,
    pub argmin: [f64; 2],
    pub admissible: bool,
}

/// Integrates a pointwise functional over a Heisenberg domain with
/// tensor-product Simpson rules.
///
/// Cylinder-type domains integrate in cylindrical coordinates with volume
/// element `r dr dθ dt` (optionally substituting `u = r^{2/3}` per
/// [`RadialRule`]); chart images and spherical annuli use the substitution
/// `∫ g dL³ = ½ ∭ g(Ψ(θ, φ(s+ix))) |φ'(s+ix)|² ds dx dθ`. Grids are inset
/// from degenerate edges by a relative `1e-12`.
pub(crate) fn integrate_heis<G>(
    domain: &DomainDescriptor,
    grid: (usize, usize, usize),
    radial: RadialRule,
    g: G,
) -> Result<f64>
where
    G: Fn(HPoint) -> Result<f64>,
{
    let (n1, n2, n3) = grid;
    match domain {
        DomainDescriptor::Cylinder { a, b } => {
            let r_hi = b.sqrt();
            integrate_cylindrical(BOUNDARY_INSET * r_hi, r_hi, *a, (n1, n2, n3), radial, &g)
        }
        DomainDescriptor::CylinderShell { a, b_lo, b_hi } => {
            let r_lo = b_lo.sqrt().max(BOUNDARY_INSET * b_hi.sqrt());
            integrate_cylindrical(r_lo, b_hi.sqrt(), *a, (n1, n2, n3), radial, &g)
        }
        DomainDescriptor::SphericalAnnulus { r_lo, r_hi } => {
            let c = r_lo * r_lo;
            let phi = Biholomorphism::custom(
                "scaled_exp",
                move |zeta| c * zeta.exp(),
                move |zeta| c * zeta.exp(),
            );
            let a = 2.0 * (r_hi / r_lo).ln();
            integrate_chart(&phi, a, core::f64::consts::PI, (n1, n2, n3), &g)
        }
        DomainDescriptor::ChartImage { phi, a, b } => {
            integrate_chart(phi, *a, *b, (n1, n2, n3), &g)
        }
        _ => Err(Error::UnsupportedDomain),
    }
}

fn integrate_cylindrical<G>(
    r_lo: f64,
    r_hi: f64,
    t_hi: f64,
    (n_r, n_theta, n_t): (usize, usize, usize),
    radial: RadialRule,
    g: &G,
) -> Result<f64>
where
    G: Fn(HPoint) -> Result<f64>,
{
    let radial_integral = |theta: f64, t: f64| -> Result<f64> {
        match radial {
            RadialRule::Plain => try_simpson(
                |r| Ok(g(HPoint::new(Complex64::from_polar(r, theta), t))? * r),
                r_lo,
                r_hi,
                n_r,
            ),
            RadialRule::CubeRootSubst => {
                let p = 2.0 / 3.0;
                try_simpson(
                    |u| {
                        let r = u.powf(1.5);
                        Ok(g(HPoint::new(Complex64::from_polar(r, theta), t))? * 1.5 * u * u)
                    },
                    r_lo.powf(p),
                    r_hi.powf(p),
                    n_r,
                )
            }
        }
    };
    try_simpson(
        |t| try_simpson(|theta| radial_integral(theta, t), 0.0, core::f64::consts::TAU, n_theta),
        0.0,
        t_hi,
        n_t,
    )
}

fn integrate_chart<G>(
    phi: &Biholomorphism,
    a: f64,
    b: f64,
    (n_s, n_theta, n_x): (usize, usize, usize),
    g: &G,
) -> Result<f64>
where
    G: Fn(HPoint) -> Result<f64>,
{
    let es = BOUNDARY_INSET * a;
    let ex = BOUNDARY_INSET * b;
    let v = try_simpson(
        |x| {
            try_simpson(
                |s| {
                    let w = phi.eval(Complex64::new(s, x));
                    let hp = HalfPlanePoint::new(w)?;
                    let jac = phi.deriv(Complex64::new(s, x)).norm_sqr();
                    try_simpson(
                        |theta| Ok(g(chart_to_heis(theta, hp))? * jac),
                        0.0,
                        core::f64::consts::TAU,
                        n_theta,
                    )
                },
                es,
                a - es,
                n_s,
            )
        },
        ex,
        b - ex,
        n_x,
    )?;
    Ok(0.5 * v)
}

/// Integrates a pointwise functional over a half-plane domain.
pub(crate) fn integrate_plane<G>(
    domain: &DomainDescriptor,
    grid: (usize, usize),
    g: G,
) -> Result<f64>
where
    G: Fn(HalfPlanePoint) -> Result<f64>,
{
    let (n_x, n_y) = grid;
    match domain {
        DomainDescriptor::PlaneRectangle { a, b } => {
            let ey = BOUNDARY_INSET * b;
            try_simpson(
                |y| {
                    try_simpson(
                        |x| g(HalfPlanePoint::new(Complex64::new(x, y))?),
                        0.0,
                        *a,
                        n_x,
                    )
                },
                ey,
                b - ey,
                n_y,
            )
        }
        DomainDescriptor::PlaneImage { phi, a, b } => {
            let es = BOUNDARY_INSET * a;
            let ex = BOUNDARY_INSET * b;
            try_simpson(
                |x| {
                    try_simpson(
                        |s| {
                            let zeta = Complex64::new(s, x);
                            let w = HalfPlanePoint::new(phi.eval(zeta))?;
                            Ok(g(w)? * phi.deriv(zeta).norm_sqr())
                        },
                        es,
                        a - es,
                        n_x,
                    )
                },
                ex,
                b - ex,
                n_y,
            )
        }
        _ => Err(Error::UnsupportedDomain),
    }
}

/// Energy `∫ ρ⁴ dL³` of a Heisenberg density on its domain.
pub fn density_energy_heis(rho: &Density, grid: (usize, usize, usize)) -> Result<f64> {
    if rho.kind() != DensityKind::Heisenberg {
        return Err(Error::UnsupportedDomain);
    }
    integrate_heis(rho.domain(), grid, rho.radial_rule(), |p| {
        let v = rho.eval_heis(p)?;
        Ok(v * v * v * v)
    })
}

/// Energy `∫ ρ² dL²` of a half-plane density on its domain.
pub fn density_energy_plane(rho: &Density, grid: (usize, usize)) -> Result<f64> {
    if rho.kind() != DensityKind::Plane {
        return Err(Error::UnsupportedDomain);
    }
    integrate_plane(rho.domain(), grid, |w| {
        let v = rho.eval_plane(w)?;
        Ok(v * v)
    })
}

fn default_energy(rho: &Density) -> Result<f64> {
    match rho.kind() {
        DensityKind::Heisenberg => density_energy_heis(rho, (64, 48, 64)),
        DensityKind::Plane => density_energy_plane(rho, (128, 128)),
    }
}

/// Scans `∫_γ ρ dl` over a grid of foliation parameters (cell centers of the
/// parameter rectangle) and reports the minimum, its parameter, and the
/// admissibility flag `min ≥ 1 - TOL_ADM`. The report's energy field is the
/// density's energy at a default grid.
pub fn admissibility_min(
    rho: &Density,
    fam: &Foliation,
    n_lambda: (usize, usize),
    n_s: usize,
) -> Result<ModulusReport> {
    let [l1, l2] = fam.parameter_domain();
    let (n1, n2) = (n_lambda.0.max(1), n_lambda.1.max(1));
    let mut min = f64::INFINITY;
    let mut argmin = [f64::NAN, f64::NAN];
    for i in 0..n1 {
        for j in 0..n2 {
            let lam = [
                l1.0 + (i as f64 + 0.5) * (l1.1 - l1.0) / n1 as f64,
                l2.0 + (j as f64 + 0.5) * (l2.1 - l2.0) / n2 as f64,
            ];
            let c = fam.curve(lam)?;
            let v = curve_density_integral(rho, &c, n_s)?;
            if v < min {
                min = v;
                argmin = lam;
            }
        }
    }
    Ok(ModulusReport {
        energy: default_energy(rho)?,
        min_curve_integral: min,
        argmin,
        admissible: min >= 1.0 - TOL_ADM,
    })
}

/// Plane-side admissibility scan over a one-parameter family.
pub fn plane_admissibility_min(
    rho: &Density,
    fam: &PlaneFamily,
    n_lambda: usize,
    n_s: usize,
) -> Result<ModulusReport> {
    let (lo, hi) = fam.parameter_range();
    let n = n_lambda.max(1);
    let mut min = f64::INFINITY;
    let mut argmin = f64::NAN;
    for i in 0..n {
        let lam = lo + (i as f64 + 0.5) * (hi - lo) / n as f64;
        let c = fam.curve(lam);
        let v = plane_curve_integral(rho, &c, n_s)?;
        if v < min {
            min = v;
            argmin = lam;
        }
    }
    Ok(ModulusReport {
        energy: default_energy(rho)?,
        min_curve_integral: min,
        argmin: [argmin, 0.0],
        admissible: min >= 1.0 - TOL_ADM,
    })
}

/// Closed-form moduli and extremal densities.
///
/// * `cylinder_horizontal [a, b]` — the spiral foliation of the cylinder:
///   modulus `16πb³/(3a³)`, extremal `2|z|/a`.
/// * `rectangle_horizontal [a, b]` — horizontal segments of the rectangle:
///   modulus `b/a`, extremal `1/a`.
/// * `cylinder_vertical [a, b]` — radial segments of the cylinder:
///   modulus `16πa/(27b)`, extremal `2/(3 b^{1/3} |z|^{1/3})`.
/// * `annulus_radial [a]` — radial curves of the spherical annulus
///   `1 < ‖p‖ < a`: modulus `π²/ln³a`, extremal `|z|/(ln a · √(t² + |z|⁴))`.
pub fn closed_form_modulus(family_id: &str, params: &[f64]) -> Result<(f64, Density)> {
    match (family_id, params) {
        ("cylinder_horizontal", [a, b]) => {
            let (a, b) = (*a, *b);
            let domain = DomainDescriptor::cylinder(a, b)?;
            let modulus = 16.0 * core::f64::consts::PI * b * b * b / (3.0 * a * a * a);
            let rho = Density::heisenberg(domain, move |p| 2.0 * p.z.norm() / a);
            Ok((modulus, rho))
        }
        ("rectangle_horizontal", [a, b]) => {
            let (a, b) = (*a, *b);
            let domain = DomainDescriptor::plane_rectangle(a, b)?;
            let rho = Density::plane(domain, move |_| 1.0 / a);
            Ok((b / a, rho))
        }
        ("cylinder_vertical", [a, b]) => {
            let (a, b) = (*a, *b);
            let domain = DomainDescriptor::cylinder(a, b)?;
            let modulus = 16.0 * core::f64::consts::PI * a / (27.0 * b);
            let scale = 2.0 / (3.0 * b.powf(1.0 / 3.0));
            let rho = Density::heisenberg(domain, move |p| scale / p.z.norm().powf(1.0 / 3.0))
                .with_radial_rule(RadialRule::CubeRootSubst);
            Ok((modulus, rho))
        }
        ("annulus_radial", [a]) => {
            let a = *a;
            if !(a > 1.0) {
                return Err(Error::BadDomain);
            }
            let domain = DomainDescriptor::spherical_annulus(1.0, a)?;
            let ln_a = a.ln();
            let modulus = core::f64::consts::PI * core::f64::consts::PI / (ln_a * ln_a * ln_a);
            let rho = Density::heisenberg(domain, move |p| {
                let zz = p.z.norm_sqr();
                p.z.norm() / (ln_a * (p.t * p.t + zz * zz).sqrt())
            });
            Ok((modulus, rho))
        }
        _ => Err(Error::UnknownFamily),
    }
}

/// The curve family realizing each closed-form modulus.
#[derive(Debug)]
pub enum FamilyCurves {
    Heis(Foliation),
    Plane(PlaneFamily),
}

/// Returns the foliation (or plane family) whose modulus
/// [`closed_form_modulus`] reports.
pub fn family_curves(family_id: &str, params: &[f64]) -> Result<FamilyCurves> {
    match (family_id, params) {
        ("cylinder_horizontal", [a, b]) => Ok(FamilyCurves::Heis(crate::curves::foliation_gamma0(*a, *b))),
        ("rectangle_horizontal", [a, b]) => {
            let (a, _b) = (*a, *b);
            let fam = PlaneFamily::new((0.0, *b), move |y| {
                crate::curves::PlaneCurve::with_velocity(
                    (0.0, a),
                    move |s| Complex64::new(s, y),
                    |_| Complex64::new(1.0, 0.0),
                )
            });
            Ok(FamilyCurves::Plane(fam))
        }
        ("cylinder_vertical", [a, b]) => Ok(FamilyCurves::Heis(crate::curves::foliation_vertical(*a, *b))),
        ("annulus_radial", [a]) => {
            if !(*a > 1.0) {
                return Err(Error::BadDomain);
            }
            let exp = builtin_biholomorphism("exp", &[])?;
            Ok(FamilyCurves::Heis(crate::curves::foliation_from_biholomorphism(
                &exp,
                2.0 * a.ln(),
                core::f64::consts::PI,
            )))
        }
        _ => Err(Error::UnknownFamily),
    }
}

/// Pull-back of a half-plane density by the projection:
/// `(Π*ρ)(z,t) = 2|z| ρ(t + i|z|²)` on the lifted domain.
/// Evaluation fails with `AxisPoint` at `z = 0`.
pub fn pull_back_density(rho: &Density, lifted_domain: DomainDescriptor) -> Result<Density> {
    if rho.kind() != DensityKind::Plane {
        return Err(Error::UnsupportedDomain);
    }
    if lifted_domain.is_plane() {
        return Err(Error::UnsupportedDomain);
    }
    let rho = rho.clone();
    Ok(Density::heisenberg_fallible(lifted_domain, move |p| {
        let w = project_pi(p)?;
        Ok(2.0 * p.z.norm() * rho.eval_plane(w)?)
    }))
}

/// Push-forward density `f_*ρ = ρ / (|Zf₁| - |Z̄f₁|) ∘ f⁻¹`, evaluated at the
/// image point `f(p)` so that no inversion of `f` is needed. Returns the
/// image point and the density value there.
pub fn push_forward_at_image(rho: &Density, f: &QCMap, p: HPoint) -> Result<(HPoint, f64)> {
    if !rho.domain().contains_heis(p) {
        return Err(Error::DomainEscape);
    }
    let (zf1, zbf1) = horizontal_derivatives(f, p)?;
    let gap = zf1.norm() - zbf1.norm();
    if gap <= EPS_DERIV {
        return Err(Error::DegenerateDerivative);
    }
    let image = f.apply(p)?;
    Ok((image, rho.eval_heis(p)? / gap))
}

/// Pointwise residual of the commutation identity `Π*(g_*ρ) = f_*(Π*ρ)` for
/// a pair with `Π ∘ f = g ∘ Π`, evaluated at the image points `f(p)` of the
/// given samples. Both sides are compared relative to their magnitude.
///
/// The left side needs `g⁻¹` (to evaluate the plane push-forward at
/// `Π(f(p))`, wherever that lands), so the plane map must carry an inverse.
pub fn commutation_residual(
    rho: &Density,
    g: &PlaneMap,
    f: &QCMap,
    samples: &[HPoint],
) -> Result<f64> {
    if rho.kind() != DensityKind::Plane {
        return Err(Error::UnsupportedDomain);
    }
    let mut worst = 0.0f64;
    for &p in samples {
        let w = project_pi(p)?;
        let q = f.apply(p)?;
        let wq = project_pi(q)?;

        // pull-back of g_*rho at q
        let wsrc = g.invert(wq)?;
        let (dg, dgbar) = g.derivs(wsrc)?;
        let plane_gap = dg.norm() - dgbar.norm();
        if plane_gap <= EPS_DERIV {
            return Err(Error::DegenerateDerivative);
        }
        let lhs = 2.0 * q.z.norm() * rho.eval_plane_raw(wsrc)? / plane_gap;

        // push-forward of the pull-back at q
        let (zf1, zbf1) = horizontal_derivatives(f, p)?;
        let gap = zf1.norm() - zbf1.norm();
        if gap <= EPS_DERIV {
            return Err(Error::DegenerateDerivative);
        }
        let rhs = 2.0 * p.z.norm() * rho.eval_plane(w)? / gap;

        let denom = lhs.abs().max(rhs.abs()).max(1e-300);
        worst = worst.max((lhs - rhs).abs() / denom);
    }
    Ok(worst)
}

/// Deterministic low-discrepancy interior samples of a Heisenberg domain
/// (additive-recurrence sequence mapped through the domain's natural
/// coordinates). Intended for residual scans.
pub fn interior_samples(domain: &DomainDescriptor, n: usize, margin: f64) -> Result<Vec<HPoint>> {
    let mut out = Vec::with_capacity(n);
    // Kronecker sequence with cube-root-of-2 increments
    let g1 = 0.819172513396164;
    let g2 = 0.671043606703789;
    let g3 = 0.549700477901936;
    let frac = |x: f64| x - x.floor();
    let squeeze = move |u: f64| margin + (1.0 - 2.0 * margin) * u;
    for k in 0..n {
        let kf = k as f64 + 0.5;
        let (u1, u2, u3) = (frac(kf * g1), frac(kf * g2), frac(kf * g3));
        let p = match domain {
            DomainDescriptor::Cylinder { a, b } => {
                let r = (squeeze(u1) * b).sqrt().max(1e-3 * b.sqrt());
                let theta = core::f64::consts::TAU * u2;
                HPoint::new(Complex64::from_polar(r, theta), squeeze(u3) * a)
            }
            DomainDescriptor::CylinderShell { a, b_lo, b_hi } => {
                let x = b_lo + squeeze(u1) * (b_hi - b_lo);
                let theta = core::f64::consts::TAU * u2;
                HPoint::new(Complex64::from_polar(x.sqrt(), theta), squeeze(u3) * a)
            }
            DomainDescriptor::SphericalAnnulus { r_lo, r_hi } => {
                let c = r_lo * r_lo;
                let a_len = 2.0 * (r_hi / r_lo).ln();
                let s = squeeze(u1) * a_len;
                let x = margin.max(0.05) * core::f64::consts::PI
                    + (1.0 - 2.0 * margin.max(0.05)) * core::f64::consts::PI * u2;
                let w = c * Complex64::new(s, x).exp();
                let theta = core::f64::consts::TAU * u3;
                chart_to_heis(theta, HalfPlanePoint::new(w)?)
            }
            DomainDescriptor::ChartImage { phi, a, b } => {
                let zeta = Complex64::new(squeeze(u1) * a, squeeze(u2) * b);
                let w = phi.eval(zeta);
                chart_to_heis(core::f64::consts::TAU * u3, HalfPlanePoint::new(w)?)
            }
            _ => return Err(Error::UnsupportedDomain),
        };
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{foliation_gamma0, foliation_vertical};
    use crate::qcmaps::{cylinder_extremal_map, plane_minimizer_gphi};
    use approx::assert_relative_eq;
    use core::f64::consts::PI;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn cylinder_energy_matches_closed_form() {
        let (m, rho) = closed_form_modulus("cylinder_horizontal", &[1.0, 1.0]).unwrap();
        assert_relative_eq!(m, 16.0 * PI / 3.0, epsilon = 1e-14);
        let e = density_energy_heis(&rho, (64, 32, 64)).unwrap();
        assert!((e - m).abs() <= 1e-4 * m, "energy {e} vs {m}");
    }

    #[test]
    fn zero_density_has_zero_energy() {
        let rho = Density::heisenberg(DomainDescriptor::cylinder(1.0, 1.0).unwrap(), |_| 0.0);
        assert_eq!(density_energy_heis(&rho, (16, 8, 16)).unwrap(), 0.0);
        let rho = Density::plane(DomainDescriptor::plane_rectangle(1.0, 1.0).unwrap(), |_| 0.0);
        assert_eq!(density_energy_plane(&rho, (16, 16)).unwrap(), 0.0);
    }

    #[test]
    fn vertical_family_energy_and_distinctness() {
        let (m, rho) = closed_form_modulus("cylinder_vertical", &[1.0, 1.0]).unwrap();
        assert_relative_eq!(m, 16.0 * PI / 27.0, epsilon = 1e-14);
        let e = density_energy_heis(&rho, (64, 32, 64)).unwrap();
        assert!((e - m).abs() <= 1e-3 * m, "energy {e} vs {m}");

        // σ̃ is not the pull-back of the plane extremal 1/b
        let p = HPoint::from_parts(0.5, 0.0, 0.5);
        let sigma = rho.eval_heis(p).unwrap();
        let pullback_of_plane = 2.0 * p.z.norm() * 1.0; // 2|z| * (1/b), b = 1
        assert!((sigma - pullback_of_plane).abs() > 0.1);
    }

    #[test]
    fn plane_energy_exact_for_groetzsch() {
        for (a, b) in [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0)] {
            let (m, rho) = closed_form_modulus("rectangle_horizontal", &[a, b]).unwrap();
            assert_relative_eq!(m, b / a, epsilon = 1e-15);
            let e = density_energy_plane(&rho, (64, 64)).unwrap();
            assert_relative_eq!(e, b / a, epsilon = 1e-10);
        }
        // constant density, exact quadrature
        let rho = Density::plane(DomainDescriptor::plane_rectangle(2.0, 3.0).unwrap(), |_| 0.5);
        assert_relative_eq!(density_energy_plane(&rho, (32, 32)).unwrap(), 1.5, epsilon = 1e-10);
    }

    #[test]
    fn annulus_energy_matches_closed_form() {
        let a = core::f64::consts::E;
        let (m, rho) = closed_form_modulus("annulus_radial", &[a]).unwrap();
        assert_relative_eq!(m, PI * PI, epsilon = 1e-12);
        let e = density_energy_heis(&rho, (64, 32, 64)).unwrap();
        assert!((e - m).abs() <= 1e-3 * m, "energy {e} vs modulus {m}");
    }

    #[test]
    fn unknown_family_is_rejected() {
        assert_eq!(closed_form_modulus("squares", &[1.0]).unwrap_err(), Error::UnknownFamily);
        assert_eq!(closed_form_modulus("cylinder_horizontal", &[1.0]).unwrap_err(), Error::UnknownFamily);
        assert_eq!(family_curves("squares", &[1.0]).unwrap_err(), Error::UnknownFamily);
    }

    #[test]
    fn admissibility_of_cylinder_extremal() {
        let (_, rho) = closed_form_modulus("cylinder_horizontal", &[1.0, 1.0]).unwrap();
        let fam = foliation_gamma0(1.0, 1.0);
        let rep = admissibility_min(&rho, &fam, (12, 8), 64).unwrap();
        assert!((rep.min_curve_integral - 1.0).abs() <= 1e-8, "min {}", rep.min_curve_integral);
        assert!(rep.admissible);

        // halving the density halves the min and breaks admissibility
        let half = Density::heisenberg(rho.domain().clone(), move |p| p.z.norm());
        let rep2 = admissibility_min(&half, &fam, (12, 8), 64).unwrap();
        assert_relative_eq!(rep2.min_curve_integral, 0.5, epsilon = 1e-8);
        assert!(!rep2.admissible);
    }

    #[test]
    fn admissibility_of_vertical_extremal() {
        let (_, rho) = closed_form_modulus("cylinder_vertical", &[1.0, 1.0]).unwrap();
        let fam = foliation_vertical(1.0, 1.0);
        let rep = admissibility_min(&rho, &fam, (12, 8), 64).unwrap();
        assert!((rep.min_curve_integral - 1.0).abs() <= 1e-6, "min {}", rep.min_curve_integral);
        assert!(rep.admissible);
    }

    #[test]
    fn admissibility_of_annulus_pullback() {
        // the plane extremal of the radial half-annulus family pulls back to
        // the annulus extremal
        let a: f64 = 2.0;
        let ln_a = a.ln();
        let plane_dom = DomainDescriptor::plane_image(
            builtin_biholomorphism("exp", &[]).unwrap(),
            2.0 * ln_a,
            PI,
        )
        .unwrap();
        let rho_half = Density::plane(plane_dom, move |w| 1.0 / (2.0 * ln_a * w.w().norm()));
        let lifted = pull_back_density(&rho_half, DomainDescriptor::spherical_annulus(1.0, a).unwrap()).unwrap();

        // matches the closed-form annulus extremal pointwise
        let (_, rho_ann) = closed_form_modulus("annulus_radial", &[a]).unwrap();
        let p = HPoint::from_parts(0.9, 0.3, 1.1);
        assert_relative_eq!(
            lifted.eval_heis(p).unwrap(),
            rho_ann.eval_heis(p).unwrap(),
            epsilon = 1e-12
        );

        let exp = builtin_biholomorphism("exp", &[]).unwrap();
        let fam = crate::curves::foliation_from_biholomorphism(&exp, 2.0 * ln_a, PI);
        let rep = admissibility_min(&lifted, &fam, (10, 6), 64).unwrap();
        assert!((rep.min_curve_integral - 1.0).abs() <= 1e-6, "min {}", rep.min_curve_integral);
    }

    #[test]
    fn pull_back_of_groetzsch_density_is_cylinder_extremal() {
        let (_, rho0) = closed_form_modulus("rectangle_horizontal", &[1.0, 1.0]).unwrap();
        let lifted = pull_back_density(&rho0, DomainDescriptor::cylinder(1.0, 1.0).unwrap()).unwrap();
        let (_, rho_cyl) = closed_form_modulus("cylinder_horizontal", &[1.0, 1.0]).unwrap();
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..50 {
            let p = HPoint::new(
                Complex64::from_polar(rng.gen_range(0.01..0.99f64).sqrt(), rng.gen_range(0.0..core::f64::consts::TAU)),
                rng.gen_range(0.01..0.99),
            );
            assert_relative_eq!(
                lifted.eval_heis(p).unwrap(),
                rho_cyl.eval_heis(p).unwrap(),
                epsilon = 1e-13
            );
        }
        // axis evaluation errors
        assert_eq!(
            lifted.eval_heis(HPoint::from_parts(0.0, 0.0, 0.5)).unwrap_err(),
            Error::AxisPoint
        );
        // zero pulls back to zero
        let zero = Density::plane(DomainDescriptor::plane_rectangle(1.0, 1.0).unwrap(), |_| 0.0);
        let z = pull_back_density(&zero, DomainDescriptor::cylinder(1.0, 1.0).unwrap()).unwrap();
        assert_eq!(z.eval_heis(HPoint::from_parts(0.5, 0.0, 0.5)).unwrap(), 0.0);
    }

    #[test]
    fn pull_back_preserves_admissibility() {
        // an admissible non-extremal plane density on the rectangle
        let dom = DomainDescriptor::plane_rectangle(1.0, 1.0).unwrap();
        let rho = Density::plane(dom, |w| 1.0 + 0.3 * (3.0 * w.im()).sin() * (1.0 - w.re()));
        // plane family minimum
        let fam = match family_curves("rectangle_horizontal", &[1.0, 1.0]).unwrap() {
            FamilyCurves::Plane(f) => f,
            _ => unreachable!(),
        };
        let plane_rep = plane_admissibility_min(&rho, &fam, 64, 128).unwrap();
        assert!(plane_rep.min_curve_integral >= 1.0 - 1e-9);

        let lifted = pull_back_density(&rho, DomainDescriptor::cylinder(1.0, 1.0).unwrap()).unwrap();
        let fol = foliation_gamma0(1.0, 1.0);
        let rep = admissibility_min(&lifted, &fol, (16, 12), 128).unwrap();
        assert!(rep.min_curve_integral >= 1.0 - 1e-8, "lifted min {}", rep.min_curve_integral);

        // per-curve: the lifted integral equals the plane integral of the shadow
        for r in [0.3f64, 0.65, 0.9] {
            let lifted_curve = fol.curve([r, 0.8]).unwrap();
            let plane_curve = fam.curve(r * r);
            let vi = crate::curves::curve_density_integral(&lifted, &lifted_curve, 128).unwrap();
            let vp = crate::curves::plane_curve_integral(&rho, &plane_curve, 128).unwrap();
            assert!((vi - vp).abs() <= 1e-10, "{vi} vs {vp}");
        }
    }

    #[test]
    fn push_forward_identity_and_cylinder() {
        let (_, rho) = closed_form_modulus("cylinder_horizontal", &[1.0, 1.0]).unwrap();
        let id = QCMap::identity(DomainDescriptor::cylinder(1.0, 1.0).unwrap());
        let p = HPoint::from_parts(0.4, 0.2, 0.6);
        let (image, v) = push_forward_at_image(&rho, &id, p).unwrap();
        assert_eq!(image, p);
        assert_relative_eq!(v, rho.eval_heis(p).unwrap(), epsilon = 1e-15);

        // f_* of the source extremal is the target extremal 2|f1|/a'
        let f = cylinder_extremal_map(1.0, 1.0, 1.0, 2.0, 0.0).unwrap();
        let mut rng = StdRng::seed_from_u64(33);
        for _ in 0..200 {
            let p = HPoint::new(
                Complex64::from_polar(rng.gen_range(0.01..0.98f64).sqrt(), rng.gen_range(0.0..core::f64::consts::TAU)),
                rng.gen_range(0.02..0.98),
            );
            let (image, v) = push_forward_at_image(&rho, &f, p).unwrap();
            let want = 2.0 * image.z.norm() / 1.0;
            assert!((v - want).abs() <= 1e-6 * want, "{v} vs {want}");
        }
        // outside the domain
        assert_eq!(
            push_forward_at_image(&rho, &f, HPoint::from_parts(0.5, 0.0, 3.0)).unwrap_err(),
            Error::DomainEscape
        );
    }

    #[test]
    fn energy_identity_for_cylinder_map() {
        // ∫ (f_* ρ)⁴ over the image = ∫ K² ρ⁴ over the source = 16π b'³/(3a'³)
        let (a, b, ap, bp) = (1.0, 1.0, 1.0, 2.0);
        let f = cylinder_extremal_map(a, b, ap, bp, 0.0).unwrap();
        let (_, rho) = closed_form_modulus("cylinder_horizontal", &[a, b]).unwrap();
        let lhs = crate::qcmaps::mean_distortion(&f, &rho, (64, 32, 64)).unwrap();
        let want = 16.0 * PI * bp.powi(3) / (3.0 * ap.powi(3));
        assert!((lhs - want).abs() <= 1e-3 * want, "{lhs} vs {want}");

        // image-side energy of the closed-form push-forward agrees
        let (_, rho_img) = closed_form_modulus("cylinder_horizontal", &[ap, bp]).unwrap();
        let rhs = density_energy_heis(&rho_img, (64, 32, 64)).unwrap();
        assert!((lhs - rhs).abs() <= 1e-3 * want);
    }

    #[test]
    fn commutation_residual_cylinder_pair() {
        let (a, b, ap, bp) = (1.0, 1.0, 1.0, 2.0);
        let f = cylinder_extremal_map(a, b, ap, bp, 0.0).unwrap();
        let g = plane_minimizer_gphi(a, b, ap, bp, move |y| bp * y / ((1.0 - a * bp / (ap * b)) * y + a * bp / ap)).unwrap();
        let (_, rho0) = closed_form_modulus("rectangle_horizontal", &[a, b]).unwrap();

        let id = QCMap::identity(DomainDescriptor::cylinder(1.0, 1.0).unwrap());
        let gid = PlaneMap::new(|w| w)
            .with_derivatives(|_| Complex64::new(1.0, 0.0), |_| Complex64::new(0.0, 0.0))
            .with_inverse(|w| w);

        let samples = interior_samples(&DomainDescriptor::cylinder(1.0, 1.0).unwrap(), 200, 0.02).unwrap();
        assert!(commutation_residual(&rho0, &gid, &id, &samples).unwrap() <= 1e-12);
        let r = commutation_residual(&rho0, &g, &f, &samples).unwrap();
        assert!(r <= 1e-6, "residual {r}");
    }

    #[test]
    fn commutation_residual_detects_mismatch() {
        // compose the image with a vertical translation: Π ∘ f ≠ g ∘ Π; a
        // Re-dependent density sees the shift
        let (a, b, ap, bp) = (1.0, 1.0, 1.0, 2.0);
        let f = cylinder_extremal_map(a, b, ap, bp, 0.0).unwrap();
        let shifted = {
            let f = f.clone();
            let g = f.clone();
            QCMap::new_analytic(
                f.source.clone(),
                f.target.clone(),
                move |p| f.f1(p),
                move |p| Ok(g.f2(p)? + 0.3),
                {
                    let f = cylinder_extremal_map(a, b, ap, bp, 0.0).unwrap();
                    move |p| horizontal_derivatives(&f, p).map(|d| d.0)
                },
                {
                    let f = cylinder_extremal_map(a, b, ap, bp, 0.0).unwrap();
                    move |p| horizontal_derivatives(&f, p).map(|d| d.1)
                },
            )
        };
        let g = plane_minimizer_gphi(a, b, ap, bp, move |y| bp * y / ((1.0 - a * bp / (ap * b)) * y + a * bp / ap)).unwrap();
        let dom = DomainDescriptor::plane_rectangle(a, b).unwrap();
        let rho = Density::plane(dom, move |w| (1.0 + w.re()) / a);

        let samples = interior_samples(&DomainDescriptor::cylinder(1.0, 1.0).unwrap(), 100, 0.05).unwrap();
        let clean = commutation_residual(&rho, &g, &f, &samples).unwrap();
        assert!(clean <= 1e-6, "clean pair residual {clean}");
        let broken = commutation_residual(&rho, &g, &shifted, &samples).unwrap();
        assert!(broken > 0.1, "broken pair residual {broken}");
    }

    #[test]
    fn quadrature_convergence_on_smooth_extremals() {
        let (_, rho) = closed_form_modulus("cylinder_horizontal", &[1.0, 1.0]).unwrap();
        let e1 = density_energy_heis(&rho, (32, 16, 32)).unwrap();
        let e2 = density_energy_heis(&rho, (64, 32, 64)).unwrap();
        assert!((e1 - e2).abs() <= 1e-3 * e2.abs());

        let (_, rho) = closed_form_modulus("annulus_radial", &[2.0]).unwrap();
        let e1 = density_energy_heis(&rho, (32, 16, 32)).unwrap();
        let e2 = density_energy_heis(&rho, (64, 32, 64)).unwrap();
        assert!((e1 - e2).abs() <= 1e-3 * e2.abs());
    }

    #[test]
    fn extremality_lower_bound_under_perturbations() {
        // perturb each closed-form extremal, renormalize to admissibility,
        // and check the energy does not drop below the modulus
        let mut rng = StdRng::seed_from_u64(101);
        let fam = foliation_gamma0(1.0, 1.0);
        let (m, rho) = closed_form_modulus("cylinder_horizontal", &[1.0, 1.0]).unwrap();
        for _ in 0..20 {
            let (c1, c2, c3) = (
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(0.5..3.0),
            );
            let eps = 0.1;
            let rho_in = rho.clone();
            let pert = Density::heisenberg_fallible(rho.domain().clone(), move |p| {
                let eta = c1 * (c3 * p.t).sin() + c2 * (2.0 * c3 * p.z.norm_sqr()).cos();
                Ok(rho_in.eval_heis(p)? * (1.0 + eps * eta))
            });
            let rep = admissibility_min(&pert, &fam, (16, 8), 64).unwrap();
            let min = rep.min_curve_integral;
            assert!(min > 0.0);
            let pert_in = pert.clone();
            let normalized = Density::heisenberg_fallible(rho.domain().clone(), move |p| {
                Ok(pert_in.eval_heis(p)? / min)
            });
            let e = density_energy_heis(&normalized, (48, 24, 48)).unwrap();
            assert!(e >= m - 1e-3 * m, "perturbed energy {e} below modulus {m}");
        }
    }

    #[test]
    fn interior_samples_stay_inside() {
        for dom in [
            DomainDescriptor::cylinder(1.0, 1.0).unwrap(),
            DomainDescriptor::spherical_annulus(1.0, 2.0).unwrap(),
            DomainDescriptor::cylinder_shell(1.0, 1.0, 2.0).unwrap(),
        ] {
            for p in interior_samples(&dom, 100, 0.02).unwrap() {
                assert!(dom.contains_heis(p));
            }
        }
    }

    #[test]
    fn cylinder_shell_energy() {
        // int of (2|z|)^4 over {0<t<1, 1/2<|z|^2<1}: 32*pi*(1 - 1/8)/6
        let dom = DomainDescriptor::cylinder_shell(1.0, 0.5, 1.0).unwrap();
        let rho = Density::heisenberg(dom, |p: HPoint| 2.0 * p.z.norm());
        let want = 16.0 * PI * (1.0 - 0.125) / 3.0;
        let e = density_energy_heis(&rho, (48, 24, 48)).unwrap();
        assert_relative_eq!(e, want, max_relative = 1e-6);
    }

    #[test]
    fn plane_image_energy_of_half_annulus() {
        // radial extremal 1/(2 ln a |w|) on the half-annulus exp((0, 2 ln a) x (0, pi)):
        // energy pi/(2 ln a)
        let a: f64 = 2.0;
        let ln_a = a.ln();
        let dom = DomainDescriptor::plane_image(
            builtin_biholomorphism("exp", &[]).unwrap(),
            2.0 * ln_a,
            PI,
        )
        .unwrap();
        let rho = Density::plane(dom, move |w| 1.0 / (2.0 * ln_a * w.w().norm()));
        let e = density_energy_plane(&rho, (96, 96)).unwrap();
        assert_relative_eq!(e, PI / (2.0 * ln_a), max_relative = 1e-6);
    }

    #[test]
    fn chart_image_membership_and_scale() {
        let exp = builtin_biholomorphism("exp", &[]).unwrap();
        let dom = DomainDescriptor::chart_image(exp, 2.0 * 2.0f64.ln(), PI).unwrap();
        // a point of the annulus 1 < ||p|| < 2
        let p = HPoint::from_parts(1.1, 0.0, 0.4);
        assert!(dom.contains_heis(p));
        // far outside
        assert!(!dom.contains_heis(HPoint::from_parts(5.0, 0.0, 0.0)));
        assert!(dom.scale() > 0.0);
    }
}

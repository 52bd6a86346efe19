//! Quasiconformal maps between Heisenberg domains: horizontal derivatives
//! `Zf₁`, `Z̄f₁`, the Beltrami coefficient `μ = Z̄f₁/Zf₁`, the distortion
//! `K = (|Zf₁|+|Z̄f₁|)/(|Zf₁|-|Z̄f₁|)`, a contact-residual diagnostic, the
//! mean distortion functional `∫ K² ρ⁴ dL³`, and the two explicit extremal
//! maps: the cylinder map and the spherical-annuli map.

use alloc::sync::Arc;

use num_complex::Complex64;

use crate::heis::{HalfPlanePoint, HPoint};
use crate::hol::Biholomorphism;
use crate::modulus::{integrate_heis, Density, DensityKind, DomainDescriptor, EPS_DERIV};
use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

type CFn = Arc<dyn Fn(HPoint) -> Result<Complex64> + Send + Sync>;
type RFn = Arc<dyn Fn(HPoint) -> Result<f64> + Send + Sync>;
type WFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// How horizontal derivatives of the complex part are obtained.
#[derive(Clone)]
enum DerivMode {
    /// Closed-form `Zf₁` and `Z̄f₁` supplied by the constructor.
    Analytic { zf1: CFn, zbarf1: CFn },
    /// Central finite differences with the given steps.
    Numeric { h_z: f64, h_t: f64 },
}

/// A map `f = (f₁, f₂)` between Heisenberg domains with evaluable horizontal
/// derivatives of the complex part. Orientation preservation
/// (`|Zf₁| > |Z̄f₁|`) is a standing assumption checked by the distortion
/// operations, not enforced at construction.
#[derive(Clone)]
pub struct QCMap {
    pub source: DomainDescriptor,
    pub target: DomainDescriptor,
    f1: CFn,
    f2: RFn,
    derivs: DerivMode,
}

impl core::fmt::Debug for QCMap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("QCMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

impl QCMap {
    pub fn new_analytic<F1, F2, D1, D2>(
        source: DomainDescriptor,
        target: DomainDescriptor,
        f1: F1,
        f2: F2,
        zf1: D1,
        zbarf1: D2,
    ) -> Self
    where
        F1: Fn(HPoint) -> Result<Complex64> + Send + Sync + 'static,
        F2: Fn(HPoint) -> Result<f64> + Send + Sync + 'static,
        D1: Fn(HPoint) -> Result<Complex64> + Send + Sync + 'static,
        D2: Fn(HPoint) -> Result<Complex64> + Send + Sync + 'static,
    {
        QCMap {
            source,
            target,
            f1: Arc::new(f1),
            f2: Arc::new(f2),
            derivs: DerivMode::Analytic { zf1: Arc::new(zf1), zbarf1: Arc::new(zbarf1) },
        }
    }

    /// Numeric derivative mode with steps `1e-5 * source scale`.
    pub fn new_numeric<F1, F2>(
        source: DomainDescriptor,
        target: DomainDescriptor,
        f1: F1,
        f2: F2,
    ) -> Self
    where
        F1: Fn(HPoint) -> Result<Complex64> + Send + Sync + 'static,
        F2: Fn(HPoint) -> Result<f64> + Send + Sync + 'static,
    {
        let h = 1e-5 * source.scale();
        QCMap {
            source,
            target,
            f1: Arc::new(f1),
            f2: Arc::new(f2),
            derivs: DerivMode::Numeric { h_z: h, h_t: h },
        }
    }

    pub fn identity(domain: DomainDescriptor) -> Self {
        QCMap::new_analytic(
            domain.clone(),
            domain,
            |p| Ok(p.z),
            |p| Ok(p.t),
            |_| Ok(Complex64::new(1.0, 0.0)),
            |_| Ok(Complex64::new(0.0, 0.0)),
        )
    }

    pub fn f1(&self, p: HPoint) -> Result<Complex64> {
        (self.f1)(p)
    }

    pub fn f2(&self, p: HPoint) -> Result<f64> {
        (self.f2)(p)
    }

    pub fn apply(&self, p: HPoint) -> Result<HPoint> {
        Ok(HPoint::new(self.f1(p)?, self.f2(p)?))
    }
}

/// Horizontal derivatives `(Zf₁, Z̄f₁)` at `p`, where `Z = ∂_z + i z̄ ∂_t`
/// and `Z̄ = ∂_z̄ - i z ∂_t`. Numeric mode assembles them from central
/// differences; all probe points must stay in the source domain.
pub fn horizontal_derivatives(f: &QCMap, p: HPoint) -> Result<(Complex64, Complex64)> {
    match &f.derivs {
        DerivMode::Analytic { zf1, zbarf1 } => Ok((zf1(p)?, zbarf1(p)?)),
        DerivMode::Numeric { h_z, h_t } => {
            let (hz, ht) = (*h_z, *h_t);
            let probes = [
                HPoint::new(p.z + hz, p.t),
                HPoint::new(p.z - hz, p.t),
                HPoint::new(p.z + Complex64::new(0.0, hz), p.t),
                HPoint::new(p.z - Complex64::new(0.0, hz), p.t),
                HPoint::new(p.z, p.t + ht),
                HPoint::new(p.z, p.t - ht),
            ];
            for q in &probes {
                if !f.source.contains_heis(*q) {
                    return Err(Error::BoundaryTooClose);
                }
            }
            let fx = (f.f1(probes[0])? - f.f1(probes[1])?) / (2.0 * hz);
            let fy = (f.f1(probes[2])? - f.f1(probes[3])?) / (2.0 * hz);
            let ft = (f.f1(probes[4])? - f.f1(probes[5])?) / (2.0 * ht);
            let i = Complex64::new(0.0, 1.0);
            let dz = 0.5 * (fx - i * fy);
            let dzbar = 0.5 * (fx + i * fy);
            Ok((dz + i * p.z.conj() * ft, dzbar - i * p.z * ft))
        }
    }
}

/// Beltrami coefficient `μ(p) = Z̄f₁(p) / Zf₁(p)`.
pub fn beltrami(f: &QCMap, p: HPoint) -> Result<Complex64> {
    let (zf1, zbf1) = horizontal_derivatives(f, p)?;
    if zf1.norm() <= EPS_DERIV {
        return Err(Error::DegenerateDerivative);
    }
    Ok(zbf1 / zf1)
}

/// Distortion `K(p,f) = (|Zf₁| + |Z̄f₁|) / (|Zf₁| - |Z̄f₁|) ≥ 1`.
pub fn distortion_k(f: &QCMap, p: HPoint) -> Result<f64> {
    let (zf1, zbf1) = horizontal_derivatives(f, p)?;
    let (a, b) = (zf1.norm(), zbf1.norm());
    if a - b <= EPS_DERIV {
        return Err(Error::DegenerateDerivative);
    }
    Ok((a + b) / (a - b))
}

/// Contact defect of `f` at `p`: pushes the two horizontal basis tangents
/// (`dz ∈ {1, i}`, `dt = -2 Im(z̄ dz)`) through a finite-difference
/// differential of `f` and returns the larger of
/// `|ω_{f(p)}(df(v))| / |df(v)|`. Near zero means `f` is contact at `p`.
pub fn contact_residual(f: &QCMap, p: HPoint) -> Result<f64> {
    let h = 1e-5 * f.source.scale();
    let mut worst = 0.0f64;
    for dz in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
        let dt = -2.0 * (p.z.conj() * dz).im;
        let plus = HPoint::new(p.z + h * dz, p.t + h * dt);
        let minus = HPoint::new(p.z - h * dz, p.t - h * dt);
        if !f.source.contains_heis(plus) || !f.source.contains_heis(minus) {
            return Err(Error::BoundaryTooClose);
        }
        let fp = f.apply(plus)?;
        let fm = f.apply(minus)?;
        let df1 = (fp.z - fm.z) / (2.0 * h);
        let df2 = (fp.t - fm.t) / (2.0 * h);
        let fimg = f.apply(p)?;
        let omega = df2 + 2.0 * (fimg.z.conj() * df1).im;
        let speed = (df1.norm_sqr() + df2 * df2).sqrt().max(1e-300);
        worst = worst.max(omega.abs() / speed);
    }
    Ok(worst)
}

/// Mean distortion `∫ K(·,f)² ρ⁴ dL³` over the density's (Heisenberg) domain.
pub fn mean_distortion(f: &QCMap, rho: &Density, grid: (usize, usize, usize)) -> Result<f64> {
    if rho.kind() != DensityKind::Heisenberg {
        return Err(Error::UnsupportedDomain);
    }
    integrate_heis(rho.domain(), grid, rho.radial_rule(), |p| {
        let k = distortion_k(f, p)?;
        let r = rho.eval_heis(p)?;
        Ok(k * k * r * r * r * r)
    })
}

/// The extremal map between the cylinders `{0<t<a, |z|²<b}` and
/// `{0<t<a', |z|²<b'}` (rotated by `alpha`), with closed-form horizontal
/// derivatives:
///
/// `f(z,t) = ( e^{iα} √b' z e^{iβt} / √(C|z|² + E), (a'/a) t )`
///
/// with `C = 1 - ab'/(a'b)`, `E = ab'/a'`, `β = (1 - a'b/(ab'))/(2b)`.
/// Requires `ab'/(a'b) > 1`.
pub fn cylinder_extremal_map(a: f64, b: f64, ap: f64, bp: f64, alpha: f64) -> Result<QCMap> {
    if !(a > 0.0 && b > 0.0 && ap > 0.0 && bp > 0.0) {
        return Err(Error::BadDomain);
    }
    if !(a * bp / (ap * b) > 1.0) {
        return Err(Error::BadModuli);
    }
    let c = 1.0 - a * bp / (ap * b);
    let e = a * bp / ap;
    let beta = (1.0 - ap * b / (a * bp)) / (2.0 * b);
    let rot = Complex64::from_polar(1.0, alpha);
    let sqrt_bp = bp.sqrt();

    let common = move |p: HPoint| -> (f64, Complex64) {
        let d2 = c * p.z.norm_sqr() + e;
        let phase = sqrt_bp * Complex64::from_polar(1.0, beta * p.t);
        (d2, phase)
    };

    let f1 = move |p: HPoint| -> Result<Complex64> {
        let (d2, phase) = common(p);
        Ok(rot * phase * p.z / d2.sqrt())
    };
    let f2 = move |p: HPoint| -> Result<f64> { Ok(ap / a * p.t) };
    let zf1 = move |p: HPoint| -> Result<Complex64> {
        let (d2, phase) = common(p);
        let d = d2.sqrt();
        let zz = p.z.norm_sqr();
        Ok(rot * phase * ((0.5 * c * zz + e) / (d2 * d) - beta * zz / d))
    };
    let zbarf1 = move |p: HPoint| -> Result<Complex64> {
        let (d2, phase) = common(p);
        let d = d2.sqrt();
        Ok(rot * phase * p.z * p.z * (beta / d - 0.5 * c / (d2 * d)))
    };

    Ok(QCMap::new_analytic(
        DomainDescriptor::cylinder(a, b)?,
        DomainDescriptor::cylinder(ap, bp)?,
        f1,
        f2,
        zf1,
        zbarf1,
    ))
}

/// The extremal map between the spherical annuli `{1 < ‖p‖ < a}` and
/// `{1 < ‖p‖ < a^k}` for `a > 1`, `0 < k < 1`:
///
/// `f(z,t) = ( √k z ((t-i|z|²)/(t-ik|z|²))^{1/2} |w|^{(k-1)/2},
///             t |w|^k / |t+ik|z|²| )` with `w = t + i|z|²`,
///
/// extended along the vertical axis by `(0,t) ↦ (0, t|t|^{k-1})`. The half
/// power uses the principal branch; the quotient stays in the right
/// half-plane on the annulus, so no branch cut is crossed. Derivatives are
/// numeric.
pub fn spherical_annuli_map(a: f64, k: f64) -> Result<QCMap> {
    if !(a > 1.0 && k > 0.0 && k < 1.0) {
        return Err(Error::BadDomain);
    }
    let sqrt_k = k.sqrt();
    let f1 = move |p: HPoint| -> Result<Complex64> {
        let zz = p.z.norm_sqr();
        if zz == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let w_abs = (p.t * p.t + zz * zz).sqrt();
        let num = Complex64::new(p.t, -zz);
        let den = Complex64::new(p.t, -k * zz);
        Ok(sqrt_k * p.z * (num / den).sqrt() * w_abs.powf(0.5 * (k - 1.0)))
    };
    let f2 = move |p: HPoint| -> Result<f64> {
        let zz = p.z.norm_sqr();
        if zz == 0.0 {
            // axis rule: (0,t) ↦ (0, t |t|^{k-1})
            return Ok(p.t * p.t.abs().powf(k - 1.0));
        }
        let w_abs = (p.t * p.t + zz * zz).sqrt();
        let den = (p.t * p.t + k * k * zz * zz).sqrt();
        Ok(p.t * w_abs.powf(k) / den)
    };
    Ok(QCMap::new_numeric(
        DomainDescriptor::spherical_annulus(1.0, a)?,
        DomainDescriptor::spherical_annulus(1.0, a.powf(k))?,
        f1,
        f2,
    ))
}

/// A quasiconformal self-map of half-plane domains with optional analytic
/// `w`/`w̄` derivatives and an optional inverse.
#[derive(Clone)]
pub struct PlaneMap {
    g: WFn,
    dg: Option<WFn>,
    dgbar: Option<WFn>,
    inv: Option<WFn>,
    fd_step: f64,
}

impl core::fmt::Debug for PlaneMap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PlaneMap")
            .field("analytic_derivs", &self.dg.is_some())
            .field("invertible", &self.inv.is_some())
            .finish()
    }
}

impl PlaneMap {
    pub fn new<G>(g: G) -> Self
    where
        G: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        PlaneMap { g: Arc::new(g), dg: None, dgbar: None, inv: None, fd_step: 1e-6 }
    }

    pub fn with_derivatives<DG, DGB>(mut self, dg: DG, dgbar: DGB) -> Self
    where
        DG: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        DGB: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.dg = Some(Arc::new(dg));
        self.dgbar = Some(Arc::new(dgbar));
        self
    }

    pub fn with_inverse<I>(mut self, inv: I) -> Self
    where
        I: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.inv = Some(Arc::new(inv));
        self
    }

    pub fn apply(&self, w: HalfPlanePoint) -> Result<HalfPlanePoint> {
        HalfPlanePoint::new((self.g)(w.w()))
    }

    pub fn apply_raw(&self, w: Complex64) -> Complex64 {
        (self.g)(w)
    }

    /// `(∂_w g, ∂_w̄ g)`, analytic when supplied, else central differences.
    pub fn derivs(&self, w: Complex64) -> Result<(Complex64, Complex64)> {
        match (&self.dg, &self.dgbar) {
            (Some(dg), Some(dgbar)) => Ok((dg(w), dgbar(w))),
            _ => {
                let h = self.fd_step * (1.0 + w.norm());
                let i = Complex64::new(0.0, 1.0);
                let gx = (self.apply_raw(w + h) - self.apply_raw(w - h)) / (2.0 * h);
                let gy = (self.apply_raw(w + i * h) - self.apply_raw(w - i * h)) / (2.0 * h);
                Ok((0.5 * (gx - i * gy), 0.5 * (gx + i * gy)))
            }
        }
    }

    pub fn invert(&self, w: HalfPlanePoint) -> Result<Complex64> {
        match &self.inv {
            Some(inv) => Ok(inv(w.w())),
            None => Err(Error::MissingInverse),
        }
    }

    /// Plane distortion `K(w, g) = (|∂_w g| + |∂_w̄ g|)/(|∂_w g| - |∂_w̄ g|)`.
    pub fn distortion(&self, w: Complex64) -> Result<f64> {
        let (dg, dgbar) = self.derivs(w)?;
        let (a, b) = (dg.norm(), dgbar.norm());
        if a - b <= EPS_DERIV {
            return Err(Error::DegenerateDerivative);
        }
        Ok((a + b) / (a - b))
    }

    /// Conjugation `ψ ∘ g ∘ φ⁻¹` for image domains; `rect`/`rect_image` are
    /// the source and target coordinate rectangles of `φ` and `ψ`. The
    /// derivative chain rule uses `(φ⁻¹)' = 1/φ'`; the inverse (when `g`
    /// carries one) is `φ ∘ g⁻¹ ∘ ψ⁻¹` with `ψ⁻¹` by Newton.
    pub fn conjugated(
        &self,
        phi: &Biholomorphism,
        psi: &Biholomorphism,
        rect: (f64, f64),
        rect_image: (f64, f64),
    ) -> PlaneMap {
        let base = self.clone();
        let (phi_g, psi_g) = (phi.clone(), psi.clone());
        let g = move |w: Complex64| -> Complex64 {
            match phi_g.invert(w, rect.0, rect.1) {
                Ok(zeta) => psi_g.eval(base.apply_raw(zeta)),
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            }
        };
        let mut out = PlaneMap::new(g);

        let base_d = self.clone();
        let (phi_d, psi_d) = (phi.clone(), psi.clone());
        let derivs = move |w: Complex64| -> (Complex64, Complex64) {
            match phi_d.invert(w, rect.0, rect.1) {
                Ok(zeta) => {
                    let uprime = 1.0 / phi_d.deriv(zeta);
                    let (dgz, dgzb) = base_d.derivs(zeta).unwrap_or((
                        Complex64::new(f64::NAN, 0.0),
                        Complex64::new(f64::NAN, 0.0),
                    ));
                    let psip = psi_d.deriv(base_d.apply_raw(zeta));
                    (psip * dgz * uprime, psip * dgzb * uprime.conj())
                }
                Err(_) => (Complex64::new(f64::NAN, 0.0), Complex64::new(f64::NAN, 0.0)),
            }
        };
        let d1 = derivs.clone();
        let d2 = derivs;
        out = out.with_derivatives(move |w| d1(w).0, move |w| d2(w).1);

        if let Some(base_inv) = self.inv.clone() {
            let (phi_i, psi_i) = (phi.clone(), psi.clone());
            out = out.with_inverse(move |wp: Complex64| match psi_i.invert(wp, rect_image.0, rect_image.1) {
                Ok(zeta_p) => phi_i.eval(base_inv(zeta_p)),
                Err(_) => Complex64::new(f64::NAN, f64::NAN),
            });
        }
        out
    }
}

/// The rectangle minimizer `f_φ(x + iy) = (a'/a) x + i φ(y)` for a boundary
/// profile with `φ(0) = 0`, `φ(b) = b'`, and `φ̇ ≥ a'/a`; the constraints are
/// checked on a sample grid and violations yield `BadProfile`. The returned
/// map carries analytic derivatives `∂_w g = (a'/a + φ')/2`,
/// `∂_w̄ g = (a'/a - φ')/2` and a bisection inverse of the profile.
pub fn plane_minimizer_gphi<F>(a: f64, b: f64, ap: f64, bp: f64, profile: F) -> Result<PlaneMap>
where
    F: Fn(f64) -> f64 + Send + Sync + Clone + 'static,
{
    if !(a > 0.0 && b > 0.0 && ap > 0.0 && bp > 0.0) {
        return Err(Error::BadDomain);
    }
    let n = 257usize;
    let h = 1e-7 * b;
    let tol_end = 1e-8 * bp.max(1.0);
    if profile(0.0).abs() > tol_end || (profile(b) - bp).abs() > tol_end {
        return Err(Error::BadProfile);
    }
    let slope_floor = ap / a - 1e-9;
    let slope_at = {
        let profile = profile.clone();
        move |y: f64| -> f64 {
            let lo = (y - h).max(0.0);
            let hi = (y + h).min(b);
            (profile(hi) - profile(lo)) / (hi - lo)
        }
    };
    for i in 0..n {
        let y = b * i as f64 / (n - 1) as f64;
        if slope_at(y) < slope_floor {
            return Err(Error::BadProfile);
        }
    }

    let stretch = ap / a;
    let g = {
        let profile = profile.clone();
        move |w: Complex64| Complex64::new(stretch * w.re, profile(w.im))
    };
    let dg = {
        let slope_at = slope_at.clone();
        move |w: Complex64| Complex64::new(0.5 * (stretch + slope_at(w.im)), 0.0)
    };
    let dgbar = move |w: Complex64| Complex64::new(0.5 * (stretch - slope_at(w.im)), 0.0);
    let inv = {
        let profile = profile.clone();
        move |w: Complex64| {
            // bisection on the monotone profile
            let target = w.im;
            let (mut lo, mut hi) = (0.0, b);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if profile(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Complex64::new(w.re / stretch, 0.5 * (lo + hi))
        }
    };
    Ok(PlaneMap::new(g).with_derivatives(dg, dgbar).with_inverse(inv))
}

//! Holomorphic maps from coordinate rectangles into the Poincaré half-plane,
//! together with damped Newton inversion. These parameterize the curved
//! domains of the lift construction; the builtin registry covers the maps
//! used by the explicit examples (identity, exp, translation by i, affine).

use alloc::string::String;
use alloc::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result};

#[allow(unused_imports)]
use num_traits::Float;

type CMap = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A holomorphic map defined on a rectangle `(0,a) x (0,b)` with image in the
/// upper half-plane, carried together with its holomorphic derivative.
/// Injectivity is the caller's responsibility; [`Biholomorphism::validate`]
/// checks positivity of the imaginary part, non-vanishing of the derivative,
/// and consistency of the supplied derivative with the map.
#[derive(Clone)]
pub struct Biholomorphism {
    name: String,
    f: CMap,
    df: CMap,
}

impl core::fmt::Debug for Biholomorphism {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Biholomorphism").field("name", &self.name).finish()
    }
}

impl Biholomorphism {
    pub fn custom<F, D>(name: &str, f: F, df: D) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        D: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Biholomorphism { name: String::from(name), f: Arc::new(f), df: Arc::new(df) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        (self.f)(zeta)
    }

    pub fn deriv(&self, zeta: Complex64) -> Complex64 {
        (self.df)(zeta)
    }

    /// Samples the interior of `(0,a) x (0,b)` on an `n x n` grid of cell
    /// centers and checks `Im > 0`, `deriv != 0`, and that a central
    /// finite-difference derivative of `eval` matches `deriv` within `1e-6`
    /// relative (Cauchy-Riemann consistency of the supplied pair).
    pub fn validate(&self, a: f64, b: f64, n: usize) -> Result<()> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::BadDomain);
        }
        let n = n.max(2);
        let h = 1e-6 * a.min(b);
        for i in 0..n {
            for j in 0..n {
                let s = (i as f64 + 0.5) * a / n as f64;
                let x = (j as f64 + 0.5) * b / n as f64;
                let zeta = Complex64::new(s, x);
                let w = self.eval(zeta);
                if !(w.im > 0.0) {
                    return Err(Error::NotUpperHalfPlane);
                }
                let d = self.deriv(zeta);
                if d.norm() == 0.0 {
                    return Err(Error::DegenerateDerivative);
                }
                let fd = (self.eval(zeta + h) - self.eval(zeta - h)) / (2.0 * h);
                if (fd - d).norm() > 1e-6 * d.norm().max(1.0) {
                    return Err(Error::DegenerateDerivative);
                }
            }
        }
        Ok(())
    }

    /// Inverts `eval` at `w` over the rectangle `(0,a) x (0,b)` by damped
    /// Newton iteration seeded from a coarse grid lookup. Fails if the
    /// iteration stalls or the preimage falls outside the closed rectangle.
    pub fn invert(&self, w: Complex64, a: f64, b: f64) -> Result<Complex64> {
        // coarse seed: best of an m x m grid of cell centers
        let m = 24usize;
        let mut best = Complex64::new(0.5 * a, 0.5 * b);
        let mut best_res = f64::INFINITY;
        for i in 0..m {
            for j in 0..m {
                let zeta = Complex64::new((i as f64 + 0.5) * a / m as f64, (j as f64 + 0.5) * b / m as f64);
                let r = (self.eval(zeta) - w).norm();
                if r < best_res {
                    best_res = r;
                    best = zeta;
                }
            }
        }
        let scale = 1.0 + w.norm();
        let tol = 1e-13 * scale;
        let mut zeta = best;
        let mut res = best_res;
        for _ in 0..60 {
            if res <= tol {
                break;
            }
            let d = self.deriv(zeta);
            if d.norm() == 0.0 {
                return Err(Error::ChartInversion);
            }
            let step = (self.eval(zeta) - w) / d;
            // damping: halve until the residual decreases
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..30 {
                let cand = zeta - lambda * step;
                let r = (self.eval(cand) - w).norm();
                if r < res {
                    zeta = cand;
                    res = r;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        let slack = 1e-9 * a.max(b);
        let inside = zeta.re >= -slack && zeta.re <= a + slack && zeta.im >= -slack && zeta.im <= b + slack;
        if res <= tol && inside {
            Ok(zeta)
        } else {
            Err(Error::ChartInversion)
        }
    }
}

/// Builtin registry: `identity`, `exp`, `translate_i`, `affine` (params `[c, d]`,
/// the map `w ↦ c w + d`).
pub fn builtin_biholomorphism(name: &str, params: &[f64]) -> Result<Biholomorphism> {
    match name {
        "identity" => Ok(Biholomorphism::custom("identity", |w| w, |_| Complex64::new(1.0, 0.0))),
        "exp" => Ok(Biholomorphism::custom("exp", |w| w.exp(), |w| w.exp())),
        "translate_i" => Ok(Biholomorphism::custom(
            "translate_i",
            |w| w + Complex64::new(0.0, 1.0),
            |_| Complex64::new(1.0, 0.0),
        )),
        "affine" => {
            let [c, d] = match params {
                [c, d] => [*c, *d],
                _ => return Err(Error::UnknownName),
            };
            Ok(Biholomorphism::custom(
                "affine",
                move |w| c * w + d,
                move |_| Complex64::new(c, 0.0),
            ))
        }
        _ => Err(Error::UnknownName),
    }
}

/// All names accepted by [`builtin_biholomorphism`].
pub fn builtin_names() -> &'static [&'static str] {
    &["identity", "exp", "translate_i", "affine"]
}

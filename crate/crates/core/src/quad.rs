//! Shared quadrature and ODE kernels: composite Simpson rules with a fixed
//! pairwise summation order (deterministic regardless of evaluation chunking)
//! and a fixed-step scalar RK4 integrator.

use alloc::vec::Vec;

use crate::Result;

#[allow(unused_imports)]
use num_traits::Float;

/// Sums in a fixed pairwise order. Deterministic and more accurate than a
/// running sum on long grids.
pub fn pairwise_sum(values: &mut [f64]) -> f64 {
    let mut n = values.len();
    if n == 0 {
        return 0.0;
    }
    while n > 1 {
        let half = n / 2;
        for i in 0..half {
            values[i] = values[2 * i] + values[2 * i + 1];
        }
        if n % 2 == 1 {
            values[half] = values[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    values[0]
}

/// Rounds an interval count up to the next even number, with a floor of 2.
pub fn even_intervals(n: usize) -> usize {
    let n = n.max(2);
    if n.is_multiple_of(2) {
        n
    } else {
        n + 1
    }
}

/// Composite Simpson rule with `n` intervals (rounded up to even) for a
/// fallible integrand.
pub fn try_simpson<F>(mut f: F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = even_intervals(n);
    let h = (b - a) / n as f64;
    let mut terms = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = if i == n { b } else { a + i as f64 * h };
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        terms.push(w * f(x)?);
    }
    Ok(pairwise_sum(&mut terms) * h / 3.0)
}

/// Composite Simpson rule for an infallible integrand.
pub fn simpson<F>(mut f: F, a: f64, b: f64, n: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    try_simpson(|x| Ok(f(x)), a, b, n).expect("infallible integrand")
}

/// Classic fixed-step RK4 for a scalar ODE `y' = f(x, y)` from `x0` to `x1`
/// in `n` steps. Returns the sampled trajectory including both endpoints;
/// `x1 < x0` integrates backwards.
pub fn rk4<F>(mut f: F, x0: f64, y0: f64, x1: f64, n: usize) -> Vec<(f64, f64)>
where
    F: FnMut(f64, f64) -> f64,
{
    let n = n.max(1);
    let h = (x1 - x0) / n as f64;
    let mut out = Vec::with_capacity(n + 1);
    let mut x = x0;
    let mut y = y0;
    out.push((x, y));
    for i in 1..=n {
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(x + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x = if i == n { x1 } else { x0 + i as f64 * h };
        out.push((x, y));
    }
    out
}

/// Cubic Hermite interpolation on one interval given endpoint values and
/// derivatives.
pub fn hermite(x0: f64, y0: f64, d0: f64, x1: f64, y1: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert_relative_eq!(v, 4.0 - 4.0 + 2.0, epsilon = 1e-14);
    }

    #[test]
    fn simpson_fourth_order_on_smooth() {
        let exact = 1.0 - (-1.0f64).exp();
        let coarse = (simpson(|x| (-x).exp(), 0.0, 1.0, 8) - exact).abs();
        let fine = (simpson(|x| (-x).exp(), 0.0, 1.0, 16) - exact).abs();
        assert!(fine < coarse / 12.0, "expected ~16x error drop, got {coarse:e} -> {fine:e}");
    }

    #[test]
    fn rk4_matches_exponential() {
        let traj = rk4(|_, y| y, 0.0, 1.0, 1.0, 100);
        let (x, y) = *traj.last().unwrap();
        assert_eq!(x, 1.0);
        assert_relative_eq!(y, 1.0f64.exp(), epsilon = 1e-9);
    }

    #[test]
    fn rk4_backwards() {
        let traj = rk4(|_, y| y, 1.0, 1.0f64.exp(), 0.0, 100);
        let (_, y) = *traj.last().unwrap();
        assert_relative_eq!(y, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let mut vals: Vec<f64> = (0..1001).map(|i| (i as f64).sin()).collect();
        let naive: f64 = vals.iter().sum();
        let pair = pairwise_sum(&mut vals);
        assert_relative_eq!(pair, naive, epsilon = 1e-9);
    }

    #[test]
    fn hermite_reproduces_cubic() {
        let f = |x: f64| x * x * x - x;
        let d = |x: f64| 3.0 * x * x - 1.0;
        let v = hermite(1.0, f(1.0), d(1.0), 2.0, f(2.0), d(2.0), 1.3);
        assert_relative_eq!(v, f(1.3), epsilon = 1e-12);
    }
}

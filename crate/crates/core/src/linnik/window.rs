//! Smooth compactly-supported weight windows and the smoothstep partition
//! bumps used to decouple sums over primes. Transforms are numeric, by
//! adaptive Simpson quadrature to 1e−10 relative.

use crate::error::{validation, Result};
use num_complex::Complex64;

/// C^∞ bump φ(u) = exp(−1/((u−u0)(u1−u))) on (u0, u1), identically 0
/// outside. Not normalized; only ∫φ > 0 matters downstream.
#[derive(Debug, Clone, Copy)]
pub struct SmoothWindow {
    pub u0: f64,
    pub u1: f64,
}

impl SmoothWindow {
    pub fn bump(u0: f64, u1: f64) -> Result<Self> {
        if !(u0 >= 0.0 && u1 > u0) {
            return Err(validation(format!(
                "window needs 0 ≤ u0 < u1, got [{u0}, {u1}]"
            )));
        }
        Ok(SmoothWindow { u0, u1 })
    }

    /// The weight window for scale-x sequences supported on [x^{1−ν}, x].
    pub fn for_nu(nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu < 1.0) {
            return Err(validation(format!("need 0 < ν < 1, got {nu}")));
        }
        Self::bump(1.0 - nu, 1.0)
    }

    pub fn eval(&self, u: f64) -> f64 {
        if u <= self.u0 || u >= self.u1 {
            return 0.0;
        }
        (-1.0 / ((u - self.u0) * (self.u1 - u))).exp()
    }

    /// φ̂(ξ) = ∫ φ(u) e^{−2πiξu} du.
    pub fn fourier(&self, xi: f64) -> Complex64 {
        self.integrate(|u| {
            let phase = -2.0 * std::f64::consts::PI * xi * u;
            Complex64::from_polar(self.eval(u), phase)
        })
    }

    /// φ̂(0) = ∫ φ, real and positive.
    pub fn fourier_zero(&self) -> f64 {
        self.integrate(|u| Complex64::new(self.eval(u), 0.0)).re
    }

    /// φ̃(s) = ∫ φ(u) u^{s−1} du (so φ̃(1) = φ̂(0) and φ̃(0) = ∫ φ(u)/u du).
    pub fn mellin(&self, s: Complex64) -> Complex64 {
        self.integrate(|u| {
            let v = self.eval(u);
            if v == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                v * Complex64::new(u.ln() * (s.re - 1.0), u.ln() * s.im).exp()
            }
        })
    }

    fn integrate(&self, f: impl Fn(f64) -> Complex64 + Copy) -> Complex64 {
        adaptive_simpson(f, self.u0, self.u1, 1e-10)
    }
}

/// Adaptive Simpson quadrature with absolute-scaled relative tolerance.
pub fn adaptive_simpson(
    f: impl Fn(f64) -> Complex64 + Copy,
    a: f64,
    b: f64,
    tol: f64,
) -> Complex64 {
    fn panel(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
        (fa + 4.0 * fm + fb) * (h / 6.0)
    }
    fn rec(
        f: impl Fn(f64) -> Complex64 + Copy,
        a: f64,
        b: f64,
        fa: Complex64,
        fm: Complex64,
        fb: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = panel(fa, flm, fm, m - a);
        let right = panel(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    // seed with a handful of panels so a bump that is zero at both endpoints
    // and at the midpoint is still seen
    let n = 8;
    let h = (b - a) / n as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    for i in 0..n {
        let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        scale = scale.max(f(lo).norm()).max(f(0.5 * (lo + hi)).norm());
    }
    let tol_abs = tol * scale.max(f64::MIN_POSITIVE) * (b - a);
    for i in 0..n {
        let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
        let (fa, fb) = (f(lo), f(hi));
        let fm = f(0.5 * (lo + hi));
        let whole = panel(fa, fm, fb, hi - lo);
        total += rec(f, lo, hi, fa, fm, fb, whole, tol_abs / n as f64, 48);
    }
    total
}

/// Clamped cubic smoothstep: 0 below 0, 1 above 1, 3t²−2t³ between.
pub fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

/// Piecewise-smoothstep bump: rises 0→1 on [lo, mid], falls 1→0 on
/// [mid, hi]. Two bumps sharing a [mid, hi] = [lo', mid'] edge in opposite
/// directions sum to exactly 1 there.
#[derive(Debug, Clone, Copy)]
pub struct PartitionBump {
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
}

impl PartitionBump {
    pub fn new(lo: f64, mid: f64, hi: f64) -> Result<Self> {
        if !(lo < mid && mid < hi) {
            return Err(validation(format!(
                "bump nodes must increase: {lo}, {mid}, {hi}"
            )));
        }
        Ok(PartitionBump { lo, mid, hi })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.lo || t >= self.hi {
            0.0
        } else if t <= self.mid {
            smoothstep((t - self.lo) / (self.mid - self.lo))
        } else {
            1.0 - smoothstep((t - self.mid) / (self.hi - self.mid))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_basics() {
        let w = SmoothWindow::for_nu(0.5).unwrap();
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(1.0), 0.0);
        assert_eq!(w.eval(0.3), 0.0);
        assert_eq!(w.eval(1.2), 0.0);
        let peak = w.eval(0.75);
        assert!((peak - (-16.0f64).exp()).abs() < 1e-22);
        // symmetric about the midpoint
        assert!((w.eval(0.6) - w.eval(0.9)).abs() < 1e-30);
        assert!(SmoothWindow::for_nu(0.0).is_err());
        assert!(SmoothWindow::for_nu(1.0).is_err());
    }

    #[test]
    fn window_smoothness_by_finite_differences() {
        // derivative estimates stay bounded through the support edges
        let w = SmoothWindow::for_nu(0.5).unwrap();
        let h = 1e-6;
        let mut max_d1 = 0.0f64;
        for i in 0..=2000 {
            let u = 0.45 + 0.6 * i as f64 / 2000.0;
            let d1 = (w.eval(u + h) - w.eval(u - h)) / (2.0 * h);
            max_d1 = max_d1.max(d1.abs());
        }
        assert!(max_d1.is_finite() && max_d1 < 1e-5);
    }

    #[test]
    fn transforms_match_independent_quadrature() {
        // reference values from 30-digit quadrature of the same integrals
        let w = SmoothWindow::for_nu(0.5).unwrap();
        let fh0 = w.fourier_zero();
        assert!((fh0 - 1.19404656098713e-8).abs() < 1e-18 * 1e5);
        assert!((fh0 / 1.19404656098713e-8 - 1.0).abs() < 1e-9);
        // Mellin consistency: φ̃(1) = φ̂(0), two independent code paths
        let m1 = w.mellin(Complex64::new(1.0, 0.0));
        assert!((m1.re / fh0 - 1.0).abs() < 1e-9 && m1.im.abs() < 1e-20);
        // φ̃(0) = ∫ φ(u)/u du
        let m0 = w.mellin(Complex64::new(0.0, 0.0));
        assert!((m0.re / 1.59680073953271e-8 - 1.0).abs() < 1e-9);
        // φ̂(1): real part vanishes by symmetry about u = 3/4
        let f1 = w.fourier(1.0);
        assert!(f1.re.abs() < 1e-20);
        assert!((f1.im / 1.15548644805773e-8 - 1.0).abs() < 1e-9);
        // narrower window, much smaller mass
        let w3 = SmoothWindow::for_nu(0.3).unwrap();
        assert!((w3.fourier_zero() / 1.95742268883590e-21 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fourier_zero_positive_for_any_support() {
        for (a, b) in [(0.0, 1.0), (0.4, 0.6), (2.0, 5.0)] {
            let w = SmoothWindow::bump(a, b).unwrap();
            assert!(w.fourier_zero() > 0.0);
        }
    }

    #[test]
    fn partition_pair_sums_to_one_on_shared_edge() {
        let a = PartitionBump::new(0.10, 0.15, 0.20).unwrap();
        let b = PartitionBump::new(0.15, 0.20, 0.26).unwrap();
        for i in 0..=100 {
            let t = 0.15 + 0.05 * i as f64 / 100.0;
            assert!((a.eval(t) + b.eval(t) - 1.0).abs() < 1e-12, "t={t}");
        }
        assert_eq!(a.eval(0.05), 0.0);
        assert_eq!(a.eval(0.25), 0.0);
        assert_eq!(a.eval(0.15), 1.0);
        assert!(PartitionBump::new(0.2, 0.1, 0.3).is_err());
    }

    #[test]
    fn adaptive_simpson_known_integrals() {
        // ∫₀^π sin = 2
        let v = adaptive_simpson(|x| Complex64::new(x.sin(), 0.0), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v.re - 2.0).abs() < 1e-10);
        // ∫₀¹ e^{2πix} dx = 0
        let v = adaptive_simpson(
            |x| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x),
            0.0,
            1.0,
            1e-12,
        );
        assert!(v.norm() < 1e-10);
    }
}

//! Quadrature helpers: adaptive Simpson for smooth real/complex integrands
//! and fixed Gauss–Legendre panels for oscillatory kernels.
//!
//! Tolerances combine a relative target with an absolute floor so that
//! integrands scaled by tiny bump-function constants (e.g. exp(−1/...) ≈
//! 1e−20) keep full relative accuracy.

use num_complex::Complex64;

const MAX_DEPTH: u32 = 40;

fn simpson_panel(a: f64, fa: Complex64, b: f64, fb: Complex64, fm: Complex64) -> Complex64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt_c<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fb: Complex64,
    fm: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(a, fa, m, fm, flm);
    let right = simpson_panel(m, fm, b, fb, frm);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.norm() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt_c(f, a, m, fa, fm, flm, left, 0.5 * tol, depth + 1)
        + adapt_c(f, m, b, fm, fb, frm, right, 0.5 * tol, depth + 1)
}

/// Adaptive Simpson on [a, b] for a complex integrand. `rel` is the relative
/// tolerance against a running magnitude estimate, `abs_floor` an absolute
/// cutoff below which refinement stops.
pub fn adaptive_simpson_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel: f64,
    abs_floor: f64,
) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    // Seed the scale estimate from a coarse fixed scan so the tolerance is
    // meaningful even when the endpoints vanish (compact bumps).
    let mut scale = 0.0f64;
    const SEED: usize = 32;
    for i in 0..=SEED {
        let x = a + (b - a) * i as f64 / SEED as f64;
        scale = scale.max(f(x).norm());
    }
    let tol = (scale * (b - a).abs() * rel).max(abs_floor);
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson_panel(a, fa, b, fb, fm);
    // split once up front: compact-support integrands fool a single panel
    let m = 0.5 * (a + b);
    let flm = f(0.5 * (a + m));
    let frm = f(0.5 * (m + b));
    let left = simpson_panel(a, fa, m, fm, flm);
    let right = simpson_panel(m, fm, b, fb, frm);
    let _ = whole;
    adapt_c(&f, a, m, fa, fm, flm, left, 0.5 * tol, 0)
        + adapt_c(&f, m, b, fm, fb, frm, right, 0.5 * tol, 0)
}

/// Adaptive Simpson for a real integrand.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64, abs_floor: f64) -> f64 {
    adaptive_simpson_complex(|x| Complex64::new(f(x), 0.0), a, b, rel, abs_floor).re
}

/// 16-point Gauss–Legendre nodes/weights on [-1, 1] (positive half; mirror).
const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// Composite 16-point Gauss–Legendre with panels no wider than `max_panel`.
/// Suited to smooth kernels times e^{iωx}: choose max_panel ≲ 2/ω.
pub fn gauss_panels_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    max_panel: f64,
) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let n = (((b - a) / max_panel).ceil() as usize).max(1);
    let w = (b - a) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let lo = a + w * k as f64;
        let c = lo + 0.5 * w;
        let h = 0.5 * w;
        let mut panel = Complex64::new(0.0, 0.0);
        for j in 0..8 {
            panel += GL16_W[j] * (f(c + h * GL16_X[j]) + f(c - h * GL16_X[j]));
        }
        acc += panel * h;
    }
    acc
}

pub fn gauss_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, max_panel: f64) -> f64 {
    gauss_panels_complex(|x| Complex64::new(f(x), 0.0), a, b, max_panel).re
}

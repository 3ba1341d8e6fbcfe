//! Complex log-gamma and digamma by Stirling's series with upward
//! recurrence into the convergence region Re z ≥ 8. For Re z > 0 (the only
//! region the evaluators touch with log-gamma) the recurrence with principal
//! logs reproduces the standard analytic branch.

use num_complex::Complex64;

/// B_{2k} / ((2k)(2k−1)), k = 1..12 — Stirling series for ln Γ.
const STIRLING: [f64; 12] = [
    0.08333333333333333,
    -0.002777777777777778,
    0.0007936507936507937,
    -0.0005952380952380953,
    0.0008417508417508417,
    -0.0019175269175269176,
    0.00641025641025641,
    -0.029550653594771242,
    0.17964437236883057,
    -1.3924322169059011,
    13.402864044168393,
    -156.84828462600203,
];

/// B_{2k}, k = 1..12 — asymptotic series for ψ.
const BERNOULLI: [f64; 12] = [
    0.16666666666666666,
    -0.03333333333333333,
    0.023809523809523808,
    -0.03333333333333333,
    0.07575757575757576,
    -0.2531135531135531,
    1.1666666666666667,
    -7.092156862745098,
    54.971177944862156,
    -529.1242424242424,
    6192.123188405797,
    -86580.25311355312,
];

/// B_{2k} / (2k)!, k = 1..12 — Euler–Maclaurin correction weights.
pub(crate) const EULER_MACLAURIN: [f64; 12] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
];

const SHIFT_RE: f64 = 8.0;
const LN_2PI: f64 = 1.8378770664093453;

fn stirling_log_gamma(z: Complex64) -> Complex64 {
    let lz = z.ln();
    let mut acc = (z - 0.5) * lz - z + Complex64::new(0.5 * LN_2PI, 0.0);
    let z2 = z * z;
    let mut zp = z;
    for c in STIRLING {
        acc += c / zp;
        zp *= z2;
    }
    acc
}

/// ln Γ(z), standard branch, intended for Re z > 0 (callers keep arguments in
/// the right half-plane; phases use only the imaginary part).
pub fn log_gamma(z: Complex64) -> Complex64 {
    if z.re >= SHIFT_RE {
        return stirling_log_gamma(z);
    }
    let m = (SHIFT_RE - z.re).ceil() as usize;
    let mut corr = Complex64::new(0.0, 0.0);
    for j in 0..m {
        corr += (z + j as f64).ln();
    }
    stirling_log_gamma(z + m as f64) - corr
}

/// Γ(z) via exp(ln Γ); adequate for |ln Γ| within f64 exponent range.
pub fn gamma_fn(z: Complex64) -> Complex64 {
    log_gamma(z).exp()
}

/// ψ(z) = Γ'(z)/Γ(z). Valid for any z off the poles 0, −1, −2, ...; the
/// recurrence is pole-free as long as z itself is not a pole.
pub fn digamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < SHIFT_RE {
        shift += 1.0 / w;
        w += 1.0;
    }
    let mut acc = w.ln() - 0.5 / w;
    let w2 = w * w;
    let mut wp = w2;
    for (k, c) in BERNOULLI.iter().enumerate() {
        acc -= *c / (2.0 * (k + 1) as f64) / wp;
        wp *= w2;
    }
    acc - shift
}

//! Rosser–Iwaniec beta-sieve: combinatorial weights with the odd/even
//! truncation rule, sifted-sum evaluators, the twice-iterated Buchstab
//! decomposition, and the sieve functions F, f solved from their
//! differential-difference system.
//!
//! Weight membership: writing d = p₁⋯p_r with z > p₁ > ⋯ > p_r, d is kept
//! iff p₁⋯p_{m−1}·p_m^{β+1} < y for every odd m (upper sieve) resp. every
//! even m (lower sieve), and then ξ_d = μ(d). The convention is validated
//! behaviorally: the sandwich θ⁻ ≤ [gcd(n,P(z))=1] ≤ θ⁺ is checked
//! exhaustively, and the solved F, f must drift to 1.

use crate::error::{assertion, validation, Result};
use crate::par;
use crate::primes;

/// κ = 2 truncation parameter β(2).
pub const BETA_2: f64 = 4.8339865967;
/// κ = 2 scaling constant A(2).
pub const A_2: f64 = 43.4968874616;
/// κ = 1 truncation parameter (the linear sieve).
pub const BETA_1: f64 = 2.0;
/// κ = 1 scaling constant A(1) = 2e^γ.
pub const A_1: f64 = 3.562144835980396;

pub fn beta_for(kappa: u32) -> Result<f64> {
    match kappa {
        1 => Ok(BETA_1),
        2 => Ok(BETA_2),
        _ => Err(validation(format!("unsupported sieve dimension κ = {kappa}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveSign {
    Lower,
    Upper,
}

/// Beta-sieve weight set ξ_d ∈ {μ(d), 0} on divisors of P(z).
#[derive(Debug, Clone)]
pub struct SieveWeightSet {
    pub kappa: u32,
    pub beta: f64,
    pub y: f64,
    pub z: u64,
    pub sign: SieveSign,
    /// (d, ξ_d) with ξ_d = μ(d), sorted by d; d = 1 always present
    pub weights: Vec<(u64, i8)>,
}

pub fn build_weights(kappa: u32, y: f64, z: u64, sign: SieveSign) -> Result<SieveWeightSet> {
    if y < 1.0 {
        return Err(validation("build_weights needs y ≥ 1"));
    }
    if z < 2 {
        return Err(validation("build_weights needs z ≥ 2"));
    }
    if y > 1e15 {
        return Err(validation("build_weights: y beyond supported range"));
    }
    let beta = beta_for(kappa)?;
    let ps = primes::primes_below(z);
    let mut weights = vec![(1u64, 1i8)];
    // depth-first over descending prime chains; at each constrained depth the
    // candidates are scanned smallest-first so the first failure cuts the
    // rest (the constraint is monotone in p)
    let constrained_odd = sign == SieveSign::Upper;
    let mut chain: Vec<u64> = Vec::new();
    fn rec(
        ps: &[u64],
        hi: usize, // candidates are ps[..hi]
        prefix: u64,
        chain: &mut Vec<u64>,
        out: &mut Vec<(u64, i8)>,
        y: f64,
        bp1: f64,
        constrained_odd: bool,
    ) {
        for i in (0..hi).rev() {
            let p = ps[i];
            let depth = chain.len() + 1;
            if (depth % 2 == 1) == constrained_odd
                && prefix as f64 * (p as f64).powf(bp1) >= y
            {
                // larger candidates fail a fortiori; we scan descending, so
                // skip to smaller primes
                continue;
            }
            let d = match prefix.checked_mul(p) {
                Some(v) => v,
                None => continue,
            };
            let xi = if depth % 2 == 0 { 1i8 } else { -1 };
            out.push((d, xi));
            chain.push(p);
            rec(ps, i, d, chain, out, y, bp1, constrained_odd);
            chain.pop();
        }
    }
    rec(
        &ps,
        ps.len(),
        1,
        &mut chain,
        &mut weights,
        y,
        beta + 1.0,
        constrained_odd,
    );
    weights.sort_unstable();
    Ok(SieveWeightSet {
        kappa,
        beta,
        y,
        z,
        sign,
        weights,
    })
}

/// Nonnegative sequence a_n on 1 ≤ n ≤ N, dense storage (index 0 unused).
#[derive(Debug, Clone)]
pub struct SiftableSequence {
    terms: Vec<f64>,
    pub tag: String,
}

impl SiftableSequence {
    pub fn new(mut terms: Vec<f64>, tag: impl Into<String>) -> Result<Self> {
        if terms.len() < 2 {
            return Err(validation("sequence needs at least n = 1"));
        }
        terms[0] = 0.0;
        if terms.iter().any(|&v| !(v >= 0.0)) {
            return Err(validation("sequence terms must be nonnegative"));
        }
        Ok(SiftableSequence {
            terms,
            tag: tag.into(),
        })
    }

    pub fn n_max(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, n: usize) -> f64 {
        self.terms[n]
    }

    pub fn terms(&self) -> &[f64] {
        &self.terms
    }

    /// A_d = Σ_{n ≡ 0 (d)} a_n.
    pub fn congruence_sum(&self, d: u64) -> f64 {
        let d = d as usize;
        if d == 0 || d > self.n_max() {
            return 0.0;
        }
        (1..=self.n_max() / d).map(|k| self.terms[k * d]).sum()
    }
}

/// S^±(A, z) = Σ_d ξ_d A_d in congruence-sum order. Debug builds cross-check
/// the direct Σ_n a_n θ_n order to 1e−9 relative.
pub fn sifted_sum(a: &SiftableSequence, w: &SieveWeightSet) -> f64 {
    let parts = par::map_collect(&w.weights, |&(d, xi)| {
        xi as f64 * a.congruence_sum(d)
    });
    let s: f64 = parts.into_iter().sum();
    #[cfg(debug_assertions)]
    {
        let direct = sifted_sum_direct(a, w);
        let scale = s.abs().max(direct.abs()).max(1e-300);
        debug_assert!(
            (s - direct).abs() / scale < 1e-9,
            "congruence-order {s} vs direct-order {direct}"
        );
    }
    s
}

/// Same sum accumulated per n: Σ_n a_n θ_n with θ_n = Σ_{d|n} ξ_d.
pub fn sifted_sum_direct(a: &SiftableSequence, w: &SieveWeightSet) -> f64 {
    let theta = theta_values(a.n_max(), w);
    a.terms()
        .iter()
        .zip(theta.iter())
        .map(|(&an, &t)| an * t as f64)
        .sum()
}

/// θ_n = Σ_{d|n} ξ_d for n = 0..=n_max (θ_0 unused).
pub fn theta_values(n_max: usize, w: &SieveWeightSet) -> Vec<i32> {
    let mut theta = vec![0i32; n_max + 1];
    for &(d, xi) in &w.weights {
        let d = d as usize;
        if d > n_max {
            continue;
        }
        let mut m = d;
        while m <= n_max {
            theta[m] += xi as i32;
            m += d;
        }
    }
    theta
}

/// Exact sifted sum S(A, z) = Σ a_n [gcd(n, P(z)) = 1] by least-prime-factor
/// filter; the oracle the weights are sandwiched against.
pub fn sift_exact(a: &SiftableSequence, z: u64) -> f64 {
    let lpf = primes::lpf_table(a.n_max());
    (1..=a.n_max())
        .map(|n| {
            if n == 1 || lpf[n] as u64 >= z {
                a.term(n)
            } else {
                0.0
            }
        })
        .sum()
}

/// The two-fold Buchstab expansion of S(A, √x).
#[derive(Debug, Clone, Copy)]
pub struct BuchstabSplit {
    /// S(A, √x) by direct filter
    pub s_full: f64,
    /// S(A, z)
    pub s1: f64,
    /// −Σ_{z≤p<√x} S(A_p, z)
    pub s2: f64,
    /// Σ_{z≤p₂<p₁<√x} S(A_{p₁p₂}, p₂)
    pub s3: f64,
    /// |s_full − (s1+s2+s3)| relative to max scale
    pub residual: f64,
}

pub fn buchstab_split(a: &SiftableSequence, z: u64, x: u64) -> Result<BuchstabSplit> {
    if x as usize > a.n_max() {
        return Err(validation("buchstab_split: x beyond the sequence range"));
    }
    if z < 2 || z * z > x {
        return Err(validation("buchstab_split needs 2 ≤ z ≤ √x"));
    }
    let x = x as usize;
    let lpf = primes::lpf_table(x);
    let rough = |k: usize, w: u64| k == 1 || lpf[k] as u64 >= w;

    let s_full: f64 = (1..=x)
        .map(|n| {
            let l = if n == 1 { u64::MAX } else { lpf[n] as u64 };
            if n == 1 || l * l >= x as u64 {
                a.term(n)
            } else {
                0.0
            }
        })
        .sum();
    let s1: f64 = (1..=x).map(|n| if rough(n, z) { a.term(n) } else { 0.0 }).sum();

    // primes z ≤ p < √x
    let mid: Vec<u64> = primes::primes_below(primes::isqrt(x as u64) + 1)
        .into_iter()
        .filter(|&p| p >= z && p * p < x as u64)
        .collect();

    let s2_parts = par::map_collect(&mid, |&p| {
        let p = p as usize;
        (1..=x / p)
            .map(|k| if rough(k, z) { a.term(k * p) } else { 0.0 })
            .sum::<f64>()
    });
    let s2 = -s2_parts.into_iter().sum::<f64>();

    let s3_parts = par::map_collect(&mid, |&p1| {
        let mut acc = 0.0;
        for &p2 in &mid {
            if p2 >= p1 {
                break;
            }
            let q = (p1 * p2) as usize;
            if q > x {
                break;
            }
            for k in 1..=x / q {
                if rough(k, p2) {
                    acc += a.term(k * q);
                }
            }
        }
        acc
    });
    let s3 = s3_parts.into_iter().sum::<f64>();

    let total = s1 + s2 + s3;
    let scale = s_full.abs().max(total.abs()).max(1e-300);
    let residual = (s_full - total).abs() / scale;
    if residual >= 1e-9 {
        return Err(assertion(format!(
            "Buchstab identity violated: S(A,√x) = {s_full}, S1+S2+S3 = {total}"
        )));
    }
    Ok(BuchstabSplit {
        s_full,
        s1,
        s2,
        s3,
        residual,
    })
}

/// Tabulated solutions F, f of the beta-sieve differential-difference system
///   s^κ F(s) = A on [β−1, β+1],  s^κ f(s) = 0 at s ≤ β,
///   (s^κ F)′ = κ s^{κ−1} f(s−1),  (s^κ f)′ = κ s^{κ−1} F(s−1),
/// on a uniform grid anchored at β−1 so the unit delay is index-exact.
#[derive(Debug, Clone)]
pub struct SieveFunctions {
    pub kappa: u32,
    pub beta: f64,
    pub a: f64,
    /// grid origin β−1
    pub s0: f64,
    pub step: f64,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    /// Richardson estimate of the global discretization error
    pub est_error: f64,
}

impl SieveFunctions {
    pub fn s_at(&self, i: usize) -> f64 {
        self.s0 + i as f64 * self.step
    }

    pub fn s_max(&self) -> f64 {
        self.s_at(self.upper.len() - 1)
    }

    fn interp(&self, table: &[f64], s: f64) -> Result<f64> {
        if !(self.s0 - 1e-12..=self.s_max() + 1e-12).contains(&s) {
            return Err(validation(format!(
                "s = {s} outside tabulated range [{}, {}]",
                self.s0,
                self.s_max()
            )));
        }
        let t = ((s - self.s0) / self.step).clamp(0.0, (table.len() - 1) as f64);
        let i = (t as usize).min(table.len() - 2);
        let frac = t - i as f64;
        Ok(table[i] * (1.0 - frac) + table[i + 1] * frac)
    }

    /// Upper function F(s).
    pub fn f_upper(&self, s: f64) -> Result<f64> {
        self.interp(&self.upper, s)
    }

    /// Lower function f(s); 0 for s ≤ β by convention.
    pub fn f_lower(&self, s: f64) -> Result<f64> {
        if s < self.beta {
            if s < self.s0 - 1e-12 {
                return Err(validation(format!("s = {s} below tabulated range")));
            }
            return Ok(0.0);
        }
        self.interp(&self.lower, s)
    }
}

fn solve_grid(kappa: u32, beta: f64, a: f64, s_max: f64, m: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let s0 = beta - 1.0;
    let step = 1.0 / m as f64;
    let n = (((s_max - s0) / step).ceil() as usize).max(2 * m + 1);
    let k = kappa as f64;
    let s = |i: usize| s0 + i as f64 * step;
    // P = s^κ F, Q = s^κ f on the grid
    let mut p = vec![0.0f64; n + 1];
    let mut q = vec![0.0f64; n + 1];
    let pow = |x: f64| x.powi(kappa as i32);
    for (i, v) in p.iter_mut().enumerate().take(2 * m + 1) {
        *v = a;
        let _ = i;
    }
    // integrand of Q′ at node j: κ s_j^{κ−1} F(s_j − 1) with the delayed F
    // read from the P grid m nodes back
    let gq = |j: usize, p: &[f64]| k * s(j).powf(k - 1.0) * p[j - m] / pow(s(j - m));
    let gp = |j: usize, q: &[f64]| k * s(j).powf(k - 1.0) * q[j - m] / pow(s(j - m));
    for j in m + 1..=n {
        q[j] = q[j - 1] + 0.5 * step * (gq(j - 1, &p) + gq(j, &p));
        if j > 2 * m {
            p[j] = p[j - 1] + 0.5 * step * (gp(j - 1, &q) + gp(j, &q));
        }
    }
    let upper: Vec<f64> = (0..=n).map(|i| p[i] / pow(s(i))).collect();
    let lower: Vec<f64> = (0..=n).map(|i| q[i] / pow(s(i))).collect();
    (upper, lower, step)
}

/// Solve the system at step ≤ 1e−3 with a half-step Richardson audit; aborts
/// if the estimated discretization error exceeds 1e−6.
pub fn solve_sieve_functions(kappa: u32, beta: f64, a: f64, s_max: f64) -> Result<SieveFunctions> {
    if kappa != 1 && kappa != 2 {
        return Err(validation(format!("unsupported sieve dimension κ = {kappa}")));
    }
    if !(beta > 1.0) || !(a > 0.0) {
        return Err(validation("solve_sieve_functions needs β > 1 and A > 0"));
    }
    if s_max < beta + 1.0 {
        return Err(validation("s_max must reach at least β + 1"));
    }
    let m = 1000; // step 1e−3
    let (u1, l1, _) = solve_grid(kappa, beta, a, s_max, m);
    let (u2, l2, step2) = solve_grid(kappa, beta, a, s_max, 2 * m);
    // trapezoid marching is O(step²): Richardson factor 1/3
    let mut est = 0.0f64;
    for i in 0..u1.len() {
        if 2 * i >= u2.len() {
            break;
        }
        est = est.max((u1[i] - u2[2 * i]).abs() / 3.0);
        est = est.max((l1[i] - l2[2 * i]).abs() / 3.0);
    }
    if est > 1e-6 {
        return Err(assertion(format!(
            "sieve-function step too coarse: estimated error {est:.3e}"
        )));
    }
    Ok(SieveFunctions {
        kappa,
        beta,
        a,
        s0: beta - 1.0,
        step: step2,
        upper: u2,
        lower: l2,
        est_error: est,
    })
}

/// The paper-grade κ = 2 table.
pub fn default_sieve_functions(s_max: f64) -> Result<SieveFunctions> {
    solve_sieve_functions(2, BETA_2, A_2, s_max)
}

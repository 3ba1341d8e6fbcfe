//! The central sequence a_n = (1/n) λ_C(n) f(log n / log x) and everything
//! computed from it: congruence sums A_d = g(d)X + r_d, the threefold split
//! S₃ = V + V′ + V″ with its smoothed brackets W⁻ ≤ V ≤ W⁺, the character
//! pairing identity, a brute-force large-sieve quantity, and least-split-
//! prime searches.

pub mod leastprime;
pub mod window;

use crate::betasieve::{self, SiftableSequence};
use crate::classgroup::coeffs::CoefficientTable;
use crate::classgroup::Discriminant;
use crate::error::{assertion, validation, Result};
use crate::multiplicative::density_g;
use crate::par;
use crate::primes;
use num_complex::Complex64;
use window::{PartitionBump, SmoothWindow};

/// Which coefficient stream the sequence carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceClass {
    /// λ_C for one ideal class (index into the class group's elements)
    Class(usize),
    /// λ_{χ₀} = Σ_C λ_C — h times the class-averaged sequence
    Aggregate,
}

/// Weighted sequence supported on [x^{1−ν}, x].
#[derive(Debug, Clone)]
pub struct LinnikSequence {
    pub disc: Discriminant,
    pub class: SequenceClass,
    pub x: u64,
    pub nu: f64,
    pub window: SmoothWindow,
    pub seq: SiftableSequence,
    pub h: usize,
    pub warnings: Vec<String>,
}

pub fn build_sequence(
    table: &CoefficientTable,
    class: SequenceClass,
    x: u64,
    nu: f64,
) -> Result<LinnikSequence> {
    if x < 2 {
        return Err(validation("sequence scale x must be at least 2"));
    }
    if x as usize > table.nmax {
        return Err(validation(format!(
            "x = {x} exceeds the coefficient table capacity {}",
            table.nmax
        )));
    }
    if let SequenceClass::Class(c) = class {
        if c >= table.group.h {
            return Err(validation(format!("class index {c} out of range")));
        }
    }
    let window = SmoothWindow::for_nu(nu)?;
    let disc = table.disc();
    let mut warnings = Vec::new();
    if x < disc.d() {
        warnings.push(format!(
            "x = {x} is below D = {}; the interesting regime is x ≫ D",
            disc.d()
        ));
    }
    let n_max = x as usize;
    let ln_x = (x as f64).ln();
    let terms: Vec<f64> = (0..=n_max)
        .map(|n| {
            if n == 0 {
                return 0.0;
            }
            let f = window.eval((n as f64).ln() / ln_x);
            if f == 0.0 {
                return 0.0;
            }
            let lam = match class {
                SequenceClass::Class(c) => table.lam_c(c, n),
                SequenceClass::Aggregate => table.lam_chi0(n),
            };
            lam as f64 / n as f64 * f
        })
        .collect();
    let tag = match class {
        SequenceClass::Class(c) => format!("D={} class {c}", disc.d()),
        SequenceClass::Aggregate => format!("D={} aggregate", disc.d()),
    };
    Ok(LinnikSequence {
        disc,
        class,
        x,
        nu,
        window,
        seq: SiftableSequence::new(terms, tag)?,
        h: table.group.h,
        warnings,
    })
}

/// One congruence-sum row: A_d against its smooth main term.
#[derive(Debug, Clone, Copy)]
pub struct CongruenceRow {
    pub d: u64,
    pub a_d: f64,
    /// g(d) · X, with X scaled by 1/h when the sequence is a single class
    pub main: f64,
    pub r_d: f64,
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub disc: Discriminant,
    pub x: u64,
    pub nu: f64,
    /// L(1,χ_D) f̂(0) log x — before any class scaling
    pub x_value: f64,
    /// the main-term scale actually used per row (X or X/h)
    pub x_used: f64,
    pub rows: Vec<CongruenceRow>,
}

/// A_d = Σ_{n ≡ 0 (d)} a_n for d ≤ dmax, with main terms g(d)·X. For a
/// single ideal class the smooth approximation to A₁ is X/h (only the
/// principal character survives averaging); the aggregate sequence gets X.
pub fn congruence_sums(a: &LinnikSequence, dmax: u64) -> Result<CongruenceReport> {
    if dmax < 1 {
        return Err(validation("dmax must be at least 1"));
    }
    let support_lo = (a.x as f64).powf(1.0 - a.nu);
    if dmax as f64 > support_lo {
        return Err(validation(format!(
            "dmax = {dmax} exceeds the support floor x^(1−ν) = {support_lo:.1}"
        )));
    }
    let d_val = a.disc.d() as f64;
    let l1 = std::f64::consts::PI * a.h as f64 / d_val.sqrt();
    let x_value = l1 * a.window.fourier_zero() * (a.x as f64).ln();
    let x_used = match a.class {
        SequenceClass::Class(_) => x_value / a.h as f64,
        SequenceClass::Aggregate => x_value,
    };
    let ds: Vec<u64> = (1..=dmax).collect();
    let rows = par::map_collect(&ds, |&d| {
        let a_d = a.seq.congruence_sum(d);
        let g = density_g(a.disc, d).expect("d ≥ 1");
        let main = *g.numer() as f64 / *g.denom() as f64 * x_used;
        CongruenceRow {
            d,
            a_d,
            main,
            r_d: a_d - main,
        }
    });
    Ok(CongruenceReport {
        disc: a.disc,
        x: a.x,
        nu: a.nu,
        x_value,
        x_used,
        rows,
    })
}

/// The S₃ split and its smoothed brackets.
#[derive(Debug, Clone)]
pub struct S3Report {
    pub x: u64,
    pub r: u32,
    pub j_steps: u32,
    pub z: f64,
    pub alpha: f64,
    /// b ≠ 1, (b, p₁p₂) = 1 — the part the brackets squeeze
    pub v: f64,
    /// b = 1 terms
    pub v_prime: f64,
    /// (b, p₁p₂) > 1 terms
    pub v_double_prime: f64,
    /// V + V′ + V″ (three-way classification of one enumeration)
    pub s3: f64,
    /// |S₃ − S₃(Buchstab)| / scale, cross-checked against the independent
    /// twice-iterated Buchstab enumeration
    pub s3_cross_residual: f64,
    pub w_minus: f64,
    pub w_plus: f64,
}

/// Split S₃ = ΣΣ_{z≤p₂<p₁<√x} S(A_{p₁p₂}, p₂) into V + V′ + V″ by the
/// structure of the cofactor b, and bracket V by the smooth-partition
/// decoupled sums W^± with z_j = x^{α^j/r}, α^J = r/3.
pub fn s3_partition(a: &LinnikSequence, r: u32, j_steps: u32) -> Result<S3Report> {
    if r < 1 || j_steps < 1 {
        return Err(validation("need r ≥ 1 and J ≥ 1"));
    }
    let x = a.x;
    let xf = x as f64;
    let z = xf.powf(1.0 / r as f64);
    if z < 2.0 {
        return Err(validation(format!("x^(1/r) = {z:.3} < 2; reduce r")));
    }
    let xu = x as usize;
    let lpf = primes::lpf_table(xu);
    let sq = primes::isqrt(x);
    // p < √x as p² < x, exact in integers
    let mid: Vec<u64> = primes::primes_below(sq + 2)
        .into_iter()
        .filter(|&p| p as f64 >= z && p * p < x)
        .collect();

    // one pass, classified three ways; parallel over p1 with ordered fold
    let parts = par::map_collect(&mid, |&p1| {
        let mut v = 0.0f64;
        let mut vp = 0.0f64;
        let mut vpp = 0.0f64;
        for &p2 in &mid {
            if p2 >= p1 {
                break;
            }
            let q = p1 * p2;
            if q > x {
                break;
            }
            for b in 1..=(x / q) as usize {
                if b != 1 && (lpf[b] as u64) < p2 {
                    continue;
                }
                let t = a.seq.term(q as usize * b);
                if b == 1 {
                    vp += t;
                } else if b % p1 as usize == 0 || b % p2 as usize == 0 {
                    vpp += t;
                } else {
                    v += t;
                }
            }
        }
        (v, vp, vpp)
    });
    let (mut v, mut v_prime, mut v_double_prime) = (0.0, 0.0, 0.0);
    for (a1, b1, c1) in parts {
        v += a1;
        v_prime += b1;
        v_double_prime += c1;
    }
    let s3 = v + v_prime + v_double_prime;

    // independent cross-check through the Buchstab decomposition; snap to
    // the integer when x^(1/r) is one up to float fuzz, otherwise round up
    let zi = if (z - z.round()).abs() < 1e-9 {
        z.round() as u64
    } else {
        z.ceil() as u64
    };
    let s3_cross = if zi * zi <= x {
        betasieve::buchstab_split(&a.seq, zi.max(2), x)?.s3
    } else {
        0.0
    };
    let scale = s3.abs().max(s3_cross.abs()).max(f64::MIN_POSITIVE);
    let s3_cross_residual = (s3 - s3_cross).abs() / scale;
    if s3_cross_residual >= 1e-9 {
        return Err(assertion(format!(
            "S3 enumeration disagrees with Buchstab: {s3} vs {s3_cross}"
        )));
    }

    // smoothed brackets; degenerate (empty) when z ≥ x^{1/3}
    let (mut w_minus, mut w_plus) = (0.0, 0.0);
    let mut alpha = 1.0;
    if (r as f64) > 3.0 {
        alpha = (r as f64 / 3.0).powf(1.0 / j_steps as f64);
        let ln_x = xf.ln();
        let rf = r as f64;
        // p2 may exceed √x only in bumps whose terms all vanish; cap by the
        // largest support edge α^{J+1/2}/r
        let p2_cap = xf.powf(alpha.powf(j_steps as f64 + 0.5) / rf).ceil() as u64;
        let p2_primes = primes::primes_below(p2_cap + 2);
        let p1_primes: Vec<u64> = primes::primes_below(sq + 2)
            .into_iter()
            .filter(|&p| p * p < x)
            .collect();
        // half-integer index j = k/2, k = 1..=2J+1; the lower bracket drops
        // the two edge bumps
        let bound = |ks: std::ops::RangeInclusive<u32>, use_upper_z: bool| -> f64 {
            let kv: Vec<u32> = ks.collect();
            let per_k = par::map_collect(&kv, |&k| {
                let j = k as f64 / 2.0;
                let t_lo = alpha.powf(j - 1.0) / rf;
                let t_mid = alpha.powf(j - 0.5) / rf;
                let t_hi = alpha.powf(j) / rf;
                let bump = PartitionBump::new(t_lo, t_mid, t_hi).expect("ordered nodes");
                let cap_z = if use_upper_z {
                    xf.powf(t_lo)
                } else {
                    xf.powf(t_hi)
                };
                let b_lo = cap_z.ceil().max(1.0) as u64;
                let mut acc = 0.0f64;
                for &p2 in &p2_primes {
                    let t = (p2 as f64).ln() / ln_x;
                    let w2 = bump.eval(t);
                    if w2 == 0.0 {
                        if t >= t_hi {
                            break;
                        }
                        continue;
                    }
                    for &p1 in &p1_primes {
                        if (p1 as f64) <= cap_z {
                            continue;
                        }
                        let q = p1 * p2;
                        if q > x {
                            break;
                        }
                        let mut inner = 0.0f64;
                        for b in b_lo..=x / q {
                            let bu = b as usize;
                            if (lpf[bu] as f64) < cap_z || b % p1 == 0 || b % p2 == 0 {
                                continue;
                            }
                            inner += a.seq.term(q as usize * bu);
                        }
                        acc += w2 * inner;
                    }
                }
                acc
            });
            per_k.into_iter().sum()
        };
        w_minus = bound(2..=2 * j_steps, false);
        w_plus = bound(1..=2 * j_steps + 1, true);

        let vscale = v.abs().max(w_plus.abs()).max(f64::MIN_POSITIVE);
        if w_minus > v + 1e-9 * vscale || v > w_plus + 1e-9 * vscale {
            return Err(assertion(format!(
                "smoothed bracket violated: W⁻ = {w_minus}, V = {v}, W⁺ = {w_plus}"
            )));
        }
    }

    Ok(S3Report {
        x,
        r,
        j_steps,
        z,
        alpha,
        v,
        v_prime,
        v_double_prime,
        s3,
        s3_cross_residual,
        w_minus,
        w_plus,
    })
}

/// Both sides of Σ_χ λ_χ(n₁) λ̄_χ(n₂) = h · Σ_C λ_C(n₁) λ_C(n₂).
#[derive(Debug, Clone, Copy)]
pub struct PairingCheck {
    /// character side, rounded from complex arithmetic
    pub character_side: i64,
    /// h · Σ_C λ_C(n₁) λ_C(n₂), exact integer arithmetic
    pub class_side: i64,
}

pub fn character_pairing(t: &CoefficientTable, n1: usize, n2: usize) -> Result<PairingCheck> {
    if n1 < 1 || n2 < 1 || n1 > t.nmax || n2 > t.nmax {
        return Err(validation("pairing indices must lie in [1, N]"));
    }
    let g = &t.group;
    let h = g.h;
    let mut total = Complex64::new(0.0, 0.0);
    for chi in 0..h {
        let mut s1 = Complex64::new(0.0, 0.0);
        let mut s2 = Complex64::new(0.0, 0.0);
        for c in 0..h {
            let w = g.char_value(chi, c);
            s1 += w * t.lam_c(c, n1) as f64;
            s2 += w * t.lam_c(c, n2) as f64;
        }
        total += s1 * s2.conj();
    }
    if total.im.abs() >= 1e-9 * h as f64 {
        return Err(assertion(format!(
            "character pairing sum has imaginary part {:.3e}",
            total.im
        )));
    }
    let character_side = total.re.round() as i64;
    let class_side = h as i64
        * (0..h)
            .map(|c| t.lam_c(c, n1) as i64 * t.lam_c(c, n2) as i64)
            .sum::<i64>();
    if character_side != class_side {
        return Err(assertion(format!(
            "pairing identity failed at ({n1}, {n2}): {character_side} ≠ {class_side}"
        )));
    }
    Ok(PairingCheck {
        character_side,
        class_side,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct LargeSieveReport {
    pub value: f64,
    /// value / ((α₂ − α₁)² r²) — recorded, not asserted
    pub ratio: f64,
    pub n_terms: usize,
}

/// Brute-force Σ_χ |Σ_{x^{α₁} ≤ n ≤ x^{α₂}, (n, P(z)) = 1} c_n λ_χ(n)/n|²
/// with z = x^{1/r}.
pub fn large_sieve_quantity(
    t: &CoefficientTable,
    alpha1: f64,
    alpha2: f64,
    r: u32,
    x: u64,
    coeffs: &dyn Fn(u64) -> f64,
) -> Result<LargeSieveReport> {
    if !(0.0 < alpha1 && alpha1 <= alpha2 && alpha2 <= 1.0) {
        return Err(validation("need 0 < α₁ ≤ α₂ ≤ 1"));
    }
    if r < 1 {
        return Err(validation("need r ≥ 1"));
    }
    let xf = x as f64;
    if xf.powf(alpha1) < 2.0 {
        return Err(validation("x^α₁ must be at least 2"));
    }
    let hi = xf.powf(alpha2).floor() as usize;
    if hi > t.nmax {
        return Err(validation(format!(
            "x^α₂ = {hi} exceeds the coefficient table capacity {}",
            t.nmax
        )));
    }
    let lo = xf.powf(alpha1).ceil() as usize;
    let z = xf.powf(1.0 / r as f64);
    let lpf = primes::lpf_table(hi);
    let g = &t.group;
    let h = g.h;
    let mut kept = Vec::new();
    for n in lo..=hi {
        if n != 1 && (lpf[n] as f64) < z {
            continue;
        }
        let c = coeffs(n as u64);
        if c.abs() > 1.0 + 1e-12 {
            return Err(validation(format!("|c_{n}| = {} exceeds 1", c.abs())));
        }
        if c != 0.0 {
            kept.push((n, c));
        }
    }
    let mut value = 0.0;
    for chi in 0..h {
        let mut s = Complex64::new(0.0, 0.0);
        for &(n, c) in &kept {
            let mut lam = Complex64::new(0.0, 0.0);
            for cl in 0..h {
                lam += g.char_value(chi, cl) * t.lam_c(cl, n) as f64;
            }
            s += lam * c / n as f64;
        }
        value += s.norm_sqr();
    }
    let denom = (alpha2 - alpha1).powi(2) * (r as f64).powi(2);
    Ok(LargeSieveReport {
        value,
        ratio: value / denom,
        n_terms: kept.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betasieve::buchstab_split;
    use crate::classgroup::enumerate_class_group;

    fn table(d: u64, nmax: usize) -> CoefficientTable {
        let g = enumerate_class_group(Discriminant::new(d).unwrap()).unwrap();
        CoefficientTable::build(&g, nmax).unwrap()
    }

    #[test]
    fn sequence_support_and_positivity() {
        let t = table(23, 100_000);
        let a = build_sequence(&t, SequenceClass::Class(0), 100_000, 0.5).unwrap();
        let lo = (100_000f64).powf(0.5);
        for n in 1..=100_000usize {
            let v = a.seq.term(n);
            assert!(v >= 0.0);
            if (n as f64) <= lo || n == 100_000 {
                assert_eq!(v, 0.0, "support leak at n = {n}");
            }
        }
        // S(A, √x) > 0: some split prime above √x lands in the class
        let s = betasieve::sift_exact(&a.seq, 317);
        assert!(s > 0.0);
    }

    #[test]
    fn narrow_nu_leaves_at_most_one_term() {
        let t = table(23, 1000);
        let a = build_sequence(&t, SequenceClass::Class(1), 1000, 0.0002).unwrap();
        let nonzero = (1..=1000).filter(|&n| a.seq.term(n) != 0.0).count();
        assert!(nonzero <= 1);
    }

    #[test]
    fn class_sum_is_aggregate() {
        let t = table(31, 5000);
        let x = 5000u64;
        let per: Vec<_> = (0..3)
            .map(|c| build_sequence(&t, SequenceClass::Class(c), x, 0.5).unwrap())
            .collect();
        let agg = build_sequence(&t, SequenceClass::Aggregate, x, 0.5).unwrap();
        for n in 1..=x as usize {
            let s: f64 = per.iter().map(|a| a.seq.term(n)).sum();
            let v = agg.seq.term(n);
            assert!((s - v).abs() <= 1e-12 * v.abs().max(1e-300), "n = {n}");
        }
    }

    #[test]
    fn class_average_matches_aggregate_in_buchstab_pieces() {
        // (1/h) Σ_C S_i(A(C)) = S_i(aggregate)/h for i = 1, 2, 3
        let t = table(23, 10_000);
        let x = 10_000u64;
        let z = 10u64;
        let per: Vec<_> = (0..3)
            .map(|c| {
                let a = build_sequence(&t, SequenceClass::Class(c), x, 0.5).unwrap();
                buchstab_split(&a.seq, z, x).unwrap()
            })
            .collect();
        let agg = build_sequence(&t, SequenceClass::Aggregate, x, 0.5).unwrap();
        let bagg = buchstab_split(&agg.seq, z, x).unwrap();
        let sum1: f64 = per.iter().map(|b| b.s1).sum();
        let sum2: f64 = per.iter().map(|b| b.s2).sum();
        let sum3: f64 = per.iter().map(|b| b.s3).sum();
        assert!((sum1 - bagg.s1).abs() <= 1e-11 * bagg.s1.abs());
        assert!((sum2 - bagg.s2).abs() <= 1e-11 * bagg.s2.abs().max(1e-300));
        assert!((sum3 - bagg.s3).abs() <= 1e-11 * bagg.s3.abs().max(1e-300));
    }

    #[test]
    fn congruence_rows_basics() {
        let t = table(23, 10_000);
        let a = build_sequence(&t, SequenceClass::Class(0), 10_000, 0.5).unwrap();
        let rep = congruence_sums(&a, 50).unwrap();
        // r_1 = A_1 − X/h by definition
        let r0 = rep.rows[0];
        assert_eq!(r0.d, 1);
        let a1: f64 = (1..=10_000).map(|n| a.seq.term(n)).sum();
        assert!((r0.a_d - a1).abs() < 1e-18);
        assert!((r0.r_d - (a1 - rep.x_used)).abs() < 1e-20);
        assert!((rep.x_used * 3.0 - rep.x_value).abs() < 1e-18);
        // the smooth main term is accurate to a few parts in 10⁷ already
        assert!(r0.r_d.abs() < 1e-6 * rep.x_used);
        // dmax beyond the support floor is rejected
        assert!(congruence_sums(&a, 101).is_err());
    }

    #[test]
    fn congruence_inert_prime_beyond_x() {
        let t = table(23, 10_000);
        // aggregate sequence: A_d = 0 for a modulus with no multiples in
        // range, r_d = −g(d)X
        let a = build_sequence(&t, SequenceClass::Aggregate, 10_000, 0.5).unwrap();
        let d = 10_039u64; // prime, 10039 ≡ 11 (mod 23) is a non-residue
        assert_eq!(crate::classgroup::kronecker_chi(a.disc, d), -1);
        let a_d = a.seq.congruence_sum(d);
        assert_eq!(a_d, 0.0);
        let g = density_g(a.disc, d).unwrap();
        let gx = *g.numer() as f64 / *g.denom() as f64;
        assert!(gx > 0.0);
    }

    #[test]
    fn congruence_residuals_shrink_with_scale() {
        // frozen from a three-scale oracle run: max_{d≤50} |r_d| was
        // 2.95e−10, 2.42e−11, 1.30e−12 at x = 1e4, 1e5, 1e6 — far faster
        // decay than the factor-2-per-decade floor asserted here
        let t = table(23, 1_000_000);
        let mut maxima = Vec::new();
        for x in [10_000u64, 100_000, 1_000_000] {
            let a = build_sequence(&t, SequenceClass::Class(0), x, 0.5).unwrap();
            let rep = congruence_sums(&a, 50).unwrap();
            let mx = rep
                .rows
                .iter()
                .map(|r| r.r_d.abs())
                .fold(0.0f64, f64::max);
            maxima.push(mx);
        }
        assert!(maxima[1] < maxima[0] / 2.0, "{maxima:?}");
        assert!(maxima[2] < maxima[1] / 2.0, "{maxima:?}");
        assert!((maxima[0] / 2.948e-10 - 1.0).abs() < 1e-3, "{maxima:?}");
        assert!((maxima[2] / 1.296e-12 - 1.0).abs() < 2e-3, "{maxima:?}");
    }

    #[test]
    fn s3_report_frozen_at_1e5() {
        // frozen from an independent enumeration (numpy lattice tables):
        // D=23, C0, x=1e5, ν=0.5, r=6, J=3
        let t = table(23, 100_000);
        let a = build_sequence(&t, SequenceClass::Class(0), 100_000, 0.5).unwrap();
        let rep = s3_partition(&a, 6, 3).unwrap();
        let close = |got: f64, want: f64| (got / want - 1.0).abs() < 1e-6;
        assert!(close(rep.v, 1.0231961340e-10), "V = {}", rep.v);
        assert!(close(rep.v_prime, 2.6593195306e-9), "V' = {}", rep.v_prime);
        assert!(
            close(rep.v_double_prime, 4.4549141927e-10),
            "V'' = {}",
            rep.v_double_prime
        );
        assert!(close(rep.s3, 3.2071305633e-9), "S3 = {}", rep.s3);
        assert!(close(rep.w_minus, 1.0194559769e-10), "W- = {}", rep.w_minus);
        assert!(close(rep.w_plus, 5.3744265062e-10), "W+ = {}", rep.w_plus);
        assert!(rep.w_minus <= rep.v && rep.v <= rep.w_plus);
        assert!(rep.s3_cross_residual < 1e-10);
    }

    #[test]
    fn s3_bracket_tightens_at_1e6() {
        // frozen oracle: V=9.0231680420e−10, W⁻=7.5687059066e−10,
        // W⁺=1.5089280878e−09 — lower gap 16.1%, upper gap 67.2%
        let t = table(23, 1_000_000);
        let a = build_sequence(&t, SequenceClass::Class(0), 1_000_000, 0.5).unwrap();
        let rep = s3_partition(&a, 6, 3).unwrap();
        let close = |got: f64, want: f64| (got / want - 1.0).abs() < 1e-6;
        assert!(close(rep.v, 9.0231680420e-10), "V = {}", rep.v);
        assert!(close(rep.w_minus, 7.5687059066e-10), "W- = {}", rep.w_minus);
        assert!(close(rep.w_plus, 1.5089280878e-9), "W+ = {}", rep.w_plus);
        let lower_gap = (rep.v - rep.w_minus) / rep.v;
        let upper_gap = (rep.w_plus - rep.v) / rep.v;
        assert!(lower_gap > 0.0 && lower_gap < 0.20, "lower gap {lower_gap}");
        assert!(upper_gap > 0.0 && upper_gap < 0.75, "upper gap {upper_gap}");
    }

    #[test]
    fn s3_empty_when_z_reaches_sqrt_x() {
        let t = table(23, 10_000);
        let a = build_sequence(&t, SequenceClass::Class(0), 10_000, 0.5).unwrap();
        for r in [1u32, 2] {
            let rep = s3_partition(&a, r, 3).unwrap();
            assert_eq!(rep.s3, 0.0);
            assert_eq!(rep.v, 0.0);
            assert_eq!(rep.w_minus, 0.0);
            assert_eq!(rep.w_plus, 0.0);
        }
    }

    #[test]
    fn v_double_prime_vanishes_when_cube_exceeds_x() {
        // terms of V″ have n ≥ p₁p₂·p₂ ≥ z³; none survive when z³ > x
        let t = table(23, 10_000);
        let a = build_sequence(&t, SequenceClass::Class(0), 10_000, 0.5).unwrap();
        let rep = s3_partition(&a, 2, 1).unwrap();
        assert_eq!(rep.v_double_prime, 0.0);
        let rep = s3_partition(&a, 3, 1).unwrap();
        assert_eq!(rep.v_double_prime, 0.0);
        assert_eq!(rep.v, 0.0);
    }

    #[test]
    fn pairing_identity_examples() {
        let t = table(23, 1000);
        // n1 = n2 = 1: both sides h·1
        let p = character_pairing(&t, 1, 1).unwrap();
        assert_eq!(p.character_side, 3);
        // D=23, n1 = n2 = 2: two ideals of norm 2 in conjugate classes
        let p = character_pairing(&t, 2, 2).unwrap();
        assert_eq!(p.character_side, 6);
        // split times inert: no ideals of the inert norm
        let p = character_pairing(&t, 2, 5).unwrap();
        assert_eq!(p.character_side, 0);
        // out of range rejected
        assert!(character_pairing(&t, 0, 1).is_err());
        assert!(character_pairing(&t, 1, 1001).is_err());
    }

    #[test]
    fn pairing_identity_sweep() {
        for d in [23u64, 31, 47] {
            let t = table(d, 200);
            for n1 in 1..=200 {
                for n2 in 1..=200 {
                    character_pairing(&t, n1, n2).unwrap();
                }
            }
        }
    }

    #[test]
    fn large_sieve_edge_cases() {
        let t = table(23, 10_000);
        // empty coefficient stream
        let r = large_sieve_quantity(&t, 0.4, 0.5, 10, 10_000, &|_| 0.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.n_terms, 0);
        // α range collapsed to a sliver with no integers

        let r2 = large_sieve_quantity(&t, 0.5, 0.5, 10, 10_000, &|_| 1.0).unwrap();
        assert!(r2.n_terms <= 1);
        // coefficient bound enforced
        assert!(large_sieve_quantity(&t, 0.4, 0.5, 10, 10_000, &|_| 2.0).is_err());
    }

    #[test]
    fn large_sieve_prime_indicator_recorded() {
        let t = table(23, 100_000);
        let lpf = primes::lpf_table(100_000);
        let is_prime = move |n: u64| {
            if n >= 2 && lpf[n as usize] as u64 == n {
                1.0
            } else {
                0.0
            }
        };
        let r = large_sieve_quantity(&t, 0.4, 0.5, 10, 100_000, &is_prime).unwrap();
        assert!(r.value.is_finite() && r.value > 0.0);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        assert!(r.n_terms > 0);
    }
}

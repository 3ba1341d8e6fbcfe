//! Exact identities for class-group characters and coefficient tables,
//! carried out in Z[ζ_E] (E the group exponent) so every check is an
//! integer identity with zero tolerance:
//!
//!   Σ_χ χ(C) χ̄(C')          = h·[C = C']
//!   Σ_C χ(C) χ̄'(C)          = h·[χ = χ']
//!   Σ_χ χ̄(C) λ_χ(n)         = h·λ_C(n)
//!   λ_χ(dm)                  = Σ_{q | (d,m)} μ(q) χ_D(q) λ_χ(d/q) λ_χ(m/q)
//!
//! The last holds for every character including the trivial one, and pins
//! the multiplicative structure of the ideal-count coefficients.
//!
//! Also here: the analytic class-number cross-check h ≈ √D·L(1, χ_D)/π with
//! a certified tail bound.

use super::coeffs::CoefficientTable;
use super::cyclo::{CycloElem, CycloRing};
use super::{kronecker_chi, ClassGroup, Discriminant};
use crate::error::{assertion, Result};
use crate::primes;

/// Ring element χ(C) = ζ_E^{s(χ,C)}.
fn char_elem(ring: &CycloRing, g: &ClassGroup, chi: usize, class: usize) -> CycloElem {
    ring.root_pow(g.char_exponent(chi, class) as usize)
}

/// Ring element χ̄(C) = ζ_E^{−s(χ,C)}.
fn char_elem_conj(ring: &CycloRing, g: &ClassGroup, chi: usize, class: usize) -> CycloElem {
    let e = g.exponent;
    let s = g.char_exponent(chi, class);
    ring.root_pow(((e - s % e) % e) as usize)
}

/// Both character orthogonality relations as exact integer identities.
pub fn verify_orthogonality(g: &ClassGroup) -> Result<()> {
    let ring = CycloRing::new(g.exponent as usize);
    let h = g.h as i64;
    for c1 in 0..g.h {
        for c2 in 0..g.h {
            let mut s = ring.zero();
            for chi in 0..g.h {
                let term = ring.mul(
                    &char_elem(&ring, g, chi, c1),
                    &char_elem_conj(&ring, g, chi, c2),
                );
                ring.add_assign(&mut s, &term);
            }
            let expect = if c1 == c2 { h } else { 0 };
            if s != ring.from_int(expect) {
                return Err(assertion(format!(
                    "column orthogonality failed at classes ({c1}, {c2})"
                )));
            }
        }
    }
    for x1 in 0..g.h {
        for x2 in 0..g.h {
            let mut s = ring.zero();
            for c in 0..g.h {
                let term = ring.mul(
                    &char_elem(&ring, g, x1, c),
                    &char_elem_conj(&ring, g, x2, c),
                );
                ring.add_assign(&mut s, &term);
            }
            let expect = if x1 == x2 { h } else { 0 };
            if s != ring.from_int(expect) {
                return Err(assertion(format!(
                    "row orthogonality failed at characters ({x1}, {x2})"
                )));
            }
        }
    }
    Ok(())
}

/// Exact coefficient rows λ_χ(n) = Σ_C χ(C) λ_C(n) as ring elements, one row
/// per character.
pub fn exact_chi_rows(ring: &CycloRing, t: &CoefficientTable) -> Vec<Vec<CycloElem>> {
    let g = &t.group;
    (0..g.h)
        .map(|chi| {
            let weights: Vec<CycloElem> =
                (0..g.h).map(|c| char_elem(ring, g, chi, c)).collect();
            (0..=t.nmax)
                .map(|n| {
                    let mut s = ring.zero();
                    for (c, w) in weights.iter().enumerate() {
                        let v = t.lam_c(c, n) as i64;
                        if v != 0 {
                            ring.add_assign(&mut s, &ring.scale(w, v));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Σ_χ χ̄(C) λ_χ(n) = h λ_C(n), exactly, for every class and every n ≤ nmax.
pub fn verify_recovery(t: &CoefficientTable, nmax: usize) -> Result<()> {
    let g = &t.group;
    let ring = CycloRing::new(g.exponent as usize);
    let nmax = nmax.min(t.nmax);
    let rows = exact_chi_rows(&ring, t);
    for c in 0..g.h {
        let conj: Vec<CycloElem> =
            (0..g.h).map(|chi| char_elem_conj(&ring, g, chi, c)).collect();
        for n in 1..=nmax {
            let mut s = ring.zero();
            for chi in 0..g.h {
                let term = ring.mul(&conj[chi], &rows[chi][n]);
                ring.add_assign(&mut s, &term);
            }
            let expect = ring.from_int(g.h as i64 * t.lam_c(c, n) as i64);
            if s != expect {
                return Err(assertion(format!(
                    "coefficient recovery failed at class {c}, n = {n}"
                )));
            }
        }
    }
    Ok(())
}

/// λ_χ(dm) = Σ_{q | (d,m)} μ(q) χ_D(q) λ_χ(d/q) λ_χ(m/q), exactly, for all
/// characters and all pairs with d·m ≤ nmax.
pub fn verify_hecke(t: &CoefficientTable, nmax: usize) -> Result<()> {
    let g = &t.group;
    let disc = g.disc;
    let ring = CycloRing::new(g.exponent as usize);
    let nmax = nmax.min(t.nmax);
    let rows = exact_chi_rows(&ring, t);
    let mu = primes::mobius_table(primes::isqrt(nmax as u64) as usize + 1);
    for (chi, row) in rows.iter().enumerate() {
        for d in 1..=nmax {
            for m in 1..=nmax / d {
                let gcd = num_integer::gcd(d, m);
                let mut rhs = ring.zero();
                for q in 1..=gcd {
                    if gcd % q != 0 || mu[q] == 0 {
                        continue;
                    }
                    let w = mu[q] as i64 * kronecker_chi(disc, q as u64) as i64;
                    if w == 0 {
                        continue;
                    }
                    let term = ring.scale(&ring.mul(&row[d / q], &row[m / q]), w);
                    ring.add_assign(&mut rhs, &term);
                }
                if rhs != row[d * m] {
                    return Err(assertion(format!(
                        "multiplicative relation failed: chi = {chi}, d = {d}, m = {m}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Result of the analytic class-number cross-check.
#[derive(Debug, Clone, Copy)]
pub struct ClassNumberCheck {
    pub d: u64,
    /// h from form enumeration
    pub h: usize,
    /// √D·L(1, χ_D)/π from the truncated character sum
    pub analytic: f64,
    /// certified bound on the truncation's contribution to `analytic`
    pub tail_bound: f64,
    pub residual: f64,
}

/// Compare the enumerated class number with √D·L(1, χ_D)/π. The L-value is
/// summed to a cutoff M chosen so that the Abel-summation tail bound
/// 2B/(M+1) — with B the exact maximum |Σ_{n≤x} χ_D(n)| over a period —
/// contributes less than `target` to the class-number estimate.
pub fn class_number_crosscheck(disc: Discriminant, target: f64) -> Result<ClassNumberCheck> {
    let d = disc.d();
    let g = super::enumerate_class_group(disc)?;
    let chi: Vec<i32> = (0..d).map(|r| kronecker_chi(disc, r)).collect();
    let period: i64 = chi.iter().map(|&v| v as i64).sum();
    if period != 0 {
        return Err(assertion("character does not sum to zero over a period"));
    }
    let mut b = 0i64;
    let mut s = 0i64;
    for &v in &chi {
        s += v as i64;
        b = b.max(s.abs());
    }
    let sqrt_d = (d as f64).sqrt();
    let eps_l = target * std::f64::consts::PI / sqrt_d;
    let m = ((2.0 * b as f64 / eps_l).ceil() as u64).max(64);
    let mut l = 0.0f64;
    for n in 1..=m {
        let v = chi[(n % d) as usize];
        if v != 0 {
            l += v as f64 / n as f64;
        }
    }
    let tail_l = 2.0 * b as f64 / (m + 1) as f64;
    let analytic = sqrt_d * l / std::f64::consts::PI;
    let tail_bound = sqrt_d * tail_l / std::f64::consts::PI;
    Ok(ClassNumberCheck {
        d,
        h: g.h,
        analytic,
        tail_bound,
        residual: (analytic - g.h as f64).abs(),
    })
}

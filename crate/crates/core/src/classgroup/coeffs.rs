//! Representation coefficients λ_C(n): half the number of integer
//! representations of n by the reduced form of class C.
//!
//! λ_C(n) counts ideals of norm n in a fixed class, so Σ_C λ_C(n) is the
//! total ideal count Σ_{d|n} χ_D(d), and λ_C = λ_{C⁻¹} because (x, y) ↦
//! (x, −y) swaps a form with its inverse. Twisted sums λ_χ(n) =
//! Σ_C χ(C) λ_C(n) are therefore real.

use super::{ClassGroup, Discriminant, ReducedForm};
use crate::error::{assertion, validation, Result};
use crate::par;
use crate::primes::isqrt;

/// Tables of λ_C(n) for n ≤ nmax, one row per ideal class.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub group: ClassGroup,
    pub nmax: usize,
    /// lam[class][n]; entry 0 is unused and zero
    lam: Vec<Vec<u32>>,
}

/// Count lattice points with f(x, y) = n for 1 ≤ n ≤ nmax and halve:
/// representations come in ± pairs. Uses 4a·f = (2ax + by)² + D·y² to bound
/// the sweep.
fn representation_counts(f: ReducedForm, d: u64, nmax: usize) -> Result<Vec<u32>> {
    let (a, b) = (f.a, f.b);
    let d = d as i64;
    let n_cap = nmax as i64;
    let mut hist = vec![0u32; nmax + 1];
    let ymax = isqrt((4 * a * n_cap / d) as u64) as i64;
    for y in -ymax..=ymax {
        let rem = 4 * a * n_cap - d * y * y;
        if rem < 0 {
            continue;
        }
        let s = isqrt(rem as u64) as i64;
        // 2ax + by ∈ [−s, s]
        let lo = (-s - b * y).div_euclid(2 * a) + i64::from((-s - b * y).rem_euclid(2 * a) != 0);
        let hi = (s - b * y).div_euclid(2 * a);
        for x in lo..=hi {
            let n = f.eval(x, y);
            debug_assert!(n <= n_cap);
            if n >= 1 {
                hist[n as usize] += 1;
            }
        }
    }
    for (n, v) in hist.iter_mut().enumerate() {
        if *v % 2 != 0 {
            return Err(assertion(format!(
                "representation count of {n} by {f:?} is odd"
            )));
        }
        *v /= 2;
    }
    Ok(hist)
}

impl CoefficientTable {
    pub fn build(group: &ClassGroup, nmax: usize) -> Result<Self> {
        if nmax < 1 {
            return Err(validation("coefficient table needs nmax ≥ 1"));
        }
        let d = group.disc.d();
        let lam = par::map_collect(&group.elements, |f| representation_counts(*f, d, nmax))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(CoefficientTable {
            group: group.clone(),
            nmax,
            lam,
        })
    }

    pub fn disc(&self) -> Discriminant {
        self.group.disc
    }

    pub fn lam_c(&self, class: usize, n: usize) -> u32 {
        self.lam[class][n]
    }

    pub fn class_row(&self, class: usize) -> &[u32] {
        &self.lam[class]
    }

    /// λ_{χ₀}(n) = Σ_C λ_C(n), the full ideal count.
    pub fn lam_chi0(&self, n: usize) -> u32 {
        self.lam.iter().map(|row| row[n]).sum()
    }

    /// λ_χ(n) = Σ_C χ(C) λ_C(n); real because classes pair with inverses.
    pub fn lam_chi(&self, chi: usize, n: usize) -> f64 {
        (0..self.group.h)
            .map(|c| self.group.char_value(chi, c).re * self.lam[c][n] as f64)
            .sum()
    }

    #[cfg(test)]
    pub(crate) fn corrupt_for_test(&mut self, class: usize, n: usize) {
        self.lam[class][n] += 1;
    }

    /// Full row of λ_χ(n) for n = 0..=nmax.
    pub fn lam_chi_row(&self, chi: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..self.group.h)
            .map(|c| self.group.char_value(chi, c).re)
            .collect();
        let mut out = vec![0.0; self.nmax + 1];
        for (c, row) in self.lam.iter().enumerate() {
            let wc = w[c];
            if wc == 0.0 {
                continue;
            }
            for (n, &v) in row.iter().enumerate() {
                if v != 0 {
                    out[n] += wc * v as f64;
                }
            }
        }
        out
    }
}

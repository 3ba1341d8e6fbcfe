//! Critical-line zero scans: sign changes of the rotated completed function
//! on a fixed grid, bisection refinement, and a count audit against the
//! main term of the zero-counting formula. The principal class-group
//! character is scanned through its factorization ζ·L(χ_D), which keeps
//! degree-1 precision at any height; genuinely degree-2 characters are
//! capped by the theta evaluator's height budget.

use super::LFunction;
use crate::error::{validation, Result};
use crate::par;
use serde::Serialize;

/// Spacing of the sign-change grid; part of a scan's identity for caching.
pub const GRID_STEP: f64 = 0.02;
/// Target bracket width of the bisection refinement.
pub const REFINE_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Zero {
    /// Ordinate γ of the detected zero 1/2 + iγ.
    pub ordinate: f64,
    /// Final bracket width of the bisection.
    pub refined_to: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroList {
    pub target: String,
    pub t_max: f64,
    pub zeros: Vec<Zero>,
    pub count_found: usize,
    /// ϑ(T)/π + pole order — the smooth main term of N(T).
    pub count_main: f64,
    /// |count_found − count_main| ≤ 1. A false value flags a possible
    /// missed pair or off-line zero; it is surfaced, never masked.
    pub count_ok: bool,
}

impl ZeroList {
    pub fn ordinates(&self) -> Vec<f64> {
        self.zeros.iter().map(|z| z.ordinate).collect()
    }
}

fn bisect(lf: &LFunction, mut lo: f64, mut hi: f64, mut flo: f64) -> Result<Zero> {
    while hi - lo > REFINE_WIDTH {
        let mid = 0.5 * (lo + hi);
        let fm = lf.z_function(mid)?;
        if fm == 0.0 {
            return Ok(Zero {
                ordinate: mid,
                refined_to: 0.0,
            });
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(Zero {
        ordinate: 0.5 * (lo + hi),
        refined_to: hi - lo,
    })
}

/// Sign-change scan of one function on (0, t_max]; no audit, no dispatch.
fn grid_scan(lf: &LFunction, t_max: f64) -> Result<Vec<Zero>> {
    let n = (t_max / GRID_STEP).ceil() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| (i as f64 * GRID_STEP).min(t_max)).collect();
    let vals: Vec<Result<f64>> = par::map_collect(&ts, |t| lf.z_function(*t));
    let vals = vals.into_iter().collect::<Result<Vec<f64>>>()?;
    let mut zeros = Vec::new();
    for i in 0..n {
        if ts[i + 1] <= ts[i] {
            continue;
        }
        let (a, b) = (vals[i], vals[i + 1]);
        if a == 0.0 {
            if i == 0 || vals[i - 1] != 0.0 {
                zeros.push(Zero {
                    ordinate: ts[i],
                    refined_to: 0.0,
                });
            }
        } else if a * b < 0.0 {
            zeros.push(bisect(lf, ts[i], ts[i + 1], a)?);
        }
    }
    Ok(zeros)
}

/// Scan (0, T] for zeros of the rotated completed function. The count is
/// audited against the counting-formula main term within ±1; a mismatch is
/// reported through `count_ok`, not an error.
pub fn scan_zeros(lf: &LFunction, t_max: f64) -> Result<ZeroList> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(validation(format!("need 0 < T, got {t_max}")));
    }
    if t_max > lf.height_budget() + 1e-9 {
        return Err(validation(format!(
            "height T = {t_max} exceeds the budget {} for {}",
            lf.height_budget(),
            lf.label()
        )));
    }
    let zeros = match lf {
        LFunction::ClassGroup { table, chi } if *chi == 0 => {
            // ζ_K = ζ·L(χ_D): merge the two degree-1 scans
            let mut zs = grid_scan(&LFunction::Zeta, t_max)?;
            zs.extend(grid_scan(&LFunction::Kronecker(table.disc()), t_max)?);
            zs.sort_by(|a, b| a.ordinate.total_cmp(&b.ordinate));
            zs
        }
        _ => grid_scan(lf, t_max)?,
    };
    let count_main = lf.count_main(t_max);
    let count_found = zeros.len();
    Ok(ZeroList {
        target: lf.label(),
        t_max,
        count_found,
        count_main,
        count_ok: (count_found as f64 - count_main).abs() <= 1.0 + 1e-9,
        zeros,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroup::coeffs::CoefficientTable;
    use crate::classgroup::{enumerate_class_group, Discriminant};
    use crate::lfunc::theta_coeff_length;
    use approx::assert_abs_diff_eq;

    fn table(d: u64, nmax: usize) -> CoefficientTable {
        let g = enumerate_class_group(Discriminant::new(d).unwrap()).unwrap();
        CoefficientTable::build(&g, nmax).unwrap()
    }

    #[test]
    fn zeta_first_ordinate_recomputed() {
        let zl = scan_zeros(&LFunction::Zeta, 15.0).unwrap();
        assert_eq!(zl.count_found, 1);
        // classical first ordinate, reference 14.1347251417347
        assert_abs_diff_eq!(zl.zeros[0].ordinate, 14.1347251417347, epsilon = 1e-7);
        assert!(zl.zeros[0].refined_to < 1e-8);
        assert!(zl.count_ok);
    }

    #[test]
    fn zeta_count_to_fifty() {
        let zl = scan_zeros(&LFunction::Zeta, 50.0).unwrap();
        assert_eq!(zl.count_found, 10);
        // main term ϑ(50)/π + 1 = 9.4229…: off by S(50) = 0.577 but within ±1
        assert_abs_diff_eq!(zl.count_main, 9.4229144, epsilon = 1e-4);
        assert!(zl.count_ok);
    }

    #[test]
    fn kronecker7_zeros_to_thirty() {
        let lf = LFunction::Kronecker(Discriminant::new(7).unwrap());
        let zl = scan_zeros(&lf, 30.0).unwrap();
        let expect = [
            4.475738283729,
            6.845491712491,
            11.16018454312,
            12.48960334303,
            15.11288225874,
            16.80287647573,
            19.61187805669,
            21.89991370332,
            23.16297179974,
            24.49884755536,
            27.361477519,
            29.17887966636,
        ];
        assert_eq!(zl.count_found, expect.len());
        for (z, e) in zl.zeros.iter().zip(expect) {
            assert_abs_diff_eq!(z.ordinate, e, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(zl.count_main, 12.105914, epsilon = 1e-4);
        assert!(zl.count_ok);
    }

    #[test]
    fn empty_range_below_first_zero() {
        let zl = scan_zeros(&LFunction::Zeta, 5.0).unwrap();
        assert!(zl.zeros.is_empty());
        assert!(zl.count_ok);
    }

    #[test]
    fn principal_scan_merges_both_factors() {
        let t = table(7, theta_coeff_length(7) + 8);
        let lf = LFunction::class_group(&t, 0).unwrap();
        let zl = scan_zeros(&lf, 16.0).unwrap();
        // χ_{−7} contributes 5 ordinates below 16, ζ contributes 14.1347…
        assert_eq!(zl.count_found, 6);
        assert_abs_diff_eq!(zl.count_main, 4.623537819 + 1.0, epsilon = 1e-4);
        assert!(zl.count_ok);
        assert!(zl
            .zeros
            .iter()
            .any(|z| (z.ordinate - 14.1347251417347).abs() < 1e-6));
        assert!(zl
            .zeros
            .iter()
            .any(|z| (z.ordinate - 4.475738283729).abs() < 1e-6));
        let ords = zl.ordinates();
        assert!(ords.windows(2).all(|w| w[0] < w[1]), "sorted output");
    }

    #[test]
    fn degree_two_nonprincipal_scan() {
        // D=23, χ₁: one zero below 6, at γ = 5.11568332882 (30-digit oracle)
        let t = table(23, theta_coeff_length(23) + 8);
        let lf = LFunction::class_group(&t, 1).unwrap();
        let zl = scan_zeros(&lf, 6.0).unwrap();
        assert_eq!(zl.count_found, 1);
        assert_abs_diff_eq!(zl.zeros[0].ordinate, 5.11568332882, epsilon = 1e-6);
        assert_abs_diff_eq!(zl.count_main, 0.9984530805, epsilon = 1e-4);
        assert!(zl.count_ok);
    }

    #[test]
    fn budget_is_enforced() {
        let t = table(23, theta_coeff_length(23) + 8);
        let lf = LFunction::class_group(&t, 1).unwrap();
        assert!(scan_zeros(&lf, 50.0).is_err());
        // …but the principal character goes through the degree-1 factors
        let lf0 = LFunction::class_group(&t, 0).unwrap();
        assert!(scan_zeros(&lf0, 50.0).is_ok());
    }
}

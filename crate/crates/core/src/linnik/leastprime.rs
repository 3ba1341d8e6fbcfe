//! Least split prime in each ideal class, with representation witnesses,
//! and exponent surveys over ranges of discriminants.

use crate::classgroup::{
    enumerate_class_group, kronecker_chi, prime_form, reduce_with_transform, ClassGroup,
    Discriminant,
};
use crate::error::{assertion, validation, Result};
use crate::par;
use crate::primes;

/// A certified least split prime for one class: the reduced form of the
/// class evaluates to p at the witness.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct LeastPrimeRow {
    pub class_index: usize,
    pub p: u64,
    pub witness: (i64, i64),
    /// log p / log D
    pub exponent: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LeastPrimeTable {
    pub d: u64,
    pub h: usize,
    /// indexed by class; None when no split prime ≤ pmax landed there
    pub rows: Vec<Option<LeastPrimeRow>>,
    pub unresolved: Vec<usize>,
    pub pmax: u64,
}

impl LeastPrimeTable {
    pub fn all_resolved(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// the class with the largest least prime, among resolved rows
    pub fn worst_row(&self) -> Option<&LeastPrimeRow> {
        self.rows
            .iter()
            .flatten()
            .max_by_key(|r| (r.p, r.class_index))
    }
}

/// Scan primes upward, assigning each split p to the classes of the two
/// conjugate forms above it, until every class has one or pmax is passed.
/// Every returned row is re-certified: p passes a primality check, χ_D(p) = 1,
/// and the class form represents p at the recorded witness.
pub fn least_prime_search(group: &ClassGroup, pmax: u64) -> Result<LeastPrimeTable> {
    if pmax < 2 {
        return Err(validation("pmax must be at least 2"));
    }
    let disc = group.disc;
    let h = group.h;
    let mut rows: Vec<Option<LeastPrimeRow>> = vec![None; h];
    let mut filled = 0usize;
    let ln_d = (disc.d() as f64).ln();
    let base = primes::simple_sieve(primes::isqrt(pmax) + 1);
    let seg = 1u64 << 16;
    let mut lo = 2u64;
    'scan: while lo <= pmax {
        let hi = (lo + seg).min(pmax + 1);
        for p in primes::sieve_segment(lo, hi, &base) {
            if kronecker_chi(disc, p) != 1 {
                continue;
            }
            let f = prime_form(disc, p)
                .ok_or_else(|| assertion(format!("no form above split prime {p}")))?;
            for form_b in [f.b, -f.b] {
                let (red, m) = reduce_with_transform(f.a, form_b, f.c);
                let ci = group
                    .index_of(&red)
                    .ok_or_else(|| assertion(format!("form {red:?} missing from group")))?;
                if rows[ci].is_none() {
                    rows[ci] = Some(LeastPrimeRow {
                        class_index: ci,
                        p,
                        witness: (m[1][1], -m[1][0]),
                        exponent: (p as f64).ln() / ln_d,
                    });
                    filled += 1;
                }
            }
            if filled == h {
                break 'scan;
            }
        }
        lo = hi;
    }
    for row in rows.iter().flatten() {
        let ok = primes::is_prime(row.p)
            && kronecker_chi(disc, row.p) == 1
            && group.elements[row.class_index].eval(row.witness.0, row.witness.1)
                == row.p as i64;
        if !ok {
            return Err(assertion(format!(
                "certification failed for class {} at p = {}",
                row.class_index, row.p
            )));
        }
    }
    let unresolved = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.is_none().then_some(i))
        .collect();
    Ok(LeastPrimeTable {
        d: disc.d(),
        h,
        rows,
        unresolved,
        pmax,
    })
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SurveyRow {
    pub d: u64,
    pub h: usize,
    /// largest least split prime over the classes (0 if nothing resolved)
    pub max_p: u64,
    pub max_class: usize,
    /// log max_p / log D
    pub exponent: f64,
    pub resolved: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SurveyReport {
    pub dmin: u64,
    pub dmax: u64,
    pub pcap: u64,
    pub rows: Vec<SurveyRow>,
    /// (D, exponent) attaining the maximum over fully resolved rows
    pub max_exponent: f64,
    pub argmax_d: u64,
}

/// Sweep prime discriminants D ≡ 3 (mod 4) in [dmin, dmax], recording for
/// each the worst class and its exponent log p(D, C) / log D.
pub fn exponent_survey(dmin: u64, dmax: u64, pcap: u64) -> Result<SurveyReport> {
    if dmin > dmax {
        return Err(validation("need dmin ≤ dmax"));
    }
    let ds: Vec<u64> = (dmin..=dmax)
        .filter(|&d| d > 3 && d % 4 == 3 && primes::is_prime(d))
        .collect();
    if ds.is_empty() {
        return Err(validation(format!(
            "no prime D ≡ 3 (mod 4) in [{dmin}, {dmax}]"
        )));
    }
    let rows = par::map_collect(&ds, |&d| {
        let run = || -> Result<SurveyRow> {
            let disc = Discriminant::new(d)?;
            let group = enumerate_class_group(disc)?;
            let table = least_prime_search(&group, pcap)?;
            let resolved = table.all_resolved();
            let (max_p, max_class, exponent) = match table.worst_row() {
                Some(r) => (r.p, r.class_index, r.exponent),
                None => (0, 0, 0.0),
            };
            Ok(SurveyRow {
                d,
                h: group.h,
                max_p,
                max_class,
                exponent,
                resolved,
            })
        };
        run().unwrap_or(SurveyRow {
            d,
            h: 0,
            max_p: 0,
            max_class: 0,
            exponent: 0.0,
            resolved: false,
        })
    });
    let mut max_exponent = 0.0f64;
    let mut argmax_d = 0u64;
    for r in &rows {
        if r.resolved && r.exponent > max_exponent {
            max_exponent = r.exponent;
            argmax_d = r.d;
        }
    }
    Ok(SurveyReport {
        dmin,
        dmax,
        pcap,
        rows,
        max_exponent,
        argmax_d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroup::coeffs::CoefficientTable;

    fn group(d: u64) -> ClassGroup {
        enumerate_class_group(Discriminant::new(d).unwrap()).unwrap()
    }

    #[test]
    fn least_primes_for_smallest_fields() {
        // h(−7) = 1: p = 2 splits and the principal form takes it
        let g7 = group(7);
        let t = least_prime_search(&g7, 1000).unwrap();
        assert!(t.all_resolved());
        let r = t.rows[0].unwrap();
        assert_eq!(r.p, 2);
        assert!((r.exponent - 2f64.ln() / 7f64.ln()).abs() < 1e-15);

        // h(−23) = 3: classes in (a, b, c)-lex order get 59, 2, 2
        let g23 = group(23);
        let t = least_prime_search(&g23, 1000).unwrap();
        assert!(t.all_resolved());
        let ps: Vec<u64> = t.rows.iter().map(|r| r.unwrap().p).collect();
        assert_eq!(ps, vec![59, 2, 2]);
        let w = t.worst_row().unwrap();
        assert_eq!((w.p, w.class_index), (59, 0));
    }

    #[test]
    fn witnesses_actually_represent() {
        for d in [7u64, 23, 31, 47, 71, 163] {
            let g = group(d);
            let t = least_prime_search(&g, 100_000).unwrap();
            assert!(t.all_resolved(), "D = {d}");
            for r in t.rows.iter().flatten() {
                let f = g.elements[r.class_index];
                assert_eq!(f.eval(r.witness.0, r.witness.1), r.p as i64);
            }
        }
    }

    #[test]
    fn matches_coefficient_table_brute_force() {
        for d in [23u64, 31, 47] {
            let g = group(d);
            let t = least_prime_search(&g, 1000).unwrap();
            let coeffs = CoefficientTable::build(&g, 1000).unwrap();
            for c in 0..g.h {
                let brute = (2..=1000usize)
                    .find(|&n| {
                        primes::is_prime(n as u64)
                            && kronecker_chi(g.disc, n as u64) == 1
                            && coeffs.lam_c(c, n) > 0
                    })
                    .unwrap();
                assert_eq!(t.rows[c].unwrap().p, brute as u64, "D = {d}, class {c}");
            }
        }
    }

    #[test]
    fn unresolved_classes_are_reported() {
        // pmax = 3 only reaches p = 2, which covers the two non-principal
        // classes of D = 23; the principal class needs 59
        let g = group(23);
        let t = least_prime_search(&g, 3).unwrap();
        assert!(!t.all_resolved());
        assert_eq!(t.unresolved, vec![0]);
        assert!(t.rows[0].is_none());
        assert_eq!(t.rows[1].unwrap().p, 2);
        assert!(least_prime_search(&g, 1).is_err());
    }

    #[test]
    fn ramified_and_inert_primes_never_assigned() {
        // every recorded p must be split; D itself (ramified) and inert
        // primes are skipped even though forms above D exist
        let g = group(31);
        let t = least_prime_search(&g, 10_000).unwrap();
        for r in t.rows.iter().flatten() {
            assert_eq!(kronecker_chi(g.disc, r.p), 1);
            assert_ne!(r.p, 31);
        }
    }

    #[test]
    fn survey_small_range() {
        let rep = exponent_survey(7, 200, 100_000).unwrap();
        assert!(rep.rows.iter().all(|r| r.resolved));
        let r7 = rep.rows.iter().find(|r| r.d == 7).unwrap();
        assert_eq!((r7.max_p, r7.h), (2, 1));
        let r23 = rep.rows.iter().find(|r| r.d == 23).unwrap();
        assert_eq!((r23.max_p, r23.h), (59, 3));
        assert!((r23.exponent - 59f64.ln() / 23f64.ln()).abs() < 1e-15);
        assert!(rep.max_exponent >= r23.exponent);
        assert!(rep.argmax_d != 0);
        // discriminants outside the residue class never appear
        assert!(rep.rows.iter().all(|r| r.d % 4 == 3));
        assert!(exponent_survey(8, 10, 100).is_err());
    }
}

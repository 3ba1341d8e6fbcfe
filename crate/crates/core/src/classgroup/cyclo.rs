//! Exact arithmetic in Z[ζ_e] ≅ Z[x]/Φ_e(x).
//!
//! Character values are roots of unity ζ_e^s, so character sums, Hecke
//! convolutions and pairing identities live in this ring with integer
//! coefficients. Identities checked here are exact — no float tolerance.

/// The ring Z[x]/Φ_e(x) for a fixed root order e.
#[derive(Debug, Clone)]
pub struct CycloRing {
    e: usize,
    /// Φ_e, monic, ascending coefficients.
    phi: Vec<i64>,
    /// deg Φ_e = φ(e).
    deg: usize,
    /// x^k reduced mod Φ_e for k in 0..2·deg (covers products).
    pow_table: Vec<Vec<i64>>,
}

/// Element on the power basis 1, x, ..., x^{deg−1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloElem {
    pub coeffs: Vec<i64>,
}

/// Cyclotomic polynomial Φ_e by exact division of x^e − 1 by ∏_{d|e, d<e} Φ_d.
fn cyclotomic_poly(e: usize) -> Vec<i64> {
    assert!(e >= 1);
    // x^e − 1
    let mut num = vec![0i64; e + 1];
    num[0] = -1;
    num[e] = 1;
    for d in 1..e {
        if e % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "monic divisor expected");
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        let shift = k - dd;
        quot[shift] = c;
        for (i, &dc) in den.iter().enumerate() {
            rem[shift + i] -= c * dc;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "non-exact polynomial division");
    quot
}

impl CycloRing {
    pub fn new(e: usize) -> Self {
        let phi = cyclotomic_poly(e);
        let deg = phi.len() - 1;
        // reduce x^k for k < 2·deg
        let mut pow_table: Vec<Vec<i64>> = Vec::with_capacity(2 * deg);
        for k in 0..(2 * deg).max(1) {
            let mut p = vec![0i64; k + 1];
            p[k] = 1;
            pow_table.push(reduce_mod(&p, &phi, deg));
        }
        CycloRing { e, phi, deg, pow_table }
    }

    pub fn order(&self) -> usize {
        self.e
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem { coeffs: vec![0; self.deg.max(1)] }
    }

    pub fn from_int(&self, n: i64) -> CycloElem {
        let mut z = self.zero();
        z.coeffs[0] = n;
        z
    }

    /// ζ_e^s as a ring element.
    pub fn root_pow(&self, s: usize) -> CycloElem {
        let s = s % self.e;
        if s < self.pow_table.len() {
            return CycloElem { coeffs: self.pow_table[s].clone() };
        }
        let mut p = vec![0i64; s + 1];
        p[s] = 1;
        CycloElem { coeffs: reduce_mod(&p, &self.phi, self.deg) }
    }

    pub fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn add_assign(&self, a: &mut CycloElem, b: &CycloElem) {
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x += y;
        }
    }

    pub fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        CycloElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, a: &CycloElem, k: i64) -> CycloElem {
        CycloElem { coeffs: a.coeffs.iter().map(|x| x * k).collect() }
    }

    pub fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let mut conv = vec![0i64; 2 * self.deg.max(1)];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                conv[i + j] += x * y;
            }
        }
        let mut out = self.zero();
        for (k, &c) in conv.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, &t) in self.pow_table[k].iter().enumerate() {
                out.coeffs[i] += c * t;
            }
        }
        out
    }

    /// Complex conjugation: ζ ↦ ζ^{e−1}.
    pub fn conj(&self, a: &CycloElem) -> CycloElem {
        let mut out = self.zero();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = self.root_pow((self.e - i % self.e) % self.e);
            for (j, &t) in p.coeffs.iter().enumerate() {
                out.coeffs[j] += c * t;
            }
        }
        out
    }

    /// Some(n) iff the element is the rational integer n.
    pub fn as_int(&self, a: &CycloElem) -> Option<i64> {
        if a.coeffs[1..].iter().all(|&c| c == 0) {
            Some(a.coeffs[0])
        } else {
            None
        }
    }

    /// Exact division by a rational integer; None unless every coefficient
    /// divides.
    pub fn div_int_exact(&self, a: &CycloElem, k: i64) -> Option<CycloElem> {
        let mut out = self.zero();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c % k != 0 {
                return None;
            }
            out.coeffs[i] = c / k;
        }
        Some(out)
    }

    /// Numeric embedding at ζ_e = exp(2πi/e).
    pub fn to_complex(&self, a: &CycloElem) -> num_complex::Complex64 {
        use num_complex::Complex64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let th = 2.0 * std::f64::consts::PI * i as f64 / self.e as f64;
            acc += c as f64 * Complex64::new(th.cos(), th.sin());
        }
        acc
    }
}

fn reduce_mod(p: &[i64], phi: &[i64], deg: usize) -> Vec<i64> {
    let mut rem = p.to_vec();
    let dd = deg;
    for k in (dd..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        rem[k] = 0;
        let shift = k - dd;
        for (i, &dc) in phi.iter().enumerate().take(dd) {
            rem[shift + i] -= c * dc;
        }
        // lead term of phi is monic; rem[k] already cleared via subtraction of c·x^k
    }
    rem.truncate(dd.max(1));
    rem.resize(dd.max(1), 0);
    rem
}

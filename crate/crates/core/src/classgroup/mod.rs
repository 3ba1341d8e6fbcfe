//! Class groups of Q(√−D) through reduced binary quadratic forms of
//! discriminant −D, for prime D ≡ 3 (mod 4), D > 3.
//!
//! A form (a, b, c) has b² − 4ac = −D and is reduced iff |b| ≤ a ≤ c with
//! b ≥ 0 whenever |b| = a or a = c. Reduced forms biject with ideal classes;
//! composition is Dirichlet composition followed by reduction. Since D is
//! prime the class number h is odd, so the group has no 2-torsion and the
//! principal class is the only ambiguous one.

pub mod coeffs;
pub mod cyclo;
pub mod hecke;

use crate::error::{assertion, validation, Result};
use crate::primes;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::Path;

/// Validated discriminant parameter: the field is Q(√−D).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discriminant {
    d: u64,
}

impl Discriminant {
    pub fn new(d: u64) -> Result<Self> {
        if d <= 3 {
            return Err(validation(format!("D = {d}: need D > 3")));
        }
        if d % 4 != 3 {
            return Err(validation(format!("D = {d}: need D ≡ 3 (mod 4)")));
        }
        if !primes::is_prime(d) {
            return Err(validation(format!("D = {d}: not prime")));
        }
        Ok(Discriminant { d })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Form discriminant b² − 4ac = −D.
    pub fn form_disc(&self) -> i64 {
        -(self.d as i64)
    }
}

/// Kronecker symbol χ_D(n) = (−D | n), completely multiplicative with
/// conductor D. Returns −1, 0 or 1.
pub fn kronecker_chi(disc: Discriminant, n: u64) -> i32 {
    kronecker(-(disc.d as i64), n)
}

/// Kronecker symbol (a | n) for n ≥ 0.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut acc = 1i32;
    // factor out 2s: (a|2) = 0 if a even, +1 if a ≡ ±1 (8), −1 if a ≡ ±3 (8)
    while n % 2 == 0 {
        n /= 2;
        let r = a.rem_euclid(8);
        acc *= match r {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => return 0, // a even
        };
    }
    // now n odd positive: Jacobi symbol (a|n)
    let mut num = a.rem_euclid(n as i64) as u64;
    let mut den = n;
    while num != 0 {
        while num % 2 == 0 {
            num /= 2;
            let r = den % 8;
            if r == 3 || r == 5 {
                acc = -acc;
            }
        }
        std::mem::swap(&mut num, &mut den);
        if num % 4 == 3 && den % 4 == 3 {
            acc = -acc;
        }
        num %= den;
    }
    if den == 1 {
        acc
    } else {
        0
    }
}

/// A reduced positive-definite form (a, b, c) of discriminant −D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && -a < b && b <= a && a <= c && (a != c || b >= 0)
    }
}

/// Reduce an arbitrary positive-definite form; returns the reduced form and
/// M ∈ SL₂(Z) with reduced(v) = input(M·v).
pub fn reduce_with_transform(mut a: i64, mut b: i64, mut c: i64) -> (ReducedForm, [[i64; 2]; 2]) {
    // accumulated M: input ∘ M = current
    let mut m = [[1i64, 0], [0, 1]];
    let mul = |m: [[i64; 2]; 2], s: [[i64; 2]; 2]| {
        [
            [
                m[0][0] * s[0][0] + m[0][1] * s[1][0],
                m[0][0] * s[0][1] + m[0][1] * s[1][1],
            ],
            [
                m[1][0] * s[0][0] + m[1][1] * s[1][0],
                m[1][0] * s[0][1] + m[1][1] * s[1][1],
            ],
        ]
    };
    loop {
        // normalize b into (−a, a] by x → x − k·y
        if b <= -a || b > a {
            // k = round(b / 2a) with the half-open convention
            let two_a = 2 * a;
            let mut k = b.div_euclid(two_a);
            let r = b - two_a * k; // r ∈ [0, 2a)
            if r > a {
                k += 1;
            }
            if k != 0 {
                c = a * k * k - b * k + c;
                b -= two_a * k;
                m = mul(m, [[1, -k], [0, 1]]);
            }
        }
        if a > c {
            // (a, b, c) → (c, −b, a) via (x, y) → (−y, x)
            std::mem::swap(&mut a, &mut c);
            b = -b;
            m = mul(m, [[0, -1], [1, 0]]);
        } else {
            break;
        }
    }
    if a == c && b < 0 {
        b = -b;
        m = mul(m, [[0, -1], [1, 0]]);
    }
    let f = ReducedForm { a, b, c };
    debug_assert!(f.is_reduced(), "reduction failed: {f:?}");
    (f, m)
}

pub fn reduce_form(a: i64, b: i64, c: i64) -> ReducedForm {
    reduce_with_transform(a, b, c).0
}

/// Dirichlet composition of two forms of the same discriminant, unreduced.
fn compose_raw(f1: ReducedForm, f2: ReducedForm) -> (i64, i64, i64) {
    // classical composition; see Cohen, "A Course in Computational Algebraic
    // Number Theory", Algorithm 5.4.7
    let (f1, f2) = if f1.a > f2.a { (f2, f1) } else { (f1, f2) };
    let (a1, b1, _c1) = (f1.a, f1.b, f1.c);
    let (a2, b2, c2) = (f2.a, f2.b, f2.c);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let (g, u, _v) = egcd(a2, a1);
        (u, g)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let (g, u, v) = egcd(s, d);
        (u, -v, g)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    (a3, b3, c3)
}

fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a.abs(), s, 0);
    }
    let (g, x, y) = egcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// Period-D lookup table for χ_D, for sweeps where a Jacobi evaluation per
/// call would dominate.
#[derive(Debug, Clone)]
pub struct ChiTable {
    d: u64,
    table: Vec<i8>,
}

impl ChiTable {
    pub fn new(disc: Discriminant) -> Self {
        let d = disc.d();
        let table = (0..d).map(|r| kronecker_chi(disc, r) as i8).collect();
        ChiTable { d, table }
    }

    pub fn at(&self, n: u64) -> i32 {
        self.table[(n % self.d) as usize] as i32
    }
}

/// Unreduced form (p, b, c) whose first coefficient is the prime p, built
/// from a square root of −D mod 4p. Exists iff p is not inert; the two roots
/// ±b give the conjugate pair of prime ideals above p.
pub fn prime_form(disc: Discriminant, p: u64) -> Option<ReducedForm> {
    let d = disc.d();
    if p == 2 {
        // −D ≡ 1 (mod 8) required, i.e. D ≡ 7 (mod 8)
        if d % 8 != 7 {
            return None;
        }
        return Some(ReducedForm {
            a: 2,
            b: 1,
            c: ((1 + d) / 8) as i64,
        });
    }
    if p == d {
        return Some(ReducedForm {
            a: d as i64,
            b: d as i64,
            c: ((d + 1) / 4) as i64,
        });
    }
    let neg_d = (-(d as i64)).rem_euclid(p as i64) as u64;
    let r = primes::sqrt_mod(neg_d, p)?;
    // b must be odd so that b² ≡ −D (mod 4) as well; r and p − r differ in
    // parity since p is odd
    let b = if r % 2 == 1 { r } else { p - r } as i64;
    let c = (b * b + d as i64) / (4 * p as i64);
    debug_assert_eq!(b * b - 4 * p as i64 * c, -(d as i64));
    Some(ReducedForm { a: p as i64, b, c })
}

/// One character of the class group, stored as exponents against the cyclic
/// generator decomposition. Values are roots of unity ζ_E^s with E the group
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCharacter {
    /// exponent tuple t_i ∈ [0, n_i)
    pub tuple: Vec<u32>,
}

/// The class group of discriminant −D with composition table, cyclic
/// structure, and character data.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    pub disc: Discriminant,
    /// reduced forms sorted lexicographically by (a, b, c); index 0 is the
    /// principal form (1, 1, (1+D)/4)
    pub elements: Vec<ReducedForm>,
    pub h: usize,
    /// invariant-factor orders n_1 ≥ n_2 ≥ ..., Π n_i = h, n_{i+1} | n_i
    pub structure: Vec<u64>,
    /// element indices of the chosen generators
    pub generators: Vec<usize>,
    /// coordinates of each element against the generators
    pub coords: Vec<Vec<u32>>,
    /// composition table: comp[i][j] = index of class i ∘ class j
    comp: Vec<Vec<u32>>,
    inv: Vec<u32>,
    index_of: HashMap<ReducedForm, usize>,
    /// characters in lexicographic tuple order; index 0 is trivial
    pub characters: Vec<ClassCharacter>,
    /// group exponent E = n_1 (1 when h = 1)
    pub exponent: u64,
}

/// Enumerate the class group: all reduced forms of discriminant −D, the
/// composition table, the cyclic decomposition, and the characters.
pub fn enumerate_class_group(disc: Discriminant) -> Result<ClassGroup> {
    let d = disc.d as i64;
    let mut elements = Vec::new();
    // reduced: |b| ≤ a ≤ c forces a ≤ √(D/3); b odd since D odd
    let amax = ((d as f64 / 3.0).sqrt() as i64) + 1;
    for a in 1..=amax {
        let mut b = -a + 1;
        // b ≡ 1 (mod 2)
        if b % 2 == 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b + d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let f = ReducedForm { a, b, c };
                if f.is_reduced() {
                    elements.push(f);
                }
            }
            b += 2;
        }
    }
    elements.sort();
    let h = elements.len();
    if h % 2 == 0 {
        return Err(assertion(format!("D = {}: class number {h} is even", disc.d)));
    }
    let principal = ReducedForm { a: 1, b: 1, c: (d + 1) / 4 };
    if elements[0] != principal {
        return Err(assertion("principal form is not first in lexicographic order"));
    }

    let index_of: HashMap<ReducedForm, usize> =
        elements.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let lookup = |f: ReducedForm| -> Result<usize> {
        index_of
            .get(&f)
            .copied()
            .ok_or_else(|| assertion(format!("composition left the reduced set: {f:?}")))
    };

    let mut comp = vec![vec![0u32; h]; h];
    for i in 0..h {
        for j in i..h {
            let (a, b, c) = compose_raw(elements[i], elements[j]);
            let red = reduce_form(a, b, c);
            let k = lookup(red)? as u32;
            comp[i][j] = k;
            comp[j][i] = k;
        }
    }
    let mut inv = vec![0u32; h];
    for i in 0..h {
        let f = elements[i];
        let red = reduce_form(f.a, -f.b, f.c);
        inv[i] = lookup(red)? as u32;
    }

    let (structure, generators, coords) = cyclic_decomposition(h, &comp)?;
    let exponent = structure.first().copied().unwrap_or(1);

    // characters: all exponent tuples, lexicographic, trivial first
    let mut characters = Vec::with_capacity(h);
    let mut tuple = vec![0u32; structure.len()];
    loop {
        characters.push(ClassCharacter { tuple: tuple.clone() });
        let mut k = structure.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            tuple[k] += 1;
            if (tuple[k] as u64) < structure[k] {
                break;
            }
            tuple[k] = 0;
            if k == 0 {
                break;
            }
        }
        if tuple.iter().all(|&t| t == 0) {
            break;
        }
    }
    if characters.len() != h {
        return Err(assertion("character count != h"));
    }

    Ok(ClassGroup {
        disc,
        elements,
        h,
        structure,
        generators,
        coords,
        comp,
        inv,
        index_of,
        characters,
        exponent,
    })
}

/// Greedy invariant-factor decomposition from the multiplication table:
/// repeatedly pick the element of maximal order in G/⟨current⟩, adjust it by
/// a subgroup element so its order in G matches and its powers meet the
/// subgroup trivially, then extend.
fn cyclic_decomposition(
    h: usize,
    comp: &[Vec<u32>],
) -> Result<(Vec<u64>, Vec<usize>, Vec<Vec<u32>>)> {
    let id = 0usize;
    let mul = |a: usize, b: usize| comp[a][b] as usize;
    let pow = |a: usize, mut k: u64| {
        let mut acc = id;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            k >>= 1;
        }
        acc
    };
    // sub: element index → coordinates
    let mut sub: HashMap<usize, Vec<u32>> = HashMap::new();
    sub.insert(id, Vec::new());
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    while sub.len() < h {
        // quotient order: least k ≥ 1 with x^k ∈ sub
        let qord = |x: usize, sub: &HashMap<usize, Vec<u32>>| -> u64 {
            let mut acc = x;
            let mut k = 1u64;
            while !sub.contains_key(&acc) {
                acc = mul(acc, x);
                k += 1;
            }
            k
        };
        let mut best = (0u64, 0usize);
        for x in 0..h {
            if sub.contains_key(&x) {
                continue;
            }
            let q = qord(x, &sub);
            if q > best.0 {
                best = (q, x);
            }
        }
        let (n, x) = best;
        // adjust x by subgroup elements so that ⟨adjusted⟩ is a direct factor
        let mut subs: Vec<usize> = sub.keys().copied().collect();
        subs.sort_unstable();
        let mut found = None;
        'adjust: for &y in &subs {
            let g = mul(x, y);
            // need g^n = id and g^k ∉ sub for 1 ≤ k < n
            let mut acc = g;
            for _ in 1..n {
                if sub.contains_key(&acc) {
                    continue 'adjust;
                }
                acc = mul(acc, g);
            }
            if acc != id {
                continue;
            }
            found = Some(g);
            break;
        }
        let g = found.ok_or_else(|| assertion("cyclic decomposition: no pure lift found"))?;
        debug_assert_eq!(pow(g, n), id);
        // extend the subgroup: coords gain one slot
        let mut next: HashMap<usize, Vec<u32>> = HashMap::new();
        for (&s, cs) in &sub {
            let mut acc = s;
            for k in 0..n {
                let mut coords = cs.clone();
                coords.push(k as u32);
                if next.insert(acc, coords).is_some() {
                    return Err(assertion("cyclic decomposition: subgroup extension collided"));
                }
                acc = mul(acc, g);
            }
        }
        sub = next;
        orders.push(n);
        gens.push(g);
    }
    if orders.is_empty() {
        return Ok((Vec::new(), Vec::new(), vec![Vec::new(); h]));
    }
    // invariant chain: n_{i+1} divides n_i
    for w in orders.windows(2) {
        if w[0] % w[1] != 0 {
            return Err(assertion(format!("invariant factors not a divisor chain: {orders:?}")));
        }
    }
    let mut coords = vec![Vec::new(); h];
    for (el, cs) in sub {
        coords[el] = cs;
    }
    Ok((orders, gens, coords))
}

impl ClassGroup {
    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.comp[i][j] as usize
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn index_of(&self, f: &ReducedForm) -> Option<usize> {
        self.index_of.get(f).copied()
    }

    pub fn pow(&self, i: usize, mut k: u64) -> usize {
        let mut acc = 0usize;
        let mut base = i;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.compose(acc, base);
            }
            base = self.compose(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn order_of(&self, i: usize) -> u64 {
        let mut acc = i;
        let mut k = 1u64;
        while acc != 0 {
            acc = self.compose(acc, i);
            k += 1;
        }
        k
    }

    /// Exponent s with χ(C) = ζ_E^s for group exponent E.
    pub fn char_exponent(&self, chi: usize, class: usize) -> u64 {
        let e = self.exponent;
        if e == 1 {
            return 0;
        }
        let t = &self.characters[chi].tuple;
        let cs = &self.coords[class];
        let mut s = 0u64;
        for (i, (&ti, &ci)) in t.iter().zip(cs).enumerate() {
            let ni = self.structure[i];
            s = (s + (ti as u64 % ni) * (ci as u64 % ni) % ni * (e / ni)) % e;
        }
        s
    }

    /// χ(C) as a complex number.
    pub fn char_value(&self, chi: usize, class: usize) -> Complex64 {
        let s = self.char_exponent(chi, class);
        let th = 2.0 * std::f64::consts::PI * s as f64 / self.exponent as f64;
        Complex64::new(th.cos(), th.sin())
    }

    /// Index of the conjugate character χ̄.
    pub fn conj_char(&self, chi: usize) -> usize {
        let t = &self.characters[chi].tuple;
        let conj: Vec<u32> = t
            .iter()
            .zip(&self.structure)
            .map(|(&ti, &ni)| ((ni - ti as u64 % ni) % ni) as u32)
            .collect();
        self.characters
            .iter()
            .position(|c| c.tuple == conj)
            .expect("conjugate character present")
    }
}

/// Serialized class-group document: {D, h, forms, structure}.
#[derive(Debug, Serialize, Deserialize)]
pub struct ClassGroupDoc {
    pub version: String,
    pub d: u64,
    pub h: usize,
    pub forms: Vec<[i64; 3]>,
    pub structure: Vec<u64>,
}

impl ClassGroupDoc {
    pub fn from_group(g: &ClassGroup) -> Self {
        ClassGroupDoc {
            version: crate::TOOL_VERSION.to_string(),
            d: g.disc.d,
            h: g.h,
            forms: g.elements.iter().map(|f| [f.a, f.b, f.c]).collect(),
            structure: g.structure.clone(),
        }
    }
}

/// Load the class group for D from `cache_dir`, recomputing (and rewriting
/// the cache) on miss or stale version stamp.
pub fn cached_class_group(disc: Discriminant, cache_dir: &Path) -> Result<ClassGroup> {
    let dir = cache_dir.join("classgroup");
    let path = dir.join(format!("D{}.json", disc.d));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(doc) = serde_json::from_str::<ClassGroupDoc>(&text) {
            if doc.version == crate::TOOL_VERSION && doc.d == disc.d {
                let g = enumerate_class_group(disc)?;
                // the cache is a witness document; cross-check it
                if doc.h == g.h && doc.structure == g.structure {
                    return Ok(g);
                }
                return Err(assertion(format!(
                    "cache document for D={} disagrees with recomputation",
                    disc.d
                )));
            }
        }
    }
    let g = enumerate_class_group(disc)?;
    std::fs::create_dir_all(&dir)?;
    let doc = ClassGroupDoc::from_group(&g);
    std::fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
    Ok(g)
}

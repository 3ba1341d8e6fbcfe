//! Prime utilities: a segmented Eratosthenes sieve (2^24-wide segments), a
//! least-prime-factor table, deterministic Miller–Rabin, and Tonelli–Shanks
//! square roots mod p.

/// Width of one sieve segment.
pub const SEGMENT_WIDTH: u64 = 1 << 24;

/// Primes ≤ n by a plain sieve. Intended for base primes (n ≤ ~10^8).
pub fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Fixed segment decomposition of [2, limit): the unit of deterministic
/// parallelism for prime sweeps.
pub fn segments(limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 2u64;
    while lo < limit {
        let hi = (lo + SEGMENT_WIDTH).min(limit);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

/// Primes in [lo, hi) given base primes covering √hi.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut m = ((lo + p - 1) / p) * p;
        if m < p * p {
            m = p * p;
        }
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    let mut out = Vec::new();
    for i in 0..len {
        let v = lo + i as u64;
        if v >= 2 && !composite[i] {
            out.push(v);
        }
    }
    out
}

/// Visit primes < limit in ascending order, one segment at a time.
pub fn for_each_prime(limit: u64, mut visit: impl FnMut(u64)) {
    let base = simple_sieve(isqrt(limit.saturating_sub(1)) + 1);
    for (lo, hi) in segments(limit) {
        for p in sieve_segment(lo, hi, &base) {
            visit(p);
        }
    }
}

/// All primes < limit collected into a vector.
pub fn primes_below(limit: u64) -> Vec<u64> {
    let mut v = Vec::new();
    for_each_prime(limit, |p| v.push(p));
    v
}

/// Least-prime-factor table for 0..=n (lpf[0] = 0, lpf[1] = 1).
pub fn lpf_table(n: usize) -> Vec<u32> {
    let mut lpf = vec![0u32; n + 1];
    if n >= 1 {
        lpf[1] = 1;
    }
    for i in 2..=n {
        if lpf[i] == 0 {
            let mut m = i;
            while m <= n {
                if lpf[m] == 0 {
                    lpf[m] = i as u32;
                }
                m += i;
            }
        }
    }
    lpf
}

/// Möbius function for 0 ≤ n ≤ limit via the least-prime-factor table;
/// entries 0 and 1 are 0 and 1.
pub fn mobius_table(limit: usize) -> Vec<i8> {
    let lpf = lpf_table(limit);
    let mut mu = vec![0i8; limit + 1];
    if limit >= 1 {
        mu[1] = 1;
    }
    for n in 2..=limit {
        let p = lpf[n] as usize;
        let m = n / p;
        mu[n] = if m % p == 0 { 0 } else { -mu[m] };
    }
    mu
}

/// Floor square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, valid for all n < 3.3·10^24 >> u64 range
/// with this base set.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Tonelli–Shanks: x with x² ≡ a (mod p) for odd prime p, a a quadratic
/// residue. Returns None for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    // p ≡ 1 (mod 4): full Tonelli–Shanks
    let mut q = p - 1;
    let mut s = 0u32;
    while q & 1 == 0 {
        q >>= 1;
        s += 1;
    }
    // deterministic search for a non-residue
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
            if i == m {
                return None; // unreachable for residues
            }
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mul_mod(b, b, p);
        }
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

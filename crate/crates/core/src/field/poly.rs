//! Dense polynomials over a prime field, coefficients low degree first.

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u32;
    while (k as u64) * (k as u64) <= n as u64 {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Splits `q` as `p^ℓ`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|k| q.is_multiple_of(*k))?;
    let mut rest = q;
    let mut ell = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        ell += 1;
    }
    (rest == 1).then_some((p, ell))
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let deg_m = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg_m {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - deg_m;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

/// Product of `a` and `b` reduced modulo the monic `m`.
pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    rem(&prod, m, p)
}

/// Digits of `n` in base `p`, least significant first, padded to `len`.
pub(crate) fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(n % p);
        n /= p;
    }
    out
}

fn monic(lower: &[u32]) -> Vec<u32> {
    let mut m = lower.to_vec();
    m.push(1);
    m
}

/// Brute-force irreducibility test: no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for k in 1..=deg / 2 {
        let count = p.pow(k as u32);
        for n in 0..count {
            let f = monic(&digits(n, p, k));
            if rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of degree `ell`, comparing the non-leading
/// coefficients from the highest degree down (so `x² + 1 < x² + x`).
pub fn smallest_irreducible(p: u32, ell: u32) -> Vec<u32> {
    let count = p.pow(ell);
    (0..count)
        .map(|n| monic(&digits(n, p, ell as usize)))
        .find(|m| is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

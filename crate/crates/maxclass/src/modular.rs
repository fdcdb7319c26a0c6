//! Integer helpers modulo prime powers.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`; panics if `a` is not invertible.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "{a} is not invertible mod {m}");
    t0.rem_euclid(m as i128) as u64
}

/// p-adic valuation of a nonzero integer; `u32::MAX / 2` for zero.
pub fn vp(mut a: u64, p: u64) -> u32 {
    if a == 0 {
        return u32::MAX / 2;
    }
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

pub fn primitive_root(g: u64, p: u64) -> bool {
    let d = p - 1;
    g % p != 0 && (2..=d).filter(|q| d % q == 0 && is_prime_small(*q)).all(|q| pow_mod(g, d / q, p) != 1)
}

pub fn smallest_primitive_root(p: u64) -> u64 {
    (2..p).find(|&g| primitive_root(g, p)).expect("primes have primitive roots")
}

fn is_prime_small(q: u64) -> bool {
    q >= 2 && (2..q).take_while(|r| r * r <= q).all(|r| q % r != 0)
}

/// Discrete logarithm of `a` to base `g` in `F_p^×`.
pub fn discrete_log(a: u64, g: u64, p: u64) -> Option<u64> {
    let a = a % p;
    let mut t = 1;
    for k in 0..p - 1 {
        if t == a {
            return Some(k);
        }
        t = t * g % p;
    }
    None
}

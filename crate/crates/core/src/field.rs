//! Arithmetic in the prime field F_p. Elements are `u32` values in `0..p`.

pub const DEFAULT_CHARACTERISTIC: u32 = 32003;

/// Largest supported characteristic; sums of two reduced elements must fit a `u32`.
pub const MAX_CHARACTERISTIC: u32 = (1 << 31) - 1;

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse. Panics on zero.
pub fn inv(a: u32, p: u32) -> u32 {
    assert!(a != 0, "inverse of zero in F_{p}");
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u32
}

/// Maps an integer into F_p.
pub fn from_i64(c: i64, p: u32) -> u32 {
    c.rem_euclid(p as i64) as u32
}

/// Symmetric representative in (-p/2, p/2], used for printing.
pub fn to_signed(a: u32, p: u32) -> i64 {
    if a as u64 * 2 > p as u64 {
        a as i64 - p as i64
    } else {
        a as i64
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if (n as u64).is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Whether C(n, k) is nonzero modulo the prime `p` (Lucas).
pub fn binomial_nonzero_mod(mut n: u64, mut k: u64, p: u32) -> bool {
    let p = p as u64;
    while n > 0 || k > 0 {
        if k % p > n % p {
            return false;
        }
        n /= p;
        k /= p;
    }
    true
}

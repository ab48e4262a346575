//! Counter-based randomness: every random quantity is a pure function of the
//! master seed and a structured key, so any window sees the same values.

/// splitmix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Hash a seed together with a list of key words.
#[inline]
pub fn hash_key(seed: u64, words: &[u64]) -> u64 {
    let mut h = mix64(seed ^ 0x5151_7a7a_0f0f_3c3c);
    for &w in words {
        h = mix64(h ^ w);
    }
    h
}

/// Top 53 bits as a uniform in [0,1).
#[inline]
pub fn to_unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[inline]
pub fn uniform(seed: u64, words: &[u64]) -> f64 {
    to_unit(hash_key(seed, words))
}

#[inline]
pub fn zz(v: i64) -> u64 {
    v as u64
}

/// Hash domains, kept disjoint so that placements, rank marks and bond
/// marks are jointly independent.
pub mod domain {
    pub const COUNT: u64 = 1;
    pub const PLACE: u64 = 2;
    pub const RANK: u64 = 3;
    pub const XI: u64 = 4;
    pub const XI_PRIME: u64 = 5;
    pub const AUX: u64 = 6;
}

/// Inverse-CDF draw from Binomial(n, p) using the single uniform `u`.
/// Large means are split into independent halves, each drawn from its own
/// derived uniform, to keep the starting mass representable.
pub fn binomial_inv(n: u64, p: f64, u: f64, salt: u64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    if (n as f64) * p > 300.0 {
        let n1 = n / 2;
        let u1 = to_unit(mix64(salt ^ 0xa1));
        let u2 = to_unit(mix64(salt ^ 0xb2));
        return binomial_inv(n1, p, u1, mix64(salt ^ 1)) + binomial_inv(n - n1, p, u2, mix64(salt ^ 2));
    }
    let q = 1.0 - p;
    let ratio = p / q;
    let mut pmf = ((n as f64) * (-p).ln_1p()).exp();
    let mut cdf = pmf;
    let mut k = 0u64;
    while u >= cdf && k < n {
        pmf *= (n - k) as f64 / (k + 1) as f64 * ratio;
        k += 1;
        cdf += pmf;
        if pmf < 1e-300 && cdf < u {
            // remaining mass lost to rounding; u sits in the far tail
            break;
        }
    }
    k
}

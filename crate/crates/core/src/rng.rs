//! Counter-based pseudorandom numbers.
//!
//! Every noise cell is produced by hashing its coordinates
//! (seed, sample_index, time index, space index) through a chain of
//! splitmix64 finalizers, so any cell can be generated independently of
//! order. This gives bitwise reproducibility under parallel Monte Carlo
//! and lazy aggregation: no generator state is ever shared or advanced.

/// Splitmix64 finalizer; full-avalanche 64-bit mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uncorrelated 64 bits for the cell (seed, sample, k, i).
#[inline]
pub fn cell_bits(seed: u64, sample: u64, k: u64, i: u64) -> u64 {
    let mut x = mix64(seed);
    x = mix64(x ^ sample.wrapping_mul(0xA076_1D64_78BD_642F));
    x = mix64(x ^ k.wrapping_mul(0xE703_7ED1_A0B4_28DB));
    mix64(x ^ i.wrapping_mul(0x8EBC_6AF0_9C88_C6E3))
}

/// Maps 64 random bits to a uniform in the open interval (0, 1).
#[inline]
pub fn bits_to_open_unit(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0) // 2^-53
}

/// Standard normal variate for the cell (seed, sample, k, i) via the
/// inverse CDF applied to the counter stream.
#[inline]
pub fn cell_standard_normal(seed: u64, sample: u64, k: u64, i: u64) -> f64 {
    inverse_normal_cdf(bits_to_open_unit(cell_bits(seed, sample, k, i)))
}

/// Auxiliary stream, disjoint from the cell stream, for Gaussian
/// corrections that must be independent of the noise field itself.
#[inline]
pub fn aux_standard_normal(seed: u64, sample: u64, tag: u64) -> f64 {
    let bits = cell_bits(seed ^ 0x5DEE_CE66_D151_21F4, sample, tag, u64::MAX);
    inverse_normal_cdf(bits_to_open_unit(bits))
}

/// Inverse standard normal CDF (Acklam's rational approximation,
/// relative error below 1.2e-9 — far below every statistical tolerance
/// used in this crate, and fast enough for the noise hot path).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);

    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    }
}

//! Small float helpers available in `core`.

/// Exact `2^-j`, flushing to zero once past the subnormal range.
pub(crate) fn pow2_neg(j: usize) -> f64 {
    if j <= 1022 {
        f64::from_bits((1023 - j as u64) << 52)
    } else if j <= 1074 {
        // subnormals: 2^-1023 .. 2^-1074
        f64::from_bits(1u64 << (1074 - j))
    } else {
        0.0
    }
}

/// Reduce modulo 1 into `[0, 1)`.
pub(crate) fn fract1(x: f64) -> f64 {
    let r = x % 1.0;
    let r = if r < 0.0 { r + 1.0 } else { r };
    // `-1e-17 % 1.0 + 1.0` rounds to 1.0 exactly; fold it back.
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow2_neg_exact() {
        assert_eq!(pow2_neg(0), 1.0);
        assert_eq!(pow2_neg(1), 0.5);
        assert_eq!(pow2_neg(2), 0.25);
        assert_eq!(pow2_neg(10), 1.0 / 1024.0);
        assert_eq!(pow2_neg(1022), f64::MIN_POSITIVE);
        assert_eq!(pow2_neg(1074), 5e-324);
        assert_eq!(pow2_neg(1075), 0.0);
        assert_eq!(pow2_neg(100_000), 0.0);
        // doubling stays exact across the whole representable range
        for j in 1..1074 {
            assert_eq!(pow2_neg(j) * 2.0, pow2_neg(j - 1));
        }
    }

    #[test]
    fn fract1_range() {
        assert_eq!(fract1(0.0), 0.0);
        assert_eq!(fract1(1.0), 0.0);
        assert_eq!(fract1(1.25), 0.25);
        assert_eq!(fract1(-0.25), 0.75);
        assert_eq!(fract1(-3.75), 0.25);
        let tiny = -1e-17;
        let r = fract1(tiny);
        assert!((0.0..1.0).contains(&r));
    }
}

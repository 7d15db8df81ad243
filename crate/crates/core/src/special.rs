//! Small numerical helpers: deterministic summation and the Hurwitz zeta function.

use crate::scalar::Real;

/// Pairwise summation in a fixed order. Deterministic for a given slice.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        let mut acc = T::zero();
        for &x in xs {
            acc = acc + x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

// B_{2j} / (2j)!
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

/// Hurwitz zeta `ζ(a, x) = Σ_{n≥0} (n + x)^{-a}` for `x > 0`, `a ≠ 1`.
///
/// Euler–Maclaurin with twelve explicit terms; the formula is the analytic
/// continuation for `a < 1` as well.
pub fn hurwitz_zeta(a: f64, x: f64) -> f64 {
    assert!(x > 0.0, "hurwitz_zeta needs x > 0");
    assert!((a - 1.0).abs() > 1e-12, "hurwitz_zeta has a pole at a = 1");
    const N: usize = 12;
    let mut head = 0.0;
    for n in 0..N {
        head += (x + n as f64).powf(-a);
    }
    let y = x + N as f64;
    let mut tail = y.powf(1.0 - a) / (a - 1.0) + 0.5 * y.powf(-a);
    // rising factorial a (a+1) ... (a+2j-2)
    let mut rising = a;
    let mut power = y.powf(-a - 1.0);
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        tail += b * rising * power;
        let m = 2.0 * j as f64;
        rising *= (a + m + 1.0) * (a + m + 2.0);
        power /= y * y;
    }
    head + tail
}

/// Smallest power of two that is `>= n` (and at least 1).
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zeta_matches_known_values() {
        assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(4.0, 1.0) - PI.powi(4) / 90.0).abs() < 1e-14);
        // ζ(2, 1/2) = (2^2 - 1) ζ(2)
        assert!((hurwitz_zeta(2.0, 0.5) - 3.0 * PI * PI / 6.0).abs() < 1e-13);
        // ζ(0, x) = 1/2 - x
        assert!((hurwitz_zeta(0.0, 0.3) - 0.2).abs() < 1e-13);
        // ζ(-1, 1) = -1/12
        assert!((hurwitz_zeta(-1.0, 1.0) + 1.0 / 12.0).abs() < 1e-13);
    }

    #[test]
    fn zeta_tracks_direct_sum_for_large_a() {
        let direct: f64 = (0..200).map(|n| (n as f64 + 0.37).powf(-7.5)).sum();
        assert!((hurwitz_zeta(7.5, 0.37) - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn pairwise_is_order_fixed() {
        let xs: Vec<f64> = (0..1000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        assert_eq!(pairwise_sum(&xs).to_bits(), pairwise_sum(&xs).to_bits());
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-12);
    }
}

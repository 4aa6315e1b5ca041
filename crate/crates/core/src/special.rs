//! Hurwitz zeta for the discrete power-law normalizer.

/// B_{2j} / (2j)! for j = 1..=8.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30_240.0,
    -1.0 / 1_209_600.0,
    1.0 / 47_900_160.0,
    -691.0 / 1_307_674_368_000.0,
    1.0 / 74_724_249_600.0,
    -3617.0 / 10_670_622_842_880_000.0,
];

/// `sum_{k>=0} (q + k)^{-s}` for `s > 1`, `q > 0`, by Euler-Maclaurin
/// summation after `N` explicit terms.
pub(crate) fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    const N: usize = 12;
    let mut sum = 0.0;
    for k in 0..N {
        sum += (q + k as f64).powf(-s);
    }
    let a = q + N as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising factorial s (s+1) ... (s+2j-2) times a^{-s-2j+1}
    let mut rising = s;
    let mut power = a.powf(-s - 1.0);
    let a2 = a * a;
    for (j, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coef * rising * power;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        let m = 2.0 * j as f64 + 1.0;
        rising *= (s + m) * (s + m + 1.0);
        power /= a2;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn riemann_values() {
        assert!((hurwitz_zeta(2.0, 1.0) - PI * PI / 6.0).abs() < 1e-13);
        assert!((hurwitz_zeta(4.0, 1.0) - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!((hurwitz_zeta(3.0, 1.0) - 1.202_056_903_159_594_3).abs() < 1e-13);
    }

    #[test]
    fn shift_identity() {
        // zeta(s, q) = q^{-s} + zeta(s, q + 1)
        for &(s, q) in &[(1.5, 1.0), (2.2, 3.0), (3.7, 0.5), (1.1, 40.0)] {
            let lhs = hurwitz_zeta(s, q);
            let rhs = q.powf(-s) + hurwitz_zeta(s, q + 1.0);
            assert!((lhs - rhs).abs() < 1e-12 * lhs, "s={s} q={q}");
        }
    }

    #[test]
    fn direct_summation_agrees() {
        // partial sum to 10^6 plus the integral tail
        let (s, q) = (2.5, 2.0);
        let k_max = 1_000_000;
        let mut direct: f64 = (0..k_max).map(|k| (q + k as f64).powf(-s)).sum();
        let edge = q + k_max as f64;
        direct += edge.powf(1.0 - s) / (s - 1.0) + 0.5 * edge.powf(-s);
        assert!((hurwitz_zeta(s, q) - direct).abs() < 1e-12);
    }
}

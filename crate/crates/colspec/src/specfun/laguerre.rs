//! Generalized Laguerre polynomials of fixed order −1/2.

/// L_n^{(−1/2)}(x) by the stable forward three-term recurrence
/// (k+1) L_{k+1} = (2k + 1/2 − x) L_k − (k − 1/2) L_{k−1}.
pub fn laguerre(n: usize, x: f64) -> f64 {
    const ALPHA: f64 = -0.5;
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0_f64;
    let mut l = 1.0 + ALPHA - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + ALPHA - x) * l - (kf + ALPHA) * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Iterator-style helper: fills `out` with L_0 … L_{out.len()−1} at `x` in a
/// single recurrence sweep (the series evaluators need all orders anyway).
pub(crate) fn laguerre_all(x: f64, out: &mut [f64]) {
    const ALPHA: f64 = -0.5;
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = 1.0 + ALPHA - x;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0 + ALPHA - x) * out[k] - (kf + ALPHA) * out[k - 1]) / (kf + 1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_is_one() {
        for x in [0.0, 0.5, 2.0, 17.0] {
            assert_eq!(laguerre(0, x), 1.0);
        }
    }

    #[test]
    fn order_one_closed_form() {
        // L_1^{(α)}(x) = 1 + α − x
        assert_eq!(laguerre(1, 2.0), 0.5 - 2.0);
        assert_eq!(laguerre(1, 0.0), 0.5);
    }

    #[test]
    fn order_two_closed_form() {
        // L_2^{(−1/2)}(x) = 3/8 − (3/2)x + x²/2
        let v = laguerre(2, 1.0);
        assert!((v - (0.375 - 1.5 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_explicit_coefficients() {
        // explicit expansions for n <= 5, exact to rounding
        let polys: [&[f64]; 6] = [
            &[1.0],
            &[0.5, -1.0],
            &[0.375, -1.5, 0.5],
            &[0.3125, -1.875, 1.25, -1.0 / 6.0],
            &[0.2734375, -2.1875, 2.1875, -7.0 / 12.0, 1.0 / 24.0],
            &[
                0.24609375,
                -2.4609375,
                3.28125,
                -1.3125,
                0.1875,
                -1.0 / 120.0,
            ],
        ];
        for (n, coeffs) in polys.iter().enumerate() {
            for &x in &[0.0, 0.3, 1.0, 2.5, 6.0] {
                let direct: f64 = coeffs
                    .iter()
                    .rev()
                    .fold(0.0_f64, |acc, &c| acc * x + c);
                let rec = laguerre(n, x);
                assert!(
                    (rec - direct).abs() <= 1e-13 * direct.abs().max(1.0),
                    "n={n} x={x}: {rec} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn bulk_sweep_matches_single_evaluations() {
        let mut buf = [0.0; 12];
        laguerre_all(1.7, &mut buf);
        for (n, &v) in buf.iter().enumerate() {
            assert_eq!(v, laguerre(n, 1.7));
        }
    }
}

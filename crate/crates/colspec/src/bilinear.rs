//! Bilinear Laguerre kernel b_n = n! L_n^{(−1/2)}(x0) L_n^{(−1/2)}(x) / Γ(n+1/2)
//! shared by the slowly convergent sums in this crate, together with its
//! closed-form generating function
//!
//!   G(s) = Σ_n b_n sⁿ
//!        = [exp(d₁) + exp(d₂)] / (2√(π(1−s))) ,
//!   d₁ = 2√(x x0)√s/(1+√s) − (√x−√x0)² s/(1−s) ,
//!   d₂ = −(√x+√x0)² s/(1−s) − 2√(x x0)√s/(1+√s) ,
//!
//! which is the α = −1/2 bilinear (Hardy–Hille type) generating function
//! split into its even and odd parts. Two tail integrals built on G turn the
//! O(n^{−3/2})-decaying partial sums into machine-accurate evaluations:
//!
//! - Σ_n b_n/(n+a) = ∫₀¹ t^{a−1} G(t) dt          (density / identity weight)
//! - Σ_n b_n e^{−μ_n r}/(2μ_n) = ∫₀^∞ (4πt)^{−1/2} e^{−r²/(4t) − c₀ t}
//!   G(e^{−2βw t}) dt  with μ_n² = 2βw(n+a) + q²   (Green's-function tail)
//!
//! The second line follows from the subordination formula
//! e^{−μ r}/(2μ) = ∫₀^∞ (4πt)^{−1/2} e^{−r²/(4t) − μ² t} dt.

use crate::quad::{erfc, integrate, integrate_to_inf};
use crate::specfun::laguerre;
use crate::Result;

/// First `n_max` coefficients b_0 … b_{n_max−1}.
pub fn coefficients(x0: f64, x: f64, n_max: usize) -> Vec<f64> {
    let mut l0 = vec![0.0; n_max];
    let mut l = vec![0.0; n_max];
    laguerre::laguerre_all(x0, &mut l0);
    laguerre::laguerre_all(x, &mut l);
    let mut ratio = 1.0 / std::f64::consts::PI.sqrt(); // 0!/Γ(1/2)
    let mut out = Vec::with_capacity(n_max);
    for n in 0..n_max {
        if n > 0 {
            ratio *= n as f64 / (n as f64 - 0.5);
        }
        out.push(ratio * l0[n] * l[n]);
    }
    out
}

/// Closed form of G(s) for 0 ≤ s < 1, evaluated in log-stable form (the two
/// exponents are combined without cancellation; d₁ ≥ d₂ always).
pub fn generating(s: f64, x0: f64, x: f64) -> f64 {
    if s <= 0.0 {
        return 1.0 / std::f64::consts::PI.sqrt();
    }
    let s = s.min(1.0 - 1e-15);
    let sq = s.sqrt();
    let (rx, rx0) = (x.sqrt(), x0.sqrt());
    let cross = 2.0 * rx * rx0 * sq / (1.0 + sq);
    let pole = s / (1.0 - s);
    let d1 = cross - (rx - rx0) * (rx - rx0) * pole;
    let d2 = -(rx + rx0) * (rx + rx0) * pole - cross;
    (d1.exp() + d2.exp()) / (2.0 * (std::f64::consts::PI * (1.0 - s)).sqrt())
}

/// Horner evaluation of the partial generating polynomial Σ_{n<N} b_n sⁿ.
fn partial_poly(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &b| acc * s + b)
}

/// Exact tail of the weighted sum Σ_{n≥N} b_n/(n+a) for the first N =
/// `coeffs.len()` coefficients already summed explicitly:
/// ∫₀¹ t^{a−1} (G(t) − P_N(t)) dt.
pub fn weighted_tail(coeffs: &[f64], a: f64, x0: f64, x: f64, rel_tol: f64) -> Result<f64> {
    // when x ≈ x0 the integrand concentrates in a spike of width ~1/N at
    // t = 1, where the panel error estimate can stop the bisection early;
    // a tight floor on the tolerance keeps the spike fully resolved
    let rel_tol = rel_tol.min(1e-8);
    let diff = |t: f64| generating(t, x0, x) - partial_poly(coeffs, t);
    // G and P_N cancel to the size of the tail, so an absolute tolerance
    // tied to the explicitly summed part keeps the quadrature from chasing
    // the subtraction's rounding noise
    let scale: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(n, &b)| (b / (n as f64 + a)).abs())
        .sum::<f64>()
        .max(1.0 / a);
    let abs_tol = rel_tol * scale;
    // [0, 1/2]: the integrand is O(t^{N+a−1}), smooth
    let i1 = integrate(
        &|t: f64| {
            if t <= 0.0 {
                0.0
            } else {
                t.powf(a - 1.0) * diff(t)
            }
        },
        0.0,
        0.5,
        rel_tol,
        abs_tol,
    )?;
    // [1/2, 1]: substitute t = 1−u² to absorb the (1−t)^{−1/2} edge of G
    let i2 = integrate(
        &|u: f64| {
            let t = 1.0 - u * u;
            2.0 * u * t.powf(a - 1.0) * diff(t)
        },
        0.0,
        0.5f64.sqrt(),
        rel_tol,
        abs_tol,
    )?;
    Ok(i1 + i2)
}

/// Spectral data of the exponential sums: μ_n² = two_beta_w·(n+a) + q².
#[derive(Debug, Clone, Copy)]
pub struct ExpKernel {
    pub two_beta_w: f64,
    pub a: f64,
    pub q: f64,
}

impl ExpKernel {
    pub fn mu(&self, n: usize) -> f64 {
        (self.two_beta_w * (n as f64 + self.a) + self.q * self.q).sqrt()
    }

    /// c₀ = μ_n² − two_beta_w·n, the n-independent part of the exponent.
    fn c0(&self) -> f64 {
        self.two_beta_w * self.a + self.q * self.q
    }

    /// H(r) = Σ_n b_n e^{−μ_n r} / (2 μ_n), r ≥ 0 (for r = 0 the sum still
    /// converges provided x ≠ x0).
    pub fn heat_sum(&self, r: f64, x0: f64, x: f64, rel_tol: f64) -> Result<f64> {
        let c0 = self.c0();
        let tbw = self.two_beta_w;
        integrate_to_inf(
            &|t: f64| {
                if t <= 0.0 {
                    return 0.0;
                }
                let expo = -r * r / (4.0 * t) - c0 * t;
                if expo < -700.0 {
                    return 0.0;
                }
                (4.0 * std::f64::consts::PI * t).sqrt().recip()
                    * expo.exp()
                    * generating((-tbw * t).exp(), x0, x)
            },
            0.0,
            rel_tol,
            1e-300,
        )
    }

    /// H₂(r) = Σ_n b_n e^{−μ_n r} / (2 μ_n²) = ∫_r^∞ H(ρ) dρ, computed as a
    /// single integral after exchanging the order of integration:
    /// ½ ∫₀^∞ erfc(r/(2√t)) e^{−c₀ t} G(e^{−2βw t}) dt.
    pub fn heat_antiderivative(&self, r: f64, x0: f64, x: f64, rel_tol: f64) -> Result<f64> {
        let c0 = self.c0();
        let tbw = self.two_beta_w;
        integrate_to_inf(
            &|t: f64| {
                if t <= 0.0 {
                    return 0.0;
                }
                let damp = -c0 * t;
                if damp < -700.0 {
                    return 0.0;
                }
                0.5 * erfc(r / (2.0 * t.sqrt()))
                    * damp.exp()
                    * generating((-tbw * t).exp(), x0, x)
            },
            0.0,
            rel_tol,
            1e-300,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_match_direct_formula() {
        let x0 = 0.3;
        let x = 1.7;
        let b = coefficients(x0, x, 6);
        let mut gamma_half = std::f64::consts::PI.sqrt();
        let mut fact = 1.0;
        for (n, &bn) in b.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
                gamma_half *= n as f64 - 0.5;
            }
            let direct = fact * laguerre::laguerre(n, x0) * laguerre::laguerre(n, x) / gamma_half;
            assert!(
                (bn - direct).abs() <= 1e-14 * direct.abs().max(1e-10),
                "n={n}: {bn} vs {direct}"
            );
        }
    }

    #[test]
    fn generating_function_matches_partial_sums() {
        // direct 4000-term sums at small s, where truncation is negligible
        for (x0, x) in [(0.0, 0.0), (0.0, 1.0), (0.4, 0.4), (0.3, 2.0), (5.0, 8.0)] {
            let b = coefficients(x0, x, 4000);
            for s in [0.0, 0.1, 0.5, 0.9] {
                let direct = partial_poly(&b, s);
                let closed = generating(s, x0, x);
                assert!(
                    (closed / direct - 1.0).abs() < 1e-10,
                    "x0={x0} x={x} s={s}: {closed} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn weighted_tail_reproduces_slow_partial_sums() {
        // Σ b_n/(n+a): 16 explicit terms + tail integral vs a 2·10⁶-term
        // brute-force sum (n^{−3/2} decay ⇒ ~1e−9 brute-force accuracy)
        let (x0, x, a) = (0.3, 1.2, 0.125);
        let b16 = coefficients(x0, x, 16);
        let explicit: f64 = b16
            .iter()
            .enumerate()
            .map(|(n, &bn)| bn / (n as f64 + a))
            .sum();
        let tail = weighted_tail(&b16, a, x0, x, 1e-12).unwrap();
        let accel = explicit + tail;

        let big = coefficients(x0, x, 2_000_000);
        let brute: f64 = big
            .iter()
            .enumerate()
            .map(|(n, &bn)| bn / (n as f64 + a))
            .sum();
        assert!(
            (accel / brute - 1.0).abs() < 1e-7,
            "accel={accel} brute={brute}"
        );
    }

    #[test]
    fn heat_sum_matches_direct_summation() {
        // Fig 1(a)-like spectral data: β=0.3, w=6, a=0.125, q=1.65
        let k = ExpKernel {
            two_beta_w: 3.6,
            a: 0.125,
            q: 1.65,
        };
        let (x0, x) = (0.15, 0.0003);
        let b = coefficients(x0, x, 300_000);
        for r in [0.15, 0.5, 2.0] {
            let direct: f64 = b
                .iter()
                .enumerate()
                .map(|(n, &bn)| bn * (-k.mu(n) * r).exp() / (2.0 * k.mu(n)))
                .sum();
            let integral = k.heat_sum(r, x0, x, 1e-12).unwrap();
            assert!(
                (integral / direct - 1.0).abs() < 1e-9,
                "r={r}: {integral} vs {direct}"
            );
        }
    }

    #[test]
    fn heat_antiderivative_matches_direct_summation() {
        let k = ExpKernel {
            two_beta_w: 3.6,
            a: 0.125,
            q: 1.65,
        };
        let (x0, x) = (0.15, 0.0003);
        let b = coefficients(x0, x, 300_000);
        for r in [0.15, 1.0] {
            let direct: f64 = b
                .iter()
                .enumerate()
                .map(|(n, &bn)| {
                    let mu = k.mu(n);
                    bn * (-mu * r).exp() / (2.0 * mu * mu)
                })
                .sum();
            let integral = k.heat_antiderivative(r, x0, x, 1e-12).unwrap();
            // erfc carries ~1e−7 relative accuracy
            assert!(
                (integral / direct - 1.0).abs() < 3e-7,
                "r={r}: {integral} vs {direct}"
            );
        }
    }
}

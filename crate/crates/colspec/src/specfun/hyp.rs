//! Confluent hypergeometric functions: Kummer M(a,b,x) and Tricomi U(a,b,x).

use super::gamma::recip_gamma_ln;
use super::{Kahan, SeriesControl};
use crate::{Error, Result};

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Kummer's function M(a,b,x) = Σ_k (a)_k x^k / ((b)_k k!) by compensated
/// forward term recurrence. Terminates exactly when a is a non-positive
/// integer (polynomial case).
pub fn kummer_m(a: f64, b: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    if is_non_positive_integer(b) {
        return Err(Error::GammaPole(b));
    }
    let mut sum = Kahan::default();
    sum.add(1.0);
    let mut term = 1.0_f64;
    let mut small_streak = 0usize;
    for k in 0..control.max_terms() {
        let kf = k as f64;
        let num = a + kf;
        if num == 0.0 {
            // polynomial case: (a)_k hit zero, the series terminates exactly
            return Ok(sum.value());
        }
        term *= num * x / ((b + kf) * (kf + 1.0));
        sum.add(term);
        // threshold against the running sum; the tiny absolute floor keeps
        // the test meaningful if the sum passes through zero
        let thresh = control.rel_tol() * sum.value().abs().max(f64::MIN_POSITIVE);
        if term.abs() <= thresh {
            small_streak += 1;
            if small_streak >= control.consecutive_small() {
                return Ok(sum.value());
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "kummer_m",
        max_terms: control.max_terms(),
        last_rel: term.abs() / sum.value().abs().max(f64::MIN_POSITIVE),
    })
}

/// Tricomi's function U(a,b,x) with a reduced-accuracy marker for the
/// near-integer-b limit path.
#[derive(Debug, Clone, Copy)]
pub struct UEval {
    pub value: f64,
    pub reduced_accuracy: bool,
}

/// U(a,b,x) for x > 0 via the two-M connection formula for non-integer b,
/// switching to the Poincaré large-x asymptotic expansion where that is the
/// more accurate route. Near-integer b (within 1e−6) is handled by
/// Richardson-averaging evaluations at b ± 1e−4.
pub fn tricomi_u(a: f64, b: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    tricomi_u_full(a, b, x, control).map(|u| u.value)
}

pub fn tricomi_u_full(a: f64, b: f64, x: f64, control: &SeriesControl) -> Result<UEval> {
    if !(x > 0.0) {
        return Err(Error::Unsupported(format!(
            "tricomi_u requires x > 0, got {x}"
        )));
    }
    if a == 0.0 {
        return Ok(UEval {
            value: 1.0,
            reduced_accuracy: false,
        });
    }
    if x > 30.0_f64.max(10.0 * a.abs()) {
        return Ok(UEval {
            value: u_asymptotic(a, b, x, control)?,
            reduced_accuracy: false,
        });
    }
    let b_round = b.round();
    if (b - b_round).abs() < 1e-6 {
        // Richardson average: U is smooth in b away from the removable
        // integer-b singularity of the connection formula, and the average
        // of b0 ± δ cancels the leading O(1/(b−int)) blow-up.
        let delta = 1e-4;
        let avg = |d: f64| -> Result<f64> {
            let hi = u_connection(a, b_round + d, x, control)?;
            let lo = u_connection(a, b_round - d, x, control)?;
            Ok(0.5 * (hi + lo))
        };
        let v1 = avg(delta)?;
        let v2 = avg(2.0 * delta)?;
        let scale = v1.abs().max(f64::MIN_POSITIVE);
        if (v1 - v2).abs() > 1e-5 * scale {
            return Err(Error::Unsupported(format!(
                "near-integer-b limit failed its consistency check at b={b}: {v1:e} vs {v2:e}"
            )));
        }
        return Ok(UEval {
            value: v1,
            reduced_accuracy: true,
        });
    }
    Ok(UEval {
        value: u_connection(a, b, x, control)?,
        reduced_accuracy: false,
    })
}

/// Standard connection formula (non-integer b):
/// U = Γ(1−b)/Γ(a−b+1) M(a,b,x) + Γ(b−1)/Γ(a) x^{1−b} M(a−b+1,2−b,x),
/// assembled in signed-log form so the Γ ratios never overflow.
fn u_connection(a: f64, b: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    let g1b = super::gamma::ln_gamma(1.0 - b)?;
    let gb1 = super::gamma::ln_gamma(b - 1.0)?;

    // The two M terms cancel to roughly e^{-x} of their size, so truncation
    // error in either M is amplified by e^x in U. Run the inner series to
    // machine precision regardless of the caller's tolerance; the factorial
    // decay past the term hump (k ≈ x) makes the extra cost negligible.
    let control = &SeriesControl::new(
        control.max_terms().max(400),
        control.rel_tol().min(1e-16),
        control.consecutive_small(),
    )
    .expect("inner tolerance policy is valid by construction");

    // 1/Γ at a pole contributes an exact zero term.
    let term1 = match recip_gamma_ln(a - b + 1.0) {
        Some(rg) => {
            let m = kummer_m(a, b, x, control)?;
            if m == 0.0 {
                None
            } else {
                Some((
                    g1b.ln_abs + rg.ln_abs + m.abs().ln(),
                    g1b.sign * rg.sign * m.signum(),
                ))
            }
        }
        None => None,
    };
    let term2 = match recip_gamma_ln(a) {
        Some(rg) => {
            let m = kummer_m(a - b + 1.0, 2.0 - b, x, control)?;
            if m == 0.0 {
                None
            } else {
                Some((
                    gb1.ln_abs + rg.ln_abs + (1.0 - b) * x.ln() + m.abs().ln(),
                    gb1.sign * rg.sign * m.signum(),
                ))
            }
        }
        None => None,
    };

    Ok(match (term1, term2) {
        (None, None) => 0.0,
        (Some((l, s)), None) | (None, Some((l, s))) => s * l.exp(),
        (Some((l1, s1)), Some((l2, s2))) => {
            let m = l1.max(l2);
            m.exp() * (s1 * (l1 - m).exp() + s2 * (l2 - m).exp())
        }
    })
}

/// Poincaré expansion U(a,b,x) ~ x^{−a} Σ_k (a)_k (a−b+1)_k / (k! (−x)^k),
/// truncated at the smallest term.
fn u_asymptotic(a: f64, b: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    let mut sum = Kahan::default();
    sum.add(1.0);
    let mut term = 1.0_f64;
    let mut prev_abs = f64::INFINITY;
    for k in 0..control.max_terms() {
        let kf = k as f64;
        let next = term * (a + kf) * (a - b + 1.0 + kf) / ((kf + 1.0) * (-x));
        if next.abs() >= prev_abs {
            // divergent tail reached; stop at the smallest term
            break;
        }
        term = next;
        prev_abs = term.abs();
        sum.add(term);
        if term.abs() <= control.rel_tol() * sum.value().abs() {
            break;
        }
    }
    Ok((-a * x.ln()).exp() * sum.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn kummer_at_zero_is_one() {
        assert_eq!(kummer_m(0.3, 0.5, 0.0, &ctl()).unwrap(), 1.0);
        assert_eq!(kummer_m(-2.0, 1.7, 0.0, &ctl()).unwrap(), 1.0);
    }

    #[test]
    fn kummer_equal_parameters_give_exp() {
        let v = kummer_m(1.0, 1.0, 1.0, &ctl()).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn kummer_matches_high_precision_oracle() {
        // 200-term exact-rational partial sum of M(1/8, 1/2, 2)
        let oracle = 2.231734971369731058866746;
        let v = kummer_m(0.125, 0.5, 2.0, &ctl()).unwrap();
        assert!((v / oracle - 1.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn kummer_rejects_non_positive_integer_b() {
        assert!(matches!(
            kummer_m(0.5, 0.0, 1.0, &ctl()),
            Err(Error::GammaPole(_))
        ));
        assert!(matches!(
            kummer_m(0.5, -2.0, 1.0, &ctl()),
            Err(Error::GammaPole(_))
        ));
    }

    #[test]
    fn kummer_polynomial_case_terminates_exactly() {
        // M(−2, 1/2, x) = 1 − 4x + (4/3)x², even with a tiny term budget
        let tight = SeriesControl::new(5, 1e-10, 3).unwrap();
        let x = 1.75;
        let v = kummer_m(-2.0, 0.5, x, &tight).unwrap();
        let exact = 1.0 - 4.0 * x + 4.0 / 3.0 * x * x;
        assert!((v - exact).abs() < 1e-13 * exact.abs());
    }

    #[test]
    fn kummer_non_convergence_reports() {
        let tiny = SeriesControl::new(3, 1e-10, 3).unwrap();
        assert!(matches!(
            kummer_m(0.7, 0.5, 5.0, &tiny),
            Err(Error::NonConvergence { .. })
        ));
    }

    #[test]
    fn tricomi_a_zero_is_one() {
        for x in [0.1, 1.0, 40.0] {
            assert_eq!(tricomi_u(0.0, 0.77, x, &ctl()).unwrap(), 1.0);
        }
    }

    #[test]
    fn tricomi_closed_form_one_two() {
        // U(1,2,x) = 1/x; b=2 exercises the near-integer-b Richardson path
        let u = tricomi_u_full(1.0, 2.0, 4.0, &ctl()).unwrap();
        assert!(u.reduced_accuracy);
        assert!((u.value - 0.25).abs() < 1e-7, "got {}", u.value);
    }

    #[test]
    fn tricomi_small_x_limit() {
        // U(a,b,x) → Γ(1−b)/Γ(a+1−b) as x → 0 for b < 1
        let oracle = 1.23557376277402975696621; // Γ(1/2)/Γ(5/8)
        let v = tricomi_u(0.125, 0.5, 1e-12, &ctl()).unwrap();
        assert!((v / oracle - 1.0).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn tricomi_matches_oracle_at_one() {
        let oracle = 0.9519719567602446431596944; // U(1/8, 1/2, 1)
        let v = tricomi_u(0.125, 0.5, 1.0, &ctl()).unwrap();
        assert!((v / oracle - 1.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn tricomi_branches_agree_at_switchover() {
        // Both branches against high-precision references near the x = 30
        // handoff. The connection formula loses ~e^x of precision to
        // cancellation (≈1e−4 relative at x = 28 in double precision), which
        // is exactly why the asymptotic branch takes over.
        let u28 = 0.657550422875419274079280; // U(1/8, 1/2, 28)
        let u35 = 0.639801313392982624907170; // U(1/8, 1/2, 35)
        let conn = u_connection(0.125, 0.5, 28.0, &ctl()).unwrap();
        assert!((conn / u28 - 1.0).abs() < 1e-3, "conn {conn:e} vs {u28:e}");
        let asym = u_asymptotic(0.125, 0.5, 35.0, &ctl()).unwrap();
        assert!((asym / u35 - 1.0).abs() < 1e-10, "asym {asym:e} vs {u35:e}");
        // the dispatcher picks the asymptotic branch past the switchover
        let v = tricomi_u(0.125, 0.5, 35.0, &ctl()).unwrap();
        assert_eq!(v, asym);
    }

    #[test]
    fn tricomi_rejects_non_positive_x() {
        assert!(tricomi_u(0.5, 0.5, 0.0, &ctl()).is_err());
        assert!(tricomi_u(0.5, 0.5, -1.0, &ctl()).is_err());
    }

    #[test]
    fn kummer_tricomi_wronskian() {
        // M U' − U M' = −Γ(b) x^{−b} e^x / Γ(a), using
        // M'(a,b,x) = (a/b) M(a+1,b+1,x) and U'(a,b,x) = −a U(a+1,b+1,x)
        let c = ctl();
        let b = 0.5;
        for a in [0.06, 0.125, 0.22] {
            for x in [0.05, 0.4, 1.3, 4.0, 9.0] {
                let m = kummer_m(a, b, x, &c).unwrap();
                let u = tricomi_u(a, b, x, &c).unwrap();
                let mp = a / b * kummer_m(a + 1.0, b + 1.0, x, &c).unwrap();
                let up = -a * tricomi_u(a + 1.0, b + 1.0, x, &c).unwrap();
                let lhs = m * up - u * mp;
                let rhs = -crate::specfun::gamma(b).unwrap() * (-b * x.ln() + x).exp()
                    / crate::specfun::gamma(a).unwrap();
                assert!(
                    (lhs / rhs - 1.0).abs() < 1e-8,
                    "a={a} x={x}: {lhs:e} vs {rhs:e}"
                );
            }
        }
    }
}

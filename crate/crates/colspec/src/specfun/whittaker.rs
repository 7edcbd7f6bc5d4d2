//! Whittaker functions M_{κ,μ}(x), W_{κ,μ}(x), their derivatives via
//! contiguous relations, and signed-log / scaled-decimal representations for
//! the growing M branch.

use super::hyp::{kummer_m, tricomi_u};
use super::SeriesControl;
use crate::{Error, Result};

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Signed-logarithm value: sign · exp(ln_abs). `sign == 0` encodes zero.
#[derive(Debug, Clone, Copy)]
pub struct LnVal {
    pub ln_abs: f64,
    pub sign: f64,
}

impl LnVal {
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    fn from_value(v: f64) -> Self {
        if v == 0.0 {
            LnVal {
                ln_abs: f64::NEG_INFINITY,
                sign: 0.0,
            }
        } else {
            LnVal {
                ln_abs: v.abs().ln(),
                sign: v.signum(),
            }
        }
    }
}

/// Scaled decimal representation `mantissa × 10^exp10` with mantissa in
/// [1, 10); the overflow-guard return of the Whittaker evaluators.
#[derive(Debug, Clone, Copy)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub exp10: i32,
}

impl ScaledValue {
    fn from_ln(v: LnVal) -> Self {
        if v.sign == 0.0 {
            return ScaledValue {
                mantissa: 0.0,
                exp10: 0,
            };
        }
        let log10 = v.ln_abs / std::f64::consts::LN_10;
        let exp10 = log10.floor() as i32;
        ScaledValue {
            mantissa: v.sign * 10f64.powf(log10 - exp10 as f64),
            exp10,
        }
    }

    /// Collapse to a plain double; ±∞ if the exponent is out of range.
    pub fn to_f64(&self) -> f64 {
        self.mantissa * 10f64.powi(self.exp10)
    }
}

/// M_{κ,μ}(x) = e^{−x/2} x^{μ+1/2} M(μ−κ+1/2, 1+2μ, x) in signed-log form.
pub fn whittaker_m_ln(kappa: f64, mu: f64, x: f64, control: &SeriesControl) -> Result<LnVal> {
    if !(x > 0.0) {
        return Err(Error::Unsupported(format!(
            "whittaker_m requires x > 0, got {x}"
        )));
    }
    let b = 1.0 + 2.0 * mu;
    if is_non_positive_integer(b) {
        return Err(Error::GammaPole(b));
    }
    let m = kummer_m(mu - kappa + 0.5, b, x, control)?;
    let mut v = LnVal::from_value(m);
    v.ln_abs += -0.5 * x + (mu + 0.5) * x.ln();
    Ok(v)
}

/// W_{κ,μ}(x) = e^{−x/2} x^{μ+1/2} U(μ−κ+1/2, 1+2μ, x) in signed-log form.
pub fn whittaker_w_ln(kappa: f64, mu: f64, x: f64, control: &SeriesControl) -> Result<LnVal> {
    if !(x > 0.0) {
        return Err(Error::Unsupported(format!(
            "whittaker_w requires x > 0, got {x}"
        )));
    }
    let u = tricomi_u(mu - kappa + 0.5, 1.0 + 2.0 * mu, x, control)?;
    let mut v = LnVal::from_value(u);
    v.ln_abs += -0.5 * x + (mu + 0.5) * x.ln();
    Ok(v)
}

fn collapse(v: LnVal) -> Result<f64> {
    let plain = v.value();
    if plain.is_finite() {
        Ok(plain)
    } else {
        let s = ScaledValue::from_ln(v);
        Err(Error::Overflow {
            mantissa: s.mantissa,
            exp10: s.exp10,
        })
    }
}

/// M_{κ,μ}(x) as a plain double. When the result exceeds the floating
/// range, the error carries the scaled (mantissa, exponent) representation;
/// `whittaker_m_scaled` returns that form directly.
pub fn whittaker_m(kappa: f64, mu: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    collapse(whittaker_m_ln(kappa, mu, x, control)?)
}

pub fn whittaker_m_scaled(
    kappa: f64,
    mu: f64,
    x: f64,
    control: &SeriesControl,
) -> Result<ScaledValue> {
    Ok(ScaledValue::from_ln(whittaker_m_ln(kappa, mu, x, control)?))
}

/// W_{κ,μ}(x) as a plain double (same overflow contract as `whittaker_m`).
pub fn whittaker_w(kappa: f64, mu: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    collapse(whittaker_w_ln(kappa, mu, x, control)?)
}

pub fn whittaker_w_scaled(
    kappa: f64,
    mu: f64,
    x: f64,
    control: &SeriesControl,
) -> Result<ScaledValue> {
    Ok(ScaledValue::from_ln(whittaker_w_ln(kappa, mu, x, control)?))
}

/// d/dx M_{κ,μ}(x) from the κ-contiguous relation
/// x M′_{κ,μ}(x) = (x/2 − κ) M_{κ,μ}(x) + (1/2 + μ + κ) M_{κ+1,μ}(x).
pub fn whittaker_m_prime(kappa: f64, mu: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    let m = whittaker_m(kappa, mu, x, control)?;
    let m_up = whittaker_m(kappa + 1.0, mu, x, control)?;
    Ok(((0.5 * x - kappa) * m + (0.5 + mu + kappa) * m_up) / x)
}

/// d/dx W_{κ,μ}(x) from the κ-contiguous relation
/// x W′_{κ,μ}(x) = (κ − x/2) W_{κ,μ}(x) − [μ² − (κ−1/2)²] W_{κ−1,μ}(x).
pub fn whittaker_w_prime(kappa: f64, mu: f64, x: f64, control: &SeriesControl) -> Result<f64> {
    let w = whittaker_w(kappa, mu, x, control)?;
    let w_down = whittaker_w(kappa - 1.0, mu, x, control)?;
    Ok(((kappa - 0.5 * x) * w - (mu * mu - (kappa - 0.5) * (kappa - 0.5)) * w_down) / x)
}

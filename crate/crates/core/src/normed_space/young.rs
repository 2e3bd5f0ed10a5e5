//! Young functions and the Luxemburg norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Convex, nondecreasing `phi` on `[0, inf)` with `phi(0) = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum YoungFunction {
    /// `phi(t) = t^p`
    Power { p: f64 },
    /// `phi(t) = c_a t^a + c_b t^b`
    PowerSum { a: f64, b: f64, c_a: f64, c_b: f64 },
}

impl YoungFunction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            YoungFunction::Power { p } => {
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "Young power p = {p} must be finite and >= 1"
                    )));
                }
            }
            YoungFunction::PowerSum { a, b, c_a, c_b } => {
                if !(a >= 1.0 && b >= 1.0 && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "Young exponents ({a}, {b}) must be finite and >= 1"
                    )));
                }
                if !(c_a >= 0.0 && c_b >= 0.0) || (c_a == 0.0 && c_b == 0.0) {
                    return Err(Error::InvalidParameter(
                        "Young coefficients must be nonnegative and not both zero".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        match *self {
            YoungFunction::Power { p } => t.powf(p),
            YoungFunction::PowerSum { a, b, c_a, c_b } => c_a * t.powf(a) + c_b * t.powf(b),
        }
    }

    /// Right derivative.
    pub fn derivative(&self, t: f64) -> f64 {
        let d = |e: f64| if e == 1.0 { 1.0 } else { e * t.powf(e - 1.0) };
        match *self {
            YoungFunction::Power { p } => d(p),
            YoungFunction::PowerSum { a, b, c_a, c_b } => c_a * d(a) + c_b * d(b),
        }
    }

    /// `phi^{-1}(y)` for `y > 0`, by bisection.
    pub fn inverse(&self, y: f64) -> f64 {
        if let YoungFunction::Power { p } = *self {
            return y.powf(1.0 / p);
        }
        let mut hi = 1.0;
        while self.value(hi) < y {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.value(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-16 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Whether `phi` is differentiable at 0, which makes the Luxemburg norm
    /// smooth away from the origin.
    pub fn is_smooth(&self) -> bool {
        match *self {
            YoungFunction::Power { p } => p > 1.0,
            YoungFunction::PowerSum { a, b, c_a, c_b } => {
                (a > 1.0 || c_a == 0.0) && (b > 1.0 || c_b == 0.0)
            }
        }
    }
}

/// `inf { lambda > 0 : sum phi(|x_i| / lambda) <= 1 }` for moduli `abs`.
pub fn luxemburg(phi: &YoungFunction, abs: &[f64]) -> f64 {
    let top = abs.iter().fold(0.0f64, |a, &v| a.max(v));
    if top == 0.0 {
        return 0.0;
    }
    let n = abs.len() as f64;
    let modular = |lambda: f64| abs.iter().map(|&v| phi.value(v / lambda)).sum::<f64>();
    // sum phi(|x_i|/lambda) is decreasing in lambda; the root lies in
    // [top / phi^{-1}(n), top / phi^{-1}(1/n)].
    let mut lo = top / phi.inverse(n);
    let mut hi = top / phi.inverse(1.0 / n);
    // Rounding in phi^{-1} can shave the bracket; widen until it straddles.
    while modular(lo) < 1.0 {
        lo *= 0.5;
    }
    while modular(hi) > 1.0 {
        hi *= 2.0;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if modular(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_function_gives_lp() {
        let phi = YoungFunction::Power { p: 3.0 };
        let x = [1.0, 2.0, 0.5];
        let lp = x.iter().map(|v: &f64| v.powi(3)).sum::<f64>().cbrt();
        assert!((luxemburg(&phi, &x) - lp).abs() < 1e-12 * lp);
    }

    #[test]
    fn modular_equals_one_at_root() {
        let phi = YoungFunction::PowerSum {
            a: 1.5,
            b: 4.0,
            c_a: 0.3,
            c_b: 2.0,
        };
        let x = [0.7, 3.0, 1.1, 0.0];
        let l = luxemburg(&phi, &x);
        let m: f64 = x.iter().map(|v| phi.value(v / l)).sum();
        assert!((m - 1.0).abs() < 1e-10, "{m}");
    }

    #[test]
    fn inverse_round_trips() {
        let phi = YoungFunction::PowerSum {
            a: 1.0,
            b: 2.0,
            c_a: 1.0,
            c_b: 1.0,
        };
        for y in [1e-3, 0.5, 1.0, 7.0] {
            assert!((phi.value(phi.inverse(y)) - y).abs() < 1e-12 * y.max(1.0));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(YoungFunction::Power { p: 0.5 }.validate().is_err());
        assert!(YoungFunction::PowerSum {
            a: 1.0,
            b: 2.0,
            c_a: 0.0,
            c_b: 0.0
        }
        .validate()
        .is_err());
    }
}

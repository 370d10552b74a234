//! The approximation parameter and the hop budgets derived from it.

use std::fmt;
use std::str::FromStr;

use crate::error::ParamError;

/// Approximation parameter `ε > 0`.
///
/// Values written as fractions (`"1/3"`) or finite decimals (`"0.25"`) are kept
/// as exact rationals, so hop budgets like `⌈4k/ε⌉` are computed with integer
/// arithmetic. Values built from a bare `f64` fall back to a floating-point
/// ceiling that snaps to an integer within a relative `1e-9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon {
    value: f64,
    /// `(numerator, denominator)` in lowest terms when known exactly.
    ratio: Option<(u64, u64)>,
}

const SNAP_TOLERANCE: f64 = 1e-9;

impl Epsilon {
    pub fn new(value: f64) -> Result<Self, ParamError> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(ParamError::Epsilon(value.to_string()));
        }
        Ok(Self { value, ratio: None })
    }

    /// `ε = num / den`.
    pub fn ratio(num: u64, den: u64) -> Result<Self, ParamError> {
        if num == 0 || den == 0 {
            return Err(ParamError::Epsilon(format!("{num}/{den}")));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        Ok(Self {
            value: num as f64 / den as f64,
            ratio: Some((num, den)),
        })
    }

    /// `ε = 1/t`.
    pub fn inverse(t: u64) -> Result<Self, ParamError> {
        Self::ratio(1, t)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_ratio(&self) -> Option<(u64, u64)> {
        self.ratio
    }

    /// `⌈c / ε⌉`, at least 1.
    pub fn hops(&self, c: u64) -> usize {
        let h = match self.ratio {
            Some((num, den)) => {
                let top = c as u128 * den as u128;
                top.div_ceil(num as u128) as f64
            }
            None => {
                let x = c as f64 / self.value;
                let r = x.round();
                if (x - r).abs() <= SNAP_TOLERANCE * r.max(1.0) {
                    r
                } else {
                    x.ceil()
                }
            }
        };
        (h as usize).max(1)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ratio {
            Some((n, 1)) => write!(f, "{n}"),
            Some((n, d)) => write!(f, "{n}/{d}"),
            None => write!(f, "{}", self.value),
        }
    }
}

impl FromStr for Epsilon {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParamError::Epsilon(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: u64 = num.trim().parse().map_err(|_| bad())?;
            let den: u64 = den.trim().parse().map_err(|_| bad())?;
            return Self::ratio(num, den);
        }
        // Plain decimals: read digits exactly so "0.1" becomes 1/10.
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        let digits_only = |x: &str| x.bytes().all(|b| b.is_ascii_digit());
        if !int.is_empty() && digits_only(int) && digits_only(frac) && frac.len() <= 18 {
            let den = 10u64.pow(frac.len() as u32);
            let num = int
                .parse::<u64>()
                .ok()
                .and_then(|i| i.checked_mul(den))
                .and_then(|i| i.checked_add(if frac.is_empty() { 0 } else { frac.parse().ok()? }));
            if let Some(num) = num {
                return Self::ratio(num, den);
            }
        }
        let value: f64 = s.parse().map_err(|_| bad())?;
        Self::new(value)
    }
}

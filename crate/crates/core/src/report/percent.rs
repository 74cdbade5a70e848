use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::ReportError;

/// A percentage with exactly two fractional digits, stored in hundredths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Percent(u32);

impl Percent {
    pub const ZERO: Percent = Percent(0);
    pub const HUNDRED: Percent = Percent(10_000);

    pub fn from_hundredths(hundredths: u32) -> Self {
        Self(hundredths)
    }

    pub fn hundredths(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 100.0
    }
}

/// `floor(10000 * n / total) / 100`, in integer arithmetic.
pub fn percent_trunc(n: u64, total: u64) -> Result<Percent, ReportError> {
    if total == 0 {
        return Err(ReportError::TotalZero);
    }
    if n > total {
        return Err(ReportError::CountExceedsTotal { n, total });
    }
    // n <= total, so the quotient is at most 10_000
    Ok(Percent((u128::from(n) * 10_000 / u128::from(total)) as u32))
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

impl FromStr for Percent {
    type Err = ReportError;

    /// Accepts `53`, `11.1` or `16.39`; more than two decimals is an error.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ReportError::InvalidPercent(s.to_owned());
        let s_trim = s.trim();
        let (int, frac) = s_trim.split_once('.').unwrap_or((s_trim, ""));
        if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if frac.len() > 2 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: u32 = int.parse().map_err(|_| bad())?;
        let frac_val: u32 = match frac.len() {
            0 => 0,
            1 => frac.parse::<u32>().map_err(|_| bad())? * 10,
            _ => frac.parse().map_err(|_| bad())?,
        };
        let value = whole
            .checked_mul(100)
            .and_then(|w| w.checked_add(frac_val))
            .ok_or_else(bad)?;
        if value > 10_000 {
            return Err(bad());
        }
        Ok(Self(value))
    }
}

impl Serialize for Percent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.as_f64())
    }
}

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A time value quantized to the millisecond grid.
///
/// Every timestamp in the toolkit (turn onsets, durations, collar widths,
/// sub-segment boundaries) is quantized to whole milliseconds on ingestion.
/// Interval algebra and error accounting then run on exact integers, so a
/// 1 ms frame-grid rasterization agrees with the interval computations
/// without floating-point slop. RTTM's conventional 3-decimal rendering is
/// the same grid.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Ms(pub i64);

impl Ms {
    pub const ZERO: Ms = Ms(0);

    /// Quantize a value in seconds to the nearest millisecond.
    pub fn from_seconds(secs: f64) -> Ms {
        Ms((secs * 1000.0).round() as i64)
    }

    pub fn seconds(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn min(self, other: Ms) -> Ms {
        Ms(self.0.min(other.0))
    }

    pub fn max(self, other: Ms) -> Ms {
        Ms(self.0.max(other.0))
    }
}

impl Add for Ms {
    type Output = Ms;
    fn add(self, rhs: Ms) -> Ms {
        Ms(self.0 + rhs.0)
    }
}

impl AddAssign for Ms {
    fn add_assign(&mut self, rhs: Ms) {
        self.0 += rhs.0;
    }
}

impl Sub for Ms {
    type Output = Ms;
    fn sub(self, rhs: Ms) -> Ms {
        Ms(self.0 - rhs.0)
    }
}

impl SubAssign for Ms {
    fn sub_assign(&mut self, rhs: Ms) {
        self.0 -= rhs.0;
    }
}

impl Neg for Ms {
    type Output = Ms;
    fn neg(self) -> Ms {
        Ms(-self.0)
    }
}

impl Mul<i64> for Ms {
    type Output = Ms;
    fn mul(self, rhs: i64) -> Ms {
        Ms(self.0 * rhs)
    }
}

impl Sum for Ms {
    fn sum<I: Iterator<Item = Ms>>(iter: I) -> Ms {
        Ms(iter.map(|m| m.0).sum())
    }
}

impl fmt::Display for Ms {
    /// Renders as seconds with exactly three decimals, e.g. `1.200`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        write!(f, "{}{}.{:03}", sign, abs / 1000, abs % 1000)
    }
}

impl fmt::Debug for Ms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ms", self.0)
    }
}

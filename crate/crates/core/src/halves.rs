use core::cmp::Ordering;
use core::fmt;
use core::ops::Sub;

/// An exact multiple of one half, stored as its doubled integer value.
///
/// Medians of an even number of counts land on half-integers, so every
/// median and deviation in a spectrum is representable without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Halves(i64);

impl Halves {
    pub const ZERO: Halves = Halves(0);

    pub const fn from_int(value: i64) -> Self {
        Halves(value * 2)
    }

    /// The midpoint of two integers.
    pub const fn midpoint(a: i64, b: i64) -> Self {
        Halves(a + b)
    }

    pub const fn from_doubled(doubled: i64) -> Self {
        Halves(doubled)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Compares against an arbitrary float threshold without rounding the
    /// stored value.
    pub fn cmp_f64(self, other: f64) -> Ordering {
        (self.0 as f64)
            .partial_cmp(&(other * 2.0))
            .unwrap_or(Ordering::Less)
    }

    /// Parses the one-decimal rendering produced by `Display`
    /// (`"8.0"`, `"-0.5"`, `"12"`). Returns `None` for anything that is not
    /// a whole or half value.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let int: i64 = int_part.parse().ok()?;
        let frac = frac_part.trim_end_matches('0');
        let half = match frac {
            "" => 0,
            "5" => 1,
            _ => return None,
        };
        let magnitude = int.checked_mul(2)?.checked_add(half)?;
        Some(Halves(if negative { -magnitude } else { magnitude }))
    }
}

impl Sub for Halves {
    type Output = Halves;

    fn sub(self, rhs: Halves) -> Halves {
        Halves(self.0 - rhs.0)
    }
}

impl fmt::Display for Halves {
    /// Always one decimal place: `8.0`, `2.5`, `-0.5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let magnitude = self.0.unsigned_abs();
        let tenths = if magnitude % 2 == 1 { 5 } else { 0 };
        write!(f, "{sign}{}.{tenths}", magnitude / 2)
    }
}

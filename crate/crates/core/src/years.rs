use core::fmt;
use core::ops::RangeInclusive;

use crate::{Error, Result};

/// A calendar year. Publication years and referenced publication years share it.
pub type Year = i32;

/// Inclusive range of calendar years, always with `min <= max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearRange {
    min: Year,
    max: Year,
}

impl YearRange {
    pub fn new(min: Year, max: Year) -> Result<Self> {
        if min > max {
            return Err(Error::InvertedWindow { min, max });
        }
        Ok(YearRange { min, max })
    }

    /// The default historical window, 1900 to 1970.
    pub const fn historical() -> Self {
        YearRange {
            min: 1900,
            max: 1970,
        }
    }

    /// Plausible years for any dated bibliographic item, given the current year.
    pub const fn validity(current_year: Year) -> Self {
        YearRange {
            min: 1500,
            max: current_year + 1,
        }
    }

    pub const fn start(&self) -> Year {
        self.min
    }

    pub const fn end(&self) -> Year {
        self.max
    }

    pub const fn contains(&self, year: Year) -> bool {
        year >= self.min && year <= self.max
    }

    /// Number of years covered.
    pub const fn len(&self) -> usize {
        (self.max - self.min) as usize + 1
    }

    pub const fn is_empty(&self) -> bool {
        false
    }

    pub fn years(&self) -> RangeInclusive<Year> {
        self.min..=self.max
    }

    pub fn shifted(&self, by: Year) -> Self {
        YearRange {
            min: self.min + by,
            max: self.max + by,
        }
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.min, self.max)
    }
}

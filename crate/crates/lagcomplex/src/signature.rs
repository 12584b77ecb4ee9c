//! Ambient dimensions of the target space and the time cube.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::parity::Parity;

/// The dimensions `n|m` of the target space and `r|s` of the time cube.
///
/// Coordinates are indexed `1..=n+m` with the even block first; time
/// variables are indexed `1..=r+s`, again even block first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    /// Even coordinates.
    pub n: u16,
    /// Odd coordinates.
    pub m: u16,
    /// Even time variables.
    pub r: u16,
    /// Odd time variables.
    pub s: u16,
}

impl Signature {
    pub fn new(n: u16, m: u16, r: u16, s: u16) -> Signature {
        Signature { n, m, r, s }
    }

    pub fn coords(&self) -> u16 {
        self.n + self.m
    }

    pub fn times(&self) -> u16 {
        self.r + self.s
    }

    pub fn coord_parity(&self, index: u16) -> Parity {
        if index <= self.n {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn time_parity(&self, index: u16) -> Parity {
        if index <= self.r {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn check_coord(&self, index: u16) -> Result<()> {
        if index == 0 || index > self.coords() {
            Err(Error::CoordOutOfRange { index, max: self.coords() })
        } else {
            Ok(())
        }
    }

    pub fn check_time(&self, index: u16) -> Result<()> {
        if index == 0 || index > self.times() {
            Err(Error::TimeOutOfRange { index, max: self.times() })
        } else {
            Ok(())
        }
    }

    /// The signature with one more even time variable.
    ///
    /// The new even time takes index `r+1`; existing odd indices shift up.
    pub fn lift(&self) -> Signature {
        Signature { n: self.n, m: self.m, r: self.r + 1, s: self.s }
    }

    /// Iterator over all coordinate indices.
    pub fn coord_range(&self) -> impl Iterator<Item = u16> {
        1..=self.coords()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{} {}|{}", self.n, self.m, self.r, self.s)
    }
}

/// Parses the `n|m r|s` notation used by the `sig` header and `--sig` flag.
impl FromStr for Signature {
    type Err = &'static str;

    fn from_str(text: &str) -> core::result::Result<Signature, &'static str> {
        const MSG: &str = "expected signature of the form `n|m r|s`";
        let mut pairs = text.split_whitespace();
        let coords = pairs.next().ok_or(MSG)?;
        let times = pairs.next().ok_or(MSG)?;
        if pairs.next().is_some() {
            return Err(MSG);
        }
        let parse_pair = |p: &str| -> core::result::Result<(u16, u16), &'static str> {
            let (a, b) = p.split_once('|').ok_or(MSG)?;
            Ok((a.parse().map_err(|_| MSG)?, b.parse().map_err(|_| MSG)?))
        };
        let (n, m) = parse_pair(coords)?;
        let (r, s) = parse_pair(times)?;
        Ok(Signature { n, m, r, s })
    }
}

//! Z/2 grading.

use core::ops::Add;

/// Parity of a coordinate, time variable, or homogeneous expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity from a count of odd factors.
    pub fn from_count(count: usize) -> Parity {
        if count.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// 0 or 1, as used in sign exponents.
    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

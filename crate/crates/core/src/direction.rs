//! Projection directions: coprime integer pairs (p, q).

use crate::error::CodecError;
use num_integer::Integer;

/// A projection direction `(p, q)` with `gcd(|p|, |q|) = 1`.
///
/// `q` is the step across rows and `p` the step across columns of the line
/// of cells summed into one bin; `(0, 0)` is rejected (gcd 0). Both axes
/// admit negative steps.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    p: i32,
    q: i32,
}

impl Direction {
    pub fn new(p: i32, q: i32) -> Result<Self, CodecError> {
        let g = (p.unsigned_abs()).gcd(&q.unsigned_abs());
        if g != 1 {
            return Err(CodecError::Parameter(format!(
                "direction ({p},{q}) is not coprime (gcd {g})"
            )));
        }
        Ok(Direction { p, q })
    }

    pub fn p(&self) -> i32 {
        self.p
    }

    pub fn q(&self) -> i32 {
        self.q
    }
}

impl std::fmt::Debug for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

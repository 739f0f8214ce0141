use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which diagram algebra we work in: the big one with multiple edges
/// allowed, or the quotient where multi-edge diagrams are zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Quotient {
    Dbar,
    D,
}

/// Ambient data every diagram carries: strand count `m`, dimension `n`,
/// and the quotient choice.  All orientation rules depend only on the
/// parity of `n`; all degrees depend on `n` itself.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Context {
    pub m: usize,
    pub n: usize,
    pub quotient: Quotient,
}

impl Context {
    pub fn new(m: usize, n: usize, quotient: Quotient) -> Result<Self> {
        if m < 1 {
            return Err(Error::Domain("strand count m must be >= 1".into()));
        }
        if n < 3 {
            return Err(Error::Domain("ambient dimension n must be >= 3".into()));
        }
        Ok(Context { m, n, quotient })
    }

    /// Parity of the ambient dimension; decides the orientation model.
    pub fn odd(&self) -> bool {
        self.n % 2 == 1
    }

    pub fn with_quotient(self, quotient: Quotient) -> Self {
        Context { quotient, ..self }
    }
}

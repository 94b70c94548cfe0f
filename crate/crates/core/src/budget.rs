use crate::{Error, Result};

/// Hard cap on the size of an exhaustive enumeration.
///
/// Operations that enumerate exponentially many objects estimate their work
/// up front and fail with [`Error::BudgetExceeded`] instead of truncating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub limit: u128,
}

impl Budget {
    pub const fn new(limit: u128) -> Self {
        Self { limit }
    }

    pub const UNLIMITED: Budget = Budget { limit: u128::MAX };

    pub fn check(&self, what: &'static str, required: u128) -> Result<()> {
        if required > self.limit {
            return Err(Error::BudgetExceeded {
                what,
                required,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

impl Default for Budget {
    /// 10^8 elementary steps.
    fn default() -> Self {
        Budget::new(100_000_000)
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn saturating_pow(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

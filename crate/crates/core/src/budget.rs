//! Enumeration limits shared by all oracles.

use crate::error::{Error, Result};

/// Maximum number of candidates (or search nodes) an oracle may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(1 << 24);

    pub fn limit(self) -> u64 {
        self.0
    }

    /// Fails with `TooLarge` unless `needed` candidates fit.
    pub fn check(self, what: &str, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::too_large(what, needed, self.0))
        } else {
            Ok(())
        }
    }

    pub(crate) fn meter(self, what: &'static str) -> Meter {
        Meter {
            used: 0,
            limit: self.0,
            what,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// Counts visited nodes of a search whose size is not known up front.
#[derive(Debug)]
pub(crate) struct Meter {
    used: u64,
    limit: u64,
    what: &'static str,
}

impl Meter {
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::too_large(
                self.what,
                format!("more than {} search nodes", self.limit),
                self.limit,
            ))
        } else {
            Ok(())
        }
    }
}

/// Binomial coefficient in u128, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of vectors of length `n` with weight at most `w`, saturating.
pub fn ball_size(n: u64, w: u64) -> u128 {
    (0..=w.min(n)).fold(0u128, |acc, i| acc.saturating_add(binomial(n, i)))
}

/// `base^exp` in u128, saturating.
pub fn saturating_pow(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

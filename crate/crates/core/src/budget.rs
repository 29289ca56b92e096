//! Work limits for the exponential searches.
//!
//! Every search counts the units it produces or visits against a [`Budget`]
//! and fails with [`Error::BudgetExceeded`] instead of returning a truncated
//! result.

use std::cell::Cell;

use crate::error::{Error, Result};

/// Environment variable overriding every default limit.
pub const BUDGET_ENV: &str = "OC_BUDGET";

pub const DEFAULT_NODES: u64 = 10_000_000;
pub const DEFAULT_DOWNSETS: u64 = 1_000_000;

/// Reads `OC_BUDGET`, if set to a positive integer.
pub fn env_override() -> Option<u64> {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&v| v > 0)
}

#[derive(Debug)]
pub struct Budget {
    what: &'static str,
    limit: u64,
    used: Cell<u64>,
}

impl Budget {
    pub fn new(what: &'static str, limit: u64) -> Self {
        Self {
            what,
            limit,
            used: Cell::new(0),
        }
    }

    /// Search-node budget with the default limit (or the env override).
    pub fn nodes() -> Self {
        Self::new("search nodes", env_override().unwrap_or(DEFAULT_NODES))
    }

    /// Produced-downset budget with the default limit (or the env override).
    pub fn downsets() -> Self {
        Self::new("downsets", env_override().unwrap_or(DEFAULT_DOWNSETS))
    }

    pub fn unlimited(what: &'static str) -> Self {
        Self::new(what, u64::MAX)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    /// Charges one unit.
    #[inline]
    pub fn tick(&self) -> Result<()> {
        self.charge(1)
    }

    #[inline]
    pub fn charge(&self, units: u64) -> Result<()> {
        let used = self.used.get().saturating_add(units);
        self.used.set(used);
        if used > self.limit {
            Err(Error::BudgetExceeded {
                what: self.what,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

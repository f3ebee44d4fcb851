use std::sync::atomic::{AtomicU64, Ordering};

use crate::Error;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Cap on the number of candidate assignments a single enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub cap: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { cap: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Budget { cap }
    }

    pub(crate) fn meter(self, context: &'static str) -> Meter {
        Meter {
            used: AtomicU64::new(0),
            cap: self.cap,
            context,
        }
    }
}

/// Shared candidate counter; safe to tick from parallel sub-searches.
#[derive(Debug)]
pub(crate) struct Meter {
    used: AtomicU64,
    cap: u64,
    context: &'static str,
}

impl Meter {
    pub(crate) fn tick(&self) -> Result<(), Error> {
        let used = self.used.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.cap {
            Err(Error::BudgetExceeded {
                cap: self.cap,
                context: self.context,
            })
        } else {
            Ok(())
        }
    }

    /// Accounts for `n` candidates at once.
    pub(crate) fn charge(&self, n: u64) -> Result<(), Error> {
        let used = self.used.fetch_add(n, Ordering::Relaxed).saturating_add(n);
        if used > self.cap {
            Err(Error::BudgetExceeded {
                cap: self.cap,
                context: self.context,
            })
        } else {
            Ok(())
        }
    }
}

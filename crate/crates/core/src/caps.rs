//! Resource caps shared by the exponential searches.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A search ran out of budget. The result is withheld, not refuted.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cap exceeded: {what}")]
pub struct CapExceeded {
    pub what: String,
}

impl CapExceeded {
    pub fn new(what: impl Into<String>) -> Self {
        CapExceeded { what: what.into() }
    }
}

/// Bounds for the decision procedure and the table searches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_exists: usize,
    pub max_forall: usize,
    pub max_witness_size: usize,
    pub max_extension_size: usize,
    /// Upper bound on candidates visited by any single enumeration.
    pub max_items: usize,
    pub time_budget: Option<Duration>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_exists: 3,
            max_forall: 2,
            max_witness_size: 9,
            max_extension_size: 36,
            max_items: 5_000_000,
            time_budget: Some(Duration::from_secs(60)),
        }
    }
}

impl Caps {
    pub fn unbounded() -> Self {
        Caps {
            max_exists: usize::MAX,
            max_forall: usize::MAX,
            max_witness_size: usize::MAX,
            max_extension_size: usize::MAX,
            max_items: usize::MAX,
            time_budget: None,
        }
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.max_items, self.time_budget)
    }
}

/// Countdown of work items plus an optional wall-clock deadline.
#[derive(Debug, Clone)]
pub struct Budget {
    remaining: usize,
    deadline: Option<Instant>,
}

impl Budget {
    pub fn new(items: usize, time: Option<Duration>) -> Self {
        Budget {
            remaining: items,
            deadline: time.map(|d| Instant::now() + d),
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            remaining: usize::MAX,
            deadline: None,
        }
    }

    /// Consumes one unit; fails once the count or the clock runs out.
    pub fn tick(&mut self, what: &str) -> Result<(), CapExceeded> {
        if self.remaining == 0 {
            return Err(CapExceeded::new(format!("{what}: item budget exhausted")));
        }
        self.remaining -= 1;
        if self.remaining % 1024 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(CapExceeded::new(format!("{what}: time budget exhausted")));
                }
            }
        }
        Ok(())
    }
}

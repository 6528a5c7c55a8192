//! Exact search used to certify the approximation algorithms.
//!
//! Every search runs under a [`SearchBudget`]. Exhausting it yields
//! [`OracleOutcome::Unknown`], never a guess.

mod demand;
mod geometric;

pub use demand::{exact_demand_bp, pack_into_bins, single_bin_feasible, Optimum};
pub use geometric::{geometric_feasible, placements_are_disjoint, RectPlacement};

use std::time::{Duration, Instant};

/// Limits for one oracle call. Node limits make results reproducible; the
/// time limit is a safety net.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: u64,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_seconds: u64) -> Self {
        SearchBudget {
            max_nodes,
            max_seconds,
        }
    }

    /// Node limit only (time limit of one day).
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget::new(max_nodes, 86_400)
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(50_000_000, 600)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    Feasible(W),
    Infeasible,
}

impl<W> Verdict<W> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome<T> {
    /// The search finished; `nodes` is the size of the explored tree and
    /// serves as the certificate for negative answers.
    Proven { value: T, nodes: u64 },
    Unknown { nodes: u64 },
}

impl<T> OracleOutcome<T> {
    pub fn proven(&self) -> Option<&T> {
        match self {
            OracleOutcome::Proven { value, .. } => Some(value),
            OracleOutcome::Unknown { .. } => None,
        }
    }

    pub fn into_proven(self) -> Option<T> {
        match self {
            OracleOutcome::Proven { value, .. } => Some(value),
            OracleOutcome::Unknown { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            OracleOutcome::Proven { nodes, .. } | OracleOutcome::Unknown { nodes } => *nodes,
        }
    }
}

/// Shared node and time counter.
#[derive(Debug)]
pub(crate) struct Meter {
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    exhausted: bool,
}

impl Meter {
    pub(crate) fn new(budget: SearchBudget) -> Self {
        Meter {
            nodes: 0,
            max_nodes: budget.max_nodes,
            deadline: Instant::now().checked_add(Duration::from_secs(budget.max_seconds)),
            exhausted: false,
        }
    }

    /// Counts a node; false once the budget is gone.
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted = true;
        } else if self.nodes.is_multiple_of(4096) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.exhausted = true;
                }
            }
        }
        !self.exhausted
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }
}

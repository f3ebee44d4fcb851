//! Finite 2-categorical kernel.
//!
//! `colimkit` builds the explicit pseudocolimit of a 2-filtered diagram of
//! finite categories, equips it with chosen finite limits and a generated
//! topology when the fibers are sites, and checks the universal property of
//! the result by exhaustive enumeration.
//!
//! Module map:
//!
//! - [`cat`]: finite categories, functors, natural transformations, chosen
//!   limits, exactness and equivalence search.
//! - [`twocat`]: finite strict 2-categories, strict 2-functors into
//!   categories and the 2-filteredness test.
//! - [`pseudocone`]: pseudocones, modifications and conjugation.
//! - [`bicolim`]: the pseudocolimit construction and its verifiers.
//! - [`sites`]: sites with finite limits, the colimit site, sheaf checks.
//! - [`restriction`]: closing generator sets under finite limits and
//!   transitions.
//! - [`fixture`]: the text fixture format.
//! - [`corpus`]: the fixture corpus used by tests and the CLI.

pub mod bicolim;
mod budget;
pub mod cat;
pub mod corpus;
mod error;
pub mod fixture;
pub mod pseudocone;
pub mod restriction;
pub mod sites;
pub mod twocat;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Outcome of a decision procedure that can exhibit a witness of failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&str> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(why) => Some(why),
        }
    }

    pub(crate) fn from_first(violation: Option<String>) -> Verdict {
        match violation {
            None => Verdict::Holds,
            Some(v) => Verdict::Fails(v),
        }
    }
}

/// List of violated constraints; empty means the structure is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<String>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, violation: impl Into<String>) {
        self.violations.push(violation.into());
    }
}

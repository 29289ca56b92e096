//! Randomized property suites checked against brute-force oracles.

pub mod oracles;
mod random;
mod suites;

pub use random::{random_join_semilattice, random_meet_semilattice, random_poset};
pub use suites::{replay_failure, run_suite, run_suite_with, Failure, SuiteConfig, SuiteReport, SUITES};

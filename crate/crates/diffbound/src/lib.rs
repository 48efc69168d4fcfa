//! A numerical abstract domain based on difference-bound matrices, plus a
//! forward abstract interpreter for a small parallel language.
//!
//! The domain represents conjunctions of constraints `x - y <= c` and
//! `+-x <= c` as weighted matrices. The shortest-path closure gives a normal
//! form for non-empty elements, on top of which the lattice operators,
//! widening, narrowing and the guard/assignment transfer functions are
//! defined. A baseline interval domain is included for precision
//! comparisons; the analyzer runs either domain over the nondeterministic
//! interleaving of a fixed set of processes.
//!
//! Entry points:
//!
//! * [`dbm::Dbm`] and [`domain::AbstractElement`] for the domain itself;
//! * [`parser::parse_program`], [`cfg::build_cfg`] and [`cfg::interleave`]
//!   for the frontend;
//! * [`engine::analyze`] for the fixpoint computation;
//! * [`cli::run_cli`] for the command-line driver.

pub mod ast;
pub mod bound;
pub mod boxdom;
pub mod cfg;
pub mod cli;
pub mod dbm;
pub mod domain;
pub mod engine;
pub mod interval;
pub mod parser;
pub mod render;

pub use bound::{Bound, Coefficient, OverflowError, Rational};
pub use boxdom::BoxEnv;
pub use dbm::{ClosedDbm, Dbm};
pub use domain::{alpha_points, AbstractElement, CondNf, GuardAtom, NormalizedElement};
pub use interval::{Interval, LowerBound};

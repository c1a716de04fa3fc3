//! Reactive control improvisation: randomized strategies for finite-horizon
//! two-player games that always satisfy a hard specification, satisfy a soft
//! specification with probability at least `1 - ε`, and never give a single
//! play probability above `ρ`.
//!
//! Specifications are DFAs ([`automata`]), LTLf formulas ([`ltlf`]) or any
//! [`game::Spec`] with a membership test. Widths come from a DFA table or the
//! generic recursion in [`genwidth`]; [`improviser`] turns them into a
//! strategy and [`harness`] runs and audits it.

pub mod automata;
pub mod error;
pub mod game;
pub mod games;
pub mod genwidth;
pub mod harness;
pub mod improviser;
pub mod instance;
pub mod ltlf;
pub mod rational;

pub use error::{Error, Result};
pub use game::{Alphabet, History, RciInstance, Spec, Symbol, Turn, Word};
pub use rational::Rational;

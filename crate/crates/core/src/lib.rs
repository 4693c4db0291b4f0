//! ε-NFAs as black-box computing devices, composed algebraically.
//!
//! Devices are [`Automaton`] values. They compose with [`algebra::concat`]
//! (written `;`), which runs one device and then hands control to the next,
//! and [`algebra::parallel`] (written `|`), which starts both devices on the
//! same input. A composite is again an automaton, so it can be composed
//! further. [`analysis`] checks languages against each other, and [`trace`]
//! shows which device does what during a run.
//!
//! ```
//! use mhc::fixtures::environment;
//! use mhc::textio::parse_expression;
//! use mhc::algebra::elaborate;
//! use mhc::Letter;
//!
//! let composite = elaborate(&parse_expression("N1 ; N2").unwrap(), &environment()).unwrap();
//! assert!(composite.accepts(&Letter::chars("aabaaaab").unwrap()).unwrap());
//! ```

pub mod algebra;
pub mod analysis;
pub mod automaton;
pub mod cli;
mod error;
pub mod fixtures;
pub mod random;
pub mod textio;
pub mod trace;

pub use automaton::{Automaton, Letter, RunWitness, StateId, Symbol, Word};
pub use error::{Error, Result};

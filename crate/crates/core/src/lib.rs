//! An interpreter for a small structured quantum programming language,
//! backed by a dense state-vector simulator.
//!
//! ```
//! use qclite::interp::Interpreter;
//! use qclite::machine::MachineState;
//!
//! let mut it = Interpreter::new(MachineState::new(4, 0).unwrap());
//! it.run("qureg q[1]; H(q); dump;").unwrap();
//! assert!(it.take_output().contains("0.707107 |0000>"));
//! ```

pub mod cli;
pub mod corpus;
pub mod interp;
pub mod machine;
pub mod qcond;
pub mod stdgates;
pub mod syntax;
pub mod tape;

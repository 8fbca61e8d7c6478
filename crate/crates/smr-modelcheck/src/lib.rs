//! Explicit-state verification of lock-free data structures that delegate
//! memory reclamation to a Safe Memory Reclamation (SMR) algorithm.
//!
//! The crate is organized around a compositional contract: an SMR algorithm is
//! specified by an *observer automaton* whose accepted event histories are the
//! forbidden behaviors. Data structures are verified against the observer
//! (frees are performed by the environment whenever the observer allows them),
//! and SMR implementations are verified against the same observer by driving
//! them with a most general client.
//!
//! Modules:
//! - [`observer`]: observer automata, specification membership, cross
//!   products, freeable-set inclusion, elision support, and the standard
//!   library of SMR observers.
//! - [`prog`]: the modeled language — AST, `.prog` parser/printer,
//!   well-formedness checks, and lowering to per-operation control-flow
//!   graphs.
//! - [`sem`]: the operational semantics — memory, validity tracking,
//!   fresh/freed bookkeeping, induced events, and the state relations
//!   (similarity, memory equivalence, behavior inclusion).
//! - [`analysis`]: bounded explicit-state exploration with pointer-race,
//!   double-retire, linearizability and harmful-ABA detection, plus the
//!   full-reuse vs. single-reuse comparison oracle.
//! - [`smr_verify`]: most-general-client construction and verification of SMR
//!   implementations against observer specifications.
//! - [`report`]: machine-readable reports and witness replay.

pub mod analysis;
pub mod cli;
pub mod observer;
pub mod prog;
pub mod report;
pub mod sem;
pub mod smr_verify;

pub use observer::{Event, History, Observer, Universe, Value};

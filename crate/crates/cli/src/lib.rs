//! Scenario runner for the `mulsemi` operator toolkit: a flat config format
//! describing a space, a lattice, a symbol, and a list of analyses, plus a
//! deterministic CSV/JSON report writer. The `mulsemi` binary is a thin
//! wrapper over this library.

pub mod builtins;
pub mod emit;
pub mod runner;
pub mod scenario;

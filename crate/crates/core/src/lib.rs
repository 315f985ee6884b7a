//! Parametric verification workbench: timed automata, interval Markov
//! chains, action-synthesis over mixed transition systems and Petri nets,
//! all on an exact-rational constraint core.

pub mod constraint;
pub mod io;
pub mod mts;
pub mod pimc;
pub mod ppn;
pub mod pta;

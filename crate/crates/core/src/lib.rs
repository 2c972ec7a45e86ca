//! Finite ordered monoids, systems of abelian groups over them, and the webbed semigroups
//! built from those systems.

#![allow(clippy::needless_range_loop)]

pub mod abgroups;
pub mod axioms;
pub mod circle;
pub mod cli;
pub mod colimits;
pub mod fixtures;
pub mod json;
pub mod metric;
pub mod order;
pub mod structure;
pub mod systems;
pub mod webbing;

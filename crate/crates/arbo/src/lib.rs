//! Multigraph toolkit centred on one question: how few colours can an
//! edge colouring use if every cycle (or every cut) must display many
//! of them? The crate pairs each construction with an independent
//! exhaustive check, so fast pipelines never vouch for themselves.

#![forbid(unsafe_code)]

pub mod budget;
pub mod colouring;
pub mod completion;
pub mod corpus;
pub mod cuts;
pub mod cycles;
pub mod density;
pub mod dual;
pub mod expansion;
mod flow;
pub mod gen;
pub mod graph;
pub mod io;
pub mod treedepth;

pub use budget::{Budget, Error, Result};
pub use graph::{EdgeId, Multigraph, VertexId};

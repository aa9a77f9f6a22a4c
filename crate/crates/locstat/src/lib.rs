//! Block-model detection toolkit: samplers for regular and irregular block
//! models, non-backtracking walk calculus, local subgraph statistics, SDP
//! feasibility instances with constructive witnesses and refutation
//! certificates, and end-to-end detection pipelines.

pub mod detect;
pub mod error;
pub mod graph;
pub mod iharabass;
pub mod linalg;
pub mod localstats;
pub mod model;
pub mod nbpoly;
pub mod oracle;
pub mod samplers;
pub mod sdp;
pub mod walks;

pub use error::{Error, Result};

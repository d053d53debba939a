//! Static liveness and buffer-dimensioning analysis for dataflow process
//! networks.

pub mod analyzer;
pub mod cli;
pub mod encoder;
pub mod gomory;
pub mod model;
pub mod oracle;
pub mod random;
pub mod simplex;
pub mod textio;

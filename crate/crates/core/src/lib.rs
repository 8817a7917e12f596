pub mod bvfunc1d;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod geometry2d;
pub mod json;
pub mod maximal1d;
pub mod maximal2d;
pub mod tolerances;
pub mod verify;

//! Crowd-knowledge answer retrieval: given a natural-language programming
//! query, rank question–answer threads mined from a Q&A dump by fusing
//! lexical, semantic, API-class, and API-method evidence, then compose
//! solutions of code plus filtered explanatory prose.

pub mod apirec;
pub mod artifact;
pub mod codescan;
pub mod composer;
pub mod corpus;
pub mod embedding;
pub mod engine;
pub mod error;
pub mod evalharness;
pub mod indices;
pub mod ranker;
pub mod service;

pub use error::{Error, Result};

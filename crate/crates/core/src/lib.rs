pub mod bipartite;
pub mod concurrence;
pub mod criteria;
pub mod error;
pub mod linalg;
pub mod rng;
pub mod states;
pub mod witness;

#[cfg(test)]
pub(crate) mod testutil;

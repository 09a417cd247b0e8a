//! Weighted domino tilings of the Aztec diamond: exact finite-size statistics
//! from a closed-form inverse Kasteleyn matrix, a biased domino-shuffling
//! sampler, and the asymptotic edge and bulk predictions they converge to.

pub mod dd;
pub mod exactdimer;
pub mod lattice;
pub mod shuffler;
pub mod kernelcalc;
pub mod scalinglimits;

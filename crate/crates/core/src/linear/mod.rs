//! Linear-algebra chains: vector spaces over a prime field with linear
//! subspaces, and finite-dimensional Hilbert spaces where the quotient by a
//! closed subspace is its orthocomplement.
//!
//! These are total categories, not Kleisli categories of the lift monad, but
//! they share the chain shape and so implement the same hooks.

mod fp;
mod hilb;

pub use fp::{
    rref, vect_comprehension, vect_quotient, vect_subst, FpMap, FpSpace, FpSubspace, VectChain, SAMPLED_PRIMES,
};
pub use hilb::{
    hilb_orthocomplement, hilb_subst, ClosedSubspace, HilbChain, HilbDecomposition, HilbMap, HilbSpace,
};

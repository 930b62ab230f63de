//! Galois groups of characteristic polynomials along random walks on
//! finitely generated linear groups.
//!
//! The crate samples long random products of integer matrices exactly,
//! observes the Galois group of each product's characteristic polynomial
//! through Frobenius cycle types, and compares the observations against
//! explicitly constructed permutation groups, one per connected-component
//! coset of the ambient group. A brute-force layer checks the finite-field
//! density statements over small prime fields.

pub mod exactmat;
pub mod expcli;
pub mod finfield;
pub mod galois_id;
pub mod modpoly;
pub mod permkit;
pub mod picatalog;
pub mod walker;

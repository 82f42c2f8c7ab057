//! Finite fields, polynomials over them, and the basic arithmetic functions
//! of F_q[x].

mod arith;
mod field;
mod poly;

pub use arith::{
    euler_phi, factorize, factorize_with, irreducible_test, phi_lower_bound_check, prime_count,
    primes_of_degree, von_mangoldt, Factorization, PhiBoundReport, PrimeTable,
    ENUMERATION_LIMIT, PHI_RATIO_THRESHOLD,
};
pub(crate) use arith::{phi_of, von_mangoldt_of};
pub use field::{Field, FieldSpec, Fq};
pub use poly::{Degree, Poly};

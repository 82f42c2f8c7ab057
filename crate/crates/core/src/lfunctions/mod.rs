//! L-polynomials of Dirichlet characters mod Q, their inverse roots, and the
//! hybrid product formula.

mod cyclotomic;
mod grid;
mod hybrid;
mod lpoly;
mod roots;
mod sweep;
mod variable;

pub use cyclotomic::{cyclotomic_poly, CompensatedSum, RootSum, RootSummer, EXACT_ORDER_LIMIT};
pub use grid::{GridShape, Plane, RegionGrid};
pub use hybrid::{
    euler_product_truncated, hybrid_check, lemma2_ratio_check, log_p_k_from_sums, log_p_k_s,
    p_k, p_k_s, z_k, zeta_q, CoprimePrimes, LambdaTable, RatioReport,
};
pub use lpoly::{
    l_coeffs, l_coeffs_all, monic_char_sum, LCoeffMatrix, LPolynomial, FLOAT_ZERO_TOLERANCE,
};
pub use roots::{
    classify, inverse_roots, poly_from_inverse_roots, RootClass, RootReport,
    CLASSIFY_TOLERANCE, MAX_ITERATIONS, RECONSTRUCTION_TOLERANCE, SOLVER_TOLERANCE,
};
pub use sweep::{family_sweep, SweepOptions, SweepRow};
pub use variable::{s_of_u, u_of_s};

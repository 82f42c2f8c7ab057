//! Peak polynomials, the character functionals built from them, and
//! Dirichlet-polynomial approximation by phase fitting.

mod counting;
mod fit;
mod functionals;
mod params;
mod peak;

pub use counting::{counting_checks, CountingFunction, CountingReport, CountingRow, MAX_COUNT_DEGREE};
pub use fit::{fit_phases, fit_phases_on, FitResult, COARSE_SCAN, MAX_SWEEPS, STALL_TOLERANCE};
pub use functionals::{
    g_func, h_from_factors, h_func, mean_value_experiment, mv_tail_experiment, EpsilonMode,
    MeanValueReport, PhaseAssignment, PreparedPhases, TailReport, PAIR_LIMIT,
};
pub use params::{degree_of_norm, norm_of_degree, ParamSet};
pub use peak::{
    chebyshev_t, constant_peak, dist_to_int, e, peak_poly, PeakCertificate, PeakPolynomial,
    CERTIFY_GRID, QUADRATURE_NODES,
};

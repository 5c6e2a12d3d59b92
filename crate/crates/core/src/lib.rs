//! Certified quantitative bounds on the geometric convergence rate and
//! constants of ergodic Markov chains, computed from drift and minorization
//! parameters through renewal theory.
//!
//! The crate turns the data of the standard drift conditions — a
//! minorization weight on a small set, a contraction factor `lambda` for a
//! Lyapunov function outside the set, a level `K` on it, and optionally the
//! set's stationary mass — into a certificate: an explicit `rho < 1` with
//! `||P^n g - pi(g)||_V <= M(r) r^{-n}` evaluators, for both total
//! variation (`M_1`) and Lyapunov-weighted (`M_V`) norms.
//!
//! Two constructions are provided. When the small set is an atom the
//! renewal sequence of return times is controlled directly
//! ([`atomic::atomic_certificate`]); otherwise the regeneration structure
//! of the split chain is used ([`split::split_certificate`]). Both reduce
//! to bounding a complex generating function on circles, which is also
//! checked against a brute-force truncated oracle ([`renewal`]).

pub mod atomic;
pub mod certificate;
pub mod error;
pub mod kendall;
pub mod models;
pub mod numerics;
pub mod renewal;
pub mod split;
pub mod tables;
pub mod validate;

pub use atomic::{atomic_certificate, g_h_bounds, AtomicDriftSpec, GhBounds};
pub use certificate::{ErgodicityCertificate, Provenance};
pub use error::{Error, Result};
pub use kendall::{
    alpha0, bound_known_c1, bound_simplified, bound_unknown_c1, d_alpha, kappa, r0_asymptotic,
    r2_baxendale, BoundMethod, KendallBound, KendallInput,
};
pub use models::{
    contracting_exact_tv, derive_contracting_normals, derive_mh_normal, derive_reflecting_rw,
    derive_sticky_rw, rw_matrix_oracle, DerivedParams, DriftData, MatrixOracle, ModelSpec,
};
pub use numerics::{
    integrate_adaptive, minimize_scalar, solve_root_bracketed, std_normal_cdf, Bracket,
    NumericConfig,
};
pub use renewal::{
    circle_lower_bound_check, renewal_sequence, tail_sup_oracle, tail_sup_oracle_auto,
    IncrementDistribution, RenewalSequence,
};
pub use split::{
    alpha_bar_range, envelope, exponents, l_of_r, split_certificate, split_kendall_bound,
    split_supporting_bounds, SplitDriftSpec, SplitEnvelope, SplitSupportBounds,
};

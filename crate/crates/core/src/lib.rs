//! Simulator and analysis toolkit for discrete-time coined quantum walks.
//!
//! A walk is driven by a unitary U = S(C ⊗ I): a coin flip C on the
//! direction register followed by a conditional shift S along the graph.
//! The crate covers the standard zoo of small-scale walk experiments:
//!
//! - lines and N-cycles with the general 2-D coin (bias ρ, phases θ, φ),
//!   solved both by direct evolution and in Fourier space,
//! - time-averaged and limiting distributions on cycles, including the
//!   eigenvalue-degeneracy condition that decides uniformity,
//! - exact periodicity certificates for cycle walks,
//! - glued binary trees traversal under Grover and DFT coins,
//! - 2-D lattices (open window, torus, Möbius, Klein) with 4-D coins,
//!   including the exhaustive 640-coin enumeration and its classification,
//! - hypercubes with the Grover coin.
//!
//! Everything is dense and deterministic: states are flat complex vectors,
//! randomness is confined to seedable generators.

pub mod analysis;
pub mod coin;
pub mod dist;
pub mod error;
pub mod graph;
pub mod spectral;
pub mod state;

pub use analysis::{
    class_of, class_signature, classify_coins, default_state_grid, enumerate_unbiased_coins4,
    extremal_spreading, CoinClass, ExtremalReport,
};
pub use coin::{CoinOperator, CoinSpec, InitialCoinState};
pub use dist::{
    classical_column_distribution, classical_position_distribution, column_distribution, moments,
    moments2d, position_distribution, time_averaged_distribution, total_variation, Distribution,
    Labels, Moment2dReport, MomentReport,
};
pub use error::{QwError, Result};
pub use graph::{BoundaryMode, GraphKind, WalkGraph};
pub use spectral::{
    cycle_eigensystem, degeneracy_condition, evolve_fourier, find_period_numeric,
    limiting_distribution, minimal_periods, solve_period_condition, Branch, DegeneracySet,
    DegeneratePair, PeriodCertificate, SpectralDecomposition, SpectralMode,
};
pub use state::{
    evolve, evolve_adjoint, fidelity, overlap, step, step_adjoint, CoinSet, WalkState,
};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

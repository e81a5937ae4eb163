//! Entangling power of unitary operators on bipartite `d1 × d2` systems.
//!
//! The entangling power of `U` is the mean linear entropy of `U|ψ1⟩|ψ2⟩`
//! over Haar-random product inputs. It depends on `U` only through two
//! traces, `Tr[(U^R U^R†)²]` of the realigned operator and
//! `Tr[(U^T1 U^T1†)²]` of the partial transpose ([`entangling_power`]).
//!
//! Independent routes to the same number are provided for validation:
//! the permutation-operator form on two copies of the system
//! ([`entangling_power_permutation_oracle`]), traces of a product
//! decomposition ([`entangling_power_from_decomposition`]) and a Haar Monte
//! Carlo estimate ([`monte_carlo_ep`]). Closed forms are available for the
//! Ising coupling and for the isotropic Heisenberg coupling of a spin-1/2
//! with a spin-s.

pub mod average;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod heisenberg;
pub mod ising;
pub mod linalg;
pub mod montecarlo;
pub mod opfile;
pub mod oracle;
pub mod power;
pub mod random;
pub mod spin;
pub mod sweep;

pub use average::{time_average_ep, AveragingWindow};
pub use decomposition::{entangling_power_from_decomposition, ProductTerm, ProductTermSum};
pub use error::{Error, Result};
pub use heisenberg::{
    heisenberg_ep_time_average, heisenberg_qubit_qudit_ep_analytic, heisenberg_trace_terms, su2_evolution,
    su2_projector, HeisenbergSpectrum,
};
pub use ising::{ising_ep_analytic, ising_ep_time_average, ising_evolution, ising_trace_term, IsingParams};
pub use linalg::{
    kron, partial_time_reversal, partial_transpose, realign, trace_power4, BipartiteOperator, ComplexMatrix,
};
pub use montecarlo::{haar_product_state, monte_carlo_ep, MonteCarloEstimate};
pub use num_complex::Complex64;
pub use oracle::entangling_power_permutation_oracle;
pub use power::{entangling_power, linear_entropy, EpConstants, EpTraces};
pub use spin::{spin_operators, SpinOperators, SpinSystem};

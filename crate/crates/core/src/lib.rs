//! Exact Frobenius (Laurent) series solutions of Knizhnik-Zamolodchikov
//! type Fuchsian systems `dW/dz = κ·A(z)·W`, `A(z) = Σ P_i / (z - z_i)`,
//! together with rational reconstruction and exact ODE verification.

pub mod arith;
pub mod cli;
pub mod model;
pub mod reconstruct;
pub mod series;

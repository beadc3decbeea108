//! A two-state stochastic game whose discounted values oscillate as the
//! discount vanishes, and the coercive 1-d Hamilton-Jacobi equation built from
//! it whose discounted solutions therefore fail to converge.
//!
//! * [`numfield`]: exact arithmetic in ℚ(√2)
//! * [`game`]: the game, its closed-form payoffs and a Monte Carlo simulator
//! * [`shapley`]: exact and iterative discounted values, the oscillating
//!   discount sequences and the threshold strategy
//! * [`hamiltonian`]: the Hamiltonian, the interpolated discounted solution
//!   and its viscosity checks
//! * [`pdesolver`]: a monotone Lax-Friedrichs solver for the discounted
//!   equation on the torus

pub mod error;
pub mod game;
pub mod hamiltonian;
pub mod numfield;
pub mod pdesolver;
pub mod shapley;

pub use error::{Error, Result};
pub use numfield::ExactQuad;

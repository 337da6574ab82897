//! Numerical lab for the monostable Lotka–Volterra competition–diffusion system
//!
//! ```text
//! u_t - u_xx   = u (1 - u - a v)
//! v_t - d v_xx = r v (1 - v - b u)
//! ```
//!
//! Closed-form speed calculus ([`speeds`]), an explicit solver ([`solver`]) with front
//! tracking ([`fronts`]), travelling waves ([`waves`]) and certified barrier assemblies
//! ([`barriers`]).

pub mod barriers;
pub mod exec;
pub mod fronts;
pub mod model;
pub mod numerics;
pub mod seeds;
pub mod solver;
pub mod scalar;
pub mod speeds;
pub mod waves;

pub use model::{Grid, ModelError, ModelParams, StatePair};

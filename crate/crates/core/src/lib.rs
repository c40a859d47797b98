//! Exact generating functions for Euler characteristics of moduli spaces of
//! μ-stable torsion-free sheaves on smooth complete toric surfaces.
//!
//! The crate is organized bottom-up: [`qseries`] provides truncated Laurent
//! series, [`toric`] the fans and intersection pairing, [`chern`] the Chern
//! character of equivariant data, [`rank2`] the generic rank-2 engine,
//! [`closedforms`] the specialized formulas, [`wallcross`] the wall-crossing
//! routes and [`oracles`] independent number-theoretic checks.

pub mod chern;
pub mod closedforms;
pub mod enumerate;
pub mod error;
pub mod oracles;
pub mod qseries;
pub mod rank2;
pub mod toric;
pub mod wallcross;

pub use chern::{chern_character, ChernCharacter, EquivariantData};
pub use error::{Error, Result};
pub use oracles::{hurwitz, klyachko_series, yoshioka_series, HurwitzValue};
pub use qseries::{eta_inverse_power, LaurentSeries};
pub use rank2::{generating_function_rank2, CoincidencePattern, WidthVector};
pub use toric::{DivisorClass, Fan, FanSpec};
pub use wallcross::{goettsche_series, is_wall, joyce_wallcross, numeric_wallcross, p1p1_wallcross_closed, WallContext};

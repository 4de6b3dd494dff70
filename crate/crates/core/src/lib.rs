#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod awgn_exponents;
pub mod bounds;
pub mod dmc_exponents;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod numerics;
pub mod poltyrev_exponents;
pub mod verify;

pub use awgn_exponents::{ExponentPoint, Regime, SnrRate};
pub use bounds::PackingParams;
pub use dmc_exponents::Dmc;
pub use error::{Error, Result};
pub use geometry::{EnclosingBall, PointSet};
pub use montecarlo::{Codebook, SimEstimate};
pub use numerics::{Interval, SeedSpec};
pub use poltyrev_exponents::AlphaL;

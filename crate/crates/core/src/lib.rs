pub mod adaptive_point;
pub mod cli;
pub mod cone_projection;
pub mod error;
pub mod geometry;
pub mod risk_lab;
pub mod set_estimation;

pub use error::{Error, Result};

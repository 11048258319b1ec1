//! Classification of the particle content of quantized linear field
//! theories from their classical internal-symmetry data.

pub mod breaking;
pub mod catalog;
pub mod cxify;
pub mod discrete;
pub mod error;
pub mod groups;
pub mod kernel;
pub mod modes;
pub mod pipeline;
pub mod report;
pub mod render;
pub mod reps;

pub use error::{Error, Result};

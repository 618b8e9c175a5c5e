pub mod bsm_model;
pub mod bsm_oracle;
pub mod campaign;
pub mod decoder;
pub mod error;
pub mod graph_states;
pub mod lattice;
pub mod oracles;
pub mod resources;
pub mod stabilizer;
pub mod theory;

pub use error::{Error, Result};

//! Discovery of the direct causes of a predictive model's output from
//! observational data, together with the graph, model, testing and
//! benchmarking machinery around it.

pub mod bench;
pub mod citest;
pub mod discovery;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod idecomp;
pub mod model;
pub mod scalar;
pub mod synth;

pub use error::{GraphError, ModelError};
pub use graph::{Admg, PredictiveGraph, VarId, Variable};
pub use scalar::Real;

pub type Model = model::CausalModel<f64>;
pub type Model32 = model::CausalModel<f32>;
pub type Joint = model::JointTable<f64>;
pub type Joint32 = model::JointTable<f32>;

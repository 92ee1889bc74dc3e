pub mod elementary;
pub mod module;
pub mod operator;

pub use elementary::{unipotent_tensor, ElementaryModule};
pub use module::FormalModule;
pub use operator::{newton_slopes, DifferentialOperator, NewtonEdge, NewtonPolygon};

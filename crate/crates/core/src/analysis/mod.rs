//! Symbol eigenstructure, the one-dimensional layer model, interface
//! reflection and the vorticity diagnostic.

mod reflection;
mod symbol;
mod toy;
mod vorticity;

pub use reflection::{reflection_coefficient, PlaneWaveContext, ReflectionResult};
pub use symbol::{mat_vec, principal_symbol, symbol_eigen, Matrix4, SymbolDecomposition, Vector4};
pub use toy::{damped_mode_ode, toy_1d_model, ToySeries};
pub use vorticity::vorticity;

pub mod exact;
pub mod jet;
pub mod radial;
pub mod vec3;

pub use exact::{GaussRational, Rational};
pub use jet::{jet_evaluate, Jet, JetExpr};
pub use radial::RadialExpr;
pub use vec3::{casin, csqrt, ComplexVec3};

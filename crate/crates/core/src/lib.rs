//! Numerical workbench for the boundary asymptotics of scattering metrics:
//! collar normal forms, Laplacian jets and their perturbation symbols,
//! weighted geodesic transforms on the boundary sphere, finite tensor
//! tomography, and the layer-stripping recovery pipeline.

pub mod circle;
pub mod error;
pub mod field;
pub mod poly;
pub mod quad;
pub mod series;
pub mod sphere;

pub use circle::GreatCircle;
pub use error::{Error, Result};
pub use field::{BoundaryField, Rank};
pub use poly::Poly;
pub use quad::{QuadKind, QuadratureRule};
pub use series::JetSeries;
pub use sphere::SphereSpec;

//! Level-set geometry: normals, second fundamental form and mean curvature,
//! the Schwarzschild interior barrier, null expansions of round spheres, and
//! Hessians restricted to coordinate slices.

mod barrier;
mod frame;
mod null;
mod slice;

pub use barrier::{barrier_scan, schwarzschild_trk, BarrierScanResult};
pub use frame::{mean_curvature, second_fundamental_form, LevelSetFrame, SecondFundamentalForm};
pub use null::{null_expansions, NullExpansions, Trapping};
pub use slice::{slice_laplacian, slice_restricted_hessian, SliceHessian, SliceSpec};

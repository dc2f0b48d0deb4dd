//! Exact tails of weighted Rademacher sums, Gaussian comparison bounds and
//! rigorous certification of the sign conditions behind the optimal constant
//! `c* = 1/(4 I(√2))`.

pub mod bounds;
pub mod certify;
pub mod error;
pub mod exact;
pub mod gaussian;
pub mod search;
pub mod selfnorm;

pub use bounds::{bound, bound_table, compare_all, BoundKind};
pub use certify::{Certificate, Certifier, CertifyConfig, Claim, Interval, ParamBox, RegionTag, Status};
pub use error::{Error, Result};
pub use exact::{exact_tail, normalize, ratio, RatioReport, WeightVector};
pub use gaussian::{constants, normal_density, normal_tail, Constants};
pub use search::{grid_search, local_search, SearchResult};
pub use selfnorm::{exact_selfnorm_tail, mc_selfnorm_tail, MagnitudeModel};

//! Rigorous sign certification by interval branch-and-bound.

mod bnb;
mod claims;
mod enclose;
mod interval;
mod real;

pub use bnb::{
    Certificate, Certifier, CertifyConfig, Leaf, ParamBox, Part, PartSummary, RegionTag, Soundness, Status,
};
pub use claims::{f_point, h_dtau, h_ridge, kkk_dtau, kkk_psi, kkk_psi_dtau, Claim, ClaimConstants, Margin};
pub use enclose::{enclose_density, enclose_tail, tail_point};
pub use interval::Interval;
pub use real::{Grad, Real};

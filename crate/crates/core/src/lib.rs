//! Exact enumeration of rational planar curves in `P³` with a cusp.
//!
//! The count `C_d(r, s)` of degree-`d` rational cuspidal curves lying in some plane and
//! meeting `r` generic lines and `s` generic points (`r + 2s = 3d + 1`) is the Euler class
//! of `L* ⊗ ev*W` on the one-pointed planar moduli space minus a ghost-bubble boundary
//! term. Both reduce to the characteristic numbers `N_d(r, s, θ)` of planar rational
//! curves, which [`gw_base`] computes as genus-zero invariants of the incidence variety.
//!
//! ```
//! use cuspcount::pipeline::CuspCounter;
//!
//! let counter = CuspCounter::default();
//! assert_eq!(counter.cusp_count(3, 10, 0).unwrap().count, 17760.into());
//! ```

pub mod cli;
pub mod error;
pub mod flag_oracle;
pub mod gw_base;
pub mod pipeline;
pub mod ring;
pub mod store;
pub mod taut;
pub mod verify;

pub use error::{Error, Result};
pub use gw_base::{BaseKey, BaseProvider, InvariantKey, ProviderConfig, ProviderMode, Rational};
pub use pipeline::{CuspCounter, CuspResult};
pub use taut::{PhiKey, SplitKey, Tautological};

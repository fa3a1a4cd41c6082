//! Simulation and optimization toolkit for reconfigurable intelligent
//! surfaces (RIS) that use a non-diagonal phase-shift matrix.
//!
//! In a conventional RIS every element reflects its own incident signal, so
//! the phase-shift matrix is diagonal. The non-diagonal architecture lets the
//! signal impinging on element `i` leave through element `M(i)` for a
//! bijection `M`, which turns the matrix into a permutation times a diagonal.
//!
//! The crate is organized as:
//!
//! * [`channel`]: geometric Rician channel generation, spatial correlation and
//!   CSI error.
//! * [`phase`]: phase configurations plus SISO, single-user MISO (alternating
//!   optimization) and multi-user MIMO (two-stage SDR + water-filling) designs.
//! * [`sdp`]: the unit-diagonal semidefinite program behind the MIMO design.
//! * [`theory`]: special functions, order statistics, closed-form channel
//!   gains, outage probability, average BER and complexity counts.
//! * [`experiments`]: scenario configuration, the Monte Carlo harness, figure
//!   presets and the CSV schema.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod channel;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod phase;
pub mod sdp;
pub mod theory;

pub use error::{Error, Result};

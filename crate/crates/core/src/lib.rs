//! Ground-plane projection and error propagation for fixed roadside cameras.
//!
//! A camera is mounted at a known position above a locally flat ground plane,
//! looking down at a fixed pan and pitch. This crate maps pixels of that
//! camera to ground coordinates, and propagates the uncertainty of the
//! calibrated camera parameters into a ground-plane covariance, so that every
//! reported position comes with an uncertainty ellipse.
//!
//! The crate is `no_std` (with `alloc`); file formats, configuration and the
//! command line live in the companion `groundcov-cli` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod calibstats;
pub mod catalog;
pub mod footprint;
pub mod geometry;
pub mod propagation;
pub mod sensitivity;
pub mod trajectory;

pub use catalog::CameraErrorPreset;
pub use geometry::{CameraIntrinsics, CameraPose, GeometryError, GroundPoint, ImagePoint};
pub use propagation::{GroundCovariance, ParamCovariance, UncertaintyEllipse};
pub use sensitivity::ParamVector;

//! Nonparametric regression on spherical designs and its asymptotic
//! equivalence with the Gaussian white-noise model.
//!
//! The crate covers design verification and cubature ([`designs`]),
//! spherical harmonics ([`harmonics`]), hyperinterpolation ([`approx`]),
//! needlet frames ([`needlets`]), Sobolev and Besov norms ([`spaces`]), the
//! two experiments and the randomizations between them ([`experiments`]),
//! and numerical Le Cam bounds with rate studies ([`lecam`]). The
//! [`cli`] module backs the `sphere-lecam` binary.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod cli;
pub mod designs;
pub mod error;
pub mod experiments;
pub mod harmonics;
pub mod lecam;
pub mod needlets;
pub mod rng;
pub mod spaces;
pub mod special;
pub mod sphere;
pub mod sum;

pub use error::{Error, Result};

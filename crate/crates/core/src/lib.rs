//! Chen's iterated integrals, computed both symbolically and numerically.
//!
//! The algebraic side ([`shuffle_hopf`], [`dga`], [`bar`], [`exact_seq`],
//! [`cobar`]) works over the rationals with exact elimination. The analytic
//! side ([`numerics`], [`special`]) evaluates iterated line integrals and
//! parallel transport along piecewise-analytic paths in double precision.
//! [`currents`] evaluates iterated integrals of hyperplane delta-currents
//! exactly and serves as an integer oracle for the Hopf identities.

pub mod error;
pub mod linalg;
pub mod shuffle_hopf;
pub mod dga;
pub mod bar;
pub mod cobar;
pub mod exact_seq;
pub mod numerics;
pub mod special;
pub mod sphere;
pub mod currents;
pub mod suites;

pub use error::{Error, Result};

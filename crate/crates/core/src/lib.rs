#![allow(clippy::needless_range_loop)]

pub mod entropy;
pub mod error;
pub mod kinematics;
pub mod sweep;
pub mod states;
pub mod wigner;

//! Exact arithmetic: residues mod `N`, rationals, the Howell normal form of
//! matrices over `Z/N`, and fraction-free rank over `Q`.
//!
//! Nothing in this crate uses floating point.

mod howell;
mod rank;
mod rational;
mod residue;

pub use howell::{howell_form, ModMatrix};
pub use rank::{rank_exact, rank_integer};
pub use rational::{frac_part, Rational};
pub use residue::{gcd, gcd_ext, Residue};

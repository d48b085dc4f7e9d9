//! Exact and numerical computation of Kauffman brackets and skein invariants
//! in thickened surfaces, shadow state sums and Reshetikhin-Turaev-Witten
//! invariants.

pub mod cli;
pub mod error;
pub mod diagram;
pub mod exactalg;
pub mod linalg;
pub mod qnum;
pub mod rtw;
pub mod shadow;
pub mod tangle;
pub mod tl;
pub mod torus_skein;

pub use error::{Error, Result};
pub use exactalg::{LaurentPoly, RationalFunc};

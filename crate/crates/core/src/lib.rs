//! Exact e-Harish-Chandra bookkeeping for unipotent characters of the
//! classical finite groups of types A, 2A, B and C, together with the e-chain
//! local counts and the alternating-sum identity they satisfy.

pub mod chainlocal;
pub mod cycpoly;
pub mod error;
pub mod genre;
pub mod group;
pub mod labelcomb;
pub mod oracle;
pub mod uniphc;
pub mod verify;

pub use cycpoly::CycProduct;
pub use error::{Error, Result};

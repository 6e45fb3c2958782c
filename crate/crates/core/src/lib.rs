//! Normalized unit groups V(KG) of group algebras of finite 2-groups over
//! GF(2), with the isomorphism invariants used to tell them apart.

pub mod algebra;
pub mod catalogue;
pub mod error;
pub mod gf2;
pub mod group;
pub mod invariants;
pub mod involutions;
pub mod oracle;
pub mod pc;
pub mod subgroup;
pub mod unit_pc;

pub use error::{Error, Result};

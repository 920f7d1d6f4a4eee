//! Exact (co)sheaf computations on finite Grothendieck sites.
//!
//! Values live in finite sets or finitely generated abelian groups; pro-objects
//! are towers; infinite sites enter through rule-generated cover chains and
//! every verdict on them is qualified by a depth.

pub mod cosheaf;
pub mod error;
pub mod io;
pub mod oracle;
pub mod pro;
pub mod report;
pub mod sheaf;
pub mod site;
pub mod topo;
pub mod value;

pub use error::{Error, Result};
pub use report::{CheckReport, Verdict, Witness};

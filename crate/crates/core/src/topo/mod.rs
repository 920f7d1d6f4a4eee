//! Model spaces: finite spaces, their open-set sites and the converging
//! sequence, plus the built-in demo corpus.

pub mod converging;
pub mod demos;
pub mod space;

pub use converging::{converging_chain_for, converging_sequence_site, ConvergingLayout};
pub use demos::{
    builtin_demos, demo_names, find_demo, Demo, DemoCheck, DemoInput, CONVERGING_POINTS,
};
pub use space::{
    functions_presheaf, h0_precosheaf, open_site, pi0_precosheaf, CoverPolicy, FiniteSpace,
    OpenSite, DEFAULT_POINT_BOUND,
};

//! Precosheaves, the cosheaf condition, plus construction, costalks and
//! smoothness.

pub mod abelian;
pub mod check;
pub mod costalk;
pub mod plus;
pub mod precosheaf;
pub mod smooth;
pub mod tensor;

pub use abelian::{
    cokernel_precosheaf, is_locally_zero, kernel_cokernel_locally_zero, kernel_precosheaf,
};
pub use check::{check_cosheaf, cosheaf_status, CosheafStatus};
pub use costalk::{costalk, costalk_map, strong_local_iso_check, Costalk};
pub use plus::{cosheafify, plus_cosheaf, Cosheafification, Plus};
pub use precosheaf::{constant_precosheaf, Precosheaf, PrecosheafMorphism};
pub use smooth::{is_smooth, plus_morphism, universal_factorization_check};
pub use tensor::{
    classify_comparison, cosheaf_defect, fast_slow_comparison, sieve_colimit, tensor_with_sieve,
    CoverNode, Defect, FastSlowComparison, SieveColimit,
};

//! Finite sites: categories, sieves, covers and coverages.

pub mod category;
pub mod coverage;
pub mod sieve;
pub mod spec;

pub use category::{CommaCategory, FiniteCategory, Morphism, MorphismId, ObjectId};
pub use coverage::{
    find_refinement, is_initial_object, ChainRule, Cover, CoverChain, Coverage, Intersection,
    Refinement,
};
pub use sieve::Sieve;
pub use spec::{validate_site, PointFilter, SiteSpec};

/// The sieve generated by a cover's pieces.
pub fn sieve_from_cover(spec: &SiteSpec, cover: &Cover) -> crate::error::Result<Sieve> {
    if cover.target >= spec.object_count() {
        return Err(crate::error::Error::InvalidSite(format!(
            "cover target {} not in site",
            cover.target
        )));
    }
    Ok(cover.sieve(&spec.category))
}

/// The comma category `C_R` of a sieve.
pub fn comma_of_sieve(spec: &SiteSpec, sieve: &Sieve) -> FiniteCategory {
    sieve.comma(&spec.category).category
}

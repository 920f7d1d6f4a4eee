//! Pro-objects presented as towers, with depth-qualified checks.

pub mod checks;
pub mod colimit;
pub mod morphism;
pub mod tower;

pub use checks::{
    descend_along, equal_at_depth, factors_through, is_epi_at_depth, is_iso_at_depth,
    is_rudimentary_at_depth, lift_through, pro_hom_at_depth, EpiVerdict, EpiWitness, Fill,
    IsoVerdict, RudimentaryVerdict, DEFAULT_WINDOW,
};
pub use colimit::{reindex, tower_colimit, tower_colimit_with, TowerCocone, TowerEdge};
pub use morphism::LevelMorphism;
pub use tower::Tower;

//! Value categories: finite sets and finitely generated abelian groups.

pub mod diagram;
pub mod finab;
pub mod finset;
pub mod pairing;
pub mod zmatrix;

use std::fmt::Debug;

pub use diagram::{Cocone, Cone, FiniteDiagram};
pub use finab::{FinAb, FinAbCat, FinAbMap};
pub use finset::{FinSet, FinSetCat, FinSetMap};
pub use zmatrix::{smith_normal_form, Smith, ZMatrix};

/// Mono/epi/iso flags of a single map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MapClass {
    pub mono: bool,
    pub epi: bool,
    pub iso: bool,
}

/// A cocomplete and complete category with finite objects in which every
/// question the engine asks is decidable.
pub trait ValueCategory: Clone + Debug + Send + Sync + 'static {
    type Obj: Clone + Debug + PartialEq + Send + Sync;
    type Map: Clone + Debug + Send + Sync;
    /// Extra bookkeeping that lets a colimit factor competing cocones.
    type CoconeData: Clone + Debug + Send + Sync;
    /// Extra bookkeeping that lets a limit factor competing cones.
    type ConeData: Clone + Debug + Send + Sync;

    fn name() -> &'static str;

    fn src(f: &Self::Map) -> &Self::Obj;
    fn dst(f: &Self::Map) -> &Self::Obj;
    fn identity(x: &Self::Obj) -> Self::Map;
    /// `g ∘ f`. Panics when the endpoints do not match.
    fn compose(g: &Self::Map, f: &Self::Map) -> Self::Map;
    fn maps_equal(f: &Self::Map, g: &Self::Map) -> bool;

    fn initial() -> Self::Obj;
    fn terminal() -> Self::Obj;
    fn is_initial(x: &Self::Obj) -> bool;
    fn is_terminal(x: &Self::Obj) -> bool;
    fn initial_map(x: &Self::Obj) -> Self::Map;
    fn terminal_map(x: &Self::Obj) -> Self::Map;

    fn colimit(d: &FiniteDiagram<Self>) -> Cocone<Self>;
    fn limit(d: &FiniteDiagram<Self>) -> Cone<Self>;
    /// The unique map out of the colimit apex compatible with `legs`.
    fn factor_colimit(c: &Cocone<Self>, target: &Self::Obj, legs: &[Self::Map]) -> Self::Map;
    /// The unique map into the limit apex compatible with `legs`.
    fn factor_limit(c: &Cone<Self>, source: &Self::Obj, legs: &[Self::Map]) -> Self::Map;

    fn classify(f: &Self::Map) -> MapClass;
    fn inverse(f: &Self::Map) -> Option<Self::Map>;
    /// Two objects are isomorphic (cardinality, resp. invariant factors).
    fn isomorphic(a: &Self::Obj, b: &Self::Obj) -> bool;

    /// Image factorisation: the image object and its inclusion into `dst f`.
    fn image(f: &Self::Map) -> (Self::Obj, Self::Map);

    /// Given `top: A → Y`, `bottom: B → Z`, `left: A → B` and
    /// `right: Y → Z`, finds `h: Y → B` with `h ∘ top = left` and
    /// `bottom ∘ h = right`.
    fn diagonal_fill(
        top: &Self::Map,
        bottom: &Self::Map,
        left: &Self::Map,
        right: &Self::Map,
    ) -> Option<Self::Map>;

    /// For `p: P → Y` and `q: Q → Y`, a pair `u, v: Y → g` with
    /// `u ∘ q = v ∘ q` and `u ∘ p ≠ v ∘ p`, if one exists.
    fn separating_pair(
        g: &Self::Obj,
        p: &Self::Map,
        q: &Self::Map,
    ) -> Option<(Self::Map, Self::Map)>;

    /// The default family of test objects for epimorphism checks involving
    /// the given objects.
    fn default_test_family(objects: &[Self::Obj]) -> Vec<Self::Obj>;

    /// All maps `a → b`, when the hom-set is finite and enumerable.
    fn enumerate_homs(a: &Self::Obj, b: &Self::Obj) -> Option<Vec<Self::Map>>;

    /// A short isomorphism invariant, e.g. `"3"` or `"Z^1+Z/2"`.
    fn describe(x: &Self::Obj) -> String;
}

/// Coproduct of a list of objects with its injections.
pub fn coproduct<K: ValueCategory>(objects: &[K::Obj]) -> Cocone<K> {
    K::colimit(&FiniteDiagram::discrete(objects.to_vec()))
}

/// Product of a list of objects with its projections.
pub fn product<K: ValueCategory>(objects: &[K::Obj]) -> Cone<K> {
    K::limit(&FiniteDiagram::discrete(objects.to_vec()))
}

/// Coequalizer of a parallel pair.
pub fn coequalizer<K: ValueCategory>(f: &K::Map, g: &K::Map) -> Cocone<K> {
    let d = FiniteDiagram::new(
        vec![K::src(f).clone(), K::dst(f).clone()],
        vec![(0, 1, f.clone()), (0, 1, g.clone())],
    );
    K::colimit(&d)
}

/// Equalizer of a parallel pair.
pub fn equalizer<K: ValueCategory>(f: &K::Map, g: &K::Map) -> Cone<K> {
    let d = FiniteDiagram::new(
        vec![K::src(f).clone(), K::dst(f).clone()],
        vec![(0, 1, f.clone()), (0, 1, g.clone())],
    );
    K::limit(&d)
}

//! Towers as pro-objects: rudimentarity verdicts at depth, a pro-isomorphism
//! that is not a levelwise bijection, and enumerated pro-hom sets.

use std::sync::Arc;

use cosheaf::pro::{
    is_iso_at_depth, is_rudimentary_at_depth, pro_hom_at_depth, LevelMorphism, Tower,
    DEFAULT_WINDOW,
};
use cosheaf::value::{FinSet, FinSetCat, FinSetMap};

fn main() -> cosheaf::Result<()> {
    let depth = 5;
    let growing = Tower::<FinSetCat>::from_fn((1..=depth + 1).map(FinSet::new).collect(), |j| {
        FinSetMap::from_fn(FinSet::new(j + 2), FinSet::new(j + 1), move |x| x.min(j))
    })?;
    println!("growing: {}", growing.describe().join(" <- "));
    println!(
        "  {}",
        is_rudimentary_at_depth(&growing, depth, DEFAULT_WINDOW).label()
    );

    let sizes = [2, 2, 2, 1];
    let collapsing =
        Tower::<FinSetCat>::from_fn(sizes.iter().map(|&n| FinSet::new(n)).collect(), |j| {
            FinSetMap::from_fn(FinSet::new(sizes[j + 1]), FinSet::new(sizes[j]), |_| 0)
        })?;
    println!("collapsing: {}", collapsing.describe().join(" <- "));
    for d in [collapsing.depth(), collapsing.depth() + DEFAULT_WINDOW] {
        println!(
            "  at depth {d}: {}",
            is_rudimentary_at_depth(&collapsing, d, DEFAULT_WINDOW).label()
        );
    }

    let pt = Arc::new(Tower::<FinSetCat>::rudimentary(FinSet::new(1)));
    let (growing, collapsing) = (Arc::new(growing), Arc::new(collapsing));
    let collapse = LevelMorphism::new(
        collapsing.clone(),
        pt.clone(),
        vec![0],
        vec![FinSetMap::from_fn(FinSet::new(2), FinSet::new(1), |_| 0)],
    )?;
    println!(
        "collapsing -> pt: {}",
        is_iso_at_depth(&collapse, depth).label()
    );
    println!(
        "|Hom(growing, pt)| = {}",
        pro_hom_at_depth(&growing, &pt, depth)?.len()
    );
    println!(
        "|Hom(pt, growing)| = {}",
        pro_hom_at_depth(&pt, &growing, depth)?.len()
    );
    Ok(())
}

//! Connected components and zeroth homology on the pseudocircle: both are
//! cosheaves, and cosheafifying the one-point precosheaf recovers the
//! component counts.

use std::sync::Arc;

use cosheaf::cosheaf::{check_cosheaf, constant_precosheaf, cosheafify};
use cosheaf::topo::{
    h0_precosheaf, open_site, pi0_precosheaf, CoverPolicy, FiniteSpace, DEFAULT_POINT_BOUND,
};
use cosheaf::value::{FinAb, FinSet, FinSetCat};

fn main() -> cosheaf::Result<()> {
    let os = open_site(
        &FiniteSpace::pseudocircle(),
        CoverPolicy::AllIrredundant,
        DEFAULT_POINT_BOUND,
    )?;
    println!("{} opens, {} points", os.opens.len(), os.site.points.len());
    let pi0 = pi0_precosheaf(&os);
    println!("pi0: {}", check_cosheaf(&pi0, 6)?.label);
    println!(
        "H0(-; Z): {}",
        check_cosheaf(&h0_precosheaf(&os, &FinAb::free(1)), 6)?.label
    );
    let pt = Arc::new(constant_precosheaf::<FinSetCat>(
        os.site.clone(),
        FinSet::new(1),
    ));
    println!("pt: {}", check_cosheaf(&pt, 6)?.label);
    let sharp = cosheafify(&pt, 6)?;
    for u in 0..os.opens.len() {
        println!(
            "  {:>10}  pi0 = {}  pt# = {}",
            os.site.category.object_name(u),
            pi0.values[u].level(0).len(),
            sharp.value.values[u].describe().join(" <- ")
        );
    }
    println!("pt#: {}", check_cosheaf(&sharp.value, 6)?.label);
    Ok(())
}

//! Sheafification of the constant presheaf on the two-point discrete
//! space: the value on the whole space becomes the product of the stalks.

use cosheaf::sheaf::{check_sheaf, sheafify, stalk, Presheaf};
use cosheaf::topo::{open_site, CoverPolicy, FiniteSpace, DEFAULT_POINT_BOUND};
use cosheaf::value::{FinSet, FinSetCat, ValueCategory};

fn main() -> cosheaf::Result<()> {
    let os = open_site(
        &FiniteSpace::discrete(2),
        CoverPolicy::AllIrredundant,
        DEFAULT_POINT_BOUND,
    )?;
    let a = Presheaf::<FinSetCat>::constant(os.site.clone(), FinSet::new(2));
    println!("constant presheaf: {}", check_sheaf(&a)?.label);
    let s = sheafify(&a)?;
    println!("separated after one plus: {}", s.plus_separated);
    for u in 0..os.opens.len() {
        println!(
            "  {:>8}  {} -> {}",
            os.site.category.object_name(u),
            FinSetCat::describe(&a.values[u]),
            FinSetCat::describe(&s.value.values[u])
        );
    }
    for p in &os.site.points {
        let (x, truncated) = stalk(&s.value, p)?;
        println!(
            "stalk at {}: {}{}",
            p.label,
            FinSetCat::describe(&x),
            if truncated { " (truncated)" } else { "" }
        );
    }
    println!("sheafified: {}", check_sheaf(&s.value)?.label);
    Ok(())
}

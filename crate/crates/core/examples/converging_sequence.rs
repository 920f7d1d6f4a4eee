//! Cosheafification of the one-point precosheaf on the converging sequence:
//! the value at `X` is a tower that keeps growing. Prints the costalks at
//! the limit point and at an isolated point, then the smoothness verdicts.

use std::sync::Arc;
use std::time::Instant;

use cosheaf::cosheaf::{constant_precosheaf, cosheafify, costalk, is_smooth};
use cosheaf::pro::{is_rudimentary_at_depth, DEFAULT_WINDOW};
use cosheaf::topo::converging_sequence_site;
use cosheaf::value::{FinAb, FinAbCat, FinSet, FinSetCat};

fn main() -> cosheaf::Result<()> {
    let depth: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(6);
    let site = converging_sequence_site(12)?;
    let pt = Arc::new(constant_precosheaf::<FinSetCat>(
        site.clone(),
        FinSet::new(1),
    ));
    let t = Instant::now();
    let sharp = cosheafify(&pt, depth)?;
    let x = site.category.object_id("X").expect("X");
    let tower = &sharp.value.values[x];
    println!("(pt)# at X: {}", tower.describe().join(" <- "));
    println!(
        "  {}",
        is_rudimentary_at_depth(tower, depth, DEFAULT_WINDOW).label()
    );
    for label in ["0", "1/3"] {
        let c = costalk(&sharp.value, site.point(label).expect("declared point"))?;
        println!(
            "costalk at {label}: {} ({})",
            c.tower.describe().join(" <- "),
            is_rudimentary_at_depth(&c.tower, depth, DEFAULT_WINDOW).label()
        );
        let c0 = costalk(&pt, site.point(label).expect("declared point"))?;
        println!(
            "costalk of pt at {label}: {}",
            c0.tower.describe().join(" <- ")
        );
    }
    println!("smooth(pt): {}", is_smooth(&pt, depth)?.label);
    println!("  [{:?}]", t.elapsed());
    let z = Arc::new(constant_precosheaf::<FinAbCat>(site, FinAb::free(1)));
    let t = Instant::now();
    println!("smooth(Z): {}", is_smooth(&z, depth)?.label);
    println!("  [{:?}]", t.elapsed());
    Ok(())
}

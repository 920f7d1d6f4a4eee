//! Saving and loading JSON documents: a site, a precosheaf on it and a
//! check report, each written in canonical form.

use std::sync::Arc;

use cosheaf::cosheaf::check_cosheaf;
use cosheaf::io::{self, Document};
use cosheaf::topo::{open_site, pi0_precosheaf, CoverPolicy, FiniteSpace, DEFAULT_POINT_BOUND};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("cosheaf-documents-example");
    std::fs::create_dir_all(&dir)?;
    let os = open_site(
        &FiniteSpace::pseudocircle(),
        CoverPolicy::AllIrredundant,
        DEFAULT_POINT_BOUND,
    )?;
    let pi0 = Arc::new(pi0_precosheaf(&os));
    let report = check_cosheaf(&pi0, 6)?;
    for (name, d) in [
        ("site.json", Document::Site(os.site.clone())),
        ("pi0.json", Document::SetPrecosheaf(pi0)),
        ("report.json", Document::Report(report)),
    ] {
        let path = dir.join(name);
        io::save(&d, &path)?;
        let back = io::load(&path)?;
        let same = io::to_canonical_string(&back)? == std::fs::read_to_string(&path)?;
        println!(
            "{}: kind {}, byte-stable reload: {same}",
            path.display(),
            back.kind()
        );
    }
    println!("\n{}", std::fs::read_to_string(dir.join("report.json"))?);
    Ok(())
}

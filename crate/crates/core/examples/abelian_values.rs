//! Finitely generated abelian groups: Smith normal form invariants,
//! kernels and cokernels, and the local-zero test on the converging
//! sequence.

use std::sync::Arc;

use cosheaf::cosheaf::{
    constant_precosheaf, is_locally_zero, kernel_cokernel_locally_zero, PrecosheafMorphism,
};
use cosheaf::topo::converging_sequence_site;
use cosheaf::value::finab::{cokernel, kernel};
use cosheaf::value::{smith_normal_form, FinAb, FinAbCat, FinAbMap, ValueCategory, ZMatrix};

fn main() -> cosheaf::Result<()> {
    let m = ZMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&m);
    println!(
        "SNF diagonal rank {}: {:?}",
        snf.rank,
        snf.diagonal.to_rows()
    );
    let g = FinAb::new(3, m)?;
    println!("Z^3 / rows = {}", FinAbCat::describe(&g));
    let z = FinAb::free(1);
    let times4 = FinAbMap::scalar(&z, 4);
    let (k, _) = kernel(&times4);
    let (c, _) = cokernel(&times4);
    println!(
        "x4 on Z: kernel {}, cokernel {}",
        FinAbCat::describe(&k),
        FinAbCat::describe(&c)
    );

    let site = converging_sequence_site(8)?;
    let constant = Arc::new(constant_precosheaf::<FinAbCat>(site.clone(), z.clone()));
    println!(
        "constant Z locally zero: {}",
        is_locally_zero(&constant, &[], 6)?.label
    );
    let doubling: Vec<FinAbMap> = constant
        .values
        .iter()
        .map(|v| FinAbMap::scalar(v.level(0), 2))
        .collect();
    let f = PrecosheafMorphism::rudimentary(constant.clone(), constant, doubling)?;
    println!(
        "x2 is a strong local iso (kernel and cokernel locally zero): {}",
        kernel_cokernel_locally_zero(&f, &[], 6)?
    );
    Ok(())
}

//! Named demo bundles binding model spaces to the engine's checks.

use std::sync::Arc;

use crate::cosheaf::{check_cosheaf, constant_precosheaf, is_smooth, Precosheaf};
use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::sheaf::{check_sheaf, sheafify, Presheaf};
use crate::site::SiteSpec;
use crate::value::{FinAb, FinAbCat, FinSet, FinSetCat};

use super::converging::converging_sequence_site;
use super::space::{
    h0_precosheaf, open_site, pi0_precosheaf, CoverPolicy, FiniteSpace, DEFAULT_POINT_BOUND,
};

/// Number of isolated points in the converging demos.
pub const CONVERGING_POINTS: usize = 12;

/// The data a demo runs on.
#[derive(Clone, Debug)]
pub enum DemoInput {
    SetPrecosheaf(Arc<Precosheaf<FinSetCat>>),
    AbPrecosheaf(Arc<Precosheaf<FinAbCat>>),
    SetPresheaf(Presheaf<FinSetCat>),
}

impl DemoInput {
    pub fn site(&self) -> &Arc<SiteSpec> {
        match self {
            DemoInput::SetPrecosheaf(a) => &a.site,
            DemoInput::AbPrecosheaf(a) => &a.site,
            DemoInput::SetPresheaf(a) => &a.site,
        }
    }
}

/// Which engine check a demo runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemoCheck {
    Cosheaf,
    Smooth,
    /// Sheafify, then check the result.
    Sheafified,
}

#[derive(Clone, Debug)]
pub struct Demo {
    pub name: &'static str,
    pub summary: &'static str,
    pub check: DemoCheck,
    /// The label the check is expected to produce.
    pub expected: &'static str,
    /// Whether the underlying space is a connected finite space.
    pub connected_finite_space: bool,
    pub input: DemoInput,
}

impl Demo {
    pub fn run(&self, depth: usize) -> Result<CheckReport> {
        match (&self.input, self.check) {
            (DemoInput::SetPrecosheaf(a), DemoCheck::Cosheaf) => check_cosheaf(a, depth),
            (DemoInput::AbPrecosheaf(a), DemoCheck::Cosheaf) => check_cosheaf(a, depth),
            (DemoInput::SetPrecosheaf(a), DemoCheck::Smooth) => is_smooth(a, depth),
            (DemoInput::AbPrecosheaf(a), DemoCheck::Smooth) => is_smooth(a, depth),
            (DemoInput::SetPresheaf(a), DemoCheck::Sheafified) => check_sheaf(&sheafify(a)?.value),
            _ => Err(Error::Unsupported(format!(
                "demo {} pairs its input with the wrong check",
                self.name
            ))),
        }
    }
}

fn pseudocircle_site() -> Arc<SiteSpec> {
    open_site(
        &FiniteSpace::pseudocircle(),
        CoverPolicy::AllIrredundant,
        DEFAULT_POINT_BOUND,
    )
    .expect("pseudocircle site")
    .site
}

/// All demos, in a stable order.
pub fn builtin_demos() -> Vec<Demo> {
    let circle = open_site(
        &FiniteSpace::pseudocircle(),
        CoverPolicy::AllIrredundant,
        DEFAULT_POINT_BOUND,
    )
    .expect("pseudocircle site");
    let pair = open_site(
        &FiniteSpace::discrete(2),
        CoverPolicy::AllIrredundant,
        DEFAULT_POINT_BOUND,
    )
    .expect("discrete pair site");
    let conv = converging_sequence_site(CONVERGING_POINTS).expect("converging site");
    let pt = FinSet::labeled(["*"]);
    vec![
        Demo {
            name: "pi0-pseudocircle",
            summary: "connected components on the pseudocircle form a cosheaf",
            check: DemoCheck::Cosheaf,
            expected: "COSHEAF",
            connected_finite_space: true,
            input: DemoInput::SetPrecosheaf(Arc::new(pi0_precosheaf(&circle))),
        },
        Demo {
            name: "pt-finite-space-smooth",
            summary: "the one-point precosheaf on the pseudocircle is smooth",
            check: DemoCheck::Smooth,
            expected: "SMOOTH",
            connected_finite_space: true,
            input: DemoInput::SetPrecosheaf(Arc::new(constant_precosheaf(
                pseudocircle_site(),
                pt.clone(),
            ))),
        },
        Demo {
            name: "pt-converging",
            summary: "the one-point precosheaf on the converging sequence is not smooth",
            check: DemoCheck::Smooth,
            expected: "NOT-SMOOTH",
            connected_finite_space: false,
            input: DemoInput::SetPrecosheaf(Arc::new(constant_precosheaf(
                conv.clone(),
                pt.clone(),
            ))),
        },
        Demo {
            name: "Z-converging",
            summary: "the constant precosheaf Z on the converging sequence is not smooth",
            check: DemoCheck::Smooth,
            expected: "NOT-SMOOTH",
            connected_finite_space: false,
            input: DemoInput::AbPrecosheaf(Arc::new(constant_precosheaf(conv, FinAb::free(1)))),
        },
        Demo {
            name: "constant-presheaf-sheafify",
            summary: "sheafifying the constant presheaf on two points gives a sheaf",
            check: DemoCheck::Sheafified,
            expected: "SHEAF",
            connected_finite_space: false,
            input: DemoInput::SetPresheaf(Presheaf::constant(pair.site.clone(), FinSet::new(2))),
        },
        Demo {
            name: "h0-pseudocircle",
            summary: "zeroth homology with integer coefficients on the pseudocircle is a cosheaf",
            check: DemoCheck::Cosheaf,
            expected: "COSHEAF",
            connected_finite_space: true,
            input: DemoInput::AbPrecosheaf(Arc::new(h0_precosheaf(&circle, &FinAb::free(1)))),
        },
        Demo {
            name: "pt-pseudocircle-not-cosheaf",
            summary: "the one-point precosheaf fails at the empty cover of the empty open",
            check: DemoCheck::Cosheaf,
            expected: "NOT-COSEPARATED",
            connected_finite_space: true,
            input: DemoInput::SetPrecosheaf(Arc::new(constant_precosheaf(circle.site.clone(), pt))),
        },
        Demo {
            name: "pi0-discrete-pair",
            summary: "connected components on the two-point discrete space form a cosheaf",
            check: DemoCheck::Cosheaf,
            expected: "COSHEAF",
            connected_finite_space: false,
            input: DemoInput::SetPrecosheaf(Arc::new(pi0_precosheaf(&pair))),
        },
    ]
}

pub fn demo_names() -> Vec<&'static str> {
    builtin_demos().iter().map(|d| d.name).collect()
}

pub fn find_demo(name: &str) -> Option<Demo> {
    builtin_demos().into_iter().find(|d| d.name == name)
}

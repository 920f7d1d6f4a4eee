//! Sites: a finite category with a coverage, plus declared points.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde_json::json;

use crate::error::{Error, Result};
use crate::report::{CheckReport, Verdict, Witness};

use super::category::{FiniteCategory, ObjectId};
use super::coverage::{Cover, Coverage};
use super::sieve::Sieve;

/// A declared neighbourhood chain `U₀ ⊇ U₁ ⊇ ...` of a point. A bounded
/// chain has its last object as minimal neighbourhood; an unbounded chain
/// is the truncation of an infinite filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFilter {
    pub label: String,
    pub chain: Vec<ObjectId>,
    pub unbounded: bool,
}

impl PointFilter {
    pub fn bounded(label: impl Into<String>, chain: Vec<ObjectId>) -> Self {
        PointFilter {
            label: label.into(),
            chain,
            unbounded: false,
        }
    }

    pub fn unbounded(label: impl Into<String>, chain: Vec<ObjectId>) -> Self {
        PointFilter {
            label: label.into(),
            chain,
            unbounded: true,
        }
    }

    pub fn validate(&self, cat: &FiniteCategory) -> Result<()> {
        if self.chain.is_empty() {
            return Err(Error::InvalidPoint(format!(
                "point {} has an empty chain",
                self.label
            )));
        }
        if let Some(&bad) = self.chain.iter().find(|&&o| o >= cat.object_count()) {
            return Err(Error::InvalidPoint(format!(
                "point {} names unknown object {bad}",
                self.label
            )));
        }
        for w in self.chain.windows(2) {
            if cat.hom(w[1], w[0]).is_empty() {
                return Err(Error::InvalidPoint(format!(
                    "point {}: no morphism {} → {}",
                    self.label,
                    cat.object_name(w[1]),
                    cat.object_name(w[0])
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SiteSpec {
    pub name: String,
    pub category: FiniteCategory,
    pub coverage: Coverage,
    pub poset: bool,
    pub points: Vec<PointFilter>,
    minimal: OnceLock<Vec<Sieve>>,
}

impl PartialEq for SiteSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.category == other.category
            && self.coverage == other.coverage
            && self.poset == other.poset
            && self.points == other.points
    }
}

impl SiteSpec {
    pub fn new(
        name: impl Into<String>,
        category: FiniteCategory,
        coverage: Coverage,
        points: Vec<PointFilter>,
    ) -> Result<Self> {
        let n = category.object_count();
        if coverage.covers.len() != n || coverage.chains.len() != n {
            return Err(Error::InvalidSite(
                "coverage tables do not match the object count".into(),
            ));
        }
        for (u, covers) in coverage.covers.iter().enumerate() {
            for c in covers {
                if c.target != u {
                    return Err(Error::InvalidSite(format!(
                        "cover listed under {} has another target",
                        category.object_name(u)
                    )));
                }
                c.validate(&category)?;
            }
        }
        for (u, ch) in coverage.chains.iter().enumerate() {
            if let Some(ch) = ch {
                for c in &ch.levels {
                    if c.target != u {
                        return Err(Error::InvalidSite(format!(
                            "chain of {} has a level with another target",
                            category.object_name(u)
                        )));
                    }
                    c.validate(&category)?;
                }
            }
        }
        for p in &points {
            p.validate(&category)?;
        }
        let poset = category.is_poset();
        Ok(SiteSpec {
            name: name.into(),
            category,
            coverage,
            poset,
            points,
            minimal: OnceLock::new(),
        })
    }

    pub fn object_count(&self) -> usize {
        self.category.object_count()
    }

    pub fn point(&self, label: &str) -> Option<&PointFilter> {
        self.points.iter().find(|p| p.label == label)
    }

    pub fn has_chain(&self, u: ObjectId) -> bool {
        self.coverage.chains[u].is_some()
    }

    /// The deepest stored chain level of `u`, or 0 without a chain.
    pub fn chain_depth(&self, u: ObjectId) -> usize {
        self.coverage.chains[u].as_ref().map_or(0, |c| c.depth())
    }

    /// Sieve of chain level `k` (clamped) on a chain object.
    pub fn chain_sieve(&self, u: ObjectId, k: usize) -> Sieve {
        let ch = self.coverage.chains[u]
            .as_ref()
            .expect("object has a chain");
        ch.level(k).sieve(&self.category)
    }

    /// Sieves generated by every declared cover and chain level on `u`,
    /// in declaration order.
    pub fn generated_sieves(&self, u: ObjectId) -> Vec<Sieve> {
        self.coverage
            .all_covers(u)
            .into_iter()
            .map(|c| c.sieve(&self.category))
            .collect()
    }

    /// All declared covers and chain levels on `u`.
    pub fn covers_of(&self, u: ObjectId) -> Vec<&Cover> {
        self.coverage.all_covers(u)
    }

    /// For each object, the smallest covering sieve of the topology
    /// generated by the declared covers: the greatest fixpoint below the
    /// declared sieves that is stable under pullback and under composing
    /// covering sieves.
    pub fn minimal_covering_sieves(&self) -> &[Sieve] {
        self.minimal.get_or_init(|| {
            let cat = &self.category;
            let n = cat.object_count();
            let mut m: Vec<Sieve> = (0..n)
                .map(|u| {
                    self.generated_sieves(u)
                        .iter()
                        .fold(Sieve::maximal(cat, u), |acc, s| acc.intersection(s))
                })
                .collect();
            loop {
                let mut changed = false;
                for u in 0..n {
                    for &f in cat.morphisms_into(u) {
                        let v = cat.src(f);
                        let pulled = m[u].pullback(cat, f);
                        let next = m[v].intersection(&pulled);
                        if next != m[v] {
                            m[v] = next;
                            changed = true;
                        }
                    }
                }
                for u in 0..n {
                    let mut comp = BTreeSet::new();
                    for &f in &m[u].members {
                        comp.extend(m[cat.src(f)].push(cat, f));
                    }
                    let next = m[u].intersection(&Sieve {
                        target: u,
                        members: comp,
                    });
                    if next != m[u] {
                        m[u] = next;
                        changed = true;
                    }
                }
                if !changed {
                    return m;
                }
            }
        })
    }
}

fn minimal_elements(sieves: &[Sieve]) -> Vec<Sieve> {
    let mut out: Vec<Sieve> = Vec::new();
    for s in sieves {
        if sieves.iter().any(|t| t.is_subset(s) && t != s) || out.contains(s) {
            continue;
        }
        out.push(s.clone());
    }
    out
}

/// Exhaustive check of the category axioms and of the coverage axioms
/// that are decidable on the generated family of covering sieves:
/// (a) every maximal sieve contains a generated covering sieve,
/// (b) pullback stability up to refinement,
/// (c) transitivity in composite form: composing a generated sieve with
/// generated sieves on its pieces contains a generated sieve.
pub fn validate_site(spec: &SiteSpec) -> Result<CheckReport> {
    spec.category.validate()?;
    let cat = &spec.category;
    let n = cat.object_count();
    let generated: Vec<Vec<Sieve>> = (0..n).map(|u| spec.generated_sieves(u)).collect();
    let contains_generated = |v: ObjectId, s: &Sieve| generated[v].iter().any(|g| g.is_subset(s));
    let mut witnesses = Vec::new();
    let mut trace = Vec::new();

    let mut ok_a = true;
    for u in 0..n {
        if generated[u].is_empty() {
            ok_a = false;
            witnesses.push(
                Witness::new("maximal-sieve-not-covering")
                    .object(cat.object_name(u))
                    .detail(json!({"morphism": cat.morphism(cat.identity(u)).name})),
            );
        }
    }
    trace.push(format!(
        "(a) maximal sieves covering: {}",
        if ok_a { "pass" } else { "FAIL" }
    ));

    let mut ok_b = true;
    'stab: for u in 0..n {
        for (ci, r) in generated[u].iter().enumerate() {
            for &f in cat.morphisms_into(u) {
                let pulled = r.pullback(cat, f);
                if !contains_generated(cat.src(f), &pulled) {
                    ok_b = false;
                    witnesses.push(
                        Witness::new("stability")
                            .object(cat.object_name(u))
                            .cover(ci)
                            .detail(json!({
                                "morphism": cat.morphism(f).name,
                                "pulled_back": pulled.member_names(cat),
                            })),
                    );
                    continue 'stab;
                }
            }
        }
    }
    trace.push(format!(
        "(b) pullback stability: {}",
        if ok_b { "pass" } else { "FAIL" }
    ));

    let minimal: Vec<Vec<Sieve>> = generated.iter().map(|g| minimal_elements(g)).collect();
    let mut ok_c = true;
    'trans: for u in 0..n {
        for (ci, cover) in spec.covers_of(u).into_iter().enumerate() {
            let choices: Vec<&Vec<Sieve>> =
                cover.pieces.iter().map(|&p| &minimal[cat.src(p)]).collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; choices.len()];
            loop {
                let mut comp = BTreeSet::new();
                for (k, &p) in cover.pieces.iter().enumerate() {
                    comp.extend(choices[k][idx[k]].push(cat, p));
                }
                let comp = Sieve::generated(cat, u, &comp.into_iter().collect::<Vec<_>>());
                if !contains_generated(u, &comp) {
                    ok_c = false;
                    witnesses.push(
                        Witness::new("transitivity")
                            .object(cat.object_name(u))
                            .cover(ci)
                            .detail(json!({"composite": comp.member_names(cat)})),
                    );
                    continue 'trans;
                }
                let mut k = 0;
                loop {
                    if k == idx.len() {
                        break;
                    }
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == idx.len() {
                    break;
                }
            }
        }
    }
    trace.push(format!(
        "(c) transitivity on the generated family: {}",
        if ok_c { "pass" } else { "FAIL" }
    ));
    trace.push("upward closure holds by construction of the generated family".into());

    let mut report = if ok_a && ok_b && ok_c {
        CheckReport::pass("validate", "VALID-SITE")
    } else {
        CheckReport::new("validate", Verdict::Fail, "INVALID-SITE")
    };
    report.witnesses = witnesses;
    report.trace = trace;
    Ok(report)
}

//! The category of finite sets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

use super::{Cocone, Cone, FiniteDiagram, MapClass, ValueCategory};

/// A finite set `{0, .., n-1}`, optionally with display labels.
/// Equality compares cardinality only; labels are presentation data.
#[derive(Clone, Debug)]
pub struct FinSet {
    n: usize,
    labels: Option<Arc<[String]>>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for FinSet {}

impl FinSet {
    pub fn new(n: usize) -> Self {
        FinSet { n, labels: None }
    }

    pub fn labeled<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        FinSet {
            n: labels.len(),
            labels: Some(labels.into()),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.n).map(|i| self.label(i)).collect()
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        (0..self.n).find(|&i| self.label(i) == label)
    }
}

/// A total function between finite sets.
#[derive(Clone, Debug)]
pub struct FinSetMap {
    src: FinSet,
    dst: FinSet,
    table: Vec<usize>,
}

impl FinSetMap {
    pub fn new(src: FinSet, dst: FinSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != src.len() {
            return Err(Error::InvalidValue(format!(
                "function table has {} entries for a source of size {}",
                table.len(),
                src.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= dst.len()) {
            return Err(Error::InvalidValue(format!(
                "function value {bad} outside target of size {}",
                dst.len()
            )));
        }
        Ok(FinSetMap { src, dst, table })
    }

    pub fn from_fn(src: FinSet, dst: FinSet, f: impl Fn(usize) -> usize) -> Self {
        let table = (0..src.len()).map(f).collect();
        FinSetMap::new(src, dst, table).expect("function values in range")
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn src(&self) -> &FinSet {
        &self.src
    }

    pub fn dst(&self) -> &FinSet {
        &self.dst
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinSetCat;

/// Representative `(node, element)` for each colimit class.
#[derive(Clone, Debug)]
pub struct SetCoconeData {
    pub representatives: Vec<(usize, usize)>,
}

/// Compatible families making up a limit, indexed by apex element.
#[derive(Clone, Debug)]
pub struct SetConeData {
    pub families: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

fn limit_families(d: &FiniteDiagram<FinSetCat>) -> Vec<Vec<usize>> {
    let n = d.nodes.len();
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, (s, t, _)) in d.edges.iter().enumerate() {
        out_edges[*s].push(e);
        in_edges[*t].push(e);
    }
    let mut results = Vec::new();
    let mut assign: Vec<Option<usize>> = vec![None; n];

    // Assigns `v` to `node` and propagates forced values along outgoing
    // edges; returns the list of nodes assigned, or None on conflict.
    fn propagate(
        d: &FiniteDiagram<FinSetCat>,
        out_edges: &[Vec<usize>],
        in_edges: &[Vec<usize>],
        assign: &mut [Option<usize>],
        node: usize,
        v: usize,
    ) -> Option<Vec<usize>> {
        let mut stack = vec![(node, v)];
        let mut touched = Vec::new();
        while let Some((x, val)) = stack.pop() {
            match assign[x] {
                Some(cur) if cur == val => continue,
                Some(_) => {
                    for &t in &touched {
                        assign[t] = None;
                    }
                    return None;
                }
                None => {
                    assign[x] = Some(val);
                    touched.push(x);
                }
            }
            for &e in &out_edges[x] {
                let (_, t, f) = &d.edges[e];
                stack.push((*t, f.apply(val)));
            }
            for &e in &in_edges[x] {
                let (s, _, f) = &d.edges[e];
                if let Some(sv) = assign[*s] {
                    if f.apply(sv) != val {
                        for &t in &touched {
                            assign[t] = None;
                        }
                        return None;
                    }
                }
            }
        }
        Some(touched)
    }

    fn search(
        d: &FiniteDiagram<FinSetCat>,
        out_edges: &[Vec<usize>],
        in_edges: &[Vec<usize>],
        assign: &mut Vec<Option<usize>>,
        results: &mut Vec<Vec<usize>>,
    ) {
        let Some(node) = assign.iter().position(Option::is_none) else {
            results.push(assign.iter().map(|v| v.expect("assigned")).collect());
            return;
        };
        for v in 0..d.nodes[node].len() {
            if let Some(touched) = propagate(d, out_edges, in_edges, assign, node, v) {
                search(d, out_edges, in_edges, assign, results);
                for t in touched {
                    assign[t] = None;
                }
            }
        }
    }

    search(d, &out_edges, &in_edges, &mut assign, &mut results);
    results
}

impl ValueCategory for FinSetCat {
    type Obj = FinSet;
    type Map = FinSetMap;
    type CoconeData = SetCoconeData;
    type ConeData = SetConeData;

    fn name() -> &'static str {
        "finset"
    }

    fn src(f: &FinSetMap) -> &FinSet {
        &f.src
    }

    fn dst(f: &FinSetMap) -> &FinSet {
        &f.dst
    }

    fn identity(x: &FinSet) -> FinSetMap {
        FinSetMap {
            src: x.clone(),
            dst: x.clone(),
            table: (0..x.len()).collect(),
        }
    }

    fn compose(g: &FinSetMap, f: &FinSetMap) -> FinSetMap {
        assert_eq!(
            f.dst.len(),
            g.src.len(),
            "composing maps with mismatched endpoints"
        );
        FinSetMap {
            src: f.src.clone(),
            dst: g.dst.clone(),
            table: f.table.iter().map(|&x| g.table[x]).collect(),
        }
    }

    fn maps_equal(f: &FinSetMap, g: &FinSetMap) -> bool {
        f.src == g.src && f.dst == g.dst && f.table == g.table
    }

    fn initial() -> FinSet {
        FinSet::new(0)
    }

    fn terminal() -> FinSet {
        FinSet::new(1)
    }

    fn is_initial(x: &FinSet) -> bool {
        x.is_empty()
    }

    fn is_terminal(x: &FinSet) -> bool {
        x.len() == 1
    }

    fn initial_map(x: &FinSet) -> FinSetMap {
        FinSetMap {
            src: FinSet::new(0),
            dst: x.clone(),
            table: Vec::new(),
        }
    }

    fn terminal_map(x: &FinSet) -> FinSetMap {
        FinSetMap {
            src: x.clone(),
            dst: FinSet::new(1),
            table: vec![0; x.len()],
        }
    }

    fn colimit(d: &FiniteDiagram<FinSetCat>) -> Cocone<FinSetCat> {
        let mut offsets = Vec::with_capacity(d.nodes.len());
        let mut total = 0;
        for x in &d.nodes {
            offsets.push(total);
            total += x.len();
        }
        let mut uf = UnionFind::new(total);
        for (s, t, f) in &d.edges {
            for (x, &y) in f.table.iter().enumerate() {
                uf.union(offsets[*s] + x, offsets[*t] + y);
            }
        }
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut representatives = Vec::new();
        let mut class = vec![0; total];
        for (node, x) in d.nodes.iter().enumerate() {
            for e in 0..x.len() {
                let r = uf.find(offsets[node] + e);
                let c = *class_of_root.entry(r).or_insert_with(|| {
                    representatives.push((node, e));
                    representatives.len() - 1
                });
                class[offsets[node] + e] = c;
            }
        }
        let labeled = d.nodes.iter().any(FinSet::has_labels);
        let apex = if labeled {
            FinSet::labeled(representatives.iter().map(|&(n, e)| d.nodes[n].label(e)))
        } else {
            FinSet::new(representatives.len())
        };
        let legs = d
            .nodes
            .iter()
            .enumerate()
            .map(|(node, x)| FinSetMap {
                src: x.clone(),
                dst: apex.clone(),
                table: (0..x.len()).map(|e| class[offsets[node] + e]).collect(),
            })
            .collect();
        Cocone {
            apex,
            legs,
            data: SetCoconeData { representatives },
        }
    }

    fn limit(d: &FiniteDiagram<FinSetCat>) -> Cone<FinSetCat> {
        let families = limit_families(d);
        let apex = FinSet::new(families.len());
        let legs = d
            .nodes
            .iter()
            .enumerate()
            .map(|(node, x)| FinSetMap {
                src: apex.clone(),
                dst: x.clone(),
                table: families.iter().map(|fam| fam[node]).collect(),
            })
            .collect();
        let index = families
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        Cone {
            apex,
            legs,
            data: SetConeData { families, index },
        }
    }

    fn factor_colimit(c: &Cocone<FinSetCat>, target: &FinSet, legs: &[FinSetMap]) -> FinSetMap {
        let table = c
            .data
            .representatives
            .iter()
            .map(|&(n, e)| legs[n].table[e])
            .collect();
        FinSetMap {
            src: c.apex.clone(),
            dst: target.clone(),
            table,
        }
    }

    fn factor_limit(c: &Cone<FinSetCat>, source: &FinSet, legs: &[FinSetMap]) -> FinSetMap {
        let table = (0..source.len())
            .map(|s| {
                let fam: Vec<usize> = legs.iter().map(|l| l.table[s]).collect();
                *c.data
                    .index
                    .get(&fam)
                    .expect("legs form a cone over the diagram")
            })
            .collect();
        FinSetMap {
            src: source.clone(),
            dst: c.apex.clone(),
            table,
        }
    }

    fn classify(f: &FinSetMap) -> MapClass {
        let mut hit = vec![0usize; f.dst.len()];
        for &y in &f.table {
            hit[y] += 1;
        }
        let mono = hit.iter().all(|&c| c <= 1);
        let epi = hit.iter().all(|&c| c >= 1);
        MapClass {
            mono,
            epi,
            iso: mono && epi,
        }
    }

    fn inverse(f: &FinSetMap) -> Option<FinSetMap> {
        if !Self::classify(f).iso {
            return None;
        }
        let mut table = vec![0; f.dst.len()];
        for (x, &y) in f.table.iter().enumerate() {
            table[y] = x;
        }
        Some(FinSetMap {
            src: f.dst.clone(),
            dst: f.src.clone(),
            table,
        })
    }

    fn isomorphic(a: &FinSet, b: &FinSet) -> bool {
        a.len() == b.len()
    }

    fn image(f: &FinSetMap) -> (FinSet, FinSetMap) {
        let mut hit = vec![false; f.dst.len()];
        for &y in &f.table {
            hit[y] = true;
        }
        let elems: Vec<usize> = (0..f.dst.len()).filter(|&y| hit[y]).collect();
        let im = FinSet::new(elems.len());
        let incl = FinSetMap {
            src: im.clone(),
            dst: f.dst.clone(),
            table: elems,
        };
        (im, incl)
    }

    fn diagonal_fill(
        top: &FinSetMap,
        bottom: &FinSetMap,
        left: &FinSetMap,
        right: &FinSetMap,
    ) -> Option<FinSetMap> {
        let y_size = top.dst.len();
        let mut h: Vec<Option<usize>> = vec![None; y_size];
        for (a, &y) in top.table.iter().enumerate() {
            let b = left.table[a];
            match h[y] {
                Some(prev) if prev != b => return None,
                _ => h[y] = Some(b),
            }
        }
        let mut table = Vec::with_capacity(y_size);
        for (y, slot) in h.into_iter().enumerate() {
            let b = match slot {
                Some(b) => b,
                None => (0..bottom.src.len()).find(|&b| bottom.table[b] == right.table[y])?,
            };
            if bottom.table[b] != right.table[y] {
                return None;
            }
            table.push(b);
        }
        Some(FinSetMap {
            src: top.dst.clone(),
            dst: left.dst.clone(),
            table,
        })
    }

    fn separating_pair(g: &FinSet, p: &FinSetMap, q: &FinSetMap) -> Option<(FinSetMap, FinSetMap)> {
        if g.len() < 2 {
            return None;
        }
        let y = &p.dst;
        let mut in_q = vec![false; y.len()];
        for &v in &q.table {
            in_q[v] = true;
        }
        if p.table.iter().all(|&v| in_q[v]) {
            return None;
        }
        let u = FinSetMap {
            src: y.clone(),
            dst: g.clone(),
            table: vec![0; y.len()],
        };
        let v = FinSetMap {
            src: y.clone(),
            dst: g.clone(),
            table: (0..y.len()).map(|e| usize::from(!in_q[e])).collect(),
        };
        Some((u, v))
    }

    fn default_test_family(objects: &[FinSet]) -> Vec<FinSet> {
        let max = objects.iter().map(FinSet::len).max().unwrap_or(0);
        (0..=max + 1).map(FinSet::new).collect()
    }

    fn enumerate_homs(a: &FinSet, b: &FinSet) -> Option<Vec<FinSetMap>> {
        if a.is_empty() {
            return Some(vec![Self::initial_map(b)]);
        }
        if b.is_empty() {
            return Some(Vec::new());
        }
        let mut out = Vec::new();
        let mut table = vec![0; a.len()];
        loop {
            out.push(FinSetMap {
                src: a.clone(),
                dst: b.clone(),
                table: table.clone(),
            });
            let mut i = 0;
            loop {
                if i == table.len() {
                    return Some(out);
                }
                table[i] += 1;
                if table[i] < b.len() {
                    break;
                }
                table[i] = 0;
                i += 1;
            }
        }
    }

    fn describe(x: &FinSet) -> String {
        x.len().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{coequalizer, equalizer};

    fn map(src: usize, dst: usize, t: &[usize]) -> FinSetMap {
        FinSetMap::new(FinSet::new(src), FinSet::new(dst), t.to_vec()).unwrap()
    }

    #[test]
    fn coequalizer_merges_classes() {
        let f = map(2, 3, &[0, 1]);
        let g = map(2, 3, &[1, 1]);
        let c = coequalizer::<FinSetCat>(&f, &g);
        assert_eq!(c.apex.len(), 2);
        let leg = &c.legs[1];
        assert_eq!(leg.apply(0), leg.apply(1));
        assert_ne!(leg.apply(0), leg.apply(2));
    }

    #[test]
    fn equalizer_filters_points() {
        let f = map(2, 3, &[0, 1]);
        let g = map(2, 3, &[1, 1]);
        let e = equalizer::<FinSetCat>(&f, &g);
        assert_eq!(e.apex.len(), 1);
        assert_eq!(e.legs[0].apply(0), 1);
    }

    #[test]
    fn empty_limit_is_terminal() {
        let c = FinSetCat::limit(&FiniteDiagram::discrete(Vec::new()));
        assert!(FinSetCat::is_terminal(&c.apex));
    }

    #[test]
    fn classification() {
        let s = map(3, 2, &[0, 1, 1]);
        assert_eq!(
            FinSetCat::classify(&s),
            MapClass {
                mono: false,
                epi: true,
                iso: false
            }
        );
        let id = FinSetCat::identity(&FinSet::new(3));
        assert!(FinSetCat::classify(&id).iso);
    }

    #[test]
    fn hom_enumeration_counts() {
        let homs = FinSetCat::enumerate_homs(&FinSet::new(3), &FinSet::new(2)).unwrap();
        assert_eq!(homs.len(), 8);
        assert_eq!(
            FinSetCat::enumerate_homs(&FinSet::new(0), &FinSet::new(0))
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            FinSetCat::enumerate_homs(&FinSet::new(1), &FinSet::new(0))
                .unwrap()
                .len(),
            0
        );
    }

    #[test]
    fn diagonal_fill_respects_constraints() {
        // top: A={0} → Y={0,1}, bottom: B={0,1} → Z={0}
        let top = map(1, 2, &[0]);
        let bottom = map(2, 1, &[0, 0]);
        let left = map(1, 2, &[1]);
        let right = map(2, 1, &[0, 0]);
        let h = FinSetCat::diagonal_fill(&top, &bottom, &left, &right).unwrap();
        assert_eq!(h.table(), &[1, 0]);
    }
}

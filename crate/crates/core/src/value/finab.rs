//! The category of finitely generated abelian groups, as presentations
//! `Z^n / im(R)` with integer-matrix morphisms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::zmatrix::{
    in_column_lattice, integer_kernel, smith_normal_form, solve_integer, solve_integer_matrix,
    ZMatrix,
};
use super::{Cocone, Cone, FiniteDiagram, MapClass, ValueCategory};

/// The group `Z^gens / (column span of relations)`.
/// Equality is equality of presentations; use [`FinAbCat::isomorphic`]
/// to compare groups.
#[derive(Clone, PartialEq, Eq)]
pub struct FinAb {
    gens: usize,
    relations: ZMatrix,
}

impl fmt::Debug for FinAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinAb(gens={}, rel={:?}, ≅ {})",
            self.gens,
            self.relations.to_rows(),
            FinAbCat::describe(self)
        )
    }
}

/// A canonical presentation `⊕ Z/d_i ⊕ Z^r` together with mutually inverse
/// generator-level maps to and from the original presentation.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub obj: FinAb,
    /// Matrix of the isomorphism original → canonical.
    pub to: ZMatrix,
    /// Matrix of the isomorphism canonical → original.
    pub from: ZMatrix,
}

impl FinAb {
    pub fn new(gens: usize, relations: ZMatrix) -> Result<Self> {
        if relations.rows() != gens {
            return Err(Error::InvalidValue(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                gens
            )));
        }
        Ok(FinAb { gens, relations })
    }

    pub fn zero() -> Self {
        FinAb {
            gens: 0,
            relations: ZMatrix::zeros(0, 0),
        }
    }

    pub fn free(n: usize) -> Self {
        FinAb {
            gens: n,
            relations: ZMatrix::zeros(n, 0),
        }
    }

    /// `Z/d`, with `d = 0` meaning `Z`.
    pub fn cyclic(d: i64) -> Self {
        Self::from_invariants(&[d])
    }

    /// `⊕ Z/d_i`, each `d_i = 0` contributing a free summand.
    pub fn from_invariants(ds: &[i64]) -> Self {
        let torsion: Vec<usize> = (0..ds.len()).filter(|&i| ds[i] != 0).collect();
        let mut r = ZMatrix::zeros(ds.len(), torsion.len());
        for (c, &i) in torsion.iter().enumerate() {
            r[(i, c)] = BigInt::from(ds[i]);
        }
        FinAb {
            gens: ds.len(),
            relations: r,
        }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &ZMatrix {
        &self.relations
    }

    /// Torsion invariant factors (all `> 1`, divisibility chain) and free rank.
    pub fn invariants(&self) -> (Vec<BigInt>, usize) {
        let s = smith_normal_form(&self.relations);
        let torsion = s
            .invariant_factors()
            .into_iter()
            .map(|d| d.abs())
            .filter(|d| !d.is_one())
            .collect();
        (torsion, self.gens - s.rank)
    }

    pub fn is_trivial(&self) -> bool {
        let (t, r) = self.invariants();
        t.is_empty() && r == 0
    }

    /// Diagonal relations `d_i` at rows `0..t`, i.e. canonical shape.
    fn torsion_diagonal(&self) -> Option<Vec<BigInt>> {
        let t = self.relations.cols();
        if t > self.gens {
            return None;
        }
        let mut ds = Vec::with_capacity(t);
        for j in 0..t {
            for i in 0..self.gens {
                let v = &self.relations[(i, j)];
                if (i == j) != !v.is_zero() {
                    return None;
                }
            }
            ds.push(self.relations[(j, j)].abs());
        }
        Some(ds)
    }

    /// Reduces torsion rows modulo their order when the presentation is
    /// diagonal. Keeps matrices small after repeated composition.
    pub fn reduce(&self, m: &mut ZMatrix) {
        if let Some(ds) = self.torsion_diagonal() {
            for (i, d) in ds.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                for j in 0..m.cols() {
                    let v = m[(i, j)].mod_floor(d);
                    m[(i, j)] = v;
                }
            }
        }
    }

    pub fn canonicalize(&self) -> Canonical {
        let s = smith_normal_form(&self.relations);
        let keep: Vec<usize> = (0..self.gens)
            .filter(|&i| i >= s.rank || !s.diag(i).abs().is_one())
            .collect();
        let ds: Vec<BigInt> = keep.iter().map(|&i| s.diag(i).abs()).collect();
        let torsion = ds.iter().filter(|d| !d.is_zero()).count();
        let mut rel = ZMatrix::zeros(keep.len(), torsion);
        for (c, d) in ds.iter().take(torsion).enumerate() {
            rel[(c, c)] = d.clone();
        }
        let obj = FinAb {
            gens: keep.len(),
            relations: rel,
        };
        let mut to = ZMatrix::zeros(keep.len(), self.gens);
        let mut from = ZMatrix::zeros(self.gens, keep.len());
        for (k, &i) in keep.iter().enumerate() {
            for j in 0..self.gens {
                to[(k, j)] = s.left[(i, j)].clone();
                from[(j, k)] = s.left_inv[(j, i)].clone();
            }
        }
        obj.reduce(&mut to);
        self.reduce(&mut from);
        Canonical { obj, to, from }
    }

    /// Whether each column of `v` is zero in this group.
    pub fn is_zero_vectors(&self, v: &ZMatrix) -> bool {
        in_column_lattice(&self.relations, v)
    }
}

/// A homomorphism given by its action on generators.
#[derive(Clone)]
pub struct FinAbMap {
    src: FinAb,
    dst: FinAb,
    matrix: ZMatrix,
}

impl fmt::Debug for FinAbMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAbMap({:?})", self.matrix.to_rows())
    }
}

impl FinAbMap {
    /// Checks well-definedness: the image of every source relation is a
    /// relation of the target.
    pub fn new(src: FinAb, dst: FinAb, matrix: ZMatrix) -> Result<Self> {
        if matrix.rows() != dst.gens || matrix.cols() != src.gens {
            return Err(Error::InvalidValue(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                dst.gens,
                src.gens
            )));
        }
        let f = FinAbMap { src, dst, matrix };
        if f.certificate().is_none() {
            return Err(Error::InvalidValue(
                "matrix does not respect the source relations".into(),
            ));
        }
        Ok(f)
    }

    pub(crate) fn raw(src: FinAb, dst: FinAb, mut matrix: ZMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), dst.gens);
        debug_assert_eq!(matrix.cols(), src.gens);
        dst.reduce(&mut matrix);
        FinAbMap { src, dst, matrix }
    }

    pub fn zero(src: &FinAb, dst: &FinAb) -> Self {
        FinAbMap {
            src: src.clone(),
            dst: dst.clone(),
            matrix: ZMatrix::zeros(dst.gens, src.gens),
        }
    }

    /// Multiplication by an integer on a single group.
    pub fn scalar(a: &FinAb, c: i64) -> Self {
        FinAbMap::raw(
            a.clone(),
            a.clone(),
            ZMatrix::identity(a.gens).scale(&BigInt::from(c)),
        )
    }

    /// A matrix `T` with `M · R_src = R_dst · T`.
    pub fn certificate(&self) -> Option<ZMatrix> {
        let lhs = self.matrix.mul(&self.src.relations);
        if lhs.is_zero() {
            return Some(ZMatrix::zeros(
                self.dst.relations.cols(),
                self.src.relations.cols(),
            ));
        }
        solve_integer_matrix(&self.dst.relations, &lhs)
    }

    pub fn matrix(&self) -> &ZMatrix {
        &self.matrix
    }

    pub fn src(&self) -> &FinAb {
        &self.src
    }

    pub fn dst(&self) -> &FinAb {
        &self.dst
    }

    pub fn is_zero(&self) -> bool {
        self.dst.is_zero_vectors(&self.matrix)
    }

    pub fn add(&self, other: &FinAbMap) -> FinAbMap {
        FinAbMap::raw(
            self.src.clone(),
            self.dst.clone(),
            self.matrix.add(&other.matrix),
        )
    }

    pub fn sub(&self, other: &FinAbMap) -> FinAbMap {
        FinAbMap::raw(
            self.src.clone(),
            self.dst.clone(),
            self.matrix.sub(&other.matrix),
        )
    }
}

/// Kernel of `f` with its inclusion.
pub fn kernel(f: &FinAbMap) -> (FinAb, FinAbMap) {
    let (kx, rels) = kernel_presentation(f);
    let raw = FinAb {
        gens: kx.cols(),
        relations: rels,
    };
    let c = raw.canonicalize();
    let incl = FinAbMap::raw(c.obj.clone(), f.src.clone(), kx.mul(&c.from));
    (c.obj, incl)
}

/// Generators of `ker f` as columns over `src f`, and the relations among
/// them, as a (possibly redundant) presentation.
fn kernel_presentation(f: &FinAbMap) -> (ZMatrix, ZMatrix) {
    let a = f.src.gens;
    let n = integer_kernel(&f.matrix.hstack(&f.dst.relations));
    let kx = n.row_range(0, a);
    let k = kx.cols();
    let rel_basis = integer_kernel(&kx.hstack(&f.src.relations));
    let rels = rel_basis.row_range(0, k);
    (kx, rels)
}

/// Cokernel of `f` with its projection.
pub fn cokernel(f: &FinAbMap) -> (FinAb, FinAbMap) {
    let raw = FinAb {
        gens: f.dst.gens,
        relations: f.dst.relations.hstack(&f.matrix),
    };
    let c = raw.canonicalize();
    let proj = FinAbMap::raw(f.dst.clone(), c.obj.clone(), c.to.clone());
    (c.obj, proj)
}

/// Data needed to factor cocones through a computed colimit.
#[derive(Clone, Debug)]
pub struct AbCoconeData {
    /// Canonical apex generators as vectors in the direct sum of the nodes.
    from: ZMatrix,
}

/// Data needed to factor cones through a computed limit.
#[derive(Clone, Debug)]
pub struct AbConeData {
    /// Kernel generators as vectors in the product of the nodes.
    kx: ZMatrix,
    product_relations: ZMatrix,
    to: ZMatrix,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FinAbCat;

fn offsets(nodes: &[FinAb]) -> (Vec<usize>, usize) {
    let mut offs = Vec::with_capacity(nodes.len());
    let mut total = 0;
    for x in nodes {
        offs.push(total);
        total += x.gens;
    }
    (offs, total)
}

fn direct_sum(nodes: &[FinAb]) -> FinAb {
    let (_, total) = offsets(nodes);
    let blocks: Vec<&ZMatrix> = nodes.iter().map(|x| &x.relations).collect();
    let relations = if nodes.is_empty() {
        ZMatrix::zeros(0, 0)
    } else {
        ZMatrix::block_diag(&blocks)
    };
    FinAb {
        gens: total,
        relations,
    }
}

fn gcd0(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

fn prime_powers(n: &BigInt, out: &mut Vec<BigInt>) {
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if m.is_multiple_of(&p) {
            let mut q = BigInt::one();
            while m.is_multiple_of(&p) {
                m /= &p;
                q *= &p;
                out.push(q.clone());
            }
        }
        p += 1;
    }
    if m > BigInt::one() {
        out.push(m);
    }
}

/// Solves for `H: Y → B` subject to `H ∘ top = left` and
/// `bottom ∘ H = right`, both modulo relations, plus well-definedness.
fn solve_fill(
    top: &FinAbMap,
    bottom: &FinAbMap,
    left: &FinAbMap,
    right: &FinAbMap,
) -> Option<ZMatrix> {
    let y = &top.dst;
    let b = &left.dst;
    let z = &bottom.dst;
    let a_g = top.src.gens;
    let (bg, yg, zg) = (b.gens, y.gens, z.gens);
    let (ry, rb, rz) = (y.relations.cols(), b.relations.cols(), z.relations.cols());
    let nh = bg * yg;
    let (n1, n2, n3) = (rb * ry, rb * a_g, rz * yg);
    let rows1 = bg * ry;
    let rows2 = bg * a_g;
    let rows3 = zg * yg;
    let total_cols = nh + n1 + n2 + n3;
    let total_rows = rows1 + rows2 + rows3;
    if total_rows == 0 {
        return Some(ZMatrix::zeros(bg, yg));
    }
    let mut sys = ZMatrix::zeros(total_rows, total_cols);
    let mut rhs = vec![BigInt::zero(); total_rows];
    let put = |sys: &mut ZMatrix, r0: usize, c0: usize, m: &ZMatrix, sign: i64| {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    sys[(r0 + i, c0 + j)] = &m[(i, j)] * sign;
                }
            }
        }
    };
    // H R_Y - R_B T1 = 0
    put(
        &mut sys,
        0,
        0,
        &y.relations.transpose().kron(&ZMatrix::identity(bg)),
        1,
    );
    put(
        &mut sys,
        0,
        nh,
        &ZMatrix::identity(ry).kron(&b.relations),
        -1,
    );
    // H F_top - R_B T2 = F_left
    put(
        &mut sys,
        rows1,
        0,
        &top.matrix.transpose().kron(&ZMatrix::identity(bg)),
        1,
    );
    put(
        &mut sys,
        rows1,
        nh + n1,
        &ZMatrix::identity(a_g).kron(&b.relations),
        -1,
    );
    for (i, v) in left.matrix.vec_cols().into_iter().enumerate() {
        rhs[rows1 + i] = v;
    }
    // F_bottom H - R_Z T3 = F_right
    put(
        &mut sys,
        rows1 + rows2,
        0,
        &ZMatrix::identity(yg).kron(&bottom.matrix),
        1,
    );
    put(
        &mut sys,
        rows1 + rows2,
        nh + n1 + n2,
        &ZMatrix::identity(yg).kron(&z.relations),
        -1,
    );
    for (i, v) in right.matrix.vec_cols().into_iter().enumerate() {
        rhs[rows1 + rows2 + i] = v;
    }
    let sol = solve_integer(&sys, &rhs)?;
    Some(ZMatrix::from_vec_cols(bg, yg, &sol[..nh]))
}

impl ValueCategory for FinAbCat {
    type Obj = FinAb;
    type Map = FinAbMap;
    type CoconeData = AbCoconeData;
    type ConeData = AbConeData;

    fn name() -> &'static str {
        "finab"
    }

    fn src(f: &FinAbMap) -> &FinAb {
        &f.src
    }

    fn dst(f: &FinAbMap) -> &FinAb {
        &f.dst
    }

    fn identity(x: &FinAb) -> FinAbMap {
        FinAbMap {
            src: x.clone(),
            dst: x.clone(),
            matrix: ZMatrix::identity(x.gens),
        }
    }

    fn compose(g: &FinAbMap, f: &FinAbMap) -> FinAbMap {
        assert_eq!(
            f.dst.gens, g.src.gens,
            "composing maps with mismatched endpoints"
        );
        FinAbMap::raw(f.src.clone(), g.dst.clone(), g.matrix.mul(&f.matrix))
    }

    fn maps_equal(f: &FinAbMap, g: &FinAbMap) -> bool {
        f.src.gens == g.src.gens
            && f.dst.gens == g.dst.gens
            && f.dst.is_zero_vectors(&f.matrix.sub(&g.matrix))
    }

    fn initial() -> FinAb {
        FinAb::zero()
    }

    fn terminal() -> FinAb {
        FinAb::zero()
    }

    fn is_initial(x: &FinAb) -> bool {
        x.is_trivial()
    }

    fn is_terminal(x: &FinAb) -> bool {
        x.is_trivial()
    }

    fn initial_map(x: &FinAb) -> FinAbMap {
        FinAbMap::zero(&FinAb::zero(), x)
    }

    fn terminal_map(x: &FinAb) -> FinAbMap {
        FinAbMap::zero(x, &FinAb::zero())
    }

    fn colimit(d: &FiniteDiagram<FinAbCat>) -> Cocone<FinAbCat> {
        let (offs, total) = offsets(&d.nodes);
        let sum = direct_sum(&d.nodes);
        let mut cols: Vec<Vec<BigInt>> = sum.relations.columns();
        for (s, t, f) in &d.edges {
            for g in 0..d.nodes[*s].gens {
                let mut v = vec![BigInt::zero(); total];
                for r in 0..d.nodes[*t].gens {
                    v[offs[*t] + r] += &f.matrix[(r, g)];
                }
                v[offs[*s] + g] -= BigInt::one();
                cols.push(v);
            }
        }
        let raw = FinAb {
            gens: total,
            relations: ZMatrix::from_columns(total, &cols),
        };
        let c = raw.canonicalize();
        let legs = d
            .nodes
            .iter()
            .enumerate()
            .map(|(i, x)| {
                FinAbMap::raw(
                    x.clone(),
                    c.obj.clone(),
                    c.to.col_range(offs[i], offs[i] + x.gens),
                )
            })
            .collect();
        Cocone {
            apex: c.obj,
            legs,
            data: AbCoconeData { from: c.from },
        }
    }

    fn limit(d: &FiniteDiagram<FinAbCat>) -> Cone<FinAbCat> {
        let (offs, total) = offsets(&d.nodes);
        let product = direct_sum(&d.nodes);
        let targets: Vec<FinAb> = d
            .edges
            .iter()
            .map(|(_, t, _)| d.nodes[*t].clone())
            .collect();
        let (toffs, ttotal) = offsets(&targets);
        let codomain = direct_sum(&targets);
        let mut diff = ZMatrix::zeros(ttotal, total);
        for (e, (s, t, f)) in d.edges.iter().enumerate() {
            for r in 0..f.matrix.rows() {
                for c in 0..f.matrix.cols() {
                    diff[(toffs[e] + r, offs[*s] + c)] += &f.matrix[(r, c)];
                }
                diff[(toffs[e] + r, offs[*t] + r)] -= BigInt::one();
            }
        }
        let dmap = FinAbMap {
            src: product.clone(),
            dst: codomain,
            matrix: diff,
        };
        let (kx, rels) = kernel_presentation(&dmap);
        let raw = FinAb {
            gens: kx.cols(),
            relations: rels,
        };
        let c = raw.canonicalize();
        let incl = kx.mul(&c.from);
        let legs = d
            .nodes
            .iter()
            .enumerate()
            .map(|(i, x)| {
                FinAbMap::raw(
                    c.obj.clone(),
                    x.clone(),
                    incl.row_range(offs[i], offs[i] + x.gens),
                )
            })
            .collect();
        Cone {
            apex: c.obj,
            legs,
            data: AbConeData {
                kx,
                product_relations: product.relations,
                to: c.to,
            },
        }
    }

    fn factor_colimit(c: &Cocone<FinAbCat>, target: &FinAb, legs: &[FinAbMap]) -> FinAbMap {
        let mut joined = ZMatrix::zeros(target.gens, 0);
        for l in legs {
            joined = joined.hstack(&l.matrix);
        }
        FinAbMap::raw(c.apex.clone(), target.clone(), joined.mul(&c.data.from))
    }

    fn factor_limit(c: &Cone<FinAbCat>, source: &FinAb, legs: &[FinAbMap]) -> FinAbMap {
        let mut stacked = ZMatrix::zeros(0, source.gens);
        for l in legs {
            stacked = stacked.vstack(&l.matrix);
        }
        let k = c.data.kx.cols();
        let system = c.data.kx.hstack(&c.data.product_relations);
        let sol =
            solve_integer_matrix(&system, &stacked).expect("legs form a cone over the diagram");
        let g = sol.row_range(0, k);
        FinAbMap::raw(source.clone(), c.apex.clone(), c.data.to.mul(&g))
    }

    fn classify(f: &FinAbMap) -> MapClass {
        let mono = kernel(f).0.gens == 0;
        let epi = cokernel(f).0.gens == 0;
        MapClass {
            mono,
            epi,
            iso: mono && epi,
        }
    }

    fn inverse(f: &FinAbMap) -> Option<FinAbMap> {
        if !Self::classify(f).iso {
            return None;
        }
        let h = solve_fill(f, f, &Self::identity(&f.src), &Self::identity(&f.dst))?;
        Some(FinAbMap::raw(f.dst.clone(), f.src.clone(), h))
    }

    fn isomorphic(a: &FinAb, b: &FinAb) -> bool {
        a.invariants() == b.invariants()
    }

    fn image(f: &FinAbMap) -> (FinAb, FinAbMap) {
        let (kx, _) = kernel_presentation(f);
        let raw = FinAb {
            gens: f.src.gens,
            relations: f.src.relations.hstack(&kx),
        };
        let c = raw.canonicalize();
        let incl = FinAbMap::raw(c.obj.clone(), f.dst.clone(), f.matrix.mul(&c.from));
        (c.obj, incl)
    }

    fn diagonal_fill(
        top: &FinAbMap,
        bottom: &FinAbMap,
        left: &FinAbMap,
        right: &FinAbMap,
    ) -> Option<FinAbMap> {
        let h = solve_fill(top, bottom, left, right)?;
        Some(FinAbMap::raw(top.dst.clone(), left.dst.clone(), h))
    }

    fn separating_pair(g: &FinAb, p: &FinAbMap, q: &FinAbMap) -> Option<(FinAbMap, FinAbMap)> {
        let y = &p.dst;
        let (coker, proj) = cokernel(q);
        let pbar = Self::compose(&proj, p);
        let ds: Vec<BigInt> = coker.torsion_diagonal().expect("cokernel is canonical");
        let dof = |i: usize| ds.get(i).cloned().unwrap_or_else(BigInt::zero);
        let gc = g.canonicalize();
        let es: Vec<BigInt> = gc.obj.torsion_diagonal().expect("canonical");
        for l in 0..gc.obj.gens {
            let e = es.get(l).cloned().unwrap_or_else(BigInt::zero);
            for i in 0..coker.gens {
                let d = dof(i);
                if !d.is_zero() && e.is_zero() {
                    continue;
                }
                let g0 = gcd0(&d, &e);
                let hit = (0..pbar.matrix.cols()).any(|c| {
                    let x = &pbar.matrix[(i, c)];
                    if g0.is_zero() {
                        !x.is_zero()
                    } else {
                        !x.is_multiple_of(&g0)
                    }
                });
                if !hit {
                    continue;
                }
                let mult = if d.is_zero() { BigInt::one() } else { &e / &g0 };
                // w = from_G[:, l] · mult · row_i(proj)
                let mut w = ZMatrix::zeros(g.gens, y.gens);
                for r in 0..g.gens {
                    for c in 0..y.gens {
                        w[(r, c)] = &gc.from[(r, l)] * &mult * &proj.matrix[(i, c)];
                    }
                }
                let v = FinAbMap::raw(y.clone(), g.clone(), w);
                return Some((FinAbMap::zero(y, g), v));
            }
        }
        None
    }

    fn default_test_family(objects: &[FinAb]) -> Vec<FinAb> {
        let mut qs = Vec::new();
        for x in objects {
            for d in x.invariants().0 {
                prime_powers(&d, &mut qs);
            }
        }
        qs.sort();
        qs.dedup();
        let mut out = vec![FinAb::free(1)];
        out.extend(
            qs.into_iter()
                .map(|q| FinAb::cyclic(q.to_i64().expect("small torsion order"))),
        );
        out
    }

    fn enumerate_homs(_a: &FinAb, _b: &FinAb) -> Option<Vec<FinAbMap>> {
        None
    }

    fn describe(x: &FinAb) -> String {
        let (torsion, free) = x.invariants();
        let mut parts: Vec<String> = torsion.iter().map(|d| format!("Z/{d}")).collect();
        if free > 0 {
            parts.push(if free == 1 {
                "Z".to_string()
            } else {
                format!("Z^{free}")
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{coequalizer, equalizer};

    fn times(a: &FinAb, c: i64) -> FinAbMap {
        FinAbMap::scalar(a, c)
    }

    #[test]
    fn coequalizer_of_two_and_zero_is_z2() {
        let z = FinAb::free(1);
        let c = coequalizer::<FinAbCat>(&times(&z, 2), &FinAbMap::zero(&z, &z));
        assert_eq!(FinAbCat::describe(&c.apex), "Z/2");
    }

    #[test]
    fn kernel_of_two_is_zero() {
        let z = FinAb::free(1);
        let e = equalizer::<FinAbCat>(&times(&z, 2), &FinAbMap::zero(&z, &z));
        assert!(e.apex.is_trivial());
    }

    #[test]
    fn classification_of_doubling() {
        let z = FinAb::free(1);
        let c = FinAbCat::classify(&times(&z, 2));
        assert!(c.mono && !c.epi);
        assert_eq!(FinAbCat::describe(&cokernel(&times(&z, 2)).0), "Z/2");
        assert!(FinAbCat::classify(&times(&z, -1)).iso);
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        // Z/2 → Z sending 1 ↦ 1 is not a homomorphism
        assert!(FinAbMap::new(
            FinAb::cyclic(2),
            FinAb::free(1),
            ZMatrix::from_rows(&[vec![1]])
        )
        .is_err());
        assert!(FinAbMap::new(
            FinAb::cyclic(4),
            FinAb::cyclic(2),
            ZMatrix::from_rows(&[vec![1]])
        )
        .is_ok());
    }

    #[test]
    fn inverse_of_unit() {
        let a = FinAb::cyclic(5);
        let f = times(&a, 2);
        let g = FinAbCat::inverse(&f).unwrap();
        assert!(FinAbCat::maps_equal(
            &FinAbCat::compose(&g, &f),
            &FinAbCat::identity(&a)
        ));
    }

    #[test]
    fn doubling_is_detected_by_z2() {
        let z = FinAb::free(1);
        let id = FinAbCat::identity(&z);
        let two = times(&z, 2);
        assert!(FinAbCat::separating_pair(&FinAb::cyclic(2), &id, &two).is_some());
        assert!(FinAbCat::separating_pair(&FinAb::cyclic(3), &id, &two).is_none());
        assert!(FinAbCat::separating_pair(&FinAb::free(1), &id, &two).is_none());
    }

    #[test]
    fn prime_power_needed_inside_z4() {
        let z4 = FinAb::cyclic(4);
        let p =
            FinAbMap::new(FinAb::cyclic(2), z4.clone(), ZMatrix::from_rows(&[vec![2]])).unwrap();
        let q = FinAbMap::zero(&FinAb::zero(), &z4);
        assert!(FinAbCat::separating_pair(&FinAb::cyclic(2), &p, &q).is_none());
        let (u, v) = FinAbCat::separating_pair(&FinAb::cyclic(4), &p, &q).unwrap();
        assert!(!FinAbCat::maps_equal(
            &FinAbCat::compose(&u, &p),
            &FinAbCat::compose(&v, &p)
        ));
        let family = FinAbCat::default_test_family(&[z4]);
        assert_eq!(
            family.iter().map(FinAbCat::describe).collect::<Vec<_>>(),
            vec!["Z", "Z/2", "Z/4"]
        );
    }

    #[test]
    fn image_and_canonical_form() {
        let a = FinAb::from_invariants(&[2, 3]);
        assert_eq!(FinAbCat::describe(&a), "Z/6");
        let (im, incl) = FinAbCat::image(&times(&FinAb::free(1), 3));
        assert_eq!(FinAbCat::describe(&im), "Z");
        assert!(FinAbCat::classify(&incl).mono);
    }
}

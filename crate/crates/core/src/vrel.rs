//! V-relations: dense matrices of quantale elements with relational
//! composition, involution, residuals and the pointwise lattice structure.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};
use crate::report::LawReport;

/// A V-relation `X ⇸ Y` stored row-major, `rows = |X|`, `cols = |Y|`.
#[derive(Clone)]
pub struct VRel {
    q: Arc<Quantale>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for VRel {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data && same_quantale(&self.q, &other.q)
    }
}

impl Eq for VRel {}

impl fmt::Debug for VRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VRel({}x{} over {})[", self.rows, self.cols, self.q.name())?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                f.write_str(self.q.element_name(self.get(i, j)))?;
            }
        }
        f.write_str("]")
    }
}

pub fn same_quantale(a: &Arc<Quantale>, b: &Arc<Quantale>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Which residual to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `t ⟜ r`: the largest `s` with `s·r ≤ t`.
    Left,
    /// `r ⤙ t`: the largest `u` with `r·u ≤ t`.
    Right,
}

impl VRel {
    pub fn new(q: Arc<Quantale>, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::shape(format!("{} entries for a {rows}x{cols} relation", data.len())));
        }
        if let Some(bad) = data.iter().find(|v| v.idx() >= q.len()) {
            return Err(Error::Malformed(format!("element index {} outside {}", bad.0, q.name())));
        }
        Ok(VRel { q, rows, cols, data })
    }

    pub(crate) fn from_raw(q: Arc<Quantale>, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        VRel { q, rows, cols, data }
    }

    pub fn from_fn(q: Arc<Quantale>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        VRel { q, rows, cols, data }
    }

    pub fn bottom(q: Arc<Quantale>, rows: usize, cols: usize) -> Self {
        let b = q.bottom();
        VRel { q, rows, cols, data: vec![b; rows * cols] }
    }

    pub fn top(q: Arc<Quantale>, rows: usize, cols: usize) -> Self {
        let t = q.top();
        VRel { q, rows, cols, data: vec![t; rows * cols] }
    }

    /// `k` on the diagonal, `⊥` elsewhere.
    pub fn identity(q: Arc<Quantale>, n: usize) -> Self {
        let (k, b) = (q.unit(), q.bottom());
        Self::from_fn(q, n, n, |i, j| if i == j { k } else { b })
    }

    /// The graph of a function `f: X → Y` with `|Y| = cod`.
    pub fn from_map(q: Arc<Quantale>, f: &[usize], cod: usize) -> Result<Self> {
        if let Some((x, &y)) = f.iter().enumerate().find(|(_, &y)| y >= cod) {
            return Err(Error::Malformed(format!("map sends {x} to {y}, outside a set of size {cod}")));
        }
        let (k, b) = (q.unit(), q.bottom());
        Ok(Self::from_fn(q, f.len(), cod, |i, j| if f[i] == j { k } else { b }))
    }

    #[inline]
    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.q
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Elem> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn check_same(&self, other: &VRel, what: &str) -> Result<()> {
        if !same_quantale(&self.q, &other.q) {
            return Err(Error::Mismatch(format!("{what}: {} vs {}", self.q.name(), other.q.name())));
        }
        Ok(())
    }

    fn check_shape(&self, other: &VRel, what: &str) -> Result<()> {
        self.check_same(other, what)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// `self · r`: first `r: X ⇸ Y`, then `self: Y ⇸ Z`.
    pub fn compose(&self, r: &VRel) -> Result<VRel> {
        self.check_same(r, "composition")?;
        if r.cols != self.rows {
            return Err(Error::shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, r.rows, r.cols
            )));
        }
        Ok(self.comp(r))
    }

    /// Unchecked composition for internal use.
    pub(crate) fn comp(&self, r: &VRel) -> VRel {
        debug_assert_eq!(r.cols, self.rows);
        let q = &*self.q;
        let (nx, ny, nz) = (r.rows, r.cols, self.cols);
        let bot = q.bottom();
        let mut data = vec![bot; nx * nz];
        for x in 0..nx {
            let out = &mut data[x * nz..(x + 1) * nz];
            for y in 0..ny {
                let rv = r.data[x * ny + y];
                if rv == bot {
                    continue;
                }
                let srow = &self.data[y * nz..(y + 1) * nz];
                for z in 0..nz {
                    out[z] = q.join(out[z], q.tensor(rv, srow[z]));
                }
            }
        }
        VRel { q: self.q.clone(), rows: nx, cols: nz, data }
    }

    /// `r°(y, x) = r(x, y)`.
    pub fn involution(&self) -> VRel {
        VRel::from_fn(self.q.clone(), self.cols, self.rows, |j, i| self.get(i, j))
    }

    /// Residuals computed pointwise from `hom`; see [`Side`].
    ///
    /// Left: `t: X ⇸ Z`, `r = self: X ⇸ Y`, result `Y ⇸ Z`,
    /// `(t ⟜ r)(y, z) = ⋀_x hom(r(x, y), t(x, z))`.
    /// Right: `t: Z ⇸ Y`, `r = self: X ⇸ Y`, result `Z ⇸ X`,
    /// `(r ⤙ t)(z, x) = ⋀_y hom(r(x, y), t(z, y))`.
    pub fn residual(&self, side: Side, t: &VRel) -> Result<VRel> {
        self.check_same(t, "residual")?;
        let r = self;
        let q = &*self.q;
        match side {
            Side::Left => {
                if t.rows != r.rows {
                    return Err(Error::shape("left residual needs t and r with the same source"));
                }
                Ok(VRel::from_fn(self.q.clone(), r.cols, t.cols, |y, z| {
                    q.meet_all((0..r.rows).map(|x| q.hom(r.get(x, y), t.get(x, z))))
                }))
            }
            Side::Right => {
                if t.cols != r.cols {
                    return Err(Error::shape("right residual needs t and r with the same target"));
                }
                Ok(VRel::from_fn(self.q.clone(), t.rows, r.rows, |z, x| {
                    q.meet_all((0..r.cols).map(|y| q.hom(r.get(x, y), t.get(z, y))))
                }))
            }
        }
    }

    pub fn leq(&self, other: &VRel) -> Result<bool> {
        self.check_shape(other, "order")?;
        Ok(self.le(other))
    }

    pub(crate) fn le(&self, other: &VRel) -> bool {
        self.data.iter().zip(&other.data).all(|(&a, &b)| self.q.leq(a, b))
    }

    /// First index pair where `self ≤ other` fails.
    pub fn leq_witness(&self, other: &VRel) -> Option<(usize, usize)> {
        self.data
            .iter()
            .zip(&other.data)
            .position(|(&a, &b)| !self.q.leq(a, b))
            .map(|p| (p / self.cols, p % self.cols))
    }

    pub fn meet(&self, other: &VRel) -> Result<VRel> {
        self.check_shape(other, "meet")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.q.meet(a, b)).collect();
        Ok(VRel { q: self.q.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn join(&self, other: &VRel) -> Result<VRel> {
        self.check_shape(other, "join")?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.q.join(a, b)).collect();
        Ok(VRel { q: self.q.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Enumerates every relation of the given shape (use only at desk scale).
    pub fn all(q: &Arc<Quantale>, rows: usize, cols: usize) -> impl Iterator<Item = VRel> + '_ {
        let n = rows * cols;
        let base = q.len();
        let total = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        (0..total).map(move |mut code| {
            let mut data = Vec::with_capacity(n);
            for _ in 0..n {
                data.push(Elem((code % base as u128) as u16));
                code /= base as u128;
            }
            data.reverse();
            VRel { q: q.clone(), rows, cols, data }
        })
    }
}

/// How the algebra suite draws its cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scan {
    /// Every triple of relations between sets of size `1..=max_set`.
    Exhaustive { max_set: usize },
    /// `cases` random triples between sets of size `1..=max_set`.
    Random { cases: usize, seed: u64, max_set: usize },
}

fn random_rel(q: &Arc<Quantale>, rows: usize, cols: usize, rng: &mut impl rand::Rng) -> VRel {
    VRel::from_fn(q.clone(), rows, cols, |_, _| Elem(rng.gen_range(0..q.len()) as u16))
}

/// Join of every `s: Y ⇸ Z` with `s·r ≤ t`, by enumeration.
fn brute_left_residual(r: &VRel, t: &VRel) -> VRel {
    let q = r.quantale();
    let mut acc = VRel::bottom(q.clone(), r.cols, t.cols);
    for s in VRel::all(q, r.cols, t.cols) {
        if s.comp(r).le(t) {
            acc = acc.join(&s).expect("same shape");
        }
    }
    acc
}

/// Join of every `u: Z ⇸ X` with `r·u ≤ t`, by enumeration.
fn brute_right_residual(r: &VRel, t: &VRel) -> VRel {
    let q = r.quantale();
    let mut acc = VRel::bottom(q.clone(), t.rows, r.rows);
    for u in VRel::all(q, t.rows, r.rows) {
        if r.comp(&u).le(t) {
            acc = acc.join(&u).expect("same shape");
        }
    }
    acc
}

/// Associativity, units, involution and both residual adjunctions, with
/// residuals compared against the brute-force joins.
pub fn check_algebra(q: &Arc<Quantale>, scan: Scan) -> LawReport {
    let how = match scan {
        Scan::Exhaustive { max_set } => format!("all relations on sets ≤ {max_set}"),
        Scan::Random { cases, seed, max_set } => format!("{cases} random cases on sets ≤ {max_set}, seed {seed:#x}"),
    };
    let mut rep = LawReport::new(format!("V-relation algebra over {} ({how})", q.name()));
    let mut w: [Option<String>; 6] = Default::default();
    let (mut n_comp, mut n_res) = (0u64, 0u64);
    // r: A ⇸ B, s: B ⇸ C, t: C ⇸ D
    let mut composition = |r: &VRel, s: &VRel, t: &VRel| {
        n_comp += 1;
        let show = || format!("r = {r:?}, s = {s:?}, t = {t:?}");
        if w[0].is_none() && t.comp(&s.comp(r)) != t.comp(s).comp(r) {
            w[0] = Some(show());
        }
        let (ia, ib) = (VRel::identity(q.clone(), r.rows), VRel::identity(q.clone(), r.cols));
        if w[1].is_none() && (r.comp(&ia) != *r || ib.comp(r) != *r) {
            w[1] = Some(show());
        }
        if w[2].is_none() && (r.involution().involution() != *r || s.comp(r).involution() != r.involution().comp(&s.involution())) {
            w[2] = Some(show());
        }
    };
    // r: A ⇸ B, s: B ⇸ C, t: A ⇸ C
    let mut residuals = |r: &VRel, s: &VRel, t: &VRel, w: &mut [Option<String>; 6]| {
        n_res += 1;
        let show = || format!("r = {r:?}, s = {s:?}, t = {t:?}");
        let left = r.residual(Side::Left, t).expect("shapes");
        if w[3].is_none() && s.comp(r).le(t) != s.le(&left) {
            w[3] = Some(show());
        }
        let right = s.residual(Side::Right, t).expect("shapes");
        if w[4].is_none() && s.comp(r).le(t) != r.le(&right) {
            w[4] = Some(show());
        }
        if w[5].is_none() && (left != brute_left_residual(r, t) || right != brute_right_residual(s, t)) {
            w[5] = Some(show());
        }
    };
    let how = match scan {
        Scan::Exhaustive { max_set } => {
            let sizes: Vec<usize> = (1..=max_set).collect();
            let mut res_w: [Option<String>; 6] = Default::default();
            for &a in &sizes {
                for &b in &sizes {
                    for &c in &sizes {
                        for r in VRel::all(q, a, b) {
                            for s in VRel::all(q, b, c) {
                                for &d in &sizes {
                                    for t in VRel::all(q, c, d) {
                                        composition(&r, &s, &t);
                                    }
                                }
                                for t in VRel::all(q, a, c) {
                                    residuals(&r, &s, &t, &mut res_w);
                                }
                            }
                        }
                    }
                }
            }
            for i in 3..6 {
                w[i] = res_w[i].take();
            }
            "triples".to_string()
        }
        Scan::Random { cases, seed, max_set } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut res_w: [Option<String>; 6] = Default::default();
            for _ in 0..cases {
                let dims: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=max_set)).collect();
                let r = random_rel(q, dims[0], dims[1], &mut rng);
                let s = random_rel(q, dims[1], dims[2], &mut rng);
                let t = random_rel(q, dims[2], dims[3], &mut rng);
                let t2 = random_rel(q, dims[0], dims[2], &mut rng);
                composition(&r, &s, &t);
                residuals(&r, &s, &t2, &mut res_w);
            }
            for i in 3..6 {
                w[i] = res_w[i].take();
            }
            format!("random triples, seed {seed}")
        }
    };
    let names = [
        "composition is associative",
        "identities are units",
        "involution is an involution reversing composition",
        "s·r ≤ t ⟺ s ≤ t ⟜ r",
        "s·r ≤ t ⟺ r ≤ s ⤙ t",
        "pointwise residuals are the largest solutions",
    ];
    for (i, (name, w)) in names.iter().zip(w).enumerate() {
        let k = if i < 3 { n_comp } else { n_res };
        rep.record(*name, w, k, how.clone());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Arc<Quantale> {
        Arc::new(Quantale::boolean())
    }

    #[test]
    fn identity_is_unit() {
        let q = Arc::new(Quantale::truncated_chain(2));
        for s in VRel::all(&q, 2, 1).take(50) {
            let id = VRel::identity(q.clone(), 2);
            assert_eq!(s.compose(&id).unwrap(), s);
        }
    }

    #[test]
    fn boolean_matrix_product() {
        let q = b();
        // r = {(x, y1)} over X = {x}, Y = {y0, y1}; s = {(y1, z)}
        let r = VRel::new(q.clone(), 1, 2, vec![Elem(0), Elem(1)]).unwrap();
        let s = VRel::new(q.clone(), 2, 1, vec![Elem(0), Elem(1)]).unwrap();
        assert_eq!(s.compose(&r).unwrap().data(), &[Elem(1)]);
    }

    #[test]
    fn truncated_chain_single_path_overflows() {
        let q = Arc::new(Quantale::truncated_chain(1));
        let one = q.elem("1").unwrap();
        let r = VRel::new(q.clone(), 1, 1, vec![one]).unwrap();
        let s = r.clone();
        assert_eq!(q.element_name(s.compose(&r).unwrap().get(0, 0)), "inf");
    }

    #[test]
    fn involution() {
        let q = b();
        for r in VRel::all(&q, 2, 3) {
            assert_eq!(r.involution().involution(), r);
        }
        let id = VRel::identity(q, 3);
        assert_eq!(id.involution(), id);
    }

    #[test]
    fn residual_trivial_cases() {
        let q = b();
        for t in VRel::all(&q, 2, 2) {
            let id = VRel::identity(q.clone(), 2);
            assert_eq!(id.residual(Side::Left, &t).unwrap(), t);
        }
        let r = VRel::new(q.clone(), 1, 1, vec![q.unit()]).unwrap();
        let t = VRel::new(q.clone(), 1, 1, vec![q.bottom()]).unwrap();
        assert_eq!(r.residual(Side::Left, &t).unwrap().get(0, 0), q.bottom());
    }

    #[test]
    fn algebra_suite_on_boolean() {
        let rep = check_algebra(&b(), Scan::Exhaustive { max_set: 2 });
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn shape_errors() {
        let q = b();
        let r = VRel::bottom(q.clone(), 2, 3);
        assert!(matches!(r.compose(&r), Err(Error::Shape(_))));
        assert!(r.meet(&VRel::bottom(q.clone(), 3, 2)).is_err());
        let other = Arc::new(Quantale::truncated_chain(1));
        assert!(matches!(VRel::bottom(other, 3, 3).compose(&r), Err(Error::Mismatch(_))));
        assert!(VRel::from_map(q, &[0, 5], 2).is_err());
    }

    #[test]
    fn from_map_is_functorial() {
        let q = b();
        let f = [1usize, 0];
        let g = [1usize, 1];
        let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
        let rf = VRel::from_map(q.clone(), &f, 2).unwrap();
        let rg = VRel::from_map(q.clone(), &g, 2).unwrap();
        assert_eq!(rg.compose(&rf).unwrap(), VRel::from_map(q.clone(), &gf, 2).unwrap());
        assert_eq!(VRel::from_map(q.clone(), &[0, 1], 2).unwrap(), VRel::identity(q.clone(), 2));
        let c = VRel::from_map(q.clone(), &[0, 0, 0], 1).unwrap();
        assert!(c.data().iter().all(|&v| v == q.unit()));
    }
}

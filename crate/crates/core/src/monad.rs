//! Finite-set monads with an algebra `ξ: TV → V`, the lax extension `T_ξ` to
//! V-relations, Kleisli convolution, and the law suites.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};
use crate::report::LawReport;
use crate::vrel::{same_quantale, VRel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonadKind {
    Identity,
    FiniteUltrafilter,
}

impl MonadKind {
    pub fn name(self) -> &'static str {
        match self {
            MonadKind::Identity => "identity",
            MonadKind::FiniteUltrafilter => "finite_ultrafilter",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(MonadKind::Identity),
            "finite_ultrafilter" => Ok(MonadKind::FiniteUltrafilter),
            other => Err(Error::Unsupported(format!("monad kind `{other}`"))),
        }
    }
}

impl fmt::Display for MonadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How an instance equips presheaf spaces with a structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresheafCapability {
    /// `â(𝔭, ψ) = ⋀_𝔵 hom(φ(𝔵), ψ(𝔵))` where `𝔭 = e(φ)`; requires `e` to be bijective.
    PrincipalTransport,
}

/// The enumerated set `TX` for `X = {0, .., base-1}`.
///
/// Each element carries a descriptor: the point itself for the identity
/// monad, the generating set of the (principal) filter for ultrafilters.
#[derive(Debug, Clone)]
pub struct TObject {
    base: usize,
    elems: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl TObject {
    pub fn from_descriptors(base: usize, elems: Vec<Vec<u32>>) -> Self {
        let index = elems.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        TObject { base, elems, index }
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn descriptor(&self, i: usize) -> &[u32] {
        &self.elems[i]
    }

    pub fn find(&self, d: &[u32]) -> Option<usize> {
        self.index.get(d).copied()
    }
}

/// The capability interface every monad instance implements.
pub trait SetMonad: Send + Sync {
    fn kind(&self) -> MonadKind;

    fn label(&self) -> String {
        self.kind().name().to_string()
    }

    fn object(&self, n: usize) -> TObject;

    /// `Tf: TX → TY` for `f: X → Y`.
    fn map(&self, f: &[usize], tx: &TObject, ty: &TObject) -> Vec<usize>;

    fn unit(&self, tx: &TObject) -> Vec<usize>;

    /// `m_X: TTX → TX`, where `ttx` is `T` applied to `tx.len()` points.
    fn mult(&self, tx: &TObject, ttx: &TObject) -> Vec<usize>;

    /// `ξ` indexed by the elements of `TV`.
    fn xi(&self, q: &Quantale, tv: &TObject) -> Vec<Elem>;

    fn presheaf_capability(&self) -> Option<PresheafCapability>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityMonad;

impl SetMonad for IdentityMonad {
    fn kind(&self) -> MonadKind {
        MonadKind::Identity
    }

    fn object(&self, n: usize) -> TObject {
        TObject::from_descriptors(n, (0..n as u32).map(|i| vec![i]).collect())
    }

    fn map(&self, f: &[usize], _tx: &TObject, _ty: &TObject) -> Vec<usize> {
        f.to_vec()
    }

    fn unit(&self, tx: &TObject) -> Vec<usize> {
        (0..tx.len()).collect()
    }

    fn mult(&self, tx: &TObject, _ttx: &TObject) -> Vec<usize> {
        (0..tx.len()).collect()
    }

    fn xi(&self, _q: &Quantale, tv: &TObject) -> Vec<Elem> {
        (0..tv.len()).map(|i| Elem(i as u16)).collect()
    }

    fn presheaf_capability(&self) -> Option<PresheafCapability> {
        Some(PresheafCapability::PrincipalTransport)
    }
}

/// Up to this size ultrafilters are found by scanning every principal filter
/// `↑A` for maximality; above it, as the filters generated by atoms of `PX`.
pub const ULTRAFILTER_SCAN_LIMIT: usize = 12;

/// Ultrafilters on a finite set, each stored by its generating set.
#[derive(Debug, Clone, Copy, Default)]
pub struct FiniteUltrafilterMonad;

impl FiniteUltrafilterMonad {
    fn image(f: &[usize], gen: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = gen.iter().map(|&x| f[x as usize] as u32).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Maximal proper filters of `PX` among the principal filters `↑A`, `A ≠ ∅`:
/// `↑A ⊆ ↑B` iff `B ⊆ A`, so `↑A` is maximal iff no nonempty `B ⊊ A` exists.
pub fn ultrafilter_generators_by_scan(n: usize) -> Vec<Vec<u32>> {
    assert!(n <= 20, "generator scan is exponential");
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let maximal = (0..n).filter(|i| mask >> i & 1 == 1).all(|i| mask & !(1 << i) == 0);
        if maximal {
            out.push((0..n as u32).filter(|i| mask >> i & 1 == 1).collect::<Vec<u32>>());
        }
    }
    out.sort();
    out
}

/// Ultrafilters as maximal proper filters, found among all families of
/// subsets; returns each as the intersection of its members.
pub fn ultrafilters_by_families(n: usize) -> Vec<Vec<u32>> {
    assert!(n <= 4, "family enumeration is doubly exponential");
    let sets = 1usize << n;
    let full = sets - 1;
    let is_filter = |fam: u64| -> bool {
        if fam >> full & 1 == 0 || fam & 1 == 1 {
            return false;
        }
        for a in 0..sets {
            if fam >> a & 1 == 0 {
                continue;
            }
            for b in 0..sets {
                if (b & a == a && fam >> b & 1 == 0) || (fam >> b & 1 == 1 && fam >> (a & b) & 1 == 0) {
                    return false;
                }
            }
        }
        true
    };
    let filters: Vec<u64> = (0..(1u64 << sets)).filter(|&f| is_filter(f)).collect();
    let mut out: Vec<Vec<u32>> = filters
        .iter()
        .filter(|&&f| !filters.iter().any(|&g| g != f && g & f == f))
        .map(|&f| {
            let meet = (0..sets).filter(|a| f >> a & 1 == 1).fold(full, |acc, a| acc & a);
            (0..n as u32).filter(|i| meet >> i & 1 == 1).collect()
        })
        .collect();
    out.sort();
    out
}

impl SetMonad for FiniteUltrafilterMonad {
    fn kind(&self) -> MonadKind {
        MonadKind::FiniteUltrafilter
    }

    fn object(&self, n: usize) -> TObject {
        let gens = if n <= ULTRAFILTER_SCAN_LIMIT {
            ultrafilter_generators_by_scan(n)
        } else {
            // atoms of PX: the upper covers of ∅
            (0..n as u32).map(|i| vec![i]).collect()
        };
        TObject::from_descriptors(n, gens)
    }

    fn map(&self, f: &[usize], tx: &TObject, ty: &TObject) -> Vec<usize> {
        (0..tx.len())
            .map(|i| {
                let img = Self::image(f, tx.descriptor(i));
                ty.find(&img).expect("pushforward of an ultrafilter is an ultrafilter")
            })
            .collect()
    }

    fn unit(&self, tx: &TObject) -> Vec<usize> {
        (0..tx.base() as u32).map(|x| tx.find(&[x]).expect("principal ultrafilter")).collect()
    }

    fn mult(&self, tx: &TObject, ttx: &TObject) -> Vec<usize> {
        // A ∈ m(𝔛) iff A ⊇ gen(𝔵) for every 𝔵 in the generator of 𝔛
        (0..ttx.len())
            .map(|i| {
                let mut u: Vec<u32> =
                    ttx.descriptor(i).iter().flat_map(|&t| tx.descriptor(t as usize).iter().copied()).collect();
                u.sort_unstable();
                u.dedup();
                tx.find(&u).expect("Kleisli sum of ultrafilters is an ultrafilter")
            })
            .collect()
    }

    fn xi(&self, q: &Quantale, tv: &TObject) -> Vec<Elem> {
        // ξ(𝔵) = ⋁{v | ↑v ∈ 𝔵}, and ↑v ∈ 𝔵 iff gen(𝔵) ⊆ ↑v
        (0..tv.len())
            .map(|i| {
                let gen = tv.descriptor(i);
                q.join_all(q.elements().filter(|&v| gen.iter().all(|&w| q.leq(v, Elem(w as u16)))))
            })
            .collect()
    }

    fn presheaf_capability(&self) -> Option<PresheafCapability> {
        Some(PresheafCapability::PrincipalTransport)
    }
}

/// Test hook: wraps an instance and swaps two outputs of every `m_X` with enough elements.
pub struct SwappedMult<M> {
    pub inner: M,
    pub a: usize,
    pub b: usize,
}

impl<M: SetMonad> SetMonad for SwappedMult<M> {
    fn kind(&self) -> MonadKind {
        self.inner.kind()
    }

    fn label(&self) -> String {
        format!("{}[m swap {} {}]", self.inner.label(), self.a, self.b)
    }

    fn object(&self, n: usize) -> TObject {
        self.inner.object(n)
    }

    fn map(&self, f: &[usize], tx: &TObject, ty: &TObject) -> Vec<usize> {
        self.inner.map(f, tx, ty)
    }

    fn unit(&self, tx: &TObject) -> Vec<usize> {
        self.inner.unit(tx)
    }

    fn mult(&self, tx: &TObject, ttx: &TObject) -> Vec<usize> {
        let mut m = self.inner.mult(tx, ttx);
        if self.a < m.len() && self.b < m.len() {
            m.swap(self.a, self.b);
        }
        m
    }

    fn xi(&self, q: &Quantale, tv: &TObject) -> Vec<Elem> {
        self.inner.xi(q, tv)
    }

    fn presheaf_capability(&self) -> Option<PresheafCapability> {
        self.inner.presheaf_capability()
    }
}

type Cache<T> = RwLock<HashMap<usize, Arc<T>>>;

fn cached<T>(cache: &Cache<T>, n: usize, make: impl FnOnce() -> T) -> Arc<T> {
    if let Some(v) = cache.read().expect("cache lock").get(&n) {
        return v.clone();
    }
    let v = Arc::new(make());
    cache.write().expect("cache lock").entry(n).or_insert(v).clone()
}

/// A monad instance bound to a quantale, with `TX`, `e_X` and `m_X` cached per size.
pub struct Monad {
    imp: Box<dyn SetMonad>,
    q: Arc<Quantale>,
    xi: Vec<Elem>,
    objects: Cache<TObject>,
    units: Cache<Vec<usize>>,
    mults: Cache<Vec<usize>>,
}

impl fmt::Debug for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monad({} over {})", self.label(), self.q.name())
    }
}

impl PartialEq for Monad {
    fn eq(&self, other: &Self) -> bool {
        self.label() == other.label() && *self.q == *other.q
    }
}

impl Monad {
    pub fn new(imp: Box<dyn SetMonad>, q: Arc<Quantale>) -> Self {
        let tv = imp.object(q.len());
        let xi = imp.xi(&q, &tv);
        let m = Monad {
            imp,
            q,
            xi,
            objects: RwLock::new(HashMap::new()),
            units: RwLock::new(HashMap::new()),
            mults: RwLock::new(HashMap::new()),
        };
        m.objects.write().expect("cache lock").insert(tv.base(), Arc::new(tv));
        m
    }

    pub fn instantiate(kind: MonadKind, q: Arc<Quantale>) -> Self {
        match kind {
            MonadKind::Identity => Monad::new(Box::new(IdentityMonad), q),
            MonadKind::FiniteUltrafilter => Monad::new(Box::new(FiniteUltrafilterMonad), q),
        }
    }

    pub fn identity(q: Arc<Quantale>) -> Arc<Self> {
        Arc::new(Self::instantiate(MonadKind::Identity, q))
    }

    pub fn ultrafilter(q: Arc<Quantale>) -> Arc<Self> {
        Arc::new(Self::instantiate(MonadKind::FiniteUltrafilter, q))
    }

    pub fn kind(&self) -> MonadKind {
        self.imp.kind()
    }

    pub fn label(&self) -> String {
        self.imp.label()
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.q
    }

    pub fn presheaf_capability(&self) -> Option<PresheafCapability> {
        self.imp.presheaf_capability()
    }

    pub fn tobj(&self, n: usize) -> Arc<TObject> {
        cached(&self.objects, n, || self.imp.object(n))
    }

    pub fn t_size(&self, n: usize) -> usize {
        self.tobj(n).len()
    }

    /// `Tf` for `f: X → Y` with `|X| = f.len()`, `|Y| = ny`.
    pub fn t_map(&self, f: &[usize], ny: usize) -> Vec<usize> {
        let tx = self.tobj(f.len());
        let ty = self.tobj(ny);
        self.imp.map(f, &tx, &ty)
    }

    /// `e_X`.
    pub fn unit(&self, n: usize) -> Arc<Vec<usize>> {
        cached(&self.units, n, || self.imp.unit(&self.tobj(n)))
    }

    /// `m_X: TTX → TX`.
    pub fn mult(&self, n: usize) -> Arc<Vec<usize>> {
        cached(&self.mults, n, || {
            let tx = self.tobj(n);
            let ttx = self.tobj(tx.len());
            self.imp.mult(&tx, &ttx)
        })
    }

    /// Inverse of `e_X` when it is a bijection.
    pub fn principal_inverse(&self, n: usize) -> Option<Vec<usize>> {
        let e = self.unit(n);
        let t = self.t_size(n);
        if t != n {
            return None;
        }
        let mut inv = vec![usize::MAX; t];
        for (x, &tx) in e.iter().enumerate() {
            if inv[tx] != usize::MAX {
                return None;
            }
            inv[tx] = x;
        }
        Some(inv)
    }

    /// `ξ` at an element of `TV`.
    pub fn xi(&self, tv: usize) -> Elem {
        self.xi[tv]
    }

    /// `ξ·Tφ: TX → V` for `φ: X → V`.
    pub fn xi_lift(&self, phi: &[Elem]) -> Vec<Elem> {
        let f: Vec<usize> = phi.iter().map(|v| v.idx()).collect();
        self.t_map(&f, self.q.len()).into_iter().map(|t| self.xi[t]).collect()
    }

    /// `T_ξ r: TX ⇸ TY`.
    pub fn lax_extend(&self, r: &VRel) -> Result<VRel> {
        if !same_quantale(r.quantale(), &self.q) {
            return Err(Error::Mismatch(format!("relation over {}, monad over {}", r.quantale().name(), self.q.name())));
        }
        Ok(self.lax(r))
    }

    pub(crate) fn lax(&self, r: &VRel) -> VRel {
        let (nx, ny) = (r.rows(), r.cols());
        let p1: Vec<usize> = (0..nx * ny).map(|i| i / ny.max(1)).collect();
        let p2: Vec<usize> = (0..nx * ny).map(|i| i % ny.max(1)).collect();
        let tp1 = self.t_map(&p1, nx);
        let tp2 = self.t_map(&p2, ny);
        let tr = self.xi_lift(r.data());
        let (tx, ty) = (self.t_size(nx), self.t_size(ny));
        let mut out = VRel::bottom(self.q.clone(), tx, ty);
        for w in 0..tr.len() {
            let cur = out.get(tp1[w], tp2[w]);
            out.set(tp1[w], tp2[w], self.q.join(cur, tr[w]));
        }
        out
    }

    /// The map `f` as a relation `X ⇸ Y`.
    pub fn graph(&self, f: &[usize], ny: usize) -> VRel {
        VRel::from_map(self.q.clone(), f, ny).expect("total map")
    }

    /// `T_ξ r · m_X°: TX ⇸ TY` for `r: TX ⇸ Y`; Kleisli convolution is `s · (this)`.
    pub fn kleisli_prefix(&self, r: &VRel, nx: usize) -> Result<VRel> {
        let tx = self.t_size(nx);
        if r.rows() != tx {
            return Err(Error::shape(format!("relation has {} rows, T of {nx} points has {tx}", r.rows())));
        }
        let tr = self.lax_extend(r)?;
        let m = self.mult(nx);
        let mut out = VRel::bottom(self.q.clone(), tx, tr.cols());
        for (big, &small) in m.iter().enumerate() {
            for j in 0..tr.cols() {
                let cur = out.get(small, j);
                out.set(small, j, self.q.join(cur, tr.get(big, j)));
            }
        }
        Ok(out)
    }

    /// `s ∘ r = s · T_ξ r · m_X°` for `r: TX ⇸ Y`, `s: TY ⇸ Z`.
    pub fn kleisli(&self, s: &VRel, r: &VRel, nx: usize) -> Result<VRel> {
        let pre = self.kleisli_prefix(r, nx)?;
        s.compose(&pre)
    }
}

fn all_maps(nx: usize, ny: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if nx == 0 { 1 } else if ny == 0 { 0 } else { ny.pow(nx as u32) };
    (0..total).map(move |mut c| {
        let mut f = vec![0; nx];
        for slot in f.iter_mut().rev() {
            *slot = c % ny;
            c /= ny;
        }
        f
    })
}

fn compose_maps(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

/// Upper bound on exhaustive relation scans per shape; larger shapes are sampled.
pub const RELATION_SCAN_BUDGET: u64 = 4096;

fn relations(q: &Arc<Quantale>, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> (Vec<VRel>, bool) {
    let total = (q.len() as u128).checked_pow((rows * cols) as u32).unwrap_or(u128::MAX);
    if total <= RELATION_SCAN_BUDGET as u128 {
        (VRel::all(q, rows, cols).collect(), true)
    } else {
        let n = q.len();
        let rels = (0..64)
            .map(|_| VRel::from_fn(q.clone(), rows, cols, |_, _| Elem(rng.gen_range(0..n) as u16)))
            .collect();
        (rels, false)
    }
}

impl Monad {
    /// Every law of the instance on sets with at most `limit` points.
    pub fn check_laws(&self, limit: usize) -> LawReport {
        let q = &self.q;
        let mut rep = LawReport::new(format!("monad {} over {}", self.label(), q.name()));
        let sizes = 0..=limit;

        let mut w = None;
        let mut n_scan = 0u64;
        for n in sizes.clone() {
            let tn = self.t_size(n);
            let e_t = self.unit(tn);
            let te = self.t_map(&self.unit(n), tn);
            let m = self.mult(n);
            for t in 0..tn {
                n_scan += 1;
                if w.is_none() && (m[te[t]] != t || m[e_t[t]] != t) {
                    w = Some(format!("|X| = {n}, element {t}: m·Te -> {}, m·eT -> {}", m[te[t]], m[e_t[t]]));
                }
            }
        }
        rep.record("monad unit laws", w, n_scan, "elements of TX");

        let (mut w, mut n_scan) = (None, 0u64);
        for n in sizes.clone() {
            let tn = self.t_size(n);
            let ttn = self.t_size(tn);
            let m = self.mult(n);
            let m_t = self.mult(tn);
            let tm = self.t_map(&m, tn);
            for big in 0..self.t_size(ttn) {
                n_scan += 1;
                if w.is_none() && m[tm[big]] != m[m_t[big]] {
                    w = Some(format!("|X| = {n}, element {big} of TTTX: {} vs {}", m[tm[big]], m[m_t[big]]));
                }
            }
        }
        rep.record("monad associativity", w, n_scan, "elements of TTTX");

        let (mut w, mut n_scan) = (None, 0u64);
        for nx in sizes.clone() {
            for ny in sizes.clone() {
                for f in all_maps(nx, ny) {
                    n_scan += 1;
                    if w.is_some() {
                        continue;
                    }
                    let tf = self.t_map(&f, ny);
                    let ex = self.unit(nx);
                    let ey = self.unit(ny);
                    if compose_maps(&tf, &ex) != compose_maps(&ey, &f) {
                        w = Some(format!("e not natural at f = {f:?}"));
                        continue;
                    }
                    let ttf = self.t_map(&tf, self.t_size(ny));
                    if compose_maps(&self.mult(ny), &ttf) != compose_maps(&tf, &self.mult(nx)) {
                        w = Some(format!("m not natural at f = {f:?}"));
                        continue;
                    }
                    for nz in sizes.clone() {
                        for g in all_maps(ny, nz) {
                            let lhs = self.t_map(&compose_maps(&g, &f), nz);
                            let rhs = compose_maps(&self.t_map(&g, nz), &tf);
                            if lhs != rhs && w.is_none() {
                                w = Some(format!("T(g·f) != Tg·Tf at f = {f:?}, g = {g:?}"));
                            }
                        }
                    }
                    if nx == ny && f.iter().enumerate().all(|(i, &y)| i == y) && tf.iter().enumerate().any(|(i, &y)| i != y) {
                        w = Some(format!("T(id) != id on {nx} points"));
                    }
                }
            }
        }
        rep.record("functoriality and naturality of e, m", w, n_scan, "maps");

        let nv = q.len();
        let tv = self.t_size(nv);
        let ev = self.unit(nv);
        let mv = self.mult(nv);
        let xi_idx: Vec<usize> = (0..tv).map(|t| self.xi(t).idx()).collect();
        let txi = self.t_map(&xi_idx, nv);
        let mut w = (0..nv).find(|&v| self.xi(ev[v]).idx() != v).map(|v| format!("ξ(e(v)) != v at v = {}", q.element_name(Elem(v as u16))));
        if w.is_none() {
            w = (0..self.t_size(tv))
                .find(|&big| self.xi(txi[big]) != self.xi(mv[big]))
                .map(|big| format!("ξ·Tξ != ξ·m at element {big} of TTV"));
        }
        rep.record("ξ is a T-algebra", w, (nv + self.t_size(tv)) as u64, "elements of V and TTV");

        // T1 --Tk--> TV --ξ--> V equals the constant k
        let tk = self.t_map(&[q.unit().idx()], nv);
        let mut w = tk.iter().position(|&t| self.xi(t) != q.unit()).map(|t| format!("ξ(Tk({t})) != k"));
        let n_vv = nv * nv;
        let tensor_map: Vec<usize> = (0..n_vv).map(|i| q.tensor(Elem((i / nv) as u16), Elem((i % nv) as u16)).idx()).collect();
        let p1: Vec<usize> = (0..n_vv).map(|i| i / nv).collect();
        let p2: Vec<usize> = (0..n_vv).map(|i| i % nv).collect();
        let (tt, tp1, tp2) = (self.t_map(&tensor_map, nv), self.t_map(&p1, nv), self.t_map(&p2, nv));
        if w.is_none() {
            w = (0..tt.len())
                .find(|&i| self.xi(tt[i]) != q.tensor(self.xi(tp1[i]), self.xi(tp2[i])))
                .map(|i| format!("ξ·T(⊗) != ⊗·(ξ×ξ) at element {i} of T(V×V)"));
        }
        rep.record("condition C diagrams", w, (tk.len() + tt.len()) as u64, "elements of T1 and T(V×V)");

        let (mut w, mut n_scan) = (None, 0u64);
        let phi_limit = limit.min(3);
        for nx in 0..=phi_limit {
            for ny in 0..=phi_limit {
                for f in all_maps(nx, ny) {
                    let tf = self.t_map(&f, ny);
                    for phi in all_maps(nx, nv) {
                        n_scan += 1;
                        if w.is_some() {
                            continue;
                        }
                        let phi: Vec<Elem> = phi.iter().map(|&v| Elem(v as u16)).collect();
                        let psi: Vec<Elem> =
                            (0..ny).map(|y| q.join_all((0..nx).filter(|&x| f[x] == y).map(|x| phi[x]))).collect();
                        let lhs = self.xi_lift(&psi);
                        let rhs = self.xi_lift(&phi);
                        for (ty, &l) in lhs.iter().enumerate() {
                            let bound = q.join_all((0..tf.len()).filter(|&tx| tf[tx] == ty).map(|tx| rhs[tx]));
                            if !q.leq(l, bound) {
                                w = Some(format!("f = {f:?}, φ = {:?}, 𝔶 = {ty}", names(q, &phi)));
                                break;
                            }
                        }
                    }
                }
            }
        }
        rep.record("condition C inequality", w, n_scan, "pairs (f, φ)");

        let (mut w, mut n_scan) = (None, 0u64);
        for nz in sizes.clone() {
            for nx in sizes.clone() {
                for ny in sizes.clone() {
                    for f in all_maps(nx, nz) {
                        for g in all_maps(ny, nz) {
                            n_scan += 1;
                            if w.is_none() {
                                w = self.weak_pullback_witness(&f, &g, nz);
                            }
                        }
                    }
                }
            }
        }
        rep.record("(BC) T preserves weak pullbacks", w, n_scan, "cospans");

        let (mut w, mut n_scan) = (None, 0u64);
        for nx in sizes.clone() {
            for ny in sizes.clone() {
                for f in all_maps(nx, ny) {
                    n_scan += 1;
                    if w.is_none() {
                        w = self.mult_square_witness(&f, ny);
                    }
                }
            }
        }
        rep.record("(BC) naturality squares of m are weak pullbacks", w, n_scan, "maps");

        self.check_extension_laws(limit.min(2), &mut rep);
        rep
    }

    fn weak_pullback_witness(&self, f: &[usize], g: &[usize], nz: usize) -> Option<String> {
        let pairs: Vec<(usize, usize)> =
            (0..f.len()).flat_map(|x| (0..g.len()).map(move |y| (x, y))).filter(|&(x, y)| f[x] == g[y]).collect();
        let p1: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let p2: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let (tp1, tp2) = (self.t_map(&p1, f.len()), self.t_map(&p2, g.len()));
        let (tf, tg) = (self.t_map(f, nz), self.t_map(g, nz));
        for (tx, &a) in tf.iter().enumerate() {
            for (ty, &b) in tg.iter().enumerate() {
                if a == b && !(0..tp1.len()).any(|w| tp1[w] == tx && tp2[w] == ty) {
                    return Some(format!("f = {f:?}, g = {g:?}: ({tx}, {ty}) has no preimage"));
                }
            }
        }
        None
    }

    fn mult_square_witness(&self, f: &[usize], ny: usize) -> Option<String> {
        let nx = f.len();
        let tf = self.t_map(f, ny);
        let ttf = self.t_map(&tf, self.t_size(ny));
        let (mx, my) = (self.mult(nx), self.mult(ny));
        for (tx, &img) in tf.iter().enumerate() {
            for (big_y, &m) in my.iter().enumerate() {
                if img == m && !(0..mx.len()).any(|big| mx[big] == tx && ttf[big] == big_y) {
                    return Some(format!("f = {f:?}: ({tx}, {big_y}) has no preimage in TTX"));
                }
            }
        }
        None
    }

    /// Strict functoriality, naturality of `m` and op-laxness of `e` for `T_ξ`.
    fn check_extension_laws(&self, limit: usize, rep: &mut LawReport) {
        let q = &self.q;
        let mut rng = ChaCha8Rng::seed_from_u64(0x7e5);
        let (mut wf, mut wn, mut wo, mut wm) = (None, None, None, None);
        let (mut nf, mut nn) = (0u64, 0u64);
        let mut exhaustive = true;
        for nx in 0..=limit {
            for ny in 0..=limit {
                let (rs, ex) = relations(q, nx, ny, &mut rng);
                exhaustive &= ex;
                for r in &rs {
                    nn += 1;
                    let tr = self.lax(r);
                    let ey = self.graph(&self.unit(ny), self.t_size(ny));
                    let ex_ = self.graph(&self.unit(nx), self.t_size(nx));
                    if wo.is_none() && !ey.comp(r).le(&tr.comp(&ex_)) {
                        wo = Some(format!("r = {r:?}"));
                    }
                    let ttr = self.lax(&tr);
                    let mx = self.graph(&self.mult(nx), self.t_size(nx));
                    let my = self.graph(&self.mult(ny), self.t_size(ny));
                    if wn.is_none() && my.comp(&ttr) != tr.comp(&mx) {
                        wn = Some(format!("r = {r:?}"));
                    }
                    if wm.is_none() && self.lax(&r.involution()) != tr.involution() {
                        wm = Some(format!("r = {r:?}"));
                    }
                }
                for f in all_maps(nx, ny) {
                    if wm.is_none() && self.lax(&self.graph(&f, ny)) != self.graph(&self.t_map(&f, ny), self.t_size(ny)) {
                        wm = Some(format!("map {f:?}"));
                    }
                }
                for nz in 0..=limit {
                    let (rs, ex1) = relations(q, nx, ny, &mut rng);
                    let (ss, ex2) = relations(q, ny, nz, &mut rng);
                    let full = ex1 && ex2 && (rs.len() * ss.len()) as u64 <= RELATION_SCAN_BUDGET * 4;
                    exhaustive &= full;
                    let pairs: Vec<(&VRel, &VRel)> = if full {
                        rs.iter().flat_map(|r| ss.iter().map(move |s| (r, s))).collect()
                    } else {
                        rs.iter().zip(ss.iter().cycle()).collect()
                    };
                    for (r, s) in pairs {
                        nf += 1;
                        if wf.is_none() && self.lax(&s.comp(r)) != self.lax(s).comp(&self.lax(r)) {
                            wf = Some(format!("r = {r:?}, s = {s:?}"));
                        }
                    }
                }
            }
        }
        let how = if exhaustive { "" } else { " (seeded sample on larger shapes)" };
        rep.record("T_ξ strictly functorial", wf, nf, format!("composable pairs{how}"));
        rep.record("m natural for T_ξ", wn, nn, format!("relations{how}"));
        rep.record("e op-lax natural for T_ξ", wo, nn, format!("relations{how}"));
        rep.record("T_ξ extends T and commutes with involution", wm, nn, format!("relations and maps{how}"));
    }

    /// Transport along `e`: `T_ξ r(e x, e y) = r(x, y)`, `Tf·e = e·f`, `m·e_T` and `ξ·e` trivial.
    pub fn check_transport_to_identity(&self, limit: usize) -> LawReport {
        let q = &self.q;
        let mut rep = LawReport::new(format!("{} transports to the identity monad", self.label()));
        let mut rng = ChaCha8Rng::seed_from_u64(0xe1);
        let mut w = None;
        let mut n_scan = 0u64;
        for n in 0..=limit {
            n_scan += 1;
            if self.principal_inverse(n).is_none() && w.is_none() {
                w = Some(format!("e is not a bijection on {n} points"));
            }
        }
        rep.record("e_X is a bijection", w, n_scan, "sets");
        let (mut w, mut n_scan) = (None, 0u64);
        for nx in 0..=limit {
            for ny in 0..=limit {
                let (ex, ey) = (self.unit(nx), self.unit(ny));
                for r in relations(q, nx, ny, &mut rng).0 {
                    n_scan += 1;
                    let tr = self.lax(&r);
                    let moved = VRel::from_fn(q.clone(), nx, ny, |x, y| tr.get(ex[x], ey[y]));
                    if moved != r && w.is_none() {
                        w = Some(format!("r = {r:?}"));
                    }
                }
                for f in all_maps(nx, ny) {
                    n_scan += 1;
                    let tf = self.t_map(&f, ny);
                    if (0..nx).any(|x| tf[ex[x]] != ey[f[x]]) && w.is_none() {
                        w = Some(format!("Tf at f = {f:?}"));
                    }
                }
            }
        }
        rep.record("T_ξ and T agree with the identity instance after transport", w, n_scan, "relations and maps");
        let nv = q.len();
        let ev = self.unit(nv);
        let w = (0..nv).find(|&v| self.xi(ev[v]) != Elem(v as u16)).map(|v| format!("ξ at principal {v}"));
        rep.record("ξ is the identity after transport", w, nv as u64, "elements of V");
        rep
    }
}

fn names(q: &Quantale, vs: &[Elem]) -> Vec<String> {
    vs.iter().map(|&v| q.element_name(v).to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bq() -> Arc<Quantale> {
        Arc::new(Quantale::boolean())
    }

    #[test]
    fn scan_and_families_agree() {
        for n in 0..=4 {
            let fam = ultrafilters_by_families(n);
            assert_eq!(fam, ultrafilter_generators_by_scan(n), "n = {n}");
            assert_eq!(fam.len(), n);
        }
        for n in 5..=ULTRAFILTER_SCAN_LIMIT {
            let gens = ultrafilter_generators_by_scan(n);
            assert_eq!(gens, (0..n as u32).map(|i| vec![i]).collect::<Vec<_>>());
        }
    }

    #[test]
    fn two_point_ultrafilters_are_principal() {
        let m = Monad::ultrafilter(bq());
        let t = m.tobj(2);
        assert_eq!(t.len(), 2);
        assert_eq!(t.descriptor(0), &[0]);
        assert_eq!(t.descriptor(1), &[1]);
        assert_eq!(*m.unit(2), vec![0, 1]);
    }

    #[test]
    fn xi_at_principal_is_the_point() {
        for q in [Quantale::boolean(), Quantale::truncated_chain(2), Quantale::powerset_frame(2)] {
            let q = Arc::new(q);
            let m = Monad::ultrafilter(q.clone());
            let e = m.unit(q.len());
            for v in q.elements() {
                assert_eq!(m.xi(e[v.idx()]), v);
            }
        }
    }

    #[test]
    fn identity_extension_is_identity() {
        let q = Arc::new(Quantale::truncated_chain(2));
        let m = Monad::identity(q.clone());
        for r in VRel::all(&q, 2, 2) {
            assert_eq!(m.lax_extend(&r).unwrap(), r);
        }
    }

    #[test]
    fn ultrafilter_extension_on_principals() {
        let q = bq();
        let m = Monad::ultrafilter(q.clone());
        for r in VRel::all(&q, 2, 3) {
            let tr = m.lax_extend(&r).unwrap();
            let (ex, ey) = (m.unit(2), m.unit(3));
            for x in 0..2 {
                for y in 0..3 {
                    assert_eq!(tr.get(ex[x], ey[y]), r.get(x, y));
                }
            }
        }
        let id = VRel::identity(q.clone(), 3);
        assert_eq!(m.lax_extend(&id).unwrap(), VRel::identity(q, 3));
    }

    #[test]
    fn identity_kleisli_is_composition() {
        let q = bq();
        let m = Monad::identity(q.clone());
        for r in VRel::all(&q, 2, 2) {
            for s in VRel::all(&q, 2, 1) {
                assert_eq!(m.kleisli(&s, &r, 2).unwrap(), s.compose(&r).unwrap());
            }
        }
    }

    #[test]
    fn law_suites_pass() {
        for kind in [MonadKind::Identity, MonadKind::FiniteUltrafilter] {
            let rep = Monad::instantiate(kind, bq()).check_laws(3);
            assert!(rep.passed(), "{rep}");
        }
        let rep = Monad::identity(Arc::new(Quantale::truncated_chain(2))).check_laws(2);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn ultrafilter_transports() {
        let rep = Monad::ultrafilter(bq()).check_transport_to_identity(3);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn swapped_mult_breaks_unit_law() {
        let m = Monad::new(Box::new(SwappedMult { inner: IdentityMonad, a: 0, b: 1 }), bq());
        let rep = m.check_laws(2);
        let c = rep.check("monad unit laws").unwrap();
        assert_eq!(c.status, crate::report::Status::Fail);
        assert!(c.witness.as_deref().unwrap().contains("|X| = 2"));
    }
}

//! (T,V)-categories, functors and bimodules, all carried by V-relation data.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monad::Monad;
use crate::quantale::{Elem, Quantale};
use crate::report::LawReport;
use crate::vrel::VRel;

/// A set `X` with a structure `a: TX ⇸ X`.
#[derive(Clone)]
pub struct Category {
    name: String,
    monad: Arc<Monad>,
    points: Vec<String>,
    a: VRel,
}

impl fmt::Debug for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Category({}, {:?}, {:?})", self.name, self.points, self.a)
    }
}

impl PartialEq for Category {
    fn eq(&self, other: &Self) -> bool {
        *self.monad == *other.monad && self.points == other.points && self.a == other.a
    }
}

pub fn same_category(a: &Arc<Category>, b: &Arc<Category>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Category {
    pub fn new(name: impl Into<String>, monad: Arc<Monad>, points: Vec<String>, a: VRel) -> Result<Self> {
        let n = points.len();
        let t = monad.t_size(n);
        if a.rows() != t || a.cols() != n {
            return Err(Error::shape(format!("structure is {}x{}, expected {t}x{n}", a.rows(), a.cols())));
        }
        if !crate::vrel::same_quantale(a.quantale(), monad.quantale()) {
            return Err(Error::Mismatch("structure and monad use different quantales".into()));
        }
        Ok(Category { name: name.into(), monad, points, a })
    }

    pub fn from_fn(
        name: impl Into<String>,
        monad: Arc<Monad>,
        points: Vec<String>,
        f: impl FnMut(usize, usize) -> Elem,
    ) -> Self {
        let n = points.len();
        let a = VRel::from_fn(monad.quantale().clone(), monad.t_size(n), n, f);
        Category { name: name.into(), monad, points, a }
    }

    /// Structure `a(𝔵, y) = r(x, y)` where `𝔵 = e(x)`; needs `e_X` to be bijective.
    pub fn transported(name: impl Into<String>, monad: Arc<Monad>, points: Vec<String>, r: &VRel) -> Result<Self> {
        let n = points.len();
        if r.rows() != n || r.cols() != n {
            return Err(Error::shape("point relation must be square over the carrier"));
        }
        let inv = monad
            .principal_inverse(n)
            .ok_or_else(|| Error::Unsupported(format!("{} has no principal bijection", monad.label())))?;
        Ok(Self::from_fn(name, monad, points, |t, y| r.get(inv[t], y)))
    }

    pub fn numbered(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    /// `a = e_X°`.
    pub fn discrete(monad: Arc<Monad>, n: usize) -> Self {
        let q = monad.quantale().clone();
        let e = monad.unit(n);
        Self::from_fn(format!("discrete({n})"), monad, Self::numbered(n), |t, x| if e[x] == t { q.unit() } else { q.bottom() })
    }

    /// `E = (1, e_1°)`.
    pub fn unit_e(monad: Arc<Monad>) -> Self {
        let mut c = Self::discrete(monad, 1);
        c.name = "E".into();
        c.points = vec!["*".into()];
        c
    }

    /// The chain `0 < 1 < .. < n-1` with `k` below the diagonal-up and `⊥` elsewhere.
    pub fn chain(monad: Arc<Monad>, n: usize) -> Result<Self> {
        let q = monad.quantale().clone();
        let r = VRel::from_fn(q.clone(), n, n, |x, y| if x <= y { q.unit() } else { q.bottom() });
        Self::transported(format!("chain({n})"), monad, Self::numbered(n), &r)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn monad(&self) -> &Arc<Monad> {
        &self.monad
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.monad.quantale()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t_len(&self) -> usize {
        self.a.rows()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn structure(&self) -> &VRel {
        &self.a
    }

    #[inline]
    pub fn a(&self, t: usize, x: usize) -> Elem {
        self.a.get(t, x)
    }

    /// Name of an element of `TX`: the point it is principal at, if any.
    pub fn t_name(&self, t: usize) -> String {
        match self.monad.principal_inverse(self.len()) {
            Some(inv) => self.points[inv[t]].clone(),
            None => format!("t{t}"),
        }
    }

    /// Name of an element of `TTX`.
    pub fn tt_name(&self, t: usize) -> String {
        match self.monad.principal_inverse(self.t_len()) {
            Some(inv) => self.t_name(inv[t]),
            None => format!("tt{t}"),
        }
    }

    pub fn unit_map(&self) -> Arc<Vec<usize>> {
        self.monad.unit(self.len())
    }

    /// `x ≤ y` iff the point functors satisfy `x^* ≤ y^*`, i.e. `a(𝔵, x) ≤ a(𝔵, y)` for all `𝔵`.
    pub fn point_leq(&self, x: usize, y: usize) -> bool {
        let q = self.quantale();
        (0..self.t_len()).all(|t| q.leq(self.a(t, x), self.a(t, y)))
    }

    /// The inequality form `k ≤ a(e x, y)`.
    pub fn point_leq_formula(&self, x: usize, y: usize) -> bool {
        let q = self.quantale();
        q.leq(q.unit(), self.a(self.unit_map()[x], y))
    }

    pub fn underlying_order(&self) -> Vec<Vec<bool>> {
        (0..self.len()).map(|x| (0..self.len()).map(|y| self.point_leq(x, y)).collect()).collect()
    }

    pub fn separation_witness(&self) -> Option<(usize, usize)> {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                if self.point_leq(x, y) && self.point_leq(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_separated(&self) -> bool {
        self.separation_witness().is_none()
    }

    fn reflexivity_witness(&self) -> Option<usize> {
        let q = self.quantale();
        let e = self.unit_map();
        (0..self.len()).find(|&x| !q.leq(q.unit(), self.a(e[x], x)))
    }

    /// `(𝔛, 𝔵, x)` with `T_ξa(𝔛, 𝔵) ⊗ a(𝔵, x) ≰ a(m 𝔛, x)`.
    fn transitivity_witness(&self) -> Option<(usize, usize, usize)> {
        let q = self.quantale();
        let ta = self.monad.lax(&self.a);
        let m = self.monad.mult(self.len());
        for big in 0..ta.rows() {
            for t in 0..ta.cols() {
                let v = ta.get(big, t);
                if v == q.bottom() {
                    continue;
                }
                for x in 0..self.len() {
                    if !q.leq(q.tensor(v, self.a(t, x)), self.a(m[big], x)) {
                        return Some((big, t, x));
                    }
                }
            }
        }
        None
    }

    pub fn check(&self) -> LawReport {
        let mut rep = LawReport::new(format!("category {}", self.name));
        let n = self.len() as u64;
        rep.record(
            "reflexivity",
            self.reflexivity_witness().map(|x| format!("x = {}", self.points[x])),
            n,
            "points",
        );
        let tt = self.monad.t_size(self.t_len()) as u64;
        rep.record(
            "transitivity",
            self.transitivity_witness().map(|(b, t, x)| format!("({}, {}, {})", self.tt_name(b), self.t_name(t), self.points[x])),
            tt * self.t_len() as u64 * n,
            "triples",
        );
        rep.record(
            "separated",
            self.separation_witness().map(|(x, y)| format!("({}, {})", self.points[x], self.points[y])),
            n * n,
            "pairs of points",
        );
        rep
    }

    /// Fails with the first violated axiom (separatedness included).
    pub fn validate(&self) -> Result<()> {
        let rep = self.check();
        match rep.first_failure() {
            Some(c) => Err(Error::law(format!("{} of {}", c.name, self.name), c.witness.clone().unwrap_or_default())),
            None => Ok(()),
        }
    }

    /// Identifies `x ≤ x' ≤ x`; each class is represented by its least index and
    /// the structure takes the join over all preimages.
    pub fn separated_quotient(&self) -> (Category, Vec<usize>) {
        let n = self.len();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if class[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for y in x..n {
                if class[y] == usize::MAX && self.point_leq(x, y) && self.point_leq(y, x) {
                    class[y] = c;
                }
            }
        }
        let q = self.quantale().clone();
        let tp = self.monad.t_map(&class, reps.len());
        let mut a = VRel::bottom(q.clone(), self.monad.t_size(reps.len()), reps.len());
        for t in 0..self.t_len() {
            for x in 0..n {
                let cur = a.get(tp[t], class[x]);
                a.set(tp[t], class[x], q.join(cur, self.a(t, x)));
            }
        }
        let points = reps.iter().map(|&x| self.points[x].clone()).collect();
        let cat = Category { name: format!("{}/~", self.name), monad: self.monad.clone(), points, a };
        (cat, class)
    }

    /// Carrier `X × Y` (row-major) with `c(𝔴, (x, y)) = a(Tπ₁𝔴, x) ⊗ b(Tπ₂𝔴, y)`.
    pub fn tensor(&self, other: &Category) -> Result<Category> {
        if *self.monad != *other.monad {
            return Err(Error::Mismatch("tensor of categories over different monads".into()));
        }
        let (nx, ny) = (self.len(), other.len());
        let p1: Vec<usize> = (0..nx * ny).map(|i| i / ny).collect();
        let p2: Vec<usize> = (0..nx * ny).map(|i| i % ny).collect();
        let (tp1, tp2) = (self.monad.t_map(&p1, nx), self.monad.t_map(&p2, ny));
        let q = self.quantale().clone();
        let points = p1.iter().zip(&p2).map(|(&x, &y)| format!("({},{})", self.points[x], other.points[y])).collect();
        Ok(Category::from_fn(format!("{}⊗{}", self.name, other.name), self.monad.clone(), points, |w, i| {
            q.tensor(self.a(tp1[w], p1[i]), other.a(tp2[w], p2[i]))
        }))
    }

    /// Carrier `TX` with `a^op(𝔛, 𝔶) = ⋁_{𝔜 : m 𝔜 = 𝔶} T_ξa(𝔜, m 𝔛)`.
    pub fn dual(&self) -> Category {
        let q = self.quantale().clone();
        let ta = self.monad.lax(&self.a);
        let m = self.monad.mult(self.len());
        let t = self.t_len();
        let points = (0..t).map(|i| self.t_name(i)).collect();
        Category::from_fn(format!("{}^op", self.name), self.monad.clone(), points, |big, y| {
            q.join_all((0..m.len()).filter(|&b| m[b] == y).map(|b| ta.get(b, m[big])))
        })
    }

    /// `(V, hom_ξ)` with `hom_ξ(𝔳, v) = hom(ξ(𝔳), v)`.
    pub fn v_as_category(monad: Arc<Monad>) -> Category {
        let q = monad.quantale().clone();
        let points = q.element_names().to_vec();
        let m2 = monad.clone();
        Category::from_fn(format!("V({})", q.name()), monad, points, |t, v| q.hom(m2.xi(t), Elem(v as u16)))
    }
}

/// A map between carriers, checked against `f·a ≤ b·Tf`.
#[derive(Clone)]
pub struct Functor {
    src: Arc<Category>,
    tgt: Arc<Category>,
    map: Vec<usize>,
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && same_category(&self.src, &other.src) && same_category(&self.tgt, &other.tgt)
    }
}

impl Functor {
    pub fn new(src: Arc<Category>, tgt: Arc<Category>, map: Vec<usize>) -> Result<Self> {
        if map.len() != src.len() {
            return Err(Error::shape(format!("map has {} entries, source has {} points", map.len(), src.len())));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= tgt.len()) {
            return Err(Error::Malformed(format!("map hits {bad}, target has {} points", tgt.len())));
        }
        if *src.monad() != *tgt.monad() {
            return Err(Error::Mismatch("functor between categories over different monads".into()));
        }
        Ok(Functor { src, tgt, map })
    }

    /// Constructs and checks the functor axiom.
    pub fn checked(src: Arc<Category>, tgt: Arc<Category>, map: Vec<usize>) -> Result<Self> {
        let f = Self::new(src, tgt, map)?;
        f.validate()?;
        Ok(f)
    }

    pub fn identity(c: Arc<Category>) -> Self {
        let map = (0..c.len()).collect();
        Functor { src: c.clone(), tgt: c, map }
    }

    pub fn src(&self) -> &Arc<Category> {
        &self.src
    }

    pub fn tgt(&self) -> &Arc<Category> {
        &self.tgt
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn describe(&self) -> String {
        let pairs: Vec<String> =
            self.map.iter().enumerate().map(|(x, &y)| format!("{}->{}", self.src.points[x], self.tgt.points[y])).collect();
        format!("{}->{}[{}]", self.src.name, self.tgt.name, pairs.join(","))
    }

    pub fn t_map(&self) -> Vec<usize> {
        self.src.monad.t_map(&self.map, self.tgt.len())
    }

    fn functor_witness(&self) -> Option<(usize, usize)> {
        let q = self.src.quantale();
        let tf = self.t_map();
        for t in 0..self.src.t_len() {
            for x in 0..self.src.len() {
                if !q.leq(self.src.a(t, x), self.tgt.a(tf[t], self.map[x])) {
                    return Some((t, x));
                }
            }
        }
        None
    }

    pub fn is_functor(&self) -> bool {
        self.functor_witness().is_none()
    }

    pub fn check(&self) -> LawReport {
        let mut rep = LawReport::new(format!("functor {}", self.describe()));
        rep.record(
            "f·a ≤ b·Tf",
            self.functor_witness().map(|(t, x)| format!("({}, {})", self.src.t_name(t), self.src.points[x])),
            (self.src.t_len() * self.src.len()) as u64,
            "pairs (𝔵, x)",
        );
        rep
    }

    pub fn validate(&self) -> Result<()> {
        match self.functor_witness() {
            None => Ok(()),
            Some((t, x)) => Err(Error::law(
                format!("functor {}", self.describe()),
                format!("({}, {})", self.src.t_name(t), self.src.points[x]),
            )),
        }
    }

    /// `self · f`.
    pub fn after(&self, f: &Functor) -> Result<Functor> {
        if !same_category(&f.tgt, &self.src) {
            return Err(Error::shape(format!("cannot compose {} after {}", self.describe(), f.describe())));
        }
        Ok(Functor { src: f.src.clone(), tgt: self.tgt.clone(), map: f.map.iter().map(|&x| self.map[x]).collect() })
    }

    /// `f_*(𝔵, y) = b(Tf 𝔵, y)`.
    pub fn lower_star(&self) -> Bimodule {
        let tf = self.t_map();
        let rel = VRel::from_fn(self.src.quantale().clone(), self.src.t_len(), self.tgt.len(), |t, y| self.tgt.a(tf[t], y));
        Bimodule { src: self.src.clone(), tgt: self.tgt.clone(), rel }
    }

    /// `f^*(𝔶, x) = b(𝔶, f x)`.
    pub fn upper_star(&self) -> Bimodule {
        let rel =
            VRel::from_fn(self.src.quantale().clone(), self.tgt.t_len(), self.src.len(), |t, x| self.tgt.a(t, self.map[x]));
        Bimodule { src: self.tgt.clone(), tgt: self.src.clone(), rel }
    }

    fn check_parallel(&self, g: &Functor) -> Result<()> {
        if same_category(&self.src, &g.src) && same_category(&self.tgt, &g.tgt) {
            Ok(())
        } else {
            Err(Error::shape(format!("{} and {} are not parallel", self.describe(), g.describe())))
        }
    }

    /// `f ≤ g` iff `f^* ≤ g^*`.
    pub fn leq(&self, g: &Functor) -> Result<bool> {
        self.check_parallel(g)?;
        Ok(self.upper_star().rel.le(&g.upper_star().rel))
    }

    /// Unchecked version of [`Functor::leq`] for parallel functors.
    pub(crate) fn le(&self, g: &Functor) -> bool {
        (0..self.src.len()).all(|x| self.tgt.point_leq(self.map[x], g.map[x]))
    }

    /// `g ≤ b·e_Y·f` read pointwise: `k ≤ b(e f x, g x)` for every `x`.
    pub fn leq_formula(&self, g: &Functor) -> Result<bool> {
        self.check_parallel(g)?;
        Ok((0..self.src.len()).all(|x| self.tgt.point_leq_formula(self.map[x], g.map[x])))
    }

    /// `g_* ≤ f_*`.
    pub fn leq_via_lower(&self, g: &Functor) -> Result<bool> {
        self.check_parallel(g)?;
        Ok(g.lower_star().rel.le(&self.lower_star().rel))
    }

    /// `(𝔵, x)` with `a(𝔵, x) ≠ b(Tf 𝔵, f x)`.
    pub fn ff_witness(&self) -> Option<(usize, usize)> {
        let tf = self.t_map();
        for t in 0..self.src.t_len() {
            for x in 0..self.src.len() {
                if self.src.a(t, x) != self.tgt.a(tf[t], self.map[x]) {
                    return Some((t, x));
                }
            }
        }
        None
    }

    pub fn fully_faithful(&self) -> bool {
        self.ff_witness().is_none()
    }

    /// `a ≤ f^*∘f_*` and `f_*∘f^* ≤ b`.
    pub fn adjoint_pair_check(&self) -> LawReport {
        let mut rep = LawReport::new(format!("f_* ⊣ f^* for {}", self.describe()));
        let (lo, up) = (self.lower_star(), self.upper_star());
        let unit = up.conv(&lo).expect("composable");
        let counit = lo.conv(&up).expect("composable");
        rep.record(
            "a ≤ f^*∘f_*",
            self.src.a.leq_witness(&unit.rel).map(|(t, x)| format!("({}, {})", self.src.t_name(t), self.src.points[x])),
            (self.src.t_len() * self.src.len()) as u64,
            "entries",
        );
        rep.record(
            "f_*∘f^* ≤ b",
            counit.rel.leq_witness(&self.tgt.a).map(|(t, y)| format!("({}, {})", self.tgt.t_name(t), self.tgt.points[y])),
            (self.tgt.t_len() * self.tgt.len()) as u64,
            "entries",
        );
        rep
    }

    /// Whether `f·u ≤ f·v` implies `u ≤ v` for all parallel `u, v` into the source.
    pub fn is_full_on(&self, us: &[Functor]) -> bool {
        us.iter().all(|u| {
            us.iter().all(|v| {
                let fu = self.after(u).expect("composable");
                let fv = self.after(v).expect("composable");
                !fu.le(&fv) || u.le(v)
            })
        })
    }
}

/// A V-relation `ψ: TX ⇸ Y` with `ψ∘a ≤ ψ` and `b∘ψ ≤ ψ`.
#[derive(Clone)]
pub struct Bimodule {
    src: Arc<Category>,
    tgt: Arc<Category>,
    rel: VRel,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bimodule({} -o {}, {:?})", self.src.name, self.tgt.name, self.rel)
    }
}

impl PartialEq for Bimodule {
    fn eq(&self, other: &Self) -> bool {
        self.rel == other.rel && same_category(&self.src, &other.src) && same_category(&self.tgt, &other.tgt)
    }
}

impl Bimodule {
    pub fn new(src: Arc<Category>, tgt: Arc<Category>, rel: VRel) -> Result<Self> {
        if rel.rows() != src.t_len() || rel.cols() != tgt.len() {
            return Err(Error::shape(format!(
                "bimodule relation is {}x{}, expected {}x{}",
                rel.rows(),
                rel.cols(),
                src.t_len(),
                tgt.len()
            )));
        }
        Ok(Bimodule { src, tgt, rel })
    }

    pub(crate) fn raw(src: Arc<Category>, tgt: Arc<Category>, rel: VRel) -> Self {
        debug_assert_eq!(rel.rows(), src.t_len());
        debug_assert_eq!(rel.cols(), tgt.len());
        Bimodule { src, tgt, rel }
    }

    /// The structure of `X` as a bimodule `X ⇸ X`.
    pub fn structure(c: Arc<Category>) -> Self {
        let rel = c.a.clone();
        Bimodule { src: c.clone(), tgt: c, rel }
    }

    pub fn src(&self) -> &Arc<Category> {
        &self.src
    }

    pub fn tgt(&self) -> &Arc<Category> {
        &self.tgt
    }

    pub fn rel(&self) -> &VRel {
        &self.rel
    }

    #[inline]
    pub fn get(&self, t: usize, y: usize) -> Elem {
        self.rel.get(t, y)
    }

    /// Kleisli convolution `self ∘ psi`, for `psi: X ⇸ Y` and `self: Y ⇸ Z`.
    pub fn conv(&self, psi: &Bimodule) -> Result<Bimodule> {
        if !same_category(&psi.tgt, &self.src) {
            return Err(Error::shape(format!("cannot convolve {} -o {} after {} -o {}", self.src.name, self.tgt.name, psi.src.name, psi.tgt.name)));
        }
        let rel = self.src.monad.kleisli(&self.rel, &psi.rel, psi.src.len())?;
        Ok(Bimodule { src: psi.src.clone(), tgt: self.tgt.clone(), rel })
    }

    fn laws(&self) -> (Option<(usize, usize)>, Option<(usize, usize)>) {
        let left = self.conv(&Bimodule::structure(self.src.clone())).expect("composable");
        let right = Bimodule::structure(self.tgt.clone()).conv(self).expect("composable");
        (left.rel.leq_witness(&self.rel), right.rel.leq_witness(&self.rel))
    }

    pub fn is_bimodule(&self) -> bool {
        self.laws() == (None, None)
    }

    pub fn check(&self) -> LawReport {
        let mut rep = LawReport::new(format!("bimodule {} -o {}", self.src.name, self.tgt.name));
        let (l, r) = self.laws();
        let n = (self.rel.rows() * self.rel.cols()) as u64;
        let name = |(t, y): (usize, usize)| format!("({}, {})", self.src.t_name(t), self.tgt.points[y]);
        rep.record("ψ∘a ≤ ψ", l.map(name), n, "entries");
        rep.record("b∘ψ ≤ ψ", r.map(name), n, "entries");
        rep
    }

    pub fn leq(&self, other: &Bimodule) -> bool {
        self.rel.le(&other.rel)
    }

    /// The same data as a map `X^op ⊗ Y → (V, hom_ξ)`.
    pub fn to_functor(&self) -> Result<Functor> {
        let dom = Arc::new(self.src.dual().tensor(&self.tgt)?);
        let v = Arc::new(Category::v_as_category(self.src.monad.clone()));
        let map = self.rel.data().iter().map(|e| e.idx()).collect();
        Functor::new(dom, v, map)
    }

    /// Inverse of [`Bimodule::to_functor`].
    pub fn from_functor(f: &Functor, src: Arc<Category>, tgt: Arc<Category>) -> Result<Bimodule> {
        let n = src.t_len() * tgt.len();
        if f.map.len() != n || f.tgt.len() != src.quantale().len() {
            return Err(Error::shape("functor does not have the shape X^op ⊗ Y → V"));
        }
        let rel = VRel::new(src.quantale().clone(), src.t_len(), tgt.len(), f.map.iter().map(|&v| Elem(v as u16)).collect())?;
        Bimodule::new(src, tgt, rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord() -> Arc<Monad> {
        Monad::identity(Arc::new(Quantale::boolean()))
    }

    #[test]
    fn chain_is_a_category() {
        let c = Category::chain(ord(), 2).unwrap();
        assert!(c.check().passed());
        assert_eq!(c.underlying_order(), vec![vec![true, true], vec![false, true]]);
    }

    #[test]
    fn non_transitive_witness() {
        let m = ord();
        let q = m.quantale().clone();
        let r = VRel::from_fn(q.clone(), 3, 3, |x, y| if x == y || (x, y) == (0, 1) || (x, y) == (1, 2) { q.unit() } else { q.bottom() });
        let c = Category::transported("bad", m, Category::numbered(3), &r).unwrap();
        let rep = c.check();
        assert_eq!(rep.check("transitivity").unwrap().witness.as_deref(), Some("(0, 1, 2)"));
    }

    #[test]
    fn quotient_collapses_indistinguishable_points() {
        let m = ord();
        let q = m.quantale().clone();
        let r = VRel::top(q, 2, 2);
        let c = Category::transported("both", m, Category::numbered(2), &r).unwrap();
        assert!(!c.is_separated());
        let (qc, p) = c.separated_quotient();
        assert_eq!(qc.len(), 1);
        assert_eq!(p, vec![0, 0]);
        assert!(qc.check().passed());
    }

    #[test]
    fn dual_of_chain_reverses() {
        let c = Category::chain(ord(), 3).unwrap();
        let d = c.dual();
        assert_eq!(d.structure(), &c.structure().involution());
        assert_eq!(d.dual().structure(), c.structure());
    }

    #[test]
    fn v_order_is_quantale_order() {
        for q in [Quantale::boolean(), Quantale::truncated_chain(2), Quantale::lukasiewicz_chain(2)] {
            let q = Arc::new(q);
            let v = Category::v_as_category(Monad::identity(q.clone()));
            assert!(v.check().passed());
            for a in q.elements() {
                for b in q.elements() {
                    assert_eq!(v.point_leq(a.idx(), b.idx()), q.leq(a, b));
                }
            }
        }
    }

    #[test]
    fn inclusion_graph() {
        let m = ord();
        let one = Arc::new(Category::chain(m.clone(), 1).unwrap());
        let two = Arc::new(Category::chain(m, 2).unwrap());
        let f = Functor::checked(one, two.clone(), vec![0]).unwrap();
        let lo = f.lower_star();
        let q = two.quantale();
        assert_eq!(lo.get(0, 0), q.unit());
        assert_eq!(lo.get(0, 1), q.unit());
        assert!(lo.check().passed() && f.upper_star().check().passed());
        assert!(f.fully_faithful());
        assert!(f.adjoint_pair_check().passed());
    }

    #[test]
    fn collapse_is_not_fully_faithful() {
        let m = ord();
        let anti = Arc::new(Category::discrete(m.clone(), 2));
        let pt = Arc::new(Category::discrete(m, 1));
        let f = Functor::checked(anti, pt, vec![0, 0]).unwrap();
        assert_eq!(f.ff_witness(), Some((0, 1)));
    }
}

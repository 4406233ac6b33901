//! Presheaf spaces `ΦX` for saturated classes of bimodules, the Yoneda
//! functor, the action on functors, the multiplication, and the suites for
//! the (sub)monad laws and saturation.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::monad::PresheafCapability;
use crate::quantale::{Elem, Quantale};
use crate::report::LawReport;
use crate::search::{search_functors, BimoduleSearch, DEFAULT_NODE_CAP};
use crate::tvcat::{Bimodule, Category, Functor};
use crate::vrel::VRel;

/// Size bounds shared by every construction that enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest presheaf space that may be built.
    pub max_space: usize,
    /// Largest number of nodes a single search may visit.
    pub node_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_space: 4096, node_cap: DEFAULT_NODE_CAP }
    }
}

/// A class of bimodules given by a membership predicate.
pub trait SaturatedClass: Send + Sync {
    fn name(&self) -> String;

    fn contains(&self, psi: &Bimodule, limits: &Limits) -> Result<bool>;

    /// Membership for a relation already known to be a bimodule.
    fn contains_bimodule(&self, psi: &Bimodule, limits: &Limits) -> Result<bool> {
        self.contains(psi, limits)
    }

    /// Presheaf data that contain every member, when the class can say so cheaply.
    fn candidates(&self, _x: &Category) -> Option<Vec<Vec<Elem>>> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    All,
    Representable,
    /// Right adjoint bimodules; `lawvere` on the command line.
    RightAdjoint,
}

impl Class {
    pub const BUILTIN: [Class; 3] = [Class::All, Class::Representable, Class::RightAdjoint];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Class::All),
            "representable" => Ok(Class::Representable),
            "lawvere" | "right_adjoint" => Ok(Class::RightAdjoint),
            other => Err(Error::Malformed(format!("unknown class `{other}` (all | representable | lawvere)"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Class::All => "all",
            Class::Representable => "representable",
            Class::RightAdjoint => "right_adjoint",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl SaturatedClass for Class {
    fn name(&self) -> String {
        self.as_str().to_string()
    }

    fn contains(&self, psi: &Bimodule, limits: &Limits) -> Result<bool> {
        if !psi.is_bimodule() {
            return Ok(false);
        }
        self.contains_bimodule(psi, limits)
    }

    fn contains_bimodule(&self, psi: &Bimodule, limits: &Limits) -> Result<bool> {
        match self {
            Class::All => Ok(true),
            Class::Representable => Ok(representable_witness(psi, limits)?.is_some()),
            Class::RightAdjoint => Ok(left_adjoint_witness(psi, limits)?.is_some()),
        }
    }

    fn candidates(&self, x: &Category) -> Option<Vec<Vec<Elem>>> {
        match self {
            Class::Representable => Some((0..x.len()).map(|p| x.structure().column(p)).collect()),
            _ => None,
        }
    }
}

/// A functor `g: Y → X` with `ψ = g^*`, for `ψ: X ⇸ Y`.
pub fn representable_witness(psi: &Bimodule, limits: &Limits) -> Result<Option<Functor>> {
    let (x, y) = (psi.src(), psi.tgt());
    let allowed: Vec<Vec<usize>> = (0..y.len())
        .map(|j| (0..x.len()).filter(|&p| (0..x.t_len()).all(|t| psi.get(t, j) == x.a(t, p))).collect())
        .collect();
    let mut found = None;
    search_functors(y, x, &allowed, limits.node_cap, |g| {
        found = Some(g.to_vec());
        false
    })?;
    Ok(found.map(|g| Functor::new(y.clone(), x.clone(), g).expect("search returns total maps")))
}

/// A bimodule `λ: Y ⇸ X` with `b ≤ ψ∘λ` and `λ∘ψ ≤ a`, for `ψ: X ⇸ Y`.
pub fn left_adjoint_witness(psi: &Bimodule, limits: &Limits) -> Result<Option<Bimodule>> {
    let (x, y) = (psi.src(), psi.tgt());
    let q = x.quantale().clone();
    // λ(e y, x') ≤ ⋀_𝔵 hom(ψ(𝔵, y), a(𝔵, x')), read off λ∘ψ ≤ a at principal elements
    let ey = y.unit_map();
    let mut upper = vec![q.top(); y.t_len() * x.len()];
    for yy in 0..y.len() {
        for xp in 0..x.len() {
            upper[ey[yy] * x.len() + xp] = q.meet_all((0..x.t_len()).map(|t| q.hom(psi.get(t, yy), x.a(t, xp))));
        }
    }
    let search = BimoduleSearch::new(y, x).below(upper).descending().node_cap(limits.node_cap);
    let a_x = Bimodule::structure(x.clone());
    let b_y = Bimodule::structure(y.clone());
    let mut found = None;
    search.run(|rel| {
        let lam = Bimodule::new(y.clone(), x.clone(), rel.clone()).expect("shape");
        let unit = psi.conv(&lam).expect("composable");
        let counit = lam.conv(psi).expect("composable");
        if b_y.leq(&unit) && counit.leq(&a_x) {
            found = Some(lam);
            false
        } else {
            true
        }
    })?;
    Ok(found)
}

pub fn presheaf_name(q: &Quantale, data: &[Elem]) -> String {
    let parts: Vec<&str> = data.iter().map(|&v| q.element_name(v)).collect();
    format!("[{}]", parts.join("|"))
}

/// `ψ ↦ ψ∘B` on presheaf data, for a fixed bimodule `B: X ⇸ Y`.
#[derive(Clone)]
pub struct Precompose {
    /// `T_ξB · m_X°: TX ⇸ TY`.
    prefix: VRel,
    /// Non-bottom entries of each row of `prefix`.
    rows: Vec<Vec<(usize, Elem)>>,
}

impl Precompose {
    pub fn new(b: &Bimodule) -> Self {
        let prefix = b.src().monad().kleisli_prefix(b.rel(), b.src().len()).expect("bimodule shape");
        let bot = prefix.quantale().bottom();
        let rows = (0..prefix.rows())
            .map(|t| (0..prefix.cols()).map(|u| (u, prefix.get(t, u))).filter(|&(_, c)| c != bot).collect())
            .collect();
        Precompose { prefix, rows }
    }

    /// Precomposition by `self` followed by `next`, as one matrix.
    pub fn then(&self, next: &Precompose) -> Precompose {
        let q = self.prefix.quantale().clone();
        let (rows, cols) = (next.prefix.rows(), self.prefix.cols());
        let mut data = vec![q.bottom(); rows * cols];
        for (t, row) in next.rows.iter().enumerate() {
            for &(u, c) in row {
                for &(v, d) in &self.rows[u] {
                    let e = &mut data[t * cols + v];
                    *e = q.join(*e, q.tensor(c, d));
                }
            }
        }
        let prefix = VRel::from_raw(q.clone(), rows, cols, data);
        let bot = q.bottom();
        let rows = (0..prefix.rows())
            .map(|t| (0..prefix.cols()).map(|u| (u, prefix.get(t, u))).filter(|&(_, c)| c != bot).collect())
            .collect();
        Precompose { prefix, rows }
    }

    pub fn apply(&self, psi: &[Elem]) -> Vec<Elem> {
        let q = self.prefix.quantale();
        self.rows.iter().map(|row| q.join_all(row.iter().map(|&(u, c)| q.tensor(c, psi[u])))).collect()
    }
}

/// `ΦX` with its carrier listed lexicographically.
pub struct PresheafSpace {
    base: Arc<Category>,
    class: String,
    data: Vec<Vec<Elem>>,
    index: HashMap<Vec<Elem>, usize>,
    cat: Arc<Category>,
}

impl fmt::Debug for PresheafSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PresheafSpace({} of {}, {} presheaves)", self.class, self.base.name(), self.data.len())
    }
}

impl PresheafSpace {
    pub fn build(x: &Arc<Category>, class: &dyn SaturatedClass, limits: &Limits) -> Result<Self> {
        x.validate()?;
        let monad = x.monad().clone();
        if monad.presheaf_capability().is_none() {
            return Err(Error::Unsupported(format!("{} does not provide presheaf structures", monad.label())));
        }
        let e = Arc::new(Category::unit_e(monad.clone()));
        let mut data: Vec<Vec<Elem>> = Vec::new();
        let mut err = None;
        let keep = |rel: &VRel, data: &mut Vec<Vec<Elem>>, searched: bool| -> Result<bool> {
            let b = Bimodule::new(x.clone(), e.clone(), rel.clone())?;
            let member = if searched { class.contains_bimodule(&b, limits)? } else { class.contains(&b, limits)? };
            if member {
                if data.len() >= limits.max_space {
                    return Err(Error::SizeCap {
                        what: format!("{} presheaves on {}", class.name(), x.name()),
                        needed: limits.max_space as u128 + 1,
                        cap: limits.max_space,
                    });
                }
                data.push(rel.data().to_vec());
            }
            Ok(true)
        };
        if let Some(cands) = class.candidates(x) {
            for c in cands {
                let rel = VRel::new(x.quantale().clone(), x.t_len(), 1, c)?;
                keep(&rel, &mut data, false)?;
            }
            data.sort();
            data.dedup();
        } else {
            BimoduleSearch::new(x, &e).node_cap(limits.node_cap).run(|rel| match keep(rel, &mut data, true) {
                Ok(go) => go,
                Err(e) => {
                    err = Some(e);
                    false
                }
            })?;
        }
        if let Some(e) = err {
            return Err(e);
        }
        Self::from_data(x.clone(), class.name(), data)
    }

    /// Builds the space on a given carrier; the structure comes from the
    /// instance capability.
    pub fn from_data(x: Arc<Category>, class: String, data: Vec<Vec<Elem>>) -> Result<Self> {
        let monad = x.monad().clone();
        let q = x.quantale().clone();
        let n = data.len();
        let Some(PresheafCapability::PrincipalTransport) = monad.presheaf_capability() else {
            return Err(Error::Unsupported(format!("{} does not provide presheaf structures", monad.label())));
        };
        let inv = monad
            .principal_inverse(n)
            .ok_or_else(|| Error::Unsupported(format!("{} has no principal bijection on {n} points", monad.label())))?;
        let tn = monad.t_size(n);
        let a = VRel::from_fn(q.clone(), tn, n, |p, j| {
            let (phi, psi) = (&data[inv[p]], &data[j]);
            q.meet_all(phi.iter().zip(psi).map(|(&u, &v)| q.hom(u, v)))
        });
        let points = data.iter().map(|d| presheaf_name(&q, d)).collect();
        let cat = Category::new(format!("{}({})", class_symbol(&class), x.name()), monad, points, a)?;
        let index = data.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        Ok(PresheafSpace { base: x, class, data, index, cat: Arc::new(cat) })
    }

    pub fn base(&self) -> &Arc<Category> {
        &self.base
    }

    pub fn class_name(&self) -> &str {
        &self.class
    }

    pub fn category(&self) -> &Arc<Category> {
        &self.cat
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn presheaf(&self, i: usize) -> &[Elem] {
        &self.data[i]
    }

    pub fn presheaves(&self) -> &[Vec<Elem>] {
        &self.data
    }

    pub fn find(&self, d: &[Elem]) -> Option<usize> {
        self.index.get(d).copied()
    }

    /// `x ↦ x^* = a(−, x)`.
    pub fn yoneda_map(&self) -> Result<Vec<usize>> {
        (0..self.base.len())
            .map(|x| {
                let col = self.base.structure().column(x);
                self.find(&col).ok_or_else(|| {
                    Error::Precondition(format!("{}^* is not in the {} space of {}", self.base.points()[x], self.class, self.base.name()))
                })
            })
            .collect()
    }

    pub fn yoneda(&self) -> Result<Functor> {
        Functor::new(self.base.clone(), self.cat.clone(), self.yoneda_map()?)
    }

    /// `â(Ty(𝔵), ψ) = ψ(𝔵)` for every `𝔵` and `ψ`.
    pub fn check_yoneda_lemma(&self) -> LawReport {
        let mut rep = LawReport::new(format!("Yoneda lemma for {}", self.cat.name()));
        let y = match self.yoneda_map() {
            Ok(y) => y,
            Err(e) => {
                rep.fail("â(Ty(𝔵), ψ) = ψ(𝔵)", e.to_string(), 0, "pairs (𝔵, ψ)");
                return rep;
            }
        };
        let ty = self.base.monad().t_map(&y, self.len());
        let mut w = None;
        'outer: for t in 0..self.base.t_len() {
            for (j, psi) in self.data.iter().enumerate() {
                if self.cat.a(ty[t], j) != psi[t] {
                    w = Some(format!("({}, {})", self.base.t_name(t), self.cat.points()[j]));
                    break 'outer;
                }
            }
        }
        rep.record("â(Ty(𝔵), ψ) = ψ(𝔵)", w, (self.base.t_len() * self.len()) as u64, "pairs (𝔵, ψ)");
        rep
    }

    /// Test hook: the same space with one structure entry overwritten.
    pub fn with_structure_entry(&self, t: usize, j: usize, v: Elem) -> Self {
        let mut a = self.cat.structure().clone();
        a.set(t, j, v);
        let cat = Category::new(self.cat.name(), self.cat.monad().clone(), self.cat.points().to_vec(), a).expect("same shape");
        PresheafSpace { base: self.base.clone(), class: self.class.clone(), data: self.data.clone(), index: self.index.clone(), cat: Arc::new(cat) }
    }

    /// Whether `y_X` is a bijection onto the space (it is always fully faithful).
    pub fn unit_is_iso(&self) -> Result<bool> {
        let y = self.yoneda_map()?;
        let mut seen = vec![false; self.len()];
        for &j in &y {
            seen[j] = true;
        }
        Ok(y.len() == self.len() && seen.iter().all(|&s| s))
    }
}

fn class_symbol(class: &str) -> String {
    match class {
        "all" => "P".to_string(),
        other => format!("Φ[{other}]"),
    }
}

/// A saturated class together with limits and a cache of built spaces.
pub struct Phi {
    class: Arc<dyn SaturatedClass>,
    limits: Limits,
    cache: RwLock<HashMap<String, Arc<PresheafSpace>>>,
}

impl fmt::Debug for Phi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phi({})", self.class.name())
    }
}

pub fn fingerprint(c: &Category) -> String {
    let data: Vec<u16> = c.structure().data().iter().map(|e| e.0).collect();
    format!("{}|{}|{:?}|{:?}", c.monad().label(), c.quantale().name(), c.points(), data)
}

impl Phi {
    pub fn new(class: Arc<dyn SaturatedClass>, limits: Limits) -> Self {
        Phi { class, limits, cache: RwLock::new(HashMap::new()) }
    }

    pub fn builtin(class: Class, limits: Limits) -> Self {
        Self::new(Arc::new(class), limits)
    }

    pub fn class(&self) -> &Arc<dyn SaturatedClass> {
        &self.class
    }

    pub fn name(&self) -> String {
        self.class.name()
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn contains(&self, psi: &Bimodule) -> Result<bool> {
        self.class.contains(psi, &self.limits)
    }

    pub fn space(&self, x: &Arc<Category>) -> Result<Arc<PresheafSpace>> {
        let key = fingerprint(x);
        if let Some(s) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(PresheafSpace::build(x, self.class.as_ref(), &self.limits)?);
        Ok(self.cache.write().expect("cache lock").entry(key).or_insert(s).clone())
    }

    pub fn yoneda(&self, x: &Arc<Category>) -> Result<Functor> {
        self.space(x)?.yoneda()
    }

    /// `Φf = (−)∘f^*: ΦX → ΦY`.
    pub fn apply(&self, f: &Functor) -> Result<Functor> {
        let (sx, sy) = (self.space(f.src())?, self.space(f.tgt())?);
        transport(&sx, &sy, &Precompose::new(&f.upper_star()), "Φf")
    }

    /// `Φ*f = (−)∘f_*: ΦY → ΦX`.
    pub fn apply_star(&self, f: &Functor) -> Result<Functor> {
        let (sx, sy) = (self.space(f.src())?, self.space(f.tgt())?);
        transport(&sy, &sx, &Precompose::new(&f.lower_star()), "Φ*f")
    }

    /// `⋔_X = Φ*y_X: ΦΦX → ΦX`.
    pub fn mult(&self, x: &Arc<Category>) -> Result<Functor> {
        let s = self.space(x)?;
        let ss = self.space(s.category())?;
        let y = s.yoneda()?;
        transport(&ss, &s, &Precompose::new(&y.lower_star()), "⋔")
    }

    pub fn is_dense(&self, f: &Functor) -> Result<bool> {
        self.contains(&f.lower_star())
    }

    /// Visits the data of every member presheaf on `x` without storing them;
    /// only the search node cap applies. Returns the number visited.
    pub fn for_each(&self, x: &Arc<Category>, mut visit: impl FnMut(&[Elem]) -> bool) -> Result<u64> {
        let e = Arc::new(Category::unit_e(x.monad().clone()));
        let mut count = 0u64;
        let mut err = None;
        let mut consider = |rel: &VRel, searched: bool| -> bool {
            let b = Bimodule::raw(x.clone(), e.clone(), rel.clone());
            let member = if searched { self.class.contains_bimodule(&b, &self.limits) } else { self.contains(&b) };
            match member {
                Ok(true) => {
                    count += 1;
                    visit(rel.data())
                }
                Ok(false) => true,
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        };
        if let Some(mut cands) = self.class.candidates(x) {
            cands.sort();
            cands.dedup();
            for c in cands {
                if !consider(&VRel::new(x.quantale().clone(), x.t_len(), 1, c)?, false) {
                    break;
                }
            }
        } else {
            BimoduleSearch::new(x, &e).node_cap(self.limits.node_cap).run(|r| consider(r, true))?;
        }
        match err {
            Some(e) => Err(e),
            None => Ok(count),
        }
    }
}

/// The functor induced on spaces by precomposition; fails when an image
/// leaves the target space.
fn transport(from: &PresheafSpace, to: &PresheafSpace, pre: &Precompose, what: &str) -> Result<Functor> {
    let map = from
        .presheaves()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let img = pre.apply(d);
            to.find(&img).ok_or_else(|| {
                Error::Precondition(format!(
                    "{what} sends {} outside {} (image {})",
                    from.category().points()[i],
                    to.category().name(),
                    presheaf_name(from.base().quantale(), &img)
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Functor::new(from.category().clone(), to.category().clone(), map)
}

fn adjunction_witness(l: &Functor, r: &Functor) -> Option<String> {
    let unit = r.after(l).expect("composable");
    let counit = l.after(r).expect("composable");
    let id_a = Functor::identity(l.src().clone());
    let id_b = Functor::identity(l.tgt().clone());
    if !id_a.le(&unit) {
        return Some(format!("1 ≰ r·l for l = {}", l.describe()));
    }
    if !counit.le(&id_b) {
        return Some(format!("l·r ≰ 1 for l = {}", l.describe()));
    }
    None
}

fn eq_witness(f: &Functor, g: &Functor) -> Option<String> {
    (0..f.src().len()).find(|&x| f.at(x) != g.at(x)).map(|x| {
        format!("at {}: {} vs {}", f.src().points()[x], f.tgt().points()[f.at(x)], g.tgt().points()[g.at(x)])
    })
}

fn record_result(rep: &mut LawReport, name: &str, r: Result<Option<String>>, scanned: u64, scope: &str) {
    match r {
        Ok(w) => rep.record(name, w, scanned, scope),
        Err(e @ Error::SizeCap { .. }) => rep.skip(name, e.to_string()),
        Err(e) => rep.fail(name, e.to_string(), scanned, scope),
    }
}

impl Phi {
    /// Unit laws, associativity, lax idempotency and both adjunctions at `X`.
    pub fn check_monad_at(&self, x: &Arc<Category>) -> LawReport {
        let mut rep = LawReport::new(format!("{} monad at {}", self.name(), x.name()));
        let setup = (|| -> Result<_> {
            let s = self.space(x)?;
            let ss = self.space(s.category())?;
            let y = s.yoneda()?;
            let y_s = ss.yoneda()?;
            let mu = self.mult(x)?;
            let phi_y = self.apply(&y)?;
            Ok((s, ss, y, y_s, mu, phi_y))
        })();
        let (s, ss, _y, y_s, mu, phi_y) = match setup {
            Ok(v) => v,
            Err(e @ Error::SizeCap { .. }) => {
                rep.skip("monad laws", e.to_string());
                return rep;
            }
            Err(e) => {
                rep.fail("construction", e.to_string(), 0, "objects");
                return rep;
            }
        };
        let n = s.len() as u64;
        let id_s = Functor::identity(s.category().clone());
        rep.record("⋔·y_ΦX = 1", eq_witness(&mu.after(&y_s).expect("composable"), &id_s), n, "presheaves");
        rep.record("⋔·Φy_X = 1", eq_witness(&mu.after(&phi_y).expect("composable"), &id_s), n, "presheaves");
        rep.record(
            "Φy_X ≤ y_ΦX",
            if phi_y.le(&y_s) { None } else { Some("pointwise comparison fails".into()) },
            n,
            "presheaves",
        );
        rep.record("⋔ ⊣ y_ΦX", adjunction_witness(&mu, &y_s), (ss.len() + s.len()) as u64, "presheaves");
        rep.record("Φy_X ⊣ ⋔", adjunction_witness(&phi_y, &mu), (ss.len() + s.len()) as u64, "presheaves");
        let assoc = (|| -> Result<(Option<String>, u64)> {
            let mu_s = self.mult(s.category())?;
            let phi_mu = self.apply(&mu)?;
            let lhs = mu.after(&phi_mu)?;
            let rhs = mu.after(&mu_s)?;
            Ok((eq_witness(&lhs, &rhs), lhs.src().len() as u64))
        })();
        match assoc {
            Ok((w, k)) => rep.record("⋔·Φ⋔ = ⋔·⋔_ΦX", w, k, "elements of ΦΦΦX"),
            Err(e) => record_result(&mut rep, "⋔·Φ⋔ = ⋔·⋔_ΦX", Err(e), 0, ""),
        }
        rep
    }

    /// Functoriality on a composable pair and naturality of `y` and `⋔` along `f`.
    pub fn check_naturality(&self, f: &Functor, g: Option<&Functor>) -> LawReport {
        let mut rep = LawReport::new(format!("{} naturality at {}", self.name(), f.describe()));
        let r = (|| -> Result<Option<String>> {
            let (sx, sy) = (self.space(f.src())?, self.space(f.tgt())?);
            let pf = self.apply(f)?;
            let lhs = pf.after(&sx.yoneda()?)?;
            let rhs = sy.yoneda()?.after(f)?;
            Ok(eq_witness(&lhs, &rhs))
        })();
        record_result(&mut rep, "Φf·y_X = y_Y·f", r, f.src().len() as u64, "points");
        let r = (|| -> Result<Option<String>> {
            let pf = self.apply(f)?;
            let ppf = self.apply(&pf)?;
            let lhs = self.mult(f.tgt())?.after(&ppf)?;
            let rhs = pf.after(&self.mult(f.src())?)?;
            Ok(eq_witness(&lhs, &rhs))
        })();
        record_result(&mut rep, "⋔_Y·ΦΦf = Φf·⋔_X", r, 0, "elements of ΦΦX");
        if let Some(g) = g {
            let r = (|| -> Result<Option<String>> {
                let gf = g.after(f)?;
                let lhs = self.apply(&gf)?;
                let rhs = self.apply(g)?.after(&self.apply(f)?)?;
                Ok(eq_witness(&lhs, &rhs))
            })();
            record_result(&mut rep, "Φ(g·f) = Φg·Φf", r, 0, "presheaves");
        }
        rep
    }

    /// `f_* ∈ Φ` agrees with `Φ*f` restricting to `Φ`, and then `Φf ⊣ Φ*f`.
    pub fn check_density_lemma(&self, f: &Functor) -> LawReport {
        let mut rep = LawReport::new(format!("{}-density of {}", self.name(), f.describe()));
        let r = (|| -> Result<Option<String>> {
            let dense = self.is_dense(f)?;
            let star = match self.apply_star(f) {
                Ok(s) => Some(s),
                Err(Error::Precondition(_)) => None,
                Err(e) => return Err(e),
            };
            if dense != star.is_some() {
                return Ok(Some(format!("f_* ∈ Φ is {dense}, Φ*f restricts is {}", star.is_some())));
            }
            if let Some(star) = star {
                let pf = self.apply(f)?;
                return Ok(adjunction_witness(&pf, &star));
            }
            Ok(None)
        })();
        record_result(&mut rep, "dense iff Φ*f restricts, and then Φf ⊣ Φ*f", r, 1, "functors");
        rep
    }

    /// The least functor `r: ΦX → X` with `r·y_X = 1`, if any; fails when two
    /// retractions left adjoint to `y_X` differ.
    pub fn has_algebra(&self, x: &Arc<Category>) -> Result<Option<Functor>> {
        let s = self.space(x)?;
        let y = s.yoneda_map()?;
        let mut allowed: Vec<Vec<usize>> = vec![(0..x.len()).collect(); s.len()];
        for (p, &j) in y.iter().enumerate() {
            allowed[j] = vec![p];
        }
        let mut found = Vec::new();
        search_functors(s.category(), x, &allowed, self.limits.node_cap, |r| {
            found.push(r.to_vec());
            true
        })?;
        let funs: Vec<Functor> =
            found.into_iter().map(|m| Functor::new(s.category().clone(), x.clone(), m).expect("total")).collect();
        let yf = s.yoneda()?;
        let adj: Vec<&Functor> = funs.iter().filter(|r| adjunction_witness(r, &yf).is_none()).collect();
        if adj.windows(2).any(|w| w[0].map() != w[1].map()) {
            return Err(Error::law("uniqueness of algebra structure", format!("{} vs {}", adj[0].describe(), adj[1].describe())));
        }
        Ok(funs.iter().find(|r| funs.iter().all(|o| r.le(o))).cloned())
    }
}

/// Every ordered pair of corpus objects with the bimodules between them.
pub struct BimoduleTable {
    pub objects: Vec<Arc<Category>>,
    /// `all[i][j]`: bimodules `objects[i] ⇸ objects[j]`.
    pub all: Vec<Vec<Vec<Bimodule>>>,
}

impl BimoduleTable {
    pub fn build(objects: &[Arc<Category>], limits: &Limits) -> Result<Self> {
        let n = objects.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let lists = crate::par::map(&pairs, |&(i, j)| -> Result<Vec<Bimodule>> {
            let (x, y) = (&objects[i], &objects[j]);
            let rels = BimoduleSearch::new(x, y).node_cap(limits.node_cap).collect(1 << 20)?;
            Ok(rels.into_iter().map(|r| Bimodule::raw(x.clone(), y.clone(), r)).collect())
        });
        let mut all = vec![vec![Vec::new(); n]; n];
        for (&(i, j), l) in pairs.iter().zip(lists) {
            all[i][j] = l?;
        }
        Ok(BimoduleTable { objects: objects.to_vec(), all })
    }

    pub fn count(&self) -> usize {
        self.all.iter().flatten().map(Vec::len).sum()
    }
}

/// (S1), (S2) and (S3) over every bimodule in `table` and every functor in `functors`.
pub fn check_saturated(class: &dyn SaturatedClass, table: &BimoduleTable, functors: &[Functor], limits: &Limits) -> LawReport {
    let mut rep = LawReport::new(format!("saturation of {}", class.name()));
    let n = table.objects.len();
    let members: Vec<Vec<Vec<&Bimodule>>> = crate::par::map(&(0..n).collect::<Vec<_>>(), |&i| {
        (0..n).map(|j| table.all[i][j].iter().filter(|b| class.contains(b, limits).unwrap_or(false)).collect()).collect()
    });

    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect();
    let s1 = crate::par::map(&triples, |&(i, j, k)| -> (u64, Option<String>) {
        let mut scanned = 0;
        for psi in &members[i][j] {
            for phi in &members[j][k] {
                scanned += 1;
                let c = phi.conv(psi).expect("composable");
                if !class.contains(&c, limits).unwrap_or(false) {
                    return (scanned, Some(format!("ψ = {psi:?}, φ = {phi:?}")));
                }
            }
        }
        (scanned, None)
    });
    let scanned: u64 = s1.iter().map(|r| r.0).sum();
    rep.record("(S1) closed under composition", s1.into_iter().find_map(|r| r.1), scanned, "composable member pairs");

    let w = functors.iter().find(|f| !class.contains(&f.upper_star(), limits).unwrap_or(false)).map(|f| f.describe());
    rep.record("(S2) contains every f^*", w, functors.len() as u64, "functors");

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let s3 = crate::par::map(&pairs, |&(i, j)| -> (u64, Option<String>) {
        let y = &table.objects[j];
        let e = Arc::new(Category::unit_e(y.monad().clone()));
        let reps: Vec<Bimodule> = (0..y.len())
            .map(|p| Bimodule::raw(y.clone(), e.clone(), VRel::from_fn(y.quantale().clone(), y.t_len(), 1, |t, _| y.a(t, p))))
            .collect();
        let mut scanned = 0;
        for psi in &table.all[i][j] {
            scanned += 1;
            let all_in = reps.iter().all(|r| class.contains(&r.conv(psi).expect("composable"), limits).unwrap_or(false));
            if all_in && !class.contains(psi, limits).unwrap_or(false) {
                return (scanned, Some(format!("ψ = {psi:?}")));
            }
        }
        (scanned, None)
    });
    let scanned: u64 = s3.iter().map(|r| r.0).sum();
    rep.record("(S3) detected by y^*∘(−)", s3.into_iter().find_map(|r| r.1), scanned, "bimodules");
    rep
}

/// A deliberately broken class for the saturation suite: bimodules with
/// some entry equal to `k`.
pub struct SomewhereUnit;

impl SaturatedClass for SomewhereUnit {
    fn name(&self) -> String {
        "somewhere_k".into()
    }

    fn contains(&self, psi: &Bimodule, _limits: &Limits) -> Result<bool> {
        let k = psi.src().quantale().unit();
        Ok(psi.is_bimodule() && psi.rel().data().contains(&k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::Monad;

    fn ord() -> Arc<crate::monad::Monad> {
        Monad::identity(Arc::new(Quantale::boolean()))
    }

    fn names(s: &PresheafSpace) -> Vec<String> {
        s.category().points().to_vec()
    }

    #[test]
    fn downsets_of_two_chain() {
        let x = Arc::new(Category::chain(ord(), 2).unwrap());
        let s = PresheafSpace::build(&x, &Class::All, &Limits::default()).unwrap();
        assert_eq!(names(&s), ["[0|0]", "[1|0]", "[1|1]"]);
        assert!(s.category().check().passed());
        assert_eq!(s.yoneda_map().unwrap(), vec![1, 2]);
        assert!(s.check_yoneda_lemma().passed());
        let r = PresheafSpace::build(&x, &Class::Representable, &Limits::default()).unwrap();
        assert_eq!(names(&r), ["[1|0]", "[1|1]"]);
    }

    #[test]
    fn empty_category_has_one_presheaf() {
        let x = Arc::new(Category::discrete(ord(), 0));
        let s = PresheafSpace::build(&x, &Class::All, &Limits::default()).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn perturbed_structure_breaks_yoneda() {
        let x = Arc::new(Category::chain(ord(), 2).unwrap());
        let s = PresheafSpace::build(&x, &Class::All, &Limits::default()).unwrap();
        let q = x.quantale();
        let bad = s.with_structure_entry(1, 0, q.top());
        let c = bad.check_yoneda_lemma();
        assert!(!c.passed());
        assert_eq!(c.first_failure().unwrap().witness.as_deref(), Some("(0, [0|0])"));
    }

    #[test]
    fn image_of_point_in_chain() {
        let m = ord();
        let pt = Arc::new(Category::chain(m.clone(), 1).unwrap());
        let two = Arc::new(Category::chain(m, 2).unwrap());
        let f = Functor::checked(pt, two, vec![1]).unwrap();
        let phi = Phi::builtin(Class::All, Limits::default());
        let pf = phi.apply(&f).unwrap();
        let names: Vec<&str> = pf.map().iter().map(|&j| pf.tgt().points()[j].as_str()).collect();
        assert_eq!(names, ["[0|0]", "[1|1]"]);
    }

    #[test]
    fn chain_has_algebra_antichain_does_not() {
        let m = ord();
        let phi = Phi::builtin(Class::All, Limits::default());
        let c = Arc::new(Category::chain(m.clone(), 3).unwrap());
        assert!(phi.has_algebra(&c).unwrap().is_some());
        let a = Arc::new(Category::discrete(m, 2));
        assert!(phi.has_algebra(&a).unwrap().is_none());
    }

    #[test]
    fn principal_downsets_are_the_right_adjoints() {
        let m = ord();
        for x in [Category::chain(m.clone(), 3).unwrap(), Category::discrete(m.clone(), 2)] {
            let x = Arc::new(x);
            let r = PresheafSpace::build(&x, &Class::RightAdjoint, &Limits::default()).unwrap();
            let p = PresheafSpace::build(&x, &Class::Representable, &Limits::default()).unwrap();
            assert_eq!(r.presheaves(), p.presheaves());
        }
    }

    #[test]
    fn monad_laws_on_chain() {
        let x = Arc::new(Category::chain(ord(), 2).unwrap());
        for c in Class::BUILTIN {
            let phi = Phi::builtin(c, Limits::default());
            let rep = phi.check_monad_at(&x);
            assert!(rep.passed(), "{rep}");
        }
    }
}

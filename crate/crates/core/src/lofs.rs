//! Comma-object factorisations `f = Rf·Lf` through `Kf ⊆ ΦX × Y`, class
//! membership, canonical fillers, the comonad and monad components `σ_f`,
//! `π_f`, and the suites built on them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::presheaf::{fingerprint, presheaf_name, Phi, PresheafSpace, Precompose};
use crate::quantale::Elem;
use crate::report::LawReport;
use crate::search::search_functors;
use crate::tvcat::{Bimodule, Category, Functor};
use crate::vrel::VRel;

/// `Kf` with its projections and the unit `Lf`.
pub struct Factorisation {
    f: Functor,
    class: String,
    space: Arc<PresheafSpace>,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    k: Arc<Category>,
    q: Functor,
    l: Functor,
    r: Functor,
    report: LawReport,
}

impl fmt::Debug for Factorisation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Factorisation({}, {} points)", self.f.describe(), self.pairs.len())
    }
}

impl Factorisation {
    pub fn f(&self) -> &Functor {
        &self.f
    }

    pub fn class_name(&self) -> &str {
        &self.class
    }

    pub fn space(&self) -> &Arc<PresheafSpace> {
        &self.space
    }

    pub fn k(&self) -> &Arc<Category> {
        &self.k
    }

    pub fn q(&self) -> &Functor {
        &self.q
    }

    pub fn l(&self) -> &Functor {
        &self.l
    }

    pub fn r(&self) -> &Functor {
        &self.r
    }

    /// The invariants verified at construction.
    pub fn report(&self) -> &LawReport {
        &self.report
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn locate(&self, phi: &[Elem], y: usize) -> Option<usize> {
        let p = self.space.find(phi)?;
        self.index.get(&(p, y)).copied()
    }

    /// `q_f^*∘(y_X)_*: X ⇸ Kf`.
    pub fn bimodule_b(&self) -> Bimodule {
        let y = self.space.yoneda().expect("space contains representables");
        self.q.upper_star().conv(&y.lower_star()).expect("composable")
    }
}

fn describe_pair(space: &PresheafSpace, y: &Category, p: usize, j: usize) -> String {
    format!("({},{})", space.category().points()[p], y.points()[j])
}

fn build_factorisation(f: &Functor, phi: &Phi) -> Result<Factorisation> {
    let (x, y) = (f.src(), f.tgt());
    x.validate()?;
    y.validate()?;
    let space = phi.space(x)?;
    let monad = x.monad().clone();
    let q = x.quantale().clone();
    let pre = Precompose::new(&f.upper_star());
    let mut pairs = Vec::new();
    for (p, d) in space.presheaves().iter().enumerate() {
        let img = pre.apply(d);
        for j in 0..y.len() {
            if (0..y.t_len()).all(|t| q.leq(img[t], y.a(t, j))) {
                pairs.push((p, j));
            }
        }
    }
    let n = pairs.len();
    if n > phi.limits().max_space {
        return Err(Error::SizeCap { what: format!("comma object of {}", f.describe()), needed: n as u128, cap: phi.limits().max_space });
    }
    let qmap: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let rmap: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let tq = monad.t_map(&qmap, space.len());
    let tr = monad.t_map(&rmap, y.len());
    let sc = space.category();
    let a = VRel::from_fn(q.clone(), monad.t_size(n), n, |t, i| q.meet(sc.a(tq[t], pairs[i].0), y.a(tr[t], pairs[i].1)));
    let points = pairs.iter().map(|&(p, j)| describe_pair(&space, y, p, j)).collect();
    let k = Arc::new(Category::new(format!("K({}->{})", x.name(), y.name()), monad, points, a)?);
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let yon = space.yoneda_map()?;
    let lmap = (0..x.len())
        .map(|xx| {
            index.get(&(yon[xx], f.at(xx))).copied().ok_or_else(|| Error::law("L lands in Kf", format!("x = {}", x.points()[xx])))
        })
        .collect::<Result<Vec<_>>>()?;
    let qf = Functor::new(k.clone(), sc.clone(), qmap)?;
    let rf = Functor::new(k.clone(), y.clone(), rmap)?;
    let lf = Functor::new(x.clone(), k.clone(), lmap)?;

    let mut rep = LawReport::new(format!("factorisation of {} ({})", f.describe(), phi.name()));
    let kc = k.check();
    let kw = kc.first_failure().map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()));
    rep.record("Kf is a separated category", kw, n as u64, "points of Kf");
    for (name, g) in [("q is a functor", &qf), ("R is a functor", &rf), ("L is a functor", &lf)] {
        rep.record(name, g.check().first_failure().and_then(|c| c.witness.clone()), 1, "functors");
    }
    let rl = rf.after(&lf)?;
    rep.record("R·L = f", (rl.map() != f.map()).then(|| format!("{:?} vs {:?}", rl.map(), f.map())), x.len() as u64, "points");
    let ql = qf.after(&lf)?;
    rep.record("q·L = y_X", (ql.map() != yon.as_slice()).then(|| format!("{:?} vs {:?}", ql.map(), yon)), x.len() as u64, "points");
    rep.record(
        "L fully faithful",
        lf.ff_witness().map(|(t, xx)| format!("({}, {})", x.t_name(t), x.points()[xx])),
        (x.t_len() * x.len()) as u64,
        "pairs (𝔵, x)",
    );
    let dense = phi.contains(&lf.lower_star())?;
    rep.record("L Φ-dense", (!dense).then(|| "(Lf)_* ∉ Φ".to_string()), 1, "bimodules");
    if let Some(c) = rep.first_failure() {
        return Err(Error::law(format!("factorisation of {}: {}", f.describe(), c.name), c.witness.clone().unwrap_or_default()));
    }
    Ok(Factorisation { f: f.clone(), class: phi.name(), space, pairs, index, k, q: qf, l: lf, r: rf, report: rep })
}

#[derive(Debug, Clone)]
pub struct LMembership {
    pub fully_faithful: bool,
    pub dense: bool,
    /// `s(y) = (y^*∘f_*, y)` when `f ∈ L`.
    pub section: Option<Functor>,
}

impl LMembership {
    pub fn member(&self) -> bool {
        self.section.is_some()
    }
}

/// A commutative square `v·f = g·u`.
#[derive(Debug, Clone)]
pub struct LiftingProblem {
    pub f: Functor,
    pub g: Functor,
    pub u: Functor,
    pub v: Functor,
}

impl LiftingProblem {
    pub fn new(f: Functor, g: Functor, u: Functor, v: Functor) -> Result<Self> {
        use crate::tvcat::same_category as same;
        if !(same(u.src(), f.src()) && same(u.tgt(), g.src()) && same(v.src(), f.tgt()) && same(v.tgt(), g.tgt())) {
            return Err(Error::shape("square sides do not match"));
        }
        let vf: Vec<usize> = f.map().iter().map(|&x| v.at(x)).collect();
        let gu: Vec<usize> = u.map().iter().map(|&x| g.at(x)).collect();
        if let Some(x) = (0..vf.len()).find(|&x| vf[x] != gu[x]) {
            return Err(Error::Precondition(format!("square does not commute at {}", f.src().points()[x])));
        }
        Ok(LiftingProblem { f, g, u, v })
    }
}

/// Every `d` with `d·f = u` and `g·d = v`, lexicographically.
pub fn enumerate_fillers(prob: &LiftingProblem, node_cap: u64) -> Result<Vec<Functor>> {
    let (y, z) = (prob.f.tgt(), prob.g.src());
    let mut allowed: Vec<Vec<usize>> =
        (0..y.len()).map(|j| (0..z.len()).filter(|&c| prob.g.at(c) == prob.v.at(j)).collect()).collect();
    for x in 0..prob.f.src().len() {
        let (j, c) = (prob.f.at(x), prob.u.at(x));
        allowed[j].retain(|&o| o == c);
    }
    let mut out = Vec::new();
    search_functors(y, z, &allowed, node_cap, |d| {
        out.push(d.to_vec());
        true
    })?;
    out.into_iter().map(|m| Functor::new(y.clone(), z.clone(), m)).collect()
}

fn eq_maps(a: &[usize], b: &[usize]) -> Option<usize> {
    (0..a.len()).find(|&i| a[i] != b[i])
}

fn is_size_cap(e: &Error) -> bool {
    matches!(e, Error::SizeCap { .. })
}

/// The factorisation engine for one saturated class, caching every comma object.
pub struct Lofs {
    phi: Phi,
    facts: RwLock<HashMap<String, Arc<Factorisation>>>,
}

impl fmt::Debug for Lofs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lofs({})", self.phi.name())
    }
}

fn functor_key(f: &Functor) -> String {
    format!("{}|{}|{:?}", fingerprint(f.src()), fingerprint(f.tgt()), f.map())
}

impl Lofs {
    pub fn new(phi: Phi) -> Self {
        Lofs { phi, facts: RwLock::new(HashMap::new()) }
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn factorise(&self, f: &Functor) -> Result<Arc<Factorisation>> {
        let key = functor_key(f);
        if let Some(fa) = self.facts.read().expect("cache lock").get(&key) {
            return Ok(fa.clone());
        }
        let fa = Arc::new(build_factorisation(f, &self.phi)?);
        Ok(self.facts.write().expect("cache lock").entry(key).or_insert(fa).clone())
    }

    pub fn l_membership(&self, f: &Functor) -> Result<LMembership> {
        let fully_faithful = f.fully_faithful();
        let dense = self.phi.is_dense(f)?;
        if !(fully_faithful && dense) {
            return Ok(LMembership { fully_faithful, dense, section: None });
        }
        let fa = self.factorise(f)?;
        let y = f.tgt();
        let pre = Precompose::new(&f.lower_star());
        let map = (0..y.len())
            .map(|j| {
                let d = pre.apply(&y.structure().column(j));
                fa.locate(&d, j).ok_or_else(|| {
                    Error::law("coalgebra lands in Kf", format!("y = {}, y^*∘f_* = {}", y.points()[j], presheaf_name(y.quantale(), &d)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let s = Functor::new(y.clone(), fa.k().clone(), map)?;
        s.validate()?;
        if let Some(j) = eq_maps(fa.r().after(&s)?.map(), &(0..y.len()).collect::<Vec<_>>()) {
            return Err(Error::law("R·s = 1", format!("y = {}", y.points()[j])));
        }
        if let Some(x) = eq_maps(s.after(f)?.map(), fa.l().map()) {
            return Err(Error::law("s·f = L", format!("x = {}", f.src().points()[x])));
        }
        Ok(LMembership { fully_faithful, dense, section: Some(s) })
    }

    /// Every `p: Kg → Z` with `p·Lg = 1` and `g·p = Rg`.
    pub fn retractions(&self, g: &Functor) -> Result<Vec<Functor>> {
        let fa = self.factorise(g)?;
        let z = g.src();
        let mut allowed: Vec<Vec<usize>> =
            (0..fa.len()).map(|i| (0..z.len()).filter(|&c| g.at(c) == fa.pair(i).1).collect()).collect();
        for c in 0..z.len() {
            allowed[fa.l().at(c)].retain(|&o| o == c);
        }
        let mut out = Vec::new();
        search_functors(fa.k(), z, &allowed, self.phi.limits().node_cap, |p| {
            out.push(p.to_vec());
            true
        })?;
        out.into_iter().map(|m| Functor::new(fa.k().clone(), z.clone(), m)).collect()
    }

    /// The least retraction, checked to satisfy `1 ≤ Lg·p`; retractions with
    /// that property must coincide.
    pub fn r_membership(&self, g: &Functor) -> Result<Option<Functor>> {
        let rs = self.retractions(g)?;
        if rs.is_empty() {
            return Ok(None);
        }
        let fa = self.factorise(g)?;
        let id = Functor::identity(fa.k().clone());
        let adjoint: Vec<&Functor> = rs.iter().filter(|p| id.le(&fa.l().after(p).expect("composable"))).collect();
        if adjoint.windows(2).any(|w| w[0].map() != w[1].map()) {
            return Err(Error::law("uniqueness of the algebra", format!("{} vs {}", adjoint[0].describe(), adjoint[1].describe())));
        }
        let least = rs
            .iter()
            .find(|p| rs.iter().all(|o| p.le(o)))
            .ok_or_else(|| Error::law("least algebra map", format!("{} retractions without a least one", rs.len())))?;
        if !id.le(&fa.l().after(least)?) {
            return Err(Error::law("1 ≤ Lg·p", least.describe()));
        }
        Ok(Some(least.clone()))
    }

    /// `K(u, v): Kf → Kg`, `(φ, y) ↦ (φ∘u^*, v y)`.
    pub fn kmap(&self, ff: &Factorisation, fg: &Factorisation, u: &Functor, v: &Functor) -> Result<Functor> {
        let pre = Precompose::new(&u.upper_star());
        let map = (0..ff.len())
            .map(|i| {
                let (p, y) = ff.pair(i);
                let d = pre.apply(ff.space().presheaf(p));
                fg.locate(&d, v.at(y)).ok_or_else(|| {
                    Error::law("K(u, v) lands in Kg", format!("at {}", ff.k().points()[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Functor::checked(ff.k().clone(), fg.k().clone(), map)
    }

    /// The canonical filler `p·K(u, v)·s`.
    pub fn solve_lifting(&self, prob: &LiftingProblem) -> Result<Functor> {
        let s = self
            .l_membership(&prob.f)?
            .section
            .ok_or_else(|| Error::Precondition(format!("{} is not in L for {}", prob.f.describe(), self.phi.name())))?;
        let p = self
            .r_membership(&prob.g)?
            .ok_or_else(|| Error::Precondition(format!("{} is not in R for {}", prob.g.describe(), self.phi.name())))?;
        let (ff, fg) = (self.factorise(&prob.f)?, self.factorise(&prob.g)?);
        let k = self.kmap(&ff, &fg, &prob.u, &prob.v)?;
        let d = p.after(&k.after(&s)?)?;
        d.validate()?;
        if let Some(x) = eq_maps(d.after(&prob.f)?.map(), prob.u.map()) {
            return Err(Error::law("d·f = u", format!("x = {}", prob.f.src().points()[x])));
        }
        if let Some(y) = eq_maps(prob.g.after(&d)?.map(), prob.v.map()) {
            return Err(Error::law("g·d = v", format!("y = {}", prob.f.tgt().points()[y])));
        }
        Ok(d)
    }

    /// `σ_f: Kf → K(Lf)`, `κ ↦ (κ^*∘(Lf)_*, κ)`.
    pub fn sigma(&self, f: &Functor) -> Result<Functor> {
        let fa = self.factorise(f)?;
        let fl = self.factorise(fa.l())?;
        let pre = Precompose::new(&fa.l().lower_star());
        let k = fa.k();
        let map = (0..k.len())
            .map(|i| {
                let d = pre.apply(&k.structure().column(i));
                fl.locate(&d, i).ok_or_else(|| Error::law("σ lands in K(Lf)", format!("κ = {}", k.points()[i])))
            })
            .collect::<Result<Vec<_>>>()?;
        Functor::checked(k.clone(), fl.k().clone(), map)
    }

    /// `π_f: K(Rf) → Kf`, `(Ψ, y) ↦ (Ψ∘q_f^*∘(y_X)_*, y)`.
    pub fn pi(&self, f: &Functor) -> Result<Functor> {
        let fa = self.factorise(f)?;
        let fr = self.factorise(fa.r())?;
        let pre = Precompose::new(&fa.bimodule_b());
        let map = (0..fr.len())
            .map(|i| {
                let (p, y) = fr.pair(i);
                let d = pre.apply(fr.space().presheaf(p));
                fa.locate(&d, y).ok_or_else(|| Error::law("π lands in Kf", format!("at {}", fr.k().points()[i])))
            })
            .collect::<Result<Vec<_>>>()?;
        Functor::checked(fr.k().clone(), fa.k().clone(), map)
    }

    /// `π_f` as an algebra structure on `Rf`: `π_f·L_Rf = 1` and `R_f·π_f = R_Rf`.
    pub fn check_r_algebra_at(&self, f: &Functor) -> LawReport {
        let mut rep = LawReport::new(format!("algebra on R at {} ({})", f.describe(), self.phi.name()));
        let fa = match self.factorise(f) {
            Ok(fa) => fa,
            Err(e) => {
                record_error(&mut rep, "factorisation", e);
                return rep;
            }
        };
        let k = fa.k();
        let pre_b = Precompose::new(&fa.bimodule_b());
        let w = (0..fa.len()).find(|&i| pre_b.apply(&k.structure().column(i)) != fa.space().presheaf(fa.pair(i).0)).map(|i| k.points()[i].clone());
        rep.record("π_f·L_Rf = 1", w, fa.len() as u64, "points of Kf");
        let y = f.tgt();
        let q = y.quantale();
        let pre_r = Precompose::new(&fa.r().upper_star());
        let mut scanned = 0u64;
        let mut w = None;
        let res = self.phi.for_each(k, |psi| {
            let img = pre_r.apply(psi);
            let pb = pre_b.apply(psi);
            for yy in 0..y.len() {
                if !(0..y.t_len()).all(|t| q.leq(img[t], y.a(t, yy))) {
                    continue;
                }
                scanned += 1;
                if fa.locate(&pb, yy).is_none_or(|kappa| fa.pair(kappa).1 != yy) {
                    w = Some(format!("({}, {})", presheaf_name(q, psi), y.points()[yy]));
                    return false;
                }
            }
            true
        });
        match res {
            Ok(_) => rep.record("R_f·π_f = R_Rf", w, scanned, "points of K(Rf)"),
            Err(e) => record_error(&mut rep, "R_f·π_f = R_Rf", e),
        }
        rep
    }

    pub fn check_awfs_at(&self, f: &Functor) -> LawReport {
        self.awfs(f, None)
    }

    /// The AWFS suite with two outputs of `σ_f` exchanged.
    pub fn check_awfs_perturbed(&self, f: &Functor, swap: (usize, usize)) -> LawReport {
        self.awfs(f, Some(swap))
    }

    fn awfs(&self, f: &Functor, swap: Option<(usize, usize)>) -> LawReport {
        let mut rep = LawReport::new(format!("AWFS at {} ({})", f.describe(), self.phi.name()));
        let fa = match self.factorise(f) {
            Ok(fa) => fa,
            Err(e) => {
                record_error(&mut rep, "factorisation", e);
                return rep;
            }
        };
        let n = fa.len() as u64;
        let comonad = (|| -> Result<Vec<(&'static str, Option<String>, u64)>> {
            let mut sigma = self.sigma(f)?;
            if let Some((i, j)) = swap {
                let mut m = sigma.map().to_vec();
                m.swap(i, j);
                sigma = Functor::new(sigma.src().clone(), sigma.tgt().clone(), m)?;
            }
            let fl = self.factorise(fa.l())?;
            let pts = |i: usize| fa.k().points()[i].clone();
            let mut out = Vec::new();
            let rs = fl.r().after(&sigma)?;
            out.push(("R_Lf·σ_f = 1", eq_maps(rs.map(), &(0..fa.len()).collect::<Vec<_>>()).map(pts), n));
            let k1r = self.kmap(&fl, &fa, &Functor::identity(f.src().clone()), fa.r())?;
            out.push(("K(1, R_f)·σ_f = 1", eq_maps(k1r.after(&sigma)?.map(), &(0..fa.len()).collect::<Vec<_>>()).map(pts), n));
            out.push((
                "σ_f·L_f = L_Lf",
                eq_maps(sigma.after(fa.l())?.map(), fl.l().map()).map(|x| f.src().points()[x].clone()),
                f.src().len() as u64,
            ));
            // compared as pairs in ΦX × K(Lf); σ_Lf(κ') = (κ'^*∘(L_Lf)_*, κ')
            let pre_ll = Precompose::new(&fl.l().lower_star());
            let kl = fl.k();
            let w = (0..fa.len()).find(|&i| {
                let s = sigma.at(i);
                let lhs = (fa.space().find(&pre_ll.apply(&kl.structure().column(s))), s);
                let (p, kappa) = fl.pair(s);
                lhs != (Some(p), sigma.at(kappa))
            });
            out.push(("σ_Lf·σ_f = K(1, σ_f)·σ_f", w.map(pts), n));
            Ok(out)
        })();
        match comonad {
            Ok(rows) => {
                for (name, w, k) in rows {
                    rep.record(format!("comonad: {name}"), w, k, "points of Kf");
                }
            }
            Err(e) => record_error(&mut rep, "comonad laws", e),
        }

        // unit laws of the monad, on data: no enumeration of Φ(Kf) needed
        let b = fa.bimodule_b();
        let pre_b = Precompose::new(&b);
        let k = fa.k();
        let w = (0..fa.len()).find(|&i| pre_b.apply(&k.structure().column(i)) != fa.space().presheaf(fa.pair(i).0)).map(|i| k.points()[i].clone());
        rep.record("monad: π_f·L_Rf = 1", w, n, "points of Kf");
        let pre_l = Precompose::new(&fa.l().upper_star());
        let w = (0..fa.len())
            .find(|&i| {
                let phi = fa.space().presheaf(fa.pair(i).0);
                pre_b.apply(&pre_l.apply(phi)) != phi
            })
            .map(|i| k.points()[i].clone());
        rep.record("monad: π_f·K(L_f, 1) = 1", w, n, "points of Kf");

        // laws over K(Rf) ⊆ Φ(Kf) × Y, streamed so that neither Φ(Kf) nor K(Rf) is stored
        let upper = (|| -> Result<[(Option<String>, u64); 3]> {
            let sigma = self.sigma(f)?;
            let fl = self.factorise(fa.l())?;
            let y = f.tgt();
            let q = y.quantale();
            let pre_r = Precompose::new(&fa.r().upper_star());
            let pre_sig_bl = Precompose::new(&sigma.upper_star()).then(&Precompose::new(&fl.bimodule_b()));
            let tr = fa.r().t_map();
            let mut scanned = 0u64;
            let mut w: [Option<String>; 3] = [None, None, None];
            let mut err = None;
            self.phi.for_each(k, |psi| {
                let img = pre_r.apply(psi);
                let pb = pre_b.apply(psi);
                for yy in 0..y.len() {
                    if !(0..y.t_len()).all(|t| q.leq(img[t], y.a(t, yy))) {
                        continue;
                    }
                    scanned += 1;
                    let z = || format!("({}, {})", presheaf_name(q, psi), y.points()[yy]);
                    let Some(kappa) = fa.locate(&pb, yy) else {
                        err = Some(Error::law("π_f lands in Kf", z()));
                        return false;
                    };
                    if w[0].is_none() && fa.pair(kappa).1 != yy {
                        w[0] = Some(z());
                    }
                    // columns of π_f^*∘q_f^*∘(y_X)_* and q_Rf^*∘(y_Kf)_*∘q_f^*∘(y_X)_* at z
                    if w[1].is_none() && b.rel().column(kappa) != pb {
                        w[1] = Some(z());
                    }
                    // σ_Rf(Ψ, y) has first component Ψ ∧ b(TRf(−), y)
                    if w[2].is_none() {
                        let psi1: Vec<Elem> = (0..psi.len()).map(|t| q.meet(psi[t], y.a(tr[t], yy))).collect();
                        let d = pre_sig_bl.apply(&psi1);
                        if fl.locate(&d, kappa) != Some(sigma.at(kappa)) {
                            w[2] = Some(z());
                        }
                    }
                }
                true
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            let [a, b2, c] = w;
            Ok([(a, scanned), (b2, scanned), (c, scanned)])
        })();
        let names = [
            "monad: R_f·π_f = R_Rf",
            "monad: π_f·K(π_f, 1) = π_f·π_Rf",
            "mixed: σ_f·π_f = π_Lf·K(σ_f, π_f)·σ_Rf",
        ];
        match upper {
            Ok(rows) => {
                for (name, (w, k)) in names.iter().zip(rows) {
                    rep.record(*name, w, k, "points of K(Rf)");
                }
            }
            Err(e) => {
                for name in names {
                    record_error(&mut rep, name, e.clone());
                }
            }
        }
        // each square is an equation in C^2: its top and bottom components
        for (square, parts) in [
            ("distributivity square ΠL·RΔ·ΔR = Δ·LΠ", [names[2], "monad: π_f·K(π_f, 1) = π_f·π_Rf"]),
            ("distributivity square RΣ·Δ = ΔL·LΔ·ΣR", ["comonad: σ_Lf·σ_f = K(1, σ_f)·σ_f", names[2]]),
        ] {
            let cs: Vec<_> = parts.iter().filter_map(|n| rep.check(n).cloned()).collect();
            if cs.len() < 2 || cs.iter().any(|c| c.status == crate::report::Status::Skipped) {
                rep.skip(square, "a component was not checked");
                continue;
            }
            let w = cs.iter().find(|c| c.status == crate::report::Status::Fail).map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()));
            rep.record(square, w, cs.iter().map(|c| c.scanned).sum(), "components");
        }
        rep
    }

    /// `(Lf)_* = q_f^*∘(y_X)_*` and `ΦLf ⊣ ⋔_X·Φq_f`.
    pub fn check_simplicity_at(&self, f: &Functor) -> LawReport {
        let mut rep = LawReport::new(format!("simplicity at {} ({})", f.describe(), self.phi.name()));
        let fa = match self.factorise(f) {
            Ok(fa) => fa,
            Err(e) => {
                record_error(&mut rep, "factorisation", e);
                return rep;
            }
        };
        let x = f.src();
        let k = fa.k();
        let b = fa.bimodule_b();
        let lstar = fa.l().lower_star();
        let w = lstar.rel().leq_witness(b.rel()).or_else(|| b.rel().leq_witness(lstar.rel()));
        rep.record(
            "(Lf)_* = q_f^*∘(y_X)_*",
            w.map(|(t, i)| format!("({}, {})", x.t_name(t), k.points()[i])),
            (x.t_len() * k.len()) as u64,
            "entries",
        );
        let lup = fa.l().upper_star();
        let unit = lup.conv(&b).expect("composable");
        let counit = b.conv(&lup).expect("composable");
        rep.record(
            "ΦLf ⊣ ⋔·Φq_f: a ≤ (Lf)^*∘q_f^*∘(y_X)_*",
            x.structure().leq_witness(unit.rel()).map(|(t, p)| format!("({}, {})", x.t_name(t), x.points()[p])),
            (x.t_len() * x.len()) as u64,
            "entries",
        );
        rep.record(
            "ΦLf ⊣ ⋔·Φq_f: q_f^*∘(y_X)_*∘(Lf)^* ≤ c",
            counit.rel().leq_witness(k.structure()).map(|(t, p)| format!("({}, {})", k.t_name(t), k.points()[p])),
            (k.t_len() * k.len()) as u64,
            "entries",
        );
        let direct = (|| -> Result<(Option<String>, u64)> {
            let q = x.quantale();
            let sx = fa.space();
            let pre_b = Precompose::new(&b);
            let pre_l = Precompose::new(&lup);
            let le = |u: &[Elem], v: &[Elem]| u.iter().zip(v).all(|(&a, &c)| q.leq(a, c));
            if let Some(i) = (0..sx.len()).find(|&i| !le(sx.presheaf(i), &pre_b.apply(&pre_l.apply(sx.presheaf(i))))) {
                return Ok((Some(format!("1 ≰ ⋔·Φq·ΦLf at {}", sx.category().points()[i])), sx.len() as u64));
            }
            let mut w = None;
            let n = self.phi.for_each(k, |psi| {
                let g = pre_b.apply(psi);
                if sx.find(&g).is_none() {
                    w = Some(format!("⋔·Φq leaves ΦX at {}", presheaf_name(q, psi)));
                } else if !le(&pre_l.apply(&g), psi) {
                    w = Some(format!("ΦLf·⋔·Φq ≰ 1 at {}", presheaf_name(q, psi)));
                }
                w.is_none()
            })?;
            Ok((w, sx.len() as u64 + n))
        })();
        match direct {
            Ok((w, k)) => rep.record("ΦLf ⊣ ⋔·Φq_f in the functor order", w, k, "presheaves"),
            Err(e) => record_error(&mut rep, "ΦLf ⊣ ⋔·Φq_f in the functor order", e),
        }
        rep
    }

    /// For `f ∈ L`: `S*f = ⋔·Φq·Φs` with `S*f·Φf = 1` and `Φf·S*f ≤ 1`;
    /// conversely a lari structure on `Φf` forces `f ∈ L`.
    pub fn check_lari_at(&self, f: &Functor) -> LawReport {
        let mut rep = LawReport::new(format!("lari at {} ({})", f.describe(), self.phi.name()));
        let r = (|| -> Result<(Option<String>, Option<String>)> {
            let lm = self.l_membership(f)?;
            let pf = self.phi.apply(f)?;
            let (sx, sy) = (self.phi.space(f.src())?, self.phi.space(f.tgt())?);
            let lari = lari_structure(&pf);
            let mut forward = None;
            if let Some(s) = &lm.section {
                let fa = self.factorise(f)?;
                let bimod = s.upper_star().conv(&fa.bimodule_b())?;
                let pre = Precompose::new(&bimod);
                let map = (0..sy.len())
                    .map(|j| sx.find(&pre.apply(sy.presheaf(j))).ok_or_else(|| Error::law("S*f lands in ΦX", sy.category().points()[j].clone())))
                    .collect::<Result<Vec<_>>>()?;
                let sstar = Functor::checked(sy.category().clone(), sx.category().clone(), map)?;
                forward = if sstar.after(&pf)?.map() != (0..sx.len()).collect::<Vec<_>>() {
                    Some("S*f·Φf ≠ 1".into())
                } else if !pf.after(&sstar)?.le(&Functor::identity(sy.category().clone())) {
                    Some("Φf·S*f ≰ 1".into())
                } else if lari.as_ref().map(|l| l.map()) != Some(sstar.map()) {
                    Some("S*f is not the right adjoint of Φf".into())
                } else {
                    None
                };
            }
            let converse = (lari.is_some() && !lm.member()).then(|| "Φf is a lari but f ∉ L".to_string());
            Ok((forward, converse))
        })();
        match r {
            Ok((a, b)) => {
                rep.record("S*f·Φf = 1 and Φf·S*f ≤ 1", a, 1, "morphisms");
                rep.record("Φf lari implies f ∈ L", b, 1, "morphisms");
            }
            Err(e) => record_error(&mut rep, "lari", e),
        }
        rep
    }
}

/// The right adjoint `r` of `h` with `r·h = 1`, if it exists.
pub fn lari_structure(h: &Functor) -> Option<Functor> {
    let (a, b) = (h.src(), h.tgt());
    let mut map = Vec::with_capacity(b.len());
    for j in 0..b.len() {
        let below: Vec<usize> = (0..a.len()).filter(|&i| b.point_leq(h.at(i), j)).collect();
        let top = below.iter().copied().find(|&i| below.iter().all(|&o| a.point_leq(o, i)))?;
        map.push(top);
    }
    let r = Functor::new(b.clone(), a.clone(), map).ok()?;
    if !r.is_functor() || r.after(h).ok()?.map() != (0..a.len()).collect::<Vec<_>>() {
        return None;
    }
    Some(r)
}

fn record_error(rep: &mut LawReport, name: &str, e: Error) {
    if is_size_cap(&e) {
        rep.skip(name, e.to_string());
    } else {
        rep.fail(name, e.to_string(), 0, "construction");
    }
}

/// A right adjoint `r` of `f` with `r·f = 1`, searched over all functors.
pub fn find_lari(f: &Functor, node_cap: u64) -> Result<Option<Functor>> {
    let (x, y) = (f.src(), f.tgt());
    let mut found = None;
    search_functors(y, x, &crate::search::unrestricted(y, x), node_cap, |r| {
        let r = Functor::new(y.clone(), x.clone(), r.to_vec()).expect("total");
        let rf = r.after(f).expect("composable");
        if rf.map() == (0..x.len()).collect::<Vec<_>>() && f.after(&r).expect("composable").le(&Functor::identity(y.clone())) {
            found = Some(r);
            return false;
        }
        true
    })?;
    Ok(found)
}

/// Injective and order-reflecting in the underlying orders.
pub fn is_order_embedding(f: &Functor) -> bool {
    let (x, y) = (f.src(), f.tgt());
    (0..x.len()).all(|i| (0..x.len()).all(|j| x.point_leq(i, j) == y.point_leq(f.at(i), f.at(j)) && (i == j || f.at(i) != f.at(j))))
}

/// Classes of corpus morphisms.
pub struct Classified {
    pub l: Vec<bool>,
    pub r: Vec<bool>,
}

impl Lofs {
    pub fn classify(&self, corpus: &Corpus) -> Result<Classified> {
        let idx: Vec<usize> = (0..corpus.functors.len()).collect();
        let l = crate::par::map(&idx, |&i| self.l_membership(&corpus.functors[i]).map(|m| m.member()));
        let r = crate::par::map(&idx, |&i| self.r_membership(&corpus.functors[i]).map(|p| p.is_some()));
        Ok(Classified { l: l.into_iter().collect::<Result<_>>()?, r: r.into_iter().collect::<Result<_>>()? })
    }

    /// Commuting squares from `f` to `g` drawn from corpus functors.
    pub fn squares(corpus: &Corpus, f: &Functor, g: &Functor) -> Vec<LiftingProblem> {
        let mut out = Vec::new();
        for u in corpus.hom(f.src(), g.src()) {
            for v in corpus.hom(f.tgt(), g.tgt()) {
                if (0..f.src().len()).all(|x| v.at(f.at(x)) == g.at(u.at(x))) {
                    out.push(LiftingProblem { f: f.clone(), g: g.clone(), u: u.clone(), v: v.clone() });
                }
            }
        }
        out
    }

    /// Canonical fillers are the least fillers, for every corpus square from L to R.
    pub fn check_kz_minimality(&self, corpus: &Corpus, cls: &Classified) -> LawReport {
        let mut rep = LawReport::new(format!("KZ filler minimality ({})", self.phi.name()));
        let fs: Vec<usize> = (0..corpus.functors.len()).filter(|&i| cls.l[i]).collect();
        let rs: Vec<usize> = (0..corpus.functors.len()).filter(|&i| cls.r[i]).collect();
        let res = crate::par::map(&fs, |&i| -> (u64, Option<String>) {
            let f = &corpus.functors[i];
            let mut scanned = 0;
            for &j in &rs {
                let g = &corpus.functors[j];
                for prob in Self::squares(corpus, f, g) {
                    scanned += 1;
                    let fillers = match enumerate_fillers(&prob, self.phi.limits().node_cap) {
                        Ok(v) => v,
                        Err(e) => return (scanned, Some(e.to_string())),
                    };
                    let d = match self.solve_lifting(&prob) {
                        Ok(d) => d,
                        Err(e) => return (scanned, Some(format!("{}: {e}", describe_square(&prob)))),
                    };
                    let least = fillers.iter().find(|c| fillers.iter().all(|o| c.le(o)));
                    if least.map(|c| c.map()) != Some(d.map()) {
                        return (scanned, Some(format!("{}: canonical {:?}, fillers {:?}", describe_square(&prob), d.map(), fillers.iter().map(|c| c.map().to_vec()).collect::<Vec<_>>())));
                    }
                }
            }
            (scanned, None)
        });
        let scanned = res.iter().map(|r| r.0).sum();
        rep.record("canonical filler is the least filler", res.into_iter().find_map(|r| r.1), scanned, "lifting problems with f ∈ L, g ∈ R");
        rep
    }

    /// AWFS laws at every corpus morphism.
    pub fn check_awfs(&self, corpus: &Corpus) -> LawReport {
        let reps = crate::par::map(&corpus.functors, |f| self.check_awfs_at(f));
        LawReport::merge(format!("AWFS ({}, {})", self.phi.name(), corpus.label()), reps)
    }

    /// Simplicity at every corpus morphism.
    pub fn check_simplicity(&self, corpus: &Corpus) -> LawReport {
        let reps = crate::par::map(&corpus.functors, |f| self.check_simplicity_at(f));
        LawReport::merge(format!("simplicity ({}, {})", self.phi.name(), corpus.label()), reps)
    }

    /// L and R against the lifting oracle, with bounded falsification of the converse.
    pub fn wfs_cross_check(&self, corpus: &Corpus, cls: &Classified) -> LawReport {
        let mut rep = LawReport::new(format!("WFS cross-check ({}, {})", self.phi.name(), corpus.label()));
        let nf = corpus.functors.len();
        let rs: Vec<usize> = (0..nf).filter(|&i| cls.r[i]).collect();
        let all: Vec<usize> = (0..nf).collect();
        // for each f: (squares scanned, some square without filler, first such square)
        let res = crate::par::map(&all, |&i| -> Result<(u64, Option<String>)> {
            let f = &corpus.functors[i];
            let mut scanned = 0;
            for &j in &rs {
                for prob in Self::squares(corpus, f, &corpus.functors[j]) {
                    scanned += 1;
                    if enumerate_fillers(&prob, self.phi.limits().node_cap)?.is_empty() {
                        return Ok((scanned, Some(describe_square(&prob))));
                    }
                }
            }
            Ok((scanned, None))
        });
        let res = match res.into_iter().collect::<Result<Vec<_>>>() {
            Ok(r) => r,
            Err(e) => {
                record_error(&mut rep, "lifting oracle", e);
                return rep;
            }
        };
        let lw = (0..nf).find(|&i| cls.l[i] && res[i].1.is_some()).map(|i| {
            format!("{} has no filler for {}", corpus.functors[i].describe(), res[i].1.clone().unwrap_or_default())
        });
        let scanned: u64 = (0..nf).filter(|&i| cls.l[i]).map(|i| res[i].0).sum();
        rep.record("every f ∈ L lifts against every g ∈ R", lw, scanned, "squares from L to R");
        let cw = (0..nf).find(|&i| !cls.l[i] && res[i].1.is_none()).map(|i| {
            format!("{} ∉ L lifts against every corpus g ∈ R", corpus.functors[i].describe())
        });
        let scanned = (0..nf).filter(|&i| !cls.l[i]).count() as u64;
        rep.record(
            "no f ∉ L lifts against all of R (no counterexample found at this scale)",
            cw,
            scanned,
            format!("morphisms outside L against {} members of R", rs.len()),
        );
        rep
    }
}

fn describe_square(p: &LiftingProblem) -> String {
    format!("f = {}, g = {}, u = {:?}, v = {:?}", p.f.describe(), p.g.describe(), p.u.map(), p.v.map())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::Monad;
    use crate::presheaf::{Class, Limits};
    use crate::quantale::Quantale;

    fn ord() -> Arc<Monad> {
        Monad::identity(Arc::new(Quantale::boolean()))
    }

    fn point_into_two() -> Functor {
        let m = ord();
        let pt = Arc::new(Category::chain(m.clone(), 1).unwrap());
        let two = Arc::new(Category::chain(m, 2).unwrap());
        Functor::checked(pt, two, vec![1]).unwrap()
    }

    fn engine(c: Class) -> Lofs {
        Lofs::new(Phi::builtin(c, Limits::default()))
    }

    #[test]
    fn comma_of_point_into_two_chain() {
        let lofs = engine(Class::All);
        let fa = lofs.factorise(&point_into_two()).unwrap();
        let names: Vec<&str> = fa.k().points().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["([0],0)", "([0],1)", "([1],1)"]);
        assert_eq!(fa.l().map(), [2]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(fa.k().point_leq(i, j), i <= j);
            }
        }
    }

    #[test]
    fn embedding_has_coalgebra() {
        let m = ord();
        let pt = Arc::new(Category::chain(m.clone(), 1).unwrap());
        let two = Arc::new(Category::chain(m, 2).unwrap());
        let f = Functor::checked(pt, two, vec![0]).unwrap();
        let lm = engine(Class::All).l_membership(&f).unwrap();
        assert!(lm.member());
    }

    #[test]
    fn chain_to_point_in_r_antichain_not() {
        let m = ord();
        let lofs = engine(Class::All);
        let pt = Arc::new(Category::chain(m.clone(), 1).unwrap());
        let c = Arc::new(Category::chain(m.clone(), 3).unwrap());
        let a = Arc::new(Category::discrete(m, 2));
        assert!(lofs.r_membership(&Functor::checked(c, pt.clone(), vec![0; 3]).unwrap()).unwrap().is_some());
        let g = Functor::checked(a, pt, vec![0; 2]).unwrap();
        assert!(lofs.r_membership(&g).unwrap().is_none());
        assert!(!lofs.l_membership(&g).unwrap().member());
    }

    #[test]
    fn lifting_against_chain_collapse() {
        let m = ord();
        let lofs = engine(Class::All);
        let pt = Arc::new(Category::chain(m.clone(), 1).unwrap());
        let two = Arc::new(Category::chain(m, 2).unwrap());
        let f = Functor::checked(pt.clone(), two.clone(), vec![0]).unwrap();
        let g = Functor::checked(two.clone(), pt.clone(), vec![0, 0]).unwrap();
        let u = Functor::checked(pt.clone(), two.clone(), vec![0]).unwrap();
        let v = Functor::checked(two, pt, vec![0, 0]).unwrap();
        let prob = LiftingProblem::new(f, g, u, v).unwrap();
        let fillers = enumerate_fillers(&prob, 1 << 20).unwrap();
        assert_eq!(fillers.len(), 2);
        assert_eq!(lofs.solve_lifting(&prob).unwrap().map(), [0, 0]);
    }

    #[test]
    fn awfs_and_simplicity_on_small_maps() {
        let lofs = engine(Class::All);
        let f = point_into_two();
        let rep = lofs.check_awfs_at(&f);
        assert!(rep.passed(), "{rep}");
        let rep = lofs.check_simplicity_at(&f);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn swapped_sigma_breaks_coassociativity() {
        let lofs = engine(Class::All);
        let rep = lofs.check_awfs_perturbed(&point_into_two(), (0, 2));
        let c = rep.check("comonad: σ_Lf·σ_f = K(1, σ_f)·σ_f").unwrap();
        assert_eq!(c.status, crate::report::Status::Fail);
        assert!(c.witness.is_some());
    }
}

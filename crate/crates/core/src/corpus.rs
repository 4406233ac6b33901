//! Desk-scale corpora: every separated category on at most `n` points up to
//! isomorphism, and every functor between them.

use std::sync::Arc;

use crate::error::Result;
use crate::monad::{Monad, MonadKind};
use crate::quantale::{Elem, QuantaleSpec};
use crate::search::{all_functors, DEFAULT_NODE_CAP};
use crate::report::LawReport;
use crate::tvcat::{Bimodule, Category, Functor};
use crate::vrel::VRel;

#[derive(Clone)]
pub struct Corpus {
    pub monad: Arc<Monad>,
    pub max_size: usize,
    pub objects: Vec<Arc<Category>>,
    pub functors: Vec<Functor>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Relations `r: X ⇸ X` that transport to separated categories, one per
/// isomorphism class (the lexicographically least representative).
fn point_relations(monad: &Arc<Monad>, n: usize) -> Vec<VRel> {
    let q = monad.quantale().clone();
    let perms = permutations(n);
    let mut out = Vec::new();
    for r in VRel::all(&q, n, n) {
        if !(0..n).all(|x| q.leq(q.unit(), r.get(x, x))) {
            continue;
        }
        let canonical = perms.iter().all(|p| {
            let moved: Vec<Elem> = (0..n * n).map(|i| r.get(p[i / n], p[i % n])).collect();
            moved.as_slice() >= r.data()
        });
        if !canonical {
            continue;
        }
        let c = Category::transported("", monad.clone(), Category::numbered(n), &r).expect("principal bijection");
        if c.check().passed() {
            out.push(r);
        }
    }
    out
}

impl Corpus {
    pub fn build(monad: Arc<Monad>, max_size: usize) -> Result<Self> {
        let mut objects = Vec::new();
        for n in 0..=max_size {
            for (i, r) in point_relations(&monad, n).into_iter().enumerate() {
                let c = Category::transported(format!("c{n}.{i}"), monad.clone(), Category::numbered(n), &r)?;
                objects.push(Arc::new(c));
            }
        }
        let mut functors = Vec::new();
        for x in &objects {
            for y in &objects {
                for m in all_functors(x, y, DEFAULT_NODE_CAP)? {
                    functors.push(Functor::new(x.clone(), y.clone(), m)?);
                }
            }
        }
        Ok(Corpus { monad, max_size, objects, functors })
    }

    /// The default corpus entry for a quantale and monad kind.
    pub fn standard(q: &QuantaleSpec, kind: MonadKind, max_size: usize) -> Result<Self> {
        let q = Arc::new(q.build()?);
        Self::build(Arc::new(Monad::instantiate(kind, q)), max_size)
    }

    pub fn label(&self) -> String {
        format!("{} over {}, carriers ≤ {}", self.monad.label(), self.monad.quantale().name(), self.max_size)
    }

    /// Composable pairs `(f, g)` with `g·f` defined, as indices into `functors`.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, f) in self.functors.iter().enumerate() {
            for (j, g) in self.functors.iter().enumerate() {
                if Arc::ptr_eq(f.tgt(), g.src()) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Category and bimodule calculus over the corpus: axioms of objects and
    /// their duals, `X⊗E ≅ X`, graph bimodules and the structures as units,
    /// `f_* ⊣ f^*`, the bimodule/functor correspondence, and agreement of the
    /// three descriptions of the local order.
    pub fn check_calculus(&self) -> LawReport {
        let mut rep = LawReport::new(format!("category and bimodule calculus on {}", self.label()));
        let no = self.objects.len() as u64;
        let name = |c: &Category| c.name().to_string();
        let w = self.objects.iter().find(|c| !c.check().passed()).map(|c| name(c));
        rep.record("objects are separated categories", w, no, "objects");
        let w = self.objects.iter().find(|c| !c.dual().check().passed()).map(|c| name(c));
        rep.record("duals are categories", w, no, "objects");
        let w = self.objects.iter().find(|c| !c.separated_quotient().1.iter().copied().eq(0..c.len())).map(|c| name(c));
        rep.record("separated quotient of a separated object is the identity", w, no, "objects");
        let e = Category::unit_e(self.monad.clone());
        let w = self
            .objects
            .iter()
            .find(|c| {
                let Ok(xe) = c.tensor(&e) else { return true };
                let xe = Arc::new(xe);
                let there = Functor::new(xe.clone(), (*c).clone(), (0..c.len()).collect());
                let back = Functor::new((*c).clone(), xe.clone(), (0..c.len()).collect());
                !(xe.check().passed() && there.is_ok_and(|f| f.is_functor() && f.fully_faithful()) && back.is_ok_and(|f| f.is_functor() && f.fully_faithful()))
            })
            .map(|c| name(c));
        rep.record("X⊗E ≅ X", w, no, "objects");
        let v = Category::v_as_category(self.monad.clone());
        let q = self.monad.quantale();
        let vw = (!v.check().passed()).then(|| "axioms".to_string()).or_else(|| {
            q.elements().flat_map(|a| q.elements().map(move |b| (a, b))).find(|&(a, b)| v.point_leq(a.idx(), b.idx()) != q.leq(a, b)).map(|(a, b)| format!("({}, {})", q.element_name(a), q.element_name(b)))
        });
        rep.record("(V, hom_ξ) is a category ordered as V", vw, (q.len() * q.len()) as u64, "pairs of elements");

        let nf = self.functors.len() as u64;
        let mut w = [None, None, None, None, None];
        for f in &self.functors {
            let d = || f.describe();
            let (lo, up) = (f.lower_star(), f.upper_star());
            if w[0].is_none() && !(lo.is_bimodule() && up.is_bimodule()) {
                w[0] = Some(d());
            }
            let units = |psi: &Bimodule| {
                let a = Bimodule::structure(psi.src().clone());
                let b = Bimodule::structure(psi.tgt().clone());
                psi.conv(&a).ok().as_ref() == Some(psi) && b.conv(psi).ok().as_ref() == Some(psi)
            };
            if w[1].is_none() && !(units(&lo) && units(&up)) {
                w[1] = Some(d());
            }
            if w[2].is_none() && !f.adjoint_pair_check().passed() {
                w[2] = Some(d());
            }
            let round = |psi: &Bimodule| {
                psi.to_functor().is_ok_and(|g| g.is_functor() && Bimodule::from_functor(&g, psi.src().clone(), psi.tgt().clone()).ok().as_ref() == Some(psi))
            };
            if w[3].is_none() && !(round(&lo) && round(&up)) {
                w[3] = Some(d());
            }
            if w[4].is_none() && self.is_ord() && f.fully_faithful() != crate::lofs::is_order_embedding(f) {
                w[4] = Some(d());
            }
        }
        rep.record("f_*, f^* are bimodules", w[0].take(), nf, "functors");
        rep.record("ψ∘a = ψ = b∘ψ for f_*, f^*", w[1].take(), nf, "functors");
        rep.record("f_* ⊣ f^*", w[2].take(), nf, "functors");
        rep.record("bimodule/functor correspondence round-trips", w[3].take(), nf, "functors");
        if self.is_ord() {
            rep.record("fully faithful ⟺ order-embedding", w[4].take(), nf, "functors");
        }
        let mut n = 0u64;
        let mut wl = None;
        for (i, f) in self.functors.iter().enumerate() {
            for g in &self.functors[i..] {
                if !(Arc::ptr_eq(f.src(), g.src()) && Arc::ptr_eq(f.tgt(), g.tgt())) {
                    continue;
                }
                for (a, b) in [(f, g), (g, f)] {
                    n += 1;
                    let l = a.leq(b).expect("parallel");
                    if wl.is_none() && (l != a.leq_via_lower(b).expect("parallel") || l != a.leq_formula(b).expect("parallel")) {
                        wl = Some(format!("{} vs {}", a.describe(), b.describe()));
                    }
                }
            }
        }
        rep.record("f ≤ g ⟺ f^* ≤ g^* ⟺ f_* ≥ g_*, and the pointwise formula agrees", wl, n, "parallel pairs");
        rep
    }

    /// Identity monad over the boolean quantale.
    pub fn is_ord(&self) -> bool {
        self.monad.kind() == MonadKind::Identity && self.monad.quantale().name() == "boolean"
    }

    /// Functors `src → tgt`, in corpus order.
    pub fn hom(&self, src: &Arc<Category>, tgt: &Arc<Category>) -> Vec<&Functor> {
        self.functors.iter().filter(|f| Arc::ptr_eq(f.src(), src) && Arc::ptr_eq(f.tgt(), tgt)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Quantale;

    #[test]
    fn posets_up_to_three_points() {
        let c = Corpus::build(Monad::identity(Arc::new(Quantale::boolean())), 3).unwrap();
        let sizes: Vec<usize> = (0..=3).map(|n| c.objects.iter().filter(|o| o.len() == n).count()).collect();
        assert_eq!(sizes, [1, 1, 2, 5]);
    }

    #[test]
    fn calculus_on_small_corpora() {
        for c in [
            Corpus::build(Monad::identity(Arc::new(Quantale::boolean())), 2).unwrap(),
            Corpus::build(Monad::ultrafilter(Arc::new(Quantale::boolean())), 2).unwrap(),
            Corpus::build(Monad::identity(Arc::new(Quantale::lukasiewicz_chain(2))), 2).unwrap(),
        ] {
            let rep = c.check_calculus();
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn ultrafilter_corpus_matches_ord() {
        let q = Arc::new(Quantale::boolean());
        let a = Corpus::build(Monad::identity(q.clone()), 3).unwrap();
        let b = Corpus::build(Monad::ultrafilter(q), 3).unwrap();
        assert_eq!(a.objects.len(), b.objects.len());
        assert_eq!(a.functors.len(), b.functors.len());
    }
}

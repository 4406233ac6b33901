//! Bounded exhaustive searches: functors by backtracking over point
//! assignments, bimodules by backtracking over entries, both pruned by
//! pairwise constraints read off the principal elements of `TX`.

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};
use crate::tvcat::Category;
use crate::vrel::VRel;

/// Default bound on search nodes before a search gives up with [`Error::SizeCap`].
pub const DEFAULT_NODE_CAP: u64 = 50_000_000;

/// Calls `visit` on every functor `src → tgt` whose value at `x` lies in
/// `allowed[x]`, in lexicographic order of the allowed lists. `visit` returns
/// `false` to stop early.
pub fn search_functors(
    src: &Category,
    tgt: &Category,
    allowed: &[Vec<usize>],
    node_cap: u64,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<()> {
    let n = src.len();
    assert_eq!(allowed.len(), n);
    let q = src.quantale();
    let (ex, ey) = (src.unit_map(), tgt.unit_map());
    let mut f = vec![0usize; n];
    let mut pos = vec![0usize; n];
    let mut nodes = 0u64;
    let pair_ok = |f: &[usize], i: usize, j: usize| q.leq(src.a(ex[i], j), tgt.a(ey[f[i]], f[j]));
    let mut depth = 0usize;
    if n == 0 {
        if full_functor_check(src, tgt, &f) {
            visit(&f);
        }
        return Ok(());
    }
    loop {
        if pos[depth] >= allowed[depth].len() {
            if depth == 0 {
                return Ok(());
            }
            pos[depth] = 0;
            depth -= 1;
            pos[depth] += 1;
            continue;
        }
        nodes += 1;
        if nodes > node_cap {
            return Err(Error::SizeCap { what: format!("functor search {} -> {}", src.name(), tgt.name()), needed: nodes as u128, cap: node_cap as usize });
        }
        f[depth] = allowed[depth][pos[depth]];
        let ok = (0..=depth).all(|i| pair_ok(&f, i, depth) && pair_ok(&f, depth, i));
        if !ok {
            pos[depth] += 1;
            continue;
        }
        if depth + 1 == n {
            if full_functor_check(src, tgt, &f) && !visit(&f) {
                return Ok(());
            }
            pos[depth] += 1;
        } else {
            depth += 1;
        }
    }
}

pub fn full_functor_check(src: &Category, tgt: &Category, f: &[usize]) -> bool {
    let q = src.quantale();
    let tf = src.monad().t_map(f, tgt.len());
    (0..src.t_len()).all(|t| (0..src.len()).all(|x| q.leq(src.a(t, x), tgt.a(tf[t], f[x]))))
}

/// Every candidate list is the whole target.
pub fn unrestricted(src: &Category, tgt: &Category) -> Vec<Vec<usize>> {
    vec![(0..tgt.len()).collect(); src.len()]
}

pub fn all_functors(src: &Category, tgt: &Category, node_cap: u64) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    search_functors(src, tgt, &unrestricted(src, tgt), node_cap, |f| {
        out.push(f.to_vec());
        true
    })?;
    Ok(out)
}

/// `c ⊗ v[from] ≤ v[to]`.
#[derive(Debug, Clone, Copy)]
struct Link {
    from: usize,
    to: usize,
    c: Elem,
}

/// Enumerates bimodules `src ⇸ tgt`, i.e. relations `TX ⇸ Y`, entry by entry
/// in row-major order.
pub struct BimoduleSearch<'a> {
    src: &'a Category,
    tgt: &'a Category,
    upper: Option<Vec<Elem>>,
    descending: bool,
    node_cap: u64,
    /// Links whose later endpoint is the index.
    links: Vec<Vec<Link>>,
    /// `T_ξa · m_X°` for the exact left law.
    prefix_a: VRel,
    /// The links already are the bimodule laws (identity monad).
    links_exact: bool,
}

impl<'a> BimoduleSearch<'a> {
    pub fn new(src: &'a Category, tgt: &'a Category) -> Self {
        let q = src.quantale().clone();
        let (tx, ny) = (src.t_len(), tgt.len());
        let var = |t: usize, y: usize| t * ny + y;
        let mut acc: std::collections::HashMap<(usize, usize), Elem> = Default::default();
        let mut add = |from: usize, to: usize, c: Elem| {
            if c == q.bottom() || (from == to && q.leq(c, q.unit())) {
                return;
            }
            let e = acc.entry((from, to)).or_insert(q.bottom());
            *e = q.join(*e, c);
        };
        // ψ∘a ≤ ψ: T_ξa(𝔛, 𝔵) ⊗ ψ(𝔵, y) ≤ ψ(m 𝔛, y)
        let ta = src.monad().lax(src.structure());
        let m = src.monad().mult(src.len());
        for big in 0..ta.rows() {
            for t in 0..ta.cols() {
                let c = ta.get(big, t);
                for y in 0..ny {
                    add(var(t, y), var(m[big], y), c);
                }
            }
        }
        // b∘ψ ≤ ψ at 𝔛 = e(𝔵), 𝔶 = e(y'): ψ(𝔵, y') ⊗ b(e y', y) ≤ ψ(𝔵, y)
        let ey = tgt.unit_map();
        for t in 0..tx {
            for y1 in 0..ny {
                for y in 0..ny {
                    add(var(t, y1), var(t, y), tgt.a(ey[y1], y));
                }
            }
        }
        let mut links = vec![Vec::new(); tx * ny];
        let mut keys: Vec<_> = acc.into_iter().collect();
        keys.sort_by_key(|&((a, b), _)| (a, b));
        for ((from, to), c) in keys {
            links[from.max(to)].push(Link { from, to, c });
        }
        let prefix_a = src.monad().kleisli_prefix(src.structure(), src.len()).expect("structure shape");
        let links_exact = src.monad().kind() == crate::monad::MonadKind::Identity;
        BimoduleSearch { src, tgt, upper: None, descending: false, node_cap: DEFAULT_NODE_CAP, links, prefix_a, links_exact }
    }

    /// Restricts every entry to lie below the given bound (row-major).
    pub fn below(mut self, upper: Vec<Elem>) -> Self {
        assert_eq!(upper.len(), self.src.t_len() * self.tgt.len());
        self.upper = Some(upper);
        self
    }

    /// Tries larger element indices first.
    pub fn descending(mut self) -> Self {
        self.descending = true;
        self
    }

    pub fn node_cap(mut self, cap: u64) -> Self {
        self.node_cap = cap;
        self
    }

    /// Exact bimodule test on a complete relation.
    pub fn is_bimodule(&self, rel: &VRel) -> bool {
        let left = rel.comp(&self.prefix_a);
        if !left.le(rel) {
            return false;
        }
        let right = self.src.monad().kleisli(self.tgt.structure(), rel, self.src.len()).expect("shape");
        right.le(rel)
    }

    /// Visits every bimodule (lexicographic over entry tuples by element index,
    /// reversed when descending); `visit` returns `false` to stop.
    pub fn run(&self, mut visit: impl FnMut(&VRel) -> bool) -> Result<u64> {
        let q: &Quantale = self.src.quantale();
        let nv = q.len();
        let n = self.src.t_len() * self.tgt.len();
        let order: Vec<Elem> =
            if self.descending { (0..nv).rev().map(|i| Elem(i as u16)).collect() } else { (0..nv).map(|i| Elem(i as u16)).collect() };
        let domain: Vec<Vec<Elem>> = (0..n)
            .map(|i| match &self.upper {
                Some(u) => order.iter().copied().filter(|&v| q.leq(v, u[i])).collect(),
                None => order.clone(),
            })
            .collect();
        let mut vals = vec![q.bottom(); n];
        let mut found = 0u64;
        let mut nodes = 0u64;
        let mk = |vals: &[Elem]| VRel::from_raw(q_arc(self.src), self.src.t_len(), self.tgt.len(), vals.to_vec());
        if n == 0 {
            let r = mk(&vals);
            if self.is_bimodule(&r) {
                visit(&r);
                found = 1;
            }
            return Ok(found);
        }
        let mut pos = vec![0usize; n];
        let mut depth = 0usize;
        loop {
            if pos[depth] >= domain[depth].len() {
                if depth == 0 {
                    return Ok(found);
                }
                pos[depth] = 0;
                depth -= 1;
                pos[depth] += 1;
                continue;
            }
            nodes += 1;
            if nodes > self.node_cap {
                return Err(Error::SizeCap {
                    what: format!("bimodule search {} -o {}", self.src.name(), self.tgt.name()),
                    needed: nodes as u128,
                    cap: self.node_cap as usize,
                });
            }
            vals[depth] = domain[depth][pos[depth]];
            let ok = self.links[depth].iter().all(|l| q.leq(q.tensor(l.c, vals[l.from]), vals[l.to]));
            if !ok {
                pos[depth] += 1;
                continue;
            }
            if depth + 1 == n {
                let r = mk(&vals);
                if self.links_exact || self.is_bimodule(&r) {
                    found += 1;
                    if !visit(&r) {
                        return Ok(found);
                    }
                }
                pos[depth] += 1;
            } else {
                depth += 1;
            }
        }
    }

    pub fn collect(&self, cap: usize) -> Result<Vec<VRel>> {
        let mut out = Vec::new();
        let mut over = false;
        self.run(|r| {
            if out.len() >= cap {
                over = true;
                return false;
            }
            out.push(r.clone());
            true
        })?;
        if over {
            return Err(Error::SizeCap {
                what: format!("bimodules {} -o {}", self.src.name(), self.tgt.name()),
                needed: cap as u128 + 1,
                cap,
            });
        }
        Ok(out)
    }
}

fn q_arc(c: &Category) -> std::sync::Arc<Quantale> {
    c.quantale().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::Monad;
    use std::sync::Arc;

    #[test]
    fn monotone_maps_between_chains() {
        let m = Monad::identity(Arc::new(Quantale::boolean()));
        let c2 = Category::chain(m.clone(), 2).unwrap();
        let c3 = Category::chain(m, 3).unwrap();
        // monotone maps 2 → 3: pairs a ≤ b in a 3-chain
        assert_eq!(all_functors(&c2, &c3, DEFAULT_NODE_CAP).unwrap().len(), 6);
    }

    #[test]
    fn bimodules_match_brute_force() {
        for kind in [crate::monad::MonadKind::Identity, crate::monad::MonadKind::FiniteUltrafilter] {
            let m = Arc::new(Monad::instantiate(kind, Arc::new(Quantale::boolean())));
            let x = Arc::new(Category::chain(m.clone(), 2).unwrap());
            let y = Arc::new(Category::discrete(m.clone(), 2));
            let s = BimoduleSearch::new(&x, &y);
            let fast = s.collect(1000).unwrap();
            let brute: Vec<VRel> = VRel::all(x.quantale(), 2, 2)
                .filter(|r| crate::tvcat::Bimodule::new(x.clone(), y.clone(), r.clone()).unwrap().is_bimodule())
                .collect();
            assert_eq!(fast, brute);
        }
    }
}

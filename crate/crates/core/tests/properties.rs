use std::sync::Arc;

use proptest::prelude::*;

use lofs_core::lofs::{is_order_embedding, Lofs};
use lofs_core::monad::Monad;
use lofs_core::presheaf::{Class, Limits, Phi};
use lofs_core::tvcat::{Category, Functor};
use lofs_core::vrel::Side;
use lofs_core::{Elem, Quantale, VRel};

fn quantale() -> impl Strategy<Value = Arc<Quantale>> {
    prop_oneof![
        Just(Quantale::boolean()),
        (1usize..=5).prop_map(Quantale::truncated_chain),
        (1usize..=5).prop_map(Quantale::lukasiewicz_chain),
        (1usize..=3).prop_map(Quantale::powerset_frame),
    ]
    .prop_map(Arc::new)
}

fn elem(q: &Quantale, i: usize) -> Elem {
    Elem((i % q.len()) as u16)
}

fn vrel(q: &Arc<Quantale>, rows: usize, cols: usize, seed: &[usize]) -> VRel {
    VRel::from_fn(q.clone(), rows, cols, |i, j| elem(q, seed[(i * cols + j) % seed.len()].wrapping_add(i * 7 + j)))
}

/// A partial order on `0..n`: the transitive closure of the edges `i < j` switched on in `bits`.
fn poset(n: usize, bits: u64) -> Vec<Vec<bool>> {
    let mut le = vec![vec![false; n]; n];
    let mut k = 0;
    for i in 0..n {
        le[i][i] = true;
        for j in i + 1..n {
            le[i][j] = bits >> k & 1 == 1;
            k += 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][m] && le[m][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    le
}

fn ord_category(name: &str, le: &[Vec<bool>]) -> Arc<Category> {
    let q = Arc::new(Quantale::boolean());
    let m = Monad::identity(q.clone());
    let n = le.len();
    let r = VRel::from_fn(q.clone(), n, n, |x, y| if le[x][y] { q.unit() } else { q.bottom() });
    Arc::new(Category::transported(name, m, Category::numbered(n), &r).unwrap())
}

fn down_sets(le: &[Vec<bool>]) -> usize {
    let n = le.len();
    (0u32..1 << n).filter(|s| (0..n).all(|y| s >> y & 1 == 0 || (0..n).all(|x| !le[x][y] || s >> x & 1 == 1))).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn quantale_laws_on_random_triples(q in quantale(), a in 0usize..64, b in 0usize..64, c in 0usize..64) {
        let (a, b, c) = (elem(&q, a), elem(&q, b), elem(&q, c));
        prop_assert_eq!(q.tensor(q.tensor(a, b), c), q.tensor(a, q.tensor(b, c)));
        prop_assert_eq!(q.tensor(a, b), q.tensor(b, a));
        prop_assert_eq!(q.tensor(a, q.unit()), a);
        prop_assert_eq!(q.tensor(a, q.join(b, c)), q.join(q.tensor(a, b), q.tensor(a, c)));
        prop_assert_eq!(q.leq(q.tensor(a, b), c), q.leq(b, q.hom(a, c)));
        prop_assert!(q.leq(q.meet(a, b), q.join(a, c)));
    }

    #[test]
    fn vrel_composition_and_involution(q in quantale(), d in prop::array::uniform4(1usize..=3), seed in prop::collection::vec(0usize..64, 1..12)) {
        let r = vrel(&q, d[0], d[1], &seed);
        let s = vrel(&q, d[1], d[2], &seed[seed.len() / 3..]);
        let t = vrel(&q, d[2], d[3], &seed[seed.len() / 2..]);
        let lhs = t.compose(&s.compose(&r).unwrap()).unwrap();
        let rhs = t.compose(&s).unwrap().compose(&r).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(s.compose(&VRel::identity(q.clone(), d[1])).unwrap(), s.clone());
        prop_assert_eq!(s.compose(&r).unwrap().involution(), r.involution().compose(&s.involution()).unwrap());
        prop_assert_eq!(s.involution().involution(), s);
    }

    #[test]
    fn vrel_residual_adjunctions(q in quantale(), d in prop::array::uniform3(1usize..=3), seed in prop::collection::vec(0usize..64, 1..12)) {
        // r: A ⇸ B, s: B ⇸ C, t: A ⇸ C
        let r = vrel(&q, d[0], d[1], &seed);
        let s = vrel(&q, d[1], d[2], &seed[seed.len() / 3..]);
        let t = vrel(&q, d[0], d[2], &seed[seed.len() / 2..]);
        let sr = s.compose(&r).unwrap().leq(&t).unwrap();
        prop_assert_eq!(sr, s.leq(&r.residual(Side::Left, &t).unwrap()).unwrap());
        prop_assert_eq!(sr, r.leq(&s.residual(Side::Right, &t).unwrap()).unwrap());
    }

    #[test]
    fn presheaves_on_a_poset_are_its_down_sets(n in 1usize..=4, bits in any::<u64>()) {
        let le = poset(n, bits);
        let x = ord_category("X", &le);
        let s = Phi::builtin(Class::All, Limits::default()).space(&x).unwrap();
        prop_assert_eq!(s.len(), down_sets(&le));
        prop_assert!(s.check_yoneda_lemma().passed());
        prop_assert!(s.yoneda().unwrap().fully_faithful());
    }

    #[test]
    fn factorisation_of_monotone_maps(n in 1usize..=3, m in 1usize..=3, bx in any::<u64>(), by in any::<u64>(), map in prop::collection::vec(0usize..3, 3)) {
        let x = ord_category("X", &poset(n, bx));
        let y = ord_category("Y", &poset(m, by));
        let f = Functor::new(x, y, map[..n].iter().map(|&i| i % m).collect()).unwrap();
        prop_assume!(f.is_functor());
        let lofs = Lofs::new(Phi::builtin(Class::All, Limits::default()));
        let fa = lofs.factorise(&f).unwrap();
        let rl = fa.r().after(fa.l()).unwrap();
        prop_assert_eq!(rl.map(), f.map());
        prop_assert!(fa.l().fully_faithful());
        prop_assert!(fa.report().passed());
        prop_assert_eq!(lofs.l_membership(&f).unwrap().member(), is_order_embedding(&f));
        prop_assert!(lofs.check_r_algebra_at(&f).passed());
    }
}

mod common;

use ckspace::compact_open::{self, normalize, Emptiness, SubbasicBox};
use ckspace::schemes::{self, chain_to_tree, Node, SchemeTree};
use ckspace::{parse_map, parse_set, BasicBox, PeriodicSet, ProgressionMap};
use proptest::collection::vec;
use proptest::prelude::*;

const PROBE: u64 = 200;

fn arb_set() -> impl Strategy<Value = PeriodicSet> {
    (
        1u64..=6,
        any::<u8>(),
        vec(0u64..20, 0..3),
        vec(0u64..20, 0..3),
    )
        .prop_map(|(m, bits, add, del)| {
            let base = (0..m)
                .filter(|r| bits & (1 << r) != 0)
                .fold(PeriodicSet::empty(), |acc, r| {
                    acc.union(&common::class(r, m))
                });
            base.union(&PeriodicSet::finite(add))
                .difference(&PeriodicSet::finite(del))
        })
}

fn arb_map() -> impl Strategy<Value = ProgressionMap> {
    any::<u64>().prop_map(|seed| common::map(&mut common::rng(seed)))
}

fn arb_constraints() -> impl Strategy<Value = Vec<SubbasicBox>> {
    vec(
        (arb_set(), arb_set()).prop_map(|(a, b)| SubbasicBox::new(a, b)),
        1..=4,
    )
}

/// `{n < bound : f(n) = x, n ∈ a}` is non-empty.
fn hits(f: &ProgressionMap, a: &PeriodicSet, x: u64) -> bool {
    (0..2000).any(|n| a.contains(n) && f.apply(n) == x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn boolean_ops_agree_pointwise(a in arb_set(), b in arb_set()) {
        let (u, i, d, x, c) = (
            a.union(&b), a.intersection(&b), a.difference(&b),
            a.symmetric_difference(&b), a.complement(),
        );
        for n in 0..PROBE {
            let (p, q) = (a.contains(n), b.contains(n));
            prop_assert_eq!(u.contains(n), p || q);
            prop_assert_eq!(i.contains(n), p && q);
            prop_assert_eq!(d.contains(n), p && !q);
            prop_assert_eq!(x.contains(n), p != q);
            prop_assert_eq!(c.contains(n), !p);
        }
    }

    #[test]
    fn relations_mod_finite(a in arb_set(), b in arb_set()) {
        prop_assert_eq!(a.almost_subset(&b), a.difference(&b).is_finite());
        prop_assert_eq!(a.almost_disjoint(&b), a.intersection(&b).is_finite());
        prop_assert_eq!(a.almost_equal(&b), a.symmetric_difference(&b).is_finite());
        prop_assert_eq!(a.is_finite(), a.iter_below(PROBE).count() <= 20);
    }

    #[test]
    fn canonical_form_is_unique(a in arb_set()) {
        let rebuilt = PeriodicSet::from_predicate(60, 25, |n| a.contains(n));
        prop_assert_eq!(&rebuilt, &a);
        prop_assert_eq!(parse_set(&a.to_string()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<PeriodicSet>(&json).unwrap(), a);
    }

    #[test]
    fn enumeration(a in arb_set()) {
        let listed: Vec<u64> = a.iter_below(PROBE).collect();
        for (k, &n) in listed.iter().enumerate() {
            prop_assert_eq!(a.nth(k as u64).unwrap(), n);
            prop_assert_eq!(a.rank(n), k as u64);
            prop_assert_eq!(a.first_from(n), Some(n));
        }
    }

    #[test]
    fn compose_is_pointwise(f in arb_map(), g in arb_map()) {
        let h = f.compose(&g);
        for n in 0..PROBE {
            prop_assert_eq!(h.apply(n), f.apply(g.apply(n)));
        }
        prop_assert_eq!(parse_map(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn image_and_preimage_are_exact(f in arb_map(), a in arb_set(), b in arb_set()) {
        let image = f.image(&a);
        for x in 0..50 {
            prop_assert_eq!(image.contains(x), hits(&f, &a, x), "x = {}", x);
        }
        let back = f.preimage(&b);
        for n in 0..PROBE {
            prop_assert_eq!(back.contains(n), b.contains(f.apply(n)));
        }
        prop_assert_eq!(f.almost_maps_into(&a, &b), image.almost_subset(&b));
    }

    #[test]
    fn normalize_preserves_members(raw in arb_constraints(), f in arb_map()) {
        let normal = normalize(&raw);
        prop_assert!(normal.is_normal());
        prop_assert_eq!(
            compact_open::member(&f, &normal),
            raw.iter().all(|c| c.contains(&f))
        );
    }

    #[test]
    fn emptiness_is_decided(raw in arb_constraints()) {
        let normal = normalize(&raw);
        match compact_open::is_empty(&normal).unwrap() {
            Emptiness::Inhabited { witness } => {
                prop_assert!(raw.iter().all(|c| c.contains(&witness)));
            }
            Emptiness::Empty { index } => {
                let c = &normal.constraints()[index];
                prop_assert!(!c.a.is_finite() && c.b.is_finite());
            }
        }
    }

    #[test]
    fn fix_criterion_matches_normal_forms(c in arb_set(), a in arb_set(), b in arb_set()) {
        let b = b.difference(&a);
        prop_assume!(a.is_finite() || !b.is_finite());
        let decided = compact_open::fix_intersect_empty(&c, &a, &b).unwrap();
        let raw = [SubbasicBox::new(c.clone(), c.clone()), SubbasicBox::new(a, b)];
        prop_assert_eq!(decided, compact_open::is_empty(&normalize(&raw)).unwrap().is_empty());
    }

    #[test]
    fn refine_is_intersection(outer in arb_constraints(), extra in arb_constraints(), f in arb_map()) {
        let outer = normalize(&outer);
        match compact_open::refine(&outer, &extra) {
            Ok((finer, cert)) => {
                prop_assert!(cert.validate(&finer, &outer));
                let both = compact_open::member(&f, &outer) && extra.iter().all(|c| c.contains(&f));
                prop_assert_eq!(compact_open::member(&f, &finer), both);
            }
            Err(_) => {
                let mut all = outer.constraints().to_vec();
                all.extend(extra);
                prop_assert!(compact_open::is_empty(&normalize(&all)).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn box_text_round_trips(raw in arb_constraints()) {
        let bx = BasicBox::from_constraints(raw);
        prop_assert_eq!(bx.to_string().parse::<BasicBox>().unwrap(), bx.clone());
        let json = serde_json::to_string(&bx).unwrap();
        prop_assert_eq!(serde_json::from_str::<BasicBox>(&json).unwrap(), bx);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn injection_is_injective_and_stable(seed in any::<u64>(), depth in 1usize..=5) {
        let chain = common::chain(&mut common::rng(seed), depth, 3);
        let tree = chain_to_tree(&chain).unwrap();
        let mut phi = schemes::build_injection(&tree).unwrap();
        let prefix = phi.prefix(256).to_vec();
        let distinct: std::collections::HashSet<_> = prefix.iter().collect();
        prop_assert_eq!(distinct.len(), prefix.len());
        prop_assert!(schemes::verify_star(&tree, &phi, 256).unwrap());

        let json = serde_json::to_string(&tree).unwrap();
        let back: SchemeTree = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &tree);

        let mut shallow = schemes::build_injection(&chain_to_tree(&chain[..1]).unwrap()).unwrap();
        for link in &chain[1..] {
            let before = shallow.finalized().to_vec();
            shallow.append_level(&link.bx, link.cert.as_ref().unwrap()).unwrap();
            prop_assert!(shallow.finalized().starts_with(&before));
        }
        prop_assert_eq!(shallow.prefix(256), &prefix[..]);
    }

    #[test]
    fn repair_moves_payloads_finitely(seed in any::<u64>(), depth in 1usize..=4, noise in vec((any::<usize>(), 0u64..30, any::<bool>()), 1..6)) {
        let tree = chain_to_tree(&common::chain(&mut common::rng(seed), depth, 3)).unwrap();
        let mut nodes: Vec<Node> = tree.nodes().to_vec();
        let len = nodes.len();
        for (i, n, in_c) in noise {
            let node = &mut nodes[1 + i % (len - 1)];
            let point = PeriodicSet::finite([n]);
            let set = if in_c { &mut node.c } else { &mut node.d };
            *set = set.symmetric_difference(&point);
        }
        let noisy = SchemeTree::from_nodes(nodes).unwrap();
        let repaired = schemes::repair(&noisy).unwrap();
        prop_assert!(schemes::validate(&repaired).is_valid());
        for (old, new) in noisy.nodes().iter().zip(repaired.nodes()) {
            prop_assert!(old.c.almost_equal(&new.c) && old.d.almost_equal(&new.d));
        }
    }
}

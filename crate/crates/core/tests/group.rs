mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use th_core::sweep::{random_group, random_subgroup};
use th_core::{annihilator, make_group, quotient, GroupElement, GroupSpec, Limits, Subgroup};

fn lim() -> Limits {
    Limits::default()
}

fn sub(spec: &GroupSpec, gens: &[Vec<u64>]) -> Subgroup {
    let g: Vec<GroupElement> = gens.iter().map(|c| el(spec, c)).collect();
    Subgroup::from_generators(spec, &g).unwrap()
}

fn members(h: &Subgroup) -> Set {
    coords(&h.elements(&lim()).unwrap())
}

#[test]
fn make_group_examples() {
    assert_eq!(make_group(&[6]).unwrap().order(), 6);
    assert_eq!(make_group(&[]).unwrap().order(), 1);
    let g = make_group(&[4, 6]).unwrap();
    assert_eq!(g.order(), 24);
    assert_eq!(g.factors(), &[4, 6]);
    assert!(make_group(&[0]).is_err());
    assert!(make_group(&[-3]).is_err());
}

#[test]
fn pairing_examples() {
    let z6 = make_group(&[6]).unwrap();
    let r = z6.pairing(&el(&z6, &[3]), &el(&z6, &[2])).unwrap();
    assert_eq!((r.num(), r.den()), (0, 1));
    let r = z6.pairing(&el(&z6, &[1]), &el(&z6, &[3])).unwrap();
    assert_eq!((r.num(), r.den()), (1, 2));
    assert!((r.to_complex() + 1.0).norm() < 1e-15);
    let g = make_group(&[4, 6]).unwrap();
    let r = g.pairing(&el(&g, &[1, 1]), &el(&g, &[2, 3])).unwrap();
    assert_eq!((r.num(), r.den()), (0, 1));
}

#[test]
fn pairing_matches_reference_table() {
    for factors in [vec![6], vec![4, 6], vec![2, 2, 3], vec![12], vec![1, 5]] {
        let spec = make_group(&factors).unwrap();
        for g in all(&spec) {
            for x in all(&spec) {
                let r = spec.pairing(&el(&spec, &g), &el(&spec, &x)).unwrap();
                let (s, l) = pairing_frac(&spec, &g, &x);
                assert_eq!(r.num() as u128 * l, s * r.den() as u128, "{factors:?} {g:?} {x:?}");
            }
        }
    }
}

#[test]
fn pairing_is_bilinear_exhaustively_on_small_groups() {
    for factors in [vec![12], vec![2, 6], vec![3, 3], vec![2, 2, 2]] {
        let spec = make_group(&factors).unwrap();
        let elems: Vec<GroupElement> = all(&spec).iter().map(|c| el(&spec, c)).collect();
        for a in &elems {
            for b in &elems {
                let ab = spec.add(a, b);
                for x in &elems {
                    let lhs = spec.pairing(&ab, x).unwrap();
                    let rhs = spec.pairing(a, x).unwrap().add(spec.pairing(b, x).unwrap());
                    assert_eq!(lhs, rhs);
                    let lhs = spec.pairing(x, &ab).unwrap();
                    let rhs = spec.pairing(x, a).unwrap().add(spec.pairing(x, b).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn subgroup_examples() {
    let z6 = make_group(&[6]).unwrap();
    let h = sub(&z6, &[vec![2]]);
    assert_eq!(h.order(), 3);
    assert_eq!(members(&h), [vec![0], vec![2], vec![4]].into());
    assert_eq!(sub(&z6, &[]).order(), 1);
    assert_eq!(sub(&z6, &[vec![2], vec![3]]).order(), 6);
}

#[test]
fn enumeration_examples() {
    let z6 = make_group(&[6]).unwrap();
    let e = z6.elements(&lim()).unwrap();
    assert_eq!(e.iter().map(|x| x.coords()[0]).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4, 5]);
    let h = sub(&z6, &[vec![2]]);
    let e = h.elements(&lim()).unwrap();
    assert_eq!(e.iter().map(|x| x.coords()[0]).collect::<Vec<_>>(), vec![0, 2, 4]);
    let v4 = make_group(&[2, 2]).unwrap();
    let e = v4.elements(&lim()).unwrap();
    let c: Vec<Vec<u64>> = e.iter().map(|x| x.coords().to_vec()).collect();
    assert_eq!(c, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
}

#[test]
fn enumeration_bound_is_enforced() {
    let spec = make_group(&[1000, 1000]).unwrap();
    let tight = Limits {
        max_order: 10_000_000,
        max_enumeration: 1000,
    };
    assert!(spec.elements(&tight).is_err());
    assert!(GroupSpec::with_limits(&[1000, 1000], &Limits { max_order: 10, max_enumeration: 10 }).is_err());
}

#[test]
fn annihilator_examples() {
    let z6 = make_group(&[6]).unwrap();
    let lam = annihilator(&z6, &sub(&z6, &[vec![2]])).unwrap();
    assert_eq!(members(&lam), [vec![0], vec![3]].into());
    for factors in [vec![6], vec![4, 6], vec![2, 3, 5]] {
        let spec = make_group(&factors).unwrap();
        assert_eq!(annihilator(&spec, &Subgroup::trivial(&spec)).unwrap(), Subgroup::whole(&spec));
        assert_eq!(annihilator(&spec, &Subgroup::whole(&spec)).unwrap(), Subgroup::trivial(&spec));
    }
}

/// Subgroups, annihilators and cosets all checked against closure and
/// filtering on every subgroup of the listed groups.
#[test]
fn subgroup_annihilator_and_cosets_match_brute_force() {
    let groups: Vec<Vec<i64>> = vec![vec![1], vec![6], vec![12], vec![2, 2], vec![4, 6], vec![2, 4], vec![3, 9], vec![6, 6]];
    for factors in groups {
        let spec = make_group(&factors).unwrap();
        for hset in all_subgroups(&spec) {
            let gens: Vec<Vec<u64>> = hset.iter().cloned().collect();
            let h = sub(&spec, &gens);
            assert_eq!(members(&h), hset);
            assert_eq!(h.order() as usize, hset.len());

            let lam = annihilator(&spec, &h).unwrap();
            let lset = common::annihilator(&spec, &hset);
            assert_eq!(members(&lam), lset, "{factors:?} H={hset:?}");
            assert_eq!(lam.order() * h.order(), spec.order());
            assert_eq!(annihilator(&spec, &lam).unwrap(), h);

            let q = quotient(&spec, &lam).unwrap();
            let parts = cosets(&spec, &lset);
            assert_eq!(q.coset_count() as usize, parts.len());
            assert_eq!(q.quotient_spec().order() as usize, parts.len());
            let reps = coords(&q.representatives(&lim()).unwrap());
            for part in &parts {
                let canon: Set = part.iter().map(|p| q.canonical_rep(&el(&spec, p)).coords().to_vec()).collect();
                assert_eq!(canon.len(), 1, "canonical_rep must be constant on a coset");
                let rep = canon.into_iter().next().unwrap();
                assert_eq!(&rep, part.iter().next().unwrap(), "rep is the coset minimum");
                assert!(reps.contains(&rep));
            }
            for a in all(&spec) {
                for b in all(&spec) {
                    let same = parts.iter().any(|p| p.contains(&a) && p.contains(&b));
                    assert_eq!(q.same_coset(&el(&spec, &a), &el(&spec, &b)), same);
                }
            }
        }
    }
}

#[test]
fn quotient_examples() {
    let z6 = make_group(&[6]).unwrap();
    let lam = sub(&z6, &[vec![3]]);
    let q = quotient(&z6, &lam).unwrap();
    assert_eq!(q.quotient_spec().factors(), &[3]);
    assert_eq!(coords(&q.representatives(&lim()).unwrap()), [vec![0], vec![1], vec![2]].into());
    let id = quotient(&z6, &Subgroup::trivial(&z6)).unwrap();
    assert_eq!(id.coset_count(), 6);
    assert_eq!(id.canonical_rep(&el(&z6, &[5])), el(&z6, &[5]));
    let all = quotient(&z6, &Subgroup::whole(&z6)).unwrap();
    assert_eq!(coords(&all.representatives(&lim()).unwrap()), [vec![0]].into());
}

#[test]
fn double_annihilator_on_every_cyclic_subgroup() {
    for n in 1..=200u64 {
        let spec = make_group(&[n as i64]).unwrap();
        for d in (1..=n).filter(|d| n % d == 0) {
            let h = sub(&spec, &[vec![d % n]]);
            assert_eq!(h.order(), n / d);
            let lam = annihilator(&spec, &h).unwrap();
            assert_eq!(lam.order() * h.order(), n);
            assert_eq!(annihilator(&spec, &lam).unwrap(), h, "n={n} d={d}");
        }
    }
}

#[test]
fn double_annihilator_on_random_product_subgroups() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2000 {
        let spec = random_group(&mut rng, 10_000, 4);
        let h = random_subgroup(&mut rng, &spec, 3);
        let lam = annihilator(&spec, &h).unwrap();
        assert_eq!(lam.order() * h.order(), spec.order());
        assert_eq!(annihilator(&spec, &lam).unwrap(), h, "{:?} {:?}", spec.factors(), h.basis());
    }
}

fn small_group() -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(1i64..=12, 0..=3)
        .prop_filter("order", |f| f.iter().product::<i64>() <= 300)
        .prop_map(|f| make_group(&f).unwrap())
}

fn group_with_gens() -> impl Strategy<Value = (GroupSpec, Vec<Vec<u64>>)> {
    small_group().prop_flat_map(|spec| {
        let coord = spec.factors().iter().map(|&n| 0..n).collect::<Vec<_>>();
        let gens = prop::collection::vec(coord, 0..=4);
        (Just(spec), gens)
    })
}

proptest! {
    #[test]
    fn generator_order_is_irrelevant((spec, gens) in group_with_gens(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = gens.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut doubled = gens.clone();
        doubled.extend(gens.iter().cloned());
        let a = sub(&spec, &gens);
        prop_assert_eq!(a.basis(), sub(&spec, &shuffled).basis().to_vec());
        prop_assert_eq!(a.basis(), sub(&spec, &doubled).basis().to_vec());
        prop_assert_eq!(members(&a), closure(&spec, &gens));
    }

    #[test]
    fn generators_regenerate_the_subgroup((spec, gens) in group_with_gens()) {
        let h = sub(&spec, &gens);
        let again = Subgroup::from_generators(&spec, &h.generators()).unwrap();
        prop_assert_eq!(&again, &h);
        for x in all(&spec) {
            prop_assert_eq!(h.contains(&el(&spec, &x)).unwrap(), closure(&spec, &gens).contains(&x));
        }
    }

    #[test]
    fn double_annihilator_holds((spec, gens) in group_with_gens()) {
        let h = sub(&spec, &gens);
        let lam = annihilator(&spec, &h).unwrap();
        prop_assert_eq!(lam.order() * h.order(), spec.order());
        prop_assert_eq!(annihilator(&spec, &lam).unwrap(), h);
    }

    #[test]
    fn pairing_is_bilinear(spec in small_group(), seed in any::<u64>()) {
        use th_core::sweep::random_element;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&mut rng, &spec);
        let b = random_element(&mut rng, &spec);
        let x = random_element(&mut rng, &spec);
        let ab = spec.add(&a, &b);
        prop_assert_eq!(spec.pairing(&ab, &x).unwrap(), spec.pairing(&a, &x).unwrap().add(spec.pairing(&b, &x).unwrap()));
        prop_assert_eq!(spec.pairing(&x, &ab).unwrap(), spec.pairing(&x, &a).unwrap().add(spec.pairing(&x, &b).unwrap()));
        prop_assert_eq!(spec.pairing(&a, &x).unwrap(), spec.pairing(&x, &a).unwrap());
    }
}

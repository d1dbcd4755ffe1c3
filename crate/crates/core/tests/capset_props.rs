use proptest::prelude::*;
use workbench_core::capset::*;
use workbench_core::rng::seeded;

/// Greedy cap from a shuffled point order.
fn greedy_cap(n: usize, seed: u64) -> CapSet {
    use rand::seq::SliceRandom;
    let total = 3usize.pow(n as u32);
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(&mut seeded(seed));
    let mut chosen: Vec<Vec3> = Vec::new();
    for i in order {
        let p = Vec3::from_index(n, i);
        if chosen.iter().all(|x| !chosen.contains(&x.third(&p))) {
            chosen.push(p);
        }
    }
    CapSet::new(n, chosen).unwrap()
}

/// Three distinct points are collinear iff they sum to zero coordinatewise.
fn brute_is_cap(cap: &CapSet) -> bool {
    let pts: Vec<Vec<u8>> = cap.points.iter().map(Vec3::trits).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if (0..cap.n).all(|c| (pts[i][c] + pts[j][c] + pts[k][c]).is_multiple_of(3)) {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_of_caps_are_caps(n1 in 1usize..=3, n2 in 1usize..=3, s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = greedy_cap(n1, s1);
        let b = greedy_cap(n2, s2);
        prop_assert!(check(&a).is_cap && check(&b).is_cap);
        let p = product(&a, &b).unwrap();
        prop_assert_eq!(p.len(), a.len() * b.len());
        prop_assert!(check(&p).is_cap);
        prop_assert!(brute_is_cap(&p));
    }

    #[test]
    fn affine_images_preserve_caps(n in 1usize..=4, s in any::<u64>()) {
        let cap = greedy_cap(n, s);
        let map = AffineMap::random(n, &mut seeded(s ^ 0x5a5a));
        let image = map.image(&cap);
        prop_assert_eq!(image.len(), cap.len());
        prop_assert!(check(&image).is_cap);
    }

    #[test]
    fn verifier_agrees_with_brute_force(n in 1usize..=3, bits in any::<u32>()) {
        let total = 3usize.pow(n as u32);
        let pts: Vec<Vec3> = (0..total).filter(|i| bits >> i & 1 == 1).map(|i| Vec3::from_index(n, i)).collect();
        let set = CapSet::new(n, pts.clone()).unwrap();
        let r = is_capset(n, &pts).unwrap();
        prop_assert_eq!(r.is_cap, brute_is_cap(&set));
        if let Some([x, y, z]) = r.violation {
            prop_assert_eq!(x.third(&y), z);
        }
    }
}

#[test]
fn exhaustive_maxima_through_three() {
    for (n, expected) in [(1, 2), (2, 4), (3, 9)] {
        let r = max_capset(n).unwrap();
        assert_eq!(r.size, expected);
        assert!(r.size >= 1 << n);
        assert!(check(&r.witness).is_cap);
    }
}

#[test]
fn binary_caps_are_caps() {
    for n in 1..=6 {
        let c = binary_cap(n).unwrap();
        assert_eq!(c.len(), 1 << n);
        assert!(check(&c).is_cap);
    }
}

#[test]
fn disjoint_pairs_are_disjoint_caps() {
    for (n, size) in [(2, 4), (3, 9), (4, 16)] {
        let r = find_disjoint_equal(n, size, 10_000, 5).unwrap();
        let pair = r.found.expect("pair found");
        assert_eq!(pair.first.len(), size);
        assert_eq!(pair.second.len(), size);
        assert!(pair.first.is_disjoint(&pair.second));
        assert!(check(&pair.first).is_cap && check(&pair.second).is_cap);
    }
    assert!(find_disjoint_equal(2, 5, 10, 0).unwrap().impossible_by_counting);
}

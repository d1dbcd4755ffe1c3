use num_bigint::BigUint;
use workbench_core::setfam::*;

#[test]
fn construction_meets_bound_up_to_seven() {
    for a in 2..=7 {
        for b in a..=7 {
            let f = calbet_construction(a, b).unwrap();
            let r = check_calbet(&f).unwrap();
            assert!(r.holds, "a={a} b={b} {:?}", r.violation);
            assert_eq!(BigUint::from(r.size), bound(a, b), "a={a} b={b}");
        }
    }
}

#[test]
fn bound_for_three_matches_binomial() {
    for b in 3..=8usize {
        assert_eq!(bound(3, b), BigUint::from(b + 1));
        assert_eq!(bound(3, b), binomial((3 + b - 2) as i64, 1));
    }
}

#[test]
fn exhaustive_maxima_never_exceed_bound() {
    let cap = SearchCap::default();
    for (a, b) in [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4)] {
        for ground in a + b - 2..=(a + b).min(8) {
            let r = brute_force_max(a, b, ground, Mode::Calbet, cap).unwrap();
            assert!(BigUint::from(r.max) <= bound(a, b), "a={a} b={b} g={ground}");
            assert!(check_calbet(&r.witness).unwrap().holds);
        }
    }
}

#[test]
fn exhaustive_bollobas_reaches_binomial() {
    let cap = SearchCap::default();
    for (a, b) in [(1, 1), (1, 2), (2, 2)] {
        let r = brute_force_max(a, b, a + b, Mode::Bollobas, cap).unwrap();
        assert_eq!(BigUint::from(r.max), bollobas_bound(a, b));
    }
}

#[test]
fn families_round_trip_through_json() {
    let f = calbet_construction(3, 4).unwrap();
    let json = serde_json::to_string(&f.pairs).unwrap();
    assert!(json.starts_with("[[[1,2,"));
    let back: Vec<SetPair> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, f.pairs);
}

//! Anchored check batteries. `quick` holds cheap sanity anchors; `acceptance`
//! runs the full acceptance criteria with their runtime limits.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;
use workbench_core::capset::{self, CapSet};
use workbench_core::cliquegame::{self, Player};
use workbench_core::graphlab::{self, ColourBudget};
use workbench_core::latin::{self, GroupSpec};
use workbench_core::perms::{self, Pattern, Permutation};
use workbench_core::rng::{derive_seed, seeded};
use workbench_core::{setfam, stirling, surfaces, tournaments};

use crate::args::SuiteName;
use crate::error::CliResult;
use crate::report::{Experiment, Verdict};

type CheckFn = fn(u64) -> Result<String, String>;

pub struct Check {
    pub id: &'static str,
    pub description: &'static str,
    pub limit: Option<Duration>,
    pub run: CheckFn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Runs every check, catching panics so one failure cannot hide the rest.
pub fn run_checks(suite: &'static str, checks: &[Check], seed: u64, mut progress: impl FnMut(&CheckOutcome)) -> SuiteReport {
    let mut outcomes = Vec::with_capacity(checks.len());
    for c in checks {
        let start = Instant::now();
        let result = std::panic::catch_unwind(|| (c.run)(seed))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let elapsed = start.elapsed();
        let (passed, detail) = match result {
            Ok(d) => match c.limit {
                Some(l) if elapsed > l => (false, format!("{d}; took {elapsed:?}, limit {l:?}")),
                _ => (true, d),
            },
            Err(e) => (false, e),
        };
        let outcome = CheckOutcome {
            id: c.id,
            description: c.description,
            passed,
            detail,
            runtime_ms: elapsed.as_millis() as u64,
        };
        progress(&outcome);
        outcomes.push(outcome);
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    SuiteReport {
        suite,
        passed: outcomes.len() - failed,
        failed,
        checks: outcomes,
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

pub fn run(name: SuiteName, seed: u64, progress: impl FnMut(&CheckOutcome)) -> SuiteReport {
    match name {
        SuiteName::Quick => run_checks("quick", QUICK, seed, progress),
        SuiteName::Acceptance => run_checks("acceptance", ACCEPTANCE, seed, progress),
    }
}

pub(crate) fn experiment(name: SuiteName, seed: u64) -> CliResult<Experiment> {
    let report = run(name, seed, |o| {
        eprintln!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.detail);
    });
    let verdict = if report.all_passed() { Verdict::Verified } else { Verdict::Refuted };
    let problem = match name {
        SuiteName::Quick => "suite.quick",
        SuiteName::Acceptance => "suite.acceptance",
    };
    Ok(Experiment::new(problem, &report, verdict))
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: expected {want:?}, got {got:?}"))
    }
}

fn ensure(what: &str, ok: bool) -> Result<(), String> {
    ok.then_some(()).ok_or_else(|| format!("{what} does not hold"))
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn pattern(s: &str) -> Result<Pattern, String> {
    s.parse().map_err(e)
}

pub const QUICK: &[Check] = &[
    Check {
        id: "perms.catalan",
        description: "length-3 patterns are avoided by Catalan many permutations",
        limit: None,
        run: |_| {
            let catalan = [1u64, 2, 5, 14, 42, 132, 429];
            for q in ["123", "132", "213", "231", "312", "321"] {
                let p = pattern(q)?;
                for (i, &c) in catalan.iter().enumerate() {
                    expect(&format!("av_{}({q})", i + 1), perms::count_avoiders(i + 1, &p, 11).map_err(e)?, c)?;
                }
            }
            Ok("av_n(q) = C_n for |q| = 3, n <= 7".into())
        },
    },
    Check {
        id: "perms.full-family",
        description: "all of S_3 shatters {1,2,3}",
        limit: None,
        run: |_| {
            let r = perms::shattered_ksets(&perms::all_permutations(3), 3).map_err(e)?;
            expect("shattered sets", r.sets, vec![vec![1, 2, 3]])?;
            Ok("1 triple".into())
        },
    },
    Check {
        id: "tournaments.small",
        description: "transitive tournaments have inv 0 and the 3-cycle has inv 1",
        limit: None,
        run: |_| {
            for n in 1..=5 {
                let t = tournaments::inv_table(n, 7).map_err(e)?;
                expect("inv(transitive)", t.inv(&tournaments::Tournament::transitive(&(0..n).collect::<Vec<_>>())), 0)?;
            }
            let t3 = tournaments::inv_table(3, 7).map_err(e)?;
            expect("inv(3-cycle)", t3.inv(&tournaments::Tournament::three_cycle()), 1)?;
            Ok("n <= 5".into())
        },
    },
    Check {
        id: "game.n3",
        description: "BLUE wins the clique game on K_3",
        limit: None,
        run: |_| {
            expect("winner", cliquegame::solve(3, 5).map_err(e)?.winner, Player::Blue)?;
            Ok("BLUE".into())
        },
    },
    Check {
        id: "setfam.small",
        description: "bound(2, b) = 1 and bound(3, 3) = 4",
        limit: None,
        run: |_| {
            for b in 2..=8 {
                expect("bound(2,b)", setfam::bound(2, b), BigUint::from(1u8))?;
            }
            expect("bound(3,3)", setfam::bound(3, 3), BigUint::from(4u8))?;
            expect("construction(2,4) size", setfam::calbet_construction(2, 4).map_err(e)?.len(), 1)?;
            Ok("anchors match".into())
        },
    },
    Check {
        id: "latin.small-groups",
        description: "Z_2 and Z_3 Cayley tables have 32 and 243 cuboctahedra",
        limit: None,
        run: |_| {
            for (n, want) in [(2usize, 32u128), (3, 243)] {
                let l = latin::cayley_table(&GroupSpec::Cyclic(n)).map_err(e)?;
                expect(&format!("count(Z_{n})"), latin::count_cuboctahedra(&l), want)?;
            }
            Ok("32, 243".into())
        },
    },
    Check {
        id: "capset.small",
        description: "maximum caps in dimensions 1 and 2 have sizes 2 and 4",
        limit: None,
        run: |_| {
            expect("max cap n=1", capset::max_capset(1).map_err(e)?.size, 2)?;
            expect("max cap n=2", capset::max_capset(2).map_err(e)?.size, 4)?;
            Ok("2, 4".into())
        },
    },
    Check {
        id: "graphs.packages",
        description: "{1} does not package-colour Z, {1,2,3} does with period 4",
        limit: None,
        run: |_| {
            let one = graphlab::colours_z(&ColourBudget::new([1]).map_err(e)?).map_err(e)?;
            ensure("{1} does not colour", !one.colours)?;
            let s = ColourBudget::new([1, 2, 3]).map_err(e)?;
            expect("∂({1,2,3})", graphlab::partial_sum(&s).to_string(), "13/12".to_string())?;
            let r = graphlab::colours_z(&s).map_err(e)?;
            expect("certificate", r.certificate, Some(vec![1, 2, 1, 3]))?;
            Ok("1,2,1,3".into())
        },
    },
    Check {
        id: "graphs.orientation",
        description: "cycles orient with in-degree 1 and the flow agrees with the subset test",
        limit: None,
        run: |seed| {
            let g = graphlab::Graph::cycle(6).map_err(e)?;
            ensure("C_6 orientable with λ = 1", graphlab::orientation_exists(&g, &[1; 6]).map_err(e)?.exists)?;
            let r = graphlab::equivalence_probe(100, 7, seed).map_err(e)?;
            expect("disagreements", r.failures.len(), 0)?;
            Ok("100 random instances agree".into())
        },
    },
    Check {
        id: "surfaces.planar",
        description: "the sorted rotation of a cycle is planar",
        limit: None,
        run: |_| {
            let rs = surfaces::RotationSystem::sorted(&graphlab::Graph::cycle(5).map_err(e)?);
            expect("genus(C_5)", surfaces::genus(&rs).map_err(e)?, 0)?;
            Ok("genus 0".into())
        },
    },
    Check {
        id: "stirling.small",
        description: "first-order rows sum to n! and small rows match known values",
        limit: None,
        run: |_| {
            let t = stirling::StirlingTable::new(1, 10);
            let mut fact = BigUint::from(1u8);
            for n in 1..=10usize {
                fact *= n;
                expect(&format!("row sum {n}"), t.row(n).iter().sum::<BigUint>(), fact.clone())?;
            }
            let row4: Vec<String> = t.row(4).iter().map(ToString::to_string).collect();
            expect("row 4", row4, ["0", "6", "11", "6", "1"].map(String::from).to_vec())?;
            Ok("rows match".into())
        },
    },
];

pub const ACCEPTANCE: &[Check] = &[
    Check {
        id: "1",
        description: "av_7(4□132) = 3592 and av_7(3□142) = 3587",
        limit: Some(Duration::from_secs(10)),
        run: |_| {
            let a = perms::count_avoiders(7, &pattern("4_132")?, 11).map_err(e)?;
            let b = perms::count_avoiders(7, &pattern("3_142")?, 11).map_err(e)?;
            expect("av_7(4□132)", a, 3592)?;
            expect("av_7(3□142)", b, 3587)?;
            Ok(format!("{a}, {b}"))
        },
    },
    Check {
        id: "2",
        description: "the boxed triples of 1234, 1243, 2143 are equinumerous for n <= 8",
        limit: None,
        run: |_| {
            for triple in perms::dimitrov_triples() {
                let t = perms::wilf_check(8, &triple, 11).map_err(e)?;
                if let Some(n) = t.first_inequality() {
                    return Err(format!("refuted at n = {n}: {:?} {:?}", t.patterns, t.counts));
                }
            }
            Ok("verified for all three box positions, n <= 8".into())
        },
    },
    Check {
        id: "3",
        description: "1324 inversion table rows are monotone in n and sum to av_n(1324)",
        limit: Some(Duration::from_secs(300)),
        run: |_| {
            let t = perms::avoiders_by_inversions(9, 25, 11).map_err(e)?;
            if let Some(v) = t.monotonicity_violation() {
                return Err(format!("monotonicity fails: {v:?}"));
            }
            let q = pattern("1324")?;
            for n in 0..=9 {
                let direct = if n == 0 { 1 } else { perms::count_avoiders(n, &q, 11).map_err(e)? };
                expect(&format!("row {n} total"), t.total(n), direct)?;
            }
            Ok(format!("n <= 9, k <= 25; av_9(1324) = {}", t.total(9)))
        },
    },
    Check {
        id: "4",
        description: "the six-permutation family shatters exactly 8 triples of [5]",
        limit: Some(Duration::from_secs(1)),
        run: |_| {
            let family: Vec<Permutation> = ["12345", "35241", "41523", "25143", "53142", "43215"]
                .iter()
                .map(|p| p.parse().map_err(e))
                .collect::<Result<_, _>>()?;
            let r = perms::shattered_ksets(&family, 3).map_err(e)?;
            expect("count", r.count, 8)?;
            ensure("{2,3,5} shattered", r.sets.contains(&vec![2, 3, 5]))?;
            ensure("{1,2,3} not shattered", !r.sets.contains(&vec![1, 2, 3]))?;
            Ok("8 triples".into())
        },
    },
    Check {
        id: "5",
        description: "inv of transitive and 3-cycle tournaments; n = 6 table; 3+3 additivity",
        limit: Some(Duration::from_secs(60)),
        run: |_| {
            let mut last = None;
            for n in 1..=6 {
                let t = tournaments::inv_table(n, 7).map_err(e)?;
                let order: Vec<usize> = (0..n).rev().collect();
                expect(&format!("inv(transitive_{n})"), t.inv(&tournaments::Tournament::transitive(&order)), 0)?;
                last = Some(t);
            }
            let t3 = tournaments::inv_table(3, 7).map_err(e)?;
            expect("inv(3-cycle)", t3.inv(&tournaments::Tournament::three_cycle()), 1)?;
            let hist = last.expect("n = 6 table").histogram();
            let add = tournaments::additivity_probe(3, 3, 7).map_err(e)?;
            Ok(format!("n=6 histogram {hist:?}; defects {:?}", add.histogram))
        },
    },
    Check {
        id: "6",
        description: "clique game: BLUE wins for n = 3, 4, 5",
        limit: Some(Duration::from_secs(600)),
        run: |_| {
            // every terminal colouring of K_3: two red edges, one blue
            let edges = [(0, 1), (0, 2), (1, 2)];
            for blue in 0..3 {
                let red: Vec<(usize, usize)> = (0..3).filter(|&i| i != blue).map(|i| edges[i]).collect();
                let end = cliquegame::GameState::from_edges(3, &red, &[edges[blue]]).map_err(e)?;
                expect("terminal K_3", cliquegame::winner_at_end(&end).map_err(e)?, Player::Blue)?;
            }
            for n in 3..=5 {
                let r = cliquegame::solve(n, 5).map_err(e)?;
                expect(&format!("winner n={n}"), r.winner, Player::Blue)?;
            }
            let plain = cliquegame::solve_with(4, 5, Default::default(), cliquegame::Memo::None).map_err(e)?;
            expect("unmemoized n=4", plain.winner, Player::Blue)?;
            Ok("BLUE for n = 3, 4, 5, consistent with the conjecture".into())
        },
    },
    Check {
        id: "7",
        description: "the construction meets the bound; exhaustive maxima stay within it",
        limit: None,
        run: |_| {
            for a in 2..=7 {
                for b in a..=7 {
                    let f = setfam::calbet_construction(a, b).map_err(e)?;
                    let r = setfam::check_calbet(&f).map_err(e)?;
                    ensure(&format!("conditions for ({a},{b})"), r.holds)?;
                    expect(&format!("size ({a},{b})"), BigUint::from(r.size), setfam::bound(a, b))?;
                }
            }
            let cap = setfam::SearchCap::default();
            for (a, b) in [(2, 2), (2, 3), (2, 4), (3, 3), (3, 4)] {
                for ground in a + b - 2..=(a + b).min(cap.max_ground) {
                    let r = setfam::brute_force_max(a, b, ground, setfam::Mode::Calbet, cap).map_err(e)?;
                    ensure(&format!("max({a},{b},{ground}) <= bound"), BigUint::from(r.max) <= setfam::bound(a, b))?;
                }
            }
            for b in 3..=8 {
                expect(&format!("bound(3,{b})"), setfam::bound(3, b), BigUint::from(b + 1))?;
                expect(&format!("binom({b}+1, 1)"), setfam::binomial(b as i64 + 1, 1), BigUint::from(b + 1))?;
            }
            Ok("2 <= a <= b <= 7; brute force within bound".into())
        },
    },
    Check {
        id: "8",
        description: "Cayley counts are n^5; group recognition agrees; perturbed Z_5 < 5^5; n = 16 samples",
        limit: None,
        run: |seed| {
            for n in 2..=6 {
                let l = latin::cayley_table(&GroupSpec::Cyclic(n)).map_err(e)?;
                expect(&format!("count(Z_{n})"), latin::count_cuboctahedra(&l), (n as u128).pow(5))?;
            }
            for n in 1..=4 {
                for l in latin::all_latin_squares(n).map_err(e)? {
                    ensure(
                        "count = n^5 iff group table",
                        latin::is_group_table(&l) == (latin::count_cuboctahedra(&l) == (n as u128).pow(5)),
                    )?;
                }
            }
            let z5 = latin::cayley_table(&GroupSpec::Cyclic(5)).map_err(e)?;
            let perturbed = latin::jm_walk(&z5, 1, &mut seeded(0));
            let pc = latin::count_cuboctahedra(&perturbed);
            ensure("perturbed Z_5 below 5^5", pc < 3125)?;
            let samples = latin::jm_samples(16, 100, latin::default_mixing_steps(16), seed).map_err(e)?;
            let mean = samples.iter().map(|l| latin::count_cuboctahedra(l) as f64).sum::<f64>() / 100.0 / 16f64.powi(4);
            ensure(&format!("mean ratio {mean:.3} in [3.5, 4.5]"), (3.5..=4.5).contains(&mean))?;
            Ok(format!("perturbed Z_5: {pc}; n=16 mean ratio {mean:.3}"))
        },
    },
    Check {
        id: "9",
        description: "maximum caps 2, 4, 9; products of caps are caps; disjoint pair at n = 2",
        limit: Some(Duration::from_secs(60)),
        run: |seed| {
            for (n, want) in [(1, 2), (2, 4), (3, 9)] {
                expect(&format!("max cap n={n}"), capset::max_capset(n).map_err(e)?.size, want)?;
            }
            for i in 0..1000u64 {
                let mut rng = seeded(derive_seed(seed, i));
                let (n1, n2) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
                let a = random_cap(n1, &mut rng);
                let b = random_cap(n2, &mut rng);
                let p = capset::product(&a, &b).map_err(e)?;
                ensure(&format!("product {i} is a cap"), capset::check(&p).is_cap)?;
            }
            let r = capset::find_disjoint_equal(2, 4, 10_000, seed).map_err(e)?;
            let pair = r.found.ok_or("no disjoint pair of size 4 at n = 2")?;
            ensure("pair is disjoint", pair.first.is_disjoint(&pair.second))?;
            Ok("2, 4, 9; 1000 products; disjoint pair found".into())
        },
    },
    Check {
        id: "10",
        description: "K_5 genus-3 rotation systems form 13 classes",
        limit: Some(Duration::from_secs(60)),
        run: |_| {
            let c = surfaces::classify_k5(3);
            expect("classes with reversal", c.classes_with_reversal.len(), 13)?;
            expect("distribution total", c.genus_distribution.values().sum::<usize>(), 7776)?;
            expect("min genus", c.min_genus, 1)?;
            Ok(format!(
                "13 classes with reversal, {} by relabelling alone; distribution {:?}",
                c.classes_relabelling.len(),
                c.genus_distribution
            ))
        },
    },
    Check {
        id: "11",
        description: "package colouring anchors and 200 sets with ∂(S) >= 2",
        limit: None,
        run: |seed| {
            let r = graphlab::colours_z(&ColourBudget::new([1, 2, 3]).map_err(e)?).map_err(e)?;
            expect("certificate {1,2,3}", r.certificate, Some(vec![1, 2, 1, 3]))?;
            ensure("{1} does not colour", !graphlab::colours_z(&ColourBudget::new([1]).map_err(e)?).map_err(e)?.colours)?;
            let (mut tested, mut skipped, mut i) = (0, 0, 0u64);
            while tested < 200 {
                let s = sample_dense_budget(derive_seed(seed, i));
                i += 1;
                if s.state_bound() > graphlab::DEFAULT_STATE_CAP {
                    skipped += 1;
                    continue;
                }
                tested += 1;
                ensure(&format!("{s} colours Z"), graphlab::colours_z(&s).map_err(e)?.colours)?;
            }
            Ok(format!("200 sets with ∂(S) >= 2 colour Z ({skipped} skipped above the state cap)"))
        },
    },
    Check {
        id: "12",
        description: "subset condition agrees with the flow test on 1000 instances",
        limit: None,
        run: |seed| {
            let r = graphlab::equivalence_probe(1000, 10, seed).map_err(e)?;
            if let Some(f) = r.failures.first() {
                return Err(format!("disagreement: {f:?}"));
            }
            Ok(format!("1000 instances, {} orientable", r.orientable))
        },
    },
    Check {
        id: "13",
        description: "Stirling real-rootedness for r = 1, 2 to n = 40; log-concavity for r = 3..5 to n = 200",
        limit: Some(Duration::from_secs(600)),
        run: |_| {
            for r in 1..=2 {
                let s = stirling::real_rootedness_sweep(r, 40).map_err(e)?;
                ensure(&format!("real-rooted r={r}: {:?}", s.first_failure), s.all_hold)?;
            }
            for r in 3..=5 {
                let s = stirling::log_concavity_sweep(r, 200).map_err(e)?;
                ensure(&format!("log-concave r={r}: {:?}", s.first_failure), s.all_hold)?;
            }
            Ok("all sweeps hold".into())
        },
    },
];

fn random_cap(n: usize, rng: &mut workbench_core::rng::WorkbenchRng) -> CapSet {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..3usize.pow(n as u32)).collect();
    order.shuffle(rng);
    let mut chosen: Vec<capset::Vec3> = Vec::new();
    for i in order {
        let p = capset::Vec3::from_index(n, i);
        if chosen.iter().all(|x| !chosen.contains(&x.third(&p))) {
            chosen.push(p);
        }
    }
    CapSet::new(n, chosen).expect("distinct points")
}

/// Adds uniform colours from `1..=20` until `∂(S) >= 2`.
pub fn sample_dense_budget(seed: u64) -> ColourBudget {
    let mut rng = seeded(seed);
    let mut colours: Vec<u32> = Vec::new();
    let mut approx = 0.0;
    loop {
        let c = rng.gen_range(1..=20u32);
        if colours.contains(&c) {
            continue;
        }
        colours.push(c);
        approx += 1.0 / (c as f64 + 1.0);
        if approx > 1.99 {
            let s = ColourBudget::new(colours.iter().copied()).expect("distinct positive colours");
            if graphlab::partial_sum(&s) >= num_rational::BigRational::from_integer(2.into()) {
                return s;
            }
        }
    }
}

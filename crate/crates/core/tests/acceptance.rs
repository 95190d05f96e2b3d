//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! The desk-scale sweep shared by several criteria — 200 seeded uniform
//! 3-SAT instances and 50 seeded circuit instances, every method checked
//! against the brute-force oracle — is computed once.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use projmc::blocking::{self, EnumOptions};
use projmc::cnf::{clause, BigCount, Clause, CnfFormula, Lit, ProjectedCnf, Var};
use projmc::counter::{self, CounterOptions};
use projmc::ddnnf;
use projmc::gen;
use projmc::oracle;

fn example1() -> ProjectedCnf {
    // p q r x y z = 1..6, P = {p, q, r}
    let f = CnfFormula::new(
        6,
        vec![
            clause(&[-2, 4, -1]),
            clause(&[-3, -5, 6]),
            clause(&[3, -6, -1]),
            clause(&[6, 5, -1, 3]),
            clause(&[3, 6, -5, -1]),
            clause(&[1, 2]),
        ],
    );
    ProjectedCnf::new(f, [1, 2, 3].iter().map(|&i| Var::new(i)).collect())
}

fn overlap_example() -> ProjectedCnf {
    // p q x y z = 1..5, P = {p, q}
    let f = CnfFormula::new(
        5,
        vec![
            clause(&[-3, 1]),
            clause(&[2, -3, 4]),
            clause(&[-1, -4, -5, 2]),
            clause(&[3, 2]),
            clause(&[-2, 1]),
        ],
    );
    ProjectedCnf::new(f, [1, 2].iter().map(|&i| Var::new(i)).collect())
}

/// Every engineered method, compared against the oracle.
fn all_methods_agree(pf: &ProjectedCnf) -> (BigCount, bool) {
    let want = oracle::count_projected_bruteforce(pf).expect("oracle within caps");
    let opts = CounterOptions::default();
    let dsharp = counter::count_projected(pf, &opts).expect("dsharp").0;
    let minimized = blocking::enumerate_count(pf, true).expect("blocking").0;
    let plain = blocking::enumerate_count(pf, false).expect("enum").0;
    let via_d2c = ddnnf::count_via_d2c(pf, &opts).expect("d2c").0;
    let ok = dsharp == want && minimized == want && plain == want && via_d2c == want;
    (want, ok)
}

struct InstanceReport {
    label: String,
    priority_len: usize,
    methods_agree: bool,
    max_live_blocking: usize,
    compiled_structural_ok: bool,
    compiled_count_ok: bool,
    d2c_ok: bool,
}

struct Sweep {
    reports: Vec<InstanceReport>,
    elapsed: Duration,
}

static SWEEP: OnceLock<Sweep> = OnceLock::new();

fn sweep() -> &'static Sweep {
    SWEEP.get_or_init(run_sweep)
}

fn check_instance(label: String, pf: &ProjectedCnf) -> InstanceReport {
    let want = oracle::count_projected_bruteforce(pf).expect("oracle within caps");
    let opts = CounterOptions::default();

    let dsharp = counter::count_projected(pf, &opts).expect("dsharp").0;
    let (minimized, min_stats) = blocking::enumerate_count(pf, true).expect("blocking");
    let plain = blocking::enumerate_count(pf, false).expect("enum").0;
    let (via_d2c, _) = ddnnf::count_via_d2c(pf, &opts).expect("d2c");

    let (graph, _) = counter::compile_ddnnf(pf.formula(), &opts).expect("compile");
    let structural_ok = ddnnf::check_decomposable(&graph).is_ok()
        && ddnnf::check_deterministic(&graph).is_ok();
    let full = oracle::count_models_bruteforce(pf.formula()).expect("full oracle");
    let compiled_count_ok = ddnnf::count_ddnnf(&graph).map(|c| c == full).unwrap_or(false);

    InstanceReport {
        label,
        priority_len: pf.priority().len(),
        methods_agree: dsharp == want && minimized == want && plain == want,
        max_live_blocking: min_stats.max_live_blocking,
        compiled_structural_ok: structural_ok,
        compiled_count_ok,
        d2c_ok: via_d2c == want,
    }
}

fn run_sweep() -> Sweep {
    let start = Instant::now();
    let mut reports = Vec::with_capacity(250);

    // 200 uniform random 3-SAT instances: n in 8..=15, clause ratios
    // cycling 0.5..4.5, k in 3..n.
    let ratios = [0.5, 1.5, 2.5, 3.5, 4.5];
    for i in 0u32..200 {
        let n = 8 + i % 8;
        let ratio = ratios[(i % 5) as usize];
        let m = ((n as f64 * ratio).round() as u32).max(1);
        let k = 3 + (i * 7) % (n - 2);
        let seed = 40_000 + u64::from(i);
        let pf = gen::gen_uf3sat(n, m, k, seed).expect("valid uf3sat spec");
        reports.push(check_instance(format!("uf3sat n{n} m{m} k{k} s{seed}"), &pf));
    }

    // 50 circuit instances: n in 3..=6, c in {1, 2}, sized so the full
    // brute-force count stays enumerable.
    let mut produced = 0u32;
    let mut seed = 7_000u64;
    while produced < 50 {
        let n = 3 + produced % 4;
        let c = 1 + produced % 2;
        let k = 2 + produced % 3;
        let pf = gen::gen_circuit(n, c, k, seed).expect("valid circuit spec");
        if pf.formula().num_vars() <= 20 {
            reports.push(check_instance(format!("circuit n{n} c{c} k{k} s{seed}"), &pf));
            produced += 1;
        }
        seed += 1;
    }

    Sweep { reports, elapsed: start.elapsed() }
}

#[test]
fn criterion_1_worked_example_regression() {
    let start = Instant::now();
    let (ex1, ex1_ok) = all_methods_agree(&example1());
    assert_eq!(ex1, BigCount::from(4u8));
    assert!(ex1_ok, "all methods count 4 on the worked example");
    let (f5, f5_ok) = all_methods_agree(&overlap_example());
    assert_eq!(f5, BigCount::from(2u8));
    assert!(f5_ok, "all methods count 2 on the overlap example");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("acceptance criterion 1 (worked example regression): PASS");
}

#[test]
fn criterion_2_projection_counterexample() {
    let start = Instant::now();
    // The projected DNNF of the overlap example over p q = 1 2: its
    // satisfaction probability is 3/4, so naive counting returns 3,
    // while the d2c pipeline returns the true projected count 2.
    let projected = ddnnf::parse_nnf(
        "nnf 7 8 2\nL -2\nL 2\nO 2 2 0 1\nL 1\nA 2 2 3\nA 2 3 1\nO 0 2 4 5\n",
    )
    .expect("hand-encoded projected DNNF");
    assert_eq!(ddnnf::count_ddnnf(&projected).unwrap(), BigCount::from(3u8));
    assert!(
        ddnnf::check_deterministic(&projected).is_err(),
        "the overlap diagnostic flags the projected graph"
    );
    let (count, _) = ddnnf::count_via_d2c(&overlap_example(), &CounterOptions::default()).unwrap();
    assert_eq!(count, BigCount::from(2u8));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!("acceptance criterion 2 (projection counterexample): PASS");
}

#[test]
fn criterion_3_oracle_equivalence_sweep() {
    let sweep = sweep();
    assert_eq!(sweep.reports.len(), 250);
    for report in &sweep.reports {
        assert!(report.methods_agree, "methods disagree on {}", report.label);
        assert!(report.d2c_ok, "d2c disagrees on {}", report.label);
    }
    assert!(
        sweep.elapsed < Duration::from_secs(180),
        "sweep took {:?}",
        sweep.elapsed
    );
    println!(
        "acceptance criterion 3 (oracle equivalence sweep, 250 instances in {:?}): PASS",
        sweep.elapsed
    );
}

#[test]
fn criterion_4_shrink_cube_validity() {
    for i in 0u32..100 {
        let n = 6 + i % 4;
        let m = n / 2 + (i % 5) * n / 2;
        let k = 3 + i % (n.min(7) - 2);
        let seed = 90_000 + u64::from(i);
        let pf = gen::gen_uf3sat(n, m.max(1), k, seed).expect("valid spec");
        let want = oracle::count_projected_bruteforce(&pf).expect("oracle");

        let opts = EnumOptions { record_cubes: true, ..EnumOptions::default() };
        let (count, stats) = blocking::enumerate_with(&pf, opts).expect("blocking");
        assert_eq!(count, want, "count mismatch on seed {seed}");

        // Sizes sum to the oracle count.
        let sum: BigCount = stats
            .cubes
            .iter()
            .map(|rc| rc.cube.projected_size(pf.priority()))
            .sum();
        assert_eq!(sum, want, "cube sizes must partition the count, seed {seed}");

        // Pairwise disjoint over priority assignments.
        for (a_idx, a) in stats.cubes.iter().enumerate() {
            for b in &stats.cubes[a_idx + 1..] {
                let clash = a
                    .cube
                    .assignment()
                    .iter()
                    .any(|l| b.cube.assignment().contains(!l));
                assert!(clash, "overlapping cubes on seed {seed}");
            }
        }

        // Every total P-extension of a cube, joined with the witness's
        // non-priority literals, satisfies the formula.
        let priority: Vec<Var> = pf.priority().iter().copied().collect();
        for rc in &stats.cubes {
            let free: Vec<Var> = priority
                .iter()
                .copied()
                .filter(|v| !rc.cube.assignment().assigns(*v))
                .collect();
            let mut phase = vec![false; pf.formula().num_vars() as usize];
            for l in rc.witness.iter() {
                phase[l.var().pos()] = l.is_positive();
            }
            for l in rc.cube.assignment().iter() {
                phase[l.var().pos()] = l.is_positive();
            }
            for bits in 0u64..(1 << free.len()) {
                for (j, v) in free.iter().enumerate() {
                    phase[v.pos()] = bits >> j & 1 == 1;
                }
                assert!(
                    oracle::satisfies_phase(pf.formula(), &phase),
                    "invalid cube extension on seed {seed}"
                );
            }
        }
    }
    println!("acceptance criterion 4 (shrink cube validity, 100 instances): PASS");
}

#[test]
fn criterion_5_blocking_space_bound() {
    let sweep = sweep();
    for report in &sweep.reports {
        assert!(
            report.max_live_blocking <= report.priority_len,
            "{}: {} live blocking clauses exceeds |P| = {}",
            report.label,
            report.max_live_blocking,
            report.priority_len
        );
    }
    println!("acceptance criterion 5 (blocking space bound <= |P|): PASS");
}

#[test]
fn criterion_6_structural_ddnnf_checks() {
    let sweep = sweep();
    for report in &sweep.reports {
        assert!(report.compiled_structural_ok, "structural failure on {}", report.label);
        assert!(report.compiled_count_ok, "graph count mismatch on {}", report.label);
    }
    println!("acceptance criterion 6 (compiled d-DNNF structure and counts): PASS");
}

#[test]
fn criterion_7_reencoding_count_equivalence() {
    let sweep = sweep();
    for report in &sweep.reports {
        assert!(report.d2c_ok, "d2c count mismatch on {}", report.label);
    }
    println!("acceptance criterion 7 (d2c output counts match oracle): PASS");
}

#[test]
fn criterion_8_decomposition_law() {
    for i in 0u32..50 {
        let parts = 2 + i % 3;
        let mut offset = 0u32;
        let mut clauses: Vec<Clause> = Vec::new();
        let mut priority: BTreeSet<Var> = BTreeSet::new();
        let mut product = BigCount::from(1u8);
        for j in 0..parts {
            let n = 4 + (i + j) % 3;
            let m = n + (i + j) % 4;
            let k = 2 + (i + j) % 2;
            let seed = 60_000 + u64::from(i * 4 + j);
            let sub = gen::gen_uf3sat(n, m, k, seed).expect("valid spec");
            let (sub_count, _) =
                counter::count_projected(&sub, &CounterOptions::default()).expect("sub count");
            product *= sub_count;
            for c in sub.formula().clauses() {
                clauses.push(Clause::new(c.iter().map(|l| {
                    Lit::new(Var::new(l.var().index() + offset), l.is_positive())
                })));
            }
            priority.extend(sub.priority().iter().map(|v| Var::new(v.index() + offset)));
            offset += n;
        }
        let union = ProjectedCnf::new(CnfFormula::new(offset, clauses), priority);
        let (count, _) =
            counter::count_projected(&union, &CounterOptions::default()).expect("union count");
        assert_eq!(count, product, "disjoint union {i} must multiply");
    }
    println!("acceptance criterion 8 (disjoint components multiply): PASS");
}

#[test]
fn criterion_9_r_statistic_sanity() {
    let f = CnfFormula::empty(10);
    let pf = ProjectedCnf::all_priority(f);

    let (count, stats) = blocking::enumerate_count(&pf, true).expect("blocking");
    assert_eq!(count, BigCount::from(1024u32));
    assert_eq!(stats.num_cubes, 1);
    assert_eq!(stats.r_statistic(), Some(10.0));

    let (count, stats) = blocking::enumerate_count(&pf, false).expect("enum");
    assert_eq!(count, BigCount::from(1024u32));
    assert_eq!(stats.num_cubes, 1024);
    assert_eq!(stats.r_statistic(), Some(0.0));
    println!("acceptance criterion 9 (R statistic on the unconstrained instance): PASS");
}

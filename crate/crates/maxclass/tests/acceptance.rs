//! Acceptance run: one line per criterion, then the additional checks.
//!
//! `MAXCLASS_ACCEPT_MAX_N` raises the largest `n` of the full `p = 7`
//! leaf-depth sweep (default 13).

mod common;

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use maxclass::analysis::{
    assign_types, check_branching, check_ramification, check_skelbottom, order_d_trees, partition_trees, GaloisTree,
};
use maxclass::equivalence::{check_fixed_points, check_local_to_global};
use maxclass::figure::{fixture_matches, subtree_figure, FigureFixture};
use maxclass::oracle::{brute_orbits, compare_with_skeleton, DEFAULT_BUDGET};
use maxclass::periodicity::{
    check_periodicity, check_slice_counts, max_period_depth, period_records, root_shifts, slice_counts,
};
use maxclass::render::SkeletonDoc;
use maxclass::report::{Check, Status};
use maxclass::roots::{check_root_agreement, compare_roots};
use maxclass::session::{Session, SessionConfig};
use maxclass::skeleton::{build_skeleton, BuildOptions, Parallelism, SkeletonTree};
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

type Outcome = Result<(bool, String), String>;

struct Forest {
    session: Session,
    tree: SkeletonTree,
    trees: Vec<GaloisTree>,
}

impl Forest {
    fn build(session: Session, depth: u32, min_gal: u32) -> Result<Forest, String> {
        let tree = build_skeleton(&session, BuildOptions::restricted(depth, min_gal)).map_err(|e| e.to_string())?;
        let mut trees = partition_trees(&tree);
        assign_types(&session, &tree, &mut trees, Parallelism::Auto).map_err(|e| e.to_string())?;
        Ok(Forest { session, tree, trees })
    }
}

/// Instances shared between criteria, built on first use.
#[derive(Default)]
struct Instances {
    s7_11: OnceCell<Result<Forest, String>>,
    s7_24: OnceCell<Result<Forest, String>>,
    s11_20: OnceCell<Result<Forest, String>>,
    s11_30: OnceCell<Result<Forest, String>>,
}

impl Instances {
    fn get<'a>(cell: &'a OnceCell<Result<Forest, String>>, f: impl FnOnce() -> Result<Forest, String>) -> Result<&'a Forest, String> {
        cell.get_or_init(f).as_ref().map_err(Clone::clone)
    }

    fn s7_11(&self) -> Result<&Forest, String> {
        Self::get(&self.s7_11, || Forest::build(session(7, 11, 5), 5, 1))
    }

    /// Orders divisible by 3, to full depth.
    fn s7_24(&self) -> Result<&Forest, String> {
        Self::get(&self.s7_24, || Forest::build(session(7, 24, 18), 18, 3))
    }

    /// Orders divisible by 5, to full depth; the full skeleton does not fit
    /// in memory.
    fn s11_20(&self) -> Result<&Forest, String> {
        Self::get(&self.s11_20, || Forest::build(session(11, 20, 6), 6, 5))
    }

    /// Orders divisible by 5, built to the deepest `e` with `e + d + 1`
    /// within the skeleton depth 16.
    fn s11_30(&self) -> Result<&Forest, String> {
        Self::get(&self.s11_30, || {
            let s = session(11, 30, 16);
            let depth = max_period_depth(&s).ok_or("no period depth for S_11(30)")?;
            Forest::build(s, depth, 5)
        })
    }
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn fixture(json: &str, forest: &Forest) -> Outcome {
    let fx = FigureFixture::from_json(json).map_err(err)?;
    let found = fixture_matches(&forest.tree, &fx).map_err(err)?;
    let ids: Vec<String> = found.iter().map(|&i| forest.tree.nodes[i].id.to_string()).collect();
    Ok((
        !found.is_empty(),
        format!("{} matching subtrees at depth {} ({})", found.len(), fx.root_depth, ids.join(", ")),
    ))
}

fn c1(inst: &Instances) -> Outcome {
    fixture(include_str!("fixtures/s7_11_order1.json"), inst.s7_11()?)
}

fn c2(inst: &Instances) -> Outcome {
    fixture(include_str!("fixtures/s11_20_order5.json"), inst.s11_20()?)
}

fn c3(inst: &Instances) -> Outcome {
    fixture(include_str!("fixtures/s7_24_orders3_6.json"), inst.s7_24()?)
}

fn c4(inst: &Instances) -> Outcome {
    let f = inst.s7_24()?;
    let (check, reports) = check_ramification(&f.session, &f.tree, &f.trees).map_err(err)?;
    let mut types = BTreeSet::new();
    let mut realized: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    let mut trees = 0;
    for r in reports.iter().filter(|r| r.order == 6) {
        trees += 1;
        types.insert(r.tree_type);
        realized.entry(r.tree_type).or_default().extend(&r.realized_residues);
    }
    let expected: BTreeMap<u32, BTreeSet<u32>> = [(2, BTreeSet::from([4])), (4, BTreeSet::from([2]))].into();
    let types_ok = types.is_subset(&BTreeSet::from([2, 4]));
    let residues_ok = realized.iter().all(|(t, r)| expected.get(t) == Some(r)) && !realized.is_empty();
    Ok((
        types_ok && residues_ok && !check.failed(),
        format!("{trees} trees of order 6, types {types:?}, realized residues by type {realized:?}; {}", check.detail),
    ))
}

fn c5(inst: &Instances) -> Outcome {
    let cap: u32 = std::env::var("MAXCLASS_ACCEPT_MAX_N").ok().and_then(|v| v.parse().ok()).unwrap_or(13);
    let mut parts = Vec::new();
    let mut ok = true;
    for n in 11..=cap {
        let f = Forest::build(session(7, n, n - 6), n - 6, 1)?;
        let check = check_skelbottom(&f.session, &f.tree, &f.trees);
        ok &= check.status == Status::Pass;
        parts.push(format!("n = {n}: {}", check.detail));
    }
    let f = inst.s11_20()?;
    let check = check_skelbottom(&f.session, &f.tree, &f.trees);
    ok &= check.status == Status::Pass;
    parts.push(format!("S_11(20): {}", check.detail));
    Ok((ok, format!("p = 7 full skeletons for n = 11..{cap}; {}", parts.join("; "))))
}

fn c6(inst: &Instances) -> Outcome {
    let f = inst.s11_20()?;
    let checks = check_branching(&f.session, &f.tree, &f.trees, 3);
    let asserted: Vec<&Check> = checks.iter().filter(|c| c.status != Status::Report).collect();
    let ok = asserted.len() == 3 && asserted.iter().all(|c| c.status == Status::Pass);
    let detail: Vec<String> = asserted.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    Ok((ok, format!("orders divisible by 5; {}", detail.join("; "))))
}

fn periodicity(f: &Forest) -> Result<Vec<Check>, String> {
    let periods = period_records(&f.session, &f.tree, &f.trees, Parallelism::Auto).map_err(err)?;
    let shifts = root_shifts(&f.session, &f.tree, Parallelism::Auto).map_err(err)?;
    Ok(check_periodicity(&f.session, &periods, &shifts))
}

fn c7(inst: &Instances) -> Outcome {
    let small = periodicity(inst.s11_20()?)?;
    let vacuous = small.iter().all(|c| c.status == Status::Vacuous);
    let big = periodicity(inst.s11_30()?)?;
    let asserted: Vec<&Check> = big.iter().filter(|c| matches!(c.status, Status::Pass | Status::Fail)).collect();
    let has_counts = asserted.iter().any(|c| c.name.starts_with("child counts"));
    let has_shift = asserted.iter().any(|c| c.name.starts_with("root shift"));
    let ok = vacuous && has_counts && has_shift && asserted.iter().all(|c| c.status == Status::Pass);
    let detail: Vec<String> = asserted.iter().map(|c| format!("{}: {}", c.name, c.detail)).collect();
    Ok((
        ok,
        format!(
            "S_11(20) is vacuous ({}); asserted on S_11(30), orders divisible by 5: {}",
            small.first().map(|c| c.detail.as_str()).unwrap_or(""),
            detail.join("; ")
        ),
    ))
}

fn c8(inst: &Instances) -> Outcome {
    let f = inst.s7_11()?;
    let mut parts = Vec::new();
    let mut ok = true;
    for e in 1..=3 {
        let oracle = brute_orbits(&f.session, e, DEFAULT_BUDGET).map_err(err)?;
        let m = compare_with_skeleton(&f.session, &f.tree, &oracle).map_err(err)?;
        ok &= m.is_none();
        parts.push(match m {
            None => format!("e = {e}: {} classes identical", oracle.classes.len()),
            Some(m) => format!("e = {e}: {m:?}"),
        });
    }
    Ok((ok, parts.join("; ")))
}

fn run_cases<S, F>(cases: u32, strategy: S, check: F) -> Result<String, String>
where
    S: Strategy,
    S::Value: Debug,
    F: Fn(S::Value) -> Result<(), String>,
{
    let mut runner = TestRunner::new_with_rng(
        Config { failure_persistence: None, ..Config::with_cases(cases) },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, |v| check(v).map_err(TestCaseError::fail)).map_err(|e| e.to_string())?;
    Ok(format!("{cases} cases"))
}

fn c9(inst: &Instances) -> Outcome {
    let mut parts: Vec<(String, Result<String, String>)> = Vec::new();
    let spectrum_sweep = || -> Result<String, String> {
        let mut count = 0;
        for p in [7, 11] {
            let first = (2 * p as u32 - 8).max(8).max(p as u32);
            for n in first..first + 12 {
                spectrum(&session(p, n, 0))?;
                count += 1;
            }
        }
        Ok(format!("{count} branches, all k | d"))
    };
    parts.push(("spectrum".into(), spectrum_sweep()));
    parts.push(("direct sum".into(), run_cases(200, direct_sum_cases(), direct_sum_case)));
    parts.push(("Γ_(n+d) = pΓ_n".into(), run_cases(200, scaling_cases(), scaling_case)));
    parts.push(("action axioms".into(), run_cases(200, action_cases(), action_case)));
    parts.push(("affine composition".into(), run_cases(200, affine_cases(), affine_case)));
    parts.push(("exp/log".into(), run_cases(200, exp_log_cases(), exp_log_case)));

    let f = inst.s7_11()?;
    let equiv = (1..=3)
        .map(|e| {
            let oracle = brute_orbits(&f.session, e, DEFAULT_BUDGET).map_err(err)?;
            check_local_to_global(&f.session, &oracle).map_err(err)
        })
        .collect::<Result<Vec<Check>, String>>()
        .and_then(|cs| match cs.iter().find(|c| c.status != Status::Pass) {
            None => Ok(format!("depths 1..3, {} classes", cs.iter().map(|c| c.detail.split(' ').next().unwrap_or("")).collect::<Vec<_>>().join("/"))),
            Some(c) => Err(c.detail.clone()),
        });
    parts.push(("local-to-global S_7(11)".into(), equiv));

    let mut kernel = Ok(String::new());
    let mut summaries = Vec::new();
    for forest in [inst.s7_11()?, inst.s7_24()?] {
        let records = slice_counts(&forest.session, &forest.tree, &forest.trees, 4, Parallelism::Auto).map_err(err)?;
        let checks = check_slice_counts(&forest.session, &records);
        let (instances, failures) =
            records.iter().fold((0, 0), |(i, fl), r| (i + r.kernel.instances, fl + r.kernel.failures));
        summaries.push(format!("S_{}({}) {instances} instances", forest.session.p(), forest.session.n()));
        if failures > 0 || instances == 0 || checks.iter().any(|c| c.status != Status::Pass) {
            kernel = Err(checks.iter().map(|c| c.detail.clone()).collect::<Vec<_>>().join("; "));
        }
    }
    parts.push(("kernel reduction".into(), kernel.map(|_| summaries.join(", "))));

    let roots = compare_roots(&f.session, &f.tree, Parallelism::Auto).map_err(err)?;
    let check = check_root_agreement(&f.session, &roots);
    parts.push((
        "root criterion S_7(11)".into(),
        if check.status == Status::Pass { Ok(check.detail) } else { Err(check.detail) },
    ));

    let ok = parts.iter().all(|(_, r)| r.is_ok());
    let detail: Vec<String> = parts
        .into_iter()
        .map(|(name, r)| match r {
            Ok(d) => format!("{name} ok ({d})"),
            Err(d) => format!("{name} FAILED ({d})"),
        })
        .collect();
    Ok((ok, detail.join("; ")))
}

fn order_d(inst: &Instances) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for f in [inst.s7_11()?, inst.s7_24()?, inst.s11_20()?] {
        let (count, depths) = order_d_trees(&f.session, &f.tree, &f.trees);
        ok &= count == f.session.ell() && depths == BTreeSet::from([1]);
        parts.push(format!("S_{}({}): {count} trees, ℓ = {}, root depths {depths:?}", f.session.p(), f.session.n(), f.session.ell()));
    }
    Ok((ok, parts.join("; ")))
}

fn choice(inst: &Instances) -> Outcome {
    let a = inst.s7_11()?;
    let s5 = Session::new(SessionConfig::new(7, 11, 5).with_generator(5)).map_err(err)?;
    let b = Forest::build(s5, 5, 1)?;
    let same_shape = subtree_figure(&a.tree, 0, &|_| true) == subtree_figure(&b.tree, 0, &|_| true);
    let sizes = |f: &Forest| {
        let mut m: BTreeMap<(u32, usize), usize> = BTreeMap::new();
        for gt in &f.trees {
            *m.entry((gt.order, gt.members.len())).or_default() += 1;
        }
        m
    };
    let same_trees = sizes(a) == sizes(&b);
    let types = |f: &Forest| f.trees.iter().filter_map(|g| g.tree_type).collect::<BTreeSet<_>>();
    Ok((
        same_shape && same_trees,
        format!(
            "S_7(11) with g = 3 and g = 5: labelled trees {}, Galois tree sizes {}; types {:?} and {:?}",
            if same_shape { "equal" } else { "differ" },
            if same_trees { "equal" } else { "differ" },
            types(a),
            types(&b)
        ),
    ))
}

fn determinism(_: &Instances) -> Outcome {
    let s = session(7, 12, 6);
    let doc = |opts: BuildOptions| -> Result<SkeletonDoc, String> {
        let t = build_skeleton(&s, opts).map_err(err)?;
        Ok(SkeletonDoc::new(&t, &partition_trees(&t)))
    };
    let seq = doc(BuildOptions::full(6).sequential())?;
    #[cfg_attr(not(feature = "parallel"), allow(unused_mut))]
    let mut same = doc(BuildOptions::full(6))? == seq;
    #[cfg_attr(not(feature = "parallel"), allow(unused_mut))]
    let mut counts = vec!["sequential".to_string(), "default pool".into()];
    #[cfg(feature = "parallel")]
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(err)?;
        same &= pool.install(|| doc(BuildOptions::full(6)))? == seq;
        counts.push(format!("{threads} threads"));
    }
    Ok((same, format!("S_7(12), {} nodes: {} identical including node ids", seq.nodes.len(), counts.join(", "))))
}

fn fixed_points(inst: &Instances) -> Outcome {
    let f = inst.s7_11()?;
    let check = check_fixed_points(&f.session, &f.tree, Parallelism::Auto).map_err(err)?;
    Ok((check.status == Status::Pass, check.detail))
}

fn stabilizer_power(inst: &Instances) -> Outcome {
    let f = inst.s11_30()?;
    let periods = period_records(&f.session, &f.tree, &f.trees, Parallelism::Auto).map_err(err)?;
    let deepest = periods.iter().map(|r| r.e).max().ok_or("no members")?;
    let at = periods.iter().filter(|r| r.e == deepest);
    let mut hist: BTreeMap<Option<u32>, usize> = BTreeMap::new();
    let mut exact = 0;
    for r in at {
        exact += r.stabilizer_power as usize;
        *hist.entry(r.power_index_exp).or_default() += 1;
    }
    Ok((
        true,
        format!(
            "S_11(30) depths {deepest}, {}: law holds exactly for {exact} members; log_p index of the p-th powers in the deeper stabilizer: {hist:?}",
            deepest + f.session.d()
        ),
    ))
}

fn main() -> ExitCode {
    let inst = Instances::default();
    type Criterion = (&'static str, &'static str, fn(&Instances) -> Outcome, bool);
    let criteria: [Criterion; 14] = [
        ("1", "S_7(11) order-1 tree matches the figure", c1, true),
        ("2", "S_11(20) order-5 tree matches the figure", c2, true),
        ("3", "S_7(24) order-{3,6} forest matches the figure", c3, true),
        ("4", "S_7(24), h = 6: types in {2,4}, residues 4 (type 2) and 2 (type 4)", c4, true),
        ("5", "every Galois-tree leaf has depth n - c", c5, true),
        ("6", "S_11(20) child counts are powers of 11 at the deepest 3 levels", c6, true),
        ("7", "periodicity: child counts at (e, e + d) and root shift", c7, true),
        ("8", "oracle at p = 7, n = 11, e = 1..3: same partition and Galois orders", c8, true),
        ("9", "property suites", c9, true),
        ("extra", "order-d trees: ℓ of them, roots at depth 1", order_d, true),
        ("extra", "choice independence with g = 5", choice, true),
        ("extra", "determinism across thread counts", determinism, true),
        ("extra", "global fixed points for every node of S_7(11)", fixed_points, true),
        ("extra", "stabilizer power law", stabilizer_power, false),
    ];
    let mut failed = 0;
    for (id, title, run, asserted) in criteria {
        let start = Instant::now();
        let (ok, detail) = run(&inst).unwrap_or_else(|e| (false, format!("error: {e}")));
        let tag = match (asserted, ok) {
            (false, _) => "REPORT",
            (true, true) => "PASS",
            (true, false) => "FAIL",
        };
        failed += (asserted && !ok) as usize;
        println!("{tag} [{id}] {title}: {detail} [{:.1?}]", start.elapsed());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} failed");
        ExitCode::FAILURE
    }
}

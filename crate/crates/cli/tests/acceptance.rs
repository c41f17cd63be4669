//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line
//! straight to stderr (bypassing capture) and the test fails if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use vdecomp::decomp::{
    asymptotic_bound, build_decomposition_lp, deletion_average_bound, dstar, integer_optimum, is_feasible, nustar,
    random_graph_lp, random_graph_problem, random_graph_witness,
};
use vdecomp::hosts::{
    blowup_cyclic, complete_bipartite_bicolored, count_tournaments_by_exhaustion, enumerate_nonisomorphic_tournaments,
    random_host, tournament_from_pairs, BlowupSpec,
};
use vdecomp::io::{decode_digraph6, encode_digraph6};
use vdecomp::lp::{solve, verify_certificate, LpStatus};
use vdecomp::patterns::{build_catalog, pair_count, LabelKind, PatternCatalog, WeightVector};
use vdecomp::ratio::{int, rat};
use vdecomp::search::{run_pipeline, threshold_schedule, BaseFrontier, ScheduleMode, SearchConfig};
use vdecomp::Rational;

use support::{
    adjacency, basic_feasible_solutions, dot, oracle, random_lp, reference_digraph6, seeded, testdata, Oracle,
};

fn catalog(k: usize, kind: &LabelKind) -> Arc<PatternCatalog> {
    Arc::new(build_catalog(k, kind).unwrap())
}

fn t3() -> WeightVector {
    WeightVector::parse(catalog(3, &LabelKind::Antisymmetric), "T3=1,C3=0").unwrap()
}

fn blowup(parts: &[usize]) -> vdecomp::hosts::Host {
    blowup_cyclic(&BlowupSpec::transitive(parts)).unwrap()
}

fn random_vector(cat: Arc<PatternCatalog>, rng: &mut impl Rng) -> WeightVector {
    let w = (0..cat.len()).map(|_| rat(rng.random_range(0..=4), 4)).collect();
    WeightVector::from_weights(cat, w).unwrap()
}

fn blowup_values() -> String {
    let mut total = Duration::ZERO;
    for (parts, expected) in [([4, 3, 3], 12), ([4, 4, 3], 15), ([4, 4, 4], 18), ([5, 4, 4], 22), ([5, 5, 4], 26)] {
        let start = Instant::now();
        let g = blowup(&parts);
        let d = dstar(&g, 3, &t3()).unwrap();
        total += start.elapsed();
        assert_eq!(d.value, int(expected), "{parts:?}");
        let lp = build_decomposition_lp(&g, 3, &t3()).unwrap();
        assert!(verify_certificate(&lp.problem, &d.solution).unwrap(), "{parts:?} certificate");
    }
    assert!(total < Duration::from_secs(60), "took {total:?}");
    format!("12, 15, 18, 22, 26 in {:.2}s", total.as_secs_f64())
}

fn fourteen_vertex_bound() -> String {
    let g = blowup(&[5, 5, 4]);
    let nu = nustar(&g, 3, &t3()).unwrap();
    // D* scaled by C(3,2) over C(14,2) pairs
    assert_eq!(nu, int(26) * int(3) / int(91));
    assert_eq!(nu, rat(78, 91));
    let bound = asymptotic_bound(14, &nu).unwrap();
    assert_eq!(bound, (rat(78, 91) * int(13) + int(1)) / int(14));
    assert_eq!(bound, rat(85, 98));
    "nu* = 78/91, bound = 85/98".into()
}

fn order_ten_survivors() -> String {
    let base = BaseFrontier { hosts: enumerate_nonisomorphic_tournaments(7).unwrap(), complete: true };
    assert_eq!(base.hosts.len(), 456);
    assert_eq!(count_tournaments_by_exhaustion(7).unwrap(), 456);
    let schedule = threshold_schedule(&int(26), 14, 7, &ScheduleMode::Exact).unwrap();
    assert_eq!(schedule.threshold(7), Some(&int(6)));
    assert_eq!(schedule.threshold(8), Some(&int(8)));
    assert_eq!(schedule.threshold(9), Some(&rat(72, 7)));
    let schedule = schedule.with_override(10, rat(643, 50)).unwrap();
    let mut config = SearchConfig::new(3, t3(), schedule);
    config.stop_order = Some(10);
    config.workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let start = Instant::now();
    let outcome = run_pipeline(&base, &config).unwrap();
    let top = outcome.report.levels.last().unwrap();
    assert_eq!(top.order, 10);
    let forms: BTreeSet<Vec<u8>> = outcome.survivors.iter().map(|h| h.canonical_form().unwrap()).collect();
    assert_eq!(top.distinct_below, Some(forms.len() as u64));
    assert_eq!(forms.len(), 16, "distinct survivors at order 10");
    assert_eq!(top.lowest, Some(int(12)));
    // recheck the lowest survivors exactly, apart from the pipeline
    let lowest = outcome.survivors.iter().map(|h| dstar(h, 3, &t3()).unwrap().value).min().unwrap();
    assert_eq!(lowest, int(12));
    format!("16 distinct survivors, min 12, {:.0}s", start.elapsed().as_secs_f64())
}

fn extension_lemma() -> String {
    let mut rng = seeded(0xacce_0004);
    let cat = catalog(3, &LabelKind::Antisymmetric);
    let mut checked = 0;
    for n in 4..=6 {
        for g in enumerate_nonisomorphic_tournaments(n).unwrap() {
            for v in [t3(), random_vector(cat.clone(), &mut rng), random_vector(cat.clone(), &mut rng)] {
                let d = dstar(&g, 3, &v).unwrap().value;
                let sum: Rational = (0..n).map(|u| dstar(&g.delete_vertex(u).unwrap(), 3, &v).unwrap().value).sum();
                let bound = sum / int(n as i64 - 2);
                assert!(d >= bound, "{g}: {d} < {bound}");
                assert_eq!(deletion_average_bound(&g, 3, &v).unwrap(), bound);
                checked += 1;
            }
        }
    }
    format!("{checked} host/vector pairs at orders 4..6")
}

fn random_graph_program() -> String {
    let cat = catalog(3, &LabelKind::Binary);
    let v = WeightVector::parse(cat.clone(), "K3=1,P3=1/2,Q3=1/2,I3=0").unwrap();
    let prog = random_graph_lp(3, &v, &rat(1, 2)).unwrap();
    assert_eq!(prog.value, rat(5, 8));
    assert_eq!(prog.x[cat.resolve("Q3").unwrap()], rat(3, 4));
    assert_eq!(prog.x[cat.resolve("K3").unwrap()], rat(1, 4));
    let problem = random_graph_problem(3, &v, &rat(1, 2)).unwrap();
    let best = basic_feasible_solutions(problem.matrix(), problem.rhs(), problem.cols())
        .iter()
        .map(|x| dot(problem.objective(), x))
        .max()
        .unwrap();
    assert_eq!(best, rat(5, 8));
    for k in [3, 4] {
        let cat = catalog(k, &LabelKind::Binary);
        let ones = WeightVector::constant(cat.clone(), int(1));
        for p in [int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)] {
            let problem = random_graph_problem(k, &ones, &p).unwrap();
            assert!(is_feasible(&problem, &random_graph_witness(&cat, &p)), "k = {k}, p = {p}");
        }
    }
    "5/8 at x_Q3 = 3/4, x_K3 = 1/4; witnesses feasible for k = 3, 4".into()
}

fn integer_optimum_checks() -> String {
    let cat = catalog(3, &LabelKind::bicolored());
    let v = WeightVector::parse(cat.clone(), "K3=1,P3=0,Q3=0,I3=1").unwrap();
    let best = integer_optimum(&complete_bipartite_bicolored(3, 4), 3, &v).unwrap();
    assert_eq!(best.value, rat(1, 7));
    assert_eq!(best.blocks.len(), 7);
    let mut rng = seeded(0xacce_0006);
    for seed in 0..50 {
        let g = random_host(&LabelKind::bicolored(), 7, &rat(1, 2), seed).unwrap();
        let w = random_vector(cat.clone(), &mut rng);
        for vec in [&v, &w] {
            let int_best = integer_optimum(&g, 3, vec).unwrap().value;
            let frac = nustar(&g, 3, vec).unwrap();
            assert!(int_best <= frac, "seed {seed}: {int_best} > {frac}");
        }
    }
    "K_{3,4} gives 1/7; 100 random checks at order 7".into()
}

fn exact_lp_solver() -> String {
    let mut rng = seeded(0xacce_0007);
    for i in 0..200 {
        let p = random_lp(&mut rng, 10, 30, true);
        let s = solve(&p);
        assert_eq!(s.status, LpStatus::Optimal, "instance {i}");
        assert!(verify_certificate(&p, &s).unwrap(), "instance {i}");
    }
    let mut compared = 0;
    for i in 0..300 {
        let p = random_lp(&mut rng, 4, 6, i % 2 == 0);
        let s = solve(&p);
        match oracle(&p) {
            Oracle::Optimal(v) => {
                assert_eq!(s.value, Some(v), "instance {i}");
                assert!(verify_certificate(&p, &s).unwrap());
            }
            Oracle::Infeasible => assert_eq!(s.status, LpStatus::Infeasible, "instance {i}"),
            Oracle::Unbounded => assert_eq!(s.status, LpStatus::Unbounded, "instance {i}"),
        }
        compared += 1;
    }
    // Beale's cycling example
    let (z, o) = (int(0), int(1));
    let beale = vdecomp::lp::LpProblem::new(
        vec![
            vec![o.clone(), z.clone(), z.clone(), rat(1, 4), int(-8), int(-1), int(9)],
            vec![z.clone(), o.clone(), z.clone(), rat(1, 2), int(-12), rat(-1, 2), int(3)],
            vec![z.clone(), z.clone(), o.clone(), z.clone(), z.clone(), o.clone(), z.clone()],
        ],
        vec![z.clone(), z.clone(), o],
        vec![z.clone(), z.clone(), z, rat(3, 4), int(-20), rat(1, 2), int(-6)],
        Vec::new(),
    )
    .unwrap();
    let s = solve(&beale);
    assert_eq!(s.value, Some(rat(5, 4)));
    assert!(verify_certificate(&beale, &s).unwrap());
    format!("200 certificates, {compared} oracle comparisons, Beale instance terminates at 5/4")
}

fn digraph6_round_trip() -> String {
    let mut lines = 0;
    for t in enumerate_nonisomorphic_tournaments(7).unwrap() {
        let line = encode_digraph6(&t).unwrap();
        assert_eq!(line, reference_digraph6(&adjacency(&t)));
        assert_eq!(decode_digraph6(line.as_bytes()).unwrap().to_tournament("rt").unwrap().pair_table(), t.pair_table());
        lines += 1;
    }
    for (name, expected) in [("tour7.d6", 456), ("tour10_sample.d6", 10_000)] {
        let text = fs::read_to_string(testdata(name)).unwrap();
        let mut count = 0;
        for line in text.lines() {
            let t = decode_digraph6(line.as_bytes()).unwrap().to_tournament(name).unwrap();
            assert_eq!(t.order(), if expected == 456 { 7 } else { 10 });
            assert_eq!(t.pair_table().len(), pair_count(t.order()));
            assert_eq!(encode_digraph6(&t).unwrap(), line);
            count += 1;
        }
        assert_eq!(count, expected, "{name}");
        lines += count;
    }
    let cyclic = decode_digraph6(b"&BP_").unwrap();
    assert_eq!(cyclic.arcs(), vec![(0, 1), (1, 2), (2, 0)]);
    let expected = tournament_from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    assert_eq!(cyclic.to_tournament("golden").unwrap().pair_table(), expected.pair_table());
    format!("{lines} records round trip; &BP_ is the cyclic triangle")
}

#[test]
fn acceptance_criteria() {
    type Check = fn() -> String;
    let criteria: [(u32, &str, Check); 8] = [
        (1, "blow-up values", blowup_values),
        (2, "fourteen-vertex nu* and limit bound", fourteen_vertex_bound),
        (3, "order-10 survivors of the extension search", order_ten_survivors),
        (4, "extension lemma inequality", extension_lemma),
        (5, "random-graph program", random_graph_program),
        (6, "integer optimum", integer_optimum_checks),
        (7, "exact LP solver", exact_lp_solver),
        (8, "digraph6 round trip", digraph6_round_trip),
    ];
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        let line = match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => format!("criterion {id} ({name}): PASS ({detail})"),
            Err(e) => {
                failed.push(id);
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("criterion {id} ({name}): FAIL ({msg})")
            }
        };
        let _ = writeln!(std::io::stderr().lock(), "{line}");
    }
    panic::set_hook(hook);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

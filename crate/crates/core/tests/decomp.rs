mod support;

use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use vdecomp::decomp::{
    deletion_average_bound, dstar, dstar_with, integer_optimum, is_feasible, nustar, nustar_with, pattern_mass,
    random_graph_lp, random_graph_problem, random_graph_witness, uniform_decomposition, CoverMode, DecompError,
    InfeasiblePolicy,
};
use vdecomp::hosts::{
    blowup_cyclic, complete_bipartite_bicolored, enumerate_nonisomorphic_tournaments, random_host,
    transitive_tournament, BlowupSpec, Host,
};
use vdecomp::patterns::{build_catalog, pair_count, LabelKind, PatternCatalog, WeightVector};
use vdecomp::ratio::{int, rat};
use vdecomp::Rational;

use support::{basic_feasible_solutions, dot, seeded};

fn catalog(k: usize, kind: &LabelKind) -> Arc<PatternCatalog> {
    Arc::new(build_catalog(k, kind).unwrap())
}

fn t3() -> WeightVector {
    WeightVector::parse(catalog(3, &LabelKind::Antisymmetric), "T3=1,C3=0").unwrap()
}

fn f3(spec: &str) -> WeightVector {
    WeightVector::parse(catalog(3, &LabelKind::bicolored()), spec).unwrap()
}

/// Weights drawn from {0, 1/4, ..., 1}.
fn random_vector(cat: Arc<PatternCatalog>, rng: &mut impl Rng) -> WeightVector {
    let w = (0..cat.len()).map(|_| rat(rng.random_range(0..=4), 4)).collect();
    WeightVector::from_weights(cat, w).unwrap()
}

fn mass_identity_holds(host: &Host, k: usize, v: &WeightVector) {
    let d = dstar(host, k, v).unwrap();
    let f = &d.decomposition;
    assert!(f.is_valid());
    let expected = Rational::new(host.present_pairs().into(), pair_count(k).into());
    assert_eq!(f.total_mass(), expected);
    let mass = pattern_mass(f);
    assert_eq!(mass.total(), expected);
    assert!(mass.masses.iter().all(|m| *m >= Rational::zero()));
    assert_eq!(mass.value(v), d.value);
    assert_eq!(f.value(v), d.value);
}

#[test]
fn mass_identity_on_many_hosts() {
    let mut rng = seeded(11);
    let tv = catalog(3, &LabelKind::Antisymmetric);
    let bv = catalog(3, &LabelKind::bicolored());
    for seed in 0..20 {
        let n = 5 + (seed as usize % 5);
        let t = random_host(&LabelKind::Antisymmetric, n, &rat(1, 2), seed).unwrap();
        mass_identity_holds(&t, 3, &random_vector(tv.clone(), &mut rng));
        let g = random_host(&LabelKind::bicolored(), n, &rat(1, 3), seed).unwrap();
        mass_identity_holds(&g, 3, &random_vector(bv.clone(), &mut rng));
    }
    let k4 = catalog(4, &LabelKind::Antisymmetric);
    for seed in 0..5 {
        let t = random_host(&LabelKind::Antisymmetric, 7, &rat(1, 2), seed).unwrap();
        mass_identity_holds(&t, 4, &random_vector(k4.clone(), &mut rng));
    }
    mass_identity_holds(&blowup_cyclic(&BlowupSpec::transitive(&[3, 3, 2])).unwrap(), 3, &t3());
}

#[test]
fn small_exact_values() {
    assert_eq!(dstar(&transitive_tournament(5), 3, &t3()).unwrap().value, rat(10, 3));
    let c3 = blowup_cyclic(&BlowupSpec::transitive(&[1, 1, 1])).unwrap();
    assert_eq!(dstar(&c3, 3, &t3()).unwrap().value, int(0));
}

#[test]
fn cyclic_triangle_mass_sits_on_c3() {
    let v = t3();
    let cat = v.catalog().clone();
    let c3 = blowup_cyclic(&BlowupSpec::transitive(&[1, 1, 1])).unwrap();
    let mass = pattern_mass(&dstar(&c3, 3, &v).unwrap().decomposition);
    let c3_index = cat.resolve("C3").unwrap();
    for (i, m) in mass.masses.iter().enumerate() {
        assert_eq!(*m, if i == c3_index { int(1) } else { int(0) });
    }
}

#[test]
fn constant_vectors_give_the_constant() {
    let cat = catalog(3, &LabelKind::Antisymmetric);
    let v = WeightVector::constant(cat, rat(2, 5));
    for seed in 0..5 {
        let t = random_host(&LabelKind::Antisymmetric, 8, &rat(1, 2), seed).unwrap();
        assert_eq!(nustar(&t, 3, &v).unwrap(), rat(2, 5));
    }
    let blue = random_host(&LabelKind::bicolored(), 6, &int(1), 0).unwrap();
    assert_eq!(nustar(&blue, 3, &f3("K3=1,P3=0,Q3=0,I3=0")).unwrap(), int(1));
}

#[test]
fn relaxation_dominates_integer_optimum() {
    let mut rng = seeded(12);
    let cat = catalog(3, &LabelKind::bicolored());
    for (n, hosts) in [(7usize, 20u64), (9, 6)] {
        for seed in 0..hosts {
            let g = random_host(&LabelKind::bicolored(), n, &rat(1, 2), seed).unwrap();
            let v = random_vector(cat.clone(), &mut rng);
            let best = integer_optimum(&g, 3, &v).unwrap();
            let lp = nustar(&g, 3, &v).unwrap();
            assert!(best.value <= lp, "n = {n} seed {seed}: {} > {}", best.value, lp);
            assert_eq!(best.blocks.len() as u64, (n * (n - 1) / 6) as u64);
        }
    }
    for seed in 0..10 {
        let t = random_host(&LabelKind::Antisymmetric, 7, &rat(1, 2), seed).unwrap();
        assert!(integer_optimum(&t, 3, &t3()).unwrap().value <= nustar(&t, 3, &t3()).unwrap());
    }
}

#[test]
fn integer_optimum_examples() {
    let v = f3("K3=1,P3=0,Q3=0,I3=1");
    let best = integer_optimum(&complete_bipartite_bicolored(3, 4), 3, &v).unwrap();
    assert_eq!(best.value, rat(1, 7));
    let blue = random_host(&LabelKind::bicolored(), 7, &int(1), 0).unwrap();
    assert_eq!(integer_optimum(&blue, 3, &f3("K3=1,P3=0,Q3=0,I3=0")).unwrap().value, int(1));
    assert!(matches!(
        integer_optimum(&complete_bipartite_bicolored(3, 3), 3, &v),
        Err(DecompError::NotDivisible { n: 6, k: 3 })
    ));
    let big = random_host(&LabelKind::bicolored(), 13, &rat(1, 2), 0).unwrap();
    assert!(matches!(integer_optimum(&big, 3, &v), Err(DecompError::Cap { .. })));
}

#[test]
fn uniform_decomposition_is_a_lower_bound() {
    let mut rng = seeded(13);
    let cat = catalog(3, &LabelKind::bicolored());
    for seed in 0..50 {
        let g = random_host(&LabelKind::bicolored(), 9, &rat(1, 2), 1000 + seed).unwrap();
        let v = random_vector(cat.clone(), &mut rng);
        let uniform = uniform_decomposition(&g, cat.clone()).unwrap();
        assert!(uniform.is_valid());
        // value under the uniform weights equals the pattern average over all triples
        let avg: Rational = uniform.patterns.iter().map(|&p| v.weight(p).clone()).sum::<Rational>() / int(84);
        assert_eq!(uniform.normalized_value(&v), avg);
        assert!(nustar(&g, 3, &v).unwrap() >= avg, "seed {seed}");
    }
}

#[test]
fn extension_lemma_inequality_exhaustive() {
    let mut rng = seeded(14);
    let cat = catalog(3, &LabelKind::Antisymmetric);
    for n in 4..=6 {
        for t in enumerate_nonisomorphic_tournaments(n).unwrap() {
            for v in [t3(), random_vector(cat.clone(), &mut rng)] {
                let d = dstar(&t, 3, &v).unwrap().value;
                let avg: Rational =
                    (0..n).map(|u| dstar(&t.delete_vertex(u).unwrap(), 3, &v).unwrap().value).sum::<Rational>()
                        / int(n as i64);
                let bound = avg * int(n as i64) / int(n as i64 - 2);
                assert!(d >= bound, "{t}: {d} < {bound}");
                assert_eq!(deletion_average_bound(&t, 3, &v).unwrap(), bound);
            }
        }
    }
}

#[test]
fn minimum_grows_with_the_order() {
    let mins: Vec<Rational> = (4..=7)
        .map(|n| {
            enumerate_nonisomorphic_tournaments(n)
                .unwrap()
                .iter()
                .map(|t| dstar(t, 3, &t3()).unwrap().value)
                .min()
                .unwrap()
        })
        .collect();
    for (i, pair) in mins.windows(2).enumerate() {
        let n = (i + 4) as i64;
        assert!(pair[1] >= &pair[0] * int(n + 1) / int(n - 1), "orders {n} and {}", n + 1);
    }
}

#[test]
fn deletion_bound_examples() {
    assert_eq!(deletion_average_bound(&transitive_tournament(5), 3, &t3()).unwrap(), rat(10, 3));
    let g = blowup_cyclic(&BlowupSpec::transitive(&[2, 2, 1])).unwrap();
    assert!(deletion_average_bound(&g, 3, &t3()).unwrap() <= dstar(&g, 3, &t3()).unwrap().value);
    let t4 = transitive_tournament(4);
    assert_eq!(deletion_average_bound(&t4, 3, &t3()).unwrap(), int(2));
}

#[test]
fn blowup_cap_at_two_two_two() {
    let g = blowup_cyclic(&BlowupSpec::transitive(&[2, 2, 2])).unwrap();
    let d = dstar(&g, 3, &t3()).unwrap();
    assert!(d.value <= int(3));
    // the dual certificate alone bounds the optimum: y^T b >= value
    let bound: Rational = d.solution.y.iter().sum();
    assert_eq!(bound, d.value);
    for seed in 0..5 {
        let inner = vdecomp::hosts::InnerOrientation::SeededRandom(seed);
        let g = blowup_cyclic(&BlowupSpec { parts: vec![2, 2, 2], inner }).unwrap();
        assert!(dstar(&g, 3, &t3()).unwrap().value <= int(3));
    }
}

#[test]
fn infeasible_hosts() {
    let mut pairs = vec![0u8; 6];
    pairs[0] = vdecomp::hosts::ABSENT;
    let holey = Host::new(4, LabelKind::Antisymmetric, pairs, "holey").unwrap();
    // {0,2} and {1,2} each lie in one complete triple, and both triples contain {2,3}
    let v = t3();
    assert!(matches!(dstar(&holey, 3, &v), Err(DecompError::Infeasible(_))));
    assert!(matches!(nustar(&holey, 3, &v), Err(DecompError::Infeasible(_))));
    assert_eq!(nustar_with(&holey, 3, &v, InfeasiblePolicy::Zero).unwrap(), int(0));
    let packing = dstar_with(&holey, 3, &v, CoverMode::Packing).unwrap();
    assert!(packing.decomposition.is_valid());
}

#[test]
fn random_graph_program() {
    let cat = catalog(3, &LabelKind::Binary);
    let v = WeightVector::parse(cat.clone(), "K3=1,P3=1/2,Q3=1/2,I3=0").unwrap();
    let prog = random_graph_lp(3, &v, &rat(1, 2)).unwrap();
    assert_eq!(prog.value, rat(5, 8));
    let q3 = cat.resolve("Q3").unwrap();
    let k3 = cat.resolve("K3").unwrap();
    assert_eq!(prog.x[q3], rat(3, 4));
    assert_eq!(prog.x[k3], rat(1, 4));

    let indicator = WeightVector::indicator(cat.clone(), k3);
    for p in [int(0), rat(1, 5), rat(1, 2), rat(7, 8), int(1)] {
        let problem = random_graph_problem(3, &indicator, &p).unwrap();
        let best = basic_feasible_solutions(problem.matrix(), problem.rhs(), problem.cols())
            .iter()
            .map(|x| dot(problem.objective(), x))
            .max()
            .unwrap();
        assert_eq!(best, p);
        assert_eq!(random_graph_lp(3, &indicator, &p).unwrap().value, p);
        let constant = WeightVector::constant(cat.clone(), rat(3, 7));
        assert_eq!(random_graph_lp(3, &constant, &p).unwrap().value, rat(3, 7));
    }
    for k in [3, 4] {
        let cat = catalog(k, &LabelKind::Binary);
        let v = WeightVector::constant(cat.clone(), int(1));
        for p in [int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)] {
            let problem = random_graph_problem(k, &v, &p).unwrap();
            assert!(is_feasible(&problem, &random_graph_witness(&cat, &p)));
        }
    }
    assert!(random_graph_lp(3, &v, &rat(5, 4)).is_err());
}

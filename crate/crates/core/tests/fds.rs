mod common;

use common::*;
use oiglab::family::ExplicitTable;
use oiglab::fds::*;
use oiglab::label::{Label, Labeling, Point};
use oiglab::learners::Setting;
use oiglab::{Budget, Loss, Rational};
use rand::Rng;

/// Every total assignment of the left domains.
fn assignments(fds: &Fds) -> Vec<FdsAssignment> {
    let mut out = vec![Vec::new()];
    for var in fds.left() {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..var.domain.len()).map(move |z| {
                    let mut q = p.clone();
                    q.push(z);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(|values| FdsAssignment { values }).collect()
}

/// Outputs recomputed edge by edge.
fn resum(fds: &Fds, u: &FdsAssignment) -> Vec<Rational> {
    (0..fds.right().len())
        .map(|b| {
            let es: Vec<_> = fds.edges().iter().filter(|e| e.right == b).collect();
            let total: Rational = es.iter().map(|e| e.costs[u.values[e.left]]).sum();
            total / Rational::from_integer(es.len() as i64)
        })
        .collect()
}

fn brute_min_max(fds: &Fds) -> Rational {
    assignments(fds).iter().map(|u| resum(fds, u).into_iter().max().unwrap()).min().unwrap()
}

#[test]
fn outputs_match_resummation() {
    let mut rng = rng(31);
    for _ in 0..40 {
        let f = random_fds(&mut rng, 6, 6);
        for u in assignments(&f).into_iter().take(20) {
            assert_eq!(f.evaluate_outputs(&u).unwrap(), resum(&f, &u));
        }
    }
}

#[test]
fn scaling_a_table_scales_its_contribution() {
    let mut rng = rng(32);
    for _ in 0..20 {
        let f = random_fds(&mut rng, 4, 4);
        let e = rng.gen_range(0..f.edges().len());
        let c = Rational::new(rng.gen_range(0..=6), 3);
        let g = f.scale_edge(e, c);
        let edge = &f.edges()[e];
        let deg = Rational::from_integer(f.right_degree(edge.right) as i64);
        for u in assignments(&f).into_iter().take(10) {
            let before = f.evaluate_outputs(&u).unwrap();
            let after = g.evaluate_outputs(&u).unwrap();
            let own = edge.costs[u.values[edge.left]] / deg;
            assert_eq!(after[edge.right], before[edge.right] - own + own * c);
            for b in (0..before.len()).filter(|&b| b != edge.right) {
                assert_eq!(after[b], before[b]);
            }
        }
    }
}

#[test]
fn epsilon_assignment_matches_exhaustive_search() {
    let mut rng = rng(33);
    let budget = Budget::default();
    for _ in 0..60 {
        let f = random_fds(&mut rng, 5, 5);
        let best = brute_min_max(&f);
        for eps in [best - Rational::new(1, 4), best] {
            match f.epsilon_assignment(&eps, &budget).unwrap() {
                EpsOutcome::Feasible(u) => {
                    assert!(eps >= best);
                    assert!(resum(&f, &u).iter().all(|v| *v <= eps));
                }
                EpsOutcome::Infeasible(c) => {
                    assert!(eps < best);
                    assert!(c.certifies(&f, &eps, &budget).unwrap());
                }
            }
        }
        let (v, u) = f.min_max_value(&budget).unwrap();
        assert_eq!(v, best);
        assert_eq!(resum(&f, &u).into_iter().max().unwrap(), best);
    }
}

#[test]
fn trivial_examples() {
    let zero = Fds::new(
        vec![FdsVariable { name: "a".into(), domain: vec!["x".into(), "y".into()] }],
        vec!["b".into()],
        vec![FdsEdge { left: 0, right: 0, costs: vec![Rational::from_integer(0); 2] }],
    )
    .unwrap();
    assert!(zero.epsilon_assignment(&Rational::from_integer(0), &Budget::default()).unwrap().is_feasible());
    assert_eq!(zero.min_max_value(&Budget::default()).unwrap().0, Rational::from_integer(0));
}

#[test]
fn sub_fds_preserves_feasibility() {
    let mut rng = rng(34);
    let budget = Budget::default();
    for _ in 0..40 {
        let f = random_fds(&mut rng, 5, 5);
        let (v, u) = f.min_max_value(&budget).unwrap();
        let r = f.right().len();
        for mask in 1u32..1 << r {
            let rsub: Vec<usize> = (0..r).filter(|&b| mask >> b & 1 == 1).collect();
            let (sub, lefts, _) = f.finite_sub_fds_mapped(&rsub).unwrap();
            let restricted = FdsAssignment { values: lefts.iter().map(|&a| u.values[a]).collect() };
            assert!(sub.evaluate_outputs(&restricted).unwrap().iter().all(|x| *x <= v));
            for (i, &a) in lefts.iter().enumerate() {
                assert_eq!(sub.left()[i], f.left()[a]);
            }
        }
        let (whole, lefts, _) = f.finite_sub_fds_mapped(&(0..r).collect::<Vec<_>>()).unwrap();
        let touched: Vec<usize> = (0..f.left().len()).filter(|&a| f.edges().iter().any(|e| e.left == a)).collect();
        assert_eq!(lefts, touched);
        assert_eq!(whole.edges().len(), f.edges().len());
        if touched.len() == f.left().len() {
            assert_eq!(whole, f);
        }
    }
}

/// Best worst-case excess loss over all tables scenario -> label.
fn brute_learner_table(class: &[Labeling], k: usize, loss: &Loss, setting: Setting) -> Rational {
    let n = class[0].len();
    let truths = match setting {
        Setting::Realizable => class.to_vec(),
        Setting::Agnostic => cube(k, n),
    };
    let sc = scenarios(&truths);
    let mut learner = vec![0usize; sc.len()];
    let mut best: Option<Rational> = None;
    loop {
        let worst = truths
            .iter()
            .map(|y| {
                let err: Rational = (0..n)
                    .map(|i| {
                        let s = sc.binary_search(&y.mask(i)).unwrap();
                        loss.eval(Label::int(learner[s] as i64), y.get(i))
                    })
                    .sum::<Rational>()
                    / Rational::from_integer(n as i64);
                let offset = match setting {
                    Setting::Realizable => Rational::from_integer(0),
                    Setting::Agnostic => class
                        .iter()
                        .map(|h| (0..n).map(|i| loss.eval(h.get(i), y.get(i))).sum::<Rational>() / Rational::from_integer(n as i64))
                        .min()
                        .unwrap(),
                };
                err - offset
            })
            .max()
            .unwrap();
        best = Some(best.map_or(worst, |b: Rational| b.min(worst)));
        let mut i = 0;
        loop {
            if i == learner.len() {
                return best.unwrap();
            }
            learner[i] += 1;
            if learner[i] < k {
                break;
            }
            learner[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn transductive_encoding_with_absolute_loss() {
    let mut rng = rng(35);
    let budget = Budget::default();
    for _ in 0..15 {
        let m = rng.gen_range(1..=4);
        let class = random_class(&mut rng, 3, 2, m);
        let fam = ExplicitTable::new(vec![Point::scalar(0), Point::scalar(1)], labels(3), class.clone()).unwrap();
        let f = encode_transductive(&fam, fam.domain(), Setting::Realizable, &Loss::Absolute, &budget).unwrap();
        assert_eq!(f.min_max_value(&budget).unwrap().0, brute_learner_table(&class, 3, &Loss::Absolute, Setting::Realizable));
    }
}

#[test]
fn agnostic_encoding_matches_learner_tables() {
    let mut rng = rng(36);
    let budget = Budget::default();
    for _ in 0..10 {
        let m = rng.gen_range(1..=3);
        let class = random_class(&mut rng, 2, 2, m);
        let fam = ExplicitTable::new(vec![Point::scalar(0), Point::scalar(1)], labels(2), class.clone()).unwrap();
        let f = encode_transductive(&fam, fam.domain(), Setting::Agnostic, &Loss::ZeroOne, &budget).unwrap();
        assert_eq!(f.min_max_value(&budget).unwrap().0, brute_learner_table(&class, 2, &Loss::ZeroOne, Setting::Agnostic));
    }
}

#[test]
fn agnostic_encoding_of_full_class_is_realizable_encoding() {
    let all = cube(2, 3);
    let fam = ExplicitTable::new((0..3).map(Point::scalar).collect(), labels(2), all).unwrap();
    let budget = Budget::default();
    let a = encode_transductive(&fam, fam.domain(), Setting::Agnostic, &Loss::ZeroOne, &budget).unwrap();
    let r = encode_transductive(&fam, fam.domain(), Setting::Realizable, &Loss::ZeroOne, &budget).unwrap();
    assert_eq!(a, r);
}

#[test]
fn float_fds_agrees_with_exact() {
    let g = oiglab::graph::BipartiteGraph::from_edges(1, 2, 2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
    let exact: Fds = encode_matching(&g).unwrap();
    let float: GenericFds<f64> = encode_matching(&g).unwrap();
    let (ve, _) = exact.min_max_value(&Budget::default()).unwrap();
    let (vf, _) = float.min_max_value(&Budget::default()).unwrap();
    assert_eq!(ve, Rational::from_integer(1));
    assert!((vf - 1.0).abs() < 1e-12);
}

//! One PASS/FAIL line per acceptance criterion. Lines go straight to stderr so they show up
//! without `--nocapture`.
//!
//! Criteria 7 and 10 state properties that are false; they are evaluated as stated and reported
//! as FAIL together with the counterexample. The test itself asserts the remaining criteria.

mod common;

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::way_below_by_chains;
use cuweb::axioms::{check_axiom, is_violation, Axiom, FiniteStructure};
use cuweb::circle::{circle_semigroup, constant_pair};
use cuweb::colimits::{
    check_l1_l2, check_webbing_continuity, padded_cocone, web_colimit, webbed_diagram,
};
use cuweb::fixtures::{
    named_monoids, named_systems, random_base, random_circle_morphism, random_composable_pair,
    random_diagram, random_system, rng,
};
use cuweb::metric::{
    check_diagram_proposition, check_relaxed_triangle, metric_report, BaseMap, Bracket,
    CircleMorphism, CircleWebMorphism, MetricReport,
};
use cuweb::order::FiniteOrderedMonoid;
use cuweb::structure::{
    ideal_lattice, lattice_isomorphism, maximal_elements, quotient, split_sequence,
};
use cuweb::systems::GroupSystem;
use cuweb::webbing::{check_preservation, check_web_functoriality, web};

/// Criteria whose statement has a counterexample.
const KNOWN_RED: [u32; 2] = [7, 10];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(budget: Duration, took: Duration, o: Outcome) -> Outcome {
    if took <= budget {
        o
    } else {
        outcome(
            false,
            format!("{} (over the {} s budget)", o.detail, budget.as_secs()),
        )
    }
}

fn finite_systems() -> Vec<(String, Arc<GroupSystem>)> {
    let mut out: Vec<(String, Arc<GroupSystem>)> = named_systems()
        .into_iter()
        .filter(|(_, s)| s.all_finite())
        .map(|(n, s)| (n.to_string(), s))
        .collect();
    let mut r = rng(7);
    out.extend((0..60).map(|k| {
        (
            format!("random-system-{k}"),
            Arc::new(random_system(&mut r, 6)),
        )
    }));
    out
}

/// Named monoids, random bases and webs of finite systems, as ordered monoids.
fn monoid_fixtures() -> Vec<(String, Arc<FiniteOrderedMonoid>)> {
    let mut out: Vec<(String, Arc<FiniteOrderedMonoid>)> = named_monoids()
        .into_iter()
        .map(|(n, m)| (n, Arc::new(m)))
        .collect();
    let mut r = rng(2024);
    out.extend((0..40).map(|k| (format!("random-base-{k}"), Arc::new(random_base(&mut r, 8)))));
    for (name, sys) in finite_systems() {
        let w = web(&sys).unwrap();
        if w.len() <= 24 {
            out.push((format!("web of {name}"), Arc::new(w.to_monoid().unwrap())));
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut ok = 0;
    let mut first_bad = None;
    for k in 0..200 {
        let sys = Arc::new(random_system(&mut r, 6));
        let w = web(&sys).unwrap();
        let z = w.zero_index();
        let good = [Axiom::PC, Axiom::PD, Axiom::S0]
            .iter()
            .all(|&a| check_axiom(&w, a).unwrap().holds)
            && w.way_below(z, z);
        if good {
            ok += 1;
        } else {
            first_bad.get_or_insert(k);
        }
    }
    outcome(
        ok == 200,
        format!("{ok}/200 webs satisfy PC, PD, S0 with compact zero; first failure {first_bad:?}"),
    )
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, sys) in finite_systems() {
        let w = web(&sys).unwrap();
        if w.way_below_table() != way_below_by_chains(w.leq_table()) {
            bad.push(name);
        }
        checked += 1;
    }
    for (name, m) in named_monoids() {
        if m.way_below() != way_below_by_chains(m.leq_table()) {
            bad.push(name);
        }
        checked += 1;
    }
    for (n, m, b) in [(0, 2, 2), (0, 3, 1), (1, 1, 1)] {
        let w = circle_semigroup(n, m, b).unwrap();
        if w.way_below_table() != way_below_by_chains(w.leq_table()) {
            bad.push(format!("circle({n},{m},{b})"));
        }
        checked += 1;
    }
    outcome(
        bad.is_empty(),
        format!("{checked} fixtures, mismatches {bad:?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let ok = (0..100)
        .filter(|_| {
            let (f, g) = random_composable_pair(&mut r);
            check_web_functoriality(&f, &g).unwrap()
        })
        .count();
    outcome(ok == 100, format!("{ok}/100 composable pairs"))
}

fn criterion_4() -> Outcome {
    let (mut checked, mut ok) = (0, 0);
    for (_, m) in monoid_fixtures() {
        if maximal_elements(&m).is_err() {
            continue;
        }
        checked += 1;
        let s = split_sequence(&m).unwrap();
        if s.verdict.exact() && s.section_ok && (0..s.q.len()).all(|k| s.j.apply(s.q[k]) == k) {
            ok += 1;
        }
    }
    outcome(
        ok == checked && checked > 0,
        format!("{ok}/{checked} fixtures with maximal elements"),
    )
}

fn criterion_5() -> Outcome {
    let (mut checked, mut ok) = (0, 0);
    for (_, m) in monoid_fixtures() {
        if m.size() > 16 {
            continue;
        }
        checked += 1;
        if lattice_isomorphism(&m).holds() {
            ok += 1;
        }
    }
    outcome(
        ok == checked,
        format!("{ok}/{checked} carriers of size at most 16"),
    )
}

fn criterion_6() -> Outcome {
    let (mut checked, mut ok) = (0, 0);
    for (_, m) in monoid_fixtures() {
        for ideal in ideal_lattice(&m).ideals {
            checked += 1;
            if quotient(&m, &ideal).is_ok_and(|q| q.sequence.exact()) {
                ok += 1;
            }
        }
    }
    outcome(
        ok == checked,
        format!("{ok}/{checked} quotient sequences exact"),
    )
}

fn criterion_7() -> Outcome {
    let mut systems = finite_systems();
    let mut r = rng(17);
    systems.extend((0..140).map(|k| {
        (
            format!("random-system-b{k}"),
            Arc::new(random_system(&mut r, 6)),
        )
    }));
    // The only finite positively ordered monoid that is weakly cancellative is {0}.
    let point =
        FiniteOrderedMonoid::new(vec!["0".into()], 0, vec![vec![0]], vec![vec![true]], true)
            .unwrap();
    systems.push(("point".into(), Arc::new(GroupSystem::trivial(point))));
    let mut parts = Vec::new();
    let mut pass = true;
    for tag in [Axiom::PWC, Axiom::O5, Axiom::AD] {
        let (mut hyp, mut violations, mut example) = (0, 0, None);
        for (name, sys) in &systems {
            let v = check_preservation(sys, tag).unwrap();
            hyp += usize::from(v.hypothesis_holds);
            if v.theorem_violation {
                violations += 1;
                let w = v
                    .conclusion
                    .witness
                    .as_ref()
                    .map(|w| w.labels.join(", "))
                    .unwrap_or_default();
                example.get_or_insert(format!("{name}: [{w}]"));
            }
        }
        pass &= violations == 0;
        parts.push(match example {
            None => format!("{tag}: 0 violations in {hyp} hypotheses"),
            Some(e) => format!("{tag}: {violations} violations in {hyp} hypotheses, e.g. {e}"),
        });
    }
    outcome(
        pass,
        format!("{} systems; {}", systems.len(), parts.join("; ")),
    )
}

fn criterion_8() -> Outcome {
    let w = circle_semigroup(0, 4, 6).unwrap();
    let pair = |level, g| constant_pair(&w, level, g).unwrap();
    let (x, x3, y) = (pair(1, 2), pair(1, 3), pair(2, 3));
    let times = |k: usize, a: usize| (1..k).try_fold(a, |acc, _| w.add_table()[acc][a]);
    let (lhs, rhs) = (times(3, x), times(2, y));
    let inequality = matches!((lhs, rhs), (Some(l), Some(r)) if w.leq(l, r));
    let incomparable = !w.leq(x, x3) && !w.leq(x3, x);
    let not_below = !w.leq(x, y);
    let au = check_axiom(&w, Axiom::AU).unwrap();
    let witnessed = !au.holds
        && au
            .witness
            .as_ref()
            .is_some_and(|wit| is_violation(&w, Axiom::AU, wit));
    let wit = au
        .witness
        .map(|w| format!("{:?} at n = {:?}", w.labels, w.n))
        .unwrap_or_default();
    outcome(
        inequality && incomparable && not_below && witnessed,
        format!(
            "3·([1],2) ≤ 2·([2],3): {inequality}; ([1],2), ([1],3) incomparable: {incomparable}; \
             ([1],2) ≰ ([2],3): {not_below}; AU fails: {witnessed} ({wit})"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let (mut cocones, mut padded, mut continuous) = (0, 0, 0);
    for _ in 0..100 {
        let d = random_diagram(&mut r);
        let (wd, _) = webbed_diagram(&d).unwrap();
        let v = check_l1_l2(&wd, &web_colimit(&wd));
        cocones += usize::from(v.l1 && v.l2);
        let p = check_l1_l2(&wd, &padded_cocone(&wd));
        padded += usize::from(!(p.l1 && p.l2));
        continuous += usize::from(check_webbing_continuity(&d).unwrap().holds());
    }
    outcome(
        cocones == 100 && padded == 100 && continuous == 100,
        format!("L1/L2 on colimits {cocones}/100; padded rejected {padded}/100; continuity {continuous}/100"),
    )
}

fn criterion_10() -> Outcome {
    let id = CircleWebMorphism::identity();
    let mut ms = vec![
        id,
        CircleWebMorphism::rotation(1, 3),
        CircleWebMorphism::rotation(3, 4),
        CircleWebMorphism::rotation(5, 4),
        id.with_multiplier(-1),
        CircleWebMorphism {
            base: BaseMap::Collapse,
            fiber_multiplier: 0,
        },
    ];
    let mut r = rng(10);
    ms.extend((0..14).map(|_| random_circle_morphism(&mut r, 4)));
    let ms: Vec<CircleMorphism> = ms.into_iter().map(CircleMorphism::Webbed).collect();
    let k = ms.len();
    let (mut finite, mut stated, mut reversed, mut symmetric, mut triangles, mut diagram) =
        (0, 0, 0, true, true, true);
    let mut stated_example = None;
    for window in [0, 2, 4] {
        let reports: Vec<Vec<MetricReport>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| metric_report(&ms[i], &ms[j], 4, 4, window).unwrap())
                    .collect()
            })
            .collect();
        for i in 0..k {
            for j in 0..k {
                let rep = &reports[i][j];
                symmetric &= rep.dd == reports[j][i].dd && rep.d == reports[j][i].d;
                if rep.dd.bracket.is_finite() && rep.d.is_finite() {
                    finite += 1;
                    if rep.dd_le_d_le_2dd != Some(false) {
                        stated += 1;
                    } else {
                        let b = |x: &Bracket| format!("[{}, {}]", x.lo, x.hi);
                        stated_example.get_or_insert(format!(
                            "pair ({i},{j}) window {window}: dd {}, d {}",
                            b(&rep.dd.bracket),
                            b(&rep.d)
                        ));
                    }
                    reversed += usize::from(rep.d_le_dd_le_2d != Some(false));
                }
                for (via, row) in reports.iter().enumerate() {
                    triangles &= check_relaxed_triangle(
                        &rep.dd.bracket,
                        &reports[i][via].dd.bracket,
                        &row[j].dd.bracket,
                    );
                }
                for n in 0..=4 {
                    diagram &= check_diagram_proposition(&ms[i], &ms[j], n, window)
                        .unwrap()
                        .equivalent();
                }
            }
        }
    }
    outcome(
        stated == finite && symmetric && triangles && diagram,
        format!(
            "{k} morphisms, windows 0, 2, 4; dd ≤ d ≤ 2dd on {stated}/{finite} finite pairs{}; \
             d ≤ dd ≤ 2d on {reversed}/{finite}; symmetry {symmetric}; relaxed triangle {triangles}; \
             diagram equivalence {diagram}",
            stated_example.map(|e| format!(" (fails at {e})")).unwrap_or_default()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    type Criterion = fn() -> Outcome;
    let criteria: [(u32, Option<u64>, Criterion); 10] = [
        (1, Some(30), criterion_1),
        (2, None, criterion_2),
        (3, None, criterion_3),
        (4, None, criterion_4),
        (5, Some(60), criterion_5),
        (6, None, criterion_6),
        (7, None, criterion_7),
        (8, None, criterion_8),
        (9, Some(60), criterion_9),
        (10, Some(120), criterion_10),
    ];
    let mut unexpected = Vec::new();
    let mut err = std::io::stderr().lock();
    for (id, budget, run) in criteria {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if let Some(b) = budget {
            o = within(Duration::from_secs(b), took, o);
        }
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            err,
            "criterion {id:>2} {verdict} [{:.2} s] {}",
            took.as_secs_f64(),
            o.detail
        );
        if !o.pass && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
}

#[test]
fn known_reds_fail_for_the_recorded_reasons() {
    // Almost divisibility does not transfer: constant Z/2 over {0, ∞}.
    let sys = Arc::new(GroupSystem::constant(
        cuweb::order::truncated_naturals(0),
        cuweb::abgroups::FinAbGroup::cyclic(2),
    ));
    let v = check_preservation(&sys, Axiom::AD).unwrap();
    assert!(v.theorem_violation);
    // The rotation by 3/16 is at dd = 1/4 but d ≤ 3/16 < dd.
    let id = CircleMorphism::Webbed(CircleWebMorphism::identity());
    let rot = CircleMorphism::Webbed(CircleWebMorphism::rotation(3, 4));
    let rep = metric_report(&id, &rot, 4, 4, 2).unwrap();
    assert_eq!(rep.dd_le_d_le_2dd, Some(false));
    assert_eq!(rep.d_le_dd_le_2d, Some(true));
}

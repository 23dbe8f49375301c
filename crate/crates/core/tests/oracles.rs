//! Library results against brute-force enumeration.

mod common;

use std::sync::Arc;

use actkit::algebra::{enumerate_homs, is_isomorphic, Act, Subact};
use actkit::classes::{cyclic_acts, is_relatively_injective, right_ideal_acts, InclusionInstance};
use actkit::enumeration::{enumerate_acts, enumerate_extensions, enumerate_monoids, enumerate_subacts};
use actkit::equations::{diagram_system, solve_system, Equation, EquationSystem, Term};
use actkit::fixtures;
use actkit::purity::{
    is_pure, is_pure_bounded, is_pure_via_diagram, minimal_pure_superact_oracle, pure_closure, BoundedSearch,
};
use common::*;

#[test]
fn monoid_counts_match_brute_force() {
    for k in 1..=3 {
        assert_eq!(enumerate_monoids(k).unwrap().len(), brute_monoid_count(k), "order {k}");
    }
}

#[test]
fn enumerated_monoids_are_pairwise_distinct() {
    let ms = enumerate_monoids(3).unwrap();
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i + 1..] {
            let k = 3;
            let same = permutations(k)
                .into_iter()
                .filter(|p| p[0] == 0)
                .any(|p| (0..k).all(|x| (0..k).all(|y| p[a.mul(x, y)] == b.mul(p[x], p[y]))));
            assert!(!same, "{} and {} are isomorphic", a.name(), b.name());
        }
    }
}

#[test]
fn act_counts_match_brute_force() {
    for k in 1..=3 {
        for monoid in enumerate_monoids(k).unwrap() {
            let monoid = Arc::new(monoid);
            let max = if k == 3 { 2 } else { 3 };
            for m in 1..=max {
                let acts = enumerate_acts(&monoid, m).unwrap();
                assert_eq!(acts.len(), brute_act_count(&monoid, m), "{} size {m}", monoid.name());
                for (i, a) in acts.iter().enumerate() {
                    for b in &acts[i + 1..] {
                        assert!(!is_isomorphic(a, b).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn extension_counts_match_brute_force() {
    let cases = [fixtures::two_fixed_points(), fixtures::b_act(), Act::singleton(fixtures::cyclic_group2())];
    for act in &cases {
        for extra in 1..=2 {
            if act.size() + extra > 4 {
                continue;
            }
            let found = enumerate_extensions(act, extra).unwrap();
            assert_eq!(found.len(), brute_extension_count(act, extra), "{} +{extra}", act.name());
            for sub in &found {
                assert_eq!(&sub.as_act().flat_table(), &act.flat_table());
            }
        }
    }
}

#[test]
fn homs_match_brute_force() {
    let acts = small_acts(3);
    for a in &acts {
        for b in acts.iter().filter(|b| b.same_monoid(a)) {
            let got: Vec<Vec<usize>> = enumerate_homs(a, b, &[]).unwrap().iter().map(|h| h.map().to_vec()).collect();
            assert_eq!(got, brute_homs(a, b), "{} -> {}", a.name(), b.name());
        }
    }
}

#[test]
fn subacts_match_brute_force() {
    for act in small_acts(4) {
        let got: Vec<Vec<usize>> = enumerate_subacts(&act).unwrap().iter().map(|s| s.members().to_vec()).collect();
        assert_eq!(got, brute_subacts(&act));
    }
}

#[test]
fn purity_matches_brute_force() {
    for act in small_acts(4) {
        for members in brute_subacts(&act) {
            let sub = Subact::new(act.clone(), members.clone()).unwrap();
            let expected = brute_pure(&act, &members);
            assert_eq!(is_pure(&sub).pure, expected, "{} {:?}", act.name(), members);
            assert_eq!(is_pure_via_diagram(&sub).pure, expected);
        }
    }
}

fn eval(sys: &EquationSystem, t: Term, target: &Act, embed: &[usize], vals: &[usize]) -> usize {
    match t {
        Term::Var { var, scalar } => target.act(vals[var], scalar),
        Term::Const(a) => embed[sys.constants().members().iter().position(|&c| c == a).unwrap()],
    }
}

fn brute_solvable(sys: &EquationSystem, target: &Act, embed: &[usize]) -> Option<Vec<usize>> {
    let mut first = None;
    for_each_tuple(sys.var_count(), target.size(), |vals| {
        if first.is_none()
            && sys
                .equations()
                .iter()
                .all(|e| eval(sys, e.lhs, target, embed, vals) == eval(sys, e.rhs, target, embed, vals))
        {
            first = Some(vals.to_vec());
        }
    });
    first
}

#[test]
fn diagram_solutions_match_brute_force() {
    for act in small_acts(4) {
        for members in brute_subacts(&act) {
            let sub = Subact::new(act.clone(), members).unwrap();
            let diagram = diagram_system(&sub);
            // in the ambient act, via the inclusion
            let embed = diagram.ambient_embedding();
            let got = solve_system(&diagram, &act, &embed).unwrap().map(|a| a.values);
            assert_eq!(got, brute_solvable(&diagram, &act, &embed));
            // in the subact itself
            let inner = sub.as_act();
            let embed = diagram.constants_embedding();
            let got = solve_system(&diagram, &inner, &embed).unwrap().map(|a| a.values);
            assert_eq!(got, brute_solvable(&diagram, &inner, &embed));
        }
    }
}

#[test]
fn single_variable_systems_match_bounded_purity() {
    // Every system with one variable and at most two equations, by brute force.
    for act in small_acts(3) {
        let n = act.monoid().order();
        for members in brute_subacts(&act) {
            if members.len() == act.size() {
                continue;
            }
            let sub = Subact::new(act.clone(), members.clone()).unwrap();
            let mut terms: Vec<Term> = (0..n).map(|s| Term::var(0, s)).collect();
            terms.extend(members.iter().map(|&a| Term::Const(a)));
            let eqs: Vec<Equation> = terms
                .iter()
                .flat_map(|&l| terms.iter().map(move |&r| Equation::new(l, r)))
                .filter(|e| matches!(e.lhs, Term::Var { .. }))
                .collect();
            let inner = sub.as_act();
            let witness_exists = eqs.iter().enumerate().any(|(i, e1)| {
                eqs[i..].iter().any(|e2| {
                    let sys = EquationSystem::new(vec!["x".into()], sub.clone(), vec![*e1, *e2]).unwrap();
                    brute_solvable(&sys, &act, sys.constants().members()).is_some()
                        && brute_solvable(&sys, &inner, &sys.constants_embedding()).is_none()
                })
            });
            let bounded = is_pure_bounded(&sub, BoundedSearch::new(1, 2)).unwrap();
            assert_eq!(bounded, !witness_exists, "{} {:?}", act.name(), members);
        }
    }
}

#[test]
fn closure_against_subset_scan() {
    for act in small_acts(4) {
        let m = act.size();
        for mask in 1u32..(1 << m) {
            let seed: Vec<usize> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
            let oracle = minimal_pure_superact_oracle(&act, &seed).unwrap();
            assert_eq!(oracle.members(), brute_min_pure_superact(&act, &seed).as_slice());
            let closure = pure_closure(&act, &seed).unwrap();
            assert!(closure.len() >= oracle.len());
            assert!(brute_pure(&act, closure.members()));
        }
    }
}

#[test]
fn ideals_match_brute_force() {
    for k in 1..=3 {
        for monoid in enumerate_monoids(k).unwrap() {
            let monoid = Arc::new(monoid);
            let mut all = Vec::new();
            for mask in 1u32..(1 << k) {
                let set: Vec<usize> = (0..k).filter(|&a| mask >> a & 1 == 1).collect();
                if set.iter().all(|&a| (0..k).all(|s| mask >> monoid.mul(a, s) & 1 == 1)) {
                    all.push(set);
                }
            }
            all.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
            let mut principal: Vec<Vec<usize>> = (0..k)
                .map(|a| {
                    let mut v: Vec<usize> = (0..k).map(|s| monoid.mul(a, s)).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect();
            principal.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
            principal.dedup();
            let got = |p| right_ideal_acts(&monoid, p).iter().map(|s| s.members().to_vec()).collect::<Vec<_>>();
            assert_eq!(got(false), all);
            assert_eq!(got(true), principal);
        }
    }
}

#[test]
fn congruence_counts_match_brute_force() {
    for k in 1..=4 {
        for monoid in enumerate_monoids(k).unwrap() {
            let monoid = Arc::new(monoid);
            assert_eq!(cyclic_acts(&monoid).len(), brute_congruences(&monoid), "{}", monoid.name());
        }
    }
}

#[test]
fn relative_injectivity_matches_brute_force() {
    for monoid in catalog().monoids.iter().filter(|m| m.order() <= 2) {
        let acts: Vec<Arc<Act>> = catalog().acts(monoid).iter().filter(|a| a.size() <= 3).cloned().collect();
        let instances: Vec<Subact> =
            acts.iter().flat_map(|l| enumerate_subacts(l).unwrap()).filter(|s| !s.is_whole()).collect();
        for target in &acts {
            for inst in &instances {
                let got = is_relatively_injective(target, &[InclusionInstance::new(inst.clone())]).unwrap();
                assert_eq!(got, brute_extends(inst, target));
            }
        }
    }
}

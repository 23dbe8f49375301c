//! Purity of subacts.
//!
//! For a finite ambient act `B ⊇ A`, every system over `A` that is solvable in
//! `B` is a subsystem of the diagram of `A` in `B`, so `A` is pure exactly when
//! the diagram is solvable in `A`, which in turn is exactly the existence of a
//! retraction `B → A`. [`is_pure`] searches for the retraction, [`is_pure_via_diagram`]
//! solves the diagram, and [`is_pure_bounded`] checks small systems directly.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::algebra::{find_hom, generated_subact, Act, ActHom, Subact};
use crate::equations::{diagram_system, for_each_solution, EquationSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PurityMethod {
    Retraction,
    Diagram,
    Bounded,
}

impl PurityMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PurityMethod::Retraction => "retraction",
            PurityMethod::Diagram => "diagram",
            PurityMethod::Bounded => "bounded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurityVerdict {
    pub pure: bool,
    pub method: PurityMethod,
    /// A system solvable in the ambient act but not in the subact.
    pub witness: Option<EquationSystem>,
    /// A hom from the ambient act onto [`Subact::as_act`] fixing the subact.
    pub retraction: Option<ActHom>,
}

fn identity_pins(sub: &Subact) -> Vec<(usize, usize)> {
    sub.members().iter().enumerate().map(|(pos, &a)| (a, pos)).collect()
}

/// Decides purity by searching for a retraction of the ambient act onto `sub`.
pub fn is_pure(sub: &Subact) -> PurityVerdict {
    let target = Arc::new(sub.as_act());
    let retraction = find_hom(sub.ambient(), &target, &identity_pins(sub)).expect("same monoid");
    PurityVerdict { pure: retraction.is_some(), method: PurityMethod::Retraction, witness: None, retraction }
}

/// Decides purity by solving the diagram system inside `sub`.
pub fn is_pure_via_diagram(sub: &Subact) -> PurityVerdict {
    let diagram = diagram_system(sub);
    match diagram.solve_in_constants() {
        Some(assignment) => {
            let ambient = sub.ambient();
            let mut map = vec![0; ambient.size()];
            let mut next_var = 0;
            for (b, slot) in map.iter_mut().enumerate() {
                *slot = match sub.position(b) {
                    Some(pos) => pos,
                    None => {
                        next_var += 1;
                        assignment.values[next_var - 1]
                    }
                };
            }
            let retraction =
                ActHom::new(ambient.clone(), Arc::new(sub.as_act()), map).expect("a diagram solution is a retraction");
            PurityVerdict { pure: true, method: PurityMethod::Diagram, witness: None, retraction: Some(retraction) }
        }
        None => PurityVerdict { pure: false, method: PurityMethod::Diagram, witness: Some(diagram), retraction: None },
    }
}

/// A subsystem of the diagram that is solvable in the ambient act and not in
/// `sub`, minimized by greedy single-equation deletion. `None` if `sub` is pure.
pub fn purity_witness(sub: &Subact) -> Option<EquationSystem> {
    let diagram = diagram_system(sub);
    if diagram.solve_in_constants().is_some() {
        return None;
    }
    let mut kept = diagram.equations().to_vec();
    let mut i = 0;
    while i < kept.len() {
        let mut trial = kept.clone();
        trial.remove(i);
        if diagram.with_equations(trial.clone()).solve_in_constants().is_none() {
            kept = trial;
        } else {
            i += 1;
        }
    }
    Some(diagram.with_equations(kept).compact())
}

/// Search limits for [`is_pure_bounded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundedSearch {
    pub max_vars: usize,
    pub max_eqs: usize,
    /// Maximum number of search nodes before giving up with `CapExceeded`.
    pub budget: usize,
}

impl BoundedSearch {
    pub const DEFAULT_BUDGET: usize = 50_000_000;

    pub fn new(max_vars: usize, max_eqs: usize) -> Self {
        BoundedSearch { max_vars, max_eqs, budget: Self::DEFAULT_BUDGET }
    }
}

/// An equation over variables `0..v` with constants from the subact, in a
/// form independent of any particular system.
#[derive(Debug, Clone, Copy)]
enum SmallEq {
    VarVar { x: usize, r: usize, y: usize, s: usize },
    VarConst { x: usize, r: usize, a: usize },
}

impl SmallEq {
    fn holds(&self, act: &Act, values: &[usize]) -> bool {
        match *self {
            SmallEq::VarVar { x, r, y, s } => act.act(values[x], r) == act.act(values[y], s),
            SmallEq::VarConst { x, r, a } => act.act(values[x], r) == a,
        }
    }
}

fn small_equations(vars: usize, n: usize, constants: &[usize]) -> Vec<SmallEq> {
    let terms: Vec<(usize, usize)> = (0..vars).flat_map(|x| (0..n).map(move |r| (x, r))).collect();
    let mut eqs = Vec::new();
    for (i, &(x, r)) in terms.iter().enumerate() {
        for &(y, s) in &terms[i + 1..] {
            eqs.push(SmallEq::VarVar { x, r, y, s });
        }
        for &a in constants {
            eqs.push(SmallEq::VarConst { x, r, a });
        }
    }
    eqs
}

fn tuples(base: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                base.iter().map(move |&b| {
                    let mut t = t.clone();
                    t.push(b);
                    t
                })
            })
            .collect();
    }
    out
}

type Bits = Vec<u64>;

fn bits_set(bits: &mut Bits, i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

/// Decides whether every system with at most `max_vars` variables and at
/// most `max_eqs` equations, with constants in `sub`, that is solvable in the
/// ambient act is also solvable in `sub`.
///
/// A system `Σ` is solvable in the ambient act iff it is satisfied by some
/// tuple `t`, i.e. `Σ ⊆ E(t)` where `E(t)` is the set of equations `t`
/// satisfies. `Σ` is unsolvable in `sub` iff for every tuple `u` over `sub` it
/// contains an equation outside `E(u)`. So a counterexample exists iff for
/// some `t` at most `max_eqs` equations of `E(t)` hit every `E(t) ∖ E(u)`, a
/// bounded hitting-set problem. Systems that differ only by renaming variables
/// are handled once, as the tuple ranges over all orders.
pub fn is_pure_bounded(sub: &Subact, limits: BoundedSearch) -> Result<bool> {
    if limits.max_vars == 0 || limits.max_eqs == 0 {
        return Err(Error::InvalidArgument("bounds must be at least 1".into()));
    }
    if sub.is_whole() {
        return Ok(true);
    }
    let ambient = sub.ambient();
    let n = ambient.monoid().order();
    let universe = small_equations(limits.max_vars, n, sub.members());
    let all: Vec<usize> = (0..ambient.size()).collect();
    let inner_tuples = tuples(sub.members(), limits.max_vars);
    let words = inner_tuples.len().div_ceil(64);
    let mut budget = limits.budget;
    let inner_sat: Vec<Vec<bool>> =
        inner_tuples.iter().map(|u| universe.iter().map(|e| e.holds(ambient, u)).collect()).collect();
    for t in tuples(&all, limits.max_vars) {
        // for each equation satisfied by t, the set of inner tuples it rules out
        let mut covers: BTreeSet<Bits> = BTreeSet::new();
        for (ei, e) in universe.iter().enumerate() {
            if !e.holds(ambient, &t) {
                continue;
            }
            let mut bits = vec![0u64; words];
            for (ui, sat) in inner_sat.iter().enumerate() {
                if !sat[ei] {
                    bits_set(&mut bits, ui);
                }
            }
            if bits.iter().any(|&w| w != 0) {
                covers.insert(bits);
            }
        }
        let covers = maximal_sets(covers.into_iter().collect());
        let full = full_bits(inner_tuples.len(), words);
        let mut covered = vec![0u64; words];
        if hitting(&covers, &full, &mut covered, limits.max_eqs, &mut budget)
            .map_err(|_| Error::CapExceeded { what: "bounded purity search".into(), cap: limits.budget })?
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn full_bits(len: usize, words: usize) -> Bits {
    let mut bits = vec![0u64; words];
    for i in 0..len {
        bits_set(&mut bits, i);
    }
    bits
}

fn is_subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn maximal_sets(sets: Vec<Bits>) -> Vec<Bits> {
    sets.iter().filter(|a| !sets.iter().any(|b| b != *a && is_subset(a, b))).cloned().collect()
}

/// Can `k` more sets from `covers` complete `covered` to `full`?
/// `Err(())` when the node budget runs out.
fn hitting(
    covers: &[Bits],
    full: &Bits,
    covered: &mut Bits,
    k: usize,
    budget: &mut usize,
) -> std::result::Result<bool, ()> {
    if *budget == 0 {
        return Err(());
    }
    *budget -= 1;
    let missing = full.iter().zip(covered.iter()).enumerate().find_map(|(w, (f, c))| {
        let m = f & !c;
        (m != 0).then(|| w * 64 + m.trailing_zeros() as usize)
    });
    let Some(missing) = missing else {
        return Ok(true);
    };
    if k == 0 {
        return Ok(false);
    }
    for set in covers {
        if set[missing / 64] >> (missing % 64) & 1 == 0 {
            continue;
        }
        let saved = covered.clone();
        for (c, s) in covered.iter_mut().zip(set) {
            *c |= s;
        }
        if hitting(covers, full, covered, k - 1, budget)? {
            return Ok(true);
        }
        *covered = saved;
    }
    Ok(false)
}

/// One round of the closure: the witness that forced growth and the solution
/// whose values were added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureStep {
    pub witness: EquationSystem,
    pub solution: Vec<usize>,
    pub added: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub seed: Vec<usize>,
    pub result: Subact,
    pub steps: Vec<ClosureStep>,
}

impl ClosureReport {
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }
}

/// A pure subact of `act` containing `seed`.
pub fn pure_closure(act: &Arc<Act>, seed: &[usize]) -> Result<Subact> {
    pure_closure_traced(act, seed).map(|r| r.result)
}

/// [`pure_closure`] with the sequence of witnesses and chosen solutions.
///
/// Starting from the subact generated by `seed`, each round takes the purity
/// witness of the current subact, picks the solution in `act` that introduces
/// the fewest new elements (ties broken by the sorted list of new elements),
/// and closes the union under the action.
pub fn pure_closure_traced(act: &Arc<Act>, seed: &[usize]) -> Result<ClosureReport> {
    let mut current = generated_subact(act, seed)?;
    let mut steps = Vec::new();
    while let Some(witness) = purity_witness(&current) {
        if steps.len() >= act.size() {
            return Err(Error::IterationLimit(act.size()));
        }
        let (solution, added) = fewest_new_solution(&witness, &current)
            .expect("witness is a subsystem of the diagram, which the ambient elements solve");
        let grown: Vec<usize> = current.members().iter().chain(&added).copied().collect();
        current = generated_subact(act, &grown)?;
        steps.push(ClosureStep { witness, solution, added });
    }
    let mut seed = seed.to_vec();
    seed.sort_unstable();
    seed.dedup();
    Ok(ClosureReport { seed, result: current, steps })
}

fn fewest_new_solution(witness: &EquationSystem, current: &Subact) -> Option<(Vec<usize>, Vec<usize>)> {
    let ambient = witness.ambient();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for_each_solution(witness, ambient, &witness.ambient_embedding(), |values| {
        let mut added: Vec<usize> = values.iter().copied().filter(|&v| !current.contains(v)).collect();
        added.sort_unstable();
        added.dedup();
        let better = match &best {
            None => true,
            Some((_, b)) => (added.len(), &added) < (b.len(), b),
        };
        if better {
            best = Some((values.to_vec(), added));
        }
        ControlFlow::Continue(())
    })
    .expect("inclusion is a hom");
    best
}

/// Largest act for which [`minimal_pure_superact_oracle`] scans subsets.
pub const SUBSET_SCAN_CAP: usize = 20;

/// The smallest pure subact containing `seed`, by scanning every subset.
/// Ties are broken by the sorted member list.
pub fn minimal_pure_superact_oracle(act: &Arc<Act>, seed: &[usize]) -> Result<Subact> {
    if act.size() > SUBSET_SCAN_CAP {
        return Err(Error::CapExceeded {
            what: format!("subset scan over {} elements", act.size()),
            cap: SUBSET_SCAN_CAP,
        });
    }
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    let m = act.size();
    let mut seed_mask = 0u32;
    for &a in seed {
        if a >= m {
            return Err(Error::OutOfRange { index: a, size: m });
        }
        seed_mask |= 1 << a;
    }
    let orbit_masks: Vec<u32> = (0..m).map(|a| act.row(a).iter().fold(0, |acc, &b| acc | 1 << b)).collect();
    let mut candidates: Vec<u32> = (1u32..(1 << m))
        .filter(|&s| s & seed_mask == seed_mask)
        .filter(|&s| (0..m).all(|a| s >> a & 1 == 0 || orbit_masks[a] & !s == 0))
        .collect();
    let members = |s: u32| (0..m).filter(move |&a| s >> a & 1 == 1).collect::<Vec<_>>();
    candidates.sort_by_key(|&s| (s.count_ones(), members(s)));
    for s in candidates {
        let sub = Subact::new(act.clone(), members(s))?;
        if is_pure(&sub).pure {
            return Ok(sub);
        }
    }
    unreachable!("the whole act is pure in itself")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::Term;
    use crate::fixtures;

    fn b() -> Arc<Act> {
        Arc::new(fixtures::b_act())
    }

    fn sub(members: &[usize]) -> Subact {
        Subact::new(b(), members.iter().copied()).unwrap()
    }

    #[test]
    fn whole_act_is_pure() {
        let v = is_pure(&sub(&[0, 1, 2]));
        assert!(v.pure);
        assert_eq!(v.retraction.unwrap().map(), &[0, 1, 2]);
        assert!(is_pure_via_diagram(&sub(&[0, 1, 2])).pure);
    }

    #[test]
    fn pq_is_not_pure() {
        assert!(!is_pure(&sub(&[0, 1])).pure);
        let v = is_pure_via_diagram(&sub(&[0, 1]));
        assert!(!v.pure);
        assert!(v.witness.is_some());
    }

    #[test]
    fn single_points_are_pure() {
        for p in [0, 1] {
            let v = is_pure(&sub(&[p]));
            assert!(v.pure);
            assert_eq!(v.retraction.unwrap().map(), &[0, 0, 0]);
            assert!(is_pure_via_diagram(&sub(&[p])).pure);
        }
    }

    #[test]
    fn trivial_monoid_subsets_are_pure() {
        let t = Arc::new(crate::algebra::Monoid::trivial());
        let set = Arc::new(Act::from_table("Set3", t, &[vec![0], vec![1], vec![2]]).unwrap());
        let v = is_pure_via_diagram(&Subact::new(set, [1]).unwrap());
        assert!(v.pure);
        assert_eq!(v.retraction.unwrap().map(), &[0, 0, 0]);
    }

    #[test]
    fn witness_for_pq() {
        let w = purity_witness(&sub(&[0, 1])).unwrap();
        assert_eq!(w.var_count(), 1);
        assert_eq!(w.equations().len(), 2);
        assert_eq!(w.equations()[0].rhs, Term::Const(0));
        assert_eq!(w.display_equations(), "x_u.r = @p\nx_u.s = @q\n");
        assert!(w.solve_in_ambient().is_some());
        assert!(w.solve_in_constants().is_none());
        assert!(purity_witness(&sub(&[1])).is_none());
        assert!(purity_witness(&sub(&[0, 1, 2])).is_none());
    }

    #[test]
    fn bounded_oracle() {
        assert!(is_pure_bounded(&sub(&[0, 1, 2]), BoundedSearch::new(1, 1)).unwrap());
        assert!(!is_pure_bounded(&sub(&[0, 1]), BoundedSearch::new(1, 2)).unwrap());
        assert!(is_pure_bounded(&sub(&[0, 1]), BoundedSearch::new(1, 1)).unwrap());
        assert!(is_pure_bounded(&sub(&[0]), BoundedSearch::new(2, 4)).unwrap());
        assert!(is_pure_bounded(&sub(&[0]), BoundedSearch::new(0, 4)).is_err());
        let tiny = BoundedSearch { budget: 1, ..BoundedSearch::new(1, 2) };
        assert!(matches!(is_pure_bounded(&sub(&[0, 1]), tiny), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(pure_closure(&b(), &[0, 1, 2]).unwrap().members(), &[0, 1, 2]);
        assert_eq!(pure_closure(&b(), &[0]).unwrap().members(), &[0]);
        let report = pure_closure_traced(&b(), &[0, 1]).unwrap();
        assert_eq!(report.result.members(), &[0, 1, 2]);
        assert_eq!(report.iterations(), 1);
        assert_eq!(report.steps[0].added, vec![2]);
        assert_eq!(pure_closure(&b(), &[]).unwrap_err(), Error::EmptySeed);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(minimal_pure_superact_oracle(&b(), &[0, 1]).unwrap().members(), &[0, 1, 2]);
        assert_eq!(minimal_pure_superact_oracle(&b(), &[0]).unwrap().members(), &[0]);
        assert_eq!(minimal_pure_superact_oracle(&b(), &[0, 1, 2]).unwrap().members(), &[0, 1, 2]);
        let t = Arc::new(crate::algebra::Monoid::trivial());
        let big = Arc::new(Act::from_table("Big", t, &(0..21).map(|i| vec![i]).collect::<Vec<_>>()).unwrap());
        assert!(matches!(minimal_pure_superact_oracle(&big, &[0]), Err(Error::CapExceeded { .. })));
    }
}

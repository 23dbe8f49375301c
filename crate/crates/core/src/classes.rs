//! Classes of acts defined by injectivity relative to a set of inclusions.
//!
//! Over a finite monoid every right ideal and every subact is finitely
//! generated and every finite act is finitely presented, so the classes below
//! range over all subacts `K` of the relevant acts `L`. Absolute purity quantifies
//! over all finitely presented `L`, which is unbounded, so it is exposed
//! with an explicit bound on `|L|`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{
    enumerate_homs, find_hom, generated_subact, is_isomorphic, product_act, Act, ActHom, Monoid, Subact,
};
use crate::enumeration::{enumerate_acts, enumerate_extensions, enumerate_subacts};
use crate::error::{Error, Result};
use crate::purity::is_pure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinKind {
    AllActs,
    /// Injective relative to principal right ideals `aS ⊆ S`.
    WeaklyPInjective,
    /// Injective relative to finitely generated right ideals `I ⊆ S`.
    WeaklyFInjective,
    /// Injective relative to `K ⊆ L` with `L` cyclic.
    AlmostPure,
    /// Injective relative to `K ⊆ L` with `|L| ≤ n`.
    AbsolutelyPureBounded(usize),
}

impl BuiltinKind {
    /// The four relative-injectivity kinds, with the given bound for absolute purity.
    pub fn injectivity_kinds(abs_bound: usize) -> [BuiltinKind; 4] {
        [
            BuiltinKind::WeaklyPInjective,
            BuiltinKind::WeaklyFInjective,
            BuiltinKind::AlmostPure,
            BuiltinKind::AbsolutelyPureBounded(abs_bound),
        ]
    }
}

impl fmt::Display for BuiltinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinKind::AllActs => write!(f, "all"),
            BuiltinKind::WeaklyPInjective => write!(f, "weakly-p-injective"),
            BuiltinKind::WeaklyFInjective => write!(f, "weakly-f-injective"),
            BuiltinKind::AlmostPure => write!(f, "almost-pure"),
            BuiltinKind::AbsolutelyPureBounded(n) => write!(f, "abs-pure:{n}"),
        }
    }
}

impl FromStr for BuiltinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => BuiltinKind::AllActs,
            "weakly-p-injective" => BuiltinKind::WeaklyPInjective,
            "weakly-f-injective" => BuiltinKind::WeaklyFInjective,
            "almost-pure" => BuiltinKind::AlmostPure,
            _ => {
                let n = s
                    .strip_prefix("abs-pure:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown class kind `{s}`")))?;
                BuiltinKind::AbsolutelyPureBounded(n)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActClass {
    Builtin(BuiltinKind),
    /// Acts isomorphic to one of the listed acts.
    Extensional(Vec<Arc<Act>>),
}

impl ActClass {
    /// An explicit list, deduplicated up to isomorphism.
    pub fn extensional(acts: Vec<Arc<Act>>) -> Result<Self> {
        let Some(first) = acts.first() else {
            return Err(Error::InvalidArgument("extensional class needs at least one act".into()));
        };
        let mut kept: Vec<Arc<Act>> = Vec::new();
        for act in &acts {
            if !act.same_monoid(first) {
                return Err(Error::MixedMonoids);
            }
            if !kept.iter().any(|k| is_isomorphic(k, act).unwrap_or(false)) {
                kept.push(act.clone());
            }
        }
        Ok(ActClass::Extensional(kept))
    }

    pub fn label(&self) -> String {
        match self {
            ActClass::Builtin(k) => k.to_string(),
            ActClass::Extensional(acts) => {
                format!("extensional[{}]", acts.iter().map(|a| a.name()).collect::<Vec<_>>().join(","))
            }
        }
    }
}

impl From<BuiltinKind> for ActClass {
    fn from(k: BuiltinKind) -> Self {
        ActClass::Builtin(k)
    }
}

/// An extension problem: the inclusion of `inner` into its ambient act.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionInstance {
    pub inner: Subact,
}

impl InclusionInstance {
    pub fn new(inner: Subact) -> Self {
        InclusionInstance { inner }
    }

    pub fn ambient(&self) -> &Arc<Act> {
        self.inner.ambient()
    }
}

/// A right congruence on a monoid, as the class index of every element.
/// Class indices are numbered in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RightCongruence {
    pub classes: Vec<usize>,
}

impl RightCongruence {
    pub fn class_count(&self) -> usize {
        self.classes.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.class_count()];
        for (x, &c) in self.classes.iter().enumerate() {
            blocks[c].push(x);
        }
        blocks
    }
}

/// Right ideals of `monoid` as subacts of the right regular act, ordered by
/// size and then member list.
pub fn right_ideal_acts(monoid: &Arc<Monoid>, principal_only: bool) -> Vec<Subact> {
    let regular = Arc::new(Act::regular(monoid.clone()));
    if principal_only {
        let mut ideals: Vec<Subact> =
            (0..monoid.order()).map(|a| generated_subact(&regular, &[a]).expect("nonempty seed")).collect();
        ideals.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.members().cmp(y.members())));
        ideals.dedup();
        ideals
    } else {
        enumerate_subacts(&regular).expect("monoid orders are small")
    }
}

fn restricted_growth_strings(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, max: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            go(prefix, max.max(c), k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(&mut vec![0], 0, k, &mut out);
    }
    out
}

/// Every right congruence of `monoid` with its quotient act, ordered by
/// decreasing number of classes and then by class vector.
pub fn cyclic_acts(monoid: &Arc<Monoid>) -> Vec<(RightCongruence, Act)> {
    let k = monoid.order();
    let mut found: Vec<RightCongruence> = restricted_growth_strings(k)
        .into_iter()
        .filter(|c| {
            (0..k).all(|x| (0..k).all(|y| c[x] != c[y] || (0..k).all(|s| c[monoid.mul(x, s)] == c[monoid.mul(y, s)])))
        })
        .map(|classes| RightCongruence { classes })
        .collect();
    found.sort_by(|a, b| b.class_count().cmp(&a.class_count()).then_with(|| a.classes.cmp(&b.classes)));
    found
        .into_iter()
        .enumerate()
        .map(|(idx, rho)| {
            let blocks = rho.blocks();
            let labels =
                blocks.iter().map(|b| b.iter().map(|&x| monoid.label(x)).collect::<Vec<_>>().join("~")).collect();
            let table: Vec<Vec<usize>> =
                blocks.iter().map(|b| (0..k).map(|s| rho.classes[monoid.mul(b[0], s)]).collect()).collect();
            let act = Act::new(format!("{}_cyc{idx}", monoid.name()), monoid.clone(), labels, &table)
                .expect("quotient by a right congruence is an act");
            (rho, act)
        })
        .collect()
}

/// A hom from an inner subact into the tested act that admits no extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityFailure {
    pub instance: InclusionInstance,
    /// Defined on [`Subact::as_act`] of the instance's inner subact.
    pub hom: ActHom,
}

/// First instance and hom `h: K → A` with no extension `L → A`, or `None`
/// when `act` is injective relative to every instance.
pub fn relative_injectivity_failure(
    act: &Arc<Act>,
    instances: &[InclusionInstance],
) -> Result<Option<InjectivityFailure>> {
    for instance in instances {
        let inner = &instance.inner;
        if inner.is_whole() {
            continue;
        }
        if !inner.ambient().same_monoid(act) {
            return Err(Error::MixedMonoids);
        }
        let k_act = Arc::new(inner.as_act());
        for h in enumerate_homs(&k_act, act, &[])? {
            let pins: Vec<(usize, usize)> = inner.members().iter().zip(h.map()).map(|(&k, &v)| (k, v)).collect();
            if find_hom(inner.ambient(), act, &pins)?.is_none() {
                return Ok(Some(InjectivityFailure { instance: instance.clone(), hom: h }));
            }
        }
    }
    Ok(None)
}

pub fn is_relatively_injective(act: &Arc<Act>, instances: &[InclusionInstance]) -> Result<bool> {
    Ok(relative_injectivity_failure(act, instances)?.is_none())
}

/// The inclusions defining a builtin kind over `monoid`.
pub fn builtin_instances(kind: BuiltinKind, monoid: &Arc<Monoid>) -> Result<Vec<InclusionInstance>> {
    let proper = |subs: Vec<Subact>| subs.into_iter().filter(|s| !s.is_whole()).map(InclusionInstance::new);
    Ok(match kind {
        BuiltinKind::AllActs => Vec::new(),
        BuiltinKind::WeaklyPInjective => proper(right_ideal_acts(monoid, true)).collect(),
        BuiltinKind::WeaklyFInjective => proper(right_ideal_acts(monoid, false)).collect(),
        BuiltinKind::AlmostPure => {
            let mut out = Vec::new();
            for (_, l) in cyclic_acts(monoid) {
                out.extend(proper(enumerate_subacts(&Arc::new(l))?));
            }
            out
        }
        BuiltinKind::AbsolutelyPureBounded(n) => {
            if n == 0 {
                return Err(Error::InvalidArgument("absolute purity bound must be at least 1".into()));
            }
            let mut out = Vec::new();
            for m in 1..=n {
                for l in enumerate_acts(monoid, m)? {
                    out.extend(proper(enumerate_subacts(&Arc::new(l))?));
                }
            }
            out
        }
    })
}

/// Membership test for one class over one monoid, with the inclusion
/// instances computed once.
#[derive(Debug, Clone)]
pub struct ClassTester {
    class: ActClass,
    monoid: Arc<Monoid>,
    instances: Vec<InclusionInstance>,
}

impl ClassTester {
    pub fn new(class: &ActClass, monoid: &Arc<Monoid>) -> Result<Self> {
        let instances = match class {
            ActClass::Builtin(kind) => builtin_instances(*kind, monoid)?,
            ActClass::Extensional(acts) => {
                if acts.iter().any(|a| !a.monoid().same_structure(monoid)) {
                    return Err(Error::MixedMonoids);
                }
                Vec::new()
            }
        };
        Ok(ClassTester { class: class.clone(), monoid: monoid.clone(), instances })
    }

    pub fn class(&self) -> &ActClass {
        &self.class
    }

    pub fn instances(&self) -> &[InclusionInstance] {
        &self.instances
    }

    pub fn contains(&self, act: &Arc<Act>) -> Result<bool> {
        if !act.monoid().same_structure(&self.monoid) {
            return Err(Error::MixedMonoids);
        }
        match &self.class {
            ActClass::Builtin(_) => is_relatively_injective(act, &self.instances),
            ActClass::Extensional(members) => {
                for m in members {
                    if is_isomorphic(m, act)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// For builtin kinds, the first failing extension problem.
    pub fn failure(&self, act: &Arc<Act>) -> Result<Option<InjectivityFailure>> {
        if !act.monoid().same_structure(&self.monoid) {
            return Err(Error::MixedMonoids);
        }
        relative_injectivity_failure(act, &self.instances)
    }
}

pub fn class_contains(class: &ActClass, act: &Arc<Act>) -> Result<bool> {
    ClassTester::new(class, act.monoid())?.contains(act)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureCounterexample {
    /// Indices into the scope of two members whose product is outside the class.
    Product { left: usize, right: usize },
    /// A pure subact of a member that is outside the class.
    PureSubact { member: usize, subact: Subact },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub product_closed: bool,
    pub pure_subact_closed: bool,
    pub members_in_scope: usize,
    pub counterexamples: Vec<ClosureCounterexample>,
}

/// Checks closure of `class` under binary products and pure subacts, over the
/// members of `scope` that belong to it.
pub fn check_class_closure(class: &ActClass, scope: &[Arc<Act>], cap: usize) -> Result<ClosureReport> {
    let Some(first) = scope.first() else {
        return Ok(ClosureReport {
            product_closed: true,
            pure_subact_closed: true,
            members_in_scope: 0,
            counterexamples: Vec::new(),
        });
    };
    if scope.iter().any(|a| !a.same_monoid(first)) {
        return Err(Error::MixedMonoids);
    }
    let tester = ClassTester::new(class, first.monoid())?;
    let flags: Vec<bool> = scope.par_iter().map(|a| tester.contains(a)).collect::<Result<_>>()?;
    let members: Vec<usize> = (0..scope.len()).filter(|&i| flags[i]).collect();

    let pairs: Vec<(usize, usize)> =
        members.iter().enumerate().flat_map(|(k, &i)| members[k..].iter().map(move |&j| (i, j))).collect();
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| scope[i].size() * scope[j].size() > cap) {
        return Err(Error::TooLarge { size: (scope[i].size() * scope[j].size()) as u128, cap });
    }
    let product_failures: Vec<Option<ClosureCounterexample>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let p = Arc::new(product_act(&[scope[i].clone(), scope[j].clone()], cap)?);
            Ok((!tester.contains(&p)?).then_some(ClosureCounterexample::Product { left: i, right: j }))
        })
        .collect::<Result<_>>()?;

    let subact_failures: Vec<Vec<ClosureCounterexample>> = members
        .par_iter()
        .map(|&i| {
            let mut bad = Vec::new();
            for sub in enumerate_subacts(&scope[i])? {
                if sub.is_whole() || !is_pure(&sub).pure {
                    continue;
                }
                if !tester.contains(&Arc::new(sub.as_act()))? {
                    bad.push(ClosureCounterexample::PureSubact { member: i, subact: sub });
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;

    let mut counterexamples: Vec<ClosureCounterexample> = product_failures.into_iter().flatten().collect();
    let product_closed = counterexamples.is_empty();
    let subact_failures: Vec<ClosureCounterexample> = subact_failures.into_iter().flatten().collect();
    let pure_subact_closed = subact_failures.is_empty();
    counterexamples.extend(subact_failures);
    Ok(ClosureReport { product_closed, pure_subact_closed, members_in_scope: members.len(), counterexamples })
}

/// Whether `act` is pure in every extension by at most `extra` new elements.
pub fn is_pure_in_all_extensions(act: &Act, extra: usize) -> Result<bool> {
    for e in 1..=extra {
        for sub in enumerate_extensions(act, e)? {
            if !is_pure(&sub).pure {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn members(subs: &[Subact]) -> Vec<Vec<usize>> {
        subs.iter().map(|s| s.members().to_vec()).collect()
    }

    #[test]
    fn ideals_of_small_monoids() {
        let t = Arc::new(Monoid::trivial());
        assert_eq!(members(&right_ideal_acts(&t, false)), vec![vec![0]]);
        assert_eq!(members(&right_ideal_acts(&t, true)), vec![vec![0]]);
        let e = fixtures::idempotent_monoid();
        assert_eq!(members(&right_ideal_acts(&e, true)), vec![vec![1], vec![0, 1]]);
        assert_eq!(members(&right_ideal_acts(&e, false)), vec![vec![1], vec![0, 1]]);
        let s3 = fixtures::left_zero_with_identity();
        assert_eq!(members(&right_ideal_acts(&s3, true)), vec![vec![1], vec![2], vec![0, 1, 2]]);
        assert_eq!(members(&right_ideal_acts(&s3, false)), vec![vec![1], vec![2], vec![1, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn congruences() {
        assert_eq!(cyclic_acts(&Arc::new(Monoid::trivial())).len(), 1);
        let e = cyclic_acts(&fixtures::idempotent_monoid());
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].1.size(), 2);
        assert_eq!(e[1].1.size(), 1);
        let s3 = cyclic_acts(&fixtures::left_zero_with_identity());
        let classes: Vec<Vec<usize>> = s3.iter().map(|(r, _)| r.classes.clone()).collect();
        assert_eq!(classes, vec![vec![0, 1, 2], vec![0, 1, 1], vec![0, 0, 0]]);
        assert_eq!(s3[1].1.labels(), &["1".to_string(), "r~s".to_string()]);
    }

    #[test]
    fn two_fixed_points_injectivity() {
        let a = Arc::new(fixtures::two_fixed_points());
        assert!(is_relatively_injective(&a, &[]).unwrap());
        let s3 = fixtures::left_zero_with_identity();
        let regular = Arc::new(Act::regular(s3));
        let rs = InclusionInstance::new(Subact::new(regular.clone(), [1, 2]).unwrap());
        let failure = relative_injectivity_failure(&a, &[rs]).unwrap().unwrap();
        assert_eq!(failure.hom.map(), &[0, 1]);
        let r = InclusionInstance::new(Subact::new(regular, [1]).unwrap());
        assert!(is_relatively_injective(&a, &[r]).unwrap());
    }

    #[test]
    fn class_membership_examples() {
        let a = Arc::new(fixtures::two_fixed_points());
        assert!(class_contains(&BuiltinKind::AllActs.into(), &a).unwrap());
        assert!(class_contains(&BuiltinKind::WeaklyPInjective.into(), &a).unwrap());
        assert!(!class_contains(&BuiltinKind::WeaklyFInjective.into(), &a).unwrap());
        assert!(!class_contains(&BuiltinKind::AlmostPure.into(), &a).unwrap());
        let other = Arc::new(Act::singleton(fixtures::idempotent_monoid()));
        let cls = ActClass::extensional(vec![other]).unwrap();
        assert_eq!(class_contains(&cls, &a).unwrap_err(), Error::MixedMonoids);
    }

    #[test]
    fn kind_strings() {
        for k in [
            BuiltinKind::AllActs,
            BuiltinKind::WeaklyPInjective,
            BuiltinKind::WeaklyFInjective,
            BuiltinKind::AlmostPure,
            BuiltinKind::AbsolutelyPureBounded(3),
        ] {
            assert_eq!(k.to_string().parse::<BuiltinKind>().unwrap(), k);
        }
        assert!("abs-pure:0".parse::<BuiltinKind>().is_err());
        assert!("injective".parse::<BuiltinKind>().is_err());
    }

    #[test]
    fn closure_examples() {
        let e = fixtures::idempotent_monoid();
        let theta = Arc::new(Act::singleton(e.clone()));
        let cls = ActClass::extensional(vec![theta.clone()]).unwrap();
        let report = check_class_closure(&cls, &[theta], 100).unwrap();
        assert!(report.product_closed && report.pure_subact_closed);

        let mut scope = Vec::new();
        for m in 1..=2 {
            scope.extend(enumerate_acts(&e, m).unwrap().into_iter().map(Arc::new));
        }
        let report = check_class_closure(&BuiltinKind::WeaklyPInjective.into(), &scope, 100).unwrap();
        assert!(report.product_closed && report.pure_subact_closed);
        assert_eq!(report.members_in_scope, 3);

        let reg = Arc::new(Act::regular(fixtures::left_zero_with_identity()));
        let cls = ActClass::extensional(vec![reg.clone()]).unwrap();
        let report = check_class_closure(&cls, std::slice::from_ref(&reg), 100).unwrap();
        assert!(!report.product_closed);
        assert_eq!(report.counterexamples[0], ClosureCounterexample::Product { left: 0, right: 0 });
        assert!(matches!(check_class_closure(&cls, &[reg], 5), Err(Error::TooLarge { size: 9, cap: 5 })));
    }
}

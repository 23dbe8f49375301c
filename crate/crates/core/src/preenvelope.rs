//! Preenvelopes: the product construction, reduction to a pure subact of the
//! product, and bounded verification of the factoring property.

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{
    checked_product, enumerate_homs, find_hom, least_hom, product_act, Act, ActHom, MixedRadix, Monoid, Subact,
};
use crate::classes::{ActClass, ClassTester};
use crate::enumeration::enumerate_acts;
use crate::error::{Error, Result};
use crate::purity::pure_closure;

/// One factor of a product preenvelope: a class member and a map into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    pub target: Arc<Act>,
    pub hom: ActHom,
}

/// A product of acts kept as its factors. Elements are index tuples and the
/// action is componentwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyProductAct {
    source: Arc<Act>,
    coordinates: Vec<Coordinate>,
}

impl LazyProductAct {
    pub fn new(source: Arc<Act>, coordinates: Vec<Coordinate>) -> Result<Self> {
        for c in &coordinates {
            if !c.target.same_monoid(&source) {
                return Err(Error::MixedMonoids);
            }
            if c.hom.source().as_ref() != source.as_ref() || c.hom.target().as_ref() != c.target.as_ref() {
                return Err(Error::InvalidArgument("coordinate hom does not match its factor".into()));
            }
        }
        Ok(LazyProductAct { source, coordinates })
    }

    pub fn source(&self) -> &Arc<Act> {
        &self.source
    }

    pub fn coordinates(&self) -> &[Coordinate] {
        &self.coordinates
    }

    pub fn factors(&self) -> Vec<Arc<Act>> {
        self.coordinates.iter().map(|c| c.target.clone()).collect()
    }

    /// Number of elements, saturating.
    pub fn size(&self) -> u128 {
        checked_product(&self.coordinates.iter().map(|c| c.target.size()).collect::<Vec<_>>())
    }

    pub fn act(&self, tuple: &[usize], s: usize) -> Vec<usize> {
        tuple.iter().zip(&self.coordinates).map(|(&x, c)| c.target.act(x, s)).collect()
    }

    /// The image of `a` under the diagonal map into the product.
    pub fn embed(&self, a: usize) -> Vec<usize> {
        self.coordinates.iter().map(|c| c.hom.apply(a)).collect()
    }

    pub fn project(&self, k: usize, tuple: &[usize]) -> usize {
        tuple[k]
    }

    /// Builds the product table, returning it together with the diagonal map.
    pub fn materialize(&self, cap: usize) -> Result<(Arc<Act>, ActHom)> {
        if self.coordinates.is_empty() {
            return Err(Error::InvalidArgument("product has no coordinates".into()));
        }
        let product = Arc::new(product_act(&self.factors(), cap)?);
        let radix = MixedRadix::new(self.coordinates.iter().map(|c| c.target.size()).collect());
        let map = (0..self.source.size()).map(|a| radix.encode(&self.embed(a))).collect();
        let phi = ActHom::new_unchecked(self.source.clone(), product.clone(), map);
        Ok((product, phi))
    }
}

/// For coordinate `coordinate`, the values of the projection composed with
/// the diagonal map, together with whether they agree with the coordinate hom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionCertificate {
    pub coordinate: usize,
    pub values: Vec<usize>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPreenvelope {
    pub product: LazyProductAct,
    pub representatives: Vec<Arc<Act>>,
    pub certificates: Vec<ProjectionCertificate>,
}

impl ProductPreenvelope {
    /// Diagonal image of every source element, as tuples.
    pub fn phi(&self) -> Vec<Vec<usize>> {
        (0..self.product.source.size()).map(|a| self.product.embed(a)).collect()
    }
}

/// Class members over `monoid` of size at most `bound`, one per isomorphism
/// type, ordered by size.
pub fn class_representatives(class: &ActClass, monoid: &Arc<Monoid>, bound: usize) -> Result<Vec<Arc<Act>>> {
    representatives_with(&ClassTester::new(class, monoid)?, monoid, bound)
}

fn representatives_with(tester: &ClassTester, monoid: &Arc<Monoid>, bound: usize) -> Result<Vec<Arc<Act>>> {
    match tester.class() {
        ActClass::Extensional(members) => {
            let mut reps: Vec<Arc<Act>> = members.iter().filter(|a| a.size() <= bound).cloned().collect();
            reps.sort_by_key(|a| a.size());
            Ok(reps)
        }
        ActClass::Builtin(_) => {
            let mut reps = Vec::new();
            for m in 1..=bound {
                for act in enumerate_acts(monoid, m)? {
                    let act = Arc::new(act);
                    if tester.contains(&act)? {
                        reps.push(act);
                    }
                }
            }
            Ok(reps)
        }
    }
}

/// The diagonal map from `act` into the product of all class members of
/// size at most `rep_bound`, indexed by every hom into them.
pub fn product_preenvelope(act: &Arc<Act>, class: &ActClass, rep_bound: usize) -> Result<ProductPreenvelope> {
    let representatives = class_representatives(class, act.monoid(), rep_bound)?;
    let mut coordinates = Vec::new();
    for rep in &representatives {
        for hom in enumerate_homs(act, rep, &[])? {
            coordinates.push(Coordinate { target: rep.clone(), hom });
        }
    }
    if coordinates.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no homs from `{}` into members of {} of size at most {rep_bound}",
            act.name(),
            class.label()
        )));
    }
    let product = LazyProductAct::new(act.clone(), coordinates)?;
    let certificates = product
        .coordinates
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let values: Vec<usize> = (0..act.size()).map(|a| product.project(k, &product.embed(a))).collect();
            let holds = values == c.hom.map();
            ProjectionCertificate { coordinate: k, values, holds }
        })
        .collect();
    Ok(ProductPreenvelope { product, representatives, certificates })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub product: Arc<Act>,
    /// The image of the diagonal map in `product`.
    pub image: Subact,
    /// A pure subact of `product` containing `image`.
    pub closure: Subact,
    pub reduced: Arc<Act>,
    /// The corestriction of the diagonal map to `reduced`.
    pub phi: ActHom,
}

/// Materializes the product and replaces it by a pure subact containing the
/// image of the diagonal map.
pub fn reduce_via_pure_closure(pre: &ProductPreenvelope, cap: usize) -> Result<Reduction> {
    let (product, diagonal) = pre.product.materialize(cap)?;
    let image = diagonal.image();
    let closure = pure_closure(&product, image.members())?;
    let reduced = Arc::new(closure.as_act());
    let map = diagonal.map().iter().map(|&x| closure.position(x).expect("closure contains the image")).collect();
    let phi = ActHom::new_unchecked(pre.product.source.clone(), reduced.clone(), map);
    Ok(Reduction { product, image, closure, reduced, phi })
}

/// A map `g` with `g∘φ = f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoringCertificate {
    pub target: Arc<Act>,
    pub f: ActHom,
    pub g: ActHom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoringCounterexample {
    pub target: Arc<Act>,
    pub f: ActHom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoringReport {
    pub candidate: ActHom,
    pub class: ActClass,
    pub verify_bound: usize,
    pub verified: bool,
    pub counterexample: Option<FactoringCounterexample>,
    pub certificates: Vec<FactoringCertificate>,
}

fn factor_through(phi: &ActHom, f: &ActHom) -> Option<ActHom> {
    let pins: Vec<(usize, usize)> = phi.map().iter().copied().zip(f.map().iter().copied()).collect();
    find_hom(phi.target(), f.target(), &pins).expect("maps share the monoid")
}

/// Checks that every hom from the source of `phi` into a class member of size
/// at most `verify_bound` factors through `phi`.
pub fn verify_preenvelope(phi: &ActHom, class: &ActClass, verify_bound: usize) -> Result<FactoringReport> {
    let source = phi.source();
    let tester = ClassTester::new(class, source.monoid())?;
    if !tester.contains(phi.target())? {
        return Err(Error::TargetNotInClass);
    }
    let reps = representatives_with(&tester, source.monoid(), verify_bound)?;
    let per_rep: Vec<Vec<(ActHom, Option<ActHom>)>> = reps
        .par_iter()
        .map(|rep| {
            Ok(enumerate_homs(source, rep, &[])?
                .into_iter()
                .map(|f| {
                    let g = factor_through(phi, &f);
                    (f, g)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut certificates = Vec::new();
    let mut counterexample = None;
    'outer: for (rep, results) in reps.iter().zip(per_rep) {
        for (f, g) in results {
            match g {
                Some(g) => certificates.push(FactoringCertificate { target: rep.clone(), f, g }),
                None => {
                    counterexample = Some(FactoringCounterexample { target: rep.clone(), f });
                    break 'outer;
                }
            }
        }
    }
    Ok(FactoringReport {
        candidate: phi.clone(),
        class: class.clone(),
        verify_bound,
        verified: counterexample.is_none(),
        counterexample,
        certificates,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeReport {
    pub preenvelope: FactoringReport,
    /// An endomorphism `g` of the target with `g∘φ = φ` that is not bijective.
    pub non_bijective_endo: Option<ActHom>,
    pub verified: bool,
}

/// [`verify_preenvelope`], plus the requirement that every endomorphism fixing
/// `φ` is an automorphism.
pub fn verify_envelope(phi: &ActHom, class: &ActClass, verify_bound: usize) -> Result<EnvelopeReport> {
    let preenvelope = verify_preenvelope(phi, class, verify_bound)?;
    let target = phi.target();
    let pins: Vec<(usize, usize)> = phi.map().iter().map(|&c| (c, c)).collect();
    let non_bijective_endo = enumerate_homs(target, target, &pins)?.into_iter().find(|g| !g.is_bijective());
    let verified = preenvelope.verified && non_bijective_endo.is_none();
    Ok(EnvelopeReport { preenvelope, non_bijective_endo, verified })
}

/// The lexicographically least `g` with `g∘φ = id`.
pub fn extract_retraction(phi: &ActHom) -> Option<ActHom> {
    let pins: Vec<(usize, usize)> = phi.map().iter().enumerate().map(|(a, &c)| (c, a)).collect();
    least_hom(phi.target(), phi.source(), &pins).expect("maps share the monoid")
}

/// Scans class members of size at most `target_bound` (by size, then
/// enumeration order) and homs into each (lexicographically), returning the
/// first that verifies at `verify_bound`.
pub fn find_min_preenvelope(
    act: &Arc<Act>,
    class: &ActClass,
    target_bound: usize,
    verify_bound: usize,
) -> Result<Option<(ActHom, FactoringReport)>> {
    if target_bound == 0 || verify_bound == 0 {
        return Err(Error::InvalidArgument("bounds must be at least 1".into()));
    }
    for candidate in class_representatives(class, act.monoid(), target_bound)? {
        let mut found = None;
        for phi in enumerate_homs(act, &candidate, &[])? {
            let report = verify_preenvelope(&phi, class, verify_bound)?;
            if report.verified {
                found = Some((phi, report));
                break;
            }
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_PRODUCT_CAP;
    use crate::classes::BuiltinKind;
    use crate::fixtures;
    use crate::purity::is_pure;

    fn inclusion_pq() -> ActHom {
        let b = Arc::new(fixtures::b_act());
        let a = Arc::new(fixtures::two_fixed_points());
        ActHom::new(a, b, vec![0, 1]).unwrap()
    }

    #[test]
    fn identity_verifies_for_all_acts() {
        let a = Arc::new(fixtures::two_fixed_points());
        let id = ActHom::identity(a);
        let report = verify_preenvelope(&id, &BuiltinKind::AllActs.into(), 3).unwrap();
        assert!(report.verified);
        for c in &report.certificates {
            assert_eq!(c.g.map(), c.f.map());
        }
        assert!(verify_envelope(&id, &BuiltinKind::AllActs.into(), 2).unwrap().verified);
    }

    #[test]
    fn theta_class() {
        let a = Arc::new(fixtures::b_act());
        let theta = Arc::new(Act::singleton(a.monoid().clone()));
        let cls = ActClass::extensional(vec![theta.clone()]).unwrap();
        let phi = ActHom::new(a.clone(), theta.clone(), vec![0; 3]).unwrap();
        assert!(verify_preenvelope(&phi, &cls, 3).unwrap().verified);
        assert!(verify_envelope(&phi, &cls, 3).unwrap().verified);
        let pre = product_preenvelope(&a, &cls, 3).unwrap();
        assert_eq!(pre.product.coordinates().len(), 1);
        let red = reduce_via_pure_closure(&pre, DEFAULT_PRODUCT_CAP).unwrap();
        assert_eq!(red.reduced.size(), 1);
        let (found, _) = find_min_preenvelope(&a, &cls, 3, 3).unwrap().unwrap();
        assert_eq!(found.target().size(), 1);
    }

    #[test]
    fn inclusion_into_b_is_not_a_preenvelope() {
        let phi = inclusion_pq();
        let report = verify_preenvelope(&phi, &BuiltinKind::WeaklyPInjective.into(), 3).unwrap();
        assert!(!report.verified);
        let cx = report.counterexample.unwrap();
        assert!(cx.f.is_bijective());
        assert!(extract_retraction(&phi).is_none());
        assert_eq!(
            verify_preenvelope(&phi, &BuiltinKind::WeaklyFInjective.into(), 3).unwrap_err(),
            Error::TargetNotInClass
        );
    }

    #[test]
    fn product_over_b() {
        let a = Arc::new(fixtures::two_fixed_points());
        let b = Arc::new(fixtures::b_act());
        let cls = ActClass::extensional(vec![b]).unwrap();
        let pre = product_preenvelope(&a, &cls, 3).unwrap();
        assert_eq!(pre.product.coordinates().len(), 4);
        assert_eq!(pre.product.size(), 81);
        assert!(pre.certificates.iter().all(|c| c.holds));
        assert_eq!(pre.phi(), vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]);
        let red = reduce_via_pure_closure(&pre, DEFAULT_PRODUCT_CAP).unwrap();
        assert!(is_pure(&red.closure).pure);
        assert_eq!(red.image.len(), 2);
        assert!(red.image.members().iter().all(|&x| red.closure.contains(x)));
        assert!(matches!(reduce_via_pure_closure(&pre, 80), Err(Error::TooLarge { size: 81, cap: 80 })));
    }

    #[test]
    fn min_preenvelope_of_class_member() {
        let a = Arc::new(fixtures::two_fixed_points());
        let (phi, report) = find_min_preenvelope(&a, &BuiltinKind::WeaklyPInjective.into(), 2, 3).unwrap().unwrap();
        assert!(report.verified);
        assert!(phi.is_bijective());
        let (phi, _) = find_min_preenvelope(&a, &BuiltinKind::AllActs.into(), 3, 2).unwrap().unwrap();
        assert!(phi.is_bijective());
    }

    #[test]
    fn theta_into_two_points_is_not_an_envelope() {
        let e = fixtures::idempotent_monoid();
        let theta = Arc::new(Act::singleton(e.clone()));
        let two = Arc::new(Act::from_table("T2", e, &[vec![0, 0], vec![1, 1]]).unwrap());
        let phi = ActHom::new(theta, two, vec![0]).unwrap();
        let report = verify_envelope(&phi, &BuiltinKind::AllActs.into(), 2).unwrap();
        assert!(report.preenvelope.verified);
        assert!(!report.verified);
        assert_eq!(report.non_bijective_endo.unwrap().map(), &[0, 0]);
    }

    #[test]
    fn retraction_from_theta() {
        let b = Arc::new(fixtures::b_act());
        let theta = Arc::new(Act::singleton(b.monoid().clone()));
        let phi = ActHom::new(theta, b, vec![0]).unwrap();
        assert_eq!(extract_retraction(&phi).unwrap().map(), &[0, 0, 0]);
    }
}

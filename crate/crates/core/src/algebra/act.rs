use std::sync::Arc;

use super::monoid::{check_labels, Monoid};
use crate::error::{Error, Result};

/// Default cap on the number of elements of a materialized product.
pub const DEFAULT_PRODUCT_CAP: usize = 10_000;

/// A finite right act over a [`Monoid`].
///
/// `act(a, s)` is the index of `a·s`. Acts are nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Act {
    name: String,
    monoid: Arc<Monoid>,
    labels: Vec<String>,
    action: Vec<usize>,
}

impl Act {
    /// Validates an action table (`table[a][s]` = index of `a·s`).
    ///
    /// Fails with [`Error::IdentityAxiom`] or [`Error::AssociativityAxiom`] at the
    /// lexicographically first violation.
    pub fn new(
        name: impl Into<String>,
        monoid: Arc<Monoid>,
        labels: Vec<String>,
        table: &[Vec<usize>],
    ) -> Result<Self> {
        let m = table.len();
        let n = monoid.order();
        if m == 0 {
            return Err(Error::EmptyAct);
        }
        if labels.len() != m {
            return Err(Error::Shape(format!("{} labels for act of size {m}", labels.len())));
        }
        check_labels(&labels)?;
        let mut action = Vec::with_capacity(m * n);
        for row in table {
            if row.len() != n {
                return Err(Error::Shape(format!("row of length {} over monoid of order {n}", row.len())));
            }
            for &x in row {
                if x >= m {
                    return Err(Error::OutOfRange { index: x, size: m });
                }
                action.push(x);
            }
        }
        let act = Act { name: name.into(), monoid, labels, action };
        act.check_axioms()?;
        Ok(act)
    }

    /// Builds an act with labels `x0`, `x1`, ...
    pub fn from_table(name: impl Into<String>, monoid: Arc<Monoid>, table: &[Vec<usize>]) -> Result<Self> {
        let labels = default_labels(table.len());
        Self::new(name, monoid, labels, table)
    }

    /// Builds from a flat row-major table without re-checking the axioms.
    pub(crate) fn from_flat_unchecked(
        name: String,
        monoid: Arc<Monoid>,
        labels: Vec<String>,
        action: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(action.len(), labels.len() * monoid.order());
        Act { name, monoid, labels, action }
    }

    /// The one-element act.
    pub fn singleton(monoid: Arc<Monoid>) -> Self {
        let n = monoid.order();
        Act { name: "Theta".into(), monoid, labels: vec!["t".into()], action: vec![0; n] }
    }

    /// The monoid acting on itself by right multiplication.
    pub fn regular(monoid: Arc<Monoid>) -> Self {
        let n = monoid.order();
        let action = (0..n).flat_map(|a| (0..n).map(move |s| (a, s))).map(|(a, s)| monoid.mul(a, s)).collect();
        Act { name: format!("{}_reg", monoid.name()), labels: monoid.labels().to_vec(), monoid, action }
    }

    fn check_axioms(&self) -> Result<()> {
        let e = self.monoid.identity();
        for a in 0..self.size() {
            if self.act(a, e) != a {
                return Err(Error::IdentityAxiom(a));
            }
        }
        let n = self.monoid.order();
        for a in 0..self.size() {
            for s in 0..n {
                let as_ = self.act(a, s);
                for t in 0..n {
                    if self.act(as_, t) != self.act(a, self.monoid.mul(s, t)) {
                        return Err(Error::AssociativityAxiom(a, s, t));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::Shape(format!("{} labels for act of size {}", labels.len(), self.size())));
        }
        check_labels(&labels)?;
        self.labels = labels;
        Ok(self)
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn act(&self, a: usize, s: usize) -> usize {
        self.action[a * self.monoid.order() + s]
    }

    /// The row `a·s` for all `s`.
    pub fn row(&self, a: usize) -> &[usize] {
        let n = self.monoid.order();
        &self.action[a * n..(a + 1) * n]
    }

    pub fn flat_table(&self) -> &[usize] {
        &self.action
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.action.chunks(self.monoid.order()).map(<[usize]>::to_vec).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn same_monoid(&self, other: &Act) -> bool {
        Arc::ptr_eq(&self.monoid, &other.monoid) || self.monoid.same_structure(&other.monoid)
    }

    /// Equality of the action tables over the same monoid, ignoring names and labels.
    pub fn same_structure(&self, other: &Act) -> bool {
        self.same_monoid(other) && self.action == other.action
    }

    /// Elements fixed by every scalar.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.size()).filter(|&a| self.row(a).iter().all(|&b| b == a)).collect()
    }

    /// Bitmask-free orbit `a·S` in ascending order.
    pub fn orbit(&self, a: usize) -> Vec<usize> {
        let mut v = self.row(a).to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub(crate) fn default_labels(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("x{i}")).collect()
}

/// A nonempty subset of an act closed under the action.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subact {
    ambient: Arc<Act>,
    members: Vec<usize>,
}

impl Subact {
    /// Checks closure; members may be given in any order and with repeats.
    pub fn new(ambient: Arc<Act>, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptySeed);
        }
        if let Some(&bad) = members.iter().find(|&&a| a >= ambient.size()) {
            return Err(Error::OutOfRange { index: bad, size: ambient.size() });
        }
        let mut inside = vec![false; ambient.size()];
        for &a in &members {
            inside[a] = true;
        }
        for &a in &members {
            for (s, &b) in ambient.row(a).iter().enumerate() {
                if !inside[b] {
                    return Err(Error::NotClosed { elem: a, scalar: s });
                }
            }
        }
        Ok(Subact { ambient, members })
    }

    pub fn whole(ambient: Arc<Act>) -> Self {
        let members = (0..ambient.size()).collect();
        Subact { ambient, members }
    }

    pub fn ambient(&self) -> &Arc<Act> {
        &self.ambient
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.ambient.size()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    /// Position of an ambient element within `members`.
    pub fn position(&self, a: usize) -> Option<usize> {
        self.members.binary_search(&a).ok()
    }

    pub fn member_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.ambient.size()];
        for &a in &self.members {
            mask[a] = true;
        }
        mask
    }

    /// The subact as a standalone act; element `i` is `members[i]`.
    pub fn as_act(&self) -> Act {
        let n = self.ambient.monoid().order();
        let mut action = Vec::with_capacity(self.members.len() * n);
        for &a in &self.members {
            for &b in self.ambient.row(a) {
                action.push(self.position(b).expect("subact is closed"));
            }
        }
        Act::from_flat_unchecked(
            format!("{}_sub", self.ambient.name()),
            self.ambient.monoid().clone(),
            self.members.iter().map(|&a| self.ambient.label(a).to_string()).collect(),
            action,
        )
    }

    /// Inclusion of [`Subact::as_act`] into the ambient act.
    pub fn inclusion(&self) -> ActHom {
        ActHom { source: Arc::new(self.as_act()), target: self.ambient.clone(), map: self.members.clone() }
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|&a| self.ambient.label(a)).collect()
    }
}

/// The smallest subact containing `seed`.
pub fn generated_subact(act: &Arc<Act>, seed: &[usize]) -> Result<Subact> {
    if seed.is_empty() {
        return Err(Error::EmptySeed);
    }
    let mut inside = vec![false; act.size()];
    for &a in seed {
        if a >= act.size() {
            return Err(Error::OutOfRange { index: a, size: act.size() });
        }
        inside[a] = true;
    }
    // orbits are closed, so one pass over each seed row suffices
    for &a in seed {
        for &b in act.row(a) {
            inside[b] = true;
        }
    }
    let members = (0..act.size()).filter(|&a| inside[a]).collect();
    Ok(Subact { ambient: act.clone(), members })
}

/// An action-preserving map between two acts over the same monoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActHom {
    source: Arc<Act>,
    target: Arc<Act>,
    map: Vec<usize>,
}

impl ActHom {
    pub fn new(source: Arc<Act>, target: Arc<Act>, map: Vec<usize>) -> Result<Self> {
        if !source.same_monoid(&target) {
            return Err(Error::MixedMonoids);
        }
        if map.len() != source.size() {
            return Err(Error::Shape(format!("map of length {} from act of size {}", map.len(), source.size())));
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= target.size()) {
            return Err(Error::OutOfRange { index: bad, size: target.size() });
        }
        if let Some((elem, scalar)) = first_hom_violation(&source, &target, &map) {
            return Err(Error::NotHom { elem, scalar });
        }
        Ok(ActHom { source, target, map })
    }

    pub(crate) fn new_unchecked(source: Arc<Act>, target: Arc<Act>, map: Vec<usize>) -> Self {
        debug_assert!(first_hom_violation(&source, &target, &map).is_none());
        ActHom { source, target, map }
    }

    pub fn identity(act: Arc<Act>) -> Self {
        let map = (0..act.size()).collect();
        ActHom { source: act.clone(), target: act, map }
    }

    pub fn source(&self) -> &Arc<Act> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Act> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `after ∘ self`. The target of `self` must have the same table as the
    /// source of `after`.
    pub fn then(&self, after: &ActHom) -> Result<ActHom> {
        if !self.target.same_structure(&after.source) {
            return Err(Error::Shape("composition of non-matching homs".into()));
        }
        let map = self.map.iter().map(|&b| after.map[b]).collect();
        Ok(ActHom { source: self.source.clone(), target: after.target.clone(), map })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.source.size() == self.target.size() && self.is_injective()
    }

    /// The image as a subact of the target.
    pub fn image(&self) -> Subact {
        Subact::new(self.target.clone(), self.map.iter().copied()).expect("image of a hom is a subact")
    }
}

pub(crate) fn first_hom_violation(source: &Act, target: &Act, map: &[usize]) -> Option<(usize, usize)> {
    let n = source.monoid().order();
    for a in 0..source.size() {
        for s in 0..n {
            if map[source.act(a, s)] != target.act(map[a], s) {
                return Some((a, s));
            }
        }
    }
    None
}

/// The componentwise product of acts over one monoid.
///
/// Elements are tuples in lexicographic order with the first factor most
/// significant; labels have the form `[a;b;c]`.
pub fn product_act(factors: &[Arc<Act>], cap: usize) -> Result<Act> {
    let first = factors.first().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    if factors.iter().any(|f| !f.same_monoid(first)) {
        return Err(Error::MixedMonoids);
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let total = checked_product(&sizes);
    if total > cap as u128 {
        return Err(Error::TooLarge { size: total, cap });
    }
    let total = total as usize;
    let monoid = first.monoid().clone();
    let n = monoid.order();
    let radix = MixedRadix::new(sizes);
    let mut labels = Vec::with_capacity(total);
    let mut action = Vec::with_capacity(total * n);
    let mut tuple = vec![0; factors.len()];
    let mut image = vec![0; factors.len()];
    for idx in 0..total {
        radix.decode(idx, &mut tuple);
        let parts: Vec<&str> = tuple.iter().zip(factors).map(|(&c, f)| f.label(c)).collect();
        labels.push(format!("[{}]", parts.join(";")));
        for s in 0..n {
            for (k, f) in factors.iter().enumerate() {
                image[k] = f.act(tuple[k], s);
            }
            action.push(radix.encode(&image));
        }
    }
    let name = factors.iter().map(|f| f.name()).collect::<Vec<_>>().join("x");
    Ok(Act::from_flat_unchecked(name, monoid, labels, action))
}

pub(crate) fn checked_product(sizes: &[usize]) -> u128 {
    sizes.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128))
}

/// Tuple <-> index conversion, first coordinate most significant.
#[derive(Debug, Clone)]
pub(crate) struct MixedRadix {
    sizes: Vec<usize>,
}

impl MixedRadix {
    pub(crate) fn new(sizes: Vec<usize>) -> Self {
        MixedRadix { sizes }
    }

    pub(crate) fn decode(&self, mut idx: usize, out: &mut [usize]) {
        for k in (0..self.sizes.len()).rev() {
            out[k] = idx % self.sizes[k];
            idx /= self.sizes[k];
        }
    }

    pub(crate) fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.sizes).fold(0, |acc, (&c, &s)| acc * s + c)
    }
}

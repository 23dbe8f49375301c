//! Homomorphism search between finite acts.
//!
//! The search assigns images to a minimal generating set of the source act and
//! propagates each choice along the generator's orbit: once `g ↦ v` is fixed,
//! `g·s ↦ v·s` is forced for every scalar `s`. A conflict between two forced
//! values prunes the branch. When every generator is assigned, the map is a
//! homomorphism by construction.

use std::ops::ControlFlow;
use std::sync::Arc;

use super::act::{Act, ActHom};
use crate::error::{Error, Result};

const UNSET: usize = usize::MAX;

/// Greedy minimal generating set: elements by descending orbit size, keeping
/// those not already covered.
pub fn generating_set(act: &Act) -> Vec<usize> {
    let m = act.size();
    let orbits: Vec<Vec<usize>> = (0..m).map(|a| act.orbit(a)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| orbits[b].len().cmp(&orbits[a].len()).then(a.cmp(&b)));
    let mut covered = vec![false; m];
    let mut gens = Vec::new();
    for a in order {
        if !covered[a] {
            gens.push(a);
            for &b in &orbits[a] {
                covered[b] = true;
            }
        }
    }
    gens.sort_unstable();
    gens
}

#[derive(Debug, Clone)]
pub struct HomSearch<'a> {
    source: &'a Act,
    target: &'a Act,
    gens: Vec<usize>,
    pinned: Vec<(usize, usize)>,
    injective: bool,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a Act, target: &'a Act) -> Result<Self> {
        if !source.same_monoid(target) {
            return Err(Error::MixedMonoids);
        }
        Ok(HomSearch { source, target, gens: generating_set(source), pinned: Vec::new(), injective: false })
    }

    /// Requires `a ↦ b`.
    pub fn pin(mut self, a: usize, b: usize) -> Result<Self> {
        if a >= self.source.size() {
            return Err(Error::OutOfRange { index: a, size: self.source.size() });
        }
        if b >= self.target.size() {
            return Err(Error::OutOfRange { index: b, size: self.target.size() });
        }
        self.pinned.push((a, b));
        Ok(self)
    }

    pub fn pin_all(mut self, pins: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        for (a, b) in pins {
            self = self.pin(a, b)?;
        }
        Ok(self)
    }

    /// Restricts the search to injective maps.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    /// Visits every hom in search order (not sorted).
    pub fn for_each(&self, mut visit: impl FnMut(&[usize]) -> ControlFlow<()>) {
        let mut state = State {
            assign: vec![UNSET; self.source.size()],
            used: vec![false; self.target.size()],
            trail: Vec::with_capacity(self.source.size()),
        };
        for &(a, b) in &self.pinned {
            if !self.propagate(&mut state, a, b) {
                return;
            }
        }
        let _ = self.descend(&mut state, 0, &mut visit);
    }

    fn descend(
        &self,
        state: &mut State,
        k: usize,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(&g) = self.gens.get(k) else {
            return visit(&state.assign);
        };
        if state.assign[g] != UNSET {
            return self.descend(state, k + 1, visit);
        }
        for v in 0..self.target.size() {
            let mark = state.trail.len();
            if self.propagate(state, g, v) {
                self.descend(state, k + 1, visit)?;
            }
            state.undo(mark);
        }
        ControlFlow::Continue(())
    }

    /// Forces `x·s ↦ v·s` for all `s`; on conflict returns false, leaving the
    /// partial assignment on the trail for the caller to undo.
    fn propagate(&self, state: &mut State, x: usize, v: usize) -> bool {
        for (&y, &w) in self.source.row(x).iter().zip(self.target.row(v)) {
            let cur = state.assign[y];
            if cur == UNSET {
                if self.injective && state.used[w] {
                    return false;
                }
                state.assign[y] = w;
                state.used[w] = true;
                state.trail.push(y);
            } else if cur != w {
                return false;
            }
        }
        true
    }

    /// First hom in search order.
    pub fn first(&self) -> Option<Vec<usize>> {
        let mut found = None;
        self.for_each(|m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    pub fn exists(&self) -> bool {
        self.first().is_some()
    }

    /// All homs, lexicographically sorted.
    pub fn all(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each(|m| {
            out.push(m.to_vec());
            ControlFlow::Continue(())
        });
        out.sort_unstable();
        out
    }

    /// Lexicographically least hom.
    pub fn least(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        self.for_each(|m| {
            if best.as_deref().is_none_or(|b| m < b) {
                best = Some(m.to_vec());
            }
            ControlFlow::Continue(())
        });
        best
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

struct State {
    assign: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
}

impl State {
    fn undo(&mut self, mark: usize) {
        for y in self.trail.drain(mark..) {
            self.used[self.assign[y]] = false;
            self.assign[y] = UNSET;
        }
    }
}

/// All homs `source → target` extending `pinned`, in lexicographic order of maps.
pub fn enumerate_homs(source: &Arc<Act>, target: &Arc<Act>, pinned: &[(usize, usize)]) -> Result<Vec<ActHom>> {
    let search = HomSearch::new(source, target)?.pin_all(pinned.iter().copied())?;
    Ok(search.all().into_iter().map(|map| ActHom::new_unchecked(source.clone(), target.clone(), map)).collect())
}

/// Lexicographically least hom extending `pinned`, if any.
pub fn least_hom(source: &Arc<Act>, target: &Arc<Act>, pinned: &[(usize, usize)]) -> Result<Option<ActHom>> {
    let search = HomSearch::new(source, target)?.pin_all(pinned.iter().copied())?;
    Ok(search.least().map(|map| ActHom::new_unchecked(source.clone(), target.clone(), map)))
}

/// Some hom extending `pinned` (first in search order), if any.
pub fn find_hom(source: &Arc<Act>, target: &Arc<Act>, pinned: &[(usize, usize)]) -> Result<Option<ActHom>> {
    let search = HomSearch::new(source, target)?.pin_all(pinned.iter().copied())?;
    Ok(search.first().map(|map| ActHom::new_unchecked(source.clone(), target.clone(), map)))
}

//! Isomorphism tests and canonical forms.

use itertools::Itertools;

use super::act::Act;
use super::hom::HomSearch;
use super::monoid::Monoid;
use crate::error::{Error, Result};

/// Largest act for which [`canonical_act_table`] will enumerate permutations.
pub const CANONICAL_FORM_MAX: usize = 8;

/// Relabels a flat table: `perm[old] = new`, rows move with their element.
fn relabel_act(table: &[usize], n: usize, perm: &[usize], out: &mut [usize]) {
    for (old, row) in table.chunks(n).enumerate() {
        let new = perm[old];
        for (s, &b) in row.iter().enumerate() {
            out[new * n + s] = perm[b];
        }
    }
}

/// Lexicographically least action table over all permutations of act elements
/// that fix the first `fixed` elements. Monoid elements are never permuted.
pub fn canonical_act_table_fixing(act: &Act, fixed: usize) -> Vec<usize> {
    canonical_flat_table(act.flat_table(), act.monoid().order(), fixed)
}

pub(crate) fn canonical_flat_table(table: &[usize], n: usize, fixed: usize) -> Vec<usize> {
    let m = table.len() / n;
    assert!(m - fixed <= CANONICAL_FORM_MAX, "canonical form limited to {CANONICAL_FORM_MAX} free elements");
    let mut best = table.to_vec();
    let mut scratch = vec![0; table.len()];
    let mut perm: Vec<usize> = (0..m).collect();
    for tail in (fixed..m).permutations(m - fixed) {
        perm[fixed..].copy_from_slice(&tail);
        relabel_act(table, n, &perm, &mut scratch);
        if scratch < best {
            best.copy_from_slice(&scratch);
        }
    }
    best
}

pub fn canonical_act_table(act: &Act) -> Vec<usize> {
    canonical_act_table_fixing(act, 0)
}

/// Lexicographically least multiplication table over relabelings that send the
/// identity to index 0.
pub fn canonical_monoid_table(monoid: &Monoid) -> Vec<usize> {
    let k = monoid.order();
    let table = monoid.flat_table();
    let others: Vec<usize> = monoid.non_identity().collect();
    let mut perm = vec![0; k];
    let mut best: Option<Vec<usize>> = None;
    let mut scratch = vec![0; k * k];
    for images in (1..k).permutations(k - 1) {
        perm[monoid.identity()] = 0;
        for (&old, &new) in others.iter().zip(&images) {
            perm[old] = new;
        }
        for i in 0..k {
            for j in 0..k {
                scratch[perm[i] * k + perm[j]] = perm[table[i * k + j]];
            }
        }
        if best.as_ref().is_none_or(|b| scratch < *b) {
            best = Some(scratch.clone());
        }
    }
    best.unwrap_or_else(|| table.to_vec())
}

/// Per-element data preserved by isomorphisms, sorted.
fn invariant(act: &Act) -> Vec<(usize, usize)> {
    let mut inv: Vec<(usize, usize)> = (0..act.size())
        .map(|a| {
            let stabilized = act.row(a).iter().filter(|&&b| b == a).count();
            (act.orbit(a).len(), stabilized)
        })
        .collect();
    inv.sort_unstable();
    inv
}

/// Whether two acts over the same monoid are isomorphic.
///
/// A bijective hom between finite acts of equal size has a hom inverse, so the
/// test searches for an injective hom after cheap invariant checks.
pub fn is_isomorphic(a: &Act, b: &Act) -> Result<bool> {
    if !a.same_monoid(b) {
        return Err(Error::MixedMonoids);
    }
    if a.size() != b.size() || invariant(a) != invariant(b) {
        return Ok(false);
    }
    Ok(HomSearch::new(a, b)?.injective().exists())
}

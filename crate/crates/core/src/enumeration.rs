//! Isomorphism-free enumeration of small monoids, acts, extensions, and subacts.
//!
//! Labeled tables are produced by backtracking with partial axiom checks and
//! then reduced to one representative per isomorphism class by canonical form
//! (least table under relabeling).

use std::collections::BTreeSet;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::algebra::{
    canonical_flat_table, canonical_monoid_table, default_act_labels, default_monoid_labels, Act, Monoid, Subact,
};
use crate::error::{Error, Result};

pub const MONOID_ORDER_CAP: usize = 4;
pub const ACT_SIZE_CAP: usize = 5;
pub const SUBACT_SCAN_CAP: usize = 20;

const UNSET: usize = usize::MAX;

/// All monoids of order `k` up to isomorphism, identity at index 0, in
/// canonical table order.
pub fn enumerate_monoids(k: usize) -> Result<Vec<Monoid>> {
    if k == 0 {
        return Err(Error::InvalidArgument("monoid order must be positive".into()));
    }
    if k > MONOID_ORDER_CAP {
        return Err(Error::CapExceeded { what: format!("monoid order {k}"), cap: MONOID_ORDER_CAP });
    }
    let mut table = vec![UNSET; k * k];
    for i in 0..k {
        table[i] = i;
        table[i * k] = i;
    }
    let cells: Vec<usize> = (1..k).flat_map(|i| (1..k).map(move |j| i * k + j)).collect();
    let mut forms = BTreeSet::new();
    fill_monoid(&mut table, k, &cells, 0, &mut forms);
    Ok(forms
        .into_iter()
        .enumerate()
        .map(|(idx, flat)| {
            let rows: Vec<Vec<usize>> = flat.chunks(k).map(<[usize]>::to_vec).collect();
            Monoid::new(format!("M{k}_{idx}"), default_monoid_labels(k, 0), 0, &rows)
                .expect("enumerated table is a monoid")
        })
        .collect())
}

fn partial_associative(table: &[usize], k: usize) -> bool {
    for i in 0..k {
        for j in 0..k {
            let ij = table[i * k + j];
            if ij == UNSET {
                continue;
            }
            for l in 0..k {
                let jl = table[j * k + l];
                if jl == UNSET {
                    continue;
                }
                let left = table[ij * k + l];
                let right = table[i * k + jl];
                if left != UNSET && right != UNSET && left != right {
                    return false;
                }
            }
        }
    }
    true
}

fn fill_monoid(table: &mut [usize], k: usize, cells: &[usize], pos: usize, forms: &mut BTreeSet<Vec<usize>>) {
    if pos == cells.len() {
        let rows: Vec<Vec<usize>> = table.chunks(k).map(<[usize]>::to_vec).collect();
        let m = Monoid::from_table("tmp", 0, &rows).expect("complete table passed partial checks");
        forms.insert(canonical_monoid_table(&m));
        return;
    }
    for v in 0..k {
        table[cells[pos]] = v;
        if partial_associative(table, k) {
            fill_monoid(table, k, cells, pos + 1, forms);
        }
    }
    table[cells[pos]] = UNSET;
}

/// Backtracking over the free cells of an action table. Rows `0..fixed_rows`
/// are given; the identity column is preset.
struct ActFiller<'a> {
    monoid: &'a Monoid,
    m: usize,
    table: Vec<usize>,
    cells: Vec<usize>,
    fixed: usize,
    forms: BTreeSet<Vec<usize>>,
}

impl ActFiller<'_> {
    fn consistent(&self, cell: usize) -> bool {
        let n = self.monoid.order();
        let (a, s) = (cell / n, cell % n);
        let t = &self.table;
        // (a·s)·u = a·(su)
        let b = t[cell];
        for u in 0..n {
            let left = t[b * n + u];
            let right = t[a * n + self.monoid.mul(s, u)];
            if left != UNSET && right != UNSET && left != right {
                return false;
            }
        }
        // (c·w)·v = c·(wv) for every defined cell pointing at a
        for c in 0..self.m {
            for w in 0..n {
                if t[c * n + w] == a {
                    let right = t[c * n + self.monoid.mul(w, s)];
                    if right != UNSET && right != b {
                        return false;
                    }
                }
            }
        }
        // a·(wv) when a·w is defined and a·(wv) = cell
        for w in 0..n {
            let aw = t[a * n + w];
            if aw == UNSET {
                continue;
            }
            for v in 0..n {
                if self.monoid.mul(w, v) == s {
                    let left = t[aw * n + v];
                    if left != UNSET && left != b {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn fill(&mut self, pos: usize) {
        if pos == self.cells.len() {
            self.forms.insert(canonical_flat_table(&self.table, self.monoid.order(), self.fixed));
            return;
        }
        let cell = self.cells[pos];
        for v in 0..self.m {
            self.table[cell] = v;
            if self.consistent(cell) {
                self.fill(pos + 1);
            }
        }
        self.table[cell] = UNSET;
    }
}

fn free_cells(monoid: &Monoid, from_row: usize, m: usize) -> Vec<usize> {
    let n = monoid.order();
    (from_row..m).flat_map(|a| monoid.non_identity().map(move |s| a * n + s)).collect()
}

/// All acts of size `m` over `monoid` up to isomorphism, in canonical table order.
pub fn enumerate_acts(monoid: &Arc<Monoid>, m: usize) -> Result<Vec<Act>> {
    if m == 0 {
        return Err(Error::EmptyAct);
    }
    if m > ACT_SIZE_CAP {
        return Err(Error::CapExceeded { what: format!("act size {m}"), cap: ACT_SIZE_CAP });
    }
    let n = monoid.order();
    let mut table = vec![UNSET; m * n];
    for a in 0..m {
        table[a * n + monoid.identity()] = a;
    }
    let mut filler = ActFiller { monoid, m, table, cells: free_cells(monoid, 0, m), fixed: 0, forms: BTreeSet::new() };
    filler.fill(0);
    Ok(filler
        .forms
        .into_iter()
        .enumerate()
        .map(|(idx, flat)| {
            Act::from_flat_unchecked(
                format!("{}_A{m}_{idx}", monoid.name()),
                monoid.clone(),
                default_act_labels(m),
                flat,
            )
        })
        .collect())
}

/// All acts of size `|act| + extra` that contain `act` as the subact on their
/// first `|act|` indices, up to isomorphisms fixing `act` pointwise.
pub fn enumerate_extensions(act: &Act, extra: usize) -> Result<Vec<Subact>> {
    if extra == 0 {
        return Err(Error::InvalidArgument("extensions need at least one new element".into()));
    }
    let k = act.size();
    let m = k + extra;
    if m > ACT_SIZE_CAP + 1 {
        return Err(Error::CapExceeded { what: format!("extension of size {m}"), cap: ACT_SIZE_CAP + 1 });
    }
    let monoid = act.monoid();
    let n = monoid.order();
    let mut table = vec![UNSET; m * n];
    table[..k * n].copy_from_slice(act.flat_table());
    for a in k..m {
        table[a * n + monoid.identity()] = a;
    }
    let mut filler = ActFiller { monoid, m, table, cells: free_cells(monoid, k, m), fixed: k, forms: BTreeSet::new() };
    filler.fill(0);
    let mut labels = act.labels().to_vec();
    let mut fresh = 0;
    while labels.len() < m {
        let candidate = format!("n{fresh}");
        fresh += 1;
        if !labels.contains(&candidate) {
            labels.push(candidate);
        }
    }
    Ok(filler
        .forms
        .into_iter()
        .enumerate()
        .map(|(idx, flat)| {
            let ambient = Arc::new(Act::from_flat_unchecked(
                format!("{}_ext{extra}_{idx}", act.name()),
                monoid.clone(),
                labels.clone(),
                flat,
            ));
            Subact::new(ambient, 0..k).expect("prefix rows are closed")
        })
        .collect())
}

/// All subacts, ordered by size and then by member list.
pub fn enumerate_subacts(act: &Arc<Act>) -> Result<Vec<Subact>> {
    let m = act.size();
    if m > SUBACT_SCAN_CAP {
        return Err(Error::CapExceeded { what: format!("subact scan over {m} elements"), cap: SUBACT_SCAN_CAP });
    }
    let orbit_masks: Vec<u32> = (0..m).map(|a| act.row(a).iter().fold(0, |acc, &b| acc | 1 << b)).collect();
    let mut found: Vec<Vec<usize>> = (1u32..(1 << m))
        .filter(|&s| (0..m).all(|a| s >> a & 1 == 0 || orbit_masks[a] & !s == 0))
        .map(|s| (0..m).filter(|&a| s >> a & 1 == 1).collect())
        .collect();
    found.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(found.into_iter().map(|members| Subact::new(act.clone(), members).expect("closed by construction")).collect())
}

/// Bounds a catalog was generated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogBounds {
    pub max_order: usize,
    pub max_size: usize,
}

/// Every monoid up to a given order and every act over each up to a given size.
#[derive(Debug, Clone)]
pub struct Catalog {
    pub monoids: Vec<Arc<Monoid>>,
    pub acts_by_monoid: IndexMap<String, Vec<Arc<Act>>>,
    pub provenance: CatalogBounds,
}

impl Catalog {
    pub fn generate(max_order: usize, max_size: usize) -> Result<Self> {
        let mut monoids = Vec::new();
        let mut acts_by_monoid = IndexMap::new();
        for k in 1..=max_order {
            for monoid in enumerate_monoids(k)? {
                let monoid = Arc::new(monoid);
                let mut acts = Vec::new();
                for m in 1..=max_size {
                    acts.extend(enumerate_acts(&monoid, m)?.into_iter().map(Arc::new));
                }
                acts_by_monoid.insert(monoid.name().to_string(), acts);
                monoids.push(monoid);
            }
        }
        Ok(Catalog { monoids, acts_by_monoid, provenance: CatalogBounds { max_order, max_size } })
    }

    pub fn acts(&self, monoid: &Monoid) -> &[Arc<Act>] {
        self.acts_by_monoid.get(monoid.name()).map_or(&[], Vec::as_slice)
    }

    /// Every (monoid, act) pair.
    pub fn all_acts(&self) -> impl Iterator<Item = (&Arc<Monoid>, &Arc<Act>)> {
        self.monoids.iter().flat_map(move |m| self.acts(m).iter().map(move |a| (m, a)))
    }
}

//! Brute-force reference implementations. Everything here enumerates the
//! full search space directly and shares no code with the library beyond
//! the table accessors.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use actkit::algebra::{Act, Monoid, Subact};
use actkit::enumeration::Catalog;

/// Catalog of monoids of order ≤ 3 with acts of size ≤ 4, built once.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| Catalog::generate(3, 4).expect("catalog within caps"))
}

/// Every (monoid, act) pair of the shared catalog with act size ≤ `max`.
pub fn small_acts(max: usize) -> Vec<Arc<Act>> {
    catalog().all_acts().filter(|(_, a)| a.size() <= max).map(|(_, a)| a.clone()).collect()
}

/// Calls `visit` with every vector in `0..base` of length `len`.
pub fn for_each_tuple(len: usize, base: usize, mut visit: impl FnMut(&[usize])) {
    if base == 0 && len > 0 {
        return;
    }
    let mut t = vec![0; len];
    loop {
        visit(&t);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < base {
                break;
            }
            t[i] = 0;
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn monoid_form(t: &[usize], k: usize) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for p in permutations(k).into_iter().filter(|p| p[0] == 0) {
        let mut r = vec![0; k * k];
        for i in 0..k {
            for j in 0..k {
                r[p[i] * k + p[j]] = p[t[i * k + j]];
            }
        }
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best.unwrap()
}

/// Number of monoids of order `k` up to isomorphism, by trying every table
/// with identity at index 0.
pub fn brute_monoid_count(k: usize) -> usize {
    let free: Vec<(usize, usize)> = (1..k).flat_map(|i| (1..k).map(move |j| (i, j))).collect();
    let mut forms = BTreeSet::new();
    for_each_tuple(free.len(), k, |vals| {
        let mut t = vec![0; k * k];
        for i in 0..k {
            t[i] = i;
            t[i * k] = i;
        }
        for (&(i, j), &v) in free.iter().zip(vals) {
            t[i * k + j] = v;
        }
        let assoc = (0..k).all(|a| (0..k).all(|b| (0..k).all(|c| t[t[a * k + b] * k + c] == t[a * k + t[b * k + c]])));
        if assoc {
            forms.insert(monoid_form(&t, k));
        }
    });
    forms.len()
}

pub fn is_act_table(monoid: &Monoid, t: &[usize], m: usize) -> bool {
    let n = monoid.order();
    (0..m).all(|a| t[a * n + monoid.identity()] == a)
        && (0..m).all(|a| (0..n).all(|s| (0..n).all(|u| t[t[a * n + s] * n + u] == t[a * n + monoid.mul(s, u)])))
}

/// Canonical form of an act table under permutations fixing the first `fixed` elements.
pub fn act_form(t: &[usize], n: usize, m: usize, fixed: usize) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for p in permutations(m).into_iter().filter(|p| (0..fixed).all(|i| p[i] == i)) {
        let mut r = vec![0; m * n];
        for a in 0..m {
            for s in 0..n {
                r[p[a] * n + s] = p[t[a * n + s]];
            }
        }
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best.unwrap()
}

/// Number of acts of size `m` over `monoid` up to isomorphism.
pub fn brute_act_count(monoid: &Monoid, m: usize) -> usize {
    let n = monoid.order();
    let mut forms = BTreeSet::new();
    for_each_tuple(m * n, m, |t| {
        if is_act_table(monoid, t, m) {
            forms.insert(act_form(t, n, m, 0));
        }
    });
    forms.len()
}

/// Number of acts of size `|act| + extra` restricting to `act` on the first
/// indices, up to isomorphisms fixing those indices.
pub fn brute_extension_count(act: &Act, extra: usize) -> usize {
    let monoid = act.monoid();
    let n = monoid.order();
    let k = act.size();
    let m = k + extra;
    let mut forms = BTreeSet::new();
    for_each_tuple(extra * n, m, |tail| {
        let mut t: Vec<usize> = act.flat_table().to_vec();
        t.extend_from_slice(tail);
        if is_act_table(monoid, &t, m) {
            forms.insert(act_form(&t, n, m, k));
        }
    });
    forms.len()
}

pub fn is_hom_map(source: &Act, target: &Act, map: &[usize]) -> bool {
    (0..source.size()).all(|a| (0..source.monoid().order()).all(|s| map[source.act(a, s)] == target.act(map[a], s)))
}

/// Every hom as a map, in lexicographic order.
pub fn brute_homs(source: &Act, target: &Act) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_tuple(source.size(), target.size(), |m| {
        if is_hom_map(source, target, m) {
            out.push(m.to_vec());
        }
    });
    out
}

/// Purity by exhaustive search for a retraction onto `members`.
pub fn brute_pure(act: &Act, members: &[usize]) -> bool {
    let inside: BTreeSet<usize> = members.iter().copied().collect();
    let mut found = false;
    for_each_tuple(act.size(), members.len(), |pos| {
        if found {
            return;
        }
        let map: Vec<usize> = pos.iter().map(|&i| members[i]).collect();
        if inside.iter().all(|&a| map[a] == a) && is_hom_map(act, act, &map) {
            found = true;
        }
    });
    found
}

/// Nonempty subsets closed under the action.
pub fn brute_subacts(act: &Act) -> Vec<Vec<usize>> {
    let m = act.size();
    let mut out = Vec::new();
    for mask in 1u32..(1 << m) {
        let members: Vec<usize> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
        if members.iter().all(|&a| act.row(a).iter().all(|&b| mask >> b & 1 == 1)) {
            out.push(members);
        }
    }
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    out
}

/// Smallest (then lexicographically least) pure subact containing `seed`.
pub fn brute_min_pure_superact(act: &Act, seed: &[usize]) -> Vec<usize> {
    brute_subacts(act)
        .into_iter()
        .find(|s| seed.iter().all(|a| s.contains(a)) && brute_pure(act, s))
        .expect("the whole act is pure")
}

/// Whether every hom from `inner` (as an act) into `target` extends to the
/// ambient act of `inner`.
pub fn brute_extends(inner: &Subact, target: &Act) -> bool {
    let ambient = inner.ambient();
    let k = inner.as_act();
    let all = brute_homs(ambient, target);
    brute_homs(&k, target).iter().all(|h| all.iter().any(|g| inner.members().iter().zip(h).all(|(&x, &v)| g[x] == v)))
}

/// Right congruences of `monoid`, as class-index vectors.
pub fn brute_congruences(monoid: &Monoid) -> usize {
    let k = monoid.order();
    let mut seen = BTreeSet::new();
    for_each_tuple(k, k, |c| {
        // normalize labels to first appearance
        let mut relabel = vec![usize::MAX; k];
        let mut next = 0;
        let norm: Vec<usize> = c
            .iter()
            .map(|&x| {
                if relabel[x] == usize::MAX {
                    relabel[x] = next;
                    next += 1;
                }
                relabel[x]
            })
            .collect();
        let compatible = (0..k).all(|x| {
            (0..k).all(|y| norm[x] != norm[y] || (0..k).all(|s| norm[monoid.mul(x, s)] == norm[monoid.mul(y, s)]))
        });
        if compatible {
            seen.insert(norm);
        }
    });
    seen.len()
}

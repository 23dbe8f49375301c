//! Small named monoids and acts used throughout the tests and the CLI examples.

use std::sync::Arc;

use crate::algebra::{Act, Monoid};

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// `{1, e}` with `e·e = e`.
pub fn idempotent_monoid() -> Arc<Monoid> {
    Arc::new(Monoid::new("E2", labels(&["1", "e"]), 0, &[vec![0, 1], vec![1, 1]]).unwrap())
}

/// The cyclic group of order two, `{1, g}`.
pub fn cyclic_group2() -> Arc<Monoid> {
    Arc::new(Monoid::new("Z2", labels(&["1", "g"]), 0, &[vec![0, 1], vec![1, 0]]).unwrap())
}

/// The left-zero semigroup `{r, s}` with an identity adjoined: `r·x = r`, `s·x = s`.
pub fn left_zero_with_identity() -> Arc<Monoid> {
    Arc::new(Monoid::new("S3", labels(&["1", "r", "s"]), 0, &[vec![0, 1, 2], vec![1, 1, 1], vec![2, 2, 2]]).unwrap())
}

/// `{p, q, u}` over [`left_zero_with_identity`]: `p`, `q` fixed, `u·r = p`, `u·s = q`.
pub fn b_act() -> Act {
    Act::new("B", left_zero_with_identity(), labels(&["p", "q", "u"]), &[vec![0, 0, 0], vec![1, 1, 1], vec![2, 0, 1]])
        .unwrap()
}

/// Two fixed points `{p, q}` over [`left_zero_with_identity`].
pub fn two_fixed_points() -> Act {
    Act::new("A", left_zero_with_identity(), labels(&["p", "q"]), &[vec![0, 0, 0], vec![1, 1, 1]]).unwrap()
}

use std::collections::HashSet;

use crate::error::{Error, Result};

/// A finite monoid given by its multiplication table.
///
/// Elements are referred to by index; `mul(i, j)` is the index of the product
/// of element `i` and element `j`. Labels are only used for display and for
/// the text catalog format.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monoid {
    name: String,
    labels: Vec<String>,
    identity: usize,
    mul: Vec<usize>,
}

impl Monoid {
    /// Validates a table and builds the monoid.
    ///
    /// Fails with [`Error::NotIdentity`] at the first element where the identity
    /// law breaks and with [`Error::NotAssociative`] at the lexicographically
    /// first failing triple.
    pub fn new(name: impl Into<String>, labels: Vec<String>, identity: usize, table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Shape("monoid table has no rows".into()));
        }
        if labels.len() != n {
            return Err(Error::Shape(format!("{} labels for order {n}", labels.len())));
        }
        check_labels(&labels)?;
        let mut mul = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::Shape(format!("row of length {} in {n}x{n} table", row.len())));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::OutOfRange { index: x, size: n });
                }
                mul.push(x);
            }
        }
        if identity >= n {
            return Err(Error::OutOfRange { index: identity, size: n });
        }
        let monoid = Monoid { name: name.into(), labels, identity, mul };
        monoid.check_laws()?;
        Ok(monoid)
    }

    /// Builds a monoid with default labels: `1` for the identity, then `a`, `b`, ...
    pub fn from_table(name: impl Into<String>, identity: usize, table: &[Vec<usize>]) -> Result<Self> {
        let labels = default_labels(table.len(), identity);
        Self::new(name, labels, identity, table)
    }

    /// The one-element monoid.
    pub fn trivial() -> Self {
        Monoid { name: "T".into(), labels: vec!["1".into()], identity: 0, mul: vec![0] }
    }

    fn check_laws(&self) -> Result<()> {
        let n = self.order();
        let e = self.identity;
        for i in 0..n {
            if self.mul(e, i) != i || self.mul(i, e) != i {
                return Err(Error::NotIdentity(i));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.mul(i, j);
                for k in 0..n {
                    if self.mul(ij, k) != self.mul(i, self.mul(j, k)) {
                        return Err(Error::NotAssociative(i, j, k));
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

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.order() + j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order()).map(<[usize]>::to_vec).collect()
    }

    /// Row-major flattened multiplication table.
    pub fn flat_table(&self) -> &[usize] {
        &self.mul
    }

    /// Equality of the underlying algebra, ignoring names and labels.
    pub fn same_structure(&self, other: &Monoid) -> bool {
        self.identity == other.identity && self.mul == other.mul
    }

    /// Elements other than the identity.
    pub fn non_identity(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.order()).filter(move |&s| s != self.identity)
    }
}

pub(crate) fn default_labels(n: usize, identity: usize) -> Vec<String> {
    let mut next = 0u8;
    (0..n)
        .map(|i| {
            if i == identity {
                "1".to_string()
            } else {
                let label = if next < 26 { ((b'a' + next) as char).to_string() } else { format!("m{next}") };
                next += 1;
                label
            }
        })
        .collect()
}

pub(crate) fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if l.is_empty() || l.chars().any(|c| c.is_whitespace() || matches!(c, '#' | ',' | '@' | '.' | '=')) {
            return Err(Error::InvalidArgument(format!("label `{l}` contains a reserved character")));
        }
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_monoid() {
        let m = Monoid::from_table("T", 0, &[vec![0]]).unwrap();
        assert_eq!(m.order(), 1);
        assert_eq!(m, Monoid::trivial());
    }

    #[test]
    fn idempotent_pair() {
        let m = Monoid::from_table("E", 0, &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.mul(1, 1), 1);
        assert_eq!(m.labels(), &["1".to_string(), "a".to_string()]);
    }

    #[test]
    fn first_failing_triple() {
        let err = Monoid::from_table("X", 0, &[vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]).unwrap_err();
        assert_eq!(err, Error::NotAssociative(1, 1, 2));
    }

    #[test]
    fn identity_law() {
        let err = Monoid::from_table("X", 0, &[vec![0, 0], vec![1, 1]]).unwrap_err();
        assert_eq!(err, Error::NotIdentity(1));
        let err = Monoid::from_table("X", 1, &[vec![1, 1], vec![1, 1]]).unwrap_err();
        assert_eq!(err, Error::NotIdentity(0));
        let err = Monoid::from_table("X", 0, &[vec![0, 1], vec![0, 1]]).unwrap_err();
        assert_eq!(err, Error::NotIdentity(1));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(Monoid::from_table("X", 0, &[]), Err(Error::Shape(_))));
        assert!(matches!(Monoid::from_table("X", 0, &[vec![0, 1]]), Err(Error::Shape(_))));
        assert!(matches!(
            Monoid::from_table("X", 0, &[vec![0, 2], vec![1, 1]]),
            Err(Error::OutOfRange { index: 2, .. })
        ));
        assert!(matches!(
            Monoid::new("X", vec!["1".into(), "1".into()], 0, &[vec![0, 1], vec![1, 1]]),
            Err(Error::DuplicateLabel(_))
        ));
    }
}

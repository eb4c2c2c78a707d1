//! Finite sets of positive naturals: free-index sets and metavariable
//! decorations on the indexed side.

use std::collections::BTreeSet;
use std::fmt;

/// Comparator used by [`NatSet::filter`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Cmp {
    pub fn holds(self, n: u32, k: u32) -> bool {
        match self {
            Cmp::Eq => n == k,
            Cmp::Lt => n < k,
            Cmp::Le => n <= k,
            Cmp::Gt => n > k,
            Cmp::Ge => n >= k,
        }
    }
}

/// Sorted, duplicate-free set of naturals, all `>= 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NatSet(BTreeSet<u32>);

impl NatSet {
    pub fn new() -> Self {
        NatSet(BTreeSet::new())
    }

    pub fn singleton(n: u32) -> Self {
        assert!(n >= 1, "natset elements are positive");
        NatSet(BTreeSet::from([n]))
    }

    /// Builds a set from arbitrary elements. Panics on `0`.
    pub fn from_iter_checked<I: IntoIterator<Item = u32>>(items: I) -> Self {
        let set: BTreeSet<u32> = items.into_iter().collect();
        assert!(!set.contains(&0), "natset elements are positive");
        NatSet(set)
    }

    pub fn contains(&self, n: u32) -> bool {
        self.0.contains(&n)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn greatest(&self) -> Option<u32> {
        self.0.iter().next_back().copied()
    }

    pub fn insert(&mut self, n: u32) {
        assert!(n >= 1, "natset elements are positive");
        self.0.insert(n);
    }

    /// `N + k`
    pub fn shift_up(&self, k: u32) -> NatSet {
        NatSet(self.0.iter().map(|n| n + k).collect())
    }

    /// `N - k`: elements `<= k` are dropped.
    pub fn shift_down(&self, k: u32) -> NatSet {
        NatSet(self.0.iter().filter(|&&n| n > k).map(|n| n - k).collect())
    }

    pub fn filter(&self, cmp: Cmp, k: u32) -> NatSet {
        NatSet(self.0.iter().copied().filter(|&n| cmp.holds(n, k)).collect())
    }

    pub fn union(&self, other: &NatSet) -> NatSet {
        NatSet(self.0.union(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &NatSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// True iff every element lies in `1..=n`.
    pub fn within(&self, n: u32) -> bool {
        self.greatest().is_none_or(|m| m <= n)
    }

    /// Applies `f` to every element, keeping the result a set.
    pub fn map(&self, f: impl Fn(u32) -> u32) -> NatSet {
        NatSet::from_iter_checked(self.0.iter().map(|&n| f(n)))
    }
}

impl FromIterator<u32> for NatSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        NatSet::from_iter_checked(iter)
    }
}

impl fmt::Display for NatSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u32]) -> NatSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn shift_up() {
        assert_eq!(set(&[1, 3]).shift_up(2), set(&[3, 5]));
        assert_eq!(set(&[]).shift_up(5), set(&[]));
        assert_eq!(set(&[2]).shift_up(0), set(&[2]));
    }

    #[test]
    fn shift_down() {
        assert_eq!(set(&[1, 2, 4]).shift_down(1), set(&[1, 3]));
        assert_eq!(set(&[3]).shift_down(3), set(&[]));
        assert_eq!(set(&[5]).shift_down(0), set(&[5]));
    }

    #[test]
    fn filter() {
        let s = set(&[1, 2, 3]);
        assert_eq!(s.filter(Cmp::Eq, 2), set(&[2]));
        assert_eq!(s.filter(Cmp::Gt, 3), set(&[]));
        assert_eq!(s.filter(Cmp::Le, 2), set(&[1, 2]));
        assert_eq!(s.filter(Cmp::Lt, 2), set(&[1]));
        assert_eq!(s.filter(Cmp::Ge, 2), set(&[2, 3]));
    }

    #[test]
    #[should_panic]
    fn zero_rejected() {
        let _ = set(&[0, 1]);
    }

    #[test]
    fn display_is_sorted() {
        assert_eq!(set(&[3, 1, 2]).to_string(), "{1,2,3}");
        assert_eq!(NatSet::new().to_string(), "{}");
    }
}

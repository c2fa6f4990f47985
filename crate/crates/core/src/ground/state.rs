//! Bitset states over the dense atom indexing of a task.

use std::fmt;

use fixedbitset::FixedBitSet;

/// A world state: the set of true ground atoms, as a fixed-width bitset.
/// All states of one task share the same width, so equality and hashing are
/// canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(FixedBitSet);

impl State {
    pub fn empty(num_atoms: usize) -> Self {
        State(FixedBitSet::with_capacity(num_atoms))
    }

    pub fn from_atoms(num_atoms: usize, atoms: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(num_atoms);
        for a in atoms {
            s.insert(a);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, atom: u32) -> bool {
        self.0.contains(atom as usize)
    }

    pub fn insert(&mut self, atom: u32) {
        self.0.insert(atom as usize);
    }

    pub fn remove(&mut self, atom: u32) {
        self.0.set(atom as usize, false);
    }

    pub fn is_subset(&self, other: &State) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &State) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &State) {
        self.0.union_with(&other.0);
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    /// `(self - del) ∪ add`.
    pub fn apply_effect(&self, add: &State, del: &State) -> State {
        let mut next = self.0.clone();
        next.difference_with(&del.0);
        next.union_with(&add.0);
        State(next)
    }

    /// Returns a copy widened to `num_atoms` bits (new bits zero).
    pub fn widened(&self, num_atoms: usize) -> State {
        debug_assert!(num_atoms >= self.0.len());
        let mut s = FixedBitSet::with_capacity(num_atoms);
        for i in self.0.ones() {
            s.insert(i);
        }
        State(s)
    }

    /// Truncates to the first `num_atoms` bits; the inverse of [`widened`]
    /// when the dropped bits are zero.
    pub fn narrowed(&self, num_atoms: usize) -> State {
        let mut s = FixedBitSet::with_capacity(num_atoms);
        for i in self.0.ones() {
            if i < num_atoms {
                s.insert(i);
            }
        }
        State(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.ones().map(|i| i as u32)
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.0.ones().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

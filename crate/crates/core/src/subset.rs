//! Subsets of a carrier `0..n`, stored as a packed bit vector.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WORD: usize = 64;

/// A subset of the carrier `0..n`.
///
/// Equality and hashing only look at the members and the carrier size, so two
/// subsets built in different ways compare equal when they hold the same
/// elements.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    n: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset {
            n,
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Subset::empty(n);
        for x in 0..n {
            s.insert(x);
        }
        s
    }

    /// The one-element subset `{0}`.
    pub fn zero(n: usize) -> Self {
        Subset::from_elements(n, [0])
    }

    pub fn from_elements(n: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Subset::empty(n);
        for x in elems {
            s.insert(x);
        }
        s
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.n && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    /// Inserts `x`, returning `true` when it was not already present.
    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.n, "element {x} outside carrier of size {}", self.n);
        let w = &mut self.words[x / WORD];
        let bit = 1u64 << (x % WORD);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.n {
            self.words[x / WORD] &= !(1u64 << (x % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True when the subset is exactly `{0}`.
    pub fn is_zero(&self) -> bool {
        self.len() == 1 && self.contains(0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + t)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Subset {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        debug_assert_eq!(self.n, other.n);
        Subset {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Image of the subset under an index map into a carrier of size `m`.
    pub fn map(&self, f: &[usize], m: usize) -> Subset {
        Subset::from_elements(m, self.iter().map(|x| f[x]))
    }

    /// Preimage of `self` (a subset of the codomain) under `f`.
    pub fn preimage(&self, f: &[usize]) -> Subset {
        Subset::from_elements(f.len(), (0..f.len()).filter(|&x| self.contains(f[x])))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Subsets travel as sorted index arrays. The carrier size is not part of the
/// wire form, so deserialization sizes the carrier to the largest member; use
/// [`Subset::from_elements`] when the carrier is known.
impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let elems = Vec::<usize>::deserialize(d)?;
        let n = elems.iter().max().map_or(0, |m| m + 1);
        Ok(Subset::from_elements(n, elems))
    }
}

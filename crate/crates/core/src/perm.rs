//! Permutations of `0..n` stored as image arrays.

use std::fmt;

/// A permutation `p` of `0..n`, where `p.apply(x)` is the image of `x`.
///
/// Products follow function composition: `p.compose(&q)` applies `q` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Wraps an image array, returning `None` unless it is a bijection of `0..n`.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    /// Parses cycle notation such as `"(23)(45)"` or `"(1 2)(4 5)"`.
    ///
    /// Points are `base`-indexed in the text (use 1 for the usual mathematical
    /// labels) and single-digit points may be written without separators.
    pub fn from_cycles(n: usize, text: &str, base: usize) -> Option<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut seen = vec![false; n];
        for cycle in text.split('(').map(str::trim).filter(|c| !c.is_empty()) {
            let body = cycle.strip_suffix(')')?;
            let points: Vec<usize> = if body.contains([' ', ',']) {
                body.split([' ', ','])
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().ok())
                    .collect::<Option<_>>()?
            } else {
                body.chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()?
            };
            let points: Vec<usize> = points.into_iter().map(|p| p.checked_sub(base)).collect::<Option<_>>()?;
            for (i, &p) in points.iter().enumerate() {
                if p >= n || std::mem::replace(&mut seen[p], true) {
                    return None;
                }
                images[p] = points[(i + 1) % points.len()];
            }
        }
        Some(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn into_images(self) -> Vec<usize> {
        self.0
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Perm) -> Perm {
        let mut out = vec![0; self.len()];
        for x in 0..self.len() {
            out[self.0[x]] = self.0[other.0[x]];
        }
        Perm(out)
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut ord = 1;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x];
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Iterates over all permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Perm> {
    let mut next: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        // Standard next-permutation step.
        if let Some(i) = (1..n).rev().find(|&i| succ[i - 1] < succ[i]) {
            let j = (i..n).rev().find(|&j| succ[j] > succ[i - 1]).unwrap();
            succ.swap(i - 1, j);
            succ[i..].reverse();
            next = Some(succ);
        }
        Some(Perm(cur))
    })
}

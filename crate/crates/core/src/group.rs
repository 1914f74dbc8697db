//! Finite groups as Cayley tables over `0..n` with identity `0`.

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry {value} at ({a}, {b}) is outside 0..{n}")]
    OutOfRange { a: usize, b: usize, value: usize, n: usize },
    #[error("not a Latin square: {axis:?} {line} repeats a value at positions {first} and {second}")]
    NotLatin {
        axis: Axis,
        line: usize,
        first: usize,
        second: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a}·{b})·{c} != {a}·({b}·{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group closure exceeded the budget of {limit} elements")]
    BudgetExceeded { limit: usize },
}

/// A value together with the carrier relabeling applied while normalizing it.
///
/// `relabeling[old] = new`; it is the identity permutation when nothing moved.
#[derive(Debug, Clone)]
pub struct Relabeled<T> {
    pub value: T,
    pub relabeling: Vec<usize>,
}

impl<T> Relabeled<T> {
    pub fn moved(&self) -> bool {
        self.relabeling.iter().enumerate().any(|(i, &j)| i != j)
    }
}

/// A validated finite group. Elements are `0..n`, the identity is `0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupTable {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable")
            .field("n", &self.n)
            .field("rows", &self.rows())
            .finish()
    }
}

/// Validates a Cayley table and returns it as a [`GroupTable`].
///
/// When the identity is not at index 0 the carrier is relabeled by swapping
/// the identity with 0; the swap is reported in [`Relabeled::relabeling`].
pub fn verify_group(rows: &[Vec<usize>]) -> Result<Relabeled<GroupTable>, GroupError> {
    let n = rows.len();
    if n == 0 {
        return Err(GroupError::Empty);
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(GroupError::NotSquare { row, len: r.len(), n });
        }
        for (b, &value) in r.iter().enumerate() {
            if value >= n {
                return Err(GroupError::OutOfRange { a: row, b, value, n });
            }
        }
    }
    let table: Vec<usize> = rows.iter().flatten().copied().collect();
    check_latin(n, &table)?;
    let e = (0..n)
        .find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
        .ok_or(GroupError::NoIdentity)?;
    let mut relabeling: Vec<usize> = (0..n).collect();
    relabeling.swap(0, e);
    let table = if e == 0 {
        table
    } else {
        relabel_table(n, &table, &relabeling)
    };
    check_associative(n, &table)?;
    Ok(Relabeled {
        value: GroupTable::from_trusted(n, table),
        relabeling,
    })
}

fn check_latin(n: usize, table: &[usize]) -> Result<(), GroupError> {
    let mut seen = vec![usize::MAX; n];
    for a in 0..n {
        for b in 0..n {
            let v = table[a * n + b];
            if seen[v] != usize::MAX && seen[v] >= a * n {
                return Err(GroupError::NotLatin {
                    axis: Axis::Row,
                    line: a,
                    first: seen[v] - a * n,
                    second: b,
                });
            }
            seen[v] = a * n + b;
        }
    }
    let mut seen = vec![usize::MAX; n];
    for b in 0..n {
        for a in 0..n {
            let v = table[a * n + b];
            if seen[v] != usize::MAX && seen[v] >= b * n {
                return Err(GroupError::NotLatin {
                    axis: Axis::Column,
                    line: b,
                    first: seen[v] - b * n,
                    second: a,
                });
            }
            seen[v] = b * n + a;
        }
    }
    Ok(())
}

fn check_associative(n: usize, table: &[usize]) -> Result<(), GroupError> {
    for a in 0..n {
        for b in 0..n {
            let ab = table[a * n + b];
            for c in 0..n {
                if table[ab * n + c] != table[a * n + table[b * n + c]] {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }
    Ok(())
}

/// Relabels a flat table by `perm[old] = new`.
pub(crate) fn relabel_table(n: usize, table: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut out = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            out[perm[a] * n + perm[b]] = perm[table[a * n + b]];
        }
    }
    out
}

/// Closes `gens` under `mul`, returning the elements with `identity` first.
pub fn generate_elements<T, F>(identity: T, gens: &[T], mul: F, budget: usize) -> Result<Vec<T>, GroupError>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut index: HashMap<T, usize> = HashMap::new();
    index.insert(identity.clone(), 0);
    let mut elems = vec![identity];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let y = mul(&elems[i], g);
            if !index.contains_key(&y) {
                if elems.len() >= budget {
                    return Err(GroupError::BudgetExceeded { limit: budget });
                }
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
        i += 1;
    }
    Ok(elems)
}

impl GroupTable {
    /// Builds a table known to be a group with identity 0 (internal constructions).
    pub(crate) fn from_trusted(n: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), n * n);
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        GroupTable { n, table, inv }
    }

    /// Validates a flat row-major table whose identity must already be 0.
    pub fn from_flat(n: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        let rows: Vec<Vec<usize>> = table.chunks(n.max(1)).map(<[usize]>::to_vec).collect();
        let v = verify_group(&rows)?;
        if v.moved() {
            return Err(GroupError::NoIdentity);
        }
        Ok(v.value)
    }

    /// Cayley table of a group given by its elements (identity first) and product.
    pub fn from_elements<T, F>(elems: &[T], mul: F) -> Self
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let n = elems.len();
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&mul(&elems[a], &elems[b])];
            }
        }
        GroupTable::from_trusted(n, table)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        GroupTable::from_trusted(n, table)
    }

    pub fn trivial() -> Self {
        GroupTable::cyclic(1)
    }

    /// `self × other` with `(a, b) ↦ a * other.n + b`.
    pub fn direct_product(&self, other: &GroupTable) -> Self {
        let (n, m) = (self.n, other.n);
        let size = n * m;
        let mut table = vec![0; size * size];
        for x in 0..size {
            for y in 0..size {
                let (a1, b1) = (x / m, x % m);
                let (a2, b2) = (y / m, y % m);
                table[x * size + y] = self.op(a1, a2) * m + other.op(b1, b2);
            }
        }
        GroupTable::from_trusted(size, table)
    }

    /// The opposite group `a ·ᵒᵖ b = b · a`.
    pub fn opposite(&self) -> Self {
        let n = self.n;
        let table = (0..n * n).map(|i| self.op(i % n, i / n)).collect();
        GroupTable::from_trusted(n, table)
    }

    /// Symmetric group on `k` points; element 0 is the identity.
    pub fn symmetric(k: usize) -> Self {
        let perms: Vec<crate::perm::Perm> = crate::perm::all_permutations(k).collect();
        GroupTable::from_elements(&perms, |p, q| p.compose(q))
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm[0], 0, "relabeling must fix the identity");
        GroupTable::from_trusted(self.n, relabel_table(self.n, &self.table, perm))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    /// `a b a⁻¹ b⁻¹`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.op(a, b);
        self.op(self.op(ab, self.inv(a)), self.inv(b))
    }

    /// `a b a⁻¹`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.op(self.op(a, b), self.inv(a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.op(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.op(a, b) == self.op(b, a)))
    }

    pub fn centralizer_size(&self, a: usize) -> usize {
        (0..self.n).filter(|&b| self.op(a, b) == self.op(b, a)).count()
    }

    pub fn center(&self) -> Subset {
        Subset::from_elements(self.n, (0..self.n).filter(|&a| self.centralizer_size(a) == self.n))
    }

    pub fn is_subgroup(&self, h: &Subset) -> bool {
        h.contains(0) && h.iter().all(|a| h.iter().all(|b| h.contains(self.op(a, b))))
    }

    /// First `(g, h)` with `g h g⁻¹ ∉ H`, if any.
    pub fn normality_witness(&self, h: &Subset) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|g| h.iter().map(move |x| (g, x)))
            .find(|&(g, x)| !h.contains(self.conj(g, x)))
    }

    pub fn is_normal_subgroup(&self, h: &Subset) -> bool {
        self.is_subgroup(h) && self.normality_witness(h).is_none()
    }

    /// Subgroup generated by `seeds`.
    pub fn subgroup_generated(&self, seeds: impl IntoIterator<Item = usize>) -> Subset {
        let mut h = Subset::zero(self.n);
        let mut elems = vec![0];
        let mut gens: Vec<usize> = Vec::new();
        for s in seeds {
            if h.contains(s) {
                continue;
            }
            gens.push(s);
            let mut queue = elems.clone();
            while let Some(x) = queue.pop() {
                for &g in &gens {
                    let y = self.op(x, g);
                    if h.insert(y) {
                        elems.push(y);
                        queue.push(y);
                    }
                }
            }
        }
        h
    }

    /// Subgroup generated by all commutators `[x, y]`, `x ∈ X`, `y ∈ Y`.
    pub fn commutator_subgroup(&self, xs: &Subset, ys: &Subset) -> Subset {
        let mut comms = Subset::empty(self.n);
        for x in xs.iter() {
            for y in ys.iter() {
                comms.insert(self.commutator(x, y));
            }
        }
        self.subgroup_generated(comms.iter())
    }

    /// `γ₀ = G`, `γₖ₊₁ = [γₖ, G]`, up to and including the first repeat.
    pub fn lower_central_series(&self) -> Vec<Subset> {
        let full = Subset::full(self.n);
        let mut chain = vec![full.clone()];
        loop {
            let next = self.commutator_subgroup(chain.last().unwrap(), &full);
            let done = &next == chain.last().unwrap();
            chain.push(next);
            if done {
                return chain;
            }
        }
    }

    /// `Z₀ = 1`, `Zₖ₊₁ = {x : [x, g] ∈ Zₖ for all g}`, up to the first repeat.
    pub fn upper_central_series(&self) -> Vec<Subset> {
        let mut chain = vec![Subset::zero(self.n)];
        loop {
            let cur = chain.last().unwrap();
            let next = Subset::from_elements(
                self.n,
                (0..self.n).filter(|&x| (0..self.n).all(|g| cur.contains(self.commutator(x, g)))),
            );
            let done = &next == cur;
            chain.push(next);
            if done {
                return chain;
            }
        }
    }

    /// Nilpotency class (0 for the trivial group), or `None` if not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let lcs = self.lower_central_series();
        lcs.iter().position(Subset::is_zero)
    }

    /// Per-element isomorphism invariants: element order and centralizer size.
    pub fn element_invariants(&self) -> Vec<u64> {
        (0..self.n)
            .map(|a| ((self.element_order(a) as u64) << 32) | self.centralizer_size(a) as u64)
            .collect()
    }

    /// A sorted multiset of element invariants, used to bucket groups.
    pub fn fingerprint(&self) -> Vec<u64> {
        let mut v = self.element_invariants();
        v.sort_unstable();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, Perm};

    #[test]
    fn z2_is_valid() {
        let g = verify_group(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(!g.moved());
        assert_eq!(g.value.inv(0), 0);
        assert_eq!(g.value.inv(1), 1);
    }

    #[test]
    fn repeated_entry_is_not_latin() {
        let err = verify_group(&[vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(
            err,
            GroupError::NotLatin {
                axis: Axis::Row,
                line: 1,
                ..
            }
        ));
    }

    #[test]
    fn identity_elsewhere_is_relabeled() {
        // Z/3 written with identity at index 2: a·b = a + b + 1 mod 3.
        let rows: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b + 1) % 3).collect()).collect();
        let g = verify_group(&rows).unwrap();
        assert!(g.moved());
        assert_eq!(g.relabeling, vec![2, 1, 0]);
        assert_eq!(g.value.rows(), GroupTable::cyclic(3).rows());
    }

    #[test]
    fn latin_square_without_associativity() {
        // A loop of order 5 that is not a group.
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            verify_group(&rows).unwrap_err(),
            GroupError::NotAssociative { .. }
        ));
    }

    #[test]
    fn latin_square_without_identity() {
        let rows = vec![vec![1, 0], vec![0, 1]];
        // Column 1 is the identity column but no row is the identity row... it is
        // in fact a group with identity 1.
        let g = verify_group(&rows).unwrap();
        assert_eq!(g.relabeling, vec![1, 0]);
        let rows = vec![vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]];
        // Row 1 is identity-like but column 1 is not.
        assert_eq!(verify_group(&rows).unwrap_err(), GroupError::NoIdentity);
    }

    #[test]
    fn sym3_from_direct_composition() {
        let perms: Vec<Perm> = all_permutations(3).collect();
        let rows: Vec<Vec<usize>> = (0..6)
            .map(|a| {
                (0..6)
                    .map(|b| {
                        let c = perms[a].compose(&perms[b]);
                        perms.iter().position(|p| *p == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        let g = verify_group(&rows).unwrap().value;
        assert!(!g.is_abelian());
        assert_eq!(g.nilpotency_class(), None);
        assert!(g.center().is_zero());
        let derived = g.commutator_subgroup(&Subset::full(6), &Subset::full(6));
        assert_eq!(derived.len(), 3);
        assert_eq!(g, GroupTable::symmetric(3));
    }

    #[test]
    fn central_series_of_small_groups() {
        let q = GroupTable::cyclic(2).direct_product(&GroupTable::cyclic(4));
        assert_eq!(q.nilpotency_class(), Some(1));
        assert_eq!(GroupTable::trivial().nilpotency_class(), Some(0));
        // D4 as symmetries of a square.
        let r = Perm::from_cycles(4, "(0 1 2 3)", 0).unwrap();
        let s = Perm::from_cycles(4, "(1 3)", 0).unwrap();
        let elems = generate_elements(Perm::identity(4), &[r, s], |a, b| a.compose(b), 100).unwrap();
        let d4 = GroupTable::from_elements(&elems, |a, b| a.compose(b));
        assert_eq!(d4.order(), 8);
        assert_eq!(d4.nilpotency_class(), Some(2));
        let ucs = d4.upper_central_series();
        assert_eq!(ucs[1].len(), 2);
        assert!(ucs[2].is_full());
    }

    #[test]
    fn generation_budget_is_enforced() {
        let gens = [
            Perm::from_cycles(5, "(0 1 2 3 4)", 0).unwrap(),
            Perm::from_cycles(5, "(0 1)", 0).unwrap(),
        ];
        let err = generate_elements(Perm::identity(5), &gens, |a, b| a.compose(b), 50).unwrap_err();
        assert_eq!(err, GroupError::BudgetExceeded { limit: 50 });
    }

    #[test]
    fn opposite_of_nonabelian_differs() {
        let s3 = GroupTable::symmetric(3);
        let op = s3.opposite();
        assert_ne!(s3, op);
        assert_eq!(op.opposite(), s3);
    }
}

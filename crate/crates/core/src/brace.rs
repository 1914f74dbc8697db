//! Finite skew braces `(B, +, ∘)` with cached λ and ∗ tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{relabel_table, verify_group, GroupError, GroupTable, Relabeled};
use crate::subset::Subset;
use crate::substructures::{self, IdealViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraceError {
    #[error("additive table is not a group: {0}")]
    AddNotGroup(GroupError),
    /// The multiplicative table fails the group axioms (a "not a brace" outcome
    /// for the parametric constructors).
    #[error("multiplicative table is not a group: {0}")]
    MulNotGroup(GroupError),
    #[error("carrier sizes differ: additive {add}, multiplicative {mul}")]
    SizeMismatch { add: usize, mul: usize },
    #[error("brace law fails at a={a}, b={b}, c={c}: a∘(b+c) != a∘b - a + a∘c")]
    BraceLawViolated { a: usize, b: usize, c: usize },
    #[error("not an ideal: {0}")]
    NotAnIdeal(IdealViolation),
}

/// A validated skew brace on `0..n`; both identities are `0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewBrace {
    n: usize,
    add: GroupTable,
    mul: GroupTable,
    lambda: Vec<usize>,
    star: Vec<usize>,
}

impl std::fmt::Debug for SkewBrace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SkewBrace")
            .field("n", &self.n)
            .field("add", &self.add.rows())
            .field("mul", &self.mul.rows())
            .finish()
    }
}

/// Checks the brace law on all triples and builds the λ and ∗ caches.
pub fn verify_skew_brace(add: GroupTable, mul: GroupTable) -> Result<SkewBrace, BraceError> {
    let n = add.order();
    if mul.order() != n {
        return Err(BraceError::SizeMismatch {
            add: n,
            mul: mul.order(),
        });
    }
    for a in 0..n {
        let neg_a = add.inv(a);
        for b in 0..n {
            let ab_minus_a = add.op(mul.op(a, b), neg_a);
            for c in 0..n {
                if mul.op(a, add.op(b, c)) != add.op(ab_minus_a, mul.op(a, c)) {
                    return Err(BraceError::BraceLawViolated { a, b, c });
                }
            }
        }
    }
    Ok(SkewBrace::from_trusted(add, mul))
}

impl SkewBrace {
    /// Builds the caches for tables that already satisfy the brace law.
    pub(crate) fn from_trusted(add: GroupTable, mul: GroupTable) -> Self {
        let n = add.order();
        let mut lambda = vec![0; n * n];
        let mut star = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let l = add.op(add.inv(a), mul.op(a, b));
                lambda[a * n + b] = l;
                star[a * n + b] = add.op(l, add.inv(b));
            }
        }
        let brace = SkewBrace {
            n,
            add,
            mul,
            lambda,
            star,
        };
        // λ: (B,∘) → Aut(B,+) is a homomorphism whenever the brace law holds.
        for a in 0..n {
            for b in 0..n {
                let ab = brace.mul.op(a, b);
                for x in 0..n {
                    assert_eq!(
                        brace.lambda(ab, x),
                        brace.lambda(a, brace.lambda(b, x)),
                        "λ is not a homomorphism at ({a}, {b}); brace law check is inconsistent"
                    );
                }
            }
        }
        brace
    }

    /// Validates raw row tables, relabeling so that the common identity is 0.
    pub fn from_rows(add_rows: &[Vec<usize>], mul_rows: &[Vec<usize>]) -> Result<Relabeled<SkewBrace>, BraceError> {
        let add = verify_group(add_rows).map_err(BraceError::AddNotGroup)?;
        let n = add.value.order();
        if mul_rows.len() != n {
            return Err(BraceError::SizeMismatch {
                add: n,
                mul: mul_rows.len(),
            });
        }
        let perm = &add.relabeling;
        let mut relabeled = vec![vec![0; n]; n];
        for (a, row) in mul_rows.iter().enumerate() {
            if row.len() != n {
                return Err(BraceError::MulNotGroup(GroupError::NotSquare {
                    row: a,
                    len: row.len(),
                    n,
                }));
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(BraceError::MulNotGroup(GroupError::OutOfRange { a, b, value: v, n }));
                }
                relabeled[perm[a]][perm[b]] = perm[v];
            }
        }
        let mul = verify_group(&relabeled).map_err(BraceError::MulNotGroup)?;
        if mul.moved() {
            // a∘0 = a is forced by the brace law with b = c = 0.
            let a = (0..n).find(|&a| relabeled[a][0] != a).unwrap_or(0);
            return Err(BraceError::BraceLawViolated { a, b: 0, c: 0 });
        }
        let brace = verify_skew_brace(add.value, mul.value)?;
        Ok(Relabeled {
            value: brace,
            relabeling: add.relabeling,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn add_group(&self) -> &GroupTable {
        &self.add
    }

    pub fn mul_group(&self) -> &GroupTable {
        &self.mul
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add.op(a, b)
    }

    /// `a - b`.
    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add.op(a, self.add.inv(b))
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.add.inv(a)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul.op(a, b)
    }

    /// The multiplicative inverse `ā`.
    #[inline]
    pub fn mul_inv(&self, a: usize) -> usize {
        self.mul.inv(a)
    }

    /// `λ_a(b) = -a + a∘b`.
    #[inline]
    pub fn lambda(&self, a: usize, b: usize) -> usize {
        self.lambda[a * self.n + b]
    }

    /// The permutation `λ_a` as an image array.
    pub fn lambda_map(&self, a: usize) -> &[usize] {
        &self.lambda[a * self.n..(a + 1) * self.n]
    }

    /// `a ∗ b = λ_a(b) - b`.
    #[inline]
    pub fn star(&self, a: usize, b: usize) -> usize {
        self.star[a * self.n + b]
    }

    /// `λ_a⁻¹(b)`, which equals `λ_ā(b)`.
    #[inline]
    pub fn lambda_inv(&self, a: usize, b: usize) -> usize {
        self.lambda(self.mul_inv(a), b)
    }

    /// `[a, b]₊ = a + b - a - b`.
    #[inline]
    pub fn add_commutator(&self, a: usize, b: usize) -> usize {
        self.add.commutator(a, b)
    }

    /// `[a, b]∘ = a∘b∘ā∘b̄`.
    #[inline]
    pub fn mul_commutator(&self, a: usize, b: usize) -> usize {
        self.mul.commutator(a, b)
    }

    pub fn add_rows(&self) -> Vec<Vec<usize>> {
        self.add.rows()
    }

    pub fn mul_rows(&self) -> Vec<Vec<usize>> {
        self.mul.rows()
    }

    /// Relabels the carrier by `perm[old] = new`; `perm` must fix 0.
    pub fn relabel(&self, perm: &[usize]) -> SkewBrace {
        SkewBrace::from_trusted(self.add.relabel(perm), self.mul.relabel(perm))
    }

    /// Quotient by an ideal, with cosets numbered by their least element.
    ///
    /// Returns the quotient brace and the projection `x ↦ coset index`.
    pub fn quotient(&self, ideal: &Subset) -> Result<(SkewBrace, Vec<usize>), BraceError> {
        if let Err(v) = substructures::is_ideal(self, ideal) {
            return Err(BraceError::NotAnIdeal(v));
        }
        let n = self.n;
        let mut proj = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if proj[x] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(x);
            for i in ideal.iter() {
                proj[self.add(x, i)] = k;
            }
        }
        let m = reps.len();
        let mut add = vec![0; m * m];
        let mut mul = vec![0; m * m];
        for (p, &x) in reps.iter().enumerate() {
            for (q, &y) in reps.iter().enumerate() {
                add[p * m + q] = proj[self.add(x, y)];
                mul[p * m + q] = proj[self.mul(x, y)];
            }
        }
        let add = GroupTable::from_flat(m, add).map_err(BraceError::AddNotGroup)?;
        let mul = GroupTable::from_flat(m, mul).map_err(BraceError::MulNotGroup)?;
        let q = verify_skew_brace(add, mul)?;
        Ok((q, proj))
    }

    pub fn is_trivial(&self) -> bool {
        self.add == self.mul
    }

    /// `(a+b)∘c = a∘c - c + b∘c` for all triples.
    pub fn is_two_sided(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.add(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.add(self.sub(self.mul(a, c), c), self.mul(b, c)))
            })
        })
    }

    pub fn classify_flags(&self) -> BraceFlags {
        let add_class = self.add.nilpotency_class();
        let mul_class = self.mul.nilpotency_class();
        BraceFlags {
            trivial: self.is_trivial(),
            two_sided: self.is_two_sided(),
            abelian_type: self.add.is_abelian(),
            nilpotent_type: add_class.is_some(),
            add_nilpotency_class: add_class,
            mul_nilpotent: mul_class.is_some(),
            mul_nilpotency_class: mul_class,
        }
    }

    /// `add = mul = G`.
    pub fn trivial_from_group(g: &GroupTable) -> SkewBrace {
        SkewBrace::from_trusted(g.clone(), g.clone())
    }

    /// `add = G`, `mul` the opposite of `G`.
    pub fn almost_trivial_from_group(g: &GroupTable) -> SkewBrace {
        SkewBrace::from_trusted(g.clone(), g.opposite())
    }

    /// `add = ℤ/n`, `x∘y = x + y + c·x·y mod n`.
    pub fn from_zn_quadratic(n: usize, c: i64) -> Result<SkewBrace, BraceError> {
        assert!(n > 0, "carrier must be non-empty");
        let m = n as i64;
        let mul: Vec<usize> = (0..n * n)
            .map(|i| {
                let (x, y) = ((i / n) as i64, (i % n) as i64);
                (x + y + c.rem_euclid(m) * x % m * y).rem_euclid(m) as usize
            })
            .collect();
        let mul = GroupTable::from_flat(n, mul).map_err(BraceError::MulNotGroup)?;
        verify_skew_brace(GroupTable::cyclic(n), mul)
    }

    /// Serializable row form.
    pub fn to_json(&self) -> BraceJson {
        BraceJson {
            n: self.n,
            add: self.add_rows(),
            mul: self.mul_rows(),
        }
    }

    /// Identifier-friendly canonical byte key of the two tables.
    pub fn table_key(&self) -> Vec<usize> {
        let mut k = Vec::with_capacity(2 * self.n * self.n);
        k.extend_from_slice(self.add.table());
        k.extend_from_slice(self.mul.table());
        k
    }
}

/// Structural flags of a skew brace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceFlags {
    pub trivial: bool,
    pub two_sided: bool,
    pub abelian_type: bool,
    pub nilpotent_type: bool,
    pub add_nilpotency_class: Option<usize>,
    pub mul_nilpotent: bool,
    pub mul_nilpotency_class: Option<usize>,
}

/// Wire form `{"n": int, "add": [[int]], "mul": [[int]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraceJson {
    pub n: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl BraceJson {
    pub fn validate(&self) -> Result<Relabeled<SkewBrace>, BraceError> {
        if self.add.len() != self.n {
            return Err(BraceError::SizeMismatch {
                add: self.add.len(),
                mul: self.mul.len(),
            });
        }
        SkewBrace::from_rows(&self.add, &self.mul)
    }
}

/// Relabels a flat table pair; used by canonical-form searches.
pub(crate) fn relabeled_key(b: &SkewBrace, perm: &[usize]) -> Vec<usize> {
    let n = b.order();
    let mut k = relabel_table(n, b.add.table(), perm);
    k.extend(relabel_table(n, b.mul.table(), perm));
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad4() -> SkewBrace {
        SkewBrace::from_zn_quadratic(4, 2).unwrap()
    }

    #[test]
    fn trivial_brace_on_z2() {
        let z2 = GroupTable::cyclic(2);
        let b = verify_skew_brace(z2.clone(), z2).unwrap();
        for a in 0..2 {
            assert_eq!(b.lambda_map(a), &[0, 1]);
            for x in 0..2 {
                assert_eq!(b.star(a, x), 0);
            }
        }
        let f = b.classify_flags();
        assert!(f.trivial && f.two_sided && f.abelian_type && f.nilpotent_type && f.mul_nilpotent);
        assert_eq!(f.add_nilpotency_class, Some(1));
        assert_eq!(f.mul_nilpotency_class, Some(1));
    }

    #[test]
    fn quadratic_z4_lambda_and_star() {
        let b = quad4();
        // λ_1(b) = -1 + (1 + b + 2b) = 3b mod 4
        let oracle: Vec<usize> = (0..4).map(|x: i64| ((3 * x).rem_euclid(4)) as usize).collect();
        assert_eq!(b.lambda_map(1), oracle.as_slice());
        assert_eq!(b.lambda_map(1), &[0, 3, 2, 1]);
        assert_eq!(b.lambda_map(2), &[0, 1, 2, 3]);
        assert_eq!(b.star(1, 1), 2);
        for x in 0..4 {
            assert_eq!(b.star(2, x), 0);
            for y in 0..4 {
                assert_eq!(b.star(x, y), 2 * x * y % 4);
            }
        }
    }

    #[test]
    fn quadratic_z4_flags() {
        let f = quad4().classify_flags();
        assert!(f.nilpotent_type && f.abelian_type && f.mul_nilpotent);
        assert!(!f.trivial);
        assert_eq!(f.mul_nilpotency_class, Some(1));
        // Klein four: every non-identity element is an involution.
        let b = quad4();
        assert!((1..4).all(|x| b.mul_group().element_order(x) == 2));
    }

    #[test]
    fn linear_z4_operation_is_not_a_group() {
        // x∘y = x + y + xy mod 4, computed directly.
        let rows: Vec<Vec<usize>> = (0..4).map(|x| (0..4).map(|y| (x + y + x * y) % 4).collect()).collect();
        assert_eq!(rows[1], vec![1, 3, 1, 3]);
        assert_eq!(rows[3][3], 3);
        let err = SkewBrace::from_zn_quadratic(4, 1).unwrap_err();
        assert!(matches!(err, BraceError::MulNotGroup(GroupError::NotLatin { .. })));
        let err = SkewBrace::from_rows(&GroupTable::cyclic(4).rows(), &rows).unwrap_err();
        assert!(matches!(err, BraceError::MulNotGroup(_)));
    }

    #[test]
    fn zn_quadratic_c1_on_z2_is_not_a_brace() {
        assert!(matches!(
            SkewBrace::from_zn_quadratic(2, 1).unwrap_err(),
            BraceError::MulNotGroup(_)
        ));
    }

    #[test]
    fn almost_trivial_sym3() {
        let s3 = GroupTable::symmetric(3);
        let b = SkewBrace::almost_trivial_from_group(&s3);
        // Brace law re-checked directly on all 216 triples.
        let mut count = 0;
        for x in 0..6 {
            for y in 0..6 {
                for z in 0..6 {
                    let lhs = s3.op(s3.op(y, z), x);
                    let rhs = s3.op(s3.op(s3.op(y, x), s3.inv(x)), s3.op(z, x));
                    assert_eq!(lhs, rhs);
                    count += 1;
                }
            }
        }
        assert_eq!(count, 216);
        assert!(verify_skew_brace(b.add_group().clone(), b.mul_group().clone()).is_ok());
        assert!(!b.classify_flags().nilpotent_type);
    }

    #[test]
    fn brace_law_violation_is_reported() {
        // ℤ/4 relabeled by the transposition (1 2): λ_2 would send 2 to 3.
        let swap = [0usize, 2, 1, 3];
        let mul: Vec<usize> = (0..16).map(|i| swap[(swap[i / 4] + swap[i % 4]) % 4]).collect();
        let mul = GroupTable::from_flat(4, mul).unwrap();
        let err = verify_skew_brace(GroupTable::cyclic(4), mul).unwrap_err();
        assert!(matches!(err, BraceError::BraceLawViolated { .. }));
        let err = verify_skew_brace(GroupTable::cyclic(4), GroupTable::cyclic(2)).unwrap_err();
        assert_eq!(err, BraceError::SizeMismatch { add: 4, mul: 2 });
    }

    #[test]
    fn xor_on_z4_is_the_quadratic_brace() {
        let klein = GroupTable::cyclic(2).direct_product(&GroupTable::cyclic(2));
        let b = verify_skew_brace(GroupTable::cyclic(4), klein).unwrap();
        assert_eq!(b, quad4());
    }

    #[test]
    fn quotients() {
        let b = quad4();
        let (q, proj) = b.quotient(&Subset::full(4)).unwrap();
        assert_eq!(q.order(), 1);
        assert_eq!(proj, vec![0; 4]);
        let (q, proj) = b.quotient(&Subset::zero(4)).unwrap();
        assert_eq!(q, b);
        assert_eq!(proj, vec![0, 1, 2, 3]);
        let (q, proj) = b.quotient(&Subset::from_elements(4, [0, 2])).unwrap();
        assert_eq!(proj, vec![0, 1, 0, 1]);
        assert!(q.is_trivial());
        assert_eq!(q.order(), 2);
        assert!(matches!(
            b.quotient(&Subset::from_elements(4, [0, 1])).unwrap_err(),
            BraceError::NotAnIdeal(_)
        ));
    }

    #[test]
    fn rows_roundtrip_with_relabeling() {
        let b = quad4();
        let swap = [2usize, 1, 0, 3];
        let permute = |rows: &Vec<Vec<usize>>| {
            let mut out = vec![vec![0; 4]; 4];
            for a in 0..4 {
                for c in 0..4 {
                    out[swap[a]][swap[c]] = swap[rows[a][c]];
                }
            }
            out
        };
        let r = SkewBrace::from_rows(&permute(&b.add_rows()), &permute(&b.mul_rows())).unwrap();
        assert!(r.moved());
        assert_eq!(r.value, b);
    }

    #[test]
    fn json_validates() {
        let b = quad4();
        let js = serde_json::to_string(&b.to_json()).unwrap();
        let back: BraceJson = serde_json::from_str(&js).unwrap();
        assert_eq!(back.validate().unwrap().value, b);
    }
}

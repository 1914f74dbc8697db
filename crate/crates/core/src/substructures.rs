//! Sub skew braces, ideals, ∗-products of subsets, socle and annihilator,
//! the lattice of sub skew braces, the radical and idealizers.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::brace::SkewBrace;
use crate::subset::Subset;

/// Carrier size above which the sub skew brace lattice is not enumerated.
pub const DEFAULT_LATTICE_BUDGET: usize = 48;

/// The first ideal condition that fails, with the offending elements.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum IdealViolation {
    #[error("does not contain 0")]
    MissingZero,
    #[error("not an additive subgroup: {a} + {b} escapes")]
    NotAddSubgroup { a: usize, b: usize },
    #[error("not λ-invariant: λ_{a}({x}) escapes")]
    NotLambdaInvariant { a: usize, x: usize },
    #[error("not normal in (B,+): {a} + {x} - {a} escapes")]
    NotAddNormal { a: usize, x: usize },
    #[error("not normal in (B,∘): {a}∘{x}∘ā escapes")]
    NotMulNormal { a: usize, x: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstructureError {
    #[error("carrier of size {n} exceeds the lattice budget {budget}")]
    BudgetExceeded { n: usize, budget: usize },
    #[error("subset is not a sub skew brace")]
    NotASubBrace,
    #[error("idealizer is not unique: {0:?} and {1:?} are incomparable maxima")]
    NoUniqueMaximum(Subset, Subset),
}

/// Which group operation a commutator refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Op {
    Add,
    Mul,
}

/// `I` is an ideal: an additive subgroup, λ-invariant, and normal in both groups.
pub fn is_ideal(b: &SkewBrace, ideal: &Subset) -> Result<(), IdealViolation> {
    is_ideal_in(b, &Subset::full(b.order()), ideal)
}

/// Ideal test relative to a sub skew brace `ambient`: conjugating and λ
/// elements range over `ambient` only.
pub fn is_ideal_in(b: &SkewBrace, ambient: &Subset, ideal: &Subset) -> Result<(), IdealViolation> {
    if !ideal.contains(0) {
        return Err(IdealViolation::MissingZero);
    }
    for x in ideal.iter() {
        for y in ideal.iter() {
            if !ideal.contains(b.add(x, y)) {
                return Err(IdealViolation::NotAddSubgroup { a: x, b: y });
            }
        }
    }
    for a in ambient.iter() {
        for x in ideal.iter() {
            if !ideal.contains(b.lambda(a, x)) {
                return Err(IdealViolation::NotLambdaInvariant { a, x });
            }
        }
    }
    for a in ambient.iter() {
        for x in ideal.iter() {
            if !ideal.contains(b.add_group().conj(a, x)) {
                return Err(IdealViolation::NotAddNormal { a, x });
            }
        }
    }
    for a in ambient.iter() {
        for x in ideal.iter() {
            if !ideal.contains(b.mul_group().conj(a, x)) {
                return Err(IdealViolation::NotMulNormal { a, x });
            }
        }
    }
    Ok(())
}

/// An additive subgroup invariant under every `λ_a`.
pub fn is_left_ideal(b: &SkewBrace, s: &Subset) -> bool {
    b.add_group().is_subgroup(s) && (0..b.order()).all(|a| s.iter().all(|x| s.contains(b.lambda(a, x))))
}

pub fn is_subbrace(b: &SkewBrace, s: &Subset) -> bool {
    b.add_group().is_subgroup(s) && b.mul_group().is_subgroup(s)
}

/// Additive subgroup generated by `s`.
pub fn add_closure(b: &SkewBrace, s: &Subset) -> Subset {
    b.add_group().subgroup_generated(s.iter())
}

/// Smallest sub skew brace containing `s ∪ {0}`.
pub fn subbrace_closure(b: &SkewBrace, s: &Subset) -> Subset {
    let mut cur = add_closure(b, s);
    loop {
        let next = b.mul_group().subgroup_generated(cur.iter());
        if next == cur {
            return cur;
        }
        let next = add_closure(b, &next);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// `generates(S)` iff the sub skew brace generated by `S` is all of `B`.
pub fn generates(b: &SkewBrace, s: &Subset) -> bool {
    subbrace_closure(b, s).is_full()
}

/// The ideal generated by `s`: least fixpoint of additive closure,
/// λ-images and conjugation in both groups.
pub fn ideal_generated(b: &SkewBrace, s: &Subset) -> Subset {
    let n = b.order();
    let mut cur = add_closure(b, s);
    loop {
        let mut next = cur.clone();
        for x in cur.iter() {
            for a in 0..n {
                next.insert(b.lambda(a, x));
                next.insert(b.add_group().conj(a, x));
                next.insert(b.mul_group().conj(a, x));
            }
        }
        let next = add_closure(b, &next);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// `X ∗ Y`: the additive subgroup generated by `{x ∗ y}`.
pub fn star_sets(b: &SkewBrace, xs: &Subset, ys: &Subset) -> Subset {
    let mut prods = Subset::empty(b.order());
    for x in xs.iter() {
        for y in ys.iter() {
            prods.insert(b.star(x, y));
        }
    }
    add_closure(b, &prods)
}

/// `[X, Y]` in the chosen operation: the subgroup generated by commutators.
pub fn commutator(b: &SkewBrace, xs: &Subset, ys: &Subset, op: Op) -> Subset {
    match op {
        Op::Add => b.add_group().commutator_subgroup(xs, ys),
        Op::Mul => b.mul_group().commutator_subgroup(xs, ys),
    }
}

/// The element-wise sum set `{a + c : a ∈ A, c ∈ C}`.
pub fn sum_set(b: &SkewBrace, xs: &Subset, ys: &Subset) -> Subset {
    let mut out = Subset::empty(b.order());
    for x in xs.iter() {
        for y in ys.iter() {
            out.insert(b.add(x, y));
        }
    }
    out
}

/// Centres, kernel of λ, fixed points, socle and annihilator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantSubstructures {
    pub z_add: Subset,
    pub z_mul: Subset,
    pub ker_lambda: Subset,
    pub fix: Subset,
    pub soc: Subset,
    pub ann: Subset,
}

pub fn invariant_substructures(b: &SkewBrace) -> InvariantSubstructures {
    let n = b.order();
    let z_add = b.add_group().center();
    let z_mul = b.mul_group().center();
    let ker_lambda = Subset::from_elements(n, (0..n).filter(|&a| (0..n).all(|x| b.lambda(a, x) == x)));
    let fix = Subset::from_elements(n, (0..n).filter(|&x| (0..n).all(|a| b.lambda(a, x) == x)));
    let soc = ker_lambda.intersection(&z_add);
    let ann = soc.intersection(&fix);
    // Ann(B) = {x : x∘a = a∘x = x+a = a+x for all a}.
    let direct = Subset::from_elements(
        n,
        (0..n).filter(|&x| {
            (0..n).all(|a| {
                let s = b.add(x, a);
                b.mul(x, a) == s && b.mul(a, x) == s && b.add(a, x) == s
            })
        }),
    );
    assert_eq!(ann, direct, "the two annihilator computations disagree");
    InvariantSubstructures {
        z_add,
        z_mul,
        ker_lambda,
        fix,
        soc,
        ann,
    }
}

/// Orbits of the group `{λ_a}` on the carrier, ordered by least element.
pub fn lambda_orbits(b: &SkewBrace) -> Vec<Subset> {
    let n = b.order();
    let mut seen = Subset::empty(n);
    let mut orbits = Vec::new();
    for start in 0..n {
        if seen.contains(start) {
            continue;
        }
        let mut orbit = Subset::from_elements(n, [start]);
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for a in 0..n {
                let y = b.lambda(a, x);
                if orbit.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen = seen.union(&orbit);
        orbits.push(orbit);
    }
    orbits
}

/// All sub skew braces of `b`, sorted by size then elements.
pub fn subbrace_lattice(b: &SkewBrace, budget: usize) -> Result<Vec<Subset>, SubstructureError> {
    let n = b.order();
    if n > budget {
        return Err(SubstructureError::BudgetExceeded { n, budget });
    }
    let mut cyclic: Vec<Subset> = Vec::new();
    for x in 0..n {
        let c = subbrace_closure(b, &Subset::from_elements(n, [x]));
        if !cyclic.contains(&c) {
            cyclic.push(c);
        }
    }
    // Every sub skew brace is a join of singly generated ones.
    let mut found: HashSet<Subset> = cyclic.iter().cloned().collect();
    let mut queue: Vec<Subset> = cyclic.clone();
    while let Some(a) = queue.pop() {
        for c in &cyclic {
            if c.is_subset(&a) {
                continue;
            }
            let j = subbrace_closure(b, &a.union(c));
            if found.insert(j.clone()) {
                queue.push(j);
            }
        }
    }
    let mut all: Vec<Subset> = found.into_iter().collect();
    all.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.to_vec().cmp(&y.to_vec())));
    Ok(all)
}

/// Maximal members of a family of proper subsets (under inclusion).
fn maximal_proper(family: &[Subset], n: usize) -> Vec<Subset> {
    let proper: Vec<&Subset> = family.iter().filter(|s| s.len() < n).collect();
    proper
        .iter()
        .filter(|s| !proper.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .map(|s| (*s).clone())
        .collect()
}

pub fn maximal_subbraces(b: &SkewBrace, lattice: &[Subset]) -> Vec<Subset> {
    maximal_proper(lattice, b.order())
}

pub fn ideals(b: &SkewBrace, lattice: &[Subset]) -> Vec<Subset> {
    lattice.iter().filter(|s| is_ideal(b, s).is_ok()).cloned().collect()
}

pub fn maximal_ideals(b: &SkewBrace, lattice: &[Subset]) -> Vec<Subset> {
    maximal_proper(&ideals(b, lattice), b.order())
}

/// Intersection of a family, or the whole carrier for an empty family.
pub fn intersect_all(n: usize, family: &[Subset]) -> Subset {
    family.iter().fold(Subset::full(n), |acc, s| acc.intersection(s))
}

/// `Rad(B)`: the intersection of all maximal ideals (`B` if there are none).
pub fn radical(b: &SkewBrace, lattice: &[Subset]) -> Subset {
    intersect_all(b.order(), &maximal_ideals(b, lattice))
}

/// Result of an idealizer computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Idealizer {
    pub idealizer: Subset,
    /// The largest sub skew brace `A ⊇ H` with `A∗H ⊆ H`, `H∗A ⊆ H` and
    /// `[H,A]₊ ⊆ H`, when it exists uniquely.
    pub by_products: Option<Subset>,
    pub characterizations_agree: bool,
}

/// Largest sub skew brace containing `h` in which `h` is an ideal.
pub fn idealizer(b: &SkewBrace, h: &Subset, lattice: &[Subset]) -> Result<Idealizer, SubstructureError> {
    if !is_subbrace(b, h) {
        return Err(SubstructureError::NotASubBrace);
    }
    let normalizing: Vec<Subset> = lattice
        .iter()
        .filter(|a| h.is_subset(a) && is_ideal_in(b, a, h).is_ok())
        .cloned()
        .collect();
    let idealizer = unique_maximum(&normalizing)?;
    let by_products: Vec<Subset> = lattice
        .iter()
        .filter(|a| {
            h.is_subset(a)
                && star_sets(b, a, h).is_subset(h)
                && star_sets(b, h, a).is_subset(h)
                && commutator(b, h, a, Op::Add).is_subset(h)
        })
        .cloned()
        .collect();
    let by_products = unique_maximum(&by_products).ok();
    let characterizations_agree = by_products.as_ref() == Some(&idealizer);
    Ok(Idealizer {
        idealizer,
        by_products,
        characterizations_agree,
    })
}

fn unique_maximum(family: &[Subset]) -> Result<Subset, SubstructureError> {
    let maxima: Vec<&Subset> = family
        .iter()
        .filter(|s| !family.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .collect();
    match maxima.as_slice() {
        [one] => Ok((*one).clone()),
        [a, c, ..] => Err(SubstructureError::NoUniqueMaximum((*a).clone(), (*c).clone())),
        [] => Err(SubstructureError::NotASubBrace),
    }
}

/// Iterated idealizers `A = H₁ ⊊ H₂ ⊊ … ⊊ Hₖ = B`, each an ideal of the next.
///
/// Returns `None` when some idealizer fails to grow before reaching `B`.
pub fn subideal_chain(b: &SkewBrace, a: &Subset, lattice: &[Subset]) -> Result<Option<Vec<Subset>>, SubstructureError> {
    let mut chain = vec![a.clone()];
    while !chain.last().unwrap().is_full() {
        let next = idealizer(b, chain.last().unwrap(), lattice)?.idealizer;
        if &next == chain.last().unwrap() {
            return Ok(None);
        }
        chain.push(next);
    }
    Ok(Some(chain))
}

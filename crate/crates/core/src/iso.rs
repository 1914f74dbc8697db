//! Isomorphism search for finite structures given by Cayley tables.
//!
//! A map is built by choosing images for a generating set of one operation
//! and extending it along products; the remaining operations are checked
//! on all pairs once the map is total.

use serde::Serialize;

use crate::brace::SkewBrace;
use crate::group::GroupTable;
use crate::subset::Subset;
use crate::substructures::{invariant_substructures, lambda_orbits, star_sets};

const UNMAPPED: usize = usize::MAX;

/// A set `0..n` with several binary operations (flat `n×n` tables), the first
/// of which is a group with identity 0, and per-element invariants.
pub struct TableStructure<'a> {
    pub n: usize,
    pub ops: Vec<&'a [usize]>,
    pub invariants: Vec<u64>,
}

/// Greedy generating set of the group given by `table`, taking elements of
/// rarest invariant first so that the search has few candidates per level.
fn generators(s: &TableStructure) -> Vec<usize> {
    let n = s.n;
    let g = GroupTable::from_trusted(n, s.ops[0].to_vec());
    let mut freq = std::collections::HashMap::new();
    for &v in &s.invariants {
        *freq.entry(v).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&x| (freq[&s.invariants[x]], std::cmp::Reverse(g.element_order(x)), x));
    let mut gens = Vec::new();
    let mut h = Subset::zero(n);
    for x in order {
        if !h.contains(x) {
            gens.push(x);
            h = g.subgroup_generated(gens.iter().copied());
            if h.is_full() {
                break;
            }
        }
    }
    gens
}

struct Search<'a, 'b> {
    src: &'b TableStructure<'a>,
    dst: &'b TableStructure<'a>,
    gens: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    mapped: Vec<usize>,
}

impl Search<'_, '_> {
    fn assign(&mut self, x: usize, y: usize) -> bool {
        if self.map[x] != UNMAPPED {
            return self.map[x] == y;
        }
        if self.used[y] || self.src.invariants[x] != self.dst.invariants[y] {
            return false;
        }
        self.map[x] = y;
        self.used[y] = true;
        self.mapped.push(x);
        true
    }

    fn undo(&mut self, len: usize) {
        for x in self.mapped.drain(len..) {
            self.used[self.map[x]] = false;
            self.map[x] = UNMAPPED;
        }
    }

    /// Closes the partial map under right multiplication by `gens[..=depth]`.
    fn close(&mut self, depth: usize) -> bool {
        let n = self.src.n;
        let (sop, dop) = (self.src.ops[0], self.dst.ops[0]);
        let mut p = 0;
        while p < self.mapped.len() {
            let x = self.mapped[p];
            for j in 0..=depth {
                let g = self.gens[j];
                let z = sop[x * n + g];
                let w = dop[self.map[x] * n + self.map[g]];
                if !self.assign(z, w) {
                    return false;
                }
            }
            p += 1;
        }
        true
    }

    fn verify_rest(&self) -> bool {
        let n = self.src.n;
        self.src
            .ops
            .iter()
            .zip(&self.dst.ops)
            .skip(1)
            .all(|(s, d)| (0..n).all(|a| (0..n).all(|b| self.map[s[a * n + b]] == d[self.map[a] * n + self.map[b]])))
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.gens.len() {
            debug_assert!(self.mapped.len() == self.src.n);
            return if self.verify_rest() { visit(&self.map) } else { true };
        }
        let g = self.gens[depth];
        let n = self.src.n;
        for y in 0..n {
            if self.used[y] || self.src.invariants[g] != self.dst.invariants[y] {
                continue;
            }
            let len = self.mapped.len();
            if self.assign(g, y) && self.close(depth) && !self.run(depth + 1, visit) {
                return false;
            }
            self.undo(len);
        }
        true
    }
}

/// Calls `visit` on every isomorphism `src → dst` until it returns `false`.
pub fn for_each_isomorphism(src: &TableStructure, dst: &TableStructure, mut visit: impl FnMut(&[usize]) -> bool) {
    if src.n != dst.n || src.ops.len() != dst.ops.len() {
        return;
    }
    let mut si = src.invariants.clone();
    let mut di = dst.invariants.clone();
    si.sort_unstable();
    di.sort_unstable();
    if si != di {
        return;
    }
    let n = src.n;
    let mut search = Search {
        src,
        dst,
        gens: generators(src),
        map: vec![UNMAPPED; n],
        used: vec![false; n],
        mapped: Vec::new(),
    };
    if !search.assign(0, 0) {
        return;
    }
    search.run(0, &mut visit);
}

pub fn find_isomorphism(src: &TableStructure, dst: &TableStructure) -> Option<Vec<usize>> {
    let mut found = None;
    for_each_isomorphism(src, dst, |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

fn pack(fields: &[usize]) -> u64 {
    // Order-sensitive mix; only equality matters.
    fields.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &f| {
        (h ^ f as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Per-element invariants of a skew brace: additive and multiplicative
/// element orders and centralizer sizes, λ-orbit size and `|fix λ_a|`.
pub fn brace_element_invariants(b: &SkewBrace) -> Vec<u64> {
    let n = b.order();
    let mut orbit_size = vec![0; n];
    for o in lambda_orbits(b) {
        for x in o.iter() {
            orbit_size[x] = o.len();
        }
    }
    let (add, mul) = (b.add_group(), b.mul_group());
    (0..n)
        .map(|a| {
            let fixed = (0..n).filter(|&x| b.lambda(a, x) == x).count();
            pack(&[
                add.element_order(a),
                mul.element_order(a),
                add.centralizer_size(a),
                mul.centralizer_size(a),
                orbit_size[a],
                fixed,
            ])
        })
        .collect()
}

fn brace_structure(b: &SkewBrace) -> TableStructure<'_> {
    TableStructure {
        n: b.order(),
        ops: vec![b.mul_group().table(), b.add_group().table()],
        invariants: brace_element_invariants(b),
    }
}

fn group_structure(g: &GroupTable) -> TableStructure<'_> {
    TableStructure {
        n: g.order(),
        ops: vec![g.table()],
        invariants: g.element_invariants(),
    }
}

/// A bijection `φ` with `φ(0) = 0` carrying both operations of `b1` onto
/// those of `b2`, if one exists.
pub fn isomorphic(b1: &SkewBrace, b2: &SkewBrace) -> Option<Vec<usize>> {
    find_isomorphism(&brace_structure(b1), &brace_structure(b2))
}

pub fn group_isomorphism(g1: &GroupTable, g2: &GroupTable) -> Option<Vec<usize>> {
    find_isomorphism(&group_structure(g1), &group_structure(g2))
}

/// Every automorphism of `g` as an image array.
pub fn group_automorphism_list(g: &GroupTable) -> Vec<Vec<usize>> {
    let s = group_structure(g);
    let mut out = Vec::new();
    for_each_isomorphism(&s, &s, |m| {
        out.push(m.to_vec());
        true
    });
    out
}

/// Isomorphism-invariant summary used to bucket braces before pairwise tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BraceFingerprint {
    pub n: usize,
    pub add: Vec<u64>,
    pub mul: Vec<u64>,
    pub elements: Vec<u64>,
    /// `|B∗B|`, `|Soc|`, `|Ann|`, `|Fix|`.
    pub sizes: [usize; 4],
}

pub fn brace_fingerprint(b: &SkewBrace) -> BraceFingerprint {
    let mut elements = brace_element_invariants(b);
    elements.sort_unstable();
    let full = Subset::full(b.order());
    let inv = invariant_substructures(b);
    BraceFingerprint {
        n: b.order(),
        add: b.add_group().fingerprint(),
        mul: b.mul_group().fingerprint(),
        elements,
        sizes: [
            star_sets(b, &full, &full).len(),
            inv.soc.len(),
            inv.ann.len(),
            inv.fix.len(),
        ],
    }
}

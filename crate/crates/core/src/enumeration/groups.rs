//! Groups of order at most 48 by cyclic extension, and automorphism groups.

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::EnumError;
use crate::group::{generate_elements, GroupTable};
use crate::iso::{group_automorphism_list, group_isomorphism};
use crate::perm::Perm;

pub const MAX_GROUP_ORDER: usize = 48;

/// Numbers of groups of order 1..=16.
pub const EXPECTED_GROUP_COUNTS: [usize; 16] = [1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub n: usize,
    pub table: Vec<Vec<usize>>,
}

impl From<&GroupTable> for GroupJson {
    fn from(g: &GroupTable) -> Self {
        GroupJson {
            n: g.order(),
            table: g.rows(),
        }
    }
}

/// `Aut(G)` as a list of image arrays, with a small generating set.
#[derive(Debug, Clone)]
pub struct AutomorphismGroup {
    pub elements: Vec<Perm>,
    pub generators: Vec<Perm>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

pub fn automorphisms(g: &GroupTable) -> AutomorphismGroup {
    let elements: Vec<Perm> = group_automorphism_list(g)
        .into_iter()
        .map(|m| Perm::from_images(m).expect("automorphisms are bijections"))
        .collect();
    let n = g.order();
    let mut generators = Vec::new();
    let mut generated: HashSet<Perm> = HashSet::from([Perm::identity(n)]);
    for a in &elements {
        if generated.contains(a) {
            continue;
        }
        generators.push(a.clone());
        let all = generate_elements(Perm::identity(n), &generators, |x, y| x.compose(y), usize::MAX)
            .expect("unbounded closure");
        generated = all.into_iter().collect();
        if generated.len() == elements.len() {
            break;
        }
    }
    AutomorphismGroup { elements, generators }
}

/// Representatives of the conjugacy classes of `Aut(N)`, by orbits under
/// conjugation by its generators.
fn conjugacy_representatives(aut: &AutomorphismGroup) -> Vec<Perm> {
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut reps = Vec::new();
    for a in &aut.elements {
        if seen.contains(a) {
            continue;
        }
        reps.push(a.clone());
        seen.insert(a.clone());
        let mut stack = vec![a.clone()];
        while let Some(x) = stack.pop() {
            for s in &aut.generators {
                let y = s.conjugate(&x);
                if seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
    }
    reps
}

fn primes_dividing(n: usize) -> Vec<usize> {
    (2..=n)
        .filter(|&p| n.is_multiple_of(p) && (2..p).all(|d| p % d != 0))
        .collect()
}

/// The extension `⟨N, t⟩` with `t y t⁻¹ = φ(y)` and `tᵖ = h`, on elements
/// `x tⁱ ↦ i·|N| + x`.
fn cyclic_extension(nn: &GroupTable, p: usize, phi: &Perm, h: usize) -> GroupTable {
    let m = nn.order();
    let n = m * p;
    let mut powers = vec![Perm::identity(m)];
    for i in 1..p {
        powers.push(phi.compose(&powers[i - 1]));
    }
    let mut table = vec![0; n * n];
    for i in 0..p {
        for x in 0..m {
            for j in 0..p {
                for y in 0..m {
                    let mut z = nn.op(x, powers[i].apply(y));
                    if i + j >= p {
                        z = nn.op(z, h);
                    }
                    table[(i * m + x) * n + j * m + y] = ((i + j) % p) * m + z;
                }
            }
        }
    }
    GroupTable::from_flat(n, table).expect("extension data satisfies the group axioms")
}

fn memo() -> &'static Mutex<HashMap<usize, Vec<GroupTable>>> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Vec<GroupTable>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All groups of order `n` up to isomorphism.
///
/// Every group of order at most 48 is solvable and so has a normal subgroup
/// of prime index; each is therefore a cyclic extension of a smaller group.
pub fn groups_of_order(n: usize) -> Result<Vec<GroupTable>, EnumError> {
    if n == 0 || n > MAX_GROUP_ORDER {
        return Err(EnumError::BudgetExceeded {
            order: n,
            limit: MAX_GROUP_ORDER,
        });
    }
    if let Some(v) = memo().lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let found = if n == 1 {
        vec![GroupTable::trivial()]
    } else {
        let mut buckets: HashMap<Vec<u64>, Vec<GroupTable>> = HashMap::new();
        for p in primes_dividing(n) {
            for nn in groups_of_order(n / p)? {
                let aut = automorphisms(&nn);
                for phi in conjugacy_representatives(&aut) {
                    let phi_p = (0..p).fold(Perm::identity(nn.order()), |acc, _| phi.compose(&acc));
                    for h in 0..nn.order() {
                        if phi.apply(h) != h || (0..nn.order()).any(|y| phi_p.apply(y) != nn.conj(h, y)) {
                            continue;
                        }
                        let g = cyclic_extension(&nn, p, &phi, h);
                        let bucket = buckets.entry(g.fingerprint()).or_default();
                        if !bucket.iter().any(|o| group_isomorphism(o, &g).is_some()) {
                            bucket.push(g);
                        }
                    }
                }
            }
        }
        let mut all: Vec<GroupTable> = buckets.into_values().flatten().collect();
        all.sort_by(|a, b| (a.fingerprint(), a.table()).cmp(&(b.fingerprint(), b.table())));
        all
    };
    if n <= EXPECTED_GROUP_COUNTS.len() {
        assert_eq!(found.len(), EXPECTED_GROUP_COUNTS[n - 1], "group count at order {n}");
    }
    memo().lock().unwrap().insert(n, found.clone());
    Ok(found)
}

//! Finite set-theoretic solutions `r(x,y) = (σ_x(y), τ_y(x))` of the
//! Yang–Baxter equation, their retractions and permutation skew braces.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brace::{verify_skew_brace, BraceError, SkewBrace};
use crate::group::{generate_elements, GroupError, GroupTable};
use crate::perm::Perm;
use crate::series::{nilpotency_report, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("expected {n} permutations of 0..{n} in each family")]
    Shape { n: usize },
    #[error("{family}_{index} is not a permutation")]
    Degenerate { family: &'static str, index: usize },
    #[error("r is not injective: ({x},{y}) and ({x2},{y2}) have the same image")]
    NotBijective { x: usize, y: usize, x2: usize, y2: usize },
    #[error("braid relation fails at ({x},{y},{z})")]
    BraidFailed { x: usize, y: usize, z: usize },
    #[error("retraction is ill-defined at x={x}")]
    InducedMapsIllDefined { x: usize },
    #[error("group closure exceeded the budget of {0} elements")]
    BudgetExceeded(usize),
    #[error("additive structure reached only {reached} of {total} elements")]
    AdditiveGenerationFailed { reached: usize, total: usize },
    #[error("permutation brace failed validation: {0}")]
    BraceValidationFailed(String),
    #[error("multipermutation={multipermutation} but right nilpotent of nilpotent type={brace_side}")]
    EquivalenceViolated { multipermutation: bool, brace_side: bool },
    #[error("nilpotency cross-check failed: {0}")]
    Series(SeriesError),
}

/// A validated non-degenerate bijective solution on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    n: usize,
    sigma: Vec<Perm>,
    tau: Vec<Perm>,
    involutive: bool,
}

/// Wire form; `tau` may be omitted for involutive solutions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub n: usize,
    pub sigma: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<Vec<usize>>>,
}

fn to_perms(n: usize, rows: Vec<Vec<usize>>, family: &'static str) -> Result<Vec<Perm>, SolutionError> {
    if rows.len() != n {
        return Err(SolutionError::Shape { n });
    }
    rows.into_iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != n {
                return Err(SolutionError::Shape { n });
            }
            Perm::from_images(r).ok_or(SolutionError::Degenerate { family, index: i })
        })
        .collect()
}

impl SolutionJson {
    pub fn validate(self) -> Result<Solution, SolutionError> {
        let sigma = to_perms(self.n, self.sigma, "sigma")?;
        match self.tau {
            Some(t) => verify_solution(sigma, to_perms(self.n, t, "tau")?),
            None => involutive_from_sigma(sigma),
        }
    }
}

/// Checks bijectivity of `r` and the braid relation on every triple.
#[allow(clippy::needless_range_loop)]
pub fn verify_solution(sigma: Vec<Perm>, tau: Vec<Perm>) -> Result<Solution, SolutionError> {
    let n = sigma.len();
    if tau.len() != n || sigma.iter().chain(&tau).any(|p| p.len() != n) {
        return Err(SolutionError::Shape { n });
    }
    let mut seen = vec![usize::MAX; n * n];
    for x in 0..n {
        for y in 0..n {
            let img = sigma[x].apply(y) * n + tau[y].apply(x);
            if seen[img] != usize::MAX {
                let (x2, y2) = (seen[img] / n, seen[img] % n);
                return Err(SolutionError::NotBijective {
                    x: x2,
                    y: y2,
                    x2: x,
                    y2: y,
                });
            }
            seen[img] = x * n + y;
        }
    }
    let s = |x: usize, y: usize| sigma[x].apply(y);
    let t = |y: usize, x: usize| tau[y].apply(x);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (a, b) = (s(x, y), t(y, x));
                let (c, d) = (s(b, z), t(z, b));
                let lhs = (s(a, c), t(c, a), d);
                let (e, f) = (s(y, z), t(z, y));
                let (g, h) = (s(x, e), t(e, x));
                let rhs = (g, s(h, f), t(f, h));
                if lhs != rhs {
                    return Err(SolutionError::BraidFailed { x, y, z });
                }
            }
        }
    }
    let involutive = (0..n).all(|x| {
        (0..n).all(|y| {
            let (u, v) = (s(x, y), t(y, x));
            s(u, v) == x && t(v, u) == y
        })
    });
    Ok(Solution {
        n,
        sigma,
        tau,
        involutive,
    })
}

/// Builds `τ_y(x) = σ⁻¹_{σ_x(y)}(x)` and validates the result.
pub fn involutive_from_sigma(sigma: Vec<Perm>) -> Result<Solution, SolutionError> {
    let n = sigma.len();
    if sigma.iter().any(|p| p.len() != n) {
        return Err(SolutionError::Shape { n });
    }
    let inv: Vec<Perm> = sigma.iter().map(Perm::inverse).collect();
    let tau = (0..n)
        .map(|y| {
            let images = (0..n).map(|x| inv[sigma[x].apply(y)].apply(x)).collect();
            Perm::from_images(images).ok_or(SolutionError::Degenerate {
                family: "tau",
                index: y,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    verify_solution(sigma, tau)
}

impl Solution {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn sigma(&self, x: usize) -> &Perm {
        &self.sigma[x]
    }

    pub fn tau(&self, y: usize) -> &Perm {
        &self.tau[y]
    }

    pub fn is_involutive(&self) -> bool {
        self.involutive
    }

    pub fn apply(&self, x: usize, y: usize) -> (usize, usize) {
        (self.sigma[x].apply(y), self.tau[y].apply(x))
    }

    /// The flip `r(x,y) = (y,x)` on `n` points.
    pub fn flip(n: usize) -> Solution {
        let id = vec![Perm::identity(n); n];
        verify_solution(id.clone(), id).expect("the flip is a solution")
    }

    pub fn to_json(&self) -> SolutionJson {
        SolutionJson {
            n: self.n,
            sigma: self.sigma.iter().map(|p| p.images().to_vec()).collect(),
            tau: Some(self.tau.iter().map(|p| p.images().to_vec()).collect()),
        }
    }

    /// Relabels points by `x ↦ π(x)`: `σ'_{π(x)} = π σ_x π⁻¹`, likewise for τ.
    pub fn relabel(&self, pi: &Perm) -> Solution {
        let mut sigma = vec![Perm::identity(self.n); self.n];
        let mut tau = sigma.clone();
        for x in 0..self.n {
            sigma[pi.apply(x)] = pi.conjugate(&self.sigma[x]);
            tau[pi.apply(x)] = pi.conjugate(&self.tau[x]);
        }
        Solution {
            n: self.n,
            sigma,
            tau,
            involutive: self.involutive,
        }
    }

    /// Flat key `σ_0 … σ_{n−1} τ_0 … τ_{n−1}`.
    pub fn key(&self) -> Vec<usize> {
        self.sigma
            .iter()
            .chain(&self.tau)
            .flat_map(|p| p.images().iter().copied())
            .collect()
    }
}

/// Quotient by `x ~ y ⟺ (σ_x, τ_x) = (σ_y, τ_y)`, with classes numbered in
/// order of first occurrence. Returns the retraction and `x ↦ class`.
#[allow(clippy::needless_range_loop)]
pub fn retract(sol: &Solution) -> Result<(Solution, Vec<usize>), SolutionError> {
    let n = sol.n;
    let mut ids: HashMap<(&Perm, &Perm), usize> = HashMap::new();
    let mut class = vec![0; n];
    let mut reps = Vec::new();
    for x in 0..n {
        let next = ids.len();
        let c = *ids.entry((&sol.sigma[x], &sol.tau[x])).or_insert(next);
        if c == next {
            reps.push(x);
        }
        class[x] = c;
    }
    let m = reps.len();
    let induced = |fam: &[Perm]| -> Result<Vec<Perm>, SolutionError> {
        let mut out = Vec::with_capacity(m);
        for &r in &reps {
            let mut img = vec![usize::MAX; m];
            for y in 0..n {
                let v = class[fam[r].apply(y)];
                if img[class[y]] == usize::MAX {
                    img[class[y]] = v;
                } else if img[class[y]] != v {
                    return Err(SolutionError::InducedMapsIllDefined { x: r });
                }
            }
            out.push(Perm::from_images(img).ok_or(SolutionError::InducedMapsIllDefined { x: r })?);
        }
        Ok(out)
    };
    let sigma = induced(&sol.sigma)?;
    let tau = induced(&sol.tau)?;
    let ret = verify_solution(sigma, tau).unwrap_or_else(|e| panic!("retraction of a valid solution is invalid: {e}"));
    Ok((ret, class))
}

/// Least `m` with `|Ret^m(X)| = 1`, or `None` when the retraction stalls.
pub fn multipermutation_level(sol: &Solution) -> Result<Option<usize>, SolutionError> {
    let mut cur = sol.clone();
    let mut level = 0;
    while cur.n > 1 {
        let (next, _) = retract(&cur)?;
        if next.n == cur.n {
            return Ok(None);
        }
        cur = next;
        level += 1;
    }
    Ok(Some(level))
}

type PermPair = Vec<usize>;

fn pair_mul(n: usize) -> impl Fn(&PermPair, &PermPair) -> PermPair {
    move |a, b| {
        let mut out = vec![0; 2 * n];
        for i in 0..n {
            out[i] = a[b[i]];
            out[n + i] = a[n + b[n + i]];
        }
        out
    }
}

/// The permutation skew brace `𝒢(X,r)` on the group generated by the pairs
/// `g_x = (σ_x, τ_x⁻¹)`, with `x ↦ g_x` as element indices.
#[allow(clippy::needless_range_loop)]
pub fn permutation_brace(sol: &Solution, budget: usize) -> Result<(SkewBrace, Vec<usize>), SolutionError> {
    let n = sol.n;
    let gens: Vec<PermPair> = (0..n)
        .map(|x| {
            let mut g = sol.sigma[x].images().to_vec();
            g.extend_from_slice(sol.tau[x].inverse().images());
            g
        })
        .collect();
    let identity: PermPair = (0..n).chain(0..n).collect();
    let mul = pair_mul(n);
    let elems = generate_elements(identity, &gens, &mul, budget).map_err(|e| match e {
        GroupError::BudgetExceeded { limit } => SolutionError::BudgetExceeded(limit),
        other => SolutionError::BraceValidationFailed(other.to_string()),
    })?;
    let m = elems.len();
    let index: HashMap<&PermPair, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mul_group = GroupTable::from_elements(&elems, &mul);
    let gen_map: Vec<usize> = gens.iter().map(|g| index[g]).collect();

    // ρ_x(a) = a ∘ g_{α⁻¹(x)} realises a + g_x.
    let mut moves = vec![vec![0; m]; n];
    for (a, e) in elems.iter().enumerate() {
        let alpha_inv = Perm::from_images(e[..n].to_vec())
            .expect("first component is a permutation")
            .inverse();
        for x in 0..n {
            moves[x][a] = mul_group.op(a, gen_map[alpha_inv.apply(x)]);
        }
    }
    let mut inverse_moves = vec![vec![usize::MAX; m]; n];
    for x in 0..n {
        for a in 0..m {
            let b = moves[x][a];
            if inverse_moves[x][b] != usize::MAX {
                return Err(SolutionError::BraceValidationFailed(format!(
                    "move {x} is not injective"
                )));
            }
            inverse_moves[x][b] = a;
        }
    }
    let all_moves: Vec<&Vec<usize>> = moves.iter().chain(&inverse_moves).collect();

    // Breadth-first words for every element; a + b replays b's word from a.
    let mut parent = vec![(usize::MAX, 0); m];
    parent[0] = (0, 0);
    let mut order = vec![0];
    let mut head = 0;
    while head < order.len() {
        let p = order[head];
        head += 1;
        for (k, mv) in all_moves.iter().enumerate() {
            let b = mv[p];
            if parent[b].0 == usize::MAX {
                parent[b] = (p, k);
                order.push(b);
            }
        }
    }
    if order.len() != m {
        return Err(SolutionError::AdditiveGenerationFailed {
            reached: order.len(),
            total: m,
        });
    }
    let mut add = vec![0; m * m];
    for a in 0..m {
        add[a * m] = a;
        for &b in &order[1..] {
            let (p, k) = parent[b];
            add[a * m + b] = all_moves[k][add[a * m + p]];
        }
    }
    let add_group = GroupTable::from_flat(m, add).map_err(|e| SolutionError::BraceValidationFailed(e.to_string()))?;
    let brace = verify_skew_brace(add_group, mul_group)
        .map_err(|e: BraceError| SolutionError::BraceValidationFailed(e.to_string()))?;

    for x in 0..n {
        for y in 0..n {
            let (sx, ty) = sol.apply(x, y);
            if brace.lambda(gen_map[x], gen_map[y]) != gen_map[sx] {
                return Err(SolutionError::BraceValidationFailed(format!("λ_g{x}(g{y}) != g{sx}")));
            }
            if brace.mul(gen_map[x], gen_map[y]) != brace.mul(gen_map[sx], gen_map[ty]) {
                return Err(SolutionError::BraceValidationFailed(format!(
                    "g{x}∘g{y} != g{sx}∘g{ty}"
                )));
            }
        }
    }
    Ok((brace, gen_map))
}

/// Both sides of "multipermutation ⟺ 𝒢(X,r) right nilpotent of nilpotent type".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub size: usize,
    pub involutive: bool,
    pub level: Option<usize>,
    pub brace_order: usize,
    pub right_nilpotent: bool,
    pub right_class: Option<usize>,
    pub nilpotent_type: bool,
    pub abelian_type: bool,
    pub left_nilpotent: bool,
}

pub fn equivalence_check(sol: &Solution, budget: usize) -> Result<EquivalenceReport, SolutionError> {
    let level = multipermutation_level(sol)?;
    let (g, _) = permutation_brace(sol, budget)?;
    let report = nilpotency_report(&g).map_err(SolutionError::Series)?;
    let flags = g.classify_flags();
    let brace_side = report.right.holds && flags.nilpotent_type;
    if level.is_some() != brace_side {
        return Err(SolutionError::EquivalenceViolated {
            multipermutation: level.is_some(),
            brace_side,
        });
    }
    Ok(EquivalenceReport {
        size: sol.n,
        involutive: sol.involutive,
        level,
        brace_order: g.order(),
        right_nilpotent: report.right.holds,
        right_class: report.right.class,
        nilpotent_type: flags.nilpotent_type,
        abelian_type: flags.abelian_type,
        left_nilpotent: report.left.holds,
    })
}

const UNSET: usize = usize::MAX;

/// Outcome of a bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchEnd {
    Exhausted,
    Stopped,
    NodeLimit,
}

/// Backtracking over cycle-set tables `T[x][y] = σ_x⁻¹(y)`: rows are
/// permutations and `(x·y)·(x·z) = (y·x)·(y·z)`. Every finite cycle set
/// is non-degenerate, so each complete table is an involutive solution.
pub struct CycleSetSearch {
    n: usize,
    t: Vec<usize>,
    nodes: usize,
}

impl CycleSetSearch {
    pub fn new(n: usize) -> Self {
        CycleSetSearch {
            n,
            t: vec![UNSET; n * n],
            nodes: 0,
        }
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    fn get(&self, x: usize, y: usize) -> usize {
        self.t[x * self.n + y]
    }

    fn consistent(&self, cell: usize) -> bool {
        let n = self.n;
        let (cx, cy) = (cell / n, cell % n);
        // Only triples that read the new cell can have changed status.
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xy = self.get(x, y);
                    let xz = self.get(x, z);
                    let yx = self.get(y, x);
                    let yz = self.get(y, z);
                    if xy == UNSET || xz == UNSET || yx == UNSET || yz == UNSET {
                        continue;
                    }
                    let touches = [(x, y), (x, z), (y, x), (y, z), (xy, xz), (yx, yz)].contains(&(cx, cy));
                    if !touches {
                        continue;
                    }
                    let (l, r) = (self.get(xy, xz), self.get(yx, yz));
                    if l != UNSET && r != UNSET && l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Visits complete tables; `order` permutes candidate values per cell.
    pub fn run(
        &mut self,
        order: &mut dyn FnMut(&mut Vec<usize>),
        visit: &mut dyn FnMut(&[usize]) -> bool,
        node_limit: usize,
    ) -> SearchEnd {
        self.t.iter_mut().for_each(|c| *c = UNSET);
        self.dfs(0, order, visit, node_limit)
    }

    fn dfs(
        &mut self,
        cell: usize,
        order: &mut dyn FnMut(&mut Vec<usize>),
        visit: &mut dyn FnMut(&[usize]) -> bool,
        node_limit: usize,
    ) -> SearchEnd {
        let n = self.n;
        if cell == n * n {
            return if visit(&self.t) {
                SearchEnd::Exhausted
            } else {
                SearchEnd::Stopped
            };
        }
        self.nodes += 1;
        if self.nodes > node_limit {
            return SearchEnd::NodeLimit;
        }
        let row = cell / n;
        let mut cands: Vec<usize> = (0..n).filter(|&v| (row * n..cell).all(|c| self.t[c] != v)).collect();
        order(&mut cands);
        for v in cands {
            self.t[cell] = v;
            if self.consistent(cell) {
                let r = self.dfs(cell + 1, order, visit, node_limit);
                if r != SearchEnd::Exhausted {
                    self.t[cell] = UNSET;
                    return r;
                }
            }
        }
        self.t[cell] = UNSET;
        SearchEnd::Exhausted
    }
}

/// σ family of the involutive solution attached to a cycle-set table.
pub fn sigma_from_cycle_set(n: usize, t: &[usize]) -> Vec<Perm> {
    (0..n)
        .map(|x| {
            Perm::from_images(t[x * n..(x + 1) * n].to_vec())
                .expect("rows are permutations")
                .inverse()
        })
        .collect()
}

/// A random involutive solution of size `n`, found by a randomized
/// cycle-set search with restarts.
pub fn random_involutive_solution<R: Rng>(n: usize, rng: &mut R) -> Solution {
    loop {
        let mut search = CycleSetSearch::new(n);
        let mut found = None;
        let end = search.run(
            &mut |c| c.shuffle(rng),
            &mut |t| {
                found = Some(t.to_vec());
                false
            },
            20_000,
        );
        if let (SearchEnd::Stopped, Some(t)) = (end, found) {
            return involutive_from_sigma(sigma_from_cycle_set(n, &t)).expect("cycle sets give involutive solutions");
        }
    }
}

/// Backtracking over both families at once, cell `(x,y)` fixing
/// `r(x,y) = (σ_x(y), τ_y(x))`, with injectivity of σ rows, τ rows and `r`,
/// and the braid relation checked wherever it is already determined.
struct GeneralSearch {
    n: usize,
    s: Vec<usize>,
    t: Vec<usize>,
    used_r: Vec<bool>,
    nodes: usize,
}

impl GeneralSearch {
    fn sv(&self, x: usize, y: usize) -> usize {
        if x == UNSET || y == UNSET {
            UNSET
        } else {
            self.s[x * self.n + y]
        }
    }

    fn tv(&self, y: usize, x: usize) -> usize {
        if x == UNSET || y == UNSET {
            UNSET
        } else {
            self.t[y * self.n + x]
        }
    }

    fn braid_consistent(&self) -> bool {
        let n = self.n;
        let agree = |p: usize, q: usize| p == UNSET || q == UNSET || p == q;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (a, b) = (self.sv(x, y), self.tv(y, x));
                    let (c, d) = (self.sv(b, z), self.tv(z, b));
                    let (e, f) = (self.sv(y, z), self.tv(z, y));
                    let (g, h) = (self.sv(x, e), self.tv(e, x));
                    if !agree(self.sv(a, c), g) || !agree(self.tv(c, a), self.sv(h, f)) || !agree(d, self.tv(f, h)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn dfs<R: Rng>(&mut self, cell: usize, rng: &mut R, limit: usize) -> Option<bool> {
        let n = self.n;
        if cell == n * n {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > limit {
            return None;
        }
        let (x, y) = (cell / n, cell % n);
        let mut cands: Vec<(usize, usize)> = Vec::new();
        for u in 0..n {
            if (0..y).any(|k| self.s[x * n + k] == u) {
                continue;
            }
            for v in 0..n {
                if self.used_r[u * n + v] || (0..x).any(|k| self.t[y * n + k] == v) {
                    continue;
                }
                cands.push((u, v));
            }
        }
        cands.shuffle(rng);
        for (u, v) in cands {
            self.s[x * n + y] = u;
            self.t[y * n + x] = v;
            self.used_r[u * n + v] = true;
            if self.braid_consistent() {
                match self.dfs(cell + 1, rng, limit) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.used_r[u * n + v] = false;
        }
        self.s[x * n + y] = UNSET;
        self.t[y * n + x] = UNSET;
        Some(false)
    }
}

/// Node budget per restart; short restarts beat deep backtracking at size 5.
const RESTART_NODES: usize = 100;

/// A random non-degenerate bijective solution of size `n` (not necessarily
/// involutive), found by a randomized search over both families.
pub fn random_solution<R: Rng>(n: usize, rng: &mut R) -> Solution {
    loop {
        let mut search = GeneralSearch {
            n,
            s: vec![UNSET; n * n],
            t: vec![UNSET; n * n],
            used_r: vec![false; n * n],
            nodes: 0,
        };
        if search.dfs(0, rng, RESTART_NODES) == Some(true) {
            let rows = |v: &[usize]| -> Vec<Perm> {
                v.chunks(n)
                    .map(|r| Perm::from_images(r.to_vec()).expect("rows are injective"))
                    .collect()
            };
            return verify_solution(rows(&search.s), rows(&search.t)).expect("search enforces every axiom");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// σ data of the five-point example, 0-based.
    pub(crate) fn five_point_sigma() -> Vec<Perm> {
        let mut sigma = vec![Perm::identity(5); 3];
        sigma.push(Perm::from_cycles(5, "(23)(45)", 1).unwrap());
        sigma.push(Perm::from_cycles(5, "(12)(45)", 1).unwrap());
        sigma
    }

    #[test]
    fn flip_is_involutive() {
        let f = Solution::flip(3);
        assert!(f.is_involutive());
        assert_eq!(f.apply(1, 2), (2, 1));
        assert_eq!(multipermutation_level(&f).unwrap(), Some(1));
        assert_eq!(multipermutation_level(&Solution::flip(1)).unwrap(), Some(0));
        let (r, class) = retract(&f).unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(class, vec![0, 0, 0]);
    }

    #[test]
    fn five_point_example() {
        let sol = involutive_from_sigma(five_point_sigma()).unwrap();
        assert!(sol.is_involutive());
        let (r, class) = retract(&sol).unwrap();
        // points 0,1,2 share σ = id; τ separates nothing further
        assert!(r.size() < 5);
        assert_eq!(class[0], class[1]);
        let level = multipermutation_level(&sol).unwrap().unwrap();
        assert!(level >= 2);

        let (g, gens) = permutation_brace(&sol, 10080).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(gens[0], 0);
        let flags = g.classify_flags();
        assert!(flags.abelian_type);
        assert!(!flags.mul_nilpotent);
        assert_eq!(
            g.add_group()
                .element_order((0..6).max_by_key(|&a| g.add_group().element_order(a)).unwrap()),
            6
        );
        let rep = equivalence_check(&sol, 10080).unwrap();
        assert!(rep.right_nilpotent && !rep.left_nilpotent);
    }

    #[test]
    fn braid_failure_detected() {
        // σ_x = τ_y = shift by one: r(x,y) = (y+1, x+1)
        let shift = Perm::from_images(vec![1, 2, 0]).unwrap();
        // Constant families that commute do satisfy the braid relation.
        assert!(verify_solution(vec![shift.clone(); 3], vec![shift.clone(); 3]).is_ok());
        let mixed = vec![shift.clone(), Perm::identity(3), Perm::identity(3)];
        let err = verify_solution(mixed, vec![Perm::identity(3); 3]).unwrap_err();
        assert!(matches!(err, SolutionError::BraidFailed { .. }), "{err:?}");
    }

    #[test]
    fn constant_sigma_gives_cyclic_trivial_brace() {
        let pi = Perm::from_images(vec![1, 2, 3, 0]).unwrap();
        let sol = involutive_from_sigma(vec![pi; 4]).unwrap();
        assert_eq!(multipermutation_level(&sol).unwrap(), Some(1));
        let (g, _) = permutation_brace(&sol, 100).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_trivial());
    }

    #[test]
    fn flip_brace_is_trivial() {
        let (g, gens) = permutation_brace(&Solution::flip(4), 100).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(gens, vec![0; 4]);
    }

    #[test]
    fn json_without_tau() {
        let j: SolutionJson = serde_json::from_str(r#"{"n":2,"sigma":[[1,0],[1,0]]}"#).unwrap();
        let sol = j.validate().unwrap();
        assert!(sol.is_involutive());
        let back = sol.to_json();
        assert_eq!(back.clone().validate().unwrap(), sol);
        assert_eq!(back.tau.unwrap(), vec![vec![1, 0], vec![1, 0]]);
    }

    #[test]
    fn relabel_preserves_validity() {
        let sol = involutive_from_sigma(five_point_sigma()).unwrap();
        let pi = Perm::from_images(vec![4, 0, 3, 1, 2]).unwrap();
        let r = sol.relabel(&pi);
        let again = verify_solution(r.sigma.clone(), r.tau.clone()).unwrap();
        assert_eq!(
            multipermutation_level(&again).unwrap(),
            multipermutation_level(&sol).unwrap()
        );
    }

    #[test]
    fn random_solutions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let s = random_involutive_solution(4, &mut rng);
            assert!(s.is_involutive());
            let g = random_solution(4, &mut rng);
            assert!(verify_solution(g.sigma.clone(), g.tau.clone()).is_ok());
        }
    }
}

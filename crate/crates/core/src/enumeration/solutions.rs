//! Involutive solutions of small size up to relabeling.

use serde::{Deserialize, Serialize};

use super::EnumError;
use crate::perm::{all_permutations, Perm};
use crate::ybe::{
    involutive_from_sigma, multipermutation_level, permutation_brace, sigma_from_cycle_set, CycleSetSearch, SearchEnd,
    Solution, SolutionJson,
};

pub const MAX_SOLUTION_SIZE: usize = 5;

/// A catalog entry: the solution with its multipermutation level and the
/// order of its permutation skew brace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionItem {
    #[serde(flatten)]
    pub solution: SolutionJson,
    pub level: Option<usize>,
    pub brace_order: usize,
}

/// Least σ key over all relabelings `σ ↦ π σ_{π⁻¹(·)} π⁻¹`.
pub fn canonical_solution_key(sol: &Solution, perms: &[Perm]) -> Vec<usize> {
    perms
        .iter()
        .map(|pi| {
            let r = sol.relabel(pi);
            (0..sol.size())
                .flat_map(|x| r.sigma(x).images().to_vec())
                .collect::<Vec<_>>()
        })
        .min()
        .expect("at least the identity relabeling")
}

/// All involutive solutions of size `n` up to isomorphism, sorted by
/// canonical key.
pub fn enumerate_involutive_solutions(n: usize) -> Result<Vec<Solution>, EnumError> {
    if n == 0 || n > MAX_SOLUTION_SIZE {
        return Err(EnumError::BudgetExceeded {
            order: n,
            limit: MAX_SOLUTION_SIZE,
        });
    }
    let perms: Vec<Perm> = all_permutations(n).collect();
    let mut classes = std::collections::BTreeMap::new();
    let mut search = CycleSetSearch::new(n);
    let end = search.run(
        &mut |_| {},
        &mut |t| {
            let sol = involutive_from_sigma(sigma_from_cycle_set(n, t)).expect("cycle sets give involutive solutions");
            classes.entry(canonical_solution_key(&sol, &perms)).or_insert(sol);
            true
        },
        usize::MAX,
    );
    debug_assert_eq!(end, SearchEnd::Exhausted);
    Ok(classes
        .into_keys()
        .map(|key| {
            let sigma = key.chunks(n).map(|c| Perm::from_images(c.to_vec()).unwrap()).collect();
            involutive_from_sigma(sigma).expect("relabelings of solutions are solutions")
        })
        .collect())
}

impl SolutionItem {
    pub fn from_solution(sol: &Solution, budget: usize) -> Self {
        let level = multipermutation_level(sol).expect("valid solutions retract");
        let brace_order = permutation_brace(sol, budget).map(|(g, _)| g.order()).unwrap_or(0);
        SolutionItem {
            solution: sol.to_json(),
            level,
            brace_order,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ybe::verify_solution;
    use std::collections::HashSet;

    #[test]
    fn known_counts() {
        let expected = [1, 2, 5, 23];
        for n in 1..=4 {
            assert_eq!(
                enumerate_involutive_solutions(n).unwrap().len(),
                expected[n - 1],
                "n={n}"
            );
        }
    }

    #[test]
    fn size_two_by_hand() {
        let sols = enumerate_involutive_solutions(2).unwrap();
        let levels: Vec<_> = sols.iter().map(|s| multipermutation_level(s).unwrap()).collect();
        assert!(levels.iter().all(|l| *l == Some(1)));
        let swap = Perm::from_images(vec![1, 0]).unwrap();
        assert!(sols.iter().any(|s| s.sigma(0) == &swap && s.sigma(1) == &swap));
        assert!(sols
            .iter()
            .any(|s| s.sigma(0).is_identity() && s.sigma(1).is_identity()));
    }

    /// Every σ family of size n, keeping the involutive solutions.
    fn brute_force(n: usize) -> HashSet<Vec<usize>> {
        let perms: Vec<Perm> = all_permutations(n).collect();
        let mut classes = HashSet::new();
        let total = perms.len().pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let sigma: Vec<Perm> = (0..n)
                .map(|_| {
                    let p = perms[c % perms.len()].clone();
                    c /= perms.len();
                    p
                })
                .collect();
            if let Ok(sol) = involutive_from_sigma(sigma) {
                assert!(sol.is_involutive());
                classes.insert(canonical_solution_key(&sol, &perms));
            }
        }
        classes
    }

    #[test]
    fn cycle_set_search_matches_brute_force() {
        for n in 1..=4 {
            let perms: Vec<Perm> = all_permutations(n).collect();
            let found: HashSet<Vec<usize>> = enumerate_involutive_solutions(n)
                .unwrap()
                .iter()
                .map(|s| canonical_solution_key(s, &perms))
                .collect();
            assert_eq!(found, brute_force(n), "n={n}");
        }
    }

    #[test]
    fn items_round_trip() {
        for sol in enumerate_involutive_solutions(3).unwrap() {
            let item = SolutionItem::from_solution(&sol, 10080);
            let text = serde_json::to_string(&item).unwrap();
            let back: SolutionItem = serde_json::from_str(&text).unwrap();
            let j = back.solution.clone();
            let again = verify_solution(
                j.sigma.iter().map(|r| Perm::from_images(r.clone()).unwrap()).collect(),
                j.tau
                    .unwrap()
                    .iter()
                    .map(|r| Perm::from_images(r.clone()).unwrap())
                    .collect(),
            )
            .unwrap();
            assert_eq!(again, sol);
            assert!(item.brace_order >= 1);
        }
    }
}

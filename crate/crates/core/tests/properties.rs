//! Property tests over the small-order catalogs and random solutions.

use std::sync::OnceLock;

use bracelab::campaign::star_identities_hold;
use bracelab::enumeration::{canonical_solution_key, enumerate_skew_braces, BraceEnumOptions};
use bracelab::iso::{brace_fingerprint, isomorphic};
use bracelab::series::{nilpotency_report, series, SeriesKind};
use bracelab::substructures::{ideal_generated, invariant_substructures, is_ideal, subbrace_closure};
use bracelab::ybe::{equivalence_check, multipermutation_level, random_involutive_solution, random_solution, retract};
use bracelab::{Perm, SkewBrace, Subset};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalog() -> &'static Vec<SkewBrace> {
    static CAT: OnceLock<Vec<SkewBrace>> = OnceLock::new();
    CAT.get_or_init(|| {
        (1..=8)
            .flat_map(|n| enumerate_skew_braces(n, &BraceEnumOptions::default()).unwrap())
            .collect()
    })
}

fn brace() -> impl Strategy<Value = &'static SkewBrace> {
    (0..catalog().len()).prop_map(|i| &catalog()[i])
}

/// A relabeling of `0..n` fixing 0, from a shuffle seed.
fn relabeling(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut tail: Vec<usize> = (1..n).collect();
    tail.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    std::iter::once(0).chain(tail).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_identities_on_random_triples(b in brace(), x in 0usize..8, y in 0usize..8, z in 0usize..8) {
        let n = b.order();
        prop_assert_eq!(star_identities_hold(b, x % n, y % n, z % n), [true; 3]);
    }

    #[test]
    fn brace_law_and_lambda_action(b in brace(), a in 0usize..8, x in 0usize..8, y in 0usize..8) {
        let n = b.order();
        let (a, x, y) = (a % n, x % n, y % n);
        prop_assert_eq!(b.mul(a, b.add(x, y)), b.add(b.sub(b.mul(a, x), a), b.mul(a, y)));
        prop_assert_eq!(b.lambda(b.mul(a, x), y), b.lambda(a, b.lambda(x, y)));
        prop_assert_eq!(b.lambda_inv(a, b.lambda(a, y)), y);
    }

    #[test]
    fn relabeling_preserves_isomorphism_class(b in brace(), seed in any::<u64>()) {
        let other = b.relabel(&relabeling(b.order(), seed));
        prop_assert_eq!(brace_fingerprint(b), brace_fingerprint(&other));
        let m = isomorphic(b, &other).expect("relabelings are isomorphic");
        for x in 0..b.order() {
            for y in 0..b.order() {
                prop_assert_eq!(m[b.add(x, y)], other.add(m[x], m[y]));
                prop_assert_eq!(m[b.mul(x, y)], other.mul(m[x], m[y]));
            }
        }
        // Verdicts are isomorphism invariants.
        let (r1, r2) = (nilpotency_report(b).unwrap(), nilpotency_report(&other).unwrap());
        prop_assert_eq!(r1.left, r2.left);
        prop_assert_eq!(r1.right, r2.right);
        prop_assert_eq!(r1.annihilator, r2.annihilator);
    }

    #[test]
    fn generated_ideals_give_quotient_braces(b in brace(), x in 0usize..8) {
        let n = b.order();
        let ideal = ideal_generated(b, &Subset::from_elements(n, [x % n]));
        prop_assert!(ideal.contains(x % n));
        prop_assert!(is_ideal(b, &ideal).is_ok());
        let (q, proj) = b.quotient(&ideal).unwrap();
        prop_assert_eq!(q.order() * ideal.len(), n);
        for a in 0..n {
            for c in 0..n {
                prop_assert_eq!(proj[b.add(a, c)], q.add(proj[a], proj[c]));
                prop_assert_eq!(proj[b.mul(a, c)], q.mul(proj[a], proj[c]));
            }
        }
    }

    #[test]
    fn closures_are_idempotent(b in brace(), x in 0usize..8, y in 0usize..8) {
        let n = b.order();
        let s = Subset::from_elements(n, [x % n, y % n]);
        let c = subbrace_closure(b, &s);
        prop_assert_eq!(subbrace_closure(b, &c), c.clone());
        let i = ideal_generated(b, &s);
        prop_assert!(c.is_subset(&i));
        prop_assert_eq!(ideal_generated(b, &i), i);
    }

    #[test]
    fn annihilator_lies_in_socle_and_fix(b in brace()) {
        let inv = invariant_substructures(b);
        prop_assert!(inv.ann.is_subset(&inv.soc));
        prop_assert!(inv.ann.is_subset(&inv.fix));
        prop_assert!(inv.soc.is_subset(&inv.ker_lambda));
        // Ann_1 is the first nonzero term of the annihilator series.
        let ann = series(b, SeriesKind::Annihilator);
        prop_assert_eq!(ann.term(1), &inv.ann);
    }

    #[test]
    fn strong_series_contains_left_and_right(b in brace()) {
        let (l, r, s) = (series(b, SeriesKind::Left), series(b, SeriesKind::Right), series(b, SeriesKind::Strong));
        for k in 1..=b.order() {
            prop_assert!(l.term(k).is_subset(s.term(k)));
            prop_assert!(r.term(k).is_subset(s.term(k)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_involutive_solutions_are_consistent(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sol = random_involutive_solution(n, &mut rng);
        prop_assert!(sol.is_involutive());
        for x in 0..n {
            for y in 0..n {
                let (u, v) = sol.apply(x, y);
                prop_assert_eq!(sol.apply(u, v), (x, y));
            }
        }
        let (ret, map) = retract(&sol).unwrap();
        prop_assert!(ret.size() <= n);
        prop_assert_eq!(map.len(), n);
        let report = equivalence_check(&sol, bracelab::DEFAULT_BUDGET).unwrap();
        prop_assert!(report.abelian_type);
        prop_assert_eq!(report.level, multipermutation_level(&sol).unwrap());
    }

    #[test]
    fn random_general_solutions_satisfy_the_equivalence(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sol = random_solution(4, &mut rng);
        prop_assert!(equivalence_check(&sol, bracelab::DEFAULT_BUDGET).is_ok());
    }

    #[test]
    fn canonical_key_is_relabeling_invariant(seed in any::<u64>(), shuffle in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sol = random_involutive_solution(4, &mut rng);
        let perms: Vec<Perm> = bracelab::perm::all_permutations(4).collect();
        let pi = &perms[(shuffle % perms.len() as u64) as usize];
        prop_assert_eq!(canonical_solution_key(&sol, &perms), canonical_solution_key(&sol.relabel(pi), &perms));
    }
}

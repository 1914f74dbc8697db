//! Verification campaigns over enumerated catalogs.
//!
//! Each suite runs a fixed list of claims over every brace (or solution) in
//! scope and reports, per claim, how many instances were examined, how many
//! failed, and a few witnesses.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::brace::{verify_skew_brace, SkewBrace};
use crate::enumeration::{
    enumerate_involutive_solutions, enumerate_skew_braces, groups_of_order, BraceEnumOptions, Catalog, CatalogKind,
    EnumError, EXPECTED_GROUP_COUNTS,
};
use crate::iso::{brace_fingerprint, isomorphic};
use crate::series::{gamma_distributivity_check, nilpotency_checks, series, SeriesKind};
use crate::subset::Subset;
use crate::substructures::{
    generates, idealizer, intersect_all, invariant_substructures, is_ideal, lambda_orbits, maximal_ideals,
    maximal_subbraces, radical, star_sets, subbrace_lattice, subideal_chain, sum_set, DEFAULT_LATTICE_BUDGET,
};
use crate::ybe::{
    equivalence_check, random_involutive_solution, random_solution, retract, verify_solution, Solution, SolutionError,
};

/// Brace counts of orders 1..=8.
pub const EXPECTED_BRACE_COUNTS: [usize; 8] = [1, 1, 1, 4, 1, 6, 1, 47];

/// Known `(order, braces, not annihilator nilpotent)` census figures.
pub const KNOWN_CENSUS: [(usize, usize, usize); 3] = [(8, 47, 2), (16, 1605, 40), (27, 101, 4)];

pub const SUITES: [&str; 7] = [
    "axioms",
    "identities",
    "series",
    "hirsch",
    "radical",
    "equivalence",
    "census",
];

const MAX_WITNESSES: usize = 5;

/// Largest carrier for which non-generating elements are found by trying
/// every subset.
const NON_GENERATOR_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum CampaignError {
    #[error("unknown suite `{0}` (expected one of {list})", list = SUITES.join(", "))]
    SuiteUnknown(String),
    #[error("scope out of range: {0}")]
    Scope(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
}

/// What a suite runs over.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    /// Brace orders, or solution sizes for the equivalence suite.
    pub orders: Vec<usize>,
    /// Seed for sampled size-5 solutions.
    pub seed: u64,
    /// Number of sampled size-5 solutions (equivalence suite only).
    pub samples: usize,
    /// Directory of `braces-N.jsonl` catalogs, read if present and written
    /// otherwise.
    pub catalog_dir: Option<PathBuf>,
    /// Closure budget for permutation braces.
    pub budget: usize,
}

impl SuiteParams {
    /// Defaults for `suite`: orders up to 8 for braces, sizes up to 4 plus
    /// 1000 samples for solutions.
    pub fn defaults(suite: &str, seed: u64) -> Self {
        let max = if suite == "equivalence" { 4 } else { 8 };
        SuiteParams {
            orders: (1..=max).collect(),
            seed,
            samples: if suite == "equivalence" { 1000 } else { 0 },
            catalog_dir: None,
            budget: crate::budget(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scope {
    pub orders: Vec<usize>,
    pub sampled_size: Option<usize>,
    pub samples: usize,
    /// Samples drawn again because `𝒢` exceeded the closure budget.
    pub resampled: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub claim_id: &'static str,
    pub statement: &'static str,
    pub instances: usize,
    pub failures: usize,
    /// Diagnostic checks are reported but do not affect the verdict.
    pub diagnostic: bool,
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub order: usize,
    pub groups: usize,
    pub braces: usize,
    pub trivial: usize,
    pub two_sided: usize,
    pub abelian_type: usize,
    pub nilpotent_type: usize,
    pub left: usize,
    pub right: usize,
    pub strong: usize,
    pub annihilator: usize,
}

pub const CENSUS_HEADER: &str =
    "order,groups,braces,trivial,two_sided,abelian_type,nilpotent_type,left,right,strong,annihilator";

impl CensusRow {
    pub fn csv(&self) -> String {
        [
            self.order,
            self.groups,
            self.braces,
            self.trivial,
            self.two_sided,
            self.abelian_type,
            self.nilpotent_type,
            self.left,
            self.right,
            self.strong,
            self.annihilator,
        ]
        .map(|v| v.to_string())
        .join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub suite: String,
    pub scope: Scope,
    pub checks: Vec<Check>,
    pub wall_time_s: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Vec<CensusRow>>,
    pub passed: bool,
}

impl CampaignReport {
    pub fn check(&self, claim_id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.claim_id == claim_id)
    }

    /// Census table for the census suite, per-claim summary otherwise.
    pub fn csv(&self) -> String {
        let mut out = String::new();
        match &self.census {
            Some(rows) => {
                out.push_str(CENSUS_HEADER);
                out.push('\n');
                for r in rows {
                    out.push_str(&r.csv());
                    out.push('\n');
                }
            }
            None => {
                out.push_str("claim_id,instances,failures,diagnostic\n");
                for c in &self.checks {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        c.claim_id, c.instances, c.failures, c.diagnostic
                    ));
                }
            }
        }
        out
    }
}

/// Claim identifiers with their statements and whether they are diagnostic.
const CLAIMS: &[(&str, &str, bool)] = &[
    ("brace_axioms", "Catalog tables re-validate as skew braces and survive a JSON round trip.", false),
    ("lambda_is_action", "Each λ_a is an additive automorphism and λ_{a∘b} = λ_a λ_b.", false),
    ("distinguished_ideals", "Soc and Ann are ideals; Ker λ is normal in (B,∘) and additively closed; Fix is a λ-invariant additive subgroup.", false),
    ("annihilator_elementwise", "Ann is the set of x with x∘a = a∘x = x+a = a+x for all a.", false),
    ("catalog_pairwise_non_isomorphic", "Distinct catalog entries of one order are not isomorphic.", false),
    ("group_counts", "Numbers of groups of each order match the known values.", false),
    ("star_identities", "x∗(y+z) = x∗y + y + x∗z − y, the (x+y)∗z expansion and (x∘y)∗z = x∗(y∗z) + y∗z + x∗z.", false),
    ("left_square_is_star_ideal", "B∗B is an ideal and equals the second left series term.", false),
    ("gamma_distributivity", "The six distributivity identities hold on Γ_[·] layers of annihilator nilpotent braces.", false),
    ("ann_series_agrees_with_gamma", "The annihilator series reaches B iff Γ_n reaches 0.", false),
    ("ann_series_agrees_with_gamma_bracket", "The annihilator series reaches B iff Γ_[n] reaches 0.", false),
    ("ann_class_equals_gamma_class", "The annihilator series and Γ_n have the same length.", false),
    ("gamma_n_inside_gamma_bracket_n", "Γ_n ⊆ Γ_[n] for all n.", false),
    ("series_terms_closed_and_monotone", "Series terms are ideals (or the required substructures) and monotone.", false),
    ("strong_terms_are_ideals", "Terms of the strong series are ideals.", true),
    ("annihilator_implies_strong", "Annihilator nilpotent braces are strongly nilpotent.", false),
    ("strong_implies_left", "Strongly nilpotent braces are left nilpotent.", false),
    ("strong_implies_right", "Strongly nilpotent braces are right nilpotent.", false),
    ("nilpotent_type_strong_iff_left_and_right", "Nilpotent type: strong iff left and right.", false),
    ("nilpotent_type_annihilator_iff_strong", "Nilpotent type: annihilator nilpotent iff strong.", false),
    ("nilpotent_type_left_and_right_gives_mul_nilpotent", "Nilpotent type, left and right nilpotent: (B,∘) is nilpotent.", false),
    ("nilpotent_type_left_iff_mul_nilpotent", "Nilpotent type: left nilpotent iff (B,∘) is nilpotent.", false),
    ("right_series_inside_socle_s_series", "B^(i+1) lies in the i-th term of the reversed socle series.", false),
    ("converse_left_not_strong", "Some left nilpotent brace is not strongly nilpotent.", false),
    ("converse_right_not_strong", "Some right nilpotent brace is not strongly nilpotent.", false),
    ("converse_strong_not_annihilator", "Some strongly nilpotent brace is not annihilator nilpotent.", false),
    ("right_not_left_exhibit", "Some right nilpotent brace is not left nilpotent.", false),
    ("hirsch_right_nilpotent", "B right nilpotent, A a sub-brace, A + B∗B = B and A∗B ⊆ A imply A = B.", false),
    ("hirsch_annihilator_nilpotent", "B annihilator nilpotent, A a sub-brace, A + B∗B = B imply A = B.", false),
    ("quotient_surjectivity", "B annihilator nilpotent: a sub-brace mapping onto B/B∗B is B.", false),
    ("lambda_orbit_transversals_generate", "B annihilator nilpotent: every transversal of the λ-orbits generates B.", false),
    ("maximal_subbraces_are_ideals", "B annihilator nilpotent: every maximal sub-brace is an ideal.", false),
    ("radical_is_intersection_of_maximal_subbraces", "B annihilator nilpotent: Rad(B) is the intersection of maximal sub-braces.", false),
    ("radical_is_non_generating_elements", "B annihilator nilpotent: Rad(B) is the set of non-generating elements.", false),
    ("subideal_chains_exist", "B annihilator nilpotent: every sub-brace has a chain of idealizers up to B.", false),
    ("idealizer_product_characterization", "The idealizer equals the largest A ⊇ H with A∗H, H∗A, [H,A]₊ ⊆ H.", true),
    ("equivalence_biconditional", "A solution is multipermutation iff 𝒢 is right nilpotent of nilpotent type.", false),
    ("involutive_abelian_type", "𝒢 of an involutive solution is of abelian type.", false),
    ("retraction_revalidates", "The retraction is a solution, no larger, and equal in size iff all (σ_x, τ_x) differ.", false),
    ("non_multipermutation_exhibit", "Some involutive solution of size 4 is not multipermutation.", false),
    ("brace_counts", "Numbers of skew braces of each order match the known values.", false),
    ("census_non_annihilator", "Known counts of braces that are not annihilator nilpotent, all of abelian type at order 8.", false),
];

fn claim(id: &str) -> (&'static str, &'static str, bool) {
    *CLAIMS
        .iter()
        .find(|c| c.0 == id)
        .unwrap_or_else(|| panic!("unknown claim {id}"))
}

/// Per-claim tallies in insertion order.
#[derive(Default)]
struct Tally {
    order: Vec<&'static str>,
    entries: HashMap<&'static str, (usize, usize, Vec<Value>)>,
}

impl Tally {
    fn entry(&mut self, id: &str) -> &mut (usize, usize, Vec<Value>) {
        let id = claim(id).0;
        if !self.entries.contains_key(id) {
            self.order.push(id);
        }
        self.entries.entry(id).or_default()
    }

    /// Declares a claim so that it is reported even with zero instances.
    fn declare(&mut self, id: &str) {
        self.entry(id);
    }

    fn check(&mut self, id: &str, holds: bool, witness: impl FnOnce() -> Value) {
        let e = self.entry(id);
        e.0 += 1;
        if !holds {
            e.1 += 1;
            if e.2.len() < MAX_WITNESSES {
                e.2.push(witness());
            }
        }
    }

    fn count(&mut self, id: &str, instances: usize, failures: usize, witnesses: Vec<Value>) {
        let e = self.entry(id);
        e.0 += instances;
        e.1 += failures;
        let room = MAX_WITNESSES.saturating_sub(e.2.len());
        e.2.extend(witnesses.into_iter().take(room));
    }

    /// An existence claim: `found` instances are exhibits, not failures.
    fn exhibit(&mut self, id: &str, found: bool, witness: impl FnOnce() -> Value) {
        let e = self.entry(id);
        if found {
            e.0 += 1;
            if e.2.len() < MAX_WITNESSES {
                e.2.push(witness());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        for id in other.order {
            let (i, f, w) = other.entries[id].clone();
            self.count(id, i, f, w);
        }
    }

    /// `existence` lists claims that fail when they have no exhibit.
    fn finish(self, existence: &[&str]) -> Vec<Check> {
        self.order
            .iter()
            .map(|id| {
                let (claim_id, statement, diagnostic) = claim(id);
                let (instances, mut failures, witnesses) = self.entries[id].clone();
                if existence.contains(id) {
                    failures = usize::from(instances == 0);
                }
                Check {
                    claim_id,
                    statement,
                    instances,
                    failures,
                    diagnostic,
                    witnesses,
                }
            })
            .collect()
    }
}

fn brace_witness(order: usize, index: usize) -> Value {
    json!({ "order": order, "index": index })
}

fn catalog_memo() -> &'static Mutex<HashMap<usize, Vec<SkewBrace>>> {
    static MEMO: OnceLock<Mutex<HashMap<usize, Vec<SkewBrace>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The brace catalog of order `n`: from memory, from `catalog_dir`, or
/// freshly enumerated (and then saved to `catalog_dir`).
pub fn brace_catalog(n: usize, catalog_dir: Option<&PathBuf>) -> Result<Vec<SkewBrace>, CampaignError> {
    if let Some(v) = catalog_memo().lock().unwrap().get(&n) {
        return Ok(v.clone());
    }
    let path = catalog_dir.map(|d| d.join(format!("braces-{n}.jsonl")));
    let braces = match path.as_ref().filter(|p| p.exists()) {
        Some(p) => {
            let cat: Catalog<crate::brace::BraceJson> = Catalog::load(p)?;
            cat.items
                .iter()
                .enumerate()
                .map(|(i, j)| {
                    j.validate().map(|r| r.value).map_err(|e| {
                        CampaignError::Enum(EnumError::Format {
                            line: i + 2,
                            msg: e.to_string(),
                        })
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        None => {
            let start = Instant::now();
            let braces = enumerate_skew_braces(n, &BraceEnumOptions::default())?;
            if let Some(p) = &path {
                let items = braces.iter().map(SkewBrace::to_json).collect();
                Catalog::new(
                    CatalogKind::Braces,
                    n,
                    "holomorph",
                    start.elapsed().as_secs_f64(),
                    items,
                )
                .save(p)
                .map_err(EnumError::from)?;
            }
            braces
        }
    };
    catalog_memo().lock().unwrap().insert(n, braces.clone());
    Ok(braces)
}

fn braces_in_scope(params: &SuiteParams) -> Result<Vec<(usize, usize, SkewBrace)>, CampaignError> {
    let mut all = Vec::new();
    for &n in &params.orders {
        for (i, b) in brace_catalog(n, params.catalog_dir.as_ref())?.into_iter().enumerate() {
            all.push((n, i, b));
        }
    }
    Ok(all)
}

/// Runs `per_brace` over the catalog in parallel and merges in catalog order.
fn over_braces(
    braces: &[(usize, usize, SkewBrace)],
    per_brace: impl Fn(usize, usize, &SkewBrace) -> Tally + Sync,
) -> Tally {
    let parts: Vec<Tally> = braces.par_iter().map(|(n, i, b)| per_brace(*n, *i, b)).collect();
    let mut tally = Tally::default();
    for p in parts {
        tally.merge(p);
    }
    tally
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<CampaignReport, CampaignError> {
    if !SUITES.contains(&name) {
        return Err(CampaignError::SuiteUnknown(name.to_string()));
    }
    if params.orders.is_empty() || params.orders.contains(&0) {
        return Err(CampaignError::Scope("orders must be positive".into()));
    }
    let start = Instant::now();
    let mut scope = Scope {
        orders: params.orders.clone(),
        sampled_size: None,
        samples: 0,
        resampled: 0,
    };
    let mut census = None;
    let checks = match name {
        "axioms" => axioms(params)?,
        "identities" => identities(params)?,
        "series" => series_suite(params)?,
        "hirsch" => hirsch(params)?,
        "radical" => radical_suite(params)?,
        "equivalence" => equivalence(params, &mut scope)?,
        "census" => {
            let (checks, rows) = census_suite(params)?;
            census = Some(rows);
            checks
        }
        _ => unreachable!(),
    };
    let passed = checks.iter().all(|c| c.diagnostic || c.failures == 0);
    Ok(CampaignReport {
        suite: name.to_string(),
        scope,
        checks,
        wall_time_s: start.elapsed().as_secs_f64(),
        seed: params.seed,
        census,
        passed,
    })
}

fn axioms(params: &SuiteParams) -> Result<Vec<Check>, CampaignError> {
    let braces = braces_in_scope(params)?;
    let mut tally = over_braces(&braces, |n, i, b| {
        let mut t = Tally::default();
        let w = || brace_witness(n, i);
        let revalidated = verify_skew_brace(b.add_group().clone(), b.mul_group().clone()).is_ok()
            && b.to_json().validate().map(|r| r.value == *b).unwrap_or(false);
        t.check("brace_axioms", revalidated, w);

        let action = (0..n).all(|a| {
            (0..n).all(|x| {
                (0..n).all(|y| {
                    b.lambda(a, b.add(x, y)) == b.add(b.lambda(a, x), b.lambda(a, y))
                        && b.lambda(b.mul(a, x), y) == b.lambda(a, b.lambda(x, y))
                })
            })
        });
        t.check("lambda_is_action", action, w);

        let inv = invariant_substructures(b);
        let fix_ok = b.add_group().is_subgroup(&inv.fix)
            && inv.fix.iter().all(|x| (0..n).all(|a| inv.fix.contains(b.lambda(a, x))));
        let ideals_ok = [&inv.soc, &inv.ann].iter().all(|s| is_ideal(b, s).is_ok());
        // Ker λ need not be λ-invariant once (B,+) is not abelian.
        let kernel_ok = b.mul_group().is_normal_subgroup(&inv.ker_lambda) && b.add_group().is_subgroup(&inv.ker_lambda);
        t.check("distinguished_ideals", fix_ok && ideals_ok && kernel_ok, w);

        let elementwise = Subset::from_elements(
            n,
            (0..n).filter(|&x| {
                (0..n).all(|a| {
                    let s = b.add(x, a);
                    b.mul(x, a) == s && b.mul(a, x) == s && b.add(a, x) == s
                })
            }),
        );
        t.check("annihilator_elementwise", elementwise == inv.ann, w);
        t
    });
    for &n in &params.orders {
        let cat = brace_catalog(n, params.catalog_dir.as_ref())?;
        let fps: Vec<_> = cat.par_iter().map(brace_fingerprint).collect();
        for i in 0..cat.len() {
            for j in 0..i {
                let distinct = fps[i] != fps[j] || isomorphic(&cat[i], &cat[j]).is_none();
                tally.check(
                    "catalog_pairwise_non_isomorphic",
                    distinct,
                    || json!({ "order": n, "indices": [j, i] }),
                );
            }
        }
        let groups = groups_of_order(n)?.len();
        if let Some(&expected) = EXPECTED_GROUP_COUNTS.get(n - 1) {
            tally.check(
                "group_counts",
                groups == expected,
                || json!({ "order": n, "found": groups, "expected": expected }),
            );
        }
    }
    Ok(tally.finish(&[]))
}

/// The three ∗-identities at `(x, y, z)`.
pub fn star_identities_hold(b: &SkewBrace, x: usize, y: usize, z: usize) -> [bool; 3] {
    let s = |a, c| b.star(a, c);
    let add = |a, c| b.add(a, c);
    let first = s(x, add(y, z)) == add(add(add(s(x, y), y), s(x, z)), b.neg(y));
    let u = b.lambda_inv(x, y);
    let second = s(add(x, y), z) == add(add(s(x, s(u, z)), s(u, z)), s(x, z));
    let third = s(b.mul(x, y), z) == add(add(s(x, s(y, z)), s(y, z)), s(x, z));
    [first, second, third]
}

fn identities(params: &SuiteParams) -> Result<Vec<Check>, CampaignError> {
    let braces = braces_in_scope(params)?;
    let tally = over_braces(&braces, |n, i, b| {
        let mut t = Tally::default();
        let (mut instances, mut failures, mut witnesses) = (0, 0, Vec::new());
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for (k, ok) in star_identities_hold(b, x, y, z).into_iter().enumerate() {
                        instances += 1;
                        if !ok {
                            failures += 1;
                            witnesses
                                .push(json!({ "order": n, "index": i, "identity": k + 1, "x": x, "y": y, "z": z }));
                        }
                    }
                }
            }
        }
        t.count("star_identities", instances, failures, witnesses);

        let full = Subset::full(n);
        let square = star_sets(b, &full, &full);
        let left = series(b, SeriesKind::Left);
        t.check(
            "left_square_is_star_ideal",
            is_ideal(b, &square).is_ok() && left.term(2) == &square,
            || brace_witness(n, i),
        );

        t.declare("gamma_distributivity");
        if let Ok(report) = gamma_distributivity_check(b) {
            let witnesses = report
                .failures
                .iter()
                .map(|f| json!({ "order": n, "index": i, "failure": f }))
                .collect();
            t.count("gamma_distributivity", report.triples, report.failures.len(), witnesses);
        }
        t
    });
    Ok(tally.finish(&[]))
}

fn covers_census(orders: &[usize]) -> bool {
    (1..=8).all(|n| orders.contains(&n))
}

fn series_suite(params: &SuiteParams) -> Result<Vec<Check>, CampaignError> {
    let braces = braces_in_scope(params)?;
    let tally = over_braces(&braces, |n, i, b| {
        let mut t = Tally::default();
        let r = nilpotency_checks(b);
        for c in &r.cross_checks {
            t.check(c.name, c.holds, || brace_witness(n, i));
        }
        let (l, rt, s, a) = (r.left.holds, r.right.holds, r.strong.holds, r.annihilator.holds);
        t.exhibit("converse_left_not_strong", l && !s, || brace_witness(n, i));
        t.exhibit("converse_right_not_strong", rt && !s, || brace_witness(n, i));
        t.exhibit("converse_strong_not_annihilator", s && !a, || brace_witness(n, i));
        t.exhibit("right_not_left_exhibit", rt && !l, || brace_witness(n, i));
        t
    });
    let existence: &[&str] = if covers_census(&params.orders) {
        &[
            "converse_left_not_strong",
            "converse_right_not_strong",
            "converse_strong_not_annihilator",
            "right_not_left_exhibit",
        ]
    } else {
        &[]
    };
    Ok(tally.finish(existence))
}

fn lattice_of(b: &SkewBrace) -> Vec<Subset> {
    subbrace_lattice(b, DEFAULT_LATTICE_BUDGET).expect("catalog orders are within the lattice budget")
}

/// Every transversal of `orbits` (one element from each).
fn transversals(orbits: &[Subset]) -> Vec<Vec<usize>> {
    orbits.iter().fold(vec![Vec::new()], |acc, o| {
        acc.iter()
            .flat_map(|t| {
                o.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

fn hirsch(params: &SuiteParams) -> Result<Vec<Check>, CampaignError> {
    let braces = braces_in_scope(params)?;
    let tally = over_braces(&braces, |n, i, b| {
        let mut t = Tally::default();
        for id in [
            "hirsch_right_nilpotent",
            "hirsch_annihilator_nilpotent",
            "quotient_surjectivity",
            "lambda_orbit_transversals_generate",
        ] {
            t.declare(id);
        }
        let r = nilpotency_checks(b);
        let (right, ann) = (r.right.holds, r.annihilator.holds);
        let full = Subset::full(n);
        let square = star_sets(b, &full, &full);
        let (quotient, proj) = b.quotient(&square).expect("B∗B is an ideal");
        for a in lattice_of(b) {
            let w = || json!({ "order": n, "index": i, "subbrace": a.to_vec() });
            let spans = sum_set(b, &a, &square).is_full();
            if right && spans && star_sets(b, &a, &full).is_subset(&a) {
                t.check("hirsch_right_nilpotent", a.is_full(), w);
            }
            if ann && spans {
                t.check("hirsch_annihilator_nilpotent", a.is_full(), w);
            }
            if ann {
                let image = Subset::from_elements(quotient.order(), a.iter().map(|x| proj[x]));
                if image.is_full() {
                    t.check("quotient_surjectivity", a.is_full(), w);
                }
            }
        }
        if ann {
            for tr in transversals(&lambda_orbits(b)) {
                let s = Subset::from_elements(n, tr.iter().copied());
                t.check(
                    "lambda_orbit_transversals_generate",
                    generates(b, &s),
                    || json!({ "order": n, "index": i, "transversal": tr }),
                );
            }
        }
        t
    });
    Ok(tally.finish(&[]))
}

/// Elements `x` such that `S ∪ {x}` generates `B` only when `S` does.
fn non_generating_elements(b: &SkewBrace) -> Subset {
    let n = b.order();
    let generating: Vec<bool> = (0..1usize << n)
        .map(|mask| generates(b, &Subset::from_elements(n, (0..n).filter(|k| mask >> k & 1 == 1))))
        .collect();
    Subset::from_elements(
        n,
        (0..n).filter(|&x| (0..1usize << n).all(|mask| !generating[mask | 1 << x] || generating[mask])),
    )
}

fn radical_suite(params: &SuiteParams) -> Result<Vec<Check>, CampaignError> {
    let braces = braces_in_scope(params)?;
    let tally = over_braces(&braces, |n, i, b| {
        let mut t = Tally::default();
        for id in [
            "maximal_subbraces_are_ideals",
            "radical_is_intersection_of_maximal_subbraces",
            "radical_is_non_generating_elements",
            "subideal_chains_exist",
            "idealizer_product_characterization",
        ] {
            t.declare(id);
        }
        if !nilpotency_checks(b).annihilator.holds {
            return t;
        }
        let lattice = lattice_of(b);
        let maximal = maximal_subbraces(b, &lattice);
        for m in &maximal {
            t.check(
                "maximal_subbraces_are_ideals",
                is_ideal(b, m).is_ok(),
                || json!({ "order": n, "index": i, "subbrace": m.to_vec() }),
            );
        }
        let rad = radical(b, &lattice);
        let meet = intersect_all(n, &maximal);
        t.check("radical_is_intersection_of_maximal_subbraces", rad == meet, || {
            json!({ "order": n, "index": i, "radical": rad.to_vec(), "intersection": meet.to_vec(),
                    "maximal_ideals": maximal_ideals(b, &lattice).len() })
        });
        if n <= NON_GENERATOR_LIMIT {
            let ng = non_generating_elements(b);
            t.check(
                "radical_is_non_generating_elements",
                rad == ng,
                || json!({ "order": n, "index": i, "radical": rad.to_vec(), "non_generating": ng.to_vec() }),
            );
        }
        for a in &lattice {
            let w = || json!({ "order": n, "index": i, "subbrace": a.to_vec() });
            match subideal_chain(b, a, &lattice) {
                Ok(chain) => t.check("subideal_chains_exist", chain.is_some(), w),
                Err(_) => t.check("subideal_chains_exist", false, w),
            }
            if let Ok(id) = idealizer(b, a, &lattice) {
                t.check("idealizer_product_characterization", id.characterizations_agree, w);
            }
        }
        t
    });
    Ok(tally.finish(&[]))
}

fn solution_witness(sol: &Solution) -> Value {
    serde_json::to_value(sol.to_json()).expect("serializable")
}

/// Checks shared by exhaustive and sampled solutions.
fn check_solution(t: &mut Tally, sol: &Solution, budget: usize) -> Result<(), SolutionError> {
    let report = match equivalence_check(sol, budget) {
        Err(e @ SolutionError::BudgetExceeded(_)) => return Err(e),
        other => other,
    };
    t.check(
        "equivalence_biconditional",
        report.is_ok(),
        || json!({ "solution": solution_witness(sol), "error": report.as_ref().err().map(|e| e.to_string()) }),
    );
    if let (true, Ok(r)) = (sol.is_involutive(), &report) {
        t.check("involutive_abelian_type", r.abelian_type, || solution_witness(sol));
    }
    let n = sol.size();
    let distinct = {
        let mut pairs: Vec<_> = (0..n).map(|x| (sol.sigma(x).clone(), sol.tau(x).clone())).collect();
        pairs.sort();
        pairs.dedup();
        pairs.len() == n
    };
    let retract_ok = match retract(sol) {
        Ok((ret, _)) => {
            let revalid = verify_solution(
                (0..ret.size()).map(|x| ret.sigma(x).clone()).collect(),
                (0..ret.size()).map(|x| ret.tau(x).clone()).collect(),
            )
            .is_ok();
            revalid && ret.size() <= n && ((ret.size() == n) == distinct)
        }
        Err(_) => false,
    };
    t.check("retraction_revalidates", retract_ok, || solution_witness(sol));
    Ok(())
}

/// Size of the sampled solutions in the equivalence suite.
pub const SAMPLED_SIZE: usize = 5;

fn equivalence(params: &SuiteParams, scope: &mut Scope) -> Result<Vec<Check>, CampaignError> {
    let budget = params.budget;
    let mut tally = Tally::default();
    for id in [
        "equivalence_biconditional",
        "involutive_abelian_type",
        "retraction_revalidates",
    ] {
        tally.declare(id);
    }
    for &n in &params.orders {
        let sols = enumerate_involutive_solutions(n)?;
        let parts: Vec<Result<Tally, SolutionError>> = sols
            .par_iter()
            .map(|s| {
                let mut t = Tally::default();
                check_solution(&mut t, s, budget)?;
                let level = crate::ybe::multipermutation_level(s).ok().flatten();
                t.exhibit("non_multipermutation_exhibit", n == 4 && level.is_none(), || {
                    solution_witness(s)
                });
                Ok(t)
            })
            .collect();
        for p in parts {
            match p {
                Ok(t) => tally.merge(t),
                Err(e) => tally.check(
                    "equivalence_biconditional",
                    false,
                    || json!({ "size": n, "error": e.to_string() }),
                ),
            }
        }
    }
    let existence: &[&str] = if params.orders.contains(&4) {
        tally.declare("non_multipermutation_exhibit");
        &["non_multipermutation_exhibit"]
    } else {
        &[]
    };

    if params.samples > 0 {
        // Even samples are involutive, odd ones general; each sample has its
        // own stream so the result does not depend on scheduling.
        let parts: Vec<(Tally, usize)> = (0..params.samples)
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
                rng.set_stream(k as u64);
                let mut resampled = 0;
                loop {
                    let sol = if k % 2 == 0 {
                        random_involutive_solution(SAMPLED_SIZE, &mut rng)
                    } else {
                        random_solution(SAMPLED_SIZE, &mut rng)
                    };
                    let mut t = Tally::default();
                    match check_solution(&mut t, &sol, budget) {
                        Ok(()) => return (t, resampled),
                        Err(_) => resampled += 1,
                    }
                }
            })
            .collect();
        for (t, r) in parts {
            tally.merge(t);
            scope.resampled += r;
        }
        scope.sampled_size = Some(SAMPLED_SIZE);
        scope.samples = params.samples;
    }
    Ok(tally.finish(existence))
}

/// Census counts for one order.
pub fn census_row(n: usize, braces: &[SkewBrace]) -> Result<CensusRow, CampaignError> {
    let per: Vec<_> = braces
        .par_iter()
        .map(|b| (b.classify_flags(), b.is_trivial(), nilpotency_checks(b)))
        .collect();
    let count = |f: &dyn Fn(&(crate::brace::BraceFlags, bool, crate::series::NilpotencyReport)) -> bool| {
        per.iter().filter(|p| f(p)).count()
    };
    Ok(CensusRow {
        order: n,
        groups: groups_of_order(n)?.len(),
        braces: braces.len(),
        trivial: count(&|p| p.1),
        two_sided: count(&|p| p.0.two_sided),
        abelian_type: count(&|p| p.0.abelian_type),
        nilpotent_type: count(&|p| p.0.nilpotent_type),
        left: count(&|p| p.2.left.holds),
        right: count(&|p| p.2.right.holds),
        strong: count(&|p| p.2.strong.holds),
        annihilator: count(&|p| p.2.annihilator.holds),
    })
}

fn census_suite(params: &SuiteParams) -> Result<(Vec<Check>, Vec<CensusRow>), CampaignError> {
    let mut tally = Tally::default();
    let mut rows = Vec::new();
    for &n in &params.orders {
        let braces = brace_catalog(n, params.catalog_dir.as_ref())?;
        let row = census_row(n, &braces)?;
        if let Some(&expected) = EXPECTED_BRACE_COUNTS.get(n - 1) {
            tally.check(
                "brace_counts",
                row.braces == expected,
                || json!({ "order": n, "found": row.braces, "expected": expected }),
            );
        }
        if let Some(&expected) = EXPECTED_GROUP_COUNTS.get(n - 1) {
            tally.check(
                "group_counts",
                row.groups == expected,
                || json!({ "order": n, "found": row.groups, "expected": expected }),
            );
        }
        if let Some(&(_, total, bad)) = KNOWN_CENSUS.iter().find(|c| c.0 == n) {
            let not_ann: Vec<usize> = (0..braces.len())
                .filter(|&k| !nilpotency_checks(&braces[k]).annihilator.holds)
                .collect();
            let abelian = n != 8 || not_ann.iter().all(|&k| braces[k].add_group().is_abelian());
            tally.check(
                "census_non_annihilator",
                braces.len() == total && not_ann.len() == bad && abelian,
                || json!({ "order": n, "braces": braces.len(), "not_annihilator": not_ann }),
            );
        }
        rows.push(row);
    }
    Ok((tally.finish(&[]), rows))
}

/// One line of `bracelab classify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraceClassification {
    pub index: usize,
    pub order: usize,
    pub trivial: bool,
    pub two_sided: bool,
    pub abelian_type: bool,
    pub nilpotent_type: bool,
    pub mul_nilpotent: bool,
    pub left: bool,
    pub right: bool,
    pub strong: bool,
    pub annihilator: bool,
    pub left_class: Option<usize>,
    pub right_class: Option<usize>,
    pub strong_class: Option<usize>,
    pub annihilator_class: Option<usize>,
}

pub const CLASSIFY_HEADER: &str = "index,order,trivial,two_sided,abelian_type,nilpotent_type,mul_nilpotent,left,right,strong,annihilator,left_class,right_class,strong_class,annihilator_class";

impl BraceClassification {
    pub fn csv(&self) -> String {
        let o = |c: Option<usize>| c.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.index,
            self.order,
            self.trivial,
            self.two_sided,
            self.abelian_type,
            self.nilpotent_type,
            self.mul_nilpotent,
            self.left,
            self.right,
            self.strong,
            self.annihilator,
            o(self.left_class),
            o(self.right_class),
            o(self.strong_class),
            o(self.annihilator_class)
        )
    }
}

pub fn classify(braces: &[SkewBrace]) -> Vec<BraceClassification> {
    braces
        .par_iter()
        .enumerate()
        .map(|(index, b)| {
            let flags = b.classify_flags();
            let r = nilpotency_checks(b);
            BraceClassification {
                index,
                order: b.order(),
                trivial: flags.trivial,
                two_sided: flags.two_sided,
                abelian_type: flags.abelian_type,
                nilpotent_type: flags.nilpotent_type,
                mul_nilpotent: flags.mul_nilpotent,
                left: r.left.holds,
                right: r.right.holds,
                strong: r.strong.holds,
                annihilator: r.annihilator.holds,
                left_class: r.left.class,
                right_class: r.right.class,
                strong_class: r.strong.class,
                annihilator_class: r.annihilator.class,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(suite: &str, max: usize) -> SuiteParams {
        SuiteParams {
            orders: (1..=max).collect(),
            ..SuiteParams::defaults(suite, 7)
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("nope", &params("axioms", 2)),
            Err(CampaignError::SuiteUnknown(_))
        ));
    }

    #[test]
    fn small_suites_pass() {
        for suite in ["axioms", "identities", "series", "hirsch", "radical", "census"] {
            let r = run_suite(suite, &params(suite, 4)).unwrap();
            assert!(r.passed, "{suite}: {:#?}", r.checks);
            assert!(
                r.checks
                    .iter()
                    .all(|c| c.instances > 0 || c.claim_id.starts_with("converse") || c.claim_id.ends_with("exhibit")),
                "{suite}"
            );
        }
    }

    #[test]
    fn converse_claims_need_full_census() {
        let r = run_suite("series", &params("series", 4)).unwrap();
        let c = r.check("converse_left_not_strong").unwrap();
        assert_eq!((c.instances, c.failures), (0, 0));
    }

    #[test]
    fn star_identities_on_quadratic_brace() {
        let b = SkewBrace::from_zn_quadratic(4, 2).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..4 {
                    assert_eq!(star_identities_hold(&b, x, y, z), [true; 3]);
                }
            }
        }
    }

    #[test]
    fn non_generating_elements_of_quadratic_brace() {
        // Sub-braces are {0}, {0,2} and B, so 2 is the only non-trivial non-generator.
        let b = SkewBrace::from_zn_quadratic(4, 2).unwrap();
        assert_eq!(non_generating_elements(&b).to_vec(), vec![0, 2]);
    }

    #[test]
    fn equivalence_small_sizes_with_samples() {
        let p = SuiteParams {
            orders: vec![1, 2, 3, 4],
            samples: 20,
            ..SuiteParams::defaults("equivalence", 3)
        };
        let a = run_suite("equivalence", &p).unwrap();
        assert!(a.passed, "{:#?}", a.checks);
        assert_eq!(a.check("non_multipermutation_exhibit").unwrap().failures, 0);
        let b = run_suite("equivalence", &p).unwrap();
        assert_eq!(a.checks, b.checks);
    }

    #[test]
    fn census_csv_shape() {
        let r = run_suite("census", &params("census", 4)).unwrap();
        let csv = r.csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CENSUS_HEADER);
        assert_eq!(lines[4], "4,2,4,2,4,4,4,4,4,4,4");
    }
}

//! Acceptance criteria, one test each. Every test writes a single
//! `PASS`/`FAIL` line to the stderr handle (not captured by the harness) and
//! then asserts its outcome.

use std::io::Write;

use bracelab::campaign::{run_suite, SuiteParams};
use bracelab::enumeration::{enumerate_skew_braces, enumerate_skew_braces_direct, BraceEnumOptions};
use bracelab::iso::group_isomorphism;
use bracelab::series::{nilpotency_report, series, SeriesKind};
use bracelab::ybe::{involutive_from_sigma, multipermutation_level, permutation_brace};
use bracelab::{GroupTable, Perm, SkewBrace};

fn report(criterion: usize, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let line = format!("acceptance {criterion:>2} {verdict} {name}: {detail}\n");
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {criterion} failed: {detail}");
}

fn braces_up_to(max: usize) -> Vec<SkewBrace> {
    (1..=max)
        .flat_map(|n| enumerate_skew_braces(n, &BraceEnumOptions::default()).unwrap())
        .collect()
}

fn klein() -> GroupTable {
    GroupTable::cyclic(2).direct_product(&GroupTable::cyclic(2))
}

#[test]
fn criterion_01_order_8_census() {
    let opts = BraceEnumOptions {
        parallel: false,
        ..Default::default()
    };
    let start = std::time::Instant::now();
    let braces = enumerate_skew_braces(8, &opts).unwrap();
    let bad: Vec<&SkewBrace> = braces
        .iter()
        .filter(|b| !nilpotency_report(b).unwrap().annihilator.holds)
        .collect();
    let abelian = bad.iter().all(|b| b.add_group().is_abelian());
    let ok = braces.len() == 47 && bad.len() == 2 && abelian;
    let detail = format!(
        "{} braces, {} not annihilator nilpotent, all of abelian type: {abelian}, {:.2}s single-threaded",
        braces.len(),
        bad.len(),
        start.elapsed().as_secs_f64()
    );
    report(1, "order-8 census", ok, &detail);
}

#[test]
fn criterion_02_quadratic_brace_on_z4() {
    let b = SkewBrace::from_zn_quadratic(4, 2).unwrap();
    let ann = nilpotency_report(&b).unwrap().annihilator.holds;
    let mul_klein = group_isomorphism(b.mul_group(), &klein()).is_some();
    let add_cyclic = group_isomorphism(b.add_group(), &GroupTable::cyclic(4)).is_some();
    let detail = format!("annihilator nilpotent {ann}, (B,∘) ≅ V₄ {mul_klein}, (B,+) ≅ ℤ/4 {add_cyclic}");
    report(2, "ℤ/4 quadratic brace", ann && mul_klein && add_cyclic, &detail);
}

#[test]
fn criterion_03_five_point_solution() {
    let mut sigma = vec![Perm::identity(5); 3];
    sigma.push(Perm::from_cycles(5, "(23)(45)", 1).unwrap());
    sigma.push(Perm::from_cycles(5, "(12)(45)", 1).unwrap());
    let sol = involutive_from_sigma(sigma).expect("the five-point data is a solution");
    let level = multipermutation_level(&sol).unwrap();
    let (g, _) = permutation_brace(&sol, bracelab::DEFAULT_BUDGET).unwrap();
    let add_c6 = group_isomorphism(g.add_group(), &GroupTable::cyclic(6)).is_some();
    let mul_s3 = group_isomorphism(g.mul_group(), &GroupTable::symmetric(3)).is_some();
    let r = nilpotency_report(&g).unwrap();
    let ok = level.is_some() && g.order() == 6 && add_c6 && mul_s3 && r.right.holds && !r.left.holds;
    let detail = format!(
        "level {level:?}, |𝒢| = {}, (𝒢,+) ≅ ℤ/6 {add_c6}, (𝒢,∘) ≅ S₃ {mul_s3}, right {}, left {}",
        g.order(),
        r.right.holds,
        r.left.holds
    );
    report(3, "five-point solution", ok, &detail);
}

#[test]
fn criterion_04_equivalence_theorem() {
    let params = SuiteParams::defaults("equivalence", 2024);
    let r = run_suite("equivalence", &params).unwrap();
    let c = r.check("equivalence_biconditional").unwrap();
    // 1 + 2 + 5 + 23 involutive solutions of size at most 4, plus the samples.
    let ok = r.passed && c.failures == 0 && c.instances == 31 + 1000 && r.scope.samples == 1000;
    let detail = format!(
        "{} solutions checked ({} sampled at size 5, seed {}, {} resampled), {} failures, {:.1}s",
        c.instances, r.scope.samples, r.seed, r.scope.resampled, c.failures, r.wall_time_s
    );
    report(4, "multipermutation equivalence", ok, &detail);
}

#[test]
fn criterion_05_nilpotency_consistency() {
    let braces = braces_up_to(8);
    let mut disagreements = 0;
    let mut nilpotent_type = 0;
    for b in &braces {
        let ann = series(b, SeriesKind::Annihilator).terminates;
        let gamma = series(b, SeriesKind::Gamma).terminates;
        let bracket = series(b, SeriesKind::GammaBracket).terminates;
        if ann != gamma || ann != bracket {
            disagreements += 1;
        }
        if b.classify_flags().nilpotent_type {
            nilpotent_type += 1;
            let left = series(b, SeriesKind::Left).terminates;
            let right = series(b, SeriesKind::Right).terminates;
            let strong = series(b, SeriesKind::Strong).terminates;
            if ann != (left && right) || ann != strong {
                disagreements += 1;
            }
        }
    }
    let detail = format!(
        "{} braces ({nilpotent_type} of nilpotent type), {disagreements} disagreements",
        braces.len()
    );
    report(
        5,
        "nilpotency routes agree",
        disagreements == 0 && braces.len() == 62,
        &detail,
    );
}

fn suite_claims(suite: &str, claims: &[&str]) -> (bool, String) {
    let r = run_suite(suite, &SuiteParams::defaults(suite, 2024)).unwrap();
    let mut ok = r.passed;
    let parts: Vec<String> = claims
        .iter()
        .map(|id| {
            let c = r.check(id).unwrap();
            ok &= c.failures == 0 && c.instances > 0;
            format!("{id} {}/{} failed", c.failures, c.instances)
        })
        .collect();
    (ok, parts.join(", "))
}

#[test]
fn criterion_06_hirsch_analogues() {
    let (ok, detail) = suite_claims("hirsch", &["hirsch_right_nilpotent", "hirsch_annihilator_nilpotent"]);
    report(6, "generation theorems", ok, &detail);
}

#[test]
fn criterion_07_radical() {
    let (ok, detail) = suite_claims(
        "radical",
        &[
            "maximal_subbraces_are_ideals",
            "radical_is_intersection_of_maximal_subbraces",
        ],
    );
    report(7, "radical corollary", ok, &detail);
}

#[test]
fn criterion_08_identities() {
    let (ok, detail) = suite_claims("identities", &["star_identities", "gamma_distributivity"]);
    report(8, "∗-identities and distributivity", ok, &detail);
}

#[test]
fn criterion_09_double_method() {
    let counts: Vec<(usize, usize)> = (1..=6)
        .map(|n| {
            (
                enumerate_skew_braces(n, &BraceEnumOptions::default()).unwrap().len(),
                enumerate_skew_braces_direct(n).unwrap().len(),
            )
        })
        .collect();
    let ok = counts.iter().all(|(h, d)| h == d);
    report(
        9,
        "holomorph and direct counts",
        ok,
        &format!("(holomorph, direct) for n = 1..6: {counts:?}"),
    );
}

#[test]
#[ignore = "long run; use --ignored, preferably with --release"]
fn criterion_10_stretch_orders_16_and_27() {
    let mut details = Vec::new();
    let mut ok = true;
    for (n, total, bad) in [(16, 1605, 40), (27, 101, 4)] {
        let opts = BraceEnumOptions {
            checkpoint: Some(std::env::temp_dir().join(format!("bracelab-stretch-{n}.jsonl"))),
            ..Default::default()
        };
        let braces = enumerate_skew_braces(n, &opts).unwrap();
        let not_ann = braces
            .iter()
            .filter(|b| !nilpotency_report(b).unwrap().annihilator.holds)
            .count();
        ok &= braces.len() == total && not_ann == bad;
        details.push(format!(
            "order {n}: {} braces, {not_ann} not annihilator nilpotent",
            braces.len()
        ));
    }
    report(10, "stretch census", ok, &details.join("; "));
}

//! Nilpotency series of skew braces and their groups, with cross-checked
//! nilpotency verdicts.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::brace::SkewBrace;
use crate::subset::Subset;
use crate::substructures::{self, commutator, invariant_substructures, is_ideal, is_left_ideal, star_sets, Op};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Left,
    Right,
    Strong,
    Gamma,
    GammaBracket,
    Socle,
    Annihilator,
    LcsAdd,
    LcsMul,
    UcsAdd,
    UcsMul,
}

impl SeriesKind {
    pub const ALL: [SeriesKind; 11] = [
        SeriesKind::Left,
        SeriesKind::Right,
        SeriesKind::Strong,
        SeriesKind::Gamma,
        SeriesKind::GammaBracket,
        SeriesKind::Socle,
        SeriesKind::Annihilator,
        SeriesKind::LcsAdd,
        SeriesKind::LcsMul,
        SeriesKind::UcsAdd,
        SeriesKind::UcsMul,
    ];

    pub fn ascending(self) -> bool {
        matches!(
            self,
            SeriesKind::Socle | SeriesKind::Annihilator | SeriesKind::UcsAdd | SeriesKind::UcsMul
        )
    }

    /// Index carried by `chain[0]`: 1 for `B¹`, `B⁽¹⁾`, `B^[1]`, `Γ_[1]`, else 0.
    pub fn first_index(self) -> usize {
        match self {
            SeriesKind::Left | SeriesKind::Right | SeriesKind::Strong | SeriesKind::GammaBracket => 1,
            _ => 0,
        }
    }
}

/// A computed chain of subsets.
///
/// `chain` ends with one repeated term, so `chain[stabilized_at] ==
/// chain[stabilized_at + 1]`. `class` is the series index of the terminal
/// term when the chain reaches `{0}` (descending) or `B` (ascending).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub chain: Vec<Subset>,
    pub stabilized_at: usize,
    pub terminates: bool,
    pub class: Option<usize>,
    /// Positions whose term lacks the expected closure (left ideal, ideal or
    /// normal subgroup) or breaks monotonicity. Empty for correct input.
    pub defects: Vec<usize>,
}

impl SeriesReport {
    fn new(b: &SkewBrace, kind: SeriesKind, mut chain: Vec<Subset>) -> Self {
        // Trim to the first stable position plus its repeat.
        let stabilized_at = (0..chain.len() - 1)
            .find(|&i| chain[i..].iter().all(|t| t == &chain[i]))
            .unwrap_or(chain.len() - 1);
        chain.truncate(stabilized_at + 1);
        chain.push(chain[stabilized_at].clone());
        let last = &chain[stabilized_at];
        let terminates = if kind.ascending() {
            last.is_full()
        } else {
            last.is_zero()
        };
        let class = terminates.then(|| stabilized_at + kind.first_index());
        let defects = term_defects(b, kind, &chain);
        SeriesReport {
            kind,
            chain,
            stabilized_at,
            terminates,
            class,
            defects,
        }
    }

    /// The term with series index `i`, extended by its stable value.
    pub fn term(&self, i: usize) -> &Subset {
        let k = i
            .checked_sub(self.kind.first_index())
            .expect("index below series start");
        &self.chain[k.min(self.stabilized_at)]
    }
}

fn term_defects(b: &SkewBrace, kind: SeriesKind, chain: &[Subset]) -> Vec<usize> {
    let mut bad = Vec::new();
    for (i, t) in chain.iter().enumerate() {
        let closed = match kind {
            SeriesKind::Left => is_left_ideal(b, t),
            SeriesKind::LcsAdd | SeriesKind::UcsAdd => b.add_group().is_normal_subgroup(t),
            SeriesKind::LcsMul | SeriesKind::UcsMul => b.mul_group().is_normal_subgroup(t),
            _ => is_ideal(b, t).is_ok(),
        };
        let monotone = i == 0
            || if kind.ascending() {
                chain[i - 1].is_subset(t)
            } else {
                t.is_subset(&chain[i - 1])
            };
        if !closed || !monotone {
            bad.push(i);
        }
    }
    bad
}

/// Iterates `step` from `start` until the first repeat or `cap` terms.
fn iterate(start: Subset, cap: usize, mut step: impl FnMut(&Subset) -> Subset) -> Vec<Subset> {
    let mut chain = vec![start];
    while chain.len() < cap {
        let next = step(chain.last().unwrap());
        let done = &next == chain.last().unwrap();
        chain.push(next);
        if done {
            break;
        }
    }
    chain
}

/// Chains where term `m` is generated by products of terms `i` and `m − i`.
///
/// Later terms depend on all earlier ones, so a single repeat is not taken
/// as stabilization: the chain runs to the cap unless it reaches `{0}`.
fn convolution_chain(b: &SkewBrace, cap: usize, with_commutators: bool) -> Vec<Subset> {
    let n = b.order();
    let mut chain = vec![Subset::full(n)];
    let mut memo: HashMap<(Subset, Subset), Subset> = HashMap::new();
    while chain.len() < cap && !chain.last().unwrap().is_zero() {
        let m = chain.len() + 1;
        let mut gens = Subset::zero(n);
        for i in 1..m {
            let (x, y) = (&chain[i - 1], &chain[m - i - 1]);
            let part = memo.entry((x.clone(), y.clone())).or_insert_with(|| {
                let s = star_sets(b, x, y);
                if with_commutators {
                    substructures::add_closure(b, &s.union(&commutator(b, x, y, Op::Add)))
                } else {
                    s
                }
            });
            gens = gens.union(part);
        }
        chain.push(substructures::add_closure(b, &gens));
    }
    chain
}

/// `Γ₀(I) = I`, `Γₖ₊₁(I) = ⟨Γₖ(I)∗B, B∗Γₖ(I), [B, Γₖ(I)]₊⟩₊`.
pub fn gamma_series_of(b: &SkewBrace, ideal: &Subset) -> Vec<Subset> {
    let full = Subset::full(b.order());
    iterate(ideal.clone(), b.order() + 1, |g| {
        let gens = star_sets(b, g, &full)
            .union(&star_sets(b, &full, g))
            .union(&commutator(b, &full, g, Op::Add));
        substructures::add_closure(b, &gens)
    })
}

/// `S₀ = 0`, `Sₖ₊₁ = π⁻¹(T(B/Sₖ))` with `T` the socle or the annihilator.
fn ascending_by_quotient(b: &SkewBrace, annihilator: bool) -> Vec<Subset> {
    iterate(Subset::zero(b.order()), b.order() + 1, |cur| {
        let (q, proj) = b.quotient(cur).expect("socle and annihilator series consist of ideals");
        let inv = invariant_substructures(&q);
        let top = if annihilator { inv.ann } else { inv.soc };
        top.preimage(&proj)
    })
}

pub fn series(b: &SkewBrace, kind: SeriesKind) -> SeriesReport {
    let n = b.order();
    let full = Subset::full(n);
    let cap = n + 1;
    let chain = match kind {
        SeriesKind::Left => iterate(full.clone(), cap, |t| star_sets(b, &full, t)),
        SeriesKind::Right => iterate(full.clone(), cap, |t| star_sets(b, t, &full)),
        SeriesKind::Strong => convolution_chain(b, cap, false),
        SeriesKind::Gamma => gamma_series_of(b, &full),
        SeriesKind::GammaBracket => convolution_chain(b, cap, true),
        SeriesKind::Socle => ascending_by_quotient(b, false),
        SeriesKind::Annihilator => ascending_by_quotient(b, true),
        SeriesKind::LcsAdd => b.add_group().lower_central_series(),
        SeriesKind::LcsMul => b.mul_group().lower_central_series(),
        SeriesKind::UcsAdd => b.add_group().upper_central_series(),
        SeriesKind::UcsMul => b.mul_group().upper_central_series(),
    };
    SeriesReport::new(b, kind, chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub class: Option<usize>,
}

impl From<&SeriesReport> for Verdict {
    fn from(r: &SeriesReport) -> Self {
        Verdict {
            holds: r.terminates,
            class: r.class,
        }
    }
}

/// A named consistency check and its outcome. Hard checks abort the report
/// when they fail; soft ones are only recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub name: &'static str,
    pub holds: bool,
    pub hard: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NilpotencyReport {
    pub left: Verdict,
    pub right: Verdict,
    pub strong: Verdict,
    pub annihilator: Verdict,
    pub nilpotent_type: bool,
    pub mul_nilpotent: bool,
    pub gamma_class: Option<usize>,
    pub gamma_bracket_zero_at: Option<usize>,
    pub cross_checks: Vec<CrossCheck>,
}

impl NilpotencyReport {
    pub fn soft_failures(&self) -> impl Iterator<Item = &CrossCheck> {
        self.cross_checks.iter().filter(|c| !c.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("cross-check failed: {check}")]
    CrossCheckFailed { check: &'static str },
    #[error("hypothesis unmet: the brace is not annihilator nilpotent")]
    HypothesisUnmet,
}

/// Verdicts with every cross-check, or the first failed hard check.
pub fn nilpotency_report(b: &SkewBrace) -> Result<NilpotencyReport, SeriesError> {
    let report = nilpotency_checks(b);
    if let Some(c) = report.cross_checks.iter().find(|c| c.hard && !c.holds) {
        return Err(SeriesError::CrossCheckFailed { check: c.name });
    }
    Ok(report)
}

/// Verdicts with every cross-check, failed ones included.
pub fn nilpotency_checks(b: &SkewBrace) -> NilpotencyReport {
    let left = series(b, SeriesKind::Left);
    let right = series(b, SeriesKind::Right);
    let strong = series(b, SeriesKind::Strong);
    let gamma = series(b, SeriesKind::Gamma);
    let bracket = series(b, SeriesKind::GammaBracket);
    let ann = series(b, SeriesKind::Annihilator);
    let socle = series(b, SeriesKind::Socle);
    let flags = b.classify_flags();

    let (l, r, s, a) = (left.terminates, right.terminates, strong.terminates, ann.terminates);
    let mut checks = Vec::new();
    let mut check = |name, holds, hard| checks.push(CrossCheck { name, holds, hard });

    check("ann_series_agrees_with_gamma", a == gamma.terminates, true);
    check("ann_series_agrees_with_gamma_bracket", a == bracket.terminates, true);
    check("ann_class_equals_gamma_class", ann.class == gamma.class, true);
    let gamma_inside_bracket = (1..=b.order()).all(|k| gamma.term(k).is_subset(bracket.term(k)));
    check("gamma_n_inside_gamma_bracket_n", gamma_inside_bracket, true);
    let all_defects = [&left, &right, &gamma, &bracket, &ann, &socle]
        .iter()
        .all(|r| r.defects.is_empty());
    check("series_terms_closed_and_monotone", all_defects, true);
    check("strong_terms_are_ideals", strong.defects.is_empty(), false);
    check("annihilator_implies_strong", !a || s, true);
    check("strong_implies_left", !s || l, true);
    check("strong_implies_right", !s || r, true);
    if flags.nilpotent_type {
        check("nilpotent_type_strong_iff_left_and_right", s == (l && r), true);
        check("nilpotent_type_annihilator_iff_strong", a == s, true);
        check(
            "nilpotent_type_left_and_right_gives_mul_nilpotent",
            !(l && r) || flags.mul_nilpotent,
            true,
        );
        check("nilpotent_type_left_iff_mul_nilpotent", l == flags.mul_nilpotent, false);
    }
    if socle.terminates {
        // The reversed socle series is an s-series; B^(i+1) lies in its i-th term.
        let m = socle.stabilized_at;
        let inside = (0..=m).all(|i| right.term(i + 1).is_subset(socle.term(m - i)));
        check("right_series_inside_socle_s_series", inside, true);
    }

    NilpotencyReport {
        left: (&left).into(),
        right: (&right).into(),
        strong: (&strong).into(),
        annihilator: (&ann).into(),
        nilpotent_type: flags.nilpotent_type,
        mul_nilpotent: flags.mul_nilpotent,
        gamma_class: gamma.class,
        gamma_bracket_zero_at: bracket.class,
        cross_checks: checks,
    }
}

/// One failed distributivity identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributivityFailure {
    pub identity: usize,
    pub k: usize,
    pub a: usize,
    pub q: usize,
    pub w: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistributivityReport {
    /// Least `c` with `Γ_[c] = 0`.
    pub c: usize,
    pub triples: usize,
    pub failures: Vec<DistributivityFailure>,
}

/// For `Γ_[c] = 0`, `a ∈ Γ_[c−k]` and `q, w ∈ Γ_[k−1]`, checks
/// 1. `a∗(q+w) = a∗q + a∗w`
/// 2. `a∗(q∘w) = a∗q + a∗w`
/// 3. `(q∘w)∗a = q∗a + w∗a`
/// 4. `(q+w)∗a = q∗a + w∗a`
/// 5. `[a,q+w]₊ = [a,q]₊ + [a,w]₊`
/// 6. `[a,q∘w]₊ = [a,q]₊ + [a,w]₊`
pub fn gamma_distributivity_check(b: &SkewBrace) -> Result<DistributivityReport, SeriesError> {
    let bracket = series(b, SeriesKind::GammaBracket);
    let c = bracket.class.ok_or(SeriesError::HypothesisUnmet)?;
    let mut triples = 0;
    let mut failures = Vec::new();
    for k in 2..c {
        let outer = bracket.term(c - k);
        let inner = bracket.term(k - 1);
        for a in outer.iter() {
            for q in inner.iter() {
                for w in inner.iter() {
                    triples += 1;
                    let (qw_add, qw_mul) = (b.add(q, w), b.mul(q, w));
                    let comm = |x| b.add_commutator(a, x);
                    let holds = [
                        b.star(a, qw_add) == b.add(b.star(a, q), b.star(a, w)),
                        b.star(a, qw_mul) == b.add(b.star(a, q), b.star(a, w)),
                        b.star(qw_mul, a) == b.add(b.star(q, a), b.star(w, a)),
                        b.star(qw_add, a) == b.add(b.star(q, a), b.star(w, a)),
                        comm(qw_add) == b.add(comm(q), comm(w)),
                        comm(qw_mul) == b.add(comm(q), comm(w)),
                    ];
                    for (i, ok) in holds.iter().enumerate() {
                        if !ok {
                            failures.push(DistributivityFailure {
                                identity: i + 1,
                                k,
                                a,
                                q,
                                w,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(DistributivityReport { c, triples, failures })
}

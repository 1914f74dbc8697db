//! Skew braces of order `n` from regular subgroups of holomorphs, with an
//! independent direct table search for small orders.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::groups::{automorphisms, groups_of_order};
use super::EnumError;
use crate::brace::{relabeled_key, verify_skew_brace, BraceJson, SkewBrace};
use crate::group::GroupTable;
use crate::iso::{brace_fingerprint, isomorphic};
use crate::perm::{all_permutations, Perm};

/// How regular subgroups are reduced before the global isomorphism merge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// `Aut(A)`-conjugacy canonical form when `|Aut(A)|` is small, then merge.
    ConjugacyThenIso,
    /// Isomorphism merge only.
    IsoOnly,
}

#[derive(Debug, Clone)]
pub struct BraceEnumOptions {
    pub reduction: Reduction,
    /// Largest `|Aut(A)|` for which the conjugacy canonical form is computed.
    pub conjugacy_limit: usize,
    /// JSON-lines file of finished `(additive group, first choice)` prefixes.
    pub checkpoint: Option<PathBuf>,
    pub parallel: bool,
}

impl Default for BraceEnumOptions {
    fn default() -> Self {
        BraceEnumOptions {
            reduction: Reduction::ConjugacyThenIso,
            conjugacy_limit: 200,
            checkpoint: None,
            parallel: true,
        }
    }
}

/// Bound on the order accepted by [`enumerate_skew_braces`].
pub const MAX_BRACE_ORDER: usize = 32;

/// Regular subgroups of `Hol(A)` as maps `a ↦ f_a ∈ Aut(A)`, stored as
/// image arrays `f[a][x]`.
struct RegularSearch<'a> {
    add: &'a GroupTable,
    aut: &'a [Perm],
    /// `semiregular[a]` lists automorphisms `f` with `⟨(a,f)⟩` semiregular.
    semiregular: Vec<Vec<usize>>,
    f: Vec<Option<Perm>>,
    assigned: Vec<usize>,
    gens: Vec<usize>,
}

impl<'a> RegularSearch<'a> {
    fn new(add: &'a GroupTable, aut: &'a [Perm]) -> Self {
        let n = add.order();
        let semiregular = (0..n)
            .map(|a| {
                (0..aut.len())
                    .filter(|&k| cyclic_is_semiregular(add, a, &aut[k]))
                    .collect()
            })
            .collect();
        let mut f = vec![None; n];
        f[0] = Some(Perm::identity(n));
        RegularSearch {
            add,
            aut,
            semiregular,
            f,
            assigned: vec![0],
            gens: Vec::new(),
        }
    }

    fn set(&mut self, a: usize, g: Perm) -> bool {
        match &self.f[a] {
            Some(h) => *h == g,
            None => {
                self.f[a] = Some(g);
                self.assigned.push(a);
                true
            }
        }
    }

    fn undo(&mut self, len: usize) {
        for a in self.assigned.drain(len..) {
            self.f[a] = None;
        }
    }

    /// `(a,f)(b,g) = (a + f(b), f∘g)`; closes under right multiplication by gens.
    fn close(&mut self) -> bool {
        let mut p = 0;
        while p < self.assigned.len() {
            let x = self.assigned[p];
            for gi in 0..self.gens.len() {
                let g = self.gens[gi];
                let fx = self.f[x].as_ref().unwrap();
                let fg = self.f[g].as_ref().unwrap();
                let y = self.add.op(x, fx.apply(g));
                let h = fx.compose(fg);
                if !self.set(y, h) {
                    return false;
                }
            }
            p += 1;
        }
        true
    }

    fn push_gen(&mut self, a: usize, k: usize) -> bool {
        let len = self.assigned.len();
        let ok = self.set(a, self.aut[k].clone()) && {
            self.gens.push(a);
            let ok = self.close();
            if !ok {
                self.gens.pop();
            }
            ok
        };
        if !ok {
            self.undo(len);
        }
        ok
    }

    fn run(&mut self, out: &mut Vec<Vec<Perm>>) {
        let n = self.add.order();
        let Some(a) = (0..n).find(|&a| self.f[a].is_none()) else {
            out.push(self.f.iter().map(|f| f.clone().unwrap()).collect());
            return;
        };
        for ki in 0..self.semiregular[a].len() {
            let k = self.semiregular[a][ki];
            let len = self.assigned.len();
            if self.push_gen(a, k) {
                self.run(out);
                self.gens.pop();
                self.undo(len);
            }
        }
    }
}

fn cyclic_is_semiregular(add: &GroupTable, a: usize, f: &Perm) -> bool {
    // (a,f)^k = (a_k, f^k); the first power with a_k = 0 must be the identity.
    let (mut x, mut g) = (a, f.clone());
    while x != 0 {
        x = add.op(a, f.apply(x));
        g = f.compose(&g);
    }
    g.is_identity()
}

fn brace_from_family(add: &GroupTable, f: &[Perm]) -> SkewBrace {
    let n = add.order();
    let mul: Vec<usize> = (0..n * n).map(|i| add.op(i / n, f[i / n].apply(i % n))).collect();
    let mul = GroupTable::from_flat(n, mul).expect("regular subgroups give groups");
    verify_skew_brace(add.clone(), mul).expect("regular subgroups give skew braces")
}

/// Canonical key of a regular subgroup under conjugation by `Aut(A)`:
/// `ψ` sends `(a, f_a)` to `(ψ(a), ψ f_a ψ⁻¹)`.
fn conjugacy_key(f: &[Perm], aut: &[Perm]) -> Vec<usize> {
    let n = f.len();
    aut.iter()
        .map(|psi| {
            let mut g = vec![Vec::new(); n];
            for a in 0..n {
                g[psi.apply(a)] = psi.conjugate(&f[a]).into_images();
            }
            g.concat()
        })
        .min()
        .unwrap()
}

/// Second-level prefixes: the first free element is `1`; its automorphism is
/// taken up to conjugacy by the stabilizer of `1` in `Aut(A)`.
fn first_choices(add: &GroupTable, aut: &[Perm]) -> Vec<usize> {
    if add.order() < 2 {
        return Vec::new();
    }
    let stab: Vec<&Perm> = aut.iter().filter(|p| p.apply(1) == 1).collect();
    let index: HashMap<&Perm, usize> = aut.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for (k, f) in aut.iter().enumerate() {
        if !cyclic_is_semiregular(add, 1, f) || seen.contains(&k) {
            continue;
        }
        reps.push(k);
        for s in &stab {
            seen.insert(index[&s.conjugate(f)]);
        }
    }
    reps
}

/// Braces from all regular subgroups of `Hol(A)` whose element over `1`
/// uses the automorphism `aut[first]` (all subgroups when `first` is `None`).
pub fn regular_subgroup_braces(add: &GroupTable, aut: &[Perm], first: Option<usize>) -> Vec<SkewBrace> {
    let mut search = RegularSearch::new(add, aut);
    let mut fams = Vec::new();
    match first {
        Some(k) => {
            if search.push_gen(1, k) {
                search.run(&mut fams);
            }
        }
        None => search.run(&mut fams),
    }
    fams.iter().map(|f| brace_from_family(add, f)).collect()
}

/// Order-independent merge: one representative per isomorphism class (the
/// least table key of the class), sorted by key.
pub fn merge_braces(candidates: Vec<SkewBrace>) -> Vec<SkewBrace> {
    let mut buckets: HashMap<_, Vec<SkewBrace>> = HashMap::new();
    for b in candidates {
        let bucket = buckets.entry(brace_fingerprint(&b)).or_default();
        match bucket.iter_mut().find(|o| isomorphic(o, &b).is_some()) {
            Some(o) => {
                if b.table_key() < o.table_key() {
                    *o = b;
                }
            }
            None => bucket.push(b),
        }
    }
    let mut all: Vec<SkewBrace> = buckets.into_values().flatten().collect();
    all.sort_by_key(|b| b.table_key());
    all
}

#[derive(Serialize, Deserialize)]
struct CheckpointEntry {
    group: usize,
    first: usize,
    braces: Vec<BraceJson>,
}

fn read_checkpoint(path: &PathBuf, order: usize) -> Result<HashMap<(usize, usize), Vec<SkewBrace>>, EnumError> {
    let mut done = HashMap::new();
    let Ok(f) = std::fs::File::open(path) else {
        return Ok(done);
    };
    for (i, line) in std::io::BufReader::new(f).lines().enumerate() {
        let line = line?;
        let Ok(e) = serde_json::from_str::<CheckpointEntry>(&line) else {
            // A torn final line from an interrupted run is recomputed.
            continue;
        };
        let braces = e
            .braces
            .iter()
            .map(|j| {
                let b = j.validate().map_err(|err| EnumError::Format {
                    line: i + 1,
                    msg: err.to_string(),
                })?;
                if b.value.order() != order {
                    return Err(EnumError::Format {
                        line: i + 1,
                        msg: "checkpoint is for a different order".into(),
                    });
                }
                Ok(b.value)
            })
            .collect::<Result<Vec<_>, _>>()?;
        done.insert((e.group, e.first), braces);
    }
    Ok(done)
}

/// All skew braces of order `n` up to isomorphism.
pub fn enumerate_skew_braces(n: usize, opts: &BraceEnumOptions) -> Result<Vec<SkewBrace>, EnumError> {
    if n == 0 || n > MAX_BRACE_ORDER {
        return Err(EnumError::BudgetExceeded {
            order: n,
            limit: MAX_BRACE_ORDER,
        });
    }
    if n == 1 {
        return Ok(vec![SkewBrace::trivial_from_group(&GroupTable::trivial())]);
    }
    let groups = groups_of_order(n)?;
    let auts: Vec<Vec<Perm>> = groups.iter().map(|g| automorphisms(g).elements).collect();
    let tasks: Vec<(usize, usize)> = groups
        .iter()
        .enumerate()
        .flat_map(|(gi, g)| first_choices(g, &auts[gi]).into_iter().map(move |k| (gi, k)))
        .collect();

    let done = match &opts.checkpoint {
        Some(p) => read_checkpoint(p, n)?,
        None => HashMap::new(),
    };
    let writer = match &opts.checkpoint {
        Some(p) => Some(Mutex::new(
            std::fs::OpenOptions::new().create(true).append(true).open(p)?,
        )),
        None => None,
    };

    let reduce = |gi: usize, braces: Vec<SkewBrace>| -> Vec<SkewBrace> {
        let aut = &auts[gi];
        if opts.reduction == Reduction::IsoOnly || aut.len() > opts.conjugacy_limit {
            return braces;
        }
        let mut seen = HashSet::new();
        braces
            .into_iter()
            .filter(|b| {
                let f: Vec<Perm> = (0..n)
                    .map(|a| Perm::from_images(b.lambda_map(a).to_vec()).unwrap())
                    .collect();
                seen.insert(conjugacy_key(&f, aut))
            })
            .collect()
    };

    let run_task = |&(gi, k): &(usize, usize)| -> Result<Vec<SkewBrace>, EnumError> {
        if let Some(bs) = done.get(&(gi, k)) {
            return Ok(bs.clone());
        }
        let bs = reduce(gi, regular_subgroup_braces(&groups[gi], &auts[gi], Some(k)));
        let bs = merge_braces(bs);
        if let Some(w) = &writer {
            let entry = CheckpointEntry {
                group: gi,
                first: k,
                braces: bs.iter().map(SkewBrace::to_json).collect(),
            };
            let mut line = serde_json::to_vec(&entry).expect("serializable");
            line.push(b'\n');
            let mut f = w.lock().unwrap();
            f.write_all(&line)?;
            f.flush()?;
        }
        Ok(bs)
    };

    let per_task: Vec<Vec<SkewBrace>> = if opts.parallel {
        tasks.par_iter().map(run_task).collect::<Result<_, _>>()?
    } else {
        tasks.iter().map(run_task).collect::<Result<_, _>>()?
    };
    // Braces with non-isomorphic additive groups are never isomorphic.
    let mut by_group: Vec<Vec<SkewBrace>> = vec![Vec::new(); groups.len()];
    for ((gi, _), bs) in tasks.iter().zip(per_task) {
        by_group[*gi].extend(bs);
    }
    let merged: Vec<Vec<SkewBrace>> = if opts.parallel {
        by_group.into_par_iter().map(merge_braces).collect()
    } else {
        by_group.into_iter().map(merge_braces).collect()
    };
    let mut all: Vec<SkewBrace> = merged.into_iter().flatten().collect();
    all.sort_by_key(|b| b.table_key());
    Ok(all)
}

/// Independent second method for small `n`: for each additive group, rows
/// of `∘` are permutations `ρ` with `ρ(0) = a` and `ρ(b+c) = ρ(b) − a + ρ(c)`,
/// chosen column-Latin and then tested for associativity. Classes are formed
/// by a brute-force canonical form over all relabelings fixing 0.
pub fn enumerate_skew_braces_direct(n: usize) -> Result<Vec<SkewBrace>, EnumError> {
    const LIMIT: usize = 7;
    if n == 0 || n > LIMIT {
        return Err(EnumError::BudgetExceeded { order: n, limit: LIMIT });
    }
    let relabelings: Vec<Vec<usize>> = all_permutations(n - 1)
        .map(|p| std::iter::once(0).chain(p.images().iter().map(|x| x + 1)).collect())
        .collect();
    let mut classes: HashMap<Vec<usize>, SkewBrace> = HashMap::new();
    for add in groups_of_order(n)? {
        let rows: Vec<Vec<Vec<usize>>> = (0..n)
            .map(|a| {
                all_permutations(n)
                    .map(Perm::into_images)
                    .filter(|r| {
                        r[0] == a
                            && (a != 0 || r.iter().enumerate().all(|(i, &v)| i == v))
                            && (0..n).all(|b| (0..n).all(|c| r[add.op(b, c)] == add.op(add.op(r[b], add.inv(a)), r[c])))
                    })
                    .collect()
            })
            .collect();
        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        let mut found = Vec::new();
        direct_rows(&add, &rows, &mut chosen, &mut found);
        for mul in found {
            let Ok(mul) = GroupTable::from_flat(n, mul) else {
                continue;
            };
            let b = verify_skew_brace(add.clone(), mul).expect("rows satisfy the brace law by construction");
            let key = relabelings.iter().map(|p| relabeled_key(&b, p)).min().unwrap();
            classes.entry(key).or_insert(b);
        }
    }
    let mut all: Vec<SkewBrace> = classes.into_values().collect();
    all.sort_by_key(|b| b.table_key());
    Ok(all)
}

fn direct_rows(add: &GroupTable, rows: &[Vec<Vec<usize>>], chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let n = add.order();
    let a = chosen.len();
    if a == n {
        let table: Vec<usize> = chosen
            .iter()
            .enumerate()
            .flat_map(|(a, &k)| rows[a][k].clone())
            .collect();
        out.push(table);
        return;
    }
    for k in 0..rows[a].len() {
        let r = &rows[a][k];
        let latin = chosen
            .iter()
            .enumerate()
            .all(|(p, &q)| (0..n).all(|b| rows[p][q][b] != r[b]));
        if latin {
            chosen.push(k);
            direct_rows(add, rows, chosen, out);
            chosen.pop();
        }
    }
}

//! Exhaustive enumeration of rule tables satisfying one axiom set and
//! failing another, by backtracking over outcome assignments.
//!
//! Profiles are assigned in ascending order of indifferent-agent count
//! (fully strict profiles first), ties by id. Pruning is conservative:
//! a partial assignment is cut only when two already assigned profiles
//! exhibit a deviation the required axioms forbid, or when a required
//! efficiency constraint empties a profile's outcome domain up front.
//! Every completed table is re-checked exactly, so pruning can only cost
//! completeness, and completeness is cross-validated against brute force
//! in the tests.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::axioms::{check_axiom, Axiom};
use crate::domain::{decode_into, AltIdx, PrefDomain, PrefIdx};
use crate::error::{Error, Result};
use crate::rules::{recognize_target_default, Rule};

/// Refuse unguided searches past this many profiles or grid points; the
/// raw table space is m^(d^n) and pruning promises nothing.
const MAX_PROFILES: u64 = 200;
const MAX_SEARCH_GRID: usize = 3;

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub dom: Arc<PrefDomain>,
    pub agents: usize,
    pub required: BTreeSet<Axiom>,
    pub forbidden: BTreeSet<Axiom>,
    /// Stop after this many tables, in canonical order.
    pub limit: Option<usize>,
    /// Candidate tables tried before any search; the counterexample lookup
    /// returns the first one that fits.
    pub seeds: Vec<Vec<AltIdx>>,
    /// Run even when the instance exceeds the tractability guard.
    pub force: bool,
}

impl SearchSpec {
    pub fn new(
        dom: Arc<PrefDomain>,
        agents: usize,
        required: impl IntoIterator<Item = Axiom>,
        forbidden: impl IntoIterator<Item = Axiom>,
    ) -> Result<SearchSpec> {
        if agents < 2 {
            return Err(Error::InvalidSearch(format!(
                "need at least 2 agents, got {agents}"
            )));
        }
        let required: BTreeSet<Axiom> = required.into_iter().collect();
        let forbidden: BTreeSet<Axiom> = forbidden.into_iter().collect();
        if let Some(both) = required.intersection(&forbidden).next() {
            return Err(Error::InvalidSearch(format!(
                "axiom {both} is both required and forbidden"
            )));
        }
        Ok(SearchSpec {
            dom,
            agents,
            required,
            forbidden,
            limit: None,
            seeds: Vec::new(),
            force: false,
        })
    }

    pub fn with_limit(mut self, limit: usize) -> SearchSpec {
        self.limit = Some(limit);
        self
    }

    pub fn with_seeds(mut self, seeds: Vec<Vec<AltIdx>>) -> SearchSpec {
        self.seeds = seeds;
        self
    }

    pub fn with_force(mut self, force: bool) -> SearchSpec {
        self.force = force;
        self
    }

    fn guard(&self) -> Result<()> {
        if self.force {
            return Ok(());
        }
        let profiles = self.dom.profile_count(self.agents);
        let m = self.dom.grid().len();
        if profiles > MAX_PROFILES || m > MAX_SEARCH_GRID {
            return Err(Error::Intractable(format!(
                "search over {profiles} profiles on a {m}-point grid"
            )));
        }
        Ok(())
    }

    /// Does this table pass every required axiom and fail every forbidden
    /// one? Exact, via the full checkers.
    fn admits(&self, table: &[AltIdx]) -> bool {
        let rule = Rule::from_table(Arc::clone(&self.dom), self.agents, table.to_vec())
            .expect("search produced a malformed table");
        self.required
            .iter()
            .all(|&ax| check_axiom(&rule, ax, None).pass)
            && self
                .forbidden
                .iter()
                .all(|&ax| !check_axiom(&rule, ax, None).pass)
    }
}

/// All tables satisfying `spec`, as rules, in canonical order (ascending
/// lexicographic outcome-in-assignment-order; independent of worker count).
pub fn enumerate_rules(spec: &SearchSpec) -> Result<Vec<Rule>> {
    spec.guard()?;
    let prep = Prep::new(spec);
    let tables = prep.run(spec, None);
    Ok(tables
        .into_iter()
        .map(|t| Rule::from_table(Arc::clone(&spec.dom), spec.agents, t).unwrap())
        .collect())
}

/// First fit in canonical order: seeds first, then search. None when the
/// whole space is exhausted without a hit.
pub fn find_counterexample_rule(spec: &SearchSpec) -> Result<Option<Rule>> {
    for seed in &spec.seeds {
        // validate the seed shape before trusting it
        let rule = Rule::from_table(Arc::clone(&spec.dom), spec.agents, seed.clone())?;
        if spec.admits(seed) {
            return Ok(Some(rule));
        }
    }
    let mut narrowed = spec.clone();
    narrowed.limit = Some(1);
    Ok(enumerate_rules(&narrowed)?.into_iter().next())
}

/// Shape of an enumerated rule set: how many tables are target-default
/// rules (and which), plus per-axiom pass counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub total: usize,
    /// Per rule: the recognized (target, default) pair, if any.
    pub recognized: Vec<Option<(AltIdx, AltIdx)>>,
    pub target_count: usize,
    pub other_count: usize,
    pub axiom_passes: Vec<(Axiom, usize)>,
}

pub fn classify_rules(rules: &[Rule]) -> Classification {
    let recognized: Vec<Option<(AltIdx, AltIdx)>> = rules
        .iter()
        .map(|r| recognize_target_default(r).into_iter().next())
        .collect();
    let target_count = recognized.iter().filter(|r| r.is_some()).count();
    let axiom_passes = Axiom::ALL
        .iter()
        .map(|&ax| {
            (
                ax,
                rules
                    .iter()
                    .filter(|r| check_axiom(r, ax, None).pass)
                    .count(),
            )
        })
        .collect();
    Classification {
        total: rules.len(),
        target_count,
        other_count: rules.len() - target_count,
        recognized,
        axiom_passes,
    }
}

/// Every table over the profile space, by ascending base-m code. Only for
/// cross-validation and tiny instances; errors out past `cap` tables.
pub fn brute_force_tables(
    dom: &PrefDomain,
    agents: usize,
    cap: u64,
) -> Result<impl Iterator<Item = Vec<AltIdx>> + '_> {
    let m = dom.grid().len();
    let count = dom.profile_count(agents) as usize;
    let total = (m as u128)
        .checked_pow(count as u32)
        .filter(|&t| t <= cap as u128)
        .ok_or_else(|| {
            Error::Intractable(format!("{m}^{count} tables exceeds the brute-force cap"))
        })?;
    Ok((0..total as u64).map(move |code| {
        let mut table = vec![0; count];
        let mut rest = code;
        for slot in table.iter_mut().rev() {
            *slot = (rest % m as u64) as AltIdx;
            rest /= m as u64;
        }
        table
    }))
}

/// Precomputed structure for one search instance.
struct Prep {
    count: usize,
    /// Profile ids in assignment order.
    order: Vec<u64>,
    /// Decoded preference vector per ordered position.
    prefs: Vec<Vec<PrefIdx>>,
    /// Allowed outcomes per ordered position, ascending.
    domains: Vec<Vec<AltIdx>>,
    /// Per position: earlier positions within deviation distance, with the
    /// agents on which the two profiles differ.
    neighbors: Vec<Vec<(usize, Vec<usize>)>>,
    /// Largest coalition bound for strong (weak-gain) pruning, 0 for none.
    strong_k: usize,
    /// Same for the all-strict reading.
    weak_k: usize,
}

impl Prep {
    fn new(spec: &SearchSpec) -> Prep {
        let dom = &spec.dom;
        let d = dom.size();
        let n = spec.agents;
        let m = dom.grid().len();
        let count = dom.profile_count(n) as usize;

        let mut order: Vec<u64> = (0..count as u64).collect();
        let indiff_count = |id: &u64| {
            let mut prefs = vec![0; n];
            decode_into(*id, d, &mut prefs);
            prefs.iter().filter(|&&p| p == 0).count()
        };
        order.sort_by_key(|id| (indiff_count(id), *id));

        let prefs: Vec<Vec<PrefIdx>> = order
            .iter()
            .map(|&id| {
                let mut p = vec![0; n];
                decode_into(id, d, &mut p);
                p
            })
            .collect();

        let req = &spec.required;
        let domains: Vec<Vec<AltIdx>> = if req.contains(&Axiom::Efficiency) {
            prefs
                .iter()
                .map(|p| match dom.peak_bounds(p) {
                    None => (0..m).collect(),
                    Some((lo, hi)) => (lo..=hi).collect(),
                })
                .collect()
        } else {
            vec![(0..m).collect(); count]
        };

        let strong_k = if req.contains(&Axiom::GroupStrategyProof) {
            n
        } else if req.contains(&Axiom::PairwiseStrategyProof) {
            2
        } else if req.contains(&Axiom::StrategyProof) {
            1
        } else {
            0
        };
        let weak_k = if req.contains(&Axiom::WeaklyGroupStrategyProof) {
            n
        } else if req.contains(&Axiom::WeakPairwiseStrategyProof) {
            2
        } else {
            0
        };

        // Deviations between two complete profiles touch only the agents on
        // which they differ. Pairs further apart than 2 are left to the
        // exact final check.
        let reach = 2.min(strong_k.max(weak_k));
        let mut neighbors: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); count];
        if reach > 0 {
            for later in 0..count {
                for earlier in 0..later {
                    let diff: Vec<usize> = (0..n)
                        .filter(|&i| prefs[later][i] != prefs[earlier][i])
                        .collect();
                    if diff.len() <= reach {
                        neighbors[later].push((earlier, diff));
                    }
                }
            }
        }

        Prep {
            count,
            order,
            prefs,
            domains,
            neighbors,
            strong_k,
            weak_k,
        }
    }

    /// A deviation between positions `a` (outcome `oa`) and `b` (outcome
    /// `ob`), differing exactly on `diff`, that the required axioms forbid.
    /// Checks both directions of truth-telling.
    fn conflict(
        &self,
        dom: &PrefDomain,
        a: usize,
        oa: AltIdx,
        b: usize,
        ob: AltIdx,
        diff: &[usize],
    ) -> bool {
        self.conflict_directed(dom, &self.prefs[a], oa, ob, diff)
            || self.conflict_directed(dom, &self.prefs[b], ob, oa, diff)
    }

    /// Truthful profile `truth` (outcome `w`); the deviators on `diff`
    /// obtain `z`. Strong reading: everyone on `diff` weakly gains and
    /// either one of them gains strictly or, if the coalition bound leaves
    /// room for a truthful-reporting member, any outside agent does. Weak
    /// reading: everyone on `diff` gains strictly.
    fn conflict_directed(
        &self,
        dom: &PrefDomain,
        truth: &[PrefIdx],
        w: AltIdx,
        z: AltIdx,
        diff: &[usize],
    ) -> bool {
        if z == w {
            return false;
        }
        if diff.len() <= self.strong_k && diff.iter().all(|&i| dom.weakly_prefers(truth[i], z, w)) {
            let strict_inside = diff.iter().any(|&i| dom.strictly_prefers(truth[i], z, w));
            let strict_outside = diff.len() < self.strong_k
                && (0..truth.len())
                    .filter(|i| !diff.contains(i))
                    .any(|i| dom.strictly_prefers(truth[i], z, w));
            if strict_inside || strict_outside {
                return true;
            }
        }
        diff.len() <= self.weak_k && diff.iter().all(|&i| dom.strictly_prefers(truth[i], z, w))
    }

    /// Root split across the first position's candidates, each branch a
    /// sequential DFS; branch order keeps output canonical regardless of
    /// worker count. A prune hook forces a single-threaded run.
    fn run(&self, spec: &SearchSpec, mut on_prune: Option<&mut PruneHook<'_>>) -> Vec<Vec<AltIdx>> {
        if self.count == 0 {
            return Vec::new();
        }
        let limit = spec.limit.unwrap_or(usize::MAX);
        if limit == 0 {
            return Vec::new();
        }
        let mut tables: Vec<Vec<AltIdx>> = if let Some(hook) = on_prune.take() {
            let mut assigned = vec![usize::MAX; self.count];
            let mut out = Vec::new();
            self.dfs(spec, 0, &mut assigned, &mut out, limit, &mut Some(hook));
            out
        } else {
            let branches: Vec<Vec<Vec<AltIdx>>> = self.domains[0]
                .par_iter()
                .map(|&first| {
                    let mut assigned = vec![usize::MAX; self.count];
                    assigned[0] = first;
                    let mut out = Vec::new();
                    if !self.conflicts_with_earlier(spec, 0, &assigned) {
                        self.dfs(spec, 1, &mut assigned, &mut out, limit, &mut None);
                    }
                    out
                })
                .collect();
            branches.into_iter().flatten().collect()
        };
        tables.truncate(limit);
        tables
    }

    fn conflicts_with_earlier(&self, spec: &SearchSpec, pos: usize, assigned: &[usize]) -> bool {
        let dom = &spec.dom;
        self.neighbors[pos].iter().any(|(earlier, diff)| {
            assigned[*earlier] != usize::MAX
                && self.conflict(dom, pos, assigned[pos], *earlier, assigned[*earlier], diff)
        })
    }

    fn dfs(
        &self,
        spec: &SearchSpec,
        pos: usize,
        assigned: &mut Vec<usize>,
        out: &mut Vec<Vec<AltIdx>>,
        limit: usize,
        on_prune: &mut Option<&mut PruneHook<'_>>,
    ) {
        if out.len() >= limit {
            return;
        }
        if pos == self.count {
            let mut table = vec![0; self.count];
            for (p, &id) in self.order.iter().enumerate() {
                table[id as usize] = assigned[p];
            }
            if spec.admits(&table) {
                out.push(table);
            }
            return;
        }
        for &candidate in &self.domains[pos] {
            assigned[pos] = candidate;
            if self.conflicts_with_earlier(spec, pos, assigned) {
                if let Some(hook) = on_prune {
                    hook(&self.order, &assigned[..=pos]);
                }
                continue;
            }
            self.dfs(spec, pos + 1, assigned, out, limit, on_prune);
            if out.len() >= limit {
                break;
            }
        }
        assigned[pos] = usize::MAX;
    }
}

type PruneHook<'h> = dyn FnMut(&[u64], &[usize]) + 'h;

#[cfg(test)]
fn enumerate_traced(
    spec: &SearchSpec,
    hook: &mut dyn FnMut(&[u64], &[usize]),
) -> Result<Vec<Vec<AltIdx>>> {
    spec.guard()?;
    let prep = Prep::new(spec);
    Ok(prep.run(
        spec,
        Some(&mut |order: &[u64], assigned: &[usize]| hook(order, assigned)),
    ))
}

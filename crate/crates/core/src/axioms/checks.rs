use rayon::prelude::*;

use crate::domain::{decode_into, encode, PrefIdx, Profile};
use crate::rules::Rule;

use super::{Axiom, AxiomVerdict, Violation, Witness};

/// How a coalition must gain for a deviation to count against the rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gain {
    /// Everyone at least as well off, someone strictly better: the strong
    /// reading. Indifferent members never block and never count as strict.
    WeakAllStrictOne,
    /// Every member strictly better: the weak reading, so a coalition with
    /// an indifferent member can never qualify.
    StrictAll,
}

pub fn check_sp(rule: &Rule) -> AxiomVerdict {
    verdict(
        Axiom::StrategyProof,
        None,
        scan_manipulation(rule, 1, Gain::WeakAllStrictOne).map(Violation::Manipulation),
    )
}

pub fn check_pairwise_sp(rule: &Rule) -> AxiomVerdict {
    verdict(
        Axiom::PairwiseStrategyProof,
        None,
        scan_manipulation(rule, 2, Gain::WeakAllStrictOne).map(Violation::Manipulation),
    )
}

/// `max_coalition` between 1 and the number of agents.
pub fn check_group_sp(rule: &Rule, max_coalition: usize) -> AxiomVerdict {
    verdict(
        Axiom::GroupStrategyProof,
        Some(max_coalition),
        scan_manipulation(rule, max_coalition, Gain::WeakAllStrictOne).map(Violation::Manipulation),
    )
}

pub fn check_wgsp(rule: &Rule, max_coalition: usize) -> AxiomVerdict {
    verdict(
        Axiom::WeaklyGroupStrategyProof,
        Some(max_coalition),
        scan_manipulation(rule, max_coalition, Gain::StrictAll).map(Violation::Manipulation),
    )
}

pub fn check_weak_pairwise_sp(rule: &Rule) -> AxiomVerdict {
    verdict(
        Axiom::WeakPairwiseStrategyProof,
        None,
        scan_manipulation(rule, 2, Gain::StrictAll).map(Violation::Manipulation),
    )
}

pub fn check_efficiency(rule: &Rule) -> AxiomVerdict {
    let dom = rule.domain();
    let d = dom.size();
    let n = rule.agents();
    let table = rule.outcome_table();
    let hit = (0..dom.profile_count(n))
        .into_par_iter()
        .find_map_first(|id| {
            let mut prefs = vec![0; n];
            decode_into(id, d, &mut prefs);
            let outcome = table[id as usize];
            match dom.peak_bounds(&prefs) {
                None => None, // everything is efficient at the all-indifferent profile
                Some((lo, hi)) => (outcome < lo || outcome > hi).then(|| Violation::Inefficiency {
                    profile: Profile::from_id(id, d, n),
                    outcome,
                    efficient: (lo..=hi).collect(),
                }),
            }
        });
    verdict(Axiom::Efficiency, None, hit)
}

pub fn check_onto(rule: &Rule) -> AxiomVerdict {
    let m = rule.domain().grid().len();
    let table = rule.outcome_table();
    let image = table
        .par_iter()
        .fold(|| 0u64, |mask, &o| mask | (1 << o))
        .reduce(|| 0u64, |a, b| a | b);
    match (0..m).find(|&a| image & (1 << a) == 0) {
        None => verdict(Axiom::Onto, None, None),
        Some(missing) => verdict(Axiom::Onto, None, Some(Violation::NotOnto { missing })),
    }
}

/// Outcomes may depend only on who is indifferent and where the peaks are.
/// Each profile is compared against its representative, the profile where
/// every agent reports the smallest preference index with the same peak.
pub fn check_tops_only(rule: &Rule) -> AxiomVerdict {
    let dom = rule.domain();
    let hit = representative_scan(rule, |prefs, rep| {
        for (slot, &p) in rep.iter_mut().zip(prefs) {
            *slot = dom.same_peak_representative(p);
        }
    });
    verdict(Axiom::TopsOnly, None, hit)
}

/// Outcomes may not depend on agent identity. Sorting the preference
/// indices picks one representative per reordering class, so comparing
/// every profile against its sorted form covers all permutations.
pub fn check_anonymity(rule: &Rule) -> AxiomVerdict {
    let hit = representative_scan(rule, |prefs, rep| {
        rep.copy_from_slice(prefs);
        rep.sort_unstable();
    });
    verdict(Axiom::Anonymity, None, hit)
}

/// Everything at the group checks' widest bound, in a fixed order.
pub fn check_all(rule: &Rule) -> Vec<AxiomVerdict> {
    Axiom::ALL
        .iter()
        .map(|&ax| check_axiom(rule, ax, None))
        .collect()
}

/// Dispatch by tag; `max_coalition` only affects the two group checks and
/// defaults to the full agent count.
pub fn check_axiom(rule: &Rule, axiom: Axiom, max_coalition: Option<usize>) -> AxiomVerdict {
    let k = max_coalition.unwrap_or(rule.agents());
    match axiom {
        Axiom::Onto => check_onto(rule),
        Axiom::StrategyProof => check_sp(rule),
        Axiom::PairwiseStrategyProof => check_pairwise_sp(rule),
        Axiom::GroupStrategyProof => check_group_sp(rule, k),
        Axiom::WeaklyGroupStrategyProof => check_wgsp(rule, k),
        Axiom::WeakPairwiseStrategyProof => check_weak_pairwise_sp(rule),
        Axiom::Efficiency => check_efficiency(rule),
        Axiom::TopsOnly => check_tops_only(rule),
        Axiom::Anonymity => check_anonymity(rule),
    }
}

fn verdict(
    axiom: Axiom,
    max_coalition: Option<usize>,
    violation: Option<Violation>,
) -> AxiomVerdict {
    match violation {
        None => AxiomVerdict::passed(axiom, max_coalition),
        Some(v) => AxiomVerdict::failed(axiom, max_coalition, v),
    }
}

/// First profile (by id) whose outcome differs from the outcome at the
/// profile `make_rep` derives from it. Representatives never have a larger
/// id than the original, so this finds the earliest disagreement.
fn representative_scan(
    rule: &Rule,
    make_rep: impl Fn(&[PrefIdx], &mut [PrefIdx]) + Sync,
) -> Option<Violation> {
    let dom = rule.domain();
    let d = dom.size();
    let n = rule.agents();
    let table = rule.outcome_table();
    (0..dom.profile_count(n))
        .into_par_iter()
        .find_map_first(|id| {
            let mut prefs = vec![0; n];
            let mut rep = vec![0; n];
            decode_into(id, d, &mut prefs);
            make_rep(&prefs, &mut rep);
            let rep_id = encode(&rep, d);
            if rep_id == id || table[id as usize] == table[rep_id as usize] {
                return None;
            }
            Some(Violation::ProfilePair {
                profile: Profile::from_id(id, d, n),
                other: Profile::from_id(rep_id, d, n),
                outcome: table[id as usize],
                other_outcome: table[rep_id as usize],
            })
        })
}

/// Canonical-order scan for a profitable deviation by any coalition of at
/// most `max_k` agents. Joint misreports range over the full preference
/// domain per member, truthful re-reports included (they never produce a
/// strict gain, so they are harmless and keep the quantifier honest).
fn scan_manipulation(rule: &Rule, max_k: usize, gain: Gain) -> Option<Witness> {
    let dom = rule.domain();
    let d = dom.size();
    let n = rule.agents();
    assert!(
        (1..=n).contains(&max_k),
        "coalition bound must be between 1 and n"
    );
    let table = rule.outcome_table();
    let pows: Vec<u64> = (0..n).map(|i| (d as u64).pow((n - 1 - i) as u32)).collect();
    let coalitions = coalitions_lex(n, max_k);

    (0..dom.profile_count(n))
        .into_par_iter()
        .find_map_first(|id| {
            let mut prefs = vec![0; n];
            decode_into(id, d, &mut prefs);
            let truthful = table[id as usize];
            let mut mis: Vec<PrefIdx> = Vec::new();
            for coalition in &coalitions {
                let k = coalition.len();
                // profile id with the coalition's own digits removed
                let base: u64 = id
                    - coalition
                        .iter()
                        .map(|&s| prefs[s] as u64 * pows[s])
                        .sum::<u64>();
                mis.clear();
                mis.resize(k, 0);
                let reports = (d as u64).pow(k as u32);
                for code in 0..reports {
                    decode_into(code, d, &mut mis);
                    let dev_id = base
                        + coalition
                            .iter()
                            .zip(&mis)
                            .map(|(&s, &r)| r as u64 * pows[s])
                            .sum::<u64>();
                    let deviant = table[dev_id as usize];
                    if deviant == truthful {
                        continue;
                    }
                    let profitable = match gain {
                        Gain::WeakAllStrictOne => {
                            coalition
                                .iter()
                                .all(|&s| dom.weakly_prefers(prefs[s], deviant, truthful))
                                && coalition
                                    .iter()
                                    .any(|&s| dom.strictly_prefers(prefs[s], deviant, truthful))
                        }
                        Gain::StrictAll => coalition
                            .iter()
                            .all(|&s| dom.strictly_prefers(prefs[s], deviant, truthful)),
                    };
                    if profitable {
                        return Some(Witness {
                            profile: Profile::from_id(id, d, n),
                            coalition: coalition.clone(),
                            misreport: mis.clone(),
                            outcome_truthful: truthful,
                            outcome_deviant: deviant,
                        });
                    }
                }
            }
            None
        })
}

/// All nonempty agent subsets of size at most `max_k`, as sorted tuples in
/// lexicographic order: (0), (0,1), (0,1,2), (0,2), (1), ...
fn coalitions_lex(n: usize, max_k: usize) -> Vec<Vec<usize>> {
    fn grow(start: usize, n: usize, max_k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in start..n {
            cur.push(i);
            out.push(cur.clone());
            if cur.len() < max_k {
                grow(i + 1, n, max_k, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(0, n, max_k, &mut Vec::new(), &mut out);
    out
}

/// Replay a verdict's violation against the rule itself. True when the
/// violation describes a genuine failure (or the verdict is a pass).
pub fn reverify(rule: &Rule, v: &AxiomVerdict) -> bool {
    let dom = rule.domain();
    let n = rule.agents();
    match &v.violation {
        None => v.pass,
        Some(Violation::Manipulation(w)) => {
            if v.pass || w.profile.len() != n || w.coalition.is_empty() {
                return false;
            }
            if !w.coalition.windows(2).all(|c| c[0] < c[1]) {
                return false;
            }
            if w.coalition.len() != w.misreport.len()
                || w.coalition.iter().any(|&s| s >= n)
                || w.misreport.iter().any(|&r| r >= dom.size())
            {
                return false;
            }
            let bound = match v.axiom {
                Axiom::StrategyProof => 1,
                Axiom::PairwiseStrategyProof | Axiom::WeakPairwiseStrategyProof => 2,
                Axiom::GroupStrategyProof | Axiom::WeaklyGroupStrategyProof => {
                    v.max_coalition.unwrap_or(n)
                }
                _ => return false,
            };
            if w.coalition.len() > bound {
                return false;
            }
            let truthful = rule.eval(&w.profile);
            let mut deviant_prefs = w.profile.prefs().to_vec();
            for (&s, &r) in w.coalition.iter().zip(&w.misreport) {
                deviant_prefs[s] = r;
            }
            let deviant = rule.eval(&dom.profile(deviant_prefs));
            if truthful != w.outcome_truthful || deviant != w.outcome_deviant {
                return false;
            }
            let prefs = w.profile.prefs();
            match v.axiom {
                Axiom::WeaklyGroupStrategyProof | Axiom::WeakPairwiseStrategyProof => w
                    .coalition
                    .iter()
                    .all(|&s| dom.strictly_prefers(prefs[s], deviant, truthful)),
                _ => {
                    w.coalition
                        .iter()
                        .all(|&s| dom.weakly_prefers(prefs[s], deviant, truthful))
                        && w.coalition
                            .iter()
                            .any(|&s| dom.strictly_prefers(prefs[s], deviant, truthful))
                }
            }
        }
        Some(Violation::Inefficiency {
            profile,
            outcome,
            efficient,
        }) => {
            !v.pass
                && v.axiom == Axiom::Efficiency
                && rule.eval(profile) == *outcome
                && *efficient == dom.efficient_set(profile)
                && !efficient.contains(outcome)
        }
        Some(Violation::NotOnto { missing }) => {
            !v.pass
                && v.axiom == Axiom::Onto
                && *missing < dom.grid().len()
                && rule.outcome_table().iter().all(|o| o != missing)
        }
        Some(Violation::ProfilePair {
            profile,
            other,
            outcome,
            other_outcome,
        }) => {
            if v.pass || rule.eval(profile) != *outcome || rule.eval(other) != *other_outcome {
                return false;
            }
            if outcome == other_outcome {
                return false;
            }
            match v.axiom {
                Axiom::TopsOnly => profile
                    .prefs()
                    .iter()
                    .zip(other.prefs())
                    .all(|(&a, &b)| dom.peak(a) == dom.peak(b)),
                Axiom::Anonymity => {
                    let mut a = profile.prefs().to_vec();
                    let mut b = other.prefs().to_vec();
                    a.sort_unstable();
                    b.sort_unstable();
                    a == b
                }
                _ => false,
            }
        }
    }
}

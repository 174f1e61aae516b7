//! Rule families under study plus the universal outcome-table form.
//!
//! Every rule here is total on the profile space of its domain. The table
//! form indexes outcomes by profile id and is what search enumerates; the
//! named families exist for speed and for readable construction in tests
//! and scenarios.

use std::sync::Arc;

use crate::domain::{decode_into, encode};
use crate::domain::{AltIdx, PrefDomain, Profile, INDIFFERENT};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleKind {
    /// Pick `target` when it lies between the smallest and largest reported
    /// peak, the nearer of the two bounds when it does not, and `default`
    /// when every agent is indifferent.
    TargetDefault { target: AltIdx, default: AltIdx },
    /// Agent 0's peak when agent 0 is not indifferent, else agent 1's peak,
    /// else alternative 0. Two agents only.
    DefaultDictator,
    /// Agent 0's peak when agent 0 is not indifferent; otherwise endpoint 0
    /// or 1 according to whether agent 1 strictly prefers 0 to 1.
    WgspExample,
    /// Outcome per profile id.
    Table(Vec<AltIdx>),
}

#[derive(Clone, Debug)]
pub struct Rule {
    dom: Arc<PrefDomain>,
    n: usize,
    kind: RuleKind,
}

impl Rule {
    pub fn target_default(
        dom: Arc<PrefDomain>,
        n: usize,
        target: AltIdx,
        default: AltIdx,
    ) -> Result<Rule> {
        check_agents(n)?;
        let m = dom.grid().len();
        if target >= m || default >= m {
            return Err(Error::InvalidRule(format!(
                "target/default index out of range for a {m}-point grid"
            )));
        }
        Ok(Rule {
            dom,
            n,
            kind: RuleKind::TargetDefault { target, default },
        })
    }

    pub fn default_dictator(dom: Arc<PrefDomain>, n: usize) -> Result<Rule> {
        if n != 2 {
            return Err(Error::InvalidRule(format!(
                "the default-dictator rule is defined for exactly 2 agents, got {n}"
            )));
        }
        Ok(Rule {
            dom,
            n,
            kind: RuleKind::DefaultDictator,
        })
    }

    pub fn wgsp_example(dom: Arc<PrefDomain>, n: usize) -> Result<Rule> {
        check_agents(n)?;
        Ok(Rule {
            dom,
            n,
            kind: RuleKind::WgspExample,
        })
    }

    pub fn from_table(dom: Arc<PrefDomain>, n: usize, outcomes: Vec<AltIdx>) -> Result<Rule> {
        check_agents(n)?;
        let want = dom.profile_count(n);
        if outcomes.len() as u64 != want {
            return Err(Error::InvalidRule(format!(
                "table has {} outcomes, expected {}",
                outcomes.len(),
                want
            )));
        }
        let m = dom.grid().len();
        if let Some(&bad) = outcomes.iter().find(|&&o| o >= m) {
            return Err(Error::InvalidRule(format!(
                "table outcome {bad} is not a grid index (m = {m})"
            )));
        }
        Ok(Rule {
            dom,
            n,
            kind: RuleKind::Table(outcomes),
        })
    }

    pub fn domain(&self) -> &Arc<PrefDomain> {
        &self.dom
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &RuleKind {
        &self.kind
    }

    /// Short role name for reports.
    pub fn name(&self) -> String {
        match &self.kind {
            RuleKind::TargetDefault { target, default } => format!(
                "target({}, {})",
                crate::domain::format_value(self.dom.grid().value(*target)),
                crate::domain::format_value(self.dom.grid().value(*default))
            ),
            RuleKind::DefaultDictator => "fd".into(),
            RuleKind::WgspExample => "fstar".into(),
            RuleKind::Table(_) => "table".into(),
        }
    }

    pub fn eval(&self, profile: &Profile) -> AltIdx {
        assert_eq!(
            profile.len(),
            self.n,
            "profile has the wrong number of agents"
        );
        self.eval_prefs(profile.prefs())
    }

    pub(crate) fn eval_prefs(&self, prefs: &[usize]) -> AltIdx {
        debug_assert_eq!(prefs.len(), self.n);
        match &self.kind {
            RuleKind::TargetDefault { target, default } => match self.dom.peak_bounds(prefs) {
                None => *default,
                Some((lo, hi)) => {
                    if *target < lo {
                        lo
                    } else if *target > hi {
                        hi
                    } else {
                        *target
                    }
                }
            },
            RuleKind::DefaultDictator => {
                if prefs[0] != INDIFFERENT {
                    self.dom.peak(prefs[0]).unwrap()
                } else if prefs[1] != INDIFFERENT {
                    self.dom.peak(prefs[1]).unwrap()
                } else {
                    0
                }
            }
            RuleKind::WgspExample => {
                if prefs[0] != INDIFFERENT {
                    self.dom.peak(prefs[0]).unwrap()
                } else {
                    let last = self.dom.grid().len() - 1;
                    if self.dom.strictly_prefers(prefs[1], 0, last) {
                        0
                    } else {
                        last
                    }
                }
            }
            RuleKind::Table(outcomes) => outcomes[encode(prefs, self.dom.size()) as usize],
        }
    }

    /// The full outcome table in profile-id order.
    pub fn outcome_table(&self) -> Vec<AltIdx> {
        if let RuleKind::Table(outcomes) = &self.kind {
            return outcomes.clone();
        }
        let count = self.dom.profile_count(self.n) as usize;
        let mut scratch = vec![0usize; self.n];
        (0..count)
            .map(|id| {
                decode_into(id as u64, self.dom.size(), &mut scratch);
                self.eval_prefs(&scratch)
            })
            .collect()
    }

    /// Same rule as an explicit table.
    pub fn materialize(&self) -> Rule {
        Rule {
            dom: Arc::clone(&self.dom),
            n: self.n,
            kind: RuleKind::Table(self.outcome_table()),
        }
    }
}

fn check_agents(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidRule(format!(
            "need at least 2 agents, got {n}"
        )));
    }
    Ok(())
}

/// Every (target, default) pair whose rule agrees with `rule` on the whole
/// profile space. Singleton for a genuine target-default table, empty for
/// anything outside the family; never more than one element because the
/// profile with peaks at both endpoints pins the target and the
/// all-indifferent profile pins the default.
pub fn recognize_target_default(rule: &Rule) -> Vec<(AltIdx, AltIdx)> {
    let table = rule.outcome_table();
    let dom = rule.domain();
    let m = dom.grid().len();
    let mut matches = Vec::new();
    for target in 0..m {
        for default in 0..m {
            let candidate =
                Rule::target_default(Arc::clone(dom), rule.agents(), target, default).unwrap();
            if candidate.outcome_table() == table {
                matches.push((target, default));
            }
        }
    }
    matches
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(m: usize) -> Arc<PrefDomain> {
        Arc::new(PrefDomain::uniform(m).unwrap())
    }

    #[test]
    fn target_rule_follows_the_peak_interval() {
        let d = dom(3);
        // target 1/2 (index 1), default 1 (index 2)
        let r = Rule::target_default(Arc::clone(&d), 3, 1, 2).unwrap();
        // all indifferent: default
        assert_eq!(r.eval(&d.profile(vec![0, 0, 0])), 2);
        // peaks {0}: target above every peak, clamp down to 0
        assert_eq!(r.eval(&d.profile(vec![1, 1, 0])), 0);
        // peaks {0, 1}: target inside
        assert_eq!(r.eval(&d.profile(vec![1, 4, 0])), 1);

        // target 1/2, default 0, all peaks at 1: clamp up to the peak
        let r = Rule::target_default(Arc::clone(&d), 3, 1, 0).unwrap();
        assert_eq!(r.eval(&d.profile(vec![4, 4, 4])), 2);
        // target 0, all peaks at 1
        let r = Rule::target_default(Arc::clone(&d), 3, 0, 0).unwrap();
        assert_eq!(r.eval(&d.profile(vec![4, 4, 4])), 2);
    }

    #[test]
    fn target_rule_outcomes_are_always_efficient() {
        for m in 2..=4 {
            let d = dom(m);
            for n in 2..=3 {
                for target in 0..m {
                    for default in 0..m {
                        let r = Rule::target_default(Arc::clone(&d), n, target, default).unwrap();
                        for pr in d.profiles(n) {
                            let out = r.eval(&pr);
                            assert!(
                                d.efficient_set(&pr).contains(&out),
                                "m={m} n={n} target={target} default={default} profile {:?}",
                                pr.prefs()
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn target_rule_depends_only_on_peaks() {
        let d = dom(4);
        let r = Rule::target_default(Arc::clone(&d), 2, 2, 0).unwrap();
        for a in d.profiles(2) {
            for b in d.profiles(2) {
                let same_peaks = a
                    .prefs()
                    .iter()
                    .zip(b.prefs())
                    .all(|(&x, &y)| d.peak(x) == d.peak(y));
                if same_peaks {
                    assert_eq!(r.eval(&a), r.eval(&b));
                }
            }
        }
    }

    #[test]
    fn default_dictator_prefers_agent_zero_then_agent_one() {
        let d = dom(2);
        let r = Rule::default_dictator(Arc::clone(&d), 2).unwrap();
        assert_eq!(r.eval(&d.profile(vec![2, 1])), 1); // agent 0 peaked at 1
        assert_eq!(r.eval(&d.profile(vec![0, 2])), 1); // falls through to agent 1
        assert_eq!(r.eval(&d.profile(vec![0, 0])), 0); // both indifferent
        assert!(Rule::default_dictator(Arc::clone(&d), 3).is_err());
    }

    #[test]
    fn wgsp_example_follows_agent_zero_then_agent_one_endpoint_taste() {
        let d = dom(3);
        let r = Rule::wgsp_example(Arc::clone(&d), 3).unwrap();
        // agent 0 peaked: dictates
        assert_eq!(r.eval(&d.profile(vec![2, 0, 4])), 1);
        // agent 0 indifferent, agent 1 ranks 0 above 1: endpoint 0
        assert_eq!(r.eval(&d.profile(vec![0, 2, 0])), 0);
        // agent 0 indifferent, agent 1 ranks 1 above 0: endpoint 1
        assert_eq!(r.eval(&d.profile(vec![0, 3, 0])), 2);
        // agent 1 indifferent too: endpoint 1
        assert_eq!(r.eval(&d.profile(vec![0, 0, 2])), 2);
    }

    #[test]
    fn tables_round_trip_through_materialize() {
        let d = dom(2);
        for n in 2..=3 {
            let r = Rule::wgsp_example(Arc::clone(&d), n).unwrap();
            let table = r.outcome_table();
            assert_eq!(table.len(), 3usize.pow(n as u32));
            let t = Rule::from_table(Arc::clone(&d), n, table.clone()).unwrap();
            for pr in d.profiles(n) {
                assert_eq!(t.eval(&pr), r.eval(&pr));
            }
            assert_eq!(t.materialize().outcome_table(), table);
        }
    }

    #[test]
    fn from_table_validates_length_and_range() {
        let d = dom(2);
        assert!(Rule::from_table(Arc::clone(&d), 2, vec![0; 8]).is_err());
        let mut bad = vec![0; 9];
        bad[3] = 2;
        assert!(Rule::from_table(Arc::clone(&d), 2, bad).is_err());
        assert!(Rule::from_table(Arc::clone(&d), 2, vec![1; 9]).is_ok());
    }

    #[test]
    fn recognition_inverts_materialization_for_every_pair() {
        for m in 2..=3 {
            let d = dom(m);
            for n in 2..=3 {
                for target in 0..m {
                    for default in 0..m {
                        let r = Rule::target_default(Arc::clone(&d), n, target, default).unwrap();
                        assert_eq!(
                            recognize_target_default(&r.materialize()),
                            vec![(target, default)]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn recognition_rejects_rules_outside_the_family() {
        let d2 = dom(2);
        let fd = Rule::default_dictator(Arc::clone(&d2), 2).unwrap();
        assert!(recognize_target_default(&fd).is_empty());
        // the two profiles with opposite strict peaks get opposite outcomes,
        // which no single target can produce
        assert_eq!(fd.eval(&d2.profile(vec![1, 2])), 0);
        assert_eq!(fd.eval(&d2.profile(vec![2, 1])), 1);

        let d3 = dom(3);
        let fstar = Rule::wgsp_example(Arc::clone(&d3), 3).unwrap();
        assert!(recognize_target_default(&fstar).is_empty());
    }

    #[test]
    fn recognition_accepts_a_target_table_given_as_plain_table() {
        let d = dom(3);
        let r = Rule::target_default(Arc::clone(&d), 3, 1, 2).unwrap();
        let t = Rule::from_table(Arc::clone(&d), 3, r.outcome_table()).unwrap();
        assert_eq!(recognize_target_default(&t), vec![(1, 2)]);
    }
}

//! Axiom checkers over complete rule tables.
//!
//! Every checker scans the entire (finite) profile space, so a pass is a
//! proof for the instance at hand and a failure comes with a witness that
//! can be replayed against the rule. Witnesses are canonical: the scan
//! visits profiles by ascending id, coalitions in lexicographic order of
//! their sorted index tuples, and joint misreports in mixed-radix
//! preference-index order with the first coalition member most
//! significant. The same witness comes back no matter how many worker
//! threads run the scan.

mod checks;

use std::fmt;
use std::str::FromStr;

use crate::domain::{AltIdx, PrefIdx, Profile};
use crate::error::Error;
use crate::rules::Rule;

pub use checks::{
    check_all, check_anonymity, check_axiom, check_efficiency, check_group_sp, check_onto,
    check_pairwise_sp, check_sp, check_tops_only, check_weak_pairwise_sp, check_wgsp, reverify,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Onto,
    StrategyProof,
    PairwiseStrategyProof,
    GroupStrategyProof,
    WeaklyGroupStrategyProof,
    WeakPairwiseStrategyProof,
    Efficiency,
    TopsOnly,
    Anonymity,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Onto,
        Axiom::StrategyProof,
        Axiom::PairwiseStrategyProof,
        Axiom::GroupStrategyProof,
        Axiom::WeaklyGroupStrategyProof,
        Axiom::WeakPairwiseStrategyProof,
        Axiom::Efficiency,
        Axiom::TopsOnly,
        Axiom::Anonymity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Onto => "onto",
            Axiom::StrategyProof => "sp",
            Axiom::PairwiseStrategyProof => "pairwise_sp",
            Axiom::GroupStrategyProof => "gsp",
            Axiom::WeaklyGroupStrategyProof => "wgsp",
            Axiom::WeakPairwiseStrategyProof => "weak_pairwise_sp",
            Axiom::Efficiency => "efficiency",
            Axiom::TopsOnly => "tops_only",
            Axiom::Anonymity => "anonymity",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Axiom, Error> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

/// A profitable joint deviation: the coalition's members, their reports in
/// coalition order, and the outcome movement they cause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub profile: Profile,
    pub coalition: Vec<usize>,
    pub misreport: Vec<PrefIdx>,
    pub outcome_truthful: AltIdx,
    pub outcome_deviant: AltIdx,
}

/// What a failed check points at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Manipulation(Witness),
    Inefficiency {
        profile: Profile,
        outcome: AltIdx,
        efficient: Vec<AltIdx>,
    },
    NotOnto {
        missing: AltIdx,
    },
    /// Two profiles the axiom says must share an outcome but do not.
    /// For tops-only `other` is the same-peaks representative; for
    /// anonymity it is the sorted rearrangement.
    ProfilePair {
        profile: Profile,
        other: Profile,
        outcome: AltIdx,
        other_outcome: AltIdx,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    /// Coalition-size bound for the group checks, None elsewhere.
    pub max_coalition: Option<usize>,
    pub pass: bool,
    pub violation: Option<Violation>,
}

impl AxiomVerdict {
    pub(crate) fn passed(axiom: Axiom, max_coalition: Option<usize>) -> AxiomVerdict {
        AxiomVerdict {
            axiom,
            max_coalition,
            pass: true,
            violation: None,
        }
    }

    pub(crate) fn failed(
        axiom: Axiom,
        max_coalition: Option<usize>,
        violation: Violation,
    ) -> AxiomVerdict {
        AxiomVerdict {
            axiom,
            max_coalition,
            pass: false,
            violation: Some(violation),
        }
    }
}

/// Convenience over [`check_all`]: did the rule pass the given axiom at its
/// default coalition bound?
pub fn passes(rule: &Rule, axiom: Axiom) -> bool {
    check_axiom(rule, axiom, None).pass
}

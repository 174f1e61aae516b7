//! JSON rendering for verdicts, witnesses, and CLI envelopes.
//!
//! Rankings render as arrays of grid values (best first) and the
//! indifferent preference as the literal string "indiff", so reports read
//! in the same terms the rules are defined in. Everything rendered here is
//! a pure function of the inputs; reports are reproducible byte for byte.

use serde_json::{json, Value as Json};

use crate::axioms::{AxiomVerdict, Violation, Witness};
use crate::domain::{value_to_json, AltIdx, PrefDomain, PrefIdx, Profile};
use crate::rules::Rule;

pub fn alt_json(dom: &PrefDomain, a: AltIdx) -> Json {
    value_to_json(dom.grid().value(a))
}

pub fn alts_json(dom: &PrefDomain, alts: &[AltIdx]) -> Json {
    Json::Array(alts.iter().map(|&a| alt_json(dom, a)).collect())
}

pub fn pref_json(dom: &PrefDomain, p: PrefIdx) -> Json {
    match dom.preference(p).ranking() {
        None => json!("indiff"),
        Some(ranking) => alts_json(dom, ranking),
    }
}

pub fn profile_json(dom: &PrefDomain, profile: &Profile) -> Json {
    Json::Array(profile.prefs().iter().map(|&p| pref_json(dom, p)).collect())
}

pub fn witness_json(dom: &PrefDomain, w: &Witness) -> Json {
    json!({
        "kind": "manipulation",
        "profile": profile_json(dom, &w.profile),
        "coalition": w.coalition,
        "misreport": w.misreport.iter().map(|&r| pref_json(dom, r)).collect::<Vec<_>>(),
        "outcome_truthful": alt_json(dom, w.outcome_truthful),
        "outcome_deviant": alt_json(dom, w.outcome_deviant),
    })
}

pub fn violation_json(dom: &PrefDomain, v: &Violation) -> Json {
    match v {
        Violation::Manipulation(w) => witness_json(dom, w),
        Violation::Inefficiency {
            profile,
            outcome,
            efficient,
        } => json!({
            "kind": "inefficiency",
            "profile": profile_json(dom, profile),
            "outcome": alt_json(dom, *outcome),
            "efficient_set": alts_json(dom, efficient),
        }),
        Violation::NotOnto { missing } => json!({
            "kind": "not_onto",
            "missing": alt_json(dom, *missing),
        }),
        Violation::ProfilePair {
            profile,
            other,
            outcome,
            other_outcome,
        } => json!({
            "kind": "profile_pair",
            "profile": profile_json(dom, profile),
            "other_profile": profile_json(dom, other),
            "outcome": alt_json(dom, *outcome),
            "other_outcome": alt_json(dom, *other_outcome),
        }),
    }
}

/// One line of a verify report. `elapsed_ms` is optional so deterministic
/// outputs can leave timing out.
pub fn verdict_json(dom: &PrefDomain, v: &AxiomVerdict, elapsed_ms: Option<u64>) -> Json {
    let mut obj = serde_json::Map::new();
    obj.insert("axiom".into(), json!(v.axiom.name()));
    if let Some(k) = v.max_coalition {
        obj.insert("max_coalition".into(), json!(k));
    }
    obj.insert("pass".into(), json!(v.pass));
    obj.insert(
        "witness".into(),
        v.violation
            .as_ref()
            .map_or(Json::Null, |viol| violation_json(dom, viol)),
    );
    if let Some(ms) = elapsed_ms {
        obj.insert("elapsed_ms".into(), json!(ms));
    }
    Json::Object(obj)
}

/// Table outcomes in profile-id order, as grid values.
pub fn table_json(rule: &Rule) -> Json {
    let dom = rule.domain();
    Json::Array(
        rule.outcome_table()
            .into_iter()
            .map(|o| alt_json(dom, o))
            .collect(),
    )
}

//! Grid, admissible preferences, and profiles, plus the efficiency
//! primitives everything else is judged against.

mod grid;
mod pref;
mod profile;

use std::collections::BTreeSet;

pub use grid::{format_value, parse_value, value_to_json, AltIdx, Grid, Value, MAX_GRID_POINTS};
pub use pref::{enumerate_preferences, validate_preference, Preference};
pub use profile::{PrefIdx, Profile, ProfileIter};

pub(crate) use profile::{count as profile_count_raw, decode_into, encode};

/// A grid together with its full admissible preference list and the lookup
/// tables used by rule evaluation and deviation scans.
///
/// Preference index 0 is always the indifferent preference. `ranks[p][a]`
/// is the position of alternative a in preference p's ranking; the
/// indifferent row is all zeros, which makes "weakly prefers" comparisons
/// come out right with no special casing.
#[derive(Debug)]
pub struct PrefDomain {
    grid: Grid,
    prefs: Vec<Preference>,
    peaks: Vec<Option<AltIdx>>,
    ranks: Vec<Vec<u8>>,
    same_peak_min: Vec<PrefIdx>,
}

/// Canonical index of the indifferent preference.
pub const INDIFFERENT: PrefIdx = 0;

impl PrefDomain {
    pub fn new(grid: Grid) -> PrefDomain {
        let prefs = enumerate_preferences(&grid);
        let m = grid.len();
        let peaks: Vec<Option<AltIdx>> = prefs.iter().map(|p| p.peak()).collect();
        let ranks = prefs
            .iter()
            .map(|p| match p.ranking() {
                None => vec![0u8; m],
                Some(r) => {
                    let mut row = vec![0u8; m];
                    for (pos, &a) in r.iter().enumerate() {
                        row[a] = pos as u8;
                    }
                    row
                }
            })
            .collect();
        let same_peak_min = peaks
            .iter()
            .map(|pk| prefs.iter().position(|q| q.peak() == *pk).unwrap())
            .collect();
        PrefDomain {
            grid,
            prefs,
            peaks,
            ranks,
            same_peak_min,
        }
    }

    pub fn uniform(m: usize) -> crate::error::Result<PrefDomain> {
        Ok(PrefDomain::new(Grid::uniform(m)?))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Number of admissible preferences (the profile radix), 1 + 2^(m-1).
    pub fn size(&self) -> usize {
        self.prefs.len()
    }

    pub fn preferences(&self) -> &[Preference] {
        &self.prefs
    }

    pub fn preference(&self, p: PrefIdx) -> &Preference {
        &self.prefs[p]
    }

    pub fn peak(&self, p: PrefIdx) -> Option<AltIdx> {
        self.peaks[p]
    }

    pub fn is_indifferent(&self, p: PrefIdx) -> bool {
        p == INDIFFERENT
    }

    pub fn weakly_prefers(&self, p: PrefIdx, a: AltIdx, b: AltIdx) -> bool {
        self.ranks[p][a] <= self.ranks[p][b]
    }

    pub fn strictly_prefers(&self, p: PrefIdx, a: AltIdx, b: AltIdx) -> bool {
        self.ranks[p][a] < self.ranks[p][b]
    }

    /// Index of the preference with the given ranking, if admissible.
    pub fn find_ranking(&self, ranking: &[AltIdx]) -> Option<PrefIdx> {
        self.prefs.iter().position(|p| p.ranking() == Some(ranking))
    }

    /// Smallest preference index sharing p's peak (p itself for the
    /// indifferent preference). This is the tops-only representative.
    pub fn same_peak_representative(&self, p: PrefIdx) -> PrefIdx {
        self.same_peak_min[p]
    }

    pub fn profile(&self, prefs: Vec<PrefIdx>) -> Profile {
        Profile::new(prefs, self.size())
    }

    pub fn profile_from_id(&self, id: u64, n: usize) -> Profile {
        Profile::from_id(id, self.size(), n)
    }

    pub fn profiles(&self, n: usize) -> ProfileIter {
        ProfileIter::new(self.size(), n)
    }

    pub fn profile_count(&self, n: usize) -> u64 {
        profile_count_raw(self.size(), n)
    }

    /// Min and max peak over non-indifferent agents; None when everyone is
    /// indifferent.
    pub(crate) fn peak_bounds(&self, prefs: &[PrefIdx]) -> Option<(AltIdx, AltIdx)> {
        let mut bounds: Option<(AltIdx, AltIdx)> = None;
        for &p in prefs {
            if let Some(t) = self.peaks[p] {
                bounds = Some(match bounds {
                    None => (t, t),
                    Some((lo, hi)) => (lo.min(t), hi.max(t)),
                });
            }
        }
        bounds
    }

    pub fn peak_summary(&self, profile: &Profile) -> PeakSummary {
        let peaks: BTreeSet<AltIdx> = profile
            .prefs()
            .iter()
            .filter_map(|&p| self.peaks[p])
            .collect();
        let tau_min = peaks.first().copied();
        let tau_max = peaks.last().copied();
        PeakSummary {
            all_indifferent: peaks.is_empty(),
            peaks,
            tau_min,
            tau_max,
        }
    }

    /// Alternatives that no coalition-free Pareto improvement rules out:
    /// the whole grid at the all-indifferent profile, otherwise exactly the
    /// grid points between the smallest and largest peak.
    pub fn efficient_set(&self, profile: &Profile) -> Vec<AltIdx> {
        match self.peak_bounds(profile.prefs()) {
            None => (0..self.grid.len()).collect(),
            Some((lo, hi)) => (lo..=hi).collect(),
        }
    }

    /// Alternatives not strictly dominated: a survives unless some b is
    /// strictly better for every single agent. A superset of
    /// [`efficient_set`](Self::efficient_set); strictly larger whenever an
    /// indifferent agent is present, since nothing strictly dominates for
    /// them.
    pub fn efficient_set_star(&self, profile: &Profile) -> Vec<AltIdx> {
        let m = self.grid.len();
        (0..m)
            .filter(|&a| {
                !(0..m).any(|b| {
                    b != a
                        && profile
                            .prefs()
                            .iter()
                            .all(|&p| self.strictly_prefers(p, b, a))
                })
            })
            .collect()
    }
}

/// Peak statistics of a profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeakSummary {
    pub peaks: BTreeSet<AltIdx>,
    pub tau_min: Option<AltIdx>,
    pub tau_max: Option<AltIdx>,
    pub all_indifferent: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(m: usize) -> PrefDomain {
        PrefDomain::uniform(m).unwrap()
    }

    /// Pareto-efficiency straight from the definition: a is inefficient iff
    /// some b is weakly better for everyone and strictly better for someone.
    fn efficient_oracle(d: &PrefDomain, profile: &Profile) -> Vec<AltIdx> {
        let m = d.grid().len();
        (0..m)
            .filter(|&a| {
                !(0..m).any(|b| {
                    b != a
                        && profile.prefs().iter().all(|&p| d.weakly_prefers(p, b, a))
                        && profile.prefs().iter().any(|&p| d.strictly_prefers(p, b, a))
                })
            })
            .collect()
    }

    fn strict_dominance_oracle(d: &PrefDomain, profile: &Profile) -> Vec<AltIdx> {
        let m = d.grid().len();
        (0..m)
            .filter(|&a| {
                !(0..m)
                    .any(|b| b != a && profile.prefs().iter().all(|&p| d.strictly_prefers(p, b, a)))
            })
            .collect()
    }

    #[test]
    fn domain_sizes_follow_the_counting_formula() {
        assert_eq!(dom(2).size(), 3);
        assert_eq!(dom(3).size(), 5);
        assert_eq!(dom(4).size(), 9);
        assert_eq!(dom(5).size(), 17);
        assert_eq!(dom(6).size(), 33);
    }

    #[test]
    fn peak_summary_examples() {
        let d = dom(3);
        // peaks 0 and 1 (value 1/2), one indifferent agent
        let pr = d.profile(vec![1, 2, 0]);
        let s = d.peak_summary(&pr);
        assert_eq!(s.tau_min, Some(0));
        assert_eq!(s.tau_max, Some(1));
        assert!(!s.all_indifferent);
        assert_eq!(s.peaks, BTreeSet::from([0, 1]));

        let everyone_out = d.profile(vec![0, 0, 0]);
        let s = d.peak_summary(&everyone_out);
        assert!(s.all_indifferent);
        assert_eq!(s.tau_min, None);
        assert_eq!(s.tau_max, None);
        assert!(s.peaks.is_empty());

        let unanimous = d.profile(vec![4, 4]);
        let s = d.peak_summary(&unanimous);
        assert_eq!((s.tau_min, s.tau_max), (Some(2), Some(2)));
    }

    #[test]
    fn efficient_set_is_the_peak_interval() {
        let d = dom(3);
        let pr = d.profile(vec![1, 4, 0]); // peaks at 0 and 1
        assert_eq!(d.efficient_set(&pr), vec![0, 1, 2]);
        let pr = d.profile(vec![2, 0, 0]); // lone peak at 1/2
        assert_eq!(d.efficient_set(&pr), vec![1]);
        let pr = d.profile(vec![0, 0, 0]);
        assert_eq!(d.efficient_set(&pr), vec![0, 1, 2]);
    }

    #[test]
    fn efficient_set_matches_pareto_oracle_exhaustively() {
        for m in 2..=3 {
            let d = dom(m);
            for n in 2..=3 {
                for pr in d.profiles(n) {
                    assert_eq!(
                        d.efficient_set(&pr),
                        efficient_oracle(&d, &pr),
                        "profile {:?}",
                        pr.prefs()
                    );
                }
            }
        }
    }

    #[test]
    fn strict_dominance_set_examples_and_oracle() {
        let d = dom(3);
        // one peaked agent, rest indifferent: nothing is strictly dominated
        let pr = d.profile(vec![2, 0, 0]);
        assert_eq!(d.efficient_set_star(&pr), vec![0, 1, 2]);
        assert_eq!(d.efficient_set(&pr), vec![1]); // strictly smaller

        // all agents peak at 1/2 with strict orders
        let pr = d.profile(vec![2, 3, 2]);
        assert_eq!(d.efficient_set_star(&pr), vec![1]);

        for m in 2..=3 {
            let d = dom(m);
            for n in 2..=3 {
                for pr in d.profiles(n) {
                    let star = d.efficient_set_star(&pr);
                    assert_eq!(star, strict_dominance_oracle(&d, &pr));
                    // containment, strict somewhere
                    let eff = d.efficient_set(&pr);
                    assert!(eff.iter().all(|a| star.contains(a)));
                }
            }
        }
    }

    #[test]
    fn indifferent_agents_widen_only_the_star_set() {
        let d = dom(3);
        let with_indiff = d.profile(vec![0, 2, 0]);
        assert!(d.efficient_set(&with_indiff).len() < d.efficient_set_star(&with_indiff).len());
    }

    #[test]
    fn preference_order_is_complete_and_transitive() {
        for m in 2..=5 {
            let d = dom(m);
            let alts = d.grid().len();
            for p in 0..d.size() {
                for a in 0..alts {
                    for b in 0..alts {
                        assert!(d.weakly_prefers(p, a, b) || d.weakly_prefers(p, b, a));
                        for c in 0..alts {
                            if d.weakly_prefers(p, a, b) && d.weakly_prefers(p, b, c) {
                                assert!(d.weakly_prefers(p, a, c));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tops_only_representative_is_minimal_same_peak_index() {
        let d = dom(3);
        assert_eq!(d.same_peak_representative(0), 0);
        assert_eq!(d.same_peak_representative(2), 2);
        assert_eq!(d.same_peak_representative(3), 2); // both peak at 1/2
        assert_eq!(d.same_peak_representative(4), 4);
    }
}

//! Admissible preferences over grid points: either full indifference
//! (abstention) or a strict single-peaked linear order.
//!
//! A strict order given as a best-to-worst ranking of grid indices is
//! single-peaked exactly when every prefix is a contiguous index interval;
//! the first entry is the peak. Enumeration order is fixed everywhere:
//! indifference first, then strict orders by (peak, lexicographic ranking).

use crate::domain::grid::{AltIdx, Grid};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Preference {
    Indifferent,
    SinglePeaked { ranking: Vec<AltIdx> },
}

impl Preference {
    pub fn peak(&self) -> Option<AltIdx> {
        match self {
            Preference::Indifferent => None,
            Preference::SinglePeaked { ranking } => Some(ranking[0]),
        }
    }

    pub fn ranking(&self) -> Option<&[AltIdx]> {
        match self {
            Preference::Indifferent => None,
            Preference::SinglePeaked { ranking } => Some(ranking),
        }
    }

    /// a is at least as good as b.
    pub fn weakly_prefers(&self, a: AltIdx, b: AltIdx) -> bool {
        match self {
            Preference::Indifferent => true,
            Preference::SinglePeaked { ranking } => position(ranking, a) <= position(ranking, b),
        }
    }

    /// a is strictly better than b.
    pub fn strictly_prefers(&self, a: AltIdx, b: AltIdx) -> bool {
        match self {
            Preference::Indifferent => false,
            Preference::SinglePeaked { ranking } => position(ranking, a) < position(ranking, b),
        }
    }
}

fn position(ranking: &[AltIdx], a: AltIdx) -> usize {
    ranking
        .iter()
        .position(|&x| x == a)
        .expect("alternative outside grid")
}

/// Is `ranking` a single-peaked strict order over the whole grid?
/// Rejects anything that is not a permutation of 0..m.
pub fn validate_preference(ranking: &[AltIdx], grid: &Grid) -> Result<bool> {
    let m = grid.len();
    if ranking.len() != m {
        return Err(Error::InvalidPreference(format!(
            "ranking has {} entries for a {}-point grid",
            ranking.len(),
            m
        )));
    }
    let mut seen = vec![false; m];
    for &a in ranking {
        if a >= m || seen[a] {
            return Err(Error::InvalidPreference(
                "ranking is not a permutation of the grid indices".into(),
            ));
        }
        seen[a] = true;
    }
    // Every prefix must be a contiguous interval around the peak.
    let (mut lo, mut hi) = (ranking[0], ranking[0]);
    for &a in &ranking[1..] {
        if a + 1 == lo {
            lo = a;
        } else if a == hi + 1 {
            hi = a;
        } else {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All admissible preferences in canonical order. Index 0 is always the
/// indifferent preference; the count is 1 + 2^(m-1).
pub fn enumerate_preferences(grid: &Grid) -> Vec<Preference> {
    let m = grid.len();
    let mut out = Vec::with_capacity(1 + (1 << (m - 1)));
    out.push(Preference::Indifferent);
    for peak in 0..m {
        let mut ranking = Vec::with_capacity(m);
        ranking.push(peak);
        extend(&mut ranking, peak, peak, m, &mut out);
    }
    out
}

/// Depth-first, lower extension before upper, so rankings with a common
/// peak come out in lexicographic order.
fn extend(ranking: &mut Vec<AltIdx>, lo: AltIdx, hi: AltIdx, m: usize, out: &mut Vec<Preference>) {
    if ranking.len() == m {
        out.push(Preference::SinglePeaked {
            ranking: ranking.clone(),
        });
        return;
    }
    if lo > 0 {
        ranking.push(lo - 1);
        extend(ranking, lo - 1, hi, m, out);
        ranking.pop();
    }
    if hi + 1 < m {
        ranking.push(hi + 1);
        extend(ranking, lo, hi + 1, m, out);
        ranking.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    /// Independent single-peakedness test, straight from the order axioms:
    /// on the peak's right side closer is better, mirrored on the left.
    fn single_peaked_oracle(ranking: &[AltIdx]) -> bool {
        let peak = ranking[0];
        let pos = |a: AltIdx| ranking.iter().position(|&x| x == a).unwrap();
        let m = ranking.len();
        for a in 0..m {
            for b in 0..m {
                if peak <= a && a < b && pos(a) > pos(b) {
                    return false;
                }
                if b < a && a <= peak && pos(a) > pos(b) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn validate_accepts_peaked_orders_and_rejects_valleys() {
        let g = Grid::uniform(3).unwrap();
        assert!(validate_preference(&[1, 0, 2], &g).unwrap());
        assert!(validate_preference(&[1, 2, 0], &g).unwrap());
        assert!(validate_preference(&[0, 1, 2], &g).unwrap());
        // 0 best then 2 skips over 1: a valley, not a peak
        assert!(!validate_preference(&[0, 2, 1], &g).unwrap());
        assert!(!validate_preference(&[2, 0, 1], &g).unwrap());
    }

    #[test]
    fn validate_rejects_non_permutations() {
        let g = Grid::uniform(3).unwrap();
        assert!(validate_preference(&[0, 1], &g).is_err());
        assert!(validate_preference(&[0, 1, 1], &g).is_err());
        assert!(validate_preference(&[0, 1, 3], &g).is_err());
    }

    #[test]
    fn validate_agrees_with_pairwise_oracle_on_all_orders() {
        for m in 2..=5 {
            let g = Grid::uniform(m).unwrap();
            for perm in (0..m).permutations(m) {
                assert_eq!(
                    validate_preference(&perm, &g).unwrap(),
                    single_peaked_oracle(&perm),
                    "disagreement on {perm:?}"
                );
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        for m in 2..=6 {
            let g = Grid::uniform(m).unwrap();
            let brute: Vec<Vec<AltIdx>> = (0..m)
                .permutations(m)
                .filter(|p| single_peaked_oracle(p))
                .collect();
            let enumerated = enumerate_preferences(&g);
            assert_eq!(enumerated.len(), 1 + brute.len());
            assert_eq!(enumerated.len(), 1 + (1 << (m - 1)));
            let strict: Vec<&[AltIdx]> = enumerated[1..]
                .iter()
                .map(|p| p.ranking().unwrap())
                .collect();
            // same set, and every enumerated order is in the filtered set
            let mut sorted = brute.clone();
            sorted.sort();
            let mut got: Vec<Vec<AltIdx>> = strict.iter().map(|r| r.to_vec()).collect();
            got.sort();
            assert_eq!(got, sorted);
        }
    }

    #[test]
    fn enumeration_order_is_indifference_then_peak_then_lex() {
        let g = Grid::uniform(3).unwrap();
        let prefs = enumerate_preferences(&g);
        assert_eq!(prefs[0], Preference::Indifferent);
        let rankings: Vec<_> = prefs[1..]
            .iter()
            .map(|p| p.ranking().unwrap().to_vec())
            .collect();
        assert_eq!(
            rankings,
            vec![vec![0, 1, 2], vec![1, 0, 2], vec![1, 2, 0], vec![2, 1, 0]]
        );

        let g4 = Grid::uniform(4).unwrap();
        let prefs4 = enumerate_preferences(&g4);
        let peaks: Vec<_> = prefs4[1..].iter().map(|p| p.peak().unwrap()).collect();
        let mut sorted_peaks = peaks.clone();
        sorted_peaks.sort();
        assert_eq!(peaks, sorted_peaks);
        for w in prefs4[1..].windows(2) {
            if w[0].peak() == w[1].peak() {
                assert!(w[0].ranking().unwrap() < w[1].ranking().unwrap());
            }
        }
    }

    #[test]
    fn comparisons_respect_the_stated_order() {
        let g = Grid::uniform(3).unwrap();
        let prefs = enumerate_preferences(&g);
        let half_then_one = &prefs[3]; // ranking [1, 2, 0]
        assert_eq!(half_then_one.ranking().unwrap(), &[1, 2, 0]);
        assert!(half_then_one.strictly_prefers(1, 2));
        assert!(half_then_one.strictly_prefers(2, 0));
        assert!(half_then_one.weakly_prefers(1, 1));
        assert!(!half_then_one.weakly_prefers(0, 2));

        let indiff = &prefs[0];
        assert!(indiff.weakly_prefers(0, 2));
        assert!(indiff.weakly_prefers(2, 0));
        assert!(!indiff.strictly_prefers(0, 2));
        assert_eq!(indiff.peak(), None);
    }
}

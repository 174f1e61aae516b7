//! Profiles of preference indices with a canonical integer id.
//!
//! The id is the mixed-radix reading of the index vector with agent 0 most
//! significant and radix equal to the preference-domain size, so the
//! all-indifferent profile is always id 0 and enumeration by ascending id
//! is enumeration in lexicographic preference-index order.

/// Index into the canonical preference list of a [`PrefDomain`].
///
/// [`PrefDomain`]: crate::domain::PrefDomain
pub type PrefIdx = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    prefs: Vec<PrefIdx>,
    id: u64,
}

impl Profile {
    /// `domain_size` is the radix; entries must be below it and there must
    /// be at least two agents.
    pub fn new(prefs: Vec<PrefIdx>, domain_size: usize) -> Profile {
        assert!(prefs.len() >= 2, "profiles need at least two agents");
        assert!(
            prefs.iter().all(|&p| p < domain_size),
            "preference index out of range"
        );
        let id = encode(&prefs, domain_size);
        Profile { prefs, id }
    }

    pub fn from_id(id: u64, domain_size: usize, n: usize) -> Profile {
        assert!(n >= 2, "profiles need at least two agents");
        let mut prefs = vec![0; n];
        decode_into(id, domain_size, &mut prefs);
        Profile { prefs, id }
    }

    pub fn prefs(&self) -> &[PrefIdx] {
        &self.prefs
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.prefs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub(crate) fn encode(prefs: &[PrefIdx], domain_size: usize) -> u64 {
    prefs
        .iter()
        .fold(0u64, |acc, &p| acc * domain_size as u64 + p as u64)
}

pub(crate) fn decode_into(id: u64, domain_size: usize, out: &mut [PrefIdx]) {
    let d = domain_size as u64;
    let mut rest = id;
    for slot in out.iter_mut().rev() {
        *slot = (rest % d) as PrefIdx;
        rest /= d;
    }
    assert_eq!(rest, 0, "profile id out of range for this domain");
}

/// Number of profiles, erroring out instead of silently wrapping.
pub(crate) fn count(domain_size: usize, n: usize) -> u64 {
    (domain_size as u128)
        .checked_pow(n as u32)
        .filter(|&c| c <= u64::MAX as u128)
        .expect("profile space exceeds u64") as u64
}

/// Ascending-id iteration over every profile of n agents.
pub struct ProfileIter {
    domain_size: usize,
    n: usize,
    next: u64,
    count: u64,
}

impl ProfileIter {
    pub(crate) fn new(domain_size: usize, n: usize) -> ProfileIter {
        assert!(n >= 2, "profiles need at least two agents");
        ProfileIter {
            domain_size,
            n,
            next: 0,
            count: count(domain_size, n),
        }
    }
}

impl Iterator for ProfileIter {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        if self.next >= self.count {
            return None;
        }
        let p = Profile::from_id(self.next, self.domain_size, self.n);
        self.next += 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for ProfileIter {}

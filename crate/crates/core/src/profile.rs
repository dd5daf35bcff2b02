// SPDX-License-Identifier: Apache-2.0

//! Ordinal preference profiles.

use crate::error::{Error, Result};

/// `n` strict rankings over `m` candidates, most-preferred first.
///
/// Candidate `a` is weakly preferred to `c` by voter `v` when `a` appears no
/// later than `c` in `v`'s ranking; ties in the underlying metric are
/// resolved by the ranking itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PreferenceProfile {
    m: usize,
    rankings: Vec<Vec<usize>>,
    // positions[v][c] = rank of c in voter v's ranking (0 = top).
    positions: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    pub fn new(m: usize, rankings: Vec<Vec<usize>>) -> Result<Self> {
        if rankings.is_empty() {
            return Err(Error::InvalidProfile(
                "at least one voter is required".into(),
            ));
        }
        if m == 0 {
            return Err(Error::InvalidProfile(
                "at least one candidate is required".into(),
            ));
        }
        let mut positions = Vec::with_capacity(rankings.len());
        for (v, ranking) in rankings.iter().enumerate() {
            if ranking.len() != m {
                return Err(Error::InvalidProfile(format!(
                    "voter {v} ranks {} candidates, expected {m}",
                    ranking.len()
                )));
            }
            let mut pos = vec![usize::MAX; m];
            for (rank, &c) in ranking.iter().enumerate() {
                if c >= m {
                    return Err(Error::InvalidProfile(format!(
                        "voter {v} ranks unknown candidate {c}"
                    )));
                }
                if pos[c] != usize::MAX {
                    return Err(Error::InvalidProfile(format!(
                        "voter {v} ranks candidate {c} twice"
                    )));
                }
                pos[c] = rank;
            }
            positions.push(pos);
        }
        Ok(PreferenceProfile {
            m,
            rankings,
            positions,
        })
    }

    /// Number of voters.
    pub fn n(&self) -> usize {
        self.rankings.len()
    }

    /// Number of candidates.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rankings(&self) -> &[Vec<usize>] {
        &self.rankings
    }

    pub fn ranking(&self, voter: usize) -> &[usize] {
        &self.rankings[voter]
    }

    /// Rank of `candidate` in `voter`'s ranking, 0 being the favourite.
    pub fn position(&self, voter: usize, candidate: usize) -> usize {
        self.positions[voter][candidate]
    }

    pub fn top(&self, voter: usize) -> usize {
        self.rankings[voter][0]
    }

    /// `a ≽_v c`: voter `v` ranks `a` no lower than `c`.
    pub fn weakly_prefers(&self, voter: usize, a: usize, c: usize) -> bool {
        self.positions[voter][a] <= self.positions[voter][c]
    }

    /// Lowest-ranked candidate of `voter` among those flagged in `active`.
    pub fn bottom_among(&self, voter: usize, active: &[bool]) -> Option<usize> {
        self.rankings[voter]
            .iter()
            .rev()
            .copied()
            .find(|&c| active[c])
    }

    /// Plurality scores: number of voters ranking each candidate first.
    pub fn plurality(&self) -> Vec<usize> {
        let mut plu = vec![0; self.m];
        for ranking in &self.rankings {
            plu[ranking[0]] += 1;
        }
        plu
    }

    pub fn check_candidate(&self, candidate: usize) -> Result<()> {
        if candidate >= self.m {
            return Err(Error::IndexOutOfRange {
                kind: "candidate",
                index: candidate,
                size: self.m,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_permutations() {
        assert!(PreferenceProfile::new(2, vec![vec![0, 0]]).is_err());
        assert!(PreferenceProfile::new(2, vec![vec![0]]).is_err());
        assert!(PreferenceProfile::new(2, vec![vec![0, 2]]).is_err());
        assert!(PreferenceProfile::new(2, vec![]).is_err());
        assert!(PreferenceProfile::new(0, vec![vec![]]).is_err());
    }

    #[test]
    fn plurality_and_positions() {
        let p =
            PreferenceProfile::new(3, vec![vec![2, 0, 1], vec![2, 1, 0], vec![0, 1, 2]]).unwrap();
        assert_eq!(p.plurality(), vec![1, 0, 2]);
        assert_eq!(p.position(0, 1), 2);
        assert!(p.weakly_prefers(0, 2, 1));
        assert!(p.weakly_prefers(0, 1, 1));
        assert!(!p.weakly_prefers(2, 2, 0));
        assert_eq!(p.bottom_among(0, &[true, false, true]), Some(0));
        assert_eq!(p.bottom_among(0, &[false, false, false]), None);
    }
}

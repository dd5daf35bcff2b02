// SPDX-License-Identifier: Apache-2.0

//! Probability vectors over voters (`p`) or candidates (`q`).

use std::ops::Index;

use crate::error::{Error, Result};
use crate::profile::PreferenceProfile;
use crate::rational::Rational;

/// Non-negative rational weights summing to exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        if let Some(i) = weights.iter().position(Rational::is_negative) {
            return Err(Error::InvalidWeights(format!("entry {i} is negative")));
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::one() {
            return Err(Error::InvalidWeights(format!(
                "entries sum to {total}, not 1"
            )));
        }
        Ok(WeightVector(weights))
    }

    /// `p^uni`: every entry `1/len`.
    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        WeightVector(vec![Rational::new(1, len as i64); len])
    }

    /// `q^plu`: each candidate weighted by its plurality share.
    pub fn plurality(profile: &PreferenceProfile) -> Self {
        let n = profile.n() as i64;
        WeightVector(
            profile
                .plurality()
                .into_iter()
                .map(|p| Rational::new(p as i64, n))
                .collect(),
        )
    }

    /// All mass on `index`.
    pub fn indicator(len: usize, index: usize) -> Self {
        assert!(index < len);
        let mut w = vec![Rational::zero(); len];
        w[index] = Rational::one();
        WeightVector(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn max(&self) -> &Rational {
        self.0.iter().max().expect("non-empty")
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }
}

impl Index<usize> for WeightVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn validation() {
        assert!(WeightVector::new(vec![ratio(1, 2), ratio(1, 2)]).is_ok());
        assert!(WeightVector::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(WeightVector::new(vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
    }

    #[test]
    fn plurality_weights() {
        let p = PreferenceProfile::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 0]]).unwrap();
        let q = WeightVector::plurality(&p);
        assert_eq!(q.as_slice(), &[ratio(1, 3), ratio(2, 3)]);
        assert_eq!(WeightVector::uniform(4)[3], ratio(1, 4));
    }
}

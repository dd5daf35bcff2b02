// SPDX-License-Identifier: Apache-2.0

//! `(p,q)`-domination graphs, fractional perfect matchings and the veto core.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::profile::PreferenceProfile;
use crate::rational::{Extended, Rational};
use crate::weights::WeightVector;

/// Bipartite graph between voters and candidates with an edge `(v, c)`
/// whenever `v` weakly prefers the distinguished candidate `a` to `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationGraph {
    candidate: usize,
    p: WeightVector,
    q: WeightVector,
    // edges[v][c]
    edges: Vec<Vec<bool>>,
}

impl DominationGraph {
    pub fn candidate(&self) -> usize {
        self.candidate
    }

    pub fn voter_weights(&self) -> &WeightVector {
        &self.p
    }

    pub fn candidate_weights(&self) -> &WeightVector {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn m(&self) -> usize {
        self.q.len()
    }

    pub fn has_edge(&self, voter: usize, candidate: usize) -> bool {
        self.edges[voter][candidate]
    }

    /// All edges in voter-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().enumerate().flat_map(|(v, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &e)| e)
                .map(move |(c, _)| (v, c))
        })
    }
}

/// Non-negative weights on voter–candidate pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalMatching {
    // weights[v][c]
    weights: Vec<Vec<Rational>>,
}

impl FractionalMatching {
    pub fn new(weights: Vec<Vec<Rational>>) -> Self {
        FractionalMatching { weights }
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        FractionalMatching {
            weights: vec![vec![Rational::zero(); m]; n],
        }
    }

    pub fn weight(&self, voter: usize, candidate: usize) -> &Rational {
        &self.weights[voter][candidate]
    }

    pub fn set(&mut self, voter: usize, candidate: usize, value: Rational) {
        self.weights[voter][candidate] = value;
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    pub fn voter_total(&self, voter: usize) -> Rational {
        self.weights[voter].iter().sum()
    }

    pub fn candidate_total(&self, candidate: usize) -> Rational {
        self.weights.iter().map(|row| &row[candidate]).sum()
    }

    /// Pairs carrying positive weight.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.weights.iter().enumerate().flat_map(|(v, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, w)| w.is_positive())
                .map(move |(c, w)| (v, c, w))
        })
    }

    /// Checks non-negativity, support inside the graph and both marginal
    /// equalities, exactly.
    pub fn validate(&self, graph: &DominationGraph) -> Result<()> {
        let (n, m) = (graph.n(), graph.m());
        if self.weights.len() != n || self.weights.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidMatching(format!(
                "expected a {n}x{m} weight table"
            )));
        }
        for (v, row) in self.weights.iter().enumerate() {
            for (c, w) in row.iter().enumerate() {
                if w.is_negative() {
                    return Err(Error::InvalidMatching(format!(
                        "w({v},{c}) = {w} is negative"
                    )));
                }
                if w.is_positive() && !graph.has_edge(v, c) {
                    return Err(Error::InvalidMatching(format!(
                        "w({v},{c}) = {w} on a non-edge"
                    )));
                }
            }
        }
        for v in 0..n {
            let total = self.voter_total(v);
            if total != graph.p[v] {
                return Err(Error::InvalidMatching(format!(
                    "voter {v} carries {total}, expected {}",
                    graph.p[v]
                )));
            }
        }
        for c in 0..m {
            let total = self.candidate_total(c);
            if total != graph.q[c] {
                return Err(Error::InvalidMatching(format!(
                    "candidate {c} carries {total}, expected {}",
                    graph.q[c]
                )));
            }
        }
        Ok(())
    }
}

fn check_weights(profile: &PreferenceProfile, p: &WeightVector, q: &WeightVector) -> Result<()> {
    if p.len() != profile.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} voter weights for {} voters",
            p.len(),
            profile.n()
        )));
    }
    if q.len() != profile.m() {
        return Err(Error::DimensionMismatch(format!(
            "{} candidate weights for {} candidates",
            q.len(),
            profile.m()
        )));
    }
    Ok(())
}

pub fn build_domination_graph(
    profile: &PreferenceProfile,
    a: usize,
    p: &WeightVector,
    q: &WeightVector,
) -> Result<DominationGraph> {
    profile.check_candidate(a)?;
    check_weights(profile, p, q)?;
    let edges = (0..profile.n())
        .map(|v| {
            (0..profile.m())
                .map(|c| profile.weakly_prefers(v, a, c))
                .collect()
        })
        .collect();
    Ok(DominationGraph {
        candidate: a,
        p: p.clone(),
        q: q.clone(),
        edges,
    })
}

/// Decides feasibility by max-flow after scaling all weights to integers by
/// the lcm `L` of their denominators: source→voter capacity `p(v)·L`,
/// edge capacity `L` (never binding), candidate→sink capacity `q(c)·L`.
/// Feasible iff the flow saturates `L`.
pub fn find_fractional_perfect_matching(graph: &DominationGraph) -> Option<FractionalMatching> {
    let (n, m) = (graph.n(), graph.m());
    let scale = graph
        .p
        .iter()
        .chain(graph.q.iter())
        .fold(BigInt::one(), |acc, w| acc.lcm(&w.denom()));
    let scaled = |w: &Rational| w.numer() * (&scale / w.denom());

    let source = 0;
    let sink = n + m + 1;
    let mut net = FlowNetwork::new(n + m + 2);
    for v in 0..n {
        net.add_arc(source, 1 + v, scaled(&graph.p[v]));
    }
    for (v, c) in graph.edges() {
        net.add_arc(1 + v, 1 + n + c, scale.clone());
    }
    for c in 0..m {
        net.add_arc(1 + n + c, sink, scaled(&graph.q[c]));
    }
    if net.max_flow(source, sink) != scale {
        return None;
    }
    let denom = Rational::from(scale.clone());
    let weights = (0..n)
        .map(|v| {
            (0..m)
                .map(|c| Rational::from(net.flow(1 + v, 1 + n + c).clone()) / &denom)
                .collect()
        })
        .collect();
    Some(FractionalMatching { weights })
}

/// Members of the `(p,q)`-veto core together with a certifying matching,
/// in ascending candidate order.
pub fn veto_core_with_certificates(
    profile: &PreferenceProfile,
    p: &WeightVector,
    q: &WeightVector,
) -> Result<Vec<(usize, FractionalMatching)>> {
    check_weights(profile, p, q)?;
    let mut core = Vec::new();
    for a in 0..profile.m() {
        let graph = build_domination_graph(profile, a, p, q)?;
        if let Some(w) = find_fractional_perfect_matching(&graph) {
            core.push((a, w));
        }
    }
    Ok(core)
}

/// Candidates whose domination graph admits a fractional perfect matching.
pub fn veto_core(
    profile: &PreferenceProfile,
    p: &WeightVector,
    q: &WeightVector,
) -> Result<Vec<usize>> {
    Ok(veto_core_with_certificates(profile, p, q)?
        .into_iter()
        .map(|(a, _)| a)
        .collect())
}

pub fn in_veto_core(
    profile: &PreferenceProfile,
    a: usize,
    p: &WeightVector,
    q: &WeightVector,
) -> Result<bool> {
    let graph = build_domination_graph(profile, a, p, q)?;
    Ok(find_fractional_perfect_matching(&graph).is_some())
}

/// `μ(σ,q) = min_c q(c)·n / plu(c)`, where candidates nobody ranks first
/// contribute 1.
pub fn mu(profile: &PreferenceProfile, q: &WeightVector) -> Result<Rational> {
    if q.len() != profile.m() {
        return Err(Error::DimensionMismatch(format!(
            "{} candidate weights for {} candidates",
            q.len(),
            profile.m()
        )));
    }
    let n = Rational::from(profile.n());
    Ok(profile
        .plurality()
        .into_iter()
        .enumerate()
        .map(|(c, plu)| {
            if plu == 0 {
                Rational::one()
            } else {
                &q[c] * &n / Rational::from(plu)
            }
        })
        .min()
        .expect("at least one candidate"))
}

/// `λ(p) = n·max_v p(v)`.
pub fn lambda(p: &WeightVector) -> Rational {
    Rational::from(p.len()) * p.max()
}

/// `1 + 2λ/μ`, infinite when `μ = 0`.
pub fn generic_bound(
    profile: &PreferenceProfile,
    p: &WeightVector,
    q: &WeightVector,
) -> Result<Extended> {
    check_weights(profile, p, q)?;
    let mu = mu(profile, q)?;
    if mu.is_zero() {
        return Ok(Extended::Infinite);
    }
    Ok(Extended::Finite(
        Rational::one() + Rational::integer(2) * lambda(p) / mu,
    ))
}

/// Converts a `(p,q)` certificate for `a` into a `(p^uni, q′)` certificate.
///
/// With `λ_v = max p − p(v)`, each voter's matched mass is inflated by
/// `(1 + λ_v/p(v))` and the whole table divided by `λ`, which equalises the
/// voter side at `1/n`; `q′` is whatever the candidate side then receives.
pub fn reduce_to_uniform(
    profile: &PreferenceProfile,
    a: usize,
    p: &WeightVector,
    q: &WeightVector,
    w: &FractionalMatching,
) -> Result<(WeightVector, FractionalMatching)> {
    let graph = build_domination_graph(profile, a, p, q)?;
    w.validate(&graph)?;
    if let Some(v) = p.iter().position(Rational::is_zero) {
        return Err(Error::ReductionUndefined { voter: v });
    }
    let (n, m) = (profile.n(), profile.m());
    let p_max = p.max().clone();
    let lam = lambda(p);
    let mut reduced = FractionalMatching::zeros(n, m);
    for v in 0..n {
        let factor = (Rational::one() + (&p_max - &p[v]) / &p[v]) / &lam;
        for c in 0..m {
            if graph.has_edge(v, c) {
                reduced.set(v, c, w.weight(v, c) * &factor);
            }
        }
    }
    // q′(c) = (q(c) + Σ_v w(v,c)·λ_v/p(v)) / λ, which equals the column sums
    // of the reduced table.
    let q_prime: Vec<Rational> = (0..m)
        .map(|c| {
            let extra: Rational = (0..n)
                .filter(|&v| graph.has_edge(v, c))
                .map(|v| w.weight(v, c) * (&p_max - &p[v]) / &p[v])
                .sum();
            (&q[c] + extra) / &lam
        })
        .collect();
    let q_prime = WeightVector::new(q_prime)?;
    Ok((q_prime, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    /// Voter 1: a ≻ b; voters 2, 3: b ≻ a.
    fn three_voters() -> PreferenceProfile {
        PreferenceProfile::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 0]]).unwrap()
    }

    fn q_three_voters() -> WeightVector {
        WeightVector::new(vec![ratio(2, 3), ratio(1, 3)]).unwrap()
    }

    #[test]
    fn three_voters_graph_and_matching() {
        let profile = three_voters();
        let p = WeightVector::uniform(3);
        let g = build_domination_graph(&profile, 0, &p, &q_three_voters()).unwrap();
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![(0, 0), (0, 1), (1, 0), (2, 0)]
        );
        let w = find_fractional_perfect_matching(&g).unwrap();
        w.validate(&g).unwrap();
        let third = ratio(1, 3);
        assert_eq!(w.weight(0, 1), &third);
        assert_eq!(w.weight(1, 0), &third);
        assert_eq!(w.weight(2, 0), &third);
        assert_eq!(w.weight(0, 0), &Rational::zero());
        assert_eq!(mu(&profile, &q_three_voters()).unwrap(), ratio(1, 2));
    }

    #[test]
    fn last_ranked_candidate_infeasible() {
        let profile = PreferenceProfile::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let p = WeightVector::uniform(2);
        let q = WeightVector::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let g = build_domination_graph(&profile, 1, &p, &q).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 1)]);
        assert!(find_fractional_perfect_matching(&g).is_none());
        let g = build_domination_graph(&profile, 1, &p, &WeightVector::indicator(2, 1)).unwrap();
        assert!(find_fractional_perfect_matching(&g).is_some());
    }

    #[test]
    fn plurality_weights_have_unit_mu() {
        let profile = three_voters();
        let q = WeightVector::plurality(&profile);
        assert_eq!(mu(&profile, &q).unwrap(), Rational::one());
        let p = WeightVector::uniform(3);
        assert_eq!(
            generic_bound(&profile, &p, &q).unwrap(),
            Rational::integer(3)
        );
        assert_eq!(veto_core(&profile, &p, &q).unwrap(), vec![1]);
    }

    #[test]
    fn zero_mu_gives_infinite_bound() {
        let profile = three_voters();
        let q = WeightVector::indicator(2, 0);
        assert_eq!(
            generic_bound(&profile, &WeightVector::uniform(3), &q).unwrap(),
            Extended::Infinite
        );
    }

    #[test]
    fn lambda_extremes() {
        assert_eq!(lambda(&WeightVector::uniform(5)), Rational::one());
        assert_eq!(lambda(&WeightVector::indicator(5, 2)), Rational::integer(5));
    }

    #[test]
    fn uniform_reduction_is_identity() {
        let profile = three_voters();
        let p = WeightVector::uniform(3);
        let q = q_three_voters();
        let g = build_domination_graph(&profile, 0, &p, &q).unwrap();
        let w = find_fractional_perfect_matching(&g).unwrap();
        let (q2, w2) = reduce_to_uniform(&profile, 0, &p, &q, &w).unwrap();
        assert_eq!(q2, q);
        assert_eq!(w2, w);
    }

    #[test]
    fn reduction_rejects_zero_voter_weight() {
        let profile = three_voters();
        let p = WeightVector::new(vec![ratio(1, 2), ratio(1, 2), Rational::zero()]).unwrap();
        let q = WeightVector::indicator(2, 0);
        let g = build_domination_graph(&profile, 0, &p, &q).unwrap();
        let w = find_fractional_perfect_matching(&g).unwrap();
        assert_eq!(
            reduce_to_uniform(&profile, 0, &p, &q, &w),
            Err(Error::ReductionUndefined { voter: 2 })
        );
    }
}

//! Deletion-contraction computation of the integral chromatic function of a
//! weighted integral gain graph, as a [`PluspartExpression`].
//!
//! The recursion: simplify (a zero loop kills the function), split into
//! components and multiply, read linkless graphs off as products of
//! `(n - h_i)^+`, dispatch two-vertex components to the multiple-edge closed
//! form, and otherwise subtract the contraction from the deletion of one link.
//! Results are memoized on a canonical serialization of the simplified graph.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use dashmap::DashMap;
use thiserror::Error;

use crate::gaingraph::{GainGraph, GainGraphError};
use crate::pluspoly::{PlusTerm, PluspartExpression};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChromaticError {
    #[error("duplicate gain {0} in multiple-edge closed form")]
    DuplicateGain(i64),
}

/// How the engine picks the link to delete and contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkPolicy {
    /// The link with lexicographically smallest `(u, v, |gain|, gain)`.
    Lexicographic,
    /// A pseudo-random link chosen statelessly from a hash of the graph and
    /// the seed; used to exercise elimination-order independence.
    Seeded(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CanonicalForm {
    weights: Vec<i64>,
    edges: Vec<(u32, u32, i64)>,
}

fn canonical_form(g: &GainGraph) -> CanonicalForm {
    let q = g.vertex_count();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by_key(|&v| (g.weights()[v], v));
    let mut position = vec![0usize; q];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let weights = order.iter().map(|&v| g.weights()[v]).collect();
    let mut edges: Vec<(u32, u32, i64)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (position[e.u], position[e.v]);
            if a <= b {
                (a as u32, b as u32, e.gain)
            } else {
                (b as u32, a as u32, -e.gain)
            }
        })
        .collect();
    edges.sort_unstable();
    CanonicalForm { weights, edges }
}

/// Memoizing deletion-contraction engine. Pure and shareable across threads;
/// the cache tolerates concurrent last-writer-wins insertion because values
/// for equal keys coincide.
pub struct ChromaticEngine {
    cache: DashMap<CanonicalForm, PluspartExpression>,
    policy: LinkPolicy,
    parallel: bool,
}

impl Default for ChromaticEngine {
    fn default() -> Self {
        ChromaticEngine::new()
    }
}

impl ChromaticEngine {
    pub fn new() -> ChromaticEngine {
        ChromaticEngine::with_policy(LinkPolicy::Lexicographic)
    }

    pub fn with_policy(policy: LinkPolicy) -> ChromaticEngine {
        ChromaticEngine {
            cache: DashMap::new(),
            policy,
            parallel: false,
        }
    }

    /// Evaluates deletion and contraction branches on the rayon pool.
    pub fn parallel(mut self, yes: bool) -> ChromaticEngine {
        self.parallel = yes;
        self
    }

    pub fn integral_chromatic(&self, g: &GainGraph) -> PluspartExpression {
        let (simplified, has_zero_loop) = g.simplify();
        if has_zero_loop {
            return PluspartExpression::zero();
        }
        if simplified.vertex_count() == 0 {
            return PluspartExpression::one();
        }
        let key = canonical_form(&simplified);
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let result = self.compute(&simplified);
        self.cache.insert(key, result.clone());
        result
    }

    // `g` is simplified and nonempty: no loops, no duplicate parallel links.
    fn compute(&self, g: &GainGraph) -> PluspartExpression {
        let components = g.components();
        if components.len() > 1 {
            return components
                .iter()
                .map(|c| self.integral_chromatic(c))
                .fold(PluspartExpression::one(), |acc, x| acc.multiply(&x));
        }
        if g.edge_count() == 0 {
            let term = PlusTerm::new(1, g.weights().to_vec());
            return PluspartExpression::from_terms([term]);
        }
        if g.vertex_count() == 2 {
            let gains: Vec<i64> = g.edges().iter().map(|e| e.gain).collect();
            return multiple_edge_chromatic((g.weights()[0], g.weights()[1]), &gains)
                .expect("simplified graph has distinct parallel gains");
        }
        let e = self.select_link(g);
        let deleted = g.delete_edge(e).expect("selected edge exists");
        let contracted = g.contract_edge(e).expect("selected edge is a link");
        let (del, con) = if self.parallel {
            rayon::join(
                || self.integral_chromatic(&deleted),
                || self.integral_chromatic(&contracted),
            )
        } else {
            (
                self.integral_chromatic(&deleted),
                self.integral_chromatic(&contracted),
            )
        };
        del.sub(&con)
    }

    fn select_link(&self, g: &GainGraph) -> usize {
        match self.policy {
            LinkPolicy::Lexicographic => g
                .edges()
                .iter()
                .enumerate()
                .min_by_key(|(_, e)| (e.u, e.v, e.gain.unsigned_abs(), e.gain))
                .map(|(i, _)| i)
                .expect("graph has a link"),
            LinkPolicy::Seeded(seed) => {
                let mut hasher = DefaultHasher::new();
                seed.hash(&mut hasher);
                canonical_form(g).hash(&mut hasher);
                (hasher.finish() % g.edge_count() as u64) as usize
            }
        }
    }
}

/// Convenience one-shot computation with the default policy.
pub fn integral_chromatic(g: &GainGraph) -> PluspartExpression {
    ChromaticEngine::new().integral_chromatic(g)
}

/// Closed form for a two-vertex graph whose links carry pairwise distinct
/// gains `M`, oriented from the first vertex to the second:
/// `(n-h1)^+ (n-h2)^+ - sum_{mu >= 0} (n-max(h1+mu, h2))^+
///                    - sum_{mu < 0} (n-max(h1, h2+|mu|))^+`.
pub fn multiple_edge_chromatic(
    weights: (i64, i64),
    gains: &[i64],
) -> Result<PluspartExpression, ChromaticError> {
    let (h1, h2) = weights;
    let mut seen = std::collections::BTreeSet::new();
    for &g in gains {
        if !seen.insert(g) {
            return Err(ChromaticError::DuplicateGain(g));
        }
    }
    let mut terms = vec![PlusTerm::new(1, vec![h1, h2])];
    for &mu in gains {
        let shift = if mu >= 0 {
            (h1.checked_add(mu).expect("weight overflow")).max(h2)
        } else {
            h1.max(
                h2.checked_add(mu.checked_neg().expect("gain overflow"))
                    .expect("weight overflow"),
            )
        };
        terms.push(PlusTerm::new(-1, vec![shift]));
    }
    Ok(PluspartExpression::from_terms(terms))
}

/// Checks the deletion-contraction identity at `e` for all `0 <= n <= n_max`.
/// `e` must index a link of `g`.
pub fn verify_dc_identity(g: &GainGraph, e: usize, n_max: u64) -> Result<bool, GainGraphError> {
    if e >= g.edge_count() {
        return Err(GainGraphError::EdgeOutOfRange {
            index: e,
            edges: g.edge_count(),
        });
    }
    let whole = integral_chromatic(g);
    let deleted = integral_chromatic(&g.delete_edge(e)?);
    let contracted = integral_chromatic(&g.contract_edge(e)?);
    Ok((0..=n_max).all(|n| whole.evaluate(n) == deleted.evaluate(n) - contracted.evaluate(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn queens2() -> GainGraph {
        GainGraph::new(vec![0, 0], [(0, 1, 0), (0, 1, 1), (0, 1, -1)]).unwrap()
    }

    fn bishops2() -> GainGraph {
        GainGraph::new(vec![0, 0], [(0, 1, 1), (0, 1, -1)]).unwrap()
    }

    #[test]
    fn chromatic_queens2() {
        let expr = integral_chromatic(&queens2());
        assert_eq!(
            expr.terms(),
            &[
                PlusTerm::new(1, vec![0, 0]),
                PlusTerm::new(-1, vec![0]),
                PlusTerm::new(-2, vec![1]),
            ]
        );
    }

    #[test]
    fn chromatic_loop_vertex() {
        let g = GainGraph::new(vec![2], [(0, 0, 5)]).unwrap();
        let expr = integral_chromatic(&g);
        assert_eq!(expr.terms(), &[PlusTerm::new(1, vec![2])]);
    }

    #[test]
    fn chromatic_zero_loop_kills() {
        let g = GainGraph::new(vec![0, 0], [(0, 1, 1), (1, 1, 0)]).unwrap();
        assert!(integral_chromatic(&g).is_zero());
    }

    #[test]
    fn multiple_edge_bishops2() {
        let expr = multiple_edge_chromatic((0, 0), &[-1, 1]).unwrap();
        assert_eq!(
            expr.terms(),
            &[PlusTerm::new(1, vec![0, 0]), PlusTerm::new(-2, vec![1])]
        );
    }

    #[test]
    fn multiple_edge_queens2() {
        let expr = multiple_edge_chromatic((0, 0), &[0, 1, -1]).unwrap();
        assert_eq!(expr, integral_chromatic(&queens2()));
    }

    #[test]
    fn multiple_edge_no_constraints() {
        let expr = multiple_edge_chromatic((0, 0), &[]).unwrap();
        assert_eq!(expr.terms(), &[PlusTerm::new(1, vec![0, 0])]);
    }

    #[test]
    fn multiple_edge_rejects_duplicates() {
        assert_eq!(
            multiple_edge_chromatic((0, 0), &[1, 1]).unwrap_err(),
            ChromaticError::DuplicateGain(1)
        );
    }

    #[test]
    fn dc_identity_queens2() {
        let g = queens2();
        let zero = g.edges().iter().position(|e| e.gain == 0).unwrap();
        assert!(verify_dc_identity(&g, zero, 10).unwrap());
    }

    #[test]
    fn dc_identity_bishops2() {
        let g = bishops2();
        let plus = g.edges().iter().position(|e| e.gain == 1).unwrap();
        assert!(verify_dc_identity(&g, plus, 10).unwrap());
    }

    #[test]
    fn dc_identity_rejects_linkless() {
        let g = GainGraph::new(vec![0], []).unwrap();
        assert!(verify_dc_identity(&g, 0, 5).is_err());
    }

    #[test]
    fn two_vertex_closed_form_counts_pairs() {
        // Direct enumeration of h_i < x_i <= n with x2 != x1 + mu.
        let (h1, h2) = (1i64, 3i64);
        let gains = [2i64, -1, 0];
        let expr = multiple_edge_chromatic((h1, h2), &gains).unwrap();
        for n in 0..=12i64 {
            let mut count = 0i128;
            for x1 in (h1 + 1)..=n {
                for x2 in (h2 + 1)..=n {
                    if gains.iter().all(|&mu| x2 != x1 + mu) {
                        count += 1;
                    }
                }
            }
            assert_eq!(expr.evaluate(n as u64), count, "n={n}");
        }
    }
}

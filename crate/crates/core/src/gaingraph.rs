//! Weighted integral gain graphs and their elementary transformations.
//!
//! A gain graph here is an undirected multigraph whose edges carry an integer
//! gain that negates under orientation reversal, plus an integer weight per
//! vertex. Links are stored canonically with the smaller endpoint first, so
//! `(u, v, g)` and `(v, u, -g)` construct identical graphs.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GainGraphError {
    #[error("edge endpoint {index} out of range ({vertices} vertices)")]
    VertexOutOfRange { index: usize, vertices: usize },
    #[error("edge index {index} out of range ({edges} edges)")]
    EdgeOutOfRange { index: usize, edges: usize },
    #[error("switching function has length {got}, expected {expected}")]
    SwitchingLengthMismatch { got: usize, expected: usize },
    #[error("cannot contract a loop (edge index {index})")]
    ContractLoop { index: usize },
}

/// An edge with canonical orientation `u <= v`; the gain is read from `u` to `v`.
/// A loop has `u == v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub gain: i64,
}

impl Edge {
    fn canonical(u: usize, v: usize, gain: i64) -> Edge {
        if u == v {
            // A loop equals its own reversal, so only |gain| is meaningful.
            Edge {
                u,
                v,
                gain: gain.checked_abs().expect("gain overflow"),
            }
        } else if u < v {
            Edge { u, v, gain }
        } else {
            Edge {
                u: v,
                v: u,
                gain: gain.checked_neg().expect("gain overflow"),
            }
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GainGraph {
    weights: Vec<i64>,
    edges: Vec<Edge>,
}

impl GainGraph {
    /// Builds a graph from vertex weights and `(u, v, gain)` triples.
    /// Edges are canonically oriented; no simplification is performed.
    pub fn new(
        weights: Vec<i64>,
        edges: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<GainGraph, GainGraphError> {
        let q = weights.len();
        let mut stored = Vec::new();
        for (u, v, gain) in edges {
            for index in [u, v] {
                if index >= q {
                    return Err(GainGraphError::VertexOutOfRange { index, vertices: q });
                }
            }
            stored.push(Edge::canonical(u, v, gain));
        }
        Ok(GainGraph {
            weights,
            edges: stored,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_link(&self) -> bool {
        self.edges.iter().any(|e| !e.is_loop())
    }

    /// Switches by `eta`: gains become `gain - eta[u] + eta[v]`, weights gain `eta`.
    pub fn switch(&self, eta: &[i64]) -> Result<GainGraph, GainGraphError> {
        if eta.len() != self.weights.len() {
            return Err(GainGraphError::SwitchingLengthMismatch {
                got: eta.len(),
                expected: self.weights.len(),
            });
        }
        let weights = self
            .weights
            .iter()
            .zip(eta)
            .map(|(h, e)| h.checked_add(*e).expect("weight overflow"))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|edge| Edge {
                gain: edge
                    .gain
                    .checked_sub(eta[edge.u])
                    .and_then(|g| g.checked_add(eta[edge.v]))
                    .expect("gain overflow"),
                ..*edge
            })
            .collect();
        Ok(GainGraph { weights, edges })
    }

    /// Removes one edge, leaving everything else unchanged.
    pub fn delete_edge(&self, e: usize) -> Result<GainGraph, GainGraphError> {
        if e >= self.edges.len() {
            return Err(GainGraphError::EdgeOutOfRange {
                index: e,
                edges: self.edges.len(),
            });
        }
        let mut g = self.clone();
        g.edges.remove(e);
        Ok(g)
    }

    /// Contracts a link: the orientation is flipped if needed so the contracted
    /// gain is nonnegative, the tail is switched by that gain, the endpoints
    /// merge into one vertex of weight `max(h_tail + gain, h_head)`, and the
    /// edge disappears. Other edges are re-pointed; a parallel link becomes a loop.
    pub fn contract_edge(&self, e: usize) -> Result<GainGraph, GainGraphError> {
        let edge = *self.edges.get(e).ok_or(GainGraphError::EdgeOutOfRange {
            index: e,
            edges: self.edges.len(),
        })?;
        if edge.is_loop() {
            return Err(GainGraphError::ContractLoop { index: e });
        }
        // Normalize to a nonnegative gain oriented tail -> head.
        let (tail, head, gain) = if edge.gain >= 0 {
            (edge.u, edge.v, edge.gain)
        } else {
            (
                edge.v,
                edge.u,
                edge.gain.checked_neg().expect("gain overflow"),
            )
        };
        let mut eta = vec![0i64; self.weights.len()];
        eta[tail] = gain;
        let switched = self.switch(&eta).expect("eta has matching length");

        let merged_weight = switched.weights[tail].max(switched.weights[head]);
        // Vertex `tail` disappears; indices above it shift down by one.
        let remap = |i: usize| {
            let j = if i == tail { head } else { i };
            if j > tail {
                j - 1
            } else {
                j
            }
        };
        let mut weights = Vec::with_capacity(self.weights.len() - 1);
        for (i, w) in switched.weights.iter().enumerate() {
            if i == tail {
                continue;
            }
            weights.push(if i == head { merged_weight } else { *w });
        }
        let edges = switched
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != e)
            .map(|(_, f)| Edge::canonical(remap(f.u), remap(f.v), f.gain))
            .collect();
        Ok(GainGraph { weights, edges })
    }

    /// Drops nonzero loops, merges parallel links of equal gain, and reports
    /// whether a zero-gain loop was present (zero loops are dropped too; the
    /// flag is the downstream "the chromatic function vanishes" bit).
    pub fn simplify(&self) -> (GainGraph, bool) {
        let mut has_zero_loop = false;
        let mut links: Vec<Edge> = Vec::with_capacity(self.edges.len());
        for edge in &self.edges {
            if edge.is_loop() {
                if edge.gain == 0 {
                    has_zero_loop = true;
                }
            } else {
                links.push(*edge);
            }
        }
        links.sort();
        links.dedup();
        (
            GainGraph {
                weights: self.weights.clone(),
                edges: links,
            },
            has_zero_loop,
        )
    }

    /// Splits into connected components; vertex order and weights are inherited.
    pub fn components(&self) -> Vec<GainGraph> {
        let q = self.weights.len();
        let mut label = vec![usize::MAX; q];
        let mut count = 0;
        for start in 0..q {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = count;
            while let Some(v) = stack.pop() {
                for edge in &self.edges {
                    let other = if edge.u == v {
                        edge.v
                    } else if edge.v == v {
                        edge.u
                    } else {
                        continue;
                    };
                    if label[other] == usize::MAX {
                        label[other] = count;
                        stack.push(other);
                    }
                }
            }
            count += 1;
        }
        let mut result = Vec::with_capacity(count);
        for c in 0..count {
            let vertices: Vec<usize> = (0..q).filter(|&v| label[v] == c).collect();
            let index_of = |v: usize| vertices.iter().position(|&x| x == v).unwrap();
            let weights = vertices.iter().map(|&v| self.weights[v]).collect();
            let edges = self
                .edges
                .iter()
                .filter(|e| label[e.u] == c)
                .map(|e| Edge {
                    u: index_of(e.u),
                    v: index_of(e.v),
                    gain: e.gain,
                })
                .collect();
            result.push(GainGraph { weights, edges });
        }
        result
    }

    /// Maximum gain over all simple paths, both traversal directions included;
    /// a single vertex counts as a path of gain 0. Loops are ignored.
    /// Exact dynamic programming over (visited subset, endpoint) states.
    pub fn max_path_gain(&self) -> i64 {
        let q = self.weights.len();
        assert!(q >= 1, "max_path_gain requires at least one vertex");
        assert!(q <= 24, "subset DP limited to 24 vertices");
        const NEG: i64 = i64::MIN / 4;
        // Best gain per ordered vertex pair; parallel edges collapse to the max.
        let mut adj = vec![NEG; q * q];
        for edge in &self.edges {
            if edge.is_loop() {
                continue;
            }
            let fwd = &mut adj[edge.u * q + edge.v];
            *fwd = (*fwd).max(edge.gain);
            let back = &mut adj[edge.v * q + edge.u];
            *back = (*back).max(edge.gain.checked_neg().expect("gain overflow"));
        }
        let mut dp = vec![NEG; (1usize << q) * q];
        for v in 0..q {
            dp[(1 << v) * q + v] = 0;
        }
        let mut best = 0i64;
        for mask in 1usize..(1 << q) {
            for v in 0..q {
                let cur = dp[mask * q + v];
                if cur == NEG {
                    continue;
                }
                best = best.max(cur);
                for w in 0..q {
                    if mask & (1 << w) != 0 || adj[v * q + w] == NEG {
                        continue;
                    }
                    let next = cur.checked_add(adj[v * q + w]).expect("path gain overflow");
                    let slot = &mut dp[(mask | (1 << w)) * q + w];
                    *slot = (*slot).max(next);
                }
            }
        }
        best
    }
}

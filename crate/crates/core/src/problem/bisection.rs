use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::bitstring::bit_mask;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Weighted graph on vertices `1..=n` (n even). Weights may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxBisectionInstance {
    num_vertices: usize,
    edges: Vec<Edge>,
    masks: Vec<(usize, usize)>,
}

impl MaxBisectionInstance {
    pub fn new(num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if num_vertices == 0 || num_vertices % 2 != 0 {
            return Err(Error::InvalidInstance(format!(
                "num_vertices must be positive and even, got {num_vertices}"
            )));
        }
        let mut seen = HashSet::new();
        let mut canonical = Vec::with_capacity(edges.len());
        for e in edges {
            let (a, b) = if e.a <= e.b { (e.a, e.b) } else { (e.b, e.a) };
            if a == 0 || b > num_vertices || a == b {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) invalid for {num_vertices} vertices",
                    e.a, e.b
                )));
            }
            if !e.weight.is_finite() {
                return Err(Error::InvalidInstance("edge weight must be finite".into()));
            }
            if !seen.insert((a, b)) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({a}, {b})")));
            }
            canonical.push(Edge {
                a,
                b,
                weight: e.weight,
            });
        }
        let masks = canonical
            .iter()
            .map(|e| (bit_mask(num_vertices, e.a), bit_mask(num_vertices, e.b)))
            .collect();
        Ok(MaxBisectionInstance {
            num_vertices,
            edges: canonical,
            masks,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weight between `a` and `b`, zero when not adjacent.
    pub fn weight(&self, a: usize, b: usize) -> f64 {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.edges
            .iter()
            .find(|e| e.a == a && e.b == b)
            .map_or(0.0, |e| e.weight)
    }

    /// Dense symmetric weight matrix, 0-based.
    pub fn weight_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.num_vertices;
        let mut w = vec![vec![0.0; n]; n];
        for e in &self.edges {
            w[e.a - 1][e.b - 1] = e.weight;
            w[e.b - 1][e.a - 1] = e.weight;
        }
        w
    }

    /// `f(x) = Σ w_ab (2 x_a x_b - x_a - x_b)`, i.e. minus the cut weight.
    pub fn cost_index(&self, index: usize) -> f64 {
        let mut f = 0.0;
        for (e, &(ma, mb)) in self.edges.iter().zip(&self.masks) {
            if (index & ma != 0) != (index & mb != 0) {
                f -= e.weight;
            }
        }
        f
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RawBisection {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl TryFrom<RawBisection> for MaxBisectionInstance {
    type Error = Error;

    fn try_from(raw: RawBisection) -> Result<Self> {
        let edges = raw
            .edges
            .into_iter()
            .map(|(a, b, weight)| Edge { a, b, weight })
            .collect();
        MaxBisectionInstance::new(raw.num_vertices, edges)
    }
}

impl From<&MaxBisectionInstance> for RawBisection {
    fn from(inst: &MaxBisectionInstance) -> Self {
        RawBisection {
            num_vertices: inst.num_vertices,
            edges: inst.edges.iter().map(|e| (e.a, e.b, e.weight)).collect(),
        }
    }
}

//! Per-edge probability vectors and confidence intervals.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{argument, Error, Result};
use crate::graph::{EdgeId, Graph};

/// Edge means, one probability per edge id.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(transparent)
)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_unit(&values)?;
        Ok(ProbVector(values))
    }

    pub fn constant(m: usize, p: f64) -> Result<Self> {
        Self::new(vec![p; m])
    }

    /// Weighted-cascade weights: each edge `(u, v)` gets `1 / in_degree(v)`.
    /// Parallel edges count toward the in-degree.
    pub fn weighted_cascade(g: &Graph) -> Self {
        ProbVector(
            g.edges()
                .iter()
                .map(|&(_, v)| 1.0 / g.in_degree(v) as f64)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn from_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(check_unit(&values).is_ok());
        ProbVector(values)
    }

    pub(crate) fn check_len(&self, g: &Graph) -> Result<()> {
        if self.len() != g.edge_count() {
            return Err(argument(format!(
                "probability vector has {} entries, graph has {} edges",
                self.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

impl Index<EdgeId> for ProbVector {
    type Output = f64;
    fn index(&self, e: EdgeId) -> &f64 {
        &self.0[e.index()]
    }
}

/// Per-edge intervals `[lower, upper]` inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalVector {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl IntervalVector {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(argument("lower and upper bounds differ in length"));
        }
        check_unit(&lower)?;
        check_unit(&upper)?;
        if let Some(i) = (0..lower.len()).find(|&i| lower[i] > upper[i]) {
            return Err(argument(format!(
                "interval {i} is empty: [{}, {}]",
                lower[i], upper[i]
            )));
        }
        Ok(IntervalVector { lower, upper })
    }

    /// Every interval is `[0, 1]`.
    pub fn full(m: usize) -> Self {
        IntervalVector {
            lower: vec![0.0; m],
            upper: vec![1.0; m],
        }
    }

    /// Zero-width intervals at `probs`.
    pub fn point(probs: &ProbVector) -> Self {
        IntervalVector {
            lower: probs.as_slice().to_vec(),
            upper: probs.as_slice().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn lower(&self, e: EdgeId) -> f64 {
        self.lower[e.index()]
    }

    pub fn upper(&self, e: EdgeId) -> f64 {
        self.upper[e.index()]
    }

    pub fn lower_bounds(&self) -> ProbVector {
        ProbVector(self.lower.clone())
    }

    pub fn upper_bounds(&self) -> ProbVector {
        ProbVector(self.upper.clone())
    }

    pub fn contains(&self, probs: &ProbVector) -> bool {
        probs.len() == self.len()
            && probs
                .as_slice()
                .iter()
                .enumerate()
                .all(|(i, &p)| self.lower[i] <= p && p <= self.upper[i])
    }

    pub(crate) fn check_len(&self, g: &Graph) -> Result<()> {
        if self.len() != g.edge_count() {
            return Err(argument(format!(
                "interval vector has {} entries, graph has {} edges",
                self.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }
}

fn check_unit(values: &[f64]) -> Result<()> {
    match values.iter().position(|p| !(0.0..=1.0).contains(p)) {
        Some(index) => Err(Error::Range {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}

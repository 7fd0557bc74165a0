use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::canon::canonicalize;
use crate::error::Result;
use crate::graph::Graph;
use crate::work::Work;
use crate::Q;

/// Finite rational combination of canonical graphs. Zero coefficients are
/// never stored and iteration follows the canonical key order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinCombo {
    terms: BTreeMap<Graph, Q>,
}

impl LinCombo {
    pub fn new() -> Self {
        Self::default()
    }

    /// `c * g`, canonicalising `g` first.
    pub fn from_graph(g: &Graph, c: Q) -> Result<Self> {
        let mut l = Self::new();
        l.add_graph(g, c)?;
        Ok(l)
    }

    pub fn single(g: &Graph) -> Result<Self> {
        Self::from_graph(g, Q::from_integer(1.into()))
    }

    pub fn add_graph(&mut self, g: &Graph, c: Q) -> Result<()> {
        let (cg, s) = canonicalize(g)?;
        if s != 0 {
            self.add_canonical(cg, if s < 0 { -c } else { c });
        }
        Ok(())
    }

    /// Adds a term whose graph is already canonical.
    pub fn add_canonical(&mut self, g: Graph, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_work(&mut self, w: &Work, c: &Q) {
        if let Some((g, s)) = w.finish() {
            self.add_canonical(g, if s < 0 { -c.clone() } else { c.clone() });
        }
    }

    pub fn add_scaled(&mut self, other: &LinCombo, c: &Q) {
        for (g, d) in &other.terms {
            self.add_canonical(g.clone(), d * c);
        }
    }

    pub fn add(&mut self, other: &LinCombo) {
        for (g, d) in &other.terms {
            self.add_canonical(g.clone(), d.clone());
        }
    }

    pub fn scaled(&self, c: &Q) -> LinCombo {
        let mut l = LinCombo::new();
        l.add_scaled(self, c);
        l
    }

    pub fn sub(&self, other: &LinCombo) -> LinCombo {
        let mut l = self.clone();
        l.add_scaled(other, &-Q::from_integer(1.into()));
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Graph, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &Graph) -> Q {
        self.terms.get(g).cloned().unwrap_or_else(Q::zero)
    }

    pub fn graphs(&self) -> impl Iterator<Item = &Graph> {
        self.terms.keys()
    }

    /// Sum of absolute values of the coefficients.
    pub fn norm(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c.abs())
    }

    /// Applies a linear map given on basis graphs.
    pub fn map<F>(&self, mut f: F) -> LinCombo
    where
        F: FnMut(&Graph) -> LinCombo,
    {
        let mut out = LinCombo::new();
        for (g, c) in &self.terms {
            out.add_scaled(&f(g), c);
        }
        out
    }

    pub fn retain<F: FnMut(&Graph) -> bool>(&mut self, mut f: F) {
        self.terms.retain(|g, _| f(g));
    }
}

impl FromIterator<(Graph, Q)> for LinCombo {
    fn from_iter<I: IntoIterator<Item = (Graph, Q)>>(iter: I) -> Self {
        let mut l = LinCombo::new();
        for (g, c) in iter {
            l.add_graph(&g, c).expect("valid graph");
        }
        l
    }
}

impl fmt::Display for LinCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){g}")?;
        }
        Ok(())
    }
}

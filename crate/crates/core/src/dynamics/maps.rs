//! Point maps realizing an action on a finite sample.

use std::fmt;

use crate::space::{Geometry, Space};

use super::semigroup::Element;
use super::DynamicsError;

/// `x ↦ s x` on a sample. Returns the image index and the snap distance
/// between the exact image and the sample point chosen.
pub trait PointMap: Send + Sync + fmt::Debug {
    fn apply(&self, space: &Space<f64>, s: &Element, x: usize) -> Result<(usize, f64), DynamicsError>;
}

/// Coordinate scaling `x ↦ factor^n x` for `n ∈ N`, per-coordinate
/// `factor^{t_i}` for integer vectors, and `c x` for real elements; the
/// result snaps to the nearest sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleMap {
    pub factor: f64,
}

impl PointMap for ScaleMap {
    fn apply(&self, space: &Space<f64>, s: &Element, x: usize) -> Result<(usize, f64), DynamicsError> {
        if matches!(space.geometry(), Geometry::FiniteTopology { .. }) {
            return Err(DynamicsError::Incompatible("scale map needs coordinates".into()));
        }
        let c = space.coords(x);
        let image: Vec<f64> = match s {
            Element::Nat(n) => {
                let m = self.factor.powi(*n as i32);
                c.iter().map(|v| v * m).collect()
            }
            Element::Real(r) => c.iter().map(|v| v * r).collect(),
            Element::Ints(t) => {
                if t.len() != c.len() {
                    return Err(DynamicsError::Incompatible(format!(
                        "element {s} has {} entries, point has {} coordinates",
                        t.len(),
                        c.len()
                    )));
                }
                c.iter().zip(t).map(|(v, &k)| v * self.factor.powi(k as i32)).collect()
            }
            Element::Word(_) => return Err(DynamicsError::Incompatible("scale map does not act by words".into())),
        };
        space
            .nearest(&image)
            .ok_or_else(|| DynamicsError::Incompatible("space has no coordinates".into()))
    }
}

/// Generator maps given as index tables; words act letter by letter from
/// the right, and `n ∈ N` acts as the `n`-th iterate of a single generator.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMap {
    pub generators: Vec<Vec<usize>>,
}

impl TableMap {
    pub fn new(generators: Vec<Vec<usize>>, universe: usize) -> Result<Self, DynamicsError> {
        for (g, table) in generators.iter().enumerate() {
            if table.len() != universe || table.iter().any(|&y| y >= universe) {
                return Err(DynamicsError::Incompatible(format!(
                    "generator {g} is not a map of the {universe}-point space"
                )));
            }
        }
        Ok(TableMap { generators })
    }
}

impl PointMap for TableMap {
    fn apply(&self, _space: &Space<f64>, s: &Element, x: usize) -> Result<(usize, f64), DynamicsError> {
        match s {
            Element::Word(w) => {
                let mut y = x;
                for &g in w.iter().rev() {
                    let table = self
                        .generators
                        .get(g as usize)
                        .ok_or_else(|| DynamicsError::ForeignElement(s.to_string()))?;
                    y = table[y];
                }
                Ok((y, 0.0))
            }
            Element::Nat(n) if self.generators.len() == 1 => {
                let mut y = x;
                for _ in 0..*n {
                    y = self.generators[0][y];
                }
                Ok((y, 0.0))
            }
            _ => Err(DynamicsError::Incompatible(format!("table map cannot apply {s}"))),
        }
    }
}

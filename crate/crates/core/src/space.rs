//! Finite discretized phase spaces.
//!
//! A [`Space`] is a finite list of points together with one of three
//! geometries: a metric on coordinate vectors, an explicit finite topology, or
//! a sampled function space whose points are functions evaluated at finitely
//! many arguments (topology induced by the pointwise covering family built on
//! top of it).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pointset::PointSet;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpaceError {
    #[error("space must contain at least one point")]
    Empty,
    #[error("points {first} and {second} have identical coordinates")]
    DuplicatePoint { first: usize, second: usize },
    #[error("metric axiom `{axiom}` violated at points {witness:?}")]
    MetricAxiomViolation { axiom: &'static str, witness: Vec<usize> },
    #[error("coordinate vectors have inconsistent dimension at point {0}")]
    DimensionMismatch(usize),
    #[error("operation requires a metric space")]
    NotMetricSpace,
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("opens {0} and {1} have a union that is not open")]
    NotClosedUnderUnion(usize, usize),
    #[error("opens {0} and {1} have an intersection that is not open")]
    NotClosedUnderIntersection(usize, usize),
    #[error("opens must contain the empty set and the full point set")]
    MissingEmptyOrFull,
    #[error("open set references unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate point id `{0}`")]
    DuplicateId(String),
}

/// Named metric on coordinate vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Euclidean,
    Sup,
}

impl MetricKind {
    pub fn distance<T: Scalar>(self, a: &[T], b: &[T]) -> T {
        match self {
            MetricKind::Euclidean => a
                .iter()
                .zip(b)
                .map(|(&x, &y)| (x - y) * (x - y))
                .fold(T::zero(), |acc, v| acc + v)
                .sqrt(),
            MetricKind::Sup => a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point<T> {
    pub id: String,
    pub coords: Option<Vec<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry<T> {
    Metric(MetricKind),
    FiniteTopology {
        opens: Vec<PointSet>,
    },
    /// Points are functions `E -> E` with `E = R^value_dim`; `coords` hold the
    /// concatenated values at `args`.
    FunctionSpace {
        args: Vec<Vec<T>>,
        value_dim: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Space<T> {
    points: Vec<Point<T>>,
    geometry: Geometry<T>,
}

impl<T: Scalar> Space<T> {
    /// Builds a metric space, checking the metric axioms exhaustively.
    pub fn metric(coords: Vec<Vec<T>>, metric: MetricKind) -> Result<Self, SpaceError> {
        if coords.is_empty() {
            return Err(SpaceError::Empty);
        }
        let dim = coords[0].len();
        if let Some(i) = coords.iter().position(|c| c.len() != dim) {
            return Err(SpaceError::DimensionMismatch(i));
        }
        let points: Vec<Point<T>> = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| Point {
                id: format!("p{i}"),
                coords: Some(c),
            })
            .collect();
        let space = Space {
            points,
            geometry: Geometry::Metric(metric),
        };
        space.check_metric_axioms()?;
        Ok(space)
    }

    /// Evenly spaced one-dimensional grid `start, start + step, ...` with `count` points.
    pub fn grid_1d(start: T, step: T, count: usize) -> Result<Self, SpaceError> {
        let coords = (0..count)
            .map(|i| vec![start + step * T::from_usize(i).unwrap()])
            .collect();
        Self::metric(coords, MetricKind::Euclidean)
    }

    fn check_metric_axioms(&self) -> Result<(), SpaceError> {
        let n = self.len();
        let mut dist = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let d = self.distance(i, j);
                if d < T::zero() || d.is_nan() {
                    return Err(SpaceError::MetricAxiomViolation {
                        axiom: "nonnegativity",
                        witness: vec![i, j],
                    });
                }
                if i == j && d != T::zero() {
                    return Err(SpaceError::MetricAxiomViolation {
                        axiom: "identity",
                        witness: vec![i],
                    });
                }
                if i != j && d == T::zero() {
                    return Err(SpaceError::DuplicatePoint {
                        first: i.min(j),
                        second: i.max(j),
                    });
                }
                dist[i * n + j] = d;
            }
        }
        for i in 0..n {
            for j in 0..i {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(SpaceError::MetricAxiomViolation {
                        axiom: "symmetry",
                        witness: vec![j, i],
                    });
                }
            }
        }
        // rounding slack for sums of computed distances
        let slack = T::one() + T::epsilon() * T::from_f64(16.0).unwrap();
        for i in 0..n {
            for j in 0..n {
                let dij = dist[i * n + j];
                for k in 0..n {
                    if dij > (dist[i * n + k] + dist[k * n + j]) * slack {
                        return Err(SpaceError::MetricAxiomViolation {
                            axiom: "triangle",
                            witness: vec![i, k, j],
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Builds a finite topological space from named points and open sets.
    pub fn finite_topology(ids: Vec<String>, opens: Vec<Vec<String>>) -> Result<Self, SpaceError> {
        if ids.is_empty() {
            return Err(SpaceError::Empty);
        }
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(SpaceError::DuplicateId(id.clone()));
            }
        }
        let n = ids.len();
        let mut sets = Vec::with_capacity(opens.len());
        for open in opens {
            let mut s = PointSet::empty(n);
            for name in open {
                let &i = index.get(&name).ok_or(SpaceError::UnknownPoint(name))?;
                s.insert(i);
            }
            sets.push(s);
        }
        Self::finite_topology_from_sets(ids, sets)
    }

    pub fn finite_topology_from_sets(ids: Vec<String>, opens: Vec<PointSet>) -> Result<Self, SpaceError> {
        if ids.is_empty() {
            return Err(SpaceError::Empty);
        }
        let n = ids.len();
        let mut uniq: Vec<PointSet> = Vec::new();
        for o in opens {
            if !uniq.contains(&o) {
                uniq.push(o);
            }
        }
        uniq.sort_by_key(|s| (s.len(), s.to_vec()));
        if !uniq.iter().any(|s| s.is_empty()) || !uniq.iter().any(|s| s.len() == n) {
            return Err(SpaceError::MissingEmptyOrFull);
        }
        for a in 0..uniq.len() {
            for b in a + 1..uniq.len() {
                if !uniq.contains(&uniq[a].union(&uniq[b])) {
                    return Err(SpaceError::NotClosedUnderUnion(a, b));
                }
                if !uniq.contains(&uniq[a].intersection(&uniq[b])) {
                    return Err(SpaceError::NotClosedUnderIntersection(a, b));
                }
            }
        }
        let points = ids.into_iter().map(|id| Point { id, coords: None }).collect();
        Ok(Space {
            points,
            geometry: Geometry::FiniteTopology { opens: uniq },
        })
    }

    /// Builds a sampled function space. `values[p]` holds the concatenated
    /// values of function `p` at every argument in `args`.
    pub fn function_space(
        ids: Vec<String>,
        values: Vec<Vec<T>>,
        args: Vec<Vec<T>>,
        value_dim: usize,
    ) -> Result<Self, SpaceError> {
        if values.is_empty() {
            return Err(SpaceError::Empty);
        }
        let width = args.len() * value_dim;
        if let Some(i) = values.iter().position(|v| v.len() != width) {
            return Err(SpaceError::DimensionMismatch(i));
        }
        let points = ids
            .into_iter()
            .zip(values)
            .map(|(id, v)| Point { id, coords: Some(v) })
            .collect();
        Ok(Space {
            points,
            geometry: Geometry::FunctionSpace { args, value_dim },
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point<T> {
        &self.points[i]
    }

    pub fn geometry(&self) -> &Geometry<T> {
        &self.geometry
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.points.iter().position(|p| p.id == id)
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn is_metric(&self) -> bool {
        matches!(self.geometry, Geometry::Metric(_))
    }

    /// Distance between two points. Metric spaces use their metric; function
    /// spaces use the supremum over arguments of the Euclidean distance of
    /// values. Finite topologies report zero on the diagonal and infinity
    /// elsewhere.
    pub fn distance(&self, a: usize, b: usize) -> T {
        match &self.geometry {
            Geometry::Metric(kind) => kind.distance(self.coords(a), self.coords(b)),
            Geometry::FunctionSpace { value_dim, .. } => sup_value_distance(self.coords(a), self.coords(b), *value_dim),
            Geometry::FiniteTopology { .. } => {
                if a == b {
                    T::zero()
                } else {
                    T::infinity()
                }
            }
        }
    }

    /// Distance from a point to raw coordinates (same layout as point coords).
    pub fn distance_to_coords(&self, a: usize, coords: &[T]) -> Option<T> {
        match &self.geometry {
            Geometry::Metric(kind) => Some(kind.distance(self.coords(a), coords)),
            Geometry::FunctionSpace { value_dim, .. } => Some(sup_value_distance(self.coords(a), coords, *value_dim)),
            Geometry::FiniteTopology { .. } => None,
        }
    }

    /// Nearest sample point to `coords` and its distance. Ties resolve to the
    /// lowest index.
    pub fn nearest(&self, coords: &[T]) -> Option<(usize, T)> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.len() {
            let d = self.distance_to_coords(i, coords)?;
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
                if d == T::zero() {
                    break;
                }
            }
        }
        best
    }

    pub fn coords(&self, i: usize) -> &[T] {
        self.points[i].coords.as_deref().expect("point has no coordinates")
    }

    /// Open ball `{y : d(center, y) < radius}`.
    pub fn ball(&self, center: usize, radius: T) -> Result<PointSet, SpaceError> {
        if !self.is_metric() {
            return Err(SpaceError::NotMetricSpace);
        }
        if !(radius > T::zero()) {
            return Err(SpaceError::NonPositiveRadius);
        }
        Ok(PointSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&y| self.distance(center, y) < radius),
        ))
    }

    /// The basic open sets used to test the star-basis axiom: all opens of a
    /// finite topology, singletons of a finite metric sample (which is
    /// discrete), and nothing for function spaces (their topology is the one
    /// induced by the covering family itself).
    pub fn test_opens(&self) -> Vec<PointSet> {
        match &self.geometry {
            Geometry::FiniteTopology { opens } => opens.clone(),
            Geometry::Metric(_) => (0..self.len()).map(|p| PointSet::singleton(self.len(), p)).collect(),
            Geometry::FunctionSpace { .. } => Vec::new(),
        }
    }

    pub fn opens(&self) -> Option<&[PointSet]> {
        match &self.geometry {
            Geometry::FiniteTopology { opens } => Some(opens),
            _ => None,
        }
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        match &self.geometry {
            Geometry::FiniteTopology { opens } => opens.contains(set),
            _ => true,
        }
    }

    /// Topological closure computed from the opens of a finite topology.
    pub fn topological_closure(&self, set: &PointSet) -> Option<PointSet> {
        let opens = self.opens()?;
        let mut outside = self.empty_set();
        for o in opens {
            if !o.intersects(set) {
                outside.union_with(o);
            }
        }
        Some(outside.complement())
    }

    /// Closed sets of a finite topology.
    pub fn closed_sets(&self) -> Option<Vec<PointSet>> {
        Some(self.opens()?.iter().map(PointSet::complement).collect())
    }

    /// A finite topology is Hausdorff iff it is discrete.
    pub fn is_hausdorff(&self) -> bool {
        match &self.geometry {
            Geometry::FiniteTopology { opens } => {
                (0..self.len()).all(|p| opens.contains(&PointSet::singleton(self.len(), p)))
            }
            _ => true,
        }
    }

    /// Largest distance between sample points (metric and function spaces).
    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for i in 0..self.len() {
            for j in 0..i {
                d = d.max(self.distance(i, j));
            }
        }
        d
    }
}

fn sup_value_distance<T: Scalar>(a: &[T], b: &[T], value_dim: usize) -> T {
    a.chunks(value_dim.max(1))
        .zip(b.chunks(value_dim.max(1)))
        .map(|(x, y)| MetricKind::Euclidean.distance(x, y))
        .fold(T::zero(), T::max)
}

//! Finite models of function spaces `E^E`: points are functions recorded by
//! their values on a finite argument list, coverings are the pointwise
//! families `U_α^ε`, and actions are computed exactly on model parameters.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::covering::{AdmissibleFamily, Covering, CoveringError};
use crate::dynamics::{DynamicsError, Element, PointMap};
use crate::pointset::PointSet;
use crate::space::{Geometry, Space, SpaceError};

/// One level of a pointwise family: constrained argument indices and radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseLevel {
    pub args: Vec<usize>,
    pub eps: f64,
}

/// Members `{f : ‖f(z_j) - c_j‖ < eps for every constrained j}` with each
/// `c_j` ranging over the sampled values at `z_j`; unconstrained arguments
/// are free.
pub fn pointwise_covering(space: &Space<f64>, level: &PointwiseLevel) -> Result<Covering, CoveringError> {
    let (nargs, dim) = match space.geometry() {
        Geometry::FunctionSpace { args, value_dim } => (args.len(), *value_dim),
        _ => return Err(CoveringError::Space(SpaceError::NotMetricSpace)),
    };
    let n = space.len();
    let mut members = vec![PointSet::full(n)];
    for &j in &level.args {
        if j >= nargs {
            return Err(CoveringError::Space(SpaceError::DimensionMismatch(j)));
        }
        let value = |p: usize| &space.coords(p)[j * dim..(j + 1) * dim];
        let mut centers: Vec<&[f64]> = Vec::new();
        for p in 0..n {
            let v = value(p);
            if !centers.contains(&v) {
                centers.push(v);
            }
        }
        let balls: Vec<PointSet> = centers
            .iter()
            .map(|c| PointSet::from_indices(n, (0..n).filter(|&p| euclid(value(p), c) < level.eps)))
            .collect();
        let mut next = Vec::new();
        for m in &members {
            for b in &balls {
                let i = m.intersection(b);
                if !i.is_empty() && !next.contains(&i) {
                    next.push(i);
                }
            }
        }
        members = next;
    }
    Covering::new(n, members)
}

pub fn pointwise_family(space: &Space<f64>, levels: &[PointwiseLevel]) -> Result<AdmissibleFamily, CoveringError> {
    if levels.is_empty() {
        return Err(CoveringError::EmptyFamily);
    }
    let coverings = levels
        .iter()
        .map(|l| pointwise_covering(space, l))
        .collect::<Result<Vec<_>, _>>()?;
    AdmissibleFamily::chain(coverings)
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Parametric function families with an exactly computable action.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FunctionModel {
    /// Diagonal maps `f(x) = (c_1 x_1, c_2 x_2)` with `c_i ∈ {0} ∪ {2^e : min_exp <= e <= max_exp}`;
    /// `t f` has coefficients `2^{-t_i} c_i`, set to zero below `2^min_exp`.
    ExpDecay { min_exp: i32, max_exp: i32 },
    /// Affine contractions `f(z) = x_f + L^m (z - x_f)` for `x_f ∈ fixed`,
    /// `1 <= m <= max_power`, plus the constants `i(x_f)`; `n f = f^n`, with
    /// exponents beyond `max_power` collapsing to the constant.
    IteratedContractions {
        fixed: Vec<f64>,
        lipschitz: f64,
        max_power: u32,
        args: Vec<f64>,
    },
    /// Affine maps `f(z) = v_0 + (v_1 - v_0) z` recorded by `(f(0), f(1)) =
    /// (x0 + w_0, x0 + w_1)` with `w_i ∈ {0} ∪ {±2^-e : e <= max_exp}` and
    /// `|w_1 - w_0| <= lipschitz`; `T f = x0 + c (f - x0)`, snapped to the
    /// nearest grid value, ties toward zero.
    Composition { x0: f64, lipschitz: f64, max_exp: i32 },
}

/// A sampled function space together with the action it carries.
#[derive(Debug, Clone)]
pub struct FunctionSample {
    pub ids: Vec<String>,
    pub values: Vec<Vec<f64>>,
    pub args: Vec<Vec<f64>>,
    pub value_dim: usize,
    pub map: ModelMap,
}

/// The model's action with direct index lookup.
#[derive(Debug, Clone)]
pub struct ModelMap {
    model: FunctionModel,
    index: HashMap<(i64, i64), usize>,
    /// Parameters of every point, in point order.
    params: Vec<(i64, i64)>,
}

fn dyadic_label(e: i32) -> String {
    format!("2^{e}")
}

fn grid_label(w: f64) -> String {
    if w == 0.0 {
        "0".into()
    } else {
        format!("{w}")
    }
}

impl FunctionModel {
    pub fn sample(&self) -> Result<FunctionSample, SpaceError> {
        let mut ids = Vec::new();
        let mut values = Vec::new();
        let mut params = Vec::new();
        let (args, value_dim) = match self {
            FunctionModel::ExpDecay { min_exp, max_exp } => {
                if min_exp > max_exp {
                    return Err(SpaceError::Empty);
                }
                // Parameter 0 is the zero coefficient, p >= 1 is 2^(min_exp + p - 1).
                let count = (max_exp - min_exp + 2) as i64;
                let coef = |p: i64| {
                    if p == 0 {
                        0.0
                    } else {
                        2f64.powi(*min_exp + p as i32 - 1)
                    }
                };
                let label = |p: i64| {
                    if p == 0 {
                        "0".to_string()
                    } else {
                        dyadic_label(*min_exp + p as i32 - 1)
                    }
                };
                for a in 0..count {
                    for b in 0..count {
                        ids.push(format!("f[{},{}]", label(a), label(b)));
                        values.push(vec![0.0, 0.0, coef(a), coef(b)]);
                        params.push((a, b));
                    }
                }
                (vec![vec![0.0, 0.0], vec![1.0, 1.0]], 2)
            }
            FunctionModel::IteratedContractions {
                fixed,
                lipschitz,
                max_power,
                args,
            } => {
                if fixed.is_empty() || args.is_empty() {
                    return Err(SpaceError::Empty);
                }
                // Parameter (i, m): fixed point i, slope L^m; m = 0 is the constant.
                for (i, &xf) in fixed.iter().enumerate() {
                    for m in (1..=*max_power as i64).chain(std::iter::once(0)) {
                        let slope = if m == 0 { 0.0 } else { lipschitz.powi(m as i32) };
                        ids.push(if m == 0 {
                            format!("i({xf})")
                        } else {
                            format!("f[{xf},L^{m}]")
                        });
                        values.push(args.iter().map(|z| xf + slope * (z - xf)).collect());
                        params.push((i as i64, m));
                    }
                }
                (args.iter().map(|&z| vec![z]).collect(), 1)
            }
            FunctionModel::Composition { x0, lipschitz, max_exp } => {
                let grid = composition_grid(*max_exp);
                for (a, &w0) in grid.iter().enumerate() {
                    for (b, &w1) in grid.iter().enumerate() {
                        if (w1 - w0).abs() <= *lipschitz {
                            ids.push(format!("f[{},{}]", grid_label(w0), grid_label(w1)));
                            values.push(vec![x0 + w0, x0 + w1]);
                            params.push((a as i64, b as i64));
                        }
                    }
                }
                (vec![vec![0.0], vec![1.0]], 1)
            }
        };
        let index = params.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        Ok(FunctionSample {
            ids,
            values,
            args,
            value_dim,
            map: ModelMap {
                model: self.clone(),
                index,
                params,
            },
        })
    }

    /// Builds the sampled space and its action.
    pub fn build(&self) -> Result<(Space<f64>, ModelMap), SpaceError> {
        let s = self.sample()?;
        let space = Space::function_space(s.ids, s.values, s.args, s.value_dim)?;
        Ok((space, s.map))
    }
}

/// `{0} ∪ {±2^-e : 0 <= e <= max_exp}` in increasing order.
pub fn composition_grid(max_exp: i32) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=max_exp).map(|e| -(2f64.powi(-e))).collect();
    g.push(0.0);
    g.extend((0..=max_exp).rev().map(|e| 2f64.powi(-e)));
    g
}

/// Nearest grid index, ties toward the smaller magnitude.
fn snap_to_grid(grid: &[f64], v: f64) -> usize {
    let mut best = 0;
    for (i, &g) in grid.iter().enumerate() {
        let d = (g - v).abs();
        let bd = (grid[best] - v).abs();
        if d < bd || (d == bd && g.abs() < grid[best].abs()) {
            best = i;
        }
    }
    best
}

impl ModelMap {
    pub fn model(&self) -> &FunctionModel {
        &self.model
    }

    fn lookup(&self, p: (i64, i64), s: &Element) -> Result<usize, DynamicsError> {
        self.index
            .get(&p)
            .copied()
            .ok_or_else(|| DynamicsError::Incompatible(format!("{s} leaves the sampled function family")))
    }
}

impl PointMap for ModelMap {
    fn apply(&self, space: &Space<f64>, s: &Element, x: usize) -> Result<(usize, f64), DynamicsError> {
        let (a, b) = self.params[x];
        let y = match (&self.model, s) {
            (FunctionModel::ExpDecay { .. }, Element::Ints(t)) if t.len() == 2 => {
                let shift = |p: i64, t: i64| if p == 0 || p - t < 1 { 0 } else { p - t };
                self.lookup((shift(a, t[0]), shift(b, t[1])), s)?
            }
            (FunctionModel::IteratedContractions { max_power, .. }, Element::Nat(n)) => {
                let prod = b.saturating_mul(*n as i64);
                let m = if prod > *max_power as i64 { 0 } else { prod };
                self.lookup((a, m), s)?
            }
            (FunctionModel::Composition { max_exp, .. }, Element::Real(c)) => {
                let grid = composition_grid(*max_exp);
                let na = snap_to_grid(&grid, c * grid[a as usize]);
                let nb = snap_to_grid(&grid, c * grid[b as usize]);
                self.lookup((na as i64, nb as i64), s)?
            }
            _ => {
                return Err(DynamicsError::Incompatible(format!(
                    "element {s} does not act on this function model"
                )))
            }
        };
        let exact = self.exact_image(space, s, x);
        let err = space.distance_to_coords(y, &exact).unwrap_or(0.0);
        Ok((y, err))
    }
}

impl ModelMap {
    /// Values of `s x` before snapping.
    fn exact_image(&self, space: &Space<f64>, s: &Element, x: usize) -> Vec<f64> {
        let v = space.coords(x);
        match (&self.model, s) {
            (FunctionModel::ExpDecay { .. }, Element::Ints(t)) => {
                vec![0.0, 0.0, v[2] * 2f64.powi(-t[0] as i32), v[3] * 2f64.powi(-t[1] as i32)]
            }
            (
                FunctionModel::IteratedContractions {
                    fixed, lipschitz, args, ..
                },
                Element::Nat(n),
            ) => {
                let (i, m) = self.params[x];
                let xf = fixed[i as usize];
                let slope = if m == 0 {
                    0.0
                } else {
                    lipschitz.powi((m * *n as i64) as i32)
                };
                args.iter().map(|z| xf + slope * (z - xf)).collect()
            }
            (FunctionModel::Composition { x0, .. }, Element::Real(c)) => v.iter().map(|f| x0 + c * (f - x0)).collect(),
            _ => v.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_decay_shape() {
        let (space, map) = FunctionModel::ExpDecay {
            min_exp: -6,
            max_exp: 13,
        }
        .build()
        .unwrap();
        assert_eq!(space.len(), 441);
        let f12 = space.index_of("f[2^13,2^13]").unwrap();
        let (y, err) = map.apply(&space, &Element::Ints(vec![12, 12]), f12).unwrap();
        assert_eq!(space.point(y).id, "f[2^1,2^1]");
        assert_eq!(err, 0.0);
        let small = space.index_of("f[2^-6,0]").unwrap();
        let (y, err) = map.apply(&space, &Element::Ints(vec![1, 0]), small).unwrap();
        assert_eq!(space.point(y).id, "f[0,0]");
        assert_eq!(err, 2f64.powi(-7));
    }

    #[test]
    fn contraction_powers_collapse() {
        let model = FunctionModel::IteratedContractions {
            fixed: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            lipschitz: 0.5,
            max_power: 7,
            args: vec![-1.0, 2.0],
        };
        let (space, map) = model.build().unwrap();
        assert_eq!(space.len(), 40);
        let f = space.index_of("f[1,L^1]").unwrap();
        let (y, err) = map.apply(&space, &Element::Nat(8), f).unwrap();
        assert_eq!(space.point(y).id, "i(1)");
        assert!((err - 2.0 * 0.5f64.powi(8)).abs() < 1e-15);
        let (y, _) = map.apply(&space, &Element::Nat(3), f).unwrap();
        assert_eq!(space.point(y).id, "f[1,L^3]");
    }

    #[test]
    fn composition_rounds_toward_zero() {
        let model = FunctionModel::Composition {
            x0: 0.0,
            lipschitz: 1.0,
            max_exp: 6,
        };
        let (space, map) = model.build().unwrap();
        let f = space.index_of("f[0.015625,-0.015625]").unwrap();
        let (y, err) = map.apply(&space, &Element::real(0.5), f).unwrap();
        assert_eq!(space.point(y).id, "f[0,0]");
        assert_eq!(err, 2f64.powi(-7));
    }

    #[test]
    fn pointwise_star_matches_centre_rule() {
        let model = FunctionModel::Composition {
            x0: 0.0,
            lipschitz: 1.0,
            max_exp: 3,
        };
        let (space, _) = model.build().unwrap();
        let level = PointwiseLevel {
            args: vec![0, 1],
            eps: 0.2,
        };
        let cov = pointwise_covering(&space, &level).unwrap();
        for g in 0..space.len() {
            for f in 0..space.len() {
                let direct = (0..2).all(|j| {
                    (0..space.len()).any(|h| {
                        (space.coords(f)[j] - space.coords(h)[j]).abs() < 0.2
                            && (space.coords(g)[j] - space.coords(h)[j]).abs() < 0.2
                    })
                });
                assert_eq!(cov.point_star(g).contains(f), direct);
            }
        }
    }
}

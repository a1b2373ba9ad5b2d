//! Cubes, disjoint cube families and piecewise-constant grid functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when deciding whether two cube faces touch or whether
/// a coordinate sits on a cell boundary.
const GEOM_EPS: f64 = 1e-12;

/// Axis-aligned cube `corner + [0, side)^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cube {
    pub corner: Vec<f64>,
    pub side: f64,
}

impl Cube {
    pub fn new(corner: Vec<f64>, side: f64) -> Result<Self> {
        if corner.is_empty() {
            return Err(Error::Shape("cube needs at least one coordinate".into()));
        }
        if !(side > 0.0) || !side.is_finite() {
            return Err(Error::Domain(format!("cube side must be positive, got {side}")));
        }
        if corner.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("cube corner must be finite".into()));
        }
        Ok(Cube { corner, side })
    }

    /// The cube `(-half, half)^n`.
    pub fn centered(dim: usize, half: f64) -> Result<Self> {
        Cube::new(vec![-half; dim], 2.0 * half)
    }

    /// The unit cube `(0,1)^n`.
    pub fn unit(dim: usize) -> Self {
        Cube { corner: vec![0.0; dim], side: 1.0 }
    }

    pub fn dim(&self) -> usize {
        self.corner.len()
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.dim() as i32)
    }

    pub fn center(&self) -> Vec<f64> {
        self.corner.iter().map(|c| c + 0.5 * self.side).collect()
    }

    /// Closed-cube membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        let slack = GEOM_EPS * self.side.max(1.0);
        x.len() == self.dim()
            && self
                .corner
                .iter()
                .zip(x)
                .all(|(&a, &xi)| xi >= a - slack && xi <= a + self.side + slack)
    }

    /// Open-cube membership.
    pub fn contains_open(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && self
                .corner
                .iter()
                .zip(x)
                .all(|(&a, &xi)| xi > a && xi < a + self.side)
    }

    /// True if the interiors of the two cubes intersect.
    pub fn interiors_overlap(&self, other: &Cube) -> bool {
        let slack = GEOM_EPS * self.side.max(other.side).max(1.0);
        self.corner.iter().zip(&other.corner).all(|(&a, &b)| {
            a + self.side > b + slack && b + other.side > a + slack
        })
    }

    /// True if `other` lies inside `self` (closed containment).
    pub fn contains_cube(&self, other: &Cube) -> bool {
        let slack = GEOM_EPS * self.side.max(1.0);
        self.corner.iter().zip(&other.corner).all(|(&a, &b)| {
            b >= a - slack && b + other.side <= a + self.side + slack
        })
    }

    /// Largest Euclidean norm of a point in the closed cube.
    pub fn max_norm(&self) -> f64 {
        self.corner
            .iter()
            .map(|&a| a.abs().max((a + self.side).abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Smallest Euclidean norm of a point in the closed cube.
    pub fn min_norm(&self) -> f64 {
        self.corner
            .iter()
            .map(|&a| nearest_to_zero(a, a + self.side).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

pub(crate) fn nearest_to_zero(lo: f64, hi: f64) -> f64 {
    if lo >= 0.0 {
        lo
    } else if hi <= 0.0 {
        hi
    } else {
        0.0
    }
}

/// Finite collection of cubes with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CubeFamily {
    cubes: Vec<Cube>,
}

impl CubeFamily {
    pub fn new(cubes: Vec<Cube>) -> Result<Self> {
        if let Some(first) = cubes.first() {
            let dim = first.dim();
            if cubes.iter().any(|c| c.dim() != dim) {
                return Err(Error::Shape("cubes of a family must share a dimension".into()));
            }
        }
        // sweep along the first axis so that only candidates that can overlap
        // in x_0 are compared
        let mut order: Vec<usize> = (0..cubes.len()).collect();
        order.sort_by(|&a, &b| cubes[a].corner[0].total_cmp(&cubes[b].corner[0]));
        for (pos, &i) in order.iter().enumerate() {
            let end = cubes[i].corner[0] + cubes[i].side;
            for &j in &order[pos + 1..] {
                if cubes[j].corner[0] >= end {
                    break;
                }
                if cubes[i].interiors_overlap(&cubes[j]) {
                    return Err(Error::Family(format!(
                        "cubes {i} ({:?}, side {}) and {j} ({:?}, side {}) overlap",
                        cubes[i].corner, cubes[i].side, cubes[j].corner, cubes[j].side
                    )));
                }
            }
        }
        Ok(CubeFamily { cubes })
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn total_volume(&self) -> f64 {
        self.cubes.iter().map(Cube::volume).sum()
    }
}

impl<'de> Deserialize<'de> for CubeFamily {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            cubes: Vec<Cube>,
        }
        let raw = Raw::deserialize(de)?;
        CubeFamily::new(raw.cubes).map_err(serde::de::Error::custom)
    }
}

/// Piecewise-constant function on a cube, stored as `m^n` cell values in
/// row-major order (first coordinate slowest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub cube: Cube,
    pub cells_per_side: usize,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(cube: Cube, cells_per_side: usize, values: Vec<f64>) -> Result<Self> {
        if cells_per_side == 0 {
            return Err(Error::Shape("cells_per_side must be at least 1".into()));
        }
        let expected = cell_count(cube.dim(), cells_per_side)?;
        if values.len() != expected {
            return Err(Error::Shape(format!(
                "expected {expected} cell values for m = {cells_per_side}, n = {}, got {}",
                cube.dim(),
                values.len()
            )));
        }
        Ok(GridFunction { cube, cells_per_side, values })
    }

    pub fn constant(cube: Cube, cells_per_side: usize, value: f64) -> Result<Self> {
        let count = cell_count(cube.dim(), cells_per_side)?;
        GridFunction::new(cube, cells_per_side, vec![value; count])
    }

    /// Samples `f` at every cell center.
    pub fn from_fn<F>(cube: Cube, cells_per_side: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64,
    {
        let count = cell_count(cube.dim(), cells_per_side)?;
        let mut point = vec![0.0; cube.dim()];
        let mut values = Vec::with_capacity(count);
        for idx in 0..count {
            cell_center_into(&cube, cells_per_side, idx, &mut point);
            values.push(f(&point));
        }
        GridFunction::new(cube, cells_per_side, values)
    }

    /// Same as [`GridFunction::from_fn`] for fallible samplers.
    pub fn try_from_fn<F>(cube: Cube, cells_per_side: usize, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<f64>,
    {
        let count = cell_count(cube.dim(), cells_per_side)?;
        let mut point = vec![0.0; cube.dim()];
        let mut values = Vec::with_capacity(count);
        for idx in 0..count {
            cell_center_into(&cube, cells_per_side, idx, &mut point);
            values.push(f(&point)?);
        }
        GridFunction::new(cube, cells_per_side, values)
    }

    pub fn dim(&self) -> usize {
        self.cube.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_side(&self) -> f64 {
        self.cube.side / self.cells_per_side as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.cube.volume() / self.values.len() as f64
    }

    /// `cell volume × Σ values`.
    pub fn integral(&self) -> f64 {
        self.cell_volume() * self.values.iter().sum::<f64>()
    }

    pub fn cell_center(&self, idx: usize) -> Vec<f64> {
        let mut point = vec![0.0; self.dim()];
        cell_center_into(&self.cube, self.cells_per_side, idx, &mut point);
        point
    }

    /// Multi-index of a flat cell index.
    pub fn cell_coords(&self, idx: usize) -> Vec<usize> {
        unravel(idx, self.dim(), self.cells_per_side)
    }

    pub fn flat_index(&self, coords: &[usize]) -> usize {
        ravel(coords, self.cells_per_side)
    }

    /// Index of the cell containing `x` (closed cube; points on the upper
    /// face belong to the last cell).
    pub fn cell_of(&self, x: &[f64]) -> Option<usize> {
        if !self.cube.contains(x) {
            return None;
        }
        let m = self.cells_per_side;
        let h = self.cell_side();
        let coords: Vec<usize> = self
            .cube
            .corner
            .iter()
            .zip(x)
            .map(|(&a, &xi)| (((xi - a) / h).floor().max(0.0) as usize).min(m - 1))
            .collect();
        Some(ravel(&coords, m))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            cube: self.cube.clone(),
            cells_per_side: self.cells_per_side,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn abs(&self) -> GridFunction {
        self.map(f64::abs)
    }

    pub fn scale(&self, c: f64) -> GridFunction {
        self.map(|v| c * v)
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.cells_per_side == other.cells_per_side && self.cube == other.cube
    }

    pub fn ensure_same_grid(&self, other: &GridFunction) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "grid mismatch: (cube {:?}/{}, m = {}) vs (cube {:?}/{}, m = {})",
                self.cube.corner,
                self.cube.side,
                self.cells_per_side,
                other.cube.corner,
                other.cube.side,
                other.cells_per_side
            )))
        }
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        self.ensure_same_grid(other)?;
        Ok(GridFunction {
            cube: self.cube.clone(),
            cells_per_side: self.cells_per_side,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Number of whole cells covered by a fraction `lam` of the cube, if the
    /// fraction is cell-aligned.
    pub fn aligned_cell_count(&self, lam: f64) -> Option<usize> {
        aligned_count(lam, self.len())
    }

    /// Cell index range (per axis, half-open) covered by `sub`, if `sub` is
    /// made of whole cells of this grid.
    pub fn aligned_block(&self, sub: &Cube) -> Option<Vec<(usize, usize)>> {
        if sub.dim() != self.dim() || !self.cube.contains_cube(sub) {
            return None;
        }
        let h = self.cell_side();
        let width = snap(sub.side / h)?;
        if width == 0 {
            return None;
        }
        self.cube
            .corner
            .iter()
            .zip(&sub.corner)
            .map(|(&a, &b)| snap((b - a) / h).map(|start| (start, start + width)))
            .collect()
    }
}

/// Rounds `x` to the nearest non-negative integer if it is within rounding
/// noise of one.
pub(crate) fn snap(x: f64) -> Option<usize> {
    let r = x.round();
    if r >= 0.0 && (x - r).abs() <= 1e-9 * r.max(1.0) {
        Some(r as usize)
    } else {
        None
    }
}

pub(crate) fn aligned_count(lam: f64, total: usize) -> Option<usize> {
    if !(0.0..=1.0).contains(&lam) {
        return None;
    }
    snap(lam * total as f64)
}

pub(crate) fn cell_count(dim: usize, m: usize) -> Result<usize> {
    u32::try_from(dim)
        .ok()
        .and_then(|d| m.checked_pow(d))
        .ok_or_else(|| Error::Shape(format!("grid with m = {m}, n = {dim} is too large")))
}

pub(crate) fn unravel(mut idx: usize, dim: usize, m: usize) -> Vec<usize> {
    let mut coords = vec![0; dim];
    for d in (0..dim).rev() {
        coords[d] = idx % m;
        idx /= m;
    }
    coords
}

pub(crate) fn ravel(coords: &[usize], m: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * m + c)
}

fn cell_center_into(cube: &Cube, m: usize, mut idx: usize, out: &mut [f64]) {
    let h = cube.side / m as f64;
    for d in (0..cube.dim()).rev() {
        let c = idx % m;
        idx /= m;
        out[d] = cube.corner[d] + (c as f64 + 0.5) * h;
    }
}

use alloc::vec::Vec;

use super::relay::{evaluate_relay, RelayObjective};
use crate::error::{Error, Result};
use crate::geometry::{ChannelParams, Network};
use crate::math;
use crate::rates::RateMode;

/// Axis-aligned box of candidate relay positions.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if !(1..=3).contains(&lower.len()) {
            return Err(Error::InvalidDimension(lower.len()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteCoordinate);
        }
        if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
            return Err(Error::EmptyFeasibleSet);
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn diagonal(&self) -> f64 {
        math::sqrt(
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(l, u)| (u - l) * (u - l))
                .sum(),
        )
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }

    /// The `i`-th of `n` evenly spaced values on axis `axis`, endpoints included.
    pub fn axis_value(&self, axis: usize, i: usize, n: usize) -> f64 {
        let (l, u) = (self.lower[axis], self.upper[axis]);
        if i + 1 == n {
            return u;
        }
        l + (u - l) * (i as f64 / (n - 1) as f64)
    }
}

fn check_resolution(b: &SearchBox, resolution: &[usize]) -> Result<()> {
    if resolution.len() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: resolution.len(),
        });
    }
    if resolution.iter().any(|&r| r < 2) {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: "need at least 2 points per axis",
        });
    }
    Ok(())
}

/// Grid points in row-major order: the first coordinate varies slowest.
pub fn grid_points(b: &SearchBox, resolution: &[usize]) -> Result<Vec<Vec<f64>>> {
    check_resolution(b, resolution)?;
    let total: usize = resolution.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = alloc::vec![0usize; resolution.len()];
    for _ in 0..total {
        out.push(
            idx.iter()
                .enumerate()
                .map(|(axis, &i)| b.axis_value(axis, i, resolution[axis]))
                .collect(),
        );
        for axis in (0..idx.len()).rev() {
            idx[axis] += 1;
            if idx[axis] < resolution[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
    Ok(out)
}

/// Values of an objective on a regular grid; `None` marks cells that could not be evaluated.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    bounds: SearchBox,
    resolution: Vec<usize>,
    values: Vec<Option<f64>>,
}

impl Grid {
    pub fn from_fn<F>(bounds: SearchBox, resolution: &[usize], mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Option<f64>,
    {
        let values = grid_points(&bounds, resolution)?
            .iter()
            .map(|x| f(x))
            .collect();
        Ok(Self {
            bounds,
            resolution: resolution.to_vec(),
            values,
        })
    }

    /// Wraps values computed elsewhere (e.g. in parallel) in row-major order.
    pub fn from_values(
        bounds: SearchBox,
        resolution: &[usize],
        values: Vec<Option<f64>>,
    ) -> Result<Self> {
        check_resolution(&bounds, resolution)?;
        let total: usize = resolution.iter().product();
        if values.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: values.len(),
            });
        }
        Ok(Self {
            bounds,
            resolution: resolution.to_vec(),
            values,
        })
    }

    pub fn bounds(&self) -> &SearchBox {
        &self.bounds
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn dim(&self) -> usize {
        self.resolution.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    /// Flat index of a multi-index.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.resolution)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = alloc::vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            idx[axis] = flat % self.resolution[axis];
            flat /= self.resolution[axis];
        }
        idx
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(axis, &i)| self.bounds.axis_value(axis, i, self.resolution[axis]))
            .collect()
    }

    pub fn value_at(&self, idx: &[usize]) -> Option<f64> {
        self.values[self.flat_index(idx)]
    }

    /// Largest valid value and its flat index; ties go to the earliest cell.
    pub fn max(&self) -> Option<(usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .fold(None, |best, (i, v)| match (best, v) {
                (None, Some(v)) => Some((i, *v)),
                (Some((_, b)), Some(v)) if *v > b => Some((i, *v)),
                (best, _) => best,
            })
    }
}

/// Evaluates a relay objective on every grid cell. Cells where the objective cannot be
/// evaluated (the relay sits on a node) are marked invalid rather than failing the sweep.
pub fn sweep_grid(
    objective: &RelayObjective,
    network: &Network,
    params: &ChannelParams,
    bounds: &SearchBox,
    resolution: &[usize],
    mode: RateMode,
) -> Result<Grid> {
    if bounds.dim() != network.dim() {
        return Err(Error::DimensionMismatch {
            expected: network.dim(),
            found: bounds.dim(),
        });
    }
    Grid::from_fn(bounds.clone(), resolution, |x| {
        evaluate_relay(objective, network, x, params, mode)
            .ok()
            .map(|v| v.value)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn row_major_order_and_endpoints() {
        let b = SearchBox::new(vec![0.0, 10.0], vec![1.0, 12.0]).unwrap();
        let pts = grid_points(&b, &[2, 3]).unwrap();
        assert_eq!(
            pts,
            vec![
                vec![0.0, 10.0],
                vec![0.0, 11.0],
                vec![0.0, 12.0],
                vec![1.0, 10.0],
                vec![1.0, 11.0],
                vec![1.0, 12.0]
            ]
        );
        let g = Grid::from_fn(b, &[2, 3], |x| Some(x[0] + x[1])).unwrap();
        assert_eq!(g.flat_index(&[1, 2]), 5);
        assert_eq!(g.multi_index(4), vec![1, 1]);
        assert_eq!(g.point(4), vec![1.0, 11.0]);
        assert_eq!(g.max(), Some((5, 13.0)));
    }

    #[test]
    fn box_validation() {
        assert_eq!(
            SearchBox::new(vec![1.0], vec![1.0]),
            Err(Error::EmptyFeasibleSet)
        );
        assert!(SearchBox::new(vec![], vec![]).is_err());
        assert!(SearchBox::new(vec![0.0], vec![1.0, 2.0]).is_err());
        let b = SearchBox::new(vec![0.0], vec![1.0]).unwrap();
        assert!(grid_points(&b, &[1]).is_err());
    }

    #[test]
    fn midpoint_is_exact_on_odd_grids() {
        let b = SearchBox::new(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(b.axis_value(0, 50, 101), 0.5);
        assert_eq!(b.axis_value(0, 100, 101), 1.0);
    }
}

use alloc::vec::Vec;

use super::grid::Grid;

/// Three collinear cells where the middle one falls below the level.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeWitness {
    /// Integer lattice direction of the line.
    pub direction: Vec<i64>,
    pub points: [Vec<f64>; 3],
    pub values: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeResult {
    pub level: f64,
    pub pass: bool,
    pub lines_checked: usize,
    pub witness: Option<ProbeWitness>,
}

/// Primitive integer directions with components in `[-2, 2]`, first nonzero
/// component positive. Includes every axis and diagonal.
pub fn lattice_directions(dim: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let total = 5usize.pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let dir: Vec<i64> = (0..dim)
            .map(|_| {
                let v = (c % 5) as i64 - 2;
                c /= 5;
                v
            })
            .collect();
        let first = dir.iter().find(|&&v| v != 0);
        if first.is_none_or(|&v| v < 0) {
            continue;
        }
        if dir.iter().fold(0, |g, &v| gcd(g, v.unsigned_abs())) != 1 {
            continue;
        }
        out.push(dir);
    }
    out.sort();
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks that `{value >= level}` is a contiguous run along every grid line.
///
/// Lines run through every cell along each lattice direction from
/// [`lattice_directions`]. Invalid cells are skipped, so a run may straddle them.
/// Convex superlevel sets give contiguous runs on every line, so a failure is a
/// certificate that the sampled function is not quasi-concave.
pub fn superlevel_convexity_probe(grid: &Grid, level: f64) -> ProbeResult {
    let dim = grid.dim();
    let res: Vec<i64> = grid.resolution().iter().map(|&r| r as i64).collect();
    let inside = |idx: &[i64]| idx.iter().zip(&res).all(|(&i, &n)| i >= 0 && i < n);
    let mut lines_checked = 0;

    for dir in lattice_directions(dim) {
        for flat in 0..grid.len() {
            let start: Vec<i64> = grid.multi_index(flat).iter().map(|&i| i as i64).collect();
            // Only start where the previous cell along the line is outside the grid.
            let prev: Vec<i64> = start.iter().zip(&dir).map(|(i, d)| i - d).collect();
            if inside(&prev) {
                continue;
            }
            let mut cells = Vec::new();
            let mut cur = start;
            while inside(&cur) {
                let idx: Vec<usize> = cur.iter().map(|&i| i as usize).collect();
                let f = grid.flat_index(&idx);
                if let Some(v) = grid.values()[f] {
                    cells.push((f, v));
                }
                for (c, d) in cur.iter_mut().zip(&dir) {
                    *c += d;
                }
            }
            if cells.len() < 3 {
                continue;
            }
            lines_checked += 1;
            if let Some(w) = find_gap(&cells, level) {
                let (a, m, b) = (cells[w.0], cells[w.1], cells[w.2]);
                return ProbeResult {
                    level,
                    pass: false,
                    lines_checked,
                    witness: Some(ProbeWitness {
                        direction: dir,
                        points: [grid.point(a.0), grid.point(m.0), grid.point(b.0)],
                        values: [a.1, m.1, b.1],
                    }),
                };
            }
        }
    }
    ProbeResult {
        level,
        pass: true,
        lines_checked,
        witness: None,
    }
}

/// Indices `(i, k, j)` with `i < k < j`, cells `i` and `j` at or above the level and
/// `k` below it.
fn find_gap(cells: &[(usize, f64)], level: f64) -> Option<(usize, usize, usize)> {
    let first = cells.iter().position(|c| c.1 >= level)?;
    let last = cells.iter().rposition(|c| c.1 >= level)?;
    (first..=last)
        .find(|&k| cells[k].1 < level)
        .map(|k| (first, k, last))
}

/// `count` levels spaced evenly over `[0.1, 0.9]` times the grid maximum.
pub fn superlevel_levels(grid: &Grid, count: usize) -> Vec<f64> {
    let max = grid.max().map_or(0.0, |(_, v)| v);
    match count {
        0 => Vec::new(),
        1 => alloc::vec![0.5 * max],
        _ => (0..count)
            .map(|i| (0.1 + 0.8 * i as f64 / (count - 1) as f64) * max)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::grid::SearchBox;
    use super::*;
    use alloc::vec;

    #[test]
    fn direction_counts() {
        assert_eq!(lattice_directions(1), vec![vec![1]]);
        // (0,1), (1,0), (1,±1), (1,±2), (2,±1)
        assert_eq!(lattice_directions(2).len(), 8);
        assert!(lattice_directions(3).contains(&vec![1, 1, 1]));
    }

    #[test]
    fn concave_bump_passes() {
        let b = SearchBox::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let g = Grid::from_fn(b, &[21, 21], |x| {
            Some(1.0 - x[0] * x[0] - 0.5 * x[1] * x[1])
        })
        .unwrap();
        for level in superlevel_levels(&g, 10) {
            assert!(superlevel_convexity_probe(&g, level).pass);
        }
    }

    #[test]
    fn bimodal_fails_with_witness() {
        let b = SearchBox::new(vec![-3.0], vec![3.0]).unwrap();
        let bump = |x: f64, c: f64| libm::exp(-(x - c) * (x - c) * 4.0);
        let g = Grid::from_fn(b, &[61], |x| Some(bump(x[0], -1.5) + bump(x[0], 1.5))).unwrap();
        let r = superlevel_convexity_probe(&g, 0.5);
        assert!(!r.pass);
        let w = r.witness.unwrap();
        assert!(w.values[1] < 0.5 && w.values[0] >= 0.5 && w.values[2] >= 0.5);
        assert!(w.points[0][0] < w.points[1][0] && w.points[1][0] < w.points[2][0]);
    }

    #[test]
    fn invalid_cells_are_skipped() {
        let b = SearchBox::new(vec![0.0], vec![1.0]).unwrap();
        let g = Grid::from_fn(b, &[11], |x| {
            if (x[0] - 0.5).abs() < 1e-9 {
                None
            } else {
                Some(1.0 - (x[0] - 0.5).abs())
            }
        })
        .unwrap();
        assert!(superlevel_convexity_probe(&g, 0.8).pass);
    }
}

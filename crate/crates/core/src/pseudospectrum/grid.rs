use std::collections::VecDeque;
use std::io;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::sci;
use crate::json;
use crate::matrix::{sigma_min_of, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridBounds {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl GridBounds {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let b = GridBounds { re_min, re_max, im_min, im_max };
        if [re_min, re_max, im_min, im_max].iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("grid bounds"));
        }
        if re_min >= re_max || im_min >= im_max {
            return Err(Error::invalid("grid bounds must satisfy re_min < re_max and im_min < im_max"));
        }
        Ok(b)
    }
}

/// `sigma_min(A - zI)` at the centers of an `nx x ny` cell grid.
///
/// Cell `(i, j)` has center `re_min + (i + 1/2) dx + i (im_min + (j + 1/2) dy)`;
/// values are stored row by row, one row per imaginary index `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub sigma_min_values: Vec<f64>,
}

/// Cells labelled `0` (outside) or `1..=count` (component id), same layout as
/// [`PseudoGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentLabeling {
    pub epsilon: f64,
    pub nx: usize,
    pub ny: usize,
    pub labels: Vec<u32>,
    pub count: usize,
}

/// Sidecar written next to a grid CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub bounds: GridBounds,
    pub nx: usize,
    pub ny: usize,
    pub epsilon: f64,
    pub component_count: usize,
    /// Components of the complement (exterior plus holes), 8-connected.
    pub complement_count: usize,
}

pub fn grid_sigma_min(a: &ComplexMatrix, bounds: GridBounds, nx: usize, ny: usize) -> Result<PseudoGrid> {
    if nx < 2 || ny < 2 {
        return Err(Error::invalid("grid needs nx >= 2 and ny >= 2"));
    }
    let grid = PseudoGrid {
        re_min: bounds.re_min,
        re_max: bounds.re_max,
        im_min: bounds.im_min,
        im_max: bounds.im_max,
        nx,
        ny,
        sigma_min_values: Vec::new(),
    };
    let values = (0..nx * ny)
        .into_par_iter()
        .map(|k| sigma_min_of(a.shifted(grid.center(k % nx, k / nx))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(PseudoGrid { sigma_min_values: values, ..grid })
}

impl PseudoGrid {
    pub fn bounds(&self) -> GridBounds {
        GridBounds { re_min: self.re_min, re_max: self.re_max, im_min: self.im_min, im_max: self.im_max }
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / self.ny as f64
    }

    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re_min + (i as f64 + 0.5) * self.dx(), self.im_min + (j as f64 + 0.5) * self.dy())
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.sigma_min_values[j * self.nx + i]
    }

    /// Cell containing `z`, if inside the grid window.
    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fi = (z.re - self.re_min) / self.dx();
        let fj = (z.im - self.im_min) / self.dy();
        if fi < 0.0 || fj < 0.0 {
            return None;
        }
        let (i, j) = (fi as usize, fj as usize);
        (i < self.nx && j < self.ny).then_some((i, j))
    }

    /// CSV with header `re,im,sigma_min`, one row per cell in storage order.
    pub fn write_csv<W: io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["re", "im", "sigma_min"])?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let z = self.center(i, j);
                out.write_record(&[sci(z.re), sci(z.im), sci(self.value(i, j))])?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn metadata(&self, epsilon: f64) -> Result<GridMetadata> {
        Ok(GridMetadata {
            bounds: self.bounds(),
            nx: self.nx,
            ny: self.ny,
            epsilon,
            component_count: components(self, epsilon)?.count,
            complement_count: complement_components(self, epsilon)?.count,
        })
    }
}

impl GridMetadata {
    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }
}

impl ComponentLabeling {
    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[j * self.nx + i]
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon must be positive and finite"))
    }
}

/// 4-connected components of the cells with `sigma_min < epsilon`.
pub fn components(grid: &PseudoGrid, epsilon: f64) -> Result<ComponentLabeling> {
    check_epsilon(epsilon)?;
    let mask: Vec<bool> = grid.sigma_min_values.iter().map(|&s| s < epsilon).collect();
    let (labels, count) = flood_fill(grid.nx, grid.ny, &mask, false);
    Ok(ComponentLabeling { epsilon, nx: grid.nx, ny: grid.ny, labels, count })
}

/// 8-connected components of the cells with `sigma_min >= epsilon`.
///
/// 8-connectivity is the dual of the 4-connectivity used for the
/// pseudospectrum, so holes are not split at diagonal pinches. For a
/// connected pseudospectrum inside the window the count is `1 + holes`.
pub fn complement_components(grid: &PseudoGrid, epsilon: f64) -> Result<ComponentLabeling> {
    check_epsilon(epsilon)?;
    let mask: Vec<bool> = grid.sigma_min_values.iter().map(|&s| s >= epsilon).collect();
    let (labels, count) = flood_fill(grid.nx, grid.ny, &mask, true);
    Ok(ComponentLabeling { epsilon, nx: grid.nx, ny: grid.ny, labels, count })
}

fn flood_fill(nx: usize, ny: usize, mask: &[bool], eight: bool) -> (Vec<u32>, usize) {
    const FOUR: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
    const EIGHT: [(isize, isize); 8] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    let offsets: &[(isize, isize)] = if eight { &EIGHT } else { &FOUR };

    let mut labels = vec![0u32; nx * ny];
    let mut count = 0u32;
    let mut queue = VecDeque::new();
    for start in 0..nx * ny {
        if !mask[start] || labels[start] != 0 {
            continue;
        }
        count += 1;
        labels[start] = count;
        queue.push_back(start);
        while let Some(k) = queue.pop_front() {
            let (i, j) = ((k % nx) as isize, (k / nx) as isize);
            for &(di, dj) in offsets {
                let (ni, nj) = (i + di, j + dj);
                if ni < 0 || nj < 0 || ni >= nx as isize || nj >= ny as isize {
                    continue;
                }
                let nk = nj as usize * nx + ni as usize;
                if mask[nk] && labels[nk] == 0 {
                    labels[nk] = count;
                    queue.push_back(nk);
                }
            }
        }
    }
    (labels, count as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag03() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[c(0.0, 0.0), c(3.0, 0.0)]).unwrap()
    }

    #[test]
    fn grid_values_at_known_centers() {
        let zero = ComplexMatrix::from_diagonal(&[c(0.0, 0.0)]).unwrap();
        let g = grid_sigma_min(&zero, GridBounds::new(-1.0, 1.0, -1.0, 1.0).unwrap(), 2, 3).unwrap();
        assert_eq!(g.center(1, 1), c(0.5, 0.0));
        assert!((g.value(1, 1) - 0.5).abs() < 1e-15);

        // Centers at re = 0.5, 1.5, 2.5, 3.5.
        let g = grid_sigma_min(&diag03(), GridBounds::new(0.0, 4.0, -1.0, 1.0).unwrap(), 4, 2).unwrap();
        assert!((g.value(1, 0) - 2.5f64.sqrt()).abs() < 1e-14);
        assert!((g.value(0, 0) - 0.5f64.sqrt()).abs() < 1e-14);
        let g = grid_sigma_min(&diag03(), GridBounds::new(0.5, 1.5, -0.5, 0.5).unwrap(), 3, 3).unwrap();
        assert_eq!(g.center(1, 1), c(1.0, 0.0));
        assert!((g.value(1, 1) - 1.0).abs() < 1e-14);

        let a = zoo::remark42_diagonal(2).unwrap();
        let g = grid_sigma_min(&a, GridBounds::new(1.0, 2.0, -0.5, 0.5).unwrap(), 3, 3).unwrap();
        assert_eq!(g.center(1, 1), c(1.5, 0.0));
        assert!((g.value(1, 1) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bad_grids_are_rejected() {
        assert!(GridBounds::new(1.0, -1.0, 0.0, 1.0).is_err());
        assert!(GridBounds::new(0.0, 1.0, 0.0, f64::NAN).is_err());
        let b = GridBounds::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(grid_sigma_min(&diag03(), b, 1, 5).is_err());
    }

    #[test]
    fn two_disks_split_and_merge() {
        let g = grid_sigma_min(&diag03(), GridBounds::new(-3.0, 6.0, -3.0, 3.0).unwrap(), 181, 121).unwrap();
        assert_eq!(components(&g, 0.5).unwrap().count, 2);
        assert_eq!(components(&g, 2.0).unwrap().count, 1);
        assert!(components(&g, 0.0).is_err());
    }

    #[test]
    fn labels_cover_exactly_the_pseudospectrum() {
        let g = grid_sigma_min(&diag03(), GridBounds::new(-2.0, 5.0, -2.0, 2.0).unwrap(), 40, 30).unwrap();
        let l = components(&g, 0.9).unwrap();
        for j in 0..g.ny {
            for i in 0..g.nx {
                assert_eq!(l.label(i, j) != 0, g.value(i, j) < 0.9);
            }
        }
    }

    #[test]
    fn flood_fill_connectivity() {
        // Diagonal pinch: two components with 4-connectivity, one with 8.
        let mask = [true, false, false, true];
        assert_eq!(flood_fill(2, 2, &mask, false).1, 2);
        assert_eq!(flood_fill(2, 2, &mask, true).1, 1);
    }

    #[test]
    fn csv_layout() {
        let g = grid_sigma_min(&diag03(), GridBounds::new(0.0, 4.0, -1.0, 1.0).unwrap(), 4, 2).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "re,im,sigma_min");
        assert_eq!(lines.len(), 9);
        assert!(lines[1].starts_with("5.0000000000000000e-1,-5.0000000000000000e-1,"));
        assert!(lines[2].starts_with("1.5000000000000000e0,-5.0000000000000000e-1,"));
    }

    #[test]
    fn cell_lookup() {
        let g = grid_sigma_min(&diag03(), GridBounds::new(0.0, 4.0, -1.0, 1.0).unwrap(), 4, 2).unwrap();
        assert_eq!(g.cell_of(c(1.2, 0.3)), Some((1, 1)));
        assert_eq!(g.cell_of(c(-0.1, 0.0)), None);
        assert_eq!(g.cell_of(c(4.1, 0.0)), None);
    }
}

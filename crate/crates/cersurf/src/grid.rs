//! Gridding scattered surface points for plotting.
//!
//! The scattered (maturity, moneyness, rate) samples are resampled onto a
//! regular grid spanning their observed ranges. Values are piecewise-linear:
//! each grid node inside the convex hull of the samples is interpolated
//! barycentrically over the vertices of the Delaunay triangle containing it,
//! which keeps every interpolated value inside the sample range. Nodes
//! outside the hull stay missing; nothing is extrapolated.

use delaunator::{triangulate, Point};
use serde::Serialize;

use crate::error::{CerError, Result};
use crate::surface::CerSurface;

/// A rate surface resampled onto a regular (maturity, moneyness) grid.
///
/// `values[i][j]` belongs to `(t_axis[i], m_axis[j])`; `None` marks grid
/// nodes outside the convex hull of the source points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GriddedSurface {
    pub t_axis: Vec<f64>,
    pub m_axis: Vec<f64>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl GriddedSurface {
    /// Iterates over `(t, m, value)` for every grid node, row-major.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, Option<f64>)> + '_ {
        self.t_axis.iter().enumerate().flat_map(move |(i, &t)| {
            self.m_axis
                .iter()
                .enumerate()
                .map(move |(j, &m)| (t, m, self.values[i][j]))
        })
    }
}

/// `n` evenly spaced values over `[lo, hi]` with exact endpoints.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2);
    let step = (hi - lo) / (n - 1) as f64;
    let mut axis: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    axis[0] = lo;
    axis[n - 1] = hi;
    axis
}

/// Resamples `surface` onto a `t_bins` x `m_bins` grid.
///
/// Degenerate spans collapse the corresponding axis to a single value: a
/// surface with one distinct maturity yields a 1-row grid, one distinct
/// moneyness a 1-column grid, and a single point a 1x1 grid.
pub fn grid_surface(surface: &CerSurface, t_bins: usize, m_bins: usize) -> Result<GriddedSurface> {
    if t_bins < 2 || m_bins < 2 {
        return Err(CerError::InvalidBins { t_bins, m_bins });
    }
    if surface.points.is_empty() {
        return Err(CerError::EmptySurface {
            failures: surface.failures.len(),
        });
    }

    let samples: Vec<(f64, f64, f64)> = surface
        .points
        .iter()
        .map(|p| (p.maturity_years, p.moneyness, p.rate))
        .collect();
    let (t_lo, t_hi) = span(samples.iter().map(|s| s.0));
    let (m_lo, m_hi) = span(samples.iter().map(|s| s.1));

    match (t_lo == t_hi, m_lo == m_hi) {
        (true, true) => Ok(GriddedSurface {
            t_axis: vec![t_lo],
            m_axis: vec![m_lo],
            values: vec![vec![Some(samples[0].2)]],
        }),
        (true, false) => {
            let m_axis = linspace(m_lo, m_hi, m_bins);
            let line: Vec<(f64, f64)> = sorted_line(samples.iter().map(|s| (s.1, s.2)));
            let row = m_axis.iter().map(|&m| Some(interp_1d(&line, m))).collect();
            Ok(GriddedSurface {
                t_axis: vec![t_lo],
                m_axis,
                values: vec![row],
            })
        }
        (false, true) => {
            let t_axis = linspace(t_lo, t_hi, t_bins);
            let line: Vec<(f64, f64)> = sorted_line(samples.iter().map(|s| (s.0, s.2)));
            let values = t_axis
                .iter()
                .map(|&t| vec![Some(interp_1d(&line, t))])
                .collect();
            Ok(GriddedSurface {
                t_axis,
                m_axis: vec![m_lo],
                values,
            })
        }
        (false, false) => {
            let t_axis = linspace(t_lo, t_hi, t_bins);
            let m_axis = linspace(m_lo, m_hi, m_bins);
            let values = interp_2d(&samples, (t_lo, t_hi), (m_lo, m_hi), &t_axis, &m_axis);
            Ok(GriddedSurface {
                t_axis,
                m_axis,
                values,
            })
        }
    }
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

fn sorted_line(pairs: impl Iterator<Item = (f64, f64)>) -> Vec<(f64, f64)> {
    let mut line: Vec<(f64, f64)> = pairs.collect();
    line.sort_by(|a, b| a.0.total_cmp(&b.0));
    line
}

/// Piecewise-linear interpolation along one axis; queries are clamped to the
/// knot range (callers only query inside it).
fn interp_1d(line: &[(f64, f64)], x: f64) -> f64 {
    if x <= line[0].0 {
        return line[0].1;
    }
    if x >= line[line.len() - 1].0 {
        return line[line.len() - 1].1;
    }
    let seg = line.partition_point(|&(knot, _)| knot <= x);
    let (x0, v0) = line[seg - 1];
    let (x1, v1) = line[seg];
    let w = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
    (1.0 - w) * v0 + w * v1
}

/// Barycentric interpolation over the Delaunay triangulation of the samples,
/// on coordinates normalized to the unit square.
fn interp_2d(
    samples: &[(f64, f64, f64)],
    (t_lo, t_hi): (f64, f64),
    (m_lo, m_hi): (f64, f64),
    t_axis: &[f64],
    m_axis: &[f64],
) -> Vec<Vec<Option<f64>>> {
    let norm_t = |t: f64| (t - t_lo) / (t_hi - t_lo);
    let norm_m = |m: f64| (m - m_lo) / (m_hi - m_lo);
    let points: Vec<Point> = samples
        .iter()
        .map(|&(t, m, _)| Point {
            x: norm_t(t),
            y: norm_m(m),
        })
        .collect();
    let triangulation = triangulate(&points);

    // All samples collinear: the hull has no interior, nothing interpolates.
    if triangulation.triangles.is_empty() {
        return vec![vec![None; m_axis.len()]; t_axis.len()];
    }

    const EPS: f64 = 1e-9;
    t_axis
        .iter()
        .map(|&t| {
            let x = norm_t(t);
            m_axis
                .iter()
                .map(|&m| {
                    let y = norm_m(m);
                    for tri in triangulation.triangles.chunks_exact(3) {
                        let (ia, ib, ic) = (tri[0], tri[1], tri[2]);
                        let (a, b, c) = (&points[ia], &points[ib], &points[ic]);
                        let den = (b.y - c.y) * (a.x - c.x) + (c.x - b.x) * (a.y - c.y);
                        if den == 0.0 {
                            continue;
                        }
                        let wa = ((b.y - c.y) * (x - c.x) + (c.x - b.x) * (y - c.y)) / den;
                        let wb = ((c.y - a.y) * (x - c.x) + (a.x - c.x) * (y - c.y)) / den;
                        let wc = 1.0 - wa - wb;
                        if wa >= -EPS && wb >= -EPS && wc >= -EPS {
                            // Clamp and renormalize so the result is a true
                            // convex combination of the three sample rates.
                            let (wa, wb, wc) = (wa.max(0.0), wb.max(0.0), wc.max(0.0));
                            let total = wa + wb + wc;
                            let value =
                                (wa * samples[ia].2 + wb * samples[ib].2 + wc * samples[ic].2)
                                    / total;
                            return Some(value);
                        }
                    }
                    None
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::CerPoint;
    use proptest::prelude::*;

    fn surface_from(points: Vec<(f64, f64, f64)>) -> CerSurface {
        CerSurface {
            ticker: "X".into(),
            points: points
                .into_iter()
                .map(|(t, m, rate)| CerPoint {
                    maturity_years: t,
                    strike: 100.0 / m,
                    moneyness: m,
                    rate,
                })
                .collect(),
            failures: vec![],
        }
    }

    fn lattice(rate: impl Fn(f64, f64) -> f64) -> CerSurface {
        let mut pts = Vec::new();
        for i in 0..6 {
            for j in 0..5 {
                let t = 0.1 + 0.5 * i as f64;
                let m = 0.5 + 0.3 * j as f64;
                pts.push((t, m, rate(t, m)));
            }
        }
        surface_from(pts)
    }

    #[test]
    fn flat_lattice_grids_to_the_constant() {
        let surface = lattice(|_, _| 0.03);
        let grid = grid_surface(&surface, 13, 9).unwrap();
        assert_eq!(grid.t_axis.len(), 13);
        assert_eq!(grid.m_axis.len(), 9);
        for (_, _, v) in grid.cells() {
            let v = v.expect("full lattice covers every node");
            assert!((v - 0.03).abs() < 1e-9);
        }
        assert_eq!(grid.t_axis[0], 0.1);
        assert_eq!(*grid.t_axis.last().unwrap(), 2.6);
    }

    #[test]
    fn nodes_outside_the_hull_stay_missing() {
        // Right triangle: the far corner of the bounding box is outside.
        let surface = surface_from(vec![(0.0, 0.5, 0.1), (1.0, 0.5, 0.2), (0.0, 1.5, 0.3)]);
        let grid = grid_surface(&surface, 5, 5).unwrap();
        assert!(grid.values[4][4].is_none(), "corner outside hull");
        assert!(grid.values[0][0].is_some(), "vertex node interpolates");
        let center = grid.values[1][1].expect("interior node interpolates");
        assert!((0.1..=0.3).contains(&center));
    }

    #[test]
    fn single_maturity_collapses_to_one_row() {
        let surface = surface_from(vec![(0.5, 0.8, 0.1), (0.5, 1.0, 0.2), (0.5, 1.2, 0.3)]);
        let grid = grid_surface(&surface, 7, 5).unwrap();
        assert_eq!(grid.t_axis, vec![0.5]);
        assert_eq!(grid.m_axis.len(), 5);
        assert_eq!(grid.values.len(), 1);
        // linear data: interpolation reproduces the line
        for (j, &m) in grid.m_axis.iter().enumerate() {
            let expected = 0.1 + (m - 0.8) / 0.4 * 0.2;
            assert!((grid.values[0][j].unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn single_moneyness_collapses_to_one_column() {
        let surface = surface_from(vec![(0.25, 1.0, 0.1), (0.5, 1.0, 0.3), (1.0, 1.0, 0.2)]);
        let grid = grid_surface(&surface, 4, 9).unwrap();
        assert_eq!(grid.m_axis, vec![1.0]);
        assert_eq!(grid.values.len(), 4);
        assert!(grid.values.iter().all(|row| row.len() == 1));
        assert_eq!(grid.values[0][0], Some(0.1));
        assert_eq!(grid.values[3][0], Some(0.2));
    }

    #[test]
    fn single_point_collapses_to_one_cell() {
        let surface = surface_from(vec![(0.5, 1.0, 0.07)]);
        let grid = grid_surface(&surface, 40, 40).unwrap();
        assert_eq!(grid.t_axis, vec![0.5]);
        assert_eq!(grid.m_axis, vec![1.0]);
        assert_eq!(grid.values, vec![vec![Some(0.07)]]);
    }

    #[test]
    fn diagonal_collinear_points_grid_to_all_missing() {
        let surface = surface_from(vec![(0.1, 0.5, 0.1), (0.5, 1.0, 0.2), (0.9, 1.5, 0.3)]);
        let grid = grid_surface(&surface, 5, 5).unwrap();
        assert!(grid.cells().all(|(_, _, v)| v.is_none()));
    }

    #[test]
    fn too_few_bins_is_an_error() {
        let surface = surface_from(vec![(0.5, 1.0, 0.07), (1.0, 1.2, 0.08)]);
        assert!(matches!(
            grid_surface(&surface, 1, 5),
            Err(CerError::InvalidBins { .. })
        ));
        assert!(matches!(
            grid_surface(&surface, 5, 0),
            Err(CerError::InvalidBins { .. })
        ));
    }

    #[test]
    fn planar_data_is_reproduced_exactly_inside_the_hull() {
        // rate = 0.02 + 0.01 t + 0.05 m is linear, so any triangulation
        // interpolates it exactly.
        let surface = lattice(|t, m| 0.02 + 0.01 * t + 0.05 * m);
        let grid = grid_surface(&surface, 11, 11).unwrap();
        for (t, m, v) in grid.cells() {
            let v = v.expect("lattice covers the grid");
            assert!((v - (0.02 + 0.01 * t + 0.05 * m)).abs() < 1e-10);
        }
    }

    proptest! {
        /// Interpolated values never escape the sample range.
        #[test]
        fn gridding_respects_sample_bounds(
            raw in proptest::collection::vec((0.01f64..3.0, 0.5f64..2.0, -0.9f64..3.0), 3..40),
            t_bins in 2usize..12,
            m_bins in 2usize..12,
        ) {
            // drop duplicate (t, m) locations
            let mut samples: Vec<(f64, f64, f64)> = Vec::new();
            for (t, m, r) in raw {
                if !samples.iter().any(|s| s.0 == t && s.1 == m) {
                    samples.push((t, m, r));
                }
            }
            let lo = samples.iter().map(|s| s.2).fold(f64::INFINITY, f64::min);
            let hi = samples.iter().map(|s| s.2).fold(f64::NEG_INFINITY, f64::max);
            let grid = grid_surface(&surface_from(samples), t_bins, m_bins).unwrap();
            for (_, _, v) in grid.cells() {
                if let Some(v) = v {
                    prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
                }
            }
        }
    }
}

//! Finite sample grids of compact regions in the u- or s-plane.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::variable::{s_of_u, u_of_s};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    U,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum GridShape {
    /// Sector of the annulus `1/q < |u| < q^{-1/2}`.
    Annulus {
        r_min: f64,
        r_max: f64,
        theta_min: f64,
        theta_max: f64,
    },
    /// Circles of radius up to `radius ≤ q^{-1/2}` about 0.
    Disc { radius: f64 },
    /// Subrectangle of `1/2 < σ < 1`, `0 < t < 2π / ln q`.
    Rectangle {
        sigma_min: f64,
        sigma_max: f64,
        t_min: f64,
        t_max: f64,
    },
    Custom,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionGrid {
    pub q: u32,
    pub plane: Plane,
    pub shape: GridShape,
    pub points: Vec<Complex64>,
}

/// `[lo, hi]` sampled at `n` points; a single point sits at `lo`.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Row-major grid traversed back and forth so consecutive points are
/// neighbours.
fn serpentine(rows: &[f64], cols: &[f64], point: impl Fn(f64, f64) -> Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for (i, &r) in rows.iter().enumerate() {
        if i % 2 == 0 {
            out.extend(cols.iter().map(|&c| point(r, c)));
        } else {
            out.extend(cols.iter().rev().map(|&c| point(r, c)));
        }
    }
    out
}

fn check_counts(a: usize, b: usize) -> Result<()> {
    if a == 0 || b == 0 {
        return Err(Error::pre("grid dimensions must be positive"));
    }
    Ok(())
}

impl RegionGrid {
    pub fn annulus(
        q: u32,
        r_min: f64,
        r_max: f64,
        theta_min: f64,
        theta_max: f64,
        n_r: usize,
        n_theta: usize,
    ) -> Result<Self> {
        check_counts(n_r, n_theta)?;
        let qf = q as f64;
        if !(r_min > 1.0 / qf && r_min <= r_max && r_max < qf.powf(-0.5)) {
            return Err(Error::pre(format!(
                "annulus radii [{r_min}, {r_max}] must lie strictly inside (1/q, q^(-1/2))"
            )));
        }
        if !(theta_min <= theta_max) {
            return Err(Error::pre("annulus angles must satisfy theta_min <= theta_max"));
        }
        let points = serpentine(
            &linspace(r_min, r_max, n_r),
            &linspace(theta_min, theta_max, n_theta),
            Complex64::from_polar,
        );
        Self::build(
            q,
            Plane::U,
            GridShape::Annulus {
                r_min,
                r_max,
                theta_min,
                theta_max,
            },
            points,
        )
    }

    /// 10 radii in `[q^{-0.85}, q^{-0.65}]` by 20 angles in `[0, 0.8π]`.
    pub fn default_u(q: u32) -> Result<Self> {
        let qf = q as f64;
        Self::annulus(q, qf.powf(-0.85), qf.powf(-0.65), 0.0, 0.8 * PI, 10, 20)
    }

    /// Circles of radii `radius·i/n_r`, `i = 1..n_r`, each sampled at
    /// `n_theta` equally spaced angles.
    pub fn disc(q: u32, radius: f64, n_r: usize, n_theta: usize) -> Result<Self> {
        check_counts(n_r, n_theta)?;
        if !(radius > 0.0 && radius <= (q as f64).powf(-0.5)) {
            return Err(Error::pre("disc radius must lie in (0, q^(-1/2)]"));
        }
        let radii: Vec<f64> = (1..=n_r).map(|i| radius * i as f64 / n_r as f64).collect();
        let angles: Vec<f64> = (0..n_theta).map(|j| TAU * j as f64 / n_theta as f64).collect();
        let points = serpentine(&radii, &angles, Complex64::from_polar);
        Self::build(q, Plane::U, GridShape::Disc { radius }, points)
    }

    pub fn rectangle(
        q: u32,
        sigma_min: f64,
        sigma_max: f64,
        t_min: f64,
        t_max: f64,
        n_sigma: usize,
        n_t: usize,
    ) -> Result<Self> {
        check_counts(n_sigma, n_t)?;
        let period = TAU / (q as f64).ln();
        if !(sigma_min > 0.5 && sigma_min <= sigma_max && sigma_max < 1.0) {
            return Err(Error::pre("rectangle needs 1/2 < sigma_min <= sigma_max < 1"));
        }
        if !(t_min > 0.0 && t_min <= t_max && t_max < period) {
            return Err(Error::pre("rectangle needs 0 < t_min <= t_max < 2 pi / ln q"));
        }
        let points = serpentine(
            &linspace(sigma_min, sigma_max, n_sigma),
            &linspace(t_min, t_max, n_t),
            Complex64::new,
        );
        Self::build(
            q,
            Plane::S,
            GridShape::Rectangle {
                sigma_min,
                sigma_max,
                t_min,
                t_max,
            },
            points,
        )
    }

    /// Arbitrary u-points with `0 < |u| ≤ q^{-1/2}`.
    pub fn custom_u(q: u32, points: Vec<Complex64>) -> Result<Self> {
        let bound = (q as f64).powf(-0.5);
        if points.iter().any(|u| u.norm() == 0.0 || u.norm() > bound) {
            return Err(Error::pre("custom u-points must satisfy 0 < |u| <= q^(-1/2)"));
        }
        Self::build(q, Plane::U, GridShape::Custom, points)
    }

    /// Arbitrary s-points with `σ > 1/2`.
    pub fn custom_s(q: u32, points: Vec<Complex64>) -> Result<Self> {
        if points.iter().any(|s| !(s.re > 0.5)) {
            return Err(Error::pre("custom s-points must satisfy Re s > 1/2"));
        }
        Self::build(q, Plane::S, GridShape::Custom, points)
    }

    fn build(q: u32, plane: Plane, shape: GridShape, points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::pre("grid is empty"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::pre("grid points must be finite"));
        }
        let mut seen = HashSet::new();
        for p in &points {
            if !seen.insert((p.re.to_bits(), p.im.to_bits())) {
                return Err(Error::pre(format!("duplicate grid point {p}")));
            }
        }
        Ok(RegionGrid {
            q,
            plane,
            shape,
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The grid as u-values.
    pub fn u_points(&self) -> Vec<Complex64> {
        match self.plane {
            Plane::U => self.points.clone(),
            Plane::S => self.points.iter().map(|&s| u_of_s(self.q, s)).collect(),
        }
    }

    /// The grid as s-values on the fundamental strip.
    pub fn s_points(&self) -> Vec<Complex64> {
        match self.plane {
            Plane::S => self.points.clone(),
            Plane::U => self
                .points
                .iter()
                .map(|&u| s_of_u(self.q, u).expect("grid points are nonzero"))
                .collect(),
        }
    }

    /// `min (σ - 1/2)` over the grid.
    pub fn critical_distance(&self) -> f64 {
        self.s_points()
            .iter()
            .map(|s| s.re - 0.5)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_u(&self) -> f64 {
        self.u_points().iter().map(|u| u.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        for q in [3u32, 5, 9] {
            let g = RegionGrid::default_u(q).unwrap();
            assert_eq!(g.len(), 200);
            let qf = q as f64;
            for u in &g.points {
                assert!(u.norm() > 1.0 / qf && u.norm() < qf.powf(-0.5));
            }
            // serpentine: consecutive points are close
            let step = g
                .points
                .windows(2)
                .map(|w| (w[0] - w[1]).norm())
                .fold(0.0, f64::max);
            assert!(step < 0.1);
            assert!(g.critical_distance() > 0.0);
        }
    }

    #[test]
    fn invalid_grids_rejected() {
        assert!(RegionGrid::annulus(3, 0.2, 0.5, 0.0, 1.0, 2, 2).is_err());
        assert!(RegionGrid::annulus(3, 0.4, 0.6, 0.0, 1.0, 2, 2).is_err());
        assert!(RegionGrid::rectangle(3, 0.5, 0.9, 0.1, 1.0, 2, 2).is_err());
        assert!(RegionGrid::rectangle(3, 0.6, 0.9, 0.1, 6.0, 2, 2).is_err());
        assert!(RegionGrid::disc(3, 0.6, 2, 2).is_err());
        let p = Complex64::new(0.3, 0.1);
        assert!(RegionGrid::custom_u(3, vec![p, p]).is_err());
        assert!(RegionGrid::custom_u(3, vec![]).is_err());
        assert!(RegionGrid::custom_s(3, vec![Complex64::new(0.5, 1.0)]).is_err());
    }

    #[test]
    fn planes_convert() {
        let g = RegionGrid::rectangle(3, 0.6, 0.9, 0.5, 5.0, 3, 4).unwrap();
        for (u, s) in g.u_points().iter().zip(g.s_points()) {
            assert!((u_of_s(3, s) - u).norm() < 1e-15);
        }
        assert!((g.critical_distance() - 0.1).abs() < 1e-12);
    }
}

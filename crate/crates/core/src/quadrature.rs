//! Gauss-Hermite rules and tensor-product phase-space grids.

use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use num::complex::Complex64;

use crate::error::{Error, Result};

/// One-dimensional rule for `int g(x) exp(-x^2) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermiteRule {
    pub fn new(n: usize) -> Result<Self> {
        let n = NonZeroUsize::new(n)
            .ok_or_else(|| Error::InvalidParameter("node count must be positive".into()))?;
        let rule = GaussHermite::new(n);
        let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (*x, *w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(GaussHermiteRule {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int g(x) exp(-x^2) dx`
    pub fn integrate_weighted<T>(&self, mut g: impl FnMut(f64) -> T) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| g(x) * w)
            .sum()
    }

    /// `int g(y) dy` for `g` concentrated around `center` with width `scale`,
    /// using nodes `y = center + scale * xi`.
    pub fn integrate<T>(&self, center: f64, scale: f64, mut g: impl FnMut(f64) -> T) -> T
    where
        T: std::ops::Mul<f64, Output = T> + std::iter::Sum<T>,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&xi, &w)| g(center + scale * xi) * (w * scale * (xi * xi).exp()))
            .sum()
    }
}

/// Tensor-product grid over `2 * mode_count` real phase-space coordinates
/// `(Re alpha_1, Im alpha_1, Re alpha_2, ...)`.
///
/// Each dimension carries a rule, a center and a scale; the reference
/// density is `prod_d exp(-((u_d - c_d)/s_d)^2) / (s_d sqrt(pi))`, which the
/// grid integrates exactly against polynomials of degree `2 * nodes - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    rules: Vec<GaussHermiteRule>,
    centers: Vec<f64>,
    scales: Vec<f64>,
}

/// One grid point with its weights.
#[derive(Debug, Clone)]
pub struct GridPoint {
    pub coords: Vec<f64>,
    /// Weight against the normalized reference density.
    pub reference_weight: f64,
    /// Weight for a plain Lebesgue integral.
    pub lebesgue_weight: f64,
}

impl GridPoint {
    /// Complex amplitudes `alpha_m = coords[2m] + i coords[2m+1]`.
    pub fn alpha(&self) -> Vec<Complex64> {
        self.coords
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect()
    }
}

impl QuadratureGrid {
    pub fn new(rules: Vec<GaussHermiteRule>, centers: Vec<f64>, scales: Vec<f64>) -> Result<Self> {
        if rules.is_empty() || !rules.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(
                "grid dimension must be a positive even number".into(),
            ));
        }
        if centers.len() != rules.len() || scales.len() != rules.len() {
            return Err(Error::Dimension {
                expected: rules.len(),
                got: centers.len().min(scales.len()),
            });
        }
        if scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidParameter("grid scales must be positive".into()));
        }
        Ok(QuadratureGrid {
            rules,
            centers,
            scales,
        })
    }

    /// Unit grid whose reference density is `prod_m exp(-|alpha_m|^2) / pi`.
    pub fn standard(mode_count: usize, nodes: usize) -> Result<Self> {
        QuadratureGrid::centered(&vec![Complex64::new(0.0, 0.0); mode_count], 1.0, nodes)
    }

    /// Grid centered at `centers` with reference density
    /// `prod_m exp(-|alpha_m - c_m|^2 / scale^2) / (pi scale^2)`.
    pub fn centered(centers: &[Complex64], scale: f64, nodes: usize) -> Result<Self> {
        let rule = GaussHermiteRule::new(nodes)?;
        let dims = 2 * centers.len();
        QuadratureGrid::new(
            vec![rule; dims],
            centers.iter().flat_map(|c| [c.re, c.im]).collect(),
            vec![scale; dims],
        )
    }

    pub fn dimension(&self) -> usize {
        self.rules.len()
    }

    pub fn mode_count(&self) -> usize {
        self.rules.len() / 2
    }

    pub fn nodes_per_dimension(&self) -> Vec<usize> {
        self.rules.iter().map(|r| r.len()).collect()
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn point_count(&self) -> usize {
        self.rules.iter().map(|r| r.len()).product()
    }

    /// Same centers and scales with `delta` fewer nodes per dimension
    /// (at least one), used for error estimates.
    pub fn coarsened(&self, delta: usize) -> Result<Self> {
        let rules = self
            .rules
            .iter()
            .map(|r| GaussHermiteRule::new(r.len().saturating_sub(delta).max(1)))
            .collect::<Result<Vec<_>>>()?;
        QuadratureGrid::new(rules, self.centers.clone(), self.scales.clone())
    }

    pub fn points(&self) -> GridPoints<'_> {
        GridPoints {
            grid: self,
            counters: vec![0; self.rules.len()],
            done: false,
        }
    }

    /// `int g dP_ref` over the reference density.
    pub fn expectation(&self, mut g: impl FnMut(&GridPoint) -> Complex64) -> Complex64 {
        self.points().map(|pt| g(&pt) * pt.reference_weight).sum()
    }

    /// Plain integral `int g d^(2n) u`.
    pub fn integrate(&self, mut g: impl FnMut(&GridPoint) -> Complex64) -> Complex64 {
        self.points().map(|pt| g(&pt) * pt.lebesgue_weight).sum()
    }
}

pub struct GridPoints<'a> {
    grid: &'a QuadratureGrid,
    counters: Vec<usize>,
    done: bool,
}

impl Iterator for GridPoints<'_> {
    type Item = GridPoint;

    fn next(&mut self) -> Option<GridPoint> {
        if self.done {
            return None;
        }
        let g = self.grid;
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let mut coords = Vec::with_capacity(g.rules.len());
        let mut reference_weight = 1.0;
        let mut lebesgue_weight = 1.0;
        for (d, &i) in self.counters.iter().enumerate() {
            let xi = g.rules[d].nodes[i];
            let w = g.rules[d].weights[i];
            coords.push(g.centers[d] + g.scales[d] * xi);
            reference_weight *= w / sqrt_pi;
            lebesgue_weight *= w * g.scales[d] * (xi * xi).exp();
        }
        // advance, last dimension fastest
        let mut d = self.counters.len();
        loop {
            if d == 0 {
                self.done = true;
                break;
            }
            d -= 1;
            self.counters[d] += 1;
            if self.counters[d] < g.rules[d].len() {
                break;
            }
            self.counters[d] = 0;
        }
        Some(GridPoint {
            coords,
            reference_weight,
            lebesgue_weight,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_moments() {
        let r = GaussHermiteRule::new(20).unwrap();
        let sp = std::f64::consts::PI.sqrt();
        assert!((r.integrate_weighted(|_| 1.0) - sp).abs() < 1e-13);
        // int x^6 e^{-x^2} = 15/8 sqrt(pi)
        assert!((r.integrate_weighted(|x| x.powi(6)) - 15.0 / 8.0 * sp).abs() < 1e-12);
        assert!(GaussHermiteRule::new(0).is_err());
    }

    #[test]
    fn shifted_gaussian_integral() {
        let r = GaussHermiteRule::new(30).unwrap();
        // int exp(-(y-1)^2/2) dy = sqrt(2 pi)
        let v = r.integrate(1.0, 2f64.sqrt(), |y| (-(y - 1.0) * (y - 1.0) / 2.0).exp());
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn grid_reference_mass_and_polynomials() {
        let g = QuadratureGrid::standard(1, 10).unwrap();
        assert_eq!(g.point_count(), 100);
        let mass = g.expectation(|_| Complex64::new(1.0, 0.0));
        assert!((mass.re - 1.0).abs() < 1e-14);
        // E|alpha|^4 = 2 under exp(-|alpha|^2)/pi
        let m4 = g.expectation(|pt| Complex64::new(pt.alpha()[0].norm_sqr().powi(2), 0.0));
        assert!((m4.re - 2.0).abs() < 1e-12);
        // int exp(-|alpha|^2) d^2 alpha = pi
        let leb = g.integrate(|pt| Complex64::new((-pt.alpha()[0].norm_sqr()).exp(), 0.0));
        assert!((leb.re - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn grid_validation() {
        let r = GaussHermiteRule::new(3).unwrap();
        assert!(QuadratureGrid::new(vec![r.clone()], vec![0.0], vec![1.0]).is_err());
        assert!(QuadratureGrid::new(vec![r.clone(), r.clone()], vec![0.0], vec![1.0, 1.0]).is_err());
        assert!(QuadratureGrid::new(vec![r.clone(), r], vec![0.0, 0.0], vec![1.0, -1.0]).is_err());
        let g = QuadratureGrid::standard(2, 4).unwrap().coarsened(2).unwrap();
        assert_eq!(g.nodes_per_dimension(), vec![2; 4]);
    }
}

//! Husimi Q and Wigner functions, Gaussian smoothing, exact and quadrature
//! Q-averages, the reproducing kernel, marginals and variances.

use std::f64::consts::PI;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_DEGREE_CAP;
use crate::error::{Error, Result};
use crate::fock::{
    expectation, hermite_functions, position_wavefunction, reduced_hermite, scaled_monomials,
    FockState, SBFunction,
};
use crate::ladder::LadderExpr;
use crate::quadrature::{GaussHermiteRule, QuadratureGrid};
use crate::quantize::{quantize, Scheme};
use crate::symbol::{GaussianMeasure, NumericSymbol, PhaseSymbol};

/// Normalization of the Husimi density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum QConvention {
    /// `|<phi_alpha|psi>|^2 / pi^n`, a density over `d^2 alpha`.
    AlphaDensity,
    /// Density over `dx dp`, equal to the alpha density divided by `(2 hbar)^n`.
    XpDensity,
}

/// Numeric integral with an error estimate from a coarsened rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
}

fn check_modes(psi: &FockState, n: usize) -> Result<()> {
    if psi.mode_count() != n {
        return Err(Error::ModeMismatch {
            left: psi.mode_count(),
            right: n,
        });
    }
    Ok(())
}

fn require_single_mode(psi: &FockState) -> Result<()> {
    if psi.mode_count() != 1 {
        return Err(Error::SingleModeOnly(psi.mode_count()));
    }
    Ok(())
}

/// `<phi_alpha|psi> = prod_m exp(-|alpha_m|^2 / 2) sum_n c_n conj(alpha)^n / sqrt(n!)`.
///
/// The sum runs over the stored coefficients only, so it is exact for the
/// truncated vector at every `alpha`.
pub fn coherent_overlap(psi: &FockState, alpha: &[Complex64]) -> Result<Complex64> {
    check_modes(psi, alpha.len())?;
    let layout = psi.layout();
    let basis: Vec<Vec<Complex64>> = alpha
        .iter()
        .zip(layout.cutoffs())
        .map(|(a, &c)| scaled_monomials(a.conj(), c))
        .collect();
    let sum: Complex64 = psi
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let product: Complex64 = layout
                .levels(i)
                .iter()
                .enumerate()
                .map(|(m, &l)| basis[m][l])
                .product();
            c * product
        })
        .sum();
    let r2: f64 = alpha.iter().map(|a| a.norm_sqr()).sum();
    Ok(sum * (-r2 / 2.0).exp())
}

/// Husimi density of a state under one normalization.
#[derive(Debug, Clone, Copy)]
pub struct HusimiDensity<'a> {
    pub state: &'a FockState,
    pub convention: QConvention,
}

impl<'a> HusimiDensity<'a> {
    pub fn new(state: &'a FockState, convention: QConvention) -> Self {
        HusimiDensity { state, convention }
    }

    /// Value at the phase-space point with complex amplitudes `alpha`.
    pub fn at_alpha(&self, alpha: &[Complex64]) -> Result<f64> {
        let n = alpha.len() as i32;
        let q = coherent_overlap(self.state, alpha)?.norm_sqr() / PI.powi(n);
        Ok(match self.convention {
            QConvention::AlphaDensity => q,
            QConvention::XpDensity => q / (2.0 * self.state.hbar()).powi(n),
        })
    }

    /// Value at `(x, p)` with `alpha_m = (x_m + i p_m) / sqrt(2 hbar)`.
    pub fn at_xp(&self, x: &[f64], p: &[f64]) -> Result<f64> {
        if x.len() != p.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                got: p.len(),
            });
        }
        let alpha = xp_to_alpha(x, p, self.state.hbar());
        self.at_alpha(&alpha)
    }

    /// Supremum over phase space: `1/pi^n` or `1/(2 pi hbar)^n`.
    pub fn sup_bound(&self) -> f64 {
        let n = self.state.mode_count() as i32;
        match self.convention {
            QConvention::AlphaDensity => PI.powi(-n),
            QConvention::XpDensity => (2.0 * PI * self.state.hbar()).powi(-n),
        }
    }
}

pub fn xp_to_alpha(x: &[f64], p: &[f64], hbar: f64) -> Vec<Complex64> {
    let s = (2.0 * hbar).sqrt();
    x.iter().zip(p).map(|(x, p)| Complex64::new(*x, *p) / s).collect()
}

pub fn husimi_q(psi: &FockState, alpha: &[Complex64], convention: QConvention) -> Result<f64> {
    HusimiDensity::new(psi, convention).at_alpha(alpha)
}

/// Largest deviation between `Q(alpha)` from the coherent overlap and
/// `hbar^n |F(z)|^2 mu_hbar(z)` from the Segal-Bargmann function, with
/// `z = sqrt(hbar) conj(alpha)` (the factor `hbar^n` is `d^2 z / d^2 alpha`).
pub fn q_equals_sb_check(psi: &FockState, points: &[Vec<Complex64>]) -> Result<f64> {
    let hbar = psi.hbar();
    let n = psi.mode_count();
    let f = crate::fock::segal_bargmann_transform(psi);
    let measure = GaussianMeasure::new(hbar, n)?;
    let mut worst = 0.0f64;
    for alpha in points {
        let overlap_route = husimi_q(psi, alpha, QConvention::AlphaDensity)?;
        let z: Vec<Complex64> = alpha.iter().map(|a| a.conj() * hbar.sqrt()).collect();
        let sb_route = f.evaluate(&z)?.norm_sqr() * measure.density(&z) * hbar.powi(n as i32);
        worst = worst.max((overlap_route - sb_route).abs());
    }
    Ok(worst)
}

/// `|<phi_alpha|psi>|^2 exp(|alpha|^2)` as a polynomial in `alpha, conj(alpha)`.
fn q_polynomial(psi: &FockState) -> NumericSymbol {
    let layout = psi.layout();
    let n = psi.mode_count();
    let inv_sqrt_fact: Vec<f64> = scaled_monomials(Complex64::new(1.0, 0.0), layout.cutoffs().iter().copied().max().unwrap_or(1))
        .iter()
        .map(|c| c.re)
        .collect();
    let occupied: Vec<(Vec<usize>, Complex64)> = psi
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
        .map(|(i, c)| {
            let levels = layout.levels(i);
            let scale: f64 = levels.iter().map(|&l| inv_sqrt_fact[l]).product();
            (levels, c * scale)
        })
        .collect();
    let mut out = NumericSymbol::new(n);
    for (ln, cn) in &occupied {
        for (lm, cm) in &occupied {
            // c_n conj(alpha)^n times conj(c_m) alpha^m
            let key = (0..n).map(|k| (lm[k] as u32, ln[k] as u32)).collect();
            out.add_term(key, cn * cm.conj());
        }
    }
    out
}

/// `int f(alpha) Q(alpha) d^2n alpha`, evaluated exactly through Gaussian moments.
pub fn exact_q_average(f: &PhaseSymbol, psi: &FockState) -> Result<Complex64> {
    check_modes(psi, f.mode_count())?;
    let degree = f.max_mode_degree();
    if degree > DEFAULT_DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree,
            cap: DEFAULT_DEGREE_CAP,
        });
    }
    Ok(f.at_hbar(psi.hbar()).mul(&q_polynomial(psi)).moment_integral())
}

/// Unit-scale grid centered at the state's mean displacement `<a_m>`.
pub fn centered_grid(psi: &FockState, nodes: usize) -> Result<QuadratureGrid> {
    let n = psi.mode_count();
    let centers = (0..n)
        .map(|m| expectation(psi, &LadderExpr::annihilation(n, m)))
        .collect::<Result<Vec<_>>>()?;
    QuadratureGrid::centered(&centers, 1.0, nodes)
}

fn with_error(grid: &QuadratureGrid, eval: impl Fn(&QuadratureGrid) -> Result<Complex64>) -> Result<Integral> {
    let value = eval(grid)?;
    let max_nodes = grid.nodes_per_dimension().into_iter().max().unwrap_or(1);
    let coarse = grid.coarsened((max_nodes / 4).max(1))?;
    let error = (value - eval(&coarse)?).norm();
    Ok(Integral { value, error })
}

/// `int f(alpha) Q(alpha) d^2n alpha` by quadrature on `grid`.
pub fn quadrature_q_average(f: &PhaseSymbol, psi: &FockState, grid: &QuadratureGrid) -> Result<Integral> {
    check_modes(psi, f.mode_count())?;
    check_modes(psi, grid.mode_count())?;
    let numeric = f.at_hbar(psi.hbar());
    let norm = PI.powi(psi.mode_count() as i32);
    with_error(grid, |g| {
        let mut acc = Complex64::new(0.0, 0.0);
        for pt in g.points() {
            let alpha = pt.alpha();
            let q = coherent_overlap(psi, &alpha)?.norm_sqr() / norm;
            acc += numeric.evaluate_unchecked(&alpha) * (q * pt.lebesgue_weight);
        }
        Ok(acc)
    })
}

/// Grid over `w` whose reference density is `mu_hbar`.
pub fn reproducing_grid(mode_count: usize, hbar: f64, nodes: usize) -> Result<QuadratureGrid> {
    QuadratureGrid::centered(&vec![Complex64::new(0.0, 0.0); mode_count], hbar.sqrt(), nodes)
}

/// `int exp(z . conj(w) / hbar) F(w) mu_hbar(w) d^2n w`, which reproduces `F(z)`.
pub fn reproducing_apply(f: &SBFunction, z: &[Complex64], grid: &QuadratureGrid) -> Result<Integral> {
    let n = f.mode_count();
    if z.len() != n || grid.mode_count() != n {
        return Err(Error::Dimension {
            expected: n,
            got: if z.len() != n { z.len() } else { grid.mode_count() },
        });
    }
    let hbar = f.hbar();
    let measure = GaussianMeasure::new(hbar, n)?;
    with_error(grid, |g| {
        let mut acc = Complex64::new(0.0, 0.0);
        for pt in g.points() {
            let w = pt.alpha();
            let phase: Complex64 = z.iter().zip(&w).map(|(zm, wm)| zm * wm.conj()).sum::<Complex64>() / hbar;
            acc += phase.exp() * f.evaluate(&w)? * (measure.density(&w) * pt.lebesgue_weight);
        }
        Ok(acc)
    })
}

/// Rule with enough nodes to integrate `|polynomial of degree N-1|^2` exactly.
fn exact_rule(psi: &FockState, nodes: usize) -> Result<GaussHermiteRule> {
    GaussHermiteRule::new(nodes.max(psi.coefficients().len() + 2))
}

/// Sums `c_n R_n(u)` and `conj(c_n) R_n(u)` for the reduced Hermite functions `R_n`.
fn reduced_pair(psi: &FockState, u: Complex64) -> (Complex64, Complex64) {
    let hbar = psi.hbar();
    let r = reduced_hermite(u / hbar.sqrt(), hbar, psi.coefficients().len());
    psi.coefficients()
        .iter()
        .zip(r)
        .fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(a, b), (c, rn)| {
            (a + c * rn, b + c.conj() * rn)
        })
}

/// `W(x, p) exp((x^2 + p^2) / hbar) pi hbar`.
///
/// Writing `psi(u) = R(u) exp(-u^2 / (2 hbar))` and shifting the contour
/// `y -> s + i p` turns the Wigner integral into
/// `int exp(-s^2 / hbar) conj(R)(x + s + i p) R(x - s - i p) ds`, a Gaussian
/// times a polynomial.
fn wigner_reduced(psi: &FockState, x: f64, p: f64, rule: &GaussHermiteRule) -> f64 {
    let sh = psi.hbar().sqrt();
    let sum: Complex64 = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&xi, &w)| {
            let s = sh * xi;
            let (_, left) = reduced_pair(psi, Complex64::new(x + s, p));
            let (right, _) = reduced_pair(psi, Complex64::new(x - s, -p));
            left * right * w
        })
        .sum();
    sum.re * sh
}

/// `(1 / (pi hbar)) int conj(psi(x + y)) psi(x - y) exp(2 i p y / hbar) dy`.
pub fn wigner(psi: &FockState, x: f64, p: f64) -> Result<f64> {
    require_single_mode(psi)?;
    let rule = exact_rule(psi, 0)?;
    let hbar = psi.hbar();
    Ok((-(x * x + p * p) / hbar).exp() / (PI * hbar) * wigner_reduced(psi, x, p, &rule))
}

/// Wigner function convolved with `exp(-(u^2 + v^2) / hbar) / (pi hbar)`,
/// the Gaussian of variance `hbar/2` per axis.
pub fn weierstrass_smooth(psi: &FockState, x: f64, p: f64, nodes: usize) -> Result<f64> {
    require_single_mode(psi)?;
    let rule = exact_rule(psi, nodes)?;
    let inner = exact_rule(psi, 0)?;
    let hbar = psi.hbar();
    let h = (hbar / 2.0).sqrt();
    let mut sum = 0.0;
    for (&xi, &wx) in rule.nodes().iter().zip(rule.weights()) {
        for (&eta, &wp) in rule.nodes().iter().zip(rule.weights()) {
            sum += wx * wp * wigner_reduced(psi, x / 2.0 - h * xi, p / 2.0 - h * eta, &inner);
        }
    }
    let prefactor = (-(x * x + p * p) / (2.0 * hbar)).exp() / (PI * hbar).powi(2) * (hbar / 2.0);
    Ok(prefactor * sum)
}

/// `int Q_xp(x, p) dp`.
pub fn q_marginal_x(psi: &FockState, x: f64, nodes: usize) -> Result<f64> {
    require_single_mode(psi)?;
    let rule = exact_rule(psi, nodes)?;
    let density = HusimiDensity::new(psi, QConvention::XpDensity);
    let scale = (2.0 * psi.hbar()).sqrt();
    let mut acc = 0.0;
    for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
        acc += density.at_xp(&[x], &[scale * xi])? * w * scale * (xi * xi).exp();
    }
    Ok(acc)
}

/// Born-rule position density `|<x|psi>|^2`.
pub fn born_density(psi: &FockState, x: f64) -> Result<f64> {
    Ok(position_wavefunction(psi, x)?.norm_sqr())
}

/// Moments of the Q position marginal and the Born density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MarginalReport {
    pub q_mass: f64,
    pub q_second_moment: f64,
    pub born_mass: f64,
    pub born_second_moment: f64,
    /// `sup_x |marginal(x) - |psi(x)|^2|` over a dense sample.
    pub sup_gap: f64,
}

pub fn marginal_report(psi: &FockState, nodes: usize) -> Result<MarginalReport> {
    require_single_mode(psi)?;
    let hbar = psi.hbar();
    let rule = exact_rule(psi, nodes)?;
    let moments = |scale: f64, g: &dyn Fn(f64) -> Result<f64>| -> Result<(f64, f64)> {
        let mut mass = 0.0;
        let mut second = 0.0;
        for (&xi, &w) in rule.nodes().iter().zip(rule.weights()) {
            let x = scale * xi;
            let v = g(x)? * w * scale * (xi * xi).exp();
            mass += v;
            second += v * x * x;
        }
        Ok((mass, second))
    };
    let (q_mass, q_second_moment) = moments((2.0 * hbar).sqrt(), &|x| q_marginal_x(psi, x, nodes))?;
    let (born_mass, born_second_moment) = moments(hbar.sqrt(), &|x| born_density(psi, x))?;
    let extent = 6.0 * hbar.sqrt();
    let samples = 1201;
    let mut sup_gap = 0.0f64;
    for k in 0..samples {
        let x = -extent + 2.0 * extent * k as f64 / (samples - 1) as f64;
        sup_gap = sup_gap.max((q_marginal_x(psi, x, nodes)? - born_density(psi, x)?).abs());
    }
    Ok(MarginalReport {
        q_mass,
        q_second_moment,
        born_mass,
        born_second_moment,
        sup_gap,
    })
}

/// Position/momentum spread computed through one quantization scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VarianceReport {
    pub scheme: Scheme,
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub product: f64,
}

pub fn variance_report(psi: &FockState, scheme: Scheme) -> Result<VarianceReport> {
    require_single_mode(psi)?;
    let x = PhaseSymbol::x(1, 0);
    let p = PhaseSymbol::p(1, 0);
    let mean = |f: &PhaseSymbol| -> Result<f64> { Ok(expectation(psi, &quantize(f, scheme)?)?.re) };
    let (mx, mp) = (mean(&x)?, mean(&p)?);
    let var_x = mean(&x.pow(2))? - mx * mx;
    let var_p = mean(&p.pow(2))? - mp * mp;
    Ok(VarianceReport {
        scheme,
        mean_x: mx,
        mean_p: mp,
        var_x,
        var_p,
        product: var_x * var_p,
    })
}

/// One row of a phase-space dump; `q` uses the `(x, p)` density convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceRow {
    pub x: f64,
    pub p: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "smoothedW")]
    pub smoothed_w: f64,
}

/// `points x points` grid over `[-extent, extent]^2`, x-major.
pub fn phase_space_grid(psi: &FockState, points: usize, extent: f64, nodes: usize) -> Result<Vec<PhaseSpaceRow>> {
    require_single_mode(psi)?;
    if points == 0 || !(extent.is_finite() && extent > 0.0) {
        return Err(Error::InvalidParameter("grid needs points > 0 and extent > 0".into()));
    }
    let axis: Vec<f64> = (0..points)
        .map(|k| {
            if points == 1 {
                0.0
            } else {
                -extent + 2.0 * extent * k as f64 / (points - 1) as f64
            }
        })
        .collect();
    let density = HusimiDensity::new(psi, QConvention::XpDensity);
    (0..points * points)
        .into_par_iter()
        .map(|i| {
            let (x, p) = (axis[i / points], axis[i % points]);
            Ok(PhaseSpaceRow {
                x,
                p,
                q: density.at_xp(&[x], &[p])?,
                w: wigner(psi, x, p)?,
                smoothed_w: weierstrass_smooth(psi, x, p, nodes)?,
            })
        })
        .collect()
}

/// Dense samples of the Q marginal and the Born density.
pub fn marginal_samples(psi: &FockState, points: usize, extent: f64, nodes: usize) -> Result<Vec<(f64, f64, f64)>> {
    require_single_mode(psi)?;
    (0..points)
        .into_par_iter()
        .map(|k| {
            let x = if points == 1 {
                0.0
            } else {
                -extent + 2.0 * extent * k as f64 / (points - 1) as f64
            };
            Ok((x, q_marginal_x(psi, x, nodes)?, born_density(psi, x)?))
        })
        .collect()
}

/// Position-space trapezoid estimate of the Wigner function, used as an
/// independent check of the contour-shifted quadrature.
pub fn wigner_trapezoid(psi: &FockState, x: f64, p: f64, half_width: f64, steps: usize) -> Result<f64> {
    require_single_mode(psi)?;
    let hbar = psi.hbar();
    let psi_at = |u: f64| -> Complex64 {
        let h = hermite_functions(u, hbar, psi.coefficients().len());
        psi.coefficients().iter().zip(h).map(|(c, h)| c * h).sum()
    };
    let dy = 2.0 * half_width / steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=steps {
        let y = -half_width + dy * k as f64;
        let weight = if k == 0 || k == steps { 0.5 } else { 1.0 };
        acc += psi_at(x + y).conj() * psi_at(x - y) * Complex64::new(0.0, 2.0 * p * y / hbar).exp() * weight;
    }
    Ok(acc.re * dy / (PI * hbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_state;
    use crate::symbol::{parse_symbol, VariableConvention};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sym(text: &str) -> PhaseSymbol {
        parse_symbol(text, 1, VariableConvention::Xp).unwrap()
    }

    fn fock(n: usize) -> FockState {
        FockState::number_state(&[n], &[n + 3], 1.0).unwrap()
    }

    #[test]
    fn husimi_examples() {
        let vac = fock(0);
        let a = c(0.7, -0.4);
        let q = husimi_q(&vac, &[a], QConvention::AlphaDensity).unwrap();
        assert!((q - (-a.norm_sqr()).exp() / PI).abs() < 1e-15);
        assert_eq!(husimi_q(&fock(1), &[c(0.0, 0.0)], QConvention::AlphaDensity).unwrap(), 0.0);
        let beta = c(0.5, 0.3);
        let coh = coherent_state(&[beta], &[30], 1.0).unwrap();
        let peak = husimi_q(&coh, &[beta], QConvention::AlphaDensity).unwrap();
        assert!((peak - 1.0 / PI).abs() < 1e-9);
        let xp = HusimiDensity::new(&coh, QConvention::XpDensity);
        let (x0, p0) = (beta.re * 2f64.sqrt(), beta.im * 2f64.sqrt());
        assert!((xp.at_xp(&[x0], &[p0]).unwrap() - xp.sup_bound()).abs() < 1e-9);
    }

    #[test]
    fn sb_bridge_examples() {
        let pts: Vec<Vec<Complex64>> = (0..20).map(|k| vec![c(0.1 * k as f64 - 1.0, 0.05 * k as f64)]).collect();
        assert!(q_equals_sb_check(&fock(0), &pts).unwrap() <= 1e-12);
        assert!(q_equals_sb_check(&fock(1).with_hbar(0.5).unwrap(), &pts).unwrap() <= 1e-10);
    }

    #[test]
    fn exact_average_examples() {
        let vac = fock(0);
        assert!((exact_q_average(&PhaseSymbol::one(1), &vac).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((exact_q_average(&sym("x^2"), &vac).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let coh = coherent_state(&[c(1.0, 0.0)], &[30], 1.0).unwrap();
        assert!((exact_q_average(&sym("x"), &coh).unwrap() - c(2f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn quadrature_average_examples() {
        let vac = fock(0);
        let grid = QuadratureGrid::standard(1, 40).unwrap();
        let one = quadrature_q_average(&PhaseSymbol::one(1), &vac, &grid).unwrap();
        assert!((one.value - c(1.0, 0.0)).norm() < 1e-12);
        let x2 = quadrature_q_average(&sym("x^2"), &vac, &grid).unwrap();
        assert!((x2.value - c(1.0, 0.0)).norm() < 1e-10);
        let n = PhaseSymbol::alpha(1, 0).mul(&PhaseSymbol::alpha_bar(1, 0));
        let v = quadrature_q_average(&n, &fock(1), &grid).unwrap();
        assert!((v.value - c(2.0, 0.0)).norm() < 1e-9);
        assert!(v.error < 1e-9);
    }

    #[test]
    fn reproducing_examples() {
        let grid = reproducing_grid(1, 1.0, 60).unwrap();
        let one = SBFunction::new(&[1], vec![c(1.0, 0.0)], 1.0).unwrap();
        assert!((reproducing_apply(&one, &[c(0.3, 2.0)], &grid).unwrap().value - c(1.0, 0.0)).norm() < 1e-10);
        // F(w) = w is the level-1 coefficient times sqrt(hbar)
        let w = SBFunction::new(&[2], vec![c(0.0, 0.0), c(1.0, 0.0)], 1.0).unwrap();
        let z = c(1.0, 1.0);
        assert!((reproducing_apply(&w, &[z], &grid).unwrap().value - z).norm() < 1e-8);
        let w2 = SBFunction::new(&[3], vec![c(0.0, 0.0), c(0.0, 0.0), c(2f64.sqrt(), 0.0)], 1.0).unwrap();
        assert!((reproducing_apply(&w2, &[c(2.0, 0.0)], &grid).unwrap().value - c(4.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn wigner_examples() {
        assert!((wigner(&fock(0), 0.0, 0.0).unwrap() - 1.0 / PI).abs() < 1e-12);
        assert!((wigner(&fock(1), 0.0, 0.0).unwrap() + 1.0 / PI).abs() < 1e-12);
        assert!((wigner(&fock(0), 3.0, 0.0).unwrap() - (-9f64).exp() / PI).abs() < 1e-12);
        for n in 0..4 {
            let s = fock(n);
            let expected = wigner_trapezoid(&s, 0.4, -0.9, 12.0, 4000).unwrap();
            assert!((wigner(&s, 0.4, -0.9).unwrap() - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn smoothing_matches_husimi() {
        for n in 0..3 {
            let s = fock(n);
            let q = HusimiDensity::new(&s, QConvention::XpDensity);
            for &(x, p) in &[(0.0, 0.0), (0.8, -1.3), (-2.0, 0.5)] {
                let smoothed = weierstrass_smooth(&s, x, p, 8).unwrap();
                assert!((smoothed - q.at_xp(&[x], &[p]).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vacuum_marginal_moments() {
        let r = marginal_report(&fock(0), 20).unwrap();
        assert!((r.q_mass - 1.0).abs() < 1e-12);
        assert!((r.q_second_moment - 1.0).abs() < 1e-12);
        assert!((r.born_mass - 1.0).abs() < 1e-12);
        assert!((r.born_second_moment - 0.5).abs() < 1e-12);
        assert!(r.sup_gap > 0.05);
    }

    #[test]
    fn variance_examples() {
        let coh = coherent_state(&[c(0.6, -0.2)], &[30], 1.0).unwrap();
        let w = variance_report(&coh, Scheme::Weyl).unwrap();
        assert!((w.var_x - 0.5).abs() < 1e-10 && (w.var_p - 0.5).abs() < 1e-10);
        assert!((w.product - 0.25).abs() < 1e-10);
        let aw = variance_report(&coh, Scheme::AntiWick).unwrap();
        assert!((aw.var_x - 1.0).abs() < 1e-10 && (aw.product - 1.0).abs() < 1e-10);
        let one = fock(1);
        let (w, aw) = (
            variance_report(&one, Scheme::Weyl).unwrap(),
            variance_report(&one, Scheme::AntiWick).unwrap(),
        );
        assert!((aw.var_x - w.var_x - 0.5).abs() < 1e-12);
        assert!((aw.var_p - w.var_p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn multimode_rejected() {
        let s = FockState::vacuum(&[2, 2], 1.0).unwrap();
        assert!(matches!(wigner(&s, 0.0, 0.0), Err(Error::SingleModeOnly(2))));
        assert!(matches!(q_marginal_x(&s, 0.0, 10), Err(Error::SingleModeOnly(2))));
    }
}

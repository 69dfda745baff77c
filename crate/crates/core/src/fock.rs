//! Truncated Fock-space states, coherent states, expectation values, the
//! Segal-Bargmann coefficient map and position wavefunctions.

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{check_hbar, DEFAULT_TAIL_TOLERANCE};
use crate::error::{Error, Result};
use crate::ladder::LadderExpr;
use crate::layout::FockLayout;

const NORM_TOLERANCE: f64 = 1e-10;

/// Dense state vector over a tensor-product Fock basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct FockState {
    layout: FockLayout,
    coefficients: Vec<Complex64>,
    hbar: f64,
}

/// On-disk form: `{"modeCount", "cutoff", "hbar", "coefficients": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct StateFile {
    mode_count: usize,
    cutoff: Vec<usize>,
    hbar: f64,
    coefficients: Vec<[f64; 2]>,
}

impl TryFrom<StateFile> for FockState {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        if file.cutoff.len() != file.mode_count {
            return Err(Error::Dimension {
                expected: file.mode_count,
                got: file.cutoff.len(),
            });
        }
        let coefficients = file
            .coefficients
            .iter()
            .map(|[re, im]| Complex64::new(*re, *im))
            .collect();
        FockState::new(&file.cutoff, coefficients, file.hbar)
    }
}

impl From<FockState> for StateFile {
    fn from(s: FockState) -> Self {
        StateFile {
            mode_count: s.mode_count(),
            cutoff: s.layout.cutoffs().to_vec(),
            hbar: s.hbar,
            coefficients: s.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl FockState {
    pub fn new(cutoffs: &[usize], coefficients: Vec<Complex64>, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        let layout = FockLayout::new(cutoffs)?;
        if coefficients.len() != layout.dim() {
            return Err(Error::Dimension {
                expected: layout.dim(),
                got: coefficients.len(),
            });
        }
        if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidParameter("state coefficients must be finite".into()));
        }
        Ok(FockState {
            layout,
            coefficients,
            hbar,
        })
    }

    pub fn vacuum(cutoffs: &[usize], hbar: f64) -> Result<Self> {
        FockState::number_state(&vec![0; cutoffs.len()], cutoffs, hbar)
    }

    /// `|n_1, ..., n_k>`.
    pub fn number_state(levels: &[usize], cutoffs: &[usize], hbar: f64) -> Result<Self> {
        let layout = FockLayout::new(cutoffs)?;
        if levels.len() != layout.mode_count() {
            return Err(Error::Dimension {
                expected: layout.mode_count(),
                got: levels.len(),
            });
        }
        if let Some(m) = (0..levels.len()).find(|&m| levels[m] >= cutoffs[m]) {
            return Err(Error::InvalidParameter(format!(
                "level {} on mode {} needs cutoff > {}",
                levels[m],
                m + 1,
                levels[m]
            )));
        }
        let mut coefficients = vec![Complex64::new(0.0, 0.0); layout.dim()];
        coefficients[layout.index(levels)] = Complex64::new(1.0, 0.0);
        FockState::new(cutoffs, coefficients, hbar)
    }

    pub fn mode_count(&self) -> usize {
        self.layout.mode_count()
    }

    pub fn cutoffs(&self) -> &[usize] {
        self.layout.cutoffs()
    }

    pub fn layout(&self) -> &FockLayout {
        &self.layout
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Same coefficients at a different `hbar`.
    pub fn with_hbar(&self, hbar: f64) -> Result<Self> {
        check_hbar(hbar)?;
        Ok(FockState {
            hbar,
            ..self.clone()
        })
    }

    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("cannot normalize the zero vector".into()));
        }
        Ok(FockState {
            coefficients: self.coefficients.iter().map(|c| c / norm).collect(),
            ..self.clone()
        })
    }

    /// Highest level with a nonzero coefficient, per mode.
    pub fn highest_occupied(&self) -> Vec<usize> {
        let mut top = vec![0; self.mode_count()];
        for (i, c) in self.coefficients.iter().enumerate() {
            if *c != Complex64::new(0.0, 0.0) {
                for (t, l) in top.iter_mut().zip(self.layout.levels(i)) {
                    *t = (*t).max(l);
                }
            }
        }
        top
    }

    /// Embeds into a basis with larger (or equal) cutoffs, padding with zeros.
    pub fn padded(&self, cutoffs: &[usize]) -> Result<Self> {
        if cutoffs.len() != self.mode_count() {
            return Err(Error::ModeMismatch {
                left: self.mode_count(),
                right: cutoffs.len(),
            });
        }
        if cutoffs.iter().zip(self.cutoffs()).any(|(new, old)| new < old) {
            return Err(Error::InvalidParameter("padding cannot shrink a cutoff".into()));
        }
        let layout = FockLayout::new(cutoffs)?;
        let mut coefficients = vec![Complex64::new(0.0, 0.0); layout.dim()];
        for (i, c) in self.coefficients.iter().enumerate() {
            coefficients[layout.index(&self.layout.levels(i))] = *c;
        }
        FockState::new(cutoffs, coefficients, self.hbar)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockState) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::Dimension {
                expected: self.layout.dim(),
                got: other.layout.dim(),
            });
        }
        Ok(self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Poisson tail `sum_{n >= cutoff} exp(-r2) r2^n / n!`: the mass a coherent
/// state with `|alpha|^2 = r2` loses when truncated at `cutoff` levels.
pub fn coherent_tail_mass(r2: f64, cutoff: usize) -> f64 {
    if r2 == 0.0 {
        return if cutoff == 0 { 1.0 } else { 0.0 };
    }
    let ln_r2 = r2.ln();
    let mut ln_term = -r2 + (0..cutoff).fold(0.0, |acc, n| acc + ln_r2 - ((n + 1) as f64).ln());
    let mut tail = 0.0;
    let mut n = cutoff;
    loop {
        let term = ln_term.exp();
        tail += term;
        if (n as f64) > r2 && term <= tail * 1e-20 {
            break;
        }
        n += 1;
        ln_term += ln_r2 - (n as f64).ln();
        if n > cutoff + 100_000 {
            break;
        }
    }
    tail.min(1.0)
}

/// Smallest cutoff whose coherent tail mass is below `tolerance`.
pub fn minimal_cutoff(r2: f64, tolerance: f64) -> usize {
    let mut n = 1;
    while coherent_tail_mass(r2, n) >= tolerance {
        n += 1;
    }
    n
}

/// Per-mode cutoffs that hold every listed coherent center below the default
/// tail tolerance, plus `margin` extra levels.
pub fn auto_cutoff(centers: &[Vec<Complex64>], mode_count: usize, margin: usize) -> Vec<usize> {
    let tol = DEFAULT_TAIL_TOLERANCE / mode_count.max(1) as f64;
    (0..mode_count)
        .map(|m| {
            centers
                .iter()
                .map(|c| minimal_cutoff(c[m].norm_sqr(), tol))
                .max()
                .unwrap_or(1)
                + margin
        })
        .collect()
}

pub fn coherent_state(alpha: &[Complex64], cutoffs: &[usize], hbar: f64) -> Result<FockState> {
    coherent_state_with_tolerance(alpha, cutoffs, hbar, DEFAULT_TAIL_TOLERANCE)
}

/// `prod_m exp(-|alpha_m|^2 / 2) sum_n alpha_m^n / sqrt(n!) |n>`, truncated.
///
/// Fails with [`Error::InadequateCutoff`] when the dropped mass
/// `1 - prod_m (1 - tail_m)` reaches `tolerance`.
pub fn coherent_state_with_tolerance(
    alpha: &[Complex64],
    cutoffs: &[usize],
    hbar: f64,
    tolerance: f64,
) -> Result<FockState> {
    check_hbar(hbar)?;
    let layout = FockLayout::new(cutoffs)?;
    if alpha.len() != layout.mode_count() {
        return Err(Error::Dimension {
            expected: layout.mode_count(),
            got: alpha.len(),
        });
    }
    let kept: f64 = alpha
        .iter()
        .zip(cutoffs)
        .map(|(a, &c)| 1.0 - coherent_tail_mass(a.norm_sqr(), c))
        .product();
    let dropped = 1.0 - kept;
    if dropped >= tolerance {
        let per_mode = tolerance / alpha.len() as f64;
        let minimal = alpha
            .iter()
            .map(|a| minimal_cutoff(a.norm_sqr(), per_mode))
            .max()
            .unwrap_or(1);
        return Err(Error::InadequateCutoff {
            cutoff: cutoffs.iter().copied().min().unwrap_or(0),
            tail_mass: dropped,
            tolerance,
            minimal,
        });
    }
    let factors: Vec<Vec<Complex64>> = alpha
        .iter()
        .zip(cutoffs)
        .map(|(a, &c)| {
            let mut v = Vec::with_capacity(c);
            let mut cur = Complex64::new((-a.norm_sqr() / 2.0).exp(), 0.0);
            for n in 0..c {
                v.push(cur);
                cur = cur * a / ((n + 1) as f64).sqrt();
            }
            v
        })
        .collect();
    let coefficients = (0..layout.dim())
        .map(|i| {
            layout
                .levels(i)
                .iter()
                .enumerate()
                .map(|(m, &l)| factors[m][l])
                .product()
        })
        .collect();
    FockState::new(cutoffs, coefficients, hbar)
}

/// `<psi| E |psi>`.
///
/// Matrices built from normal-ordered terms equal the compression of the
/// untruncated operator, so this is the exact expectation of `E` in the
/// truncated vector, with no truncation error to report.
pub fn expectation(psi: &FockState, e: &LadderExpr) -> Result<Complex64> {
    if e.mode_count() != psi.mode_count() {
        return Err(Error::ModeMismatch {
            left: e.mode_count(),
            right: psi.mode_count(),
        });
    }
    let image = e.apply(&psi.coefficients, &psi.layout, psi.hbar)?;
    Ok(psi
        .coefficients
        .iter()
        .zip(&image)
        .map(|(c, v)| c.conj() * v)
        .sum())
}

/// Holomorphic function `F(z) = sum_n c_n z^n / sqrt(n! hbar^|n|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SBFunction {
    layout: FockLayout,
    coefficients: Vec<Complex64>,
    hbar: f64,
}

impl SBFunction {
    pub fn new(cutoffs: &[usize], coefficients: Vec<Complex64>, hbar: f64) -> Result<Self> {
        let state = FockState::new(cutoffs, coefficients, hbar)?;
        Ok(segal_bargmann_transform(&state))
    }

    pub fn mode_count(&self) -> usize {
        self.layout.mode_count()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn layout(&self) -> &FockLayout {
        &self.layout
    }

    /// Norm in `L^2(mu_hbar)`, which the orthonormal monomials reduce to the
    /// coefficient norm.
    pub fn sb_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn evaluate(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.mode_count() {
            return Err(Error::Dimension {
                expected: self.mode_count(),
                got: z.len(),
            });
        }
        let sqrt_hbar = self.hbar.sqrt();
        let basis: Vec<Vec<Complex64>> = z
            .iter()
            .zip(self.layout.cutoffs())
            .map(|(zm, &c)| scaled_monomials(zm / sqrt_hbar, c))
            .collect();
        Ok(self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let product: Complex64 = self
                    .layout
                    .levels(i)
                    .iter()
                    .enumerate()
                    .map(|(m, &l)| basis[m][l])
                    .product();
                c * product
            })
            .sum())
    }
}

/// `w^n / sqrt(n!)` for `n < count`.
pub(crate) fn scaled_monomials(w: Complex64, count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    let mut cur = Complex64::new(1.0, 0.0);
    for n in 0..count {
        out.push(cur);
        cur = cur * w / ((n + 1) as f64).sqrt();
    }
    out
}

/// Maps `|n>` to the orthonormal monomial `z^n / sqrt(n! hbar^|n|)`.
pub fn segal_bargmann_transform(psi: &FockState) -> SBFunction {
    SBFunction {
        layout: psi.layout.clone(),
        coefficients: psi.coefficients.clone(),
        hbar: psi.hbar,
    }
}

/// Orthonormal Hermite functions `h_0..h_{count-1}` at `x`, with
/// `h_0(x) = (pi hbar)^(-1/4) exp(-x^2 / (2 hbar))`.
pub fn hermite_functions(x: f64, hbar: f64, count: usize) -> Vec<f64> {
    let gauss = (-x * x / (2.0 * hbar)).exp();
    hermite_recurrence(x / hbar.sqrt(), hbar, count)
        .into_iter()
        .map(|h| h * gauss)
        .collect()
}

/// The Hermite recurrence without the Gaussian factor, at a complex argument
/// `u = z / sqrt(hbar)`.
pub(crate) fn reduced_hermite(u: Complex64, hbar: f64, count: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(Complex64::new((std::f64::consts::PI * hbar).powf(-0.25), 0.0));
    for n in 0..count.saturating_sub(1) {
        let prev = if n == 0 { Complex64::new(0.0, 0.0) } else { out[n - 1] };
        let next = u * out[n] * (2.0 / (n + 1) as f64).sqrt() - prev * (n as f64 / (n + 1) as f64).sqrt();
        out.push(next);
    }
    out
}

fn hermite_recurrence(u: f64, hbar: f64, count: usize) -> Vec<f64> {
    reduced_hermite(Complex64::new(u, 0.0), hbar, count)
        .into_iter()
        .map(|c| c.re)
        .collect()
}

fn require_single_mode(psi: &FockState) -> Result<()> {
    if psi.mode_count() != 1 {
        return Err(Error::SingleModeOnly(psi.mode_count()));
    }
    Ok(())
}

/// `<x|psi> = sum_n c_n h_n(x)`.
pub fn position_wavefunction(psi: &FockState, x: f64) -> Result<Complex64> {
    require_single_mode(psi)?;
    let h = hermite_functions(x, psi.hbar, psi.coefficients.len());
    Ok(psi.coefficients.iter().zip(h).map(|(c, h)| c * h).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn coherent_vacuum_and_unit() {
        let v = coherent_state(&[c(0.0, 0.0)], &[4], 1.0).unwrap();
        assert_eq!(v.coefficients(), FockState::vacuum(&[4], 1.0).unwrap().coefficients());
        let s = coherent_state(&[c(1.0, 0.0)], &[20], 1.0).unwrap();
        let mut fact = 1.0;
        for n in 0..20 {
            if n > 0 {
                fact *= n as f64;
            }
            let expected = (-0.5f64).exp() / fact.sqrt();
            assert!((s.coefficients()[n].re - expected).abs() < 1e-15);
        }
        assert!((s.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn inadequate_cutoff_reports_minimum() {
        match coherent_state(&[c(2.0, 0.0)], &[5], 1.0) {
            Err(Error::InadequateCutoff { minimal, tail_mass, .. }) => {
                assert!(tail_mass > 1e-14);
                assert!(coherent_state(&[c(2.0, 0.0)], &[minimal], 1.0).is_ok());
                assert!(coherent_state(&[c(2.0, 0.0)], &[minimal - 1], 1.0).is_err());
            }
            other => panic!("expected cutoff error, got {other:?}"),
        }
    }

    #[test]
    fn tail_mass_matches_direct_sum() {
        let r2 = 3.7f64;
        let mut head = 0.0;
        let mut term = (-r2).exp();
        for n in 0..6 {
            head += term;
            term *= r2 / (n + 1) as f64;
        }
        assert!((coherent_tail_mass(r2, 6) - (1.0 - head)).abs() < 1e-14);
        assert_eq!(coherent_tail_mass(0.0, 1), 0.0);
    }

    #[test]
    fn expectation_examples() {
        let vac = FockState::vacuum(&[4], 1.0).unwrap();
        assert_eq!(expectation(&vac, &LadderExpr::number(1, 0)).unwrap(), c(0.0, 0.0));
        let x2aw = LadderExpr::position(1, 0)
            .pow(2)
            .add(&LadderExpr::scalar(1, crate::quantize::half_hbar()));
        assert!((expectation(&vac, &x2aw).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let coh = coherent_state(&[c(1.0, 0.0)], &[30], 1.0).unwrap();
        let x = expectation(&coh, &LadderExpr::position(1, 0)).unwrap();
        assert!((x - c(2f64.sqrt(), 0.0)).norm() <= 1e-10);
        let beta = c(0.3, -0.7);
        let coh = coherent_state(&[beta], &[30], 1.0).unwrap();
        assert!((expectation(&coh, &LadderExpr::annihilation(1, 0)).unwrap() - beta).norm() <= 1e-10);
    }

    #[test]
    fn sb_function_values() {
        let vac = segal_bargmann_transform(&FockState::vacuum(&[3], 2.0).unwrap());
        assert!((vac.evaluate(&[c(1.3, -0.2)]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let one = segal_bargmann_transform(&FockState::number_state(&[1], &[3], 2.0).unwrap());
        let z = c(0.4, 0.9);
        assert!((one.evaluate(&[z]).unwrap() - z / 2f64.sqrt()).norm() < 1e-15);
    }

    #[test]
    fn wavefunction_examples() {
        let vac = FockState::vacuum(&[3], 1.0).unwrap();
        let v = position_wavefunction(&vac, 0.0).unwrap();
        assert!((v.re - std::f64::consts::PI.powf(-0.25)).abs() < 1e-15);
        let one = FockState::number_state(&[1], &[3], 1.0).unwrap();
        assert_eq!(position_wavefunction(&one, 0.0).unwrap(), c(0.0, 0.0));
        let two = FockState::vacuum(&[2, 2], 1.0).unwrap();
        assert!(matches!(position_wavefunction(&two, 0.0), Err(Error::SingleModeOnly(2))));
    }

    #[test]
    fn hermite_recurrence_agrees_with_closed_form() {
        // h_2(x) = (pi hbar)^(-1/4) (2 u^2 - 1) / sqrt(2) e^{-u^2/2}, u = x / sqrt(hbar)
        let (x, hbar) = (0.8f64, 0.5f64);
        let u = x / hbar.sqrt();
        let expected = (std::f64::consts::PI * hbar).powf(-0.25) * (2.0 * u * u - 1.0) / 2f64.sqrt()
            * (-u * u / 2.0).exp();
        assert!((hermite_functions(x, hbar, 3)[2] - expected).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s = coherent_state(&[c(0.2, 0.1), c(-0.3, 0.0)], &[12, 11], 0.5).unwrap();
        let back = FockState::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(FockState::from_json(r#"{"modeCount":1,"cutoff":[2],"hbar":1,"coefficients":[[1,0]]}"#).is_err());
        assert!(FockState::from_json(r#"{"modeCount":1,"cutoff":[1],"hbar":1,"coefficients":[[1,0]],"x":1}"#).is_err());
    }

    #[test]
    fn padding_preserves_amplitudes() {
        let s = FockState::number_state(&[1, 2], &[2, 3], 1.0).unwrap();
        let p = s.padded(&[4, 4]).unwrap();
        assert_eq!(p.highest_occupied(), vec![1, 2]);
        assert_eq!(p.norm(), 1.0);
        assert!(s.padded(&[1, 3]).is_err());
    }
}

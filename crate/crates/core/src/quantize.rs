//! Weyl, Wick and anti-Wick quantization of polynomial symbols, the inverse
//! symbol maps, and a quadrature-built Toeplitz cross-check.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_DEGREE_CAP;
use crate::error::{Error, Result};
use crate::ladder::{antinormal_order_form, commutator, LadderExpr, OperatorMatrix};
use crate::layout::FockLayout;
use crate::poly::{binomial, Exponents, TermMap};
use crate::quadrature::QuadratureGrid;
use crate::scalar::{rational, Scalar};
use crate::symbol::{poisson_bracket, PhaseSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Weyl,
    Wick,
    AntiWick,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Weyl, Scheme::Wick, Scheme::AntiWick];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Weyl => "weyl",
            Scheme::Wick => "wick",
            Scheme::AntiWick => "antiwick",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weyl" => Ok(Scheme::Weyl),
            "wick" => Ok(Scheme::Wick),
            "antiwick" | "anti-wick" => Ok(Scheme::AntiWick),
            _ => Err(Error::InvalidParameter(format!("unknown scheme `{s}`"))),
        }
    }
}

/// Memo of single-mode Weyl images `Q(x^a p^b)`, keyed on `(a, b)`.
///
/// `S(a, b)`, the sum of all distinct words with `a` copies of `X` and `b`
/// copies of `P`, obeys `S(a, b) = X S(a-1, b) + P S(a, b-1)` (split on the
/// first letter). The average over all `(a+b)!` orderings is
/// `S(a, b) / C(a+b, a)`.
struct WeylTable {
    x: LadderExpr,
    p: LadderExpr,
    sums: HashMap<(u32, u32), LadderExpr>,
}

impl WeylTable {
    fn new() -> Self {
        let mut sums = HashMap::new();
        sums.insert((0, 0), LadderExpr::identity(1));
        WeylTable {
            x: LadderExpr::position(1, 0),
            p: LadderExpr::momentum(1, 0),
            sums,
        }
    }

    fn word_sum(&mut self, a: u32, b: u32) -> LadderExpr {
        if let Some(s) = self.sums.get(&(a, b)) {
            return s.clone();
        }
        let mut acc = LadderExpr::zero(1);
        if a > 0 {
            let tail = self.word_sum(a - 1, b);
            acc = acc.add(&self.x.mul(&tail));
        }
        if b > 0 {
            let tail = self.word_sum(a, b - 1);
            acc = acc.add(&self.p.mul(&tail));
        }
        self.sums.insert((a, b), acc.clone());
        acc
    }

    fn monomial(&mut self, a: u32, b: u32) -> LadderExpr {
        let words = binomial(a + b, a) as i64;
        self.word_sum(a, b).scale(&Scalar::from_ratio(1, words))
    }
}

/// Places a single-mode expression on `mode` of an `n`-mode system.
fn embed(single: &LadderExpr, n: usize, mode: usize) -> LadderExpr {
    let mut out = TermMap::zero(n);
    for (key, c) in single.terms().iter() {
        let mut k = vec![(0, 0); n];
        k[mode] = key[0];
        out.add_term(k, c);
    }
    LadderExpr::from_terms(out)
}

fn check_cap(f: &PhaseSymbol, cap: u32) -> Result<()> {
    let degree = f.max_mode_degree();
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    Ok(())
}

pub fn quantize(f: &PhaseSymbol, scheme: Scheme) -> Result<LadderExpr> {
    quantize_with_cap(f, scheme, DEFAULT_DEGREE_CAP)
}

/// Quantizes `f`, rejecting symbols whose per-mode degree exceeds `cap`.
pub fn quantize_with_cap(f: &PhaseSymbol, scheme: Scheme, cap: u32) -> Result<LadderExpr> {
    check_cap(f, cap)?;
    Ok(match scheme {
        Scheme::Weyl => weyl(f, &mut WeylTable::new()),
        Scheme::Wick => wick(f),
        Scheme::AntiWick => anti_wick(f),
    })
}

fn weyl(f: &PhaseSymbol, table: &mut WeylTable) -> LadderExpr {
    let n = f.mode_count();
    let mut out = LadderExpr::zero(n);
    for (key, c) in f.to_xp().terms().iter() {
        let mut term = LadderExpr::scalar(n, c.clone());
        for (mode, &(a, b)) in key.iter().enumerate() {
            if a + b > 0 {
                term = term.mul(&embed(&table.monomial(a, b), n, mode));
            }
        }
        out = out.add(&term);
    }
    out
}

/// `alpha^j conj(alpha)^k -> (a^dagger)^k a^j`
fn wick(f: &PhaseSymbol) -> LadderExpr {
    let mut out = TermMap::zero(f.mode_count());
    for (key, c) in f.terms().iter() {
        out.add_term(key.iter().map(|&(j, k)| (k, j)).collect(), c);
    }
    LadderExpr::from_terms(out)
}

/// `alpha^j conj(alpha)^k -> a^j (a^dagger)^k`, then normal-ordered.
fn anti_wick(f: &PhaseSymbol) -> LadderExpr {
    let n = f.mode_count();
    let mut out = LadderExpr::zero(n);
    for (key, c) in f.terms().iter() {
        let left = LadderExpr::monomial(n, key.iter().map(|&(j, _)| (0, j)).collect(), c.clone());
        let right = LadderExpr::monomial(n, key.iter().map(|&(_, k)| (k, 0)).collect(), Scalar::one());
        out = out.add(&left.mul(&right));
    }
    out
}

/// Inverse of [`quantize`]: the unique polynomial symbol whose quantization is `e`.
pub fn symbol_of(e: &LadderExpr, scheme: Scheme) -> PhaseSymbol {
    let n = e.mode_count();
    match scheme {
        Scheme::Wick => {
            let mut out = TermMap::zero(n);
            for (key, c) in e.terms().iter() {
                out.add_term(key.iter().map(|&(m, a)| (a, m)).collect(), c);
            }
            PhaseSymbol::from_terms(out)
        }
        Scheme::AntiWick => PhaseSymbol::from_terms(antinormal_order_form(e).terms().clone()),
        Scheme::Weyl => weyl_symbol(e),
    }
}

/// Peels off the top-degree normal-ordered term: the Weyl image of
/// `alpha^n conj(alpha)^m` is `(a^dagger)^m a^n` plus terms of strictly lower
/// total degree, so the loop terminates.
fn weyl_symbol(e: &LadderExpr) -> PhaseSymbol {
    let n = e.mode_count();
    let mut table = WeylTable::new();
    let mut rest = e.clone();
    let mut symbol = PhaseSymbol::zero(n);
    while let Some((key, c)) = leading_term(&rest) {
        let piece = PhaseSymbol::monomial(n, key.iter().map(|&(m, a)| (a, m)).collect(), c);
        rest = rest.sub(&weyl(&piece, &mut table));
        symbol = symbol.add(&piece);
    }
    symbol
}

fn leading_term(e: &LadderExpr) -> Option<(Exponents, Scalar)> {
    e.terms()
        .iter()
        .max_by_key(|(key, _)| (key.iter().map(|(m, a)| m + a).sum::<u32>(), (*key).clone()))
        .map(|(key, c)| (key.clone(), c.clone()))
}

/// `symbol_of(quantize(f, from), to)`.
pub fn convert_scheme(f: &PhaseSymbol, from: Scheme, to: Scheme) -> Result<PhaseSymbol> {
    Ok(symbol_of(&quantize(f, from)?, to))
}

/// `(1 / (i hbar)) [Q(f), Q(g)] - Q({f, g})` in Weyl quantization.
pub fn groenewold_residual(f: &PhaseSymbol, g: &PhaseSymbol) -> Result<LadderExpr> {
    let qf = quantize(f, Scheme::Weyl)?;
    let qg = quantize(g, Scheme::Weyl)?;
    let inv_i_hbar = -&(&Scalar::i() * &Scalar::hbar_pow(-1));
    let lhs = commutator(&qf, &qg)?.scale(&inv_i_hbar);
    Ok(lhs.sub(&quantize(&poisson_bracket(f, g)?, Scheme::Weyl)?))
}

/// Toeplitz matrix built by quadrature together with its deviation from the
/// symbolic anti-Wick matrix.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    pub matrix: OperatorMatrix,
    /// Largest entrywise deviation from the symbolic route on the protected block.
    pub deviation: f64,
    pub tolerance: f64,
    /// Set when `deviation > tolerance`, i.e. the grid is too coarse.
    pub flagged: bool,
}

pub const TOEPLITZ_TOLERANCE: f64 = 1e-7;

/// `(1/pi^n) int f(alpha) |alpha><alpha| d^(2n) alpha` on the truncated
/// basis, with `<m|alpha><alpha|k> = exp(-|alpha|^2) alpha^m conj(alpha)^k / sqrt(m! k!)`.
pub fn toeplitz_matrix(
    f: &PhaseSymbol,
    grid: &QuadratureGrid,
    cutoffs: &[usize],
    hbar: f64,
) -> Result<ToeplitzMatrix> {
    let n = f.mode_count();
    if grid.mode_count() != n {
        return Err(Error::ModeMismatch {
            left: n,
            right: grid.mode_count(),
        });
    }
    let layout = FockLayout::new(cutoffs)?;
    if layout.mode_count() != n {
        return Err(Error::ModeMismatch {
            left: n,
            right: layout.mode_count(),
        });
    }
    let reference = quantize(f, Scheme::AntiWick)?.to_matrix(&layout, hbar)?;
    let numeric = f.at_hbar(hbar);
    let dim = layout.dim();
    let levels: Vec<Vec<usize>> = (0..dim).map(|i| layout.levels(i)).collect();
    let max_level = cutoffs.iter().copied().max().unwrap_or(1);
    let inv_sqrt_fact: Vec<f64> = (0..max_level)
        .scan(1.0f64, |acc, k| {
            if k > 0 {
                *acc /= (k as f64).sqrt();
            }
            Some(*acc)
        })
        .collect();
    let pi_n = std::f64::consts::PI.powi(n as i32);
    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for pt in grid.points() {
        let alpha = pt.alpha();
        let gauss: f64 = alpha.iter().map(|a| (-a.norm_sqr()).exp()).product();
        let weight = numeric.evaluate_unchecked(&alpha) * (gauss * pt.lebesgue_weight / pi_n);
        // basis amplitudes alpha^m / sqrt(m!) for every basis vector
        let amp: Vec<Complex64> = levels
            .iter()
            .map(|lv| {
                lv.iter()
                    .enumerate()
                    .map(|(mode, &l)| alpha[mode].powu(l as u32) * inv_sqrt_fact[l])
                    .product()
            })
            .collect();
        for row in 0..dim {
            let w = weight * amp[row];
            for col in 0..dim {
                data[row * dim + col] += w * amp[col].conj();
            }
        }
    }
    let matrix = OperatorMatrix::from_data(layout.clone(), data, hbar)?;
    let protected = layout.protected_indices(f.max_mode_degree() as usize);
    let deviation = matrix.max_abs_diff_on(&reference, &protected);
    Ok(ToeplitzMatrix {
        matrix,
        deviation,
        tolerance: TOEPLITZ_TOLERANCE,
        flagged: deviation.is_nan() || deviation > TOEPLITZ_TOLERANCE,
    })
}

/// `hbar/2` as a scalar, used by tests and reports.
pub fn half_hbar() -> Scalar {
    Scalar::hbar().scale(&rational(1, 2))
}

//! Commutative polynomial observables on phase space.
//!
//! Symbols are stored in complex amplitudes `alpha_m` and their conjugates;
//! a key `(j, k)` on mode `m` stands for `alpha_m^j conj(alpha_m)^k`.
//! Position and momentum are `x = sqrt(2 hbar) Re(alpha)` and
//! `p = sqrt(2 hbar) Im(alpha)`, so that `[a, a^dagger] = 1` internally.

use std::collections::BTreeMap;
use std::fmt;

use num::complex::Complex64;

use crate::config::DEFAULT_DEGREE_CAP;
use crate::error::{Error, Result};
use crate::expr::{self, ExprAlgebra, VarName};
use crate::poly::{expand_linear_powers, Exponents, TermMap};
use crate::scalar::Scalar;

/// How `z`/`zbar` tokens are interpreted when parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableConvention {
    /// Position/momentum input; `z` tokens are rejected.
    Xp,
    /// `z` is `alpha`, `zbar` is `conj(alpha)`.
    Alpha,
    /// Segal-Bargmann convention `alpha = conj(z)`: `z` is `conj(alpha)`, `zbar` is `alpha`.
    Bargmann,
}

impl std::str::FromStr for VariableConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xp" => Ok(VariableConvention::Xp),
            "alpha" => Ok(VariableConvention::Alpha),
            "bargmann" | "sb" => Ok(VariableConvention::Bargmann),
            other => Err(Error::InvalidParameter(format!(
                "unknown variable convention `{other}` (expected xp, alpha or bargmann)"
            ))),
        }
    }
}

/// Polynomial `sum c_{jk} alpha^j conj(alpha)^k` (multi-index over modes).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PhaseSymbol {
    terms: TermMap,
}

impl PhaseSymbol {
    pub fn zero(mode_count: usize) -> Self {
        PhaseSymbol {
            terms: TermMap::zero(mode_count),
        }
    }

    pub fn one(mode_count: usize) -> Self {
        PhaseSymbol::constant(mode_count, Scalar::one())
    }

    pub fn constant(mode_count: usize, c: Scalar) -> Self {
        PhaseSymbol {
            terms: TermMap::constant(mode_count, c),
        }
    }

    pub fn from_terms(terms: TermMap) -> Self {
        PhaseSymbol { terms }
    }

    pub fn monomial(mode_count: usize, key: Exponents, c: Scalar) -> Self {
        PhaseSymbol {
            terms: TermMap::single(mode_count, key, c),
        }
    }

    pub fn alpha(mode_count: usize, mode: usize) -> Self {
        PhaseSymbol {
            terms: TermMap::on_mode(mode_count, mode, (1, 0), Scalar::one()),
        }
    }

    pub fn alpha_bar(mode_count: usize, mode: usize) -> Self {
        PhaseSymbol {
            terms: TermMap::on_mode(mode_count, mode, (0, 1), Scalar::one()),
        }
    }

    /// `x = t (alpha + conj(alpha))`.
    pub fn x(mode_count: usize, mode: usize) -> Self {
        let t = Scalar::t_pow(1);
        PhaseSymbol::alpha(mode_count, mode)
            .add(&PhaseSymbol::alpha_bar(mode_count, mode))
            .scale(&t)
    }

    /// `p = -i t (alpha - conj(alpha))`.
    pub fn p(mode_count: usize, mode: usize) -> Self {
        let c = &Scalar::i() * &Scalar::t_pow(1);
        PhaseSymbol::alpha_bar(mode_count, mode)
            .sub(&PhaseSymbol::alpha(mode_count, mode))
            .scale(&c)
    }

    pub fn mode_count(&self) -> usize {
        self.terms.mode_count()
    }

    pub fn terms(&self) -> &TermMap {
        &self.terms
    }

    pub fn coefficient(&self, key: &[(u32, u32)]) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &PhaseSymbol) -> PhaseSymbol {
        PhaseSymbol {
            terms: self.terms.add(&other.terms),
        }
    }

    pub fn sub(&self, other: &PhaseSymbol) -> PhaseSymbol {
        PhaseSymbol {
            terms: self.terms.sub(&other.terms),
        }
    }

    pub fn neg(&self) -> PhaseSymbol {
        PhaseSymbol {
            terms: self.terms.neg(),
        }
    }

    pub fn mul(&self, other: &PhaseSymbol) -> PhaseSymbol {
        PhaseSymbol {
            terms: self.terms.commutative_mul(&other.terms),
        }
    }

    pub fn scale(&self, c: &Scalar) -> PhaseSymbol {
        PhaseSymbol {
            terms: self.terms.scale(c),
        }
    }

    pub fn pow(&self, n: u32) -> PhaseSymbol {
        (0..n).fold(PhaseSymbol::one(self.mode_count()), |acc, _| acc.mul(self))
    }

    /// Complex conjugate of the function.
    pub fn conj(&self) -> PhaseSymbol {
        PhaseSymbol {
            terms: self.terms.conj_swapped(),
        }
    }

    /// Real-valued iff `coeff(j, k) = conj(coeff(k, j))` for all exponent pairs.
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Largest per-mode total degree.
    pub fn max_mode_degree(&self) -> u32 {
        self.terms.max_mode_degree()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.total_degree()
    }

    /// `d/d alpha_mode`
    pub fn d_alpha(&self, mode: usize) -> PhaseSymbol {
        self.differentiate(mode, false)
    }

    /// `d/d conj(alpha_mode)`
    pub fn d_alpha_bar(&self, mode: usize) -> PhaseSymbol {
        self.differentiate(mode, true)
    }

    fn differentiate(&self, mode: usize, conjugate: bool) -> PhaseSymbol {
        let mut out = TermMap::zero(self.mode_count());
        for (key, c) in self.terms.iter() {
            let (j, k) = key[mode];
            let power = if conjugate { k } else { j };
            if power == 0 {
                continue;
            }
            let mut nk = key.clone();
            nk[mode] = if conjugate { (j, k - 1) } else { (j - 1, k) };
            out.add_term(nk, &(c * &Scalar::from_int(power as i64)));
        }
        PhaseSymbol { terms: out }
    }

    /// Position/momentum representation.
    pub fn to_xp(&self) -> XpForm {
        // alpha = (x + i p) / (2t), conj(alpha) = (x - i p) / (2t)
        let n = self.mode_count();
        let half_inv_t = Scalar::t_pow(-1).scale(&crate::scalar::rational(1, 2));
        let i_half_inv_t = &half_inv_t * &Scalar::i();
        let neg_i_half_inv_t = -&i_half_inv_t;
        let mut out = TermMap::zero(n);
        for (key, c) in self.terms.iter() {
            let mut acc = TermMap::constant(n, c.clone());
            for (mode, &(j, k)) in key.iter().enumerate() {
                if j == 0 && k == 0 {
                    continue;
                }
                let expansion = expand_linear_powers(
                    j,
                    k,
                    (&half_inv_t, &i_half_inv_t),
                    (&half_inv_t, &neg_i_half_inv_t),
                );
                let mut factor = TermMap::zero(n);
                for (pair, coef) in expansion {
                    factor.add_term(on_mode_key(n, mode, pair), &coef);
                }
                acc = acc.commutative_mul(&factor);
            }
            out.add_assign(&acc);
        }
        XpForm { terms: out }
    }

    pub fn from_xp(xp: &XpForm) -> PhaseSymbol {
        xp.to_alpha()
    }

    /// Numeric value at `point` (one complex amplitude per mode).
    pub fn evaluate(&self, point: &[Complex64], hbar: f64) -> Result<Complex64> {
        if point.len() != self.mode_count() {
            return Err(Error::Dimension {
                expected: self.mode_count(),
                got: point.len(),
            });
        }
        Ok(self.at_hbar(hbar).evaluate_unchecked(point))
    }

    /// Coefficients with `hbar` substituted.
    pub fn at_hbar(&self, hbar: f64) -> NumericSymbol {
        let mut terms = BTreeMap::new();
        for (k, c) in self.terms.iter() {
            let v = c.eval(hbar);
            if v != Complex64::new(0.0, 0.0) {
                terms.insert(k.clone(), v);
            }
        }
        NumericSymbol {
            mode_count: self.mode_count(),
            terms,
        }
    }

    /// Canonical text in the expression grammar.
    ///
    /// Position/momentum form is preferred when its coefficients are integer
    /// powers of `hbar`; otherwise the `alpha` form is used.
    pub fn pretty(&self) -> String {
        let xp = self.to_xp();
        let even_nonneg = |t: &TermMap| {
            t.iter()
                .all(|(_, c)| c.terms().all(|(e, _)| e >= 0 && e % 2 == 0))
        };
        if even_nonneg(&xp.terms) {
            return xp.pretty();
        }
        if even_nonneg(&self.terms) {
            return self.pretty_alpha();
        }
        let even = |t: &TermMap| t.iter().all(|(_, c)| c.terms().all(|(e, _)| e % 2 == 0));
        if even(&xp.terms) && !even(&self.terms) {
            return xp.pretty();
        }
        self.pretty_alpha()
    }

    /// Text using `a` for `alpha` and `abar` for its conjugate.
    pub fn pretty_alpha(&self) -> String {
        render(&self.terms, "a", "abar")
    }
}

impl fmt::Display for PhaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Debug for PhaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhaseSymbol({})", self.pretty_alpha())
    }
}

fn on_mode_key(n: usize, mode: usize, pair: (u32, u32)) -> Exponents {
    let mut key = vec![(0, 0); n];
    key[mode] = pair;
    key
}

fn render(terms: &TermMap, first: &str, second: &str) -> String {
    let n = terms.mode_count();
    let items: Vec<(Scalar, Vec<String>)> = terms
        .iter()
        .rev()
        .map(|(key, c)| {
            let factors = key
                .iter()
                .enumerate()
                .flat_map(|(m, &(j, k))| {
                    [
                        expr::power_factor(first, m, n, j),
                        expr::power_factor(second, m, n, k),
                    ]
                })
                .flatten()
                .collect();
            (c.clone(), factors)
        })
        .collect();
    expr::render_terms(&items)
}

/// Symbol written as `sum c_{jk} x^j p^k` per mode.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XpForm {
    terms: TermMap,
}

impl XpForm {
    pub fn from_terms(terms: TermMap) -> Self {
        XpForm { terms }
    }

    pub fn terms(&self) -> &TermMap {
        &self.terms
    }

    pub fn mode_count(&self) -> usize {
        self.terms.mode_count()
    }

    pub fn to_alpha(&self) -> PhaseSymbol {
        // x = t alpha + t conj(alpha), p = -i t alpha + i t conj(alpha)
        let n = self.mode_count();
        let t = Scalar::t_pow(1);
        let it = &Scalar::i() * &t;
        let neg_it = -&it;
        let mut out = TermMap::zero(n);
        for (key, c) in self.terms.iter() {
            let mut acc = TermMap::constant(n, c.clone());
            for (mode, &(j, k)) in key.iter().enumerate() {
                if j == 0 && k == 0 {
                    continue;
                }
                let expansion = expand_linear_powers(j, k, (&t, &t), (&neg_it, &it));
                let mut factor = TermMap::zero(n);
                for (pair, coef) in expansion {
                    factor.add_term(on_mode_key(n, mode, pair), &coef);
                }
                acc = acc.commutative_mul(&factor);
            }
            out.add_assign(&acc);
        }
        PhaseSymbol { terms: out }
    }

    pub fn pretty(&self) -> String {
        render(&self.terms, "x", "p")
    }
}

/// Symbol with `hbar` already substituted.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSymbol {
    mode_count: usize,
    terms: BTreeMap<Exponents, Complex64>,
}

impl NumericSymbol {
    pub fn new(mode_count: usize) -> Self {
        NumericSymbol {
            mode_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn add_term(&mut self, key: Exponents, c: Complex64) {
        *self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex64)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &NumericSymbol) -> NumericSymbol {
        let mut out = NumericSymbol::new(self.mode_count);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key = k1
                    .iter()
                    .zip(k2)
                    .map(|(a, b)| (a.0 + b.0, a.1 + b.1))
                    .collect();
                out.add_term(key, c1 * c2);
            }
        }
        out
    }

    pub(crate) fn evaluate_unchecked(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(key, c)| {
                key.iter().zip(point).fold(*c, |acc, (&(j, k), a)| {
                    acc * a.powu(j) * a.conj().powu(k)
                })
            })
            .sum()
    }

    /// Integral against the unit-mass Gaussian `prod_m exp(-|alpha_m|^2) / pi`,
    /// using `int alpha^j conj(alpha)^k = delta_{jk} j!`.
    pub fn moment_integral(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(key, _)| key.iter().all(|(j, k)| j == k))
            .map(|(key, c)| {
                let weight: f64 = key
                    .iter()
                    .map(|&(j, _)| (1..=j).map(f64::from).product::<f64>())
                    .product();
                c * weight
            })
            .sum()
    }
}

struct SymbolAlgebra {
    mode_count: usize,
    convention: VariableConvention,
}

impl ExprAlgebra for SymbolAlgebra {
    type Value = PhaseSymbol;

    fn scalar(&self, s: Scalar) -> PhaseSymbol {
        PhaseSymbol::constant(self.mode_count, s)
    }

    fn variable(&self, name: VarName, mode: usize, position: usize) -> Result<PhaseSymbol> {
        if mode >= self.mode_count {
            return Err(Error::ModeIndex {
                index: mode + 1,
                mode_count: self.mode_count,
                position,
            });
        }
        let n = self.mode_count;
        let unknown = || Error::UnknownVariable {
            name: name.as_str().to_string(),
            position,
        };
        Ok(match (name, self.convention) {
            (VarName::X, _) => PhaseSymbol::x(n, mode),
            (VarName::P, _) => PhaseSymbol::p(n, mode),
            (VarName::A, _) => PhaseSymbol::alpha(n, mode),
            (VarName::ABar, _) => PhaseSymbol::alpha_bar(n, mode),
            (VarName::Z, VariableConvention::Alpha) => PhaseSymbol::alpha(n, mode),
            (VarName::ZBar, VariableConvention::Alpha) => PhaseSymbol::alpha_bar(n, mode),
            (VarName::Z, VariableConvention::Bargmann) => PhaseSymbol::alpha_bar(n, mode),
            (VarName::ZBar, VariableConvention::Bargmann) => PhaseSymbol::alpha(n, mode),
            (VarName::Z | VarName::ZBar, VariableConvention::Xp) => return Err(unknown()),
            (VarName::Ad, _) => return Err(unknown()),
        })
    }

    fn add(&self, a: &PhaseSymbol, b: &PhaseSymbol) -> PhaseSymbol {
        a.add(b)
    }

    fn sub(&self, a: &PhaseSymbol, b: &PhaseSymbol) -> PhaseSymbol {
        a.sub(b)
    }

    fn mul(&self, a: &PhaseSymbol, b: &PhaseSymbol) -> PhaseSymbol {
        a.mul(b)
    }

    fn neg(&self, a: &PhaseSymbol) -> PhaseSymbol {
        a.neg()
    }

    fn as_scalar(&self, a: &PhaseSymbol) -> Option<Scalar> {
        a.terms.as_constant()
    }

    fn max_mode_degree(&self, a: &PhaseSymbol) -> u32 {
        a.max_mode_degree()
    }
}

pub fn parse_symbol(
    text: &str,
    mode_count: usize,
    convention: VariableConvention,
) -> Result<PhaseSymbol> {
    parse_symbol_with_cap(text, mode_count, convention, DEFAULT_DEGREE_CAP)
}

pub fn parse_symbol_with_cap(
    text: &str,
    mode_count: usize,
    convention: VariableConvention,
    degree_cap: u32,
) -> Result<PhaseSymbol> {
    if mode_count == 0 {
        return Err(Error::InvalidParameter("mode count must be positive".into()));
    }
    let ast = expr::parse(text)?;
    expr::evaluate(
        &ast,
        &SymbolAlgebra {
            mode_count,
            convention,
        },
        degree_cap,
    )
}

/// `{f, g} = sum_m (df/dx_m dg/dp_m - df/dp_m dg/dx_m)`, computed as
/// `(i / hbar) sum_m (df/d conj(alpha) dg/d alpha - df/d alpha dg/d conj(alpha))`.
pub fn poisson_bracket(f: &PhaseSymbol, g: &PhaseSymbol) -> Result<PhaseSymbol> {
    if f.mode_count() != g.mode_count() {
        return Err(Error::ModeMismatch {
            left: f.mode_count(),
            right: g.mode_count(),
        });
    }
    let mut acc = PhaseSymbol::zero(f.mode_count());
    for m in 0..f.mode_count() {
        let term = f
            .d_alpha_bar(m)
            .mul(&g.d_alpha(m))
            .sub(&f.d_alpha(m).mul(&g.d_alpha_bar(m)));
        acc = acc.add(&term);
    }
    Ok(acc.scale(&(&Scalar::i() * &Scalar::hbar_pow(-1))))
}

/// Integral of `f` against the unit-mass Gaussian in `alpha` coordinates.
pub fn gaussian_moment_integral(f: &PhaseSymbol, hbar: f64) -> Complex64 {
    f.at_hbar(hbar).moment_integral()
}

pub fn evaluate_symbol(f: &PhaseSymbol, point: &[Complex64], hbar: f64) -> Result<Complex64> {
    f.evaluate(point, hbar)
}

/// Segal-Bargmann Gaussian `mu_hbar(z) = exp(-|z|^2 / hbar) / (pi hbar)^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMeasure {
    pub hbar: f64,
    pub mode_count: usize,
}

impl GaussianMeasure {
    pub fn new(hbar: f64, mode_count: usize) -> Result<Self> {
        crate::config::check_hbar(hbar)?;
        if mode_count == 0 {
            return Err(Error::InvalidParameter("mode count must be positive".into()));
        }
        Ok(GaussianMeasure { hbar, mode_count })
    }

    pub fn density(&self, z: &[Complex64]) -> f64 {
        let r2: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        (-r2 / self.hbar).exp() / (std::f64::consts::PI * self.hbar).powi(self.mode_count as i32)
    }

    /// Integral of a symbol given in `alpha` coordinates, with `z = sqrt(hbar) alpha`.
    pub fn integrate(&self, f: &PhaseSymbol) -> Complex64 {
        gaussian_moment_integral(f, self.hbar)
    }
}

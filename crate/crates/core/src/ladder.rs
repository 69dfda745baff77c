//! Noncommutative polynomials in bosonic ladder operators.
//!
//! Expressions are kept in normal order: a key `(m, n)` on a mode stands for
//! `(a^dagger)^m a^n` on that mode, with `[a, a^dagger] = 1`. Operators on
//! different modes commute.

use std::fmt;

use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{self, ExprAlgebra, VarName};
use crate::layout::FockLayout;
use crate::poly::{binomial, Exponents, TermMap};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Creation,
    Annihilation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        LadderOp {
            mode,
            kind: LadderKind::Creation,
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        LadderOp {
            mode,
            kind: LadderKind::Annihilation,
        }
    }
}

/// A coefficient times an ordered product of ladder operators.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderWord {
    pub coefficient: Scalar,
    pub ops: Vec<LadderOp>,
}

impl LadderWord {
    pub fn new(coefficient: Scalar, ops: Vec<LadderOp>) -> Self {
        LadderWord { coefficient, ops }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LadderExpr {
    terms: TermMap,
}

/// `(a^dagger)^m1 a^n1 (a^dagger)^m2 a^n2` on one mode, in normal order:
/// `sum_k k! C(n1, k) C(m2, k) (a^dagger)^(m1 + m2 - k) a^(n1 + n2 - k)`.
fn single_mode_product(left: (u32, u32), right: (u32, u32)) -> Vec<((u32, u32), u64)> {
    let (m1, n1) = left;
    let (m2, n2) = right;
    (0..=n1.min(m2))
        .map(|k| {
            let c = binomial(n1, k) * binomial(m2, k) * crate::poly::factorial(k);
            ((m1 + m2 - k, n1 + n2 - k), c)
        })
        .collect()
}

impl LadderExpr {
    pub fn zero(mode_count: usize) -> Self {
        LadderExpr {
            terms: TermMap::zero(mode_count),
        }
    }

    pub fn identity(mode_count: usize) -> Self {
        LadderExpr::scalar(mode_count, Scalar::one())
    }

    pub fn scalar(mode_count: usize, c: Scalar) -> Self {
        LadderExpr {
            terms: TermMap::constant(mode_count, c),
        }
    }

    /// Builds from normal-ordered `(creation, annihilation)` keys.
    pub fn from_terms(terms: TermMap) -> Self {
        LadderExpr { terms }
    }

    pub fn monomial(mode_count: usize, key: Exponents, c: Scalar) -> Self {
        LadderExpr {
            terms: TermMap::single(mode_count, key, c),
        }
    }

    pub fn annihilation(mode_count: usize, mode: usize) -> Self {
        LadderExpr {
            terms: TermMap::on_mode(mode_count, mode, (0, 1), Scalar::one()),
        }
    }

    pub fn creation(mode_count: usize, mode: usize) -> Self {
        LadderExpr {
            terms: TermMap::on_mode(mode_count, mode, (1, 0), Scalar::one()),
        }
    }

    pub fn number(mode_count: usize, mode: usize) -> Self {
        LadderExpr {
            terms: TermMap::on_mode(mode_count, mode, (1, 1), Scalar::one()),
        }
    }

    /// `X = sqrt(hbar/2) (a + a^dagger)`.
    pub fn position(mode_count: usize, mode: usize) -> Self {
        LadderExpr::annihilation(mode_count, mode)
            .add(&LadderExpr::creation(mode_count, mode))
            .scale(&Scalar::t_pow(1))
    }

    /// `P = i sqrt(hbar/2) (a^dagger - a)`.
    pub fn momentum(mode_count: usize, mode: usize) -> Self {
        LadderExpr::creation(mode_count, mode)
            .sub(&LadderExpr::annihilation(mode_count, mode))
            .scale(&(&Scalar::i() * &Scalar::t_pow(1)))
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

    /// Largest total number of ladder factors in any term.
    pub fn degree(&self) -> u32 {
        self.terms.total_degree()
    }

    pub fn max_mode_degree(&self) -> u32 {
        self.terms.max_mode_degree()
    }

    pub fn add(&self, other: &LadderExpr) -> LadderExpr {
        LadderExpr {
            terms: self.terms.add(&other.terms),
        }
    }

    pub fn sub(&self, other: &LadderExpr) -> LadderExpr {
        LadderExpr {
            terms: self.terms.sub(&other.terms),
        }
    }

    pub fn neg(&self) -> LadderExpr {
        LadderExpr {
            terms: self.terms.neg(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LadderExpr {
        LadderExpr {
            terms: self.terms.scale(c),
        }
    }

    /// Operator product `self * other`, returned in normal order.
    pub fn mul(&self, other: &LadderExpr) -> LadderExpr {
        debug_assert_eq!(self.mode_count(), other.mode_count());
        let n = self.mode_count();
        let mut out = TermMap::zero(n);
        for (k1, c1) in self.terms.iter() {
            for (k2, c2) in other.terms.iter() {
                let coef = c1 * c2;
                // Cartesian product of per-mode expansions.
                let mut partial: Vec<(Exponents, u64)> = vec![(Vec::with_capacity(n), 1)];
                for m in 0..n {
                    let expansion = single_mode_product(k1[m], k2[m]);
                    partial = partial
                        .into_iter()
                        .flat_map(|(key, w)| {
                            expansion.iter().map(move |(pair, c)| {
                                let mut k = key.clone();
                                k.push(*pair);
                                (k, w * c)
                            })
                        })
                        .collect();
                }
                for (key, w) in partial {
                    out.add_term(key, &(&coef * &Scalar::from_int(w as i64)));
                }
            }
        }
        LadderExpr { terms: out }
    }

    pub fn pow(&self, n: u32) -> LadderExpr {
        (0..n).fold(LadderExpr::identity(self.mode_count()), |acc, _| acc.mul(self))
    }

    /// Hermitian adjoint: `((a^dagger)^m a^n)^dagger = (a^dagger)^n a^m`.
    pub fn adjoint(&self) -> LadderExpr {
        LadderExpr {
            terms: self.terms.conj_swapped(),
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        *self == self.adjoint()
    }

    /// Largest `k` such that every coefficient carries `hbar^k` after writing
    /// each ladder operator as `(X +- i P) / sqrt(2 hbar)`.
    ///
    /// A term of degree `d` contributes `(min t-exponent - d) / 2`. Returns
    /// `None` for the zero operator.
    pub fn hbar_order(&self) -> Option<i32> {
        self.terms
            .iter()
            .map(|(key, c)| {
                let d: u32 = key.iter().map(|(m, n)| m + n).sum();
                let e = c.min_exponent().unwrap_or(0);
                (e - d as i32).div_euclid(2)
            })
            .min()
    }

    /// Normal-ordered ladder-operator text, using `ad` for creation and `a`
    /// for annihilation.
    pub fn pretty(&self) -> String {
        let n = self.mode_count();
        let items: Vec<(Scalar, Vec<String>)> = self
            .terms
            .iter()
            .rev()
            .map(|(key, c)| {
                let factors = key
                    .iter()
                    .enumerate()
                    .flat_map(|(mode, &(m, a))| {
                        [
                            expr::power_factor("ad", mode, n, m),
                            expr::power_factor("a", mode, n, a),
                        ]
                    })
                    .flatten()
                    .collect();
                (c.clone(), factors)
            })
            .collect();
        expr::render_terms(&items)
    }

    /// Realizes the expression as a dense matrix on the truncated basis.
    ///
    /// Terms are applied in normal order, so every entry equals the
    /// corresponding entry of the untruncated operator.
    pub fn to_matrix(&self, layout: &FockLayout, hbar: f64) -> Result<OperatorMatrix> {
        check_layout(self.mode_count(), layout)?;
        crate::config::check_hbar(hbar)?;
        let dim = layout.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (col, row, value) in self.entries(layout, hbar) {
            data[row * dim + col] += value;
        }
        Ok(OperatorMatrix {
            layout: layout.clone(),
            data,
            hbar,
            warnings: self.truncation_warnings(layout),
        })
    }

    /// `self |psi>` for a coefficient vector in `layout`.
    pub fn apply(&self, psi: &[Complex64], layout: &FockLayout, hbar: f64) -> Result<Vec<Complex64>> {
        check_layout(self.mode_count(), layout)?;
        if psi.len() != layout.dim() {
            return Err(Error::Dimension {
                expected: layout.dim(),
                got: psi.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); layout.dim()];
        for (col, row, value) in self.entries(layout, hbar) {
            out[row] += value * psi[col];
        }
        Ok(out)
    }

    /// Nonzero `(column, row, value)` contributions of every term.
    fn entries(&self, layout: &FockLayout, hbar: f64) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::new();
        let cutoffs = layout.cutoffs();
        for (key, c) in self.terms.iter() {
            let coef = c.eval(hbar);
            'columns: for col in 0..layout.dim() {
                let levels = layout.levels(col);
                let mut target = Vec::with_capacity(levels.len());
                let mut amp = 1.0f64;
                for (m, &(cre, ann)) in key.iter().enumerate() {
                    let (cre, ann) = (cre as usize, ann as usize);
                    let l = levels[m];
                    if l < ann {
                        continue 'columns;
                    }
                    let lowered = l - ann;
                    let raised = lowered + cre;
                    if raised >= cutoffs[m] {
                        continue 'columns;
                    }
                    // a^n |l> = sqrt(l!/(l-n)!) |l-n>, (a^dagger)^m |k> = sqrt((k+m)!/k!) |k+m>
                    let down: f64 = ((lowered + 1)..=l).map(|v| v as f64).product();
                    let up: f64 = ((lowered + 1)..=raised).map(|v| v as f64).product();
                    amp *= (down * up).sqrt();
                    target.push(raised);
                }
                out.push((col, layout.index(&target), coef * amp));
            }
        }
        out
    }

    fn truncation_warnings(&self, layout: &FockLayout) -> Vec<TruncationWarning> {
        let mut out = Vec::new();
        for (key, _) in self.terms.iter() {
            for (mode, &(cre, ann)) in key.iter().enumerate() {
                let degree = cre.max(ann);
                if degree as usize >= layout.cutoffs()[mode] {
                    out.push(TruncationWarning {
                        mode,
                        degree,
                        cutoff: layout.cutoffs()[mode],
                    });
                }
            }
        }
        out.sort_by_key(|w| (w.mode, w.degree));
        out.dedup();
        out
    }
}

fn check_layout(mode_count: usize, layout: &FockLayout) -> Result<()> {
    if layout.mode_count() != mode_count {
        return Err(Error::ModeMismatch {
            left: mode_count,
            right: layout.mode_count(),
        });
    }
    Ok(())
}

impl fmt::Display for LadderExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl fmt::Debug for LadderExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LadderExpr({})", self.pretty())
    }
}

/// Normal-orders a sum of ladder words.
pub fn normal_order(mode_count: usize, words: &[LadderWord]) -> Result<LadderExpr> {
    let mut acc = LadderExpr::zero(mode_count);
    for word in words {
        let mut product = LadderExpr::scalar(mode_count, word.coefficient.clone());
        for op in &word.ops {
            if op.mode >= mode_count {
                return Err(Error::ModeIndex {
                    index: op.mode + 1,
                    mode_count,
                    position: 0,
                });
            }
            let factor = match op.kind {
                LadderKind::Creation => LadderExpr::creation(mode_count, op.mode),
                LadderKind::Annihilation => LadderExpr::annihilation(mode_count, op.mode),
            };
            product = product.mul(&factor);
        }
        acc = acc.add(&product);
    }
    Ok(acc)
}

/// Coefficients `d` of `E = sum d_{jk} a^j (a^dagger)^k`; keys are
/// `(annihilation, creation)` per mode.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AntiNormalForm {
    terms: TermMap,
}

impl AntiNormalForm {
    pub fn from_terms(terms: TermMap) -> Self {
        AntiNormalForm { terms }
    }

    pub fn terms(&self) -> &TermMap {
        &self.terms
    }

    pub fn mode_count(&self) -> usize {
        self.terms.mode_count()
    }

    /// Multiplies out each `a^j (a^dagger)^k` and normal-orders the sum.
    pub fn to_normal(&self) -> LadderExpr {
        let n = self.mode_count();
        let mut acc = LadderExpr::zero(n);
        for (key, c) in self.terms.iter() {
            let mut product = LadderExpr::scalar(n, c.clone());
            for (mode, &(ann, cre)) in key.iter().enumerate() {
                product = product
                    .mul(&LadderExpr::annihilation(n, mode).pow(ann))
                    .mul(&LadderExpr::creation(n, mode).pow(cre));
            }
            acc = acc.add(&product);
        }
        acc
    }
}

/// `(a^dagger)^m a^n = sum_k (-1)^k k! C(m, k) C(n, k) a^(n-k) (a^dagger)^(m-k)`.
pub fn antinormal_order_form(e: &LadderExpr) -> AntiNormalForm {
    let n = e.mode_count();
    let mut out = TermMap::zero(n);
    for (key, c) in e.terms.iter() {
        let mut partial: Vec<(Exponents, i64)> = vec![(Vec::with_capacity(n), 1)];
        for &(cre, ann) in key.iter() {
            let expansion: Vec<((u32, u32), i64)> = (0..=cre.min(ann))
                .map(|k| {
                    let w = (binomial(cre, k) * binomial(ann, k) * crate::poly::factorial(k)) as i64;
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    ((ann - k, cre - k), sign * w)
                })
                .collect();
            partial = partial
                .into_iter()
                .flat_map(|(key, w)| {
                    expansion.iter().map(move |(pair, c)| {
                        let mut k = key.clone();
                        k.push(*pair);
                        (k, w * c)
                    })
                })
                .collect();
        }
        for (key, w) in partial {
            out.add_term(key, &(c * &Scalar::from_int(w)));
        }
    }
    AntiNormalForm { terms: out }
}

pub fn commutator(a: &LadderExpr, b: &LadderExpr) -> Result<LadderExpr> {
    if a.mode_count() != b.mode_count() {
        return Err(Error::ModeMismatch {
            left: a.mode_count(),
            right: b.mode_count(),
        });
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

pub fn to_matrix(e: &LadderExpr, cutoffs: &[usize], hbar: f64) -> Result<OperatorMatrix> {
    e.to_matrix(&FockLayout::new(cutoffs)?, hbar)
}

struct LadderAlgebra {
    mode_count: usize,
}

impl ExprAlgebra for LadderAlgebra {
    type Value = LadderExpr;

    fn scalar(&self, s: Scalar) -> LadderExpr {
        LadderExpr::scalar(self.mode_count, s)
    }

    fn variable(&self, name: VarName, mode: usize, position: usize) -> Result<LadderExpr> {
        if mode >= self.mode_count {
            return Err(Error::ModeIndex {
                index: mode + 1,
                mode_count: self.mode_count,
                position,
            });
        }
        let n = self.mode_count;
        match name {
            VarName::A => Ok(LadderExpr::annihilation(n, mode)),
            VarName::Ad => Ok(LadderExpr::creation(n, mode)),
            VarName::X => Ok(LadderExpr::position(n, mode)),
            VarName::P => Ok(LadderExpr::momentum(n, mode)),
            other => Err(Error::UnknownVariable {
                name: other.as_str().to_string(),
                position,
            }),
        }
    }

    fn add(&self, a: &LadderExpr, b: &LadderExpr) -> LadderExpr {
        a.add(b)
    }

    fn sub(&self, a: &LadderExpr, b: &LadderExpr) -> LadderExpr {
        a.sub(b)
    }

    fn mul(&self, a: &LadderExpr, b: &LadderExpr) -> LadderExpr {
        a.mul(b)
    }

    fn neg(&self, a: &LadderExpr) -> LadderExpr {
        a.neg()
    }

    fn as_scalar(&self, a: &LadderExpr) -> Option<Scalar> {
        a.terms.as_constant()
    }

    fn max_mode_degree(&self, a: &LadderExpr) -> u32 {
        a.max_mode_degree()
    }
}

/// Parses an operator expression; `a`/`ad` are ladder operators and `x`/`p`
/// the position and momentum operators. Products keep their written order.
pub fn parse_ladder(text: &str, mode_count: usize, degree_cap: u32) -> Result<LadderExpr> {
    if mode_count == 0 {
        return Err(Error::InvalidParameter("mode count must be positive".into()));
    }
    let ast = expr::parse(text)?;
    expr::evaluate(&ast, &LadderAlgebra { mode_count }, degree_cap)
}

/// A term whose ladder power reaches the cutoff, so it vanishes identically
/// on the truncated basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationWarning {
    pub mode: usize,
    pub degree: u32,
    pub cutoff: usize,
}

impl fmt::Display for TruncationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode {}: a term of ladder degree {} is not representable at cutoff {}",
            self.mode + 1,
            self.degree,
            self.cutoff
        )
    }
}

/// Dense row-major matrix of an operator on a truncated Fock basis.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    layout: FockLayout,
    data: Vec<Complex64>,
    hbar: f64,
    warnings: Vec<TruncationWarning>,
}

impl OperatorMatrix {
    pub fn from_data(layout: FockLayout, data: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if data.len() != layout.dim() * layout.dim() {
            return Err(Error::Dimension {
                expected: layout.dim() * layout.dim(),
                got: data.len(),
            });
        }
        Ok(OperatorMatrix {
            layout,
            data,
            hbar,
            warnings: Vec::new(),
        })
    }

    pub fn layout(&self) -> &FockLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn warnings(&self) -> &[TruncationWarning] {
        &self.warnings
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        let d = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        OperatorMatrix {
            layout: self.layout.clone(),
            data,
            hbar: self.hbar,
            warnings: self.warnings.clone(),
        }
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.layout != other.layout {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let d = self.dim();
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    data[r * d + c] += a * other.data[k * d + c];
                }
            }
        }
        Ok(OperatorMatrix {
            layout: self.layout.clone(),
            data,
            hbar: self.hbar,
            warnings: Vec::new(),
        })
    }

    /// Largest entrywise difference over rows and columns in `indices`.
    pub fn max_abs_diff_on(&self, other: &OperatorMatrix, indices: &[usize]) -> f64 {
        let mut worst = 0.0f64;
        for &r in indices {
            for &c in indices {
                worst = worst.max((self.get(r, c) - other.get(r, c)).norm());
            }
        }
        worst
    }

    /// Largest `|M_rc - conj(M_cr)|` over the given indices.
    pub fn hermiticity_defect_on(&self, indices: &[usize]) -> f64 {
        let mut worst = 0.0f64;
        for &r in indices {
            for &c in indices {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for (r, pr) in psi.iter().enumerate().take(d) {
            let row: Complex64 = self.data[r * d..(r + 1) * d].iter().zip(psi).map(|(m, p)| m * p).sum();
            acc += pr.conj() * row;
        }
        acc
    }
}

//! Named property suites with a machine-readable verdict report.
//!
//! Every randomized check draws from its own ChaCha stream derived from the
//! seed, so a suite produces the same report whether it runs alone or as part
//! of `all`. Wall-clock timings are left out unless requested, which keeps
//! the report byte-identical across runs.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::DEFAULT_NODES;
use crate::error::{Error, Result};
use crate::fock::{auto_cutoff, coherent_state, expectation, segal_bargmann_transform, FockState, SBFunction};
use crate::ladder::LadderExpr;
use crate::phase_space::{
    exact_q_average, husimi_q, marginal_report, quadrature_q_average, q_equals_sb_check, reproducing_apply,
    reproducing_grid, variance_report, weierstrass_smooth, wigner, HusimiDensity, QConvention,
};
use crate::quadrature::QuadratureGrid;
use crate::quantize::{convert_scheme, groenewold_residual, half_hbar, quantize, symbol_of, toeplitz_matrix, Scheme};
use crate::random::{instance_rng, random_hbar, random_point, random_rational, random_state, random_symbol, SymbolShape};
use crate::scalar::Scalar;
use crate::symbol::{parse_symbol, PhaseSymbol, VariableConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    CentralIdentity,
    SchemeTable,
    Groenewold,
    Kernel,
    QFunction,
    Marginals,
    Variances,
    All,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::CentralIdentity,
        Suite::SchemeTable,
        Suite::Groenewold,
        Suite::Kernel,
        Suite::QFunction,
        Suite::Marginals,
        Suite::Variances,
        Suite::All,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CentralIdentity => "central-identity",
            Suite::SchemeTable => "scheme-table",
            Suite::Groenewold => "groenewold",
            Suite::Kernel => "kernel",
            Suite::QFunction => "qfunction",
            Suite::Marginals => "marginals",
            Suite::Variances => "variances",
            Suite::All => "all",
        }
    }

    fn stream_base(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).unwrap_or(0) as u64 * 1000
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Direction of a check: `Upper` passes when the deviation is at most the
/// tolerance, `Lower` when the measured quantity exceeds it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub id: String,
    /// The identity being checked, in plain notation.
    pub anchor: String,
    /// Largest deviation seen (for `Lower` checks, the smallest margin).
    /// Exact symbolic checks report the number of mismatching instances.
    pub max_deviation: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub instances: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl VerdictReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Include wall-clock time per check (makes the report nondeterministic).
    pub timing: bool,
    /// Gauss-Hermite nodes per dimension for quadrature-based checks.
    pub nodes: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            timing: false,
            nodes: DEFAULT_NODES,
        }
    }
}

struct Outcome {
    deviation: f64,
    instances: usize,
    detail: Option<String>,
}

impl Outcome {
    fn new(deviation: f64, instances: usize) -> Self {
        Outcome {
            deviation,
            instances,
            detail: None,
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

struct Runner<'a> {
    seed: u64,
    opts: &'a VerifyOptions,
    stream: u64,
    checks: Vec<CheckRecord>,
}

impl Runner<'_> {
    fn check(
        &mut self,
        id: &str,
        anchor: &str,
        bound: Bound,
        tolerance: f64,
        body: impl FnOnce(&mut ChaCha8Rng) -> Result<Outcome>,
    ) {
        self.stream += 1;
        let mut rng = instance_rng(self.seed, self.stream);
        let start = Instant::now();
        let outcome = body(&mut rng).unwrap_or_else(|e| Outcome::new(f64::NAN, 0).with_detail(format!("error: {e}")));
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let d = outcome.deviation;
        let pass = d.is_finite()
            && match bound {
                Bound::Upper => d <= tolerance,
                Bound::Lower => d > tolerance,
            };
        self.checks.push(CheckRecord {
            id: id.to_string(),
            anchor: anchor.to_string(),
            max_deviation: d,
            tolerance,
            bound,
            instances: outcome.instances,
            pass,
            detail: outcome.detail,
            wall_time_ms: self.opts.timing.then_some(elapsed),
        });
    }
}

pub fn run_suite(name: &str, seed: u64, opts: &VerifyOptions) -> Result<VerdictReport> {
    Ok(run(name.parse()?, seed, opts))
}

pub fn run(suite: Suite, seed: u64, opts: &VerifyOptions) -> VerdictReport {
    let mut runner = Runner {
        seed,
        opts,
        stream: 0,
        checks: Vec::new(),
    };
    let parts: Vec<Suite> = if suite == Suite::All {
        Suite::ALL[..Suite::ALL.len() - 1].to_vec()
    } else {
        vec![suite]
    };
    for part in parts {
        runner.stream = part.stream_base();
        match part {
            Suite::CentralIdentity => central_identity(&mut runner),
            Suite::SchemeTable => scheme_table(&mut runner),
            Suite::Groenewold => groenewold(&mut runner),
            Suite::Kernel => kernel(&mut runner),
            Suite::QFunction => qfunction(&mut runner),
            Suite::Marginals => marginals(&mut runner),
            Suite::Variances => variances(&mut runner),
            Suite::All => unreachable!("expanded above"),
        }
    }
    VerdictReport {
        suite: suite.name().to_string(),
        seed,
        pass: runner.checks.iter().all(|c| c.pass),
        checks: runner.checks,
    }
}

fn xp(text: &str) -> Result<PhaseSymbol> {
    parse_symbol(text, 1, VariableConvention::Xp)
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / (1.0 + a.norm())
}

fn mismatch(equal: bool) -> f64 {
    if equal {
        0.0
    } else {
        1.0
    }
}

/// Random instance for the central identity: one mode with up to 8 levels,
/// or (every fifth draw) two modes with up to 4 levels each.
fn central_instance(rng: &mut ChaCha8Rng, index: usize) -> Result<(PhaseSymbol, FockState)> {
    let modes = if index % 5 == 4 { 2 } else { 1 };
    let hbar = random_hbar(rng);
    let f = random_symbol(
        rng,
        SymbolShape {
            mode_count: modes,
            max_degree: 6,
            max_terms: 4,
            complex: true,
        },
    );
    let psi = random_state(rng, modes, if modes == 1 { 8 } else { 4 }, hbar)?;
    Ok((f, psi))
}

fn central_identity(r: &mut Runner) {
    r.check(
        "central-identity",
        "<psi| Q_AW(f) |psi> = int f(alpha) Q_psi(alpha) d^2n alpha",
        Bound::Upper,
        1e-9,
        |rng| {
            let mut worst = 0.0f64;
            for i in 0..100 {
                let (f, psi) = central_instance(rng, i)?;
                let hilbert = expectation(&psi, &quantize(&f, Scheme::AntiWick)?)?;
                worst = worst.max(relative(hilbert, exact_q_average(&f, &psi)?));
            }
            Ok(Outcome::new(worst, 100))
        },
    );
    r.check(
        "weyl-route",
        "<psi| Q_Weyl(f) |psi> = int Q_AW^-1(Q_Weyl(f)) Q_psi d^2n alpha",
        Bound::Upper,
        1e-9,
        |rng| {
            let mut worst = 0.0f64;
            for i in 0..50 {
                let (f, psi) = central_instance(rng, i)?;
                let hilbert = expectation(&psi, &quantize(&f, Scheme::Weyl)?)?;
                let converted = convert_scheme(&f, Scheme::Weyl, Scheme::AntiWick)?;
                worst = worst.max(relative(hilbert, exact_q_average(&converted, &psi)?));
            }
            Ok(Outcome::new(worst, 50))
        },
    );
    let nodes = r.opts.nodes;
    r.check(
        "quadrature-agreement",
        "Gauss-Hermite int f Q d^2 alpha = exact Gaussian-moment value",
        Bound::Upper,
        1e-9,
        |rng| {
            let grid = QuadratureGrid::standard(1, nodes)?;
            let mut worst = 0.0f64;
            for i in 0..10 {
                let (f, psi) = central_instance(rng, i * 5)?;
                let exact = exact_q_average(&f, &psi)?;
                worst = worst.max(relative(exact, quadrature_q_average(&f, &psi, &grid)?.value));
            }
            Ok(Outcome::new(worst, 10))
        },
    );
    r.check(
        "toeplitz-x2",
        "(1/pi) int x^2 |alpha><alpha| d^2 alpha = Q_AW(x^2) on the protected block, cutoff 6",
        Bound::Upper,
        1e-7,
        |_| {
            let grid = QuadratureGrid::standard(1, nodes)?;
            let t = toeplitz_matrix(&xp("x^2")?, &grid, &[6], 1.0)?;
            Ok(Outcome::new(t.deviation, 1))
        },
    );
}

fn scheme_table(r: &mut Runner) {
    let x = LadderExpr::position(1, 0);
    let p = LadderExpr::momentum(1, 0);
    let shift = LadderExpr::scalar(1, half_hbar());
    for (var, op) in [("x", &x), ("p", &p)] {
        let square = op.mul(op);
        let rows = [
            (Scheme::Weyl, square.clone(), format!("Q_Weyl({var}^2) = {}^2", var.to_uppercase())),
            (
                Scheme::Wick,
                square.sub(&shift),
                format!("Q_Wick({var}^2) = {}^2 - (hbar/2) I", var.to_uppercase()),
            ),
            (
                Scheme::AntiWick,
                square.add(&shift),
                format!("Q_AW({var}^2) = {}^2 + (hbar/2) I", var.to_uppercase()),
            ),
        ];
        for (scheme, expected, anchor) in rows {
            r.check(&format!("{var}2-{scheme}"), &anchor, Bound::Upper, 0.0, |_| {
                let got = quantize(&xp(&format!("{var}^2"))?, scheme)?;
                Ok(Outcome::new(mismatch(got == expected), 1).with_detail(got.pretty()))
            });
        }
    }
    for (id, input, expected) in [
        ("conversion-x2", "x^2", "x^2 - hbar/2"),
        ("conversion-x2-p2", "x^2 + p^2", "x^2 + p^2 - hbar"),
    ] {
        r.check(
            id,
            &format!("Q_AW^-1(Q_Weyl({input})) = {expected}"),
            Bound::Upper,
            0.0,
            |_| {
                let got = convert_scheme(&xp(input)?, Scheme::Weyl, Scheme::AntiWick)?;
                Ok(Outcome::new(mismatch(got == xp(expected)?), 1).with_detail(got.pretty()))
            },
        );
    }
    r.check(
        "ordering-separation",
        "Q_AW(|alpha|^2) - Q_Wick(|alpha|^2) = a a^dagger - a^dagger a = I",
        Bound::Upper,
        0.0,
        |_| {
            let n = PhaseSymbol::alpha(1, 0).mul(&PhaseSymbol::alpha_bar(1, 0));
            let diff = quantize(&n, Scheme::AntiWick)?.sub(&quantize(&n, Scheme::Wick)?);
            Ok(Outcome::new(mismatch(diff == LadderExpr::identity(1)), 1))
        },
    );
    let random_shape = |rng: &mut ChaCha8Rng, complex: bool| SymbolShape {
        mode_count: if rng.gen_bool(0.25) { 2 } else { 1 },
        max_degree: 6,
        max_terms: 4,
        complex,
    };
    r.check(
        "inverse-property",
        "symbol_s(Q_s(f)) = f for s in {weyl, wick, antiwick}",
        Bound::Upper,
        0.0,
        |rng| {
            let mut bad = 0;
            for _ in 0..30 {
                let shape = random_shape(rng, true);
                let f = random_symbol(rng, shape);
                for s in Scheme::ALL {
                    bad += usize::from(symbol_of(&quantize(&f, s)?, s) != f);
                }
            }
            Ok(Outcome::new(bad as f64, 90))
        },
    );
    r.check(
        "realness",
        "f real => Q_s(f) formally self-adjoint",
        Bound::Upper,
        0.0,
        |rng| {
            let mut bad = 0;
            for _ in 0..30 {
                let shape = random_shape(rng, false);
                let f = random_symbol(rng, shape);
                for s in Scheme::ALL {
                    bad += usize::from(!quantize(&f, s)?.is_self_adjoint());
                }
            }
            Ok(Outcome::new(bad as f64, 90))
        },
    );
    r.check(
        "linearity",
        "Q_s(c f + g) = c Q_s(f) + Q_s(g)",
        Bound::Upper,
        0.0,
        |rng| {
            let mut bad = 0;
            for _ in 0..20 {
                let shape = random_shape(rng, true);
                let f = random_symbol(rng, shape);
                let g = random_symbol(rng, shape);
                let c = Scalar::from_rational(random_rational(rng));
                for s in Scheme::ALL {
                    let lhs = quantize(&f.scale(&c).add(&g), s)?;
                    let rhs = quantize(&f, s)?.scale(&c).add(&quantize(&g, s)?);
                    bad += usize::from(lhs != rhs);
                }
            }
            Ok(Outcome::new(bad as f64, 60))
        },
    );
}

fn groenewold(r: &mut Runner) {
    r.check(
        "groenewold-quadratic",
        "(1/(i hbar)) [Q_Weyl(f), Q_Weyl(g)] = Q_Weyl({f, g}) for deg f <= 2",
        Bound::Upper,
        0.0,
        |rng| {
            let mut bad = 0;
            for _ in 0..50 {
                let modes = if rng.gen_bool(0.25) { 2 } else { 1 };
                let shape = |max_degree| SymbolShape {
                    mode_count: modes,
                    max_degree,
                    max_terms: 4,
                    complex: false,
                };
                let f = random_symbol(rng, shape(2));
                let g = random_symbol(rng, shape(6));
                bad += usize::from(!groenewold_residual(&f, &g)?.is_zero());
            }
            Ok(Outcome::new(bad as f64, 50))
        },
    );
    r.check(
        "groenewold-cubic",
        "(1/(i hbar)) [Q_Weyl(x^3), Q_Weyl(p^3)] - Q_Weyl({x^3, p^3}) != 0, of order hbar^2",
        Bound::Upper,
        0.0,
        |_| {
            let residual = groenewold_residual(&xp("x^3")?, &xp("p^3")?)?;
            let order = residual.hbar_order();
            let holds = !residual.is_zero() && order.is_some_and(|k| k >= 2);
            Ok(Outcome::new(mismatch(holds), 1).with_detail(format!(
                "residual = {} (hbar order {})",
                residual.pretty(),
                order.map_or("none".to_string(), |k| k.to_string())
            )))
        },
    );
}

fn kernel(r: &mut Runner) {
    r.check(
        "reproducing-kernel",
        "int exp(z conj(w) / hbar) F(w) mu_hbar(w) d^2 w = F(z) for F = w^n, n <= 6",
        Bound::Upper,
        1e-7,
        |rng| {
            let mut worst = 0.0f64;
            let mut count = 0;
            for _ in 0..20 {
                let hbar = random_hbar(rng);
                let radius = rng.gen_range(0.5..=2.0);
                let z = Complex64::from_polar(radius, rng.gen_range(0.0..2.0 * PI));
                let grid = reproducing_grid(1, hbar, 60)?;
                for n in 0..=6usize {
                    // w^n = sqrt(n! hbar^n) times the n-th orthonormal monomial
                    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
                    coeffs[n] = Complex64::new(((1..=n).map(|k| k as f64 * hbar).product::<f64>()).sqrt(), 0.0);
                    let f = SBFunction::new(&[n + 1], coeffs, hbar)?;
                    let exact = z.powu(n as u32);
                    let got = reproducing_apply(&f, &[z], &grid)?.value;
                    worst = worst.max((got - exact).norm() / exact.norm());
                    count += 1;
                }
            }
            Ok(Outcome::new(worst, count))
        },
    );
    let nodes = r.opts.nodes;
    r.check(
        "segal-bargmann-parseval",
        "int |B psi|^2 mu_hbar d^2n z = ||psi||^2",
        Bound::Upper,
        1e-10,
        |rng| {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let hbar = random_hbar(rng);
                let psi = random_state(rng, 1, 8, hbar)?;
                let f = segal_bargmann_transform(&psi);
                let grid = reproducing_grid(1, hbar, nodes)?;
                let mut total = 0.0;
                for pt in grid.points() {
                    total += f.evaluate(&pt.alpha())?.norm_sqr() * pt.reference_weight;
                }
                worst = worst.max((total.sqrt() - f.sb_norm()).abs()).max((f.sb_norm() - psi.norm()).abs());
            }
            Ok(Outcome::new(worst, 20))
        },
    );
}

/// Values of the `(x, p)` Husimi density on `points x points` over `[-4 sqrt(hbar), 4 sqrt(hbar)]^2`.
fn q_grid_values(psi: &FockState, points: usize) -> Result<Vec<f64>> {
    let extent = 4.0 * psi.hbar().sqrt();
    let q = HusimiDensity::new(psi, QConvention::XpDensity);
    let axis: Vec<f64> = (0..points)
        .map(|k| -extent + 2.0 * extent * k as f64 / (points - 1) as f64)
        .collect();
    let mut out = Vec::with_capacity(points * points);
    for &x in &axis {
        for &p in &axis {
            out.push(q.at_xp(&[x], &[p])?);
        }
    }
    Ok(out)
}

fn bound_states(rng: &mut ChaCha8Rng) -> Result<Vec<FockState>> {
    let mut states = Vec::new();
    for _ in 0..20 {
        let hbar = random_hbar(rng);
        states.push(random_state(rng, 1, 8, hbar)?);
    }
    Ok(states)
}

fn qfunction(r: &mut Runner) {
    r.check(
        "q-sb-identity",
        "Q_psi(alpha) d^2 alpha = |F(z)|^2 mu_hbar(z) d^2 z with z = sqrt(hbar) conj(alpha)",
        Bound::Upper,
        1e-9,
        |rng| {
            let mut worst = 0.0f64;
            for i in 0..20 {
                let modes = if i % 5 == 4 { 2 } else { 1 };
                let hbar = random_hbar(rng);
                let psi = random_state(rng, modes, if modes == 1 { 8 } else { 4 }, hbar)?;
                let points: Vec<Vec<Complex64>> = (0..100).map(|_| random_point(rng, modes, 2.0)).collect();
                worst = worst.max(q_equals_sb_check(&psi, &points)?);
            }
            Ok(Outcome::new(worst, 2000))
        },
    );
    r.check(
        "q-bound",
        "Q(x, p) <= 1 / (2 pi hbar)^n",
        Bound::Upper,
        1e-12,
        |rng| {
            let mut excess = 0.0f64;
            let mut count = 0;
            for psi in bound_states(rng)? {
                let bound = HusimiDensity::new(&psi, QConvention::XpDensity).sup_bound();
                for q in q_grid_values(&psi, 41)? {
                    excess = excess.max(q - bound);
                    count += 1;
                }
            }
            for _ in 0..5 {
                let hbar = random_hbar(rng);
                let psi = random_state(rng, 2, 4, hbar)?;
                let density = HusimiDensity::new(&psi, QConvention::XpDensity);
                for _ in 0..200 {
                    let a = random_point(rng, 2, 2.0);
                    excess = excess.max(density.at_alpha(&a)? - density.sup_bound());
                    count += 1;
                }
            }
            Ok(Outcome::new(excess.max(0.0), count))
        },
    );
    r.check("q-nonnegative", "Q(x, p) >= 0", Bound::Upper, 0.0, |rng| {
        let mut worst = 0.0f64;
        let mut count = 0;
        for psi in bound_states(rng)? {
            for q in q_grid_values(&psi, 41)? {
                worst = worst.max(-q);
                count += 1;
            }
        }
        Ok(Outcome::new(worst, count))
    });
    r.check(
        "q-bound-attained",
        "coherent |beta>: Q(x_beta, p_beta) = 1 / (2 pi hbar)",
        Bound::Upper,
        1e-9,
        |rng| {
            let mut worst = 0.0f64;
            for _ in 0..5 {
                let hbar = random_hbar(rng);
                let beta = random_point(rng, 1, 1.5);
                let cutoffs = auto_cutoff(std::slice::from_ref(&beta), 1, 0);
                let psi = coherent_state(&beta, &cutoffs, hbar)?.normalized()?;
                let q = husimi_q(&psi, &beta, QConvention::XpDensity)?;
                worst = worst.max((q - 1.0 / (2.0 * PI * hbar)).abs());
            }
            Ok(Outcome::new(worst, 5))
        },
    );
    let nodes = r.opts.nodes;
    r.check(
        "wigner-weierstrass",
        "W * exp(-(x^2 + p^2) / hbar) / (pi hbar) = Q(x, p)",
        Bound::Upper,
        1e-4,
        |rng| {
            let states = vec![
                FockState::vacuum(&[1], 1.0)?,
                FockState::number_state(&[1], &[2], 1.0)?,
                random_state(rng, 1, 4, 1.0)?,
            ];
            let mut worst = 0.0f64;
            let mut count = 0;
            for psi in &states {
                let q = HusimiDensity::new(psi, QConvention::XpDensity);
                for i in 0..21 {
                    for j in 0..21 {
                        let x = -4.0 + 8.0 * i as f64 / 20.0;
                        let p = -4.0 + 8.0 * j as f64 / 20.0;
                        let smoothed = weierstrass_smooth(psi, x, p, nodes)?;
                        worst = worst.max((smoothed - q.at_xp(&[x], &[p])?).abs());
                        count += 1;
                    }
                }
            }
            Ok(Outcome::new(worst, count))
        },
    );
    r.check(
        "wigner-fock1-origin",
        "W_|1>(0, 0) = -1 / (pi hbar)",
        Bound::Upper,
        1e-6,
        |_| {
            let w = wigner(&FockState::number_state(&[1], &[2], 1.0)?, 0.0, 0.0)?;
            Ok(Outcome::new((w + 1.0 / PI).abs(), 1).with_detail(format!("W(0, 0) = {w}")))
        },
    );
}

fn marginals(r: &mut Runner) {
    let nodes = r.opts.nodes;
    let vacuum = || FockState::vacuum(&[1], 1.0);
    r.check(
        "marginal-mass",
        "int dx int Q(x, p) dp = 1",
        Bound::Upper,
        1e-8,
        |rng| {
            let mut worst = (marginal_report(&vacuum()?, nodes)?.q_mass - 1.0).abs();
            for _ in 0..5 {
                let hbar = random_hbar(rng);
                let rep = marginal_report(&random_state(rng, 1, 8, hbar)?, nodes)?;
                worst = worst.max((rep.q_mass - 1.0).abs()).max((rep.born_mass - 1.0).abs());
            }
            Ok(Outcome::new(worst, 6))
        },
    );
    r.check(
        "marginal-q-second-moment",
        "vacuum: int x^2 (int Q dp) dx = hbar",
        Bound::Upper,
        1e-4,
        |_| {
            let rep = marginal_report(&vacuum()?, nodes)?;
            Ok(Outcome::new((rep.q_second_moment - 1.0).abs(), 1)
                .with_detail(format!("second moment {}", rep.q_second_moment)))
        },
    );
    r.check(
        "marginal-born-second-moment",
        "vacuum: int x^2 |psi(x)|^2 dx = hbar / 2",
        Bound::Upper,
        1e-6,
        |_| {
            let rep = marginal_report(&vacuum()?, nodes)?;
            Ok(Outcome::new((rep.born_second_moment - 0.5).abs(), 1)
                .with_detail(format!("second moment {}", rep.born_second_moment)))
        },
    );
    r.check(
        "marginal-gap",
        "vacuum: sup_x |int Q dp - |psi(x)|^2| > 0",
        Bound::Lower,
        0.05,
        |_| Ok(Outcome::new(marginal_report(&vacuum()?, nodes)?.sup_gap, 1)),
    );
}

fn variances(r: &mut Runner) {
    r.check(
        "variance-shift-operator",
        "Q_AW(x^2) - Q_Weyl(x^2) = Q_AW(p^2) - Q_Weyl(p^2) = (hbar/2) I",
        Bound::Upper,
        0.0,
        |_| {
            let shift = LadderExpr::scalar(1, half_hbar());
            let mut bad = 0;
            for var in ["x^2", "p^2"] {
                let f = xp(var)?;
                let d = quantize(&f, Scheme::AntiWick)?.sub(&quantize(&f, Scheme::Weyl)?);
                bad += usize::from(d != shift);
            }
            Ok(Outcome::new(bad as f64, 2))
        },
    );
    let states = |rng: &mut ChaCha8Rng| -> Result<Vec<FockState>> {
        (0..20)
            .map(|_| {
                let hbar = random_hbar(rng);
                random_state(rng, 1, 8, hbar)
            })
            .collect()
    };
    r.check(
        "variance-shift",
        "Var_AW(x) - Var_Weyl(x) = Var_AW(p) - Var_Weyl(p) = hbar / 2",
        Bound::Upper,
        1e-10,
        |rng| {
            let mut worst = 0.0f64;
            for psi in states(rng)? {
                let w = variance_report(&psi, Scheme::Weyl)?;
                let aw = variance_report(&psi, Scheme::AntiWick)?;
                let h = psi.hbar() / 2.0;
                worst = worst
                    .max((aw.var_x - w.var_x - h).abs())
                    .max((aw.var_p - w.var_p - h).abs());
            }
            Ok(Outcome::new(worst, 20))
        },
    );
    r.check(
        "variance-product-order",
        "Var_AW(x) Var_AW(p) > Var_Weyl(x) Var_Weyl(p)",
        Bound::Lower,
        0.0,
        |rng| {
            let mut margin = f64::INFINITY;
            for psi in states(rng)? {
                let w = variance_report(&psi, Scheme::Weyl)?;
                let aw = variance_report(&psi, Scheme::AntiWick)?;
                margin = margin.min(aw.product - w.product);
            }
            Ok(Outcome::new(margin, 20))
        },
    );
    r.check(
        "coherent-minimum-uncertainty",
        "coherent: Var_Weyl(x) = Var_Weyl(p) = hbar / 2",
        Bound::Upper,
        1e-10,
        |rng| {
            let mut worst = 0.0f64;
            for _ in 0..5 {
                let hbar = random_hbar(rng);
                let beta = random_point(rng, 1, 1.5);
                let cutoffs = auto_cutoff(std::slice::from_ref(&beta), 1, 2);
                let psi = coherent_state(&beta, &cutoffs, hbar)?.normalized()?;
                let w = variance_report(&psi, Scheme::Weyl)?;
                worst = worst
                    .max((w.var_x - hbar / 2.0).abs())
                    .max((w.var_p - hbar / 2.0).abs())
                    .max((w.product - hbar * hbar / 4.0).abs());
            }
            Ok(Outcome::new(worst, 5))
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!("nosuch".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn scheme_table_passes_with_exact_rows() {
        let report = run(Suite::SchemeTable, 0, &VerifyOptions::default());
        assert!(report.pass, "{}", report.to_json());
        for id in ["x2-weyl", "x2-wick", "x2-antiwick"] {
            assert_eq!(report.check(id).unwrap().max_deviation, 0.0);
        }
    }

    #[test]
    fn groenewold_suite_flags_cubic() {
        let report = run(Suite::Groenewold, 0, &VerifyOptions::default());
        assert!(report.pass, "{}", report.to_json());
        assert!(report.check("groenewold-cubic").unwrap().detail.as_ref().unwrap().contains("hbar order"));
    }

    #[test]
    fn report_is_deterministic_without_timing() {
        let a = run(Suite::Variances, 5, &VerifyOptions::default()).to_json();
        let b = run(Suite::Variances, 5, &VerifyOptions::default()).to_json();
        assert_eq!(a, b);
        assert!(!a.contains("wallTimeMs"));
        let timed = run(
            Suite::Variances,
            5,
            &VerifyOptions {
                timing: true,
                ..VerifyOptions::default()
            },
        );
        assert!(timed.checks.iter().all(|c| c.wall_time_ms.is_some()));
    }
}

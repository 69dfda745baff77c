//! Acceptance criteria, one line each. Runs as a plain binary so the lines
//! are always shown; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use phasequant::phase_space::marginal_report;
use phasequant::quantize::{half_hbar, toeplitz_matrix};
use phasequant::symbol::{parse_symbol, PhaseSymbol, VariableConvention};
use phasequant::verify::{run, Suite, VerdictReport, VerifyOptions};
use phasequant::{convert_scheme, groenewold_residual, quantize, FockState, LadderExpr, QuadratureGrid, Scheme};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn xp(text: &str) -> PhaseSymbol {
    parse_symbol(text, 1, VariableConvention::Xp).unwrap()
}

fn suite(s: Suite) -> VerdictReport {
    run(s, 0, &VerifyOptions::default())
}

/// Passes when every listed check passed with its stated tolerance and
/// instance count.
fn checks(report: &VerdictReport, expected: &[(&str, f64, usize)]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(id, tolerance, instances) in expected {
        match report.check(id) {
            Some(c) => {
                let ok = c.pass && c.tolerance == tolerance && c.instances >= instances;
                pass &= ok;
                parts.push(format!("{id}={:.3e}/{:.0e} x{}", c.max_deviation, c.tolerance, c.instances));
            }
            None => {
                pass = false;
                parts.push(format!("{id}=missing"));
            }
        }
    }
    Verdict {
        pass,
        detail: parts.join(", "),
    }
}

fn merge(a: Verdict, b: Verdict) -> Verdict {
    Verdict {
        pass: a.pass && b.pass,
        detail: format!("{}; {}", a.detail, b.detail),
    }
}

fn exact(label: &str, ok: bool) -> Verdict {
    Verdict {
        pass: ok,
        detail: format!("{label}: {}", if ok { "exact" } else { "mismatch" }),
    }
}

fn central_identity() -> Verdict {
    let start = Instant::now();
    let report = suite(Suite::CentralIdentity);
    let secs = start.elapsed().as_secs_f64();
    let v = checks(&report, &[("central-identity", 1e-9, 100)]);
    Verdict {
        pass: v.pass && secs <= 60.0,
        detail: format!("{}; suite time {secs:.2}s (limit 60s)", v.detail),
    }
}

fn scheme_table() -> Verdict {
    let x = LadderExpr::position(1, 0);
    let p = LadderExpr::momentum(1, 0);
    let half = LadderExpr::scalar(1, half_hbar());
    let mut ok = true;
    for (sym, op) in [("x^2", &x), ("p^2", &p)] {
        let sq = op.mul(op);
        ok &= quantize(&xp(sym), Scheme::Weyl).unwrap() == sq;
        ok &= quantize(&xp(sym), Scheme::Wick).unwrap() == sq.sub(&half);
        ok &= quantize(&xp(sym), Scheme::AntiWick).unwrap() == sq.add(&half);
    }
    let direct = exact("six symbolic rows", ok);
    merge(
        direct,
        checks(
            &suite(Suite::SchemeTable),
            &[
                ("x2-weyl", 0.0, 1),
                ("x2-wick", 0.0, 1),
                ("x2-antiwick", 0.0, 1),
                ("p2-weyl", 0.0, 1),
                ("p2-wick", 0.0, 1),
                ("p2-antiwick", 0.0, 1),
            ],
        ),
    )
}

fn conversion() -> Verdict {
    let converted = convert_scheme(&xp("x^2"), Scheme::Weyl, Scheme::AntiWick).unwrap();
    merge(
        exact("x^2 -> x^2 - hbar/2", converted == xp("x^2 - hbar/2")),
        checks(&suite(Suite::CentralIdentity), &[("weyl-route", 1e-9, 50)]),
    )
}

fn groenewold() -> Verdict {
    let residual = groenewold_residual(&xp("x^3"), &xp("p^3")).unwrap();
    let order = residual.hbar_order();
    let cubic_ok = !residual.is_zero() && order.is_some_and(|k| k >= 2);
    merge(
        Verdict {
            pass: cubic_ok,
            detail: format!("(x^3, p^3) residual nonzero, hbar order {order:?}"),
        },
        checks(&suite(Suite::Groenewold), &[("groenewold-quadratic", 0.0, 50)]),
    )
}

fn kernel() -> Verdict {
    checks(&suite(Suite::Kernel), &[("reproducing-kernel", 1e-7, 140)])
}

fn q_identification() -> Verdict {
    checks(&suite(Suite::QFunction), &[("q-sb-identity", 1e-9, 2000)])
}

fn q_bound() -> Verdict {
    checks(
        &suite(Suite::QFunction),
        &[("q-bound", 1e-12, 1), ("q-bound-attained", 1e-9, 1)],
    )
}

fn marginals() -> Verdict {
    let vacuum = FockState::vacuum(&[1], 1.0).unwrap();
    let m = marginal_report(&vacuum, 40).unwrap();
    let pass = (m.q_second_moment - 1.0).abs() <= 1e-4
        && (m.born_second_moment - 0.5).abs() <= 1e-6
        && m.sup_gap > 0.05;
    merge(
        Verdict {
            pass,
            detail: format!(
                "Q second moment {:.9}, Born second moment {:.9}, sup gap {:.4}",
                m.q_second_moment, m.born_second_moment, m.sup_gap
            ),
        },
        checks(
            &suite(Suite::Marginals),
            &[
                ("marginal-q-second-moment", 1e-4, 1),
                ("marginal-born-second-moment", 1e-6, 1),
                ("marginal-gap", 0.05, 1),
            ],
        ),
    )
}

fn variances() -> Verdict {
    let x = xp("x");
    let x2 = xp("x^2");
    let var = |s: Scheme| {
        let q1 = quantize(&x, s).unwrap();
        quantize(&x2, s).unwrap().sub(&q1.mul(&q1))
    };
    let shift = var(Scheme::AntiWick).sub(&var(Scheme::Weyl));
    merge(
        exact("Var_AW(x) - Var_Weyl(x) = hbar/2", shift == LadderExpr::scalar(1, half_hbar())),
        checks(
            &suite(Suite::Variances),
            &[("variance-shift", 1e-10, 20), ("variance-product-order", 0.0, 20)],
        ),
    )
}

fn wigner_weierstrass() -> Verdict {
    checks(
        &suite(Suite::QFunction),
        &[("wigner-weierstrass", 1e-4, 3 * 21 * 21), ("wigner-fock1-origin", 1e-6, 1)],
    )
}

fn toeplitz() -> Verdict {
    let grid = QuadratureGrid::standard(1, 40).unwrap();
    let t = toeplitz_matrix(&xp("x^2"), &grid, &[6], 1.0).unwrap();
    Verdict {
        pass: t.deviation <= 1e-7 && !t.flagged,
        detail: format!("protected-block deviation {:.3e} (limit 1e-7)", t.deviation),
    }
}

fn determinism() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_phasequant");
    let runs: Vec<_> = (0..2)
        .map(|_| Command::new(exe).args(["verify", "all", "--seed", "0"]).output().unwrap())
        .collect();
    let identical = runs[0].stdout == runs[1].stdout;
    let exit_ok = runs.iter().all(|o| o.status.success());
    Verdict {
        pass: identical && exit_ok && !runs[0].stdout.is_empty(),
        detail: format!(
            "{} bytes, identical={identical}, exit codes {:?}",
            runs[0].stdout.len(),
            runs.iter().map(|o| o.status.code()).collect::<Vec<_>>()
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("central identity", central_identity),
        ("scheme table", scheme_table),
        ("conversion", conversion),
        ("groenewold", groenewold),
        ("reproducing kernel", kernel),
        ("Q identification", q_identification),
        ("Q bound", q_bound),
        ("marginal discrepancy", marginals),
        ("variance inflation", variances),
        ("Wigner/Weierstrass", wigner_weierstrass),
        ("Toeplitz cross-check", toeplitz),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, criterion)) in criteria.iter().enumerate() {
        let v = criterion();
        if !v.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Independent reference constructions checked against the library.

use std::f64::consts::PI;

use itertools::Itertools;
use num::complex::Complex64;
use phasequant::fock::hermite_functions;
use phasequant::phase_space::{husimi_q, wigner, QConvention};
use phasequant::random::{instance_rng, random_symbol, SymbolShape};
use phasequant::scalar::Scalar;
use phasequant::symbol::{parse_symbol, VariableConvention};
use phasequant::{coherent_state, expectation, quantize, FockLayout, FockState, LadderExpr, Scheme};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn binomial(n: u64, k: u64) -> i64 {
    (1..=k).fold(1u64, |acc, i| acc * (n + 1 - i) / i) as i64
}

fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Mean over every distinct ordering of `a` copies of `x` and `b` copies of `y`.
fn symmetrized(x: &LadderExpr, y: &LadderExpr, a: usize, b: usize) -> LadderExpr {
    let modes = x.mode_count();
    let letters: Vec<bool> = std::iter::repeat_n(true, a).chain(std::iter::repeat_n(false, b)).collect();
    let words: Vec<Vec<bool>> = letters.iter().copied().permutations(a + b).unique().collect();
    assert_eq!(words.len() as i64, binomial((a + b) as u64, a as u64));
    let sum = words.iter().fold(LadderExpr::zero(modes), |acc, w| {
        let word = w
            .iter()
            .fold(LadderExpr::identity(modes), |p, &is_x| p.mul(if is_x { x } else { y }));
        acc.add(&word)
    });
    sum.scale(&Scalar::from_ratio(1, words.len() as i64))
}

#[test]
fn weyl_matches_word_average_in_x_and_p() {
    let (xh, ph) = (LadderExpr::position(1, 0), LadderExpr::momentum(1, 0));
    for a in 0..=4 {
        for b in 0..=(5 - a) {
            let f = parse_symbol(&format!("x^{a}*p^{b}"), 1, VariableConvention::Xp).unwrap();
            assert_eq!(quantize(&f, Scheme::Weyl).unwrap(), symmetrized(&xh, &ph, a, b), "x^{a} p^{b}");
        }
    }
}

#[test]
fn weyl_matches_word_average_in_ladder_operators() {
    let (ann, cre) = (LadderExpr::annihilation(1, 0), LadderExpr::creation(1, 0));
    for j in 0..=3 {
        for k in 0..=3 {
            let f = parse_symbol(&format!("z^{j}*zbar^{k}"), 1, VariableConvention::Alpha).unwrap();
            assert_eq!(quantize(&f, Scheme::Weyl).unwrap(), symmetrized(&ann, &cre, j, k), "{j},{k}");
        }
    }
}

#[test]
fn weyl_factorizes_across_modes() {
    let f = parse_symbol("x1*p1^2*x2^2*p2", 2, VariableConvention::Xp).unwrap();
    let mode = |m: usize, a, b| symmetrized(&LadderExpr::position(2, m), &LadderExpr::momentum(2, m), a, b);
    assert_eq!(quantize(&f, Scheme::Weyl).unwrap(), mode(0, 1, 2).mul(&mode(1, 2, 1)));
}

#[test]
fn matrices_are_multiplicative_on_protected_block() {
    for (seed, modes, cutoff) in [(1u64, 1usize, 12usize), (2, 2, 6), (3, 1, 9)] {
        let shape = SymbolShape {
            mode_count: modes,
            max_degree: 3,
            max_terms: 4,
            complex: true,
        };
        let mut rng = instance_rng(seed, 0);
        let a = quantize(&random_symbol(&mut rng, shape), Scheme::Weyl).unwrap();
        let b = quantize(&random_symbol(&mut rng, shape), Scheme::AntiWick).unwrap();
        let layout = FockLayout::uniform(modes, cutoff).unwrap();
        let hbar = 0.5;
        let product = a.mul(&b).to_matrix(&layout, hbar).unwrap();
        let composed = a
            .to_matrix(&layout, hbar)
            .unwrap()
            .matmul(&b.to_matrix(&layout, hbar).unwrap())
            .unwrap();
        let block = layout.protected_indices(a.max_mode_degree().max(b.max_mode_degree()) as usize);
        assert!(!block.is_empty());
        assert!(product.max_abs_diff_on(&composed, &block) < 1e-9, "seed {seed}");
    }
}

#[test]
fn coherent_overlaps_match_closed_form() {
    let cut = [30];
    let pts = [c(0.3, -0.7), c(1.1, 0.4), c(-0.5, 0.0)];
    for &a in &pts {
        for &b in &pts {
            let sa = coherent_state(&[a], &cut, 1.0).unwrap();
            let sb = coherent_state(&[b], &cut, 1.0).unwrap();
            let expected = (-(a.norm_sqr() + b.norm_sqr()) / 2.0 + b.conj() * a).exp();
            let got = sb.inner(&sa).unwrap();
            assert!((got - expected).norm() < 1e-12, "{a} {b}");
            assert!((got - sa.inner(&sb).unwrap().conj()).norm() < 1e-15);
        }
    }
}

#[test]
fn coherent_moments_match_closed_form() {
    for hbar in [0.5, 1.0, 2.0] {
        let a = c(0.8, -0.3);
        let s = coherent_state(&[a], &[30], hbar).unwrap();
        let x = expectation(&s, &LadderExpr::position(1, 0)).unwrap();
        let p = expectation(&s, &LadderExpr::momentum(1, 0)).unwrap();
        assert!((x - (2.0 * hbar).sqrt() * a.re).norm() < 1e-12);
        assert!((p - (2.0 * hbar).sqrt() * a.im).norm() < 1e-12);
        let x2 = expectation(&s, &LadderExpr::position(1, 0).pow(2)).unwrap();
        assert!((x2.re - x.re * x.re - hbar / 2.0).abs() < 1e-12);
        let n = expectation(&s, &LadderExpr::number(1, 0)).unwrap();
        assert!((n.re - a.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn hermite_functions_match_closed_form() {
    for hbar in [0.5, 1.0, 2.0] {
        for x in [-1.7, 0.0, 0.4, 2.3] {
            let u = x / f64::sqrt(hbar);
            let g = (PI * hbar).powf(-0.25) * (-u * u / 2.0).exp();
            let expected = [g, g * 2f64.sqrt() * u, g * (2.0 * u * u - 1.0) / 2f64.sqrt()];
            let got = hermite_functions(x, hbar, 3);
            for (e, h) in expected.iter().zip(&got) {
                assert!((e - h).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn husimi_of_number_states_matches_closed_form() {
    for n in 0..5 {
        let s = FockState::number_state(&[n], &[n + 1], 1.0).unwrap();
        for a in [c(0.0, 0.0), c(0.6, 0.2), c(-1.3, 1.0)] {
            let r2 = a.norm_sqr();
            let expected = (-r2).exp() * r2.powi(n as i32) / (PI * factorial(n as u64));
            let got = husimi_q(&s, &[a], QConvention::AlphaDensity).unwrap();
            assert!((got - expected).abs() < 1e-14, "n={n} a={a}");
        }
    }
}

#[test]
fn husimi_integrates_to_one() {
    let s = FockState::new(&[3], vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.5)], 1.0)
        .unwrap()
        .normalized()
        .unwrap();
    let (h, half) = (0.05, 160);
    let mut total = 0.0;
    for i in -half..=half {
        for j in -half..=half {
            let a = c(i as f64 * h, j as f64 * h);
            total += husimi_q(&s, &[a], QConvention::AlphaDensity).unwrap() * h * h;
        }
    }
    assert!((total - 1.0).abs() < 1e-10);
}

fn laguerre(n: usize, x: f64) -> f64 {
    (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n as u64, k as u64) as f64 * x.powi(k as i32) / factorial(k as u64)
        })
        .sum()
}

#[test]
fn wigner_of_number_states_matches_laguerre_form() {
    for hbar in [0.5, 1.0, 2.0] {
        for n in 0..5 {
            let s = FockState::number_state(&[n], &[n + 1], hbar).unwrap();
            for (x, p) in [(0.0, 0.0), (0.7, -0.2), (-1.5, 1.1)] {
                let r2 = x * x + p * p;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let expected = sign / (PI * hbar) * (-r2 / hbar).exp() * laguerre(n, 2.0 * r2 / hbar);
                assert!((wigner(&s, x, p).unwrap() - expected).abs() < 1e-12, "n={n} hbar={hbar}");
            }
        }
    }
}

#[test]
fn wigner_of_coherent_state_is_displaced_gaussian() {
    let hbar = 0.5;
    let a = c(0.9, -0.4);
    let s = coherent_state(&[a], &[40], hbar).unwrap();
    let (x0, p0) = ((2.0 * hbar).sqrt() * a.re, (2.0 * hbar).sqrt() * a.im);
    for (x, p) in [(0.0, 0.0), (x0, p0), (1.0, 0.3)] {
        let expected = (-((x - x0).powi(2) + (p - p0).powi(2)) / hbar).exp() / (PI * hbar);
        assert!((wigner(&s, x, p).unwrap() - expected).abs() < 1e-12);
    }
}

//! Algebraic invariants over seeded random symbols.

use phasequant::ladder::commutator;
use phasequant::random::{instance_rng, random_symbol, SymbolShape};
use phasequant::scalar::Scalar;
use phasequant::symbol::{parse_symbol, poisson_bracket, PhaseSymbol, VariableConvention};
use phasequant::{convert_scheme, quantize, symbol_of, LadderExpr, Scheme};
use proptest::prelude::*;

fn symbol(seed: u64, modes: usize, degree: u32, complex: bool) -> PhaseSymbol {
    random_symbol(
        &mut instance_rng(seed, 0),
        SymbolShape {
            mode_count: modes,
            max_degree: degree,
            max_terms: 4,
            complex,
        },
    )
}

fn operator(seed: u64, modes: usize) -> LadderExpr {
    quantize(&symbol(seed, modes, 3, true), Scheme::Weyl).unwrap()
}

fn scheme() -> impl Strategy<Value = Scheme> {
    prop::sample::select(Scheme::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), modes in 1usize..=2) {
        let f = symbol(seed, modes, 5, true);
        prop_assert_eq!(parse_symbol(&f.pretty(), modes, VariableConvention::Xp).unwrap(), f.clone());
        prop_assert_eq!(parse_symbol(&f.pretty_alpha(), modes, VariableConvention::Alpha).unwrap(), f);
    }

    #[test]
    fn inverse_property(seed in any::<u64>(), modes in 1usize..=2, s in scheme()) {
        let f = symbol(seed, modes, 5, true);
        prop_assert_eq!(symbol_of(&quantize(&f, s).unwrap(), s), f);
    }

    #[test]
    fn quantization_is_linear(a in any::<u64>(), b in any::<u64>(), k in -9i64..=9, s in scheme()) {
        let f = symbol(a, 2, 4, true);
        let g = symbol(b, 2, 4, true);
        let c = Scalar::from_ratio(k, 7);
        let lhs = quantize(&f.scale(&c).add(&g), s).unwrap();
        let rhs = quantize(&f, s).unwrap().scale(&c).add(&quantize(&g, s).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn real_symbols_give_self_adjoint_operators(seed in any::<u64>(), s in scheme()) {
        let f = symbol(seed, 2, 5, false);
        prop_assert!(quantize(&f, s).unwrap().is_self_adjoint());
    }

    #[test]
    fn conversions_compose(seed in any::<u64>(), a in scheme(), b in scheme(), c in scheme()) {
        let f = symbol(seed, 1, 5, true);
        let two_step = convert_scheme(&convert_scheme(&f, a, b).unwrap(), b, c).unwrap();
        prop_assert_eq!(two_step, convert_scheme(&f, a, c).unwrap());
    }

    #[test]
    fn operator_jacobi_identity(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (operator(a, 2), operator(b, 2), operator(c, 2));
        let cyc = |p: &LadderExpr, q: &LadderExpr, r: &LadderExpr| {
            commutator(p, &commutator(q, r).unwrap()).unwrap()
        };
        let sum = cyc(&x, &y, &z).add(&cyc(&y, &z, &x)).add(&cyc(&z, &x, &y));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn poisson_jacobi_identity(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (f, g, h) = (symbol(a, 2, 3, true), symbol(b, 2, 3, true), symbol(c, 2, 3, true));
        let cyc = |p: &PhaseSymbol, q: &PhaseSymbol, r: &PhaseSymbol| {
            poisson_bracket(p, &poisson_bracket(q, r).unwrap()).unwrap()
        };
        prop_assert!(cyc(&f, &g, &h).add(&cyc(&g, &h, &f)).add(&cyc(&h, &f, &g)).is_zero());
    }

    #[test]
    fn operator_product_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (operator(a, 1), operator(b, 1), operator(c, 1));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
    }

    #[test]
    fn adjoint_reverses_products(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (operator(a, 2), operator(b, 2));
        prop_assert_eq!(x.mul(&y).adjoint(), y.adjoint().mul(&x.adjoint()));
    }
}

//! Sparse multimode term maps shared by phase-space symbols and ladder expressions.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// One exponent pair per mode. Its meaning depends on the owner:
/// `(alpha, conj(alpha))` powers for symbols, `(x, p)` powers for the
/// position/momentum form, `(creation, annihilation)` counts for ladder words.
pub type Exponents = Vec<(u32, u32)>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TermMap {
    mode_count: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl TermMap {
    pub fn zero(mode_count: usize) -> Self {
        TermMap {
            mode_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(mode_count: usize, c: Scalar) -> Self {
        TermMap::single(mode_count, vec![(0, 0); mode_count], c)
    }

    pub fn single(mode_count: usize, key: Exponents, c: Scalar) -> Self {
        debug_assert_eq!(key.len(), mode_count);
        let mut out = TermMap::zero(mode_count);
        out.add_term(key, &c);
        out
    }

    /// Monomial carrying `pair` on one mode and `(0, 0)` elsewhere.
    pub fn on_mode(mode_count: usize, mode: usize, pair: (u32, u32), c: Scalar) -> Self {
        let mut key = vec![(0, 0); mode_count];
        key[mode] = pair;
        TermMap::single(mode_count, key, c)
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn get(&self, key: &[(u32, u32)]) -> Option<&Scalar> {
        self.terms.get(key)
    }

    pub fn add_term(&mut self, key: Exponents, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &TermMap) {
        debug_assert_eq!(self.mode_count, other.mode_count);
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c);
        }
    }

    pub fn add(&self, other: &TermMap) -> TermMap {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> TermMap {
        self.map_coefficients(|c| -c)
    }

    pub fn sub(&self, other: &TermMap) -> TermMap {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> TermMap {
        if s.is_zero() {
            return TermMap::zero(self.mode_count);
        }
        self.map_coefficients(|c| c * s)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> TermMap {
        let mut out = TermMap::zero(self.mode_count);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    /// Product with exponents added per mode (commuting variables).
    pub fn commutative_mul(&self, other: &TermMap) -> TermMap {
        debug_assert_eq!(self.mode_count, other.mode_count);
        let mut out = TermMap::zero(self.mode_count);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key = k1
                    .iter()
                    .zip(k2)
                    .map(|(a, b)| (a.0 + b.0, a.1 + b.1))
                    .collect();
                out.add_term(key, &(c1 * c2));
            }
        }
        out
    }

    /// Conjugates coefficients and swaps each exponent pair.
    pub fn conj_swapped(&self) -> TermMap {
        let mut out = TermMap::zero(self.mode_count);
        for (k, c) in &self.terms {
            out.add_term(k.iter().map(|&(a, b)| (b, a)).collect(), &c.conj());
        }
        out
    }

    /// Largest `first + second` exponent sum on any single mode.
    pub fn max_mode_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|(a, b)| a + b))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.iter().map(|(a, b)| a + b).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (k, c) = self.terms.iter().next()?;
                k.iter().all(|&p| p == (0, 0)).then(|| c.clone())
            }
            _ => None,
        }
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

pub(crate) fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// `(c1 u + c2 v)^a (c3 u + c4 v)^b` expanded as `(u power, v power) -> coefficient`.
pub(crate) fn expand_linear_powers(
    a: u32,
    b: u32,
    first: (&Scalar, &Scalar),
    second: (&Scalar, &Scalar),
) -> BTreeMap<(u32, u32), Scalar> {
    let mut out: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
    for i in 0..=a {
        let left = &(&first.0.pow(i) * &first.1.pow(a - i)) * &Scalar::from_int(binomial(a, i) as i64);
        for j in 0..=b {
            let right =
                &(&second.0.pow(j) * &second.1.pow(b - j)) * &Scalar::from_int(binomial(b, j) as i64);
            let key = (i + j, a - i + b - j);
            let c = &left * &right;
            let slot = out.entry(key).or_default();
            *slot += &c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(6), 720);
    }

    #[test]
    fn linear_power_square() {
        // (u + v)^2 = u^2 + 2uv + v^2
        let one = Scalar::one();
        let e = expand_linear_powers(2, 0, (&one, &one), (&one, &one));
        assert_eq!(e[&(2, 0)], Scalar::one());
        assert_eq!(e[&(1, 1)], Scalar::from_int(2));
        assert_eq!(e[&(0, 2)], Scalar::one());
    }

    #[test]
    fn cancellation_in_add() {
        let a = TermMap::on_mode(1, 0, (1, 0), Scalar::one());
        assert!(a.sub(&a).is_empty());
        assert_eq!(a.as_constant(), None);
        assert_eq!(TermMap::zero(2).as_constant(), Some(Scalar::zero()));
    }
}

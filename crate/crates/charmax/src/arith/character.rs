//! Dirichlet characters as exponent tuples against the unit-group generators.
//!
//! A character mod q is determined by where it sends each component
//! generator: χ(g_i) = e(e_i / order_i). Every value χ(n) is then an exact
//! root of unity e(num/den) with den dividing the group exponent, carried
//! around as a reduced rational; complex doubles appear only when a caller
//! asks for them. This keeps algebraic identities (multiplicativity,
//! conjugation, orthogonality class counts) testable exactly.

use std::sync::Arc;

use num_complex::Complex64;

use super::factor::gcd;
use super::group::UnitGroup;
use super::roots::unit_root;
use crate::error::{Error, Result};

/// An exact character value: zero or a root of unity e(num/den) with the
/// fraction reduced and 0 ≤ num < den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root { num: u64, den: u64 },
}

impl CharValue {
    pub fn one() -> Self {
        CharValue::Root { num: 0, den: 1 }
    }

    /// e(num/den), reducing the fraction and the numerator mod den.
    pub fn root(num: u64, den: u64) -> Self {
        assert!(den > 0, "root-of-unity order must be positive");
        let num = num % den;
        let g = gcd(num, den);
        if num == 0 {
            CharValue::Root { num: 0, den: 1 }
        } else {
            CharValue::Root {
                num: num / g,
                den: den / g,
            }
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, CharValue::Zero)
    }

    pub fn is_one(self) -> bool {
        matches!(self, CharValue::Root { num: 0, .. })
    }

    pub fn conj(self) -> Self {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, den } => CharValue::Root {
                num: (den - num) % den,
                den: if num == 0 { 1 } else { den },
            },
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { num, den } => unit_root(num, den),
        }
    }

    /// Multiplicative order of the value (1 for the value 1); None for zero.
    pub fn order(self) -> Option<u64> {
        match self {
            CharValue::Zero => None,
            CharValue::Root { den, .. } => Some(den),
        }
    }
}

impl std::ops::Mul for CharValue {
    type Output = CharValue;
    fn mul(self, rhs: CharValue) -> CharValue {
        match (self, rhs) {
            (CharValue::Zero, _) | (_, CharValue::Zero) => CharValue::Zero,
            (CharValue::Root { num: n1, den: d1 }, CharValue::Root { num: n2, den: d2 }) => {
                let g = gcd(d1, d2);
                let l = d1 / g * d2;
                CharValue::root(n1 * (l / d1) + n2 * (l / d2), l)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// A Dirichlet character: a shared group structure plus one exponent per
/// cyclic component (`0 ≤ exponents[i] < order_i`).
#[derive(Debug, Clone)]
pub struct Character {
    group: Arc<UnitGroup>,
    exponents: Vec<u64>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.group.q() == other.group.q() && self.exponents == other.exponents
    }
}
impl Eq for Character {}

impl Character {
    pub fn principal(group: Arc<UnitGroup>) -> Self {
        let exponents = vec![0; group.components().len()];
        Character { group, exponents }
    }

    /// Build from an exponent tuple; entries are reduced mod the component
    /// orders so any u64 tuple of the right length is accepted.
    pub fn from_exponents(group: Arc<UnitGroup>, exponents: &[u64]) -> Result<Self> {
        if exponents.len() != group.components().len() {
            return Err(Error::GroupMismatch {
                expected: group.components().len() as u64,
                got: exponents.len() as u64,
            });
        }
        let exponents = exponents
            .iter()
            .zip(group.components())
            .map(|(&e, c)| e % c.order)
            .collect();
        Ok(Character { group, exponents })
    }

    /// The index-th character in the lexicographic enumeration.
    pub fn from_index(group: Arc<UnitGroup>, index: u64) -> Self {
        let mut exponents = vec![0u64; group.components().len()];
        let mut rest = index;
        for (slot, c) in exponents.iter_mut().zip(group.components()).rev() {
            *slot = rest % c.order;
            rest /= c.order;
        }
        debug_assert_eq!(rest, 0, "character index out of range");
        Character { group, exponents }
    }

    /// Position of this character in the lexicographic enumeration.
    pub fn index(&self) -> u64 {
        let mut idx = 0u64;
        for (&e, c) in self.exponents.iter().zip(self.group.components()) {
            idx = idx * c.order + e;
        }
        idx
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.q()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// χ(n), exactly.
    pub fn eval(&self, n: u64) -> CharValue {
        let Some(dlog) = self.group.dlog(n) else {
            return CharValue::Zero;
        };
        let l = self.group.exponent();
        let mut acc = 0u64;
        for ((&e, &d), c) in self
            .exponents
            .iter()
            .zip(dlog)
            .zip(self.group.components())
        {
            // (e*d mod order) * (l/order) < l, and the sum stays well under
            // u64 with at most a handful of components.
            let local = (e as u128 * d as u128 % c.order as u128) as u64;
            acc += local * (l / c.order);
        }
        CharValue::root(acc, l)
    }

    pub fn conjugate(&self) -> Character {
        let exponents = self
            .exponents
            .iter()
            .zip(self.group.components())
            .map(|(&e, c)| (c.order - e) % c.order)
            .collect();
        Character {
            group: Arc::clone(&self.group),
            exponents,
        }
    }

    /// Order of χ in the dual group.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(self.group.components())
            .fold(1u64, |acc, (&e, c)| {
                let o = c.order / gcd(e, c.order);
                acc / gcd(acc, o) * o
            })
    }

    /// Even iff χ(-1) = 1.
    pub fn parity(&self) -> Parity {
        let q = self.group.q();
        if q <= 2 {
            return Parity::Even;
        }
        if self.eval(q - 1).is_one() {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor().0 == self.modulus()
    }

    /// The conductor f and the primitive character mod f inducing χ.
    ///
    /// For every n coprime to q, χ(n) = χ*(n mod f); f = 1 exactly for the
    /// principal character, which is induced by the trivial character mod 1.
    pub fn conductor(&self) -> (u64, Character) {
        let q = self.modulus();
        let mut f = 1u64;
        {
            let mut i = 0;
            let comps = self.group.components();
            for &(p, e) in self.group.modulus().factors() {
                if p == 2 {
                    match e {
                        1 => {}
                        2 => {
                            if self.exponents[i] != 0 {
                                f *= 4;
                            }
                            i += 1;
                        }
                        _ => {
                            let s = self.exponents[i];
                            let a = self.exponents[i + 1];
                            let half = comps[i + 1].order; // 2^(e-2)
                            if a != 0 {
                                // order of the 5-part is 2^u, u >= 1
                                let d5 = half / gcd(a, half);
                                f *= 4 * d5;
                            } else if s != 0 {
                                f *= 4;
                            }
                            i += 2;
                        }
                    }
                } else {
                    let a = self.exponents[i];
                    let m = comps[i].order;
                    let d = m / gcd(a, m);
                    if d > 1 {
                        let mut c = 1;
                        let mut t = d;
                        while t % p == 0 {
                            t /= p;
                            c += 1;
                        }
                        f *= p.pow(c);
                    }
                    i += 1;
                }
            }
        }

        let fg = UnitGroup::new(f).expect("conductor group");
        let mut exps = Vec::with_capacity(fg.components().len());
        for c in fg.components() {
            // A residue ≡ generator (mod f) that is coprime to q; exists in
            // every reduced class mod f.
            let mut m = c.generator;
            loop {
                if self.group.is_coprime(m % q.max(1)) || q == 1 {
                    break;
                }
                m += f;
                assert!(m < q + f + f, "no coprime lift found; q={q} f={f}");
            }
            match self.eval(m % q.max(1)) {
                CharValue::Zero => unreachable!("lift chosen coprime"),
                CharValue::Root { num, den } => {
                    debug_assert_eq!(c.order % den, 0);
                    exps.push(num * (c.order / den) % c.order);
                }
            }
        }
        let star = Character::from_exponents(fg, &exps).expect("induced character");
        (f, star)
    }

    /// Gauss sum τ(χ) = Σ_{n≤q} χ(n) e(n/q).
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus();
        let mut acc = Complex64::new(0.0, 0.0);
        for n in 1..=q {
            let v = self.eval(n);
            if !v.is_zero() {
                acc += v.to_complex() * unit_root(n % q, q);
            }
        }
        acc
    }
}

/// All φ(q) characters mod q in deterministic lexicographic order on
/// exponent tuples; the principal character comes first.
pub fn enumerate_characters(group: &Arc<UnitGroup>) -> impl Iterator<Item = Character> + '_ {
    let total = group.phi();
    let group = Arc::clone(group);
    (0..total).map(move |i| Character::from_index(Arc::clone(&group), i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(q: u64) -> Arc<UnitGroup> {
        UnitGroup::new(q).unwrap()
    }

    #[test]
    fn char_value_algebra() {
        let a = CharValue::root(1, 4); // i
        let b = CharValue::root(3, 4); // -i
        assert_eq!(a * b, CharValue::one());
        assert_eq!(a * a, CharValue::root(1, 2));
        assert_eq!(a.conj(), b);
        assert!(CharValue::root(4, 4).is_one());
        let z = a.to_complex();
        assert_eq!((z.re, z.im), (0.0, 1.0));
    }

    #[test]
    fn enumeration_is_complete_and_distinct() {
        for q in [5u64, 8, 15, 45, 101] {
            let g = group(q);
            let chars: Vec<Character> = enumerate_characters(&g).collect();
            assert_eq!(chars.len() as u64, g.phi());
            assert!(chars[0].is_principal());
            for (i, c) in chars.iter().enumerate() {
                assert_eq!(c.index(), i as u64);
            }
            // Distinctness via value tables on a few points
            let mut seen = std::collections::HashSet::new();
            for c in &chars {
                let sig: Vec<CharValue> = (1..q).map(|n| c.eval(n)).collect();
                assert!(seen.insert(sig), "duplicate character at q={q}");
            }
        }
    }

    #[test]
    fn multiplicativity_exact() {
        for q in [5u64, 8, 15, 45] {
            let g = group(q);
            for chi in enumerate_characters(&g) {
                for m in 1..q {
                    for n in 1..q {
                        let lhs = chi.eval(m * n % q);
                        let rhs = chi.eval(m) * chi.eval(n);
                        assert_eq!(lhs, rhs, "q={q} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn conjugate_character_conjugates_values() {
        let g = group(45);
        for chi in enumerate_characters(&g) {
            let bar = chi.conjugate();
            for n in 0..45 {
                assert_eq!(chi.eval(n).conj(), bar.eval(n));
            }
        }
    }

    #[test]
    fn parity_examples() {
        let g = group(5);
        // index 2 is the quadratic character (exponent 2 of order 4)
        let quad = Character::from_index(Arc::clone(&g), 2);
        assert_eq!(quad.eval(2), CharValue::root(1, 2)); // -1
        assert_eq!(quad.parity(), Parity::Even);
        let quartic = Character::from_index(Arc::clone(&g), 1);
        assert_eq!(quartic.parity(), Parity::Odd);
        // χ(-1) is always ±1
        for q in [8u64, 15, 45] {
            let g = group(q);
            for chi in enumerate_characters(&g) {
                let v = chi.eval(q - 1);
                assert!(v.is_one() || v == CharValue::root(1, 2));
            }
        }
    }

    #[test]
    fn conductor_of_principal_is_one() {
        for q in [5u64, 8, 45] {
            let g = group(q);
            let (f, star) = Character::principal(g).conductor();
            assert_eq!(f, 1);
            assert!(star.is_principal());
        }
    }

    #[test]
    fn conductor_mod_nine_drops_to_three() {
        let g = group(9);
        // (Z/9)* is cyclic of order 6 generated by 2; exponent 3 gives the
        // character sending 2 -> -1, which is induced by the quadratic
        // character mod 3.
        let chi = Character::from_exponents(g, &[3]).unwrap();
        let (f, star) = chi.conductor();
        assert_eq!(f, 3);
        assert_eq!(star.eval(2), CharValue::root(1, 2));
        assert!(star.is_primitive());
    }

    #[test]
    fn induced_character_matches_on_coprimes() {
        for q in [9u64, 12, 45, 40, 72] {
            let g = group(q);
            for chi in enumerate_characters(&g) {
                let (f, star) = chi.conductor();
                assert_eq!(q % f, 0, "conductor divides the modulus");
                for n in 1..q {
                    if g.is_coprime(n) {
                        assert_eq!(chi.eval(n), star.eval(n % f), "q={q} f={f} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn conductor_floor_is_stable() {
        // conductor of the induced primitive character is itself
        for q in [45u64, 40] {
            let g = group(q);
            for chi in enumerate_characters(&g) {
                let (f, star) = chi.conductor();
                let (f2, _) = star.conductor();
                assert_eq!(f, f2);
            }
        }
    }

    #[test]
    fn gauss_sum_examples() {
        // principal character mod a prime: τ = -1
        for q in [5u64, 7, 101] {
            let g = group(q);
            let tau = Character::principal(g).gauss_sum();
            assert!((tau.re + 1.0).abs() < 1e-12 && tau.im.abs() < 1e-12);
        }
        // quadratic character mod 5: τ = √5 (real, positive)
        let g = group(5);
        let tau = Character::from_index(g, 2).gauss_sum();
        assert!((tau.re - 5f64.sqrt()).abs() < 1e-12);
        assert!(tau.im.abs() < 1e-12);
    }

    #[test]
    fn gauss_magnitude_primitive() {
        for q in [5u64, 7, 8, 9, 12, 15, 16, 101] {
            let g = group(q);
            for chi in enumerate_characters(&g) {
                if chi.is_primitive() {
                    let tau = chi.gauss_sum();
                    assert!(
                        (tau.norm() - (q as f64).sqrt()).abs() < 1e-9,
                        "q={q} exps={:?} |tau|={}",
                        chi.exponents(),
                        tau.norm()
                    );
                }
            }
        }
    }

    #[test]
    fn character_order_divides_group_exponent() {
        let g = group(45);
        for chi in enumerate_characters(&g) {
            assert_eq!(g.exponent() % chi.order(), 0);
            // χ^order is principal: value at every generator is 1
            for c in g.components() {
                let v = chi.eval(c.generator);
                let mut acc = CharValue::one();
                for _ in 0..chi.order() {
                    acc = acc * v;
                }
                assert!(acc.is_one());
            }
        }
    }
}

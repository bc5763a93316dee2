//! Structure of the unit group (Z/qZ)* and its discrete-log table.
//!
//! The group is decomposed by CRT into cyclic components, one per odd prime
//! power (generated by the smallest primitive root) and the classical one or
//! two components at powers of two: (Z/4)* is generated by -1, and (Z/2^e)*
//! for e ≥ 3 by {-1, 5}. Each local generator is lifted through CRT to a
//! residue mod q that is 1 in every other component, so
//! `n ≡ Π generator_i ^ dlog(n)_i (mod q)` holds globally for every n
//! coprime to q.
//!
//! The discrete-log table is a flat array with one entry per residue and per
//! component, built in O(q) by walking each cyclic component once. This is a
//! deliberate trade: construction is linear and evaluation is O(1) per
//! character value, which is what exhaustive sweeps over all characters need.
//! The memory cost is the ceiling documented on [`UnitGroup::new`].

use std::sync::Arc;

use super::factor::{factorize, gcd, pow_mod, FactoredModulus};
use crate::error::{Error, Result};

/// One cyclic factor of (Z/qZ)*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Component {
    /// A residue mod q generating this component and ≡ 1 in all others.
    pub generator: u64,
    pub order: u64,
}

const DLOG_SENTINEL: u32 = u32::MAX;

/// Largest q for which the linear dlog table is allowed (1 GiB of u32 per
/// component). Far below this the table already dominates memory; moduli
/// beyond it are out of scope for exhaustive sweeps.
pub const MAX_TABLE_Q: u64 = 1 << 28;

#[derive(Debug)]
pub struct UnitGroup {
    modulus: FactoredModulus,
    components: Vec<Component>,
    /// lcm of component orders: every character value is an `exponent`-th
    /// root of unity.
    exponent: u64,
    /// Flat table, `stride = components.len()` entries per residue;
    /// `DLOG_SENTINEL` marks residues not coprime to q.
    dlog: Vec<u32>,
}

impl UnitGroup {
    /// Build the group structure and full discrete-log table for q ≥ 1.
    ///
    /// q = 1 and q = 2 yield the trivial group (no components); they exist so
    /// that conductors and induced characters have somewhere to live.
    pub fn new(q: u64) -> Result<Arc<Self>> {
        if q == 0 {
            return Err(Error::ZeroArgument);
        }
        if q > MAX_TABLE_Q {
            return Err(Error::ModulusTooLarge {
                q,
                max: MAX_TABLE_Q,
            });
        }
        let modulus = factorize(q)?;

        // Local generator/order pairs per component, each tagged with the
        // prime power it reduces by.
        struct LocalComponent {
            prime_power: u64,
            local_generator: u64,
            order: u64,
        }
        let mut locals: Vec<LocalComponent> = Vec::new();
        for &(p, e) in modulus.factors() {
            let pe = p.pow(e);
            if p == 2 {
                match e {
                    1 => {} // (Z/2)* is trivial
                    2 => locals.push(LocalComponent {
                        prime_power: 4,
                        local_generator: 3,
                        order: 2,
                    }),
                    _ => {
                        locals.push(LocalComponent {
                            prime_power: pe,
                            local_generator: pe - 1, // -1
                            order: 2,
                        });
                        locals.push(LocalComponent {
                            prime_power: pe,
                            local_generator: 5,
                            order: 1 << (e - 2),
                        });
                    }
                }
            } else {
                locals.push(LocalComponent {
                    prime_power: pe,
                    local_generator: smallest_primitive_root(p, e),
                    order: (p - 1) * p.pow(e - 1),
                });
            }
        }

        // Lift each local generator: ≡ g mod its prime power, ≡ 1 elsewhere.
        let components: Vec<Component> = locals
            .iter()
            .map(|lc| Component {
                generator: crt_lift(lc.local_generator, lc.prime_power, q),
                order: lc.order,
            })
            .collect();

        let exponent = components.iter().fold(1u64, |acc, c| lcm(acc, c.order));

        // Per-component local dlog arrays indexed by residue mod the prime
        // power, then one flat pass over all residues mod q.
        let stride = components.len();
        let mut local_tables: Vec<Vec<u32>> = Vec::with_capacity(stride);
        {
            let mut idx = 0;
            for &(p, e) in modulus.factors() {
                let pe = p.pow(e);
                if p == 2 && e == 1 {
                    continue;
                }
                if p == 2 && e >= 3 {
                    // Joint walk over (-1)^s * 5^j fills both components.
                    let mut neg = vec![DLOG_SENTINEL; pe as usize];
                    let mut five = vec![DLOG_SENTINEL; pe as usize];
                    let half = 1u64 << (e - 2);
                    for s in 0..2u32 {
                        let mut x = if s == 0 { 1 } else { pe - 1 };
                        for j in 0..half {
                            neg[x as usize] = s;
                            five[x as usize] = j as u32;
                            x = x * 5 % pe;
                        }
                    }
                    local_tables.push(neg);
                    local_tables.push(five);
                    idx += 2;
                } else {
                    let lc = &locals[idx];
                    let mut t = vec![DLOG_SENTINEL; pe as usize];
                    let mut x = 1u64;
                    for j in 0..lc.order {
                        t[x as usize] = j as u32;
                        x = mul_mod(x, lc.local_generator, pe);
                    }
                    local_tables.push(t);
                    idx += 1;
                }
            }
        }
        // Parallel list of prime powers per component, for the reduction.
        let reducers: Vec<u64> = locals.iter().map(|lc| lc.prime_power).collect();

        let mut dlog = vec![DLOG_SENTINEL; (q as usize) * stride.max(1)];
        if stride == 0 {
            // Trivial group: keep an empty table; dlog() special-cases it.
            dlog.clear();
        } else {
            for n in 0..q {
                let base = n as usize * stride;
                let mut ok = true;
                for (i, (&pe, table)) in reducers.iter().zip(&local_tables).enumerate() {
                    let v = table[(n % pe) as usize];
                    if v == DLOG_SENTINEL {
                        ok = false;
                        break;
                    }
                    dlog[base + i] = v;
                }
                if !ok {
                    dlog[base..base + stride].fill(DLOG_SENTINEL);
                }
            }
        }

        Ok(Arc::new(UnitGroup {
            modulus,
            components,
            exponent,
            dlog,
        }))
    }

    pub fn q(&self) -> u64 {
        self.modulus.q()
    }

    pub fn phi(&self) -> u64 {
        self.modulus.phi()
    }

    pub fn modulus(&self) -> &FactoredModulus {
        &self.modulus
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// lcm of the component orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Exponent tuple of n against the component generators, or None when
    /// gcd(n, q) > 1.
    pub fn dlog(&self, n: u64) -> Option<&[u32]> {
        let r = n % self.q().max(1);
        let stride = self.components.len();
        if stride == 0 {
            // q ∈ {1, 2}: the only unit is 1 (and everything when q = 1).
            let coprime = self.q() == 1 || r == 1;
            return coprime.then_some(&[][..]);
        }
        let base = r as usize * stride;
        let slice = &self.dlog[base..base + stride];
        if slice[0] == DLOG_SENTINEL {
            None
        } else {
            Some(slice)
        }
    }

    pub fn is_coprime(&self, n: u64) -> bool {
        self.dlog(n).is_some()
    }

    /// Raw flat discrete-log table for scan loops that cannot afford the
    /// per-residue Option: `stride` entries per residue, sentinel-marked.
    pub(crate) fn dlog_raw(&self) -> &[u32] {
        &self.dlog
    }

    pub(crate) const SENTINEL: u32 = DLOG_SENTINEL;
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b).max(1);
    }
    a / gcd(a, b) * b
}

/// x ≡ g (mod pe), x ≡ 1 (mod q/pe), 0 < x < q. For pe == q this is g itself.
fn crt_lift(g: u64, pe: u64, q: u64) -> u64 {
    let rest = q / pe;
    if rest == 1 {
        return g % q;
    }
    // x = g + pe * t with t ≡ (1 - g) * pe^{-1} (mod rest)
    let pe_inv = mod_inverse(pe % rest, rest);
    let diff = (1 + rest as u128 - (g % rest) as u128) % rest as u128; // (1 - g) mod rest
    let t = (diff * pe_inv as u128) % rest as u128;
    (g as u128 + pe as u128 * t) as u64 % q
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    // Extended Euclid; gcd(a, m) = 1 by construction here.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

/// Smallest primitive root mod p^e for odd prime p.
fn smallest_primitive_root(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let prime_factors = distinct_prime_factors(phi_p);
    let mut g = 2u64;
    loop {
        let primitive_mod_p = prime_factors.iter().all(|&f| pow_mod(g, phi_p / f, p) != 1);
        if primitive_mod_p {
            // Lifts to p^e exactly when g^(p-1) ≢ 1 mod p^2.
            if e == 1 || pow_mod(g, p - 1, p * p) != 1 {
                return g;
            }
        }
        g += 1;
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

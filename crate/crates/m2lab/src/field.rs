//! Exact arithmetic in F_q for prime and small prime-power q.
//!
//! Elements are canonical integers in [0, q): the base-p digits of the
//! representative are the coefficients of the residue polynomial, constant
//! term first. Arithmetic for q <= 32 goes through precomputed q x q lookup
//! tables because the graph constructions downstream evaluate field ops in
//! loops of size up to q^8.
//!
//! Prime-power support is limited to q in {4, 8, 9, 16, 25, 27} with a fixed
//! table of irreducible moduli; the experiments never need anything larger
//! and a fixed table avoids a modulus search at startup. Each modulus is
//! still re-verified irreducible at construction by trial division.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// An element of F_q, represented canonically as an integer in [0, q).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fe(pub u8);

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Binary field operations exposed through the checked entry point.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Largest field order supported by the lookup-table backend.
pub const MAX_Q: u32 = 32;

/// Irreducible moduli for the supported prime powers, coefficients in
/// ascending degree order (constant term first, leading 1 last).
const MODULUS_TABLE: &[(u32, &[u8])] = &[
    (4, &[1, 1, 1]),        // x^2 + x + 1 over F_2
    (8, &[1, 1, 0, 1]),     // x^3 + x + 1 over F_2
    (9, &[1, 0, 1]),        // x^2 + 1 over F_3
    (16, &[1, 1, 0, 0, 1]), // x^4 + x + 1 over F_2
    (25, &[1, 1, 1]),       // x^2 + x + 1 over F_5
    (27, &[1, 2, 0, 1]),    // x^3 + 2x + 1 over F_3
];

/// A realized finite field: the (p, k, modulus) description plus the
/// operation tables. Immutable after construction and safe to share.
#[derive(Clone)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u8>,
    add_t: Vec<u8>,
    sub_t: Vec<u8>,
    mul_t: Vec<u8>,
    neg_t: Vec<u8>,
    inv_t: Vec<u8>,
    trace_t: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(q={}, p={}, k={})", self.q, self.p, self.k)
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial remainder of `a` by monic `m`, both little-endian over F_p.
fn poly_rem(a: &[u8], m: &[u8], p: u32) -> Vec<u8> {
    let mut r: Vec<u32> = a.iter().map(|&c| c as u32).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p * p - lead * mc as u32) % p;
            }
        }
        r.pop();
    }
    while r.len() < dm {
        r.push(0);
    }
    r.iter().map(|&c| c as u8).collect()
}

/// Trial-division irreducibility test: no monic divisor of degree <= k/2.
fn modulus_is_irreducible(m: &[u8], p: u32) -> bool {
    let k = m.len() - 1;
    for deg in 1..=(k / 2) {
        // enumerate monic polynomials of this degree by their low coefficients
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g: Vec<u8> = Vec::with_capacity(deg + 1);
            let mut c = code;
            for _ in 0..deg {
                g.push((c % p as u64) as u8);
                c /= p as u64;
            }
            g.push(1);
            let r = poly_rem(m, &g, p);
            if r.iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Construct F_q. `q` must be a prime <= 31 or one of the supported
    /// prime powers {4, 8, 9, 16, 25, 27}.
    pub fn new(q: u32) -> Result<Field> {
        if q < 2 || q > MAX_Q {
            return Err(Error::ResourceLimit(format!(
                "field order {q} outside supported range 2..={MAX_Q}"
            )));
        }
        let (p, k, modulus): (u32, u32, Vec<u8>) = if is_prime(q) {
            (q, 1, Vec::new())
        } else if let Some((_, m)) = MODULUS_TABLE.iter().find(|(tq, _)| *tq == q) {
            let mut p = 2;
            while q % p != 0 {
                p += 1;
            }
            let mut k = 0;
            let mut t = q;
            while t > 1 {
                t /= p;
                k += 1;
            }
            (p, k, m.to_vec())
        } else {
            return Err(Error::Unsupported(format!(
                "q={q} is neither prime nor a supported prime power"
            )));
        };
        assert!(is_prime(p), "characteristic must be prime");
        if k > 1 {
            assert_eq!(modulus.len() as u32, k + 1);
            assert_eq!(*modulus.last().unwrap(), 1, "modulus must be monic");
            assert!(
                modulus_is_irreducible(&modulus, p),
                "modulus for q={q} is not irreducible"
            );
        }
        assert_eq!(p.pow(k), q);

        let qs = q as usize;
        let digits = |e: u32| -> Vec<u8> {
            let mut v = Vec::with_capacity(k as usize);
            let mut e = e;
            for _ in 0..k {
                v.push((e % p) as u8);
                e /= p;
            }
            v
        };
        let undigits = |v: &[u8]| -> u8 {
            let mut e = 0u32;
            for &c in v.iter().rev() {
                e = e * p + c as u32;
            }
            e as u8
        };

        let mut add_t = vec![0u8; qs * qs];
        let mut sub_t = vec![0u8; qs * qs];
        let mut mul_t = vec![0u8; qs * qs];
        let mut neg_t = vec![0u8; qs];
        for a in 0..q {
            let da = digits(a);
            let neg: Vec<u8> = da.iter().map(|&c| ((p - c as u32) % p) as u8).collect();
            neg_t[a as usize] = undigits(&neg);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u8> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                let diff: Vec<u8> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| ((x as u32 + p - y as u32) % p) as u8)
                    .collect();
                add_t[(a * q + b) as usize] = undigits(&sum);
                sub_t[(a * q + b) as usize] = undigits(&diff);
                // polynomial product then reduction
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u32 * y as u32) % p;
                    }
                }
                let prod8: Vec<u8> = prod.iter().map(|&c| c as u8).collect();
                let red = if k == 1 {
                    vec![(prod[0] % p) as u8]
                } else {
                    poly_rem(&prod8, &modulus, p)
                };
                mul_t[(a * q + b) as usize] = undigits(&red);
            }
        }
        let mut inv_t = vec![0u8; qs];
        for a in 1..q {
            let mut found = false;
            for b in 1..q {
                if mul_t[(a * q + b) as usize] == 1 {
                    inv_t[a as usize] = b as u8;
                    found = true;
                    break;
                }
            }
            assert!(found, "no inverse for {a} in F_{q}");
        }
        // absolute trace to F_p: Tr(x) = x + x^p + ... + x^(p^(k-1))
        let mut trace_t = vec![0u8; qs];
        for a in 0..q {
            let frob = |x: u8| -> u8 {
                let mut y = 1u8;
                for _ in 0..p {
                    y = mul_t[(y as u32 * q + x as u32) as usize];
                }
                y
            };
            let mut acc = 0u8;
            let mut x = a as u8;
            for _ in 0..k {
                acc = add_t[(acc as u32 * q + x as u32) as usize];
                x = frob(x);
            }
            assert!((acc as u32) < p, "trace landed outside the prime subfield");
            trace_t[a as usize] = acc;
        }

        Ok(Field {
            p,
            k,
            q,
            modulus,
            add_t,
            sub_t,
            mul_t,
            neg_t,
            inv_t,
            trace_t,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first; empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(|e| Fe(e as u8))
    }

    #[inline]
    pub fn contains(&self, a: Fe) -> bool {
        (a.0 as u32) < self.q
    }

    fn check(&self, a: Fe) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::SpecMismatch(format!(
                "element {} is not a canonical element of F_{}",
                a.0, self.q
            )))
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(self.contains(a) && self.contains(b));
        Fe(self.add_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(self.contains(a) && self.contains(b));
        Fe(self.sub_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        debug_assert!(self.contains(a) && self.contains(b));
        Fe(self.mul_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        debug_assert!(self.contains(a));
        Fe(self.neg_t[a.0 as usize])
    }

    /// Multiplicative inverse; zero is a `DivisionByZero` error.
    pub fn inv(&self, a: Fe) -> Result<Fe> {
        self.check(a)?;
        if a.0 == 0 {
            return Err(Error::DivisionByZero { q: self.q });
        }
        Ok(Fe(self.inv_t[a.0 as usize]))
    }

    /// Checked binary operation; rejects elements outside [0, q).
    pub fn arith(&self, a: Fe, b: Fe, op: ArithOp) -> Result<Fe> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
        })
    }

    /// Absolute trace Tr: F_q -> F_p (identity on prime fields).
    #[inline]
    pub fn trace(&self, a: Fe) -> Fe {
        debug_assert!(self.contains(a));
        Fe(self.trace_t[a.0 as usize])
    }

    /// Kloosterman sum K(a, b) = sum over x in F_q^* of e(Tr(ax + b/x)),
    /// where e(t) = exp(2 pi i t / p). The sum is conjugation-closed, so the
    /// value is real; the imaginary part is accumulated anyway and asserted
    /// below 1e-9 as a cancellation check.
    pub fn kloosterman(&self, a: Fe, b: Fe) -> f64 {
        debug_assert!(self.contains(a) && self.contains(b));
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        for x in 1..self.q {
            let x = Fe(x as u8);
            let xi = Fe(self.inv_t[x.0 as usize]);
            let t = self.trace(self.add(self.mul(a, x), self.mul(b, xi)));
            let ang = 2.0 * PI * t.0 as f64 / self.p as f64;
            re += ang.cos();
            im += ang.sin();
        }
        assert!(
            im.abs() < 1e-9,
            "Kloosterman sum K({},{}) over F_{} has imaginary part {im:e}",
            a.0,
            b.0,
            self.q
        );
        re
    }
}

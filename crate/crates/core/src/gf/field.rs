//! Finite fields of order at most 256.
//!
//! Two families are supported: prime fields GF(p) for primes p <= 251, and
//! binary extension fields GF(2^m) for m <= 8. Every field is backed by full
//! addition and multiplication tables, so arithmetic is a single lookup and
//! both families share the same code path.
//!
//! Elements are plain `u8` labels in `0..q`. For prime fields the label is
//! the residue; for GF(2^m) it is the polynomial basis bit pattern.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::GfError;

/// A field element label in `0..q`.
pub type Elem = u8;

// Low-weight irreducible polynomials for GF(2^m), indexed by m.
const BINARY_MODULI: [u16; 9] = [0, 0b11, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Prime,
    Binary { degree: u32 },
}

struct Tables {
    q: usize,
    characteristic: usize,
    family: Family,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field, cheap to clone and safe to share across threads.
#[derive(Clone)]
pub struct Field {
    t: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}

impl Eq for Field {}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn binary_mul(a: usize, b: usize, degree: u32) -> usize {
    let modulus = BINARY_MODULI[degree as usize] as usize;
    let (mut a, mut b, mut acc) = (a, b, 0usize);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << degree) != 0 {
            a ^= modulus;
        }
    }
    acc
}

impl Field {
    /// Builds GF(q). Fails unless q is a prime <= 251 or a power of two <= 256.
    pub fn new(q: usize) -> Result<Self, GfError> {
        let family = if q <= 251 && is_prime(q) {
            Family::Prime
        } else if q.is_power_of_two() && (4..=256).contains(&q) {
            Family::Binary {
                degree: q.trailing_zeros(),
            }
        } else {
            return Err(GfError::UnsupportedOrder(q));
        };

        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                let (s, p) = match family {
                    Family::Prime => ((a + b) % q, (a * b) % q),
                    Family::Binary { degree } => (a ^ b, binary_mul(a, b, degree)),
                };
                add[a * q + b] = s as Elem;
                mul[a * q + b] = p as Elem;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as Elem;
            if a != 0 {
                inv[a] = (1..q)
                    .find(|&b| mul[a * q + b] == 1)
                    .ok_or(GfError::UnsupportedOrder(q))? as Elem;
            }
        }
        let characteristic = match family {
            Family::Prime => q,
            Family::Binary { .. } => 2,
        };
        Ok(Field {
            t: Arc::new(Tables {
                q,
                characteristic,
                family,
                add,
                mul,
                neg,
                inv,
            }),
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.t.q
    }

    pub fn characteristic(&self) -> usize {
        self.t.characteristic
    }

    pub fn is_prime_field(&self) -> bool {
        self.t.family == Family::Prime
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        (a as usize) < self.t.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.t.add[a as usize * self.t.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.t.mul[a as usize * self.t.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.t.neg[a as usize]
    }

    /// Multiplicative inverse, `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.t.inv[a as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a*b + c`, the inner step of every elimination loop.
    #[inline]
    pub fn mul_add(&self, a: Elem, b: Elem, c: Elem) -> Elem {
        self.add(self.mul(a, b), c)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.t.q).map(|a| a as Elem)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.t.q) as Elem
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(1..self.t.q) as Elem
    }
}

//! Exact arithmetic over F2, F4 and small odd prime fields.

use std::fmt;
use std::ops::{Add, Mul};

use crate::error::{invalid, Result};

/// An element of F2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Gf2(pub bool);

impl Gf2 {
    pub const ZERO: Gf2 = Gf2(false);
    pub const ONE: Gf2 = Gf2(true);
}

// characteristic 2
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Gf2 {
    type Output = Gf2;
    fn add(self, rhs: Gf2) -> Gf2 {
        Gf2(self.0 ^ rhs.0)
    }
}

// characteristic 2
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for Gf2 {
    type Output = Gf2;
    fn mul(self, rhs: Gf2) -> Gf2 {
        Gf2(self.0 & rhs.0)
    }
}

/// An element of F4 = {0, 1, τ, τ²} with τ² = τ + 1.
///
/// Encoded on two bits as `a + bτ` (bit 0 = a, bit 1 = b), so addition is xor
/// and τ² is stored as 3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf4(u8);

const GF4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const GF4_INV: [u8; 4] = [0, 1, 3, 2];

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const TAU: Gf4 = Gf4(2);
    pub const TAU2: Gf4 = Gf4(3);
    pub const ALL: [Gf4; 4] = [Gf4::ZERO, Gf4::ONE, Gf4::TAU, Gf4::TAU2];
    pub const NONZERO: [Gf4; 3] = [Gf4::ONE, Gf4::TAU, Gf4::TAU2];

    /// Builds an element from its 2-bit code; only the low two bits are used.
    pub const fn from_bits(bits: u8) -> Gf4 {
        Gf4(bits & 3)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Frobenius conjugation x ↦ x².
    pub fn conj(self) -> Gf4 {
        self * self
    }

    pub fn inv(self) -> Result<Gf4> {
        if self.0 == 0 {
            return Err(invalid("inverse of zero in F4"));
        }
        Ok(Gf4(GF4_INV[self.0 as usize]))
    }

    /// True for 0 and 1.
    pub fn in_prime_field(self) -> bool {
        self.0 < 2
    }
}

// characteristic 2
#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Gf4 {
    type Output = Gf4;
    fn add(self, rhs: Gf4) -> Gf4 {
        Gf4(self.0 ^ rhs.0)
    }
}

impl Mul for Gf4 {
    type Output = Gf4;
    fn mul(self, rhs: Gf4) -> Gf4 {
        Gf4(GF4_MUL[self.0 as usize][rhs.0 as usize])
    }
}

impl fmt::Debug for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "0",
            1 => "1",
            2 => "τ",
            _ => "τ²",
        })
    }
}

/// Operation selector for [`gf4_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gf4Op {
    Add,
    Mul,
    Inv,
    Conj,
}

/// Dispatches a single F4 operation; binary operations require `y`.
pub fn gf4_arith(op: Gf4Op, x: Gf4, y: Option<Gf4>) -> Result<Gf4> {
    let need_y = || y.ok_or_else(|| invalid("binary F4 operation needs a second operand"));
    match op {
        Gf4Op::Add => Ok(x + need_y()?),
        Gf4Op::Mul => Ok(x * need_y()?),
        Gf4Op::Inv => x.inv(),
        Gf4Op::Conj => Ok(x.conj()),
    }
}

/// Field elements of F_ℓ are stored as bytes in `0..ℓ`.
pub type Elem = u8;

/// Context for arithmetic in an odd prime field F_ℓ with ℓ < 256.
///
/// All reductions are exact. `reduce_u32` uses Lemire's multiply-shift
/// remainder; `reduce_u16` is a cheaper Barrett step valid for inputs below
/// 2^16, which covers `a + b·c` for any three field elements.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u32,
    lemire: u64,
    barrett: u64,
    m16: u32,
    inverses: Vec<Elem>,
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}
impl Eq for PrimeField {}

fn is_prime(n: i64) -> bool {
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

/// Builds the context for F_ℓ; ℓ must be an odd prime below 256.
pub fn make_prime_field(ell: i64) -> Result<PrimeField> {
    PrimeField::new(ell)
}

impl PrimeField {
    pub fn new(ell: i64) -> Result<PrimeField> {
        if ell == 2 {
            return Err(invalid("characteristic 2 is excluded; ℓ must be odd"));
        }
        if !is_prime(ell) {
            return Err(invalid(format!("ℓ = {ell} is not prime")));
        }
        if ell >= 256 {
            return Err(invalid(format!("ℓ = {ell} is too large; supported primes are below 256")));
        }
        let p = ell as u32;
        let lemire = u64::MAX / p as u64 + 1;
        let barrett = (1u64 << 24).div_ceil(p as u64);
        let mut inverses = vec![0 as Elem; p as usize];
        for a in 1..p {
            let mut b = 1;
            while (a * b) % p != 1 {
                b += 1;
            }
            inverses[a as usize] = b as Elem;
        }
        let m16 = (1u32 << 16) / p;
        Ok(PrimeField { p, lemire, barrett, m16, inverses })
    }

    #[inline(always)]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Exact remainder for any 32-bit input.
    #[inline(always)]
    pub fn reduce_u32(&self, x: u32) -> Elem {
        let low = self.lemire.wrapping_mul(x as u64);
        (((low as u128) * (self.p as u128)) >> 64) as Elem
    }

    /// Exact remainder for inputs below 2^16.
    #[inline(always)]
    pub fn reduce_u16(&self, x: u32) -> Elem {
        let q = ((x as u64 * self.barrett) >> 24) as u32;
        (x - q * self.p) as Elem
    }

    /// Exact remainder for inputs below 2^16 using only 32-bit lanes, so
    /// loops over slices vectorize.
    #[inline(always)]
    pub fn reduce_small(&self, x: u32) -> u32 {
        let q = (x * self.m16) >> 16;
        let mut r = x - q * self.p;
        if r >= self.p {
            r -= self.p;
        }
        if r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline(always)]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let s = a as u32 + b as u32;
        (if s >= self.p { s - self.p } else { s }) as Elem
    }

    #[inline(always)]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        let s = a as u32 + self.p - b as u32;
        (if s >= self.p { s - self.p } else { s }) as Elem
    }

    #[inline(always)]
    pub fn neg(&self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            (self.p - a as u32) as Elem
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.reduce_u16(a as u32 * b as u32)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(invalid("inverse of zero"));
        }
        Ok(self.inverses[a as usize])
    }

    /// Inverse of a known-nonzero element.
    #[inline(always)]
    pub(crate) fn inv_nz(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.inverses[a as usize]
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduces a signed integer into `0..ℓ`.
    pub fn reduce_int(&self, z: i128) -> Elem {
        z.rem_euclid(self.p as i128) as Elem
    }

    /// The element as a signed representative in `(-ℓ/2, ℓ/2]`.
    pub fn signed(&self, a: Elem) -> i64 {
        let a = a as i64;
        if a > self.p as i64 / 2 {
            a - self.p as i64
        } else {
            a
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.p as Elem
    }
}

/// Reduces an integer modulo ℓ (free-function form of [`PrimeField::reduce_int`]).
pub fn reduce_int(ctx: &PrimeField, z: i128) -> Elem {
    ctx.reduce_int(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_examples() {
        assert_eq!(gf4_arith(Gf4Op::Conj, Gf4::TAU, None).unwrap(), Gf4::TAU2);
        assert_eq!(gf4_arith(Gf4Op::Mul, Gf4::TAU, Some(Gf4::TAU2)).unwrap(), Gf4::ONE);
        assert_eq!(gf4_arith(Gf4Op::Add, Gf4::TAU, Some(Gf4::TAU2)).unwrap(), Gf4::ONE);
        assert!(gf4_arith(Gf4Op::Inv, Gf4::ZERO, None).is_err());
        assert!(gf4_arith(Gf4Op::Add, Gf4::ONE, None).is_err());
    }

    #[test]
    fn gf4_field_axioms() {
        assert_eq!(Gf4::TAU * Gf4::TAU, Gf4::TAU + Gf4::ONE);
        assert_eq!(Gf4::TAU * Gf4::TAU * Gf4::TAU, Gf4::ONE);
        for x in Gf4::ALL {
            assert_eq!(x + x, Gf4::ZERO);
            if !x.is_zero() {
                assert_eq!(x * x.inv().unwrap(), Gf4::ONE);
            }
            for y in Gf4::ALL {
                assert_eq!(x + y, y + x);
                assert_eq!(x * y, y * x);
                // conjugation is a ring automorphism
                assert_eq!((x + y).conj(), x.conj() + y.conj());
                assert_eq!((x * y).conj(), x.conj() * y.conj());
                for z in Gf4::ALL {
                    assert_eq!((x * y) * z, x * (y * z));
                    assert_eq!((x + y) + z, x + (y + z));
                    assert_eq!(x * (y + z), x * y + x * z);
                }
            }
        }
    }

    #[test]
    fn conj_is_involution_fixing_f2() {
        for x in Gf4::ALL {
            assert_eq!(x.conj().conj(), x);
            assert_eq!(x.conj() == x, x.in_prime_field());
        }
    }

    #[test]
    fn prime_field_construction() {
        assert_eq!(make_prime_field(3).unwrap().modulus(), 3);
        assert!(make_prime_field(2).is_err());
        assert!(make_prime_field(9).is_err());
        assert!(make_prime_field(1).is_err());
        assert!(make_prime_field(-3).is_err());
        assert!(make_prime_field(257).is_err());
        assert!(make_prime_field(251).is_ok());
    }

    #[test]
    fn reduce_int_examples() {
        let f3 = make_prime_field(3).unwrap();
        assert_eq!(reduce_int(&f3, -4), 2);
        for n in 2..40u32 {
            let a = reduce_int(&f3, 1i128 << (n - 2));
            let b = reduce_int(&f3, -(1i128 << (n - 1)));
            assert_eq!(a, b);
        }
        let f7 = make_prime_field(7).unwrap();
        assert_eq!(reduce_int(&f7, 7), 0);
    }

    #[test]
    fn prime_field_axioms_exhaustive() {
        for ell in [3, 5, 7, 11, 13, 17] {
            let f = make_prime_field(ell).unwrap();
            let p = ell as u32;
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b) as u32, (a as u32 + b as u32) % p);
                    assert_eq!(f.sub(a, b) as u32, (a as u32 + p - b as u32) % p);
                    assert_eq!(f.mul(a, b) as u32, (a as u32 * b as u32) % p);
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn fast_reductions_are_exact() {
        for ell in [3i64, 5, 7, 17, 101, 251] {
            let f = make_prime_field(ell).unwrap();
            for x in (0u32..1 << 16).step_by(7).chain([65535]) {
                assert_eq!(f.reduce_u16(x) as u32, x % ell as u32);
                assert_eq!(f.reduce_small(x), x % ell as u32);
            }
            for x in [0u32, 1, 12345678, u32::MAX, u32::MAX - 1, 1 << 31] {
                assert_eq!(f.reduce_u32(x) as u32, x % ell as u32);
            }
        }
    }
}

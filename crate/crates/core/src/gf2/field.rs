//! Arithmetic in GF(2^m) via log/antilog tables.

use crate::{Error, Result};

/// A binary extension field GF(2^m), 2 <= m <= 16, defined by a primitive
/// polynomial. Elements are bit-polynomials stored in the low `m` bits of a
/// `u32`; `alpha` (the class of x) generates the multiplicative group.
#[derive(Debug, Clone)]
pub struct Gf2m {
    m: u32,
    primitive_poly: u32,
    /// exp[i] = alpha^i for i in 0..order (and wrapped once more for mul).
    exp: Vec<u32>,
    /// log[e] = discrete log of nonzero e; log[0] unused.
    log: Vec<u32>,
}

impl Gf2m {
    /// Builds the field tables. Fails if `primitive_poly` does not have
    /// degree `m` or its root does not generate all 2^m - 1 nonzero elements.
    pub fn new(m: u32, primitive_poly: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::invalid(format!("field degree m={m} out of range 2..=16")));
        }
        if primitive_poly >> m != 1 {
            return Err(Error::invalid(format!(
                "polynomial {primitive_poly:#b} does not have degree {m}"
            )));
        }
        let order = (1u32 << m) - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; (1usize << m) + 1];
        let mut seen = vec![false; 1 << m];
        let mut value = 1u32;
        for i in 0..order {
            if seen[value as usize] {
                return Err(Error::invalid(format!(
                    "polynomial {primitive_poly:#b} is not primitive: alpha has order < 2^{m}-1"
                )));
            }
            seen[value as usize] = true;
            exp[i as usize] = value;
            log[value as usize] = i;
            value <<= 1;
            if value >> m != 0 {
                value ^= primitive_poly;
            }
        }
        if value != 1 {
            return Err(Error::invalid(format!(
                "polynomial {primitive_poly:#b} is not primitive over GF(2)"
            )));
        }
        for i in 0..order {
            exp[(order + i) as usize] = exp[i as usize];
        }
        Ok(Gf2m {
            m,
            primitive_poly,
            exp,
            log,
        })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of nonzero elements, 2^m - 1.
    pub fn order(&self) -> u32 {
        (1 << self.m) - 1
    }

    /// The generator element alpha.
    pub fn alpha(&self) -> u32 {
        2
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// alpha^e for any integer exponent (reduced mod 2^m - 1).
    pub fn alpha_pow(&self, e: i64) -> u32 {
        let order = self.order() as i64;
        self.exp[e.rem_euclid(order) as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let l = self.log[a as usize] as u64 * e % self.order() as u64;
        self.exp[l as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::invalid("zero has no inverse"));
        }
        let order = self.order();
        Ok(self.exp[(order - self.log[a as usize]) as usize % order as usize])
    }

    pub fn log(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::invalid("log of zero"));
        }
        Ok(self.log[a as usize])
    }

    /// Minimal polynomial over GF(2) of alpha^e, as a bit-polynomial
    /// (bit i = coefficient of x^i). Computed as the product of
    /// (x - alpha^c) over the conjugacy class {e, 2e, 4e, ...}.
    pub fn minimal_polynomial(&self, e: u32) -> u64 {
        let order = self.order() as u64;
        let mut class = Vec::new();
        let mut c = e as u64 % order;
        loop {
            class.push(c);
            c = c * 2 % order;
            if c == e as u64 % order {
                break;
            }
        }
        // poly coefficients live in GF(2^m) during the product, collapse to
        // GF(2) at the end (they are conjugation-invariant, hence binary).
        let mut coeffs: Vec<u32> = vec![1]; // constant polynomial 1
        for &c in &class {
            let root = self.alpha_pow(c as i64);
            let mut next = vec![0u32; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] ^= a; // times x
                next[i] ^= self.mul(a, root); // times root (char 2: minus = plus)
            }
            coeffs = next;
        }
        let mut out = 0u64;
        for (i, &a) in coeffs.iter().enumerate() {
            debug_assert!(a <= 1, "minimal polynomial coefficient not binary");
            out |= (a as u64) << i;
        }
        out
    }
}

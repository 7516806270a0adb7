//! BCH code construction: generator polynomial from minimal polynomials,
//! then a systematic G/H pair. No algebraic decoding lives here; the codes
//! exist to feed the GRAND decoders.

use super::code::{GeneratorMatrix, LinearCode, ParityCheckMatrix};
use super::field::Gf2m;
use crate::bits::Bits;
use crate::{Error, Result};

/// Parameters of a narrow-sense binary BCH code of length 2^m - 1.
#[derive(Debug, Clone)]
pub struct BchSpec {
    /// Field extension degree; code length is 2^m - 1.
    pub m: u32,
    /// Designed error-correcting radius.
    pub t: u32,
    /// Primitive polynomial defining GF(2^m), bit i = coefficient of x^i.
    pub primitive_poly: u32,
}

impl BchSpec {
    /// Uses the crate's default primitive polynomial for `m`.
    pub fn new(m: u32, t: u32) -> Result<Self> {
        Ok(BchSpec {
            m,
            t,
            primitive_poly: default_primitive_poly(m)?,
        })
    }

    pub fn with_primitive_poly(m: u32, t: u32, primitive_poly: u32) -> Self {
        BchSpec {
            m,
            t,
            primitive_poly,
        }
    }

    pub fn n(&self) -> usize {
        (1usize << self.m) - 1
    }
}

/// One conventional primitive polynomial per degree.
/// For m = 7 this is x^7 + x^3 + 1.
pub(crate) fn default_primitive_poly(m: u32) -> Result<u32> {
    let poly = match m {
        2 => 0b111,
        3 => 0b1011,
        4 => 0b1_0011,
        5 => 0b10_0101,
        6 => 0b100_0011,
        7 => 0b1000_1001,
        8 => 0b1_0001_1101,
        9 => 0b10_0001_0001,
        10 => 0b100_0000_1001,
        11 => 0b1000_0000_0101,
        12 => 0b1_0000_0101_0011,
        13 => 0b10_0000_0001_1011,
        14 => 0b100_0100_0100_0011,
        15 => 0b1000_0000_0000_0011,
        16 => 0b1_0001_0000_0000_1011,
        _ => {
            return Err(Error::invalid(format!(
                "no default primitive polynomial for m = {m}"
            )))
        }
    };
    Ok(poly)
}

/// Builds the (n, k) BCH code described by `spec`.
///
/// The generator polynomial is the lcm of the minimal polynomials of
/// alpha, alpha^3, ..., alpha^(2t-1); k = n - deg(g). The returned pair is
/// systematic: codeword = [message | parity].
pub fn bch_construct(spec: &BchSpec) -> Result<LinearCode> {
    let field = Gf2m::new(spec.m, spec.primitive_poly)?;
    let n = spec.n();

    // distinct conjugacy classes among the designed roots
    let order = field.order() as u64;
    let mut class_reps = Vec::new();
    for i in 0..spec.t as u64 {
        let e = (2 * i + 1) % order;
        let mut min_rep = e;
        let mut c = e;
        loop {
            c = c * 2 % order;
            if c == e {
                break;
            }
            min_rep = min_rep.min(c);
        }
        if !class_reps.contains(&min_rep) {
            class_reps.push(min_rep);
        }
    }

    let mut g: u128 = 1;
    for &rep in &class_reps {
        let mp = field.minimal_polynomial(rep as u32) as u128;
        g = poly_mul(g, mp)?;
    }
    let r = poly_degree(g); // n - k
    if r >= n {
        return Err(Error::invalid(format!(
            "degenerate BCH spec: deg(g) = {r} leaves k <= 0 for n = {n}"
        )));
    }
    if r > 120 {
        return Err(Error::invalid(format!(
            "generator degree {r} exceeds the supported parity width"
        )));
    }
    let k = n - r;

    // parity of unit message i is x^(r+i) mod g; build it incrementally
    let mut g_rows = Vec::with_capacity(k);
    let mut h_parity_cols: Vec<u128> = Vec::with_capacity(k); // column j of P^T
    let mut rem = poly_mod_xpow(g, r);
    for i in 0..k {
        if i > 0 {
            rem = poly_mulx_mod(rem, g, r);
        }
        let mut row = Bits::zeros(n);
        row.set(i, true);
        for j in 0..r {
            if rem >> j & 1 == 1 {
                row.set(k + j, true);
            }
        }
        g_rows.push(row);
        h_parity_cols.push(rem);
    }

    // H = [P^T | I_r]
    let mut h_rows = Vec::with_capacity(r);
    for j in 0..r {
        let mut row = Bits::zeros(n);
        for (i, &p) in h_parity_cols.iter().enumerate() {
            if p >> j & 1 == 1 {
                row.set(i, true);
            }
        }
        row.set(k + j, true);
        h_rows.push(row);
    }

    let generator = GeneratorMatrix::new(n, g_rows, (0..k).collect())?;
    let parity = ParityCheckMatrix::new(n, h_rows)?;
    LinearCode::new(generator, parity)
}

fn poly_degree(p: u128) -> usize {
    (127 - p.leading_zeros()) as usize
}

fn poly_mul(a: u128, b: u128) -> Result<u128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    if poly_degree(a) + poly_degree(b) > 127 {
        return Err(Error::invalid("generator polynomial degree exceeds 127"));
    }
    let mut out = 0u128;
    let mut shifted = a;
    let mut rest = b;
    while rest != 0 {
        if rest & 1 == 1 {
            out ^= shifted;
        }
        shifted <<= 1;
        rest >>= 1;
    }
    Ok(out)
}

/// x^e mod g for e = deg(g); first step of the incremental remainder chain.
fn poly_mod_xpow(g: u128, r: usize) -> u128 {
    // x^r mod g = g - x^r restricted to low bits
    g ^ (1u128 << r)
}

/// (p * x) mod g for deg(p) < r = deg(g).
fn poly_mulx_mod(p: u128, g: u128, r: usize) -> u128 {
    let shifted = p << 1;
    if shifted >> r & 1 == 1 {
        shifted ^ g
    } else {
        shifted
    }
}

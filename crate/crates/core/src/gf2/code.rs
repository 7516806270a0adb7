//! Parity-check and generator matrices over GF(2).

use crate::bits::Bits;
use crate::{Error, Result};

/// A binary parity-check matrix with `m_rows` checks on `n` bits.
/// Full rank over GF(2) is verified at construction.
#[derive(Debug, Clone)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<Bits>,
}

impl ParityCheckMatrix {
    /// Builds from dense rows; every row must have length `n` and the rows
    /// must be linearly independent.
    pub fn new(n: usize, rows: Vec<Bits>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::invalid(format!(
                    "check row {i} has length {} but n = {n}",
                    r.len()
                )));
            }
        }
        let m = ParityCheckMatrix { n, rows };
        let rank = m.rank();
        if rank != m.rows.len() {
            return Err(Error::invalid(format!(
                "parity-check matrix rank {rank} < number of rows {}",
                m.rows.len()
            )));
        }
        Ok(m)
    }

    /// Builds from per-row support index lists.
    pub fn from_row_supports(n: usize, supports: &[Vec<usize>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(supports.len());
        for (r, support) in supports.iter().enumerate() {
            let mut row = Bits::zeros(n);
            for &i in support {
                if i >= n {
                    return Err(Error::invalid(format!(
                        "check row {r} references bit {i} >= n = {n}"
                    )));
                }
                row.set(i, true);
            }
            rows.push(row);
        }
        Self::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    /// True iff H w^T = 0 over GF(2).
    pub fn is_codeword(&self, w: &Bits) -> Result<bool> {
        if w.len() != self.n {
            return Err(Error::invalid(format!(
                "vector length {} does not match code length {}",
                w.len(),
                self.n
            )));
        }
        Ok(self.rows.iter().all(|r| !r.dot(w)))
    }

    /// Rank over GF(2) by row elimination on a working copy.
    pub fn rank(&self) -> usize {
        gf2_rank(self.rows.clone())
    }

    /// Column `i` of H packed into a word (bit r = H[r][i]); requires
    /// m_rows <= 64. Decoders use these for incremental syndrome updates.
    pub fn column_syndromes(&self) -> Result<Vec<u64>> {
        if self.rows.len() > 64 {
            return Err(Error::invalid(format!(
                "{} checks exceed the 64-bit syndrome fast path",
                self.rows.len()
            )));
        }
        let mut cols = vec![0u64; self.n];
        for (r, row) in self.rows.iter().enumerate() {
            for i in 0..self.n {
                if row.get(i) {
                    cols[i] |= 1 << r;
                }
            }
        }
        Ok(cols)
    }
}

/// A binary generator matrix. `info_set` lists the coordinate carrying each
/// message bit; for codes built by [`bch_construct`](super::bch_construct)
/// this is `0..k` and the matrix is in systematic form `[I_k | P]`.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    k: usize,
    n: usize,
    rows: Vec<Bits>,
    info_set: Vec<usize>,
}

impl GeneratorMatrix {
    pub fn new(n: usize, rows: Vec<Bits>, info_set: Vec<usize>) -> Result<Self> {
        let k = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::invalid(format!(
                    "generator row {i} has length {} but n = {n}",
                    r.len()
                )));
            }
        }
        if info_set.len() != k {
            return Err(Error::invalid("info set size must equal k"));
        }
        Ok(GeneratorMatrix {
            k,
            n,
            rows,
            info_set,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// Encodes `k` message bits by XOR-ing the rows selected by `u`.
    pub fn encode(&self, u: &Bits) -> Result<Bits> {
        if u.len() != self.k {
            return Err(Error::invalid(format!(
                "message length {} does not match k = {}",
                u.len(),
                self.k
            )));
        }
        let mut w = Bits::zeros(self.n);
        for i in 0..self.k {
            if u.get(i) {
                w.xor_assign(&self.rows[i]);
            }
        }
        Ok(w)
    }
}

/// A generator/parity-check pair for one code.
#[derive(Debug, Clone)]
pub struct LinearCode {
    pub generator: GeneratorMatrix,
    pub parity: ParityCheckMatrix,
}

impl LinearCode {
    /// Pairs G with H, verifying G H^T = 0 and dim + checks = n.
    pub fn new(generator: GeneratorMatrix, parity: ParityCheckMatrix) -> Result<Self> {
        if generator.n() != parity.n() {
            return Err(Error::invalid("G and H disagree on code length"));
        }
        if generator.k() + parity.m_rows() != generator.n() {
            return Err(Error::invalid(format!(
                "k = {} and {} checks do not cover n = {}",
                generator.k(),
                parity.m_rows(),
                generator.n()
            )));
        }
        for (i, g) in generator.rows().iter().enumerate() {
            if !parity.is_codeword(g)? {
                return Err(Error::invalid(format!("generator row {i} fails H g^T = 0")));
            }
        }
        Ok(LinearCode { generator, parity })
    }

    /// Derives a generator from H alone: eliminate to find an information
    /// set, then solve for the parity part of each unit message.
    pub fn from_parity(parity: ParityCheckMatrix) -> Result<Self> {
        let n = parity.n();
        let m = parity.m_rows();
        let k = n - m;

        // row-reduce a copy of H, tracking pivot columns
        let mut rows: Vec<Bits> = parity.rows().to_vec();
        let mut pivot_cols = Vec::with_capacity(m);
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            if let Some(p) = (rank..m).find(|&r| rows[r].get(col)) {
                rows.swap(rank, p);
                let pivot_row = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row.get(col) {
                        row.xor_assign(&pivot_row);
                    }
                }
                pivot_cols.push(col);
                rank += 1;
            }
        }
        debug_assert_eq!(rank, m); // full rank guaranteed by construction

        let is_pivot = {
            let mut v = vec![false; n];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let info_set: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        debug_assert_eq!(info_set.len(), k);

        // unit message on info bit j: codeword has that bit set, and pivot
        // column p of reduced row r must equal the row's entry at j
        let mut g_rows = Vec::with_capacity(k);
        for &j in &info_set {
            let mut w = Bits::zeros(n);
            w.set(j, true);
            for (r, &p) in pivot_cols.iter().enumerate() {
                if rows[r].get(j) {
                    w.set(p, true);
                }
            }
            g_rows.push(w);
        }
        let generator = GeneratorMatrix::new(n, g_rows, info_set)?;
        LinearCode::new(generator, parity)
    }

    pub fn n(&self) -> usize {
        self.generator.n()
    }

    pub fn k(&self) -> usize {
        self.generator.k()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }
}

fn gf2_rank(mut rows: Vec<Bits>) -> usize {
    let n = match rows.first() {
        Some(r) => r.len(),
        None => return 0,
    };
    let mut rank = 0;
    for col in 0..n {
        if rank == rows.len() {
            break;
        }
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) {
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming74() -> ParityCheckMatrix {
        // H = [P^T | I_3] for the (7,4) Hamming code
        ParityCheckMatrix::from_row_supports(
            7,
            &[vec![0, 1, 2, 4], vec![0, 1, 3, 5], vec![0, 2, 3, 6]],
        )
        .unwrap()
    }

    #[test]
    fn rank_is_checked_eagerly() {
        let dup = ParityCheckMatrix::from_row_supports(4, &[vec![0, 1], vec![0, 1]]);
        assert!(dup.is_err());
    }

    #[test]
    fn hamming_membership_counts() {
        let h = hamming74();
        let mut count = 0;
        for v in 0u32..128 {
            let bits: Vec<u8> = (0..7).map(|i| ((v >> i) & 1) as u8).collect();
            if h.is_codeword(&Bits::from_bools(&bits)).unwrap() {
                count += 1;
            }
        }
        assert_eq!(count, 16);
    }

    #[test]
    fn zero_vector_is_codeword() {
        let h = hamming74();
        assert!(h.is_codeword(&Bits::zeros(7)).unwrap());
        assert!(h.is_codeword(&Bits::zeros(6)).is_err());
    }

    #[test]
    fn derived_generator_is_consistent() {
        let h = hamming74();
        let code = LinearCode::from_parity(h).unwrap();
        assert_eq!(code.k(), 4);
        // systematic on the information set
        for (i, row) in code.generator.rows().iter().enumerate() {
            for (j, &c) in code.generator.info_set().iter().enumerate() {
                assert_eq!(row.get(c), i == j);
            }
        }
        // linearity: sum of two messages encodes to XOR of codewords
        let u1 = Bits::from_bools(&[1, 0, 1, 0]);
        let u2 = Bits::from_bools(&[0, 1, 1, 1]);
        let mut u3 = u1.clone();
        u3.xor_assign(&u2);
        let mut w = code.generator.encode(&u1).unwrap();
        w.xor_assign(&code.generator.encode(&u2).unwrap());
        assert_eq!(w, code.generator.encode(&u3).unwrap());
    }

    #[test]
    fn single_flip_leaves_code() {
        let h = hamming74();
        let code = LinearCode::from_parity(h).unwrap();
        let w = code.generator.encode(&Bits::from_bools(&[1, 1, 0, 1])).unwrap();
        for i in 0..7 {
            let mut bad = w.clone();
            bad.flip(i);
            assert!(!code.parity.is_codeword(&bad).unwrap());
        }
    }
}

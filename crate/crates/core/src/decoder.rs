//! The GRAND test loop and its pattern-source variants.
//!
//! All variants share one engine: precompute the syndrome of the hard
//! decision, then update it incrementally per tested pattern by XOR-ing the
//! parity columns of the flipped positions. A zero syndrome means membership.

use crate::bits::Bits;
use crate::channel::LlrVector;
use crate::finetune::{AdjustmentArray, FineTuner, PositionSet};
use crate::gf2::LinearCode;
use crate::pattern::{rank_llrs, PatternBasis, Ranking, SgrandQueue};
use crate::{Error, Result};
use std::sync::Arc;

/// Outcome of one decoding attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeStatus {
    Decoded,
    Abandoned,
}

/// Instrumentation counters of one decode run.
#[derive(Debug, Clone, Copy, Default)]
pub struct OpCounters {
    pub membership_tests: u64,
    pub pattern_generations: u64,
    pub adjust_loop_iterations: u64,
    pub queue_pushes: u64,
    pub queue_pops: u64,
}

/// Result of one decoding attempt.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    /// The found codeword, when decoded.
    pub codeword: Option<Bits>,
    /// Number of membership tests performed (the zero pattern counts as 1).
    pub tests_used: u64,
    /// zeta of the output error pattern, when decoded.
    pub zeta_of_output: Option<f64>,
    /// Positions whose exact soft values were used (fine-tuned variant).
    pub positions_selected: Option<PositionSet>,
    pub counters: OpCounters,
}

impl DecodeResult {
    fn abandoned(tests: u64, counters: OpCounters) -> Self {
        DecodeResult {
            status: DecodeStatus::Abandoned,
            codeword: None,
            tests_used: tests,
            zeta_of_output: None,
            positions_selected: None,
            counters,
        }
    }
}

/// A linear code prepared for syndrome-incremental GRAND decoding.
/// Immutable; share freely across concurrent trials.
#[derive(Debug)]
pub struct CodeContext {
    code: Arc<LinearCode>,
    /// column r of H packed into bit r of a word
    cols: Vec<u64>,
}

impl CodeContext {
    pub fn new(code: Arc<LinearCode>) -> Result<Self> {
        let cols = code.parity.column_syndromes()?;
        Ok(CodeContext { code, cols })
    }

    pub fn code(&self) -> &Arc<LinearCode> {
        &self.code
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    fn syndrome_of(&self, w: &Bits) -> u64 {
        let mut s = 0u64;
        for i in 0..w.len() {
            if w.get(i) {
                s ^= self.cols[i];
            }
        }
        s
    }
}

/// Shared per-frame preparation: ranking plus base syndrome.
pub struct FrameState {
    pub ranking: Ranking,
    base_syndrome: u64,
    /// parity columns reordered by reliability rank
    cols_by_rank: Vec<u64>,
}

impl FrameState {
    pub fn new(ctx: &CodeContext, llr: &LlrVector) -> Self {
        let ranking = rank_llrs(llr);
        let base_syndrome = ctx.syndrome_of(&llr.hard_bits);
        let cols_by_rank = ranking
            .perm
            .iter()
            .map(|&i| ctx.cols[i as usize])
            .collect();
        FrameState {
            ranking,
            base_syndrome,
            cols_by_rank,
        }
    }

    /// Membership test of the pattern given by a rank-space support.
    #[inline]
    fn test(&self, support: &[u16]) -> bool {
        let mut s = self.base_syndrome;
        for &j in support {
            s ^= self.cols_by_rank[j as usize];
        }
        s == 0
    }

    fn zeta(&self, support: &[u16]) -> f64 {
        support
            .iter()
            .map(|&j| self.ranking.sorted_mags[j as usize])
            .sum()
    }

    fn codeword(&self, llr: &LlrVector, support: &[u16]) -> Bits {
        let mut w = llr.hard_bits.clone();
        for &j in support {
            w.flip(self.ranking.perm[j as usize] as usize);
        }
        w
    }
}

/// The GRAND loop over an arbitrary ordered pattern source. The source
/// yields rank-space supports; `None` ends the stream early (the run is
/// then abandoned with the tests spent so far).
pub fn grand_decode<S: AsRef<[u16]>>(
    llr: &LlrVector,
    frame: &FrameState,
    t_max: usize,
    mut source: impl FnMut(usize) -> Option<S>,
) -> DecodeResult {
    let mut counters = OpCounters::default();
    for t in 0..t_max {
        let Some(support) = source(t) else {
            return DecodeResult::abandoned(counters.membership_tests, counters);
        };
        let support = support.as_ref();
        counters.pattern_generations += 1;
        counters.membership_tests += 1;
        if frame.test(support) {
            return DecodeResult {
                status: DecodeStatus::Decoded,
                codeword: Some(frame.codeword(llr, support)),
                tests_used: (t + 1) as u64,
                zeta_of_output: Some(frame.zeta(support)),
                positions_selected: None,
                counters,
            };
        }
    }
    DecodeResult::abandoned(t_max as u64, counters)
}

/// ORB-type decoding: the offline basis permuted by the reliability ranking.
/// Covers ORBGRAND and CDF-ORBGRAND, depending on the basis' gamma.
pub fn decode_orb_type(
    ctx: &CodeContext,
    llr: &LlrVector,
    basis: &PatternBasis,
    t_max: usize,
) -> DecodeResult {
    let frame = FrameState::new(ctx, llr);
    let cap = t_max.min(basis.len());
    grand_decode(llr, &frame, cap, |t| Some(basis.support(t)))
}

/// SGRAND: patterns generated on the fly in exact ascending zeta. With
/// t_max >= 2^N the output is a maximum-likelihood codeword.
pub fn decode_sgrand(ctx: &CodeContext, llr: &LlrVector, t_max: usize) -> DecodeResult {
    let frame = FrameState::new(ctx, llr);
    let mut queue = SgrandQueue::new(&frame.ranking);
    let mut result = grand_decode(llr, &frame, t_max, |_| {
        queue.next_pattern().map(|(_, support)| support)
    });
    result.counters.queue_pops = queue.pops;
    result.counters.queue_pushes = queue.pushes;
    result
}

/// Fine-tuned ORB-type decoding: the basis order re-indexed on the fly by
/// the adjustment array fed with soft-value position estimates.
pub fn decode_finetuned(ctx: &CodeContext, llr: &LlrVector, tuner: &FineTuner) -> DecodeResult {
    let frame = FrameState::new(ctx, llr);
    let tuning = tuner.select_positions(&frame.ranking);
    let t_max = tuner.t_max();
    let basis = tuner.basis();
    let mut adj = AdjustmentArray::new(t_max);
    let mut result = grand_decode(llr, &frame, t_max, |t| {
        adj.pattern_at(t, t_max, |i| tuner.finetuned_position(&tuning, i) - 1)
            .map(|idx| basis.support(idx))
    });
    result.counters.adjust_loop_iterations = adj.loop_iterations;
    result.positions_selected = Some(tuning.set);
    result
}

/// zeta values of the first `t_max` patterns in the order this fine-tuner
/// would test them (the full adjusted stream, ignoring termination).
pub fn finetuned_order_zetas(llr: &LlrVector, tuner: &FineTuner) -> Vec<f64> {
    let ranking = rank_llrs(llr);
    let tuning = tuner.select_positions(&ranking);
    let t_max = tuner.t_max();
    let basis = tuner.basis();
    let mut adj = AdjustmentArray::new(t_max);
    (0..t_max)
        .map(|t| {
            match adj.pattern_at(t, t_max, |i| tuner.finetuned_position(&tuning, i) - 1) {
                Some(idx) => basis
                    .support(idx)
                    .iter()
                    .map(|&j| ranking.sorted_mags[j as usize])
                    .sum(),
                None => f64::INFINITY,
            }
        })
        .collect()
}

/// zeta values of the first `t_max` patterns of the plain ORB-type order.
pub fn orb_order_zetas(llr: &LlrVector, basis: &PatternBasis, t_max: usize) -> Vec<f64> {
    let ranking = rank_llrs(llr);
    (0..t_max.min(basis.len()))
        .map(|t| {
            basis
                .support(t)
                .iter()
                .map(|&j| ranking.sorted_mags[j as usize])
                .sum()
        })
        .collect()
}

/// zeta values of the first `t_max` SGRAND patterns (sorted by construction).
pub fn sgrand_order_zetas(llr: &LlrVector, t_max: usize) -> Vec<f64> {
    let ranking = rank_llrs(llr);
    let mut queue = SgrandQueue::new(&ranking);
    (0..t_max)
        .map_while(|_| queue.next_pattern().map(|(z, _)| z))
        .collect()
}

/// Exhaustive maximum-likelihood decoding for small codes (k <= 20,
/// n <= 64): returns the codeword minimizing zeta of the implied error
/// pattern, ties broken by lexicographically smallest codeword.
pub fn ml_oracle(code: &LinearCode, llr: &LlrVector) -> Result<(Bits, f64)> {
    let k = code.k();
    let n = code.n();
    if k > 20 {
        return Err(Error::invalid(format!("ML oracle limited to k <= 20, got {k}")));
    }
    if n > 64 {
        return Err(Error::invalid(format!("ML oracle limited to n <= 64, got {n}")));
    }
    let rows: Vec<u64> = code.generator.rows().iter().map(|r| r.words()[0]).collect();
    let hard = llr.hard_bits.words()[0];
    let zeta_of = |w: u64| -> f64 {
        let mut mismatch = w ^ hard;
        let mut z = 0.0;
        while mismatch != 0 {
            let i = mismatch.trailing_zeros() as usize;
            mismatch &= mismatch - 1;
            z += llr.magnitudes[i];
        }
        z
    };
    // Gray-code walk over all messages: one row XOR per step
    let lex_key = |w: u64| w.reverse_bits(); // bit 0 most significant
    let mut current = 0u64;
    let mut best_w = 0u64;
    let mut best_zeta = zeta_of(0);
    for i in 1u64..1 << k {
        let flip = i.trailing_zeros() as usize;
        current ^= rows[flip];
        let z = zeta_of(current);
        if z < best_zeta || (z == best_zeta && lex_key(current) < lex_key(best_w)) {
            best_zeta = z;
            best_w = current;
        }
    }
    let mut bits = Bits::zeros(n);
    for i in 0..n {
        if best_w >> i & 1 == 1 {
            bits.set(i, true);
        }
    }
    Ok((bits, best_zeta))
}

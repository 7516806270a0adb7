//! Re-ordering an ORB-type test sequence with a few exact soft values.
//!
//! An ORB-type ordering ranks patterns by the weight Gamma built from
//! reliability ranks. Replacing the rank proxy with the exact magnitude at a
//! small set of positions D shifts each pattern's effective weight by a
//! per-subset constant delta(u), where u indexes which of the selected
//! positions the pattern flips. This module selects the positions whose
//! shifts repair the most inversions, estimates each pattern's re-sorted
//! index, and streams the adjusted order through a lazily filled slot array.

use crate::bits::Bits;
use crate::channel::LlrVector;
use crate::partition::{adaptive_simpson, PositionEstimator};
use crate::pattern::{GammaWeights, PatternBasis, Ranking};
use crate::{Error, Result};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// selected positions and their weight shifts
// ---------------------------------------------------------------------------

/// One or two received-vector positions whose exact soft values are used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionSet {
    /// Distinct coordinate indices, in selection order (d_1 first).
    pub positions: Vec<u32>,
}

impl PositionSet {
    pub fn new(positions: Vec<u32>) -> Result<Self> {
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != positions.len() || positions.is_empty() {
            return Err(Error::invalid("positions must be distinct and non-empty"));
        }
        Ok(PositionSet { positions })
    }

    pub fn d(&self) -> usize {
        self.positions.len()
    }
}

/// Subset index of an error pattern: the binary number read off the selected
/// positions, most significant bit at d_1.
pub fn subset_index(pattern: &Bits, set: &PositionSet) -> usize {
    let mut u = 0usize;
    for &d in &set.positions {
        u = (u << 1) | usize::from(pattern.get(d as usize));
    }
    u
}

/// The per-subset weight shifts delta(u) = sum over selected bits of
/// (magnitude - rank weight); delta(0) = 0.
#[derive(Debug, Clone)]
pub struct DeltaTable {
    pub delta: Vec<f64>,
}

impl DeltaTable {
    pub fn new(set: &PositionSet, llr: &LlrVector, ranking: &Ranking, gamma: &GammaWeights) -> Self {
        let d = set.d();
        let shifts: Vec<f64> = set
            .positions
            .iter()
            .map(|&pos| {
                let rank = ranking.rank[pos as usize] as usize;
                llr.magnitudes[pos as usize] - gamma.get(rank)
            })
            .collect();
        let mut delta = vec![0.0; 1 << d];
        for (u, value) in delta.iter_mut().enumerate() {
            for (k, shift) in shifts.iter().enumerate() {
                if u >> (d - 1 - k) & 1 == 1 {
                    *value += shift;
                }
            }
        }
        DeltaTable { delta }
    }

    /// delta(u, v) = delta(u) - delta(v).
    #[inline]
    pub fn diff(&self, u: usize, v: usize) -> f64 {
        self.delta[u] - self.delta[v]
    }
}

// ---------------------------------------------------------------------------
// flip probabilities from basis prefix counts
// ---------------------------------------------------------------------------

/// Exact subset frequencies p_u(t) over basis prefixes, backed by the
/// basis' per-coordinate prefix flip counts plus one pass of pairwise
/// joint counts at the full prefix length.
#[derive(Debug)]
pub struct FlipProbTable {
    basis: Arc<PatternBasis>,
    t_full: usize,
    /// joint flip counts at t_full for coordinate pairs (j < j'),
    /// triangular layout
    joint_full: Vec<u32>,
}

impl FlipProbTable {
    pub fn build(basis: Arc<PatternBasis>, t_full: usize) -> Result<Self> {
        if t_full < 1 || t_full > basis.len() {
            return Err(Error::invalid(format!(
                "prefix length {t_full} outside basis of {} patterns",
                basis.len()
            )));
        }
        let n = basis.n();
        let mut joint_full = vec![0u32; n * (n - 1) / 2];
        for t in 0..t_full {
            let support = basis.support(t);
            for (a, &j) in support.iter().enumerate() {
                for &jp in &support[a + 1..] {
                    joint_full[tri_index(j as usize, jp as usize)] += 1;
                }
            }
        }
        Ok(FlipProbTable {
            basis,
            t_full,
            joint_full,
        })
    }

    pub fn t_full(&self) -> usize {
        self.t_full
    }

    pub fn basis(&self) -> &Arc<PatternBasis> {
        &self.basis
    }

    /// P(coordinate j flipped) among the first t basis patterns.
    pub fn flip_prob(&self, j: usize, t: usize) -> f64 {
        self.basis.flip_count(j, t) as f64 / t as f64
    }

    /// [p_0(t), p_1(t)] for a single coordinate.
    pub fn probs_single(&self, j: usize, t: usize) -> [f64; 2] {
        let p1 = self.flip_prob(j, t);
        [1.0 - p1, p1]
    }

    /// [p_00, p_01, p_10, p_11] at the full prefix, for coordinates
    /// (j = first selected, jp = second); u = 2 e_{d1} + e_{d2}.
    pub fn probs_pair_full(&self, j: usize, jp: usize) -> [f64; 4] {
        let t = self.t_full as f64;
        let p11 = self.joint_full[tri_index(j.min(jp), j.max(jp))] as f64 / t;
        let pj = self.flip_prob(j, self.t_full);
        let pjp = self.flip_prob(jp, self.t_full);
        let p10 = pj - p11;
        let p01 = pjp - p11;
        [1.0 - p10 - p01 - p11, p01, p10, p11]
    }

    /// Cumulative joint flip counts of a pair over every prefix length
    /// (one O(total support) scan; used per frame when D = 2).
    pub fn pair_prefix_counts(&self, j: usize, jp: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.basis.len() + 1);
        out.push(0);
        let mut acc = 0u32;
        for t in 0..self.basis.len() {
            let support = self.basis.support(t);
            if support.contains(&(j as u16)) && support.contains(&(jp as u16)) {
                acc += 1;
            }
            out.push(acc);
        }
        out
    }
}

#[inline]
fn tri_index(j: usize, jp: usize) -> usize {
    debug_assert!(j < jp);
    jp * (jp - 1) / 2 + j
}

// ---------------------------------------------------------------------------
// inversion counting
// ---------------------------------------------------------------------------

/// Number of reverse pairs (t < t' with values[t] > values[t']), by merge
/// sort. Strict inequality: ties are not inversions.
pub fn count_inversions(values: &[f64]) -> u64 {
    let mut work = values.to_vec();
    let mut scratch = vec![0.0; values.len()];
    merge_count(&mut work, &mut scratch)
}

fn merge_count(v: &mut [f64], scratch: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = v.split_at_mut(mid);
    let mut inv = merge_count(left, scratch) + merge_count(right, scratch);
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if right[j] < left[i] {
            inv += (left.len() - i) as u64;
            scratch[k] = right[j];
            j += 1;
        } else {
            scratch[k] = left[i];
            i += 1;
        }
        k += 1;
    }
    while i < left.len() {
        scratch[k] = left[i];
        i += 1;
        k += 1;
    }
    while j < right.len() {
        scratch[k] = right[j];
        j += 1;
        k += 1;
    }
    v.copy_from_slice(&scratch[..n]);
    inv
}

/// Inversion fraction eta = inversions / (T(T-1)/2).
pub fn eta(values: &[f64]) -> f64 {
    let t = values.len() as u64;
    if t < 2 {
        return 0.0;
    }
    count_inversions(values) as f64 / (t * (t - 1) / 2) as f64
}

// ---------------------------------------------------------------------------
// per-frame tuning state
// ---------------------------------------------------------------------------

/// How the re-sort target position O(Gamma + delta) is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionEval {
    /// Continuous estimator (erfi closed form or fitted density).
    Estimator,
    /// Binary search on the exact basis weight list.
    ExactBasis,
}

/// Shared (per gamma, per noise level) fine-tuning context.
#[derive(Debug)]
pub struct FineTuner {
    flip: FlipProbTable,
    estimator: PositionEstimator,
    /// number of tests T; also the prefix length of the selection tables
    t_max: usize,
    d: usize,
    window: usize,
    position_eval: PositionEval,
    /// cached estimator inverse at T, the integration ceiling of the
    /// reverse-pair estimate
    m_at_t: f64,
}

/// Per-frame products of the position selection.
#[derive(Debug, Clone)]
pub struct FrameTuning {
    pub set: PositionSet,
    /// basis-coordinate ranks of the selected positions
    pub ranks: Vec<u32>,
    pub deltas: DeltaTable,
    /// joint prefix counts of the selected pair (D = 2 only)
    pair_counts: Option<Vec<u32>>,
}

impl FineTuner {
    pub fn new(
        basis: Arc<PatternBasis>,
        estimator: PositionEstimator,
        t_max: usize,
        d: usize,
        window: usize,
        position_eval: PositionEval,
    ) -> Result<Self> {
        if !(1..=2).contains(&d) {
            return Err(Error::invalid("selection size D must be 1 or 2"));
        }
        if t_max > basis.len() {
            return Err(Error::invalid(format!(
                "T = {t_max} exceeds the {}-pattern basis",
                basis.len()
            )));
        }
        let window = window.clamp(d, basis.n());
        let flip = FlipProbTable::build(basis, t_max)?;
        let m_at_t = estimator.inverse(t_max as f64)?;
        Ok(FineTuner {
            flip,
            estimator,
            t_max,
            d,
            window,
            position_eval,
            m_at_t,
        })
    }

    pub fn basis(&self) -> &Arc<PatternBasis> {
        self.flip.basis()
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn estimator(&self) -> &PositionEstimator {
        &self.estimator
    }

    pub fn flip_table(&self) -> &FlipProbTable {
        &self.flip
    }

    /// Selects the positions maximizing sum over subset pairs of
    /// p_u(T) p_v(T) |delta(u,v)|, over candidates of rank < window.
    /// Ties prefer the smaller coordinate index (then smaller pair).
    pub fn select_positions(&self, ranking: &Ranking) -> FrameTuning {
        let n = ranking.rank.len();
        let m = self.window.min(n);
        let gamma = self.basis().gamma();
        // rank-j candidate shift: exact magnitude minus rank weight
        let shift = |j: usize| ranking.sorted_mags[j] - gamma.get(j);

        if self.d == 1 {
            let mut best_j = 0usize;
            let mut best_obj = f64::NEG_INFINITY;
            for j in 0..m {
                let [p0, p1] = self.flip.probs_single(j, self.t_max);
                let obj = p0 * p1 * shift(j).abs();
                let better = obj > best_obj
                    || (obj == best_obj && ranking.perm[j] < ranking.perm[best_j]);
                if better {
                    best_obj = obj;
                    best_j = j;
                }
            }
            let pos = ranking.perm[best_j];
            let set = PositionSet {
                positions: vec![pos],
            };
            let deltas = DeltaTable {
                delta: vec![0.0, shift(best_j)],
            };
            FrameTuning {
                set,
                ranks: vec![best_j as u32],
                deltas,
                pair_counts: None,
            }
        } else {
            let mut best = (0usize, 1usize);
            let mut best_obj = f64::NEG_INFINITY;
            for j in 0..m {
                for jp in j + 1..m {
                    let p = self.flip.probs_pair_full(j, jp);
                    let (a, b) = (shift(j), shift(jp));
                    // u = 2 e_{d1} + e_{d2} with d1 = rank j, d2 = rank jp
                    let delta = [0.0, b, a, a + b];
                    let mut obj = 0.0;
                    for u in 0..4 {
                        for v in u + 1..4 {
                            obj += p[u] * p[v] * (delta[u] - delta[v]).abs();
                        }
                    }
                    let better = obj > best_obj || {
                        let (cd, cb) = (
                            canonical_pair(ranking.perm[j], ranking.perm[jp]),
                            canonical_pair(ranking.perm[best.0], ranking.perm[best.1]),
                        );
                        obj == best_obj && cd < cb
                    };
                    if better {
                        best_obj = obj;
                        best = (j, jp);
                    }
                }
            }
            let (j, jp) = best;
            let set = PositionSet {
                positions: vec![ranking.perm[j], ranking.perm[jp]],
            };
            let deltas = DeltaTable {
                delta: vec![0.0, shift(jp), shift(j), shift(j) + shift(jp)],
            };
            FrameTuning {
                set,
                ranks: vec![j as u32, jp as u32],
                deltas,
                pair_counts: Some(self.flip.pair_prefix_counts(j, jp)),
            }
        }
    }

    /// Subset index of basis pattern `idx` under the frame's selection.
    #[inline]
    pub fn subset_of_basis_pattern(&self, frame: &FrameTuning, idx: usize) -> usize {
        let basis = self.basis();
        let mut u = 0usize;
        for &j in &frame.ranks {
            let flipped = basis.flip_count(j as usize, idx + 1) - basis.flip_count(j as usize, idx);
            u = (u << 1) | flipped as usize;
        }
        u
    }

    /// p_v at prefix length t for the frame's selection.
    fn subset_prob_at(&self, frame: &FrameTuning, v: usize, t: usize) -> f64 {
        match frame.ranks.len() {
            1 => self.flip.probs_single(frame.ranks[0] as usize, t)[v],
            _ => {
                let tf = t as f64;
                let p11 = frame.pair_counts.as_ref().unwrap()[t] as f64 / tf;
                let pj = self.flip.flip_prob(frame.ranks[0] as usize, t);
                let pjp = self.flip.flip_prob(frame.ranks[1] as usize, t);
                match v {
                    0 => 1.0 - pj - pjp + p11,
                    1 => pjp - p11,
                    2 => pj - p11,
                    _ => p11,
                }
            }
        }
    }

    /// Position count at effective weight x, per the configured evaluation.
    #[inline]
    fn position_at(&self, x: f64) -> f64 {
        match self.position_eval {
            PositionEval::Estimator => self.estimator.position(x),
            PositionEval::ExactBasis => {
                let weights = self.basis().weights();
                weights.partition_point(|&w| w <= x) as f64
            }
        }
    }

    /// The fine-tuned 1-based index of basis pattern `idx` (0-based):
    /// round of sum over v of p_v(o_v) o_v with o_v = O(Gamma + delta(u,v)),
    /// clamped into [1, T].
    pub fn finetuned_position(&self, frame: &FrameTuning, idx: usize) -> usize {
        let u = self.subset_of_basis_pattern(frame, idx);
        let gamma_w = self.basis().weight(idx);
        let t_basis = self.basis().len();
        let mut target = 0.0;
        for v in 0..frame.deltas.delta.len() {
            let o_v = self.position_at(gamma_w + frame.deltas.diff(u, v));
            let prefix = (o_v.round() as i64).clamp(1, t_basis as i64) as usize;
            target += self.subset_prob_at(frame, v, prefix) * o_v;
        }
        (target.round() as i64).clamp(1, self.t_max as i64) as usize
    }

    /// Estimated number of reverse pairs introduced by rank-proxy weights at
    /// the selected positions: sum over subset pairs of
    /// p_u(T) p_v(T) |d(u,v)| * integral of density(m) density(m + |d/2|).
    pub fn estimate_reverse_pairs(&self, frame: &FrameTuning) -> f64 {
        let n_subsets = frame.deltas.delta.len();
        let probs: Vec<f64> = (0..n_subsets)
            .map(|v| self.subset_prob_at(frame, v, self.t_max))
            .collect();
        let mut total = 0.0;
        for u in 0..n_subsets {
            for v in u + 1..n_subsets {
                let d = frame.deltas.diff(u, v).abs();
                if d == 0.0 {
                    continue;
                }
                total += probs[u]
                    * probs[v]
                    * d
                    * density_product_integral(&self.estimator, 0.5 * d, self.m_at_t - 0.5 * d);
            }
        }
        total
    }

    /// Exact number of reverse pairs of the rank-ordered list under the
    /// shifted weights: inversions of Gamma(t) + delta(u_t) over the first
    /// T basis patterns.
    pub fn exact_reverse_pairs(&self, frame: &FrameTuning) -> u64 {
        let values = self.shifted_weights(frame);
        count_inversions(&values)
    }

    /// Gamma(t) + delta(u_t) for t < T: the effective weights the exact
    /// soft values assign to the base ordering.
    pub fn shifted_weights(&self, frame: &FrameTuning) -> Vec<f64> {
        (0..self.t_max)
            .map(|t| self.basis().weight(t) + frame.deltas.delta[self.subset_of_basis_pattern(frame, t)])
            .collect()
    }
}

fn canonical_pair(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Integral of density(m) * density(m + h) over m in (0, upper), by adaptive
/// Simpson under the substitution m = s^4 (which removes the m^(-3/4)
/// endpoint singularity). Zero when upper <= 0.
pub fn density_product_integral(est: &PositionEstimator, h: f64, upper: f64) -> f64 {
    if upper <= 0.0 {
        return 0.0;
    }
    let s_max = upper.powf(0.25);
    let f = |s: f64| est.density_quartic(s) * est.density(s * s * s * s + h);
    adaptive_simpson(&f, 0.0, s_max, 1e-4)
}

// ---------------------------------------------------------------------------
// the adjustment array of the fine-tuned stream
// ---------------------------------------------------------------------------

/// Lazily filled slot array mapping test time to basis pattern index.
///
/// Slot s holding pattern idx means the s-th test uses basis pattern idx.
/// While the queried slot is empty, frontier patterns are placed one by one
/// at their fine-tuned positions; a collision takes the next free slot
/// forward, wrapping to the nearest free slot backward when the tail is
/// full. Every pattern is placed exactly once.
#[derive(Debug)]
pub struct AdjustmentArray {
    /// 0 = unfilled, otherwise pattern index + 1
    slots: Vec<u32>,
    next_idx: usize,
    pub loop_iterations: u64,
}

impl AdjustmentArray {
    pub fn new(t_max: usize) -> Self {
        AdjustmentArray {
            slots: vec![0; t_max],
            next_idx: 0,
            loop_iterations: 0,
        }
    }

    /// Basis pattern index to test at 0-based time slot `t`.
    /// `place(idx)` returns the preferred 0-based slot of pattern `idx`.
    /// Returns `None` only when the frontier exhausts `n_patterns` with the
    /// slot still empty (possible only if n_patterns < slots).
    pub fn pattern_at(
        &mut self,
        t: usize,
        n_patterns: usize,
        mut place: impl FnMut(usize) -> usize,
    ) -> Option<usize> {
        while self.slots[t] == 0 {
            if self.next_idx >= n_patterns {
                return None;
            }
            let idx = self.next_idx;
            self.next_idx += 1;
            self.loop_iterations += 1;
            let target = place(idx).min(self.slots.len() - 1);
            let slot = self.find_free(target);
            self.slots[slot] = (idx + 1) as u32;
        }
        Some((self.slots[t] - 1) as usize)
    }

    fn find_free(&self, target: usize) -> usize {
        for s in target..self.slots.len() {
            if self.slots[s] == 0 {
                return s;
            }
        }
        for s in (0..target).rev() {
            if self.slots[s] == 0 {
                return s;
            }
        }
        unreachable!("more placements than slots")
    }

    /// Filled slots so far, as (slot, pattern index).
    pub fn filled(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(s, &v)| (s, (v - 1) as usize))
    }
}

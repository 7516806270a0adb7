//! Exact and asymptotic counting of error-pattern positions.
//!
//! For the integer weight vector [1..N] the number of basis patterns of
//! logistic weight n is q(n), the count of partitions of n into distinct
//! parts. Szekeres' asymptotic Q(n) = exp(pi sqrt(n/3)) / (4 3^(1/4) n^(3/4))
//! smooths that step function, and integrating it gives the closed-form
//! position estimate
//!     O~(m) = erfi(sqrt(pi) m^(1/4) / 3^(1/4)) / 2,
//! whose derivative is exactly Q(m). For a general weight vector the same
//! integral form a exp(b m^c) / m^d is fitted to the empirical density.

use crate::{Error, Result};

const PI: f64 = std::f64::consts::PI;

/// 4 * 3^(1/4), the constant in Szekeres' denominator.
fn four_root3() -> f64 {
    4.0 * 3f64.powf(0.25)
}

// ---------------------------------------------------------------------------
// exact partition counts
// ---------------------------------------------------------------------------

/// Counts of partitions into distinct parts, q(0)..q(n_max).
/// q(0) = 1 by the empty-partition convention. q(2000) ~ 2.7e32, so the
/// table uses 128-bit integers.
pub fn distinct_partition_counts(n_max: usize) -> Vec<u128> {
    distinct_partition_counts_bounded(n_max, n_max)
}

/// Same, with every part bounded by `max_part`.
pub fn distinct_partition_counts_bounded(n_max: usize, max_part: usize) -> Vec<u128> {
    let mut q = vec![0u128; n_max + 1];
    q[0] = 1;
    for part in 1..=max_part.min(n_max) {
        for s in (part..=n_max).rev() {
            q[s] += q[s - part];
        }
    }
    q
}

/// q(n): number of partitions of n into distinct parts.
pub fn q_exact(n: usize) -> u128 {
    distinct_partition_counts(n)[n]
}

/// Szekeres' asymptotic for q(n); singular at n = 0.
pub fn q_szekeres(n: f64) -> Result<f64> {
    if n <= 0.0 {
        return Err(Error::invalid("Szekeres formula requires n > 0"));
    }
    Ok((PI * (n / 3.0).sqrt()).exp() / (four_root3() * n.powf(0.75)))
}

// ---------------------------------------------------------------------------
// imaginary error function
// ---------------------------------------------------------------------------

/// erfi(x) = 2/sqrt(pi) * integral of exp(z^2) from 0 to x.
///
/// Maclaurin series below x = 5.5 (all terms positive, no cancellation),
/// scaled Dawson asymptotics above: erfi(x) ~ exp(x^2)/(sqrt(pi) x) *
/// sum (2k-1)!! / (2x^2)^k, truncated at its smallest term.
pub fn erfi(x: f64) -> f64 {
    if x < 0.0 {
        return -erfi(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x <= 5.5 {
        let x2 = x * x;
        let mut u = x; // x^(2k+1) / k!
        let mut sum = x;
        for k in 1..400 {
            u *= x2 / k as f64;
            let term = u / (2 * k + 1) as f64;
            sum += term;
            if term < sum * 1e-17 {
                break;
            }
        }
        2.0 / PI.sqrt() * sum
    } else {
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..200 {
            let next = term * (2 * k + 1) as f64 * inv2x2;
            if next >= term || next < 1e-18 {
                break;
            }
            term = next;
            sum += term;
        }
        (x * x).exp() / (PI.sqrt() * x) * sum
    }
}

// ---------------------------------------------------------------------------
// closed-form position estimate for the integer weight vector
// ---------------------------------------------------------------------------

/// O~(m) = erfi(sqrt(pi) m^(1/4) / 3^(1/4)) / 2 for m > 0.
pub fn o_tilde(m: f64) -> Result<f64> {
    if m <= 0.0 {
        return Err(Error::invalid("o_tilde requires m > 0"));
    }
    Ok(0.5 * erfi(PI.sqrt() * m.powf(0.25) / 3f64.powf(0.25)))
}

/// d/dm O~(m), identical to Szekeres' Q(m).
pub fn o_tilde_prime(m: f64) -> Result<f64> {
    q_szekeres(m)
}

/// Exact position count from a basis weight list (non-decreasing): the
/// number of basis patterns with weight <= m, including the zero pattern.
/// Errors if the basis was not built far enough to answer.
pub fn o_exact_from_weights(weights: &[f64], m: f64) -> Result<u64> {
    match weights.last() {
        Some(&last) if last >= m => {}
        _ => {
            return Err(Error::invalid(format!(
                "basis built to weight {:?} cannot count positions at m = {m}",
                weights.last()
            )))
        }
    }
    Ok(weights.partition_point(|&w| w <= m) as u64)
}

/// Exact O(m) for the integer weight vector [1..n]:
/// 1 + sum of q(j) for j = 1..m with parts bounded by n.
pub fn o_exact_orbgrand(m: usize, n: usize) -> u128 {
    let q = distinct_partition_counts_bounded(m, n);
    1 + q[1..=m].iter().sum::<u128>()
}

// ---------------------------------------------------------------------------
// position estimators
// ---------------------------------------------------------------------------

/// Parameters of the fitted density a exp(b m^c) / m^d.
#[derive(Debug, Clone, Copy)]
pub struct FitParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// A smooth, strictly increasing estimate of pattern position as a function
/// of weight, with its density and inverse.
#[derive(Debug, Clone)]
pub enum PositionEstimator {
    /// The erfi closed form; exact match for gamma = [1..N].
    ErfiClosedForm,
    /// Integrated fitted density for a general weight vector. The cumulative
    /// integral is cached on a grid uniform in s = m^(1/4).
    Fitted {
        params: FitParams,
        /// knot spacing in s
        step: f64,
        /// cumulative integral at knots s = 0, step, 2*step, ...
        cumulative: Vec<f64>,
    },
    /// Step function from exact integer-weight counts; position(m) jumps at
    /// integers. Used for validation output, not inside the decoders.
    ExactInteger { cumulative: Vec<f64> },
}

impl PositionEstimator {
    /// Exact integer-mode estimator for gamma = [1..n], tabulated to m_max.
    pub fn exact_orbgrand(m_max: usize, n: usize) -> Self {
        let q = distinct_partition_counts_bounded(m_max, n);
        let mut cumulative = Vec::with_capacity(m_max + 1);
        let mut acc = 1.0; // the zero pattern
        cumulative.push(acc);
        for &qn in &q[1..] {
            acc += qn as f64;
            cumulative.push(acc);
        }
        PositionEstimator::ExactInteger { cumulative }
    }

    /// Builds the cached cumulative integral for fitted parameters.
    /// The grid extends until the position passes `target_position` (or a
    /// hard ceiling on m).
    pub fn from_fit(params: FitParams, target_position: f64, m_ceiling: f64) -> Result<Self> {
        if !(params.a > 0.0 && params.b > 0.0) || !(params.d < 0.98) {
            return Err(Error::invalid(format!(
                "fitted parameters out of range: {params:?}"
            )));
        }
        // substitution m = s^4 keeps the integrand bounded near 0 for
        // d < 0.98 (exponent 3 - 4d > -0.95 is integrable; the grid is in s)
        let knots = 16_384usize;
        let s_ceiling = m_ceiling.powf(0.25);
        let step = s_ceiling / knots as f64;
        let mut cumulative = Vec::with_capacity(knots + 1);
        cumulative.push(0.0);
        let density_s = |s: f64| -> f64 {
            if s <= 0.0 {
                return 0.0;
            }
            // 4 s^3 * a exp(b s^(4c)) / s^(4d)
            4.0 * params.a * s.powf(3.0 - 4.0 * params.d) * (params.b * s.powf(4.0 * params.c)).exp()
        };
        let mut acc = 0.0;
        let mut prev = density_s(0.0);
        for i in 1..=knots {
            let s = i as f64 * step;
            let mid = density_s(s - 0.5 * step);
            let cur = density_s(s);
            acc += step / 6.0 * (prev + 4.0 * mid + cur);
            cumulative.push(acc);
            prev = cur;
            if acc > target_position && i >= 64 {
                break;
            }
        }
        Ok(PositionEstimator::Fitted {
            params,
            step,
            cumulative,
        })
    }

    /// Estimated number of patterns with weight <= m. Zero for m <= 0.
    pub fn position(&self, m: f64) -> f64 {
        if m <= 0.0 {
            return 0.0;
        }
        match self {
            PositionEstimator::ErfiClosedForm => {
                0.5 * erfi(PI.sqrt() * m.powf(0.25) / 3f64.powf(0.25))
            }
            PositionEstimator::Fitted {
                step, cumulative, ..
            } => {
                let s = m.powf(0.25) / step;
                let i = s.floor() as usize;
                if i + 1 >= cumulative.len() {
                    // beyond the cached grid: clamp to the last knot
                    return *cumulative.last().unwrap();
                }
                let frac = s - i as f64;
                cumulative[i] + frac * (cumulative[i + 1] - cumulative[i])
            }
            PositionEstimator::ExactInteger { cumulative } => {
                let i = (m.floor() as usize).min(cumulative.len() - 1);
                cumulative[i]
            }
        }
    }

    /// Density (derivative of [`position`]).
    pub fn density(&self, m: f64) -> f64 {
        match self {
            PositionEstimator::ErfiClosedForm => q_szekeres(m).unwrap_or(0.0),
            PositionEstimator::Fitted { params, .. } => {
                if m <= 0.0 {
                    0.0
                } else {
                    params.a * (params.b * m.powf(params.c)).exp() / m.powf(params.d)
                }
            }
            PositionEstimator::ExactInteger { cumulative } => {
                let i = (m.floor() as usize).min(cumulative.len() - 1);
                if i == 0 {
                    0.0
                } else {
                    cumulative[i] - cumulative[i - 1]
                }
            }
        }
    }

    /// Density under the substitution m = s^4, premultiplied by dm/ds = 4s^3.
    /// Bounded at s = 0, which keeps the reverse-pair quadrature stable.
    pub fn density_quartic(&self, s: f64) -> f64 {
        match self {
            PositionEstimator::ErfiClosedForm => {
                // 4 s^3 Q(s^4) = exp(pi s^2 / sqrt(3)) / 3^(1/4)
                (PI * s * s / 3f64.sqrt()).exp() / 3f64.powf(0.25)
            }
            PositionEstimator::Fitted { params, .. } => {
                if s <= 0.0 {
                    return 0.0;
                }
                4.0 * params.a * s.powf(3.0 - 4.0 * params.d) * (params.b * s.powf(4.0 * params.c)).exp()
            }
            PositionEstimator::ExactInteger { .. } => 4.0 * s * s * s * self.density(s * s * s * s),
        }
    }

    /// Solves position(m) = target for target >= position floor.
    /// Relative tolerance 1e-6 on the target.
    pub fn inverse(&self, target: f64) -> Result<f64> {
        if target <= 0.0 {
            return Err(Error::invalid("inverse position target must be positive"));
        }
        match self {
            PositionEstimator::ExactInteger { cumulative } => {
                if target > *cumulative.last().unwrap() {
                    return Err(Error::invalid("target beyond tabulated range"));
                }
                Ok(cumulative.partition_point(|&c| c < target) as f64)
            }
            _ => {
                let mut lo = 0.0f64;
                let mut hi = 1.0f64;
                while self.position(hi) < target {
                    hi *= 2.0;
                    if hi > 1e12 {
                        return Err(Error::invalid("target beyond estimator range"));
                    }
                }
                if let PositionEstimator::Fitted { cumulative, .. } = self {
                    if target > *cumulative.last().unwrap() {
                        return Err(Error::invalid("target beyond fitted grid range"));
                    }
                }
                // bisection with a Newton polish; density >= 0 everywhere
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.position(mid) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo) <= 1e-9 * hi.max(1.0) {
                        break;
                    }
                }
                let mut m = 0.5 * (lo + hi);
                for _ in 0..4 {
                    let f = self.position(m) - target;
                    let d = self.density(m);
                    if d > 0.0 {
                        let step = f / d;
                        let next = m - step;
                        if next > lo && next < hi {
                            m = next;
                        }
                    }
                }
                if (self.position(m) - target).abs() <= 1e-6 * target {
                    Ok(m)
                } else {
                    Err(Error::invalid(format!(
                        "inverse position did not converge at target {target}"
                    )))
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// density fitting for general weight vectors
// ---------------------------------------------------------------------------

/// Fits a exp(b m^c) / m^d to the finite-difference density of the exact
/// position counts derived from `weights` (a non-decreasing basis weight
/// list). Least squares in log space, solved by Nelder-Mead from the
/// closed-form initial guess.
pub fn fit_o_prime(weights: &[f64], grid_points: usize) -> Result<FitParams> {
    if weights.len() < 64 {
        return Err(Error::invalid("need at least 64 basis weights to fit"));
    }
    let lo = weights[weights.len() / 100 + 2].max(weights[2]);
    let hi = *weights.last().unwrap();
    let count = |m: f64| weights.partition_point(|&w| w <= m) as f64;
    fit_o_prime_counts(&count, lo, hi, grid_points)
}

/// Same fit, driven by an arbitrary exact count function m -> #positions.
pub fn fit_o_prime_counts(
    count: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid_points: usize,
) -> Result<FitParams> {
    if !(hi > lo && lo > 0.0) {
        return Err(Error::invalid("degenerate weight range for fitting"));
    }
    let points = grid_points.clamp(16, 256);
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    let grid: Vec<f64> = (0..points).map(|i| lo * ratio.powi(i as i32)).collect();

    // centered finite differences of the exact counts over the grid
    let mut data = Vec::with_capacity(points);
    for i in 1..points - 1 {
        let dm = grid[i + 1] - grid[i - 1];
        let dc = count(grid[i + 1]) - count(grid[i - 1]);
        if dc > 0.0 && dm > 0.0 {
            data.push((grid[i], (dc / dm).ln()));
        }
    }
    if data.len() < 8 {
        return Err(Error::invalid("too few usable density points to fit"));
    }

    let objective = |p: &[f64]| -> f64 {
        let (ln_a, b, c, d) = (p[0], p[1], p[2], p[3]);
        let mut penalty = 0.0;
        if c < 0.05 {
            penalty += 1e4 * (0.05 - c) * (0.05 - c);
        }
        if c > 0.95 {
            penalty += 1e4 * (c - 0.95) * (c - 0.95);
        }
        if d > 0.95 {
            penalty += 1e4 * (d - 0.95) * (d - 0.95);
        }
        if d < -2.0 {
            penalty += 1e4 * (d + 2.0) * (d + 2.0);
        }
        if b < 0.0 {
            penalty += 1e4 * b * b;
        }
        let sse: f64 = data
            .iter()
            .map(|&(m, ln_rho)| {
                let model = ln_a + b * m.powf(c) - d * m.ln();
                let e = model - ln_rho;
                e * e
            })
            .sum();
        sse + penalty
    };

    // closed-form parameters of the integer-weight case as the start
    let start = [(1.0 / four_root3()).ln(), PI / 3f64.sqrt(), 0.5, 0.75];
    let best = nelder_mead(&objective, &start, 2000);
    let rms = (objective(&best) / data.len() as f64).sqrt();
    if rms > 0.5 {
        return Err(Error::FitDiverged {
            msg: "log-density residual too large".into(),
            residual: rms,
        });
    }
    Ok(FitParams {
        a: best[0].exp(),
        b: best[1],
        c: best[2],
        d: best[3],
    })
}

/// Standard Nelder-Mead simplex minimization.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, start: &[f64], max_iter: usize) -> Vec<f64> {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(start.to_vec());
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += 0.1 * p[i].abs().max(0.25);
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for _ in 0..max_iter {
        // order best..worst
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let reorder: Vec<Vec<f64>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let revalue: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        simplex = reorder;
        values = revalue;

        if (values[n] - values[0]).abs() <= 1e-12 * (1.0 + values[0].abs()) {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|p| p[j]).sum::<f64>() / n as f64)
            .collect();
        let combine = |alpha: f64| -> Vec<f64> {
            (0..n)
                .map(|j| centroid[j] + alpha * (centroid[j] - simplex[n][j]))
                .collect()
        };

        let reflected = combine(1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = combine(2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = combine(-0.5);
            let fc = f(&contracted);
            if fc < values[n] {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // shrink toward the best point
                for i in 1..=n {
                    for j in 0..n {
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    simplex.swap_remove(best)
}

// ---------------------------------------------------------------------------
// adaptive quadrature (shared with the reverse-pair estimate)
// ---------------------------------------------------------------------------

/// Adaptive Simpson integration to a relative tolerance.
pub(crate) fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_recurse(f, a, b, fa, fm, fb, whole, rel_tol * whole.abs().max(1e-300), 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * abs_tol {
        return left + right + delta / 15.0;
    }
    simpson_recurse(f, a, m, fa, flm, fm, left, abs_tol / 2.0, depth - 1)
        + simpson_recurse(f, m, b, fm, frm, fb, right, abs_tol / 2.0, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive enumeration of partitions into distinct parts <= n.
    fn q_brute(n: usize) -> u128 {
        fn rec(remaining: usize, max_part: usize) -> u128 {
            if remaining == 0 {
                return 1;
            }
            let mut total = 0;
            for part in (1..=max_part.min(remaining)).rev() {
                total += rec(remaining - part, part.saturating_sub(1));
            }
            total
        }
        rec(n, n)
    }

    #[test]
    fn q_small_values() {
        assert_eq!(q_exact(0), 1);
        assert_eq!(q_exact(1), 1);
        assert_eq!(q_exact(5), 3); // {5}, {4,1}, {3,2}
        assert_eq!(q_exact(10), q_brute(10));
    }

    #[test]
    fn q_dp_matches_enumeration() {
        let table = distinct_partition_counts(40);
        for n in 0..=40 {
            assert_eq!(table[n], q_brute(n), "n = {n}");
        }
    }

    #[test]
    fn bounded_parts() {
        // partitions of 6 into distinct parts <= 3: {1,2,3} only
        let t = distinct_partition_counts_bounded(6, 3);
        assert_eq!(t[6], 1);
        assert_eq!(t[5], 1); // {2,3}
    }

    #[test]
    fn szekeres_value_and_singularity() {
        let q3 = q_szekeres(3.0).unwrap();
        let expected = std::f64::consts::E.powf(PI) / (4.0 * 3f64.powf(0.25) * 3f64.powf(0.75));
        assert!((q3 - expected).abs() < 1e-12 * expected);
        assert!(q_szekeres(0.0).is_err());
    }

    #[test]
    fn szekeres_ratio_approaches_one() {
        let table = distinct_partition_counts(2000);
        let ratio = |n: usize| table[n] as f64 / q_szekeres(n as f64).unwrap();
        for &n in &[10usize, 100, 1000] {
            let r = ratio(n);
            assert!(r > 0.5 && r < 2.0, "n = {n}: {r}");
        }
        // trend toward 1
        assert!((ratio(1000) - 1.0).abs() < (ratio(100) - 1.0).abs());
        assert!((ratio(100) - 1.0).abs() < (ratio(10) - 1.0).abs());
        assert!(ratio(1000) > 0.9 && ratio(1000) < 1.1);
    }

    #[test]
    fn erfi_basics() {
        assert_eq!(erfi(0.0), 0.0);
        for &x in &[0.3, 1.0, 2.7, 5.4, 5.6, 8.0, 12.0] {
            assert_eq!(erfi(-x), -erfi(x));
        }
    }

    #[test]
    fn erfi_matches_quadrature() {
        for &x in &[0.25, 1.0, 2.0, 3.5, 5.0, 5.5, 6.0, 7.5, 9.0, 12.0] {
            let integral = adaptive_simpson(&|z: f64| (z * z).exp(), 0.0, x, 1e-12);
            let expected = 2.0 / PI.sqrt() * integral;
            let got = erfi(x);
            assert!(
                ((got - expected) / expected).abs() < 1e-8,
                "x = {x}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn o_tilde_derivative_is_szekeres() {
        for &m in &[5.0, 50.0, 120.0] {
            let h = 1e-4 * m;
            let fd = (o_tilde(m + h).unwrap() - o_tilde(m - h).unwrap()) / (2.0 * h);
            let q = o_tilde_prime(m).unwrap();
            assert!(((fd - q) / q).abs() < 1e-6, "m = {m}: {fd} vs {q}");
        }
        assert!(o_tilde(0.0).is_err());
        assert!(o_tilde(-1.0).is_err());
    }

    #[test]
    fn o_exact_orbgrand_small() {
        // m = 3: {}, {1}, {2}, {3}, {1,2}
        assert_eq!(o_exact_orbgrand(3, 10), 5);
        assert_eq!(o_exact_orbgrand(0, 10), 1);
    }

    #[test]
    fn closed_form_tracks_exact_counts() {
        // Relative error < 5% for 20 <= m <= 127 with gamma = [1..127]
        for m in 20..=127usize {
            let exact = o_exact_orbgrand(m, 127) as f64;
            let est = o_tilde(m as f64).unwrap();
            let rel = ((est - exact) / exact).abs();
            assert!(rel < 0.05, "m = {m}: rel err {rel:.4}");
        }
    }

    #[test]
    fn erfi_inverse_round_trip() {
        let est = PositionEstimator::ErfiClosedForm;
        for &m in &[10.0, 60.0, 120.0] {
            let t = est.position(m);
            let back = est.inverse(t).unwrap();
            assert!((back - m).abs() < 1e-5 * m, "m = {m}: {back}");
        }
        // monotone
        assert!(est.inverse(100.0).unwrap() < est.inverse(1000.0).unwrap());
        assert!(est.inverse(0.0).is_err());
    }

    #[test]
    fn inverse_matches_exact_scan_at_t_max() {
        // m where O~ crosses 1e4 for gamma = [1..127], within 1 of the
        // weight where the exact count crosses
        let est = PositionEstimator::ErfiClosedForm;
        let m_est = est.inverse(1e4).unwrap();
        let mut m_exact = 0;
        for m in 1..=127 {
            if o_exact_orbgrand(m, 127) >= 10_000 {
                m_exact = m;
                break;
            }
        }
        assert!(
            (m_est - m_exact as f64).abs() <= 1.0,
            "est {m_est} vs exact crossing {m_exact}"
        );
    }

    #[test]
    fn fit_recovers_closed_form_on_integer_weights() {
        // exact O(m) table for gamma = [1..127] drives the fit
        let counts = distinct_partition_counts_bounded(127, 127);
        let mut cum = vec![1.0f64];
        for &qn in &counts[1..] {
            cum.push(cum.last().unwrap() + qn as f64);
        }
        let count = |m: f64| cum[(m.floor().max(0.0) as usize).min(127)];
        let params = fit_o_prime_counts(&count, 10.0, 127.0, 64).unwrap();
        let est = PositionEstimator::from_fit(params, 1e8, 500.0).unwrap();
        for m in (20..=127).step_by(5) {
            let m = m as f64;
            let closed = o_tilde(m).unwrap();
            let fitted = est.position(m);
            let rel = ((fitted - closed) / closed).abs();
            assert!(rel < 0.10, "m = {m}: fitted {fitted} vs closed {closed}");
        }
    }

    #[test]
    fn fitted_estimator_monotone_and_invertible() {
        let params = FitParams {
            a: 0.19,
            b: 1.8,
            c: 0.5,
            d: 0.75,
        };
        let est = PositionEstimator::from_fit(params, 1e6, 400.0).unwrap();
        let mut prev = 0.0;
        for i in 1..200 {
            let m = i as f64 * 0.7;
            let p = est.position(m);
            assert!(p >= prev);
            prev = p;
        }
        let m = est.inverse(1e4).unwrap();
        assert!((est.position(m) - 1e4).abs() < 1e-2 * 1e4);
    }

    #[test]
    fn o_exact_from_weight_list() {
        let weights = [0.0, 1.0, 2.0, 3.0, 3.0, 4.0];
        assert_eq!(o_exact_from_weights(&weights, 3.0).unwrap(), 5);
        assert_eq!(o_exact_from_weights(&weights, 0.0).unwrap(), 1);
        assert!(o_exact_from_weights(&weights, 5.0).is_err());
    }
}

//! BPSK over AWGN: transmission, LLR computation, and the folded-normal
//! distribution of LLR magnitudes.
//!
//! With unit symbol energy, Eb = Es/R and N0 = 2 sigma^2, so
//! sigma^2 = 1 / (2 R 10^(EbN0_dB/10)). Bits map to symbols as 0 -> +1,
//! 1 -> -1; LLR_i = 2 y_i / sigma^2, and the hard decision of y >= 0 is 0.

use crate::bits::Bits;
use crate::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// Per-bit reliabilities and hard decisions derived from a received vector.
#[derive(Debug, Clone)]
pub struct LlrVector {
    /// |LLR_i| >= 0.
    pub magnitudes: Vec<f64>,
    /// theta(y)_i in {0,1}.
    pub hard_bits: Bits,
}

impl LlrVector {
    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }
}

/// Noise level of one simulation point.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    pub sigma: f64,
    pub ebn0_db: f64,
    pub rate: f64,
}

impl ChannelParams {
    pub fn from_ebn0(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::invalid(format!("rate {rate} outside (0, 1]")));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::invalid("Eb/N0 must be finite"));
        }
        Ok(ChannelParams {
            sigma: ebn0_to_sigma(ebn0_db, rate),
            ebn0_db,
            rate,
        })
    }
}

/// Noise standard deviation for a given Eb/N0 (dB) and code rate.
pub fn ebn0_to_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

/// Maps a codeword to antipodal symbols and adds white Gaussian noise.
pub fn transmit<R: Rng>(codeword: &Bits, sigma: f64, rng: &mut R) -> Vec<f64> {
    codeword
        .iter()
        .map(|b| {
            let x = if b { -1.0 } else { 1.0 };
            x + sigma * rng.sample::<f64, _>(StandardNormal)
        })
        .collect()
}

/// LLR magnitudes and hard decisions for a received vector.
pub fn llr(received: &[f64], sigma: f64) -> LlrVector {
    let scale = 2.0 / (sigma * sigma);
    let mut hard = Bits::zeros(received.len());
    let mut magnitudes = Vec::with_capacity(received.len());
    for (i, &y) in received.iter().enumerate() {
        magnitudes.push((scale * y).abs());
        if y < 0.0 {
            hard.set(i, true);
        }
    }
    LlrVector {
        magnitudes,
        hard_bits: hard,
    }
}

/// Density of the LLR magnitude L = |2Y/sigma^2|; zero for ell < 0.
pub fn folded_pdf(ell: f64, sigma: f64) -> f64 {
    if ell < 0.0 {
        return 0.0;
    }
    let s2 = sigma * sigma;
    let a = ell - 2.0 / s2;
    let b = ell + 2.0 / s2;
    sigma / (2.0 * (2.0 * std::f64::consts::PI).sqrt())
        * ((-s2 * a * a / 8.0).exp() + (-s2 * b * b / 8.0).exp())
}

/// Cumulative distribution of the LLR magnitude, via the normal CDF of the
/// two folds: Phi((ell-mu)/s) + Phi((ell+mu)/s) - 1 with mu = 2/sigma^2,
/// s = 2/sigma.
pub fn folded_cdf(ell: f64, sigma: f64) -> f64 {
    if ell <= 0.0 {
        return 0.0;
    }
    let mu = 2.0 / (sigma * sigma);
    let s = 2.0 / sigma;
    let v = normal_cdf((ell - mu) / s) + normal_cdf((ell + mu) / s) - 1.0;
    v.clamp(0.0, 1.0)
}

/// Inverse of [`folded_cdf`] on p in (0,1), to 1e-9 absolute in probability.
/// Bracketed Newton with bisection fallback.
pub fn folded_inv_cdf(p: f64, sigma: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("probability {p} outside (0, 1)")));
    }
    let mu = 2.0 / (sigma * sigma);
    let s = 2.0 / sigma;
    let mut lo = 0.0;
    let mut hi = mu + 9.0 * s;
    while folded_cdf(hi, sigma) < p {
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = folded_cdf(x, sigma) - p;
        if f.abs() <= 1e-12 {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = folded_pdf(x, sigma);
        let newton = if d > 0.0 { x - f / d } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    let f = folded_cdf(x, sigma) - p;
    if f.abs() <= 1e-9 {
        Ok(x)
    } else {
        Err(Error::invalid(format!(
            "inverse CDF failed to converge at p = {p}"
        )))
    }
}

/// Standard normal CDF, Phi(z) = erfc(-z / sqrt(2)) / 2.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

//! Monte Carlo oracle over Haar-random unitary spectra.
//!
//! Each draw orthonormalizes a complex Ginibre matrix, fixes the phases of the
//! triangular factor so the result is exactly Haar, and keeps only the
//! eigenangles. Every draw owns a ChaCha20 substream keyed by
//! `(seed, sample index)`, so estimates do not depend on how the work is split
//! across threads.
//!
//! With `Z(θ) = Π_j (1 − e^{i(θ_j−θ)})`, differentiating at `θ = 0` gives
//!
//! ```text
//! Z'/Z = Σ_j i·e^{iθ_j}/(1 − e^{iθ_j}) = −iN/2 − ½ Σ_j cot(θ_j/2),
//! V'/V = iN/2 + Z'/Z          = −½ Σ_j cot(θ_j/2),
//! V(0) = e^{iNπ/2} e^{−iΣθ_j/2} Z(0),
//! ```
//!
//! so `V'/V` is real and `|V(0)| = |Z(0)|`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moments::{m_ratio_finite, moment_zero_finite, v_moment_finite};

/// Draws closer than this to the eigenvalue 1 are discarded and redrawn.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;
/// Below this `|Z(0)|` a spectrum is rejected outright.
pub const MIN_ABS_Z: f64 = 1e-300;
/// Smallest sample count accepted by the moment estimators.
pub const MIN_SAMPLES: usize = 1000;
/// Draws per work unit; fixed so the partition of the work is schedule-free.
const CHUNK: usize = 1024;
/// Redraws tolerated for a single sample before giving up.
const MAX_REDRAWS: u32 = 64;

/// Per-sample random source: the ChaCha20 stream `index` under key `seed`.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    index: u64,
    rng: ChaCha20Rng,
    resampled: u64,
}

impl RandomStream {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RandomStream {
            seed,
            index,
            rng,
            resampled: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Number of degenerate spectra discarded so far.
    pub fn resampled(&self) -> u64 {
        self.resampled
    }

    fn gaussian(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Eigenangles in `(−π, π]` of one Haar-distributed unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenangleSample {
    angles: Vec<f64>,
}

impl EigenangleSample {
    /// Wraps explicit angles (reduced into `(−π, π]`).
    pub fn new(angles: Vec<f64>) -> Self {
        EigenangleSample {
            angles: angles.into_iter().map(wrap_angle).collect(),
        }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.angles.iter().map(|&t| Complex64::from_polar(1.0, t))
    }

    /// `Tr U`.
    pub fn trace(&self) -> Complex64 {
        self.eigenvalues().sum()
    }

    fn is_degenerate(&self) -> bool {
        self.eigenvalues()
            .any(|e| (Complex64::new(1.0, 0.0) - e).norm() < DEGENERACY_TOLERANCE)
    }
}

fn wrap_angle(t: f64) -> f64 {
    let w = t.sin().atan2(t.cos());
    if w <= -PI {
        PI
    } else {
        w
    }
}

fn haar_matrix(n: usize, stream: &mut RandomStream) -> Option<DMatrix<Complex64>> {
    let g = DMatrix::from_fn(n, n, |_, _| stream.gaussian());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm.is_nan() || norm <= f64::MIN_POSITIVE {
            return None;
        }
        let phase = d / norm;
        q.column_mut(j).iter_mut().for_each(|x| *x *= phase);
    }
    Some(q)
}

fn spectrum(u: DMatrix<Complex64>) -> Option<Vec<f64>> {
    if u.nrows() == 1 {
        return Some(vec![u[(0, 0)].arg()]);
    }
    let schur = u.try_schur(f64::EPSILON, 10_000)?;
    let eig = schur.eigenvalues()?;
    eig.iter()
        .all(|e| (e.norm() - 1.0).abs() < 1e-8)
        .then(|| eig.iter().map(|e| e.arg()).collect())
}

/// Draws the spectrum of a Haar-random `N×N` unitary. Spectra with an
/// eigenvalue within `1e−12` of 1 are redrawn from the same stream; a failed
/// orthonormalization or eigen-solve gets a single retry.
pub fn sample_haar(n: usize, stream: &mut RandomStream) -> Result<EigenangleSample> {
    if n == 0 {
        return Err(Error::Domain("matrix size N must be positive".into()));
    }
    for _ in 0..MAX_REDRAWS {
        let angles = match haar_matrix(n, stream).and_then(spectrum) {
            Some(a) => a,
            None => haar_matrix(n, stream).and_then(spectrum).ok_or_else(|| {
                Error::Numerical(format!(
                    "Haar sampling degenerated twice (seed {}, stream {})",
                    stream.seed, stream.index
                ))
            })?,
        };
        let sample = EigenangleSample::new(angles);
        if !sample.is_degenerate() {
            return Ok(sample);
        }
        stream.resampled += 1;
    }
    Err(Error::Numerical(format!(
        "eigenvalue 1 hit {MAX_REDRAWS} times in a row (seed {}, stream {})",
        stream.seed, stream.index
    )))
}

fn check_spectrum(s: &EigenangleSample) -> Result<()> {
    if s.is_degenerate() {
        return Err(Error::Numerical(
            "degenerate sample: eigenvalue within 1e-12 of 1".into(),
        ));
    }
    Ok(())
}

fn z_value(s: &EigenangleSample) -> Result<Complex64> {
    let z: Complex64 = s
        .eigenvalues()
        .map(|e| Complex64::new(1.0, 0.0) - e)
        .product();
    if z.norm() < MIN_ABS_Z {
        return Err(Error::Numerical(format!(
            "degenerate sample: |Z(0)| = {:e}",
            z.norm()
        )));
    }
    Ok(z)
}

fn half_cot_sum(s: &EigenangleSample) -> f64 {
    s.angles().iter().map(|&t| 0.5 / (t / 2.0).tan()).sum()
}

/// `(Z(0), Z'(0)/Z(0))`.
pub fn z_log_deriv(s: &EigenangleSample) -> Result<(Complex64, Complex64)> {
    check_spectrum(s)?;
    let z = z_value(s)?;
    let n = s.len() as f64;
    Ok((z, Complex64::new(-half_cot_sum(s), -n / 2.0)))
}

/// `V(0)` (real) and the logarithmic derivative `V'(0)/V(0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VLogDeriv {
    pub v: f64,
    pub abs_v: f64,
    pub log_deriv: Complex64,
}

/// `V(0)`, `|V(0)|` and `V'(0)/V(0)`; fails if `|V(0)|` and `|Z(0)|` disagree
/// beyond `1e−9` relative.
pub fn v_log_deriv(s: &EigenangleSample) -> Result<VLogDeriv> {
    let (z, zlog) = z_log_deriv(s)?;
    let n = s.len() as f64;
    let phase = n * PI / 2.0 - s.angles().iter().sum::<f64>() / 2.0;
    let v = Complex64::from_polar(1.0, phase) * z;
    if (v.norm() - z.norm()).abs() > 1e-9 * z.norm() {
        return Err(Error::Numerical(format!(
            "|V(0)| = {} differs from |Z(0)| = {}",
            v.norm(),
            z.norm()
        )));
    }
    if v.im.abs() > 1e-9 * z.norm() {
        return Err(Error::Numerical(format!("V(0) = {v} is not real")));
    }
    Ok(VLogDeriv {
        v: v.re,
        abs_v: v.norm(),
        log_deriv: zlog + Complex64::new(0.0, n / 2.0),
    })
}

/// Sample statistics of a complex per-draw quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean_real: f64,
    pub mean_imag: f64,
    /// Standard error of `mean_real`.
    pub std_error: f64,
    pub std_error_imag: f64,
    pub samples: usize,
    pub seed: u64,
    /// Degenerate spectra discarded and redrawn.
    pub resampled: u64,
    /// Excess kurtosis of the real part; large values make `std_error` unreliable.
    pub kurtosis: f64,
}

impl McEstimate {
    /// Whether `target` lies within `sigmas` standard errors of the real mean.
    pub fn agrees_with(&self, target: f64, sigmas: f64) -> bool {
        (self.mean_real - target).abs() <= sigmas * self.std_error
    }

    /// Whether the imaginary mean lies within `sigmas` standard errors of 0.
    pub fn imag_vanishes(&self, sigmas: f64) -> bool {
        self.mean_imag.abs() <= sigmas * self.std_error_imag
    }
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let mut acc = Compensated::default();
    xs.for_each(|x| acc.add(x));
    acc.value()
}

/// Monte Carlo mean of `statistic` over `samples` Haar spectra of size `N`.
///
/// Draws run in parallel on the current rayon pool; the result is
/// bit-identical for every pool size.
pub fn estimate<F>(n: usize, samples: usize, seed: u64, statistic: F) -> Result<McEstimate>
where
    F: Fn(&EigenangleSample) -> Result<Complex64> + Sync,
{
    if samples == 0 {
        return Err(Error::Domain("requires at least one sample".into()));
    }
    let chunks: Vec<(Vec<Complex64>, u64)> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(samples);
            let mut values = Vec::with_capacity(range.len());
            let mut resampled = 0;
            for i in range {
                let mut stream = RandomStream::new(seed, i as u64);
                let s = sample_haar(n, &mut stream)?;
                resampled += stream.resampled();
                values.push(statistic(&s)?);
            }
            Ok((values, resampled))
        })
        .collect::<Result<_>>()?;

    let resampled: u64 = chunks.iter().map(|(_, r)| r).sum();
    if resampled as f64 > 1e-4 * samples as f64 {
        return Err(Error::Numerical(format!(
            "{resampled} of {samples} draws were degenerate"
        )));
    }
    let values = || chunks.iter().flat_map(|(v, _)| v.iter().copied());
    let m = samples as f64;
    let mean_real = compensated_sum(values().map(|v| v.re)) / m;
    let mean_imag = compensated_sum(values().map(|v| v.im)) / m;
    let central = |f: fn(Complex64) -> f64, mean: f64, p: i32| {
        compensated_sum(values().map(|v| (f(v) - mean).powi(p))) / m
    };
    let var_real = central(|v| v.re, mean_real, 2);
    let var_imag = central(|v| v.im, mean_imag, 2);
    let fourth = central(|v| v.re, mean_real, 4);
    let denom = if samples > 1 { m - 1.0 } else { 1.0 };
    let kurtosis = if var_real > 0.0 {
        fourth / (var_real * var_real) - 3.0
    } else {
        0.0
    };
    Ok(McEstimate {
        mean_real,
        mean_imag,
        std_error: (var_real / denom).sqrt(),
        std_error_imag: (var_imag / denom).sqrt(),
        samples,
        seed,
        resampled,
        kurtosis,
    })
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "requires samples >= {MIN_SAMPLES} (got {samples})"
        )));
    }
    Ok(())
}

fn i_power(r: usize) -> Complex64 {
    match r % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn to_f64(x: &crate::BigRational) -> Result<f64> {
    x.to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Numerical(format!("{x} is not representable as f64")))
}

/// Estimates `i^r·E[|Z|^{2k}(Z'/Z)^r] / E[|Z|^{2k}]`, using the exact
/// denominator; the target is the exact finite-N moment ratio.
pub fn estimate_m_moment(
    k: usize,
    r: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    // validates k, r, N with the exact engine's messages
    m_ratio_finite(k, r, n)?;
    check_samples(samples)?;
    let norm = i_power(r) / to_f64(&moment_zero_finite(k, n)?)?;
    estimate(n, samples, seed, |s| {
        let (z, w) = z_log_deriv(s)?;
        Ok(norm * z.norm_sqr().powi(k as i32) * w.powi(r as i32))
    })
}

/// Estimates `E[|V(0)|^{2k}·|V'/V|^{2h}]`.
pub fn estimate_v_moment(
    k: usize,
    h: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    v_moment_finite(k, h, n)?;
    check_samples(samples)?;
    estimate(n, samples, seed, |s| {
        let v = v_log_deriv(s)?;
        Ok(Complex64::new(
            v.abs_v.powi(2 * k as i32) * v.log_deriv.norm_sqr().powi(h as i32),
            0.0,
        ))
    })
}

//! Averaged quantities over the random-state ensembles: exact conditional
//! averages, Hilbert-Schmidt averages by nested quadrature, Monte Carlo
//! estimators with seeded worker streams, the subsystem-entropy offset in
//! exact rational arithmetic, and a one-sample KS statistic.
//!
//! Every entropy average is reported in bits.

use std::f64::consts::LN_2;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::bloch::{phi_unchecked, BlochVector};
use crate::ensembles::SeededSampler;
use crate::error::{Error, Result};
use crate::mixing::quantum_add_bloch;
use crate::quad::{integrate, QuadEstimate, QuadratureConfig};

fn check_radius(r: f64, role: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("{role} {r} outside [0, 1]")));
    }
    Ok(())
}

/// Primitive (in nats) whose increments give the radius-weighted entropy
/// integral: d/dx = 12 ln(2) x Phi(x).
fn mixture_entropy_primitive(x: f64) -> f64 {
    debug_assert!((0.0..=1.0 + 1e-12).contains(&x));
    let x = x.min(1.0);
    let mut acc = x * x * (1.0 + 6.0 * LN_2);
    let m = 1.0 - x;
    if m > 1e-15 {
        acc += m * m * (1.0 + 2.0 * x) * m.ln();
    }
    let p = 1.0 + x;
    acc += p * p * (1.0 - 2.0 * x) * p.ln();
    acc
}

/// Average output entropy of the equiprobable mixture over two independent
/// uniform orbits with Bloch radii r1 and r2; closed form, in bits.
pub fn cond_avg_entropy_equi(r1: f64, r2: f64) -> Result<f64> {
    check_radius(r1, "first radius")?;
    check_radius(r2, "second radius")?;
    let (lo, hi) = ((r1 - r2).abs() / 2.0, (r1 + r2) / 2.0);
    if r1 * r2 == 0.0 {
        // output radius is constant: the entropy itself
        return Ok(phi_unchecked(hi));
    }
    let span = mixture_entropy_primitive(hi) - mixture_entropy_primitive(lo);
    Ok(span / (6.0 * LN_2 * r1 * r2))
}

/// Integral of Phi(sqrt(A - v^2) / 2) over the substituted variable
/// v = sqrt(A - 4 r^2); the conditional quantum-mixture average divides
/// this by the interval width 2 r1 r2.
fn qadd_entropy_v_integral(r1: f64, r2: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let p = r1 * r2;
    if p == 0.0 {
        return Ok(0.0);
    }
    let a = (1.0 + r1 * r1) * (1.0 + r2 * r2);
    let est = integrate(
        |v| phi_unchecked(((a - v * v).max(0.0)).sqrt() / 2.0),
        1.0 - p,
        1.0 + p,
        cfg,
    )?;
    Ok(est.value)
}

/// Average output entropy of the quantum mixture over two independent
/// uniform orbits with Bloch radii r1 and r2, in bits.
pub fn cond_avg_entropy_qadd(r1: f64, r2: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_radius(r1, "first radius")?;
    check_radius(r2, "second radius")?;
    if r1 * r2 == 0.0 {
        return Ok(phi_unchecked((r1 + r2) / 2.0));
    }
    Ok(qadd_entropy_v_integral(r1, r2, cfg)? / (2.0 * r1 * r2))
}

const OUTER_TOLS: (f64, f64) = (1e-7, 1e-7);
const MIDDLE_TOLS: (f64, f64) = (1e-8, 1e-8);
const INNER_TOLS: (f64, f64) = (1e-9, 1e-9);

/// Inner quadrature failures poison the outer integrand with NaN, which
/// the outer pass reports as a numerical failure.
fn nan_on_error(v: Result<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

/// Hilbert-Schmidt average entropy of the equiprobable mixture of two
/// independent random states, in bits. The reported error bound covers
/// the outer quadrature; inner passes run two orders tighter.
pub fn avg_entropy_equi_hs() -> Result<QuadEstimate> {
    let outer = QuadratureConfig::with_tols(OUTER_TOLS.0, OUTER_TOLS.1);
    let inner = QuadratureConfig::with_tols(INNER_TOLS.0, INNER_TOLS.1);
    // 9 r1^2 r2^2 * conditional average, with the 1/(r1 r2) cancelled
    // analytically so the integrand stays finite at the axes
    let weighted = |r1: f64, r2: f64| {
        let (lo, hi) = ((r1 - r2).abs() / 2.0, (r1 + r2) / 2.0);
        let span = mixture_entropy_primitive(hi) - mixture_entropy_primitive(lo);
        1.5 / LN_2 * r1 * r2 * span
    };
    integrate(
        |r1| {
            // the |r1 - r2| kink sits at r2 = r1; split there
            let below = nan_on_error(
                integrate(|r2| weighted(r1, r2), 0.0, r1, &inner).map(|e| e.value),
            );
            let above = nan_on_error(
                integrate(|r2| weighted(r1, r2), r1, 1.0, &inner).map(|e| e.value),
            );
            below + above
        },
        0.0,
        1.0,
        &outer,
    )
}

/// Hilbert-Schmidt average entropy of the quantum mixture of two
/// independent random states, in bits.
pub fn avg_entropy_qadd_hs() -> Result<QuadEstimate> {
    let outer = QuadratureConfig::with_tols(OUTER_TOLS.0, OUTER_TOLS.1);
    let middle = QuadratureConfig::with_tols(MIDDLE_TOLS.0, MIDDLE_TOLS.1);
    let inner = QuadratureConfig::with_tols(INNER_TOLS.0, INNER_TOLS.1);
    integrate(
        |r1| {
            nan_on_error(
                integrate(
                    |r2| {
                        // 9 r1^2 r2^2 / (2 r1 r2) times the v-integral
                        4.5 * r1
                            * r2
                            * nan_on_error(qadd_entropy_v_integral(r1, r2, &inner))
                    },
                    0.0,
                    1.0,
                    &middle,
                )
                .map(|e| e.value),
            )
        },
        0.0,
        1.0,
        &outer,
    )
}

/// Exact ensemble average of the squared fidelity between two independent
/// Hilbert-Schmidt states: (1 + (3 pi / 16)^2) / 2.
pub fn avg_fidelity_squared_exact() -> f64 {
    let c = 3.0 * std::f64::consts::PI / 16.0;
    0.5 * (1.0 + c * c)
}

/// The same average by direct quadrature over the two radii and the angle.
pub fn avg_fidelity_squared_quadrature() -> Result<QuadEstimate> {
    let outer = QuadratureConfig::with_tols(OUTER_TOLS.0, OUTER_TOLS.1);
    let middle = QuadratureConfig::with_tols(MIDDLE_TOLS.0, MIDDLE_TOLS.1);
    let inner = QuadratureConfig::with_tols(INNER_TOLS.0, INNER_TOLS.1);
    let fsq = |u: f64, v: f64, cos_t: f64| {
        0.5 * (1.0 + u * v * cos_t + ((1.0 - u * u) * (1.0 - v * v)).max(0.0).sqrt())
    };
    integrate(
        |u| {
            nan_on_error(
                integrate(
                    |v| {
                        9.0 * u * u * v * v
                            * nan_on_error(
                                integrate(
                                    |t| 0.5 * t.sin() * fsq(u, v, t.cos()),
                                    0.0,
                                    std::f64::consts::PI,
                                    &inner,
                                )
                                .map(|e| e.value),
                            )
                    },
                    0.0,
                    1.0,
                    &middle,
                )
                .map(|e| e.value),
            )
        },
        0.0,
        1.0,
        &outer,
    )
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl McEstimate {
    /// |value - reference| measured in standard errors.
    pub fn sigmas_from(&self, reference: f64) -> f64 {
        (self.value - reference).abs() / self.std_error
    }
}

/// Averages `f` over `n_samples` draws split across `workers` threads.
///
/// Worker i draws from substream i of the seed, and partial sums are
/// folded in worker order, so the result is a pure function of
/// (seed, n_samples, workers) regardless of scheduling.
pub fn mc_mean<F>(seed: u64, n_samples: u64, workers: usize, f: F) -> Result<McEstimate>
where
    F: Fn(&mut SeededSampler) -> f64 + Sync,
{
    if n_samples < 2 {
        return Err(Error::contract(format!(
            "need at least 2 samples for a standard error, got {n_samples}"
        )));
    }
    if workers == 0 {
        return Err(Error::contract("need at least one worker"));
    }
    let base = SeededSampler::new(seed);
    let share = n_samples / workers as u64;
    let extra = (n_samples % workers as u64) as usize;
    let counts: Vec<u64> = (0..workers)
        .map(|i| share + u64::from(i < extra))
        .collect();

    let partials: Vec<(f64, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = counts
            .iter()
            .enumerate()
            .map(|(i, &count)| {
                let mut stream = base.substream(i as u64);
                let f = &f;
                scope.spawn(move || {
                    let mut sum = 0.0;
                    let mut sum_sq = 0.0;
                    for _ in 0..count {
                        let x = f(&mut stream);
                        sum += x;
                        sum_sq += x * x;
                    }
                    (sum, sum_sq)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling worker panicked"))
            .collect()
    });

    let (sum, sum_sq) = partials
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = n_samples as f64;
    let mean = sum / n;
    let variance = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    let estimate = McEstimate {
        value: mean,
        std_error: (variance / n).sqrt(),
        n_samples,
        seed,
    };
    if !estimate.value.is_finite() || !estimate.std_error.is_finite() {
        return Err(Error::NumericalFailure {
            what: "Monte Carlo mean (non-finite sample encountered)".into(),
            estimate: estimate.value,
            error_bound: estimate.std_error,
            requested: 0.0,
            subdivisions: 0,
        });
    }
    Ok(estimate)
}

/// MC average entropy of the mean of `n_states` independent random states.
pub fn mc_avg_entropy_mean_n(
    seed: u64,
    n_samples: u64,
    workers: usize,
    n_states: u32,
) -> Result<McEstimate> {
    if n_states == 0 {
        return Err(Error::contract("need at least one state in the mean"));
    }
    mc_mean(seed, n_samples, workers, move |s| {
        phi_unchecked(mean_state_length(s, n_states))
    })
}

/// MC average relative entropy of coherence of the mean of `n_states`
/// independent random states.
pub fn mc_avg_coherence_mean_n(
    seed: u64,
    n_samples: u64,
    workers: usize,
    n_states: u32,
) -> Result<McEstimate> {
    if n_states == 0 {
        return Err(Error::contract("need at least one state in the mean"));
    }
    mc_mean(seed, n_samples, workers, move |s| {
        let mut acc = [0.0; 3];
        for _ in 0..n_states {
            let v = s.sample_hs_state();
            acc[0] += v.x();
            acc[1] += v.y();
            acc[2] += v.z();
        }
        let k = f64::from(n_states);
        let mean = BlochVector::new(acc[0] / k, acc[1] / k, acc[2] / k)
            .expect("mean of states stays in the ball");
        crate::bloch::coherence_from_bloch(&mean)
    })
}

fn mean_state_length(s: &mut SeededSampler, n_states: u32) -> f64 {
    let mut acc = [0.0; 3];
    for _ in 0..n_states {
        let v = s.sample_hs_state();
        acc[0] += v.x();
        acc[1] += v.y();
        acc[2] += v.z();
    }
    let k = f64::from(n_states);
    ((acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]).sqrt() / k).min(1.0)
}

/// MC average entropy of the equiprobable mixture of two random states.
pub fn mc_avg_entropy_equi_hs(seed: u64, n_samples: u64, workers: usize) -> Result<McEstimate> {
    mc_avg_entropy_mean_n(seed, n_samples, workers, 2)
}

/// MC average entropy of the quantum mixture of two random states.
pub fn mc_avg_entropy_qadd_hs(seed: u64, n_samples: u64, workers: usize) -> Result<McEstimate> {
    mc_mean(seed, n_samples, workers, |s| {
        let a = s.sample_hs_state();
        let b = s.sample_hs_state();
        let out = quantum_add_bloch(&a, &b, 0.5).expect("even weight is valid");
        phi_unchecked(out.length())
    })
}

/// MC average squared fidelity between two random states.
pub fn mc_avg_fidelity_squared(seed: u64, n_samples: u64, workers: usize) -> Result<McEstimate> {
    mc_mean(seed, n_samples, workers, |s| {
        let a = s.sample_hs_state();
        let b = s.sample_hs_state();
        crate::bloch::fidelity_squared_bloch(&a, &b)
    })
}

/// Average subsystem entropy deficit H_{mn} - H_n - (m-1)/(2n) for a
/// random pure state on an m x n system, exact in nats.
#[derive(Debug, Clone, PartialEq)]
pub struct PageEntropy {
    exact_nats: BigRational,
}

impl PageEntropy {
    pub fn exact_nats(&self) -> &BigRational {
        &self.exact_nats
    }

    pub fn nats(&self) -> f64 {
        self.exact_nats.to_f64().expect("small rational fits in f64")
    }

    pub fn bits(&self) -> f64 {
        self.nats() / LN_2
    }
}

fn harmonic(k: u64) -> BigRational {
    (1..=k).fold(BigRational::zero(), |acc, i| {
        acc + BigRational::new(BigInt::from(1), BigInt::from(i))
    })
}

pub fn page_entropy(m: u64, n: u64) -> Result<PageEntropy> {
    if m == 0 || n == 0 {
        return Err(Error::domain("subsystem dimensions must be positive"));
    }
    if m > n {
        return Err(Error::domain(format!(
            "smaller subsystem must come first (got m = {m} > n = {n})"
        )));
    }
    let mn = m
        .checked_mul(n)
        .filter(|&p| p <= 10_000)
        .ok_or_else(|| {
            Error::contract(format!(
                "m * n = {m} * {n} exceeds the exact-arithmetic cap of 10000"
            ))
        })?;
    let offset = BigRational::new(BigInt::from(m - 1), BigInt::from(2 * n));
    Ok(PageEntropy {
        exact_nats: harmonic(mn) - harmonic(n) - offset,
    })
}

/// One-sample Kolmogorov-Smirnov statistic sup |F_N - F| for sorted data.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::contract("KS statistic needs at least one draw"));
    }
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in sorted.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::contract(format!("draw {i} is not finite")));
        }
        if x < prev {
            return Err(Error::contract(format!("draws not sorted at index {i}")));
        }
        prev = x;
        let f = cdf(x);
        if !(0.0..=1.0).contains(&f) {
            return Err(Error::contract(format!("cdf({x}) = {f} outside [0, 1]")));
        }
        d = d.max(f - i as f64 / n).max((i as f64 + 1.0) / n - f);
    }
    Ok(d)
}

/// Acceptance threshold 2 / sqrt(N) for the one-sample KS statistic.
pub fn ks_threshold(n: usize) -> f64 {
    2.0 / (n as f64).sqrt()
}

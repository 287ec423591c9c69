//! Exact output laws of the two mixing rules, plus the two input laws
//! (Hilbert-Schmidt maximal eigenvalue, angle between random directions).
//!
//! Conventions shared by every law here:
//! - points outside the support have pdf 0 (not an error);
//! - cdf saturates to 0 / 1 outside the support and is flat across a gap;
//! - parameter combinations that collapse a law to a point mass are
//!   rejected by `pdf`/`cdf` but still accepted by `sample`, which then
//!   returns the constant.
//!
//! Eigenvalue laws and Bloch-length laws are linked by lambda = (1 +- r)/2
//! with a fair branch choice, under which pdf_lambda(x) = pdf_r(|2x - 1|).

use crate::ensembles::SeededSampler;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo..=self.hi).contains(&x)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Support of a spectral law: one interval, or a symmetric pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportSpec {
    One(Interval),
    Two(Interval, Interval),
}

impl SupportSpec {
    pub fn intervals(&self) -> Vec<Interval> {
        match *self {
            SupportSpec::One(a) => vec![a],
            SupportSpec::Two(a, b) => vec![a, b],
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals().iter().any(|iv| iv.contains(x))
    }

    pub fn min(&self) -> f64 {
        self.intervals()[0].lo
    }

    pub fn max(&self) -> f64 {
        let ivs = self.intervals();
        ivs[ivs.len() - 1].hi
    }
}

/// Output Bloch-length bounds shared by both mixing rules at even weight.
fn radius_bounds(r1: f64, r2: f64) -> (f64, f64) {
    ((r1 - r2).abs() / 2.0, (r1 + r2) / 2.0)
}

fn check_unit(v: f64, role: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::domain(format!("{role} {v} outside [0, 1]")));
    }
    Ok(())
}

fn check_half(v: f64, role: &str) -> Result<()> {
    if !(0.0..=0.5).contains(&v) {
        return Err(Error::domain(format!("{role} {v} outside [0, 1/2]")));
    }
    Ok(())
}

/// A one-dimensional law with exact pdf, cdf and inverse-cdf sampling.
///
/// `LambdaEqui` / `LambdaQadd` are the eigenvalue laws of the equiprobable
/// and quantum mixtures of states drawn uniformly from the orbits with
/// smaller eigenvalues mu and nu. `REqui` / `RQadd` are the same laws in
/// Bloch length, parametrized by the orbit radii. `MaxEigHs` is the larger
/// eigenvalue of a single Hilbert-Schmidt state; `Angle` is the angle
/// between two independent uniform directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityKind {
    LambdaEqui { mu: f64, nu: f64 },
    LambdaQadd { mu: f64, nu: f64 },
    REqui { r1: f64, r2: f64 },
    RQadd { r1: f64, r2: f64 },
    MaxEigHs,
    Angle,
}

impl DensityKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DensityKind::LambdaEqui { mu, nu } | DensityKind::LambdaQadd { mu, nu } => {
                check_half(mu, "orbit eigenvalue mu")?;
                check_half(nu, "orbit eigenvalue nu")
            }
            DensityKind::REqui { r1, r2 } | DensityKind::RQadd { r1, r2 } => {
                check_unit(r1, "first radius")?;
                check_unit(r2, "second radius")
            }
            DensityKind::MaxEigHs | DensityKind::Angle => Ok(()),
        }
    }

    /// Orbit radii entering the law, if it has orbit parameters.
    fn radii(&self) -> Option<(f64, f64)> {
        match *self {
            DensityKind::LambdaEqui { mu, nu } | DensityKind::LambdaQadd { mu, nu } => {
                Some((1.0 - 2.0 * mu, 1.0 - 2.0 * nu))
            }
            DensityKind::REqui { r1, r2 } | DensityKind::RQadd { r1, r2 } => Some((r1, r2)),
            _ => None,
        }
    }

    /// The corresponding Bloch-length law for an eigenvalue law.
    fn radius_law(&self) -> DensityKind {
        let (r1, r2) = self.radii().expect("eigenvalue laws carry radii");
        match self {
            DensityKind::LambdaEqui { .. } => DensityKind::REqui { r1, r2 },
            DensityKind::LambdaQadd { .. } => DensityKind::RQadd { r1, r2 },
            _ => unreachable!("only eigenvalue laws delegate"),
        }
    }

    /// Rejects parameters that collapse the law to a point mass.
    fn check_not_dirac(&self) -> Result<()> {
        if let Some((r1, r2)) = self.radii() {
            if r1 == 0.0 || r2 == 0.0 {
                return Err(Error::degenerate(format!(
                    "radii ({r1}, {r2}) give a point-mass law with no density"
                )));
            }
        }
        Ok(())
    }

    pub fn support(&self) -> Result<SupportSpec> {
        self.validate()?;
        Ok(match *self {
            DensityKind::MaxEigHs => SupportSpec::One(Interval::new(0.5, 1.0)),
            DensityKind::Angle => SupportSpec::One(Interval::new(0.0, std::f64::consts::PI)),
            DensityKind::REqui { r1, r2 } | DensityKind::RQadd { r1, r2 } => {
                let (lo, hi) = radius_bounds(r1, r2);
                SupportSpec::One(Interval::new(lo, hi))
            }
            _ => {
                let (r1, r2) = self.radii().expect("eigenvalue law");
                let (lo, hi) = radius_bounds(r1, r2);
                if lo == 0.0 {
                    SupportSpec::One(Interval::new(0.5 * (1.0 - hi), 0.5 * (1.0 + hi)))
                } else {
                    SupportSpec::Two(
                        Interval::new(0.5 * (1.0 - hi), 0.5 * (1.0 - lo)),
                        Interval::new(0.5 * (1.0 + lo), 0.5 * (1.0 + hi)),
                    )
                }
            }
        })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_not_dirac()?;
        if !x.is_finite() {
            return Err(Error::domain(format!("evaluation point {x} is not finite")));
        }
        match *self {
            DensityKind::MaxEigHs => {
                Ok(if (0.5..=1.0).contains(&x) {
                    24.0 * (x - 0.5) * (x - 0.5)
                } else {
                    0.0
                })
            }
            DensityKind::Angle => Ok(if (0.0..=std::f64::consts::PI).contains(&x) {
                0.5 * x.sin()
            } else {
                0.0
            }),
            DensityKind::REqui { r1, r2 } => {
                let (lo, hi) = radius_bounds(r1, r2);
                Ok(if (lo..=hi).contains(&x) {
                    2.0 * x / (r1 * r2)
                } else {
                    0.0
                })
            }
            DensityKind::RQadd { r1, r2 } => {
                if r1 == 1.0 && r2 == 1.0 {
                    return Err(Error::degenerate(
                        "two pure inputs: density diverges at the support edge",
                    ));
                }
                let (lo, hi) = radius_bounds(r1, r2);
                if !(lo..=hi).contains(&x) {
                    return Ok(0.0);
                }
                let big = (1.0 + r1 * r1) * (1.0 + r2 * r2);
                Ok(2.0 * x / (r1 * r2 * (big - 4.0 * x * x).sqrt()))
            }
            DensityKind::LambdaEqui { .. } | DensityKind::LambdaQadd { .. } => {
                if self.support()?.contains(x) {
                    self.radius_law().pdf((2.0 * x - 1.0).abs())
                } else {
                    Ok(0.0)
                }
            }
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_not_dirac()?;
        if !x.is_finite() {
            return Err(Error::domain(format!("evaluation point {x} is not finite")));
        }
        match *self {
            DensityKind::MaxEigHs => Ok(if x < 0.5 {
                0.0
            } else if x > 1.0 {
                1.0
            } else {
                8.0 * (x - 0.5).powi(3)
            }),
            DensityKind::Angle => Ok(if x < 0.0 {
                0.0
            } else if x > std::f64::consts::PI {
                1.0
            } else {
                0.5 * (1.0 - x.cos())
            }),
            DensityKind::REqui { r1, r2 } => {
                let (lo, hi) = radius_bounds(r1, r2);
                Ok(if x < lo {
                    0.0
                } else if x > hi {
                    1.0
                } else {
                    (x * x - lo * lo) / (r1 * r2)
                })
            }
            DensityKind::RQadd { r1, r2 } => {
                let (lo, hi) = radius_bounds(r1, r2);
                Ok(if x < lo {
                    0.0
                } else if x > hi {
                    1.0
                } else {
                    let big = (1.0 + r1 * r1) * (1.0 + r2 * r2);
                    let root = (big - 4.0 * x * x).max(0.0).sqrt();
                    (((1.0 + r1 * r2) - root) / (2.0 * r1 * r2)).clamp(0.0, 1.0)
                })
            }
            DensityKind::LambdaEqui { .. } | DensityKind::LambdaQadd { .. } => {
                // lambda = (1 +- r)/2 with a fair branch: the lower branch
                // holds mass 1/2 in reversed orientation
                let radius_cdf = |r: f64| self.radius_law().cdf(r);
                if x < 0.5 {
                    Ok(0.5 * (1.0 - radius_cdf(1.0 - 2.0 * x)?))
                } else {
                    Ok(0.5 + 0.5 * radius_cdf(2.0 * x - 1.0)?)
                }
            }
        }
    }

    /// Draw through the physical construction rather than the inverse cdf:
    /// sample the input states, apply the mixing rule, read the observable.
    /// This is the route `cdf` is validated against.
    pub fn sample_physical(&self, s: &mut SeededSampler) -> Result<f64> {
        use crate::ensembles::OrbitSpec;
        use crate::mixing::{mix_weighted, quantum_add_bloch};
        self.validate()?;
        Ok(match *self {
            DensityKind::MaxEigHs => (1.0 + s.sample_hs_state().length()) / 2.0,
            DensityKind::Angle => {
                let a = s.sample_direction();
                let b = s.sample_direction();
                a.angle_with(&b)
            }
            _ => {
                let (r1, r2) = self.radii().expect("orbit-parametrized law");
                let a = s.sample_orbit(OrbitSpec::new((1.0 - r1) / 2.0)?);
                let b = s.sample_orbit(OrbitSpec::new((1.0 - r2) / 2.0)?);
                let out = match self {
                    DensityKind::LambdaEqui { .. } | DensityKind::REqui { .. } => {
                        mix_weighted(&a, &b, 0.5)
                    }
                    _ => quantum_add_bloch(&a, &b, 0.5),
                }
                .expect("even weight is valid");
                if self.is_eigenvalue_law() {
                    let upper = s.coin();
                    if upper {
                        (1.0 + out.length()) / 2.0
                    } else {
                        (1.0 - out.length()) / 2.0
                    }
                } else {
                    out.length()
                }
            }
        })
    }

    fn is_eigenvalue_law(&self) -> bool {
        matches!(
            self,
            DensityKind::LambdaEqui { .. } | DensityKind::LambdaQadd { .. }
        )
    }

    /// Inverse-cdf draw; point-mass parameter choices return the constant.
    /// Eigenvalue laws consume two uniforms, all others one.
    pub fn sample(&self, s: &mut SeededSampler) -> Result<f64> {
        self.validate()?;
        match *self {
            DensityKind::MaxEigHs => Ok(0.5 + (s.uniform() / 8.0).cbrt()),
            DensityKind::Angle => Ok((1.0 - 2.0 * s.uniform()).acos()),
            DensityKind::REqui { r1, r2 } => {
                let (lo, _) = radius_bounds(r1, r2);
                Ok((lo * lo + s.uniform() * r1 * r2).sqrt())
            }
            DensityKind::RQadd { r1, r2 } => {
                let u = s.uniform();
                let big = (1.0 + r1 * r1) * (1.0 + r2 * r2);
                let v = (1.0 + r1 * r2) - 2.0 * r1 * r2 * u;
                Ok(((big - v * v).max(0.0)).sqrt() / 2.0)
            }
            DensityKind::LambdaEqui { .. } | DensityKind::LambdaQadd { .. } => {
                let r = self.radius_law().sample(s)?;
                let upper = s.coin();
                Ok(if upper { 0.5 * (1.0 + r) } else { 0.5 * (1.0 - r) })
            }
        }
    }
}

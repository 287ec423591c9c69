//! Qubit states in Bloch form and the exact scalar functions on them.
//!
//! A qubit density matrix is rho(r) = (I + r.sigma)/2 for a vector r in
//! the closed unit ball; its eigenvalues are (1 +- |r|)/2 and its von
//! Neumann entropy is Phi(|r|) = H2((1 - |r|)/2) in bits. Everything in
//! this module is exact algebra on that representation; the random
//! ensembles live in [`crate::ensembles`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{C64, Mat2};

/// Slack allowed on |r| <= 1 at construction. Mixture arithmetic can
/// land a hair outside the ball; anything within `LENGTH_EPS` is pulled
/// back onto the sphere, anything beyond is rejected.
pub const LENGTH_EPS: f64 = 1e-9;

/// Tolerance for the Hermiticity / trace / positivity checks when a
/// density matrix is built from raw entries.
pub const STATE_TOL: f64 = 1e-9;

/// Eigenvalues below this are treated as exact zeros inside entropies,
/// implementing the 0 log 0 = 0 convention.
pub const EIG_ZERO: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    /// Builds a Bloch vector, clamping lengths within `LENGTH_EPS` of 1
    /// back onto the unit sphere.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::invalid_state("non-finite Bloch component"));
        }
        let len = (x * x + y * y + z * z).sqrt();
        if len > 1.0 + LENGTH_EPS {
            return Err(Error::invalid_state(format!(
                "Bloch length {len} exceeds 1 + {LENGTH_EPS}"
            )));
        }
        if len > 1.0 {
            let s = 1.0 / len;
            return Ok(BlochVector {
                x: x * s,
                y: y * s,
                z: z * s,
            });
        }
        Ok(BlochVector { x, y, z })
    }

    pub fn zero() -> Self {
        BlochVector {
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn length(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed cross product (x cross y = z).
    pub fn cross(&self, other: &BlochVector) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    pub fn from_array(c: [f64; 3]) -> Result<Self> {
        BlochVector::new(c[0], c[1], c[2])
    }

    /// Scales the vector. Panics if the result leaves the Bloch ball;
    /// callers are expected to pass |s| * length <= 1.
    pub fn scale(&self, s: f64) -> BlochVector {
        BlochVector::new(self.x * s, self.y * s, self.z * s)
            .expect("scaled vector leaves the Bloch ball")
    }

    /// Angle between the two vectors in [0, pi]; zero-length inputs get
    /// angle 0 (the mixture formulas are insensitive to that choice).
    pub fn angle_with(&self, other: &BlochVector) -> f64 {
        let denom = self.length() * other.length();
        if denom < EIG_ZERO {
            return 0.0;
        }
        (self.dot(other) / denom).clamp(-1.0, 1.0).acos()
    }
}

/// Binary entropy H2(p) in bits, with 0 log 0 = 0.
pub fn binary_entropy(p: f64) -> f64 {
    debug_assert!((-1e-12..=1.0 + 1e-12).contains(&p));
    let q = 1.0 - p;
    let mut h = 0.0;
    if p > EIG_ZERO {
        h -= p * p.log2();
    }
    if q > EIG_ZERO {
        h -= q * q.log2();
    }
    h
}

/// Entropy of a single qubit in bits, always in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct EntropyBits(f64);

impl EntropyBits {
    pub fn bits(self) -> f64 {
        self.0
    }
}

impl From<EntropyBits> for f64 {
    fn from(e: EntropyBits) -> f64 {
        e.bits()
    }
}

/// Eigenvalue pair ((1+r)/2, (1-r)/2) of a state with Bloch length r.
pub fn eigenvalues(r: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("Bloch length {r} outside [0, 1]")));
    }
    Ok((0.5 * (1.0 + r), 0.5 * (1.0 - r)))
}

/// Phi(r) = H2((1-r)/2), the qubit entropy as a function of Bloch length.
pub fn entropy_phi(r: f64) -> Result<EntropyBits> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::domain(format!("Bloch length {r} outside [0, 1]")));
    }
    Ok(EntropyBits(binary_entropy(0.5 * (1.0 - r))))
}

/// Phi on a length already known to be in [0, 1]; hot-loop variant.
pub(crate) fn phi_unchecked(r: f64) -> f64 {
    binary_entropy(0.5 * (1.0 - r.min(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    m: Mat2,
}

impl DensityMatrix2 {
    /// Validates Hermiticity, unit trace and positivity (within
    /// `STATE_TOL`) of raw entries.
    pub fn from_matrix(m: Mat2) -> Result<Self> {
        let herm = m.max_abs_diff(&m.adjoint());
        if herm > STATE_TOL {
            return Err(Error::invalid_state(format!(
                "matrix is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::invalid_state(format!("trace {tr} is not 1")));
        }
        let state = DensityMatrix2 { m };
        let (_, lo) = state.eigenvalues();
        if lo < -STATE_TOL {
            return Err(Error::invalid_state(format!(
                "negative eigenvalue {lo:.3e}"
            )));
        }
        Ok(state)
    }

    pub fn from_bloch(v: &BlochVector) -> Self {
        let h = 0.5;
        DensityMatrix2 {
            m: Mat2([
                [
                    C64::new(h * (1.0 + v.z), 0.0),
                    C64::new(h * v.x, -h * v.y),
                ],
                [C64::new(h * v.x, h * v.y), C64::new(h * (1.0 - v.z), 0.0)],
            ]),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    /// r_x = 2 Re rho_01, r_y = -2 Im rho_01, r_z = rho_00 - rho_11.
    pub fn bloch(&self) -> BlochVector {
        let x = 2.0 * self.m.0[0][1].re;
        let y = -2.0 * self.m.0[0][1].im;
        let z = self.m.0[0][0].re - self.m.0[1][1].re;
        BlochVector::new(x, y, z).expect("valid state maps into the Bloch ball")
    }

    /// Direct 2x2 Hermitian diagonalization, returned (larger, smaller).
    pub fn eigenvalues(&self) -> (f64, f64) {
        let a = self.m.0[0][0].re;
        let d = self.m.0[1][1].re;
        let mean = 0.5 * (a + d);
        let half = 0.5 * (a - d);
        let gap = (half * half + self.m.0[0][1].norm_sqr()).sqrt();
        (mean + gap, mean - gap)
    }

    /// Von Neumann entropy in bits from the spectrum.
    pub fn entropy(&self) -> EntropyBits {
        let (hi, lo) = self.eigenvalues();
        let mut s = 0.0;
        for lam in [hi, lo] {
            if lam > EIG_ZERO {
                s -= lam * lam.log2();
            }
        }
        EntropyBits(s.max(0.0))
    }

    /// Diagonal truncation in the computational basis.
    pub fn diagonal_part(&self) -> DensityMatrix2 {
        let mut m = Mat2::zero();
        m.0[0][0] = C64::new(self.m.0[0][0].re, 0.0);
        m.0[1][1] = C64::new(self.m.0[1][1].re, 0.0);
        DensityMatrix2 { m }
    }

    pub fn det(&self) -> f64 {
        self.m.det().re
    }
}

pub fn bloch_to_matrix(v: &BlochVector) -> DensityMatrix2 {
    DensityMatrix2::from_bloch(v)
}

pub fn matrix_to_bloch(m: &DensityMatrix2) -> BlochVector {
    m.bloch()
}

/// Relative entropy of coherence C_r = S(diag rho) - S(rho) in the
/// computational basis.
pub fn rel_entropy_coherence(m: &DensityMatrix2) -> EntropyBits {
    let c = m.diagonal_part().entropy().bits() - m.entropy().bits();
    EntropyBits(c.max(0.0))
}

/// Coherence of a state given directly by its Bloch vector; avoids the
/// matrix round trip in sampling loops.
pub(crate) fn coherence_from_bloch(v: &BlochVector) -> f64 {
    let s_diag = binary_entropy(0.5 * (1.0 - v.z.abs()));
    (s_diag - phi_unchecked(v.length())).max(0.0)
}

/// Squared fidelity in Bloch form: (1 + <u,v> + sqrt((1-u^2)(1-v^2)))/2.
pub fn fidelity_squared_bloch(u: &BlochVector, v: &BlochVector) -> f64 {
    let u2 = (u.dot(u)).min(1.0);
    let v2 = (v.dot(v)).min(1.0);
    0.5 * (1.0 + u.dot(v) + ((1.0 - u2) * (1.0 - v2)).sqrt())
}

/// Squared fidelity F^2 = 2 sqrt(det a det b) + Tr(ab).
///
/// Both the matrix form and the Bloch form are evaluated; a mismatch
/// beyond 1e-12 is a contract violation (the two are algebraically
/// identical for qubits).
pub fn fidelity_squared(a: &DensityMatrix2, b: &DensityMatrix2) -> Result<f64> {
    let det_prod = (a.det().max(0.0)) * (b.det().max(0.0));
    let tr_ab = a.matrix().mul(b.matrix()).trace().re;
    let matrix_form = 2.0 * det_prod.sqrt() + tr_ab;
    let bloch_form = fidelity_squared_bloch(&a.bloch(), &b.bloch());
    if (matrix_form - bloch_form).abs() > 1e-12 {
        return Err(Error::contract(format!(
            "fidelity routes disagree: matrix {matrix_form} vs Bloch {bloch_form}"
        )));
    }
    Ok(matrix_form.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::C_ZERO;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn complex(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bloch_to_matrix_examples() {
        let center = bloch_to_matrix(&BlochVector::zero());
        assert!(center.matrix().max_abs_diff(&Mat2::identity().scale(complex(0.5, 0.0))) < 1e-15);

        let pole = bloch_to_matrix(&BlochVector::new(0.0, 0.0, 1.0).unwrap());
        let expect = Mat2([[complex(1.0, 0.0), C_ZERO], [C_ZERO, C_ZERO]]);
        assert!(pole.matrix().max_abs_diff(&expect) < 1e-15);

        let plus = bloch_to_matrix(&BlochVector::new(1.0, 0.0, 0.0).unwrap());
        let expect = Mat2([
            [complex(0.5, 0.0), complex(0.5, 0.0)],
            [complex(0.5, 0.0), complex(0.5, 0.0)],
        ]);
        assert!(plus.matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn length_clamp_and_rejection() {
        let near = BlochVector::new(1.0 + 0.5 * LENGTH_EPS, 0.0, 0.0).unwrap();
        assert!((near.length() - 1.0).abs() < 1e-15);
        assert!(BlochVector::new(1.0 + 10.0 * LENGTH_EPS, 0.0, 0.0).is_err());
        assert!(BlochVector::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn matrix_to_bloch_examples() {
        let half_i = DensityMatrix2::from_matrix(Mat2([
            [complex(0.5, 0.0), C_ZERO],
            [C_ZERO, complex(0.5, 0.0)],
        ]))
        .unwrap();
        assert_eq!(half_i.bloch().components(), [0.0, 0.0, 0.0]);

        let diag = DensityMatrix2::from_matrix(Mat2([
            [complex(0.75, 0.0), C_ZERO],
            [C_ZERO, complex(0.25, 0.0)],
        ]))
        .unwrap();
        let v = diag.bloch();
        assert!((v.z() - 0.5).abs() < 1e-15 && v.x().abs() < 1e-15 && v.y().abs() < 1e-15);

        let plus = DensityMatrix2::from_matrix(Mat2([
            [complex(0.5, 0.0), complex(0.5, 0.0)],
            [complex(0.5, 0.0), complex(0.5, 0.0)],
        ]))
        .unwrap();
        assert!((plus.bloch().x() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_matrix_rejects_invalid_entries() {
        let non_herm = Mat2([
            [complex(0.5, 0.0), complex(0.5, 0.2)],
            [complex(0.5, 0.2), complex(0.5, 0.0)],
        ]);
        assert!(matches!(
            DensityMatrix2::from_matrix(non_herm),
            Err(Error::InvalidState(_))
        ));

        let bad_trace = Mat2([[complex(0.9, 0.0), C_ZERO], [C_ZERO, complex(0.9, 0.0)]]);
        assert!(DensityMatrix2::from_matrix(bad_trace).is_err());

        // Hermitian, trace 1, but indefinite
        let indefinite = Mat2([
            [complex(1.2, 0.0), C_ZERO],
            [C_ZERO, complex(-0.2, 0.0)],
        ]);
        assert!(DensityMatrix2::from_matrix(indefinite).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalues(0.0).unwrap(), (0.5, 0.5));
        assert_eq!(eigenvalues(1.0).unwrap(), (1.0, 0.0));
        let (hi, lo) = eigenvalues(1.0 / 3.0).unwrap();
        assert!((hi - 2.0 / 3.0).abs() < 1e-15 && (lo - 1.0 / 3.0).abs() < 1e-15);
        assert!(eigenvalues(1.2).is_err());
        assert!(eigenvalues(-0.1).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!((entropy_phi(0.0).unwrap().bits() - 1.0).abs() < 1e-15);
        assert!(entropy_phi(1.0).unwrap().bits().abs() < 1e-15);
        // H2(1/4) = 2 - (3/4) log2 3
        assert!((entropy_phi(0.5).unwrap().bits() - 0.811278124459133).abs() < 1e-12);
        assert!(entropy_phi(1.5).is_err());
    }

    #[test]
    fn coherence_examples() {
        let diag = DensityMatrix2::from_matrix(Mat2([
            [complex(0.75, 0.0), C_ZERO],
            [C_ZERO, complex(0.25, 0.0)],
        ]))
        .unwrap();
        assert!(rel_entropy_coherence(&diag).bits().abs() < 1e-15);

        let pure_x = bloch_to_matrix(&BlochVector::new(1.0, 0.0, 0.0).unwrap());
        assert!((rel_entropy_coherence(&pure_x).bits() - 1.0).abs() < 1e-12);

        let half_x = bloch_to_matrix(&BlochVector::new(0.5, 0.0, 0.0).unwrap());
        assert!((rel_entropy_coherence(&half_x).bits() - 0.188721875540867).abs() < 1e-12);
    }

    #[test]
    fn fidelity_examples() {
        let a = bloch_to_matrix(&BlochVector::new(0.0, 0.0, 1.0).unwrap());
        assert!((fidelity_squared(&a, &a).unwrap() - 1.0).abs() < 1e-12);

        let mixed = bloch_to_matrix(&BlochVector::zero());
        assert!((fidelity_squared(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);

        let px = bloch_to_matrix(&BlochVector::new(1.0, 0.0, 0.0).unwrap());
        let mx = bloch_to_matrix(&BlochVector::new(-1.0, 0.0, 0.0).unwrap());
        assert!(fidelity_squared(&px, &mx).unwrap().abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn round_trip_bloch(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
            let len2 = x * x + y * y + z * z;
            prop_assume!(len2 <= 1.0);
            let v = BlochVector::new(x, y, z).unwrap();
            let back = matrix_to_bloch(&bloch_to_matrix(&v));
            prop_assert!((back.x() - v.x()).abs() < 1e-12);
            prop_assert!((back.y() - v.y()).abs() < 1e-12);
            prop_assert!((back.z() - v.z()).abs() < 1e-12);
        }

        #[test]
        fn spectrum_and_entropy_consistency(x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
            let len2 = x * x + y * y + z * z;
            prop_assume!(len2 <= 1.0);
            let v = BlochVector::new(x, y, z).unwrap();
            let m = bloch_to_matrix(&v);
            let (hi, lo) = m.eigenvalues();
            let (ehi, elo) = eigenvalues(v.length()).unwrap();
            prop_assert!((hi - ehi).abs() < 1e-12);
            prop_assert!((lo - elo).abs() < 1e-12);
            prop_assert!((m.entropy().bits() - entropy_phi(v.length()).unwrap().bits()).abs() < 1e-10);
        }

        #[test]
        fn fidelity_symmetric_unit_range(
            ax in -0.57f64..0.57, ay in -0.57f64..0.57, az in -0.57f64..0.57,
            bx in -0.57f64..0.57, by in -0.57f64..0.57, bz in -0.57f64..0.57,
        ) {
            let a = bloch_to_matrix(&BlochVector::new(ax, ay, az).unwrap());
            let b = bloch_to_matrix(&BlochVector::new(bx, by, bz).unwrap());
            let f_ab = fidelity_squared(&a, &b).unwrap();
            let f_ba = fidelity_squared(&b, &a).unwrap();
            prop_assert!((f_ab - f_ba).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&f_ab));
        }
    }
}

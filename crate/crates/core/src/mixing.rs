//! The two mixing rules and the entropy curves they induce.
//!
//! The classical rule is the convex combination of states. The quantum
//! rule conjugates rho1 (x) rho2 by the partial-swap unitary
//! U_t = sqrt(t) I + sqrt(1-t) iS and traces out either factor, which in
//! Bloch form adds a cross-product twist to the convex combination.

use crate::bloch::{phi_unchecked, BlochVector, DensityMatrix2};
use crate::error::{Error, Result};
use crate::matrix::{C64, Mat2, Mat4};

fn check_weight(w: f64, role: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::domain(format!("{role} {w} outside [0, 1]")));
    }
    Ok(())
}

/// Convex combination w a + (1 - w) b of two states in Bloch form.
pub fn mix_weighted(a: &BlochVector, b: &BlochVector, w: f64) -> Result<BlochVector> {
    check_weight(w, "mixing weight")?;
    BlochVector::new(
        w * a.x() + (1.0 - w) * b.x(),
        w * a.y() + (1.0 - w) * b.y(),
        w * a.z() + (1.0 - w) * b.z(),
    )
}

/// Two-qubit partial-swap unitary; t = 1 is the identity, t = 0 is iS.
#[derive(Debug, Clone)]
pub struct PartialSwapUnitary {
    t: f64,
    m: Mat4,
}

impl PartialSwapUnitary {
    pub fn new(t: f64) -> Result<Self> {
        check_weight(t, "swap parameter")?;
        let id = Mat4::identity().scale(C64::new(t.sqrt(), 0.0));
        let swap = Mat4::swap().scale(C64::new(0.0, (1.0 - t).sqrt()));
        Ok(PartialSwapUnitary {
            t,
            m: id.add(&swap),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }
}

pub fn partial_swap_unitary(t: f64) -> Result<PartialSwapUnitary> {
    PartialSwapUnitary::new(t)
}

/// Quantum mixture by definition: conjugate rho1 (x) rho2 by U_t and
/// trace out the second factor.
pub fn channel_et(a: &DensityMatrix2, b: &DensityMatrix2, t: f64) -> Result<DensityMatrix2> {
    let u = PartialSwapUnitary::new(t)?;
    let joint = Mat2::kron(a.matrix(), b.matrix());
    let conjugated = u.matrix().mul(&joint).mul(&u.matrix().adjoint());
    DensityMatrix2::from_matrix(conjugated.ptrace_second())
}

/// Quantum mixture in closed form:
/// t a + (1 - t) b - i sqrt(t (1 - t)) [a, b].
pub fn channel_et_closed_form(
    a: &DensityMatrix2,
    b: &DensityMatrix2,
    t: f64,
) -> Result<DensityMatrix2> {
    check_weight(t, "swap parameter")?;
    let convex = a
        .matrix()
        .scale(C64::new(t, 0.0))
        .add(&b.matrix().scale(C64::new(1.0 - t, 0.0)));
    let twist = Mat2::commutator(a.matrix(), b.matrix())
        .scale(C64::new(0.0, -(t * (1.0 - t)).sqrt()));
    DensityMatrix2::from_matrix(convex.add(&twist))
}

/// Quantum mixture on Bloch vectors:
/// w a + (1 - w) b + sqrt(w (1 - w)) a x b.
pub fn quantum_add_bloch(a: &BlochVector, b: &BlochVector, w: f64) -> Result<BlochVector> {
    check_weight(w, "mixing weight")?;
    let cross = a.cross(b);
    let twist = (w * (1.0 - w)).sqrt();
    BlochVector::new(
        w * a.x() + (1.0 - w) * b.x() + twist * cross[0],
        w * a.y() + (1.0 - w) * b.y() + twist * cross[1],
        w * a.z() + (1.0 - w) * b.z() + twist * cross[2],
    )
}

/// Output Bloch radii of the quantum mixture as a function of the weight,
/// reduced to the invariants (r1, r2, angle between the inputs).
///
/// `radii(t)` returns (|E_t(a, b)|, |E_t(b, a)|); only lengths enter the
/// entropies, so the curve never needs the vectors themselves.
#[derive(Debug, Clone, Copy)]
pub struct MixCurve {
    r1: f64,
    r2: f64,
    theta: f64,
    alpha: f64,
}

impl MixCurve {
    pub fn new(r1: f64, r2: f64, theta: f64) -> Result<Self> {
        for (r, role) in [(r1, "first radius"), (r2, "second radius")] {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::domain(format!("{role} {r} outside [0, 1]")));
            }
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::domain(format!("angle {theta} outside [0, pi]")));
        }
        let sin = theta.sin();
        let alpha = 2.0 * r1 * r2 * theta.cos() + r1 * r1 * r2 * r2 * sin * sin;
        Ok(MixCurve {
            r1,
            r2,
            theta,
            alpha,
        })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn quadratic(&self, t: f64) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 - self.alpha) * t * t + self.alpha * t
    }

    pub fn radii(&self, t: f64) -> Result<(f64, f64)> {
        check_weight(t, "mixing weight")?;
        let q = self.quadratic(t);
        let sq1 = q - 2.0 * self.r2 * self.r2 * t + self.r2 * self.r2;
        let sq2 = q - 2.0 * self.r1 * self.r1 * t + self.r1 * self.r1;
        // both are squared Bloch lengths; clamp fp drift at the boundaries
        let clamp = |s: f64| s.max(0.0).sqrt().min(1.0);
        Ok((clamp(sq1), clamp(sq2)))
    }

    /// Summed output entropy S(E_t(a,b)) + S(E_t(b,a)) in bits.
    pub fn entropy_sum(&self, t: f64) -> Result<f64> {
        let (r12, r21) = self.radii(t)?;
        Ok(phi_unchecked(r12) + phi_unchecked(r21))
    }

    /// Entropy produced over the inputs: entropy_sum(t) - Phi(r1) - Phi(r2).
    pub fn entropy_gap(&self, t: f64) -> Result<f64> {
        Ok(self.entropy_sum(t)? - phi_unchecked(self.r1) - phi_unchecked(self.r2))
    }
}

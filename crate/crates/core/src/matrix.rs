//! Small fixed-size complex matrices for the two-qubit algebra.
//!
//! Only what the partial-swap channel needs: 2x2 and 4x4 products,
//! adjoints, Kronecker products and the partial trace over the second
//! factor. Everything is plain arrays, no allocation.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const C_ZERO: C64 = Complex64::new(0.0, 0.0);
pub const C_ONE: C64 = Complex64::new(1.0, 0.0);
pub const C_I: C64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat2 {
    pub fn zero() -> Self {
        Mat2([[C_ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.0[0][0] = C_ONE;
        m.0[1][1] = C_ONE;
        m
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C_ZERO;
                for k in 0..2 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// [a, b] = ab - ba
    pub fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
        a.mul(b).sub(&b.mul(a))
    }

    pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.0[i][j] - rhs.0[i][j]).norm());
            }
        }
        d
    }
}

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[C_ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.0[i][i] = C_ONE;
        }
        m
    }

    /// Swap on C^2 (x) C^2: S(|i>|j>) = |j>|i>.
    pub fn swap() -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[2 * j + i][2 * i + j] = C_ONE;
            }
        }
        m
    }

    pub fn mul(&self, rhs: &Mat4) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C_ZERO;
                for k in 0..4 {
                    acc += self.0[i][k] * rhs.0[k][j];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat4) -> Mat4 {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Mat4 {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    /// Trace out the second qubit: (Tr_2 M)_{ij} = sum_k M_{(i,k),(j,k)}.
    pub fn ptrace_second(&self) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C_ZERO;
                for k in 0..2 {
                    acc += self.0[2 * i + k][2 * j + k];
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn max_abs_diff(&self, rhs: &Mat4) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - rhs.0[i][j]).norm());
            }
        }
        d
    }
}

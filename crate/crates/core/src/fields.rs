//! Semi-complete vector fields vanishing at the origin.
//!
//! Every field here has the form `f(z) = z p(z)` with
//! `p(z) = (q + conj(q) ω(z)) / (1 − ω(z))`, `Re q > 0` and ω a Schwarz
//! function, so `f(0) = 0`, `f'(0) = q` and `Re p > 0` on the disk.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::schwarz::SchwarzSpec;
use crate::Series;

/// Tolerance for grid checks on `Re p`.
pub const GRID_TOL: f64 = 1e-9;

const POLE_TOL: f64 = 1e-14;
const GRID_RADIUS: f64 = 0.999;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorFieldSpec {
    q: Complex64,
    omega: SchwarzSpec,
}

impl VectorFieldSpec {
    pub fn new(q: Complex64, omega: SchwarzSpec) -> Result<Self> {
        if !(q.re > 0.0) || !q.im.is_finite() {
            return Err(Error::InvalidParameter(format!("Re q must be positive, got q = {q}")));
        }
        Ok(Self { q, omega })
    }

    /// The linear field `f(z) = q z`.
    pub fn linear(q: Complex64) -> Result<Self> {
        Self::new(q, SchwarzSpec::zero())
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn omega(&self) -> &SchwarzSpec {
        &self.omega
    }

    /// `p(z) = f(z)/z`, with `p(0) = q`.
    pub fn eval_p(&self, z: Complex64) -> Result<Complex64> {
        let w = self.omega.eval(z);
        let den = Complex64::one() - w;
        if den.norm() < POLE_TOL {
            return Err(Error::PoleOnDisk(z.to_string()));
        }
        Ok((self.q + self.q.conj() * w) / den)
    }

    pub fn eval_field(&self, z: Complex64) -> Result<Complex64> {
        Ok(z * self.eval_p(z)?)
    }

    /// `f(z)` and `f'(z)`.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (w, dw) = self.omega.eval_with_derivative(z);
        let den = Complex64::one() - w;
        if den.norm() < POLE_TOL {
            return Err(Error::PoleOnDisk(z.to_string()));
        }
        let p = (self.q + self.q.conj() * w) / den;
        let dp = 2.0 * self.q.re * dw / (den * den);
        Ok((z * p, p + z * dp))
    }

    /// Taylor coefficients of `f` through `z^order`.
    pub fn field_series(&self, order: usize) -> Series {
        let omega = self.omega.to_series(order);
        let one = Series::constant(Complex64::one(), order);
        let num = &Series::constant(self.q, order) + &omega.scale(&self.q.conj());
        let den = (&one - &omega).reciprocal().expect("1 - ω has unit constant term");
        (&num * &den).shift_up()
    }

    /// `F = Id + r f`.
    pub fn make_f(&self, r: f64, order: usize) -> Series {
        let f = self.field_series(order);
        &Series::identity(order) + &f.scale(&Complex64::new(r, 0.0))
    }

    /// `true` iff `Re p ≥ −1e-9` on a polar grid of `grid` radii up to
    /// 0.999 and `2 · grid` angles, plus the origin.
    pub fn berkson_porta_check(&self, grid: usize) -> bool {
        if self.q.re < -GRID_TOL {
            return false;
        }
        let grid = grid.max(1);
        let angles = 2 * grid;
        (1..=grid).all(|i| {
            let radius = GRID_RADIUS * i as f64 / grid as f64;
            (0..angles).all(|j| {
                let z = Complex64::from_polar(radius, TAU * j as f64 / angles as f64);
                matches!(self.eval_p(z), Ok(p) if p.re >= -GRID_TOL)
            })
        })
    }
}

impl fmt::Display for VectorFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}{:+}i, omega={}", self.q.re, self.q.im, self.omega)
    }
}

/// The three extremal fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    F1,
    F2,
    F3,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::F1, Family::F2, Family::F3];

    /// Catalog family a field belongs to, with the degenerate Möbius cases
    /// (`|ρ| = 1` is f1, `ρ = 0` is f2) folded in.
    pub fn of(field: &VectorFieldSpec) -> Option<Family> {
        match field.omega() {
            SchwarzSpec::Rotation { .. } => Some(Family::F1),
            SchwarzSpec::SquareRotation { .. } => Some(Family::F2),
            SchwarzSpec::MobiusFactor { rho, .. } => {
                let m = rho.norm();
                if (m - 1.0).abs() < 1e-12 {
                    Some(Family::F1)
                } else if m < 1e-12 {
                    Some(Family::F2)
                } else {
                    Some(Family::F3)
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
        };
        f.write_str(s)
    }
}

/// Builds f1 (rotation), f2 (square rotation) or f3 (Möbius factor).
pub fn catalog(kind: Family, q: Complex64, theta: f64, rho_m: Option<Complex64>) -> Result<VectorFieldSpec> {
    let omega = match kind {
        Family::F1 => SchwarzSpec::Rotation { theta },
        Family::F2 => SchwarzSpec::SquareRotation { theta },
        Family::F3 => SchwarzSpec::mobius(rho_m.ok_or(Error::MissingParameter("rho_m"))?, theta)?,
    };
    VectorFieldSpec::new(q, omega)
}

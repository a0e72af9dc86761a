//! Nonlinear resolvents `G_r = (Id + r f)⁻¹`.
//!
//! Three independent routes: series reversion of `F = Id + r f`, pointwise
//! Newton iteration on `w + r f(w) = z`, and the closed forms available for
//! the rotation family.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::VectorFieldSpec;
use crate::Series;

pub const NEWTON_MAX_ITER: usize = 100;
const NEWTON_DAMPING: f64 = 0.5;
const NEWTON_RADIUS: f64 = 0.999;
const BRANCH_STEPS: usize = 64;
const BRANCH_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolventSpec {
    r: f64,
    field: VectorFieldSpec,
}

impl ResolventSpec {
    pub fn new(r: f64, field: VectorFieldSpec) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!("r must be positive, got {r}")));
        }
        Ok(Self { r, field })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn field(&self) -> &VectorFieldSpec {
        &self.field
    }

    /// Taylor coefficients of `G_r` through `z^order`.
    pub fn resolvent_series(&self, order: usize) -> Result<Series> {
        self.field.make_f(self.r, order).revert()
    }

    /// Solves `w + r f(w) = z` by Newton's method from `z / (1 + r q)`.
    ///
    /// An iterate that lands outside the disk of radius 0.999 is replaced by
    /// a half step, then projected back onto that circle if still outside.
    pub fn resolvent_point(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("|z| must be < 1, got {}", z.norm())));
        }
        let r = self.r;
        let mut w = z / (1.0 + r * self.field.q());
        let mut residual = f64::INFINITY;
        for _ in 0..NEWTON_MAX_ITER {
            let (f, df) = self.field.eval_with_derivative(w)?;
            let g = w + r * f - z;
            residual = g.norm();
            if residual < tol && w.norm() < 1.0 {
                return Ok(w);
            }
            let step = g / (1.0 + r * df);
            let mut next = w - step;
            if next.norm() > NEWTON_RADIUS {
                next = w - NEWTON_DAMPING * step;
                if next.norm() > NEWTON_RADIUS {
                    next *= NEWTON_RADIUS / next.norm();
                }
            }
            w = next;
        }
        Err(Error::NoConvergence {
            iterations: NEWTON_MAX_ITER,
            residual,
        })
    }

    /// `true` iff Newton converges inside the disk at every point of a
    /// polar grid (`grid` radii up to 0.99, `2 · grid` angles).
    pub fn range_condition_probe(&self, grid: usize) -> bool {
        let grid = grid.max(1);
        let angles = 2 * grid;
        (1..=grid).all(|i| {
            let radius = 0.99 * i as f64 / grid as f64;
            (0..angles).all(|j| {
                let z = Complex64::from_polar(radius, TAU * j as f64 / angles as f64);
                matches!(self.resolvent_point(z, 1e-12), Ok(w) if w.norm() < 1.0)
            })
        })
    }
}

/// Principal square root of `h(z)`, continued along `t ↦ t z` from `seed`
/// at `t = 0` by picking at each step the sign closest to the previous value.
fn tracked_sqrt(h: impl Fn(Complex64) -> Complex64, z: Complex64, seed: Complex64) -> Result<Complex64> {
    let mut prev = seed;
    for step in 1..=BRANCH_STEPS {
        let t = step as f64 / BRANCH_STEPS as f64;
        let s = h(z * t).sqrt();
        if s.norm() < BRANCH_TOL {
            return Err(Error::BranchAmbiguity);
        }
        prev = if (s - prev).norm() <= (s + prev).norm() { s } else { -s };
    }
    Ok(prev)
}

/// Resolvent of f1 in closed form,
/// `2z / (z e^{iθ} + rq + 1 + √((z e^{iθ} − 1 − rq)² + 8 r z e^{iθ} Re q))`.
pub fn closed_form_f1(q: Complex64, r: f64, theta: f64, z: Complex64) -> Result<Complex64> {
    let e = Complex64::cis(theta);
    let beta = 1.0 + r * q;
    let radicand = |x: Complex64| {
        let ex = x * e;
        (ex - beta) * (ex - beta) + 8.0 * r * ex * q.re
    };
    let root = tracked_sqrt(radicand, z, beta)?;
    Ok(2.0 * z / (z * e + beta + root))
}

/// Inverse of `F(z) = z ψ(e^{iθ} z)` for `ψ(z) = β + α z/(1 − z)`,
/// `2z / (β + z e^{iθ} + √((β − z e^{iθ})² + 4 α e^{iθ} z))`.
pub fn closed_form_halfplane(alpha: Complex64, beta: Complex64, theta: f64, z: Complex64) -> Result<Complex64> {
    if alpha.is_zero() || !((beta / alpha).re > 0.0) {
        return Err(Error::InvalidParameter(
            "half-plane map needs Re(beta/alpha) > 0".into(),
        ));
    }
    let e = Complex64::cis(theta);
    let radicand = |x: Complex64| {
        let ex = x * e;
        (beta - ex) * (beta - ex) + 4.0 * alpha * ex
    };
    let root = tracked_sqrt(radicand, z, beta)?;
    Ok(2.0 * z / (beta + z * e + root))
}

/// `G_r(z)` for each `r` in `r_list`.
pub fn limit_probe(field: &VectorFieldSpec, z: Complex64, r_list: &[f64]) -> Result<Vec<Complex64>> {
    r_list
        .iter()
        .map(|&r| ResolventSpec::new(r, field.clone())?.resolvent_point(z, 1e-13))
        .collect()
}

/// First `count` Taylor coefficients of `g` from `points` samples on the
/// circle of the given radius (discrete Cauchy integral).
pub fn cauchy_coefficients(
    g: impl Fn(Complex64) -> Result<Complex64>,
    count: usize,
    radius: f64,
    points: usize,
) -> Result<Vec<Complex64>> {
    let samples = (0..points)
        .map(|j| g(Complex64::from_polar(radius, TAU * j as f64 / points as f64)))
        .collect::<Result<Vec<_>>>()?;
    Ok((0..count)
        .map(|k| {
            let sum = samples.iter().enumerate().fold(Complex64::zero(), |acc, (j, s)| {
                acc + s * Complex64::cis(-TAU * (j * k) as f64 / points as f64)
            });
            sum / (points as f64 * radius.powi(k as i32))
        })
        .collect())
}

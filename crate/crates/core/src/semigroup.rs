//! The flow `∂u/∂t + f(u) = 0`, `u(0) = z`, integrated with the classical
//! fourth-order Runge–Kutta scheme at a fixed step.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::VectorFieldSpec;
use crate::resolvents::ResolventSpec;

/// Default resolution of the fixed-step integrator.
pub const STEPS_PER_UNIT_TIME: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub origin: Complex64,
    pub times: Vec<f64>,
    pub points: Vec<Complex64>,
}

impl Trajectory {
    pub fn last(&self) -> Complex64 {
        *self.points.last().expect("trajectory holds the initial point")
    }

    /// `|u|` never grows by more than `slack` between consecutive samples.
    pub fn is_modulus_nonincreasing(&self, slack: f64) -> bool {
        self.points.windows(2).all(|w| w[1].norm() <= w[0].norm() + slack)
    }
}

/// Integrates `u' = −f(u)` from `z0` over `[0, t_end]` in `steps` steps.
pub fn integrate(field: &VectorFieldSpec, z0: Complex64, t_end: f64, steps: usize) -> Result<Trajectory> {
    if !(z0.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|z0| must be < 1, got {}", z0.norm())));
    }
    if !(t_end > 0.0) || steps == 0 {
        return Err(Error::InvalidParameter("need T > 0 and at least one step".into()));
    }
    let h = t_end / steps as f64;
    let rhs = |u: Complex64| field.eval_field(u).map(|f| -f);
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(z0);
    let mut u = z0;
    for i in 0..steps {
        let k1 = rhs(u)?;
        let k2 = rhs(u + 0.5 * h * k1)?;
        let k3 = rhs(u + 0.5 * h * k2)?;
        let k4 = rhs(u + h * k3)?;
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let t = (i + 1) as f64 * h;
        if !(u.norm() < 1.0) {
            return Err(Error::StepEscapedDisk { t });
        }
        times.push(t);
        points.push(u);
    }
    Ok(Trajectory {
        origin: z0,
        times,
        points,
    })
}

/// Number of steps the default resolution uses for a horizon `t_end`.
pub fn default_steps(t_end: f64) -> usize {
    ((t_end * STEPS_PER_UNIT_TIME as f64).ceil() as usize).max(1)
}

/// `u(T, z0)` at the default resolution.
pub fn flow(field: &VectorFieldSpec, z0: Complex64, t_end: f64) -> Result<Complex64> {
    if t_end == 0.0 {
        return Ok(z0);
    }
    Ok(integrate(field, z0, t_end, default_steps(t_end))?.last())
}

/// `max |u(T, z)|` over the grid.
pub fn denjoy_wolff_probe(field: &VectorFieldSpec, z_grid: &[Complex64], t_end: f64) -> Result<f64> {
    z_grid
        .iter()
        .map(|&z| flow(field, z, t_end).map(|u| u.norm()))
        .try_fold(0.0f64, |acc, m| m.map(|m| acc.max(m)))
}

/// Residual `|G_r(z) + r f(G_r(z)) − z|` of the Newton resolvent.
pub fn resolvent_vs_flow_consistency(spec: &ResolventSpec, z: Complex64) -> Result<f64> {
    let w = spec.resolvent_point(z, 1e-14)?;
    Ok((w + spec.r() * spec.field().eval_field(w)? - z).norm())
}

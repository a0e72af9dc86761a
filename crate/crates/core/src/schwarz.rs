//! Schwarz-class functions: holomorphic self-maps of the unit disk fixing 0.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Series;

/// Slack allowed on `|ω| ≤ 1` and `|ω(z)| ≤ |z|` checks.
pub const SCHWARZ_TOL: f64 = 1e-9;

const RAW_GRID_RADII: usize = 64;
const RAW_GRID_ANGLES: usize = 256;
const RAW_GRID_RADIUS: f64 = 0.999;

/// Radius of the disk from which random Blaschke zeros are drawn.
pub const SAMPLE_ZERO_RADIUS: f64 = 0.95;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchwarzSpec {
    /// `ω(z) = e^{iθ} z`
    Rotation { theta: f64 },
    /// `ω(z) = e^{iθ} z²`
    SquareRotation { theta: f64 },
    /// `ω(z) = z (ρ + e^{iθ} z) / (1 + conj(ρ) e^{iθ} z)` with `|ρ| ≤ 1`.
    MobiusFactor { rho: Complex64, theta: f64 },
    /// `ω(z) = u · z · ∏ (z − a_j) / (1 − conj(a_j) z)`, `|a_j| < 1`, `|u| = 1`.
    Blaschke {
        zeros: Vec<Complex64>,
        unimodular: Complex64,
    },
    /// Explicit Taylor polynomial. Build through [`SchwarzSpec::raw`] to get
    /// the self-map check; constructing the variant directly skips it.
    #[serde(serialize_with = "serialize_series")]
    Raw(Series),
}

fn serialize_series<S: serde::Serializer>(series: &Series, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<(f64, f64)> = series.coeffs().iter().map(|c| (c.re, c.im)).collect();
    serializer.collect_seq(pairs)
}

impl SchwarzSpec {
    /// The constant map `ω ≡ 0`.
    pub fn zero() -> Self {
        SchwarzSpec::Raw(Series::zero(1))
    }

    pub fn mobius(rho: Complex64, theta: f64) -> Result<Self> {
        if !(rho.norm() <= 1.0 + SCHWARZ_TOL) {
            return Err(Error::InvalidSchwarz(format!("|rho| = {} exceeds 1", rho.norm())));
        }
        Ok(SchwarzSpec::MobiusFactor { rho, theta })
    }

    pub fn blaschke(zeros: Vec<Complex64>, unimodular: Complex64) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidSchwarz(format!("Blaschke zero {a} outside the disk")));
        }
        if !((unimodular.norm() - 1.0).abs() <= SCHWARZ_TOL) {
            return Err(Error::InvalidSchwarz("Blaschke factor is not unimodular".into()));
        }
        Ok(SchwarzSpec::Blaschke { zeros, unimodular })
    }

    /// Validates a raw Taylor polynomial: `c_0 = 0` and `|ω| ≤ 1` on a
    /// 64 × 256 polar grid reaching radius 0.999.
    pub fn raw(series: Series) -> Result<Self> {
        if series.coeff(0).norm() > 1e-14 {
            return Err(Error::InvalidSchwarz("nonzero constant term".into()));
        }
        for i in 1..=RAW_GRID_RADII {
            let radius = RAW_GRID_RADIUS * i as f64 / RAW_GRID_RADII as f64;
            for j in 0..RAW_GRID_ANGLES {
                let z = Complex64::from_polar(radius, TAU * j as f64 / RAW_GRID_ANGLES as f64);
                let w = series.evaluate(&z).norm();
                if w > 1.0 + SCHWARZ_TOL {
                    return Err(Error::InvalidSchwarz(format!("|ω({z})| = {w} exceeds 1")));
                }
            }
        }
        Ok(SchwarzSpec::Raw(series))
    }

    /// Value and derivative of ω at `z`.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        match self {
            SchwarzSpec::Rotation { theta } => {
                let e = Complex64::cis(*theta);
                (e * z, e)
            }
            SchwarzSpec::SquareRotation { theta } => {
                let e = Complex64::cis(*theta);
                (e * z * z, 2.0 * e * z)
            }
            SchwarzSpec::MobiusFactor { rho, theta } => {
                let e = Complex64::cis(*theta);
                let num = rho + e * z;
                let den = Complex64::one() + rho.conj() * e * z;
                let m = num / den;
                let dm = (e * den - num * rho.conj() * e) / (den * den);
                (z * m, m + z * dm)
            }
            SchwarzSpec::Blaschke { zeros, unimodular } => {
                let mut value = unimodular * z;
                let mut deriv = *unimodular;
                for a in zeros {
                    let den = Complex64::one() - a.conj() * z;
                    let factor = (z - a) / den;
                    let dfactor = (1.0 - a.norm_sqr()) / (den * den);
                    deriv = deriv * factor + value * dfactor;
                    value *= factor;
                }
                (value, deriv)
            }
            SchwarzSpec::Raw(series) => series.evaluate_with_derivative(&z),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_with_derivative(z).0
    }

    /// Taylor coefficients of ω through `z^order`.
    pub fn to_series(&self, order: usize) -> Series {
        match self {
            SchwarzSpec::Rotation { theta } => Series::new(vec![Complex64::zero(), Complex64::cis(*theta)], order),
            SchwarzSpec::SquareRotation { theta } => Series::new(
                vec![Complex64::zero(), Complex64::zero(), Complex64::cis(*theta)],
                order,
            ),
            SchwarzSpec::MobiusFactor { rho, theta } => {
                let e = Complex64::cis(*theta);
                let num = Series::new(vec![*rho, e], order);
                let den = Series::new(vec![Complex64::one(), rho.conj() * e], order);
                let quotient = &num * &den.reciprocal().expect("denominator has unit constant term");
                quotient.shift_up()
            }
            SchwarzSpec::Blaschke { zeros, unimodular } => {
                let mut acc = Series::new(vec![Complex64::zero(), *unimodular], order);
                for a in zeros {
                    let num = Series::new(vec![-a, Complex64::one()], order);
                    let den = Series::new(vec![Complex64::one(), -a.conj()], order);
                    let factor = &num * &den.reciprocal().expect("denominator has unit constant term");
                    acc = &acc * &factor;
                }
                acc
            }
            SchwarzSpec::Raw(series) => {
                if series.order() >= order {
                    series.truncate(order)
                } else {
                    Series::new(series.coeffs().to_vec(), order)
                }
            }
        }
    }

    /// First two Taylor coefficients `(c_1, c_2)`.
    pub fn c1_c2(&self) -> (Complex64, Complex64) {
        match self {
            SchwarzSpec::Rotation { theta } => (Complex64::cis(*theta), Complex64::zero()),
            SchwarzSpec::SquareRotation { theta } => (Complex64::zero(), Complex64::cis(*theta)),
            SchwarzSpec::MobiusFactor { rho, theta } => (*rho, (1.0 - rho.norm_sqr()) * Complex64::cis(*theta)),
            _ => {
                let s = self.to_series(2);
                (s.coeff(1), s.coeff(2))
            }
        }
    }

    /// `true` iff `|ω(z)| ≤ |z| + 1e-9` on a polar grid with `grid_size`
    /// radii in `(0, 0.999]` and `2 · grid_size` angles.
    pub fn schwarz_pick_check(&self, grid_size: usize) -> bool {
        let grid_size = grid_size.max(1);
        let angles = 2 * grid_size;
        (1..=grid_size).all(|i| {
            let radius = RAW_GRID_RADIUS * i as f64 / grid_size as f64;
            (0..angles).all(|j| {
                let z = Complex64::from_polar(radius, TAU * j as f64 / angles as f64);
                self.eval(z).norm() <= radius + SCHWARZ_TOL
            })
        })
    }
}

impl fmt::Display for SchwarzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchwarzSpec::Rotation { theta } => write!(f, "rotation(theta={theta})"),
            SchwarzSpec::SquareRotation { theta } => write!(f, "square(theta={theta})"),
            SchwarzSpec::MobiusFactor { rho, theta } => {
                write!(f, "mobius(rho={}{:+}i, theta={theta})", rho.re, rho.im)
            }
            SchwarzSpec::Blaschke { zeros, .. } => write!(f, "blaschke(degree={})", zeros.len() + 1),
            SchwarzSpec::Raw(s) if s.coeffs().iter().all(|c| c.is_zero()) => write!(f, "zero"),
            SchwarzSpec::Raw(s) => write!(f, "raw(order={})", s.order()),
        }
    }
}

/// Random finite Blaschke product of total degree in `1..=max_degree`.
///
/// The `z` factor counts towards the degree, so degree 1 is a rotation.
/// Extra zeros are uniform on the disk of radius 0.95 and the unimodular
/// factor is uniform on the circle. Deterministic per seed.
pub fn sample(rng_seed: u64, max_degree: usize) -> SchwarzSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    sample_with(&mut rng, max_degree)
}

pub fn sample_with<R: Rng>(rng: &mut R, max_degree: usize) -> SchwarzSpec {
    assert!(max_degree >= 1, "max_degree must be at least 1");
    let degree = rng.gen_range(1..=max_degree);
    let zeros = (1..degree)
        .map(|_| {
            let radius = SAMPLE_ZERO_RADIUS * rng.gen::<f64>().sqrt();
            Complex64::from_polar(radius, rng.gen_range(0.0..TAU))
        })
        .collect();
    SchwarzSpec::Blaschke {
        zeros,
        unimodular: Complex64::cis(rng.gen_range(0.0..TAU)),
    }
}

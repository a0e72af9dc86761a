//! Coefficient functionals and the closed forms they take over inverses of
//! half-plane subordinate maps.
//!
//! For `ψ(z) = β + α z / (1 − z)` and `F(z) = z ψ(ω(z))` with
//! `ω = c_1 z + c_2 z² + ...`, the inverse `G = F⁻¹ = Σ b_k z^k` has
//! `b_1 = 1/β`, `b_2 = −α c_1 / β³` and
//! `b_3 = α ((2α − β) c_1² − β c_2) / β⁵`. Nonlinear resolvents are the case
//! `α = 2 r Re q`, `β = 1 + r q`.
//!
//! The rational closed forms are generic over the scalar so they can be
//! evaluated exactly on rationals.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{Scalar, TruncatedSeries};

/// Equality band used by the λ-partition predicates.
pub const REGION_BAND: f64 = 1e-12;

/// `k = (1/2)(4/5)^5`, the maximum of `2r/(1+r)^5`.
pub const K_UNION: f64 = 0.16384;

#[derive(Clone, Debug, PartialEq)]
pub struct HalfPlaneMap<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
}

impl<T: Scalar> HalfPlaneMap<T> {
    /// Requires `Re(β/α) > 0`.
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        if alpha.is_zero() || !((beta.clone() / alpha.clone()).re > T::zero()) {
            return Err(Error::InvalidParameter(
                "half-plane map needs Re(beta/alpha) > 0".into(),
            ));
        }
        Ok(Self { alpha, beta })
    }

    /// `ψ` for the resolvents at parameter `r`: `α = 2 r Re q`, `β = 1 + r q`.
    pub fn for_resolvent(q: Complex<T>, r: T) -> Self {
        let two = T::one() + T::one();
        Self {
            alpha: Complex::new(two * r.clone() * q.re.clone(), T::zero()),
            beta: Complex::<T>::one() + q.scale(r),
        }
    }

    /// Taylor coefficients of `ψ`: `β, α, α, ...`.
    pub fn series(&self, order: usize) -> TruncatedSeries<T> {
        let mut coeffs = vec![self.beta.clone()];
        coeffs.extend(std::iter::repeat_n(self.alpha.clone(), order));
        TruncatedSeries::new(coeffs, order)
    }
}

fn pow<T: Scalar>(x: &Complex<T>, n: u32) -> Complex<T> {
    (0..n).fold(Complex::one(), |acc, _| acc * x.clone())
}

/// `a_p` of `F(z) = z ψ(ω(z))`: `α` times the determinant of the
/// `(p−1)×(p−1)` upper Hessenberg Toeplitz matrix with first row
/// `c_1, ..., c_{p−1}` and `−1` on the subdiagonal.
///
/// The determinants `D_n` obey `D_n = Σ_{k=1..n} c_k D_{n−k}`, `D_0 = 1`.
pub fn hessenberg_coefficient<T: Scalar>(alpha: &Complex<T>, c: &[Complex<T>], p: usize) -> Complex<T> {
    assert!(p >= 2, "coefficient index must be at least 2");
    assert!(c.len() >= p - 1, "need c_1 .. c_(p-1)");
    let n = p - 1;
    let mut dets: Vec<Complex<T>> = Vec::with_capacity(n + 1);
    dets.push(Complex::one());
    for m in 1..=n {
        let d = (1..=m).fold(Complex::zero(), |acc, k| acc + c[k - 1].clone() * dets[m - k].clone());
        dets.push(d);
    }
    alpha.clone() * dets[n].clone()
}

pub fn b2_closed<T: Scalar>(psi: &HalfPlaneMap<T>, c1: &Complex<T>) -> Complex<T> {
    -(psi.alpha.clone() * c1.clone() / pow(&psi.beta, 3))
}

pub fn b3_closed<T: Scalar>(psi: &HalfPlaneMap<T>, c1: &Complex<T>, c2: &Complex<T>) -> Complex<T> {
    let HalfPlaneMap { alpha, beta } = psi;
    let two_alpha = alpha.clone() + alpha.clone();
    let bracket = (two_alpha - beta.clone()) * c1.clone() * c1.clone() - beta.clone() * c2.clone();
    alpha.clone() * bracket / pow(beta, 5)
}

/// `Φ(G, λ) = −(α/β⁶) [(β − (2−λ)α) c_1² + β c_2]`.
pub fn phi_closed<T: Scalar>(
    psi: &HalfPlaneMap<T>,
    c1: &Complex<T>,
    c2: &Complex<T>,
    lambda: &Complex<T>,
) -> Complex<T> {
    let HalfPlaneMap { alpha, beta } = psi;
    let two = Complex::<T>::one() + Complex::one();
    let a = beta.clone() - (two - lambda.clone()) * alpha.clone();
    let bracket = a * c1.clone() * c1.clone() + beta.clone() * c2.clone();
    -(alpha.clone() * bracket / pow(beta, 6))
}

/// `Φ(F, λ) = a_1 a_3 − λ a_2² = α [(β − λα) c_1² + β c_2]` for
/// `F = z ψ(ω)`; its modulus is `|β|⁶ |Φ(G, 2 − λ)|`.
pub fn phi_f_closed<T: Scalar>(
    psi: &HalfPlaneMap<T>,
    c1: &Complex<T>,
    c2: &Complex<T>,
    lambda: &Complex<T>,
) -> Complex<T> {
    let HalfPlaneMap { alpha, beta } = psi;
    let a = beta.clone() - lambda.clone() * alpha.clone();
    alpha.clone() * (a * c1.clone() * c1.clone() + beta.clone() * c2.clone())
}

fn require_order<T: Scalar>(h: &TruncatedSeries<T>, needed: usize) -> Result<()> {
    if h.order() < needed {
        return Err(Error::OrderTooLow { needed, got: h.order() });
    }
    Ok(())
}

/// `Φ(h, λ) = h_1 h_3 − λ h_2²`.
pub fn fekete_szego<T: Scalar>(h: &TruncatedSeries<T>, lambda: &Complex<T>) -> Result<Complex<T>> {
    require_order(h, 3)?;
    let (h1, h2, h3) = (h.coeff(1), h.coeff(2), h.coeff(3));
    Ok(h1 * h3 - lambda.clone() * h2.clone() * h2)
}

/// Second Hankel determinant `h_1 h_3 − h_2² = Φ(h, 1)`.
pub fn hankel_h21<T: Scalar>(h: &TruncatedSeries<T>) -> Result<Complex<T>> {
    fekete_szego(h, &Complex::one())
}

/// Schwarzian derivative at the origin, `6 Φ(h, 1) / h_1²`.
pub fn schwarzian_at_zero<T: Scalar>(h: &TruncatedSeries<T>) -> Result<Complex<T>> {
    require_order(h, 3)?;
    let h1 = h.coeff(1);
    if h1.is_zero() {
        return Err(Error::ZeroLinearCoefficient);
    }
    let six = Complex::new(T::one() + T::one() + T::one(), T::zero()).scale(T::one() + T::one());
    Ok(six * hankel_h21(h)? / (h1.clone() * h1))
}

/// `u_q(r)`, `v_q(r) = u w` and `w_q(r)` for the resolvent bounds.
pub fn uvw(q: Complex64, r: f64, lambda: Complex64) -> (f64, f64, f64) {
    let beta = 1.0 + r * q;
    let u = 2.0 * r * q.re / beta.norm().powi(5);
    let w = (beta - 2.0 * (2.0 - lambda) * r * q.re).norm() / beta.norm();
    (u, u * w, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    S1,
    S2,
    S3,
    S4,
    S5,
}

impl Region {
    pub const ALL: [Region; 5] = [Region::S1, Region::S2, Region::S3, Region::S4, Region::S5];
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaClassification {
    pub region: Region,
    pub c: Complex64,
    pub rho_region: f64,
    pub mu: Option<f64>,
}

/// Center `c = 3/2 − (i/2) tan(arg q)` and radius `|q| / (2 Re q)` of the
/// disk that splits the λ-plane.
pub fn region_disk(q: Complex64) -> (Complex64, f64) {
    let tan_arg = q.im / q.re;
    (Complex64::new(1.5, -0.5 * tan_arg), q.norm() / (2.0 * q.re))
}

/// Membership of λ in each of S1..S5, evaluated from the set definitions.
///
/// The two exceptional points `2` and `2 − i tan(arg q)` belong to S3 only.
/// Points within `REGION_BAND` of the circle count as on it; within the
/// band of the line `Re λ = 2` the closed-disk region S2 takes precedence
/// over S1.
pub fn region_predicates(q: Complex64, lambda: Complex64) -> [bool; 5] {
    let (c, rho) = region_disk(q);
    let exceptional = [Complex64::new(2.0, 0.0), Complex64::new(2.0, -q.im / q.re)];
    let dist = (lambda - c).norm();
    let in_open = dist - rho < -REGION_BAND;
    let in_closed = dist - rho <= REGION_BAND;
    let shift = lambda.re - 2.0;
    let on_line = shift.abs() <= REGION_BAND;
    let s3 = exceptional.iter().any(|e| (lambda - e).norm() <= REGION_BAND);
    let s1 = !s3 && shift >= -REGION_BAND && !in_open && !(on_line && in_closed);
    let s2 = !s3 && shift <= REGION_BAND && in_closed;
    let s4 = shift > REGION_BAND && in_open;
    let s5 = shift < -REGION_BAND && !in_closed;
    [s1, s2, s3, s4, s5]
}

/// Places λ in its region of the partition and reports `c`, `ρ` and, for
/// S4 and S5, `μ = (2 − Re λ) / (|λ − c|² − ρ²)`.
pub fn classify_lambda(q: Complex64, lambda: Complex64) -> LambdaClassification {
    let (c, rho) = region_disk(q);
    let fired = region_predicates(q, lambda);
    let region = Region::ALL
        .into_iter()
        .zip(fired)
        .find_map(|(region, hit)| hit.then_some(region))
        .expect("the five regions cover the plane");
    let dist_sq = (lambda - c).norm_sqr();
    let mu = matches!(region, Region::S4 | Region::S5).then(|| (2.0 - lambda.re) / (dist_sq - rho * rho));
    LambdaClassification {
        region,
        c,
        rho_region: rho,
        mu,
    }
}

/// Which of `u`, `v` bounds `|Φ(G_r, λ)|`, decided by comparing
/// `2 − Re λ` with `r Re q (|λ − c|² − ρ²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiCase {
    /// `2 − Re λ` smaller: the bound is `v`, attained by f1.
    CaseA,
    /// `2 − Re λ` larger: the bound is `u`, attained by f2.
    CaseB,
    /// Equal: the bound is `u = v`, attained by f3.
    CaseC,
}

pub fn phi_case(q: Complex64, r: f64, lambda: Complex64) -> PhiCase {
    let (c, rho) = region_disk(q);
    let lhs = 2.0 - lambda.re;
    let rhs = r * q.re * ((lambda - c).norm_sqr() - rho * rho);
    if (lhs - rhs).abs() <= REGION_BAND {
        PhiCase::CaseC
    } else if lhs < rhs {
        PhiCase::CaseA
    } else {
        PhiCase::CaseB
    }
}

/// Sharper bound on `sup_r v_1(r)` for `q = 1` and λ in S1:
/// `k |1 + 2 t_1 (λ − 2)|` with `t_1` the largest root of
/// `t² − (1/3 − 11a/(12b)) t − a/(4b)`, `a = Re(λ − 2)`, `b = |λ − 2|²`.
pub fn improved_s1_bound(lambda: Complex64) -> Result<f64> {
    let region = classify_lambda(Complex64::one(), lambda).region;
    if region != Region::S1 {
        return Err(Error::WrongRegion(region));
    }
    let d = lambda - 2.0;
    let a = d.re;
    let b = d.norm_sqr();
    let s = 1.0 / 3.0 - 11.0 * a / (12.0 * b);
    let t1 = 0.5 * (s + (s * s + a / b).sqrt());
    Ok(K_UNION * (1.0 + 2.0 * t1 * d).norm())
}

/// `|a c_1² + b c_2| / max(|a|, |b|)`; at most 1 for Schwarz functions.
pub fn lemma_ratio(a: Complex64, b: Complex64, c1: Complex64, c2: Complex64) -> f64 {
    (a * c1 * c1 + b * c2).norm() / a.norm().max(b.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    type Cq = Complex<Rational64>;

    fn cq(n: i64, d: i64) -> Cq {
        Complex::new(Rational64::new(n, d), Rational64::zero())
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn psi(alpha: Cq, beta: Cq) -> HalfPlaneMap<Rational64> {
        HalfPlaneMap::new(alpha, beta).unwrap()
    }

    #[test]
    fn hessenberg_low_orders() {
        let alpha = cq(3, 2);
        let cs = [cq(1, 3), cq(-2, 5), cq(7, 4)];
        assert_eq!(hessenberg_coefficient(&alpha, &cs, 2), alpha * cs[0]);
        assert_eq!(hessenberg_coefficient(&alpha, &cs, 3), alpha * (cs[0] * cs[0] + cs[1]));
    }

    #[test]
    fn b2_b3_exact_values() {
        let one = Cq::one();
        let p = psi(one, cq(3, 2));
        assert_eq!(b2_closed(&p, &one), cq(-8, 27));
        assert_eq!(b3_closed(&p, &one, &Cq::zero()), cq(16, 243));
        let p = psi(cq(2, 3), cq(4, 3));
        assert_eq!(b3_closed(&p, &Cq::zero(), &one), cq(-27, 128));
        assert_eq!(b2_closed(&p, &Cq::zero()), Cq::zero());
        assert_eq!(b3_closed(&p, &Cq::zero(), &Cq::zero()), Cq::zero());
    }

    #[test]
    fn resolvent_map_parameters() {
        let p = HalfPlaneMap::for_resolvent(cq(1, 1), Rational64::new(1, 2));
        assert_eq!(p.alpha, cq(1, 1));
        assert_eq!(p.beta, cq(3, 2));
    }

    #[test]
    fn phi_exact_values() {
        let one = Cq::one();
        let two = cq(2, 1);
        let p = psi(one, cq(3, 2));
        assert_eq!(phi_closed(&p, &one, &Cq::zero(), &two), cq(-32, 243));
        assert_eq!(phi_closed(&p, &Cq::zero(), &Cq::zero(), &two), Cq::zero());
        // bracket reduces to β, value −α/β⁵
        assert_eq!(phi_closed(&p, &Cq::zero(), &one, &two), cq(-32, 243));
    }

    #[test]
    fn fekete_szego_examples() {
        let id = TruncatedSeries::<Rational64>::identity(3);
        assert_eq!(fekete_szego(&id, &cq(5, 1)).unwrap(), Cq::zero());
        let h = TruncatedSeries::<Rational64>::new(vec![Cq::zero(), cq(1, 1), cq(1, 1), cq(1, 1)], 3);
        assert_eq!(fekete_szego(&h, &Cq::one()).unwrap(), Cq::zero());
        let g = TruncatedSeries::new(vec![Cq::zero(), cq(2, 3), cq(-8, 27), cq(16, 243)], 3);
        assert_eq!(fekete_szego(&g, &cq(2, 1)).unwrap(), cq(-32, 243));
        assert_eq!(hankel_h21(&g).unwrap(), cq(-32, 729));
        assert!(matches!(
            fekete_szego(&TruncatedSeries::<Rational64>::identity(2), &Cq::one()),
            Err(Error::OrderTooLow { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn hankel_and_schwarzian() {
        let id = TruncatedSeries::<Rational64>::identity(3);
        assert_eq!(hankel_h21(&id).unwrap(), Cq::zero());
        assert_eq!(schwarzian_at_zero(&id).unwrap(), Cq::zero());
        let h = TruncatedSeries::new(vec![Cq::zero(), Cq::one(), Cq::zero(), Cq::one()], 3);
        assert_eq!(hankel_h21(&h).unwrap(), Cq::one());
        assert_eq!(schwarzian_at_zero(&h).unwrap(), cq(6, 1));
        let g = TruncatedSeries::new(vec![Cq::zero(), cq(2, 3), cq(-8, 27), cq(16, 243)], 3);
        assert_eq!(
            schwarzian_at_zero(&g).unwrap(),
            cq(6, 1) * hankel_h21(&g).unwrap() / (cq(2, 3) * cq(2, 3))
        );
        let flat = TruncatedSeries::new(vec![Cq::zero(), Cq::zero(), Cq::one(), Cq::one()], 3);
        assert_eq!(schwarzian_at_zero(&flat), Err(Error::ZeroLinearCoefficient));
    }

    #[test]
    fn phi_f_identity_cases() {
        let p = HalfPlaneMap::new(c(1.3, 0.2), c(0.9, -0.4)).unwrap();
        let lambda = c(0.7, 1.1);
        // c1 = 0, c2 = 1: bracket is β
        let v = phi_f_closed(&p, &Complex64::zero(), &Complex64::one(), &lambda);
        assert!((v.norm() - p.alpha.norm() * p.beta.norm()).abs() < 1e-14);
        let lambda = p.beta / p.alpha;
        let v = phi_f_closed(&p, &Complex64::one(), &Complex64::one(), &lambda);
        assert!((v.norm() - p.alpha.norm() * p.beta.norm()).abs() < 1e-14);
    }

    #[test]
    fn uvw_examples() {
        let (u, _, _) = uvw(Complex64::one(), 0.25, Complex64::zero());
        assert!((u - K_UNION).abs() < 1e-15);
        let (_, _, w) = uvw(c(1.4, -2.0), 0.7, c(2.0, 0.0));
        assert!((w - 1.0).abs() < 1e-15);
        let (u, v, w) = uvw(Complex64::one(), 0.5, Complex64::zero());
        assert!((u - 32.0 / 243.0).abs() < 1e-15);
        assert!((w - 1.0 / 3.0).abs() < 1e-15);
        assert!((v - u / 3.0).abs() < 1e-15);
    }

    #[test]
    fn classify_examples() {
        let one = Complex64::one();
        assert_eq!(classify_lambda(one, c(2.0, 0.0)).region, Region::S3);
        let s5 = classify_lambda(one, Complex64::zero());
        assert_eq!(s5.region, Region::S5);
        let mu = s5.mu.unwrap();
        assert!((mu - 1.0).abs() < 1e-15);
        // the q = 1 form 4(2 − Re λ) / (|2λ − 3|² − 1)
        assert!((mu - 4.0 * 2.0 / (9.0 - 1.0)).abs() < 1e-15);
        let s2 = classify_lambda(one, one);
        assert_eq!(s2.region, Region::S2);
        assert_eq!(s2.mu, None);
        assert_eq!(classify_lambda(one, c(3.0, 0.0)).region, Region::S1);
        // second exceptional point for q with nonzero argument
        let q = c(1.0, 1.0);
        assert_eq!(classify_lambda(q, c(2.0, -1.0)).region, Region::S3);
        let s4 = classify_lambda(q, c(2.1, -0.5));
        assert_eq!(s4.region, Region::S4);
        assert!(s4.mu.unwrap() > 0.0);
    }

    #[test]
    fn phi_case_examples() {
        let one = Complex64::one();
        assert_eq!(phi_case(one, 2.0, Complex64::zero()), PhiCase::CaseA);
        assert_eq!(phi_case(one, 1.0, Complex64::zero()), PhiCase::CaseC);
        assert_eq!(phi_case(one, 0.5, Complex64::zero()), PhiCase::CaseB);
        for r in [0.01, 0.3, 7.0, 120.0] {
            assert_eq!(phi_case(one, r, c(2.0, 0.0)), PhiCase::CaseC);
        }
    }

    #[test]
    fn improved_bound_examples() {
        let bound = improved_s1_bound(c(3.0, 0.0)).unwrap();
        let t1 = (-7.0 + 193f64.sqrt()) / 24.0;
        assert!((t1 - 0.287185).abs() < 1e-5);
        assert!((bound - K_UNION * (1.0 + 2.0 * t1)).abs() < 1e-15);
        assert!((bound - 0.25794).abs() < 1e-5);
        assert!(bound < K_UNION * 3.0);
        assert_eq!(improved_s1_bound(c(2.0, 0.0)), Err(Error::WrongRegion(Region::S3)));
        assert_eq!(improved_s1_bound(c(0.0, 0.0)), Err(Error::WrongRegion(Region::S5)));
    }

    #[test]
    fn half_plane_validation() {
        assert!(HalfPlaneMap::new(c(1.0, 0.0), c(-1.0, 0.0)).is_err());
        assert!(HalfPlaneMap::new(Complex64::zero(), c(1.0, 0.0)).is_err());
    }
}

//! Closed-form asymptotic expansions next to the exact quantities they
//! approximate. Floating point lives only here; exact values are converted
//! to `f64` as the last step before taking residuals.

use std::f64::consts::PI;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dist::{format_rational, to_f64, Rational};
use crate::error::{Error, Result};
use crate::families::{t_n, var_u_alpha_closed, AlphaParam, BernoulliParam};

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("n must be at least 1".into()));
    }
    Ok(())
}

fn half_param(p: &Rational) -> Result<BernoulliParam> {
    BernoulliParam::at_most_half(p.clone())
}

/// `(2πn·Var(U^α))^{-1/2}`.
pub fn corollary2_bound(n: usize, alpha: &AlphaParam) -> Result<f64> {
    require_n(n)?;
    let var = to_f64(&var_u_alpha_closed(alpha));
    Ok((2.0 * PI * n as f64 * var).powf(-0.5))
}

/// Exact `P(T_{2n} = k) / P(T_{2n} = 0)`.
pub fn smalldev_ratio_exact(n: usize, p: &Rational, k: i64) -> Result<Rational> {
    require_n(n)?;
    let t = t_n(2 * n, &half_param(p)?)?;
    Ok(t.atom_at(k) / t.atom_at(0))
}

/// `1 − k²/(4p(1−p)n)`.
pub fn smalldev_ratio_approx(n: usize, p: &Rational, k: i64) -> Result<f64> {
    require_n(n)?;
    let p = to_f64(half_param(p)?.value());
    Ok(1.0 - (k * k) as f64 / (4.0 * p * (1.0 - p) * n as f64))
}

/// Exact `P(T_n = 0)`.
pub fn tn_zero_exact(n: usize, p: &Rational) -> Result<Rational> {
    require_n(n)?;
    Ok(t_n(n, &half_param(p)?)?.atom_at(0))
}

/// Two-term expansion of `P(T_n = 0)`, branch chosen by the parity of `n`.
pub fn tn_zero_asym(n: usize, p: &Rational) -> Result<f64> {
    require_n(n)?;
    let p = to_f64(half_param(p)?.value());
    let q = p * (1.0 - p);
    let nf = n as f64;
    let lead = 1.0 / (2.0 * PI * nf * q).sqrt();
    let correction = if n.is_multiple_of(2) {
        (1.0 / (4.0 * nf)) * (1.0 / (2.0 * q) - 3.0)
    } else {
        (2.0 * p * p - 6.0 * p + 1.0) / (8.0 * nf * q)
    };
    Ok(lead * (1.0 + correction))
}

fn require_positive(name: &str, v: &Rational) -> Result<()> {
    if !v.is_positive() {
        return Err(Error::ParamOutOfRange(format!("{name} = {v} must be positive")));
    }
    Ok(())
}

/// Dense polynomial with exact coefficients, lowest degree first.
fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_pow(base: &[Rational], mut e: usize) -> Vec<Rational> {
    let mut result = vec![Rational::one()];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul(&result, &b);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mul(&b, &b);
        }
    }
    result
}

/// `[xⁿ](x² + bx + c)ⁿ` by exact polynomial exponentiation.
pub fn wagner_coeff_exact(n: usize, b: &Rational, c: &Rational) -> Result<Rational> {
    require_n(n)?;
    require_positive("b", b)?;
    require_positive("c", c)?;
    let poly = poly_pow(&[c.clone(), b.clone(), Rational::one()], n);
    Ok(poly[n].clone())
}

/// `(b+2√c)^{n+1/2} / (2c^{1/4}√(πn)) · (1 + (b−4√c)/(16n√c))`.
pub fn wagner_coeff_asym(n: usize, b: &Rational, c: &Rational) -> Result<f64> {
    require_n(n)?;
    require_positive("b", b)?;
    require_positive("c", c)?;
    let (b, c, nf) = (to_f64(b), to_f64(c), n as f64);
    let sc = c.sqrt();
    let lead = (b + 2.0 * sc).powf(nf + 0.5) / (2.0 * c.powf(0.25) * (PI * nf).sqrt());
    Ok(lead * (1.0 + (b - 4.0 * sc) / (16.0 * nf * sc)))
}

/// Exact ratios from the odd-`n` comparison, with `X = T_{2(m−1)}`,
/// `Y = T_2`, `Y' = T_3` independent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LargeOddRatios {
    pub m: usize,
    /// `P(2Y = 0)`
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub two_y_zero: Rational,
    /// `P(X + 2Y = 0) / P(X = 0)`
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub ratio_two_y: Rational,
    /// `P(X + Y' = 0) / P(X = 0)`
    #[serde(serialize_with = "crate::report::ser_rational")]
    pub ratio_y_prime: Rational,
    /// `1 − 4/n` with `n = 2(m−1)`
    pub approx_two_y: f64,
    /// `1 − (3−2p)/(2n(1−p))` with `n = 2(m−1)`
    pub approx_y_prime: f64,
}

impl LargeOddRatios {
    /// `|exact − approx|` for both ratios.
    pub fn residuals(&self) -> (f64, f64) {
        (
            (to_f64(&self.ratio_two_y) - self.approx_two_y).abs(),
            (to_f64(&self.ratio_y_prime) - self.approx_y_prime).abs(),
        )
    }
}

pub fn large_odd_ratios(m: usize, p: &Rational) -> Result<LargeOddRatios> {
    if m < 2 {
        return Err(Error::ParamOutOfRange(format!("m = {m} must be at least 2")));
    }
    let bp = half_param(p)?;
    let x = t_n(2 * (m - 1), &bp)?;
    let y = t_n(2, &bp)?;
    let yp = t_n(3, &bp)?;
    let x0 = x.atom_at(0);
    let two_y = y.scale(2)?;
    let ratio_two_y = x.convolve(&two_y)?.atom_at(0) / &x0;
    let ratio_y_prime = x.convolve(&yp)?.atom_at(0) / &x0;

    let n = 2.0 * (m - 1) as f64;
    let pf = to_f64(p);
    Ok(LargeOddRatios {
        m,
        two_y_zero: two_y.atom_at(0),
        ratio_two_y,
        ratio_y_prime,
        approx_two_y: 1.0 - 4.0 / n,
        approx_y_prime: 1.0 - (3.0 - 2.0 * pf) / (2.0 * n * (1.0 - pf)),
    })
}

/// One row of an exact-versus-asymptotic comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualRow {
    pub n: usize,
    pub p: String,
    pub exact: f64,
    pub exact_rational: String,
    pub asym: f64,
    pub residual: f64,
    pub scaled_residual: f64,
}

impl ResidualRow {
    /// `scaled_residual = |exact − asym|·n^power`.
    pub fn new(n: usize, p: &Rational, exact: &Rational, asym: f64, power: i32) -> Self {
        let e = to_f64(exact);
        let residual = (e - asym).abs();
        ResidualRow {
            n,
            p: format_rational(p),
            exact: e,
            exact_rational: format_rational(exact),
            asym,
            residual,
            scaled_residual: residual * (n as f64).powi(power),
        }
    }

    pub const CSV_HEADER: &'static str = "n,p,exact,asym,residual,scaled_residual";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{:.17e},{:.17e},{:.17e},{:.17e}",
            self.n, self.p, self.exact, self.asym, self.residual, self.scaled_residual
        )
    }
}

/// `P(T_n = 0)` against its expansion, scaled by `n²` (even) or `n` (odd).
pub fn tn_zero_rows(ns: &[usize], p: &Rational) -> Result<Vec<ResidualRow>> {
    ns.iter()
        .map(|&n| {
            let power = if n % 2 == 0 { 2 } else { 1 };
            Ok(ResidualRow::new(n, p, &tn_zero_exact(n, p)?, tn_zero_asym(n, p)?, power))
        })
        .collect()
}

/// Small-deviation ratio against `1 − k²/(4p(1−p)n)`, scaled by `n`.
pub fn smalldev_rows(ns: &[usize], p: &Rational, k: i64) -> Result<Vec<ResidualRow>> {
    ns.iter()
        .map(|&n| Ok(ResidualRow::new(n, p, &smalldev_ratio_exact(n, p, k)?, smalldev_ratio_approx(n, p, k)?, 1)))
        .collect()
}

/// Relative error of the middle-coefficient expansion, scaled by `n²`.
/// `exact`/`asym` hold the exact coefficient and its expansion.
pub fn wagner_rows(ns: &[usize], b: &Rational, c: &Rational) -> Result<Vec<ResidualRow>> {
    ns.iter()
        .map(|&n| {
            let exact = wagner_coeff_exact(n, b, c)?;
            let asym = wagner_coeff_asym(n, b, c)?;
            let e = to_f64(&exact);
            let residual = (1.0 - asym / e).abs();
            Ok(ResidualRow {
                n,
                p: format!("b={};c={}", format_rational(b), format_rational(c)),
                exact: e,
                exact_rational: format_rational(&exact),
                asym,
                residual,
                scaled_residual: residual * (n * n) as f64,
            })
        })
        .collect()
}

/// `true` when every scaled residual is at most `slack` times its predecessor.
pub fn bounded_along(rows: &[ResidualRow], slack: f64) -> bool {
    rows.windows(2).all(|w| w[1].scaled_residual <= slack * w[0].scaled_residual)
}

/// `true` when the scaled residuals strictly decrease.
pub fn strictly_decreasing(rows: &[ResidualRow]) -> bool {
    rows.windows(2).all(|w| w[1].scaled_residual < w[0].scaled_residual)
}

/// `C(n, ⌊n/2⌋)/2ⁿ`, the central binomial atom.
pub fn central_binomial_mass(n: usize) -> Rational {
    let mut c = num_bigint::BigInt::one();
    let half = n / 2;
    for j in 0..half {
        c = c * num_bigint::BigInt::from(n - j) / num_bigint::BigInt::from(j + 1);
    }
    Rational::new(c, num_bigint::BigInt::one() << n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{int, ratio};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Σ_i n!/(i!·i!·(n−2i)!) b^{n−2i} c^i
    fn trinomial_middle(n: usize, b: &Rational, c: &Rational) -> Rational {
        let fact = |k: usize| (1..=k).fold(num_bigint::BigInt::one(), |a, j| a * j);
        (0..=n / 2)
            .map(|i| {
                let coef = fact(n) / (fact(i) * fact(i) * fact(n - 2 * i));
                Rational::from_integer(coef) * b.pow((n - 2 * i) as i32) * c.pow(i as i32)
            })
            .sum()
    }

    #[test]
    fn point_bound_examples() {
        let a = AlphaParam::new(ratio(1, 2)).unwrap();
        assert!(close(corollary2_bound(100, &a).unwrap(), (50.0 * PI).powf(-0.5), 1e-15));
        assert!(close(corollary2_bound(100, &a).unwrap(), 0.0797885, 1e-7));
        let a = AlphaParam::new(ratio(1, 3)).unwrap();
        assert!(close(corollary2_bound(100, &a).unwrap(), 0.0488602, 1e-7));
        for (n, al) in [(7, ratio(2, 5)), (50, ratio(3, 4))] {
            let a = AlphaParam::new(al).unwrap();
            let r = corollary2_bound(4 * n, &a).unwrap() / corollary2_bound(n, &a).unwrap();
            assert!(close(r, 0.5, 1e-12));
        }
        assert!(corollary2_bound(0, &a).is_err());
    }

    #[test]
    fn smalldev_examples() {
        let half = ratio(1, 2);
        // binom(20,11)/binom(20,10)
        assert_eq!(smalldev_ratio_exact(10, &half, 1).unwrap(), ratio(10, 11));
        assert!(close(smalldev_ratio_approx(10, &half, 1).unwrap(), 0.9, 1e-15));
        assert_eq!(smalldev_ratio_exact(7, &half, 0).unwrap(), int(1));
        assert!(close(smalldev_ratio_approx(7, &half, 0).unwrap(), 1.0, 0.0));
        let q = ratio(1, 4);
        assert!(close(smalldev_ratio_approx(50, &q, 2).unwrap(), 0.893333333, 1e-8));
        let ex = to_f64(&smalldev_ratio_exact(50, &q, 2).unwrap());
        assert!((ex - 0.8933333).abs() * 50.0 < 1.0);
        assert!(smalldev_ratio_exact(5, &ratio(3, 4), 1).is_err());
    }

    #[test]
    fn tn_zero_examples() {
        let half = ratio(1, 2);
        let e = tn_zero_exact(20, &half).unwrap();
        assert_eq!(e, central_binomial_mass(20));
        assert!(close(to_f64(&e), 0.176197, 1e-6));
        let a = tn_zero_asym(20, &half).unwrap();
        assert!(close(a, (10.0 * PI).powf(-0.5) * (1.0 - 1.0 / 80.0), 1e-15));
        assert!(close(a, 0.176182, 1e-6));
        assert_eq!(tn_zero_exact(4, &half).unwrap(), ratio(6, 16));
        assert_eq!(tn_zero_exact(3, &ratio(1, 3)).unwrap(), ratio(4, 9));
    }

    #[test]
    fn even_tn_zero_is_sum_of_squared_binomial_masses() {
        // P(T_{2n} = 0) = Σ_{k=0}^{n} P(B_{n,p} = k)^2
        for n in [1, 3, 6, 10] {
            for p in [ratio(1, 10), ratio(1, 3), ratio(1, 2)] {
                let b = crate::families::binomial(n, &BernoulliParam::new(p.clone()).unwrap());
                assert_eq!(tn_zero_exact(2 * n, &p).unwrap(), b.collision_probability());
            }
        }
    }

    #[test]
    fn wagner_examples() {
        let (two, one) = (int(2), int(1));
        for n in 1..=12 {
            assert_eq!(wagner_coeff_exact(n, &two, &one).unwrap(), central_binomial_mass(2 * n) * Rational::from_integer(num_bigint::BigInt::one() << (2 * n)));
        }
        for (b, c) in [(ratio(3, 2), ratio(5, 7)), (int(7), ratio(1, 9))] {
            assert_eq!(wagner_coeff_exact(1, &b, &c).unwrap(), b);
            for n in [2, 5, 9] {
                assert_eq!(wagner_coeff_exact(n, &b, &c).unwrap(), trinomial_middle(n, &b, &c));
            }
        }
        let exact = to_f64(&wagner_coeff_exact(20, &two, &one).unwrap());
        let want = 4f64.powi(20) / (20.0 * PI).sqrt() * (1.0 - 1.0 / 160.0);
        let asym = wagner_coeff_asym(20, &two, &one).unwrap();
        assert!(close(asym / want, 1.0, 1e-12));
        assert!((1.0 - asym / exact).abs() < 1e-3);
        assert!(wagner_coeff_exact(3, &int(0), &one).is_err());
    }

    #[test]
    fn large_odd_examples() {
        for p in [ratio(1, 10), ratio(1, 3), ratio(1, 2)] {
            let r = large_odd_ratios(5, &p).unwrap();
            let q = int(1) - &p;
            assert_eq!(r.two_y_zero, &p * &p + &q * &q);
        }
        // m = 2: X = T_2 at p = 1/2 is {-1:1/4, 0:1/2, 1:1/4}
        let r = large_odd_ratios(2, &ratio(1, 2)).unwrap();
        // P(X + 2Y = 0) = P(X=0)P(Y=0) = 1/2 * 1/2
        assert_eq!(r.ratio_two_y, ratio(1, 2));
        // Y' = T_3: P(Y'=-1)=1/8, P(Y'=0)=3/8, P(Y'=1)=3/8, P(Y'=2)=1/8
        // P(X+Y'=0) = 1/2*3/8 + 1/4*1/8 + 1/4*3/8 = 5/16
        assert_eq!(r.ratio_y_prime, ratio(5, 8));
        assert!(large_odd_ratios(1, &ratio(1, 3)).is_err());

        let p = ratio(1, 3);
        let scaled: Vec<(f64, f64)> = [10, 20, 40]
            .iter()
            .map(|&m| {
                let (a, b) = large_odd_ratios(m, &p).unwrap().residuals();
                let n = 2.0 * (m - 1) as f64;
                (a * n, b * n)
            })
            .collect();
        assert!(scaled.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1));
    }

    #[test]
    fn residual_checks() {
        let p = ratio(1, 4);
        let rows = tn_zero_rows(&[16, 32, 64], &p).unwrap();
        assert!(bounded_along(&rows, 2.0));
        let rows = tn_zero_rows(&[17, 33, 65], &p).unwrap();
        assert!(strictly_decreasing(&rows));
        assert_eq!(ResidualRow::CSV_HEADER.split(',').count(), rows[0].csv().split(',').count());
    }
}

//! Named distributions: the quasi-uniform `U^α`, the extreme measures
//! `μ_{α,A,y}`, Bernoulli/binomial laws and alternating Bernoulli sums `T_n`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::dist::{int, Dist, LatticePoint, Rational};
use crate::error::{Error, Result};

/// Concentration level `α ∈ (0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphaParam(Rational);

impl AlphaParam {
    pub fn new(alpha: Rational) -> Result<Self> {
        if alpha.is_positive() && alpha < Rational::one() {
            Ok(AlphaParam(alpha))
        } else {
            Err(Error::AlphaOutOfRange(alpha))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `⌊1/α⌋`, the number of full atoms of `U^α`.
    pub fn full_atoms(&self) -> usize {
        self.0.recip().floor().to_integer().to_usize().expect("1/alpha fits in usize")
    }

    /// `1 − ⌊1/α⌋·α`, always in `[0, α)`.
    pub fn remainder(&self) -> Rational {
        Rational::one() - int(self.full_atoms() as i64) * &self.0
    }
}

/// Bernoulli success probability `p ∈ (0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BernoulliParam(Rational);

impl BernoulliParam {
    pub fn new(p: Rational) -> Result<Self> {
        if p.is_positive() && p <= Rational::one() {
            Ok(BernoulliParam(p))
        } else {
            Err(Error::ParamOutOfRange(format!("p = {p} is outside (0, 1]")))
        }
    }

    /// Restricts to `p ∈ (0, 1/2]`, the range the alternating-sum results use.
    pub fn at_most_half(p: Rational) -> Result<Self> {
        if p.is_positive() && p <= Rational::new(BigInt::one(), BigInt::from(2)) {
            Ok(BernoulliParam(p))
        } else {
            Err(Error::ParamOutOfRange(format!("p = {p} is outside (0, 1/2]")))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

/// `U^α`: mass `α` on `0, …, ⌊1/α⌋−1` and the remainder on `⌊1/α⌋`.
pub fn u_alpha(alpha: &AlphaParam) -> Dist {
    let m = alpha.full_atoms() as i64;
    let mut entries: Vec<(i64, Rational)> = (0..m).map(|l| (l, alpha.value().clone())).collect();
    entries.push((m, alpha.remainder()));
    Dist::on_integers(entries).expect("U^alpha masses sum to one")
}

/// `μ_{α,A,y}`: mass `α` on every point of `A`, the remainder on `y`
/// (which is a dummy when the remainder vanishes).
pub fn mu_extremal(alpha: &AlphaParam, a: &[LatticePoint], y: &LatticePoint) -> Result<Dist> {
    let need = alpha.full_atoms();
    let distinct: BTreeSet<&LatticePoint> = a.iter().collect();
    if distinct.len() != need || a.len() != need {
        return Err(Error::WrongSupportSize { expected: need, found: distinct.len() });
    }
    if distinct.contains(y) {
        return Err(Error::YInA);
    }
    let entries = a
        .iter()
        .map(|x| (x.clone(), alpha.value().clone()))
        .chain(std::iter::once((y.clone(), alpha.remainder())));
    Dist::new(entries)
}

pub fn bernoulli(p: &BernoulliParam) -> Dist {
    Dist::on_integers([(0, Rational::one() - p.value()), (1, p.value().clone())])
        .expect("Bernoulli masses sum to one")
}

/// `Binom(n, p)` from the closed-form pmf `C(n,j) p^j (1−p)^{n−j}`.
pub fn binomial(n: usize, p: &BernoulliParam) -> Dist {
    let num = p.value().numer();
    let den = p.value().denom();
    let rest = den - num;
    let total = num::pow(den, n);
    let mut coeff = BigInt::one();
    let mut entries = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j > 0 {
            coeff = coeff * BigInt::from(n - j + 1) / BigInt::from(j);
        }
        let w = &coeff * num::pow(num, j) * num::pow(&rest, n - j);
        entries.push((j as i64, Rational::new(w, total.clone())));
    }
    Dist::on_integers(entries).expect("binomial masses sum to one")
}

mod num {
    use num_bigint::BigInt;
    use num_traits::One;

    pub fn pow(b: &BigInt, e: usize) -> BigInt {
        if e == 0 {
            BigInt::one()
        } else {
            b.pow(e as u32)
        }
    }
}

/// Law of `T_n = X_1 − X_2 + ⋯ + (−1)^{n+1} X_n`, i.e.
/// `Binom(⌈n/2⌉, p) − Binom(⌊n/2⌋, p)`.
pub fn t_n(n: usize, p: &BernoulliParam) -> Result<Dist> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("T_n needs n >= 1".into()));
    }
    if p.value() > &Rational::new(BigInt::one(), BigInt::from(2)) {
        return Err(Error::ParamOutOfRange(format!("T_n needs p <= 1/2, got {}", p.value())));
    }
    Ok(signed_binomial(n.div_ceil(2), n / 2, p))
}

/// `Binom(plus, p) − Binom(minus, p)` for independent binomials.
pub(crate) fn signed_binomial(plus: usize, minus: usize, p: &BernoulliParam) -> Dist {
    binomial(plus, p)
        .convolve(&binomial(minus, p).negate())
        .expect("one-dimensional")
}

/// Closed-form `Var(U^α)` as a polynomial in `k = ⌊1/α⌋` and `α`.
pub fn var_u_alpha_closed(alpha: &AlphaParam) -> Rational {
    let a = alpha.value();
    let k = int(alpha.full_atoms() as i64);
    let inner = int(2) + int(4) * &k - int(3) * a * &k - int(3) * a * &k * &k;
    Rational::new(BigInt::one(), BigInt::from(12)) * &k * (&k + int(1)) * a * inner
}

/// `(1 − α²)/(12α²)`, valid when `1/α` is an integer.
pub fn var_u_alpha_integer_reciprocal(alpha: &AlphaParam) -> Result<Rational> {
    let a = alpha.value();
    if !a.recip().is_integer() {
        return Err(Error::ParamOutOfRange(format!("1/alpha is not an integer for alpha = {a}")));
    }
    Ok((Rational::one() - a * a) / (int(12) * a * a))
}

/// `true` when `1/α` is an integer.
pub fn has_integer_reciprocal(alpha: &AlphaParam) -> bool {
    alpha.value().recip().is_integer()
}

/// Darroch's mode window `{⌊μ⌋, ⌈μ⌉}` for a rational mean.
pub fn mode_window(mean: &Rational) -> (i64, i64) {
    let lo = mean.floor().to_integer();
    let hi = mean.ceil().to_integer();
    (lo.to_i64().expect("mean fits in i64"), hi.to_i64().expect("mean fits in i64"))
}

//! Constructive steps behind the balancing bound and the bounded-concentration
//! bound: the AM-GM halving step, partition into sign-flip types, a direct
//! verifier of the balancing inequality, and decomposition of a measure with
//! `Q(μ) ≤ α` into extreme points.

use num_traits::{One, Zero};

use crate::dist::{int, Dist, LatticePoint, Rational};
use crate::error::{Error, Result};
use crate::families::{mu_extremal, AlphaParam};

/// Result of one AM-GM step on a split sum `S + T`.
#[derive(Clone, Debug, PartialEq)]
pub struct AgmStep {
    /// `P(S + T = 0)`
    pub sum_zero: Rational,
    /// `P(S − S' = 0)`
    pub first_self: Rational,
    /// `P(T − T' = 0)`
    pub second_self: Rational,
    /// `T ~ −S`, the only case in which `sum_zero` reaches the larger self term.
    pub balanced: bool,
}

impl AgmStep {
    pub fn holds(&self) -> bool {
        self.sum_zero <= self.first_self.clone().max(self.second_self.clone())
    }
}

fn same_dim(dists: &[&Dist]) -> Result<usize> {
    let dim = dists.first().ok_or(Error::Empty)?.dim();
    for d in dists {
        if d.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: d.dim() });
        }
    }
    Ok(dim)
}

pub fn agm_step(first_half: &[Dist], second_half: &[Dist]) -> Result<AgmStep> {
    if first_half.len() != second_half.len() || first_half.is_empty() {
        return Err(Error::PreconditionViolated("halves must be non-empty and of equal length".into()));
    }
    let all: Vec<&Dist> = first_half.iter().chain(second_half).collect();
    same_dim(&all)?;
    let s = Dist::convolve_all(first_half)?;
    let t = Dist::convolve_all(second_half)?;
    let neg_t = t.negate();
    let sum_zero = s.atoms().map(|(x, m)| m * neg_t.atom(x)).sum();
    Ok(AgmStep {
        sum_zero,
        first_self: s.collision_probability(),
        second_self: t.collision_probability(),
        balanced: s == neg_t,
    })
}

/// Classes of the relation "same law up to sign".
#[derive(Clone, Debug, PartialEq)]
pub struct TypePartition {
    /// `(representative, member indices)`, largest class first.
    pub classes: Vec<(Dist, Vec<usize>)>,
}

impl TypePartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Groups `dists` by type. Classes are ordered by decreasing size, ties by the
/// canonical serialization of the representative (the first member seen).
pub fn type_partition(dists: &[Dist]) -> Result<TypePartition> {
    let refs: Vec<&Dist> = dists.iter().collect();
    same_dim(&refs)?;
    let mut classes: Vec<(Dist, Vec<usize>)> = Vec::new();
    for (i, d) in dists.iter().enumerate() {
        match classes.iter_mut().find(|(rep, _)| rep.same_type(d).unwrap_or(false)) {
            Some((_, members)) => members.push(i),
            None => classes.push((d.clone(), vec![i])),
        }
    }
    classes.sort_by(|(ra, ma), (rb, mb)| mb.len().cmp(&ma.len()).then_with(|| ra.to_json().cmp(&rb.to_json())));
    Ok(TypePartition { classes })
}

/// Outcome of checking the balancing inequality at one target point.
#[derive(Clone, Debug, PartialEq)]
pub struct BalancingBound {
    /// 0-based index of the summand whose alternating self-sum is largest at 0.
    pub j: usize,
    /// `P(X_1 + ⋯ + X_n = x)`
    pub lhs: Rational,
    /// `P(Y_1 − Y_2 + ⋯ − Y_n = 0)` with `Y_i` iid copies of `X_j`.
    pub rhs: Rational,
    pub strict: bool,
    /// When not strict: an index attaining the maximum for which
    /// `Σ X_i − x ~ Σ (−1)^{i+1} Y_i` holds.
    pub equality_witness: Option<usize>,
}

impl BalancingBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// Law of `Y_1 − Y_2 + ⋯ + Y_{n−1} − Y_n` for `n` iid copies of `d`, `n` even.
pub fn alternating_self_sum(d: &Dist, n: usize) -> Result<Dist> {
    let half = d.convolve_power(n / 2)?;
    half.convolve(&half.negate())
}

/// Verifies the balancing inequality directly: for even `n`, compares
/// `P(ΣX_i = x)` with the best alternating iid self-sum at 0.
pub fn balancing_bound(dists: &[Dist], x: &LatticePoint) -> Result<BalancingBound> {
    let n = dists.len();
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    let refs: Vec<&Dist> = dists.iter().collect();
    let dim = same_dim(&refs)?;
    if x.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: x.dim() });
    }
    let sum = Dist::convolve_all(dists)?;
    let lhs = sum.atom(x);

    // P(S - S' = 0) = Σ P(S = y)^2 with S the n/2-fold self-sum
    let rhs_all: Vec<Rational> = dists
        .iter()
        .map(|d| Ok(d.convolve_power(n / 2)?.collision_probability()))
        .collect::<Result<_>>()?;
    let (j, rhs) = rhs_all
        .iter()
        .enumerate()
        .fold((0, &rhs_all[0]), |best, (i, r)| if r > best.1 { (i, r) } else { best });
    let rhs = rhs.clone();
    let strict = lhs < rhs;

    let equality_witness = if strict {
        None
    } else {
        let centered = sum.shift(&x.checked_neg()?)?;
        let mut found = None;
        for (i, r) in rhs_all.iter().enumerate() {
            if *r == rhs && alternating_self_sum(&dists[i], n)? == centered {
                found = Some(i);
                break;
            }
        }
        found
    };
    Ok(BalancingBound { j, lhs, rhs, strict, equality_witness })
}

/// Extreme-point decomposition of a measure with concentration at most `α`.
#[derive(Clone, Debug, PartialEq)]
pub enum Decomposition {
    /// The measure is `μ_{α,A,y}`; `y` is `None` when `1/α` is an integer.
    Extremal { a: Vec<LatticePoint>, y: Option<LatticePoint> },
    /// `μ = p·μ1 + (1−p)·μ2` with `μ1 ≠ μ2`, both of concentration at most `α`,
    /// and `μ2` extremal.
    Mixture { p: Rational, epsilon: Rational, mu1: Dist, mu2: Dist },
}

fn extremal_pattern(mu: &Dist, alpha: &AlphaParam) -> Option<(Vec<LatticePoint>, Option<LatticePoint>)> {
    let m = alpha.full_atoms();
    let rem = alpha.remainder();
    let mut a = Vec::with_capacity(m);
    let mut y = None;
    for (x, mass) in mu.atoms() {
        if mass == alpha.value() && a.len() < m {
            a.push(x.clone());
        } else if !rem.is_zero() && *mass == rem && y.is_none() {
            y = Some(x.clone());
        } else {
            return None;
        }
    }
    let complete = a.len() == m && (rem.is_zero() || y.is_some());
    complete.then_some((a, y))
}

/// Writes `μ` as `μ_{α,A,y}` or as a non-trivial mixture `p·μ1 + (1−p)·μ2`
/// with `μ2 = μ_{α,A,y}` built from the `⌊1/α⌋` largest atoms `A` and the next
/// largest atom `y`, and the largest feasible `ε` with `μ1 = (1+ε)μ − εμ2`.
pub fn extreme_decompose(mu: &Dist, alpha: &AlphaParam) -> Result<Decomposition> {
    let (q, _) = mu.concentration();
    if &q > alpha.value() {
        return Err(Error::QTooLarge { q: Box::new(q), alpha: Box::new(alpha.value().clone()) });
    }
    if let Some((a, y)) = extremal_pattern(mu, alpha) {
        return Ok(Decomposition::Extremal { a, y });
    }

    let m = alpha.full_atoms();
    let mut ranked: Vec<(&LatticePoint, &Rational)> = mu.atoms().collect();
    // stable sort keeps canonical point order among equal masses
    ranked.sort_by(|a, b| b.1.cmp(a.1));
    debug_assert!(ranked.len() > m);
    let a: Vec<LatticePoint> = ranked[..m].iter().map(|(x, _)| (*x).clone()).collect();
    let y = ranked[m].0.clone();
    let mu2 = mu_extremal(alpha, &a, &y)?;

    // 1 + ε ≤ α(⌊1/α⌋ + 1)
    let mut epsilon = alpha.value() * int(m as i64 + 1) - Rational::one();
    // (1+ε)μ{x} − εμ2{x} ≥ 0 on A ∪ {y}
    for x in a.iter().chain(std::iter::once(&y)) {
        let (p, p2) = (mu.atom(x), mu2.atom(x));
        if p2 > p {
            epsilon = epsilon.min(&p / (&p2 - &p));
        }
    }

    let one_eps = Rational::one() + &epsilon;
    let entries = mu
        .atoms()
        .map(|(x, p)| (x.clone(), p * &one_eps))
        .chain(mu2.atoms().map(|(x, p)| (x.clone(), -(p * &epsilon))));
    let mut merged = std::collections::BTreeMap::<LatticePoint, Rational>::new();
    for (x, v) in entries {
        *merged.entry(x).or_insert_with(Rational::zero) += v;
    }
    let mu1 = Dist::new(merged)?;
    let p = one_eps.recip();
    Ok(Decomposition::Mixture { p, epsilon, mu1, mu2 })
}

/// `p·μ1 + (1−p)·μ2` as a distribution.
pub fn mix(p: &Rational, mu1: &Dist, mu2: &Dist) -> Result<Dist> {
    let q = Rational::one() - p;
    let entries = mu1
        .atoms()
        .map(|(x, m)| (x.clone(), m * p))
        .chain(mu2.atoms().map(|(x, m)| (x.clone(), m * &q)));
    Dist::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::ratio;
    use crate::families::{bernoulli, u_alpha, BernoulliParam};
    use proptest::prelude::*;

    fn bern(a: i64, b: i64) -> Dist {
        bernoulli(&BernoulliParam::new(ratio(a, b)).unwrap())
    }

    fn alpha(a: i64, b: i64) -> AlphaParam {
        AlphaParam::new(ratio(a, b)).unwrap()
    }

    #[test]
    fn agm_examples() {
        let b = bern(1, 3);
        let s = agm_step(std::slice::from_ref(&b), std::slice::from_ref(&b)).unwrap();
        assert_eq!((s.sum_zero.clone(), s.first_self.clone(), s.second_self.clone()), (ratio(4, 9), ratio(5, 9), ratio(5, 9)));
        assert!(s.holds() && !s.balanced);

        let s = agm_step(std::slice::from_ref(&b), &[b.negate()]).unwrap();
        assert_eq!(s.sum_zero, s.first_self);
        assert_eq!(s.sum_zero, s.second_self);
        assert!(s.balanced);

        let d = Dist::point(0.into());
        let s = agm_step(std::slice::from_ref(&d), std::slice::from_ref(&d)).unwrap();
        assert_eq!((s.sum_zero, s.first_self, s.second_self), (int(1), int(1), int(1)));
    }

    #[test]
    fn type_partition_examples() {
        let b = bern(1, 3);
        let u = Dist::uniform_range(0, 2).unwrap();
        let tp = type_partition(&[b.clone(), b.negate(), u]).unwrap();
        assert_eq!(tp.classes.iter().map(|c| c.1.len()).collect::<Vec<_>>(), vec![2, 1]);
        assert_eq!(tp.classes[0].1, vec![0, 1]);

        assert_eq!(type_partition(&vec![b; 4]).unwrap().len(), 1);

        let tp = type_partition(&[Dist::point(1.into()), Dist::point((-1).into()), Dist::point(2.into())]).unwrap();
        assert_eq!(tp.classes[0].1, vec![0, 1]);
        assert_eq!(tp.classes[1].1, vec![2]);
    }

    #[test]
    fn balancing_examples() {
        let b = bern(1, 3);
        let r = balancing_bound(&[b.clone(), b.clone()], &0.into()).unwrap();
        assert_eq!((r.j, r.lhs.clone(), r.rhs.clone(), r.strict), (0, ratio(4, 9), ratio(5, 9), true));

        let u = Dist::uniform_range(0, 2).unwrap();
        let r = balancing_bound(&[b.clone(), u], &0.into()).unwrap();
        assert_eq!((r.j, r.lhs, r.rhs), (0, ratio(2, 9), ratio(5, 9)));

        let r = balancing_bound(&[b.clone(), b.negate()], &0.into()).unwrap();
        assert_eq!(r.lhs, r.rhs);
        assert!(!r.strict);
        assert!(r.equality_witness.is_some());

        assert_eq!(balancing_bound(std::slice::from_ref(&b), &0.into()), Err(Error::OddN(1)));
    }

    #[test]
    fn decompose_uniform_is_extremal() {
        let mu = Dist::uniform_range(0, 1).unwrap();
        let d = extreme_decompose(&mu, &alpha(1, 2)).unwrap();
        assert_eq!(d, Decomposition::Extremal { a: vec![0.into(), 1.into()], y: None });
    }

    #[test]
    fn decompose_mixture_example() {
        let mu = Dist::on_integers([(0, ratio(1, 2)), (1, ratio(3, 10)), (2, ratio(1, 5))]).unwrap();
        let Decomposition::Mixture { p, epsilon, mu1, mu2 } = extreme_decompose(&mu, &alpha(1, 2)).unwrap() else {
            panic!("expected a mixture");
        };
        assert_eq!(epsilon, ratio(1, 2));
        assert_eq!(p, ratio(2, 3));
        assert_eq!(mu1, Dist::on_integers([(0, ratio(1, 2)), (1, ratio(1, 5)), (2, ratio(3, 10))]).unwrap());
        assert_eq!(mu2, Dist::uniform_range(0, 1).unwrap());
        assert_eq!(mix(&p, &mu1, &mu2).unwrap(), mu);
    }

    #[test]
    fn decompose_u_alpha_is_extremal() {
        let mu = u_alpha(&alpha(2, 5));
        let d = extreme_decompose(&mu, &alpha(2, 5)).unwrap();
        assert_eq!(d, Decomposition::Extremal { a: vec![0.into(), 1.into()], y: Some(2.into()) });
    }

    #[test]
    fn decompose_rejects_concentrated() {
        let mu = bern(1, 3);
        assert!(matches!(extreme_decompose(&mu, &alpha(1, 2)), Err(Error::QTooLarge { .. })));
    }

    fn arb_bounded(alpha_den: i64) -> impl Strategy<Value = (Dist, AlphaParam)> {
        // masses w_i / total with every w_i <= total * alpha
        (2i64..alpha_den, prop::collection::vec(1i64..=8, 2..=6)).prop_filter_map(
            "concentration within alpha",
            move |(an, ws)| {
                let a = ratio(an, alpha_den);
                if a >= int(1) {
                    return None;
                }
                let total: i64 = ws.iter().sum();
                let d = Dist::on_integers(ws.iter().enumerate().map(|(i, w)| (i as i64 * 2 - 3, ratio(*w, total)))).ok()?;
                (d.concentration().0 <= a).then(|| (d, AlphaParam::new(a).unwrap()))
            },
        )
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs((mu, a) in arb_bounded(10)) {
            match extreme_decompose(&mu, &a).unwrap() {
                Decomposition::Extremal { a: pts, y } => {
                    let y = y.unwrap_or_else(|| LatticePoint::scalar(i64::MAX));
                    prop_assert_eq!(mu_extremal(&a, &pts, &y).unwrap(), mu);
                }
                Decomposition::Mixture { p, mu1, mu2, .. } => {
                    prop_assert!(p > int(0) && p < int(1));
                    prop_assert!(mu1 != mu2);
                    prop_assert!(&mu1.concentration().0 <= a.value());
                    prop_assert!(&mu2.concentration().0 <= a.value());
                    prop_assert!(extremal_pattern(&mu2, &a).is_some());
                    prop_assert!(extremal_pattern(&mu, &a).is_none());
                    prop_assert_eq!(mix(&p, &mu1, &mu2).unwrap(), mu);
                }
            }
        }

        #[test]
        fn agm_bound_holds(ws in prop::collection::vec((0i64..3, 1i64..5), 2..=4)) {
            let total: i64 = ws.iter().map(|w| w.1).sum();
            let d = Dist::on_integers(ws.iter().map(|(x, w)| (*x, ratio(*w, total)))).unwrap();
            let e = Dist::uniform_range(-1, 1).unwrap();
            let s = agm_step(&[d.clone(), e.clone()], &[e, d]).unwrap();
            prop_assert!(s.holds());
        }
    }
}

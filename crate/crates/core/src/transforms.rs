//! Rearrangements of finite nonnegative sequences indexed by `-k..=k`, the
//! rearrangement inequality for multiple convolutions at zero, and the
//! peakedness comparison for symmetric unimodal integer laws.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::dist::{Dist, Rational};
use crate::error::{Error, Result};

/// Nonnegative values at indices `-radius..=radius`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexedSeq {
    radius: usize,
    values: Vec<Rational>,
}

impl IndexedSeq {
    /// `values` is read left to right as indices `-k, …, k`; its length must be odd.
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::PreconditionViolated(format!(
                "indexed sequence needs odd length, got {}",
                values.len()
            )));
        }
        if let Some(m) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::NegativeMass { mass: m.clone() });
        }
        Ok(IndexedSeq { radius: values.len() / 2, values })
    }

    /// Masses of a one-dimensional law on the symmetric window covering its support.
    pub fn from_dist(d: &Dist) -> Result<Self> {
        let r = d.radius()? as i64;
        IndexedSeq::new((-r..=r).map(|x| d.atom_at(x)).collect())
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value at index `i`; zero outside the window.
    pub fn get(&self, i: i64) -> Rational {
        let k = self.radius as i64;
        if i < -k || i > k {
            Rational::zero()
        } else {
            self.values[(i + k) as usize].clone()
        }
    }

    fn sorted_desc(&self) -> Vec<Rational> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| b.cmp(a));
        v
    }

    fn deal(&self, order: impl Iterator<Item = i64>) -> IndexedSeq {
        let k = self.radius as i64;
        let mut out = vec![Rational::zero(); self.values.len()];
        for (v, i) in self.sorted_desc().into_iter().zip(order) {
            out[(i + k) as usize] = v;
        }
        IndexedSeq { radius: self.radius, values: out }
    }

    /// Multiset of values, sorted descending.
    pub fn value_multiset(&self) -> Vec<Rational> {
        self.sorted_desc()
    }
}

impl fmt::Display for IndexedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// 0, -1, 1, -2, 2, …
fn left_order() -> impl Iterator<Item = i64> {
    (0..).map(|j: i64| if j % 2 == 1 { -(j + 1) / 2 } else { j / 2 })
}

/// 0, 1, -1, 2, -2, …
fn right_order() -> impl Iterator<Item = i64> {
    (0..).map(|j: i64| if j % 2 == 1 { (j + 1) / 2 } else { -j / 2 })
}

/// `(⁺a)`: `a_0 ≥ a_{-1} ≥ a_1 ≥ a_{-2} ≥ …`.
pub fn rearrange_plus_left(a: &IndexedSeq) -> IndexedSeq {
    a.deal(left_order())
}

/// `(a⁺)`: `a_0 ≥ a_1 ≥ a_{-1} ≥ a_2 ≥ …`.
pub fn rearrange_plus_right(a: &IndexedSeq) -> IndexedSeq {
    a.deal(right_order())
}

/// `(a*)`: `a_0 ≥ a_1 = a_{-1} ≥ a_2 = a_{-2} ≥ …`.
///
/// Possible iff, after setting one copy of the largest value aside for index
/// 0, the remaining values pair up.
pub fn rearrange_sym(a: &IndexedSeq) -> Result<IndexedSeq> {
    let sorted = a.sorted_desc();
    for pair in sorted[1..].chunks(2) {
        if pair[0] != pair[1] {
            return Err(Error::NotSymmetrizable { value: pair[0].clone() });
        }
    }
    Ok(a.deal(left_order()))
}

pub fn is_symmetrizable(a: &IndexedSeq) -> bool {
    rearrange_sym(a).is_ok()
}

/// Sequence on `offset..offset+len`, used for exact multi-convolution.
struct Window {
    offset: i64,
    values: Vec<Rational>,
}

impl Window {
    fn from_seq(s: &IndexedSeq) -> Self {
        Window { offset: -(s.radius as i64), values: s.values.clone() }
    }

    fn convolve(&self, other: &Window) -> Window {
        let mut out = vec![Rational::zero(); self.values.len() + other.values.len() - 1];
        for (i, a) in self.values.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.values.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Window { offset: self.offset + other.offset, values: out }
    }

    fn at(&self, x: i64) -> Rational {
        let i = x - self.offset;
        if i < 0 || i as usize >= self.values.len() {
            Rational::zero()
        } else {
            self.values[i as usize].clone()
        }
    }
}

/// `Σ_{r+s+…=0} a_r b_s …` for sequences treated as (not necessarily
/// probability) measures on ℤ.
pub fn sum_at_zero(seqs: &[IndexedSeq]) -> Rational {
    let mut it = seqs.iter().map(Window::from_seq);
    let Some(first) = it.next() else {
        return Rational::zero();
    };
    it.fold(first, |acc, w| acc.convolve(&w)).at(0)
}

/// Both sides of the rearrangement inequality
/// `Σ a_r b_s c_t … ≤ Σ ⁺a_r b⁺_s c*_t …` over `r + s + t + … = 0`.
///
/// Sequences from position `star_from` onward are replaced by their symmetric
/// decreasing rearrangement. Positions strictly between 1 and `star_from` are
/// left as given and must already be symmetric decreasing.
pub fn gabriel_lhs_rhs(seqs: &[IndexedSeq], star_from: usize) -> Result<(Rational, Rational)> {
    if seqs.len() < 2 {
        return Err(Error::PreconditionViolated("need at least two sequences".into()));
    }
    if star_from < 2 || star_from > seqs.len() {
        return Err(Error::PreconditionViolated(format!(
            "star_from = {star_from} must lie in 2..={}",
            seqs.len()
        )));
    }
    let mut rhs_seqs = Vec::with_capacity(seqs.len());
    rhs_seqs.push(rearrange_plus_left(&seqs[0]));
    rhs_seqs.push(rearrange_plus_right(&seqs[1]));
    for (i, s) in seqs.iter().enumerate().skip(2) {
        let star = rearrange_sym(s)?;
        if i < star_from && &star != s {
            return Err(Error::PreconditionViolated(format!(
                "sequence {i} precedes star_from but is not symmetric decreasing"
            )));
        }
        rhs_seqs.push(star);
    }
    Ok((sum_at_zero(seqs), sum_at_zero(&rhs_seqs)))
}

/// `P(Y ∈ [-k,k]) ≤ P(Y' ∈ [-k,k])` for every `k` up to the larger support radius.
pub fn peakedness_dominates(mu_y: &Dist, mu_yp: &Dist) -> Result<bool> {
    let r = mu_y.radius()?.max(mu_yp.radius()?);
    for k in 0..=r {
        if mu_y.interval_prob(k)? > mu_yp.interval_prob(k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_symmetric_unimodal(d: &Dist, name: &str) -> Result<()> {
    if !d.is_symmetric() {
        return Err(Error::PreconditionViolated(format!("{name} is not symmetric")));
    }
    if !d.is_unimodal()? {
        return Err(Error::PreconditionViolated(format!("{name} is not unimodal")));
    }
    Ok(())
}

/// `(P(X+Y ∈ [-k,k]), P(X+Y' ∈ [-k,k]))` for symmetric unimodal integer laws
/// with `Y'` at least as peaked as `Y`. The first never exceeds the second.
pub fn birnbaum_check(mu_x: &Dist, mu_y: &Dist, mu_yp: &Dist, k: u64) -> Result<(Rational, Rational)> {
    require_symmetric_unimodal(mu_x, "X")?;
    require_symmetric_unimodal(mu_y, "Y")?;
    require_symmetric_unimodal(mu_yp, "Y'")?;
    if !peakedness_dominates(mu_y, mu_yp)? {
        return Err(Error::PreconditionViolated("Y' is not more peaked than Y".into()));
    }
    Ok((
        mu_x.convolve(mu_y)?.interval_prob(k)?,
        mu_x.convolve(mu_yp)?.interval_prob(k)?,
    ))
}

/// Peakedness of sums: swaps `xs[i]` for the more peaked `ys[i]` one summand at
/// a time. Returns `P(· ∈ [-k,k])` along the chain, starting from
/// `Σ xs` and ending at `Σ ys`; each step is one [`birnbaum_check`].
pub fn peakedness_chain(xs: &[Dist], ys: &[Dist], k: u64) -> Result<Vec<Rational>> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::PreconditionViolated("need two equally long non-empty lists".into()));
    }
    let mut chain = Vec::with_capacity(xs.len() + 1);
    for i in 0..xs.len() {
        // rest = ys[..i] + xs[i+1..]
        let rest: Vec<&Dist> = ys[..i].iter().chain(&xs[i + 1..]).collect();
        let rest = if rest.is_empty() {
            Dist::point(crate::dist::LatticePoint::scalar(0))
        } else {
            Dist::convolve_all(rest)?
        };
        let (before, after) = birnbaum_check(&rest, &xs[i], &ys[i], k)?;
        if i == 0 {
            chain.push(before);
        }
        chain.push(after);
    }
    Ok(chain)
}

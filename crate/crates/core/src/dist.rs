//! Finitely supported probability measures on integer lattices, with exact
//! rational masses.
//!
//! A [`Dist`] is always canonical: masses are strictly positive, sum to
//! exactly one, and atoms are kept in lexicographic order of their points.
//! Two `Dist` values are therefore equal iff they describe the same measure,
//! and serialization is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exact, always-reduced fraction.
pub type Rational = BigRational;

/// Builds `num/den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Always `num/den`, including integers (`"1/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Converts an exact value to `f64` as the very last step of a computation.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A point of ℤ^d. Ordering is lexicographic on coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePoint(Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty);
        }
        Ok(LatticePoint(coords))
    }

    pub fn scalar(x: i64) -> Self {
        LatticePoint(vec![x])
    }

    pub fn zero(dim: usize) -> Self {
        LatticePoint(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// The single coordinate of a one-dimensional point.
    pub fn as_scalar(&self) -> Option<i64> {
        match self.0.as_slice() {
            [x] => Some(*x),
            _ => None,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }

    pub fn checked_neg(&self) -> Result<Self> {
        self.0
            .iter()
            .map(|a| a.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }

    fn checked_scale(&self, c: i64) -> Result<Self> {
        self.0
            .iter()
            .map(|a| a.checked_mul(c).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticePoint)
    }
}

impl From<i64> for LatticePoint {
    fn from(x: i64) -> Self {
        LatticePoint::scalar(x)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_scalar() {
            Some(x) => write!(f, "{x}"),
            None => {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Finitely supported probability measure on ℤ^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dist {
    dim: usize,
    atoms: BTreeMap<LatticePoint, Rational>,
}

impl Dist {
    /// Builds a canonical distribution, merging duplicate points and dropping
    /// zero masses. The masses must sum to exactly one.
    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, Rational)>,
    {
        let mut dim = None;
        let mut atoms: BTreeMap<LatticePoint, Rational> = BTreeMap::new();
        for (x, m) in entries {
            let d = *dim.get_or_insert(x.dim());
            if x.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
            }
            if m.is_negative() {
                return Err(Error::NegativeMass { mass: m });
            }
            *atoms.entry(x).or_insert_with(Rational::zero) += m;
        }
        let dim = dim.ok_or(Error::Empty)?;
        atoms.retain(|_, m| !m.is_zero());
        let total: Rational = atoms.values().sum();
        if !total.is_one() {
            return Err(Error::MassNotOne { deficit: Rational::one() - total });
        }
        Ok(Dist { dim, atoms })
    }

    /// One-dimensional convenience constructor.
    pub fn on_integers<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        Dist::new(entries.into_iter().map(|(x, m)| (LatticePoint::scalar(x), m)))
    }

    /// Point mass at `x`.
    pub fn point(x: LatticePoint) -> Self {
        Dist { dim: x.dim(), atoms: BTreeMap::from([(x, Rational::one())]) }
    }

    /// Uniform distribution on the integers `lo..=hi`.
    pub fn uniform_range(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::Empty);
        }
        let n = hi - lo + 1;
        Dist::on_integers((lo..=hi).map(|x| (x, ratio(1, n))))
    }

    /// Skips the mass check; the caller guarantees a probability measure.
    /// Zero masses are still dropped.
    pub(crate) fn from_atoms_unchecked(dim: usize, mut atoms: BTreeMap<LatticePoint, Rational>) -> Self {
        atoms.retain(|_, m| !m.is_zero());
        debug_assert!(atoms.values().sum::<Rational>().is_one());
        Dist { dim, atoms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    /// Atoms in canonical (lexicographic) order.
    pub fn atoms(&self) -> impl DoubleEndedIterator<Item = (&LatticePoint, &Rational)> + ExactSizeIterator {
        self.atoms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &LatticePoint> {
        self.atoms.keys()
    }

    /// Mass at `x`; zero off the support.
    pub fn atom(&self, x: &LatticePoint) -> Rational {
        self.atoms.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn atom_at(&self, x: i64) -> Rational {
        self.atom(&LatticePoint::scalar(x))
    }

    fn check_dim(&self, other_dim: usize) -> Result<()> {
        if self.dim != other_dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other_dim });
        }
        Ok(())
    }

    fn require_1d(&self) -> Result<()> {
        self.check_dim(1)
    }

    /// Least common denominator of all masses and the matching integer numerators.
    fn integer_masses(&self) -> (BigInt, Vec<(&LatticePoint, BigInt)>) {
        let den = self.atoms.values().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
        let nums = self
            .atoms
            .iter()
            .map(|(x, m)| (x, m.numer() * (&den / m.denom())))
            .collect();
        (den, nums)
    }

    /// Law of `X + Y` for independent `X ~ self`, `Y ~ other`.
    pub fn convolve(&self, other: &Dist) -> Result<Dist> {
        self.check_dim(other.dim)?;
        let (da, na) = self.integer_masses();
        let (db, nb) = other.integer_masses();
        let mut acc: BTreeMap<LatticePoint, BigInt> = BTreeMap::new();
        for (x, a) in &na {
            for (y, b) in &nb {
                let z = x.checked_add(y)?;
                *acc.entry(z).or_insert_with(BigInt::zero) += a * b;
            }
        }
        let den = da * db;
        let atoms = acc
            .into_iter()
            .map(|(z, n)| (z, Rational::new(n, den.clone())))
            .collect();
        Ok(Dist::from_atoms_unchecked(self.dim, atoms))
    }

    /// Convolution of a non-empty sequence of distributions.
    pub fn convolve_all<'a, I>(dists: I) -> Result<Dist>
    where
        I: IntoIterator<Item = &'a Dist>,
    {
        let mut it = dists.into_iter();
        let first = it.next().ok_or(Error::Empty)?.clone();
        it.try_fold(first, |acc, d| acc.convolve(d))
    }

    /// `times`-fold self-convolution; `times = 0` gives the point mass at the origin.
    pub fn convolve_power(&self, times: usize) -> Result<Dist> {
        let mut result = Dist::point(LatticePoint::zero(self.dim));
        let mut base = self.clone();
        let mut e = times;
        while e > 0 {
            if e & 1 == 1 {
                result = result.convolve(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.convolve(&base)?;
            }
        }
        Ok(result)
    }

    /// Pushforward under `x ↦ -x`.
    pub fn negate(&self) -> Dist {
        self.try_negate().expect("coordinate overflow in negate")
    }

    pub fn try_negate(&self) -> Result<Dist> {
        let atoms = self
            .atoms
            .iter()
            .map(|(x, m)| Ok((x.checked_neg()?, m.clone())))
            .collect::<Result<_>>()?;
        Ok(Dist { dim: self.dim, atoms })
    }

    /// Pushforward under `x ↦ x + v`.
    pub fn shift(&self, v: &LatticePoint) -> Result<Dist> {
        self.check_dim(v.dim())?;
        let atoms = self
            .atoms
            .iter()
            .map(|(x, m)| Ok((x.checked_add(v)?, m.clone())))
            .collect::<Result<_>>()?;
        Ok(Dist { dim: self.dim, atoms })
    }

    /// Pushforward under `x ↦ c·x` for a nonzero integer `c`.
    pub fn scale(&self, c: i64) -> Result<Dist> {
        if c == 0 {
            return Err(Error::ZeroWeight { index: 0 });
        }
        let atoms = self
            .atoms
            .iter()
            .map(|(x, m)| Ok((x.checked_scale(c)?, m.clone())))
            .collect::<Result<_>>()?;
        Ok(Dist { dim: self.dim, atoms })
    }

    /// Pushforward of a one-dimensional law under `t ↦ t·a` for `a ∈ ℤ^d`.
    pub fn embed_along(&self, a: &[i64]) -> Result<Dist> {
        self.require_1d()?;
        if a.is_empty() {
            return Err(Error::Empty);
        }
        if a.iter().all(|c| *c == 0) {
            return Err(Error::ZeroWeight { index: 0 });
        }
        let mut atoms = BTreeMap::new();
        for (x, m) in &self.atoms {
            let t = x.0[0];
            let p = a
                .iter()
                .map(|c| c.checked_mul(t).ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?;
            *atoms.entry(LatticePoint(p)).or_insert_with(Rational::zero) += m;
        }
        Ok(Dist { dim: a.len(), atoms })
    }

    /// Largest atom and its lexicographically smallest location.
    pub fn concentration(&self) -> (Rational, LatticePoint) {
        let mut best: Option<(&LatticePoint, &Rational)> = None;
        for (x, m) in &self.atoms {
            if best.is_none_or(|(_, b)| m > b) {
                best = Some((x, m));
            }
        }
        let (x, m) = best.expect("distribution has non-empty support");
        (m.clone(), x.clone())
    }

    /// Every point where the largest atom is attained.
    pub fn argmax_all(&self) -> Vec<LatticePoint> {
        let (q, _) = self.concentration();
        self.atoms
            .iter()
            .filter(|(_, m)| **m == q)
            .map(|(x, _)| x.clone())
            .collect()
    }

    /// `Σ_x μ{x}²`, the probability that two independent copies coincide.
    pub fn collision_probability(&self) -> Rational {
        self.atoms.values().map(|m| m * m).sum()
    }

    /// `P(X ∈ [-k, k])`.
    pub fn interval_prob(&self, k: u64) -> Result<Rational> {
        self.require_1d()?;
        let k = i64::try_from(k).unwrap_or(i64::MAX);
        Ok(self
            .atoms
            .range(LatticePoint::scalar(-k)..=LatticePoint::scalar(k))
            .map(|(_, m)| m)
            .sum())
    }

    /// Largest `|x|` over the support (one-dimensional).
    pub fn radius(&self) -> Result<u64> {
        self.require_1d()?;
        Ok(self.atoms.keys().map(|x| x.0[0].unsigned_abs()).max().unwrap_or(0))
    }

    pub fn is_symmetric(&self) -> bool {
        self.try_negate().is_ok_and(|n| &n == self)
    }

    /// Masses nondecreasing up to a mode and nonincreasing afterwards, with
    /// absent integers inside the support range counting as mass zero.
    pub fn is_unimodal(&self) -> Result<bool> {
        self.require_1d()?;
        let mut prev: Option<(i64, &Rational)> = None;
        let mut descending = false;
        for (x, m) in &self.atoms {
            let x = x.0[0];
            if let Some((px, pm)) = prev {
                if x != px + 1 {
                    // an interior zero between two positive atoms
                    return Ok(false);
                }
                if m > pm {
                    if descending {
                        return Ok(false);
                    }
                } else if m < pm {
                    descending = true;
                }
            }
            prev = Some((x, m));
        }
        Ok(true)
    }

    /// `other ~ self` or `other ~ -self`.
    pub fn same_type(&self, other: &Dist) -> Result<bool> {
        self.check_dim(other.dim)?;
        Ok(self == other || self.try_negate().is_ok_and(|n| &n == other))
    }

    pub fn mean(&self) -> Result<Rational> {
        self.require_1d()?;
        Ok(self.atoms.iter().map(|(x, m)| m * int(x.0[0])).sum())
    }

    /// Exact `E X² − (E X)²`.
    pub fn variance(&self) -> Result<Rational> {
        let mean = self.mean()?;
        let second: Rational = self
            .atoms
            .iter()
            .map(|(x, m)| {
                let x = int(x.0[0]);
                m * &x * &x
            })
            .sum();
        Ok(second - &mean * &mean)
    }

    /// Canonical JSON object `{"dim": d, "atoms": [[[c..], "n/d"], ..]}`.
    pub fn to_json_value(&self) -> Value {
        let atoms: Vec<Value> = self
            .atoms
            .iter()
            .map(|(x, m)| json!([x.0, format_rational(m)]))
            .collect();
        json!({ "dim": self.dim, "atoms": atoms })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json_value(v: &Value) -> Result<Dist> {
        let bad = |what: &str| Error::Parse(format!("distribution JSON: {what}"));
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing integer \"dim\""))? as usize;
        let atoms = v
            .get("atoms")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array \"atoms\""))?;
        let mut entries = Vec::with_capacity(atoms.len());
        for a in atoms {
            let pair = a.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("atom is not a pair"))?;
            let coords = pair[0]
                .as_array()
                .ok_or_else(|| bad("point is not an array"))?
                .iter()
                .map(|c| c.as_i64().ok_or_else(|| bad("coordinate is not an integer")))
                .collect::<Result<Vec<_>>>()?;
            let mass = match &pair[1] {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) if n.is_i64() => int(n.as_i64().unwrap_or_default()),
                _ => return Err(bad("mass must be a \"num/den\" string")),
            };
            let point = LatticePoint::new(coords)?;
            if point.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: point.dim() });
            }
            entries.push((point, mass));
        }
        Dist::new(entries)
    }

    pub fn from_json(s: &str) -> Result<Dist> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Dist::from_json_value(&v)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, m)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}: {m}")?;
        }
        write!(f, "}}")
    }
}

/// Weights applied to the summands of `Σ a_i X_i`.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightVector {
    /// Rational scalars; components may live in any common dimension.
    Scalars(Vec<Rational>),
    /// Rational vectors in ℚ^d; components must be one-dimensional.
    Vectors(Vec<Vec<Rational>>),
}

impl WeightVector {
    pub fn len(&self) -> usize {
        match self {
            WeightVector::Scalars(w) => w.len(),
            WeightVector::Vectors(w) => w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn integers(ws: &[i64]) -> Self {
        WeightVector::Scalars(ws.iter().map(|w| int(*w)).collect())
    }
}

/// Law of a weighted sum after rescaling onto an integer lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSum {
    pub dist: Dist,
    /// Every weight was multiplied by this positive integer.
    pub scale: BigInt,
}

fn to_i64(r: &BigInt) -> Result<i64> {
    r.to_i64().ok_or(Error::Overflow)
}

/// Law of `Σ a_i X_i` for independent `X_i ~ components[i]`.
///
/// Rational weights are cleared of denominators by their common LCM; point
/// probabilities are invariant under that common scaling.
pub fn weighted_sum(weights: &WeightVector, components: &[Dist]) -> Result<WeightedSum> {
    if weights.len() != components.len() {
        return Err(Error::PreconditionViolated(format!(
            "{} weights for {} components",
            weights.len(),
            components.len()
        )));
    }
    if components.is_empty() {
        return Err(Error::Empty);
    }
    let all: Vec<&Rational> = match weights {
        WeightVector::Scalars(w) => w.iter().collect(),
        WeightVector::Vectors(w) => w.iter().flatten().collect(),
    };
    let scale = all.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scaled = |r: &Rational| to_i64(&(r.numer() * (&scale / r.denom())));

    let mut parts = Vec::with_capacity(components.len());
    match weights {
        WeightVector::Scalars(w) => {
            let dim = components[0].dim();
            for (i, (a, c)) in w.iter().zip(components).enumerate() {
                if a.is_zero() {
                    return Err(Error::ZeroWeight { index: i });
                }
                c.check_dim(dim).map_err(|_| Error::DimensionMismatch { expected: dim, found: c.dim() })?;
                parts.push(c.scale(scaled(a)?)?);
            }
        }
        WeightVector::Vectors(w) => {
            let dim = w[0].len();
            for (i, (a, c)) in w.iter().zip(components).enumerate() {
                if a.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: a.len() });
                }
                if a.iter().all(Zero::is_zero) {
                    return Err(Error::ZeroWeight { index: i });
                }
                let a = a.iter().map(scaled).collect::<Result<Vec<_>>>()?;
                parts.push(c.embed_along(&a)?);
            }
        }
    }
    let dist = Dist::convolve_all(&parts)?;
    Ok(WeightedSum { dist, scale })
}

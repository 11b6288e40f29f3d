//! Exhaustive scans: optimal number of negative signs for Bernoulli sums,
//! phase diagrams over `p`, sign-vector and weight-grid searches, and
//! direct checks of the bounded-concentration and monotonicity bounds.
//!
//! All scans are exact and deterministic. Parallel evaluation only changes
//! wall time; aggregation always follows input order.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::Serialize;

use crate::dist::{format_rational, int, ratio, weighted_sum, Dist, LatticePoint, Rational, WeightVector};
use crate::error::{Error, Result};
use crate::families::{mode_window, signed_binomial, u_alpha, AlphaParam, BernoulliParam};
use crate::par::{self, ExecMode};
use crate::reduction::alternating_self_sum;
use crate::report::{ser_rational, ser_rationals};

/// Law of `B_{n−k,p} − B'_{k,p}` for independent binomials.
pub fn signed_binomial_diff(n: usize, k: usize, p: &Rational) -> Result<Dist> {
    if k > n {
        return Err(Error::ParamOutOfRange(format!("k = {k} exceeds n = {n}")));
    }
    let bp = BernoulliParam::at_most_half(p.clone())?;
    Ok(signed_binomial(n - k, k, &bp))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KRow {
    pub k: usize,
    /// Mean `(n − 2k)p`.
    #[serde(serialize_with = "ser_rational")]
    pub mean: Rational,
    /// Point of `{⌊μ⌋, ⌈μ⌉}` with the larger atom (smaller point on ties).
    pub x: i64,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    /// Every global argmax of the law lies in `{⌊μ⌋, ⌈μ⌉}`.
    pub darroch_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KScanResult {
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub p: Rational,
    /// Smallest maximizing `k`.
    pub best_k: usize,
    /// Every maximizing `k` in `0..=⌊n/2⌋`.
    pub best_ks: Vec<usize>,
    pub best_x: i64,
    #[serde(serialize_with = "ser_rational")]
    pub best_value: Rational,
    /// Rows for `k ≤ ⌊n/2⌋`; `k` and `n − k` give mirrored laws.
    pub per_k: Vec<KRow>,
}

impl KScanResult {
    pub fn darroch_holds(&self) -> bool {
        self.per_k.iter().all(|r| r.darroch_ok)
    }
}

fn k_row(n: usize, k: usize, bp: &BernoulliParam) -> KRow {
    let law = signed_binomial(n - k, k, bp);
    let mean = int((n - 2 * k) as i64) * bp.value();
    let (lo, hi) = mode_window(&mean);
    let (v_lo, v_hi) = (law.atom_at(lo), law.atom_at(hi));
    let (x, value) = if v_hi > v_lo { (hi, v_hi) } else { (lo, v_lo) };
    let darroch_ok = law
        .argmax_all()
        .iter()
        .all(|a| a.as_scalar().is_some_and(|a| a == lo || a == hi));
    KRow { k, mean, x, value, darroch_ok }
}

/// `max_k max_{x' ∈ {⌊μ⌋,⌈μ⌉}} P(B_{n−k,p} − B'_{k,p} = x')` for any `n ≥ 1`.
pub fn k_scan(n: usize, p: &Rational) -> Result<KScanResult> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("n must be at least 1".into()));
    }
    let bp = BernoulliParam::at_most_half(p.clone())?;
    let per_k: Vec<KRow> = (0..=n / 2).map(|k| k_row(n, k, &bp)).collect();
    let best_value = per_k.iter().map(|r| &r.value).max().expect("at least one row").clone();
    let best_ks: Vec<usize> = per_k.iter().filter(|r| r.value == best_value).map(|r| r.k).collect();
    let best = &per_k[best_ks[0]];
    Ok(KScanResult {
        n,
        p: p.clone(),
        best_k: best.k,
        best_ks: best_ks.clone(),
        best_x: best.x,
        best_value,
        per_k,
    })
}

/// [`k_scan`] restricted to odd `n`.
pub fn optimal_k_scan(n: usize, p: &Rational) -> Result<KScanResult> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    k_scan(n, p)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseCell {
    #[serde(serialize_with = "ser_rational")]
    pub p: Rational,
    pub best_ks: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub best_value: Rational,
    pub darroch_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub n: usize,
    pub cells: Vec<PhaseCell>,
    /// Distinct smallest optimizers over all cells.
    pub summary: BTreeSet<usize>,
    /// Every `k` that is optimal somewhere, ties included.
    pub tie_union: BTreeSet<usize>,
}

impl PhaseDiagram {
    pub fn darroch_holds(&self) -> bool {
        self.cells.iter().all(|c| c.darroch_ok)
    }

    pub const CSV_HEADER: &'static str = "n,p_num,p_den,best_k_set,best_value";

    /// One row per cell; `best_k_set` is `;`-separated, `best_value` is `num/den`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for c in &self.cells {
            let ks: Vec<String> = c.best_ks.iter().map(|k| k.to_string()).collect();
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                self.n,
                c.p.numer(),
                c.p.denom(),
                ks.join(";"),
                format_rational(&c.best_value)
            ));
        }
        s
    }
}

/// `i/(2·count)` for `i = 1..=count`: equispaced points of `(0, 1/2]`.
pub fn default_grid(count: usize) -> Vec<Rational> {
    (1..=count as i64).map(|i| ratio(i, 2 * count as i64)).collect()
}

pub fn k_phase_scan(n: usize, grid: &[Rational]) -> Result<PhaseDiagram> {
    k_phase_scan_with(n, grid, ExecMode::default())
}

pub fn k_phase_scan_with(n: usize, grid: &[Rational], mode: ExecMode) -> Result<PhaseDiagram> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    if grid.is_empty() {
        return Err(Error::ParamOutOfRange("empty p grid".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::ParamOutOfRange("p grid must be strictly increasing".into()));
    }
    let scans = par::try_map(mode, grid, |p| optimal_k_scan(n, p))?;
    let cells: Vec<PhaseCell> = scans
        .into_iter()
        .map(|s| PhaseCell { darroch_ok: s.darroch_holds(), p: s.p, best_ks: s.best_ks, best_value: s.best_value })
        .collect();
    let summary = cells.iter().map(|c| c.best_ks[0]).collect();
    let tie_union = cells.iter().flat_map(|c| c.best_ks.iter().copied()).collect();
    Ok(PhaseDiagram { n, cells, summary, tie_union })
}

/// What to maximize over in a sign or weight search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// `max_x P(Σ = x)`
    All,
    /// `P(Σ = x)` at a fixed point.
    At(LatticePoint),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignSearch {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    /// Lexicographically smallest maximizing sign vector (`-1 < 1`).
    pub signs: Vec<i8>,
    /// Location of the maximal atom.
    pub x: Vec<i64>,
    /// `value` for each number of `+1` signs, `0..=n`.
    #[serde(serialize_with = "ser_rationals")]
    pub by_plus_count: Vec<Rational>,
}

pub const MAX_SIGN_N: usize = 24;

fn target_value(law: &Dist, target: &Target) -> (Rational, LatticePoint) {
    match target {
        Target::All => law.concentration(),
        Target::At(x) => (law.atom(x), x.clone()),
    }
}

/// Best `±1` weighting of `n` iid copies of `dist`.
///
/// For iid summands the law of `Σ w_i X_i` depends only on how many signs are
/// `+1`, so the `2ⁿ` patterns collapse to `n + 1` classes; within a class the
/// lexicographically smallest vector puts all `-1`s first.
pub fn sign_vector_max(dist: &Dist, n: usize, target: &Target) -> Result<SignSearch> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("n must be at least 1".into()));
    }
    if n > MAX_SIGN_N {
        return Err(Error::TooLarge { size: 1u128 << (n - 1), cap: 1u128 << (MAX_SIGN_N - 1) });
    }
    if let Target::At(x) = target {
        if x.dim() != dist.dim() {
            return Err(Error::DimensionMismatch { expected: dist.dim(), found: x.dim() });
        }
    }
    let neg = dist.negate();
    let mut by_plus_count = Vec::with_capacity(n + 1);
    let mut best: Option<(Rational, usize, LatticePoint)> = None;
    for plus in 0..=n {
        let law = dist.convolve_power(plus)?.convolve(&neg.convolve_power(n - plus)?)?;
        let (v, x) = target_value(&law, target);
        if best.as_ref().is_none_or(|(b, _, _)| v > *b) {
            best = Some((v.clone(), plus, x));
        }
        by_plus_count.push(v);
    }
    let (value, plus, x) = best.expect("n >= 1");
    let signs = std::iter::repeat_n(-1, n - plus).chain(std::iter::repeat_n(1, plus)).collect();
    Ok(SignSearch { value, signs, x: x.coords().to_vec(), by_plus_count })
}

/// Outcome of a weight-grid search; a counterexample candidate when `exceeds`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightSearch {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    #[serde(serialize_with = "ser_rationals")]
    pub weights: Vec<Rational>,
    pub x: Vec<i64>,
    /// Scale applied to the witness weights to reach the integer lattice of `x`.
    pub scale: String,
    #[serde(serialize_with = "ser_rational")]
    pub sign_value: Rational,
    pub exceeds: bool,
    /// Weight classes evaluated after deduplication.
    pub evaluated: usize,
}

pub const DEFAULT_WEIGHT_CAP: u128 = 10_000_000;

/// Canonical representative of a weight multiset under `t ↦ c·t`, `c ≠ 0`.
fn canonical_weights(ws: &[Rational]) -> Vec<Rational> {
    ws.iter()
        .map(|pivot| {
            let mut v: Vec<Rational> = ws.iter().map(|w| w / pivot).collect();
            v.sort();
            v
        })
        .min()
        .expect("non-empty weights")
}

fn multisets(grid: &[Rational], n: usize) -> Vec<Vec<Rational>> {
    fn go(grid: &[Rational], start: usize, n: usize, cur: &mut Vec<Rational>, out: &mut Vec<Vec<Rational>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..grid.len() {
            cur.push(grid[i].clone());
            go(grid, i, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(grid, 0, n, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn weight_grid_search(dist: &Dist, n: usize, grid: &[Rational], cap: u128) -> Result<WeightSearch> {
    weight_grid_search_with(dist, n, grid, cap, ExecMode::default())
}

/// `max_{a ∈ gridⁿ} max_x P(Σ a_i X_i = x)` over `n` iid copies of `dist`.
///
/// Tuples that agree up to reordering (the summands are iid) or up to a
/// common nonzero factor have the same maximal atom and are evaluated once.
pub fn weight_grid_search_with(
    dist: &Dist,
    n: usize,
    grid: &[Rational],
    cap: u128,
    mode: ExecMode,
) -> Result<WeightSearch> {
    if n == 0 {
        return Err(Error::ParamOutOfRange("n must be at least 1".into()));
    }
    if let Some(i) = grid.iter().position(Zero::is_zero) {
        return Err(Error::ZeroWeight { index: i });
    }
    let size = (grid.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    let grid: Vec<Rational> = grid.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if grid.is_empty() {
        return Err(Error::ParamOutOfRange("empty weight grid".into()));
    }

    let mut classes: BTreeMap<Vec<Rational>, Vec<Rational>> = BTreeMap::new();
    for ms in multisets(&grid, n) {
        classes.entry(canonical_weights(&ms)).or_insert(ms);
    }
    let reps: Vec<Vec<Rational>> = classes.into_values().collect();
    let copies = vec![dist.clone(); n];
    let evals = par::try_map(mode, &reps, |w| {
        let ws = weighted_sum(&WeightVector::Scalars(w.clone()), &copies)?;
        let (v, x) = ws.dist.concentration();
        Ok::<_, Error>((v, x, ws.scale))
    })?;
    let (best_i, _) = evals
        .iter()
        .enumerate()
        .fold((0, &evals[0].0), |best, (i, (v, _, _))| if *v > *best.1 { (i, v) } else { best });
    let (value, x, scale) = evals[best_i].clone();

    let sign = sign_vector_max(dist, n, &Target::All)?;
    let has_unit_signs = grid.contains(&int(1)) || grid.contains(&int(-1));
    if has_unit_signs && value < sign.value {
        return Err(Error::PreconditionViolated(format!(
            "inconsistent search: grid contains ±1 but found {value} < sign optimum {}",
            sign.value
        )));
    }
    Ok(WeightSearch {
        exceeds: value > sign.value,
        value,
        weights: reps[best_i].clone(),
        x: x.coords().to_vec(),
        scale: scale.to_string(),
        sign_value: sign.value,
        evaluated: reps.len(),
    })
}

/// `(P(X_1 + ⋯ + X_n = x), P(U_1 − U_2 + ⋯ − U_n = 0))` for even `n` and
/// summands of concentration at most `α`; the first never exceeds the second.
pub fn theorem2_check(dists: &[Dist], alpha: &AlphaParam, x: &LatticePoint) -> Result<(Rational, Rational)> {
    let n = dists.len();
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    for d in dists {
        let (q, _) = d.concentration();
        if &q > alpha.value() {
            return Err(Error::QTooLarge { q: Box::new(q), alpha: Box::new(alpha.value().clone()) });
        }
    }
    let lhs = Dist::convolve_all(dists)?.atom(x);
    let rhs = alternating_u_alpha_zero(n, alpha)?;
    Ok((lhs, rhs))
}

/// `P(U_1 − U_2 + ⋯ + U_{n−1} − U_n = 0)` for iid `U^α`, `n` even.
pub fn alternating_u_alpha_zero(n: usize, alpha: &AlphaParam) -> Result<Rational> {
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    Ok(u_alpha(alpha).convolve_power(n / 2)?.collision_probability())
}

/// `Q` of each partial convolution `X_1`, `X_1 + X_2`, ….
pub fn monotonicity_check(dists: &[Dist]) -> Result<Vec<Rational>> {
    let mut out = Vec::with_capacity(dists.len());
    let mut acc: Option<Dist> = None;
    for d in dists {
        let next = match &acc {
            None => d.clone(),
            Some(a) => a.convolve(d)?,
        };
        out.push(next.concentration().0);
        acc = Some(next);
    }
    Ok(out)
}

pub fn is_non_increasing(qs: &[Rational]) -> bool {
    qs.windows(2).all(|w| w[1] <= w[0])
}

/// Exploratory probe with no known answer in general: compares `max_x P(X_1 + ⋯ + X_n = x)` for `n` iid copies of `dist` with
/// the best `±1` weighting of iid `U^α`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UAlphaSignProbe {
    #[serde(serialize_with = "ser_rational")]
    pub sum_value: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub u_alpha_value: Rational,
    pub u_alpha_signs: Vec<i8>,
    pub exceeds: bool,
}

pub fn u_alpha_sign_probe(dist: &Dist, n: usize, alpha: &AlphaParam) -> Result<UAlphaSignProbe> {
    let (q, _) = dist.concentration();
    if &q > alpha.value() {
        return Err(Error::QTooLarge { q: Box::new(q), alpha: Box::new(alpha.value().clone()) });
    }
    let sum_value = dist.convolve_power(n)?.concentration().0;
    let best = sign_vector_max(&u_alpha(alpha), n, &Target::All)?;
    Ok(UAlphaSignProbe {
        exceeds: sum_value > best.value,
        sum_value,
        u_alpha_value: best.value,
        u_alpha_signs: best.signs,
    })
}

/// Law of the balanced alternating sum of `n` iid copies, `n` even.
pub fn balanced_law(dist: &Dist, n: usize) -> Result<Dist> {
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    alternating_self_sum(dist, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bernoulli, binomial, t_n};

    fn bp(a: i64, b: i64) -> BernoulliParam {
        BernoulliParam::new(ratio(a, b)).unwrap()
    }

    #[test]
    fn signed_binomial_examples() {
        let p = ratio(2, 7);
        assert_eq!(signed_binomial_diff(5, 0, &p).unwrap(), binomial(5, &bp(2, 7)));
        for n in 1..=9 {
            assert_eq!(signed_binomial_diff(n, n / 2, &p).unwrap(), t_n(n, &bp(2, 7)).unwrap());
        }
        // P(B_2 - B_1 = 0) = P(B_2=0)P(B_1=0) + P(B_2=1)P(B_1=1) = 0.36·0.6 + 0.48·0.4
        let d = signed_binomial_diff(3, 1, &ratio(2, 5)).unwrap();
        assert_eq!(d.atom_at(0), ratio(36, 100) * ratio(6, 10) + ratio(48, 100) * ratio(4, 10));
        assert_eq!(d.atom_at(0), ratio(51, 125));
        assert!(signed_binomial_diff(3, 4, &p).is_err());
    }

    #[test]
    fn optimal_k_examples() {
        let r = optimal_k_scan(3, &ratio(1, 2)).unwrap();
        assert_eq!((r.best_k, r.best_ks.clone(), r.best_value.clone()), (0, vec![0, 1], ratio(3, 8)));

        let r = optimal_k_scan(3, &ratio(2, 5)).unwrap();
        assert_eq!((r.best_k, r.best_value.clone()), (0, ratio(54, 125)));
        assert_eq!(r.best_value, int(3) * ratio(2, 5) * ratio(9, 25));
        assert_eq!(r.per_k[1].value, ratio(51, 125));

        let r = optimal_k_scan(3, &ratio(1, 3)).unwrap();
        assert_eq!((r.best_ks.clone(), r.best_value.clone()), (vec![0, 1], ratio(4, 9)));
        assert!(r.darroch_holds());

        assert_eq!(optimal_k_scan(4, &ratio(1, 3)), Err(Error::EvenN(4)));
        assert!(optimal_k_scan(3, &ratio(3, 5)).is_err());
    }

    #[test]
    fn even_n_prefers_balanced_signs() {
        for n in [2, 4, 6, 8, 10] {
            for p in [ratio(1, 10), ratio(1, 3), ratio(49, 100)] {
                let r = k_scan(n, &p).unwrap();
                assert_eq!(r.best_ks, vec![n / 2], "n={n} p={p}");
                assert!(r.darroch_holds());
            }
        }
    }

    #[test]
    fn phase_scan_small() {
        let grid = vec![ratio(1, 3), ratio(2, 5), ratio(1, 2)];
        let d = k_phase_scan(3, &grid).unwrap();
        assert!(d.summary.contains(&0));
        assert_eq!(d.cells[0].best_ks, vec![0, 1]);
        assert_eq!(d.cells[1].best_ks, vec![0]);
        assert_eq!(d.cells[2].best_ks, vec![0, 1]);
        assert!(d.darroch_holds());
        let one = k_phase_scan(5, &grid[..1]).unwrap();
        assert_eq!(one.cells.len(), 1);
        assert!(k_phase_scan(3, &[ratio(1, 2), ratio(1, 3)]).is_err());
        let csv = d.to_csv();
        assert!(csv.starts_with(PhaseDiagram::CSV_HEADER));
        assert!(csv.contains("3,1,3,0;1,4/9"));
    }

    #[test]
    fn phase_scan_is_mode_independent() {
        let grid = default_grid(24);
        let a = k_phase_scan_with(9, &grid, ExecMode::Sequential).unwrap();
        let b = k_phase_scan_with(9, &grid, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(grid.last().unwrap(), &ratio(1, 2));
    }

    /// Every sign vector, explicitly.
    fn brute_signs(dist: &Dist, n: usize, target: &Target) -> (Rational, Vec<i8>) {
        let mut best: Option<(Rational, Vec<i8>)> = None;
        for mask in 0..(1u32 << n) {
            // bit i (from the left) set means +1; counting up visits vectors in lex order
            let signs: Vec<i8> = (0..n).map(|i| if mask >> (n - 1 - i) & 1 == 1 { 1 } else { -1 }).collect();
            let w: Vec<i64> = signs.iter().map(|s| *s as i64).collect();
            let law = weighted_sum(&WeightVector::integers(&w), &vec![dist.clone(); n]).unwrap().dist;
            let (v, _) = target_value(&law, target);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, signs));
            }
        }
        best.unwrap()
    }

    #[test]
    fn sign_search_matches_enumeration() {
        let u = Dist::uniform_range(0, 2).unwrap();
        let skew = Dist::on_integers([(0, ratio(1, 2)), (1, ratio(1, 4)), (3, ratio(1, 4))]).unwrap();
        for d in [u, skew, bernoulli(&bp(1, 3))] {
            for n in 1..=5 {
                for target in [Target::All, Target::At(0.into()), Target::At(1.into())] {
                    let s = sign_vector_max(&d, n, &target).unwrap();
                    let (v, signs) = brute_signs(&d, n, &target);
                    assert_eq!(s.value, v);
                    assert_eq!(s.signs, signs, "n={n} target={target:?}");
                }
            }
        }
    }

    #[test]
    fn sign_search_examples() {
        let d = bernoulli(&bp(1, 3));
        assert_eq!(sign_vector_max(&d, 1, &Target::All).unwrap().value, d.concentration().0);
        for n in [2, 4, 6] {
            let s = sign_vector_max(&d, n, &Target::All).unwrap();
            assert_eq!(s.value, balanced_law(&d, n).unwrap().atom_at(0));
            assert_eq!(s.signs.iter().filter(|s| **s == 1).count(), n / 2);
        }
        assert!(matches!(sign_vector_max(&d, 25, &Target::All), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn canonical_weights_identify_scalings() {
        let a = canonical_weights(&[int(2), int(-4), int(6)]);
        let b = canonical_weights(&[ratio(3, 2), int(-1), ratio(1, 2)]);
        assert_eq!(a, b);
        assert_ne!(a, canonical_weights(&[int(1), int(1), int(2)]));
    }

    #[test]
    fn weight_grid_examples() {
        let d = Dist::uniform_range(0, 2).unwrap();
        let g = vec![int(-1), int(1)];
        let r = weight_grid_search(&d, 3, &g, DEFAULT_WEIGHT_CAP).unwrap();
        assert_eq!(r.value, r.sign_value);
        assert!(!r.exceeds);

        let b = bernoulli(&bp(1, 3));
        let g = vec![int(-2), int(-1), int(1), int(2)];
        for n in [2, 4] {
            let r = weight_grid_search(&b, n, &g, DEFAULT_WEIGHT_CAP).unwrap();
            assert!(!r.exceeds);
            assert_eq!(r.value, balanced_law(&b, n).unwrap().atom_at(0));
        }
        let r = weight_grid_search(&d, 3, &g, DEFAULT_WEIGHT_CAP).unwrap();
        assert!(!r.exceeds);

        assert!(matches!(weight_grid_search(&d, 8, &g, 1000), Err(Error::TooLarge { .. })));
        assert!(matches!(weight_grid_search(&d, 2, &[int(0), int(1)], 1000), Err(Error::ZeroWeight { .. })));
    }

    #[test]
    fn weight_grid_mode_independent() {
        let d = Dist::on_integers([(0, ratio(1, 2)), (1, ratio(1, 4)), (2, ratio(1, 4))]).unwrap();
        let g: Vec<Rational> = (-3..=3).filter(|x| *x != 0).map(int).collect();
        let a = weight_grid_search_with(&d, 3, &g, DEFAULT_WEIGHT_CAP, ExecMode::Sequential).unwrap();
        let b = weight_grid_search_with(&d, 3, &g, DEFAULT_WEIGHT_CAP, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bounded_concentration_examples() {
        let half = AlphaParam::new(ratio(1, 2)).unwrap();
        let x1 = Dist::uniform_range(0, 1).unwrap();
        let x2 = Dist::on_integers([(0, ratio(1, 2)), (5, ratio(1, 2))]).unwrap();
        for x in [0, 1, 5, 6] {
            assert_eq!(theorem2_check(&[x1.clone(), x2.clone()], &half, &x.into()).unwrap(), (ratio(1, 4), ratio(1, 2)));
        }
        // U^α minus a shifted copy hits the matching point with the optimal probability
        let a = AlphaParam::new(ratio(2, 5)).unwrap();
        let u = u_alpha(&a);
        let shifted = u.negate().shift(&7.into()).unwrap();
        let (l, r) = theorem2_check(&[u.clone(), shifted], &a, &7.into()).unwrap();
        assert_eq!(l, r);

        let third = AlphaParam::new(ratio(1, 3)).unwrap();
        let v = Dist::uniform_range(0, 2).unwrap();
        let (l, r) = theorem2_check(&[v.clone(), v.clone()], &third, &0.into()).unwrap();
        assert_eq!((l, r.clone()), (ratio(1, 9), ratio(1, 3)));

        assert_eq!(theorem2_check(std::slice::from_ref(&v), &third, &0.into()), Err(Error::OddN(1)));
        let b = bernoulli(&bp(1, 3));
        assert!(matches!(theorem2_check(&[b.clone(), b], &half, &0.into()), Err(Error::QTooLarge { .. })));
    }

    #[test]
    fn monotonicity_examples() {
        let b = bernoulli(&bp(1, 2));
        assert_eq!(
            monotonicity_check(&vec![b; 4]).unwrap(),
            vec![ratio(1, 2), ratio(1, 2), ratio(3, 8), ratio(3, 8)]
        );
        let d = Dist::point(0.into());
        assert_eq!(monotonicity_check(&vec![d; 3]).unwrap(), vec![int(1); 3]);
        let u = Dist::uniform_range(0, 4).unwrap();
        assert_eq!(monotonicity_check(&[u]).unwrap(), vec![ratio(1, 5)]);
    }

    #[test]
    fn u_alpha_probe_on_u_alpha_itself() {
        let a = AlphaParam::new(ratio(2, 5)).unwrap();
        for n in 1..=5 {
            let probe = u_alpha_sign_probe(&u_alpha(&a), n, &a).unwrap();
            assert!(!probe.exceeds);
            assert!(probe.u_alpha_value >= probe.sum_value);
        }
    }
}

//! Seeded random instance generators shared by the CLI and the test suites.
//!
//! Every generator draws from a caller-owned `ChaCha8Rng`, so a seed fully
//! determines an instance stream on every platform.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dist::{int, ratio, Dist, LatticePoint, Rational};
use crate::families::{mu_extremal, AlphaParam};
use crate::reduction::mix;
use crate::transforms::{peakedness_dominates, IndexedSeq};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random positive integer weights normalized to a probability vector.
fn masses(rng: &mut ChaCha8Rng, count: usize, max_weight: i64) -> Vec<Rational> {
    let w: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=max_weight)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

fn distinct_points(rng: &mut ChaCha8Rng, dim: usize, count: usize, spread: i64) -> Vec<LatticePoint> {
    assert!((count as u128) <= (2 * spread as u128 + 1).pow(dim as u32), "window too small");
    let mut pts: Vec<LatticePoint> = Vec::with_capacity(count);
    while pts.len() < count {
        let p = LatticePoint::new((0..dim).map(|_| rng.gen_range(-spread..=spread)).collect()).expect("dim >= 1");
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

/// Arbitrary measure on `Z^dim` with `1..=max_support` atoms in `[-spread, spread]^dim`.
pub fn random_dist(rng: &mut ChaCha8Rng, dim: usize, max_support: usize, spread: i64) -> Dist {
    let cells = (2 * spread + 1).pow(dim as u32) as usize;
    let size = rng.gen_range(1..=max_support.min(cells));
    let pts = distinct_points(rng, dim, size, spread);
    let ms = masses(rng, size, 6);
    Dist::new(pts.into_iter().zip(ms)).expect("masses sum to one")
}

/// A few small `α` values in `(0, 1]`, including non-integer reciprocals.
pub fn random_alpha(rng: &mut ChaCha8Rng) -> AlphaParam {
    let den = rng.gen_range(2..=9);
    let num = rng.gen_range(1..den);
    AlphaParam::new(ratio(num, den)).expect("num < den")
}

/// Random extreme point `μ_{α,A,y}` with atoms inside `[-spread, spread]^dim`.
pub fn random_extremal(rng: &mut ChaCha8Rng, alpha: &AlphaParam, dim: usize, spread: i64) -> Dist {
    let m = alpha.full_atoms();
    let pts = distinct_points(rng, dim, m + 1, spread);
    mu_extremal(alpha, &pts[..m], &pts[m]).expect("distinct points")
}

/// Measure with `Q ≤ α`, as a mixture of up to three extreme points.
pub fn random_bounded(rng: &mut ChaCha8Rng, alpha: &AlphaParam, dim: usize, spread: i64) -> Dist {
    let parts = rng.gen_range(1..=3);
    let mut d = random_extremal(rng, alpha, dim, spread);
    for i in 1..parts {
        let e = random_extremal(rng, alpha, dim, spread);
        // after i components the running mixture carries weight i/(i+1)
        d = mix(&ratio(i as i64, i as i64 + 1), &d, &e).expect("valid mixture");
    }
    d
}

/// Symmetric unimodal law on `[-radius, radius]` with nonincreasing masses in `|x|`.
pub fn random_symmetric_unimodal(rng: &mut ChaCha8Rng, radius: usize) -> Dist {
    let mut w: Vec<i64> = (0..=radius).map(|_| rng.gen_range(1..=8)).collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    let total: i64 = w[0] + 2 * w[1..].iter().sum::<i64>();
    let atoms = (-(radius as i64)..=radius as i64).map(|x| (x, ratio(w[x.unsigned_abs() as usize], total)));
    Dist::on_integers(atoms).expect("masses sum to one")
}

/// Nonnegative sequence of radius `radius`, not necessarily summable to one.
pub fn random_seq(rng: &mut ChaCha8Rng, radius: usize) -> IndexedSeq {
    let values = (0..2 * radius + 1).map(|_| ratio(rng.gen_range(0..=6), 6)).collect();
    IndexedSeq::new(values).expect("odd length")
}

/// Sequence whose values can be arranged symmetrically: a maximum plus pairs.
pub fn random_symmetrizable_seq(rng: &mut ChaCha8Rng, radius: usize) -> IndexedSeq {
    let pairs: Vec<Rational> = (0..radius).map(|_| ratio(rng.gen_range(0..=6), 6)).collect();
    let top = pairs.iter().max().cloned().unwrap_or_else(|| int(0)) + ratio(rng.gen_range(0..=3), 6);
    let mut values = vec![top];
    for v in pairs {
        values.push(v.clone());
        values.push(v);
    }
    values.shuffle(rng);
    IndexedSeq::new(values).expect("odd length")
}

/// Instance for the rearrangement inequality: two arbitrary sequences
/// followed by `extra` symmetrizable ones, all of radius at most `max_radius`.
pub fn random_gabriel(rng: &mut ChaCha8Rng, extra: usize, max_radius: usize) -> Vec<IndexedSeq> {
    let mut seqs = Vec::with_capacity(2 + extra);
    for _ in 0..2 {
        let r = rng.gen_range(0..=max_radius);
        seqs.push(random_seq(rng, r));
    }
    for _ in 0..extra {
        let r = rng.gen_range(0..=max_radius);
        seqs.push(random_symmetrizable_seq(rng, r));
    }
    seqs
}

/// `(X, Y, Y')` symmetric unimodal with `Y'` at least as peaked as `Y`.
pub fn random_birnbaum(rng: &mut ChaCha8Rng, max_radius: usize) -> (Dist, Dist, Dist) {
    let r = rng.gen_range(0..=max_radius);
    let x = random_symmetric_unimodal(rng, r);
    let r = rng.gen_range(0..=max_radius);
    let yp = random_symmetric_unimodal(rng, r);
    for _ in 0..16 {
        let r = rng.gen_range(0..=max_radius);
        let y = random_symmetric_unimodal(rng, r);
        if peakedness_dominates(&y, &yp).expect("scalar laws") {
            return (x, y, yp);
        }
    }
    // smoothing by an independent symmetric unimodal law spreads mass out
    let r = rng.gen_range(1..=max_radius.max(1));
    let z = random_symmetric_unimodal(rng, r);
    let y = yp.convolve(&z).expect("scalar laws");
    (x, y, yp)
}

/// Random scalar law on a small window, used for prefix and sign scans.
pub fn random_small_scalar(rng: &mut ChaCha8Rng, max_support: usize) -> Dist {
    let size = rng.gen_range(1..=max_support);
    let mut pts: Vec<i64> = (-4..=4).collect();
    pts.shuffle(rng);
    let ms = masses(rng, size, 5);
    Dist::on_integers(pts.into_iter().take(size).zip(ms)).expect("masses sum to one")
}

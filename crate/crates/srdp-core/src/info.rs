//! Entropy, mutual information, total variation, and the scalar helpers
//! used by every region computation.
//!
//! All logarithms are base 2; rates are bits per source symbol. Terms with
//! zero probability contribute zero (`0 log 0 = 0`), and mutual-information
//! values within `-1e-12` of zero are clamped to exactly zero so rounding
//! never produces a spurious negative rate.

use crate::error::{Result, SrdpError};
use crate::prob::{JointPmf, KahanAcc, Pmf};

/// An information quantity in bits (log base 2).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(pub f64);

impl Bits {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

const MI_CLAMP: f64 = 1e-12;

fn xlog2x(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Shannon entropy of a raw probability slice (need not be validated).
pub(crate) fn entropy_raw(probs: &[f64]) -> f64 {
    let mut acc = KahanAcc::default();
    for &p in probs {
        acc.add(-xlog2x(p));
    }
    acc.value()
}

/// Shannon entropy H(p) in bits.
pub fn entropy(p: &Pmf) -> Bits {
    Bits(entropy_raw(p.probs()))
}

/// Binary entropy function H_b(p) = -p log p - (1-p) log (1-p).
pub fn binary_entropy(p: f64) -> Result<Bits> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SrdpError::OutOfRange {
            what: "binary entropy argument",
            value: p,
            domain: "[0,1]",
        });
    }
    Ok(Bits(-xlog2x(p) - xlog2x(1.0 - p)))
}

/// Unique p in [0, 0.5] with H_b(p) = h, by bisection to 1e-10.
pub fn inverse_binary_entropy(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(SrdpError::OutOfRange {
            what: "inverse binary entropy argument",
            value: h,
            domain: "[0,1]",
        });
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // H_b is strictly increasing on [0, 0.5]; 60 halvings reach ~4e-19
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let hm = -xlog2x(mid) - xlog2x(1.0 - mid);
        if hm < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// I(A;B) = H(A) + H(B) - H(A,B) for a two-variable joint.
pub fn mutual_information(j: &JointPmf) -> Result<Bits> {
    if j.arity() != 2 {
        return Err(SrdpError::Precondition(format!(
            "mutual_information needs a 2-variable joint, got arity {}",
            j.arity()
        )));
    }
    let ha = entropy_raw(j.marginal_pmf(0)?.probs());
    let hb = entropy_raw(j.marginal_pmf(1)?.probs());
    let hab = entropy_raw(j.cells());
    Ok(Bits(clamp_mi(ha + hb - hab)))
}

/// I(A;B|C) = sum_c P(c) I(A;B | C=c) for a three-variable joint.
///
/// Conditioning letters with zero probability contribute zero.
pub fn conditional_mi(j: &JointPmf) -> Result<Bits> {
    if j.arity() != 3 {
        return Err(SrdpError::Precondition(format!(
            "conditional_mi needs a 3-variable joint, got arity {}",
            j.arity()
        )));
    }
    let (na, nb, nc) = (j.shape()[0], j.shape()[1], j.shape()[2]);
    let mut total = KahanAcc::default();
    for c in 0..nc {
        // slice P(a,b,c) at fixed c
        let mut mass = KahanAcc::default();
        let mut slab = vec![0.0f64; na * nb];
        for a in 0..na {
            for b in 0..nb {
                let v = j.cell(&[a, b, c]);
                slab[a * nb + b] = v;
                mass.add(v);
            }
        }
        let pc = mass.value();
        if pc <= 0.0 {
            continue;
        }
        for v in &mut slab {
            *v /= pc;
        }
        let mut pa = vec![0.0f64; na];
        let mut pb = vec![0.0f64; nb];
        for a in 0..na {
            for b in 0..nb {
                pa[a] += slab[a * nb + b];
                pb[b] += slab[a * nb + b];
            }
        }
        let mi = entropy_raw(&pa) + entropy_raw(&pb) - entropy_raw(&slab);
        total.add(pc * clamp_mi(mi));
    }
    Ok(Bits(clamp_mi(total.value())))
}

fn clamp_mi(v: f64) -> f64 {
    if v < 0.0 && v > -MI_CLAMP {
        0.0
    } else {
        v
    }
}

/// Total variation distance (1/2) sum |p - q|.
pub fn tv_distance(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.len() != q.len() {
        return Err(SrdpError::DimensionMismatch {
            context: "tv_distance alphabets",
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(tv_raw(p.probs(), q.probs()))
}

/// TV distance on raw slices of equal length.
pub(crate) fn tv_raw(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = KahanAcc::default();
    for (a, b) in p.iter().zip(q) {
        acc.add((a - b).abs());
    }
    0.5 * acc.value()
}

/// The crossover of cascaded binary symmetric channels:
/// a * b = a(1-b) + b(1-a).
pub fn star(a: f64, b: f64) -> Result<f64> {
    for (what, v) in [("star lhs", a), ("star rhs", b)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(SrdpError::OutOfRange {
                what,
                value: v,
                domain: "[0,1]",
            });
        }
    }
    Ok(a * (1.0 - b) + b * (1.0 - a))
}

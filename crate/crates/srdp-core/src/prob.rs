//! Exact finite-alphabet probability arithmetic.
//!
//! Everything here is plain `f64` over dense alphabets. Probability vectors
//! must sum to one within [`TOL_CONSTRUCT`] at construction; mass sums use
//! compensated (Neumaier) accumulation so that long reductions stay far below
//! the region tolerances used downstream.

use crate::error::{Result, SrdpError};

/// Absolute tolerance for mass checks at construction time.
pub const TOL_CONSTRUCT: f64 = 1e-12;

/// Absolute tolerance for mass checks after long chains of arithmetic.
pub const TOL_CHAIN: f64 = 1e-10;

/// Default cap on exhaustively enumerated cell counts (2^20).
pub const DEFAULT_ENUM_CAP: usize = 1 << 20;

/// Compensated (Neumaier) sum of a slice.
pub(crate) fn neumaier_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Running compensated accumulator for streaming reductions.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanAcc {
    sum: f64,
    comp: f64,
}

impl KahanAcc {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

// ---------------------------------------------------------------------------
// Pmf
// ---------------------------------------------------------------------------

/// Probability mass function over a finite alphabet `{0, .., len-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates nonnegativity and unit mass (within [`TOL_CONSTRUCT`]).
    ///
    /// Degenerate inputs (all-zero, NaN, negative entries) are construction
    /// errors and are never silently normalized.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(SrdpError::InvalidDistribution {
                reason: "empty alphabet",
                residual: 0.0,
            });
        }
        for &p in &probs {
            if !p.is_finite() || p < 0.0 {
                return Err(SrdpError::InvalidDistribution {
                    reason: "entry negative or non-finite",
                    residual: p,
                });
            }
        }
        let mass = neumaier_sum(&probs);
        if (mass - 1.0).abs() > TOL_CONSTRUCT {
            return Err(SrdpError::InvalidDistribution {
                reason: "mass not 1",
                residual: mass - 1.0,
            });
        }
        Ok(Self { probs })
    }

    /// Uniform distribution over `n` letters.
    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on letter `at`.
    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self { probs }
    }

    /// Binary distribution with `P(1) = p`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(SrdpError::OutOfRange {
                what: "bernoulli parameter",
                value: p,
                domain: "[0,1]",
            });
        }
        Ok(Self {
            probs: vec![1.0 - p, p],
        })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

// ---------------------------------------------------------------------------
// Channel
// ---------------------------------------------------------------------------

/// Row-stochastic matrix: one output distribution per input letter.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<Pmf>,
    output_size: usize,
}

impl Channel {
    pub fn new(rows: Vec<Pmf>) -> Result<Self> {
        let output_size = match rows.first() {
            Some(r) => r.len(),
            None => {
                return Err(SrdpError::InvalidDistribution {
                    reason: "channel has no rows",
                    residual: 0.0,
                })
            }
        };
        for r in &rows {
            if r.len() != output_size {
                return Err(SrdpError::DimensionMismatch {
                    context: "channel rows of unequal width",
                    expected: output_size,
                    got: r.len(),
                });
            }
        }
        Ok(Self { rows, output_size })
    }

    /// Builds from raw row vectors, validating each as a Pmf.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let pmfs = rows.into_iter().map(Pmf::new).collect::<Result<Vec<_>>>()?;
        Self::new(pmfs)
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| Pmf::point_mass(n, i)).collect();
        Self {
            rows,
            output_size: n,
        }
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(SrdpError::OutOfRange {
                what: "bsc crossover",
                value: p,
                domain: "[0,1]",
            });
        }
        Self::from_rows(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Channel that ignores its input and always emits `out`.
    pub fn constant(input_size: usize, out: &Pmf) -> Self {
        Self {
            rows: vec![out.clone(); input_size],
            output_size: out.len(),
        }
    }

    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn row(&self, x: usize) -> &Pmf {
        &self.rows[x]
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.rows[x].prob(y)
    }
}

// ---------------------------------------------------------------------------
// JointPmf
// ---------------------------------------------------------------------------

/// Joint distribution over up to four finite variables, stored dense
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    shape: Vec<usize>,
    cells: Vec<f64>,
}

impl JointPmf {
    pub fn new(shape: Vec<usize>, cells: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.len() > 4 {
            return Err(SrdpError::Precondition(format!(
                "joint arity must be 1..=4, got {}",
                shape.len()
            )));
        }
        let expected: usize = shape.iter().product();
        if expected != cells.len() {
            return Err(SrdpError::DimensionMismatch {
                context: "joint cell count",
                expected,
                got: cells.len(),
            });
        }
        for &c in &cells {
            if !c.is_finite() || c < 0.0 {
                return Err(SrdpError::InvalidDistribution {
                    reason: "joint cell negative or non-finite",
                    residual: c,
                });
            }
        }
        let mass = neumaier_sum(&cells);
        if (mass - 1.0).abs() > TOL_CONSTRUCT {
            return Err(SrdpError::InvalidDistribution {
                reason: "joint mass not 1",
                residual: mass - 1.0,
            });
        }
        Ok(Self { shape, cells })
    }

    pub fn arity(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.shape.len()];
        for i in (0..self.shape.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.shape[i + 1];
        }
        s
    }

    pub fn cell(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.shape.len());
        let strides = self.strides();
        let flat: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
        self.cells[flat]
    }

    /// Sums out every variable not listed in `keep`. The output axes follow
    /// the order given in `keep` (permutations allowed), so
    /// `marginal(&[2, 0])` yields the joint over (third, first) variables.
    pub fn marginal(&self, keep: &[usize]) -> Result<JointPmf> {
        if keep.is_empty() {
            return Err(SrdpError::Precondition(
                "marginal keep set must be nonempty".into(),
            ));
        }
        let mut seen = vec![false; self.shape.len()];
        for &k in keep {
            if k >= self.shape.len() || seen[k] {
                return Err(SrdpError::Precondition(format!(
                    "marginal keep index {k} invalid or repeated"
                )));
            }
            seen[k] = true;
        }
        let out_shape: Vec<usize> = keep.iter().map(|&k| self.shape[k]).collect();
        let out_len: usize = out_shape.iter().product();
        let mut acc = vec![KahanAcc::default(); out_len];

        let strides = self.strides();
        let mut out_strides = vec![1usize; keep.len()];
        for i in (0..keep.len().saturating_sub(1)).rev() {
            out_strides[i] = out_strides[i + 1] * out_shape[i + 1];
        }

        let mut idx = vec![0usize; self.shape.len()];
        for (flat, &c) in self.cells.iter().enumerate() {
            let mut rem = flat;
            for (i, &s) in strides.iter().enumerate() {
                idx[i] = rem / s;
                rem %= s;
            }
            let out_flat: usize = keep
                .iter()
                .zip(&out_strides)
                .map(|(&k, s)| idx[k] * s)
                .sum();
            acc[out_flat].add(c);
        }
        let cells: Vec<f64> = acc.iter().map(|a| a.value()).collect();
        JointPmf::new(out_shape, cells)
    }

    /// Single-variable marginal as a [`Pmf`].
    pub fn marginal_pmf(&self, var: usize) -> Result<Pmf> {
        let m = self.marginal(&[var])?;
        Pmf::new(m.cells)
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Output distribution of `source` passed through `ch`.
pub fn push_forward(source: &Pmf, ch: &Channel) -> Result<Pmf> {
    if source.len() != ch.input_size() {
        return Err(SrdpError::DimensionMismatch {
            context: "push_forward source vs channel input",
            expected: ch.input_size(),
            got: source.len(),
        });
    }
    let mut out = vec![KahanAcc::default(); ch.output_size()];
    for x in 0..source.len() {
        let px = source.prob(x);
        for (y, slot) in out.iter_mut().enumerate() {
            slot.add(px * ch.prob(x, y));
        }
    }
    Pmf::new(out.iter().map(|a| a.value()).collect())
}

/// Cascade `ch1` then `ch2` into a single channel.
pub fn compose(ch1: &Channel, ch2: &Channel) -> Result<Channel> {
    if ch1.output_size() != ch2.input_size() {
        return Err(SrdpError::DimensionMismatch {
            context: "compose inner dimension",
            expected: ch2.input_size(),
            got: ch1.output_size(),
        });
    }
    let rows = (0..ch1.input_size())
        .map(|x| push_forward(ch1.row(x), ch2))
        .collect::<Result<Vec<_>>>()?;
    Channel::new(rows)
}

/// Two-variable joint `P(x, y) = source(x) * ch(y | x)`.
pub fn joint_from(source: &Pmf, ch: &Channel) -> Result<JointPmf> {
    if source.len() != ch.input_size() {
        return Err(SrdpError::DimensionMismatch {
            context: "joint_from source vs channel input",
            expected: ch.input_size(),
            got: source.len(),
        });
    }
    let mut cells = Vec::with_capacity(source.len() * ch.output_size());
    for x in 0..source.len() {
        for y in 0..ch.output_size() {
            cells.push(source.prob(x) * ch.prob(x, y));
        }
    }
    JointPmf::new(vec![source.len(), ch.output_size()], cells)
}

/// I.i.d. extension of `source` to sequences of length `n`, in row-major
/// (last letter fastest) order, under the default enumeration cap.
pub fn iid_extension(source: &Pmf, n: usize) -> Result<Pmf> {
    iid_extension_with_cap(source, n, DEFAULT_ENUM_CAP)
}

/// I.i.d. extension with an explicit cell cap.
pub fn iid_extension_with_cap(source: &Pmf, n: usize, cap: usize) -> Result<Pmf> {
    let cells = (source.len() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if cells > cap as u128 {
        return Err(SrdpError::CapExceeded { needed: cells, cap });
    }
    let total = cells as usize;
    let k = source.len();
    // probs[seq] where seq is read base-k, most significant letter first
    let mut probs = vec![1.0f64; total];
    let mut block = total;
    for _pos in 0..n {
        block /= k;
        for (i, p) in probs.iter_mut().enumerate() {
            let letter = (i / block) % k;
            *p *= source.prob(letter);
        }
    }
    if n == 0 {
        return Pmf::new(vec![1.0]);
    }
    // the product construction keeps mass 1 up to rounding; check at the
    // looser post-arithmetic tolerance
    let mass = neumaier_sum(&probs);
    if (mass - 1.0).abs() > TOL_CHAIN {
        return Err(SrdpError::InvalidDistribution {
            reason: "iid extension mass drift",
            residual: mass - 1.0,
        });
    }
    Ok(Pmf { probs })
}

/// Decodes the sequence with flat index `flat` (base `alphabet`, most
/// significant letter first) into `out`.
pub fn decode_sequence(flat: usize, alphabet: usize, out: &mut [usize]) {
    let mut rem = flat;
    for slot in out.iter_mut().rev() {
        *slot = rem % alphabet;
        rem /= alphabet;
    }
}

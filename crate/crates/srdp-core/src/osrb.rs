//! Exact small-blocklength realization of the random-binning coding scheme
//! over a noiseless channel: a seeded i.i.d. codebook indexed by the common
//! randomness and the message, a likelihood encoder, and exhaustive
//! computation of the induced realism, distortion, and leakage.
//!
//! Everything is enumerated exactly; no sampling enters the metrics. The
//! seed fixes the codebook, playing the role of the shared public choice of
//! the encoder-decoder pair, and results are reported as a distribution
//! over seeds rather than for a selected best seed.
//!
//! The channel is noiseless, so the decoder receives the index pair (c, s)
//! verbatim and synthesizes Y^n directly from the codeword U^n(c, s); no
//! bin-decoding step is needed or modeled here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, SrdpError};
use crate::info::{tv_raw, Bits};
use crate::noiseless::DistortionMeasure;
use crate::optimize::seed_for;
use crate::prob::{decode_sequence, push_forward, Channel, KahanAcc, Pmf};

/// Fraction of zero-likelihood encoder fallbacks above which a run is
/// flagged unreliable.
const FALLBACK_FLAG_FRACTION: f64 = 1e-3;

/// Blocklength-n codebook parameters. The auxiliary marginal `u_prior` and
/// reverse channel `ux_channel` (P_{X|U}) define the codebook statistics
/// and the likelihood encoder; `yu_channel` (P_{Y|U}) is the decoder's
/// output synthesizer. `seed` fixes the codebook realization.
#[derive(Debug, Clone)]
pub struct OsrbConfig {
    pub n: usize,
    /// Message rate R in bits per source symbol.
    pub rate: f64,
    /// Common-randomness rate R0 in bits per source symbol.
    pub common_rate: f64,
    source: Pmf,
    u_prior: Pmf,
    ux_channel: Channel,
    yu_channel: Channel,
    distortion: DistortionMeasure,
    pub seed: u64,
    pub cap: usize,
}

impl OsrbConfig {
    /// Builds a config from the reverse factorization P_U, P_{X|U}. The
    /// induced X marginal must reproduce `source` within 1e-9.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        rate: f64,
        common_rate: f64,
        source: Pmf,
        u_prior: Pmf,
        ux_channel: Channel,
        yu_channel: Channel,
        distortion: DistortionMeasure,
        seed: u64,
        cap: usize,
    ) -> Result<Self> {
        if n == 0 {
            return Err(SrdpError::OutOfRange {
                what: "blocklength",
                value: 0.0,
                domain: "[1, inf)",
            });
        }
        if rate < 0.0 || common_rate < 0.0 {
            return Err(SrdpError::OutOfRange {
                what: "rate",
                value: rate.min(common_rate),
                domain: "[0, inf)",
            });
        }
        if ux_channel.input_size() != u_prior.len()
            || ux_channel.output_size() != source.len()
            || yu_channel.input_size() != u_prior.len()
            || yu_channel.output_size() != source.len()
        {
            return Err(SrdpError::DimensionMismatch {
                context: "osrb channel shapes vs alphabets",
                expected: u_prior.len(),
                got: ux_channel.input_size(),
            });
        }
        if distortion.input_size() != source.len()
            || distortion.output_size() != yu_channel.output_size()
        {
            return Err(SrdpError::DimensionMismatch {
                context: "osrb distortion shape",
                expected: source.len(),
                got: distortion.input_size(),
            });
        }
        if u_prior.len() > u8::MAX as usize {
            return Err(SrdpError::CardinalityCap {
                got: u_prior.len(),
                cap: u8::MAX as usize,
            });
        }
        let induced = push_forward(&u_prior, &ux_channel)?;
        let residual = tv_raw(induced.probs(), source.probs());
        if residual > 1e-9 {
            return Err(SrdpError::InvalidDistribution {
                reason: "u_prior * P(X|U) does not reproduce the source",
                residual,
            });
        }
        let cfg = Self {
            n,
            rate,
            common_rate,
            source,
            u_prior,
            ux_channel,
            yu_channel,
            distortion,
            seed,
            cap,
        };
        cfg.check_caps()?;
        Ok(cfg)
    }

    /// Builds the reverse factorization from the forward witness channels
    /// (Q_X, P_{U|X}, P_{Y|U}) by Bayes inversion. Letters of U with zero
    /// marginal mass are construction errors.
    #[allow(clippy::too_many_arguments)]
    pub fn from_forward(
        n: usize,
        rate: f64,
        common_rate: f64,
        source: Pmf,
        u_channel: &Channel,
        yu_channel: Channel,
        distortion: DistortionMeasure,
        seed: u64,
        cap: usize,
    ) -> Result<Self> {
        let u_prior = push_forward(&source, u_channel)?;
        let nu = u_prior.len();
        let nx = source.len();
        let mut rows = Vec::with_capacity(nu);
        for u in 0..nu {
            let pu = u_prior.prob(u);
            if pu <= 0.0 {
                return Err(SrdpError::InvalidDistribution {
                    reason: "auxiliary letter with zero mass cannot be reversed",
                    residual: pu,
                });
            }
            let row: Vec<f64> = (0..nx)
                .map(|x| source.prob(x) * u_channel.prob(x, u) / pu)
                .collect();
            // renormalize away the division rounding
            let mass: f64 = row.iter().sum();
            rows.push(row.into_iter().map(|v| v / mass).collect());
        }
        Self::new(
            n,
            rate,
            common_rate,
            source,
            u_prior,
            Channel::from_rows(rows)?,
            yu_channel,
            distortion,
            seed,
            cap,
        )
    }

    pub fn source(&self) -> &Pmf {
        &self.source
    }

    pub fn u_prior(&self) -> &Pmf {
        &self.u_prior
    }

    pub fn ux_channel(&self) -> &Channel {
        &self.ux_channel
    }

    pub fn yu_channel(&self) -> &Channel {
        &self.yu_channel
    }

    pub fn distortion(&self) -> &DistortionMeasure {
        &self.distortion
    }

    /// Number of common-randomness indices 2^ceil(n R0), saturating so
    /// that absurd rates fail the cap check instead of overflowing.
    pub fn num_c(&self) -> usize {
        saturating_pow2(bits_for(self.n, self.common_rate))
    }

    /// Number of message indices 2^ceil(n R).
    pub fn num_s(&self) -> usize {
        saturating_pow2(bits_for(self.n, self.rate))
    }

    /// Effective message rate ceil(nR)/n actually realized at this n.
    pub fn effective_rate(&self) -> f64 {
        bits_for(self.n, self.rate) as f64 / self.n as f64
    }

    /// Effective common-randomness rate ceil(nR0)/n.
    pub fn effective_common_rate(&self) -> f64 {
        bits_for(self.n, self.common_rate) as f64 / self.n as f64
    }

    fn seq_count(&self) -> Result<usize> {
        let c = (self.source.len() as u128)
            .checked_pow(self.n as u32)
            .unwrap_or(u128::MAX);
        if c > self.cap as u128 {
            return Err(SrdpError::CapExceeded {
                needed: c,
                cap: self.cap,
            });
        }
        Ok(c as usize)
    }

    fn check_caps(&self) -> Result<()> {
        let seqs = self.seq_count()? as u128;
        let words = self.num_c() as u128 * self.num_s() as u128;
        if words > self.cap as u128 {
            return Err(SrdpError::CapExceeded {
                needed: words,
                cap: self.cap,
            });
        }
        // dominant metric allocation: the per-message output table
        let pys = self.num_s() as u128 * seqs;
        if pys > self.cap as u128 {
            return Err(SrdpError::CapExceeded {
                needed: pys,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn with_n_and_seed(&self, n: usize, seed: u64) -> Result<Self> {
        let mut cfg = self.clone();
        cfg.n = n;
        cfg.seed = seed;
        cfg.check_caps()?;
        Ok(cfg)
    }
}

fn saturating_pow2(bits: u32) -> usize {
    if bits >= usize::BITS - 1 {
        usize::MAX
    } else {
        1usize << bits
    }
}

/// ceil(n * rate) in bit count, robust to rates that are representable
/// sums like 0.5 whose product should be an exact integer.
fn bits_for(n: usize, rate: f64) -> u32 {
    let x = n as f64 * rate;
    let nearest = x.round();
    let v = if (x - nearest).abs() < 1e-9 {
        nearest
    } else {
        x.ceil()
    };
    v.max(0.0) as u32
}

/// Seeded i.i.d. codebook: one n-sequence of auxiliary letters per
/// (common randomness, message) index pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    n: usize,
    num_c: usize,
    num_s: usize,
    words: Vec<u8>,
}

impl Codebook {
    pub fn word(&self, c: usize, s: usize) -> &[u8] {
        let base = (c * self.num_s + s) * self.n;
        &self.words[base..base + self.n]
    }

    pub fn num_c(&self) -> usize {
        self.num_c
    }

    pub fn num_s(&self) -> usize {
        self.num_s
    }
}

/// Draws the codebook for `cfg`: every letter i.i.d. from the auxiliary
/// prior, in fixed (c, s, position) order, so a fixed seed reproduces the
/// codebook byte-exactly.
pub fn build_codebook(cfg: &OsrbConfig) -> Result<Codebook> {
    cfg.check_caps()?;
    let (num_c, num_s, n) = (cfg.num_c(), cfg.num_s(), cfg.n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let prior = cfg.u_prior.probs();
    let mut words = Vec::with_capacity(num_c * num_s * n);
    for _ in 0..num_c * num_s * n {
        let r: f64 = rng.random();
        let mut acc = 0.0;
        let mut letter = prior.len() - 1;
        for (i, &p) in prior.iter().enumerate() {
            acc += p;
            if r < acc {
                letter = i;
                break;
            }
        }
        words.push(letter as u8);
    }
    Ok(Codebook {
        n,
        num_c,
        num_s,
        words,
    })
}

/// Likelihood encoder: P(s | x^n, c) proportional to the likelihood of the
/// source sequence under codeword (c, s). When every likelihood vanishes
/// the encoder falls back to the uniform message and reports it.
pub fn likelihood_encode(
    x_seq: &[usize],
    c: usize,
    cb: &Codebook,
    cfg: &OsrbConfig,
) -> Result<(Pmf, bool)> {
    if x_seq.len() != cfg.n {
        return Err(SrdpError::DimensionMismatch {
            context: "source sequence length",
            expected: cfg.n,
            got: x_seq.len(),
        });
    }
    let mut lik = vec![0.0f64; cb.num_s];
    likelihood_row(x_seq, c, cb, cfg, &mut lik);
    let total: f64 = lik.iter().sum();
    if total <= 0.0 {
        let uniform = Pmf::uniform(cb.num_s);
        return Ok((uniform, true));
    }
    for v in lik.iter_mut() {
        *v /= total;
    }
    Ok((Pmf::new(lik)?, false))
}

fn likelihood_row(x_seq: &[usize], c: usize, cb: &Codebook, cfg: &OsrbConfig, out: &mut [f64]) {
    for (s, slot) in out.iter_mut().enumerate() {
        let word = cb.word(c, s);
        let mut p = 1.0f64;
        for (i, &u) in word.iter().enumerate() {
            p *= cfg.ux_channel.prob(u as usize, x_seq[i]);
        }
        *slot = p;
    }
}

/// Exact induced joint over (X^n, C, S, Y^n) in factored form: a dense
/// table over (x^n, c, s) plus the codebook that determines the product
/// law of Y^n given (c, s).
pub struct InducedJoint {
    cfg: OsrbConfig,
    cb: Codebook,
    /// P(x^n, c, s), laid out x-major then c then s.
    xcs: Vec<f64>,
    fallback_count: u64,
    fallback_mass: f64,
}

/// Enumerates the encoder exactly. Requires |X|^n * num_c * num_s cells
/// under the cap.
pub fn induced_joint(cfg: &OsrbConfig) -> Result<InducedJoint> {
    let seqs = cfg.seq_count()?;
    let (num_c, num_s) = (cfg.num_c(), cfg.num_s());
    let table = seqs as u128 * num_c as u128 * num_s as u128;
    if table > cfg.cap as u128 {
        return Err(SrdpError::CapExceeded {
            needed: table,
            cap: cfg.cap,
        });
    }
    let cb = build_codebook(cfg)?;
    let qxn = crate::prob::iid_extension_with_cap(&cfg.source, cfg.n, cfg.cap)?;
    let pc = 1.0 / num_c as f64;

    let mut xcs = vec![0.0f64; seqs * num_c * num_s];
    let mut fallback_count = 0u64;
    let mut fallback_mass = 0.0f64;
    let mut x_seq = vec![0usize; cfg.n];
    let mut lik = vec![0.0f64; num_s];
    for x in 0..seqs {
        decode_sequence(x, cfg.source.len(), &mut x_seq);
        let qx = qxn.prob(x);
        for c in 0..num_c {
            likelihood_row(&x_seq, c, &cb, cfg, &mut lik);
            let total: f64 = lik.iter().sum();
            let base = (x * num_c + c) * num_s;
            if total <= 0.0 {
                fallback_count += 1;
                fallback_mass += qx * pc;
                for s in 0..num_s {
                    xcs[base + s] = qx * pc / num_s as f64;
                }
            } else {
                for s in 0..num_s {
                    xcs[base + s] = qx * pc * lik[s] / total;
                }
            }
        }
    }
    Ok(InducedJoint {
        cfg: cfg.clone(),
        cb,
        xcs,
        fallback_count,
        fallback_mass,
    })
}

impl InducedJoint {
    pub fn codebook(&self) -> &Codebook {
        &self.cb
    }

    pub fn fallback_count(&self) -> u64 {
        self.fallback_count
    }

    pub fn fallback_mass(&self) -> f64 {
        self.fallback_mass
    }

    /// P(x^n, c, s) entry.
    pub fn xcs_prob(&self, x: usize, c: usize, s: usize) -> f64 {
        self.xcs[(x * self.cb.num_c + c) * self.cb.num_s + s]
    }

    /// Total mass of the full (X^n, C, S, Y^n) joint, enumerating the
    /// output product laws exactly.
    pub fn total_mass(&self) -> f64 {
        let seqs = self.xcs.len() / (self.cb.num_c * self.cb.num_s);
        let ny = self.cfg.yu_channel.output_size();
        let yseqs = ny.pow(self.cfg.n as u32);
        let mut y_seq = vec![0usize; self.cfg.n];
        let mut total = KahanAcc::default();
        for c in 0..self.cb.num_c {
            for s in 0..self.cb.num_s {
                let word = self.cb.word(c, s);
                let mut ymass = KahanAcc::default();
                for y in 0..yseqs {
                    decode_sequence(y, ny, &mut y_seq);
                    let mut p = 1.0f64;
                    for (i, &u) in word.iter().enumerate() {
                        p *= self.cfg.yu_channel.prob(u as usize, y_seq[i]);
                    }
                    ymass.add(p);
                }
                let mut xmass = KahanAcc::default();
                for x in 0..seqs {
                    xmass.add(self.xcs[(x * self.cb.num_c + c) * self.cb.num_s + s]);
                }
                total.add(xmass.value() * ymass.value());
            }
        }
        total.value()
    }

    /// Materializes the dense joint over (x^n, c, s, y^n); refused when it
    /// would exceed the cell cap.
    pub fn dense_xcsy(&self) -> Result<Vec<f64>> {
        let seqs = self.xcs.len() / (self.cb.num_c * self.cb.num_s);
        let ny = self.cfg.yu_channel.output_size();
        let yseqs = ny.pow(self.cfg.n as u32);
        let cells = seqs as u128 * self.cb.num_c as u128 * self.cb.num_s as u128 * yseqs as u128;
        if cells > self.cfg.cap as u128 {
            return Err(SrdpError::CapExceeded {
                needed: cells,
                cap: self.cfg.cap,
            });
        }
        let mut dense = vec![0.0f64; cells as usize];
        let mut y_seq = vec![0usize; self.cfg.n];
        for x in 0..seqs {
            for c in 0..self.cb.num_c {
                for s in 0..self.cb.num_s {
                    let p_xcs = self.xcs[(x * self.cb.num_c + c) * self.cb.num_s + s];
                    let word = self.cb.word(c, s);
                    for y in 0..yseqs {
                        decode_sequence(y, ny, &mut y_seq);
                        let mut p = p_xcs;
                        for (i, &u) in word.iter().enumerate() {
                            p *= self.cfg.yu_channel.prob(u as usize, y_seq[i]);
                        }
                        dense[((x * self.cb.num_c + c) * self.cb.num_s + s) * yseqs + y] = p;
                    }
                }
            }
        }
        Ok(dense)
    }
}

/// The exact constraint metrics a finite-blocklength run induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsrbMetrics {
    /// TV(P_{Y^n}, Q_X^n), the n-letter realism residual.
    pub realism_tv: f64,
    /// E[(1/n) sum d(X_i, Y_i)].
    pub avg_distortion: f64,
    /// I(Y^n; S) / n in bits per source symbol.
    pub leakage_bits: Bits,
    /// I(Y^n; S) over the whole block.
    pub leakage_block_bits: Bits,
    /// TV between the codebook-induced (C, X^n) law and uniform(C) x Q_X^n;
    /// the soft-covering diagnostic behind the common-randomness
    /// independence requirement.
    pub cr_independence_tv: f64,
    pub eff_rate: f64,
    pub eff_common_rate: f64,
    pub fallback_count: u64,
    pub fallback_mass: f64,
    /// Set when the fallback mass exceeds 0.1%.
    pub unreliable: bool,
}

/// Computes the exact metrics for one seeded run by streaming enumeration:
/// never materializes the four-way joint. Requires |X|^n, the codebook, and
/// the num_s * |Y|^n output table under the cap.
pub fn metrics(cfg: &OsrbConfig) -> Result<OsrbMetrics> {
    let seqs = cfg.seq_count()?;
    cfg.check_caps()?;
    let cb = build_codebook(cfg)?;
    let (num_c, num_s, n) = (cb.num_c, cb.num_s, cfg.n);
    let nx = cfg.source.len();
    let ny = cfg.yu_channel.output_size();
    let yseqs = ny.pow(n as u32);
    let qxn = crate::prob::iid_extension_with_cap(&cfg.source, n, cfg.cap)?;
    let pc = 1.0 / num_c as f64;

    // per-letter expected distortion given the auxiliary letter
    let nu = cfg.u_prior.len();
    let mut edist = vec![0.0f64; nu * nx];
    for u in 0..nu {
        for x in 0..nx {
            let mut acc = 0.0;
            for y in 0..ny {
                acc += cfg.yu_channel.prob(u, y) * cfg.distortion.value(x, y);
            }
            edist[u * nx + x] = acc;
        }
    }

    // pass A over (x^n, c): message posterior, weights, distortion,
    // fallback accounting, and the codebook-induced (C, X^n) deviation
    let mut w_cs = vec![KahanAcc::default(); num_c * num_s];
    let mut dist_acc = KahanAcc::default();
    let mut cr_tv_acc = KahanAcc::default();
    let mut fallback_count = 0u64;
    let mut fallback_mass = 0.0f64;

    let mut x_seq = vec![0usize; n];
    let mut lik = vec![0.0f64; num_s];
    for x in 0..seqs {
        decode_sequence(x, nx, &mut x_seq);
        let qx = qxn.prob(x);
        for c in 0..num_c {
            likelihood_row(&x_seq, c, &cb, cfg, &mut lik);
            let total: f64 = lik.iter().sum();
            // codebook-induced input law: P(c, x^n) = P(c) * mean_s lik
            let induced_cx = pc * total / num_s as f64;
            cr_tv_acc.add((induced_cx - pc * qx).abs());

            let weight = qx * pc;
            if total <= 0.0 {
                fallback_count += 1;
                fallback_mass += weight;
                let post = 1.0 / num_s as f64;
                for s in 0..num_s {
                    w_cs[c * num_s + s].add(weight * post);
                    dist_acc
                        .add(weight * post * mean_distortion(&x_seq, cb.word(c, s), &edist, nx, n));
                }
            } else {
                for s in 0..num_s {
                    let post = lik[s] / total;
                    if post <= 0.0 {
                        continue;
                    }
                    w_cs[c * num_s + s].add(weight * post);
                    dist_acc
                        .add(weight * post * mean_distortion(&x_seq, cb.word(c, s), &edist, nx, n));
                }
            }
        }
    }
    let w_cs: Vec<f64> = w_cs.iter().map(|a| a.value()).collect();

    // pass B over (c, s): per-message output laws and the realism residual
    let mut p_y = vec![KahanAcc::default(); yseqs];
    let mut p_ys = vec![KahanAcc::default(); num_s * yseqs];
    let mut yprod = vec![0.0f64; yseqs];
    for c in 0..num_c {
        for s in 0..num_s {
            let w = w_cs[c * num_s + s];
            if w <= 0.0 {
                continue;
            }
            product_law(cb.word(c, s), &cfg.yu_channel, ny, &mut yprod);
            for (y, &pv) in yprod.iter().enumerate() {
                let contrib = w * pv;
                p_y[y].add(contrib);
                p_ys[s * yseqs + y].add(contrib);
            }
        }
    }
    let p_y: Vec<f64> = p_y.iter().map(|a| a.value()).collect();
    let realism_tv = tv_raw(&p_y, qxn.probs());

    // I(Y^n; S) from the exact joint
    let mut p_s = vec![0.0f64; num_s];
    for s in 0..num_s {
        for c in 0..num_c {
            p_s[s] += w_cs[c * num_s + s];
        }
    }
    let mut leak = KahanAcc::default();
    for s in 0..num_s {
        if p_s[s] <= 0.0 {
            continue;
        }
        for y in 0..yseqs {
            let v = p_ys[s * yseqs + y].value();
            if v > 0.0 && p_y[y] > 0.0 {
                leak.add(v * (v / (p_s[s] * p_y[y])).log2());
            }
        }
    }
    let leakage_block = leak.value().max(0.0);

    Ok(OsrbMetrics {
        realism_tv,
        avg_distortion: dist_acc.value(),
        leakage_bits: Bits(leakage_block / n as f64),
        leakage_block_bits: Bits(leakage_block),
        cr_independence_tv: 0.5 * cr_tv_acc.value(),
        eff_rate: cfg.effective_rate(),
        eff_common_rate: cfg.effective_common_rate(),
        fallback_count,
        fallback_mass,
        unreliable: fallback_mass > FALLBACK_FLAG_FRACTION,
    })
}

fn mean_distortion(x_seq: &[usize], word: &[u8], edist: &[f64], nx: usize, n: usize) -> f64 {
    let mut acc = 0.0;
    for (i, &u) in word.iter().enumerate() {
        acc += edist[u as usize * nx + x_seq[i]];
    }
    acc / n as f64
}

fn product_law(word: &[u8], yu: &Channel, ny: usize, out: &mut [f64]) {
    out[0] = 1.0;
    let mut filled = 1usize;
    for &u in word {
        for b in (0..filled).rev() {
            let base = out[b];
            for y in 0..ny {
                out[b * ny + y] = base * yu.prob(u as usize, y);
            }
        }
        filled *= ny;
    }
}

/// One row of a sweep: blocklength, realized rates, codebook seed, and the
/// exact metrics of that run.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub n: usize,
    pub seed: u64,
    pub metrics: OsrbMetrics,
}

/// Runs `seed_count` independently seeded codebooks at every blocklength in
/// `n_list`, at the rates carried by `base`. Rows come back in (n, seed
/// index) order regardless of thread count.
pub fn rate_sweep_experiment(
    base: &OsrbConfig,
    n_list: &[usize],
    seed_count: usize,
) -> Result<Vec<SweepRow>> {
    if n_list.is_empty() || seed_count == 0 {
        return Err(SrdpError::Precondition(
            "sweep needs at least one blocklength and one seed".into(),
        ));
    }
    // validate caps up front so the error names the offending blocklength
    for &n in n_list {
        base.with_n_and_seed(n, base.seed)?;
    }
    let jobs: Vec<(usize, u64)> = n_list
        .iter()
        .flat_map(|&n| {
            (0..seed_count).map(move |k| (n, seed_for(seed_for(base.seed, n as u64), k as u64)))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(n, seed)| {
            let cfg = base.with_n_and_seed(n, seed)?;
            Ok(SweepRow {
                n,
                seed,
                metrics: metrics(&cfg)?,
            })
        })
        .collect()
}

/// Median of a slice (average of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::DEFAULT_ENUM_CAP as CAP;

    fn symmetric_config(n: usize, rate: f64, common_rate: f64, seed: u64) -> OsrbConfig {
        // uniform binary source; U uniform; P(X|U) = P(Y|U) = BSC(0.2)
        OsrbConfig::new(
            n,
            rate,
            common_rate,
            Pmf::uniform(2),
            Pmf::uniform(2),
            Channel::bsc(0.2).unwrap(),
            Channel::bsc(0.2).unwrap(),
            DistortionMeasure::hamming(2),
            seed,
            CAP,
        )
        .unwrap()
    }

    #[test]
    fn codebook_is_deterministic_and_shaped() {
        let cfg = symmetric_config(4, 0.5, 0.5, 7);
        let a = build_codebook(&cfg).unwrap();
        let b = build_codebook(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_c(), 4);
        assert_eq!(a.num_s(), 4);
        assert_eq!(a.word(3, 2).len(), 4);
    }

    #[test]
    fn zero_rates_give_single_codeword() {
        let cfg = symmetric_config(3, 0.0, 0.0, 1);
        let cb = build_codebook(&cfg).unwrap();
        assert_eq!((cb.num_c(), cb.num_s()), (1, 1));
    }

    #[test]
    fn point_mass_prior_makes_identical_codewords() {
        let cfg = OsrbConfig::new(
            3,
            0.4,
            0.4,
            Pmf::bernoulli(0.3).unwrap(),
            Pmf::point_mass(2, 1),
            Channel::from_rows(vec![vec![0.5, 0.5], vec![0.7, 0.3]]).unwrap(),
            Channel::bsc(0.1).unwrap(),
            DistortionMeasure::hamming(2),
            9,
            CAP,
        )
        .unwrap();
        let cb = build_codebook(&cfg).unwrap();
        for c in 0..cb.num_c() {
            for s in 0..cb.num_s() {
                assert!(cb.word(c, s).iter().all(|&u| u == 1));
            }
        }
    }

    #[test]
    fn encoder_single_codeword_is_point_mass() {
        let cfg = symmetric_config(3, 0.0, 0.0, 5);
        let cb = build_codebook(&cfg).unwrap();
        let (post, fallback) = likelihood_encode(&[0, 1, 0], 0, &cb, &cfg).unwrap();
        assert!(!fallback);
        assert_eq!(post.len(), 1);
        assert_eq!(post.prob(0), 1.0);
    }

    #[test]
    fn encoder_posterior_matches_hand_normalization() {
        let cfg = OsrbConfig::new(
            2,
            0.5,
            0.0,
            Pmf::uniform(2),
            Pmf::uniform(2),
            Channel::bsc(0.1).unwrap(),
            Channel::bsc(0.1).unwrap(),
            DistortionMeasure::hamming(2),
            42,
            CAP,
        )
        .unwrap();
        let cb = build_codebook(&cfg).unwrap();
        let x = [0usize, 1usize];
        let (post, fallback) = likelihood_encode(&x, 0, &cb, &cfg).unwrap();
        assert!(!fallback);
        let mut lik = Vec::new();
        for s in 0..cb.num_s() {
            let w = cb.word(0, s);
            let mut p = 1.0;
            for (i, &u) in w.iter().enumerate() {
                p *= if u as usize == x[i] { 0.9 } else { 0.1 };
            }
            lik.push(p);
        }
        let total: f64 = lik.iter().sum();
        for s in 0..cb.num_s() {
            assert!((post.prob(s) - lik[s] / total).abs() < 1e-14);
        }
    }

    #[test]
    fn deterministic_matching_codeword_is_point_mass() {
        // deterministic P(X|U): x = u exactly; x matches exactly one word
        let cfg = OsrbConfig::new(
            2,
            1.0,
            0.0,
            Pmf::uniform(2),
            Pmf::uniform(2),
            Channel::identity(2),
            Channel::bsc(0.25).unwrap(),
            DistortionMeasure::hamming(2),
            3,
            CAP,
        )
        .unwrap();
        let cb = build_codebook(&cfg).unwrap();
        // find an x equal to some codeword
        let target: Vec<usize> = cb.word(0, 1).iter().map(|&u| u as usize).collect();
        let unique = (0..cb.num_s())
            .filter(|&s| {
                cb.word(0, s)
                    .iter()
                    .map(|&u| u as usize)
                    .collect::<Vec<_>>()
                    == target
            })
            .count();
        let (post, fallback) = likelihood_encode(&target, 0, &cb, &cfg).unwrap();
        assert!(!fallback);
        let hits: f64 = (0..cb.num_s())
            .filter(|&s| {
                cb.word(0, s)
                    .iter()
                    .map(|&u| u as usize)
                    .collect::<Vec<_>>()
                    == target
            })
            .map(|s| post.prob(s))
            .sum();
        assert!((hits - 1.0).abs() < 1e-14);
        assert!(unique >= 1);
    }

    #[test]
    fn induced_joint_mass_is_one() {
        for n in [1, 2, 4] {
            let cfg = symmetric_config(n, 0.5, 0.5, 11 + n as u64);
            let joint = induced_joint(&cfg).unwrap();
            assert!(
                (joint.total_mass() - 1.0).abs() < 1e-9,
                "n={n}: mass {}",
                joint.total_mass()
            );
        }
    }

    #[test]
    fn induced_joint_n1_zero_rates_reads_codeword_row() {
        let cfg = symmetric_config(1, 0.0, 0.0, 13);
        let joint = induced_joint(&cfg).unwrap();
        let u = joint.codebook().word(0, 0)[0] as usize;
        // P(y) should equal the yu row of that letter
        let dense = joint.dense_xcsy().unwrap();
        // dense layout: (x * 1 + 0) * 1 + 0) * 2 + y with 2 x-values
        let p_y0 = dense[0] + dense[2];
        assert!((p_y0 - cfg.yu_channel().prob(u, 0)).abs() < 1e-12);
    }

    #[test]
    fn metrics_zero_message_rate_leaks_nothing() {
        let cfg = symmetric_config(4, 0.0, 0.5, 21);
        let m = metrics(&cfg).unwrap();
        assert_eq!(m.leakage_bits.0, 0.0);
        assert_eq!(m.leakage_block_bits.0, 0.0);
    }

    #[test]
    fn metrics_oblivious_decoder_has_perfect_realism() {
        // yu ignores u and emits the source law: P_{Y^n} = Q^n exactly
        let cfg = OsrbConfig::new(
            3,
            0.5,
            0.5,
            Pmf::uniform(2),
            Pmf::uniform(2),
            Channel::bsc(0.2).unwrap(),
            Channel::constant(2, &Pmf::uniform(2)),
            DistortionMeasure::hamming(2),
            17,
            CAP,
        )
        .unwrap();
        let m = metrics(&cfg).unwrap();
        assert!(m.realism_tv < 1e-12);
        assert!(m.leakage_bits.0 < 1e-12);
        assert!((m.avg_distortion - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cr_independence_exact_for_single_codeword() {
        // one codeword u*, n = 1: the codebook-induced (C, X) law is
        // P(c) P(x | u*), so the TV residual is TV(P(.|u*), Q) = 0.3 for
        // a BSC(0.2) reverse channel and uniform source
        let cfg = symmetric_config(1, 0.0, 0.0, 31);
        let m = metrics(&cfg).unwrap();
        assert!(
            (m.cr_independence_tv - 0.3).abs() < 1e-15,
            "{}",
            m.cr_independence_tv
        );
    }

    #[test]
    fn metrics_deterministic_for_fixed_seed() {
        let cfg = symmetric_config(5, 0.43, 0.43, 99);
        let a = metrics(&cfg).unwrap();
        let b = metrics(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn effective_rates_are_ceilings() {
        let cfg = symmetric_config(5, 0.43, 0.21, 1);
        // ceil(5*0.43)=3 bits -> 0.6; ceil(5*0.21)=2 bits -> 0.4
        assert!((cfg.effective_rate() - 0.6).abs() < 1e-12);
        assert!((cfg.effective_common_rate() - 0.4).abs() < 1e-12);
        assert_eq!(cfg.num_s(), 8);
        assert_eq!(cfg.num_c(), 4);
    }

    #[test]
    fn product_law_matches_brute_force() {
        let yu = Channel::bsc(0.3).unwrap();
        let word = [1u8, 0, 1];
        let mut out = vec![0.0; 8];
        product_law(&word, &yu, 2, &mut out);
        let mut y_seq = vec![0usize; 3];
        for y in 0..8 {
            decode_sequence(y, 2, &mut y_seq);
            let mut expect = 1.0;
            for (i, &u) in word.iter().enumerate() {
                expect *= yu.prob(u as usize, y_seq[i]);
            }
            assert!((out[y] - expect).abs() < 1e-15);
        }
        let total: f64 = out.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_decoder_pins_output_to_codeword() {
        // deterministic P(Y|U): Y^n is exactly the codeword sequence
        let cfg = OsrbConfig::new(
            2,
            0.5,
            0.5,
            Pmf::uniform(2),
            Pmf::uniform(2),
            Channel::bsc(0.2).unwrap(),
            Channel::identity(2),
            DistortionMeasure::hamming(2),
            8,
            CAP,
        )
        .unwrap();
        let joint = induced_joint(&cfg).unwrap();
        let dense = joint.dense_xcsy().unwrap();
        let cb = joint.codebook();
        let (nc, ns, yseqs) = (cb.num_c(), cb.num_s(), 4usize);
        for x in 0..4 {
            for c in 0..nc {
                for s in 0..ns {
                    let word = cb.word(c, s);
                    let word_flat = (word[0] as usize) * 2 + word[1] as usize;
                    for y in 0..yseqs {
                        let v = dense[((x * nc + c) * ns + s) * yseqs + y];
                        if y != word_flat {
                            assert_eq!(v, 0.0, "mass off the codeword sequence");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn absurd_rates_hit_the_cap_instead_of_overflowing() {
        let r = OsrbConfig::new(
            20,
            64.0,
            64.0,
            Pmf::uniform(2),
            Pmf::uniform(2),
            Channel::bsc(0.2).unwrap(),
            Channel::bsc(0.2).unwrap(),
            DistortionMeasure::hamming(2),
            1,
            CAP,
        );
        assert!(matches!(r, Err(SrdpError::CapExceeded { .. })));
    }

    #[test]
    fn cap_violations_are_reported() {
        let r = OsrbConfig::new(
            25,
            0.5,
            0.5,
            Pmf::uniform(2),
            Pmf::uniform(2),
            Channel::bsc(0.2).unwrap(),
            Channel::bsc(0.2).unwrap(),
            DistortionMeasure::hamming(2),
            1,
            CAP,
        );
        assert!(matches!(r, Err(SrdpError::CapExceeded { .. })));
    }

    #[test]
    fn sweep_rows_deterministic_and_ordered() {
        let base = symmetric_config(2, 0.5, 0.5, 1234);
        let rows = rate_sweep_experiment(&base, &[2, 3], 3).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[0].n, 2);
        assert_eq!(rows[5].n, 3);
        let again = rate_sweep_experiment(&base, &[2, 3], 3).unwrap();
        for (a, b) in rows.iter().zip(&again) {
            assert_eq!(a.metrics, b.metrics);
            assert_eq!(a.seed, b.seed);
        }
    }

    #[test]
    fn sweep_single_blocklength_is_one_row_per_seed() {
        let base = symmetric_config(1, 0.5, 0.5, 42);
        let rows = rate_sweep_experiment(&base, &[1], 5).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.n == 1));
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}

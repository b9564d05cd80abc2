//! Noiseless-channel secure region: witness evaluation, membership
//! certification, and frontier sweeps.
//!
//! A witness is an explicit pair of channels X -> U -> Y whose induced
//! output law reproduces the source (single-letter realism). Its corner
//! (I(U;X), I(U;Y), E d(X,Y)) certifies every tuple that dominates it
//! componentwise. Searches are multi-start local optimizations; `not_found`
//! means "no witness within budget", never infeasibility, except on the
//! uniform-binary Hamming instance where the closed form decides exactly.

use rayon::prelude::*;

use crate::closed_form;
use crate::error::{Result, SrdpError};
use crate::info::{entropy_raw, mutual_information, tv_distance, Bits};
use crate::optimize::{lbfgs_minimize, seed_for, sinkhorn_coupling, softmax_rows};
use crate::prob::{push_forward, Channel, JointPmf, KahanAcc, Pmf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Single-letter realism tolerance on TV(P_Y, Q_X).
pub const REALISM_TOL: f64 = 1e-9;

/// Feasibility slack accepted when certifying a corner against a target.
pub const CERTIFY_TOL: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// An operating point: message rate, common-randomness rate (both in bits
/// per source symbol), and expected distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateTuple {
    pub rate: Bits,
    pub common_rate: Bits,
    pub distortion: f64,
}

impl RateTuple {
    pub fn new(rate: f64, common_rate: f64, distortion: f64) -> Result<Self> {
        for (what, v) in [
            ("rate", rate),
            ("common randomness rate", common_rate),
            ("distortion", distortion),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(SrdpError::OutOfRange {
                    what,
                    value: v,
                    domain: "[0, inf)",
                });
            }
        }
        Ok(Self {
            rate: Bits(rate),
            common_rate: Bits(common_rate),
            distortion,
        })
    }

    /// True when `self` is componentwise below `other` within `tol`.
    pub fn dominated_by(&self, other: &RateTuple, tol: f64) -> bool {
        self.rate.0 <= other.rate.0 + tol
            && self.common_rate.0 <= other.common_rate.0 + tol
            && self.distortion <= other.distortion + tol
    }
}

/// Per-letter separable distortion measure d(x, y).
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionMeasure {
    matrix: Vec<Vec<f64>>,
    max_value: f64,
}

impl DistortionMeasure {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        if matrix.is_empty() || matrix[0].is_empty() {
            return Err(SrdpError::Precondition("empty distortion matrix".into()));
        }
        let cols = matrix[0].len();
        let mut max_value = 0.0f64;
        for row in &matrix {
            if row.len() != cols {
                return Err(SrdpError::DimensionMismatch {
                    context: "distortion matrix row width",
                    expected: cols,
                    got: row.len(),
                });
            }
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(SrdpError::OutOfRange {
                        what: "distortion entry",
                        value: v,
                        domain: "[0, inf)",
                    });
                }
                max_value = max_value.max(v);
            }
        }
        Ok(Self { matrix, max_value })
    }

    /// Hamming distortion on an alphabet of size `n`.
    pub fn hamming(n: usize) -> Self {
        let matrix = (0..n)
            .map(|x| (0..n).map(|y| if x == y { 0.0 } else { 1.0 }).collect())
            .collect();
        Self {
            matrix,
            max_value: 1.0,
        }
    }

    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.matrix[x][y]
    }

    pub fn input_size(&self) -> usize {
        self.matrix.len()
    }

    pub fn output_size(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    /// Scales every entry by `lambda > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(SrdpError::OutOfRange {
                what: "distortion scale",
                value: lambda,
                domain: "(0, inf)",
            });
        }
        Self::new(
            self.matrix
                .iter()
                .map(|r| r.iter().map(|v| v * lambda).collect())
                .collect(),
        )
    }

    /// Expected distortion under a two-variable joint over (X, Y).
    pub fn expected(&self, joint_xy: &JointPmf) -> Result<f64> {
        if joint_xy.arity() != 2
            || joint_xy.shape()[0] != self.input_size()
            || joint_xy.shape()[1] != self.output_size()
        {
            return Err(SrdpError::DimensionMismatch {
                context: "distortion vs joint shape",
                expected: self.input_size() * self.output_size(),
                got: joint_xy.cells().len(),
            });
        }
        let mut acc = KahanAcc::default();
        let ny = self.output_size();
        for (flat, &p) in joint_xy.cells().iter().enumerate() {
            acc.add(p * self.matrix[flat / ny][flat % ny]);
        }
        Ok(acc.value())
    }
}

/// Witness for the noiseless region: source Q_X with channels P_{U|X} and
/// P_{Y|U} forming X - U - Y, whose induced P_Y equals Q_X within
/// [`REALISM_TOL`]. The auxiliary alphabet is capped at |X|^2 + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiselessWitness {
    source: Pmf,
    u_channel: Channel,
    y_channel: Channel,
}

impl NoiselessWitness {
    pub fn new(source: Pmf, u_channel: Channel, y_channel: Channel) -> Result<Self> {
        let nx = source.len();
        if u_channel.input_size() != nx {
            return Err(SrdpError::DimensionMismatch {
                context: "witness u_channel input",
                expected: nx,
                got: u_channel.input_size(),
            });
        }
        if y_channel.input_size() != u_channel.output_size() {
            return Err(SrdpError::DimensionMismatch {
                context: "witness y_channel input",
                expected: u_channel.output_size(),
                got: y_channel.input_size(),
            });
        }
        if y_channel.output_size() != nx {
            return Err(SrdpError::DimensionMismatch {
                context: "witness y_channel output (must match source alphabet)",
                expected: nx,
                got: y_channel.output_size(),
            });
        }
        let cap = nx * nx + 1;
        if u_channel.output_size() > cap {
            return Err(SrdpError::CardinalityCap {
                got: u_channel.output_size(),
                cap,
            });
        }
        let induced = push_forward(&push_forward(&source, &u_channel)?, &y_channel)?;
        let residual = tv_distance(&induced, &source)?;
        if residual > REALISM_TOL {
            return Err(SrdpError::RealismViolation {
                residual,
                tolerance: REALISM_TOL,
            });
        }
        Ok(Self {
            source,
            u_channel,
            y_channel,
        })
    }

    pub fn source(&self) -> &Pmf {
        &self.source
    }

    pub fn u_channel(&self) -> &Channel {
        &self.u_channel
    }

    pub fn y_channel(&self) -> &Channel {
        &self.y_channel
    }

    pub fn u_size(&self) -> usize {
        self.u_channel.output_size()
    }

    /// Full joint P(x, u, y) = Q(x) P(u|x) P(y|u).
    pub fn joint(&self) -> Result<JointPmf> {
        let (nx, nu, ny) = (
            self.source.len(),
            self.u_channel.output_size(),
            self.y_channel.output_size(),
        );
        let mut cells = Vec::with_capacity(nx * nu * ny);
        for x in 0..nx {
            for u in 0..nu {
                let base = self.source.prob(x) * self.u_channel.prob(x, u);
                for y in 0..ny {
                    cells.push(base * self.y_channel.prob(u, y));
                }
            }
        }
        JointPmf::new(vec![nx, nu, ny], cells)
    }
}

// ---------------------------------------------------------------------------
// Witness evaluation
// ---------------------------------------------------------------------------

/// Corner of the witness: (I(U;X), I(U;Y), E d(X,Y)). Every tuple that
/// dominates this corner componentwise is certified achievable.
pub fn evaluate_witness(w: &NoiselessWitness, d: &DistortionMeasure) -> Result<RateTuple> {
    if d.input_size() != w.source.len() || d.output_size() != w.y_channel.output_size() {
        return Err(SrdpError::DimensionMismatch {
            context: "distortion vs witness alphabets",
            expected: w.source.len(),
            got: d.input_size(),
        });
    }
    let joint = w.joint()?;
    let i_ux = mutual_information(&joint.marginal(&[0, 1])?)?;
    let i_uy = mutual_information(&joint.marginal(&[1, 2])?)?;
    let dist = d.expected(&joint.marginal(&[0, 2])?)?;
    Ok(RateTuple {
        rate: i_ux,
        common_rate: i_uy,
        distortion: dist,
    })
}

/// Rescales `y_channel` by iterative proportional fitting until the induced
/// output law matches `target` (the realism-feasible affine set). Returns
/// the adjusted channel; errors if the residual is still above
/// [`REALISM_TOL`] after 1000 rounds.
pub fn realism_projected_y_channel(
    u_dist: &Pmf,
    y_channel: &Channel,
    target: &Pmf,
) -> Result<Channel> {
    if y_channel.input_size() != u_dist.len() || y_channel.output_size() != target.len() {
        return Err(SrdpError::DimensionMismatch {
            context: "realism projection shapes",
            expected: u_dist.len(),
            got: y_channel.input_size(),
        });
    }
    let (nu, ny) = (u_dist.len(), target.len());
    let mut rows: Vec<Vec<f64>> = (0..nu).map(|u| y_channel.row(u).probs().to_vec()).collect();
    let mut residual = f64::INFINITY;
    for _ in 0..1000 {
        let mut induced = vec![0.0f64; ny];
        for u in 0..nu {
            for y in 0..ny {
                induced[y] += u_dist.prob(u) * rows[u][y];
            }
        }
        residual = induced
            .iter()
            .zip(target.probs())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            * 0.5;
        if residual < 1e-12 {
            break;
        }
        for u in 0..nu {
            let mut mass = 0.0;
            for y in 0..ny {
                let scale = if induced[y] > 0.0 {
                    target.prob(y) / induced[y]
                } else {
                    0.0
                };
                rows[u][y] *= scale;
                mass += rows[u][y];
            }
            if mass <= 0.0 {
                return Err(SrdpError::InvalidDistribution {
                    reason: "realism projection annihilated a row",
                    residual: mass,
                });
            }
            for y in 0..ny {
                rows[u][y] /= mass;
            }
        }
    }
    if residual > REALISM_TOL {
        return Err(SrdpError::NotConverged {
            algorithm: "realism IPF projection",
            iterations: 1000,
            residual,
        });
    }
    Channel::from_rows(rows)
}

// ---------------------------------------------------------------------------
// Witness search
// ---------------------------------------------------------------------------

/// Multi-start search configuration. Seeds are derived per start, so a fixed
/// `seed` and `starts` give a deterministic result regardless of thread
/// count.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub starts: usize,
    /// Auxiliary alphabet size; defaults to the cap |X|^2 + 1.
    pub u_size: Option<usize>,
    pub seed: u64,
    /// Outer multiplier rounds of the constrained search.
    pub rounds: usize,
    /// Inner quasi-Newton iterations per round.
    pub inner_iters: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            u_size: None,
            seed: 0x5eed_5eed,
            rounds: 12,
            inner_iters: 120,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.rounds == 0 || self.inner_iters == 0 {
            return Err(SrdpError::Precondition(
                "search needs at least one start, round, and inner iteration".into(),
            ));
        }
        if self.u_size == Some(0) {
            return Err(SrdpError::Precondition("u_size must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a membership query.
#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    /// A witness whose corner is componentwise within [`CERTIFY_TOL`] of the
    /// target; the corner is included.
    Certified {
        witness: Box<NoiselessWitness>,
        corner: RateTuple,
    },
    /// No witness found within the search budget. Not a proof of
    /// infeasibility.
    NotFound,
    /// Exactly infeasible; only issued on the uniform-binary Hamming
    /// instance, where the closed form decides membership.
    InfeasibleExact,
}

/// One frontier grid entry: the budgets, the smallest certified rate found
/// (if any), and the witness backing it.
#[derive(Debug, Clone)]
pub struct FrontierPoint {
    pub r0: f64,
    pub d: f64,
    pub r_min: Option<f64>,
    pub witness: Option<NoiselessWitness>,
}

struct SearchProblem<'a> {
    q: &'a Pmf,
    d: &'a DistortionMeasure,
    u_size: usize,
    r0_cap: f64,
    d_cap: f64,
}

struct Decoded {
    u_rows: Vec<f64>,
    coupling: Vec<f64>,
    y_rows: Vec<f64>,
    i_ux: f64,
    i_uy: f64,
    e_d: f64,
}

impl<'a> SearchProblem<'a> {
    fn dim(&self) -> usize {
        let nx = self.q.len();
        nx * self.u_size + self.u_size * nx
    }

    /// Decodes logits into (P_{U|X}, P_{Y|U}) with realism built in: the
    /// U-Y block parameterizes a positive coupling that Sinkhorn scales
    /// onto marginals (P_U, Q_X), so the induced output law is Q_X up to
    /// the scaling residual. `fine` controls the scaling tolerance: loose
    /// while optimizing, tight when building the final witness.
    fn decode(&self, theta: &[f64], fine: bool) -> Decoded {
        let nx = self.q.len();
        let nu = self.u_size;
        let mut u_rows = vec![0.0; nx * nu];
        softmax_rows(&theta[..nx * nu], nx, nu, &mut u_rows);

        let mut pu = vec![0.0f64; nu];
        for x in 0..nx {
            for u in 0..nu {
                pu[u] += self.q.prob(x) * u_rows[x * nu + u];
            }
        }

        // positive kernel for the coupling, bounded to avoid overflow
        let mut kernel = vec![0.0f64; nu * nx];
        for (k, &t) in kernel.iter_mut().zip(&theta[nx * nu..]) {
            *k = t.clamp(-60.0, 60.0).exp();
        }
        let mut coupling = vec![0.0f64; nu * nx];
        let (tol, iters) = if fine { (1e-15, 200_000) } else { (1e-11, 400) };
        sinkhorn_coupling(&kernel, &pu, self.q.probs(), tol, iters, &mut coupling);

        let mut y_rows = vec![0.0f64; nu * nx];
        for u in 0..nu {
            let mass: f64 = coupling[u * nx..(u + 1) * nx].iter().sum();
            if mass > 1e-290 {
                for y in 0..nx {
                    y_rows[u * nx + y] = coupling[u * nx + y] / mass;
                }
            } else {
                // unreachable letter; emit the source law so realism is kept
                y_rows[u * nx..(u + 1) * nx].copy_from_slice(self.q.probs());
            }
        }

        let (i_ux, i_uy, e_d) = self.rates_from(&u_rows, &coupling, &y_rows, &pu);
        Decoded {
            u_rows,
            coupling,
            y_rows,
            i_ux,
            i_uy,
            e_d,
        }
    }

    fn rates_from(
        &self,
        u_rows: &[f64],
        coupling: &[f64],
        y_rows: &[f64],
        pu: &[f64],
    ) -> (f64, f64, f64) {
        let nx = self.q.len();
        let nu = self.u_size;
        let mut jxu = vec![0.0f64; nx * nu];
        for x in 0..nx {
            for u in 0..nu {
                jxu[x * nu + u] = self.q.prob(x) * u_rows[x * nu + u];
            }
        }
        let hx = entropy_raw(self.q.probs());
        let hu = entropy_raw(pu);
        let i_ux = (hx + hu - entropy_raw(&jxu)).max(0.0);

        let mut py = vec![0.0f64; nx];
        for u in 0..nu {
            for y in 0..nx {
                py[y] += coupling[u * nx + y];
            }
        }
        let i_uy = (hu + entropy_raw(&py) - entropy_raw(coupling)).max(0.0);

        let mut e_d = 0.0;
        for x in 0..nx {
            for u in 0..nu {
                let w = jxu[x * nu + u];
                if w <= 0.0 {
                    continue;
                }
                for y in 0..nx {
                    e_d += w * y_rows[u * nx + y] * self.d.value(x, y);
                }
            }
        }
        (i_ux, i_uy, e_d)
    }

    /// Builds a witness candidate from decoded channels, trying the raw
    /// rows plus vertex-snapped variants at two aggressiveness levels:
    /// near-deterministic optima sit on the simplex boundary, which softmax
    /// only approaches, and stray auxiliary letters can hold onto small
    /// masses whose information cost the local search no longer feels.
    fn candidates_from(&self, dec: &Decoded) -> Vec<(NoiselessWitness, RateTuple)> {
        let mut out = Vec::new();

        if let Some(cand) = self.witness_from_rows(&dec.u_rows, &dec.y_rows) {
            out.push(cand);
        }
        for thresh in [1e-8, 3e-3] {
            if let Some(cand) = self.snapped_candidate(dec, thresh) {
                out.push(cand);
            }
        }
        out
    }

    fn witness_from_rows(
        &self,
        u_rows: &[f64],
        y_rows: &[f64],
    ) -> Option<(NoiselessWitness, RateTuple)> {
        let nx = self.q.len();
        let nu = self.u_size;
        let to_rows = |flat: &[f64], rows: usize, cols: usize| -> Vec<Vec<f64>> {
            (0..rows)
                .map(|r| flat[r * cols..(r + 1) * cols].to_vec())
                .collect()
        };
        let u_ch = Channel::from_rows(to_rows(u_rows, nx, nu)).ok()?;
        let y_ch = Channel::from_rows(to_rows(y_rows, nu, nx)).ok()?;
        let w = NoiselessWitness::new(self.q.clone(), u_ch, y_ch).ok()?;
        let corner = evaluate_witness(&w, self.d).ok()?;
        Some((w, corner))
    }

    /// Drops entries below `thresh` of their row/table maximum, then
    /// rebalances the coupling on the reduced support so realism stays
    /// exact. Returns nothing when the snap changes nothing or breaks the
    /// coupling support.
    fn snapped_candidate(
        &self,
        dec: &Decoded,
        thresh: f64,
    ) -> Option<(NoiselessWitness, RateTuple)> {
        let nx = self.q.len();
        let nu = self.u_size;
        let mut u_snap = dec.u_rows.clone();
        let mut changed = false;
        for x in 0..nx {
            let row = &mut u_snap[x * nu..(x + 1) * nu];
            let max = row.iter().cloned().fold(0.0f64, f64::max);
            let mut mass = 0.0;
            for v in row.iter_mut() {
                if *v < thresh * max {
                    if *v > 0.0 {
                        changed = true;
                    }
                    *v = 0.0;
                }
                mass += *v;
            }
            for v in row.iter_mut() {
                *v /= mass;
            }
        }
        let mut kernel_snap = dec.coupling.clone();
        let cmax = kernel_snap.iter().cloned().fold(0.0f64, f64::max);
        let mut pu = vec![0.0f64; nu];
        for x in 0..nx {
            for u in 0..nu {
                pu[u] += self.q.prob(x) * u_snap[x * nu + u];
            }
        }
        for u in 0..nu {
            for y in 0..nx {
                let v = &mut kernel_snap[u * nx + y];
                // letters without mass cannot carry coupling weight
                if *v < thresh * cmax || pu[u] <= 0.0 {
                    if *v > 0.0 {
                        changed = true;
                    }
                    *v = 0.0;
                }
            }
        }
        if !changed {
            return None;
        }
        let mut coupling = vec![0.0f64; nu * nx];
        let resid = sinkhorn_coupling(
            &kernel_snap,
            &pu,
            self.q.probs(),
            1e-15,
            200_000,
            &mut coupling,
        );
        if resid > 1e-12 {
            return None;
        }
        let mut y_rows = vec![0.0f64; nu * nx];
        for u in 0..nu {
            let mass: f64 = coupling[u * nx..(u + 1) * nx].iter().sum();
            if mass > 1e-290 {
                for y in 0..nx {
                    y_rows[u * nx + y] = coupling[u * nx + y] / mass;
                }
            } else {
                y_rows[u * nx..(u + 1) * nx].copy_from_slice(self.q.probs());
            }
        }
        self.witness_from_rows(&u_snap, &y_rows)
    }

    /// Runs the augmented-Lagrangian search from one start and returns the
    /// best feasible witness candidate the start converges to.
    fn run_start(
        &self,
        theta0: Vec<f64>,
        cfg: &SearchConfig,
    ) -> Option<(NoiselessWitness, RateTuple)> {
        let mut theta = theta0;
        let mut lambda = [0.0f64; 2];
        let mut weight = 100.0f64;
        let use_r0 = self.r0_cap.is_finite();
        let use_d = self.d_cap.is_finite();
        let mut prev_obj = f64::INFINITY;

        for round in 0..cfg.rounds {
            let lam = lambda;
            let w = weight;
            let objective = |t: &[f64]| {
                let dec = self.decode(t, false);
                let mut val = dec.i_ux;
                if use_r0 {
                    let psi = (dec.i_uy - self.r0_cap).max(-lam[0] / w);
                    val += lam[0] * psi + 0.5 * w * psi * psi;
                }
                if use_d {
                    let psi = (dec.e_d - self.d_cap).max(-lam[1] / w);
                    val += lam[1] * psi + 0.5 * w * psi * psi;
                }
                val
            };
            let iters = if round < 2 {
                cfg.inner_iters / 2
            } else {
                cfg.inner_iters
            };
            let (next, _) = lbfgs_minimize(objective, &theta, iters, 1e-10);
            theta = next;

            let dec = self.decode(&theta, false);
            let g = [
                if use_r0 { dec.i_uy - self.r0_cap } else { -1.0 },
                if use_d { dec.e_d - self.d_cap } else { -1.0 },
            ];
            lambda[0] = (lambda[0] + weight * g[0]).max(0.0);
            lambda[1] = (lambda[1] + weight * g[1]).max(0.0);
            let settled = (dec.i_ux - prev_obj).abs() < 1e-11;
            prev_obj = dec.i_ux;
            if g[0] < 1e-9 && g[1] < 1e-9 && round >= 3 && settled {
                break;
            }
            if round % 2 == 1 {
                weight = (weight * 5.0).min(1e9);
            }
        }

        let dec = self.decode(&theta, true);
        let mut best: Option<(NoiselessWitness, RateTuple)> = None;
        for (w, corner) in self.candidates_from(&dec) {
            let feasible = corner.common_rate.0 <= self.r0_cap + 1e-7
                && corner.distortion <= self.d_cap + 1e-7;
            if !feasible {
                continue;
            }
            best = match best {
                None => Some((w, corner)),
                Some(cur) if corner.rate.0 < cur.1.rate.0 => Some((w, corner)),
                Some(cur) => Some(cur),
            };
        }
        best
    }

    /// Assembles logits for a noisy-identity cascade: X embedded in the
    /// first letters of U with flip mass `t`, coupling kernel mixing an
    /// identity block with an all-ones block at weight `s`.
    fn assemble(&self, t: f64, s: f64) -> Vec<f64> {
        let nx = self.q.len();
        let nu = self.u_size;
        let mut theta = vec![-14.0f64; self.dim()];
        for x in 0..nx {
            for u in 0..nx.min(nu) {
                let p = if u == x {
                    1.0 - t
                } else {
                    t / (nx - 1).max(1) as f64
                };
                theta[x * nu + u] = p.max(1e-12).ln();
            }
        }
        let base = nx * nu;
        for u in 0..nu {
            for y in 0..nx {
                let p = if u % nx == y {
                    1.0 - s
                } else {
                    s / (nx - 1).max(1) as f64
                };
                theta[base + u * nx + y] = p.max(1e-12).ln();
            }
        }
        theta
    }

    /// Bisects the mixing levels so the start already sits near the active
    /// constraints: y-side mixing targets I(U;Y) = r0, then u-side mixing
    /// targets E d = d. Cheap and exact enough to cut the local search
    /// down to refinement.
    fn calibrated_start(&self) -> Vec<f64> {
        let max_mix = (self.q.len() - 1) as f64 / self.q.len() as f64;
        let mut s_star = 1e-4;
        if self.r0_cap.is_finite() {
            let (mut lo, mut hi) = (1e-6, max_mix);
            // I(U;Y) decreasing in s
            for _ in 0..30 {
                let mid = 0.5 * (lo + hi);
                let dec = self.decode(&self.assemble(0.01, mid), false);
                if dec.i_uy > self.r0_cap {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            s_star = 0.5 * (lo + hi);
        }
        let mut t_star = 0.01;
        if self.d_cap.is_finite() {
            let (mut lo, mut hi) = (1e-6, max_mix);
            // E d increasing in t
            for _ in 0..30 {
                let mid = 0.5 * (lo + hi);
                let dec = self.decode(&self.assemble(mid, s_star), false);
                if dec.e_d > self.d_cap {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            t_star = 0.5 * (lo + hi);
        }
        self.assemble(t_star, s_star)
    }

    fn structured_starts(&self) -> Vec<Vec<f64>> {
        let mut starts = vec![self.calibrated_start()];
        for &t in &[0.05f64, 0.25, 0.45] {
            for &s in &[0.02f64, 0.25] {
                starts.push(self.assemble(t, s));
            }
        }
        starts
    }

    /// Exact boundary witnesses that softmax parameterizations only reach
    /// in the limit: the lossless cascade (U = X, Y = U) and the
    /// independent reconstruction (constant U, Y drawn fresh from the
    /// source). Both cost nothing to evaluate and anchor the extreme
    /// corners of the frontier.
    fn vertex_candidates(&self) -> Vec<(NoiselessWitness, RateTuple)> {
        let nx = self.q.len();
        let mut out = Vec::new();
        let lossless =
            NoiselessWitness::new(self.q.clone(), Channel::identity(nx), Channel::identity(nx));
        let independent = NoiselessWitness::new(
            self.q.clone(),
            Channel::constant(nx, &Pmf::point_mass(1, 0)),
            Channel::constant(1, self.q),
        );
        for w in [lossless, independent].into_iter().flatten() {
            if let Ok(corner) = evaluate_witness(&w, self.d) {
                out.push((w, corner));
            }
        }
        out
    }

    fn search(&self, cfg: &SearchConfig) -> Option<(NoiselessWitness, RateTuple)> {
        let mut starts = self.structured_starts();
        starts.truncate(cfg.starts);
        let random_needed = cfg.starts.saturating_sub(starts.len());
        for k in 0..random_needed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed_for(cfg.seed, k as u64));
            let theta: Vec<f64> = (0..self.dim())
                .map(|_| 2.0 * (2.0 * rng.random::<f64>() - 1.0))
                .collect();
            starts.push(theta);
        }

        let calibrated_direct = self.decode(&starts[0], true);
        let mut candidates: Vec<Option<(NoiselessWitness, RateTuple)>> = starts
            .into_par_iter()
            .map(|theta| self.run_start(theta, cfg))
            .collect();
        for cand in self.candidates_from(&calibrated_direct) {
            let feasible = cand.1.common_rate.0 <= self.r0_cap + 1e-7
                && cand.1.distortion <= self.d_cap + 1e-7;
            candidates.push(feasible.then_some(cand));
        }
        for cand in self.vertex_candidates() {
            let feasible = cand.1.common_rate.0 <= self.r0_cap + 1e-7
                && cand.1.distortion <= self.d_cap + 1e-7;
            candidates.push(feasible.then_some(cand));
        }

        // deterministic reduction: smallest rate, ties broken toward the
        // smaller common-randomness corner, then the earlier start
        let mut best: Option<(NoiselessWitness, RateTuple)> = None;
        for cand in candidates.into_iter().flatten() {
            best = match best {
                None => Some(cand),
                Some(cur) => {
                    let better = cand.1.rate.0 < cur.1.rate.0 - 1e-9
                        || ((cand.1.rate.0 - cur.1.rate.0).abs() <= 1e-9
                            && cand.1.common_rate.0 < cur.1.common_rate.0);
                    Some(if better { cand } else { cur })
                }
            };
        }
        best
    }
}

/// Detects the exactly-solvable instance: uniform binary source with a
/// scaled Hamming distortion. Returns the scale when it applies.
fn binary_hamming_scale(q: &Pmf, d: &DistortionMeasure) -> Option<f64> {
    if q.len() != 2 || d.input_size() != 2 || d.output_size() != 2 {
        return None;
    }
    if (q.prob(0) - 0.5).abs() > 1e-12 {
        return None;
    }
    let lambda = d.value(0, 1);
    if lambda <= 0.0 {
        return None;
    }
    if d.value(0, 0).abs() > 1e-15
        || d.value(1, 1).abs() > 1e-15
        || (d.value(1, 0) - lambda).abs() > 1e-15
    {
        return None;
    }
    Some(lambda)
}

/// Searches for a witness certifying `target`. On the uniform-binary
/// Hamming instance the closed form decides membership exactly (and the
/// witness is the corresponding BSC cascade); elsewhere the multi-start
/// optimizer runs and `NotFound` only means the budget was exhausted.
pub fn certify_achievable(
    q: &Pmf,
    d: &DistortionMeasure,
    target: &RateTuple,
    cfg: &SearchConfig,
) -> Result<CertifyOutcome> {
    cfg.validate()?;
    if d.input_size() != q.len() {
        return Err(SrdpError::DimensionMismatch {
            context: "distortion vs source alphabet",
            expected: q.len(),
            got: d.input_size(),
        });
    }

    if let Some(lambda) = binary_hamming_scale(q, d) {
        let d_norm = target.distortion / lambda;
        return match closed_form::binary_min_r(target.common_rate.0, d_norm) {
            None => Ok(CertifyOutcome::InfeasibleExact),
            Some(r_min) if target.rate.0 + CERTIFY_TOL < r_min.0 - 1e-9 => {
                Ok(CertifyOutcome::InfeasibleExact)
            }
            Some(_) => {
                let beta = crate::info::inverse_binary_entropy(
                    (1.0 - target.common_rate.0).clamp(0.0, 1.0),
                )?;
                let alpha = if d_norm >= 0.5 {
                    0.5
                } else {
                    ((d_norm - beta) / (1.0 - 2.0 * beta)).clamp(0.0, 0.5)
                };
                let witness = NoiselessWitness::new(
                    q.clone(),
                    Channel::bsc(alpha)?,
                    Channel::bsc(if d_norm >= 0.5 { 0.5 } else { beta })?,
                )?;
                let corner = evaluate_witness(&witness, d)?;
                if corner.dominated_by(target, CERTIFY_TOL) {
                    Ok(CertifyOutcome::Certified {
                        witness: Box::new(witness),
                        corner,
                    })
                } else {
                    // numerical edge of the closed form; not a disproof
                    Ok(CertifyOutcome::NotFound)
                }
            }
        };
    }

    let problem = SearchProblem {
        q,
        d,
        u_size: cfg.u_size.unwrap_or(q.len() * q.len() + 1),
        r0_cap: target.common_rate.0,
        d_cap: target.distortion,
    };
    match problem.search(cfg) {
        Some((witness, corner)) if corner.rate.0 <= target.rate.0 + CERTIFY_TOL => {
            Ok(CertifyOutcome::Certified {
                witness: Box::new(witness),
                corner,
            })
        }
        _ => Ok(CertifyOutcome::NotFound),
    }
}

/// Heuristic frontier: for each (r0, d) budget pair, the smallest message
/// rate over witnesses found by the multi-start search, followed by a
/// monotone cleanup pass that lets a point inherit the witness of any point
/// with both budgets smaller. Every reported rate is backed by the stored
/// witness, whose own corner satisfies both budgets within 1e-7. Budgets
/// may be `f64::INFINITY` for an uncapped axis.
pub fn frontier_sweep(
    q: &Pmf,
    d: &DistortionMeasure,
    grid: &[(f64, f64)],
    cfg: &SearchConfig,
) -> Result<Vec<FrontierPoint>> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(SrdpError::Precondition("frontier grid is empty".into()));
    }
    for &(r0, dist) in grid {
        if r0 < 0.0 || dist < 0.0 || r0.is_nan() || dist.is_nan() {
            return Err(SrdpError::OutOfRange {
                what: "frontier grid entry",
                value: if r0 < 0.0 || r0.is_nan() { r0 } else { dist },
                domain: "[0, inf]",
            });
        }
    }

    let u_size = cfg.u_size.unwrap_or(q.len() * q.len() + 1);
    let mut points: Vec<FrontierPoint> = grid
        .par_iter()
        .map(|&(r0, dist)| {
            let problem = SearchProblem {
                q,
                d,
                u_size,
                r0_cap: r0,
                d_cap: dist,
            };
            match problem.search(cfg) {
                Some((witness, corner)) => FrontierPoint {
                    r0,
                    d: dist,
                    r_min: Some(corner.rate.0),
                    witness: Some(witness),
                },
                None => FrontierPoint {
                    r0,
                    d: dist,
                    r_min: None,
                    witness: None,
                },
            }
        })
        .collect();

    // monotone cleanup: a witness valid at smaller budgets is valid here too
    for i in 0..points.len() {
        let mut donor: Option<usize> = None;
        for j in 0..points.len() {
            if i == j || points[j].r_min.is_none() {
                continue;
            }
            if points[j].r0 <= points[i].r0 && points[j].d <= points[i].d {
                let better = match points[i].r_min {
                    None => true,
                    Some(cur) => points[j].r_min.unwrap() < cur - 1e-12,
                };
                if better
                    && donor
                        .map(|k| points[j].r_min.unwrap() < points[k].r_min.unwrap())
                        .unwrap_or(true)
                {
                    donor = Some(j);
                }
            }
        }
        if let Some(j) = donor {
            points[i].r_min = points[j].r_min;
            points[i].witness = points[j].witness.clone();
        }
    }
    Ok(points)
}

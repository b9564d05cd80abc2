//! Side-information regions over noiseless channels: the exact
//! encoder-and-decoder setting, the decoder-only inner bound, and the
//! jointly-i.i.d. exactness record.
//!
//! Both witness shapes carry a joint source Q_{XZ} and enforce realism on
//! the Y marginal only: the induced P_Y must equal the X marginal of the
//! source. Rate bounds are reported clamped at zero with the raw values
//! kept for cross-checks (the sum bound of the encoder-and-decoder setting
//! can be genuinely negative through its -H(Z|Y) term).

use crate::error::{Result, SrdpError};
use crate::info::{conditional_mi, entropy_raw, mutual_information, tv_raw, Bits};
use crate::noiseless::{DistortionMeasure, REALISM_TOL};
use crate::prob::{Channel, JointPmf, Pmf};

const MARKOV_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

/// Witness with side information at both encoder and decoder: a joint law
/// P_{UY|XZ} (rows indexed x*|Z|+z, columns u*|Y|+y) satisfying the Markov
/// chain X - (U,Z) - Y with |U| <= |X|^2 |Z| + 2.
#[derive(Debug, Clone, PartialEq)]
pub struct SiWitnessBoth {
    joint_source: JointPmf,
    uy_channel: Channel,
    u_size: usize,
    y_size: usize,
}

impl SiWitnessBoth {
    pub fn new(
        joint_source: JointPmf,
        uy_channel: Channel,
        u_size: usize,
        y_size: usize,
    ) -> Result<Self> {
        if joint_source.arity() != 2 {
            return Err(SrdpError::Precondition(
                "joint source must be a two-variable (X,Z) joint".into(),
            ));
        }
        let (nx, nz) = (joint_source.shape()[0], joint_source.shape()[1]);
        if uy_channel.input_size() != nx * nz {
            return Err(SrdpError::DimensionMismatch {
                context: "P(U,Y|X,Z) rows vs |X||Z|",
                expected: nx * nz,
                got: uy_channel.input_size(),
            });
        }
        if uy_channel.output_size() != u_size * y_size {
            return Err(SrdpError::DimensionMismatch {
                context: "P(U,Y|X,Z) columns vs |U||Y|",
                expected: u_size * y_size,
                got: uy_channel.output_size(),
            });
        }
        if y_size != nx {
            return Err(SrdpError::DimensionMismatch {
                context: "reconstruction alphabet must match source alphabet",
                expected: nx,
                got: y_size,
            });
        }
        let cap = nx * nx * nz + 2;
        if u_size > cap {
            return Err(SrdpError::CardinalityCap { got: u_size, cap });
        }

        let w = Self {
            joint_source,
            uy_channel,
            u_size,
            y_size,
        };
        w.check_markov()?;
        w.check_realism()?;
        Ok(w)
    }

    fn nx(&self) -> usize {
        self.joint_source.shape()[0]
    }

    fn nz(&self) -> usize {
        self.joint_source.shape()[1]
    }

    /// X - (U,Z) - Y: P(y | u, z, x) must not depend on x wherever defined.
    fn check_markov(&self) -> Result<()> {
        let (nx, nz, nu, ny) = (self.nx(), self.nz(), self.u_size, self.y_size);
        let mut worst = 0.0f64;
        for z in 0..nz {
            for u in 0..nu {
                for y in 0..ny {
                    let mut seen: Option<f64> = None;
                    for x in 0..nx {
                        let row = x * nz + z;
                        let p_uy = self.uy_channel.prob(row, u * ny + y);
                        let p_u: f64 = (0..ny)
                            .map(|yy| self.uy_channel.prob(row, u * ny + yy))
                            .sum();
                        if p_u <= 1e-14 {
                            continue;
                        }
                        let cond = p_uy / p_u;
                        match seen {
                            None => seen = Some(cond),
                            Some(prev) => worst = worst.max((cond - prev).abs()),
                        }
                    }
                }
            }
        }
        if worst > MARKOV_TOL {
            return Err(SrdpError::MarkovViolation {
                chain: "X - (U,Z) - Y",
                deviation: worst,
            });
        }
        Ok(())
    }

    fn check_realism(&self) -> Result<()> {
        let joint = self.joint()?;
        let py = joint.marginal_pmf(3)?;
        let qx = joint.marginal_pmf(0)?;
        let residual = tv_raw(py.probs(), qx.probs());
        if residual > REALISM_TOL {
            return Err(SrdpError::RealismViolation {
                residual,
                tolerance: REALISM_TOL,
            });
        }
        Ok(())
    }

    /// Full joint over (X, Z, U, Y).
    pub fn joint(&self) -> Result<JointPmf> {
        let (nx, nz, nu, ny) = (self.nx(), self.nz(), self.u_size, self.y_size);
        let mut cells = Vec::with_capacity(nx * nz * nu * ny);
        for x in 0..nx {
            for z in 0..nz {
                let base = self.joint_source.cell(&[x, z]);
                let row = x * nz + z;
                for u in 0..nu {
                    for y in 0..ny {
                        cells.push(base * self.uy_channel.prob(row, u * ny + y));
                    }
                }
            }
        }
        JointPmf::new(vec![nx, nz, nu, ny], cells)
    }

    pub fn joint_source(&self) -> &JointPmf {
        &self.joint_source
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }
}

/// Witness with side information at the decoder only: U is generated from X
/// alone (so Z - X - U holds by construction) and Y from (U, Z) (so
/// X - (U,Z) - Y holds by construction).
#[derive(Debug, Clone, PartialEq)]
pub struct SiWitnessDec {
    joint_source: JointPmf,
    u_channel: Channel,
    y_channel: Channel,
}

impl SiWitnessDec {
    /// `u_channel` maps X to U; `y_channel` maps pairs (u, z) (row index
    /// u*|Z|+z) to Y.
    pub fn new(joint_source: JointPmf, u_channel: Channel, y_channel: Channel) -> Result<Self> {
        if joint_source.arity() != 2 {
            return Err(SrdpError::Precondition(
                "joint source must be a two-variable (X,Z) joint".into(),
            ));
        }
        let (nx, nz) = (joint_source.shape()[0], joint_source.shape()[1]);
        if u_channel.input_size() != nx {
            return Err(SrdpError::DimensionMismatch {
                context: "P(U|X) input vs |X|",
                expected: nx,
                got: u_channel.input_size(),
            });
        }
        let nu = u_channel.output_size();
        if y_channel.input_size() != nu * nz {
            return Err(SrdpError::DimensionMismatch {
                context: "P(Y|U,Z) rows vs |U||Z|",
                expected: nu * nz,
                got: y_channel.input_size(),
            });
        }
        if y_channel.output_size() != nx {
            return Err(SrdpError::DimensionMismatch {
                context: "reconstruction alphabet must match source alphabet",
                expected: nx,
                got: y_channel.output_size(),
            });
        }
        let cap = nx * nx * nz + 2;
        if nu > cap {
            return Err(SrdpError::CardinalityCap { got: nu, cap });
        }
        let w = Self {
            joint_source,
            u_channel,
            y_channel,
        };
        w.check_realism()?;
        Ok(w)
    }

    fn nx(&self) -> usize {
        self.joint_source.shape()[0]
    }

    fn nz(&self) -> usize {
        self.joint_source.shape()[1]
    }

    pub fn u_size(&self) -> usize {
        self.u_channel.output_size()
    }

    pub fn joint_source(&self) -> &JointPmf {
        &self.joint_source
    }

    pub fn u_channel(&self) -> &Channel {
        &self.u_channel
    }

    pub fn y_channel(&self) -> &Channel {
        &self.y_channel
    }

    fn check_realism(&self) -> Result<()> {
        let joint = self.joint()?;
        let py = joint.marginal_pmf(3)?;
        let qx = joint.marginal_pmf(0)?;
        let residual = tv_raw(py.probs(), qx.probs());
        if residual > REALISM_TOL {
            return Err(SrdpError::RealismViolation {
                residual,
                tolerance: REALISM_TOL,
            });
        }
        Ok(())
    }

    /// Full joint over (X, Z, U, Y) = Q(x,z) P(u|x) P(y|u,z).
    pub fn joint(&self) -> Result<JointPmf> {
        let (nx, nz) = (self.nx(), self.nz());
        let nu = self.u_size();
        let ny = self.y_channel.output_size();
        let mut cells = Vec::with_capacity(nx * nz * nu * ny);
        for x in 0..nx {
            for z in 0..nz {
                let base = self.joint_source.cell(&[x, z]);
                for u in 0..nu {
                    let pu = self.u_channel.prob(x, u);
                    for y in 0..ny {
                        cells.push(base * pu * self.y_channel.prob(u * nz + z, y));
                    }
                }
            }
        }
        JointPmf::new(vec![nx, nz, nu, ny], cells)
    }
}

// ---------------------------------------------------------------------------
// Rate points
// ---------------------------------------------------------------------------

/// The three lower bounds of a side-information witness, clamped at zero,
/// with the raw (pre-clamp) values kept alongside.
#[derive(Debug, Clone, Copy)]
pub struct SiPoint {
    pub r_min: Bits,
    pub r0_min: Bits,
    pub sum_min: Bits,
    pub r_min_raw: f64,
    pub r0_min_raw: f64,
    pub sum_min_raw: f64,
    pub distortion: f64,
}

fn h_of(joint: &JointPmf, vars: &[usize]) -> Result<f64> {
    Ok(entropy_raw(joint.marginal(vars)?.cells()))
}

/// Bounds of the encoder-and-decoder setting:
/// R >= I(U;X|Z), R0 >= I(U;Y) - I(U;Z), R + R0 >= I(U;Y|Z) - H(Z|Y).
pub fn si_both_point(w: &SiWitnessBoth, d: &DistortionMeasure) -> Result<SiPoint> {
    let joint = w.joint()?;
    si_point_from_joint(&joint, d, true)
}

/// Bounds of the decoder-only inner bound:
/// R >= I(U;X) - I(U;Z), R0 >= I(U;Y) - I(U;Z), R + R0 >= I(U;Y|Z).
///
/// Under the built-in Z - X - U chain, I(U;X) - I(U;Z) coincides with
/// I(U;X|Z); both routes are computed and the larger deviation than 1e-10
/// is reported as an internal error.
pub fn si_dec_point(w: &SiWitnessDec, d: &DistortionMeasure) -> Result<SiPoint> {
    let joint = w.joint()?;
    let pt = si_point_from_joint(&joint, d, false)?;

    // cross-check the Markov identity on the two algebraic routes
    let i_ux = mutual_information(&joint.marginal(&[2, 0])?)?.0;
    let i_uz = mutual_information(&joint.marginal(&[2, 1])?)?.0;
    let i_ux_given_z = conditional_mi(&joint.marginal(&[2, 0, 1])?)?.0;
    let deviation = ((i_ux - i_uz) - i_ux_given_z).abs();
    if deviation > 1e-10 {
        return Err(SrdpError::MarkovViolation {
            chain: "Z - X - U (identity I(U;X)-I(U;Z) = I(U;X|Z))",
            deviation,
        });
    }
    Ok(pt)
}

/// Shared bound evaluation; `both` selects the encoder-and-decoder forms
/// (conditional first bound, -H(Z|Y) in the sum bound).
fn si_point_from_joint(joint: &JointPmf, d: &DistortionMeasure, both: bool) -> Result<SiPoint> {
    // variable order: (X, Z, U, Y)
    let i_uy = mutual_information(&joint.marginal(&[2, 3])?)?.0;
    let i_uz = mutual_information(&joint.marginal(&[2, 1])?)?.0;
    let i_uy_given_z = conditional_mi(&joint.marginal(&[2, 3, 1])?)?.0;

    let r_raw = if both {
        conditional_mi(&joint.marginal(&[2, 0, 1])?)?.0
    } else {
        let i_ux = mutual_information(&joint.marginal(&[2, 0])?)?.0;
        i_ux - i_uz
    };
    let r0_raw = i_uy - i_uz;
    let sum_raw = if both {
        let h_zy = h_of(joint, &[1, 3])? - h_of(joint, &[3])?;
        i_uy_given_z - h_zy
    } else {
        i_uy_given_z
    };

    let distortion = d.expected(&joint.marginal(&[0, 3])?)?;
    Ok(SiPoint {
        r_min: Bits(r_raw.max(0.0)),
        r0_min: Bits(r0_raw.max(0.0)),
        sum_min: Bits(sum_raw.max(0.0)),
        r_min_raw: r_raw,
        r0_min_raw: r0_raw,
        sum_min_raw: sum_raw,
        distortion,
    })
}

// ---------------------------------------------------------------------------
// Exactness record
// ---------------------------------------------------------------------------

/// Modeling declaration for the decoder-only setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiModelTag {
    /// Decoder output and side information declared jointly i.i.d.
    JointlyIid,
    /// No joint-i.i.d. declaration: the bounds are an inner bound only.
    General,
    /// Side information is constant; the setting reduces to the noiseless
    /// region, which is exact.
    DegenerateZ,
}

/// Whether decoder-only results are exact under the declared model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactnessRecord {
    pub exact: bool,
    pub rationale: &'static str,
}

pub fn jointly_iid_exactness_flag(tag: SiModelTag) -> ExactnessRecord {
    match tag {
        SiModelTag::JointlyIid => ExactnessRecord {
            exact: true,
            rationale: "output and side information jointly i.i.d.: region is exact",
        },
        SiModelTag::General => ExactnessRecord {
            exact: false,
            rationale: "no jointly-i.i.d. declaration: bounds are an inner bound only",
        },
        SiModelTag::DegenerateZ => ExactnessRecord {
            exact: true,
            rationale: "constant side information: reduces to the exact noiseless region",
        },
    }
}

// ---------------------------------------------------------------------------
// Realism projection for witness construction
// ---------------------------------------------------------------------------

/// Rescales a raw P(Y|U,Z) toward the realism-feasible affine set by
/// iterative proportional fitting: the induced P_Y must match the X
/// marginal of `joint_source` given `u_channel`. 1000 rounds or residual
/// below 1e-9.
pub fn realism_projected_y_channel_dec(
    joint_source: &JointPmf,
    u_channel: &Channel,
    y_raw: &Channel,
) -> Result<Channel> {
    let (nx, nz) = (joint_source.shape()[0], joint_source.shape()[1]);
    let nu = u_channel.output_size();
    let ny = y_raw.output_size();
    if y_raw.input_size() != nu * nz || ny != nx {
        return Err(SrdpError::DimensionMismatch {
            context: "realism projection shapes",
            expected: nu * nz,
            got: y_raw.input_size(),
        });
    }
    // weights P(u, z) and the target marginal
    let mut w_uz = vec![0.0f64; nu * nz];
    let mut target = vec![0.0f64; nx];
    for x in 0..nx {
        for z in 0..nz {
            let q = joint_source.cell(&[x, z]);
            target[x] += q;
            for u in 0..nu {
                w_uz[u * nz + z] += q * u_channel.prob(x, u);
            }
        }
    }

    let mut rows: Vec<Vec<f64>> = (0..nu * nz)
        .map(|r| y_raw.row(r).probs().to_vec())
        .collect();
    let mut residual = f64::INFINITY;
    for _ in 0..1000 {
        let mut induced = vec![0.0f64; ny];
        for (r, row) in rows.iter().enumerate() {
            for y in 0..ny {
                induced[y] += w_uz[r] * row[y];
            }
        }
        residual = tv_raw(&induced, &target);
        if residual < 1e-12 {
            break;
        }
        for row in rows.iter_mut() {
            let mut mass = 0.0;
            for y in 0..ny {
                let scale = if induced[y] > 0.0 {
                    target[y] / induced[y]
                } else {
                    0.0
                };
                row[y] *= scale;
                mass += row[y];
            }
            if mass <= 0.0 {
                return Err(SrdpError::InvalidDistribution {
                    reason: "realism projection annihilated a row",
                    residual: mass,
                });
            }
            for y in row.iter_mut() {
                *y /= mass;
            }
        }
    }
    if residual > REALISM_TOL {
        return Err(SrdpError::NotConverged {
            algorithm: "side-information realism IPF",
            iterations: 1000,
            residual,
        });
    }
    Channel::from_rows(rows)
}

// ---------------------------------------------------------------------------
// Membership search (decoder-only setting)
// ---------------------------------------------------------------------------

/// Outcome of a decoder-only membership query. Unlike the noiseless module
/// there is no exactly-solvable special case here: `NotFound` always means
/// the search budget ran out, never infeasibility.
#[derive(Debug, Clone)]
pub enum SiCertifyOutcome {
    Certified {
        witness: Box<SiWitnessDec>,
        point: SiPoint,
    },
    NotFound,
}

/// Searches for a decoder-only witness whose three rate bounds and
/// distortion all fall within 1e-6 of the target. Multi-start local
/// minimization of the total squared bound violation, with the Y side
/// parameterized as a coupling on (U,Z) x Y so realism holds by
/// construction.
pub fn certify_achievable_dec(
    qxz: &JointPmf,
    d: &DistortionMeasure,
    target: &crate::noiseless::RateTuple,
    cfg: &crate::noiseless::SearchConfig,
) -> Result<SiCertifyOutcome> {
    use crate::optimize::{lbfgs_minimize, seed_for, sinkhorn_coupling, softmax_rows};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rayon::prelude::*;

    cfg.validate()?;
    if qxz.arity() != 2 {
        return Err(SrdpError::Precondition(
            "side-information source must be a two-variable joint".into(),
        ));
    }
    let (nx, nz) = (qxz.shape()[0], qxz.shape()[1]);
    if d.input_size() != nx || d.output_size() != nx {
        return Err(SrdpError::DimensionMismatch {
            context: "distortion vs source alphabet",
            expected: nx,
            got: d.input_size(),
        });
    }
    let nu = cfg.u_size.unwrap_or(nx * nx * nz + 2);
    let qx: Vec<f64> = {
        let m = qxz.marginal_pmf(0)?;
        m.probs().to_vec()
    };
    let dim = nx * nu + nu * nz * nx;

    let evaluate_theta = |theta: &[f64], fine: bool| -> Option<(SiWitnessDec, SiPoint)> {
        let mut u_rows = vec![0.0; nx * nu];
        softmax_rows(&theta[..nx * nu], nx, nu, &mut u_rows);
        // row weights P(u, z)
        let mut w_uz = vec![0.0f64; nu * nz];
        for x in 0..nx {
            for z in 0..nz {
                let q = qxz.cell(&[x, z]);
                for u in 0..nu {
                    w_uz[u * nz + z] += q * u_rows[x * nu + u];
                }
            }
        }
        let mut kernel = vec![0.0f64; nu * nz * nx];
        for (k, &t) in kernel.iter_mut().zip(&theta[nx * nu..]) {
            *k = t.clamp(-60.0, 60.0).exp();
        }
        let mut coupling = vec![0.0f64; nu * nz * nx];
        let (tol, iters) = if fine { (1e-15, 200_000) } else { (1e-11, 400) };
        sinkhorn_coupling(&kernel, &w_uz, &qx, tol, iters, &mut coupling);
        let mut y_rows = vec![0.0f64; nu * nz * nx];
        for r in 0..nu * nz {
            let mass: f64 = coupling[r * nx..(r + 1) * nx].iter().sum();
            if mass > 1e-290 {
                for y in 0..nx {
                    y_rows[r * nx + y] = coupling[r * nx + y] / mass;
                }
            } else {
                y_rows[r * nx..(r + 1) * nx].copy_from_slice(&qx);
            }
        }
        let to_rows = |flat: &[f64], rows: usize, cols: usize| -> Vec<Vec<f64>> {
            (0..rows)
                .map(|r| flat[r * cols..(r + 1) * cols].to_vec())
                .collect()
        };
        let u_ch = Channel::from_rows(to_rows(&u_rows, nx, nu)).ok()?;
        let y_ch = Channel::from_rows(to_rows(&y_rows, nu * nz, nx)).ok()?;
        let w = SiWitnessDec::new(qxz.clone(), u_ch, y_ch).ok()?;
        let pt = si_dec_point(&w, d).ok()?;
        Some((w, pt))
    };

    let violation = |pt: &SiPoint| -> f64 {
        let sum_target = target.rate.0 + target.common_rate.0;
        (pt.r_min.0 - target.rate.0)
            .max(0.0)
            .max((pt.r0_min.0 - target.common_rate.0).max(0.0))
            .max((pt.sum_min.0 - sum_target).max(0.0))
            .max((pt.distortion - target.distortion).max(0.0))
    };

    let run = |theta0: Vec<f64>| -> Option<(SiWitnessDec, SiPoint)> {
        let objective = |t: &[f64]| -> f64 {
            match evaluate_theta(t, false) {
                Some((_, pt)) => {
                    let sum_target = target.rate.0 + target.common_rate.0;
                    let v1 = (pt.r_min.0 - target.rate.0).max(0.0);
                    let v2 = (pt.r0_min.0 - target.common_rate.0).max(0.0);
                    let v3 = (pt.sum_min.0 - sum_target).max(0.0);
                    let v4 = (pt.distortion - target.distortion).max(0.0);
                    v1 * v1 + v2 * v2 + v3 * v3 + v4 * v4
                }
                None => 1e6,
            }
        };
        let mut theta = theta0;
        for _ in 0..3 {
            let (next, val) = lbfgs_minimize(objective, &theta, cfg.inner_iters, 1e-12);
            theta = next;
            if val <= 1e-16 {
                break;
            }
        }
        let (w, pt) = evaluate_theta(&theta, true)?;
        (violation(&pt) <= 1e-6).then_some((w, pt))
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    for k in 0..cfg.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(cfg.seed ^ 0x51de, k as u64));
        starts.push(
            (0..dim)
                .map(|_| {
                    if k == 0 {
                        0.0
                    } else {
                        2.0 * (2.0 * rng.random::<f64>() - 1.0)
                    }
                })
                .collect(),
        );
    }
    let found: Vec<Option<(SiWitnessDec, SiPoint)>> = starts.into_par_iter().map(run).collect();
    match found.into_iter().flatten().next() {
        Some((witness, point)) => Ok(SiCertifyOutcome::Certified {
            witness: Box::new(witness),
            point,
        }),
        None => Ok(SiCertifyOutcome::NotFound),
    }
}

/// Doubly symmetric binary source: uniform X with Z = X through a BSC.
pub fn dsbs(crossover: f64) -> Result<JointPmf> {
    let bsc = Channel::bsc(crossover)?;
    crate::prob::joint_from(&Pmf::uniform(2), &bsc)
}

/// Lifts a noiseless witness into the decoder-only shape with constant Z.
pub fn dec_witness_from_noiseless(w: &crate::noiseless::NoiselessWitness) -> Result<SiWitnessDec> {
    let nx = w.source().len();
    let mut cells = Vec::with_capacity(nx);
    for x in 0..nx {
        cells.push(w.source().prob(x));
    }
    let joint_source = JointPmf::new(vec![nx, 1], cells)?;
    SiWitnessDec::new(joint_source, w.u_channel().clone(), w.y_channel().clone())
}

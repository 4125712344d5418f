//! Embedding route to quotient norms. The block Gram operator of the kernel
//! family is assembled directly from parameter entries (transposed blocks in
//! node-major order), coset data is conjugated by its square roots, and the
//! resulting operator norms are collected per sampled parameter.
//!
//! This deliberately does not reuse the Kronecker assembly in [`crate::pick`]:
//! the two routes are compared against each other in the integration tests.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{b_lambda, f_lambda, MatrixParam, NodeConfig, SZEGO_TOL};
use crate::linalg::{
    c64, cr, herm_eig, kron, operator_norm, psd_inv_sqrt, psd_sqrt, CMatrix, HermitianMatrix, C64,
};
use crate::par::map_collect;
use crate::pick::SamplingPlan;

/// Draws a uniformly distributed co-isometric pair (alpha, beta): the first m
/// rows of a Haar unitary of size 2m, via QR of a Gaussian matrix with the
/// usual diagonal phase correction. With `real_only` the draw is from the
/// orthogonal group instead.
pub fn sample_matrix_param(
    m: usize,
    real_only: bool,
    rng: &mut ChaCha8Rng,
) -> Result<MatrixParam> {
    if m == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    let two = 2 * m;
    let g = DMatrix::from_fn(two, two, |_, _| {
        let x: f64 = StandardNormal.sample(rng);
        if real_only {
            cr(x)
        } else {
            let y: f64 = StandardNormal.sample(rng);
            c64(x, y) / cr(std::f64::consts::SQRT_2)
        }
    });
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut fixed = q.clone();
    for k in 0..two {
        let d = r[(k, k)];
        let phase = if d.norm() > 1e-300 { d / cr(d.norm()) } else { cr(1.0) };
        for i in 0..two {
            fixed[(i, k)] = q[(i, k)] * phase;
        }
    }
    let alpha = fixed.view((0, 0), (m, m)).into_owned();
    let beta = fixed.view((0, m), (m, m)).into_owned();
    MatrixParam::new(alpha, beta)
}

/// Deterministic member of the sampling stream: the draw is keyed by
/// (seed, level, index) so independent callers enumerate identical parameters.
pub fn sample_matrix_param_indexed(
    m: usize,
    real_only: bool,
    seed: u64,
    index: u64,
) -> Result<MatrixParam> {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(m as u64).to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    key[24] = real_only as u8;
    let mut rng = ChaCha8Rng::from_seed(key);
    sample_matrix_param(m, real_only, &mut rng)
}

/// Transposed kernel block, written out from the parameter entries:
/// (alpha^t + f(z_i) beta^t)(conj(alpha) + conj(f(z_j)) conj(beta))
/// + B(z_i) conj(B(z_j)) / (1 - z_i conj(z_j)) I.
fn kernel_block_transposed(
    cfg: &NodeConfig,
    mp: &MatrixParam,
    zi: C64,
    zj: C64,
) -> Result<CMatrix> {
    let den = cr(1.0) - zi * zj.conj();
    if den.norm() < SZEGO_TOL {
        return Err(Error::Domain("kernel denominator below supported floor".into()));
    }
    let m = mp.level();
    let left = mp.alpha().transpose() + mp.beta().transpose() * f_lambda(cfg, zi);
    let right = mp.alpha().conjugate() + mp.beta().conjugate() * f_lambda(cfg, zj).conj();
    let b = b_lambda(cfg);
    let szego = b.eval(zi) * b.eval(zj).conj() / den;
    Ok(left * right + CMatrix::identity(m, m) * szego)
}

/// Block Gram operator of the kernel at a matrix parameter: the (i, j) block
/// is the transposed kernel block at the node pair, in node-major order.
#[derive(Clone, Debug)]
pub struct PsiImage {
    pub level: usize,
    pub blocks: Vec<Vec<CMatrix>>,
    pub assembled: HermitianMatrix,
}

pub fn psi_image(cfg: &NodeConfig, mp: &MatrixParam) -> Result<PsiImage> {
    let n = cfg.len();
    let m = mp.level();
    let nodes = cfg.nodes();
    let mut blocks = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(kernel_block_transposed(cfg, mp, nodes[i], nodes[j])?);
        }
        blocks.push(row);
    }
    let mut assembled = CMatrix::zeros(n * m, n * m);
    for (i, row) in blocks.iter().enumerate() {
        for (j, blk) in row.iter().enumerate() {
            assembled.view_mut((i * m, j * m), (m, m)).copy_from(blk);
        }
    }
    let assembled = HermitianMatrix::new(&assembled)?;
    Ok(PsiImage { level: m, blocks, assembled })
}

/// Coset data pushed through the block Gram operator: gamma is the
/// conjugation of the block-diagonal target operator by the inverse square
/// root on the left and the square root on the right.
#[derive(Clone, Debug)]
pub struct GammaImage {
    pub level: usize,
    pub gamma: CMatrix,
    pub norm: f64,
    pub psi_min_eig: f64,
}

/// Builds the gamma image for uniform r x r target blocks, one per node.
/// Index order is (target row, node, parameter row); the Gram operator acts
/// as identity on the target factor.
pub fn gamma_image(cfg: &NodeConfig, blocks: &[CMatrix], mp: &MatrixParam) -> Result<GammaImage> {
    let n = cfg.len();
    if blocks.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} target blocks, got {}",
            blocks.len()
        )));
    }
    let r = blocks[0].nrows();
    if r == 0 || blocks.iter().any(|b| b.nrows() != r || b.ncols() != r) {
        return Err(Error::InvalidInput("target blocks must be square and of equal size".into()));
    }
    let m = mp.level();
    let psi = psi_image(cfg, mp)?;
    let eig = herm_eig(&psi.assembled)?;
    let psi_min_eig = eig.eigenvalues[0];
    let sqrt = psd_sqrt(&psi.assembled, 1e-12)?;
    let inv_sqrt = psd_inv_sqrt(&psi.assembled, 1e-12)?;

    let nm = n * m;
    let mut d = CMatrix::zeros(r * nm, r * nm);
    for i in 0..n {
        for c in 0..r {
            for c2 in 0..r {
                let w = blocks[i][(c, c2)];
                for a in 0..m {
                    d[(c * nm + i * m + a, c2 * nm + i * m + a)] = w;
                }
            }
        }
    }
    let id_r = CMatrix::identity(r, r);
    let big_sqrt = kron(&id_r, sqrt.matrix());
    let big_inv_sqrt = kron(&id_r, inv_sqrt.matrix());
    let gamma = big_inv_sqrt * d * big_sqrt;
    let norm = operator_norm(&gamma);
    Ok(GammaImage { level: m, gamma, norm, psi_min_eig })
}

/// Scalar-target convenience: wraps node values as 1 x 1 blocks.
pub fn gamma_image_scalar(
    cfg: &NodeConfig,
    values: &[C64],
    mp: &MatrixParam,
) -> Result<GammaImage> {
    let blocks: Vec<CMatrix> = values.iter().map(|&w| CMatrix::from_element(1, 1, w)).collect();
    gamma_image(cfg, &blocks, mp)
}

/// One sampled parameter's contribution to the embedding norm.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingSample {
    pub level: usize,
    pub index: u64,
    pub norm: f64,
    pub psi_min_eig: f64,
}

/// Sup of gamma-image norms over the sampling plan, with per-sample detail.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub norm: f64,
    pub worst_level: usize,
    pub worst_index: u64,
    pub samples: Vec<EmbeddingSample>,
}

pub fn embedding_report(
    cfg: &NodeConfig,
    blocks: &[CMatrix],
    plan: &SamplingPlan,
) -> Result<EmbeddingReport> {
    if plan.matrix_levels.is_empty() || plan.samples_per_level == 0 {
        return Err(Error::InvalidInput("sampling plan enumerates no parameters".into()));
    }
    let mut jobs = Vec::new();
    for &m in &plan.matrix_levels {
        for idx in 0..plan.samples_per_level {
            jobs.push((m, idx as u64));
        }
    }
    let samples: Vec<Result<EmbeddingSample>> = map_collect(jobs, |(m, idx)| {
        let mp = sample_matrix_param_indexed(m, plan.real_only, plan.seed, idx)?;
        let g = gamma_image(cfg, blocks, &mp)?;
        Ok(EmbeddingSample { level: m, index: idx, norm: g.norm, psi_min_eig: g.psi_min_eig })
    });
    let samples: Vec<EmbeddingSample> = samples.into_iter().collect::<Result<_>>()?;
    let best = samples
        .iter()
        .max_by(|a, b| a.norm.partial_cmp(&b.norm).expect("norms are finite"))
        .expect("plan is nonempty");
    Ok(EmbeddingReport {
        norm: best.norm,
        worst_level: best.level,
        worst_index: best.index,
        samples: samples.clone(),
    })
}

/// Sampled approximation of the quotient norm along the embedding route.
pub fn embedding_norm(cfg: &NodeConfig, blocks: &[CMatrix], plan: &SamplingPlan) -> Result<f64> {
    Ok(embedding_report(cfg, blocks, plan)?.norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::matrix_kernel;
    use rand::Rng;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn example_config() -> NodeConfig {
        NodeConfig::new(
            cr(1.0 / SQRT2),
            vec![cr(4.0 / (3.0 * SQRT2)), cr(1.0 / (2.0 * SQRT2)), cr(SQRT2 / 3.0), cr(-1.0 / SQRT2)],
        )
        .unwrap()
    }

    #[test]
    fn sampler_produces_co_isometries_deterministically() {
        for m in 1..=4 {
            for real_only in [false, true] {
                let a = sample_matrix_param_indexed(m, real_only, 7, 3).unwrap();
                let b = sample_matrix_param_indexed(m, real_only, 7, 3).unwrap();
                assert_eq!(a.alpha(), b.alpha());
                assert_eq!(a.beta(), b.beta());
                let c = sample_matrix_param_indexed(m, real_only, 7, 4).unwrap();
                assert!(operator_norm(&(a.alpha() - c.alpha())) > 1e-6);
                if real_only {
                    let imag: f64 = a
                        .alpha()
                        .iter()
                        .chain(a.beta().iter())
                        .map(|z| z.im.abs())
                        .sum();
                    assert!(imag < 1e-14);
                }
            }
        }
    }

    #[test]
    fn transposed_blocks_match_kernel_route() {
        let cfg = example_config();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for m in 1..=3 {
            let mp = sample_matrix_param(m, false, &mut rng).unwrap();
            let psi = psi_image(&cfg, &mp).unwrap();
            for (i, &zi) in cfg.nodes().iter().enumerate() {
                for (j, &zj) in cfg.nodes().iter().enumerate() {
                    let expect = matrix_kernel(&cfg, &mp, zi, zj).unwrap().transpose();
                    let dev = operator_norm(&(&psi.blocks[i][j] - expect));
                    assert!(dev < 1e-12, "block ({i},{j}) deviates by {dev}");
                }
            }
        }
    }

    #[test]
    fn psi_is_positive_definite_on_example() {
        let cfg = example_config();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for m in 1..=3 {
            let mp = sample_matrix_param(m, false, &mut rng).unwrap();
            let psi = psi_image(&cfg, &mp).unwrap();
            let eig = herm_eig(&psi.assembled).unwrap();
            assert!(eig.eigenvalues[0] > 1e-6, "min eig {}", eig.eigenvalues[0]);
        }
    }

    #[test]
    fn gamma_trace_and_annihilating_product() {
        let cfg = example_config();
        let values: Vec<C64> = cfg.nodes().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in 1..=3 {
            let mp = sample_matrix_param(m, false, &mut rng).unwrap();
            let g = gamma_image_scalar(&cfg, &values, &mp).unwrap();
            let tr_expect: C64 = values.iter().sum::<C64>() * cr(m as f64);
            assert!((g.gamma.trace() - tr_expect).norm() < 1e-8);

            let d = g.gamma.nrows();
            let id = CMatrix::identity(d, d);
            let mut prod = id.clone();
            for &w in &values {
                prod = &prod * (&g.gamma - &id * w);
            }
            assert!(operator_norm(&prod) < 1e-8, "annihilating product {}", operator_norm(&prod));
        }
    }

    #[test]
    fn gamma_handles_block_targets() {
        let cfg = example_config();
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let r = 2;
        let blocks: Vec<CMatrix> = (0..cfg.len())
            .map(|_| {
                CMatrix::from_fn(r, r, |_, _| {
                    c64(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))
                })
            })
            .collect();
        let mp = sample_matrix_param(2, false, &mut rng).unwrap();
        let g = gamma_image(&cfg, &blocks, &mp).unwrap();
        assert_eq!(g.gamma.nrows(), r * cfg.len() * 2);
        assert!(g.norm.is_finite() && g.norm > 0.0);
    }

    #[test]
    fn embedding_report_is_deterministic() {
        let cfg = example_config();
        let values: Vec<C64> = cfg.nodes().iter().map(|&z| z * cr(0.3)).collect();
        let blocks: Vec<CMatrix> =
            values.iter().map(|&w| CMatrix::from_element(1, 1, w)).collect();
        let plan = SamplingPlan {
            matrix_levels: vec![1, 2],
            samples_per_level: 6,
            seed: 11,
            ..SamplingPlan::default()
        };
        let a = embedding_report(&cfg, &blocks, &plan).unwrap();
        let b = embedding_report(&cfg, &blocks, &plan).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.samples.len(), 12);
        assert!(a.norm >= a.samples.iter().map(|s| s.norm).fold(0.0, f64::max) - 1e-15);
    }

    #[test]
    fn embedding_rejects_bad_blocks() {
        let cfg = example_config();
        let plan = SamplingPlan::default();
        assert!(embedding_report(&cfg, &[], &plan).is_err());
        let ragged = vec![
            CMatrix::identity(1, 1),
            CMatrix::identity(2, 2),
            CMatrix::identity(1, 1),
            CMatrix::identity(1, 1),
        ];
        assert!(embedding_report(&cfg, &ragged, &plan).is_err());
    }
}

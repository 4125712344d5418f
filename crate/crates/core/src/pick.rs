//! Feasibility tests for bounded interpolation in the constrained algebra.
//! Scalar problems sweep the parameter family and check positivity of the
//! associated kernel matrices; matricial problems assemble the block Gram
//! operator by Kronecker sums and test a norm condition equivalent to it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann::sample_matrix_param_indexed;
use crate::kernel::{
    matrix_kernel, mat_to_rows, pair, rows_to_mat, scalar_kernel, unpair, MatrixParam, NodeConfig,
    ScalarParam,
};
use crate::linalg::{
    cr, kron, operator_norm, psd_check, psd_inv_sqrt, psd_sqrt, CMatrix, HermitianMatrix, C64,
};
use crate::par::map_collect;

/// Eigenvalue slack (per unit of matrix scale) when testing positivity.
pub const FEASIBILITY_EIG_TOL: f64 = 1e-9;

/// Allowed excess over 1 for the norm form of the feasibility test.
pub const FEASIBILITY_NORM_TOL: f64 = 1e-9;

/// Interpolation targets: one scalar or one square block per node.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "TargetsRepr", into = "TargetsRepr")]
pub enum Targets {
    Scalar(Vec<C64>),
    Blocks(Vec<CMatrix>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TargetsRepr {
    Scalar { values: Vec<[f64; 2]> },
    Blocks { blocks: Vec<Vec<Vec<[f64; 2]>>> },
}

impl From<Targets> for TargetsRepr {
    fn from(t: Targets) -> Self {
        match t {
            Targets::Scalar(v) => TargetsRepr::Scalar { values: v.iter().map(|&z| pair(z)).collect() },
            Targets::Blocks(b) => TargetsRepr::Blocks { blocks: b.iter().map(mat_to_rows).collect() },
        }
    }
}

impl TryFrom<TargetsRepr> for Targets {
    type Error = Error;
    fn try_from(repr: TargetsRepr) -> Result<Self> {
        match repr {
            TargetsRepr::Scalar { values } => {
                Ok(Targets::Scalar(values.into_iter().map(unpair).collect()))
            }
            TargetsRepr::Blocks { blocks } => {
                let mats: Vec<CMatrix> =
                    blocks.iter().map(|rows| rows_to_mat(rows)).collect::<Result<_>>()?;
                Ok(Targets::Blocks(mats))
            }
        }
    }
}

impl Targets {
    pub fn len(&self) -> usize {
        match self {
            Targets::Scalar(v) => v.len(),
            Targets::Blocks(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Block size r: 1 for scalar targets.
    pub fn dim(&self) -> usize {
        match self {
            Targets::Scalar(_) => 1,
            Targets::Blocks(b) => b.first().map_or(0, |m| m.nrows()),
        }
    }
}

/// A node configuration together with per-node targets of uniform size.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct InterpolationProblem {
    config: NodeConfig,
    targets: Targets,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    config: NodeConfig,
    targets: Targets,
}

impl From<InterpolationProblem> for ProblemRepr {
    fn from(p: InterpolationProblem) -> Self {
        Self { config: p.config, targets: p.targets }
    }
}

impl TryFrom<ProblemRepr> for InterpolationProblem {
    type Error = Error;
    fn try_from(repr: ProblemRepr) -> Result<Self> {
        InterpolationProblem::new(repr.config, repr.targets)
    }
}

impl InterpolationProblem {
    pub fn new(config: NodeConfig, targets: Targets) -> Result<Self> {
        if targets.len() != config.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} targets, got {}",
                config.len(),
                targets.len()
            )));
        }
        if let Targets::Blocks(blocks) = &targets {
            let r = targets.dim();
            if r == 0 || blocks.iter().any(|b| b.nrows() != r || b.ncols() != r) {
                return Err(Error::InvalidInput(
                    "target blocks must be square and of equal size".into(),
                ));
            }
        }
        Ok(Self { config, targets })
    }

    pub fn config(&self) -> &NodeConfig {
        &self.config
    }

    pub fn targets(&self) -> &Targets {
        &self.targets
    }

    pub fn target_dim(&self) -> usize {
        self.targets.dim()
    }

    pub fn scalar_values(&self) -> Option<&[C64]> {
        match &self.targets {
            Targets::Scalar(v) => Some(v),
            Targets::Blocks(_) => None,
        }
    }

    /// The targets as uniform square blocks; scalars become 1 x 1 blocks.
    pub fn block_values(&self) -> Vec<CMatrix> {
        match &self.targets {
            Targets::Scalar(v) => v.iter().map(|&w| CMatrix::from_element(1, 1, w)).collect(),
            Targets::Blocks(b) => b.clone(),
        }
    }
}

/// How a feasibility sweep enumerates the parameter family.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplingPlan {
    /// Size of the deterministic theta grid for scalar sweeps.
    pub scalar_samples: usize,
    /// Block sizes at which matrix parameters are drawn.
    pub matrix_levels: Vec<usize>,
    /// Haar draws per level.
    pub samples_per_level: usize,
    /// Base seed for the deterministic sampling stream.
    pub seed: u64,
    /// Local refinement rounds around the worst grid point.
    pub refine_iters: usize,
    /// Restrict parameter draws to real entries.
    pub real_only: bool,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        Self {
            scalar_samples: 4096,
            matrix_levels: vec![1, 2, 3],
            samples_per_level: 64,
            seed: 0,
            refine_iters: 3,
            real_only: false,
        }
    }
}

/// Which member of the parameter family witnessed the reported value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyParam {
    Theta { theta: f64 },
    Haar { level: usize, index: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FeasibleOnSamples,
    Infeasible,
}

/// Outcome of a feasibility sweep. `worst_value` is the extreme of the
/// reported measure over all sampled parameters: the lowest matrix eigenvalue
/// for scalar sweeps, the largest conjugated operator norm for matricial ones.
#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub verdict: Verdict,
    pub measure: String,
    pub worst_value: f64,
    pub witness: FamilyParam,
    pub samples_used: usize,
}

/// Matrix [(1 - w_i conj(w_j)) k(z_i, z_j)] whose positivity at every family
/// parameter characterizes solvability of the scalar problem.
pub fn scalar_pick_matrix(
    problem: &InterpolationProblem,
    param: &ScalarParam,
) -> Result<HermitianMatrix> {
    let w = problem
        .scalar_values()
        .ok_or_else(|| Error::InvalidInput("scalar targets required".into()))?;
    let cfg = problem.config();
    let nodes = cfg.nodes();
    let n = nodes.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let k = scalar_kernel(cfg, param, nodes[i], nodes[j])?;
            m[(i, j)] = (cr(1.0) - w[i] * w[j].conj()) * k;
        }
    }
    HermitianMatrix::new(&m)
}

struct ScalarSample {
    theta: f64,
    min_eig: f64,
    ok: bool,
}

fn scalar_sample(problem: &InterpolationProblem, theta: f64) -> Result<ScalarSample> {
    let h = scalar_pick_matrix(problem, &ScalarParam::from_theta(theta))?;
    let (ok, min_eig) = psd_check(&h, FEASIBILITY_EIG_TOL)?;
    Ok(ScalarSample { theta, min_eig, ok })
}

/// Sweeps the scalar parameter family over a deterministic theta grid with
/// local refinement around the worst point, plus complex draws unless the
/// plan is real-only. Feasible verdicts are relative to the sampled set.
pub fn scalar_solvable(
    problem: &InterpolationProblem,
    plan: &SamplingPlan,
) -> Result<FeasibilityReport> {
    if problem.scalar_values().is_none() {
        return Err(Error::InvalidInput("scalar targets required".into()));
    }
    let n_grid = plan.scalar_samples.max(8);
    let pi = std::f64::consts::PI;

    let thetas: Vec<f64> = (0..n_grid).map(|j| pi * j as f64 / n_grid as f64).collect();
    let grid: Vec<Result<ScalarSample>> =
        map_collect(thetas, |theta| scalar_sample(problem, theta));
    let mut samples_used = n_grid;
    let mut all_ok = true;
    let mut worst = ScalarSample { theta: 0.0, min_eig: f64::INFINITY, ok: true };
    fn note(all_ok: &mut bool, worst: &mut ScalarSample, s: ScalarSample) {
        *all_ok &= s.ok;
        if s.min_eig < worst.min_eig {
            *worst = s;
        }
    }
    for s in grid {
        note(&mut all_ok, &mut worst, s?);
    }

    let mut delta = pi / n_grid as f64;
    for _ in 0..plan.refine_iters {
        let center = worst.theta;
        for t in 0..16 {
            let theta = (center - delta + 2.0 * delta * t as f64 / 15.0).rem_euclid(pi);
            note(&mut all_ok, &mut worst, scalar_sample(problem, theta)?);
            samples_used += 1;
        }
        delta /= 8.0;
    }

    let mut witness = FamilyParam::Theta { theta: worst.theta };
    let mut worst_value = worst.min_eig;
    if !plan.real_only {
        for idx in 0..plan.samples_per_level as u64 {
            let mp = sample_matrix_param_indexed(1, false, plan.seed, idx)?;
            let p = ScalarParam::normalized(mp.alpha()[(0, 0)], mp.beta()[(0, 0)])?;
            let h = scalar_pick_matrix(problem, &p)?;
            let (ok, min_eig) = psd_check(&h, FEASIBILITY_EIG_TOL)?;
            all_ok &= ok;
            samples_used += 1;
            if min_eig < worst_value {
                worst_value = min_eig;
                witness = FamilyParam::Haar { level: 1, index: idx };
            }
        }
    }

    Ok(FeasibilityReport {
        verdict: if all_ok { Verdict::FeasibleOnSamples } else { Verdict::Infeasible },
        measure: "min_eigenvalue".into(),
        worst_value,
        witness,
        samples_used,
    })
}

fn elementary(n: usize, i: usize, j: usize) -> CMatrix {
    let mut f = CMatrix::zeros(n, n);
    f[(i, j)] = cr(1.0);
    f
}

/// Assembles the pair (psi, phi) of the norm-form feasibility test at a
/// matrix parameter. psi is the Kronecker sum of elementary matrices tensored
/// with transposed kernel blocks and an identity of the target size; phi is
/// block diagonal with the targets repeated along the parameter dimension.
/// Index order is (node, parameter row, target row).
pub fn trace_condition_operator(
    problem: &InterpolationProblem,
    mp: &MatrixParam,
) -> Result<(HermitianMatrix, CMatrix)> {
    let cfg = problem.config();
    let nodes = cfg.nodes();
    let n = nodes.len();
    let m = mp.level();
    let r = problem.target_dim();
    let id_r = CMatrix::identity(r, r);
    let id_m = CMatrix::identity(m, m);

    let dim = n * m * r;
    let mut psi = CMatrix::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            let k = matrix_kernel(cfg, mp, nodes[j], nodes[i])?;
            psi += kron(&kron(&elementary(n, j, i), &k.transpose()), &id_r);
        }
    }

    let blocks = problem.block_values();
    let mut phi = CMatrix::zeros(dim, dim);
    for (i, w) in blocks.iter().enumerate() {
        phi += kron(&kron(&elementary(n, i, i), &id_m), w);
    }

    Ok((HermitianMatrix::new(&psi)?, phi))
}

/// Norm of psi^{-1/2} phi psi^{1/2} at one matrix parameter; the problem is
/// solvable exactly when this stays at most 1 over the whole family.
pub fn matricial_norm(problem: &InterpolationProblem, mp: &MatrixParam) -> Result<f64> {
    let (psi, phi) = trace_condition_operator(problem, mp)?;
    let sqrt = psd_sqrt(&psi, 1e-12)?;
    let inv_sqrt = psd_inv_sqrt(&psi, 1e-12)?;
    Ok(operator_norm(&(inv_sqrt.matrix() * phi * sqrt.matrix())))
}

/// One sampled parameter's norm contribution.
#[derive(Clone, Debug, Serialize)]
pub struct LevelNorm {
    pub level: usize,
    pub index: u64,
    pub norm: f64,
}

fn sampled_norms(problem: &InterpolationProblem, plan: &SamplingPlan) -> Result<Vec<LevelNorm>> {
    if plan.matrix_levels.is_empty() || plan.samples_per_level == 0 {
        return Err(Error::InvalidInput("sampling plan enumerates no parameters".into()));
    }
    let mut jobs = Vec::new();
    for &m in &plan.matrix_levels {
        for idx in 0..plan.samples_per_level {
            jobs.push((m, idx as u64));
        }
    }
    let out: Vec<Result<LevelNorm>> = map_collect(jobs, |(m, idx)| {
        let mp = sample_matrix_param_indexed(m, plan.real_only, plan.seed, idx)?;
        let norm = matricial_norm(problem, &mp)?;
        Ok(LevelNorm { level: m, index: idx, norm })
    });
    out.into_iter().collect()
}

/// Sweeps matrix parameters over the plan's levels and tests the norm form of
/// feasibility at each draw.
pub fn matricial_solvable(
    problem: &InterpolationProblem,
    plan: &SamplingPlan,
) -> Result<FeasibilityReport> {
    let norms = sampled_norms(problem, plan)?;
    let worst = norms
        .iter()
        .max_by(|a, b| a.norm.partial_cmp(&b.norm).expect("norms are finite"))
        .expect("plan is nonempty");
    let feasible = worst.norm <= 1.0 + FEASIBILITY_NORM_TOL;
    Ok(FeasibilityReport {
        verdict: if feasible { Verdict::FeasibleOnSamples } else { Verdict::Infeasible },
        measure: "operator_norm".into(),
        worst_value: worst.norm,
        witness: FamilyParam::Haar { level: worst.level, index: worst.index },
        samples_used: norms.len(),
    })
}

/// Detailed view of the sampled quotient norm.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientNormReport {
    pub norm: f64,
    pub worst: FamilyParam,
    pub samples: Vec<LevelNorm>,
}

/// Sampled approximation (from below) of the quotient norm of the coset
/// determined by the targets: the sup of [`matricial_norm`] over the plan.
pub fn quotient_norm_report(
    problem: &InterpolationProblem,
    plan: &SamplingPlan,
) -> Result<QuotientNormReport> {
    let samples = sampled_norms(problem, plan)?;
    let worst = samples
        .iter()
        .max_by(|a, b| a.norm.partial_cmp(&b.norm).expect("norms are finite"))
        .expect("plan is nonempty");
    Ok(QuotientNormReport {
        norm: worst.norm,
        worst: FamilyParam::Haar { level: worst.level, index: worst.index },
        samples: samples.clone(),
    })
}

pub fn quotient_norm(problem: &InterpolationProblem, plan: &SamplingPlan) -> Result<f64> {
    Ok(quotient_norm_report(problem, plan)?.norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::embedding_norm;
    use crate::kernel::{b_lambda, gram_matrix};
    use crate::linalg::herm_eig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn example_config() -> NodeConfig {
        NodeConfig::new(
            cr(1.0 / SQRT2),
            vec![cr(4.0 / (3.0 * SQRT2)), cr(1.0 / (2.0 * SQRT2)), cr(SQRT2 / 3.0), cr(-1.0 / SQRT2)],
        )
        .unwrap()
    }

    fn quick_plan() -> SamplingPlan {
        SamplingPlan {
            scalar_samples: 512,
            matrix_levels: vec![1, 2],
            samples_per_level: 12,
            refine_iters: 2,
            ..SamplingPlan::default()
        }
    }

    fn problem(values: Vec<C64>) -> InterpolationProblem {
        InterpolationProblem::new(example_config(), Targets::Scalar(values)).unwrap()
    }

    #[test]
    fn constant_targets_are_feasible() {
        let p = problem(vec![cr(0.3); 4]);
        let report = scalar_solvable(&p, &quick_plan()).unwrap();
        assert_eq!(report.verdict, Verdict::FeasibleOnSamples);

        let report_m = matricial_solvable(&p, &quick_plan()).unwrap();
        assert_eq!(report_m.verdict, Verdict::FeasibleOnSamples);
        assert!(report_m.worst_value <= 1.0 + 1e-9);
    }

    #[test]
    fn blaschke_square_targets_are_feasible() {
        let cfg = example_config();
        let b = b_lambda(&cfg);
        let values: Vec<C64> =
            cfg.nodes().iter().map(|&z| b.eval(z) * b.eval(z) * cr(0.5)).collect();
        let p = InterpolationProblem::new(cfg, Targets::Scalar(values)).unwrap();
        let report = scalar_solvable(&p, &quick_plan()).unwrap();
        assert_eq!(report.verdict, Verdict::FeasibleOnSamples);
        let report_m = matricial_solvable(&p, &quick_plan()).unwrap();
        assert_eq!(report_m.verdict, Verdict::FeasibleOnSamples);
    }

    #[test]
    fn oscillating_targets_are_infeasible() {
        let p = problem(vec![cr(0.1), cr(0.5), cr(-0.5), cr(0.1)]);
        let report = scalar_solvable(&p, &quick_plan()).unwrap();
        assert_eq!(report.verdict, Verdict::Infeasible);
        assert!(report.worst_value < 0.0);

        let report_m = matricial_solvable(&p, &quick_plan()).unwrap();
        assert_eq!(report_m.verdict, Verdict::Infeasible);
        assert!(report_m.worst_value > 1.0);
    }

    #[test]
    fn pick_matrix_spot_value_at_reference_param() {
        let w = vec![cr(0.2), cr(0.1), cr(0.1), cr(0.2)];
        let p = problem(w.clone());
        let h = scalar_pick_matrix(&p, &ScalarParam::from_theta(0.0)).unwrap();
        let g = gram_matrix(p.config(), &ScalarParam::from_theta(0.0)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = (cr(1.0) - w[i] * w[j].conj()) * g.entry(i, j);
                assert!((h.entry(i, j) - expect).norm() < 1e-13);
            }
        }
        assert!((h.entry(0, 0) - cr((1.0 - 0.04) * 5.0)).norm() < 1e-12);
    }

    #[test]
    fn psi_at_level_one_equals_gram() {
        let p = problem(vec![cr(0.1); 4]);
        let theta_param = ScalarParam::from_theta(0.4);
        let mp = MatrixParam::from_scalar(&theta_param);
        let (psi, phi) = trace_condition_operator(&p, &mp).unwrap();
        let g = gram_matrix(p.config(), &theta_param).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert!((psi.entry(i, j) - g.entry(i, j)).norm() < 1e-13);
            }
        }
        for i in 0..4 {
            assert!((phi[(i, i)] - cr(0.1)).norm() < 1e-15);
        }
    }

    #[test]
    fn norm_form_matches_eigenvalue_form_at_level_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let w: Vec<C64> = (0..4).map(|_| cr(rng.random_range(-0.9..0.9))).collect();
            let p = problem(w);
            let theta = rng.random_range(0.0..std::f64::consts::PI);
            let sp = ScalarParam::from_theta(theta);
            let mp = MatrixParam::from_scalar(&sp);

            let h = scalar_pick_matrix(&p, &sp).unwrap();
            let eig = herm_eig(&h).unwrap();
            let min_eig = eig.eigenvalues[0];

            // psi - phi psi phi* has the same spectrum as the pick matrix.
            let (psi, phi) = trace_condition_operator(&p, &mp).unwrap();
            let diff = psi.matrix() - &phi * psi.matrix() * phi.adjoint();
            let diff_h = HermitianMatrix::new(&diff).unwrap();
            let min_diff = herm_eig(&diff_h).unwrap().eigenvalues[0];
            assert!(
                (min_eig - min_diff).abs() < 1e-9 * h.trace_scale(),
                "{min_eig} vs {min_diff}"
            );

            // And the norm form agrees with positivity away from the margin.
            let norm = matricial_norm(&p, &mp).unwrap();
            if norm < 1.0 - 1e-6 {
                assert!(min_eig > -1e-9 * h.trace_scale());
            }
            if norm > 1.0 + 1e-6 {
                assert!(min_eig < 1e-9 * h.trace_scale());
            }
        }
    }

    #[test]
    fn quotient_norm_matches_embedding_route() {
        let cfg = example_config();
        let b = b_lambda(&cfg);
        let values: Vec<C64> =
            cfg.nodes().iter().map(|&z| b.eval(z) * b.eval(z) * cr(0.5)).collect();
        let p = InterpolationProblem::new(cfg.clone(), Targets::Scalar(values.clone())).unwrap();
        let plan = SamplingPlan {
            matrix_levels: vec![1, 2],
            samples_per_level: 8,
            seed: 5,
            ..SamplingPlan::default()
        };
        let q = quotient_norm(&p, &plan).unwrap();
        let blocks = p.block_values();
        let e = embedding_norm(&cfg, &blocks, &plan).unwrap();
        assert!((q - e).abs() < 1e-8, "quotient {q} vs embedding {e}");
    }

    #[test]
    fn reports_are_deterministic() {
        let p = problem(vec![cr(0.2), cr(-0.1), cr(0.15), cr(0.0)]);
        let plan = quick_plan();
        let a = serde_json::to_string(&scalar_solvable(&p, &plan).unwrap()).unwrap();
        let b = serde_json::to_string(&scalar_solvable(&p, &plan).unwrap()).unwrap();
        assert_eq!(a, b);
        let c = serde_json::to_string(&quotient_norm_report(&p, &plan).unwrap()).unwrap();
        let d = serde_json::to_string(&quotient_norm_report(&p, &plan).unwrap()).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn serde_shapes() {
        let plan: SamplingPlan = serde_json::from_str("{}").unwrap();
        assert_eq!(plan.scalar_samples, 4096);
        assert_eq!(plan.matrix_levels, vec![1, 2, 3]);
        assert_eq!(plan.samples_per_level, 64);
        assert_eq!(plan.refine_iters, 3);
        assert!(!plan.real_only);

        let p = problem(vec![cr(0.1), cr(0.2), cr(0.3), cr(0.4)]);
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("\"kind\":\"scalar\""));
        let back: InterpolationProblem = serde_json::from_str(&json).unwrap();
        assert_eq!(back.scalar_values().unwrap()[2], cr(0.3));

        assert_eq!(serde_json::to_string(&Verdict::Infeasible).unwrap(), "\"infeasible\"");
        assert_eq!(
            serde_json::to_string(&Verdict::FeasibleOnSamples).unwrap(),
            "\"feasible_on_samples\""
        );
    }

    #[test]
    fn problem_validation() {
        let cfg = example_config();
        assert!(InterpolationProblem::new(cfg.clone(), Targets::Scalar(vec![cr(0.1)])).is_err());
        let ragged = Targets::Blocks(vec![
            CMatrix::identity(2, 2),
            CMatrix::identity(1, 1),
            CMatrix::identity(2, 2),
            CMatrix::identity(2, 2),
        ]);
        assert!(InterpolationProblem::new(cfg.clone(), ragged).is_err());
        let good = Targets::Blocks(vec![CMatrix::identity(2, 2) * cr(0.2); 4]);
        let p = InterpolationProblem::new(cfg, good).unwrap();
        assert_eq!(p.target_dim(), 2);
        assert!(p.scalar_values().is_none());
        assert_eq!(p.block_values().len(), 4);
    }

    #[test]
    fn block_targets_feasibility() {
        let cfg = example_config();
        let targets = Targets::Blocks(vec![CMatrix::identity(2, 2) * cr(0.25); 4]);
        let p = InterpolationProblem::new(cfg, targets).unwrap();
        let plan = SamplingPlan {
            matrix_levels: vec![1, 2],
            samples_per_level: 6,
            ..SamplingPlan::default()
        };
        let report = matricial_solvable(&p, &plan).unwrap();
        assert_eq!(report.verdict, Verdict::FeasibleOnSamples);
    }

    #[test]
    fn scalar_solvable_rejects_block_targets() {
        let cfg = example_config();
        let targets = Targets::Blocks(vec![CMatrix::identity(2, 2) * cr(0.2); 4]);
        let p = InterpolationProblem::new(cfg, targets).unwrap();
        assert!(scalar_solvable(&p, &quick_plan()).is_err());
    }
}

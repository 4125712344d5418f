//! Verifier for distinguished real quadruples: four real nodes whose kernel
//! family supports an infinite family of inequivalent irreducible models.
//! Checks five conditions — a Blaschke pairing, solvability for the auxiliary
//! points omega and zeta, a no-zero-row condition, separation of the pairwise
//! kernel invariants, and invertibility of column-substituted kernel matrices
//! — over a sampled parameter family, and cross-checks the built-in reference
//! quadruple in exact arithmetic over the field generated by sqrt(2).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{bareiss_det, verify_condition4_identities, IdentityReport, QSqrt2};
use crate::kernel::{
    cross_kernel_matrix, node_membership_defect, scalar_kernel, FiniteBlaschke, NodeConfig,
    ScalarParam, POINT_MERGE_TOL,
};
use crate::linalg::{cr, herm_eig, CMatrix, HermitianMatrix, C64};
use crate::par::map_collect;
use crate::pick::SamplingPlan;

/// Fixed pairing permutation (0-based): 0<->3, 1<->2.
pub const TAU: [usize; 4] = [3, 2, 1, 0];

/// Fixed swap permutation (0-based): 0<->1, 2<->3.
pub const SIGMA: [usize; 4] = [1, 0, 3, 2];

/// Tolerance for the Blaschke pairing condition (1).
pub const PAIRING_TOL: f64 = 1e-12;

/// Tolerance for membership of the auxiliary Blaschke products (condition 2).
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Below this |B'(omega)|, omega is treated as a critical point and zeta
/// collapses onto it.
pub const CRITICAL_DERIV_TOL: f64 = 1e-10;

/// Relative floor for condition (3): a row counts as zero-free when every
/// entry exceeds this fraction of the largest matrix entry.
pub const NO_ZERO_ROW_TOL: f64 = 1e-10;

/// Minimum separation of the pairwise invariants for condition (4).
pub const INVARIANT_SEP_TOL: f64 = 1e-8;

/// Relative smallest-singular-value floor for condition (5); samples below it
/// are excluded as near-singular rather than failed.
pub const NEAR_SINGULAR_TOL: f64 = 1e-8;

fn b_real(lambda: f64, z: f64) -> f64 {
    z * (z - lambda) / (1.0 - lambda * z)
}

fn b_real_deriv(lambda: f64, z: f64) -> f64 {
    let den = 1.0 - lambda * z;
    (-lambda * z * z + 2.0 * z - lambda) / (den * den)
}

fn validate_inputs(lambda: f64, points: [f64; 4]) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput(format!(
            "lambda must be real in (0,1), got {lambda}"
        )));
    }
    for (i, &z) in points.iter().enumerate() {
        if !z.is_finite() || z.abs() >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "point {i} must be real in (-1,1), got {z}"
            )));
        }
        if z.abs() <= POINT_MERGE_TOL || (z - lambda).abs() <= POINT_MERGE_TOL {
            return Err(Error::InvalidInput(format!("point {i} coincides with 0 or lambda")));
        }
        for (j, &w) in points.iter().enumerate().take(i) {
            if (z - w).abs() <= POINT_MERGE_TOL {
                return Err(Error::InvalidInput(format!("points {j} and {i} coincide")));
            }
        }
    }
    Ok(())
}

fn pairing_defect(lambda: f64, points: [f64; 4]) -> f64 {
    let d1 = (b_real(lambda, points[0]) - b_real(lambda, points[TAU[0]])).abs();
    let d2 = (b_real(lambda, points[1]) - b_real(lambda, points[TAU[1]])).abs();
    d1.max(d2)
}

/// Solves the membership quadratic for the auxiliary point omega paired with
/// (z1, z2): (z1 z2 lambda) w^2 + (mu1 mu2 - z1 z2) w - mu1 mu2 lambda = 0
/// with mu_i = (lambda - z_i)/(1 - z_i lambda). Returns the real root inside
/// the open disk (the smaller in modulus if both qualify).
pub fn solve_omega(lambda: f64, z1: f64, z2: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidInput(format!("lambda must be in (0,1), got {lambda}")));
    }
    for z in [z1, z2] {
        if !z.is_finite()
            || z.abs() >= 1.0
            || z.abs() <= POINT_MERGE_TOL
            || (z - lambda).abs() <= POINT_MERGE_TOL
        {
            return Err(Error::InvalidInput(format!(
                "omega solve needs real points in (-1,1) away from 0 and lambda, got {z}"
            )));
        }
    }
    let mu1 = (lambda - z1) / (1.0 - z1 * lambda);
    let mu2 = (lambda - z2) / (1.0 - z2 * lambda);
    let a = z1 * z2 * lambda;
    let b = mu1 * mu2 - z1 * z2;
    let c = -mu1 * mu2 * lambda;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::NoAdmissibleOmega);
    }
    let sq = disc.sqrt();
    let mut roots = [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)];
    roots.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).expect("roots are finite"));
    let omega = *roots
        .iter()
        .find(|r| r.abs() < 1.0)
        .ok_or(Error::NoAdmissibleOmega)?;
    if omega.abs() <= POINT_MERGE_TOL || (omega - lambda).abs() <= POINT_MERGE_TOL {
        return Err(Error::Domain(
            "solved omega coincides with 0 or lambda; the kernel matrices degenerate".into(),
        ));
    }
    let product = FiniteBlaschke::new(vec![cr(z1), cr(z2), cr(omega)], cr(1.0))?;
    let defect = node_membership_defect(&product, cr(lambda));
    if defect > MEMBERSHIP_TOL {
        return Err(Error::IllConditioned(format!(
            "membership defect {defect:.3e} of the solved omega exceeds tolerance"
        )));
    }
    Ok(omega)
}

/// Solves for the companion point zeta paired with (z3, z4). At a critical
/// point of the base Blaschke product (|B'(omega)| below tolerance) the
/// second preimage collapses and zeta = omega; otherwise zeta = -c/omega, the
/// other root of z^2 + lambda(c - 1) z - c = 0 where c = B(omega).
pub fn solve_zeta(lambda: f64, z3: f64, z4: f64, omega: f64) -> Result<f64> {
    let zeta = if b_real_deriv(lambda, omega).abs() < CRITICAL_DERIV_TOL {
        omega
    } else {
        -b_real(lambda, omega) / omega
    };
    if zeta.abs() >= 1.0 {
        return Err(Error::Domain(format!("solved zeta {zeta} left the open disk")));
    }
    if zeta.abs() <= POINT_MERGE_TOL || (zeta - lambda).abs() <= POINT_MERGE_TOL {
        return Err(Error::Domain(
            "solved zeta coincides with 0 or lambda; the kernel matrices degenerate".into(),
        ));
    }
    let product = FiniteBlaschke::new(vec![cr(z3), cr(z4), cr(zeta)], cr(1.0))?;
    let defect = node_membership_defect(&product, cr(lambda));
    if defect > MEMBERSHIP_TOL {
        return Err(Error::IllConditioned(format!(
            "membership defect {defect:.3e} of the solved zeta exceeds tolerance"
        )));
    }
    Ok(zeta)
}

/// A validated quadruple: real base point, four real nodes satisfying the
/// pairing condition, and the solved auxiliary points.
#[derive(Clone, Debug)]
pub struct GoodPointsConfig {
    lambda: f64,
    points: [f64; 4],
    omega: f64,
    zeta: f64,
}

impl GoodPointsConfig {
    pub fn new(lambda: f64, points: [f64; 4]) -> Result<Self> {
        validate_inputs(lambda, points)?;
        let defect = pairing_defect(lambda, points);
        if defect > PAIRING_TOL {
            return Err(Error::Domain(format!(
                "Blaschke pairing defect {defect:.3e} exceeds tolerance; condition (1) fails"
            )));
        }
        let omega = solve_omega(lambda, points[0], points[1])?;
        let zeta = solve_zeta(lambda, points[2], points[3], omega)?;
        Ok(Self { lambda, points, omega, zeta })
    }

    /// The built-in reference quadruple at lambda = 1/sqrt(2).
    pub fn example() -> Self {
        let s = std::f64::consts::SQRT_2;
        Self::new(1.0 / s, [4.0 / (3.0 * s), 1.0 / (2.0 * s), s / 3.0, -1.0 / s])
            .expect("reference quadruple is valid")
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn points(&self) -> [f64; 4] {
        self.points
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    /// The same data as a kernel-module configuration.
    pub fn node_config(&self) -> NodeConfig {
        NodeConfig::new(cr(self.lambda), self.points.iter().map(|&x| cr(x)).collect())
            .expect("validated points form a node configuration")
    }
}

/// Full 4x4 kernel matrix with one column moved to an auxiliary point:
/// column sigma(ell) evaluates at zeta for ell in {1,2} and at omega for ell
/// in {3,4}. ell is 1-based.
pub fn c_ell_matrix(cfg: &GoodPointsConfig, p: &ScalarParam, ell: usize) -> Result<CMatrix> {
    substituted_matrix(cfg, p, ell, false)
}

/// The 3x3 minor test matrix for ell: rows and columns without index ell of
/// the substituted matrix built with the swapped auxiliary-point rule (omega
/// for ell in {1,2}, zeta for ell in {3,4}). The two rules coincide when
/// omega = zeta.
pub fn c_ell_minor_matrix(cfg: &GoodPointsConfig, p: &ScalarParam, ell: usize) -> Result<CMatrix> {
    let full = substituted_matrix(cfg, p, ell, true)?;
    Ok(full.remove_row(ell - 1).remove_column(ell - 1))
}

fn substituted_matrix(
    cfg: &GoodPointsConfig,
    p: &ScalarParam,
    ell: usize,
    swap_rule: bool,
) -> Result<CMatrix> {
    if !(1..=4).contains(&ell) {
        return Err(Error::InvalidInput(format!("ell must be in 1..=4, got {ell}")));
    }
    let low = ell <= 2;
    let aux = if low != swap_rule { cfg.zeta } else { cfg.omega };
    let node_cfg = cfg.node_config();
    let zs: Vec<C64> = cfg.points.iter().map(|&x| cr(x)).collect();
    let mut ws = zs.clone();
    ws[SIGMA[ell - 1]] = cr(aux);
    cross_kernel_matrix(&node_cfg, p, &zs, &ws)
}

fn smallest_singular_ratio(a: &CMatrix) -> Result<f64> {
    let h = HermitianMatrix::new(&(a.adjoint() * a))?;
    let eig = herm_eig(&h)?;
    let max = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    if max <= 0.0 {
        return Ok(0.0);
    }
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    Ok((min / max).sqrt())
}

/// Outcome of one condition with its numeric evidence.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionOutcome {
    pub pass: bool,
    pub margin: f64,
    pub detail: String,
}

/// Per-sample bookkeeping for the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SampleSummary {
    pub total: usize,
    pub passing: usize,
    pub pass_fraction: f64,
    pub excluded: Vec<usize>,
}

/// Full verification output; the exact certificate is present only for the
/// built-in reference quadruple.
#[derive(Clone, Debug, Serialize)]
pub struct GoodPointsReport {
    pub lambda: f64,
    pub points: [f64; 4],
    pub omega: Option<f64>,
    pub zeta: Option<f64>,
    pub condition1: ConditionOutcome,
    pub condition2: ConditionOutcome,
    pub condition3: ConditionOutcome,
    pub condition4: ConditionOutcome,
    pub condition5: ConditionOutcome,
    pub samples: SampleSummary,
    pub certificate: Option<ExactCertificate>,
    pub overall_pass: bool,
}

fn skipped(reason: &str) -> ConditionOutcome {
    ConditionOutcome { pass: false, margin: f64::NAN, detail: format!("skipped: {reason}") }
}

fn empty_samples() -> SampleSummary {
    SampleSummary { total: 0, passing: 0, pass_fraction: 0.0, excluded: Vec::new() }
}

struct SweepSample {
    cond3_margin: f64,
    inv01: f64,
    inv12: f64,
    sv_ratio: f64,
}

fn sweep_sample(cfg: &GoodPointsConfig, node_cfg: &NodeConfig, theta: f64) -> Result<SweepSample> {
    let p = ScalarParam::from_theta(theta);
    let nodes = node_cfg.nodes();
    let n = nodes.len();

    let mut k = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            k[(i, j)] = scalar_kernel(node_cfg, &p, nodes[i], nodes[j])?;
        }
    }
    let scale = k.iter().map(|z| z.norm()).fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    let cond3_margin = (0..n)
        .map(|i| (0..n).map(|j| k[(i, j)].norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0_f64, f64::max)
        / scale;

    let kv = |i: usize, j: usize| k[(i, j)];
    let inv = |i: usize, j: usize| {
        kv(j, i).norm_sqr() / (kv(i, i).re * kv(j, j).re)
    };
    let inv01 = inv(0, 1);
    let inv12 = inv(1, 2);

    let mut sv_ratio = f64::INFINITY;
    for ell in 1..=4 {
        let full = c_ell_matrix(cfg, &p, ell)?;
        sv_ratio = sv_ratio.min(smallest_singular_ratio(&full)?);
        let minor = c_ell_minor_matrix(cfg, &p, ell)?;
        sv_ratio = sv_ratio.min(smallest_singular_ratio(&minor)?);
    }

    Ok(SweepSample { cond3_margin, inv01, inv12, sv_ratio })
}

/// Sweeps the open upper half-circle with a midpoint theta grid and evaluates
/// conditions (3), (4), (5) at every sample; (1) and (2) are certified once
/// from the configuration. Near-singular samples are excluded and reported,
/// not silently dropped.
pub fn check_conditions(cfg: &GoodPointsConfig, plan: &SamplingPlan) -> Result<GoodPointsReport> {
    let node_cfg = cfg.node_config();
    let total = plan.scalar_samples.max(8);
    let pi = std::f64::consts::PI;
    let thetas: Vec<f64> = (0..total).map(|j| pi * (j as f64 + 0.5) / total as f64).collect();
    let samples: Vec<Result<SweepSample>> =
        map_collect(thetas, |theta| sweep_sample(cfg, &node_cfg, theta));
    let samples: Vec<SweepSample> = samples.into_iter().collect::<Result<_>>()?;

    let cond1_defect = pairing_defect(cfg.lambda, cfg.points);
    let condition1 = ConditionOutcome {
        pass: cond1_defect <= PAIRING_TOL,
        margin: cond1_defect,
        detail: format!("max Blaschke pairing defect {cond1_defect:.3e}"),
    };

    let omega_defect = node_membership_defect(
        &FiniteBlaschke::new(vec![cr(cfg.points[0]), cr(cfg.points[1]), cr(cfg.omega)], cr(1.0))?,
        cr(cfg.lambda),
    );
    let zeta_defect = node_membership_defect(
        &FiniteBlaschke::new(vec![cr(cfg.points[2]), cr(cfg.points[3]), cr(cfg.zeta)], cr(1.0))?,
        cr(cfg.lambda),
    );
    let cond2_defect = omega_defect.max(zeta_defect);
    let condition2 = ConditionOutcome {
        pass: cond2_defect <= MEMBERSHIP_TOL,
        margin: cond2_defect,
        detail: format!(
            "omega {:.12} (defect {omega_defect:.3e}), zeta {:.12} (defect {zeta_defect:.3e})",
            cfg.omega, cfg.zeta
        ),
    };

    let cond3_worst = samples.iter().map(|s| s.cond3_margin).fold(f64::INFINITY, f64::min);
    let cond3_fails = samples.iter().filter(|s| s.cond3_margin <= NO_ZERO_ROW_TOL).count();
    let condition3 = ConditionOutcome {
        pass: cond3_fails == 0,
        margin: cond3_worst,
        detail: format!("worst zero-free-row margin {cond3_worst:.3e}, {cond3_fails} failing samples"),
    };

    let mut cond4_min_sep = f64::INFINITY;
    let mut cond4_failing: Vec<(usize, usize)> = Vec::new();
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            let sep = (samples[i].inv01 - samples[j].inv01)
                .abs()
                .max((samples[i].inv12 - samples[j].inv12).abs());
            cond4_min_sep = cond4_min_sep.min(sep);
            if sep <= INVARIANT_SEP_TOL {
                cond4_failing.push((i, j));
            }
        }
    }
    let condition4 = ConditionOutcome {
        pass: cond4_failing.is_empty(),
        margin: cond4_min_sep,
        detail: format!(
            "min pairwise invariant separation {cond4_min_sep:.3e}, {} colliding pairs",
            cond4_failing.len()
        ),
    };

    let excluded: Vec<usize> = samples
        .iter()
        .enumerate()
        .filter(|(_, s)| s.sv_ratio <= NEAR_SINGULAR_TOL)
        .map(|(i, _)| i)
        .collect();
    let excluded_fraction = excluded.len() as f64 / total as f64;
    let cond5_worst =
        samples.iter().map(|s| s.sv_ratio).fold(f64::INFINITY, f64::min);
    let condition5 = ConditionOutcome {
        pass: excluded_fraction <= 0.01,
        margin: cond5_worst,
        detail: format!(
            "worst singular-value ratio {cond5_worst:.3e}, {} samples excluded as near-singular",
            excluded.len()
        ),
    };

    let mut in_failing_pair = vec![false; total];
    for &(i, j) in &cond4_failing {
        in_failing_pair[i] = true;
        in_failing_pair[j] = true;
    }
    let passing = samples
        .iter()
        .enumerate()
        .filter(|(i, s)| {
            s.cond3_margin > NO_ZERO_ROW_TOL
                && s.sv_ratio > NEAR_SINGULAR_TOL
                && !in_failing_pair[*i]
        })
        .count();

    let overall_pass = condition1.pass
        && condition2.pass
        && condition3.pass
        && condition4.pass
        && condition5.pass;

    Ok(GoodPointsReport {
        lambda: cfg.lambda,
        points: cfg.points,
        omega: Some(cfg.omega),
        zeta: Some(cfg.zeta),
        condition1,
        condition2,
        condition3,
        condition4,
        condition5,
        samples: SampleSummary {
            total,
            passing,
            pass_fraction: passing as f64 / total as f64,
            excluded,
        },
        certificate: None,
        overall_pass,
    })
}

/// End-to-end entry point: validates the inputs, certifies conditions (1) and
/// (2), and runs the sampled sweep. Condition failures come back as report
/// content (fast reject); only malformed inputs are errors.
pub fn evaluate(lambda: f64, points: [f64; 4], plan: &SamplingPlan) -> Result<GoodPointsReport> {
    validate_inputs(lambda, points)?;
    let defect = pairing_defect(lambda, points);
    if defect > PAIRING_TOL {
        return Ok(GoodPointsReport {
            lambda,
            points,
            omega: None,
            zeta: None,
            condition1: ConditionOutcome {
                pass: false,
                margin: defect,
                detail: format!("Blaschke pairing defect {defect:.3e} exceeds {PAIRING_TOL:.0e}"),
            },
            condition2: skipped("condition (1) failed"),
            condition3: skipped("condition (1) failed"),
            condition4: skipped("condition (1) failed"),
            condition5: skipped("condition (1) failed"),
            samples: empty_samples(),
            certificate: None,
            overall_pass: false,
        });
    }
    let solved = solve_omega(lambda, points[0], points[1])
        .and_then(|omega| solve_zeta(lambda, points[2], points[3], omega).map(|z| (omega, z)));
    let (omega, zeta) = match solved {
        Ok(pair) => pair,
        Err(e) => {
            return Ok(GoodPointsReport {
                lambda,
                points,
                omega: None,
                zeta: None,
                condition1: ConditionOutcome {
                    pass: true,
                    margin: defect,
                    detail: format!("max Blaschke pairing defect {defect:.3e}"),
                },
                condition2: ConditionOutcome {
                    pass: false,
                    margin: f64::NAN,
                    detail: format!("auxiliary point solve failed: {e}"),
                },
                condition3: skipped("condition (2) failed"),
                condition4: skipped("condition (2) failed"),
                condition5: skipped("condition (2) failed"),
                samples: empty_samples(),
                certificate: None,
                overall_pass: false,
            });
        }
    };
    let cfg = GoodPointsConfig { lambda, points, omega, zeta };
    check_conditions(&cfg, plan)
}

// ---------------------------------------------------------------------------
// Exact certificate for the built-in reference quadruple.
// ---------------------------------------------------------------------------

/// One row of the exact node table: Blaschke and distinguished-element values.
#[derive(Clone, Debug, Serialize)]
pub struct TableOneRow {
    pub index: usize,
    pub b: String,
    pub f: String,
    pub matches_reference: bool,
}

/// One canonical kernel triple (a, b, c): the kernel at parameter direction x
/// equals (a x^2 + b x + c-free combination) assembled as
/// (f_i f_j x^2 + (f_i + f_j) x + 1)/(1 + x^2) + szego term; stored here as
/// the three rational coefficients of the closed form.
#[derive(Clone, Debug, Serialize)]
pub struct TableTwoRow {
    pub i: usize,
    pub j: usize,
    pub a: String,
    pub b: String,
    pub c: String,
    pub matches_reference: bool,
}

/// Exact determinant evidence for one substituted matrix and its minor.
#[derive(Clone, Debug, Serialize)]
pub struct DetCertificate {
    pub ell: usize,
    pub determinant: String,
    pub nonzero: bool,
    pub minor_determinant: String,
    pub minor_nonzero: bool,
}

/// One entry where the stored literature transcription differs from the
/// formula-derived value.
#[derive(Clone, Debug, Serialize)]
pub struct EntryMismatch {
    pub row: usize,
    pub col: usize,
    pub printed: String,
    pub computed: String,
}

/// Entrywise comparison of a computed substituted matrix against its stored
/// transcription (1-based entries).
#[derive(Clone, Debug, Serialize)]
pub struct PrintedComparison {
    pub ell: usize,
    pub matching_entries: usize,
    pub total_entries: usize,
    pub mismatches: Vec<EntryMismatch>,
}

/// Exact-arithmetic certificate for the reference quadruple.
#[derive(Clone, Debug, Serialize)]
pub struct ExactCertificate {
    pub table1: Vec<TableOneRow>,
    pub table2: Vec<TableTwoRow>,
    pub identities: IdentityReport,
    pub determinants: Vec<DetCertificate>,
    pub printed_comparisons: Vec<PrintedComparison>,
    pub omega_quadratic_ok: bool,
    pub omega_critical_ok: bool,
    pub all_match_table1: bool,
    pub all_match_table2: bool,
    pub all_determinants_nonzero: bool,
}

fn qr(n: i64, d: i64) -> QSqrt2 {
    QSqrt2::from_parts(n, d, 0, 1)
}

fn qs(an: i64, ad: i64, bn: i64, bd: i64) -> QSqrt2 {
    QSqrt2::from_parts(an, ad, bn, bd)
}

struct ExactExample {
    lambda: QSqrt2,
    points: [QSqrt2; 4],
    omega: QSqrt2,
}

impl ExactExample {
    fn new() -> Self {
        Self {
            lambda: qs(0, 1, 1, 2),
            points: [qs(0, 1, 2, 3), qs(0, 1, 1, 4), qs(0, 1, 1, 3), qs(0, 1, -1, 2)],
            omega: qs(-1, 1, 1, 1),
        }
    }

    fn b(&self, z: &QSqrt2) -> QSqrt2 {
        let num = z * &(z - &self.lambda);
        let den = &QSqrt2::one() - &(&self.lambda * z);
        &num * &den.inv().expect("denominator is nonzero on the reference data")
    }

    fn b_deriv_numerator(&self, z: &QSqrt2) -> QSqrt2 {
        // numerator of B': -lambda z^2 + 2 z - lambda
        let two = QSqrt2::from_int(2);
        &(&(&-(&self.lambda) * &(z * z)) + &(&two * z)) - &self.lambda
    }

    /// Distinguished element at this base point: f(z) = 1/(1 - z lambda) - 1,
    /// because sqrt(1 - lambda^2)/lambda = 1 here.
    fn f(&self, z: &QSqrt2) -> QSqrt2 {
        let den = &QSqrt2::one() - &(z * &self.lambda);
        &den.inv().expect("denominator is nonzero on the reference data") - &QSqrt2::one()
    }

    /// Kernel at the parameter (1, 0): 1 + B(zi) B(zj) / (1 - zi zj).
    fn k10(&self, zi: &QSqrt2, zj: &QSqrt2) -> QSqrt2 {
        let den = &QSqrt2::one() - &(zi * zj);
        &QSqrt2::one()
            + &(&(&self.b(zi) * &self.b(zj)) * &den.inv().expect("nodes are distinct from 1"))
    }
}

fn expected_table1() -> ([QSqrt2; 4], [QSqrt2; 4]) {
    (
        [qr(2, 3), qr(-1, 6), qr(-1, 6), qr(2, 3)],
        [qr(2, 1), qr(1, 3), qr(1, 2), qr(-1, 3)],
    )
}

/// Frozen canonical triples (a, b, c) = (1 - f_i f_j, f_i + f_j,
/// f_i f_j + b_i b_j/(1 - z_i z_j)) for the ten node pairs i <= j.
fn expected_table2() -> Vec<(usize, usize, QSqrt2, QSqrt2, QSqrt2)> {
    vec![
        (1, 1, qr(-3, 1), qr(4, 1), qr(8, 1)),
        (1, 2, qr(1, 3), qr(7, 3), qr(1, 2)),
        (1, 3, qr(0, 1), qr(5, 2), qr(4, 5)),
        (1, 4, qr(5, 3), qr(5, 3), qr(-2, 5)),
        (2, 2, qr(8, 9), qr(2, 3), qr(1, 7)),
        (2, 3, qr(5, 6), qr(5, 6), qr(1, 5)),
        (2, 4, qr(10, 9), qr(0, 1), qr(-1, 5)),
        (3, 3, qr(3, 4), qr(1, 1), qr(2, 7)),
        (3, 4, qr(7, 6), qr(1, 6), qr(-1, 4)),
        (4, 4, qr(8, 9), qr(-2, 3), qr(1, 1)),
    ]
}

/// Base kernel grid [k^{1,0}(z_i, z_j)] of the reference quadruple.
fn reference_kernel_grid(ex: &ExactExample) -> Vec<Vec<QSqrt2>> {
    (0..4)
        .map(|i| (0..4).map(|j| ex.k10(&ex.points[i], &ex.points[j])).collect())
        .collect()
}

/// Substituted column [k^{1,0}(z_i, omega)].
fn reference_substituted_column(ex: &ExactExample) -> Vec<QSqrt2> {
    (0..4).map(|i| ex.k10(&ex.points[i], &ex.omega)).collect()
}

/// The stored transcription of the four substituted matrices, including the
/// two known print discrepancies: entry (3,2)/(3,1) reads 5 - (5/2) sqrt(2)
/// where the formula gives -5/2 + (5/2) sqrt(2), and entry (4,4) reads 7/6
/// where the diagonal kernel value is 17/9.
fn printed_matrices() -> [Vec<Vec<QSqrt2>>; 4] {
    let k_printed = vec![
        vec![qr(5, 1), qr(5, 6), qr(4, 5), qr(19, 15)],
        vec![qr(5, 6), qr(65, 63), qr(31, 30), qr(41, 45)],
        vec![qr(4, 5), qr(31, 30), qr(29, 28), qr(11, 12)],
        vec![qr(19, 15), qr(41, 45), qr(11, 12), qr(7, 6)],
    ];
    let s_typo = [qs(17, 7, -8, 7), qs(13, 3, -7, 3), qs(5, 1, -5, 2), qs(5, 21, 10, 21)];
    let s_correct = [qs(17, 7, -8, 7), qs(13, 3, -7, 3), qs(-5, 2, 5, 2), qs(5, 21, 10, 21)];
    let build = |col: usize, s: &[QSqrt2; 4]| -> Vec<Vec<QSqrt2>> {
        let mut m = k_printed.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[col] = s[i].clone();
        }
        m
    };
    [
        build(SIGMA[0], &s_typo),
        build(SIGMA[1], &s_typo),
        build(SIGMA[2], &s_correct),
        build(SIGMA[3], &s_correct),
    ]
}

/// Runs the float sweep on the reference quadruple and attaches the exact
/// certificate: node tables, identity checks, exact determinants of the four
/// substituted matrices and their minors, and the comparison against the
/// stored transcription.
pub fn verify_example(plan: &SamplingPlan) -> Result<GoodPointsReport> {
    let cfg = GoodPointsConfig::example();
    let mut report = check_conditions(&cfg, plan)?;

    let ex = ExactExample::new();
    let (ref_b, ref_f) = expected_table1();
    let mut table1 = Vec::new();
    let mut all_match_table1 = true;
    for i in 0..4 {
        let b = ex.b(&ex.points[i]);
        let f = ex.f(&ex.points[i]);
        let matches = b == ref_b[i] && f == ref_f[i];
        all_match_table1 &= matches;
        table1.push(TableOneRow {
            index: i + 1,
            b: b.to_string(),
            f: f.to_string(),
            matches_reference: matches,
        });
    }

    let mut table2 = Vec::new();
    let mut all_match_table2 = true;
    for (i, j, ea, eb, ec) in expected_table2() {
        let zi = &ex.points[i - 1];
        let zj = &ex.points[j - 1];
        let fi = ex.f(zi);
        let fj = ex.f(zj);
        let a = &QSqrt2::one() - &(&fi * &fj);
        let b = &fi + &fj;
        let den = (&QSqrt2::one() - &(zi * zj)).inv().expect("distinct nodes");
        let c = &(&fi * &fj) + &(&(&ex.b(zi) * &ex.b(zj)) * &den);
        let matches = a == ea && b == eb && c == ec;
        all_match_table2 &= matches;
        table2.push(TableTwoRow {
            i,
            j,
            a: a.to_string(),
            b: b.to_string(),
            c: c.to_string(),
            matches_reference: matches,
        });
    }

    let identities = verify_condition4_identities();

    let grid = reference_kernel_grid(&ex);
    let sub = reference_substituted_column(&ex);
    let computed: Vec<Vec<Vec<QSqrt2>>> = (0..4)
        .map(|l| {
            let mut m = grid.clone();
            for (i, row) in m.iter_mut().enumerate() {
                row[SIGMA[l]] = sub[i].clone();
            }
            m
        })
        .collect();

    let mut determinants = Vec::new();
    let mut all_nonzero = true;
    for (l, m) in computed.iter().enumerate() {
        let det = bareiss_det(m)?;
        let minor: Vec<Vec<QSqrt2>> = (0..4)
            .filter(|&i| i != l)
            .map(|i| (0..4).filter(|&j| j != l).map(|j| m[i][j].clone()).collect())
            .collect();
        let minor_det = bareiss_det(&minor)?;
        let nonzero = !det.is_zero();
        let minor_nonzero = !minor_det.is_zero();
        all_nonzero &= nonzero && minor_nonzero;
        determinants.push(DetCertificate {
            ell: l + 1,
            determinant: det.to_string(),
            nonzero,
            minor_determinant: minor_det.to_string(),
            minor_nonzero,
        });
    }

    let printed = printed_matrices();
    let mut printed_comparisons = Vec::new();
    for l in 0..4 {
        let mut mismatches = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if computed[l][i][j] != printed[l][i][j] {
                    mismatches.push(EntryMismatch {
                        row: i + 1,
                        col: j + 1,
                        printed: printed[l][i][j].to_string(),
                        computed: computed[l][i][j].to_string(),
                    });
                }
            }
        }
        printed_comparisons.push(PrintedComparison {
            ell: l + 1,
            matching_entries: 16 - mismatches.len(),
            total_entries: 16,
            mismatches,
        });
    }

    // Exact checks on omega: it solves the membership quadratic
    // w^2 - 2 sqrt(2) w + 1 = 0 and is a critical point of the base product.
    let omega_quadratic_ok = {
        let w = &ex.omega;
        let quad = &(&(w * w) - &(&qs(0, 1, 2, 1) * w)) + &QSqrt2::one();
        quad.is_zero()
    };
    let omega_critical_ok = ex.b_deriv_numerator(&ex.omega).is_zero();

    let certificate = ExactCertificate {
        table1,
        table2,
        identities,
        determinants,
        printed_comparisons,
        omega_quadratic_ok,
        omega_critical_ok,
        all_match_table1,
        all_match_table2,
        all_determinants_nonzero: all_nonzero,
    };
    report.overall_pass = report.overall_pass
        && certificate.all_match_table1
        && certificate.all_match_table2
        && certificate.identities.all_pass
        && certificate.all_determinants_nonzero
        && certificate.omega_quadratic_ok
        && certificate.omega_critical_ok;
    report.certificate = Some(certificate);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det_rank_one_update;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn small_plan() -> SamplingPlan {
        SamplingPlan { scalar_samples: 128, ..SamplingPlan::default() }
    }

    #[test]
    fn example_config_solves_reference_values() {
        let cfg = GoodPointsConfig::example();
        assert!((cfg.omega() - (SQRT2 - 1.0)).abs() < 1e-14);
        assert!((cfg.zeta() - (SQRT2 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn omega_quadratic_roots() {
        let s = SQRT2;
        let omega = solve_omega(1.0 / s, 4.0 / (3.0 * s), 1.0 / (2.0 * s)).unwrap();
        assert!((omega - (s - 1.0)).abs() < 1e-12);
        // The rejected companion root sits outside the disk.
        assert!((omega * (s + 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solve_chain_on_constructed_configs() {
        // Generic valid quadruples: z4 and z3 are the second Blaschke
        // preimages of z1 and z2, so the pairing condition holds exactly.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut tested = 0;
        while tested < 25 {
            let lambda = rng.random_range(0.25..0.85);
            let z1: f64 = rng.random_range(-0.9..0.9);
            let z2: f64 = rng.random_range(-0.9..0.9);
            if z1.abs() < 0.05 || z2.abs() < 0.05 {
                continue;
            }
            let z4 = -b_real(lambda, z1) / z1;
            let z3 = -b_real(lambda, z2) / z2;
            let pts = [z1, z2, z3, z4];
            if validate_inputs(lambda, pts).is_err() {
                continue;
            }
            let cfg = match GoodPointsConfig::new(lambda, pts) {
                Ok(c) => c,
                // Occasional draws land on degenerate omega; skip them.
                Err(_) => continue,
            };
            assert!(cfg.omega().abs() < 1.0 && cfg.zeta().abs() < 1.0);
            let b_omega = b_real(lambda, cfg.omega());
            let b_zeta = b_real(lambda, cfg.zeta());
            assert!(
                (b_omega - b_zeta).abs() < 1e-10,
                "zeta must be a preimage of the same value: {b_omega} vs {b_zeta}"
            );
            tested += 1;
        }
    }

    #[test]
    fn zeta_generic_branch_differs_from_omega() {
        // lambda = 0.5, omega = 0.2 is not a critical point, so zeta is the
        // second preimage -B(omega)/omega.
        let lambda = 0.5;
        let omega = 0.2_f64;
        assert!(b_real_deriv(lambda, omega).abs() > 1e-3);
        let c = b_real(lambda, omega);
        let expected = -c / omega;
        // Pick z3, z4 as the preimage pair of some base values compatible
        // with this zeta; here we only check the branch arithmetic.
        assert!((b_real(lambda, expected) - c).abs() < 1e-12);
        assert!(expected != omega);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(GoodPointsConfig::new(0.0, [0.1, 0.2, 0.3, 0.4]).is_err());
        assert!(GoodPointsConfig::new(1.2, [0.1, 0.2, 0.3, 0.4]).is_err());
        let s = SQRT2;
        assert!(GoodPointsConfig::new(1.0 / s, [1.0 / s, 0.2, 0.3, 0.4]).is_err());
        assert!(GoodPointsConfig::new(1.0 / s, [0.2, 0.2, 0.3, 0.4]).is_err());
        // Generic points violate the pairing condition.
        assert!(GoodPointsConfig::new(1.0 / s, [0.3, 0.4, 0.5, 0.6]).is_err());
    }

    #[test]
    fn evaluate_fast_rejects_pairing_failure() {
        let report = evaluate(0.5, [0.3, 0.4, 0.45, 0.6], &small_plan()).unwrap();
        assert!(!report.condition1.pass);
        assert!(!report.overall_pass);
        assert_eq!(report.samples.total, 0);
        assert!(report.condition3.detail.starts_with("skipped"));
    }

    #[test]
    fn c_matrices_match_reference_entries() {
        let cfg = GoodPointsConfig::example();
        let p = ScalarParam::from_theta(0.0);
        let c1 = c_ell_matrix(&cfg, &p, 1).unwrap();
        assert!((c1[(0, 0)] - cr(5.0)).norm() < 1e-13);
        assert!((c1[(1, 0)] - cr(5.0 / 6.0)).norm() < 1e-13);
        assert!((c1[(0, 1)] - cr((17.0 - 8.0 * SQRT2) / 7.0)).norm() < 1e-14);
        assert!((c1[(3, 1)] - cr(5.0 * (2.0 * SQRT2 + 1.0) / 21.0)).norm() < 1e-14);
        assert!((c1[(2, 1)] - cr(5.0 * (SQRT2 - 1.0) / 2.0)).norm() < 1e-14);
        assert!((c1[(3, 3)] - cr(17.0 / 9.0)).norm() < 1e-13);

        // With omega = zeta the minor equals the corresponding submatrix.
        let minor = c_ell_minor_matrix(&cfg, &p, 1).unwrap();
        let direct = c1.remove_row(0).remove_column(0);
        for i in 0..3 {
            for j in 0..3 {
                assert!((minor[(i, j)] - direct[(i, j)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn c_matrix_determinant_matches_rank_one_lemma() {
        use crate::kernel::{b_lambda, f_lambda};
        use crate::linalg::CVector;
        let cfg = GoodPointsConfig::example();
        let node_cfg = cfg.node_config();
        let b = b_lambda(&node_cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let theta = rng.random_range(0.1..3.0);
            let p = ScalarParam::from_theta(theta);
            let ell = rng.random_range(1..=4);
            let m = c_ell_matrix(&cfg, &p, ell).unwrap();
            let direct = m.clone().full_piv_lu().determinant();

            let aux = if ell <= 2 { cfg.zeta() } else { cfg.omega() };
            let zs: Vec<C64> = cfg.points().iter().map(|&x| cr(x)).collect();
            let mut ws = zs.clone();
            ws[SIGMA[ell - 1]] = cr(aux);
            let pmat = CMatrix::from_fn(4, 4, |i, j| {
                b.eval(zs[i]) * b.eval(ws[j]).conj() / (cr(1.0) - zs[i] * ws[j].conj())
            });
            let u = CVector::from_fn(4, |i, _| p.alpha() + p.beta() * f_lambda(&node_cfg, zs[i]));
            let v = CVector::from_fn(4, |j, _| p.alpha() + p.beta() * f_lambda(&node_cfg, ws[j]));
            let lemma = det_rank_one_update(&pmat, &u, &v).unwrap();
            let scale = direct.norm().max(1e-6);
            assert!((lemma - direct).norm() < 1e-9 * scale, "{lemma} vs {direct}");
        }
    }

    #[test]
    fn conditions_hold_on_example() {
        let cfg = GoodPointsConfig::example();
        let report = check_conditions(&cfg, &small_plan()).unwrap();
        assert!(report.condition1.pass, "{}", report.condition1.detail);
        assert!(report.condition2.pass, "{}", report.condition2.detail);
        assert!(report.condition3.pass, "{}", report.condition3.detail);
        assert!(report.condition4.pass, "{}", report.condition4.detail);
        assert!(report.condition5.pass, "{}", report.condition5.detail);
        assert!(report.overall_pass);
        assert!(report.samples.pass_fraction >= 0.99);
        assert!(report.samples.excluded.len() <= report.samples.total / 100);
    }

    #[test]
    fn exact_certificate_on_example() {
        let report = verify_example(&small_plan()).unwrap();
        let cert = report.certificate.as_ref().unwrap();
        assert!(cert.all_match_table1);
        assert!(cert.all_match_table2);
        assert!(cert.identities.all_pass);
        assert!(cert.all_determinants_nonzero);
        assert!(cert.omega_quadratic_ok);
        assert!(cert.omega_critical_ok);
        assert!(report.overall_pass);

        let expected_mismatches: [&[(usize, usize)]; 4] =
            [&[(3, 2), (4, 4)], &[(3, 1), (4, 4)], &[], &[(4, 4)]];
        for (cmp, expect) in cert.printed_comparisons.iter().zip(expected_mismatches) {
            let got: Vec<(usize, usize)> =
                cmp.mismatches.iter().map(|m| (m.row, m.col)).collect();
            assert_eq!(got, expect, "ell = {}", cmp.ell);
            assert_eq!(cmp.matching_entries, 16 - expect.len());
        }
        // JSON-serializable end to end.
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"overall_pass\":true"));
    }

    #[test]
    fn table1_float_path() {
        let cfg = GoodPointsConfig::example();
        let expected_b = [2.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 2.0 / 3.0];
        for (i, &z) in cfg.points().iter().enumerate() {
            assert!((b_real(cfg.lambda(), z) - expected_b[i]).abs() < 1e-14);
        }
    }
}

//! The two-parameter kernel family attached to a base point lambda and a
//! finite node set in the open unit disk. Each admissible parameter pair
//! (alpha, beta) produces a positive kernel; the family as a whole drives the
//! interpolation tests in the rest of the crate.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, cr, CMatrix, HermitianMatrix, C64};

/// Distinctness tolerance for configuration points: nodes must stay this far
/// from each other, from 0, and from lambda.
pub const POINT_MERGE_TOL: f64 = 1e-14;

/// Floor on |1 - z conj(w)| below which the unconstrained kernel term is
/// considered ill-conditioned and refused.
pub const SZEGO_TOL: f64 = 1e-13;

/// Normalization tolerance for scalar parameters, |alpha|^2 + |beta|^2 = 1.
pub const SCALAR_PARAM_TOL: f64 = 1e-12;

/// Co-isometry tolerance for matrix parameters, alpha alpha* + beta beta* = I.
pub const MATRIX_PARAM_TOL: f64 = 1e-11;

pub(crate) fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub(crate) fn unpair(p: [f64; 2]) -> C64 {
    c64(p[0], p[1])
}

pub(crate) fn mat_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

pub(crate) fn rows_to_mat(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidInput("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| unpair(rows[i][j])))
}

/// Base point and interpolation nodes. The base point lambda sits in the
/// punctured open disk; nodes are distinct disk points avoiding 0 and lambda.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "NodeConfigRepr", into = "NodeConfigRepr")]
pub struct NodeConfig {
    lambda: C64,
    nodes: Vec<C64>,
}

#[derive(Serialize, Deserialize)]
struct NodeConfigRepr {
    lambda: [f64; 2],
    nodes: Vec<[f64; 2]>,
}

impl From<NodeConfig> for NodeConfigRepr {
    fn from(cfg: NodeConfig) -> Self {
        Self { lambda: pair(cfg.lambda), nodes: cfg.nodes.iter().map(|&z| pair(z)).collect() }
    }
}

impl TryFrom<NodeConfigRepr> for NodeConfig {
    type Error = Error;
    fn try_from(repr: NodeConfigRepr) -> Result<Self> {
        NodeConfig::new(unpair(repr.lambda), repr.nodes.into_iter().map(unpair).collect())
    }
}

impl NodeConfig {
    pub fn new(lambda: C64, nodes: Vec<C64>) -> Result<Self> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::InvalidInput("lambda must be finite".into()));
        }
        let lmod = lambda.norm();
        if lmod <= POINT_MERGE_TOL || lmod >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "lambda must satisfy 0 < |lambda| < 1, got |lambda| = {lmod}"
            )));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidInput("at least one node is required".into()));
        }
        for (i, z) in nodes.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidInput(format!("node {i} is not finite")));
            }
            if z.norm() >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "node {i} must lie in the open unit disk, got |z| = {}",
                    z.norm()
                )));
            }
            if z.norm() <= POINT_MERGE_TOL {
                return Err(Error::InvalidInput(format!("node {i} coincides with 0")));
            }
            if (z - lambda).norm() <= POINT_MERGE_TOL {
                return Err(Error::InvalidInput(format!("node {i} coincides with lambda")));
            }
            for (j, w) in nodes.iter().enumerate().take(i) {
                if (z - w).norm() <= POINT_MERGE_TOL {
                    return Err(Error::InvalidInput(format!("nodes {j} and {i} coincide")));
                }
            }
        }
        Ok(Self { lambda, nodes })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Scalar family parameter (alpha, beta) on the unit sphere of C^2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(try_from = "ScalarParamRepr", into = "ScalarParamRepr")]
pub struct ScalarParam {
    alpha: C64,
    beta: C64,
}

#[derive(Serialize, Deserialize)]
struct ScalarParamRepr {
    alpha: [f64; 2],
    beta: [f64; 2],
}

impl From<ScalarParam> for ScalarParamRepr {
    fn from(p: ScalarParam) -> Self {
        Self { alpha: pair(p.alpha), beta: pair(p.beta) }
    }
}

impl TryFrom<ScalarParamRepr> for ScalarParam {
    type Error = Error;
    fn try_from(repr: ScalarParamRepr) -> Result<Self> {
        ScalarParam::new(unpair(repr.alpha), unpair(repr.beta))
    }
}

impl ScalarParam {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let r = alpha.norm_sqr() + beta.norm_sqr();
        if !r.is_finite() || (r - 1.0).abs() > SCALAR_PARAM_TOL {
            return Err(Error::InvalidInput(format!(
                "|alpha|^2 + |beta|^2 must equal 1, got {r}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Rescales an arbitrary nonzero pair onto the unit sphere.
    pub fn normalized(alpha: C64, beta: C64) -> Result<Self> {
        let r = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero parameter".into()));
        }
        Self::new(alpha / r, beta / r)
    }

    /// Real parameter (cos theta, sin theta) on the unit half-circle.
    pub fn from_theta(theta: f64) -> Self {
        Self { alpha: cr(theta.cos()), beta: cr(theta.sin()) }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }
}

/// Matrix family parameter: a co-isometric pair of m x m blocks, i.e. the
/// first m rows of a 2m x 2m unitary split as [alpha beta].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "MatrixParamRepr", into = "MatrixParamRepr")]
pub struct MatrixParam {
    alpha: CMatrix,
    beta: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct MatrixParamRepr {
    m: usize,
    alpha: Vec<Vec<[f64; 2]>>,
    beta: Vec<Vec<[f64; 2]>>,
}

impl From<MatrixParam> for MatrixParamRepr {
    fn from(p: MatrixParam) -> Self {
        Self { m: p.alpha.nrows(), alpha: mat_to_rows(&p.alpha), beta: mat_to_rows(&p.beta) }
    }
}

impl TryFrom<MatrixParamRepr> for MatrixParam {
    type Error = Error;
    fn try_from(repr: MatrixParamRepr) -> Result<Self> {
        let alpha = rows_to_mat(&repr.alpha)?;
        let beta = rows_to_mat(&repr.beta)?;
        if alpha.nrows() != repr.m {
            return Err(Error::InvalidInput("declared level does not match alpha".into()));
        }
        MatrixParam::new(alpha, beta)
    }
}

impl MatrixParam {
    pub fn new(alpha: CMatrix, beta: CMatrix) -> Result<Self> {
        let m = alpha.nrows();
        if alpha.ncols() != m || beta.nrows() != m || beta.ncols() != m || m == 0 {
            return Err(Error::InvalidInput(
                "alpha and beta must be square matrices of the same nonzero size".into(),
            ));
        }
        let dev = &alpha * alpha.adjoint() + &beta * beta.adjoint() - CMatrix::identity(m, m);
        let err = crate::linalg::operator_norm(&dev);
        if !err.is_finite() || err > MATRIX_PARAM_TOL {
            return Err(Error::InvalidInput(format!(
                "alpha alpha* + beta beta* must equal I (deviation {err:.3e})"
            )));
        }
        Ok(Self { alpha, beta })
    }

    /// Embeds a scalar parameter as a level-1 matrix parameter.
    pub fn from_scalar(p: &ScalarParam) -> Self {
        Self {
            alpha: CMatrix::from_element(1, 1, p.alpha()),
            beta: CMatrix::from_element(1, 1, p.beta()),
        }
    }

    pub fn level(&self) -> usize {
        self.alpha.nrows()
    }

    pub fn alpha(&self) -> &CMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }
}

/// Finite Blaschke product u * prod (z - a_k) / (1 - conj(a_k) z) with zeros
/// in the open disk and a unimodular front factor.
#[derive(Clone, Debug)]
pub struct FiniteBlaschke {
    zeros: Vec<C64>,
    unimodular: C64,
}

impl FiniteBlaschke {
    pub fn new(zeros: Vec<C64>, unimodular: C64) -> Result<Self> {
        for (k, a) in zeros.iter().enumerate() {
            if !(a.norm() < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "Blaschke zero {k} must lie in the open unit disk"
                )));
            }
        }
        if (unimodular.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput("front factor must be unimodular".into()));
        }
        Ok(Self { zeros, unimodular })
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn unimodular_factor(&self) -> C64 {
        self.unimodular
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = self.unimodular;
        for &a in &self.zeros {
            acc *= (z - a) / (cr(1.0) - a.conj() * z);
        }
        acc
    }

    /// Derivative by the product rule; each elementary factor has derivative
    /// (1 - |a|^2) / (1 - conj(a) z)^2.
    pub fn eval_deriv(&self, z: C64) -> C64 {
        let n = self.zeros.len();
        let factors: Vec<C64> = self
            .zeros
            .iter()
            .map(|&a| (z - a) / (cr(1.0) - a.conj() * z))
            .collect();
        let mut acc = C64::ZERO;
        for k in 0..n {
            let a = self.zeros[k];
            let den = cr(1.0) - a.conj() * z;
            let dk = cr(1.0 - a.norm_sqr()) / (den * den);
            let mut term = dk;
            for (l, f) in factors.iter().enumerate() {
                if l != k {
                    term *= f;
                }
            }
            acc += term;
        }
        acc * self.unimodular
    }
}

/// Degree-two Blaschke product with zeros 0 and lambda; the common factor of
/// the constrained algebra's maximal ideal at the node pair {0, lambda}.
pub fn b_lambda(cfg: &NodeConfig) -> FiniteBlaschke {
    FiniteBlaschke { zeros: vec![C64::ZERO, cfg.lambda], unimodular: cr(1.0) }
}

/// Same as [`b_lambda`] for a bare base point.
pub fn b_lambda_for(lambda: C64) -> Result<FiniteBlaschke> {
    let lmod = lambda.norm();
    if !(lmod > POINT_MERGE_TOL && lmod < 1.0) {
        return Err(Error::InvalidInput("base point must satisfy 0 < |lambda| < 1".into()));
    }
    Ok(FiniteBlaschke { zeros: vec![C64::ZERO, lambda], unimodular: cr(1.0) })
}

/// How far a Blaschke product is from the constrained algebra: |B(0) - B(lambda)|.
pub fn node_membership_defect(b: &FiniteBlaschke, lambda: C64) -> f64 {
    (b.eval(C64::ZERO) - b.eval(lambda)).norm()
}

/// The distinguished algebra element sqrt(1 - |lambda|^2)/|lambda| *
/// (k_lambda(z) - 1), where k_lambda is the reproducing kernel at lambda.
pub fn f_lambda(cfg: &NodeConfig, z: C64) -> C64 {
    let l = cfg.lambda;
    let lmod = l.norm();
    let scale = (1.0 - lmod * lmod).sqrt() / lmod;
    let k = cr(1.0) / (cr(1.0) - z * l.conj());
    cr(scale) * (k - cr(1.0))
}

/// Scalar kernel of the family at parameter (alpha, beta):
/// conj(alpha + beta f(w)) (alpha + beta f(z)) + B(z) conj(B(w)) / (1 - z conj(w)).
pub fn scalar_kernel(cfg: &NodeConfig, p: &ScalarParam, z: C64, w: C64) -> Result<C64> {
    let den = cr(1.0) - z * w.conj();
    if den.norm() < SZEGO_TOL {
        return Err(Error::Domain(format!(
            "kernel denominator |1 - z conj(w)| = {:.3e} is below the supported floor",
            den.norm()
        )));
    }
    let b = b_lambda(cfg);
    let fz = p.alpha + p.beta * f_lambda(cfg, z);
    let fw = p.alpha + p.beta * f_lambda(cfg, w);
    Ok(fw.conj() * fz + b.eval(z) * b.eval(w).conj() / den)
}

/// Matrix kernel at a level-m parameter:
/// (alpha* + conj(f(w)) beta*)(alpha + f(z) beta) + B(z) conj(B(w))/(1 - z conj(w)) I_m.
pub fn matrix_kernel(cfg: &NodeConfig, mp: &MatrixParam, z: C64, w: C64) -> Result<CMatrix> {
    let den = cr(1.0) - z * w.conj();
    if den.norm() < SZEGO_TOL {
        return Err(Error::Domain(format!(
            "kernel denominator |1 - z conj(w)| = {:.3e} is below the supported floor",
            den.norm()
        )));
    }
    let b = b_lambda(cfg);
    let m = mp.level();
    let left = mp.alpha().adjoint() + mp.beta().adjoint() * f_lambda(cfg, w).conj();
    let right = mp.alpha() + mp.beta() * f_lambda(cfg, z);
    let szego = b.eval(z) * b.eval(w).conj() / den;
    Ok(left * right + CMatrix::identity(m, m) * szego)
}

/// Gram matrix [k(z_i, z_j)] of the kernel at the configured nodes.
pub fn gram_matrix(cfg: &NodeConfig, p: &ScalarParam) -> Result<HermitianMatrix> {
    let n = cfg.len();
    let mut g = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = scalar_kernel(cfg, p, cfg.nodes[i], cfg.nodes[j])?;
        }
    }
    HermitianMatrix::new(&g)
}

/// Rectangular kernel matrix [k(z_i, w_j)] between two point lists. All
/// points must avoid 0 and lambda, where the constrained kernel degenerates.
pub fn cross_kernel_matrix(
    cfg: &NodeConfig,
    p: &ScalarParam,
    zs: &[C64],
    ws: &[C64],
) -> Result<CMatrix> {
    if zs.len() != ws.len() || zs.is_empty() {
        return Err(Error::InvalidInput("point lists must be nonempty and of equal length".into()));
    }
    for &pt in zs.iter().chain(ws.iter()) {
        if pt.norm() >= 1.0 {
            return Err(Error::InvalidInput("points must lie in the open unit disk".into()));
        }
        if pt.norm() <= POINT_MERGE_TOL || (pt - cfg.lambda).norm() <= POINT_MERGE_TOL {
            return Err(Error::Domain(
                "evaluation points must avoid 0 and lambda, where the kernel family degenerates"
                    .into(),
            ));
        }
    }
    let n = zs.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = scalar_kernel(cfg, p, zs[i], ws[j])?;
        }
    }
    Ok(m)
}

/// Supremum of |f| over the unit circle, estimated by a coarse scan followed
/// by local bracket refinement around the best sample.
pub fn boundary_sup_norm(f: impl Fn(C64) -> C64, coarse: usize, refine_iters: usize) -> f64 {
    let coarse = coarse.max(8);
    let at = |theta: f64| f(C64::from_polar(1.0, theta)).norm();
    let mut best_theta = 0.0;
    let mut best = f64::MIN;
    for j in 0..coarse {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / coarse as f64;
        let v = at(theta);
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    let mut delta = 2.0 * std::f64::consts::PI / coarse as f64;
    for _ in 0..refine_iters {
        for s in 1..=4 {
            for sign in [-1.0, 1.0] {
                let theta = best_theta + sign * delta * s as f64 / 4.0;
                let v = at(theta);
                if v > best {
                    best = v;
                    best_theta = theta;
                }
            }
        }
        delta /= 4.0;
    }
    best
}

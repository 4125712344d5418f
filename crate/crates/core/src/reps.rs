//! Finite-dimensional models of the constrained algebra acting on the span of
//! node kernels: the compression of multiplication by an algebra element to
//! that span, expressed in an orthonormal basis, plus the diagnostics used to
//! tell such models apart.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernel::{scalar_kernel, NodeConfig, ScalarParam};
use crate::linalg::{
    cr, operator_norm, psd_inv_sqrt, psd_sqrt, spectral_radius, CMatrix, CVector, HermitianMatrix,
    C64,
};

/// Max residual allowed when fitting the generator polynomial.
pub const GENERATOR_RESIDUAL_TOL: f64 = 1e-11;

/// Max deviation of the dual-basis pairing from the identity.
pub const DUAL_PAIRING_TOL: f64 = 1e-10;

/// Relative cliff below which a candidate span direction is treated as
/// already contained in the span.
pub const SPAN_CLIFF: f64 = 1e-9;

/// Polynomial with complex coefficients in ascending order.
#[derive(Clone, Debug)]
pub struct GeneratorPoly {
    coeffs: Vec<C64>,
}

impl GeneratorPoly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Evaluates the polynomial on a square matrix by Horner's scheme.
    pub fn eval_matrix(&self, t: &CMatrix) -> CMatrix {
        let d = t.nrows();
        let mut acc = CMatrix::zeros(d, d);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * t + CMatrix::identity(d, d) * c;
        }
        acc
    }
}

/// Fits the degree n+1 polynomial h with h(0) = h(lambda) = 0 and
/// h(z_i) = z_i. It reproduces the node coordinates while satisfying the
/// algebra's collision constraint, so it generates the quotient model.
pub fn generator_h(cfg: &NodeConfig) -> Result<GeneratorPoly> {
    let mut pts = vec![C64::ZERO, cfg.lambda()];
    pts.extend_from_slice(cfg.nodes());
    let mut vals = vec![C64::ZERO, C64::ZERO];
    vals.extend_from_slice(cfg.nodes());

    let d = pts.len();
    let vand = DMatrix::from_fn(d, d, |i, j| pts[i].powu(j as u32));
    let rhs = CVector::from_column_slice(&vals);
    let lu = vand.full_piv_lu();
    let coeffs = lu
        .solve(&rhs)
        .ok_or_else(|| Error::IllConditioned("generator interpolation system is singular".into()))?;
    let poly = GeneratorPoly::new(coeffs.iter().copied().collect());

    let scale = vals.iter().map(|v| v.norm()).fold(1.0_f64, f64::max);
    for (p, v) in pts.iter().zip(vals.iter()) {
        let res = (poly.eval(*p) - v).norm();
        if res > GENERATOR_RESIDUAL_TOL * scale {
            return Err(Error::IllConditioned(format!(
                "generator interpolation residual {res:.3e} exceeds tolerance"
            )));
        }
    }
    Ok(poly)
}

/// Dual system to the node kernels: coefficient matrix C with G C = I, so the
/// i-th column gives the kernel-basis coefficients of the functional dual to
/// evaluation at node i.
#[derive(Clone, Debug)]
pub struct DualBasis {
    coeff: CMatrix,
}

impl DualBasis {
    pub fn coefficients(&self) -> &CMatrix {
        &self.coeff
    }

    /// Operator-norm deviation of G C from the identity.
    pub fn pairing_defect(&self, gram: &HermitianMatrix) -> f64 {
        let d = self.coeff.nrows();
        operator_norm(&(gram.matrix() * &self.coeff - CMatrix::identity(d, d)))
    }
}

pub fn dual_basis(gram: &HermitianMatrix) -> Result<DualBasis> {
    let d = gram.dim();
    let lu = gram.matrix().clone().full_piv_lu();
    let coeff = lu.solve(&CMatrix::identity(d, d)).ok_or(Error::Singular { cond: f64::INFINITY })?;
    let basis = DualBasis { coeff };
    let defect = basis.pairing_defect(gram);
    if !(defect <= DUAL_PAIRING_TOL * gram.trace_scale()) {
        return Err(Error::IllConditioned(format!(
            "dual basis pairing defect {defect:.3e} exceeds tolerance"
        )));
    }
    Ok(basis)
}

/// Matrix of the compressed multiplication operator in the orthonormalized
/// kernel basis: G^{-1/2} diag(values) G^{1/2}, where values are the element's
/// node values.
pub fn rho_matrix(gram: &HermitianMatrix, values: &[C64]) -> Result<CMatrix> {
    let d = gram.dim();
    if values.len() != d {
        return Err(Error::InvalidInput(format!(
            "expected {d} node values, got {}",
            values.len()
        )));
    }
    let tol = 1e-12;
    let sqrt = psd_sqrt(gram, tol)?;
    let inv_sqrt = psd_inv_sqrt(gram, tol)?;
    let diag = CMatrix::from_diagonal(&CVector::from_column_slice(values));
    Ok(inv_sqrt.matrix() * diag * sqrt.matrix())
}

/// Norm evidence that prod_i (rho - z_i I) annihilates the model while every
/// leave-one-out product does not.
#[derive(Clone, Debug)]
pub struct MinimalPolyReport {
    pub full_product_norm: f64,
    pub leave_one_out_norms: Vec<f64>,
}

pub fn minimal_poly_report(rho: &CMatrix, roots: &[C64]) -> MinimalPolyReport {
    let d = rho.nrows();
    let id = CMatrix::identity(d, d);
    let product = |skip: Option<usize>| -> f64 {
        let mut acc = id.clone();
        for (i, &z) in roots.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            acc = &acc * (rho - &id * z);
        }
        operator_norm(&acc)
    };
    MinimalPolyReport {
        full_product_norm: product(None),
        leave_one_out_norms: (0..roots.len()).map(|i| product(Some(i))).collect(),
    }
}

fn flatten(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

/// Dimension of the unital *-algebra generated by the given d x d matrices,
/// computed by closing the linear span under products and adjoints with
/// modified Gram-Schmidt over the Frobenius inner product.
pub fn star_algebra_dim(generators: &[CMatrix]) -> Result<usize> {
    if generators.is_empty() {
        return Err(Error::InvalidInput("at least one generator is required".into()));
    }
    let d = generators[0].nrows();
    if generators.iter().any(|g| g.nrows() != d || g.ncols() != d) {
        return Err(Error::InvalidInput("generators must be square and of equal size".into()));
    }
    let cap = d * d;

    let mut basis_vecs: Vec<CVector> = Vec::new();
    let mut basis_mats: Vec<CMatrix> = Vec::new();
    let insert = |m: &CMatrix, vecs: &mut Vec<CVector>, mats: &mut Vec<CMatrix>| {
        let mut v = flatten(m);
        let scale = v.norm();
        if scale <= 0.0 || !scale.is_finite() {
            return;
        }
        for b in vecs.iter() {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        if v.norm() > SPAN_CLIFF * scale {
            let vn = v.norm();
            vecs.push(v / cr(vn));
            mats.push(m.clone());
        }
    };

    let mut seeds: Vec<CMatrix> = vec![CMatrix::identity(d, d)];
    for g in generators {
        seeds.push(g.clone());
        seeds.push(g.adjoint());
    }
    for s in &seeds {
        insert(s, &mut basis_vecs, &mut basis_mats);
    }

    for _round in 0..10 {
        let before = basis_vecs.len();
        if before >= cap {
            break;
        }
        let snapshot = basis_mats.clone();
        for a in &snapshot {
            for b in &snapshot {
                insert(&(a * b), &mut basis_vecs, &mut basis_mats);
                if basis_vecs.len() >= cap {
                    break;
                }
            }
            if basis_vecs.len() >= cap {
                break;
            }
        }
        if basis_vecs.len() == before {
            break;
        }
    }
    Ok(basis_vecs.len().min(cap))
}

/// Normalized squared kernel correlations |k(z_j, z_i)|^2 /
/// (k(z_i, z_i) k(z_j, z_j)) over node pairs i < j. These numbers are
/// invariant under unitary equivalence of the associated models, so two
/// parameters producing different lists yield inequivalent models.
pub fn inequivalence_invariant(
    cfg: &NodeConfig,
    p: &ScalarParam,
) -> Result<Vec<((usize, usize), f64)>> {
    let nodes = cfg.nodes();
    let mut out = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let kii = scalar_kernel(cfg, p, nodes[i], nodes[i])?.re;
            let kjj = scalar_kernel(cfg, p, nodes[j], nodes[j])?.re;
            let kji = scalar_kernel(cfg, p, nodes[j], nodes[i])?;
            if kii <= 0.0 || kjj <= 0.0 {
                return Err(Error::Domain("kernel diagonal must be positive".into()));
            }
            out.push(((i, j), kji.norm_sqr() / (kii * kjj)));
        }
    }
    Ok(out)
}

/// Direct and closed-form evaluations of a polynomial on the lower block
/// triangular matrix T = [[C, 0], [v* (C - omega I), omega]].
#[derive(Clone, Debug)]
pub struct BlockCalculus {
    pub direct: CMatrix,
    pub closed: CMatrix,
    pub deviation: f64,
}

/// Applies the polynomial to T both by Horner iteration on T itself and by
/// the closed form [[p(C), 0], [v* (p(C) - p(omega) I), p(omega)]], which the
/// structure of T forces for every polynomial.
pub fn block_triangular_calculus(
    c: &CMatrix,
    v: &CVector,
    omega: C64,
    poly: &GeneratorPoly,
) -> Result<BlockCalculus> {
    let d = c.nrows();
    if c.ncols() != d || v.len() != d {
        return Err(Error::InvalidInput("C must be square and v of matching length".into()));
    }
    let id = CMatrix::identity(d, d);
    let bottom = v.adjoint() * (c - &id * omega);

    let mut t = CMatrix::zeros(d + 1, d + 1);
    t.view_mut((0, 0), (d, d)).copy_from(c);
    t.view_mut((d, 0), (1, d)).copy_from(&bottom);
    t[(d, d)] = omega;

    let radius = spectral_radius(&t)?;
    if radius >= 1.0 {
        return Err(Error::Domain(format!(
            "block matrix must be a strict contraction in spectrum, radius {radius}"
        )));
    }

    let direct = poly.eval_matrix(&t);

    let pc = poly.eval_matrix(c);
    let pw = poly.eval(omega);
    let mut closed = CMatrix::zeros(d + 1, d + 1);
    closed.view_mut((0, 0), (d, d)).copy_from(&pc);
    let closed_bottom = v.adjoint() * (&pc - &id * pw);
    closed.view_mut((d, 0), (1, d)).copy_from(&closed_bottom);
    closed[(d, d)] = pw;

    let deviation = operator_norm(&(&direct - &closed)) / operator_norm(&direct).max(1.0);
    Ok(BlockCalculus { direct, closed, deviation })
}

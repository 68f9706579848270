use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::projector::Projector;
use super::{CLUSTER_TOL, HERMITIAN_TOL};
use crate::error::{Error, Result};

/// Sweep budget for the Jacobi eigensolver.
pub const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TARGET: f64 = 1e-12;

/// A self-adjoint operator on `C^n`.
///
/// The stored matrix is the Hermitian part `(M + M^dagger) / 2` of the input,
/// so it is exactly self-adjoint even when the input was only so to within
/// [`HERMITIAN_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, HERMITIAN_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let residual = matrix.hermitian_residual();
        if !(residual <= tol) {
            return Err(Error::NotHermitian { residual });
        }
        let sym = (&matrix + &matrix.adjoint()).scale(0.5);
        Ok(Self { matrix: sym })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::from_diag(diag),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// `<h, T h>` for a (not necessarily normalized) vector.
    pub fn quadratic_form(&self, h: &[Complex64]) -> f64 {
        self.matrix.quadratic_form(h).re
    }
}

/// Eigenvalues in increasing order and the unitary whose columns are the
/// matching eigenvectors.
///
/// Cyclic complex Jacobi: each rotation first removes the phase of the
/// pivot `a_pq`, then applies the real symmetric Jacobi rotation that
/// annihilates it.
pub fn jacobi_eigen(op: &HermitianOperator) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = op.dim();
    let mut a = op.matrix().clone();
    let mut q = ComplexMatrix::identity(n);
    let target = OFF_DIAGONAL_TARGET * a.frobenius_norm().max(1.0);

    let mut converged = off_diagonal_norm(&a) < target;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for r in (p + 1)..n {
                rotate(&mut a, &mut q, p, r);
            }
        }
        converged = off_diagonal_norm(&a) < target;
    }
    if !converged {
        return Err(Error::ConvergenceFailure {
            sweeps,
            off_norm: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = q[(row, src)];
        }
    }
    Ok((values, vectors))
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate(a: &mut ComplexMatrix, q: &mut ComplexMatrix, p: usize, r: usize) {
    let apr = a[(p, r)];
    let magnitude = apr.norm();
    if magnitude == 0.0 {
        return;
    }
    let phase = apr / magnitude;
    let app = a[(p, p)].re;
    let arr = a[(r, r)].re;

    let theta = (arr - app) / (2.0 * magnitude);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // V restricted to rows/cols (p, r).
    let v_pp = Complex64::new(c, 0.0);
    let v_pr = Complex64::new(s, 0.0);
    let v_rp = -phase.conj() * s;
    let v_rr = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, r)]);
        a[(k, p)] = x * v_pp + y * v_rp;
        a[(k, r)] = x * v_pr + y * v_rr;
    }
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(r, k)]);
        a[(p, k)] = v_pp.conj() * x + v_rp.conj() * y;
        a[(r, k)] = v_pr.conj() * x + v_rr.conj() * y;
    }
    for k in 0..n {
        let (x, y) = (q[(k, p)], q[(k, r)]);
        q[(k, p)] = x * v_pp + y * v_rp;
        q[(k, r)] = x * v_pr + y * v_rr;
    }
    a[(p, r)] = Complex64::new(0.0, 0.0);
    a[(r, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);
}

/// Distinct eigenvalues with their orthogonal eigenprojectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<Projector>,
    dim: usize,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from explicit parts, checking that the
    /// eigenvalues are strictly increasing and that the projectors are
    /// mutually orthogonal and resolve the identity to within `1e-8`.
    pub fn from_parts(eigenvalues: Vec<f64>, projectors: Vec<Projector>) -> Result<Self> {
        let Some(first) = projectors.first() else {
            return Err(Error::InvalidDecomposition("no eigenvalues".into()));
        };
        let dim = first.dim();
        if eigenvalues.len() != projectors.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} eigenvalues but {} projectors",
                eigenvalues.len(),
                projectors.len()
            )));
        }
        if let Some(p) = projectors.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.dim(),
            });
        }
        if eigenvalues.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidDecomposition(
                "eigenvalues must be strictly increasing".into(),
            ));
        }
        let dec = Self {
            eigenvalues,
            projectors,
            dim,
        };
        let (identity_residual, orthogonality_residual) = dec.invariant_residuals();
        if identity_residual > 1e-8 || orthogonality_residual > 1e-8 {
            return Err(Error::InvalidDecomposition(format!(
                "resolution of identity off by {identity_residual:e}, \
                 orthogonality off by {orthogonality_residual:e}"
            )));
        }
        Ok(dec)
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.projectors.iter().map(Projector::rank).collect()
    }

    /// `sum_k lambda_k P_k`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|x| x)
    }

    /// `sum_k g(lambda_k) P_k`.
    pub fn map_eigenvalues(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (&lambda, p) in self.eigenvalues.iter().zip(&self.projectors) {
            let gl = g(lambda);
            if gl != 0.0 {
                out = &out + &p.matrix().scale(gl);
            }
        }
        out
    }

    /// Max-norm residuals of `sum P_k - I` and of `P_k P_l` for `k != l`.
    pub fn invariant_residuals(&self) -> (f64, f64) {
        let mut sum = ComplexMatrix::zeros(self.dim);
        for p in &self.projectors {
            sum = &sum + p.matrix();
        }
        let identity = sum.max_abs_diff(&ComplexMatrix::identity(self.dim));
        let mut ortho: f64 = 0.0;
        for (k, pk) in self.projectors.iter().enumerate() {
            for pl in &self.projectors[k + 1..] {
                ortho = ortho.max((pk.matrix() * pl.matrix()).max_norm());
            }
        }
        (identity, ortho)
    }
}

/// Spectral decomposition of `op` with eigenvalues closer than
/// `cluster_tol` merged (consecutive gaps, so clusters may chain).
///
/// A merged eigenvalue is the mean of its members and its projector is the
/// sum of their rank-one projectors, which makes the output independent of
/// the eigenbasis chosen inside a degenerate eigenspace.
pub fn eigh(op: &HermitianOperator, cluster_tol: f64) -> Result<SpectralDecomposition> {
    let cluster_tol = if cluster_tol > 0.0 { cluster_tol } else { CLUSTER_TOL };
    let (values, vectors) = jacobi_eigen(op)?;
    let n = op.dim();

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match groups.last_mut() {
            Some(g) if values[i] - values[*g.last().unwrap()] <= cluster_tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut projectors = Vec::with_capacity(groups.len());
    for g in groups {
        let mean = g.iter().map(|&i| values[i]).sum::<f64>() / g.len() as f64;
        let cols: Vec<Vec<Complex64>> = g.iter().map(|&i| vectors.column(i)).collect();
        eigenvalues.push(mean);
        projectors.push(Projector::from_orthonormal(n, &cols));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        projectors,
        dim: n,
    })
}

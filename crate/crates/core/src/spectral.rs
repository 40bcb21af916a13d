//! Finite-difference operator, full eigendecomposition, projector kernels and
//! trace-norm diagnostics.

use faer::{Mat, Side};

/// Dense column-major storage for kernels on the grid.
pub type KernelMatrix = Mat<f64>;
use rayon::prelude::*;

use crate::cutoff::Window;
use crate::error::{Error, Result};
use crate::grid::Boundary;
use crate::problem::SemiclassicalProblem;

/// Symmetric tridiagonal matrix, optionally closed into a cycle by equal corner entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    /// Coupling between the last and the first unknown (periodic closure).
    pub corner: f64,
}

impl SymTridiagonal {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let n = self.dim();
        let mut m = Mat::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (i, &o) in self.off.iter().enumerate() {
            m[(i, i + 1)] = o;
            m[(i + 1, i)] = o;
        }
        if n > 1 && self.corner != 0.0 {
            m[(0, n - 1)] += self.corner;
            m[(n - 1, 0)] += self.corner;
        }
        m
    }

    /// `y = A x`
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
        if n > 1 && self.corner != 0.0 {
            y[0] += self.corner * x[n - 1];
            y[n - 1] += self.corner * x[0];
        }
    }
}

/// `-h^2 D^2 - V` with the three-point stencil and the grid's boundary condition.
pub fn assemble_operator(problem: &SemiclassicalProblem) -> Result<SymTridiagonal> {
    problem.validate()?;
    let grid = &problem.grid;
    let k = problem.h * problem.h / (grid.spacing * grid.spacing);
    let nodes = grid.nodes();
    let n = nodes.len();
    let diag = nodes.iter().map(|&x| 2.0 * k - problem.potential.value(x)).collect();
    let off = vec![-k; n - 1];
    let corner = match grid.boundary {
        Boundary::Dirichlet => 0.0,
        Boundary::Periodic => -k,
    };
    Ok(SymTridiagonal { diag, off, corner })
}

/// Full spectrum of a discretized operator.
///
/// `modes` holds one mode per column, normalized so that
/// `sum_i modes[(i, k)] * modes[(i, l)] * measure_weight = delta_kl`.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub energies: Vec<f64>,
    pub modes: Mat<f64>,
    pub measure_weight: f64,
    pub nodes: Vec<f64>,
}

pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

pub fn eigendecompose(op: &SymTridiagonal, measure_weight: f64) -> Result<EigenSystem> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::Eigensolver {
            dim: 0,
            detail: "empty operator".into(),
        });
    }
    let evd = op
        .to_dense()
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigensolver {
            dim: n,
            detail: format!("{e:?}"),
        })?;
    let energies: Vec<f64> = evd.S().column_vector().iter().copied().collect();
    let u = evd.U();

    // residuals are checked on the unit-norm vectors
    let worst = (0..n)
        .into_par_iter()
        .map(|k| {
            let col: Vec<f64> = (0..n).map(|i| u[(i, k)]).collect();
            let mut y = vec![0.0; n];
            op.apply(&col, &mut y);
            let r = y
                .iter()
                .zip(&col)
                .map(|(a, b)| (a - energies[k] * b).powi(2))
                .sum::<f64>()
                .sqrt();
            (k, r / (energies[k].abs() + 1.0))
        })
        .reduce(|| (0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    if worst.1 > RESIDUAL_TOLERANCE {
        return Err(Error::Eigensolver {
            dim: n,
            detail: format!(
                "residual {:.3e} (relative) for pair {} exceeds {RESIDUAL_TOLERANCE:.0e}",
                worst.1, worst.0
            ),
        });
    }

    let scale = 1.0 / measure_weight.sqrt();
    let modes = Mat::from_fn(n, n, |i, k| u[(i, k)] * scale);
    Ok(EigenSystem {
        energies,
        modes,
        measure_weight,
        nodes: (0..n).map(|i| i as f64 * measure_weight).collect(),
    })
}

/// Assembles and diagonalizes the problem's operator.
pub fn solve(problem: &SemiclassicalProblem) -> Result<EigenSystem> {
    let op = assemble_operator(problem)?;
    let mut eigs = eigendecompose(&op, problem.grid.spacing)?;
    eigs.nodes = problem.nodes();
    Ok(eigs)
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Number of eigenvalues `<= tau`.
    pub fn count_below(&self, tau: f64) -> usize {
        self.energies.partition_point(|&e| e <= tau)
    }

    /// Indices of eigenvalues in `(tau1, tau2]`.
    pub fn window(&self, tau1: f64, tau2: f64) -> std::ops::Range<usize> {
        self.energies.partition_point(|&e| e <= tau1)..self.count_below(tau2)
    }

    pub fn mode(&self, k: usize) -> impl Iterator<Item = f64> + '_ {
        self.modes.col(k).iter().copied()
    }

    /// `sum_k w_k phi_k(x_i) phi_k(x_j)` over the given mode range, symmetrized exactly.
    pub(crate) fn weighted_outer(&self, range: std::ops::Range<usize>, w: impl Fn(usize) -> f64) -> Mat<f64> {
        let n = self.dim();
        if range.is_empty() {
            return Mat::zeros(n, n);
        }
        let cols = range.len();
        let left = Mat::from_fn(n, cols, |i, c| self.modes[(i, range.start + c)]);
        let right = Mat::from_fn(n, cols, |i, c| self.modes[(i, range.start + c)] * w(range.start + c));
        let mut values = &left * right.transpose();
        for j in 0..n {
            for i in j + 1..n {
                values[(j, i)] = values[(i, j)];
            }
        }
        values
    }
}

/// Samples `e(x_i, x_j, tau)` of the spectral projector kernel.
#[derive(Debug, Clone)]
pub struct ProjectorKernel {
    pub values: KernelMatrix,
    pub nodes: Vec<f64>,
    pub measure_weight: f64,
    pub tau: f64,
    pub h: f64,
    /// Period of the underlying grid, if any; separations use the nearest image.
    pub period: Option<f64>,
}

impl ProjectorKernel {
    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn separation(&self, i: usize, j: usize) -> f64 {
        let d = self.nodes[i] - self.nodes[j];
        match self.period {
            Some(l) => d - l * (d / l).round(),
            None => d,
        }
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.values[(i, j)].abs());
            }
        }
        m
    }

    /// `sum_i K_ii dx`
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.values[(i, i)]).sum::<f64>() * self.measure_weight
    }

    /// `max |K dx K - K|` relative to `max |K|`.
    pub fn idempotence_defect(&self) -> f64 {
        let sq = &self.values * &self.values;
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((sq[(i, j)] * self.measure_weight - self.values[(i, j)]).abs());
            }
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (j + 1..n).all(|i| self.values[(i, j)] == self.values[(j, i)]))
    }
}

pub fn projector_kernel(eigs: &EigenSystem, tau: f64, h: f64, period: Option<f64>) -> ProjectorKernel {
    ProjectorKernel {
        values: eigs.weighted_outer(0..eigs.count_below(tau), |_| 1.0),
        nodes: eigs.nodes.clone(),
        measure_weight: eigs.measure_weight,
        tau,
        h,
        period,
    }
}

/// Projector kernel of a problem at its energy level.
pub fn problem_kernel(problem: &SemiclassicalProblem, eigs: &EigenSystem) -> ProjectorKernel {
    let period = match problem.grid.boundary {
        Boundary::Periodic => Some(problem.grid.length()),
        Boundary::Dirichlet => None,
    };
    projector_kernel(eigs, problem.tau, problem.h, period)
}

fn support_indices(nodes: &[f64], psi: &impl Window) -> Vec<usize> {
    (0..nodes.len()).filter(|&i| psi.at(nodes[i]) != 0.0).collect()
}

fn sum_singular_values(m: &Mat<f64>) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(0.0);
    }
    let s = m.singular_values().map_err(|e| Error::Eigensolver {
        dim: m.nrows().max(m.ncols()),
        detail: format!("singular value decomposition: {e:?}"),
    })?;
    Ok(s.iter().sum())
}

/// Trace norm of `psi1 K psi2` as an operator on the grid.
pub fn sandwich_trace_norm(kernel: &ProjectorKernel, psi1: &impl Window, psi2: &impl Window) -> Result<f64> {
    let rows = support_indices(&kernel.nodes, psi1);
    let cols = support_indices(&kernel.nodes, psi2);
    let dx = kernel.measure_weight;
    let m = Mat::from_fn(rows.len(), cols.len(), |a, b| {
        let (i, j) = (rows[a], cols[b]);
        psi1.at(kernel.nodes[i]) * kernel.values[(i, j)] * psi2.at(kernel.nodes[j]) * dx
    });
    sum_singular_values(&m)
}

/// Trace norm of `psi1 (E(tau2) - E(tau1)) psi2`.
///
/// The windowed projector has rank equal to the number of eigenvalues in the window,
/// so the computation goes through thin QR factors of the two sandwiched mode blocks.
pub fn window_trace_norm(
    eigs: &EigenSystem,
    tau1: f64,
    tau2: f64,
    psi1: &impl Window,
    psi2: &impl Window,
) -> Result<f64> {
    if tau1 > tau2 {
        return Err(Error::Window { tau1, tau2 });
    }
    let range = eigs.window(tau1, tau2);
    if range.is_empty() {
        return Ok(0.0);
    }
    let root = eigs.measure_weight.sqrt();
    let block = |psi: &dyn Fn(f64) -> f64| {
        Mat::from_fn(eigs.dim(), range.len(), |i, c| {
            psi(eigs.nodes[i]) * eigs.modes[(i, range.start + c)] * root
        })
    };
    let a = block(&|x| psi1.at(x));
    let b = block(&|x| psi2.at(x));
    let ra = a.qr().thin_R().to_owned();
    let rb = b.qr().thin_R().to_owned();
    sum_singular_values(&(&ra * rb.transpose()))
}

/// `tr(psi2 E psi1 E)` computed in mode space: `sum_kl A_kl B_kl` with
/// `A_kl = <phi_k, psi2 phi_l>` and `B_kl = <phi_k, psi1 phi_l>`.
///
/// For nonnegative cutoffs this is the squared Hilbert-Schmidt norm of
/// `psi2^(1/2) E psi1^(1/2)`.
pub fn sandwich_trace_product(eigs: &EigenSystem, tau: f64, psi1: &impl Window, psi2: &impl Window) -> f64 {
    let m = eigs.count_below(tau);
    if m == 0 {
        return 0.0;
    }
    let dx = eigs.measure_weight;
    let gram = |psi: &dyn Fn(f64) -> f64| {
        let weighted = Mat::from_fn(eigs.dim(), m, |i, c| psi(eigs.nodes[i]) * eigs.modes[(i, c)] * dx);
        let plain = Mat::from_fn(eigs.dim(), m, |i, c| eigs.modes[(i, c)]);
        plain.transpose() * weighted
    };
    let a = gram(&|x| psi2.at(x));
    let b = gram(&|x| psi1.at(x));
    let mut acc = 0.0;
    for l in 0..m {
        for k in 0..m {
            acc += a[(k, l)] * b[(k, l)];
        }
    }
    acc
}

//! Discretized forward operators `A: M_+(K) -> R^m` and their adjoints.
//!
//! A measure is stored as a vector of node masses (density already
//! multiplied by the quadrature weight), so a Dirac mass is exactly one
//! nonzero node. Row functionals are sampled on the grid nodes; the adjoint
//! `A* lambda = sum_i lambda_i a_i` is a sampled continuous function and
//! carries no quadrature weights.
//!
//! Every operator keeps the structural invariants `a_i >= 0` and
//! `a_i != 0`: entries are nonnegative and zero rows are rejected (the
//! tomography builder drops rays that miss the domain).

mod radon;

pub use radon::{make_radon_operator, ray_geometry};

use std::sync::Arc;

use crate::error::{Error, Result};

/// A discretization of the compact domain: nodes, and one positive
/// quadrature weight per node (Lebesgue measure represented by the node).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: u8,
    /// (nx, ny); ny = 1 for one-dimensional grids. 2D nodes are stored
    /// row-major: node index = iy * nx + ix.
    shape: (usize, usize),
    nodes: Vec<[f64; 2]>,
    quad_weights: Vec<f64>,
}

impl Grid {
    /// Uniform 1D grid on `[0, 1]` with both endpoints and trapezoidal
    /// quadrature weights. Requires `n >= 2`.
    pub fn uniform_1d(n: usize) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!(
                "1d grid needs at least 2 nodes, got {n}"
            )));
        }
        let h = 1.0 / (n - 1) as f64;
        let nodes = (0..n).map(|j| [j as f64 * h, 0.0]).collect();
        let mut quad_weights = vec![h; n];
        quad_weights[0] = 0.5 * h;
        quad_weights[n - 1] = 0.5 * h;
        Ok(Arc::new(Self {
            dim: 1,
            shape: (n, 1),
            nodes,
            quad_weights,
        }))
    }

    /// Regular n-by-n pixel lattice on `[0, 1]^2`: nodes at pixel centers,
    /// pixel-area quadrature weights.
    pub fn unit_square(n: usize) -> Result<Arc<Self>> {
        if n < 1 {
            return Err(Error::InvalidConfig("2d grid needs at least 1 pixel".into()));
        }
        let h = 1.0 / n as f64;
        let mut nodes = Vec::with_capacity(n * n);
        for iy in 0..n {
            for ix in 0..n {
                nodes.push([(ix as f64 + 0.5) * h, (iy as f64 + 0.5) * h]);
            }
        }
        Ok(Arc::new(Self {
            dim: 2,
            shape: (n, n),
            nodes,
            quad_weights: vec![h * h; n * n],
        }))
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// (nx, ny) node layout; ny = 1 in one dimension.
    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, j: usize) -> [f64; 2] {
        self.nodes[j]
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad_weights
    }

    fn compatible(&self, other: &Grid) -> bool {
        self.dim == other.dim && self.shape == other.shape
    }
}

/// A nonnegative measure on a grid, stored as mass per node.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    grid: Arc<Grid>,
    masses: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(grid: Arc<Grid>, masses: Vec<f64>) -> Result<Self> {
        if masses.len() != grid.len() {
            return Err(Error::LengthMismatch {
                left: masses.len(),
                right: grid.len(),
            });
        }
        if let Some(&bad) = masses.iter().find(|m| **m < 0.0 || m.is_nan()) {
            return Err(Error::InvalidMeasure(format!(
                "node mass must be nonnegative, got {bad}"
            )));
        }
        Ok(Self { grid, masses })
    }

    /// The zero measure.
    pub fn zero(grid: Arc<Grid>) -> Self {
        let masses = vec![0.0; grid.len()];
        Self { grid, masses }
    }

    /// Constant density: mass = `density * quad_weight` at every node.
    pub fn constant_density(grid: Arc<Grid>, density: f64) -> Result<Self> {
        if density < 0.0 || !density.is_finite() {
            return Err(Error::InvalidMeasure(format!(
                "density must be nonnegative, got {density}"
            )));
        }
        let masses = grid.quad_weights().iter().map(|w| density * w).collect();
        Ok(Self { grid, masses })
    }

    /// Density values per node: mass = `density_j * quad_weight_j`.
    pub fn from_density(grid: Arc<Grid>, density: &[f64]) -> Result<Self> {
        if density.len() != grid.len() {
            return Err(Error::LengthMismatch {
                left: density.len(),
                right: grid.len(),
            });
        }
        let masses = density
            .iter()
            .zip(grid.quad_weights())
            .map(|(d, w)| d * w)
            .collect();
        Self::new(grid, masses)
    }

    /// A single Dirac mass at the given node.
    pub fn dirac(grid: Arc<Grid>, node: usize, mass: f64) -> Result<Self> {
        if node >= grid.len() {
            return Err(Error::InvalidMeasure(format!(
                "node {node} out of range for grid of {}",
                grid.len()
            )));
        }
        let mut masses = vec![0.0; grid.len()];
        masses[node] = mass;
        Self::new(grid, masses)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn max_mass(&self) -> f64 {
        self.masses.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Densities (mass / quadrature weight), e.g. for image export.
    pub fn densities(&self) -> Vec<f64> {
        self.masses
            .iter()
            .zip(self.grid.quad_weights())
            .map(|(m, w)| m / w)
            .collect()
    }
}

/// Observed data vector together with its support `I = {i : y_i > 0}`.
#[derive(Debug, Clone)]
pub struct Observation {
    values: Vec<f64>,
    support: Vec<usize>,
}

impl Observation {
    /// Standard constructor: rejects negative components.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| **v < 0.0 || v.is_nan()) {
            return Err(Error::InvalidObservation(format!(
                "observation components must be nonnegative, got {bad}"
            )));
        }
        Ok(Self::signed(values))
    }

    /// Permits negative components. Only the Euclidean case (beta = 2,
    /// Gaussian data) is defined for such observations; solvers reject
    /// signed data for every other beta.
    pub fn signed(values: Vec<f64>) -> Self {
        let support = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.0)
            .map(|(i, _)| i)
            .collect();
        Self { values, support }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A discretized forward operator: `m` sampled row functionals over a grid,
/// stored sparsely (compressed rows).
#[derive(Debug, Clone)]
pub struct ForwardOperator {
    grid: Arc<Grid>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    /// Per-node column sums, i.e. the sampled function `A* 1`.
    col_sums: Vec<f64>,
}

impl ForwardOperator {
    /// Builds an operator from sparse rows of `(node, value)` entries.
    /// Validates nonnegativity and rejects empty (all-zero) rows.
    pub fn from_sparse_rows(grid: Arc<Grid>, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = grid.len();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut col_sums = vec![0.0; n];
        row_ptr.push(0);
        for (i, mut row) in rows.into_iter().enumerate() {
            row.sort_by_key(|(j, _)| *j);
            let mut positive = false;
            for (j, v) in row {
                if j >= n {
                    return Err(Error::InvalidOperator(format!(
                        "row {i} references node {j} outside the grid"
                    )));
                }
                if v < 0.0 || v.is_nan() {
                    return Err(Error::InvalidOperator(format!(
                        "row {i} has negative entry {v} at node {j}"
                    )));
                }
                if v > 0.0 {
                    positive = true;
                    cols.push(j);
                    vals.push(v);
                    col_sums[j] += v;
                }
            }
            if !positive {
                return Err(Error::InvalidOperator(format!("row {i} is identically zero")));
            }
            row_ptr.push(cols.len());
        }
        Ok(Self {
            grid,
            row_ptr,
            cols,
            vals,
            col_sums,
        })
    }

    /// Builds an operator from dense rows (one value per node).
    pub fn from_dense_rows(grid: Arc<Grid>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = grid.len();
        let sparse = rows
            .into_iter()
            .map(|row| {
                if row.len() != n {
                    return Err(Error::LengthMismatch {
                        left: row.len(),
                        right: n,
                    });
                }
                Ok(row.into_iter().enumerate().collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_sparse_rows(grid, sparse)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn n_rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.grid.len()
    }

    /// Sampled value `a_i(node_j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row(i)
            .find(|(col, _)| *col == j)
            .map(|(_, v)| v)
            .unwrap_or(0.0)
    }

    /// Nonzero entries of row `i` as `(node, value)` pairs.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        self.cols[lo..hi]
            .iter()
            .copied()
            .zip(self.vals[lo..hi].iter().copied())
    }

    /// The sampled function `A* 1` (column sums), positive exactly on the
    /// nodes seen by at least one row.
    pub fn column_sums(&self) -> &[f64] {
        &self.col_sums
    }

    /// Applies the operator to a measure: `(A mu)_i = <mu, a_i>`.
    pub fn apply(&self, mu: &DiscreteMeasure) -> Result<Vec<f64>> {
        if !self.grid.compatible(mu.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(self.apply_raw(mu.masses()))
    }

    /// Plain matrix-vector product against a node vector, without the
    /// nonnegativity checks of [`apply`](Self::apply). Linear-algebra
    /// callers (norm estimation, primal-dual iterations) need signed input.
    pub fn apply_raw(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n_nodes(), "vector length must match grid");
        let m = self.n_rows();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            out.push(acc);
        }
        out
    }

    /// Adjoint: the sampled function `(A* lambda)(node_j) = sum_i lambda_i
    /// a_i(node_j)`. No quadrature weights are involved.
    pub fn adjoint(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        if lambda.len() != self.n_rows() {
            return Err(Error::LengthMismatch {
                left: lambda.len(),
                right: self.n_rows(),
            });
        }
        let mut out = vec![0.0; self.n_nodes()];
        for (i, &li) in lambda.iter().enumerate() {
            if li == 0.0 {
                continue;
            }
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[self.cols[k]] += li * self.vals[k];
            }
        }
        Ok(out)
    }
}

/// The two-detector model on `[0, 1]`: `a_0 = 1` and `a_1(x) = x`, sampled
/// on a uniform grid with trapezoidal weights.
pub fn make_toy_operator(n_nodes: usize) -> Result<ForwardOperator> {
    let grid = Grid::uniform_1d(n_nodes)?;
    let ones = vec![1.0; n_nodes];
    let coords = grid.nodes().iter().map(|p| p[0]).collect();
    ForwardOperator::from_dense_rows(grid, vec![ones, coords])
}

/// Gaussian kernel sampling operator: `a_i(x) = exp(-|x_i - x|^2 / (2 bw^2))`
/// for the given centers. Rows are strictly positive.
pub fn make_kernel_operator(
    grid: Arc<Grid>,
    centers: &[[f64; 2]],
    bandwidth: f64,
) -> Result<ForwardOperator> {
    if bandwidth <= 0.0 || !bandwidth.is_finite() {
        return Err(Error::InvalidOperator(format!(
            "bandwidth must be positive, got {bandwidth}"
        )));
    }
    let inv = 1.0 / (2.0 * bandwidth * bandwidth);
    let rows = centers
        .iter()
        .map(|c| {
            grid.nodes()
                .iter()
                .map(|p| {
                    let dx = c[0] - p[0];
                    let dy = c[1] - p[1];
                    (-(dx * dx + dy * dy) * inv).exp()
                })
                .collect()
        })
        .collect();
    ForwardOperator::from_dense_rows(grid, rows)
}

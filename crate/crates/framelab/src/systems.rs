//! Vector systems {φₙ}, the raw input everywhere else.
//!
//! Four concrete forms are supported: explicit coordinate vectors, sampled
//! functions with a quadrature rule, a positive-semidefinite index kernel
//! p(i,j), the monomials tⁿ on (0,1), and a covariance model over a finite
//! vertex set. Each form answers two questions: what is ⟨φᵢ, φⱼ⟩, and (when
//! the vectors are functions) what is φₙ(t).

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::spectral::SymMatrix;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("index {index} out of range for system of size {size}")]
    IndexError { index: usize, size: usize },
    #[error("pointwise evaluation is not supported for {kind} systems")]
    NotPointwise { kind: &'static str },
    #[error("point {t} is not a grid node")]
    OffGrid { t: f64 },
    #[error("shape mismatch: {message}")]
    ShapeError { message: String },
    #[error("invalid system data: {message}")]
    InvalidSystem { message: String },
}

/// Index kernel p(i,j), declared symmetric positive semidefinite by the
/// caller. `gramian::check_psd` is the runtime audit of that declaration.
#[derive(Clone)]
pub struct IndexKernel(Arc<dyn Fn(usize, usize) -> f64 + Send + Sync>);

impl IndexKernel {
    pub fn new(f: impl Fn(usize, usize) -> f64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn eval(&self, i: usize, j: usize) -> f64 {
        (self.0)(i, j)
    }
}

impl fmt::Debug for IndexKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("IndexKernel(..)")
    }
}

/// A family {φₙ} in one of five concrete forms.
#[derive(Debug, Clone)]
pub enum VectorSystem {
    /// n_vectors × ambient_dim coordinate rows; φₙ = row n.
    ExplicitFinite { coordinates: Vec<Vec<f64>> },
    /// `values[n][k]` = φₙ(t_k); weights define the inner product
    /// ⟨φᵢ,φⱼ⟩ = Σ_k w_k φᵢ(t_k) φⱼ(t_k).
    SampledFunctions {
        values: Vec<Vec<f64>>,
        grid: Vec<f64>,
        weights: Vec<f64>,
    },
    /// ⟨φᵢ,φⱼ⟩ = p(i,j); no pointwise representation.
    KernelDefined {
        kernel: IndexKernel,
        len: Option<usize>,
    },
    /// φₙ(t) = tⁿ on Ω = (0,1); ⟨φₙ,φₘ⟩ = 1/(n+m+1).
    HilbertMonomial,
    /// Random variables indexed by vertices; the covariance is the Gramian.
    CovarianceField { covariance: SymMatrix },
}

impl VectorSystem {
    pub fn explicit(coordinates: Vec<Vec<f64>>) -> Result<Self, SystemError> {
        if coordinates.is_empty() {
            return Err(SystemError::InvalidSystem {
                message: "no vectors given".into(),
            });
        }
        let d = coordinates[0].len();
        if d == 0 {
            return Err(SystemError::InvalidSystem {
                message: "ambient dimension is zero".into(),
            });
        }
        for (i, row) in coordinates.iter().enumerate() {
            if row.len() != d {
                return Err(SystemError::ShapeError {
                    message: format!("vector {i} has length {} but expected {d}", row.len()),
                });
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(SystemError::InvalidSystem {
                    message: format!("coordinate ({i},{j}) is not finite"),
                });
            }
        }
        Ok(Self::ExplicitFinite { coordinates })
    }

    pub fn sampled(
        values: Vec<Vec<f64>>,
        grid: Vec<f64>,
        weights: Vec<f64>,
    ) -> Result<Self, SystemError> {
        if values.is_empty() {
            return Err(SystemError::InvalidSystem {
                message: "no functions given".into(),
            });
        }
        let m = grid.len();
        if m == 0 || weights.len() != m {
            return Err(SystemError::ShapeError {
                message: format!("grid has {m} nodes but {} weights", weights.len()),
            });
        }
        if !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(SystemError::InvalidSystem {
                message: "grid must be strictly increasing".into(),
            });
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(SystemError::InvalidSystem {
                message: "quadrature weights must be non-negative".into(),
            });
        }
        for (n, row) in values.iter().enumerate() {
            if row.len() != m {
                return Err(SystemError::ShapeError {
                    message: format!("function {n} sampled at {} nodes, grid has {m}", row.len()),
                });
            }
        }
        Ok(Self::SampledFunctions {
            values,
            grid,
            weights,
        })
    }

    pub fn kernel_defined(
        f: impl Fn(usize, usize) -> f64 + Send + Sync + 'static,
        len: Option<usize>,
    ) -> Self {
        Self::KernelDefined {
            kernel: IndexKernel::new(f),
            len,
        }
    }

    pub fn hilbert_monomial() -> Self {
        Self::HilbertMonomial
    }

    pub fn covariance_field(covariance: SymMatrix) -> Self {
        Self::CovarianceField { covariance }
    }

    /// Number of vectors, `None` when the family is unbounded.
    pub fn len(&self) -> Option<usize> {
        match self {
            Self::ExplicitFinite { coordinates } => Some(coordinates.len()),
            Self::SampledFunctions { values, .. } => Some(values.len()),
            Self::KernelDefined { len, .. } => *len,
            Self::HilbertMonomial => None,
            Self::CovarianceField { covariance } => Some(covariance.dim()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Ambient dimension of an explicit system.
    pub fn ambient_dim(&self) -> Option<usize> {
        match self {
            Self::ExplicitFinite { coordinates } => Some(coordinates[0].len()),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::ExplicitFinite { .. } => "explicit",
            Self::SampledFunctions { .. } => "sampled",
            Self::KernelDefined { .. } => "kernel",
            Self::HilbertMonomial => "hilbert",
            Self::CovarianceField { .. } => "covariance",
        }
    }

    /// Short provenance tag for reports.
    pub fn id_tag(&self) -> String {
        match self {
            Self::ExplicitFinite { coordinates } => {
                format!(
                    "explicit(n={},d={})",
                    coordinates.len(),
                    coordinates[0].len()
                )
            }
            Self::SampledFunctions { values, grid, .. } => {
                format!("sampled(n={},nodes={})", values.len(), grid.len())
            }
            Self::KernelDefined { len, .. } => match len {
                Some(n) => format!("kernel(n={n})"),
                None => "kernel(unbounded)".into(),
            },
            Self::HilbertMonomial => "hilbert".into(),
            Self::CovarianceField { covariance } => format!("covariance(v={})", covariance.dim()),
        }
    }

    fn check_index(&self, i: usize) -> Result<(), SystemError> {
        match self.len() {
            Some(n) if i >= n => Err(SystemError::IndexError { index: i, size: n }),
            _ => Ok(()),
        }
    }
}

/// ⟨φᵢ, φⱼ⟩ for any system kind. Symmetric in (i, j).
pub fn inner_product(sys: &VectorSystem, i: usize, j: usize) -> Result<f64, SystemError> {
    sys.check_index(i)?;
    sys.check_index(j)?;
    Ok(match sys {
        VectorSystem::ExplicitFinite { coordinates } => coordinates[i]
            .iter()
            .zip(&coordinates[j])
            .map(|(a, b)| a * b)
            .sum(),
        VectorSystem::SampledFunctions {
            values, weights, ..
        } => values[i]
            .iter()
            .zip(&values[j])
            .zip(weights)
            .map(|((a, b), w)| w * a * b)
            .sum(),
        VectorSystem::KernelDefined { kernel, .. } => {
            // symmetrized so the contract holds even for sloppy callables
            0.5 * (kernel.eval(i, j) + kernel.eval(j, i))
        }
        VectorSystem::HilbertMonomial => 1.0 / ((i + j + 1) as f64),
        VectorSystem::CovarianceField { covariance } => covariance.at(i, j),
    })
}

/// Relative tolerance for matching a query point to a grid node.
const NODE_MATCH_TOL: f64 = 1e-12;

/// φₙ(t) for systems with a pointwise representation.
///
/// Sampled systems evaluate on grid nodes only (no interpolation); explicit
/// systems are read as functions on Ω = {0, .., d-1}.
pub fn evaluate(sys: &VectorSystem, n: usize, t: f64) -> Result<f64, SystemError> {
    sys.check_index(n)?;
    match sys {
        VectorSystem::ExplicitFinite { coordinates } => {
            let d = coordinates[0].len();
            let k = t.round();
            if (t - k).abs() > 1e-9 || k < 0.0 || (k as usize) >= d {
                return Err(SystemError::OffGrid { t });
            }
            Ok(coordinates[n][k as usize])
        }
        VectorSystem::SampledFunctions { values, grid, .. } => {
            let k = locate_node(grid, t).ok_or(SystemError::OffGrid { t })?;
            Ok(values[n][k])
        }
        VectorSystem::HilbertMonomial => Ok(t.powi(n as i32)),
        VectorSystem::KernelDefined { .. } => Err(SystemError::NotPointwise { kind: "kernel" }),
        VectorSystem::CovarianceField { .. } => {
            Err(SystemError::NotPointwise { kind: "covariance" })
        }
    }
}

/// True when the system kind supports pointwise evaluation.
pub fn is_pointwise(sys: &VectorSystem) -> bool {
    !matches!(
        sys,
        VectorSystem::KernelDefined { .. } | VectorSystem::CovarianceField { .. }
    )
}

fn locate_node(grid: &[f64], t: f64) -> Option<usize> {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (k, &g) in grid.iter().enumerate() {
        let d = (t - g).abs();
        if d < best_d {
            best_d = d;
            best = k;
        }
    }
    if best_d <= NODE_MATCH_TOL * (1.0 + t.abs()) {
        Some(best)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    Trapezoid,
    Simpson,
    GaussLegendre,
}

impl QuadratureKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "trapezoid" => Some(Self::Trapezoid),
            "simpson" => Some(Self::Simpson),
            "gauss-legendre" => Some(Self::GaussLegendre),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Trapezoid => "trapezoid",
            Self::Simpson => "simpson",
            Self::GaussLegendre => "gauss-legendre",
        }
    }
}

/// A named quadrature rule on an interval [a, b].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: usize,
}

impl QuadratureRule {
    pub fn new(kind: QuadratureKind, nodes: usize) -> Self {
        Self { kind, nodes }
    }

    /// Nodes and weights on [a, b]. Weights sum to b − a.
    pub fn nodes_weights(&self, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>), SystemError> {
        let valid = a.is_finite() && b.is_finite() && b > a;
        if !valid {
            return Err(SystemError::InvalidSystem {
                message: format!("empty integration interval [{a}, {b}]"),
            });
        }
        let n = self.nodes;
        match self.kind {
            QuadratureKind::Trapezoid => {
                if n < 2 {
                    return Err(SystemError::InvalidSystem {
                        message: "trapezoid rule needs at least 2 nodes".into(),
                    });
                }
                let h = (b - a) / (n - 1) as f64;
                let grid: Vec<f64> = (0..n).map(|k| a + h * k as f64).collect();
                let mut w = vec![h; n];
                w[0] = 0.5 * h;
                w[n - 1] = 0.5 * h;
                Ok((grid, w))
            }
            QuadratureKind::Simpson => {
                if n < 3 || n.is_multiple_of(2) {
                    return Err(SystemError::InvalidSystem {
                        message: "Simpson rule needs an odd node count >= 3".into(),
                    });
                }
                let h = (b - a) / (n - 1) as f64;
                let grid: Vec<f64> = (0..n).map(|k| a + h * k as f64).collect();
                let w: Vec<f64> = (0..n)
                    .map(|k| {
                        let c = if k == 0 || k == n - 1 {
                            1.0
                        } else if k % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        c * h / 3.0
                    })
                    .collect();
                Ok((grid, w))
            }
            QuadratureKind::GaussLegendre => {
                if n < 1 {
                    return Err(SystemError::InvalidSystem {
                        message: "Gauss-Legendre rule needs at least 1 node".into(),
                    });
                }
                let (x, w) = gauss_legendre(n);
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                let grid: Vec<f64> = x.iter().map(|&xi| mid + half * xi).collect();
                let weights: Vec<f64> = w.iter().map(|&wi| half * wi).collect();
                Ok((grid, weights))
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on Pₙ.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence: p1 = P_n(z), dp = P_n'(z)
            let mut p0 = 1.0;
            let mut p1 = z;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n == 1 {
        x[0] = 0.0;
        w[0] = 2.0;
    }
    if n % 2 == 1 && n > 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Build a sampled-function system whose inner product uses `rule`'s weights.
///
/// The rule's nodes on [grid.first, grid.last] must coincide with the given
/// grid; Gauss-Legendre grids are produced by the rule itself, so callers
/// normally obtain the grid from `QuadratureRule::nodes_weights` first.
pub fn make_sampled(
    values: Vec<Vec<f64>>,
    grid: Vec<f64>,
    rule: QuadratureRule,
) -> Result<VectorSystem, SystemError> {
    make_sampled_on(values, grid, rule, None)
}

/// As `make_sampled`, with an explicit integration domain (needed for
/// Gauss-Legendre, whose nodes do not include the interval endpoints).
pub fn make_sampled_on(
    values: Vec<Vec<f64>>,
    grid: Vec<f64>,
    rule: QuadratureRule,
    domain: Option<(f64, f64)>,
) -> Result<VectorSystem, SystemError> {
    if grid.is_empty() {
        return Err(SystemError::ShapeError {
            message: "empty grid".into(),
        });
    }
    if rule.nodes != grid.len() {
        return Err(SystemError::ShapeError {
            message: format!("rule has {} nodes, grid has {}", rule.nodes, grid.len()),
        });
    }
    let (a, b) = match domain {
        Some(d) => d,
        None => {
            if rule.kind == QuadratureKind::GaussLegendre {
                return Err(SystemError::InvalidSystem {
                    message: "Gauss-Legendre sampling needs an explicit domain".into(),
                });
            }
            (grid[0], grid[grid.len() - 1])
        }
    };
    let (nodes, weights) = rule.nodes_weights(a, b)?;
    for (k, (&g, &nk)) in grid.iter().zip(&nodes).enumerate() {
        if (g - nk).abs() > NODE_MATCH_TOL * (1.0 + nk.abs()) {
            return Err(SystemError::ShapeError {
                message: format!("grid node {k} is {g}, rule expects {nk}"),
            });
        }
    }
    VectorSystem::sampled(values, grid, weights)
}

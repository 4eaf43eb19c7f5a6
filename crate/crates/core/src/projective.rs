//! Projectors and projective decompositions of the identity (PDIs).
//!
//! A [`Pdi`] is an ordered list of mutually orthogonal, nonzero projectors
//! summing to the identity; it is the sample space that the rest of the crate
//! assigns probabilities on. Conjunction of two projectors is only defined
//! when they commute: a commuting pair whose product vanishes yields the zero
//! projector (a property that is always false), while a noncommuting pair is an
//! error because there is no such property at all.

use std::cmp::Ordering;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::numerics::{
    hermitian_eigendecomposition, operator_norm, ComplexMatrix, Ket, NumericsError, Tolerances, C64,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectiveError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("not a projector: {0}")]
    NotAProjector(String),
    #[error(
        "conjunction is meaningless: the projectors do not commute (‖PQ − QP‖ = {commutator_norm:.6}); \
         this is not the zero (always false) property"
    )]
    IncompatibleProjectors { commutator_norm: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid PDI: {0}")]
    InvalidPdi(String),
}

/// A Hermitian idempotent matrix. Rank zero is allowed and denotes the zero
/// projector, which only arises from conjunctions.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl Projector {
    /// Validates Hermiticity, idempotency and an integral trace, all in the
    /// Frobenius norm against `tol.algebraic`.
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self, ProjectiveError> {
        matrix.ensure_square()?;
        let defect = matrix.hermiticity_defect();
        if defect > tol.algebraic {
            return Err(ProjectiveError::NotAProjector(format!(
                "not Hermitian (‖P − P†‖ = {defect:.3e})"
            )));
        }
        let matrix = matrix.hermitian_part();
        let square = matrix.matmul(&matrix)?;
        let idem = square.frobenius_distance(&matrix);
        if idem > tol.algebraic {
            return Err(ProjectiveError::NotAProjector(format!(
                "not idempotent (‖P² − P‖ = {idem:.3e})"
            )));
        }
        let trace = matrix.trace().re;
        let rank = trace.round();
        if (trace - rank).abs() > tol.algebraic {
            return Err(ProjectiveError::NotAProjector(format!(
                "trace {trace} is not an integer"
            )));
        }
        Ok(Self {
            matrix,
            rank: rank as usize,
        })
    }

    /// Trusted constructor for matrices produced by exact projector algebra.
    fn from_parts(matrix: ComplexMatrix) -> Self {
        let matrix = matrix.hermitian_part();
        let rank = matrix.trace().re.round().max(0.0) as usize;
        Self { matrix, rank }
    }

    /// A sum of orthogonal blocks whose rank is already known.
    pub(crate) fn from_sum(matrix: ComplexMatrix, rank: usize) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
            rank,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
            rank: dim,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// Row-major index of the first entry with magnitude above `tol`.
    pub fn first_pivot(&self, tol: f64) -> Option<usize> {
        self.matrix.as_slice().iter().position(|z| z.norm() > tol)
    }
}

/// [φ] = |φ⟩⟨φ|, a rank-one projector.
pub fn projector_from_ket(phi: &Ket) -> Projector {
    Projector {
        matrix: phi.dyad(),
        rank: 1,
    }
}

/// Fallible variant for raw amplitudes that may not be normalized.
pub fn projector_from_amplitudes(amplitudes: Vec<C64>) -> Result<Projector, ProjectiveError> {
    let ket = Ket::new(amplitudes)?;
    Ok(projector_from_ket(&ket))
}

/// I − P
pub fn negation(p: &Projector) -> Projector {
    let dim = p.dim();
    Projector {
        matrix: &ComplexMatrix::identity(dim) - &p.matrix,
        rank: dim - p.rank,
    }
}

/// ‖PQ − QP‖ in the spectral norm.
pub fn commutator_norm(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64, ProjectiveError> {
    if p.dim() != q.dim() {
        return Err(ProjectiveError::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(operator_norm(&p.commutator(q)?))
}

/// True iff the spectral norm of PQ − QP is within `tol.algebraic`.
pub fn commutes(p: &Projector, q: &Projector, tol: &Tolerances) -> Result<bool, ProjectiveError> {
    Ok(commutator_norm(&p.matrix, &q.matrix)? <= tol.algebraic)
}

/// "P AND Q" as the product PQ, defined only for commuting projectors.
pub fn conjunction(
    p: &Projector,
    q: &Projector,
    tol: &Tolerances,
) -> Result<Projector, ProjectiveError> {
    let commutator_norm = commutator_norm(&p.matrix, &q.matrix)?;
    if commutator_norm > tol.algebraic {
        return Err(ProjectiveError::IncompatibleProjectors { commutator_norm });
    }
    Ok(Projector::from_parts(p.matrix.matmul(&q.matrix)?))
}

/// Hermitian operator with a spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self, ProjectiveError> {
        matrix.ensure_square()?;
        let defect = matrix.hermiticity_defect();
        if defect > tol.algebraic {
            return Err(NumericsError::NotHermitian { defect }.into());
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Label attached to a PDI block.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockLabel {
    /// Eigenvalue of the observable the block was taken from.
    Value(f64),
    Name(String),
    /// Block `(j, k)` of a common refinement: the product P_j Q_k.
    Pair(usize, usize),
}

impl fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockLabel::Value(v) => write!(f, "{v}"),
            BlockLabel::Name(s) => f.write_str(s),
            BlockLabel::Pair(j, k) => write!(f, "({j},{k})"),
        }
    }
}

/// Structural identity of a framework: a digest of its blocks in canonical
/// order, so equal PDIs built separately compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameworkId(String);

impl FrameworkId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FrameworkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Resolution of the grid used to canonicalize matrix entries.
const CANONICAL_GRID: f64 = 1e8;

fn quantize(x: f64) -> i64 {
    (x * CANONICAL_GRID).round() as i64
}

fn canonical_key(p: &Projector) -> Vec<i64> {
    p.matrix
        .as_slice()
        .iter()
        .flat_map(|z| [quantize(z.re), quantize(z.im)])
        .collect()
}

/// A projective decomposition of the identity.
#[derive(Debug, Clone)]
pub struct Pdi {
    dim: usize,
    blocks: Vec<Projector>,
    labels: Option<Vec<BlockLabel>>,
    id: FrameworkId,
    // canonical_position[j] = position of block j in canonical order
    canonical_position: Vec<usize>,
}

impl PartialEq for Pdi {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Pdi {
    /// Validates block count, dimensions, nonzero rank, pairwise orthogonality
    /// (‖P_j P_k‖_F) and completeness (‖Σ P_j − I‖_F) against `tol.algebraic`.
    /// Blocks keep the order given.
    pub fn new(
        blocks: Vec<Projector>,
        labels: Option<Vec<BlockLabel>>,
        tol: &Tolerances,
    ) -> Result<Self, ProjectiveError> {
        let dim = blocks
            .first()
            .map(Projector::dim)
            .ok_or_else(|| ProjectiveError::InvalidPdi("no blocks".into()))?;
        if let Some(labels) = &labels {
            if labels.len() != blocks.len() {
                return Err(ProjectiveError::InvalidPdi(format!(
                    "{} labels for {} blocks",
                    labels.len(),
                    blocks.len()
                )));
            }
        }
        for (j, b) in blocks.iter().enumerate() {
            if b.dim() != dim {
                return Err(ProjectiveError::DimensionMismatch {
                    left: dim,
                    right: b.dim(),
                });
            }
            if b.is_zero() {
                return Err(ProjectiveError::InvalidPdi(format!("block {j} is zero")));
            }
        }
        for j in 0..blocks.len() {
            for k in (j + 1)..blocks.len() {
                let overlap = blocks[j].matrix.matmul(&blocks[k].matrix)?.frobenius_norm();
                if overlap > tol.algebraic {
                    return Err(ProjectiveError::InvalidPdi(format!(
                        "blocks {j} and {k} are not orthogonal (‖P_j P_k‖ = {overlap:.3e})"
                    )));
                }
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for b in &blocks {
            sum = &sum + &b.matrix;
        }
        let completeness = sum.frobenius_distance(&ComplexMatrix::identity(dim));
        if completeness > tol.algebraic {
            return Err(ProjectiveError::InvalidPdi(format!(
                "blocks do not sum to the identity (‖Σ P − I‖ = {completeness:.3e})"
            )));
        }
        Ok(Self::assemble(dim, blocks, labels))
    }

    fn assemble(dim: usize, blocks: Vec<Projector>, labels: Option<Vec<BlockLabel>>) -> Self {
        let keys: Vec<Vec<i64>> = blocks.iter().map(canonical_key).collect();
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut canonical_position = vec![0; blocks.len()];
        for (pos, &j) in order.iter().enumerate() {
            canonical_position[j] = pos;
        }
        let mut hasher = Sha256::new();
        hasher.update((dim as u64).to_le_bytes());
        hasher.update((blocks.len() as u64).to_le_bytes());
        for &j in &order {
            for q in &keys[j] {
                hasher.update(q.to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        let id = FrameworkId(hex::encode(&digest[..12]));
        Self {
            dim,
            blocks,
            labels,
            id,
            canonical_position,
        }
    }

    /// The trivial framework {I}.
    pub fn trivial(dim: usize) -> Self {
        Self::assemble(dim, vec![Projector::identity(dim)], None)
    }

    /// Rank-one PDI from an orthonormal basis.
    pub fn from_basis(basis: &[Ket], tol: &Tolerances) -> Result<Self, ProjectiveError> {
        Self::new(basis.iter().map(projector_from_ket).collect(), None, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Projector] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> Option<&Projector> {
        self.blocks.get(j)
    }

    pub fn labels(&self) -> Option<&[BlockLabel]> {
        self.labels.as_deref()
    }

    pub fn label(&self, j: usize) -> Option<&BlockLabel> {
        self.labels.as_ref().and_then(|l| l.get(j))
    }

    pub fn with_labels(mut self, labels: Vec<BlockLabel>) -> Result<Self, ProjectiveError> {
        if labels.len() != self.blocks.len() {
            return Err(ProjectiveError::InvalidPdi(format!(
                "{} labels for {} blocks",
                labels.len(),
                self.blocks.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn id(&self) -> &FrameworkId {
        &self.id
    }

    /// Position of block `j` when the blocks are sorted canonically.
    pub fn canonical_position(&self, j: usize) -> usize {
        self.canonical_position[j]
    }

    /// Inverse of [`Pdi::canonical_position`].
    pub fn block_at_canonical(&self, pos: usize) -> usize {
        self.canonical_position
            .iter()
            .position(|&p| p == pos)
            .expect("canonical position out of range")
    }

    /// Largest of ‖Σ P_j − I‖_F, ‖P_j − P_j†‖_F, ‖P_j² − P_j‖_F and
    /// ‖P_j P_k‖_F over all blocks and pairs.
    pub fn max_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut sum = ComplexMatrix::zeros(self.dim, self.dim);
        for (j, b) in self.blocks.iter().enumerate() {
            let m = &b.matrix;
            sum = &sum + m;
            worst = worst.max(m.hermiticity_defect());
            worst = worst.max((m * m).frobenius_distance(m));
            for other in &self.blocks[j + 1..] {
                worst = worst.max((m * &other.matrix).frobenius_norm());
            }
        }
        worst.max(sum.frobenius_distance(&ComplexMatrix::identity(self.dim)))
    }
}

/// The PDI of an observable's spectral representation.
///
/// Eigenvalues are grouped by single-linkage clustering: sorted descending,
/// a new block starts wherever consecutive eigenvalues differ by more than
/// `tol.degeneracy`. Each block is labeled with the mean of its eigenvalues,
/// and blocks come out in descending label order.
pub fn spectral_pdi(a: &Observable, tol: &Tolerances) -> Result<Pdi, ProjectiveError> {
    let eig = hermitian_eigendecomposition(&a.matrix, tol)?;
    let dim = a.matrix.dim();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in 0..eig.values.len() {
        match groups.last_mut() {
            Some(g) if eig.values[*g.last().unwrap()] - eig.values[k] <= tol.degeneracy => {
                g.push(k)
            }
            _ => groups.push(vec![k]),
        }
    }
    let mut entries: Vec<(f64, Projector)> = Vec::with_capacity(groups.len());
    for group in &groups {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for &k in group {
            m = &m + &eig.vectors[k].dyad();
        }
        let projector = tidy_projector(m, group.len(), tol)?;
        let label = group.iter().map(|&k| eig.values[k]).sum::<f64>() / group.len() as f64;
        entries.push((label, projector));
    }
    entries.sort_by(|(la, pa), (lb, pb)| {
        lb.total_cmp(la).then_with(|| {
            let ka = pa.first_pivot(tol.algebraic).unwrap_or(usize::MAX);
            let kb = pb.first_pivot(tol.algebraic).unwrap_or(usize::MAX);
            ka.cmp(&kb)
        })
    });
    let (labels, blocks): (Vec<f64>, Vec<Projector>) = entries.into_iter().unzip();
    Pdi::new(
        blocks,
        Some(labels.into_iter().map(BlockLabel::Value).collect()),
        tol,
    )
}

/// Re-symmetrizes a summed eigenprojector and, if it drifted from
/// idempotency, replaces it with the span of its eigenvectors above 1/2.
fn tidy_projector(
    m: ComplexMatrix,
    expected_rank: usize,
    tol: &Tolerances,
) -> Result<Projector, ProjectiveError> {
    let m = m.hermitian_part();
    let idem = (&m * &m).frobenius_distance(&m);
    if idem <= tol.algebraic {
        return Ok(Projector {
            matrix: m,
            rank: expected_rank,
        });
    }
    let eig = hermitian_eigendecomposition(&m, tol)?;
    let dim = m.dim();
    let mut p = ComplexMatrix::zeros(dim, dim);
    let mut rank = 0;
    for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
        if *lambda > 0.5 {
            p = &p + &v.dyad();
            rank += 1;
        }
    }
    Ok(Projector {
        matrix: p.hermitian_part(),
        rank,
    })
}

/// Total order on projectors by their quantized entries, the same order used
/// for framework identity.
pub fn canonical_cmp(a: &Projector, b: &Projector) -> Ordering {
    canonical_key(a).cmp(&canonical_key(b))
}

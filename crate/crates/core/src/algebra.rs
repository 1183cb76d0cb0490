//! Finite-dimensional unital associative algebras given by structure constants.

use thiserror::Error;

use crate::derivations::LinearMap;
use crate::linalg::{check_fields, LinalgError, Matrix, RowReducer};
use crate::scalar::{FieldSpec, Scalar};

/// Coordinates of an algebra element in the algebra's basis.
pub type AlgebraElement = Vec<Scalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("structure constant index ({i}, {j}, {k}) out of range for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("not associative: (b{i} b{j}) b{k} != b{i} (b{j} b{k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("unit law fails on the {side} of basis element b{index}")]
    UnitLaw { index: usize, side: Side },
    #[error("algebras must have positive dimension")]
    ZeroDimension,
    #[error("change of basis matrix is singular")]
    SingularBasisChange,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// Characteristic classification used to gate theorem verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacteristicClass {
    Zero,
    OddPrime(u64),
    Two,
}

impl CharacteristicClass {
    pub fn of(field: FieldSpec) -> Self {
        match field.characteristic() {
            0 => CharacteristicClass::Zero,
            2 => CharacteristicClass::Two,
            p => CharacteristicClass::OddPrime(p),
        }
    }

    /// Fields of characteristic other than 2 are 2-torsion free.
    pub fn is_two_torsion_free(&self) -> bool {
        !matches!(self, CharacteristicClass::Two)
    }
}

/// A unital associative algebra with basis `b_0 .. b_{dim-1}` and
/// `b_i b_j = Σ_k c[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureAlgebra {
    field: FieldSpec,
    dim: usize,
    structure: Vec<Scalar>,
    // Nonzero (k, c[i][j][k]) for each (i, j), indexed by i * dim + j.
    sparse: Vec<Vec<(usize, Scalar)>>,
    unit: AlgebraElement,
    labels: Option<Vec<String>>,
}

impl StructureAlgebra {
    /// Builds an algebra from a dense `dim³` tensor (index `(i·dim + j)·dim + k`)
    /// after checking associativity and the unit laws on all basis elements.
    pub fn new(
        field: FieldSpec,
        dim: usize,
        structure: Vec<Scalar>,
        unit: AlgebraElement,
    ) -> Result<Self, AlgebraError> {
        let alg = Self::new_unchecked(field, dim, structure, unit)?;
        alg.check_unit()?;
        alg.check_associative()?;
        Ok(alg)
    }

    /// Builds an algebra from sparse `(i, j, k, value)` entries; repeated
    /// entries are summed.
    pub fn from_sparse(
        field: FieldSpec,
        dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
        unit: AlgebraElement,
    ) -> Result<Self, AlgebraError> {
        let mut structure = vec![field.zero(); dim * dim * dim];
        for (i, j, k, v) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(AlgebraError::IndexOutOfRange {
                    i: *i,
                    j: *j,
                    k: *k,
                    dim,
                });
            }
            check_fields(field, std::slice::from_ref(v))?;
            structure[(i * dim + j) * dim + k] = &structure[(i * dim + j) * dim + k] + v;
        }
        Self::new(field, dim, structure, unit)
    }

    /// Shape checks only; used when the caller validates separately.
    pub(crate) fn new_unchecked(
        field: FieldSpec,
        dim: usize,
        structure: Vec<Scalar>,
        unit: AlgebraElement,
    ) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if structure.len() != dim * dim * dim {
            return Err(AlgebraError::Shape(format!(
                "structure tensor has {} entries, expected {}",
                structure.len(),
                dim * dim * dim
            )));
        }
        if unit.len() != dim {
            return Err(AlgebraError::Shape(format!(
                "unit has length {}, expected {dim}",
                unit.len()
            )));
        }
        check_fields(field, &structure)?;
        check_fields(field, &unit)?;
        let sparse = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let c = &structure[ij * dim + k];
                        (!c.is_zero()).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        Ok(StructureAlgebra {
            field,
            dim,
            structure,
            sparse,
            unit,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if labels.len() != self.dim {
            return Err(AlgebraError::Shape(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.unit
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero `(k, c[i][j][k])` pairs of the product `b_i b_j`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.sparse[i * self.dim + j]
    }

    /// Nonzero `(i, j, k, value)` entries in lexicographic order.
    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.product_terms(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn zero(&self) -> AlgebraElement {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> AlgebraElement {
        let mut v = self.zero();
        v[i] = self.field.one();
        v
    }

    fn check_element(&self, x: &[Scalar]) -> Result<(), AlgebraError> {
        if x.len() != self.dim {
            return Err(AlgebraError::Shape(format!(
                "element of length {} in an algebra of dimension {}",
                x.len(),
                self.dim
            )));
        }
        check_fields(self.field, x)?;
        Ok(())
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Result<AlgebraElement, AlgebraError> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.mul(x, y))
    }

    /// Bilinear extension of the structure tensor; shapes are the caller's job.
    pub(crate) fn mul(&self, x: &[Scalar], y: &[Scalar]) -> AlgebraElement {
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let xy = xi * yj;
                for (k, c) in self.product_terms(i, j) {
                    out[*k].add_mul_assign(c, &xy);
                }
            }
        }
        out
    }

    /// `b_i · y` for a basis element.
    pub(crate) fn mul_basis_left(&self, i: usize, y: &[Scalar]) -> AlgebraElement {
        let mut out = self.zero();
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (k, c) in self.product_terms(i, j) {
                out[*k].add_mul_assign(c, yj);
            }
        }
        out
    }

    /// `x · b_j` for a basis element.
    pub(crate) fn mul_basis_right(&self, x: &[Scalar], j: usize) -> AlgebraElement {
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, c) in self.product_terms(i, j) {
                out[*k].add_mul_assign(c, xi);
            }
        }
        out
    }

    fn check_unit(&self) -> Result<(), AlgebraError> {
        for i in 0..self.dim {
            let b = self.basis_vector(i);
            if self.mul(&self.unit, &b) != b {
                return Err(AlgebraError::UnitLaw {
                    index: i,
                    side: Side::Left,
                });
            }
            if self.mul(&b, &self.unit) != b {
                return Err(AlgebraError::UnitLaw {
                    index: i,
                    side: Side::Right,
                });
            }
        }
        Ok(())
    }

    /// First basis triple violating associativity, if any.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.mul_basis_right(&self.basis_vector(i), j);
                for k in 0..self.dim {
                    let left = self.mul_basis_right(&ij, k);
                    let jk = self.mul_basis_right(&self.basis_vector(j), k);
                    let right = self.mul_basis_left(i, &jk);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    fn check_associative(&self) -> Result<(), AlgebraError> {
        match self.associativity_violation() {
            Some((i, j, k)) => Err(AlgebraError::NotAssociative { i, j, k }),
            None => Ok(()),
        }
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_multiplication(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<_> = (0..self.dim)
            .map(|j| self.mul_basis_right(x, j))
            .collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square multiplication matrix")
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_multiplication(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<_> = (0..self.dim).map(|i| self.mul_basis_left(i, x)).collect();
        Matrix::from_columns(self.field, self.dim, &cols).expect("square multiplication matrix")
    }

    /// Basis of the center `{z : z b_i = b_i z for all i}`.
    pub fn center_basis(&self) -> Vec<AlgebraElement> {
        // Row block i: coefficient of z_l in (z b_i - b_i z)_k.
        let mut red = RowReducer::new(self.field, self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let row: Vec<Scalar> = (0..self.dim)
                    .map(|l| self.constant(l, i, k) - self.constant(i, l, k))
                    .collect();
                red.push(row);
            }
        }
        red.nullspace_basis()
    }

    /// The inner derivation `y ↦ xy − yx`.
    pub fn inner_derivation(&self, x: &[Scalar]) -> Result<LinearMap, AlgebraError> {
        self.check_element(x)?;
        let m = self
            .left_multiplication(x)
            .sub(&self.right_multiplication(x))?;
        Ok(LinearMap::new(m).expect("square map"))
    }

    pub fn characteristic_gate(&self) -> CharacteristicClass {
        CharacteristicClass::of(self.field)
    }

    /// The same algebra in the basis `b'_j = Σ_i P[i][j] b_i`.
    pub fn change_basis(&self, p: &Matrix) -> Result<StructureAlgebra, AlgebraError> {
        if p.rows() != self.dim || p.cols() != self.dim || p.field() != self.field {
            return Err(AlgebraError::Shape("change of basis must be dim x dim".into()));
        }
        let p_inv = p.inverse().ok_or(AlgebraError::SingularBasisChange)?;
        let n = self.dim;
        let new_basis: Vec<AlgebraElement> = (0..n).map(|j| p.column(j)).collect();
        let mut structure = Vec::with_capacity(n * n * n);
        for x in &new_basis {
            for y in &new_basis {
                structure.extend(p_inv.apply(&self.mul(x, y)));
            }
        }
        let unit = p_inv.apply(&self.unit);
        StructureAlgebra::new(self.field, n, structure, unit)
    }
}

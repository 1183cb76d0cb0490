//! Derivations, Jordan derivations and antiderivations of a structure algebra.
//!
//! A linear map `f` is stored as its coefficient matrix: column `j` holds the
//! coordinates of `f(b_j)`. The three defining identities are linear in `f`
//! for a fixed pair of basis elements, so each space is the nullspace of a
//! constraint system with `dim²` unknowns. The unknown for entry `(r, j)` sits
//! at index `j·dim + r` (column-major).
//!
//! The Jordan identity `f(x²) = f(x)x + xf(x)` is quadratic in `x`. Writing
//! `q(x)` for its defect, `q(Σ λ_i b_i) = Σ λ_i² q(b_i) + Σ_{i<j} λ_i λ_j p(b_i, b_j)`
//! where `p` is the polarization, so `q` vanishes identically iff `q(b_i) = 0`
//! and `p(b_i, b_j) = 0` for `i < j`. This holds in every characteristic,
//! including 2, and is what both the predicate and the solver check.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::linalg::{LinalgError, Matrix, RowReducer};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DerivationError {
    #[error("map is {rows}x{cols} but the algebra has dimension {dim}")]
    Shape { rows: usize, cols: usize, dim: usize },
    #[error("map over {map} applied to an algebra over {algebra}")]
    Field { map: FieldSpec, algebra: FieldSpec },
    #[error("subspaces live in different algebras")]
    AlgebraMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A square coefficient matrix; column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Result<Self, DerivationError> {
        if matrix.rows() != matrix.cols() {
            return Err(DerivationError::Shape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                dim: matrix.rows(),
            });
        }
        Ok(LinearMap { matrix })
    }

    pub fn zero(field: FieldSpec, dim: usize) -> Self {
        LinearMap {
            matrix: Matrix::zeros(field, dim, dim),
        }
    }

    pub fn identity(field: FieldSpec, dim: usize) -> Self {
        LinearMap {
            matrix: Matrix::identity(field, dim),
        }
    }

    /// Rebuilds a map from its column-major coordinate vector.
    pub fn from_vector(field: FieldSpec, dim: usize, v: &[Scalar]) -> Self {
        assert_eq!(v.len(), dim * dim, "vector length must be dim²");
        let cols: Vec<Vec<Scalar>> = v.chunks(dim).map(<[Scalar]>::to_vec).collect();
        LinearMap {
            matrix: Matrix::from_columns(field, dim, &cols).expect("consistent columns"),
        }
    }

    /// Builds a map from the images of the basis vectors.
    pub fn from_images(field: FieldSpec, images: &[Vec<Scalar>]) -> Result<Self, DerivationError> {
        let dim = images.len();
        Ok(LinearMap {
            matrix: Matrix::from_columns(field, dim, images)?,
        })
    }

    /// Column-major coordinates, the representation used by the solvers.
    pub fn to_vector(&self) -> Vec<Scalar> {
        (0..self.dim()).flat_map(|j| self.matrix.column(j)).collect()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    pub fn image(&self, j: usize) -> Vec<Scalar> {
        self.matrix.column(j)
    }

    pub fn apply(&self, x: &[Scalar]) -> Result<Vec<Scalar>, DerivationError> {
        Ok(self.matrix.mul_vec(x)?)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap, DerivationError> {
        Ok(LinearMap {
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap, DerivationError> {
        Ok(LinearMap {
            matrix: self.matrix.sub(&other.matrix)?,
        })
    }

    pub fn scale(&self, s: &Scalar) -> LinearMap {
        LinearMap {
            matrix: self.matrix.scale(s),
        }
    }

    fn check_against(&self, alg: &StructureAlgebra) -> Result<(), DerivationError> {
        if self.dim() != alg.dim() {
            return Err(DerivationError::Shape {
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
                dim: alg.dim(),
            });
        }
        if self.field() != alg.field() {
            return Err(DerivationError::Field {
                map: self.field(),
                algebra: alg.field(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// Which identity a subspace of maps is known to satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Derivation,
    Jordan,
    Antiderivation,
    Inner,
    Generic,
}

impl MapKind {
    pub fn name(&self) -> &'static str {
        match self {
            MapKind::Derivation => "derivation",
            MapKind::Jordan => "jordan-derivation",
            MapKind::Antiderivation => "antiderivation",
            MapKind::Inner => "inner-derivation",
            MapKind::Generic => "generic",
        }
    }
}

fn images(alg: &StructureAlgebra, f: &LinearMap) -> Vec<AlgebraElement> {
    (0..alg.dim()).map(|j| f.image(j)).collect()
}

/// `f(b_i b_j)` from precomputed images.
fn image_of_product(alg: &StructureAlgebra, imgs: &[AlgebraElement], i: usize, j: usize) -> AlgebraElement {
    let mut out = alg.zero();
    for (l, c) in alg.product_terms(i, j) {
        for (o, x) in out.iter_mut().zip(&imgs[*l]) {
            if !x.is_zero() {
                o.add_mul_assign(x, c);
            }
        }
    }
    out
}

fn add_into(acc: &mut [Scalar], x: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a = &*a + b;
    }
}

fn sub_into(acc: &mut [Scalar], x: &[Scalar]) {
    for (a, b) in acc.iter_mut().zip(x) {
        *a = &*a - b;
    }
}

/// Leibniz defect `f(b_i b_j) − f(b_i) b_j − b_i f(b_j)`.
fn leibniz_defect(alg: &StructureAlgebra, imgs: &[AlgebraElement], i: usize, j: usize) -> AlgebraElement {
    let mut d = image_of_product(alg, imgs, i, j);
    sub_into(&mut d, &alg.mul_basis_right(&imgs[i], j));
    sub_into(&mut d, &alg.mul_basis_left(i, &imgs[j]));
    d
}

/// Reversed Leibniz defect `f(b_i b_j) − f(b_j) b_i − b_j f(b_i)`.
fn anti_defect(alg: &StructureAlgebra, imgs: &[AlgebraElement], i: usize, j: usize) -> AlgebraElement {
    let mut d = image_of_product(alg, imgs, i, j);
    sub_into(&mut d, &alg.mul_basis_right(&imgs[j], i));
    sub_into(&mut d, &alg.mul_basis_left(j, &imgs[i]));
    d
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// First basis pair `(i, j)` violating the Leibniz rule.
pub fn derivation_witness(
    alg: &StructureAlgebra,
    f: &LinearMap,
) -> Result<Option<(usize, usize)>, DerivationError> {
    f.check_against(alg)?;
    let imgs = images(alg, f);
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            if !is_zero_vec(&leibniz_defect(alg, &imgs, i, j)) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// First basis pair `(i, j)` with `i ≤ j` where the Jordan identity fails:
/// `q(b_i) ≠ 0` when `i = j`, the polarized form `p(b_i, b_j) ≠ 0` otherwise.
pub fn jordan_witness(
    alg: &StructureAlgebra,
    f: &LinearMap,
) -> Result<Option<(usize, usize)>, DerivationError> {
    f.check_against(alg)?;
    let imgs = images(alg, f);
    let n = alg.dim();
    for i in 0..n {
        for j in i..n {
            let mut d = leibniz_defect(alg, &imgs, i, j);
            if i != j {
                add_into(&mut d, &leibniz_defect(alg, &imgs, j, i));
            }
            if !is_zero_vec(&d) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// First basis pair `(i, j)` violating `f(b_i b_j) = f(b_j) b_i + b_j f(b_i)`.
pub fn antiderivation_witness(
    alg: &StructureAlgebra,
    f: &LinearMap,
) -> Result<Option<(usize, usize)>, DerivationError> {
    f.check_against(alg)?;
    let imgs = images(alg, f);
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            if !is_zero_vec(&anti_defect(alg, &imgs, i, j)) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_derivation(alg: &StructureAlgebra, f: &LinearMap) -> Result<bool, DerivationError> {
    Ok(derivation_witness(alg, f)?.is_none())
}

pub fn is_jordan_derivation(alg: &StructureAlgebra, f: &LinearMap) -> Result<bool, DerivationError> {
    Ok(jordan_witness(alg, f)?.is_none())
}

pub fn is_antiderivation(alg: &StructureAlgebra, f: &LinearMap) -> Result<bool, DerivationError> {
    Ok(antiderivation_witness(alg, f)?.is_none())
}

/// `q(x) = f(x²) − f(x)x − xf(x)` at an arbitrary element.
pub fn jordan_defect(
    alg: &StructureAlgebra,
    f: &LinearMap,
    x: &[Scalar],
) -> Result<AlgebraElement, DerivationError> {
    f.check_against(alg)?;
    let x2 = alg.multiply(x, x).map_err(|_| DerivationError::Shape {
        rows: x.len(),
        cols: 1,
        dim: alg.dim(),
    })?;
    let fx = f.apply(x)?;
    let mut d = f.apply(&x2)?;
    sub_into(&mut d, &alg.mul(&fx, x));
    sub_into(&mut d, &alg.mul(x, &fx));
    Ok(d)
}

/// A subspace of linear maps on one algebra, held by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSubspace {
    field: FieldSpec,
    algebra_dim: usize,
    kind: MapKind,
    basis: Vec<LinearMap>,
}

impl MapSubspace {
    /// Wraps a spanning set, reducing it to the reduced row-echelon basis.
    pub fn spanned_by(
        field: FieldSpec,
        algebra_dim: usize,
        kind: MapKind,
        maps: &[LinearMap],
    ) -> Result<Self, DerivationError> {
        let mut red = RowReducer::new(field, algebra_dim * algebra_dim);
        for m in maps {
            if m.dim() != algebra_dim {
                return Err(DerivationError::AlgebraMismatch);
            }
            if m.field() != field {
                return Err(DerivationError::Field {
                    map: m.field(),
                    algebra: field,
                });
            }
            red.push(m.to_vector());
        }
        Ok(Self::from_reducer(field, algebra_dim, kind, &red))
    }

    fn from_reducer(field: FieldSpec, algebra_dim: usize, kind: MapKind, red: &RowReducer) -> Self {
        let basis = red
            .basis()
            .iter()
            .map(|v| LinearMap::from_vector(field, algebra_dim, v))
            .collect();
        MapSubspace {
            field,
            algebra_dim,
            kind,
            basis,
        }
    }

    pub fn zero(field: FieldSpec, algebra_dim: usize) -> Self {
        MapSubspace {
            field,
            algebra_dim,
            kind: MapKind::Generic,
            basis: Vec::new(),
        }
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn basis(&self) -> &[LinearMap] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    fn reducer(&self) -> RowReducer {
        let mut red = RowReducer::new(self.field, self.algebra_dim * self.algebra_dim);
        for m in &self.basis {
            red.push(m.to_vector());
        }
        red
    }

    fn check_compatible(&self, other: &MapSubspace) -> Result<(), DerivationError> {
        if self.algebra_dim != other.algebra_dim || self.field != other.field {
            return Err(DerivationError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, f: &LinearMap) -> Result<bool, DerivationError> {
        if f.dim() != self.algebra_dim || f.field() != self.field {
            return Err(DerivationError::AlgebraMismatch);
        }
        Ok(self.reducer().contains(&f.to_vector()))
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &MapSubspace) -> Result<bool, DerivationError> {
        self.check_compatible(other)?;
        let red = other.reducer();
        Ok(self.basis.iter().all(|m| red.contains(&m.to_vector())))
    }

    pub fn same_span(&self, other: &MapSubspace) -> Result<bool, DerivationError> {
        Ok(self.dimension() == other.dimension() && self.is_subspace_of(other)?)
    }

    pub fn sum(&self, other: &MapSubspace) -> Result<MapSubspace, DerivationError> {
        self.check_compatible(other)?;
        let mut red = self.reducer();
        for m in &other.basis {
            red.push(m.to_vector());
        }
        Ok(Self::from_reducer(self.field, self.algebra_dim, MapKind::Generic, &red))
    }

    /// Solves `Σ x_i u_i = Σ y_j v_j` and collects the common vectors.
    pub fn intersection(&self, other: &MapSubspace) -> Result<MapSubspace, DerivationError> {
        self.check_compatible(other)?;
        let n = self.algebra_dim * self.algebra_dim;
        let k1 = self.basis.len();
        let mut columns: Vec<Vec<Scalar>> = self.basis.iter().map(LinearMap::to_vector).collect();
        columns.extend(other.basis.iter().map(|m| {
            m.to_vector().iter().map(|x| -x).collect::<Vec<_>>()
        }));
        let system = Matrix::from_columns(self.field, n, &columns)?;
        let mut red = RowReducer::new(self.field, n);
        for sol in system.nullspace_basis() {
            let mut v = vec![self.field.zero(); n];
            for (x, u) in sol[..k1].iter().zip(&columns[..k1]) {
                if x.is_zero() {
                    continue;
                }
                for (acc, ui) in v.iter_mut().zip(u) {
                    acc.add_mul_assign(ui, x);
                }
            }
            red.push(v);
        }
        Ok(Self::from_reducer(self.field, self.algebra_dim, MapKind::Generic, &red))
    }
}

fn unknown(dim: usize, row: usize, col: usize) -> usize {
    col * dim + row
}

/// Adds the coefficient rows of the Leibniz defect at `(i, j)` into `rows`
/// (one row per output coordinate k), scaled by +1.
fn leibniz_rows(alg: &StructureAlgebra, i: usize, j: usize, rows: &mut [Vec<Scalar>]) {
    let n = alg.dim();
    // f(b_i b_j)_k = Σ_l c_ijl θ[k][l]
    for (l, c) in alg.product_terms(i, j) {
        for (k, row) in rows.iter_mut().enumerate() {
            let u = unknown(n, k, *l);
            row[u] = &row[u] + c;
        }
    }
    // (f(b_i) b_j)_k = Σ_r θ[r][i] c[r][j][k]
    for r in 0..n {
        for (k, c) in alg.product_terms(r, j) {
            let u = unknown(n, r, i);
            rows[*k][u] = &rows[*k][u] - c;
        }
    }
    // (b_i f(b_j))_k = Σ_r θ[r][j] c[i][r][k]
    for r in 0..n {
        for (k, c) in alg.product_terms(i, r) {
            let u = unknown(n, r, j);
            rows[*k][u] = &rows[*k][u] - c;
        }
    }
}

fn anti_rows(alg: &StructureAlgebra, i: usize, j: usize, rows: &mut [Vec<Scalar>]) {
    let n = alg.dim();
    for (l, c) in alg.product_terms(i, j) {
        for (k, row) in rows.iter_mut().enumerate() {
            let u = unknown(n, k, *l);
            row[u] = &row[u] + c;
        }
    }
    // (f(b_j) b_i)_k = Σ_r θ[r][j] c[r][i][k]
    for r in 0..n {
        for (k, c) in alg.product_terms(r, i) {
            let u = unknown(n, r, j);
            rows[*k][u] = &rows[*k][u] - c;
        }
    }
    // (b_j f(b_i))_k = Σ_r θ[r][i] c[j][r][k]
    for r in 0..n {
        for (k, c) in alg.product_terms(j, r) {
            let u = unknown(n, r, i);
            rows[*k][u] = &rows[*k][u] - c;
        }
    }
}

fn solve_constraints(
    alg: &StructureAlgebra,
    kind: MapKind,
    pairs: impl Iterator<Item = (usize, usize)>,
    fill: impl Fn(&StructureAlgebra, usize, usize, &mut [Vec<Scalar>]),
) -> MapSubspace {
    let n = alg.dim();
    let field = alg.field();
    let mut red = RowReducer::new(field, n * n);
    for (i, j) in pairs {
        let mut rows = vec![vec![field.zero(); n * n]; n];
        fill(alg, i, j, &mut rows);
        for row in rows {
            if red.rank() == n * n {
                break;
            }
            red.push(row);
        }
    }
    let basis = red
        .nullspace_basis()
        .iter()
        .map(|v| LinearMap::from_vector(field, n, v))
        .collect();
    MapSubspace {
        field,
        algebra_dim: n,
        kind,
        basis,
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

/// Der(A): nullspace of the linearized Leibniz rule over all basis pairs.
pub fn derivation_space(alg: &StructureAlgebra) -> MapSubspace {
    solve_constraints(alg, MapKind::Derivation, all_pairs(alg.dim()), leibniz_rows)
}

/// ADer(A): nullspace of the linearized reversed Leibniz rule.
pub fn antiderivation_space(alg: &StructureAlgebra) -> MapSubspace {
    solve_constraints(alg, MapKind::Antiderivation, all_pairs(alg.dim()), anti_rows)
}

/// JDer(A): diagonal plus polarized Jordan constraints on pairs `i ≤ j`.
pub fn jordan_derivation_space(alg: &StructureAlgebra) -> MapSubspace {
    let n = alg.dim();
    let pairs = (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)));
    solve_constraints(alg, MapKind::Jordan, pairs, |alg, i, j, rows| {
        leibniz_rows(alg, i, j, rows);
        if i != j {
            leibniz_rows(alg, j, i, rows);
        }
    })
}

/// Span of the inner derivations `ad(b_i)`.
pub fn inner_derivation_space(alg: &StructureAlgebra) -> MapSubspace {
    let maps: Vec<LinearMap> = (0..alg.dim())
        .map(|i| {
            alg.inner_derivation(&alg.basis_vector(i))
                .expect("basis vectors belong to the algebra")
        })
        .collect();
    MapSubspace::spanned_by(alg.field(), alg.dim(), MapKind::Inner, &maps)
        .expect("maps share the algebra")
}

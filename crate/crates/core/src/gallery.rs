//! Concrete algebras, Morita contexts and maps used as fixtures.

use thiserror::Error;

use crate::algebra::{AlgebraError, StructureAlgebra};
use crate::derivations::LinearMap;
use crate::gma::{Corner, GeneralizedMatrixAlgebra, GmaError};
use crate::linalg::{LinalgError, Matrix};
use crate::morita::{Bimodule, MoritaContext, MoritaError, Pairing, ValidationReport};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalleryError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("M and N must have equal dimensions, got {m} and {n}")]
    DimensionMismatch { m: usize, n: usize },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("action of group element {0} is not a unital algebra automorphism")]
    NotAutomorphism(usize),
    #[error("action is not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("constructed context fails {} identities", .0.violations.len())]
    InvalidContext(ValidationReport),
    #[error(transparent)]
    Morita(#[from] MoritaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gma(#[from] GmaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The field as a 1-dimensional algebra over itself.
pub fn ground_field(field: FieldSpec) -> StructureAlgebra {
    StructureAlgebra::from_sparse(field, 1, &[(0, 0, 0, field.one())], vec![field.one()])
        .expect("the ground field is an algebra")
}

/// `field^k` with componentwise product.
pub fn product_algebra(field: FieldSpec, k: usize) -> Result<StructureAlgebra, GalleryError> {
    if k == 0 {
        return Err(GalleryError::InvalidParameter("k must be at least 1".into()));
    }
    let entries: Vec<_> = (0..k).map(|i| (i, i, i, field.one())).collect();
    Ok(StructureAlgebra::from_sparse(field, k, &entries, vec![field.one(); k])?)
}

/// The full matrix algebra `M_n` with basis `e_ij` at index `i·n + j`.
pub fn matrix_algebra(field: FieldSpec, n: usize) -> Result<StructureAlgebra, GalleryError> {
    if n == 0 {
        return Err(GalleryError::InvalidParameter("n must be at least 1".into()));
    }
    let units: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    matrix_units_algebra(field, n, &units)
}

/// Upper triangular matrices `T_n`, basis `e_ij` (`i ≤ j`) in row-major order.
pub fn upper_triangular_algebra(field: FieldSpec, n: usize) -> Result<StructureAlgebra, GalleryError> {
    if n == 0 {
        return Err(GalleryError::InvalidParameter("n must be at least 1".into()));
    }
    matrix_units_algebra(field, n, &triangular_units(n))
}

fn triangular_units(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Span of the given matrix units, which must be closed under products.
fn matrix_units_algebra(
    field: FieldSpec,
    n: usize,
    units: &[(usize, usize)],
) -> Result<StructureAlgebra, GalleryError> {
    let index = |u: (usize, usize)| units.iter().position(|&v| v == u);
    let mut entries = Vec::new();
    for (x, &(i, j)) in units.iter().enumerate() {
        for (y, &(k, l)) in units.iter().enumerate() {
            if j == k {
                let z = index((i, l)).expect("units closed under products");
                entries.push((x, y, z, field.one()));
            }
        }
    }
    let mut unit = vec![field.zero(); units.len()];
    for i in 0..n {
        unit[index((i, i)).expect("diagonal units present")] = field.one();
    }
    let labels = units.iter().map(|(i, j)| format!("e{}{}", i + 1, j + 1)).collect();
    Ok(StructureAlgebra::from_sparse(field, units.len(), &entries, unit)?.with_labels(labels)?)
}

fn check_context(ctx: MoritaContext) -> Result<MoritaContext, GalleryError> {
    let report = ctx.validate();
    if report.is_valid() {
        Ok(ctx)
    } else {
        Err(GalleryError::InvalidContext(report))
    }
}

/// `T_n` as `[T_{n−1} F^{n−1}; 0 F]`: the last column is `M`, `N = 0`.
pub fn upper_triangular_context(n: usize, field: FieldSpec) -> Result<MoritaContext, GalleryError> {
    if n < 2 {
        return Err(GalleryError::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let k = n - 1;
    let a = upper_triangular_algebra(field, k)?;
    let units = triangular_units(k);
    // e_ij · c_l = δ_jl c_i; the field acts on the right by scalars.
    let left: Vec<_> = units
        .iter()
        .enumerate()
        .map(|(x, &(i, j))| (x, j, i, field.one()))
        .collect();
    let right: Vec<_> = (0..k).map(|m| (m, 0, m, field.one())).collect();
    let m = Bimodule::from_sparse(field, a.dim(), 1, k, &left, &right)?;
    let nm = Bimodule::zero(field, 1, a.dim());
    let da = a.dim();
    let ctx = MoritaContext::new(
        a,
        ground_field(field),
        m,
        nm,
        Pairing::zero(field, k, 0, da),
        Pairing::zero(field, 0, k, 1),
    )?;
    check_context(ctx)
}

/// `A = B = M = N = field` with `Φ(m, n) = s·mn` and `Ψ(n, m) = s·nm`.
pub fn s_deformed_m2(field: FieldSpec, s: &Scalar) -> Result<MoritaContext, GalleryError> {
    if s.field() != field {
        return Err(GalleryError::InvalidParameter(format!("s = {s} is not in {field}")));
    }
    let line = Bimodule::from_sparse(field, 1, 1, 1, &[(0, 0, 0, field.one())], &[(0, 0, 0, field.one())])?;
    let pairing = Pairing::from_sparse(field, 1, 1, 1, &[(0, 0, 0, s.clone())])?;
    let ctx = MoritaContext::new(
        ground_field(field),
        ground_field(field),
        line.clone(),
        line,
        pairing.clone(),
        pairing,
    )?;
    check_context(ctx)
}

/// The context with both pairings zero.
pub fn trivial_gma(
    a: StructureAlgebra,
    b: StructureAlgebra,
    m: Bimodule,
    n: Bimodule,
) -> Result<MoritaContext, GalleryError> {
    let field = a.field();
    let phi = Pairing::zero(field, m.dim(), n.dim(), a.dim());
    let psi = Pairing::zero(field, n.dim(), m.dim(), b.dim());
    check_context(MoritaContext::new(a, b, m, n, phi, psi)?)
}

/// The regular bimodule of an algebra over itself.
pub fn regular_bimodule(alg: &StructureAlgebra) -> Bimodule {
    let d = alg.dim();
    let entries = alg.sparse_entries();
    Bimodule::from_sparse(alg.field(), d, d, d, &entries, &entries).expect("structure constants fit")
}

/// Sends `(a, m, n, b)` to `(0, x·m + y·ι(n), z·ι⁻¹(m) + w·n, 0)` where `ι`
/// identifies the coordinates of `N` and `M`.
fn off_diagonal_map(g: &GeneralizedMatrixAlgebra, coeffs: [i64; 4]) -> Result<LinearMap, GalleryError> {
    let (dm, dn) = (g.block_dim(Corner::M), g.block_dim(Corner::N));
    if dm != dn {
        return Err(GalleryError::DimensionMismatch { m: dm, n: dn });
    }
    let field = g.field();
    let [x, y, z, w] = coeffs.map(|c| field.from_i64(c));
    let (om, on) = (g.offset(Corner::M), g.offset(Corner::N));
    let mut mat = Matrix::zeros(field, g.dim(), g.dim());
    for i in 0..dm {
        mat.set(om + i, om + i, x.clone());
        mat.set(om + i, on + i, y.clone());
        mat.set(on + i, om + i, z.clone());
        mat.set(on + i, on + i, w.clone());
    }
    Ok(LinearMap::new(mat).expect("square"))
}

/// `(a, m, n, b) ↦ (0, m + n, m − n, 0)`.
pub fn gamma_jord(g: &GeneralizedMatrixAlgebra) -> Result<LinearMap, GalleryError> {
    off_diagonal_map(g, [1, 1, 1, -1])
}

/// `(a, m, n, b) ↦ (0, m, −n, 0)`.
pub fn theta1(g: &GeneralizedMatrixAlgebra) -> Result<LinearMap, GalleryError> {
    off_diagonal_map(g, [1, 0, 0, -1])
}

/// `(a, m, n, b) ↦ (0, n, m, 0)`.
pub fn theta2(g: &GeneralizedMatrixAlgebra) -> Result<LinearMap, GalleryError> {
    off_diagonal_map(g, [0, 1, 1, 0])
}

/// A finite group acting on an algebra by automorphisms `σ_g`, with
/// `σ_g σ_h = σ_{gh}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
    matrices: Vec<Matrix>,
}

impl GroupAction {
    /// `table[g][h]` is the index of `gh`; `matrices[g]` is `σ_g` in the
    /// algebra's basis (column `j` = `σ_g(b_j)`).
    pub fn new(alg: &StructureAlgebra, table: Vec<Vec<usize>>, matrices: Vec<Matrix>) -> Result<Self, GalleryError> {
        let order = table.len();
        if order == 0 || table.iter().any(|row| row.len() != order || row.iter().any(|&x| x >= order)) {
            return Err(GalleryError::NotAGroup("multiplication table is not square".into()));
        }
        if matrices.len() != order {
            return Err(GalleryError::InvalidParameter(format!(
                "{} action matrices for a group of order {order}",
                matrices.len()
            )));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| GalleryError::NotAGroup("no identity element".into()))?;
        for g in 0..order {
            for h in 0..order {
                for k in 0..order {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return Err(GalleryError::NotAGroup(format!("not associative at ({g}, {h}, {k})")));
                    }
                }
            }
        }
        let inverses = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| table[g][h] == identity)
                    .ok_or_else(|| GalleryError::NotAGroup(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let d = alg.dim();
        for (g, s) in matrices.iter().enumerate() {
            if s.rows() != d || s.cols() != d || s.field() != alg.field() {
                return Err(GalleryError::NotAutomorphism(g));
            }
            if &s.apply(alg.unit()) != alg.unit() {
                return Err(GalleryError::NotAutomorphism(g));
            }
            for i in 0..d {
                for j in 0..d {
                    let lhs = s.apply(&alg.mul(&alg.basis_vector(i), &alg.basis_vector(j)));
                    if lhs != alg.mul(&s.column(i), &s.column(j)) {
                        return Err(GalleryError::NotAutomorphism(g));
                    }
                }
            }
        }
        for g in 0..order {
            for h in 0..order {
                if matrices[g].mul(&matrices[h])? != matrices[table[g][h]] {
                    return Err(GalleryError::NotHomomorphism(g, h));
                }
            }
        }
        Ok(GroupAction {
            table,
            identity,
            inverses,
            matrices,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }
}

/// `C2` swapping the two factors of `field × field`.
pub fn c2_swap(field: FieldSpec) -> Result<(StructureAlgebra, GroupAction), GalleryError> {
    let a = product_algebra(field, 2)?;
    let swap = Matrix::from_i64(field, &[&[0, 1], &[1, 0]]);
    let action = GroupAction::new(&a, vec![vec![0, 1], vec![1, 0]], vec![Matrix::identity(field, 2), swap])?;
    Ok((a, action))
}

/// The trivial group acting on `field × field`.
pub fn trivial_group(field: FieldSpec) -> Result<(StructureAlgebra, GroupAction), GalleryError> {
    let a = product_algebra(field, 2)?;
    let action = GroupAction::new(&a, vec![vec![0]], vec![Matrix::identity(field, 2)])?;
    Ok((a, action))
}

/// The context `(A^G, A∗G, A, A, Φ, Ψ)` of a finite group acting on `A`:
/// `A∗G` has basis `b_i g` at index `g·dim A + i` and product
/// `ag · bh = a σ_g(b) gh`; `M = A` with `x · ag = σ_{g⁻¹}(x a)`;
/// `N = A` with `ag · x = a σ_g(x)`; `Φ(x, y) = Σ_g σ_g(xy)` and
/// `Ψ(x, y) = Σ_g x σ_g(y) g`.
pub fn skew_group_context(a: &StructureAlgebra, action: &GroupAction) -> Result<MoritaContext, GalleryError> {
    let field = a.field();
    let d = a.dim();
    let order = action.order();

    // Fixed subalgebra: common kernel of σ_g − 1.
    let mut stacked = Vec::new();
    for g in 0..order {
        let diff = action.matrix(g).sub(&Matrix::identity(field, d))?;
        for r in 0..d {
            stacked.push(diff.row(r).to_vec());
        }
    }
    let fixed_basis = Matrix::from_rows(field, stacked)?.nullspace_basis();
    let r = fixed_basis.len();
    let embed = Matrix::from_columns(field, d, &fixed_basis)?;
    let coords = |x: &[Scalar]| -> Vec<Scalar> {
        embed
            .solve(x)
            .expect("shapes agree")
            .expect("element lies in the fixed subalgebra")
    };
    let mut fixed_entries = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let prod = coords(&a.mul(&fixed_basis[i], &fixed_basis[j]));
            for (k, c) in prod.into_iter().enumerate() {
                if !c.is_zero() {
                    fixed_entries.push((i, j, k, c));
                }
            }
        }
    }
    let fixed = StructureAlgebra::from_sparse(field, r, &fixed_entries, coords(a.unit()))?;

    // Skew group algebra.
    let sd = d * order;
    let skew_index = |g: usize, i: usize| g * d + i;
    let mut skew_entries = Vec::new();
    for g in 0..order {
        for i in 0..d {
            for h in 0..order {
                for j in 0..d {
                    let prod = a.mul(&a.basis_vector(i), &action.matrix(g).column(j));
                    let gh = action.table[g][h];
                    for (k, c) in prod.into_iter().enumerate() {
                        if !c.is_zero() {
                            skew_entries.push((skew_index(g, i), skew_index(h, j), skew_index(gh, k), c));
                        }
                    }
                }
            }
        }
    }
    let mut skew_unit = vec![field.zero(); sd];
    for (i, c) in a.unit().iter().enumerate() {
        skew_unit[skew_index(action.identity, i)] = c.clone();
    }
    let skew = StructureAlgebra::from_sparse(field, sd, &skew_entries, skew_unit)?;

    let sparse = |v: Vec<Scalar>, push: &mut dyn FnMut(usize, Scalar)| {
        for (k, c) in v.into_iter().enumerate() {
            if !c.is_zero() {
                push(k, c);
            }
        }
    };

    // M = A: left A^G by multiplication, right A∗G by x · (b_j g) = σ_{g⁻¹}(x b_j).
    let mut m_left = Vec::new();
    for i in 0..r {
        for x in 0..d {
            sparse(a.mul(&fixed_basis[i], &a.basis_vector(x)), &mut |k, c| m_left.push((i, x, k, c)));
        }
    }
    let mut m_right = Vec::new();
    for x in 0..d {
        for g in 0..order {
            let inv = action.matrix(action.inverses[g]);
            for j in 0..d {
                let v = inv.apply(&a.mul(&a.basis_vector(x), &a.basis_vector(j)));
                sparse(v, &mut |k, c| m_right.push((x, skew_index(g, j), k, c)));
            }
        }
    }
    let m = Bimodule::from_sparse(field, r, sd, d, &m_left, &m_right)?;

    // N = A: left A∗G by (b_j g) · x = b_j σ_g(x), right A^G by multiplication.
    let mut n_left = Vec::new();
    for g in 0..order {
        for j in 0..d {
            for x in 0..d {
                let v = a.mul(&a.basis_vector(j), &action.matrix(g).column(x));
                sparse(v, &mut |k, c| n_left.push((skew_index(g, j), x, k, c)));
            }
        }
    }
    let mut n_right = Vec::new();
    for x in 0..d {
        for i in 0..r {
            sparse(a.mul(&a.basis_vector(x), &fixed_basis[i]), &mut |k, c| n_right.push((x, i, k, c)));
        }
    }
    let n = Bimodule::from_sparse(field, sd, r, d, &n_left, &n_right)?;

    let mut phi_entries = Vec::new();
    let mut psi_entries = Vec::new();
    for x in 0..d {
        for y in 0..d {
            let xy = a.mul(&a.basis_vector(x), &a.basis_vector(y));
            let mut orbit_sum = vec![field.zero(); d];
            for g in 0..order {
                for (o, v) in orbit_sum.iter_mut().zip(action.matrix(g).apply(&xy)) {
                    *o = &*o + &v;
                }
            }
            sparse(coords(&orbit_sum), &mut |k, c| phi_entries.push((x, y, k, c)));
            for g in 0..order {
                let v = a.mul(&a.basis_vector(x), &action.matrix(g).column(y));
                sparse(v, &mut |k, c| psi_entries.push((x, y, skew_index(g, k), c)));
            }
        }
    }
    let phi = Pairing::from_sparse(field, d, d, r, &phi_entries)?;
    let psi = Pairing::from_sparse(field, d, d, sd, &psi_entries)?;
    check_context(MoritaContext::new(fixed, skew, m, n, phi, psi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivations::{is_antiderivation, is_derivation, is_jordan_derivation};
    use crate::gma::build_gma;
    use crate::morita::Which;

    #[test]
    fn triangular_dimensions() {
        let q = FieldSpec::Rational;
        assert_eq!(upper_triangular_algebra(q, 3).unwrap().dim(), 6);
        assert_eq!(matrix_algebra(q, 2).unwrap().dim(), 4);
        let g = build_gma(&upper_triangular_context(3, q).unwrap()).unwrap();
        assert_eq!(g.dim(), 6);
        assert!(g.context().m_is_faithful());
        assert!(upper_triangular_context(1, q).is_err());
    }

    #[test]
    fn example_maps_on_trivial_algebra() {
        let q = FieldSpec::Rational;
        let g = build_gma(&s_deformed_m2(q, &q.zero()).unwrap()).unwrap();
        let (gam, t1, t2) = (gamma_jord(&g).unwrap(), theta1(&g).unwrap(), theta2(&g).unwrap());
        assert_eq!(t1.add(&t2).unwrap(), gam);
        assert!(is_jordan_derivation(g.algebra(), &gam).unwrap());
        assert!(!is_derivation(g.algebra(), &gam).unwrap());
        assert!(is_derivation(g.algebra(), &t1).unwrap());
        assert!(is_antiderivation(g.algebra(), &t2).unwrap());
        let m2 = build_gma(&s_deformed_m2(q, &q.one()).unwrap()).unwrap();
        assert!(!is_antiderivation(m2.algebra(), &theta2(&m2).unwrap()).unwrap());
    }

    #[test]
    fn skew_group_swap() {
        let q = FieldSpec::Rational;
        let (a, action) = c2_swap(q).unwrap();
        let ctx = skew_group_context(&a, &action).unwrap();
        assert_eq!(ctx.a().dim(), 1);
        assert_eq!(ctx.b().dim(), 4);
        assert!(ctx.is_nondegenerate(Which::Phi));
        assert!(ctx.is_nondegenerate(Which::Psi));
        assert!(ctx.m_is_faithful());
        assert_eq!(build_gma(&ctx).unwrap().dim(), 9);
    }

    #[test]
    fn trivial_group_reduces_to_multiplication() {
        let q = FieldSpec::Rational;
        let (a, action) = trivial_group(q).unwrap();
        let ctx = skew_group_context(&a, &action).unwrap();
        assert_eq!(ctx.a(), &a);
        assert_eq!(ctx.b().sparse_entries(), a.sparse_entries());
        assert_eq!(ctx.phi().entries(), a.sparse_entries());
    }

    #[test]
    fn non_automorphism_rejected() {
        let q = FieldSpec::Rational;
        let a = product_algebra(q, 2).unwrap();
        let bad = Matrix::from_i64(q, &[&[1, 1], &[0, 1]]);
        assert!(GroupAction::new(&a, vec![vec![0, 1], vec![1, 0]], vec![Matrix::identity(q, 2), bad]).is_err());
    }

    #[test]
    fn theta_maps_need_matching_dimensions() {
        let g = build_gma(&upper_triangular_context(2, FieldSpec::Rational).unwrap()).unwrap();
        assert_eq!(gamma_jord(&g), Err(GalleryError::DimensionMismatch { m: 1, n: 0 }));
    }
}

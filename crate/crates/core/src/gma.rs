//! The generalized matrix algebra `[A M; N B]` of a Morita context, flattened
//! into a single structure algebra with basis order `(A, M, N, B)`.

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, StructureAlgebra};
use crate::morita::{MoritaContext, ValidationReport};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GmaError {
    #[error("the Morita context fails {} identities", .0.violations.len())]
    InvalidContext(ValidationReport),
    #[error("assembled algebra is not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("element has length {found}, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One of the four blocks of `[A M; N B]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    A,
    M,
    N,
    B,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::A, Corner::M, Corner::N, Corner::B];

    pub fn name(&self) -> &'static str {
        match self {
            Corner::A => "A",
            Corner::M => "M",
            Corner::N => "N",
            Corner::B => "B",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedMatrixAlgebra {
    context: MoritaContext,
    algebra: StructureAlgebra,
    dims: [usize; 4],
}

impl GeneralizedMatrixAlgebra {
    pub fn context(&self) -> &MoritaContext {
        &self.context
    }

    pub fn algebra(&self) -> &StructureAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> StructureAlgebra {
        self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn block_dim(&self, corner: Corner) -> usize {
        self.dims[corner as usize]
    }

    pub fn offset(&self, corner: Corner) -> usize {
        self.dims[..corner as usize].iter().sum()
    }

    pub fn range(&self, corner: Corner) -> std::ops::Range<usize> {
        let o = self.offset(corner);
        o..o + self.block_dim(corner)
    }

    /// Places a block vector into the full algebra.
    pub fn embed(&self, corner: Corner, v: &[Scalar]) -> Result<AlgebraElement, GmaError> {
        let expected = self.block_dim(corner);
        if v.len() != expected {
            return Err(GmaError::Shape {
                expected,
                found: v.len(),
            });
        }
        let mut x = self.algebra.zero();
        x[self.range(corner)].clone_from_slice(v);
        Ok(x)
    }

    /// The block component of an element.
    pub fn project(&self, corner: Corner, x: &[Scalar]) -> Result<Vec<Scalar>, GmaError> {
        if x.len() != self.dim() {
            return Err(GmaError::Shape {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(x[self.range(corner)].to_vec())
    }

    /// `[a m; n b]` from its four blocks.
    pub fn element(&self, a: &[Scalar], m: &[Scalar], n: &[Scalar], b: &[Scalar]) -> Result<AlgebraElement, GmaError> {
        let mut x = self.algebra.zero();
        for (corner, v) in Corner::ALL.into_iter().zip([a, m, n, b]) {
            let y = self.embed(corner, v)?;
            for k in self.range(corner) {
                x[k] = y[k].clone();
            }
        }
        Ok(x)
    }

    /// The idempotent `[1_A 0; 0 0]`.
    pub fn e11(&self) -> AlgebraElement {
        self.embed(Corner::A, self.context.a.unit()).expect("unit has block length")
    }

    /// The idempotent `[0 0; 0 1_B]`.
    pub fn e22(&self) -> AlgebraElement {
        self.embed(Corner::B, self.context.b.unit()).expect("unit has block length")
    }
}

/// Validates the context and assembles `[A M; N B]`, re-checking associativity
/// of the assembled structure constants directly.
pub fn build_gma(context: &MoritaContext) -> Result<GeneralizedMatrixAlgebra, GmaError> {
    let report = context.validate();
    if !report.is_valid() {
        return Err(GmaError::InvalidContext(report));
    }
    let algebra = assemble(context)?;
    if let Some((i, j, k)) = algebra.associativity_violation() {
        return Err(GmaError::NotAssociative(i, j, k));
    }
    if let Some(i) = unit_violation(&algebra) {
        return Err(GmaError::Algebra(AlgebraError::UnitLaw {
            index: i,
            side: crate::algebra::Side::Left,
        }));
    }
    let dims = [context.a.dim(), context.m.dim(), context.n.dim(), context.b.dim()];
    Ok(GeneralizedMatrixAlgebra {
        context: context.clone(),
        algebra,
        dims,
    })
}

fn unit_violation(alg: &StructureAlgebra) -> Option<usize> {
    (0..alg.dim()).find(|&i| {
        let x = alg.basis_vector(i);
        alg.mul(alg.unit(), &x) != x || alg.mul(&x, alg.unit()) != x
    })
}

fn assemble(ctx: &MoritaContext) -> Result<StructureAlgebra, GmaError> {
    let (da, dm, dn, db) = (ctx.a.dim(), ctx.m.dim(), ctx.n.dim(), ctx.b.dim());
    let (oa, om, on, ob) = (0, da, da + dm, da + dm + dn);
    let dim = da + dm + dn + db;
    let field = ctx.field();
    let mut t = vec![field.zero(); dim * dim * dim];
    let mut put = |i: usize, j: usize, k: usize, v: &Scalar| {
        if !v.is_zero() {
            t[(i * dim + j) * dim + k] = v.clone();
        }
    };
    for i in 0..da {
        for j in 0..da {
            for k in 0..da {
                put(oa + i, oa + j, oa + k, ctx.a.constant(i, j, k));
            }
        }
        for m in 0..dm {
            for k in 0..dm {
                put(oa + i, om + m, om + k, ctx.m.left_coefficient(i, m, k));
            }
        }
        for n in 0..dn {
            for k in 0..dn {
                put(on + n, oa + i, on + k, ctx.n.right_coefficient(n, i, k));
            }
        }
    }
    for j in 0..db {
        for l in 0..db {
            for k in 0..db {
                put(ob + j, ob + l, ob + k, ctx.b.constant(j, l, k));
            }
        }
        for m in 0..dm {
            for k in 0..dm {
                put(om + m, ob + j, om + k, ctx.m.right_coefficient(m, j, k));
            }
        }
        for n in 0..dn {
            for k in 0..dn {
                put(ob + j, on + n, on + k, ctx.n.left_coefficient(j, n, k));
            }
        }
    }
    for m in 0..dm {
        for n in 0..dn {
            for k in 0..da {
                put(om + m, on + n, oa + k, ctx.phi.coefficient(m, n, k));
            }
            for k in 0..db {
                put(on + n, om + m, ob + k, ctx.psi.coefficient(n, m, k));
            }
        }
    }
    let mut unit = vec![field.zero(); dim];
    unit[..da].clone_from_slice(ctx.a.unit());
    unit[ob..].clone_from_slice(ctx.b.unit());
    let labels = block_labels(ctx);
    Ok(StructureAlgebra::new_unchecked(field, dim, t, unit)?.with_labels(labels)?)
}

fn block_labels(ctx: &MoritaContext) -> Vec<String> {
    let own = |alg: &StructureAlgebra, prefix: &str| -> Vec<String> {
        match alg.labels() {
            Some(ls) => ls.iter().map(|l| format!("{prefix}.{l}")).collect(),
            None => (0..alg.dim()).map(|i| format!("{prefix}{i}")).collect(),
        }
    };
    let mut out = own(&ctx.a, "a");
    out.extend((0..ctx.m.dim()).map(|i| format!("m{i}")));
    out.extend((0..ctx.n.dim()).map(|i| format!("n{i}")));
    out.extend(own(&ctx.b, "b"));
    out
}

//! Bimodules, bilinear pairings and Morita contexts `(A, B, M, N, Φ, Ψ)`.
//!
//! `M` is an `(A, B)`-bimodule, `N` a `(B, A)`-bimodule, `Φ: M × N → A` and
//! `Ψ: N × M → B`. Products written by juxtaposition (`mn`, `nm`) are always
//! evaluated through the pairing tensors.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Side, StructureAlgebra};
use crate::linalg::{check_fields, LinalgError, Matrix};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoritaError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index out of range in {0}")]
    IndexOutOfRange(String),
    #[error("at least one of the bimodules M and N must be nonzero")]
    BothModulesZero,
    #[error("components live over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A bimodule over `(left algebra, right algebra)` given by action tensors:
/// `b_i · v_m = Σ_k left[i][m][k] v_k` and `v_m · b_j = Σ_k right[m][j][k] v_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: FieldSpec,
    left_dim: usize,
    right_dim: usize,
    dim: usize,
    left: Vec<Scalar>,
    right: Vec<Scalar>,
}

impl Bimodule {
    pub fn new(
        field: FieldSpec,
        left_dim: usize,
        right_dim: usize,
        dim: usize,
        left: Vec<Scalar>,
        right: Vec<Scalar>,
    ) -> Result<Self, MoritaError> {
        if left.len() != left_dim * dim * dim || right.len() != dim * right_dim * dim {
            return Err(MoritaError::Shape(format!(
                "bimodule of dimension {dim} over algebras of dimensions ({left_dim}, {right_dim}) \
                 needs action tensors of sizes {} and {}",
                left_dim * dim * dim,
                dim * right_dim * dim
            )));
        }
        check_fields(field, &left)?;
        check_fields(field, &right)?;
        Ok(Bimodule {
            field,
            left_dim,
            right_dim,
            dim,
            left,
            right,
        })
    }

    /// Builds the action tensors from sparse `(i, m, k, value)` and
    /// `(m, j, k, value)` entries.
    pub fn from_sparse(
        field: FieldSpec,
        left_dim: usize,
        right_dim: usize,
        dim: usize,
        left: &[(usize, usize, usize, Scalar)],
        right: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self, MoritaError> {
        let mut l = vec![field.zero(); left_dim * dim * dim];
        for (i, m, k, v) in left {
            if *i >= left_dim || *m >= dim || *k >= dim {
                return Err(MoritaError::IndexOutOfRange(format!("left action entry ({i}, {m}, {k})")));
            }
            check_fields(field, std::slice::from_ref(v))?;
            let at = (i * dim + m) * dim + k;
            l[at] = &l[at] + v;
        }
        let mut r = vec![field.zero(); dim * right_dim * dim];
        for (m, j, k, v) in right {
            if *m >= dim || *j >= right_dim || *k >= dim {
                return Err(MoritaError::IndexOutOfRange(format!("right action entry ({m}, {j}, {k})")));
            }
            check_fields(field, std::slice::from_ref(v))?;
            let at = (m * right_dim + j) * dim + k;
            r[at] = &r[at] + v;
        }
        Bimodule::new(field, left_dim, right_dim, dim, l, r)
    }

    /// The zero module over the given algebras.
    pub fn zero(field: FieldSpec, left_dim: usize, right_dim: usize) -> Self {
        Bimodule {
            field,
            left_dim,
            right_dim,
            dim: 0,
            left: Vec::new(),
            right: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn left_coefficient(&self, i: usize, m: usize, k: usize) -> &Scalar {
        &self.left[(i * self.dim + m) * self.dim + k]
    }

    pub fn right_coefficient(&self, m: usize, j: usize, k: usize) -> &Scalar {
        &self.right[(m * self.right_dim + j) * self.dim + k]
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_vector(&self, m: usize) -> Vec<Scalar> {
        let mut v = self.zero_vector();
        v[m] = self.field.one();
        v
    }

    /// `a · v` for `a` in the left algebra.
    pub fn act_left(&self, a: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vector();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (m, vm) in v.iter().enumerate() {
                if vm.is_zero() {
                    continue;
                }
                let s = ai * vm;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.left_coefficient(i, m, k);
                    if !c.is_zero() {
                        o.add_mul_assign(c, &s);
                    }
                }
            }
        }
        out
    }

    /// `v · b` for `b` in the right algebra.
    pub fn act_right(&self, v: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vector();
        for (m, vm) in v.iter().enumerate() {
            if vm.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let s = vm * bj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.right_coefficient(m, j, k);
                    if !c.is_zero() {
                        o.add_mul_assign(c, &s);
                    }
                }
            }
        }
        out
    }

    /// Nonzero `(i, m, k, value)` entries of the left action.
    pub fn left_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.left_dim {
            for m in 0..self.dim {
                for k in 0..self.dim {
                    let c = self.left_coefficient(i, m, k);
                    if !c.is_zero() {
                        out.push((i, m, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// Nonzero `(m, j, k, value)` entries of the right action.
    pub fn right_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for m in 0..self.dim {
            for j in 0..self.right_dim {
                for k in 0..self.dim {
                    let c = self.right_coefficient(m, j, k);
                    if !c.is_zero() {
                        out.push((m, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }
}

/// A bilinear map `X × Y → T` with `Φ(x_m, y_n) = Σ_k tensor[m][n][k] t_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    field: FieldSpec,
    left_dim: usize,
    right_dim: usize,
    target_dim: usize,
    tensor: Vec<Scalar>,
}

impl Pairing {
    pub fn new(
        field: FieldSpec,
        left_dim: usize,
        right_dim: usize,
        target_dim: usize,
        tensor: Vec<Scalar>,
    ) -> Result<Self, MoritaError> {
        if tensor.len() != left_dim * right_dim * target_dim {
            return Err(MoritaError::Shape(format!(
                "pairing {left_dim} x {right_dim} -> {target_dim} needs {} entries, got {}",
                left_dim * right_dim * target_dim,
                tensor.len()
            )));
        }
        check_fields(field, &tensor)?;
        Ok(Pairing {
            field,
            left_dim,
            right_dim,
            target_dim,
            tensor,
        })
    }

    pub fn zero(field: FieldSpec, left_dim: usize, right_dim: usize, target_dim: usize) -> Self {
        Pairing {
            field,
            left_dim,
            right_dim,
            target_dim,
            tensor: vec![field.zero(); left_dim * right_dim * target_dim],
        }
    }

    pub fn from_sparse(
        field: FieldSpec,
        left_dim: usize,
        right_dim: usize,
        target_dim: usize,
        entries: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self, MoritaError> {
        let mut p = Pairing::zero(field, left_dim, right_dim, target_dim);
        for (m, n, k, v) in entries {
            if *m >= left_dim || *n >= right_dim || *k >= target_dim {
                return Err(MoritaError::IndexOutOfRange(format!("pairing entry ({m}, {n}, {k})")));
            }
            check_fields(field, std::slice::from_ref(v))?;
            let at = p.index(*m, *n, *k);
            p.tensor[at] = &p.tensor[at] + v;
        }
        Ok(p)
    }

    fn index(&self, m: usize, n: usize, k: usize) -> usize {
        (m * self.right_dim + n) * self.target_dim + k
    }

    pub fn left_dim(&self) -> usize {
        self.left_dim
    }

    pub fn right_dim(&self) -> usize {
        self.right_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn coefficient(&self, m: usize, n: usize, k: usize) -> &Scalar {
        &self.tensor[self.index(m, n, k)]
    }

    /// Overwrites one tensor entry; used to build mutated contexts.
    pub fn set_coefficient(&mut self, m: usize, n: usize, k: usize, value: Scalar) {
        assert_eq!(value.field(), self.field);
        let at = self.index(m, n, k);
        self.tensor[at] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(Scalar::is_zero)
    }

    /// First nonzero entry `(m, n, k)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize)> {
        self.entries().into_iter().next().map(|(m, n, k, _)| (m, n, k))
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for m in 0..self.left_dim {
            for n in 0..self.right_dim {
                for k in 0..self.target_dim {
                    let c = self.coefficient(m, n, k);
                    if !c.is_zero() {
                        out.push((m, n, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.target_dim];
        for (m, xm) in x.iter().enumerate() {
            if xm.is_zero() {
                continue;
            }
            for (n, yn) in y.iter().enumerate() {
                if yn.is_zero() {
                    continue;
                }
                let s = xm * yn;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.coefficient(m, n, k);
                    if !c.is_zero() {
                        o.add_mul_assign(c, &s);
                    }
                }
            }
        }
        out
    }

    /// Rank of `x ↦ Φ(x, ·)`: full (= left_dim) iff no nonzero `x` pairs to zero.
    fn left_rank(&self) -> usize {
        let rows: Vec<Vec<Scalar>> = (0..self.left_dim)
            .map(|m| {
                (0..self.right_dim)
                    .flat_map(|n| (0..self.target_dim).map(move |k| (n, k)))
                    .map(|(n, k)| self.coefficient(m, n, k).clone())
                    .collect()
            })
            .collect();
        rank_of_rows(self.field, rows, self.right_dim * self.target_dim)
    }

    fn right_rank(&self) -> usize {
        let rows: Vec<Vec<Scalar>> = (0..self.right_dim)
            .map(|n| {
                (0..self.left_dim)
                    .flat_map(|m| (0..self.target_dim).map(move |k| (m, k)))
                    .map(|(m, k)| self.coefficient(m, n, k).clone())
                    .collect()
            })
            .collect();
        rank_of_rows(self.field, rows, self.left_dim * self.target_dim)
    }

    /// No nonzero `x` with `Φ(x, Y) = 0` and no nonzero `y` with `Φ(X, y) = 0`.
    pub fn is_nondegenerate(&self) -> bool {
        self.left_rank() == self.left_dim && self.right_rank() == self.right_dim
    }
}

fn rank_of_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> usize {
    let r = rows.len();
    Matrix::new(field, r, cols, rows.into_iter().flatten().collect())
        .expect("rectangular flattening")
        .rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    Phi,
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleName {
    M,
    N,
}

/// One identity checked by [`MoritaContext::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `(x y)·v = x·(y·v)` for the named module.
    LeftAssociative(ModuleName),
    LeftUnit(ModuleName),
    /// `v·(x y) = (v·x)·y`.
    RightAssociative(ModuleName),
    RightUnit(ModuleName),
    /// `(x·v)·y = x·(v·y)`.
    BimoduleCompatible(ModuleName),
    /// `Φ(m·b, n) = Φ(m, b·n)`.
    PhiBalanced,
    /// `Ψ(n·a, m) = Ψ(n, a·m)`.
    PsiBalanced,
    /// `Φ(a·m, n) = a Φ(m, n)`.
    PhiLeftLinear,
    /// `Φ(m, n·a) = Φ(m, n) a`.
    PhiRightLinear,
    /// `Ψ(b·n, m) = b Ψ(n, m)`.
    PsiLeftLinear,
    /// `Ψ(n, m·b) = Ψ(n, m) b`.
    PsiRightLinear,
    /// `Φ(m, n)·m' = m·Ψ(n, m')`.
    DiagramM,
    /// `Ψ(n, m)·n' = n·Φ(m, n')`.
    DiagramN,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Identity::LeftAssociative(ModuleName::M) => "M: (a a')m = a(a'm)",
            Identity::LeftAssociative(ModuleName::N) => "N: (b b')n = b(b'n)",
            Identity::LeftUnit(ModuleName::M) => "M: 1_A m = m",
            Identity::LeftUnit(ModuleName::N) => "N: 1_B n = n",
            Identity::RightAssociative(ModuleName::M) => "M: m(b b') = (mb)b'",
            Identity::RightAssociative(ModuleName::N) => "N: n(a a') = (na)a'",
            Identity::RightUnit(ModuleName::M) => "M: m 1_B = m",
            Identity::RightUnit(ModuleName::N) => "N: n 1_A = n",
            Identity::BimoduleCompatible(ModuleName::M) => "M: (am)b = a(mb)",
            Identity::BimoduleCompatible(ModuleName::N) => "N: (bn)a = b(na)",
            Identity::PhiBalanced => "Phi(mb, n) = Phi(m, bn)",
            Identity::PsiBalanced => "Psi(na, m) = Psi(n, am)",
            Identity::PhiLeftLinear => "Phi(am, n) = a Phi(m, n)",
            Identity::PhiRightLinear => "Phi(m, na) = Phi(m, n) a",
            Identity::PsiLeftLinear => "Psi(bn, m) = b Psi(n, m)",
            Identity::PsiRightLinear => "Psi(n, mb) = Psi(n, m) b",
            Identity::DiagramM => "Phi(m, n) m' = m Psi(n, m')",
            Identity::DiagramN => "Psi(n, m) n' = n Phi(m, n')",
        };
        f.write_str(s)
    }
}

impl Identity {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Identity::LeftAssociative(ModuleName::M) => "M.left-assoc",
            Identity::LeftAssociative(ModuleName::N) => "N.left-assoc",
            Identity::LeftUnit(ModuleName::M) => "M.left-unit",
            Identity::LeftUnit(ModuleName::N) => "N.left-unit",
            Identity::RightAssociative(ModuleName::M) => "M.right-assoc",
            Identity::RightAssociative(ModuleName::N) => "N.right-assoc",
            Identity::RightUnit(ModuleName::M) => "M.right-unit",
            Identity::RightUnit(ModuleName::N) => "N.right-unit",
            Identity::BimoduleCompatible(ModuleName::M) => "M.bimodule",
            Identity::BimoduleCompatible(ModuleName::N) => "N.bimodule",
            Identity::PhiBalanced => "phi.balanced",
            Identity::PsiBalanced => "psi.balanced",
            Identity::PhiLeftLinear => "phi.left-linear",
            Identity::PhiRightLinear => "phi.right-linear",
            Identity::PsiLeftLinear => "psi.left-linear",
            Identity::PsiRightLinear => "psi.right-linear",
            Identity::DiagramM => "diagram.M",
            Identity::DiagramN => "diagram.N",
        }
    }
}

/// A failed identity together with the basis indices it failed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: Identity,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fails(&self, identity: Identity) -> bool {
        self.violations.iter().any(|v| v.identity == identity)
    }
}

/// `(A, B, M, N, Φ, Ψ)`. Construction checks shapes only; the algebraic
/// identities are checked by [`MoritaContext::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaContext {
    pub(crate) a: StructureAlgebra,
    pub(crate) b: StructureAlgebra,
    pub(crate) m: Bimodule,
    pub(crate) n: Bimodule,
    pub(crate) phi: Pairing,
    pub(crate) psi: Pairing,
}

impl MoritaContext {
    pub fn new(
        a: StructureAlgebra,
        b: StructureAlgebra,
        m: Bimodule,
        n: Bimodule,
        phi: Pairing,
        psi: Pairing,
    ) -> Result<Self, MoritaError> {
        let field = a.field();
        if [b.field(), m.field, n.field, phi.field, psi.field]
            .iter()
            .any(|f| *f != field)
        {
            return Err(MoritaError::FieldMismatch);
        }
        let (da, db) = (a.dim(), b.dim());
        if m.left_dim != da || m.right_dim != db {
            return Err(MoritaError::Shape(format!(
                "M must be an (A, B)-bimodule over dimensions ({da}, {db}), got ({}, {})",
                m.left_dim, m.right_dim
            )));
        }
        if n.left_dim != db || n.right_dim != da {
            return Err(MoritaError::Shape(format!(
                "N must be a (B, A)-bimodule over dimensions ({db}, {da}), got ({}, {})",
                n.left_dim, n.right_dim
            )));
        }
        if (phi.left_dim, phi.right_dim, phi.target_dim) != (m.dim, n.dim, da) {
            return Err(MoritaError::Shape("Phi must map M x N into A".into()));
        }
        if (psi.left_dim, psi.right_dim, psi.target_dim) != (n.dim, m.dim, db) {
            return Err(MoritaError::Shape("Psi must map N x M into B".into()));
        }
        if m.dim == 0 && n.dim == 0 {
            return Err(MoritaError::BothModulesZero);
        }
        Ok(MoritaContext {
            a,
            b,
            m,
            n,
            phi,
            psi,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.a.field()
    }

    pub fn a(&self) -> &StructureAlgebra {
        &self.a
    }

    pub fn b(&self) -> &StructureAlgebra {
        &self.b
    }

    pub fn m(&self) -> &Bimodule {
        &self.m
    }

    pub fn n(&self) -> &Bimodule {
        &self.n
    }

    pub fn phi(&self) -> &Pairing {
        &self.phi
    }

    pub fn psi(&self) -> &Pairing {
        &self.psi
    }

    pub fn phi_mut(&mut self) -> &mut Pairing {
        &mut self.phi
    }

    pub fn psi_mut(&mut self) -> &mut Pairing {
        &mut self.psi
    }

    pub fn pairing(&self, which: Which) -> &Pairing {
        match which {
            Which::Phi => &self.phi,
            Which::Psi => &self.psi,
        }
    }

    pub fn module(&self, name: ModuleName) -> &Bimodule {
        match name {
            ModuleName::M => &self.m,
            ModuleName::N => &self.n,
        }
    }

    pub fn has_zero_pairings(&self) -> bool {
        self.phi.is_zero() && self.psi.is_zero()
    }

    /// Checks every identity on all basis tuples and reports each failure.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        check_module(&mut report, ModuleName::M, &self.m, &self.a, &self.b);
        check_module(&mut report, ModuleName::N, &self.n, &self.b, &self.a);
        self.check_pairings(&mut report);
        report
    }

    fn check_pairings(&self, report: &mut ValidationReport) {
        let (a, b, m, n) = (&self.a, &self.b, &self.m, &self.n);
        let mut fail = |identity, indices: Vec<usize>| {
            report.violations.push(Violation { identity, indices })
        };
        for mi in 0..m.dim {
            let mv = m.basis_vector(mi);
            for ni in 0..n.dim {
                let nv = n.basis_vector(ni);
                let phi_mn = self.phi.eval(&mv, &nv);
                let psi_nm = self.psi.eval(&nv, &mv);
                for bj in 0..b.dim() {
                    let bv = b.basis_vector(bj);
                    if self.phi.eval(&m.act_right(&mv, &bv), &nv)
                        != self.phi.eval(&mv, &n.act_left(&bv, &nv))
                    {
                        fail(Identity::PhiBalanced, vec![mi, bj, ni]);
                    }
                    if self.psi.eval(&n.act_left(&bv, &nv), &mv) != b.mul(&bv, &psi_nm) {
                        fail(Identity::PsiLeftLinear, vec![bj, ni, mi]);
                    }
                    if self.psi.eval(&nv, &m.act_right(&mv, &bv)) != b.mul(&psi_nm, &bv) {
                        fail(Identity::PsiRightLinear, vec![ni, mi, bj]);
                    }
                }
                for ai in 0..a.dim() {
                    let av = a.basis_vector(ai);
                    if self.psi.eval(&n.act_right(&nv, &av), &mv)
                        != self.psi.eval(&nv, &m.act_left(&av, &mv))
                    {
                        fail(Identity::PsiBalanced, vec![ni, ai, mi]);
                    }
                    if self.phi.eval(&m.act_left(&av, &mv), &nv) != a.mul(&av, &phi_mn) {
                        fail(Identity::PhiLeftLinear, vec![ai, mi, ni]);
                    }
                    if self.phi.eval(&mv, &n.act_right(&nv, &av)) != a.mul(&phi_mn, &av) {
                        fail(Identity::PhiRightLinear, vec![mi, ni, ai]);
                    }
                }
                for mj in 0..m.dim {
                    let mv2 = m.basis_vector(mj);
                    if m.act_left(&phi_mn, &mv2) != m.act_right(&mv, &self.psi.eval(&nv, &mv2)) {
                        fail(Identity::DiagramM, vec![mi, ni, mj]);
                    }
                }
                for nj in 0..n.dim {
                    let nv2 = n.basis_vector(nj);
                    if n.act_left(&psi_nm, &nv2) != n.act_right(&nv, &self.phi.eval(&mv, &nv2)) {
                        fail(Identity::DiagramN, vec![ni, mi, nj]);
                    }
                }
            }
        }
    }

    /// Nondegeneracy of Φ or Ψ, decided by the rank of both flattenings.
    pub fn is_nondegenerate(&self, which: Which) -> bool {
        self.pairing(which).is_nondegenerate()
    }

    /// Whether the named module is faithful over the algebra acting on `side`:
    /// the representation into `End(module)` has zero kernel.
    pub fn is_faithful(&self, module: ModuleName, side: Side) -> bool {
        let md = self.module(module);
        let alg_dim = match side {
            Side::Left => md.left_dim,
            Side::Right => md.right_dim,
        };
        let d = md.dim;
        // Column x: the action matrix of basis element x, flattened.
        let cols: Vec<Vec<Scalar>> = (0..alg_dim)
            .map(|x| {
                (0..d)
                    .flat_map(|v| (0..d).map(move |k| (v, k)))
                    .map(|(v, k)| match side {
                        Side::Left => md.left_coefficient(x, v, k).clone(),
                        Side::Right => md.right_coefficient(v, x, k).clone(),
                    })
                    .collect()
            })
            .collect();
        let mat = Matrix::from_columns(self.field(), d * d, &cols).expect("flattened action");
        mat.rank() == alg_dim
    }

    /// `M` faithful as a left `A`-module and as a right `B`-module.
    pub fn m_is_faithful(&self) -> bool {
        self.is_faithful(ModuleName::M, Side::Left) && self.is_faithful(ModuleName::M, Side::Right)
    }
}

fn check_module(
    report: &mut ValidationReport,
    name: ModuleName,
    md: &Bimodule,
    left: &StructureAlgebra,
    right: &StructureAlgebra,
) {
    let mut fail = |identity, indices: Vec<usize>| {
        report.violations.push(Violation { identity, indices })
    };
    for v in 0..md.dim {
        let vv = md.basis_vector(v);
        if md.act_left(left.unit(), &vv) != vv {
            fail(Identity::LeftUnit(name), vec![v]);
        }
        if md.act_right(&vv, right.unit()) != vv {
            fail(Identity::RightUnit(name), vec![v]);
        }
        for i in 0..left.dim() {
            let x = left.basis_vector(i);
            let xv = md.act_left(&x, &vv);
            for j in 0..left.dim() {
                let y = left.basis_vector(j);
                if md.act_left(&left.mul(&x, &y), &vv) != md.act_left(&x, &md.act_left(&y, &vv)) {
                    fail(Identity::LeftAssociative(name), vec![i, j, v]);
                }
            }
            for j in 0..right.dim() {
                let y = right.basis_vector(j);
                if md.act_right(&xv, &y) != md.act_left(&x, &md.act_right(&vv, &y)) {
                    fail(Identity::BimoduleCompatible(name), vec![i, v, j]);
                }
            }
        }
        for i in 0..right.dim() {
            let x = right.basis_vector(i);
            let vx = md.act_right(&vv, &x);
            for j in 0..right.dim() {
                let y = right.basis_vector(j);
                if md.act_right(&vv, &right.mul(&x, &y)) != md.act_right(&vx, &y) {
                    fail(Identity::RightAssociative(name), vec![v, i, j]);
                }
            }
        }
    }
}

//! Corner-map normal forms of Jordan derivations of `[A M; N B]`, the
//! conditions characterizing them, the derivation + antiderivation splitting
//! for zero pairings, and certificates for the vanishing of antiderivations.
//!
//! A Jordan derivation `f` is recorded by `m0, n0` and eight corner maps:
//!
//! ```text
//! A-corner = δ1(a) − Φ(m, n0) − Φ(m0, n) + δ4(b)
//! M-corner = a·m0 − m0·b + τ2(m) + τ3(n)
//! N-corner = n0·a − b·n0 + ν2(m) + ν3(n)
//! B-corner = μ1(a) + Ψ(n0, m) + Ψ(n, m0) + μ4(b)
//! ```
//!
//! Corner maps are matrices from the source corner to the target corner.

use std::fmt;

use thiserror::Error;

use crate::algebra::{CharacteristicClass, Side, StructureAlgebra};
use crate::derivations::{
    antiderivation_space, derivation_space, derivation_witness, is_antiderivation, is_derivation,
    jordan_derivation_space, jordan_witness, DerivationError, LinearMap,
};
use crate::gma::{Corner, GeneralizedMatrixAlgebra};
use crate::linalg::Matrix;
use crate::morita::{ModuleName, Which};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("map is not a Jordan derivation: the identity fails on basis pair ({0}, {1})")]
    NotJordan(usize, usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("pairing {which:?} is nonzero at entry ({m}, {n}, {k})")]
    NonzeroPairing { which: Which, m: usize, n: usize, k: usize },
    #[error("the ground field has characteristic 2")]
    CharacteristicTwo,
    #[error("M is not faithful as a {0}")]
    NotFaithful(&'static str),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

/// `m0`, `n0` and the eight corner maps of a Jordan derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanCanonicalForm {
    pub m0: Vec<Scalar>,
    pub n0: Vec<Scalar>,
    /// A → A
    pub delta1: Matrix,
    /// B → A
    pub delta4: Matrix,
    /// M → M
    pub tau2: Matrix,
    /// N → M
    pub tau3: Matrix,
    /// M → N
    pub nu2: Matrix,
    /// N → N
    pub nu3: Matrix,
    /// A → B
    pub mu1: Matrix,
    /// B → B
    pub mu4: Matrix,
}

impl JordanCanonicalForm {
    pub fn zero(g: &GeneralizedMatrixAlgebra) -> Self {
        let f = g.field();
        let [da, dm, dn, db] = Corner::ALL.map(|c| g.block_dim(c));
        JordanCanonicalForm {
            m0: vec![f.zero(); dm],
            n0: vec![f.zero(); dn],
            delta1: Matrix::zeros(f, da, da),
            delta4: Matrix::zeros(f, da, db),
            tau2: Matrix::zeros(f, dm, dm),
            tau3: Matrix::zeros(f, dm, dn),
            nu2: Matrix::zeros(f, dn, dm),
            nu3: Matrix::zeros(f, dn, dn),
            mu1: Matrix::zeros(f, db, da),
            mu4: Matrix::zeros(f, db, db),
        }
    }

    /// The corner maps with their names, in a fixed order.
    pub fn maps(&self) -> [(&'static str, &Matrix); 8] {
        [
            ("delta1", &self.delta1),
            ("delta4", &self.delta4),
            ("tau2", &self.tau2),
            ("tau3", &self.tau3),
            ("nu2", &self.nu2),
            ("nu3", &self.nu3),
            ("mu1", &self.mu1),
            ("mu4", &self.mu4),
        ]
    }

    fn check_shapes(&self, g: &GeneralizedMatrixAlgebra) -> Result<(), StructureError> {
        let zero = JordanCanonicalForm::zero(g);
        let same = |x: &Matrix, y: &Matrix| x.rows() == y.rows() && x.cols() == y.cols() && x.field() == y.field();
        if self.m0.len() != zero.m0.len() || self.n0.len() != zero.n0.len() {
            return Err(StructureError::Shape("m0 or n0 has the wrong length".into()));
        }
        for ((name, x), (_, y)) in self.maps().into_iter().zip(zero.maps()) {
            if !same(x, y) {
                return Err(StructureError::Shape(format!(
                    "{name} is {}x{}, expected {}x{}",
                    x.rows(),
                    x.cols(),
                    y.rows(),
                    y.cols()
                )));
            }
        }
        if self.m0.iter().chain(&self.n0).any(|x| x.field() != g.field()) {
            return Err(StructureError::Shape("m0 or n0 lives over another field".into()));
        }
        Ok(())
    }
}

fn check_map(g: &GeneralizedMatrixAlgebra, f: &LinearMap) -> Result<(), StructureError> {
    if f.dim() != g.dim() {
        return Err(DerivationError::Shape {
            rows: f.dim(),
            cols: f.dim(),
            dim: g.dim(),
        }
        .into());
    }
    if f.field() != g.field() {
        return Err(DerivationError::Field {
            map: f.field(),
            algebra: g.field(),
        }
        .into());
    }
    Ok(())
}

/// Reads `m0, n0` off `f(e11)` and each corner map off the images of the
/// corner basis vectors. Rejects maps that are not Jordan derivations.
pub fn extract_jordan_components(
    g: &GeneralizedMatrixAlgebra,
    f: &LinearMap,
) -> Result<JordanCanonicalForm, StructureError> {
    check_map(g, f)?;
    if let Some((i, j)) = jordan_witness(g.algebra(), f)? {
        return Err(StructureError::NotJordan(i, j));
    }
    let field = g.field();
    let image_e11 = f.apply(&g.e11())?;
    let block = |corner: Corner, x: &[Scalar]| x[g.range(corner)].to_vec();
    let corner_map = |source: Corner, target: Corner| {
        let cols: Vec<Vec<Scalar>> = g.range(source).map(|j| block(target, &f.image(j))).collect();
        Matrix::from_columns(field, g.block_dim(target), &cols).expect("corner block shape")
    };
    Ok(JordanCanonicalForm {
        m0: block(Corner::M, &image_e11),
        n0: block(Corner::N, &image_e11),
        delta1: corner_map(Corner::A, Corner::A),
        delta4: corner_map(Corner::B, Corner::A),
        tau2: corner_map(Corner::M, Corner::M),
        tau3: corner_map(Corner::N, Corner::M),
        nu2: corner_map(Corner::M, Corner::N),
        nu3: corner_map(Corner::N, Corner::N),
        mu1: corner_map(Corner::A, Corner::B),
        mu4: corner_map(Corner::B, Corner::B),
    })
}

/// Evaluates the normal form on every basis vector of `g`.
pub fn rebuild_from_form(
    g: &GeneralizedMatrixAlgebra,
    form: &JordanCanonicalForm,
) -> Result<LinearMap, StructureError> {
    form.check_shapes(g)?;
    let ctx = g.context();
    let (a, b, m, n) = (ctx.a(), ctx.b(), ctx.m(), ctx.n());
    let (phi, psi) = (ctx.phi(), ctx.psi());
    let assemble = |pa: Vec<Scalar>, pm: Vec<Scalar>, pn: Vec<Scalar>, pb: Vec<Scalar>| {
        g.element(&pa, &pm, &pn, &pb).expect("corner blocks have matching lengths")
    };
    let mut images = Vec::with_capacity(g.dim());
    for i in 0..a.dim() {
        let x = a.basis_vector(i);
        images.push(assemble(
            form.delta1.column(i),
            m.act_left(&x, &form.m0),
            n.act_right(&form.n0, &x),
            form.mu1.column(i),
        ));
    }
    for j in 0..m.dim() {
        let x = m.basis_vector(j);
        images.push(assemble(
            neg(&phi.eval(&x, &form.n0)),
            form.tau2.column(j),
            form.nu2.column(j),
            psi.eval(&form.n0, &x),
        ));
    }
    for j in 0..n.dim() {
        let x = n.basis_vector(j);
        images.push(assemble(
            neg(&phi.eval(&form.m0, &x)),
            form.tau3.column(j),
            form.nu3.column(j),
            psi.eval(&x, &form.m0),
        ));
    }
    for j in 0..b.dim() {
        let x = b.basis_vector(j);
        images.push(assemble(
            form.delta4.column(j),
            neg(&m.act_right(&form.m0, &x)),
            neg(&n.act_left(&x, &form.n0)),
            form.mu4.column(j),
        ));
    }
    Ok(LinearMap::from_images(g.field(), &images)?)
}

fn neg(x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|s| -s).collect()
}

fn combine(terms: &[(&[Scalar], bool)]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = terms[0].0.iter().map(Scalar::zero_like).collect();
    for (v, positive) in terms {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o = if *positive { &*o + x } else { &*o - x };
        }
    }
    out
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// The condition families a normal form can be checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormConditions {
    /// Derivations: no `δ4, μ1, τ3, ν2` slots, Leibniz rules on the corners.
    Derivation,
    /// Jordan derivations in general.
    Jordan,
    /// Jordan derivations over a 2-torsion-free algebra with `M` faithful on
    /// both sides: `δ4 = μ1 = 0` and the corner rules become Leibniz rules.
    JordanFaithful,
    /// Antiderivations: only `m0, n0, τ3, ν2` survive.
    Antiderivation,
}

impl FormConditions {
    pub fn name(&self) -> &'static str {
        match self {
            FormConditions::Derivation => "derivation",
            FormConditions::Jordan => "jordan",
            FormConditions::JordanFaithful => "jordan-faithful",
            FormConditions::Antiderivation => "antiderivation",
        }
    }
}

impl fmt::Display for FormConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One numbered condition: the identity that failed first, if any, with the
/// basis indices it failed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionResult {
    pub id: String,
    pub statement: String,
    pub holds: bool,
    pub failed_clause: Option<String>,
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub family: FormConditions,
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.holds)
    }

    pub fn condition(&self, id: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

type Clause<'a> = (&'static str, Box<dyn Fn() -> Option<Vec<usize>> + 'a>);

fn condition(id: &str, statement: &str, clauses: Vec<Clause<'_>>) -> ConditionResult {
    for (name, check) in clauses {
        if let Some(w) = check() {
            return ConditionResult {
                id: id.into(),
                statement: statement.into(),
                holds: false,
                failed_clause: Some(name.into()),
                witness: Some(w),
            };
        }
    }
    ConditionResult {
        id: id.into(),
        statement: statement.into(),
        holds: true,
        failed_clause: None,
        witness: None,
    }
}

/// First `(i, j)` in `0..d1 × 0..d2` where `bad` holds.
fn first_pair(d1: usize, d2: usize, bad: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    (0..d1)
        .flat_map(|i| (0..d2).map(move |j| (i, j)))
        .find(|&(i, j)| bad(i, j))
        .map(|(i, j)| vec![i, j])
}

fn first_index(d: usize, bad: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    (0..d).find(|&i| bad(i)).map(|i| vec![i])
}

/// `x ↦ q(x, x)` vanishes identically iff `q(e_i, e_i) = 0` and
/// `q(e_i, e_j) + q(e_j, e_i) = 0` for `i < j`.
fn quadratic_failure(d: usize, q: impl Fn(usize, usize) -> Vec<Scalar>) -> Option<Vec<usize>> {
    for i in 0..d {
        for j in i..d {
            let v = if i == j {
                q(i, i)
            } else {
                combine(&[(&q(i, j), true), (&q(j, i), true)])
            };
            if !is_zero(&v) {
                return Some(vec![i, j]);
            }
        }
    }
    None
}

fn nonzero_matrix(x: &Matrix) -> Option<Vec<usize>> {
    first_pair(x.rows(), x.cols(), |r, c| !x.get(r, c).is_zero()).map(|w| vec![w[1], w[0]])
}

fn as_map(x: &Matrix) -> LinearMap {
    LinearMap::new(x.clone()).expect("diagonal corner maps are square")
}

struct Checker<'a> {
    a: &'a StructureAlgebra,
    b: &'a StructureAlgebra,
    g: &'a GeneralizedMatrixAlgebra,
    form: &'a JordanCanonicalForm,
}

impl<'a> Checker<'a> {
    fn new(g: &'a GeneralizedMatrixAlgebra, form: &'a JordanCanonicalForm) -> Self {
        Checker {
            a: g.context().a(),
            b: g.context().b(),
            g,
            form,
        }
    }

    fn dims(&self) -> (usize, usize, usize, usize) {
        let c = self.g.context();
        (c.a().dim(), c.m().dim(), c.n().dim(), c.b().dim())
    }

    fn phi(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.g.context().phi().eval(x, y)
    }

    fn psi(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.g.context().psi().eval(x, y)
    }

    fn am(&self, a: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        self.g.context().m().act_left(a, m)
    }

    fn mb(&self, m: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        self.g.context().m().act_right(m, b)
    }

    fn bn(&self, b: &[Scalar], n: &[Scalar]) -> Vec<Scalar> {
        self.g.context().n().act_left(b, n)
    }

    fn na(&self, n: &[Scalar], a: &[Scalar]) -> Vec<Scalar> {
        self.g.context().n().act_right(n, a)
    }

    fn mv(&self, i: usize) -> Vec<Scalar> {
        self.g.context().m().basis_vector(i)
    }

    fn nv(&self, i: usize) -> Vec<Scalar> {
        self.g.context().n().basis_vector(i)
    }

    /// δ1 is a Jordan derivation (or a derivation) of A and
    /// `δ1(mn) = −δ4(nm) + τ2(m)n + mν3(n)`.
    fn corner_a(&self, id: &str, leibniz: bool, with_cross: bool) -> ConditionResult {
        let f = self.form;
        let (_, dm, dn, _) = self.dims();
        let statement = match (leibniz, with_cross) {
            (true, _) => "delta1 is a derivation of A; delta1(mn) = tau2(m)n + m nu3(n)",
            (false, _) => "delta1 is a Jordan derivation of A; delta1(mn) = -delta4(nm) + tau2(m)n + m nu3(n)",
        };
        let rule: Clause = if leibniz {
            (
                "delta1 Leibniz rule",
                Box::new(move || derivation_witness(self.a, &as_map(&f.delta1)).ok().flatten().map(|(i, j)| vec![i, j])),
            )
        } else {
            (
                "delta1 Jordan rule",
                Box::new(move || jordan_witness(self.a, &as_map(&f.delta1)).ok().flatten().map(|(i, j)| vec![i, j])),
            )
        };
        condition(
            id,
            statement,
            vec![
                rule,
                (
                    "delta1 on products mn",
                    Box::new(move || {
                        first_pair(dm, dn, |i, j| {
                            let (m, n) = (self.mv(i), self.nv(j));
                            let lhs = f.delta1.apply(&self.phi(&m, &n));
                            let cross = if with_cross {
                                f.delta4.apply(&self.psi(&n, &m))
                            } else {
                                vec![self.g.field().zero(); lhs.len()]
                            };
                            let r1 = self.phi(&f.tau2.apply(&m), &n);
                            let r2 = self.phi(&m, &f.nu3.apply(&n));
                            !is_zero(&combine(&[(&lhs, true), (&cross, true), (&r1, false), (&r2, false)]))
                        })
                    }),
                ),
            ],
        )
    }

    /// μ4 is a Jordan derivation (or a derivation) of B and
    /// `μ4(nm) = −μ1(mn) + nτ2(m) + ν3(n)m`.
    fn corner_b(&self, id: &str, leibniz: bool, with_cross: bool) -> ConditionResult {
        let f = self.form;
        let (_, dm, dn, _) = self.dims();
        let statement = if leibniz {
            "mu4 is a derivation of B; mu4(nm) = n tau2(m) + nu3(n)m"
        } else {
            "mu4 is a Jordan derivation of B; mu4(nm) = -mu1(mn) + n tau2(m) + nu3(n)m"
        };
        let rule: Clause = if leibniz {
            (
                "mu4 Leibniz rule",
                Box::new(move || derivation_witness(self.b, &as_map(&f.mu4)).ok().flatten().map(|(i, j)| vec![i, j])),
            )
        } else {
            (
                "mu4 Jordan rule",
                Box::new(move || jordan_witness(self.b, &as_map(&f.mu4)).ok().flatten().map(|(i, j)| vec![i, j])),
            )
        };
        condition(
            id,
            statement,
            vec![
                rule,
                (
                    "mu4 on products nm",
                    Box::new(move || {
                        first_pair(dn, dm, |j, i| {
                            let (m, n) = (self.mv(i), self.nv(j));
                            let lhs = f.mu4.apply(&self.psi(&n, &m));
                            let cross = if with_cross {
                                f.mu1.apply(&self.phi(&m, &n))
                            } else {
                                vec![self.g.field().zero(); lhs.len()]
                            };
                            let r1 = self.psi(&n, &f.tau2.apply(&m));
                            let r2 = self.psi(&f.nu3.apply(&n), &m);
                            !is_zero(&combine(&[(&lhs, true), (&cross, true), (&r1, false), (&r2, false)]))
                        })
                    }),
                ),
            ],
        )
    }

    /// `δ4(b²) = 2δ4(b) = 0` and `μ1(a²) = 2μ1(a) = 0`.
    fn square_zero(&self, id: &str) -> ConditionResult {
        let f = self.form;
        let (da, _, _, db) = self.dims();
        let two = self.g.field().from_i64(2);
        let two2 = two.clone();
        condition(
            id,
            "delta4(b^2) = 2 delta4(b) = 0 and mu1(a^2) = 2 mu1(a) = 0",
            vec![
                (
                    "delta4(b^2) = 0",
                    Box::new(move || {
                        quadratic_failure(db, |i, j| {
                            f.delta4.apply(&self.b.mul(&self.b.basis_vector(i), &self.b.basis_vector(j)))
                        })
                    }),
                ),
                (
                    "2 delta4(b) = 0",
                    Box::new(move || first_index(db, |i| f.delta4.column(i).iter().any(|x| !(x * &two).is_zero()))),
                ),
                (
                    "mu1(a^2) = 0",
                    Box::new(move || {
                        quadratic_failure(da, |i, j| {
                            f.mu1.apply(&self.a.mul(&self.a.basis_vector(i), &self.a.basis_vector(j)))
                        })
                    }),
                ),
                (
                    "2 mu1(a) = 0",
                    Box::new(move || first_index(da, |i| f.mu1.column(i).iter().any(|x| !(x * &two2).is_zero()))),
                ),
            ],
        )
    }

    /// `τ2(am) = aτ2(m) + δ1(a)m + mμ1(a)` and `τ2(mb) = τ2(m)b + mμ4(b) + δ4(b)m`.
    fn tau2_rules(&self, id: &str, with_cross: bool) -> ConditionResult {
        let f = self.form;
        let (da, dm, _, db) = self.dims();
        let statement = if with_cross {
            "tau2(am) = a tau2(m) + delta1(a)m + m mu1(a); tau2(mb) = tau2(m)b + m mu4(b) + delta4(b)m"
        } else {
            "tau2(am) = a tau2(m) + delta1(a)m; tau2(mb) = tau2(m)b + m mu4(b)"
        };
        let zero_m = vec![self.g.field().zero(); dm];
        let zero_m2 = zero_m.clone();
        condition(
            id,
            statement,
            vec![
                (
                    "tau2(am)",
                    Box::new(move || {
                        first_pair(da, dm, |i, j| {
                            let (a, m) = (self.a.basis_vector(i), self.mv(j));
                            let lhs = f.tau2.apply(&self.am(&a, &m));
                            let r1 = self.am(&a, &f.tau2.apply(&m));
                            let r2 = self.am(&f.delta1.column(i), &m);
                            let r3 = if with_cross { self.mb(&m, &f.mu1.column(i)) } else { zero_m.clone() };
                            !is_zero(&combine(&[(&lhs, true), (&r1, false), (&r2, false), (&r3, false)]))
                        })
                    }),
                ),
                (
                    "tau2(mb)",
                    Box::new(move || {
                        first_pair(dm, db, |j, i| {
                            let (m, b) = (self.mv(j), self.b.basis_vector(i));
                            let lhs = f.tau2.apply(&self.mb(&m, &b));
                            let r1 = self.mb(&f.tau2.apply(&m), &b);
                            let r2 = self.mb(&m, &f.mu4.column(i));
                            let r3 = if with_cross { self.am(&f.delta4.column(i), &m) } else { zero_m2.clone() };
                            !is_zero(&combine(&[(&lhs, true), (&r1, false), (&r2, false), (&r3, false)]))
                        })
                    }),
                ),
            ],
        )
    }

    /// `ν3(bn) = bν3(n) + μ4(b)n + nδ4(b)` and `ν3(na) = ν3(n)a + nδ1(a) + μ1(a)n`.
    fn nu3_rules(&self, id: &str, with_cross: bool) -> ConditionResult {
        let f = self.form;
        let (da, _, dn, db) = self.dims();
        let statement = if with_cross {
            "nu3(bn) = b nu3(n) + mu4(b)n + n delta4(b); nu3(na) = nu3(n)a + n delta1(a) + mu1(a)n"
        } else {
            "nu3(na) = nu3(n)a + n delta1(a); nu3(bn) = b nu3(n) + mu4(b)n"
        };
        let zero_n = vec![self.g.field().zero(); dn];
        let zero_n2 = zero_n.clone();
        condition(
            id,
            statement,
            vec![
                (
                    "nu3(bn)",
                    Box::new(move || {
                        first_pair(db, dn, |i, j| {
                            let (b, n) = (self.b.basis_vector(i), self.nv(j));
                            let lhs = f.nu3.apply(&self.bn(&b, &n));
                            let r1 = self.bn(&b, &f.nu3.apply(&n));
                            let r2 = self.bn(&f.mu4.column(i), &n);
                            let r3 = if with_cross { self.na(&n, &f.delta4.column(i)) } else { zero_n.clone() };
                            !is_zero(&combine(&[(&lhs, true), (&r1, false), (&r2, false), (&r3, false)]))
                        })
                    }),
                ),
                (
                    "nu3(na)",
                    Box::new(move || {
                        first_pair(dn, da, |j, i| {
                            let (n, a) = (self.nv(j), self.a.basis_vector(i));
                            let lhs = f.nu3.apply(&self.na(&n, &a));
                            let r1 = self.na(&f.nu3.apply(&n), &a);
                            let r2 = self.na(&n, &f.delta1.column(i));
                            let r3 = if with_cross { self.bn(&f.mu1.column(i), &n) } else { zero_n2.clone() };
                            !is_zero(&combine(&[(&lhs, true), (&r1, false), (&r2, false), (&r3, false)]))
                        })
                    }),
                ),
            ],
        )
    }

    /// `τ3(na) = aτ3(n)`, `τ3(bn) = τ3(n)b` and the products of `n` with
    /// `τ3(n)` vanish: on the diagonal (quadratic form) or for all pairs.
    fn tau3_rules(&self, id: &str, all_pairs: bool) -> ConditionResult {
        let f = self.form;
        let (da, _, dn, db) = self.dims();
        let statement = if all_pairs {
            "tau3(na) = a tau3(n); tau3(bn) = tau3(n)b; n tau3(n') = 0; tau3(n)n' = 0"
        } else {
            "tau3(na) = a tau3(n); tau3(bn) = tau3(n)b; n tau3(n) = 0; tau3(n)n = 0"
        };
        let pairing = move |q: &dyn Fn(usize, usize) -> Vec<Scalar>| {
            if all_pairs {
                first_pair(dn, dn, |i, j| !is_zero(&q(i, j)))
            } else {
                quadratic_failure(dn, q)
            }
        };
        condition(
            id,
            statement,
            vec![
                (
                    "tau3(na)",
                    Box::new(move || {
                        first_pair(dn, da, |j, i| {
                            let (n, a) = (self.nv(j), self.a.basis_vector(i));
                            f.tau3.apply(&self.na(&n, &a)) != self.am(&a, &f.tau3.column(j))
                        })
                    }),
                ),
                (
                    "tau3(bn)",
                    Box::new(move || {
                        first_pair(db, dn, |i, j| {
                            let (b, n) = (self.b.basis_vector(i), self.nv(j));
                            f.tau3.apply(&self.bn(&b, &n)) != self.mb(&f.tau3.column(j), &b)
                        })
                    }),
                ),
                (
                    "n tau3(n)",
                    Box::new(move || pairing(&|i, j| self.psi(&self.nv(i), &f.tau3.column(j)))),
                ),
                (
                    "tau3(n) n",
                    Box::new(move || pairing(&|i, j| self.phi(&f.tau3.column(i), &self.nv(j)))),
                ),
            ],
        )
    }

    /// `ν2(am) = ν2(m)a`, `ν2(mb) = bν2(m)` and the products of `m` with
    /// `ν2(m)` vanish.
    fn nu2_rules(&self, id: &str, all_pairs: bool) -> ConditionResult {
        let f = self.form;
        let (da, dm, _, db) = self.dims();
        let statement = if all_pairs {
            "nu2(am) = nu2(m)a; nu2(mb) = b nu2(m); m nu2(m') = 0; nu2(m)m' = 0"
        } else {
            "nu2(am) = nu2(m)a; nu2(mb) = b nu2(m); m nu2(m) = 0; nu2(m)m = 0"
        };
        let pairing = move |q: &dyn Fn(usize, usize) -> Vec<Scalar>| {
            if all_pairs {
                first_pair(dm, dm, |i, j| !is_zero(&q(i, j)))
            } else {
                quadratic_failure(dm, q)
            }
        };
        condition(
            id,
            statement,
            vec![
                (
                    "nu2(am)",
                    Box::new(move || {
                        first_pair(da, dm, |i, j| {
                            let (a, m) = (self.a.basis_vector(i), self.mv(j));
                            f.nu2.apply(&self.am(&a, &m)) != self.na(&f.nu2.column(j), &a)
                        })
                    }),
                ),
                (
                    "nu2(mb)",
                    Box::new(move || {
                        first_pair(dm, db, |j, i| {
                            let (m, b) = (self.mv(j), self.b.basis_vector(i));
                            f.nu2.apply(&self.mb(&m, &b)) != self.bn(&b, &f.nu2.column(j))
                        })
                    }),
                ),
                (
                    "m nu2(m)",
                    Box::new(move || pairing(&|i, j| self.phi(&self.mv(i), &f.nu2.column(j)))),
                ),
                (
                    "nu2(m) m",
                    Box::new(move || pairing(&|i, j| self.psi(&f.nu2.column(i), &self.mv(j)))),
                ),
            ],
        )
    }

    /// The listed corner maps vanish.
    fn slots(&self, id: &str, zero: &[&'static str]) -> ConditionResult {
        let statement = format!("{} vanish", zero.join(", "));
        let maps = self.form.maps();
        let clauses: Vec<Clause> = zero
            .iter()
            .map(|name| {
                let m = maps.iter().find(|(n, _)| n == name).expect("known corner map").1;
                let clause: Clause = (*name, Box::new(move || nonzero_matrix(m)));
                clause
            })
            .collect();
        condition(id, &statement, clauses)
    }

    /// `[a, a']m0 = 0`, `m0[b, b'] = 0`, `n0[a, a'] = 0`, `[b, b']n0 = 0`.
    fn commutators(&self, id: &str) -> ConditionResult {
        let f = self.form;
        let (da, _, _, db) = self.dims();
        let comm = |alg: &StructureAlgebra, i: usize, j: usize| {
            let (x, y) = (alg.basis_vector(i), alg.basis_vector(j));
            combine(&[(&alg.mul(&x, &y), true), (&alg.mul(&y, &x), false)])
        };
        condition(
            id,
            "[a, a']m0 = 0; m0[b, b'] = 0; n0[a, a'] = 0; [b, b']n0 = 0",
            vec![
                ("[a, a']m0", Box::new(move || first_pair(da, da, |i, j| !is_zero(&self.am(&comm(self.a, i, j), &f.m0))))),
                ("m0[b, b']", Box::new(move || first_pair(db, db, |i, j| !is_zero(&self.mb(&f.m0, &comm(self.b, i, j)))))),
                ("n0[a, a']", Box::new(move || first_pair(da, da, |i, j| !is_zero(&self.na(&f.n0, &comm(self.a, i, j)))))),
                ("[b, b']n0", Box::new(move || first_pair(db, db, |i, j| !is_zero(&self.bn(&comm(self.b, i, j), &f.n0))))),
            ],
        )
    }

    /// `m0 n = 0`, `n m0 = 0`, `m n0 = 0`, `n0 m = 0`.
    fn annihilators(&self, id: &str) -> ConditionResult {
        let f = self.form;
        let (_, dm, dn, _) = self.dims();
        condition(
            id,
            "m0 n = 0; n m0 = 0; m n0 = 0; n0 m = 0",
            vec![
                ("m0 n", Box::new(move || first_index(dn, |j| !is_zero(&self.phi(&f.m0, &self.nv(j)))))),
                ("n m0", Box::new(move || first_index(dn, |j| !is_zero(&self.psi(&self.nv(j), &f.m0))))),
                ("m n0", Box::new(move || first_index(dm, |j| !is_zero(&self.phi(&self.mv(j), &f.n0))))),
                ("n0 m", Box::new(move || first_index(dm, |j| !is_zero(&self.psi(&f.n0, &self.mv(j)))))),
            ],
        )
    }
}

/// Checks every condition of the chosen family on all basis tuples.
pub fn verify_conditions(
    g: &GeneralizedMatrixAlgebra,
    form: &JordanCanonicalForm,
    family: FormConditions,
) -> Result<ConditionReport, StructureError> {
    form.check_shapes(g)?;
    let conditions = match family {
        FormConditions::Jordan => {
            let c = Checker::new(g, form);
            vec![
                c.corner_a("1", false, true),
                c.corner_b("2", false, true),
                c.square_zero("3"),
                c.tau2_rules("4", true),
                c.nu3_rules("5", true),
                c.tau3_rules("6", false),
                c.nu2_rules("7", false),
            ]
        }
        FormConditions::Derivation | FormConditions::JordanFaithful => {
            let slots: &[&'static str] = if family == FormConditions::Derivation {
                &["delta4", "mu1", "tau3", "nu2"]
            } else {
                &["delta4", "mu1"]
            };
            let mut out = vec![Checker::new(g, form).slots("form", slots)];
            let c = Checker::new(g, form);
            out.extend([
                c.corner_a("1", true, false),
                c.corner_b("2", true, false),
                c.tau2_rules("3", false),
                c.nu3_rules("4", false),
            ]);
            if family == FormConditions::JordanFaithful {
                out.push(c.tau3_rules("5", false));
                out.push(c.nu2_rules("6", false));
            }
            out
        }
        FormConditions::Antiderivation => {
            let c = Checker::new(g, form);
            vec![
                c.slots("form", &["delta1", "delta4", "mu1", "mu4", "tau2", "nu3"]),
                c.commutators("1"),
                c.annihilators("2"),
                c.tau3_rules("3", true),
                c.nu2_rules("4", true),
            ]
        }
    };
    Ok(ConditionReport { family, conditions })
}

/// A Jordan derivation written as derivation + antiderivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanDecomposition {
    pub derivation: LinearMap,
    pub antiderivation: LinearMap,
}

fn first_nonzero_pairing(g: &GeneralizedMatrixAlgebra) -> Option<StructureError> {
    [Which::Phi, Which::Psi].into_iter().find_map(|which| {
        g.context()
            .pairing(which)
            .first_nonzero()
            .map(|(m, n, k)| StructureError::NonzeroPairing { which, m, n, k })
    })
}

fn unfaithful_side(g: &GeneralizedMatrixAlgebra) -> Option<&'static str> {
    let ctx = g.context();
    if !ctx.is_faithful(ModuleName::M, Side::Left) {
        Some("left A-module")
    } else if !ctx.is_faithful(ModuleName::M, Side::Right) {
        Some("right B-module")
    } else {
        None
    }
}

/// Splits a Jordan derivation of a zero-pairing algebra: `τ3` and `ν2` go to
/// the antiderivation part, everything else to the derivation part.
///
/// Requires both pairings zero, characteristic other than 2 and `M` faithful
/// on both sides.
pub fn decompose_jordan(
    g: &GeneralizedMatrixAlgebra,
    f: &LinearMap,
) -> Result<JordanDecomposition, StructureError> {
    check_map(g, f)?;
    if let Some(e) = first_nonzero_pairing(g) {
        return Err(e);
    }
    if CharacteristicClass::of(g.field()) == CharacteristicClass::Two {
        return Err(StructureError::CharacteristicTwo);
    }
    if let Some(side) = unfaithful_side(g) {
        return Err(StructureError::NotFaithful(side));
    }
    let form = extract_jordan_components(g, f)?;
    for (name, x) in [("delta4", &form.delta4), ("mu1", &form.mu1)] {
        if let Some(w) = nonzero_matrix(x) {
            return Err(StructureError::Inconsistent(format!(
                "{name} is nonzero on basis vector {}",
                w[0]
            )));
        }
    }
    let mut der_form = form.clone();
    der_form.tau3 = Matrix::zeros(g.field(), form.tau3.rows(), form.tau3.cols());
    der_form.nu2 = Matrix::zeros(g.field(), form.nu2.rows(), form.nu2.cols());
    let mut anti_form = JordanCanonicalForm::zero(g);
    anti_form.tau3 = form.tau3.clone();
    anti_form.nu2 = form.nu2.clone();
    let derivation = rebuild_from_form(g, &der_form)?;
    let antiderivation = rebuild_from_form(g, &anti_form)?;
    if &derivation.add(&antiderivation)? != f {
        return Err(StructureError::Inconsistent("the parts do not sum to the input".into()));
    }
    if let Some((i, j)) = derivation_witness(g.algebra(), &derivation)? {
        return Err(StructureError::Inconsistent(format!(
            "the derivation part fails the Leibniz rule on ({i}, {j})"
        )));
    }
    if !is_antiderivation(g.algebra(), &antiderivation)? {
        return Err(StructureError::Inconsistent(
            "the antiderivation part fails the reversed Leibniz rule".into(),
        ));
    }
    Ok(JordanDecomposition {
        derivation,
        antiderivation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotApplicable(String),
    Falsified(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::NotApplicable(_) => "not-applicable",
            Verdict::Falsified(_) => "FALSIFIED",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Verdict::Certified => None,
            Verdict::NotApplicable(r) | Verdict::Falsified(r) => Some(r),
        }
    }
}

/// A verdict together with the dimensions computed on the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub dimensions: Vec<(&'static str, usize)>,
}

impl Certificate {
    fn not_applicable(reason: impl Into<String>) -> Self {
        Certificate {
            verdict: Verdict::NotApplicable(reason.into()),
            dimensions: Vec::new(),
        }
    }
}

/// With `M` faithful on both sides and a nondegenerate pairing, the only
/// antiderivation is zero.
pub fn certify_no_antiderivations(g: &GeneralizedMatrixAlgebra) -> Certificate {
    if let Some(side) = unfaithful_side(g) {
        return Certificate::not_applicable(format!("M is not faithful as a {side}"));
    }
    let ctx = g.context();
    if !ctx.is_nondegenerate(Which::Phi) && !ctx.is_nondegenerate(Which::Psi) {
        return Certificate::not_applicable("neither pairing is nondegenerate");
    }
    let ader = antiderivation_space(g.algebra());
    let dim = ader.dimension();
    let verdict = if dim == 0 {
        Verdict::Certified
    } else {
        Verdict::Falsified(format!("found {dim} independent nonzero antiderivations"))
    };
    Certificate {
        verdict,
        dimensions: vec![("ader", dim)],
    }
}

/// With both pairings zero, characteristic other than 2 and `M` faithful,
/// checks `JDer = Der + ADer` and splits every basis Jordan derivation.
pub fn certify_jordan_splitting(g: &GeneralizedMatrixAlgebra) -> Certificate {
    if let Some(StructureError::NonzeroPairing { which, m, n, k }) = first_nonzero_pairing(g) {
        return Certificate::not_applicable(format!("pairing {which:?} is nonzero at ({m}, {n}, {k})"));
    }
    if CharacteristicClass::of(g.field()) == CharacteristicClass::Two {
        return Certificate::not_applicable("characteristic 2");
    }
    if let Some(side) = unfaithful_side(g) {
        return Certificate::not_applicable(format!("M is not faithful as a {side}"));
    }
    let alg = g.algebra();
    let jder = jordan_derivation_space(alg);
    let der = derivation_space(alg);
    let ader = antiderivation_space(alg);
    let (sum, meet) = match (der.sum(&ader), der.intersection(&ader)) {
        (Ok(s), Ok(i)) => (s, i),
        _ => unreachable!("spaces of one algebra are compatible"),
    };
    let dimensions = vec![
        ("jder", jder.dimension()),
        ("der", der.dimension()),
        ("ader", ader.dimension()),
        ("der+ader", sum.dimension()),
        ("der^ader", meet.dimension()),
    ];
    let falsified = |reason: String| Certificate {
        verdict: Verdict::Falsified(reason),
        dimensions: dimensions.clone(),
    };
    if !sum.same_span(&jder).unwrap_or(false) {
        return falsified("Der + ADer differs from JDer".into());
    }
    if jder.dimension() + meet.dimension() != der.dimension() + ader.dimension() {
        return falsified("dim JDer != dim Der + dim ADer - dim(Der ^ ADer)".into());
    }
    for (idx, f) in jder.basis().iter().enumerate() {
        if let Err(e) = decompose_jordan(g, f) {
            return falsified(format!("basis Jordan derivation {idx} does not split: {e}"));
        }
    }
    Certificate {
        verdict: Verdict::Certified,
        dimensions,
    }
}

/// The derivation, Jordan and antiderivation predicates of `f`, in that order.
pub fn classify(g: &GeneralizedMatrixAlgebra, f: &LinearMap) -> Result<(bool, bool, bool), StructureError> {
    check_map(g, f)?;
    let alg = g.algebra();
    Ok((
        is_derivation(alg, f)?,
        jordan_witness(alg, f)?.is_none(),
        is_antiderivation(alg, f)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gma::build_gma;
    use crate::morita::{Bimodule, MoritaContext, Pairing};
    use crate::scalar::FieldSpec;

    fn ground(field: FieldSpec) -> StructureAlgebra {
        StructureAlgebra::from_sparse(field, 1, &[(0, 0, 0, field.one())], vec![field.one()]).unwrap()
    }

    fn deformed(field: FieldSpec, s: i64) -> GeneralizedMatrixAlgebra {
        let line =
            Bimodule::from_sparse(field, 1, 1, 1, &[(0, 0, 0, field.one())], &[(0, 0, 0, field.one())]).unwrap();
        let p = Pairing::from_sparse(field, 1, 1, 1, &[(0, 0, 0, field.from_i64(s))]).unwrap();
        let ctx = MoritaContext::new(ground(field), ground(field), line.clone(), line, p.clone(), p).unwrap();
        build_gma(&ctx).unwrap()
    }

    fn map(field: FieldSpec, rows: &[&[i64]]) -> LinearMap {
        LinearMap::new(Matrix::from_i64(field, rows)).unwrap()
    }

    fn gamma(field: FieldSpec) -> LinearMap {
        // (a, m, n, b) ↦ (0, m + n, m − n, 0)
        map(field, &[&[0, 0, 0, 0], &[0, 1, 1, 0], &[0, 1, -1, 0], &[0, 0, 0, 0]])
    }

    #[test]
    fn gamma_components() {
        let q = FieldSpec::Rational;
        let g = deformed(q, 0);
        let form = extract_jordan_components(&g, &gamma(q)).unwrap();
        assert!(form.m0.iter().all(Scalar::is_zero));
        assert_eq!(form.tau2, Matrix::from_i64(q, &[&[1]]));
        assert_eq!(form.nu3, Matrix::from_i64(q, &[&[-1]]));
        assert_eq!(form.tau3, Matrix::from_i64(q, &[&[1]]));
        assert_eq!(form.nu2, Matrix::from_i64(q, &[&[1]]));
        assert_eq!(rebuild_from_form(&g, &form).unwrap(), gamma(q));
        assert!(verify_conditions(&g, &form, FormConditions::Jordan).unwrap().holds());
        let der = verify_conditions(&g, &form, FormConditions::Derivation).unwrap();
        assert!(!der.holds());
        assert_eq!(der.condition("form").unwrap().failed_clause.as_deref(), Some("tau3"));
    }

    #[test]
    fn gamma_splits_into_theta_maps() {
        let q = FieldSpec::Rational;
        let g = deformed(q, 0);
        let d = decompose_jordan(&g, &gamma(q)).unwrap();
        assert_eq!(d.derivation, map(q, &[&[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, 0]]));
        assert_eq!(d.antiderivation, map(q, &[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 0]]));
    }

    #[test]
    fn non_jordan_rejected() {
        let q = FieldSpec::Rational;
        let g = deformed(q, 1);
        let f = map(q, &[&[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
        assert!(matches!(extract_jordan_components(&g, &f), Err(StructureError::NotJordan(0, 0))));
    }

    #[test]
    fn decomposition_hypotheses() {
        let q = FieldSpec::Rational;
        let g = deformed(q, 1);
        assert!(matches!(
            decompose_jordan(&g, &LinearMap::zero(q, 4)),
            Err(StructureError::NonzeroPairing { which: Which::Phi, .. })
        ));
        let f3 = FieldSpec::prime(2).unwrap();
        assert_eq!(
            decompose_jordan(&deformed(f3, 0), &LinearMap::zero(f3, 4)),
            Err(StructureError::CharacteristicTwo)
        );
    }

    #[test]
    fn inner_derivation_by_e11() {
        let q = FieldSpec::Rational;
        let g = deformed(q, 0);
        let f = g.algebra().inner_derivation(&g.e11()).unwrap();
        let form = extract_jordan_components(&g, &f).unwrap();
        let mut expected = JordanCanonicalForm::zero(&g);
        expected.tau2 = Matrix::from_i64(q, &[&[1]]);
        expected.nu3 = Matrix::from_i64(q, &[&[-1]]);
        assert_eq!(form, expected);
        assert!(verify_conditions(&g, &form, FormConditions::Derivation).unwrap().holds());
    }

    #[test]
    fn certificates() {
        let q = FieldSpec::Rational;
        assert_eq!(certify_no_antiderivations(&deformed(q, 1)).verdict, Verdict::Certified);
        assert!(matches!(certify_no_antiderivations(&deformed(q, 0)).verdict, Verdict::NotApplicable(_)));
        let c = certify_jordan_splitting(&deformed(q, 0));
        assert_eq!(c.verdict, Verdict::Certified);
        assert_eq!(
            c.dimensions,
            vec![("jder", 6), ("der", 4), ("ader", 4), ("der+ader", 6), ("der^ader", 2)]
        );
    }

    #[test]
    fn zero_form_rebuilds_to_zero() {
        let q = FieldSpec::Rational;
        let g = deformed(q, 1);
        let form = JordanCanonicalForm::zero(&g);
        assert!(rebuild_from_form(&g, &form).unwrap().is_zero());
        for family in [
            FormConditions::Derivation,
            FormConditions::Jordan,
            FormConditions::JordanFaithful,
            FormConditions::Antiderivation,
        ] {
            assert!(verify_conditions(&g, &form, family).unwrap().holds());
        }
    }
}

//! Finite-dimensional algebras, bimodule actions and the duplication product.
//!
//! An algebra is a structure tensor `c[i][j][k]` with `e_i e_j = sum_k
//! c[i][j][k] e_k`. A [`BimoduleAction`] of `F` on `A` stores two tensors:
//! `left[p][i][k]` for `f_p . a_i` and `right[i][p][k]` for `a_i . f_p`.
//! Given a compatible action, [`Triple::duplicate`] builds the algebra on
//! `A x F` with
//!
//! ```text
//! (a, b)(a', b') = (a a' + a.b' + b.a', b b')
//! ```
//!
//! and the l1 norm `|(a, b)| = |a|_1 + |b|_1`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, re, solve_affine, Subspace, C64};

pub type Element = DVector<C64>;

/// A multiplication tensor over a labelled basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FinDimAlgebra {
    dim: usize,
    labels: Vec<String>,
    mult: Vec<C64>,
    unit: Option<Element>,
}

impl FinDimAlgebra {
    /// `mult` is indexed `(i * dim + j) * dim + k`.
    pub fn new(labels: Vec<String>, mult: Vec<C64>) -> Result<Self> {
        let dim = labels.len();
        if mult.len() != dim * dim * dim {
            return Err(Error::Shape(format!(
                "multiplication tensor has {} entries, expected {}",
                mult.len(),
                dim * dim * dim
            )));
        }
        if mult.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite structure constant".into()));
        }
        Ok(FinDimAlgebra {
            dim,
            labels,
            mult,
            unit: None,
        })
    }

    /// Builds from a closure giving the product of two basis vectors.
    pub fn from_fn(labels: Vec<String>, f: impl Fn(usize, usize) -> Vec<C64>) -> Result<Self> {
        let dim = labels.len();
        let mut mult = vec![C64::default(); dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                if v.len() != dim {
                    return Err(Error::Shape(format!(
                        "product e{i}*e{j} has length {}",
                        v.len()
                    )));
                }
                mult[(i * dim + j) * dim..(i * dim + j + 1) * dim].copy_from_slice(&v);
            }
        }
        Self::new(labels, mult)
    }

    /// The zero-product algebra of the given dimension.
    pub fn zero_product(labels: Vec<String>) -> Self {
        let d = labels.len();
        FinDimAlgebra {
            dim: d,
            labels,
            mult: vec![C64::default(); d * d * d],
            unit: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tensor(&self) -> &[C64] {
        &self.mult
    }

    pub fn unit(&self) -> Option<&Element> {
        self.unit.as_ref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    /// Records `unit` after checking it against every basis vector.
    pub fn with_unit(mut self, unit: Element, tol: f64) -> Result<Self> {
        let defect = self.unit_defect(&unit);
        if defect > tol * (1.0 + self.scale()) {
            return Err(Error::HypothesisNotMet(format!(
                "candidate unit has defect {defect:.3e}"
            )));
        }
        self.unit = Some(unit);
        Ok(self)
    }

    /// Solves `u e_j = e_j = e_j u` for all `j` and records `u` when the
    /// system is consistent.
    pub fn with_detected_unit(mut self, tol: f64) -> Self {
        self.unit = self.detect_unit(tol);
        self
    }

    pub fn detect_unit(&self, tol: f64) -> Option<Element> {
        let d = self.dim;
        if d == 0 {
            return None;
        }
        // Unknown u; rows: (u e_j)_k and (e_j u)_k for all j, k.
        let mut a = DMatrix::zeros(2 * d * d, d);
        let mut b = DVector::zeros(2 * d * d);
        for j in 0..d {
            for k in 0..d {
                let row = j * d + k;
                for m in 0..d {
                    a[(row, m)] = self.c(m, j, k);
                    a[(d * d + row, m)] = self.c(j, m, k);
                }
                if j == k {
                    b[row] = re(1.0);
                    b[d * d + row] = re(1.0);
                }
            }
        }
        let u = solve_affine(&a, &b, tol).ok()?;
        (self.unit_defect(&u) <= tol * (1.0 + self.scale())).then_some(u)
    }

    fn unit_defect(&self, u: &Element) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.dim {
            let e = self.basis(j);
            worst = worst.max((self.mul(u, &e) - &e).camax());
            worst = worst.max((self.mul(&e, u) - &e).camax());
        }
        worst
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> C64 {
        self.mult[(i * self.dim + j) * self.dim + k]
    }

    /// Largest structure constant in modulus (at least 1).
    pub fn scale(&self) -> f64 {
        max_abs(self.mult.iter().copied()).max(1.0)
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut e = DVector::zeros(self.dim);
        e[i] = re(1.0);
        e
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Element {
        let d = self.dim;
        DVector::from_column_slice(&self.mult[(i * d + j) * d..(i * d + j + 1) * d])
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let d = self.dim;
        let mut out = DVector::zeros(d);
        for i in 0..d {
            if x[i] == C64::default() {
                continue;
            }
            for j in 0..d {
                let s = x[i] * y[j];
                if s == C64::default() {
                    continue;
                }
                for k in 0..d {
                    out[k] += s * self.c(i, j, k);
                }
            }
        }
        out
    }

    /// Matrix of `y -> x y`.
    pub fn left_mult(&self, x: &Element) -> DMatrix<C64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, j| (0..d).map(|i| x[i] * self.c(i, j, k)).sum())
    }

    /// Matrix of `y -> y x`.
    pub fn right_mult(&self, x: &Element) -> DMatrix<C64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, i| (0..d).map(|j| x[j] * self.c(i, j, k)).sum())
    }

    pub fn left_mult_basis(&self, i: usize) -> DMatrix<C64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, j| self.c(i, j, k))
    }

    pub fn right_mult_basis(&self, j: usize) -> DMatrix<C64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, i| self.c(i, j, k))
    }

    pub fn commutativity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    worst = worst.max((self.c(i, j, k) - self.c(j, i, k)).norm());
                }
            }
        }
        worst
    }

    pub fn is_commutative(&self, tol: f64) -> bool {
        self.commutativity_defect() <= tol * self.scale()
    }

    pub fn associativity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let eij = self.basis_product(i, j);
                for k in 0..d {
                    let lhs = self.mul(&eij, &self.basis(k));
                    let rhs = self.mul(&self.basis(i), &self.basis_product(j, k));
                    worst = worst.max((lhs - rhs).camax());
                }
            }
        }
        worst
    }

    /// Image of a basis change: `p` holds the new basis vectors as columns
    /// in old coordinates. Returns `None` when `p` is singular.
    pub fn transport(&self, p: &DMatrix<C64>) -> Option<FinDimAlgebra> {
        let d = self.dim;
        let pinv = p.clone().try_inverse()?;
        let cols: Vec<Element> = (0..d).map(|i| p.column(i).into_owned()).collect();
        let alg = FinDimAlgebra::from_fn(self.labels.clone(), |i, j| {
            (&pinv * self.mul(&cols[i], &cols[j])).iter().copied().collect()
        })
        .ok()?;
        Some(FinDimAlgebra {
            unit: self.unit.as_ref().map(|u| &pinv * u),
            ..alg
        })
    }
}

/// Left and right action tensors of an algebra `F` on an algebra `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct BimoduleAction {
    a_dim: usize,
    f_dim: usize,
    left: Vec<C64>,
    right: Vec<C64>,
}

impl BimoduleAction {
    /// `left` is indexed `(p * a_dim + i) * a_dim + k`, `right` is indexed
    /// `(i * f_dim + p) * a_dim + k`.
    pub fn new(a_dim: usize, f_dim: usize, left: Vec<C64>, right: Vec<C64>) -> Result<Self> {
        let n = a_dim * a_dim * f_dim;
        if left.len() != n || right.len() != n {
            return Err(Error::Shape(format!(
                "action tensors have {} and {} entries, expected {n}",
                left.len(),
                right.len()
            )));
        }
        Ok(BimoduleAction {
            a_dim,
            f_dim,
            left,
            right,
        })
    }

    pub fn zero(a_dim: usize, f_dim: usize) -> Self {
        let n = a_dim * a_dim * f_dim;
        BimoduleAction {
            a_dim,
            f_dim,
            left: vec![C64::default(); n],
            right: vec![C64::default(); n],
        }
    }

    /// Builds both tensors from the operators `a -> f_p . a` and `a -> a . f_p`.
    pub fn from_operators(left_ops: &[DMatrix<C64>], right_ops: &[DMatrix<C64>]) -> Result<Self> {
        let f_dim = left_ops.len();
        if right_ops.len() != f_dim {
            return Err(Error::Shape("operator families differ in length".into()));
        }
        let a_dim = left_ops.first().map_or(0, |m| m.nrows());
        let mut act = BimoduleAction::zero(a_dim, f_dim);
        for p in 0..f_dim {
            for m in [&left_ops[p], &right_ops[p]] {
                if m.shape() != (a_dim, a_dim) {
                    return Err(Error::Shape(format!(
                        "action operator of shape {:?}, expected {a_dim}x{a_dim}",
                        m.shape()
                    )));
                }
            }
            for i in 0..a_dim {
                for k in 0..a_dim {
                    act.left[(p * a_dim + i) * a_dim + k] = left_ops[p][(k, i)];
                    act.right[(i * f_dim + p) * a_dim + k] = right_ops[p][(k, i)];
                }
            }
        }
        Ok(act)
    }

    pub fn a_dim(&self) -> usize {
        self.a_dim
    }

    pub fn f_dim(&self) -> usize {
        self.f_dim
    }

    pub fn left_tensor(&self) -> &[C64] {
        &self.left
    }

    pub fn right_tensor(&self) -> &[C64] {
        &self.right
    }

    #[inline]
    pub fn l(&self, p: usize, i: usize, k: usize) -> C64 {
        self.left[(p * self.a_dim + i) * self.a_dim + k]
    }

    #[inline]
    pub fn r(&self, i: usize, p: usize, k: usize) -> C64 {
        self.right[(i * self.f_dim + p) * self.a_dim + k]
    }

    pub fn scale(&self) -> f64 {
        max_abs(self.left.iter().chain(self.right.iter()).copied()).max(1.0)
    }

    /// Matrix of `a -> beta . a`.
    pub fn left_op(&self, beta: &Element) -> DMatrix<C64> {
        let n = self.a_dim;
        DMatrix::from_fn(n, n, |k, i| {
            (0..self.f_dim).map(|p| beta[p] * self.l(p, i, k)).sum()
        })
    }

    /// Matrix of `a -> a . beta`.
    pub fn right_op(&self, beta: &Element) -> DMatrix<C64> {
        let n = self.a_dim;
        DMatrix::from_fn(n, n, |k, i| {
            (0..self.f_dim).map(|p| beta[p] * self.r(i, p, k)).sum()
        })
    }

    /// Matrix of `gamma -> a . gamma` (from `F` into `A`).
    pub fn right_op_on(&self, a: &Element) -> DMatrix<C64> {
        DMatrix::from_fn(self.a_dim, self.f_dim, |k, p| {
            (0..self.a_dim).map(|i| a[i] * self.r(i, p, k)).sum()
        })
    }

    /// Matrix of `gamma -> gamma . a` (from `F` into `A`).
    pub fn left_op_on(&self, a: &Element) -> DMatrix<C64> {
        DMatrix::from_fn(self.a_dim, self.f_dim, |k, p| {
            (0..self.a_dim).map(|i| a[i] * self.l(p, i, k)).sum()
        })
    }

    pub fn act_left(&self, beta: &Element, a: &Element) -> Element {
        self.left_op(beta) * a
    }

    pub fn act_right(&self, a: &Element, beta: &Element) -> Element {
        self.right_op(beta) * a
    }

    pub fn symmetry_defect(&self) -> f64 {
        max_abs(self.left.iter().enumerate().map(|(idx, &l)| {
            let k = idx % self.a_dim;
            let i = (idx / self.a_dim) % self.a_dim;
            let p = idx / (self.a_dim * self.a_dim);
            l - self.r(i, p, k)
        }))
    }

    /// Transport along basis changes `p` of `A` and `q` of `F`.
    pub fn transport(&self, p: &DMatrix<C64>, q: &DMatrix<C64>) -> Option<BimoduleAction> {
        let pinv = p.clone().try_inverse()?;
        let lefts: Vec<DMatrix<C64>> = (0..self.f_dim)
            .map(|s| &pinv * self.left_op(&q.column(s).into_owned()) * p)
            .collect();
        let rights: Vec<DMatrix<C64>> = (0..self.f_dim)
            .map(|s| &pinv * self.right_op(&q.column(s).into_owned()) * p)
            .collect();
        if self.f_dim == 0 {
            return Some(BimoduleAction::zero(self.a_dim, 0));
        }
        BimoduleAction::from_operators(&lefts, &rights).ok()
    }
}

/// A named defect measured during validation.
#[derive(Clone, Debug, PartialEq)]
pub struct Defect {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub passed: bool,
    pub defects: Vec<Defect>,
    /// `max |e_i e_j|_1`; reported only.
    pub submultiplicativity: Option<f64>,
    /// Whether `beta . a = a . beta` on the basis (action validation only).
    pub symmetric: Option<bool>,
}

impl ValidationReport {
    pub fn max_defect(&self) -> f64 {
        self.defects.iter().map(|d| d.value).fold(0.0, f64::max)
    }
}

pub fn validate_algebra(alg: &FinDimAlgebra, tol: f64) -> ValidationReport {
    let assoc = alg.associativity_defect();
    let mut defects = vec![Defect {
        name: "associativity",
        value: assoc,
    }];
    let mut passed = assoc <= tol * alg.scale() * alg.scale();
    if let Some(u) = alg.unit() {
        let ud = alg.unit_defect(u);
        passed &= ud <= tol * alg.scale();
        defects.push(Defect {
            name: "unit",
            value: ud,
        });
    }
    let d = alg.dim();
    let mut sub: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            sub = sub.max(alg.basis_product(i, j).iter().map(|z| z.norm()).sum());
        }
    }
    ValidationReport {
        passed,
        defects,
        submultiplicativity: Some(sub),
        symmetric: None,
    }
}

/// Checks the three bimodule axioms and the three compatibility identities
/// on all basis triples.
pub fn validate_action(
    a: &FinDimAlgebra,
    f: &FinDimAlgebra,
    act: &BimoduleAction,
    tol: f64,
) -> Result<ValidationReport> {
    if act.a_dim() != a.dim() || act.f_dim() != f.dim() {
        return Err(Error::Shape(format!(
            "action of dims ({}, {}) for algebras of dims ({}, {})",
            act.f_dim(),
            act.a_dim(),
            f.dim(),
            a.dim()
        )));
    }
    let (da, df) = (a.dim(), f.dim());
    let lops: Vec<DMatrix<C64>> = (0..df).map(|p| act.left_op(&f.basis(p))).collect();
    let rops: Vec<DMatrix<C64>> = (0..df).map(|p| act.right_op(&f.basis(p))).collect();
    let mut worst = [0.0f64; 6];
    for p in 0..df {
        for q in 0..df {
            let pq = f.basis_product(p, q);
            let l_pq = act.left_op(&pq);
            let r_pq = act.right_op(&pq);
            // (bg).a = b.(g.a)
            worst[0] = worst[0].max((&l_pq - &lops[p] * &lops[q]).camax());
            // a.(bg) = (a.b).g
            worst[1] = worst[1].max((&r_pq - &rops[q] * &rops[p]).camax());
        }
        // (b.a).g = b.(a.g)
        for rq in &rops {
            worst[2] = worst[2].max((rq * &lops[p] - &lops[p] * rq).camax());
        }
    }
    for p in 0..df {
        for i in 0..da {
            let ai = a.basis(i);
            let la = a.left_mult(&ai);
            let ra = a.right_mult(&ai);
            // b.(a x) = (b.a) x  as maps of x
            let lhs = &lops[p] * &la;
            let rhs = a.left_mult(&(&lops[p] * &ai));
            worst[3] = worst[3].max((lhs - rhs).camax());
            // (x a).b = x (a.b)  as maps of x
            let lhs = &rops[p] * &ra;
            let rhs = a.right_mult(&(&rops[p] * &ai));
            worst[4] = worst[4].max((lhs - rhs).camax());
            // a (b.x) = (a.b) x  as maps of x
            let lhs = &la * &lops[p];
            let rhs = a.left_mult(&(&rops[p] * &ai));
            worst[5] = worst[5].max((lhs - rhs).camax());
        }
    }
    let names = [
        "left module",
        "right module",
        "bimodule",
        "compatibility b.(xy)=(b.x)y",
        "compatibility (xy).b=x(y.b)",
        "compatibility x(b.y)=(x.b)y",
    ];
    let scale = a.scale().max(f.scale()) * act.scale();
    let passed = worst.iter().all(|&w| w <= tol * scale * scale);
    let sym = act.symmetry_defect();
    Ok(ValidationReport {
        passed,
        defects: names
            .iter()
            .zip(worst)
            .map(|(&name, value)| Defect { name, value })
            .collect(),
        submultiplicativity: None,
        symmetric: Some(sym <= tol * act.scale()),
    })
}

pub fn l1_norm(x: &Element) -> f64 {
    x.iter().map(|z| z.norm()).sum()
}

/// `A`, `F` and an action of `F` on `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub a: FinDimAlgebra,
    pub f: FinDimAlgebra,
    pub action: BimoduleAction,
}

impl Triple {
    pub fn new(a: FinDimAlgebra, f: FinDimAlgebra, action: BimoduleAction) -> Result<Self> {
        if action.a_dim() != a.dim() || action.f_dim() != f.dim() {
            return Err(Error::Shape("action dimensions do not match the algebras".into()));
        }
        Ok(Triple { a, f, action })
    }

    pub fn a_dim(&self) -> usize {
        self.a.dim()
    }

    pub fn f_dim(&self) -> usize {
        self.f.dim()
    }

    pub fn dup_dim(&self) -> usize {
        self.a.dim() + self.f.dim()
    }

    pub fn validate(&self, tol: f64) -> Result<(ValidationReport, ValidationReport, ValidationReport)> {
        Ok((
            validate_algebra(&self.a, tol),
            validate_algebra(&self.f, tol),
            validate_action(&self.a, &self.f, &self.action, tol)?,
        ))
    }

    /// The duplication, after validating both algebras and the action.
    pub fn duplicate(&self, tol: f64) -> Result<FinDimAlgebra> {
        let (ra, rf, ract) = self.validate(tol)?;
        if !ra.passed || !rf.passed {
            return Err(Error::IncompatibleAction(format!(
                "factor algebra fails validation (defects {:.3e}, {:.3e})",
                ra.max_defect(),
                rf.max_defect()
            )));
        }
        if !ract.passed {
            return Err(Error::IncompatibleAction(format!(
                "action defect {:.3e}",
                ract.max_defect()
            )));
        }
        Ok(self.duplicate_unchecked(tol))
    }

    /// The duplication product without validating the inputs.
    pub fn duplicate_unchecked(&self, tol: f64) -> FinDimAlgebra {
        let (da, df) = (self.a_dim(), self.f_dim());
        let n = da + df;
        let mut mult = vec![C64::default(); n * n * n];
        let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        for i in 0..da {
            for j in 0..da {
                for k in 0..da {
                    mult[idx(i, j, k)] = self.a.c(i, j, k);
                }
            }
            for p in 0..df {
                for k in 0..da {
                    mult[idx(i, da + p, k)] = self.action.r(i, p, k);
                    mult[idx(da + p, i, k)] = self.action.l(p, i, k);
                }
            }
        }
        for p in 0..df {
            for q in 0..df {
                for s in 0..df {
                    mult[idx(da + p, da + q, da + s)] = self.f.c(p, q, s);
                }
            }
        }
        let labels = self
            .a
            .labels()
            .iter()
            .map(|l| format!("A:{l}"))
            .chain(self.f.labels().iter().map(|l| format!("F:{l}")))
            .collect();
        let mut dup = FinDimAlgebra {
            dim: n,
            labels,
            mult,
            unit: None,
        };
        if let Some(u) = self.f.unit() {
            let acts_as_unit = (0..da).all(|i| {
                let ai = self.a.basis(i);
                let l = self.action.act_left(u, &ai) - &ai;
                let r = self.action.act_right(&ai, u) - &ai;
                l.camax().max(r.camax()) <= tol * self.action.scale()
            });
            if acts_as_unit {
                let mut unit = DVector::zeros(n);
                unit.rows_mut(da, df).copy_from(u);
                dup.unit = Some(unit);
            }
        }
        dup
    }

    /// Splits a duplication coordinate vector into its `A` and `F` parts.
    pub fn split(&self, x: &Element) -> (Element, Element) {
        let da = self.a_dim();
        (
            x.rows(0, da).into_owned(),
            x.rows(da, self.f_dim()).into_owned(),
        )
    }

    pub fn join(&self, a: &Element, f: &Element) -> Element {
        let mut x = DVector::zeros(self.dup_dim());
        x.rows_mut(0, self.a_dim()).copy_from(a);
        x.rows_mut(self.a_dim(), self.f_dim()).copy_from(f);
        x
    }

    /// Left action operators `a -> f_p . a` for every basis element of `F`.
    pub fn left_action_ops(&self) -> Vec<DMatrix<C64>> {
        (0..self.f_dim())
            .map(|p| self.action.left_op(&self.f.basis(p)))
            .collect()
    }

    pub fn right_action_ops(&self) -> Vec<DMatrix<C64>> {
        (0..self.f_dim())
            .map(|p| self.action.right_op(&self.f.basis(p)))
            .collect()
    }

    /// Transport of structure along basis changes of both factors.
    pub fn transport(&self, p: &DMatrix<C64>, q: &DMatrix<C64>) -> Option<Triple> {
        Some(Triple {
            a: self.a.transport(p)?,
            f: self.f.transport(q)?,
            action: self.action.transport(p, q)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpanMode {
    /// `span{x y}`
    Squares,
    /// `span{beta . a}`
    LeftAction,
    /// `span{a . beta}`
    RightAction,
}

/// Span of all products of basis pairs in the given mode.
pub fn span_products(
    alg: &FinDimAlgebra,
    mode: SpanMode,
    act: Option<&BimoduleAction>,
    tol: f64,
) -> Result<Subspace> {
    let d = alg.dim();
    let mut vectors = Vec::new();
    match mode {
        SpanMode::Squares => {
            for i in 0..d {
                for j in 0..d {
                    vectors.push(alg.basis_product(i, j));
                }
            }
        }
        SpanMode::LeftAction | SpanMode::RightAction => {
            let act = act.ok_or(Error::MissingAction)?;
            if act.a_dim() != d {
                return Err(Error::Shape("action does not act on this algebra".into()));
            }
            for p in 0..act.f_dim() {
                let mut beta = DVector::zeros(act.f_dim());
                beta[p] = re(1.0);
                let op = if mode == SpanMode::LeftAction {
                    act.left_op(&beta)
                } else {
                    act.right_op(&beta)
                };
                vectors.extend(op.column_iter().map(|c| c.into_owned()));
            }
        }
    }
    if vectors.is_empty() {
        return Ok(Subspace::zero(d, tol));
    }
    Subspace::span(d, &vectors, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Lau,
    ModuleExtension,
    Triangular,
}

fn character_defect(f: &FinDimAlgebra, theta: &Element) -> f64 {
    let d = f.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let lhs: C64 = theta.dot(&f.basis_product(i, j));
            worst = worst.max((lhs - theta[i] * theta[j]).norm());
        }
    }
    worst
}

/// The action `beta . a = a . beta = theta(beta) a` for a character `theta`.
pub fn lau(a: FinDimAlgebra, f: FinDimAlgebra, theta: &Element, tol: f64) -> Result<Triple> {
    if theta.len() != f.dim() {
        return Err(Error::Shape("theta has the wrong length".into()));
    }
    let defect = character_defect(&f, theta);
    if theta.camax() == 0.0 || defect > tol * f.scale() {
        return Err(Error::NotACharacter(defect));
    }
    let da = a.dim();
    let ops: Vec<DMatrix<C64>> = (0..f.dim())
        .map(|p| DMatrix::<C64>::identity(da, da) * theta[p])
        .collect();
    let action = if f.dim() == 0 {
        BimoduleAction::zero(da, 0)
    } else {
        BimoduleAction::from_operators(&ops, &ops)?
    };
    Triple::new(a, f, action)
}

/// `X` with the zero product, acted on by `F`.
pub fn module_extension(
    x_labels: Vec<String>,
    f: FinDimAlgebra,
    left_ops: &[DMatrix<C64>],
    right_ops: &[DMatrix<C64>],
) -> Result<Triple> {
    let x = FinDimAlgebra::zero_product(x_labels);
    let action = if f.dim() == 0 {
        BimoduleAction::zero(x.dim(), 0)
    } else {
        BimoduleAction::from_operators(left_ops, right_ops)?
    };
    Triple::new(x, f, action)
}

/// Direct-sum algebra `A (+) B` with blockwise product.
pub fn direct_sum(a: &FinDimAlgebra, b: &FinDimAlgebra) -> FinDimAlgebra {
    let (da, db) = (a.dim(), b.dim());
    let labels = a
        .labels()
        .iter()
        .cloned()
        .chain(b.labels().iter().cloned())
        .collect();
    FinDimAlgebra::from_fn(labels, |i, j| {
        let mut v = vec![C64::default(); da + db];
        if i < da && j < da {
            v[..da].copy_from_slice(a.basis_product(i, j).as_slice());
        } else if i >= da && j >= da {
            v[da..].copy_from_slice(b.basis_product(i - da, j - da).as_slice());
        }
        v
    })
    .expect("shapes agree")
}

/// The module-extension form of the triangular algebra `[[A, M], [0, B]]`:
/// `M` with zero product, acted on by `A (+) B` through `(x, y).m = x.m`
/// and `m.(x, y) = m.y`.
///
/// `m_left[s]` is the matrix of `m -> a_s . m`, `m_right[t]` of `m -> m . b_t`.
pub fn triangular(
    a: &FinDimAlgebra,
    b: &FinDimAlgebra,
    m_labels: Vec<String>,
    m_left: &[DMatrix<C64>],
    m_right: &[DMatrix<C64>],
) -> Result<Triple> {
    let dm = m_labels.len();
    if m_left.len() != a.dim() || m_right.len() != b.dim() {
        return Err(Error::Shape("module operators do not match the algebras".into()));
    }
    let f = direct_sum(a, b);
    let zero = DMatrix::<C64>::zeros(dm, dm);
    let left: Vec<DMatrix<C64>> = m_left
        .iter()
        .cloned()
        .chain(std::iter::repeat_n(zero.clone(), b.dim()))
        .collect();
    let right: Vec<DMatrix<C64>> = std::iter::repeat_n(zero, a.dim())
        .chain(m_right.iter().cloned())
        .collect();
    module_extension(m_labels, f, &left, &right)
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// `C` with `e^2 = e`.
pub fn complex_unital() -> FinDimAlgebra {
    FinDimAlgebra::new(vec!["e".into()], vec![re(1.0)])
        .expect("dim 1")
        .with_unit(DVector::from_element(1, re(1.0)), 0.0)
        .expect("unit")
}

/// `C^n` with the pointwise product.
pub fn pointwise(n: usize) -> FinDimAlgebra {
    FinDimAlgebra::from_fn(labels("p", n), |i, j| {
        let mut v = vec![C64::default(); n];
        if i == j {
            v[i] = re(1.0);
        }
        v
    })
    .expect("shapes agree")
    .with_detected_unit(1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn unital_line_validates() {
        let r = validate_algebra(&complex_unital(), 1e-12);
        assert!(r.passed);
        assert_eq!(r.max_defect(), 0.0);
    }

    #[test]
    fn zero_line_validates() {
        let r = validate_algebra(&FinDimAlgebra::zero_product(labels("z", 1)), 1e-12);
        assert!(r.passed);
        assert_eq!(r.submultiplicativity, Some(0.0));
    }

    #[test]
    fn non_associative_tensor_fails() {
        // e1 e1 = e2, e2 e1 = e1
        let alg = FinDimAlgebra::from_fn(labels("e", 2), |i, j| match (i, j) {
            (0, 0) => vec![re(0.0), re(1.0)],
            (1, 0) => vec![re(1.0), re(0.0)],
            _ => vec![re(0.0); 2],
        })
        .unwrap();
        let r = validate_algebra(&alg, 1e-9);
        assert!(!r.passed);
        assert!(r.max_defect() > 0.5);
    }

    #[test]
    fn zero_action_is_valid_and_symmetric() {
        let t = fixtures::fix1();
        let r = validate_action(&t.a, &t.f, &t.action, 1e-12).unwrap();
        assert!(r.passed);
        assert_eq!(r.symmetric, Some(true));
    }

    #[test]
    fn lau_action_is_valid() {
        let t = fixtures::fix2();
        let r = validate_action(&t.a, &t.f, &t.action, 1e-12).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_defect(), 0.0);
    }

    #[test]
    fn lopsided_action_on_unital_line_fails() {
        // f.e = e but e.f = 0: a(f.b) = e != 0 = (a.f)b
        let t = fixtures::fix2();
        let one = DMatrix::from_element(1, 1, re(1.0));
        let zero = DMatrix::from_element(1, 1, re(0.0));
        let act = BimoduleAction::from_operators(&[one], &[zero]).unwrap();
        let r = validate_action(&t.a, &t.f, &act, 1e-9).unwrap();
        assert!(!r.passed);
        let bad = r
            .defects
            .iter()
            .find(|d| d.name == "compatibility x(b.y)=(x.b)y")
            .unwrap();
        assert!(bad.value > 0.5);
    }

    #[test]
    fn action_shape_mismatch() {
        let t = fixtures::fix2();
        let act = BimoduleAction::zero(2, 1);
        assert!(matches!(
            validate_action(&t.a, &t.f, &act, 1e-9),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn duplication_product_on_lau_line() {
        let dup = fixtures::fix2().duplicate(1e-12).unwrap();
        let x = DVector::from_vec(vec![re(1.0), re(2.0)]);
        let y = DVector::from_vec(vec![re(3.0), re(4.0)]);
        let z = dup.mul(&x, &y);
        assert_eq!(z, DVector::from_vec(vec![re(13.0), re(8.0)]));
        assert_eq!(dup.labels(), &["A:e".to_string(), "F:e".to_string()]);
        assert!(dup.unit().is_some());
    }

    #[test]
    fn zero_duplication_is_zero() {
        let dup = fixtures::fix1().duplicate(1e-12).unwrap();
        assert_eq!(dup.dim(), 2);
        assert!(dup.tensor().iter().all(|z| *z == C64::default()));
        let x = DVector::from_vec(vec![re(1.5), c64(-2.0, 1.0)]);
        assert_eq!(dup.mul(&x, &x).camax(), 0.0);
    }

    fn c64(a: f64, b: f64) -> C64 {
        C64::new(a, b)
    }

    #[test]
    fn invalid_action_is_rejected_by_duplicate() {
        let mut t = fixtures::fix2();
        let one = DMatrix::from_element(1, 1, re(1.0));
        let zero = DMatrix::from_element(1, 1, re(0.0));
        t.action = BimoduleAction::from_operators(&[one], &[zero]).unwrap();
        assert!(matches!(t.duplicate(1e-9), Err(Error::IncompatibleAction(_))));
    }

    #[test]
    fn module_extension_product() {
        let dup = fixtures::fix3().duplicate(1e-12).unwrap();
        let (a, b, a2, b2) = (2.0, 3.0, 5.0, 7.0);
        let z = dup.mul(
            &DVector::from_vec(vec![re(a), re(b)]),
            &DVector::from_vec(vec![re(a2), re(b2)]),
        );
        assert_eq!(z, DVector::from_vec(vec![re(a * b2 + b * a2), re(b * b2)]));
    }

    #[test]
    fn triangular_matches_matrix_multiplication() {
        let dup = fixtures::fix4().duplicate(1e-12).unwrap();
        // basis (E12; E11, E22)
        let to_mat = |v: &Element| [[v[1], v[0]], [re(0.0), v[2]]];
        let xs = [
            DVector::from_vec(vec![re(1.0), re(2.0), re(-1.0)]),
            DVector::from_vec(vec![c64(0.5, 1.0), re(-3.0), re(4.0)]),
        ];
        for x in &xs {
            for y in &xs {
                let (mx, my) = (to_mat(x), to_mat(y));
                let mut prod = [[re(0.0); 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            prod[i][j] += mx[i][k] * my[k][j];
                        }
                    }
                }
                let z = to_mat(&dup.mul(x, y));
                assert_eq!(z, prod);
            }
        }
    }

    #[test]
    fn lau_rejects_non_character() {
        let theta = DVector::from_element(1, re(2.0));
        let r = lau(complex_unital(), complex_unital(), &theta, 1e-9);
        assert!(matches!(r, Err(Error::NotACharacter(_))));
    }

    #[test]
    fn span_products_modes() {
        let s = span_products(&complex_unital(), SpanMode::Squares, None, 1e-9).unwrap();
        assert!(s.is_full());
        let z = FinDimAlgebra::zero_product(labels("z", 2));
        assert!(span_products(&z, SpanMode::Squares, None, 1e-9)
            .unwrap()
            .is_zero());
        let t = fixtures::fix4();
        let s = span_products(&t.a, SpanMode::LeftAction, Some(&t.action), 1e-9).unwrap();
        assert!(s.is_full());
        assert!(matches!(
            span_products(&t.a, SpanMode::RightAction, None, 1e-9),
            Err(Error::MissingAction)
        ));
    }

    #[test]
    fn l1_norm_values() {
        assert_eq!(l1_norm(&DVector::zeros(2)), 0.0);
        assert_eq!(l1_norm(&DVector::from_vec(vec![re(3.0), c64(0.0, 4.0)])), 7.0);
        let t = fixtures::fix2();
        let x = t.join(
            &DVector::from_element(1, re(-2.0)),
            &DVector::from_element(1, c64(3.0, 4.0)),
        );
        assert_eq!(l1_norm(&x), 7.0);
    }

    #[test]
    fn quotient_by_a_block_is_f() {
        let t = fixtures::fix4();
        let dup = t.duplicate(1e-12).unwrap();
        let da = t.a_dim();
        for p in 0..t.f_dim() {
            for q in 0..t.f_dim() {
                let prod = dup.basis_product(da + p, da + q);
                let expected = t.f.basis_product(p, q);
                assert_eq!(prod.rows(da, t.f_dim()).into_owned(), expected);
            }
        }
    }

    #[test]
    fn unit_detection() {
        assert!(pointwise(3).unit().is_some());
        let z = FinDimAlgebra::zero_product(labels("z", 2)).with_detected_unit(1e-9);
        assert!(z.unit().is_none());
        let t2 = fixtures::fix4().duplicate(1e-12).unwrap();
        let u = t2.detect_unit(1e-9).unwrap();
        assert!((u - DVector::from_vec(vec![re(0.0), re(1.0), re(1.0)])).camax() < 1e-12);
    }

    #[test]
    fn commutativity_criterion_on_fixtures() {
        for t in fixtures::all() {
            let dup = t.duplicate(1e-12).unwrap();
            let lhs = dup.is_commutative(1e-12);
            let sym = validate_action(&t.a, &t.f, &t.action, 1e-12)
                .unwrap()
                .symmetric
                .unwrap();
            let rhs = t.a.is_commutative(1e-12) && t.f.is_commutative(1e-12) && sym;
            assert_eq!(lhs, rhs);
        }
    }
}

//! Derivations into iterated duals, first cohomology, the block form of
//! derivations on a duplication, and the amenability predicates built on
//! them.
//!
//! A derivation `D : C -> X` is stored as an `m x d` matrix (column `i` is
//! `D(e_i)`), flattened column-major when it lives in a [`Subspace`].

use nalgebra::{DMatrix, DVector};

use crate::algebra::{span_products, Element, FinDimAlgebra, SpanMode, Triple};
use crate::duals::{essentiality, DualBimodule, DuplicationBlocks, EssentialityMode};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of, operator_matrix, solve_affine, stack, unflatten, Subspace, C64};

/// `{D : D(e_i e_j) = R(e_j) D(e_i) + L(e_i) D(e_j)}`.
pub fn derivation_space(alg: &FinDimAlgebra, module: &DualBimodule, tol: f64) -> Result<Subspace> {
    let d = alg.dim();
    let m = module.module_dim();
    check_module(alg, module)?;
    kernel_of(
        m * d,
        m * d * d,
        |v| {
            let dm = unflatten(v, m, d);
            let mut out = DVector::zeros(m * d * d);
            for i in 0..d {
                for j in 0..d {
                    let r = &dm * alg.basis_product(i, j)
                        - &module.right[j] * dm.column(i)
                        - &module.left[i] * dm.column(j);
                    out.rows_mut((i * d + j) * m, m).copy_from(&r);
                }
            }
            out
        },
        tol,
    )
}

fn check_module(alg: &FinDimAlgebra, module: &DualBimodule) -> Result<()> {
    if module.left.len() != alg.dim() || module.right.len() != alg.dim() {
        return Err(Error::Shape(format!(
            "bimodule over a {}-dimensional algebra used with dimension {}",
            module.left.len(),
            alg.dim()
        )));
    }
    Ok(())
}

/// `ad_x(c) = L(c) x - R(c) x`, as an `m x d` matrix.
pub fn inner_derivation(module: &DualBimodule, x: &Element) -> DMatrix<C64> {
    let d = module.left.len();
    let m = module.module_dim();
    let mut out = DMatrix::zeros(m, d);
    for c in 0..d {
        out.set_column(c, &(&module.left[c] * x - &module.right[c] * x));
    }
    out
}

pub fn inner_space(alg: &FinDimAlgebra, module: &DualBimodule, tol: f64) -> Result<Subspace> {
    check_module(alg, module)?;
    let m = module.module_dim();
    let d = alg.dim();
    let vs: Vec<Element> = (0..m)
        .map(|k| {
            let mut x = DVector::zeros(m);
            x[k] = C64::new(1.0, 0.0);
            crate::linalg::flatten(&inner_derivation(module, &x))
        })
        .collect();
    if vs.is_empty() {
        return Ok(Subspace::zero(m * d, tol));
    }
    Subspace::span(m * d, &vs, tol)
}

/// Derivations into the first dual whose pairing matrix
/// `G[i][j] = <D(e_i), e_j>` is antisymmetric.
fn cyclic_subspace(d: usize, tol: f64) -> Result<Subspace> {
    kernel_of(
        d * d,
        d * d,
        |v| {
            let m = unflatten(v, d, d);
            crate::linalg::flatten(&(&m + m.transpose()))
        },
        tol,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub level: usize,
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    pub dim_z1_cyclic: Option<usize>,
    pub dim_h1_cyclic: Option<usize>,
}

impl CohomologyReport {
    pub fn weakly_amenable(&self) -> bool {
        self.dim_h1 == 0
    }

    /// Every cyclic derivation is inner; only defined at level 1.
    pub fn cyclically_amenable(&self) -> Option<bool> {
        self.dim_h1_cyclic.map(|h| h == 0)
    }
}

/// `Z^1`, `B^1` and `H^1 = Z^1 / B^1` into the level-`n` dual of the
/// algebra; at level 1 also `Z^1_cyc` and `Z^1_cyc / (B^1 n Z^1_cyc)`.
pub fn cohomology(alg: &FinDimAlgebra, n: usize, tol: f64) -> Result<CohomologyReport> {
    let module = DualBimodule::regular(alg).nth(n);
    let z1 = derivation_space(alg, &module, tol)?;
    let b1 = inner_space(alg, &module, tol)?;
    let b1z = b1.intersect(&z1)?;
    let (dim_z1_cyclic, dim_h1_cyclic) = if n == 1 {
        let zc = z1.intersect(&cyclic_subspace(alg.dim(), tol)?)?;
        let bc = b1.intersect(&zc)?;
        (Some(zc.dim()), Some(zc.dim() - bc.dim()))
    } else {
        (None, None)
    };
    Ok(CohomologyReport {
        level: n,
        dim_z1: z1.dim(),
        dim_b1: b1z.dim(),
        dim_h1: z1.dim() - b1z.dim(),
        dim_z1_cyclic,
        dim_h1_cyclic,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `D((a, b)) = (D1_A a + D1_F b, D2_A a + D2_F b)` into the level-`n` dual.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationQuadruple {
    pub d1_a: DMatrix<C64>,
    pub d1_f: DMatrix<C64>,
    pub d2_a: DMatrix<C64>,
    pub d2_f: DMatrix<C64>,
    pub parity: Parity,
}

impl DerivationQuadruple {
    pub fn split(t: &Triple, d: &DMatrix<C64>, n: usize) -> Result<Self> {
        let (da, df) = (t.a_dim(), t.f_dim());
        if d.shape() != (da + df, da + df) {
            return Err(Error::Shape(format!(
                "map of shape {:?} on a duplication of dimension {}",
                d.shape(),
                da + df
            )));
        }
        Ok(DerivationQuadruple {
            d1_a: d.view((0, 0), (da, da)).into_owned(),
            d1_f: d.view((0, da), (da, df)).into_owned(),
            d2_a: d.view((da, 0), (df, da)).into_owned(),
            d2_f: d.view((da, da), (df, df)).into_owned(),
            parity: Parity::of(n),
        })
    }

    pub fn zero(t: &Triple, n: usize) -> Self {
        Self::split(t, &DMatrix::zeros(t.dup_dim(), t.dup_dim()), n).expect("square")
    }

    pub fn assemble(&self) -> DMatrix<C64> {
        let (da, df) = (self.d1_a.nrows(), self.d2_f.nrows());
        let mut m = DMatrix::zeros(da + df, da + df);
        m.view_mut((0, 0), (da, da)).copy_from(&self.d1_a);
        m.view_mut((0, da), (da, df)).copy_from(&self.d1_f);
        m.view_mut((da, 0), (df, da)).copy_from(&self.d2_a);
        m.view_mut((da, da), (df, df)).copy_from(&self.d2_f);
        m
    }

    fn from_vector(t: &Triple, v: &DVector<C64>, n: usize) -> Self {
        let k = t.dup_dim();
        Self::split(t, &unflatten(v, k, k), n).expect("square")
    }
}

/// Level-0 action operators and the level-`n` block operators.
struct Ops {
    lam0: Vec<DMatrix<C64>>,
    p0: Vec<DMatrix<C64>>,
    b: DuplicationBlocks,
}

impl Ops {
    fn new(t: &Triple, n: usize) -> Self {
        Ops {
            lam0: t.left_action_ops(),
            p0: t.right_action_ops(),
            b: DuplicationBlocks::new(t, n),
        }
    }
}

/// Named residual vectors of the block conditions; all vanish exactly when
/// the quadruple assembles to a derivation.
fn quadruple_residuals(t: &Triple, ops: &Ops, q: &DerivationQuadruple) -> Vec<(&'static str, DVector<C64>)> {
    let (da, df) = (t.a_dim(), t.f_dim());
    let b = &ops.b;
    let (la, ra) = (&b.a_on_a.left, &b.a_on_a.right);
    let (lam, p) = (&b.f_on_a.left, &b.f_on_a.right);
    let (lf, rf) = (&b.f_on_f.left, &b.f_on_f.right);
    let (lc, rc) = (&b.cross_left, &b.cross_right);
    let col = |m: &DMatrix<C64>, i: usize| m.column(i).into_owned();
    let mut out = Vec::new();
    match q.parity {
        Parity::Odd => {
            for i in 0..da {
                for j in 0..da {
                    let e = t.a.basis_product(i, j);
                    out.push((
                        "D1_A is a derivation",
                        &q.d1_a * &e - &ra[j] * col(&q.d1_a, i) - &la[i] * col(&q.d1_a, j),
                    ));
                    out.push((
                        "D2_A(ab) = D1_A(a).b + a.D1_A(b)",
                        &q.d2_a * &e - &rc[j] * col(&q.d1_a, i) - &lc[i] * col(&q.d1_a, j),
                    ));
                }
            }
            for pp in 0..df {
                for i in 0..da {
                    let ba = &ops.lam0[pp] * t.a.basis(i);
                    let ab = &ops.p0[pp] * t.a.basis(i);
                    out.push((
                        "D1_A(b.a) = D1_F(b) a + b D1_A(a)",
                        &q.d1_a * &ba - &ra[i] * col(&q.d1_f, pp) - &lam[pp] * col(&q.d1_a, i),
                    ));
                    out.push((
                        "D1_A(a.b) = a D1_F(b) + D1_A(a) b",
                        &q.d1_a * &ab - &la[i] * col(&q.d1_f, pp) - &p[pp] * col(&q.d1_a, i),
                    ));
                    out.push((
                        "D2_A(b.a) = D1_F(b).a + b D2_A(a)",
                        &q.d2_a * &ba - &rc[i] * col(&q.d1_f, pp) - &lf[pp] * col(&q.d2_a, i),
                    ));
                    out.push((
                        "D2_A(a.b) = a.D1_F(b) + D2_A(a) b",
                        &q.d2_a * &ab - &lc[i] * col(&q.d1_f, pp) - &rf[pp] * col(&q.d2_a, i),
                    ));
                }
            }
        }
        Parity::Even => {
            for i in 0..da {
                for j in 0..da {
                    let e = t.a.basis_product(i, j);
                    out.push((
                        "D1_A(ab) = D1_A(a) b + D2_A(a).b + a D1_A(b) + a.D2_A(b)",
                        &q.d1_a * &e
                            - &ra[j] * col(&q.d1_a, i)
                            - &rc[j] * col(&q.d2_a, i)
                            - &la[i] * col(&q.d1_a, j)
                            - &lc[i] * col(&q.d2_a, j),
                    ));
                    out.push(("D2_A(ab) = 0", &q.d2_a * &e));
                }
            }
            for pp in 0..df {
                for i in 0..da {
                    let ba = &ops.lam0[pp] * t.a.basis(i);
                    let ab = &ops.p0[pp] * t.a.basis(i);
                    out.push((
                        "D1_A(b.a) = D1_F(b) a + D2_F(b).a + b D1_A(a)",
                        &q.d1_a * &ba
                            - &ra[i] * col(&q.d1_f, pp)
                            - &rc[i] * col(&q.d2_f, pp)
                            - &lam[pp] * col(&q.d1_a, i),
                    ));
                    out.push((
                        "D1_A(a.b) = a D1_F(b) + a.D2_F(b) + D1_A(a) b",
                        &q.d1_a * &ab
                            - &la[i] * col(&q.d1_f, pp)
                            - &lc[i] * col(&q.d2_f, pp)
                            - &p[pp] * col(&q.d1_a, i),
                    ));
                    out.push((
                        "D2_A is a left F-module map",
                        &q.d2_a * &ba - &lf[pp] * col(&q.d2_a, i),
                    ));
                    out.push((
                        "D2_A is a right F-module map",
                        &q.d2_a * &ab - &rf[pp] * col(&q.d2_a, i),
                    ));
                }
            }
        }
    }
    for pp in 0..df {
        for qq in 0..df {
            let e = t.f.basis_product(pp, qq);
            out.push((
                "D1_F is a derivation",
                &q.d1_f * &e - &p[qq] * col(&q.d1_f, pp) - &lam[pp] * col(&q.d1_f, qq),
            ));
            out.push((
                "D2_F is a derivation",
                &q.d2_f * &e - &rf[qq] * col(&q.d2_f, pp) - &lf[pp] * col(&q.d2_f, qq),
            ));
        }
    }
    out
}

fn cyclic_residuals(q: &DerivationQuadruple) -> Vec<(&'static str, DVector<C64>)> {
    let flat = crate::linalg::flatten;
    vec![
        ("D1_A is cyclic", flat(&(&q.d1_a + q.d1_a.transpose()))),
        ("D2_F is cyclic", flat(&(&q.d2_f + q.d2_f.transpose()))),
        ("D2_A^T + D1_F = 0", flat(&(q.d2_a.transpose() + &q.d1_f))),
    ]
}

fn defect_scale(t: &Triple, d: &DMatrix<C64>) -> f64 {
    t.a.scale().max(t.f.scale()) * t.action.scale() * d.camax().max(1.0)
}

/// The four blocks of a derivation of the duplication into its level-`n`
/// dual, after checking every block condition.
pub fn decompose_derivation(
    t: &Triple,
    d: &DMatrix<C64>,
    n: usize,
    tol: f64,
) -> Result<DerivationQuadruple> {
    let q = DerivationQuadruple::split(t, d, n)?;
    let ops = Ops::new(t, n);
    let bound = tol * defect_scale(t, d);
    for (condition, r) in quadruple_residuals(t, &ops, &q) {
        let defect = r.camax();
        if defect > bound {
            return Err(Error::DecompositionDefect {
                condition: condition.into(),
                defect,
            });
        }
    }
    Ok(q)
}

/// Whether a quadruple satisfies the extra cyclic conditions (level 1).
pub fn is_cyclic_quadruple(t: &Triple, q: &DerivationQuadruple, tol: f64) -> bool {
    let bound = tol * defect_scale(t, &q.assemble());
    cyclic_residuals(q).iter().all(|(_, r)| r.camax() <= bound)
}

fn residual_space(
    t: &Triple,
    n: usize,
    tol: f64,
    extra: impl Fn(&DerivationQuadruple) -> Vec<(&'static str, DVector<C64>)>,
) -> Result<Subspace> {
    let k = t.dup_dim();
    let ops = Ops::new(t, n);
    let probe = DerivationQuadruple::zero(t, n);
    let n_out: usize = quadruple_residuals(t, &ops, &probe)
        .iter()
        .chain(extra(&probe).iter())
        .map(|(_, r)| r.len())
        .sum();
    kernel_of(
        k * k,
        n_out,
        |v| {
            let q = DerivationQuadruple::from_vector(t, v, n);
            let mut parts: Vec<DVector<C64>> =
                quadruple_residuals(t, &ops, &q).into_iter().map(|(_, r)| r).collect();
            parts.extend(extra(&q).into_iter().map(|(_, r)| r));
            let n: usize = parts.iter().map(|p| p.len()).sum();
            let mut out = DVector::zeros(n);
            let mut at = 0;
            for p in parts {
                out.rows_mut(at, p.len()).copy_from(&p);
                at += p.len();
            }
            out
        },
        tol,
    )
}

/// Quadruples satisfying the block conditions at level `n`, solved over the
/// blocks and returned in flattened duplication-operator coordinates.
pub fn quadruple_space(t: &Triple, n: usize, tol: f64) -> Result<Subspace> {
    residual_space(t, n, tol, |_| Vec::new())
}

/// Quadruples satisfying the block conditions at level 1 together with the
/// cyclic conditions, including `D2_A^T + D1_F = 0`.
pub fn cyclic_quadruple_space(t: &Triple, tol: f64) -> Result<Subspace> {
    residual_space(t, 1, tol, cyclic_residuals)
}

/// A pair `(x_A, x_F)` in the level-`n` duals whose inner derivation has the
/// given blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerWitness {
    pub x_a: Element,
    pub x_f: Element,
}

/// The blocks of `ad_(x_A, x_F)` computed from the factor operators.
pub fn inner_quadruple(t: &Triple, x_a: &Element, x_f: &Element, n: usize) -> DerivationQuadruple {
    let ops = Ops::new(t, n);
    inner_blocks(t, &ops, x_a, x_f, n)
}

fn inner_blocks(t: &Triple, ops: &Ops, x_a: &Element, x_f: &Element, n: usize) -> DerivationQuadruple {
    let (da, df) = (t.a_dim(), t.f_dim());
    let b = &ops.b;
    let mut q = DerivationQuadruple::zero(t, n);
    for i in 0..da {
        let mut c = &b.a_on_a.left[i] * x_a - &b.a_on_a.right[i] * x_a;
        match q.parity {
            Parity::Odd => {
                q.d2_a
                    .set_column(i, &(&b.cross_left[i] * x_a - &b.cross_right[i] * x_a));
            }
            Parity::Even => {
                c += &b.cross_left[i] * x_f - &b.cross_right[i] * x_f;
            }
        }
        q.d1_a.set_column(i, &c);
    }
    for p in 0..df {
        q.d1_f
            .set_column(p, &(&b.f_on_a.left[p] * x_a - &b.f_on_a.right[p] * x_a));
        q.d2_f
            .set_column(p, &(&b.f_on_f.left[p] * x_f - &b.f_on_f.right[p] * x_f));
    }
    q
}

/// Solves for a witness `(x_A, x_F)` realizing `q` as an inner derivation;
/// `None` when no witness exists.
pub fn is_inner_match(
    t: &Triple,
    q: &DerivationQuadruple,
    n: usize,
    tol: f64,
) -> Result<Option<InnerWitness>> {
    let (da, df) = (t.a_dim(), t.f_dim());
    let k = da + df;
    let ops = Ops::new(t, n);
    let m = operator_matrix(k, k * k, |x| {
        let xa = x.rows(0, da).into_owned();
        let xf = x.rows(da, df).into_owned();
        crate::linalg::flatten(&inner_blocks(t, &ops, &xa, &xf, n).assemble())
    });
    let target = crate::linalg::flatten(&q.assemble());
    match solve_affine(&m, &target, tol) {
        Ok(x) => Ok(Some(InnerWitness {
            x_a: x.rows(0, da).into_owned(),
            x_f: x.rows(da, df).into_owned(),
        })),
        Err(Error::Unsolvable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DtReport {
    pub is_derivation: bool,
    pub inner: Option<InnerWitness>,
}

/// For `T : A -> F^(2n+1)` vanishing on `A^2` and commuting with both
/// actions, checks that `(a, b) -> (0, T a)` is a derivation and decides
/// whether it is inner.
pub fn corollary_dt_check(t: &Triple, tm: &DMatrix<C64>, n: usize, tol: f64) -> Result<DtReport> {
    let level = 2 * n + 1;
    let (da, df) = (t.a_dim(), t.f_dim());
    if tm.shape() != (df, da) {
        return Err(Error::Shape(format!(
            "T has shape {:?}, expected {df}x{da}",
            tm.shape()
        )));
    }
    let b = DuplicationBlocks::new(t, level);
    let bound = tol * defect_scale(t, tm);
    let mut worst: f64 = 0.0;
    for i in 0..da {
        for j in 0..da {
            worst = worst.max((tm * t.a.basis_product(i, j)).camax());
        }
    }
    if worst > bound {
        return Err(Error::HypothesisNotMet(format!(
            "T does not vanish on products (defect {worst:.3e})"
        )));
    }
    let (lam0, p0) = (t.left_action_ops(), t.right_action_ops());
    for p in 0..df {
        worst = worst.max((tm * &lam0[p] - &b.f_on_f.left[p] * tm).camax());
        worst = worst.max((tm * &p0[p] - &b.f_on_f.right[p] * tm).camax());
    }
    if worst > bound {
        return Err(Error::HypothesisNotMet(format!(
            "T is not an F-bimodule map (defect {worst:.3e})"
        )));
    }
    let mut q = DerivationQuadruple::zero(t, level);
    q.d2_a = tm.clone();
    let is_derivation = decompose_derivation(t, &q.assemble(), level, tol).is_ok();
    let inner = is_inner_match(t, &q, level, tol)?;
    Ok(DtReport {
        is_derivation,
        inner,
    })
}

/// Derivations `A -> A^(n)` that also satisfy `D(b.a) = b D(a)` and
/// `D(a.b) = D(a) b` for the dual actions of `F`.
pub fn module_derivation_space(t: &Triple, n: usize, tol: f64) -> Result<Subspace> {
    if n % 2 == 1 {
        return Err(Error::InvalidLevel(n, "module derivations need an even level"));
    }
    let da = t.a_dim();
    let df = t.f_dim();
    let module = DualBimodule::regular(&t.a).nth(n);
    let fa = DualBimodule::from_action(&t.action).nth(n);
    let (lam0, p0) = (t.left_action_ops(), t.right_action_ops());
    let z1 = derivation_space(&t.a, &module, tol)?;
    let module_maps = kernel_of(
        da * da,
        2 * df * da * da,
        |v| {
            let dm = unflatten(v, da, da);
            let parts: Vec<DMatrix<C64>> = (0..df)
                .flat_map(|p| {
                    [
                        &dm * &lam0[p] - &fa.left[p] * &dm,
                        &dm * &p0[p] - &fa.right[p] * &dm,
                    ]
                })
                .collect();
            stack(&parts)
        },
        tol,
    )?;
    z1.intersect(&module_maps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitalFormReport {
    pub level: usize,
    pub derivations_checked: usize,
    pub max_defect: f64,
    pub passed: bool,
}

/// With `A` unital (identity `e`), checks on a basis of derivations of the
/// duplication: at odd levels `D1_F(b) = D1_A(e.b) = D1_A(b.e)` and
/// `D2_A(a) = D1_A(a).e = e.D1_A(a)`; at even levels `D2_A = 0` and
/// `D1_F(b) = D1_A(e.b) - e.D2_F(b) = D1_A(b.e) - D2_F(b).e`.
pub fn unital_form_check(t: &Triple, n: usize, tol: f64) -> Result<UnitalFormReport> {
    let e = t
        .a
        .unit()
        .cloned()
        .or_else(|| t.a.detect_unit(tol))
        .ok_or(Error::UnitRequired)?;
    let dup = t.duplicate(tol)?;
    let k = dup.dim();
    let z1 = derivation_space(&dup, &DualBimodule::regular(&dup).nth(n), tol)?;
    let b = DuplicationBlocks::new(t, n);
    let (lam0, p0) = (t.left_action_ops(), t.right_action_ops());
    let lc_e = combine(&b.cross_left, &e);
    let rc_e = combine(&b.cross_right, &e);
    let mut worst: f64 = 0.0;
    for v in z1.vectors() {
        let q = DerivationQuadruple::split(t, &unflatten(&v, k, k), n)?;
        for p in 0..t.f_dim() {
            let e_dot_b = &p0[p] * &e;
            let b_dot_e = &lam0[p] * &e;
            let d1f = q.d1_f.column(p).into_owned();
            let (lhs_l, lhs_r) = match q.parity {
                Parity::Odd => (&q.d1_a * &e_dot_b, &q.d1_a * &b_dot_e),
                Parity::Even => {
                    let d2f = q.d2_f.column(p).into_owned();
                    (&q.d1_a * &e_dot_b - &lc_e * &d2f, &q.d1_a * &b_dot_e - &rc_e * &d2f)
                }
            };
            worst = worst.max((&d1f - lhs_l).camax()).max((&d1f - lhs_r).camax());
        }
        match q.parity {
            Parity::Odd => {
                worst = worst.max((&q.d2_a - &rc_e * &q.d1_a).camax());
                worst = worst.max((&q.d2_a - &lc_e * &q.d1_a).camax());
            }
            Parity::Even => worst = worst.max(q.d2_a.camax()),
        }
    }
    Ok(UnitalFormReport {
        level: n,
        derivations_checked: z1.dim(),
        max_defect: worst,
        passed: worst <= tol * t.a.scale().max(t.f.scale()) * t.action.scale(),
    })
}

fn combine(ops: &[DMatrix<C64>], c: &Element) -> DMatrix<C64> {
    let (r, cols) = ops.first().map_or((0, 0), |m| m.shape());
    ops.iter()
        .zip(c.iter())
        .fold(DMatrix::zeros(r, cols), |acc, (m, &x)| acc + m * x)
}

/// Whether every derivation `A -> A^(2n+1)` extends: for each basis `D1_A`
/// of `Z^1(A, A^(2n+1))` the linear system for `D1_F` (a derivation) and
/// `D2_A` under the odd block conditions is solvable. Linearity in `D1_A`
/// makes a basis sufficient.
pub fn property_h(t: &Triple, n: usize, tol: f64) -> Result<bool> {
    let level = 2 * n + 1;
    let (da, df) = (t.a_dim(), t.f_dim());
    let z1 = derivation_space(&t.a, &DualBimodule::regular(&t.a).nth(level), tol)?;
    let ops = Ops::new(t, level);
    let unknowns = da * df + df * da;
    let build = |d1a: &DMatrix<C64>, u: &DVector<C64>| {
        let mut q = DerivationQuadruple::zero(t, level);
        q.d1_a = d1a.clone();
        q.d1_f = unflatten(&u.rows(0, da * df).into_owned(), da, df);
        q.d2_a = unflatten(&u.rows(da * df, df * da).into_owned(), df, da);
        let parts: Vec<DVector<C64>> = quadruple_residuals(t, &ops, &q)
            .into_iter()
            .map(|(_, r)| r)
            .collect();
        let n: usize = parts.iter().map(|p| p.len()).sum();
        let mut out = DVector::zeros(n);
        let mut at = 0;
        for p in parts {
            out.rows_mut(at, p.len()).copy_from(&p);
            at += p.len();
        }
        out
    };
    let zero_d1a = DMatrix::zeros(da, da);
    let n_out = build(&zero_d1a, &DVector::zeros(unknowns)).len();
    let m = operator_matrix(unknowns, n_out, |u| build(&zero_d1a, u));
    for v in z1.vectors() {
        let d1a = unflatten(&v, da, da);
        let rhs = -build(&d1a, &DVector::zeros(unknowns));
        match solve_affine(&m, &rhs, tol) {
            Ok(_) => {}
            Err(Error::Unsolvable { .. }) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// One row of the amenability table.
#[derive(Clone, Debug, PartialEq)]
pub struct AmenabilityRow {
    pub level: usize,
    pub a_weak: bool,
    pub f_weak: bool,
    pub dup_weak: bool,
    /// `<A^2> = A`.
    pub squares_full: bool,
    /// At odd level `2k+1`: `<A A^(2k)> = A^(2k)` or `<A^(2k) A> = A^(2k)`.
    pub essential: Option<bool>,
    /// Property H at odd levels.
    pub property_h: Option<bool>,
    pub a_unital: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmenabilityTable {
    pub rows: Vec<AmenabilityRow>,
    pub a_cyclic: bool,
    pub f_cyclic: bool,
    pub dup_cyclic: bool,
    pub property_h1: bool,
}

pub fn amenability_predicates(t: &Triple, max_level: usize, tol: f64) -> Result<AmenabilityTable> {
    let dup = t.duplicate(tol)?;
    let squares_full = span_products(&t.a, SpanMode::Squares, None, tol)?.is_full();
    let a_unital = t.a.unit().is_some() || t.a.detect_unit(tol).is_some();
    let mut rows = Vec::new();
    for level in 0..=max_level {
        let odd = level % 2 == 1;
        let essential = if odd {
            let k = level - 1;
            Some(
                essentiality(t, k, EssentialityMode::AlgebraLeft, tol)?
                    || essentiality(t, k, EssentialityMode::AlgebraRight, tol)?,
            )
        } else {
            None
        };
        rows.push(AmenabilityRow {
            level,
            a_weak: cohomology(&t.a, level, tol)?.weakly_amenable(),
            f_weak: cohomology(&t.f, level, tol)?.weakly_amenable(),
            dup_weak: cohomology(&dup, level, tol)?.weakly_amenable(),
            squares_full,
            essential,
            property_h: if odd { Some(property_h(t, level / 2, tol)?) } else { None },
            a_unital,
        });
    }
    let cyc = |alg: &FinDimAlgebra| -> Result<bool> {
        Ok(cohomology(alg, 1, tol)?.cyclically_amenable().unwrap_or(false))
    };
    Ok(AmenabilityTable {
        rows,
        a_cyclic: cyc(&t.a)?,
        f_cyclic: cyc(&t.f)?,
        dup_cyclic: cyc(&dup)?,
        property_h1: property_h(t, 0, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_unital, labels, pointwise};
    use crate::fixtures;
    use crate::linalg::{flatten, re};

    const TOL: f64 = 1e-9;

    fn regular(alg: &FinDimAlgebra, n: usize) -> DualBimodule {
        DualBimodule::regular(alg).nth(n)
    }

    #[test]
    fn derivation_space_examples() {
        let c = complex_unital();
        assert_eq!(derivation_space(&c, &regular(&c, 0), TOL).unwrap().dim(), 0);
        let dup = fixtures::fix1().duplicate(TOL).unwrap();
        assert_eq!(derivation_space(&dup, &regular(&dup, 1), TOL).unwrap().dim(), 4);
        let c2 = pointwise(2);
        assert_eq!(derivation_space(&c2, &regular(&c2, 0), TOL).unwrap().dim(), 0);
    }

    #[test]
    fn inner_space_examples() {
        let c2 = pointwise(2);
        assert_eq!(inner_space(&c2, &regular(&c2, 0), TOL).unwrap().dim(), 0);
        let dup = fixtures::fix1().duplicate(TOL).unwrap();
        assert_eq!(inner_space(&dup, &regular(&dup, 1), TOL).unwrap().dim(), 0);
        let tri = fixtures::fix4().duplicate(TOL).unwrap();
        // ad_E11 and ad_E12 are independent; ad_E22 = -ad_E11
        assert_eq!(inner_space(&tri, &regular(&tri, 0), TOL).unwrap().dim(), 2);
    }

    #[test]
    fn zero_duplication_is_not_cyclically_amenable() {
        let dup = fixtures::fix1().duplicate(TOL).unwrap();
        let r = cohomology(&dup, 1, TOL).unwrap();
        assert_eq!((r.dim_z1, r.dim_b1, r.dim_h1), (4, 0, 4));
        assert_eq!(r.dim_z1_cyclic, Some(1));
        assert_eq!(r.dim_h1_cyclic, Some(1));
        assert_eq!(r.cyclically_amenable(), Some(false));
    }

    #[test]
    fn zero_line_is_cyclically_amenable() {
        let z = FinDimAlgebra::zero_product(labels("z", 1));
        let r = cohomology(&z, 1, TOL).unwrap();
        assert_eq!((r.dim_z1, r.dim_z1_cyclic, r.dim_h1_cyclic), (1, Some(0), Some(0)));
    }

    #[test]
    fn pointwise_has_no_cohomology() {
        for n in 0..4 {
            assert_eq!(cohomology(&pointwise(2), n, TOL).unwrap().dim_h1, 0);
        }
    }

    #[test]
    fn inner_derivation_blocks_on_lau_line() {
        let t = fixtures::fix2();
        let dup = t.duplicate(TOL).unwrap();
        let x = DVector::from_vec(vec![re(2.0), re(-1.0)]);
        let ad = inner_derivation(&regular(&dup, 1), &x);
        let q = decompose_derivation(&t, &ad, 1, TOL).unwrap();
        let expected = inner_quadruple(&t, &x.rows(0, 1).into_owned(), &x.rows(1, 1).into_owned(), 1);
        assert_eq!(q, expected);
    }

    #[test]
    fn zero_derivation() {
        let t = fixtures::fix2();
        let q = decompose_derivation(&t, &DMatrix::zeros(2, 2), 1, TOL).unwrap();
        assert_eq!(q, DerivationQuadruple::zero(&t, 1));
        let w = is_inner_match(&t, &q, 1, TOL).unwrap().unwrap();
        assert!(w.x_a.camax() < 1e-12 && w.x_f.camax() < 1e-12);
    }

    #[test]
    fn zero_duplication_blocks_are_unconstrained() {
        let t = fixtures::fix1();
        let d = DMatrix::from_row_slice(2, 2, &[re(1.0), re(2.0), re(3.0), re(4.0)]);
        assert!(decompose_derivation(&t, &d, 1, TOL).is_ok());
        let anti = DMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(-1.0), re(0.0)]);
        let q = decompose_derivation(&t, &anti, 1, TOL).unwrap();
        assert!(is_inner_match(&t, &q, 1, TOL).unwrap().is_none());
    }

    #[test]
    fn non_derivation_is_rejected() {
        let t = fixtures::fix2();
        let d = DMatrix::identity(2, 2);
        assert!(matches!(
            decompose_derivation(&t, &d, 0, TOL),
            Err(Error::DecompositionDefect { .. })
        ));
    }

    #[test]
    fn quadruple_space_matches_on_fixtures() {
        for t in fixtures::all() {
            let dup = t.duplicate(TOL).unwrap();
            for n in 0..3 {
                let z1 = derivation_space(&dup, &regular(&dup, n), TOL).unwrap();
                let q = quadruple_space(&t, n, TOL).unwrap();
                assert_eq!(z1.dim(), q.dim(), "level {n}");
                assert!(z1.equals(&q).unwrap());
            }
        }
    }

    #[test]
    fn cyclic_quadruples_match_on_fixtures() {
        for t in fixtures::all() {
            let dup = t.duplicate(TOL).unwrap();
            let z1 = derivation_space(&dup, &regular(&dup, 1), TOL).unwrap();
            let zc = z1.intersect(&cyclic_subspace(dup.dim(), TOL).unwrap()).unwrap();
            let q = cyclic_quadruple_space(&t, TOL).unwrap();
            assert!(zc.equals(&q).unwrap());
        }
    }

    #[test]
    fn dt_examples() {
        let t = fixtures::fix1();
        let r = corollary_dt_check(&t, &DMatrix::zeros(1, 1), 0, TOL).unwrap();
        assert!(r.is_derivation && r.inner.is_some());
        let r = corollary_dt_check(&t, &DMatrix::from_element(1, 1, re(2.0)), 0, TOL).unwrap();
        assert!(r.is_derivation && r.inner.is_none());
        let t = fixtures::fix3();
        let r = corollary_dt_check(&t, &DMatrix::from_element(1, 1, re(1.0)), 0, TOL).unwrap();
        assert!(r.is_derivation);
        // a unital A has A^2 = A, so a nonzero T breaks the hypothesis
        let t = fixtures::fix2();
        assert!(matches!(
            corollary_dt_check(&t, &DMatrix::from_element(1, 1, re(1.0)), 0, TOL),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn module_derivation_examples() {
        let t = fixtures::fix2();
        assert_eq!(module_derivation_space(&t, 0, TOL).unwrap().dim(), 0);
        let t = fixtures::fix1();
        assert_eq!(module_derivation_space(&t, 0, TOL).unwrap().dim(), 1);
        assert!(matches!(
            module_derivation_space(&t, 1, TOL),
            Err(Error::InvalidLevel(1, _))
        ));
        let z = FinDimAlgebra::zero_product(labels("z", 2));
        let t = Triple::new(z.clone(), complex_unital(), crate::BimoduleAction::zero(2, 1)).unwrap();
        let plain = derivation_space(&z, &regular(&z, 2), TOL).unwrap();
        assert!(module_derivation_space(&t, 2, TOL).unwrap().equals(&plain).unwrap());
    }

    #[test]
    fn unital_forms() {
        for n in 0..4 {
            let r = unital_form_check(&fixtures::fix2(), n, TOL).unwrap();
            assert!(r.passed, "level {n}: {}", r.max_defect);
        }
        assert!(matches!(
            unital_form_check(&fixtures::fix1(), 1, TOL),
            Err(Error::UnitRequired)
        ));
    }

    #[test]
    fn property_h_examples() {
        assert!(property_h(&fixtures::fix2(), 0, TOL).unwrap());
        assert!(property_h(&fixtures::fix2(), 1, TOL).unwrap());
        // A = F = C with the natural actions
        let c = complex_unital();
        let one = DMatrix::from_element(1, 1, re(1.0));
        let act = crate::BimoduleAction::from_operators(std::slice::from_ref(&one), std::slice::from_ref(&one)).unwrap();
        let natural = Triple::new(c.clone(), c, act).unwrap();
        assert!(property_h(&natural, 0, TOL).unwrap());
        // a zero-product A under a character action: D1_A must vanish
        assert!(!property_h(&fixtures::fix3(), 0, TOL).unwrap());
    }

    #[test]
    fn amenability_examples() {
        let tab = amenability_predicates(&fixtures::fix1(), 1, TOL).unwrap();
        assert!(tab.a_cyclic && tab.f_cyclic && !tab.dup_cyclic);

        let tab = amenability_predicates(&fixtures::fix2(), 2, TOL).unwrap();
        for row in &tab.rows {
            assert!(row.a_weak && row.f_weak && row.dup_weak);
        }
        assert!(tab.a_cyclic && tab.f_cyclic && tab.dup_cyclic);
    }

    #[test]
    fn inner_roundtrip_on_fixtures() {
        for t in fixtures::all() {
            let dup = t.duplicate(TOL).unwrap();
            for n in 0..3 {
                let module = regular(&dup, n);
                let x = DVector::from_fn(dup.dim(), |i, _| C64::new(1.0 + i as f64, -0.5 * i as f64));
                let ad = inner_derivation(&module, &x);
                let q = decompose_derivation(&t, &ad, n, TOL).unwrap();
                let w = is_inner_match(&t, &q, n, TOL).unwrap().unwrap();
                let back = inner_derivation(&module, &t.join(&w.x_a, &w.x_f));
                assert!((flatten(&back) - flatten(&ad)).camax() < 1e-9);
            }
        }
    }
}

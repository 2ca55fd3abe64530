//! Left multipliers `T(cx) = c T(x)` and their block form on a duplication.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{span_products, FinDimAlgebra, SpanMode, Triple};
use crate::error::{Error, Result};
use crate::linalg::{flatten, kernel_of, stack, unflatten, Subspace, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplierSide {
    /// `T L_c = L_c T`
    Left,
    /// `T R_c = R_c T`
    Right,
}

/// Operators commuting with every basis multiplication on the given side,
/// as a subspace of the column-major flattened `d x d` matrices.
pub fn multiplier_space(alg: &FinDimAlgebra, side: MultiplierSide, tol: f64) -> Result<Subspace> {
    let d = alg.dim();
    let ops: Vec<DMatrix<C64>> = (0..d)
        .map(|i| match side {
            MultiplierSide::Left => alg.left_mult_basis(i),
            MultiplierSide::Right => alg.right_mult_basis(i),
        })
        .collect();
    kernel_of(
        d * d,
        d * d * d,
        |v| {
            let t = unflatten(v, d, d);
            let parts: Vec<DMatrix<C64>> = ops.iter().map(|l| &t * l - l * &t).collect();
            stack(&parts)
        },
        tol,
    )
}

pub fn left_multiplier_space(alg: &FinDimAlgebra, tol: f64) -> Result<Subspace> {
    multiplier_space(alg, MultiplierSide::Left, tol)
}

/// `T((a, b)) = (T1_A a + T1_F b, T2_A a + T2_F b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierQuadruple {
    pub t1_a: DMatrix<C64>,
    pub t1_f: DMatrix<C64>,
    pub t2_a: DMatrix<C64>,
    pub t2_f: DMatrix<C64>,
}

impl MultiplierQuadruple {
    pub fn split(t: &Triple, op: &DMatrix<C64>) -> Result<Self> {
        let (da, df) = (t.a_dim(), t.f_dim());
        if op.shape() != (da + df, da + df) {
            return Err(Error::Shape(format!(
                "operator of shape {:?} on a duplication of dimension {}",
                op.shape(),
                da + df
            )));
        }
        Ok(MultiplierQuadruple {
            t1_a: op.view((0, 0), (da, da)).into_owned(),
            t1_f: op.view((0, da), (da, df)).into_owned(),
            t2_a: op.view((da, 0), (df, da)).into_owned(),
            t2_f: op.view((da, da), (df, df)).into_owned(),
        })
    }

    pub fn assemble(&self) -> DMatrix<C64> {
        let (da, df) = (self.t1_a.nrows(), self.t2_f.nrows());
        let mut m = DMatrix::zeros(da + df, da + df);
        m.view_mut((0, 0), (da, da)).copy_from(&self.t1_a);
        m.view_mut((0, da), (da, df)).copy_from(&self.t1_f);
        m.view_mut((da, 0), (df, da)).copy_from(&self.t2_a);
        m.view_mut((da, da), (df, df)).copy_from(&self.t2_f);
        m
    }

    fn from_vector(t: &Triple, v: &DVector<C64>) -> Self {
        let (da, df) = (t.a_dim(), t.f_dim());
        let mut at = 0;
        let mut take = |r: usize, c: usize| {
            let m = unflatten(&v.rows(at, r * c).into_owned(), r, c);
            at += r * c;
            m
        };
        MultiplierQuadruple {
            t1_a: take(da, da),
            t1_f: take(da, df),
            t2_a: take(df, da),
            t2_f: take(df, df),
        }
    }
}

/// Residuals of every block condition, named, as matrices that vanish
/// exactly when the quadruple comes from a left multiplier.
fn block_conditions(t: &Triple, q: &MultiplierQuadruple) -> Vec<(&'static str, DMatrix<C64>)> {
    let da = t.a_dim();
    let lops = t.left_action_ops();
    let mut out = Vec::new();
    for (p, lp) in lops.iter().enumerate() {
        let fl = t.f.left_mult_basis(p);
        out.push(("T1_A is a left F-module map", &q.t1_a * lp - lp * &q.t1_a));
        out.push(("T1_F is a left F-module map", &q.t1_f * &fl - lp * &q.t1_f));
        out.push(("T2_A is a left F-module map", &q.t2_a * lp - &fl * &q.t2_a));
        out.push(("T2_F is a left multiplier of F", &q.t2_f * &fl - &fl * &q.t2_f));
    }
    for i in 0..da {
        let ai = t.a.basis(i);
        let la = t.a.left_mult(&ai);
        // gamma -> a_i . gamma
        let k = t.action.right_op_on(&ai);
        out.push((
            "T1_A(ab) = a T1_A(b) + a.T2_A(b)",
            &q.t1_a * &la - &la * &q.t1_a - &k * &q.t2_a,
        ));
        out.push((
            "T1_A(a.b) = a T1_F(b) + a.T2_F(b)",
            &q.t1_a * &k - &la * &q.t1_f - &k * &q.t2_f,
        ));
        out.push(("T2_A(ab) = 0", &q.t2_a * &la));
        out.push(("T2_A(a.b) = 0", &q.t2_a * &k));
    }
    out
}

/// The four blocks of a left multiplier of the duplication, after checking
/// every block condition.
pub fn decompose_multiplier(
    t: &Triple,
    op: &DMatrix<C64>,
    tol: f64,
) -> Result<MultiplierQuadruple> {
    let q = MultiplierQuadruple::split(t, op)?;
    let scale = t.a.scale().max(t.f.scale()) * t.action.scale() * op.camax().max(1.0);
    for (condition, m) in block_conditions(t, &q) {
        let defect = m.camax();
        if defect > tol * scale {
            return Err(Error::DecompositionDefect {
                condition: condition.into(),
                defect,
            });
        }
    }
    Ok(q)
}

/// Quadruples satisfying the block conditions, solved directly over the
/// four blocks and returned in duplication operator coordinates.
pub fn quadruple_space(t: &Triple, tol: f64) -> Result<Subspace> {
    let (da, df) = (t.a_dim(), t.f_dim());
    let n = (da + df) * (da + df);
    let probe = MultiplierQuadruple::from_vector(t, &DVector::zeros(n));
    let n_out: usize = block_conditions(t, &probe).iter().map(|(_, m)| m.len()).sum();
    let blocks = kernel_of(
        n,
        n_out,
        |v| {
            let q = MultiplierQuadruple::from_vector(t, v);
            let parts: Vec<DMatrix<C64>> =
                block_conditions(t, &q).into_iter().map(|(_, m)| m).collect();
            stack(&parts)
        },
        tol,
    )?;
    let vs: Vec<DVector<C64>> = blocks
        .vectors()
        .iter()
        .map(|v| flatten(&MultiplierQuadruple::from_vector(t, v).assemble()))
        .collect();
    if vs.is_empty() {
        return Ok(Subspace::zero(n, tol));
    }
    Subspace::span(n, &vs, tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryReport {
    /// `<A^2> = A` or `<A . F> = A`.
    pub hypothesis: bool,
    /// `T2_A = 0` and `T1_A` a left multiplier of `A`, for a basis of the
    /// multiplier space; `None` when the hypothesis fails.
    pub conclusion: Option<bool>,
    pub defect: f64,
}

pub fn corollary_form_check(t: &Triple, tol: f64) -> Result<CorollaryReport> {
    let squares = span_products(&t.a, SpanMode::Squares, None, tol)?;
    let acted = span_products(&t.a, SpanMode::RightAction, Some(&t.action), tol)?;
    let hypothesis = squares.is_full() || acted.is_full();
    if !hypothesis {
        return Ok(CorollaryReport {
            hypothesis,
            conclusion: None,
            defect: 0.0,
        });
    }
    let dup = t.duplicate(tol)?;
    let n = dup.dim();
    let da = t.a_dim();
    let mut defect: f64 = 0.0;
    for v in left_multiplier_space(&dup, tol)?.vectors() {
        let q = MultiplierQuadruple::split(t, &unflatten(&v, n, n))?;
        defect = defect.max(q.t2_a.camax());
        for i in 0..da {
            let l = t.a.left_mult_basis(i);
            defect = defect.max((&q.t1_a * &l - &l * &q.t1_a).camax());
        }
    }
    Ok(CorollaryReport {
        hypothesis,
        conclusion: Some(defect <= tol * t.a.scale() * t.action.scale()),
        defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_unital, labels};
    use crate::fixtures;
    use crate::linalg::re;

    const TOL: f64 = 1e-9;

    #[test]
    fn multiplier_dimensions() {
        let z = FinDimAlgebra::zero_product(labels("z", 1));
        assert_eq!(left_multiplier_space(&z, TOL).unwrap().dim(), 1);
        assert_eq!(left_multiplier_space(&complex_unital(), TOL).unwrap().dim(), 1);
        let dup = fixtures::fix1().duplicate(TOL).unwrap();
        assert_eq!(left_multiplier_space(&dup, TOL).unwrap().dim(), 4);
    }

    #[test]
    fn identity_decomposes_diagonally() {
        let t = fixtures::fix2();
        let q = decompose_multiplier(&t, &DMatrix::identity(2, 2), TOL).unwrap();
        assert_eq!(q.t1_a[(0, 0)], re(1.0));
        assert_eq!(q.t2_f[(0, 0)], re(1.0));
        assert_eq!(q.t1_f[(0, 0)], re(0.0));
        assert_eq!(q.t2_a[(0, 0)], re(0.0));
        assert_eq!(q.assemble(), DMatrix::identity(2, 2));
    }

    #[test]
    fn right_multiplications_are_left_multipliers() {
        for t in fixtures::all() {
            let dup = t.duplicate(TOL).unwrap();
            let lm = left_multiplier_space(&dup, TOL).unwrap();
            for i in 0..dup.dim() {
                let r = dup.right_mult_basis(i);
                assert!(lm.contains_vector(&flatten(&r)));
                let q = decompose_multiplier(&t, &r, TOL).unwrap();
                assert_eq!(q.assemble(), r);
            }
        }
    }

    #[test]
    fn right_multiplication_blocks_on_lau_line() {
        // (x, g)(a0, b0) = (x a0 + x.b0 + g.a0, g b0) with every action = id
        let t = fixtures::fix2();
        let dup = t.duplicate(TOL).unwrap();
        let r = dup.right_mult(&DVector::from_vec(vec![re(2.0), re(3.0)]));
        let q = decompose_multiplier(&t, &r, TOL).unwrap();
        assert_eq!(q.t1_a[(0, 0)], re(5.0));
        assert_eq!(q.t1_f[(0, 0)], re(2.0));
        assert_eq!(q.t2_a[(0, 0)], re(0.0));
        assert_eq!(q.t2_f[(0, 0)], re(3.0));
    }

    #[test]
    fn left_multiplication_is_not_a_left_multiplier_on_triangular() {
        let t = fixtures::fix4();
        let dup = t.duplicate(TOL).unwrap();
        let l = dup.left_mult_basis(1);
        let lm = left_multiplier_space(&dup, TOL).unwrap();
        assert!(!lm.contains_vector(&flatten(&l)));
        assert!(matches!(
            decompose_multiplier(&t, &l, TOL),
            Err(Error::DecompositionDefect { .. })
        ));
    }

    #[test]
    fn zero_duplication_accepts_anything() {
        let t = fixtures::fix1();
        let m = DMatrix::from_row_slice(2, 2, &[re(1.0), re(2.0), re(-3.0), re(0.5)]);
        assert!(decompose_multiplier(&t, &m, TOL).is_ok());
    }

    #[test]
    fn quadruple_space_matches_direct_computation() {
        for t in fixtures::all() {
            let dup = t.duplicate(TOL).unwrap();
            let direct = left_multiplier_space(&dup, TOL).unwrap();
            let blocks = quadruple_space(&t, TOL).unwrap();
            assert_eq!(direct.dim(), blocks.dim());
            assert!(direct.equals(&blocks).unwrap());
        }
    }

    #[test]
    fn block_form_examples() {
        let r = corollary_form_check(&fixtures::fix2(), TOL).unwrap();
        assert!(r.hypothesis);
        assert_eq!(r.conclusion, Some(true));
        let r = corollary_form_check(&fixtures::fix1(), TOL).unwrap();
        assert!(!r.hypothesis);
        assert_eq!(r.conclusion, None);
        let r = corollary_form_check(&fixtures::fix3(), TOL).unwrap();
        assert!(r.hypothesis);
        assert_eq!(r.conclusion, Some(true));
    }
}

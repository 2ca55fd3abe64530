//! One- and two-sided ideals, generated ideals, maximality and the
//! coordinate projections of subspaces of a duplication.

use nalgebra::DMatrix;

use crate::algebra::{Element, FinDimAlgebra, Triple};
use crate::error::{Error, Result};
use crate::linalg::{rank, Subspace, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    TwoSided,
}

impl Side {
    fn left(self) -> bool {
        matches!(self, Side::Left | Side::TwoSided)
    }

    fn right(self) -> bool {
        matches!(self, Side::Right | Side::TwoSided)
    }
}

#[derive(Clone, Debug)]
pub struct IdealWitness {
    pub subspace: Subspace,
    pub side: Side,
    /// Largest distance from `s` of a product `e_i v` (or `v e_i`).
    pub defect: f64,
}

fn check_ambient(alg: &FinDimAlgebra, s: &Subspace) -> Result<()> {
    if s.ambient_dim() != alg.dim() {
        return Err(Error::Shape(format!(
            "subspace in dimension {} for an algebra of dimension {}",
            s.ambient_dim(),
            alg.dim()
        )));
    }
    Ok(())
}

/// The operators whose invariance defines a `side` ideal.
fn side_operators(alg: &FinDimAlgebra, side: Side) -> Vec<DMatrix<C64>> {
    let mut ops = Vec::new();
    for i in 0..alg.dim() {
        if side.left() {
            ops.push(alg.left_mult_basis(i));
        }
        if side.right() {
            ops.push(alg.right_mult_basis(i));
        }
    }
    ops
}

pub fn ideal_witness(alg: &FinDimAlgebra, s: &Subspace, side: Side) -> Result<IdealWitness> {
    check_ambient(alg, s)?;
    let mut defect: f64 = 0.0;
    for op in side_operators(alg, side) {
        for v in s.vectors() {
            defect = defect.max(s.residual(&(&op * v)));
        }
    }
    Ok(IdealWitness {
        subspace: s.clone(),
        side,
        defect,
    })
}

pub fn is_ideal(alg: &FinDimAlgebra, s: &Subspace, side: Side, tol: f64) -> Result<bool> {
    let w = ideal_witness(alg, s, side)?;
    Ok(w.defect <= tol * alg.scale())
}

/// The smallest `side` ideal containing `seeds`: the span is closed under
/// the basis multiplications until its dimension stops growing.
pub fn ideal_generated(
    alg: &FinDimAlgebra,
    seeds: &[Element],
    side: Side,
    tol: f64,
) -> Result<Subspace> {
    let d = alg.dim();
    let mut s = if seeds.is_empty() {
        Subspace::zero(d, tol)
    } else {
        Subspace::span(d, seeds, tol)?
    };
    let ops = side_operators(alg, side);
    loop {
        let mut vs = s.vectors();
        let base = vs.clone();
        for op in &ops {
            vs.extend(base.iter().map(|v| op * v));
        }
        if vs.is_empty() {
            return Ok(s);
        }
        let next = Subspace::span(d, &vs, tol)?;
        if next.dim() == s.dim() {
            return Ok(s);
        }
        s = next;
    }
}

/// The quotient of `alg` by a two-sided ideal, in coordinates of an
/// orthonormal basis `q` of the ideal's orthogonal complement. Returns the
/// quotient algebra and `q` (columns).
pub fn quotient(alg: &FinDimAlgebra, ideal: &Subspace) -> Result<(FinDimAlgebra, DMatrix<C64>)> {
    check_ambient(alg, ideal)?;
    let q = ideal.orthogonal_complement()?.basis().clone();
    let m = q.ncols();
    let cols: Vec<Element> = (0..m).map(|i| q.column(i).into_owned()).collect();
    let qa = FinDimAlgebra::from_fn(crate::algebra::labels("q", m), |i, j| {
        (q.adjoint() * alg.mul(&cols[i], &cols[j]))
            .iter()
            .copied()
            .collect()
    })?;
    Ok((qa, q))
}

/// Whether the unital algebra generated by `ops` is all of `M_q(C)`.
fn generates_full_matrix_algebra(ops: &[DMatrix<C64>], q: usize, tol: f64) -> Result<bool> {
    let flat = |m: &DMatrix<C64>| crate::linalg::flatten(m);
    let mut words = vec![DMatrix::<C64>::identity(q, q)];
    let mut span = Subspace::span(q * q, &[flat(&words[0])], tol)?;
    let mut frontier = words.clone();
    while !frontier.is_empty() && span.dim() < q * q {
        let mut next = Vec::new();
        for w in &frontier {
            for op in ops {
                let p = op * w;
                let v = flat(&p);
                if !span.contains_vector(&v) {
                    span = span.sum(&Subspace::span(q * q, &[v], tol)?)?;
                    next.push(p);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(span.dim() == q * q)
}

/// Maximality of a proper `side` ideal via Burnside's theorem: the quotient
/// `C / I` has no proper nonzero invariant subspace under the induced
/// multiplication operators iff those operators and the identity generate
/// every operator on the quotient.
pub fn is_maximal_ideal(alg: &FinDimAlgebra, i: &Subspace, side: Side, tol: f64) -> Result<bool> {
    let w = ideal_witness(alg, i, side)?;
    if w.defect > tol * alg.scale() {
        return Err(Error::NotAProperIdeal(format!(
            "not closed under multiplication (defect {:.3e})",
            w.defect
        )));
    }
    if i.is_full() {
        return Err(Error::NotAProperIdeal("the whole algebra".into()));
    }
    let q = i.orthogonal_complement()?.basis().clone();
    let induced: Vec<DMatrix<C64>> = side_operators(alg, side)
        .iter()
        .map(|op| q.adjoint() * op * &q)
        .collect();
    generates_full_matrix_algebra(&induced, q.ncols(), tol)
}

pub fn is_maximal_left_ideal(alg: &FinDimAlgebra, i: &Subspace, tol: f64) -> Result<bool> {
    is_maximal_ideal(alg, i, Side::Left, tol)
}

/// Outcome of testing `I x J` against the four component conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductIdealReport {
    pub i_left_ideal: bool,
    pub j_left_ideal: bool,
    /// `F . I` lies in `I`.
    pub i_submodule: bool,
    /// `A . J` (the right action of `J` on `A`) lies in `I`.
    pub a_dot_j_in_i: bool,
    pub conjunction: bool,
    /// `I x J` tested directly in the duplication.
    pub direct: bool,
}

impl ProductIdealReport {
    pub fn agrees(&self) -> bool {
        self.conjunction == self.direct
    }
}

/// `I x J` as a subspace of the duplication coordinates.
pub fn product_subspace(t: &Triple, i: &Subspace, j: &Subspace, tol: f64) -> Result<Subspace> {
    let mut vs: Vec<Element> = i
        .vectors()
        .iter()
        .map(|v| t.join(v, &Element::zeros(t.f_dim())))
        .collect();
    vs.extend(j.vectors().iter().map(|w| t.join(&Element::zeros(t.a_dim()), w)));
    if vs.is_empty() {
        return Ok(Subspace::zero(t.dup_dim(), tol));
    }
    Subspace::span(t.dup_dim(), &vs, tol)
}

pub fn product_ideal_test(
    t: &Triple,
    i: &Subspace,
    j: &Subspace,
    tol: f64,
) -> Result<ProductIdealReport> {
    check_ambient(&t.a, i)?;
    check_ambient(&t.f, j)?;
    let bound = tol * t.a.scale().max(t.f.scale()) * t.action.scale();
    let i_left_ideal = is_ideal(&t.a, i, Side::Left, tol)?;
    let j_left_ideal = is_ideal(&t.f, j, Side::Left, tol)?;
    let mut sub: f64 = 0.0;
    for op in t.left_action_ops() {
        for v in i.vectors() {
            sub = sub.max(i.residual(&(&op * v)));
        }
    }
    let mut cross: f64 = 0.0;
    for k in 0..t.a_dim() {
        let m = t.action.right_op_on(&t.a.basis(k));
        for w in j.vectors() {
            cross = cross.max(i.residual(&(&m * w)));
        }
    }
    let i_submodule = sub <= bound;
    let a_dot_j_in_i = cross <= bound;
    let dup = t.duplicate_unchecked(tol);
    let n = product_subspace(t, i, j, tol)?;
    let direct = is_ideal(&dup, &n, Side::Left, tol)?;
    Ok(ProductIdealReport {
        i_left_ideal,
        j_left_ideal,
        i_submodule,
        a_dot_j_in_i,
        conjunction: i_left_ideal && j_left_ideal && i_submodule && a_dot_j_in_i,
        direct,
    })
}

/// The images `I_N` and `J_N` of `N` under the two coordinate projections.
pub fn project_components(
    a_dim: usize,
    f_dim: usize,
    n: &Subspace,
) -> Result<(Subspace, Subspace)> {
    if n.ambient_dim() != a_dim + f_dim {
        return Err(Error::Shape(format!(
            "subspace in dimension {} for blocks {a_dim} + {f_dim}",
            n.ambient_dim()
        )));
    }
    let b = n.basis();
    let top = b.rows(0, a_dim).into_owned();
    let bottom = b.rows(a_dim, f_dim).into_owned();
    Ok((
        Subspace::column_span(&top, n.tol())?,
        Subspace::column_span(&bottom, n.tol())?,
    ))
}

/// Rank of a family of vectors, used by tests and the maximality oracle.
pub fn span_dim(vs: &[Element], ambient: usize, tol: f64) -> Result<usize> {
    if vs.is_empty() {
        return Ok(0);
    }
    let m = DMatrix::from_columns(vs);
    debug_assert_eq!(m.nrows(), ambient);
    rank(&m, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pointwise;
    use crate::fixtures;
    use crate::linalg::re;
    use nalgebra::DVector;

    const TOL: f64 = 1e-9;

    fn v(xs: &[f64]) -> Element {
        DVector::from_iterator(xs.len(), xs.iter().map(|&x| re(x)))
    }

    fn span(d: usize, vs: &[Element]) -> Subspace {
        Subspace::span(d, vs, TOL).unwrap()
    }

    #[test]
    fn trivial_subspaces_are_ideals() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        for side in [Side::Left, Side::Right, Side::TwoSided] {
            assert!(is_ideal(&dup, &Subspace::zero(3, TOL), side, TOL).unwrap());
            assert!(is_ideal(&dup, &Subspace::full(3, TOL), side, TOL).unwrap());
        }
    }

    #[test]
    fn strict_upper_part_is_two_sided() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let e12 = span(3, &[v(&[1.0, 0.0, 0.0])]);
        assert!(is_ideal(&dup, &e12, Side::TwoSided, TOL).unwrap());
        let e11 = span(3, &[v(&[0.0, 1.0, 0.0])]);
        assert!(!is_ideal(&dup, &e11, Side::TwoSided, TOL).unwrap());
    }

    #[test]
    fn shape_is_checked() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let r = is_ideal(&dup, &Subspace::full(2, TOL), Side::Left, TOL);
        assert!(matches!(r, Err(Error::Shape(_))));
    }

    #[test]
    fn product_ideal_examples() {
        let t = fixtures::fix4();
        let r = product_ideal_test(
            &t,
            &Subspace::full(1, TOL),
            &Subspace::full(2, TOL),
            TOL,
        )
        .unwrap();
        assert!(r.conjunction && r.direct);

        let t = fixtures::fix3();
        let r = product_ideal_test(&t, &Subspace::full(1, TOL), &Subspace::zero(1, TOL), TOL)
            .unwrap();
        assert!(r.conjunction && r.direct);

        let t = fixtures::fix2();
        let r = product_ideal_test(&t, &Subspace::zero(1, TOL), &Subspace::full(1, TOL), TOL)
            .unwrap();
        assert!(!r.a_dot_j_in_i);
        assert!(!r.conjunction && !r.direct);
    }

    #[test]
    fn generated_ideals() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        assert!(ideal_generated(&dup, &[v(&[0.0, 0.0, 0.0])], Side::Left, TOL)
            .unwrap()
            .is_zero());
        // x E11 over the basis: E11 E11 = E11, E22 E11 = 0, E12 E11 = 0
        let g = ideal_generated(&dup, &[v(&[0.0, 1.0, 0.0])], Side::Left, TOL).unwrap();
        assert_eq!(g.dim(), 1);
        assert!(g.contains_vector(&v(&[0.0, 1.0, 0.0])));
        let unit = dup.unit().unwrap().clone();
        assert!(ideal_generated(&dup, &[unit], Side::Left, TOL)
            .unwrap()
            .is_full());
    }

    #[test]
    fn generation_is_idempotent() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let g = ideal_generated(&dup, &[v(&[1.0, 0.0, 1.0])], Side::Left, TOL).unwrap();
        let g2 = ideal_generated(&dup, &g.vectors(), Side::Left, TOL).unwrap();
        assert!(g.equals(&g2).unwrap());
    }

    #[test]
    fn maximality_examples() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let i = span(3, &[v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]);
        assert!(is_maximal_left_ideal(&dup, &i, TOL).unwrap());

        let c2 = pointwise(2);
        assert!(!is_maximal_left_ideal(&c2, &Subspace::zero(2, TOL), TOL).unwrap());
        let e1 = span(2, &[v(&[1.0, 0.0])]);
        assert!(is_maximal_left_ideal(&c2, &e1, TOL).unwrap());
    }

    #[test]
    fn maximality_rejects_non_ideals() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let e22 = span(3, &[v(&[0.0, 0.0, 1.0])]);
        assert!(matches!(
            is_maximal_left_ideal(&dup, &e22, TOL),
            Err(Error::NotAProperIdeal(_))
        ));
        assert!(matches!(
            is_maximal_left_ideal(&dup, &Subspace::full(3, TOL), TOL),
            Err(Error::NotAProperIdeal(_))
        ));
    }

    #[test]
    fn components_of_subspaces() {
        let t = fixtures::fix2();
        let diag = span(2, &[v(&[1.0, 1.0])]);
        let (i, j) = project_components(1, 1, &diag).unwrap();
        assert!(i.is_full() && j.is_full());
        let rect = product_subspace(&t, &i, &j, TOL).unwrap();
        assert!(!rect.equals(&diag).unwrap());

        let n = span(2, &[v(&[1.0, 0.0])]);
        let (i, j) = project_components(1, 1, &n).unwrap();
        assert_eq!((i.dim(), j.dim()), (1, 0));
        assert!(matches!(
            project_components(2, 1, &n),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn left_ideal_containing_f_block_is_rectangular() {
        let t = fixtures::fix4();
        let dup = t.duplicate(TOL).unwrap();
        let n = ideal_generated(
            &dup,
            &[v(&[0.0, 1.0, 0.0]), v(&[0.0, 0.0, 1.0])],
            Side::Left,
            TOL,
        )
        .unwrap();
        let (i_n, _) = project_components(1, 2, &n).unwrap();
        let rect = product_subspace(&t, &i_n, &Subspace::full(2, TOL), TOL).unwrap();
        assert!(rect.equals(&n).unwrap());
    }

    #[test]
    fn quotient_by_commutators() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let e12 = span(3, &[v(&[1.0, 0.0, 0.0])]);
        let (q, basis) = quotient(&dup, &e12).unwrap();
        assert_eq!(q.dim(), 2);
        assert_eq!(basis.ncols(), 2);
        assert!(q.is_commutative(TOL));
        assert!(q.detect_unit(TOL).is_some());
    }
}

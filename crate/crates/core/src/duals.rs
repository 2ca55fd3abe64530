//! Iterated dual bimodules, Arens products and topological centres.
//!
//! Second-dual coordinates are identified with the original coordinates
//! through the canonical basis, and covectors pair bilinearly (`x^T y`).
//! With that identification the dual of a bimodule with operators
//! `(L(c), R(c))` has operators `(R(c)^T, L(c)^T)`.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{BimoduleAction, Element, FinDimAlgebra, Triple};
use crate::error::{Error, Result};
use crate::linalg::{kernel_of, Subspace, C64};

/// Which Arens extension generated the operators. Both give the same
/// operators in finite dimension; the tag is kept for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    First,
    Second,
}

/// A bimodule over an algebra with basis `c_0, ..., c_{m-1}`, given by the
/// operators of each basis element on the module.
#[derive(Clone, Debug, PartialEq)]
pub struct DualBimodule {
    pub level: usize,
    pub convention: Convention,
    pub left: Vec<DMatrix<C64>>,
    pub right: Vec<DMatrix<C64>>,
}

impl DualBimodule {
    /// The algebra acting on itself.
    pub fn regular(alg: &FinDimAlgebra) -> Self {
        let d = alg.dim();
        DualBimodule {
            level: 0,
            convention: Convention::First,
            left: (0..d).map(|i| alg.left_mult_basis(i)).collect(),
            right: (0..d).map(|i| alg.right_mult_basis(i)).collect(),
        }
    }

    /// `F` acting on `A` through a bimodule action.
    pub fn from_action(act: &BimoduleAction) -> Self {
        let basis = |p: usize| {
            let mut e = DVector::zeros(act.f_dim());
            e[p] = C64::new(1.0, 0.0);
            e
        };
        DualBimodule {
            level: 0,
            convention: Convention::First,
            left: (0..act.f_dim()).map(|p| act.left_op(&basis(p))).collect(),
            right: (0..act.f_dim()).map(|p| act.right_op(&basis(p))).collect(),
        }
    }

    pub fn module_dim(&self) -> usize {
        self.left.first().map_or(0, |m| m.nrows())
    }

    pub fn dual(&self) -> Self {
        DualBimodule {
            level: self.level + 1,
            convention: self.convention,
            left: self.right.iter().map(|m| m.transpose()).collect(),
            right: self.left.iter().map(|m| m.transpose()).collect(),
        }
    }

    pub fn nth(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |m, _| m.dual())
    }

    /// Operators of a general element `c = sum c_i e_i`.
    pub fn left_of(&self, c: &Element) -> DMatrix<C64> {
        combine(&self.left, c, self.module_dim())
    }

    pub fn right_of(&self, c: &Element) -> DMatrix<C64> {
        combine(&self.right, c, self.module_dim())
    }

    pub fn max_difference(&self, other: &DualBimodule) -> f64 {
        self.left
            .iter()
            .zip(&other.left)
            .chain(self.right.iter().zip(&other.right))
            .map(|(a, b)| {
                if a.shape() == b.shape() {
                    (a - b).camax()
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

fn combine(ops: &[DMatrix<C64>], c: &Element, n: usize) -> DMatrix<C64> {
    ops.iter()
        .zip(c.iter())
        .fold(DMatrix::zeros(n, n), |acc, (m, &x)| acc + m * x)
}

/// The `n`-th dual of the regular bimodule.
pub fn nth_dual_bimodule(alg: &FinDimAlgebra, n: usize, convention: Convention) -> DualBimodule {
    DualBimodule {
        convention,
        ..DualBimodule::regular(alg).nth(n)
    }
}

/// The pieces of the duplication's `n`-th dual bimodule, each computed by
/// its own recursion on the factors.
#[derive(Clone, Debug)]
pub struct DuplicationBlocks {
    pub level: usize,
    /// `A` on `A^(n)`.
    pub a_on_a: DualBimodule,
    /// `F` on `A^(n)`.
    pub f_on_a: DualBimodule,
    /// `F` on `F^(n)`.
    pub f_on_f: DualBimodule,
    /// For each basis `a_i`: the part of `a_i` acting from the left that
    /// crosses between the blocks. At level 0 this is `gamma -> a_i . gamma`.
    pub cross_left: Vec<DMatrix<C64>>,
    /// At level 0, `gamma -> gamma . a_i`.
    pub cross_right: Vec<DMatrix<C64>>,
}

impl DuplicationBlocks {
    pub fn new(t: &Triple, n: usize) -> Self {
        let da = t.a_dim();
        let mut cl: Vec<DMatrix<C64>> = (0..da)
            .map(|i| t.action.right_op_on(&t.a.basis(i)))
            .collect();
        let mut cr: Vec<DMatrix<C64>> = (0..da)
            .map(|i| t.action.left_op_on(&t.a.basis(i)))
            .collect();
        for _ in 0..n {
            let next_l = cr.iter().map(|m| m.transpose()).collect();
            let next_r = cl.iter().map(|m| m.transpose()).collect();
            cl = next_l;
            cr = next_r;
        }
        DuplicationBlocks {
            level: n,
            a_on_a: DualBimodule::regular(&t.a).nth(n),
            f_on_a: DualBimodule::from_action(&t.action).nth(n),
            f_on_f: DualBimodule::regular(&t.f).nth(n),
            cross_left: cl,
            cross_right: cr,
        }
    }

    /// The duplication's operators assembled from the blocks: at even
    /// levels the cross term maps `F^(n)` into `A^(n)`, at odd levels
    /// `A^(n)` into `F^(n)`.
    pub fn assemble(&self) -> DualBimodule {
        let da = self.a_on_a.left.len();
        let df = self.f_on_f.left.len();
        let n = da + df;
        let even = self.level.is_multiple_of(2);
        let block = |diag_a: &DMatrix<C64>, diag_f: Option<&DMatrix<C64>>, cross: Option<&DMatrix<C64>>| {
            let mut m = DMatrix::zeros(n, n);
            m.view_mut((0, 0), (da, da)).copy_from(diag_a);
            if let Some(f) = diag_f {
                m.view_mut((da, da), (df, df)).copy_from(f);
            }
            if let Some(c) = cross {
                if even {
                    m.view_mut((0, da), (da, df)).copy_from(c);
                } else {
                    m.view_mut((da, 0), (df, da)).copy_from(c);
                }
            }
            m
        };
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for i in 0..da {
            left.push(block(&self.a_on_a.left[i], None, Some(&self.cross_left[i])));
            right.push(block(&self.a_on_a.right[i], None, Some(&self.cross_right[i])));
        }
        for p in 0..df {
            left.push(block(&self.f_on_a.left[p], Some(&self.f_on_f.left[p]), None));
            right.push(block(&self.f_on_a.right[p], Some(&self.f_on_f.right[p]), None));
        }
        DualBimodule {
            level: self.level,
            convention: Convention::First,
            left,
            right,
        }
    }
}

/// Largest entrywise gap between the block formulas and the transpose
/// recursion on the duplication itself.
pub fn block_formula_defect(t: &Triple, n: usize, tol: f64) -> f64 {
    let dup = t.duplicate_unchecked(tol);
    let direct = nth_dual_bimodule(&dup, n, Convention::First);
    DuplicationBlocks::new(t, n).assemble().max_difference(&direct)
}

/// A bilinear map `X x Y -> Z` as a tensor indexed `(x * ny + y) * nz + z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bilinear {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub t: Vec<C64>,
}

impl Bilinear {
    fn at(&self, x: usize, y: usize, z: usize) -> C64 {
        self.t[(x * self.ny + y) * self.nz + z]
    }

    pub fn from_algebra(alg: &FinDimAlgebra) -> Self {
        let d = alg.dim();
        Bilinear {
            nx: d,
            ny: d,
            nz: d,
            t: alg.tensor().to_vec(),
        }
    }

    /// `(a, beta) -> a . beta`.
    pub fn right_action(act: &BimoduleAction) -> Self {
        Bilinear {
            nx: act.a_dim(),
            ny: act.f_dim(),
            nz: act.a_dim(),
            t: act.right_tensor().to_vec(),
        }
    }

    /// `(beta, a) -> beta . a`.
    pub fn left_action(act: &BimoduleAction) -> Self {
        Bilinear {
            nx: act.f_dim(),
            ny: act.a_dim(),
            nz: act.a_dim(),
            t: act.left_tensor().to_vec(),
        }
    }

    fn basis(n: usize, i: usize) -> DVector<C64> {
        let mut e = DVector::zeros(n);
        e[i] = C64::new(1.0, 0.0);
        e
    }

    /// First extension `X** x Y** -> Z**`:
    /// `<f.x, y> = <f, m(x, y)>`, `<G.f, x> = <G, f.x>`, `<F o G, f> = <F, G.f>`.
    pub fn first_extension(&self) -> Bilinear {
        let f_dot_x = |f: &DVector<C64>, x: usize| {
            DVector::from_fn(self.ny, |y, _| (0..self.nz).map(|z| f[z] * self.at(x, y, z)).sum())
        };
        let g_dot_f = |g: &DVector<C64>, f: &DVector<C64>| {
            DVector::from_fn(self.nx, |x, _| g.dot(&f_dot_x(f, x)))
        };
        let product = |ff: &DVector<C64>, g: &DVector<C64>| {
            DVector::from_fn(self.nz, |z, _| ff.dot(&g_dot_f(g, &Self::basis(self.nz, z))))
        };
        self.tabulate(product)
    }

    /// Second extension:
    /// `<y.f, x> = <f, m(x, y)>`, `<f.F, y> = <F, y.f>`, `<F tri G, f> = <G, f.F>`.
    pub fn second_extension(&self) -> Bilinear {
        let y_dot_f = |y: usize, f: &DVector<C64>| {
            DVector::from_fn(self.nx, |x, _| (0..self.nz).map(|z| f[z] * self.at(x, y, z)).sum())
        };
        let f_dot_ff = |f: &DVector<C64>, ff: &DVector<C64>| {
            DVector::from_fn(self.ny, |y, _| ff.dot(&y_dot_f(y, f)))
        };
        let product = |ff: &DVector<C64>, g: &DVector<C64>| {
            DVector::from_fn(self.nz, |z, _| g.dot(&f_dot_ff(&Self::basis(self.nz, z), ff)))
        };
        self.tabulate(product)
    }

    fn tabulate(&self, product: impl Fn(&DVector<C64>, &DVector<C64>) -> DVector<C64>) -> Bilinear {
        let mut t = vec![C64::default(); self.nx * self.ny * self.nz];
        for x in 0..self.nx {
            for y in 0..self.ny {
                let v = product(&Self::basis(self.nx, x), &Self::basis(self.ny, y));
                for z in 0..self.nz {
                    t[(x * self.ny + y) * self.nz + z] = v[z];
                }
            }
        }
        Bilinear {
            nx: self.nx,
            ny: self.ny,
            nz: self.nz,
            t,
        }
    }

    pub fn max_difference(&self, other: &Bilinear) -> f64 {
        self.t
            .iter()
            .zip(&other.t)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Both Arens products of an algebra as multiplication tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct ArensStructure {
    pub first: Vec<C64>,
    pub second: Vec<C64>,
    pub defect: f64,
}

pub fn arens_products(alg: &FinDimAlgebra, tol: f64) -> Result<ArensStructure> {
    let m = Bilinear::from_algebra(alg);
    let first = m.first_extension();
    let second = m.second_extension();
    let defect = first.max_difference(&m).max(second.max_difference(&m));
    if defect > tol * alg.scale() {
        return Err(Error::ArensDefect(defect));
    }
    Ok(ArensStructure {
        first: first.t,
        second: second.t,
        defect,
    })
}

/// The actions of `F**` on `A**`: `bullet` from the first extension and
/// `triangle` from the second, each as a [`BimoduleAction`].
#[derive(Clone, Debug, PartialEq)]
pub struct DualActions {
    pub bullet: BimoduleAction,
    pub triangle: BimoduleAction,
    pub defect: f64,
}

pub fn dual_actions(t: &Triple, tol: f64) -> Result<DualActions> {
    let (da, df) = (t.a_dim(), t.f_dim());
    let l = Bilinear::left_action(&t.action);
    let r = Bilinear::right_action(&t.action);
    let bullet = BimoduleAction::new(da, df, l.first_extension().t, r.first_extension().t)?;
    let triangle = BimoduleAction::new(da, df, l.second_extension().t, r.second_extension().t)?;
    let gap = |x: &BimoduleAction| {
        x.left_tensor()
            .iter()
            .zip(t.action.left_tensor())
            .chain(x.right_tensor().iter().zip(t.action.right_tensor()))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    };
    let defect = gap(&bullet).max(gap(&triangle));
    if defect > tol * t.action.scale() {
        return Err(Error::ArensDefect(defect));
    }
    Ok(DualActions {
        bullet,
        triangle,
        defect,
    })
}

/// Entrywise gap between the Arens tensors of the duplication and the
/// duplication built from the factors' Arens tensors and the extended
/// actions, taking the larger of the two conventions.
pub fn second_dual_iso_defect(t: &Triple, tol: f64) -> Result<f64> {
    let dup = t.duplicate_unchecked(tol);
    let m = Bilinear::from_algebra(&dup);
    let ext_a = Bilinear::from_algebra(&t.a);
    let ext_f = Bilinear::from_algebra(&t.f);
    let acts = dual_actions(t, f64::INFINITY)?;
    let mut worst: f64 = 0.0;
    for (conv, act) in [(Convention::First, &acts.bullet), (Convention::Second, &acts.triangle)] {
        let (ta, tf, td) = match conv {
            Convention::First => (ext_a.first_extension(), ext_f.first_extension(), m.first_extension()),
            Convention::Second => (ext_a.second_extension(), ext_f.second_extension(), m.second_extension()),
        };
        let a2 = FinDimAlgebra::new(t.a.labels().to_vec(), ta.t)?;
        let f2 = FinDimAlgebra::new(t.f.labels().to_vec(), tf.t)?;
        let composed = Triple::new(a2, f2, act.clone())?.duplicate_unchecked(tol);
        worst = worst.max(
            composed
                .tensor()
                .iter()
                .zip(&td.t)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        );
    }
    Ok(worst)
}

/// `{x : m1(x, y) = m2(x, y) for all y}`, or the same in the second slot.
fn centre_of(m1: &Bilinear, m2: &Bilinear, first_slot: bool, tol: f64) -> Result<Subspace> {
    let (n_in, n_other) = if first_slot { (m1.nx, m1.ny) } else { (m1.ny, m1.nx) };
    kernel_of(
        n_in,
        n_other * m1.nz,
        |v| {
            let mut out = DVector::zeros(n_other * m1.nz);
            for o in 0..n_other {
                for z in 0..m1.nz {
                    let mut s = C64::default();
                    for i in 0..n_in {
                        let (x, y) = if first_slot { (i, o) } else { (o, i) };
                        s += v[i] * (m1.at(x, y, z) - m2.at(x, y, z));
                    }
                    out[o * m1.nz + z] = s;
                }
            }
            out
        },
        tol,
    )
}

#[derive(Clone, Debug)]
pub struct Centres {
    /// First topological centre of the duplication's second dual.
    pub zt_dup: Subspace,
    pub zt_a: Subspace,
    pub zt_f: Subspace,
    /// `{a : a bullet g = a triangle g for all g}`.
    pub z_f_on_a: Subspace,
    /// `{b : b bullet x = b triangle x for all x}`.
    pub z_a_on_f: Subspace,
    /// Whether `zt_dup = (zt_a n z_f_on_a) x (zt_f n z_a_on_f)`.
    pub product_formula: bool,
}

pub fn topological_centres(t: &Triple, tol: f64) -> Result<Centres> {
    let dup = t.duplicate_unchecked(tol);
    let md = Bilinear::from_algebra(&dup);
    let ma = Bilinear::from_algebra(&t.a);
    let mf = Bilinear::from_algebra(&t.f);
    let zt_dup = centre_of(&md.first_extension(), &md.second_extension(), true, tol)?;
    let zt_a = centre_of(&ma.first_extension(), &ma.second_extension(), true, tol)?;
    let zt_f = centre_of(&mf.first_extension(), &mf.second_extension(), true, tol)?;
    let r = Bilinear::right_action(&t.action);
    let l = Bilinear::left_action(&t.action);
    let z_f_on_a = centre_of(&r.first_extension(), &r.second_extension(), true, tol)?;
    let z_a_on_f = centre_of(&l.first_extension(), &l.second_extension(), true, tol)?;
    let left = zt_a.intersect(&z_f_on_a)?;
    let right = zt_f.intersect(&z_a_on_f)?;
    let formula = crate::ideals::product_subspace(t, &left, &right, tol)?;
    let product_formula = formula.equals(&zt_dup)?;
    Ok(Centres {
        zt_dup,
        zt_a,
        zt_f,
        z_f_on_a,
        z_a_on_f,
        product_formula,
    })
}

/// The canonical embedding into the second dual, which is the identity in
/// the coordinates used here.
pub fn canonical_embedding(x: &Element) -> Element {
    x.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EssentialityMode {
    /// `span{a x}` with `x` in `A^(n)`.
    AlgebraLeft,
    /// `span{x a}`.
    AlgebraRight,
    /// `span{beta x}`.
    ModuleLeft,
    /// `span{x beta}`.
    ModuleRight,
}

/// Whether the products of basis elements with `A^(n)` span `A^(n)`.
pub fn essentiality(t: &Triple, level: usize, mode: EssentialityMode, tol: f64) -> Result<bool> {
    let ops = match mode {
        EssentialityMode::AlgebraLeft => DualBimodule::regular(&t.a).nth(level).left,
        EssentialityMode::AlgebraRight => DualBimodule::regular(&t.a).nth(level).right,
        EssentialityMode::ModuleLeft => DualBimodule::from_action(&t.action).nth(level).left,
        EssentialityMode::ModuleRight => DualBimodule::from_action(&t.action).nth(level).right,
    };
    let da = t.a_dim();
    if ops.is_empty() {
        return Ok(da == 0);
    }
    let vs: Vec<Element> = ops
        .iter()
        .flat_map(|m| m.column_iter().map(|c| c.into_owned()).collect::<Vec<_>>())
        .collect();
    Ok(Subspace::span(da, &vs, tol)?.is_full())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_unital, labels};
    use crate::fixtures;
    use crate::linalg::re;

    const TOL: f64 = 1e-10;

    #[test]
    fn level_zero_and_two_are_original() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let m0 = nth_dual_bimodule(&dup, 0, Convention::First);
        let m2 = nth_dual_bimodule(&dup, 2, Convention::First);
        assert_eq!(m0.max_difference(&DualBimodule::regular(&dup)), 0.0);
        assert_eq!(m2.max_difference(&m0), 0.0);
        let m1 = nth_dual_bimodule(&dup, 1, Convention::Second);
        let m3 = nth_dual_bimodule(&dup, 3, Convention::Second);
        assert_eq!(m1.max_difference(&m3), 0.0);
    }

    #[test]
    fn block_formulas_agree_with_recursion() {
        for t in fixtures::all() {
            for n in 0..4 {
                assert_eq!(block_formula_defect(&t, n, TOL), 0.0, "level {n}");
            }
        }
    }

    #[test]
    fn module_extension_level_one_by_hand() {
        // X = C, F = C, every action the identity: on (x1, g1) in the dual,
        // (x1, g1) o (a, b) = (x1 b, x1 a + g1 b)
        let t = fixtures::fix3();
        let m1 = DuplicationBlocks::new(&t, 1).assemble();
        let x = DVector::from_vec(vec![re(2.0), re(5.0)]);
        let c = DVector::from_vec(vec![re(3.0), re(7.0)]);
        let got = m1.right_of(&c) * &x;
        assert_eq!(got, DVector::from_vec(vec![re(14.0), re(6.0 + 35.0)]));
    }

    #[test]
    fn arens_tensors_on_fixtures() {
        for alg in [complex_unital(), FinDimAlgebra::zero_product(labels("z", 1))] {
            let s = arens_products(&alg, TOL).unwrap();
            assert_eq!(s.first, alg.tensor());
            assert_eq!(s.second, alg.tensor());
        }
        for t in fixtures::all() {
            let dup = t.duplicate(TOL).unwrap();
            let s = arens_products(&dup, TOL).unwrap();
            assert_eq!(s.defect, 0.0);
            assert!(dual_actions(&t, TOL).unwrap().defect == 0.0);
            assert_eq!(second_dual_iso_defect(&t, TOL).unwrap(), 0.0);
        }
        let fix1 = fixtures::fix1().duplicate(TOL).unwrap();
        assert!(arens_products(&fix1, TOL).unwrap().first.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn three_step_products_are_literal() {
        // a non-commutative tensor catches any swapped slot
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let m = Bilinear::from_algebra(&dup);
        let mut swapped = m.clone();
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    swapped.t[(x * 3 + y) * 3 + z] = m.at(y, x, z);
                }
            }
        }
        assert!(m.first_extension().max_difference(&swapped) > 0.5);
        assert!(m.second_extension().max_difference(&swapped) > 0.5);
    }

    #[test]
    fn centres_are_full() {
        for t in fixtures::all() {
            let c = topological_centres(&t, 1e-9).unwrap();
            assert!(c.zt_dup.is_full());
            assert!(c.zt_a.is_full() && c.zt_f.is_full());
            assert!(c.z_f_on_a.is_full() && c.z_a_on_f.is_full());
            assert!(c.product_formula);
        }
        assert_eq!(topological_centres(&fixtures::fix4(), 1e-9).unwrap().zt_dup.dim(), 3);
    }

    #[test]
    fn embedding_is_identity() {
        let x = DVector::from_vec(vec![re(1.0), C64::new(0.0, -2.0)]);
        assert_eq!(canonical_embedding(&x), x);
        assert_eq!(canonical_embedding(&DVector::zeros(2)), DVector::zeros(2));
    }

    #[test]
    fn essentiality_examples() {
        for level in 0..4 {
            assert!(essentiality(&fixtures::fix2(), level, EssentialityMode::AlgebraLeft, 1e-9)
                .unwrap());
        }
        assert!(!essentiality(&fixtures::fix1(), 0, EssentialityMode::AlgebraLeft, 1e-9).unwrap());
        assert!(essentiality(&fixtures::fix3(), 0, EssentialityMode::ModuleRight, 1e-9).unwrap());
        assert!(!essentiality(&fixtures::fix3(), 0, EssentialityMode::AlgebraLeft, 1e-9).unwrap());
    }
}

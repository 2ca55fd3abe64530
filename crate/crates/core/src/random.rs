//! Seeded generators of small algebras and compatible triples.
//!
//! Triples are described by a [`Recipe`] so a failing instance can be
//! rebuilt and simplified.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    complex_unital, direct_sum, labels, lau, module_extension, pointwise, triangular,
    BimoduleAction, FinDimAlgebra, Triple,
};
use crate::error::{Error, Result};
use crate::linalg::{c, re, C64};
use crate::spectrum::characters;

const BUILD_TOL: f64 = 1e-10;

fn table(name: &str, d: usize, products: &[(usize, usize, usize, f64)]) -> FinDimAlgebra {
    FinDimAlgebra::from_fn(labels(name, d), |i, j| {
        let mut v = vec![C64::default(); d];
        for &(a, b, k, x) in products {
            if (a, b) == (i, j) {
                v[k] += re(x);
            }
        }
        v
    })
    .expect("shapes agree")
    .with_detected_unit(1e-12)
}

/// The opposite algebra `x * y = y x`.
pub fn opposite(alg: &FinDimAlgebra) -> FinDimAlgebra {
    FinDimAlgebra::from_fn(alg.labels().to_vec(), |i, j| {
        alg.basis_product(j, i).iter().copied().collect()
    })
    .expect("shapes agree")
    .with_detected_unit(1e-12)
}

/// Named algebras of dimension 1 to 3 with integer structure constants.
pub fn pool() -> Vec<(&'static str, FinDimAlgebra)> {
    vec![
        ("C", complex_unital()),
        ("C0", FinDimAlgebra::zero_product(labels("z", 1))),
        ("C2", pointwise(2)),
        ("D2", table("d", 2, &[(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 0, 1, 1.0)])),
        ("N2", FinDimAlgebra::zero_product(labels("z", 2))),
        ("L2", table("l", 2, &[(0, 0, 0, 1.0), (0, 1, 1, 1.0)])),
        ("C3", pointwise(3)),
        (
            "D3",
            table(
                "x",
                3,
                &[
                    (0, 0, 0, 1.0),
                    (0, 1, 1, 1.0),
                    (1, 0, 1, 1.0),
                    (0, 2, 2, 1.0),
                    (2, 0, 2, 1.0),
                    (1, 1, 2, 1.0),
                ],
            ),
        ),
        (
            "T2",
            table(
                "t",
                3,
                &[(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 2, 1, 1.0), (2, 2, 2, 1.0)],
            ),
        ),
        ("N3", FinDimAlgebra::zero_product(labels("z", 3))),
        ("X3", table("y", 3, &[(0, 0, 1, 1.0), (0, 1, 2, 1.0), (1, 0, 2, 1.0)])),
        ("H3", table("h", 3, &[(0, 1, 2, 1.0)])),
        (
            "CD",
            direct_sum(
                &complex_unital(),
                &table("d", 2, &[(0, 0, 0, 1.0), (0, 1, 1, 1.0), (1, 0, 1, 1.0)]),
            )
            .with_detected_unit(1e-12),
        ),
    ]
}

pub fn pool_algebra(name: &str) -> Option<FinDimAlgebra> {
    pool().into_iter().find(|(n, _)| *n == name).map(|(_, a)| a)
}

/// Twenty dimension-3 algebras with integer structure constants: the
/// dimension-3 pool members, direct sums, opposites and unimodular basis
/// changes.
pub fn integer_pool_dim3() -> Vec<FinDimAlgebra> {
    let p = |n: &str| pool_algebra(n).expect("pool member");
    let ds = |a: &str, b: &str| direct_sum(&p(a), &p(b)).with_detected_unit(1e-12);
    let shear = DMatrix::from_row_slice(
        3,
        3,
        &[re(1.0), re(1.0), re(0.0), re(0.0), re(1.0), re(0.0), re(0.0), re(0.0), re(1.0)],
    );
    let cycle = DMatrix::from_row_slice(
        3,
        3,
        &[re(0.0), re(0.0), re(1.0), re(1.0), re(0.0), re(0.0), re(0.0), re(1.0), re(-1.0)],
    );
    let mut out = vec![
        p("C3"),
        p("D3"),
        p("T2"),
        p("N3"),
        p("X3"),
        p("H3"),
        p("CD"),
        ds("C", "N2"),
        ds("C", "L2"),
        ds("C0", "C2"),
        ds("C0", "D2"),
        ds("C0", "L2"),
        ds("L2", "C0"),
        opposite(&ds("C", "L2")),
        opposite(&p("H3")),
    ];
    for name in ["T2", "H3", "CD"] {
        out.push(p(name).transport(&shear).expect("unimodular"));
    }
    for name in ["T2", "D3"] {
        out.push(p(name).transport(&cycle).expect("unimodular"));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionKind {
    /// Both actions zero.
    Zero,
    /// `beta . a = a . beta = theta(beta) a` for the chosen character of `F`.
    Lau { theta: usize },
    /// `A = F` acted on by multiplication.
    Natural,
    /// `A = B (+) F`, acted on through the inclusion of `F`.
    Embedding,
    /// `A = C^k` with the zero product, `beta . x = theta_l(beta) x`,
    /// `x . beta = theta_r(beta) x`.
    CharacterModule { left: usize, right: usize },
    /// `A` is `F` with the zero product, acted on by multiplication.
    RegularModule,
    /// `[[P, C], [0, Q]]` with `C` a module through characters of `P`, `Q`.
    Triangular { left: usize, right: usize },
}

/// A reproducible description of a triple. `a` and `f` index [`pool`]; for
/// `CharacterModule` the field `a` is the module dimension minus one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Recipe {
    pub kind: ActionKind,
    pub a: usize,
    pub f: usize,
    /// Seed of a random basis change applied to both factors.
    pub transport: Option<u64>,
}

fn pick<T: Clone>(xs: &[T], i: usize) -> Option<T> {
    if xs.is_empty() {
        None
    } else {
        Some(xs[i % xs.len()].clone())
    }
}

fn char_vectors(alg: &FinDimAlgebra) -> Result<Vec<nalgebra::DVector<C64>>> {
    Ok(characters(alg, BUILD_TOL, 0)?.into_iter().map(|ch| ch.phi).collect())
}

fn scalar_ops(theta: &nalgebra::DVector<C64>, k: usize) -> Vec<DMatrix<C64>> {
    theta.iter().map(|&x| DMatrix::identity(k, k) * x).collect()
}

fn no_character(name: &str) -> Error {
    Error::HypothesisNotMet(format!("{name} has no characters"))
}

/// An invertible matrix with small integer and Gaussian-integer entries.
pub fn random_invertible(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let entries = [re(-1.0), re(0.0), re(1.0), re(2.0), c(0.0, 1.0)];
    loop {
        let m = DMatrix::from_fn(d, d, |_, _| entries[rng.gen_range(0..entries.len())]);
        if m.determinant().norm() >= 0.5 {
            return m;
        }
    }
}

impl Recipe {
    pub fn build(&self) -> Result<Triple> {
        let p = pool();
        let get = |i: usize| p[i % p.len()].clone();
        let (f_name, f) = get(self.f);
        let t = match self.kind {
            ActionKind::Zero => {
                let (_, a) = get(self.a);
                let act = BimoduleAction::zero(a.dim(), f.dim());
                Triple::new(a, f, act)?
            }
            ActionKind::Lau { theta } => {
                let (_, a) = get(self.a);
                let th = pick(&char_vectors(&f)?, theta).ok_or_else(|| no_character(f_name))?;
                lau(a, f, &th, BUILD_TOL)?
            }
            ActionKind::Natural => {
                let ops: Vec<DMatrix<C64>> = (0..f.dim()).map(|q| f.left_mult_basis(q)).collect();
                let rops: Vec<DMatrix<C64>> = (0..f.dim()).map(|q| f.right_mult_basis(q)).collect();
                let act = BimoduleAction::from_operators(&ops, &rops)?;
                Triple::new(f.clone(), f, act)?
            }
            ActionKind::Embedding => {
                let (_, b) = get(self.a);
                let a = direct_sum(&b, &f).with_detected_unit(1e-12);
                let (db, df) = (b.dim(), f.dim());
                let embed = |q: usize| {
                    let mut v = nalgebra::DVector::zeros(db + df);
                    v[db + q] = re(1.0);
                    v
                };
                let l: Vec<DMatrix<C64>> = (0..df).map(|q| a.left_mult(&embed(q))).collect();
                let r: Vec<DMatrix<C64>> = (0..df).map(|q| a.right_mult(&embed(q))).collect();
                let act = BimoduleAction::from_operators(&l, &r)?;
                Triple::new(a, f, act)?
            }
            ActionKind::CharacterModule { left, right } => {
                let k = self.a % 3 + 1;
                let chars = char_vectors(&f)?;
                let tl = pick(&chars, left).ok_or_else(|| no_character(f_name))?;
                let tr = pick(&chars, right).ok_or_else(|| no_character(f_name))?;
                module_extension(labels("m", k), f, &scalar_ops(&tl, k), &scalar_ops(&tr, k))?
            }
            ActionKind::RegularModule => {
                let l: Vec<DMatrix<C64>> = (0..f.dim()).map(|q| f.left_mult_basis(q)).collect();
                let r: Vec<DMatrix<C64>> = (0..f.dim()).map(|q| f.right_mult_basis(q)).collect();
                module_extension(labels("m", f.dim()), f, &l, &r)?
            }
            ActionKind::Triangular { left, right } => {
                let (pn, pa) = get(self.a);
                let qa = f;
                let tl = pick(&char_vectors(&pa)?, left).ok_or_else(|| no_character(pn))?;
                let tr = pick(&char_vectors(&qa)?, right).ok_or_else(|| no_character(f_name))?;
                let mut t = triangular(&pa, &qa, labels("m", 1), &scalar_ops(&tl, 1), &scalar_ops(&tr, 1))?;
                t.f = t.f.with_detected_unit(1e-12);
                t
            }
        };
        if t.a_dim() > 3 || t.f_dim() > 3 {
            return Err(Error::HypothesisNotMet("factor dimension above 3".into()));
        }
        match self.transport {
            None => Ok(t),
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pa = random_invertible(t.a_dim(), &mut rng);
                let pf = random_invertible(t.f_dim(), &mut rng);
                t.transport(&pa, &pf)
                    .ok_or_else(|| Error::InvalidMatrix("singular basis change".into()))
            }
        }
    }

    fn weight(&self) -> usize {
        let kind = match self.kind {
            ActionKind::Zero => 0,
            _ => 1,
        };
        self.a + self.f + kind * 100 + usize::from(self.transport.is_some()) * 1000
    }

    /// Strictly simpler recipes, tried in order by [`minimize`].
    pub fn simplifications(&self) -> Vec<Recipe> {
        let mut out = Vec::new();
        if self.transport.is_some() {
            out.push(Recipe { transport: None, ..*self });
        }
        if self.kind != ActionKind::Zero {
            out.push(Recipe { kind: ActionKind::Zero, ..*self });
        }
        for a in 0..self.a {
            out.push(Recipe { a, ..*self });
        }
        for f in 0..self.f {
            out.push(Recipe { f, ..*self });
        }
        out.retain(|r| r.weight() < self.weight());
        out
    }
}

/// Greedy shrinking: repeatedly replaces the recipe by the first simpler one
/// that still builds and still fails.
pub fn minimize(recipe: Recipe, fails: impl Fn(&Triple) -> bool) -> Recipe {
    let mut current = recipe;
    'outer: loop {
        for cand in current.simplifications() {
            if let Ok(t) = cand.build() {
                if fails(&t) {
                    current = cand;
                    continue 'outer;
                }
            }
        }
        return current;
    }
}

/// Seeded stream of recipes that build into validated triples.
pub struct TripleGen {
    rng: ChaCha8Rng,
    commutative: bool,
    transport: bool,
}

impl TripleGen {
    /// Any kind of action, over any pool algebras.
    pub fn general(seed: u64) -> Self {
        TripleGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            commutative: false,
            transport: true,
        }
    }

    /// Commutative factors with symmetric actions.
    pub fn commutative_symmetric(seed: u64) -> Self {
        TripleGen {
            commutative: true,
            ..Self::general(seed)
        }
    }

    /// Keeps the integer pool bases.
    pub fn without_transport(mut self) -> Self {
        self.transport = false;
        self
    }

    fn draw(&mut self) -> Recipe {
        let p = pool();
        let eligible: Vec<usize> = (0..p.len())
            .filter(|&i| !self.commutative || p[i].1.is_commutative(1e-12))
            .collect();
        let mut idx = || eligible[self.rng.gen_range(0..eligible.len())];
        let (a, f) = (idx(), idx());
        let k = self.rng.gen_range(0..4usize);
        let l = self.rng.gen_range(0..4usize);
        let kinds = if self.commutative { 6 } else { 7 };
        let kind = match self.rng.gen_range(0..kinds) {
            0 => ActionKind::Zero,
            1 => ActionKind::Lau { theta: k },
            2 => ActionKind::Natural,
            3 => ActionKind::Embedding,
            4 => ActionKind::CharacterModule {
                left: k,
                right: if self.commutative { k } else { l },
            },
            5 => ActionKind::RegularModule,
            _ => ActionKind::Triangular { left: k, right: l },
        };
        let a = if matches!(kind, ActionKind::CharacterModule { .. }) {
            self.rng.gen_range(0..3)
        } else {
            a
        };
        let transport = if self.transport && self.rng.gen_bool(0.5) {
            Some(self.rng.gen())
        } else {
            None
        };
        Recipe { kind, a, f, transport }
    }

    /// The next recipe whose triple builds and validates.
    pub fn next_recipe(&mut self) -> (Recipe, Triple) {
        loop {
            let r = self.draw();
            if let Ok(t) = r.build() {
                if t.validate(1e-9).is_ok_and(|(a, f, act)| a.passed && f.passed && act.passed) {
                    return (r, t);
                }
            }
        }
    }

    pub fn take(&mut self, n: usize) -> Vec<(Recipe, Triple)> {
        (0..n).map(|_| self.next_recipe()).collect()
    }
}

/// A random algebra of dimension 1 to 3: a pool member under a random
/// basis change.
pub fn random_algebra(rng: &mut ChaCha8Rng) -> FinDimAlgebra {
    let p = pool();
    let (_, alg) = p[rng.gen_range(0..p.len())].clone();
    let m = random_invertible(alg.dim(), rng);
    alg.transport(&m).expect("invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_algebra;

    #[test]
    fn pool_is_associative() {
        for (name, alg) in pool() {
            assert!(validate_algebra(&alg, 1e-12).passed, "{name}");
        }
        let p3 = integer_pool_dim3();
        assert_eq!(p3.len(), 20);
        for alg in &p3 {
            assert_eq!(alg.dim(), 3);
            assert!(validate_algebra(alg, 1e-12).passed);
            assert!(alg.tensor().iter().all(|x| x.im == 0.0 && x.re.fract() == 0.0));
        }
    }

    #[test]
    fn generators_are_deterministic_and_valid() {
        let a: Vec<Recipe> = TripleGen::general(3).take(30).into_iter().map(|(r, _)| r).collect();
        let b: Vec<Recipe> = TripleGen::general(3).take(30).into_iter().map(|(r, _)| r).collect();
        assert_eq!(a, b);
        let kinds: std::collections::HashSet<_> =
            a.iter().map(|r| std::mem::discriminant(&r.kind)).collect();
        assert!(kinds.len() >= 5);
    }

    #[test]
    fn commutative_generator_is_commutative() {
        for (_, t) in TripleGen::commutative_symmetric(11).take(40) {
            assert!(t.a.is_commutative(1e-9) && t.f.is_commutative(1e-9));
            assert!(t.action.symmetry_defect() < 1e-9);
        }
    }

    #[test]
    fn minimize_shrinks() {
        let r = Recipe {
            kind: ActionKind::Lau { theta: 0 },
            a: 5,
            f: 6,
            transport: Some(9),
        };
        let m = minimize(r, |t| t.a_dim() >= 2);
        assert_eq!(m.transport, None);
        assert_eq!(m.kind, ActionKind::Zero);
        assert_eq!(m.f, 0);
        assert_eq!(pool()[m.a].1.dim(), 2);
    }
}

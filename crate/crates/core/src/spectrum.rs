//! Characters, the companion functional on `F`, and the spectrum of a
//! duplication.
//!
//! Characters are found on the largest commutative semisimple quotient. A
//! character kills every commutator, hence the two-sided ideal `K` they
//! generate, and on the commutative algebra `C / K` it kills the radical of
//! the trace form `(x, y) -> tr L_{xy}`. What remains is isomorphic to `C^m`,
//! where left multiplication by a generic element has `m` distinct nonzero
//! eigenvalues and its left eigenvectors are exactly the characters.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Element, FinDimAlgebra, Triple};
use crate::error::{Error, Result};
use crate::ideals::{ideal_generated, quotient, Side};
use crate::linalg::{eigenvalues, rank, rank_nullspace, Subspace, C64};

/// Number of generic elements tried before giving up.
pub const RETRY_BUDGET: usize = 5;

/// A nonzero multiplicative functional, as a coordinate covector.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub phi: DVector<C64>,
    /// The companion functional on `F`, when computed.
    pub tilde: Option<DVector<C64>>,
    pub residual: f64,
}

impl Character {
    pub fn eval(&self, x: &Element) -> C64 {
        self.phi.dot(x)
    }
}

/// `max |phi(e_i e_j) - phi(e_i) phi(e_j)|`.
pub fn multiplicativity_defect(alg: &FinDimAlgebra, phi: &DVector<C64>) -> f64 {
    let d = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let lhs = phi.dot(&alg.basis_product(i, j));
            worst = worst.max((lhs - phi[i] * phi[j]).norm());
        }
    }
    worst
}

fn character_bound(alg: &FinDimAlgebra, phi: &DVector<C64>, tol: f64) -> f64 {
    let m = phi.camax().max(1.0);
    tol * alg.scale() * m * m
}

/// The largest commutative quotient with zero trace-form radical, as a
/// projection `x -> P x` onto its coordinates and the quotient algebra.
fn semisimple_commutative_quotient(
    alg: &FinDimAlgebra,
    tol: f64,
) -> Result<(FinDimAlgebra, DMatrix<C64>)> {
    let d = alg.dim();
    let mut comms = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            comms.push(alg.basis_product(i, j) - alg.basis_product(j, i));
        }
    }
    let k = ideal_generated(alg, &comms, Side::TwoSided, tol)?;
    let (q1, b1) = quotient(alg, &k)?;
    let m = q1.dim();
    let mut trace_form = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            trace_form[(i, j)] = q1.left_mult(&q1.basis_product(i, j)).trace();
        }
    }
    let (_, radical) = rank_nullspace(&trace_form, tol)?;
    let (q2, b2) = quotient(&q1, &radical)?;
    let proj = b2.adjoint() * b1.adjoint();
    Ok((q2, proj))
}

fn generic_element(rng: &mut ChaCha8Rng, n: usize) -> DVector<C64> {
    DVector::from_fn(n, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn separated(ev: &[C64], gap: f64) -> bool {
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    ev.iter().all(|z| z.norm() > gap * scale)
        && ev
            .iter()
            .enumerate()
            .all(|(i, a)| ev[i + 1..].iter().all(|b| (a - b).norm() > gap * scale))
}

/// Lexicographic order on (re, im) of the coordinates, used to make the
/// output order independent of the generic element.
fn cmp_covectors(a: &DVector<C64>, b: &DVector<C64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let o = x
            .re
            .partial_cmp(&y.re)
            .unwrap_or(Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal));
        if o != Ordering::Equal && (x - y).norm() > 1e-6 {
            return o;
        }
    }
    Ordering::Equal
}

/// Every character of `alg`, verified to multiplicativity defect within
/// `tol` (relative to the structure constants and the covector size).
pub fn characters(alg: &FinDimAlgebra, tol: f64, seed: u64) -> Result<Vec<Character>> {
    let (q, proj) = semisimple_commutative_quotient(alg, tol)?;
    let m = q.dim();
    if m == 0 {
        return Ok(Vec::new());
    }
    let gap = tol.sqrt();
    for attempt in 0..RETRY_BUDGET {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let g = generic_element(&mut rng, m);
        let lg = q.left_mult(&g);
        let Ok(ev) = eigenvalues(&lg) else {
            continue;
        };
        if !separated(&ev, gap) {
            continue;
        }
        let mut out = Vec::with_capacity(m);
        let mut ok = true;
        for &lambda in &ev {
            let shifted = lg.transpose() - DMatrix::<C64>::identity(m, m) * lambda;
            let (_, null) = rank_nullspace(&shifted, gap)?;
            if null.dim() != 1 {
                ok = false;
                break;
            }
            let xi = null.basis().column(0).into_owned();
            let at_g = xi.dot(&g);
            if at_g.norm() <= gap {
                ok = false;
                break;
            }
            let xi = xi * (lambda / at_g);
            let phi = proj.transpose() * xi;
            let residual = multiplicativity_defect(alg, &phi);
            if residual > character_bound(alg, &phi, tol) {
                ok = false;
                break;
            }
            out.push(Character {
                phi,
                tilde: None,
                residual,
            });
        }
        if ok {
            out.sort_by(|a, b| cmp_covectors(&a.phi, &b.phi));
            return Ok(out);
        }
    }
    Err(Error::DegenerateSpectrum(RETRY_BUDGET))
}

/// The functional `beta -> phi(beta . a0)` for any `a0` with `phi(a0) = 1`.
///
/// Recomputed with a second normalizing element when `A` has dimension at
/// least 2; also checks `phi(a . beta) = phi(beta . a) = phi(a) tilde(beta)`
/// and that the result is multiplicative or zero.
pub fn tilde(phi: &Character, t: &Triple, tol: f64) -> Result<DVector<C64>> {
    let p = &phi.phi;
    let da = t.a_dim();
    let df = t.f_dim();
    let nrm2: f64 = p.iter().map(|z| z.norm_sqr()).sum();
    if nrm2 == 0.0 {
        return Err(Error::NotACharacter(0.0));
    }
    let a0: Element = p.map(|z| z.conj() / nrm2);
    let lops = t.left_action_ops();
    let rops = t.right_action_ops();
    let eval = |a0: &Element| DVector::from_fn(df, |q, _| p.dot(&(&lops[q] * a0)));
    let tl = eval(&a0);
    let bound = tol * t.action.scale() * t.a.scale() * p.camax().max(1.0).powi(2);
    let mut defect: f64 = 0.0;
    if da >= 2 {
        let k = (0..da)
            .min_by(|&i, &j| p[i].norm().partial_cmp(&p[j].norm()).unwrap())
            .expect("da >= 2");
        let mut w = t.a.basis(k) - &a0 * p[k];
        w /= C64::from(w.norm().max(f64::MIN_POSITIVE));
        let other = eval(&(&a0 + w));
        defect = defect.max((other - &tl).camax());
    }
    for q in 0..df {
        for i in 0..da {
            let ai = t.a.basis(i);
            let expect = p[i] * tl[q];
            defect = defect.max((p.dot(&(&lops[q] * &ai)) - expect).norm());
            defect = defect.max((p.dot(&(&rops[q] * &ai)) - expect).norm());
        }
    }
    if tl.camax() > 0.0 {
        defect = defect.max(multiplicativity_defect(&t.f, &tl));
    }
    if defect > bound {
        return Err(Error::ActionIncompatibleWithCharacter(defect));
    }
    Ok(tl)
}

/// Greedy one-to-one matching in sup-norm; true when every element of `a`
/// pairs with a distinct element of `b` within `dist` and the sizes agree.
pub fn match_characters(a: &[DVector<C64>], b: &[DVector<C64>], dist: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, y)| !used[*j] && y.len() == x.len())
            .map(|(j, y)| (j, (x - y).camax()))
            .min_by(|l, r| l.1.partial_cmp(&r.1).unwrap());
        match best {
            Some((j, d)) if d <= dist => used[j] = true,
            _ => return false,
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct DuplicationSpectrum {
    /// `(phi, tilde phi)` for each character of `A`.
    pub e: Vec<Character>,
    /// `(0, psi)` for each character of `F`.
    pub f: Vec<Character>,
    /// The characters of the duplication, computed directly.
    pub sigma: Vec<Character>,
}

impl DuplicationSpectrum {
    pub fn composed(&self) -> Vec<DVector<C64>> {
        self.e.iter().chain(self.f.iter()).map(|c| c.phi.clone()).collect()
    }
}

/// Lifts the characters of both factors and checks them against the
/// directly computed spectrum of the duplication.
pub fn duplication_spectrum(t: &Triple, tol: f64, seed: u64) -> Result<DuplicationSpectrum> {
    let dup = t.duplicate(tol)?;
    let sigma = characters(&dup, tol, seed)?;
    let mut e = Vec::new();
    for phi in characters(&t.a, tol, seed)? {
        let tl = tilde(&phi, t, tol)?;
        let lifted = t.join(&phi.phi, &tl);
        e.push(Character {
            residual: multiplicativity_defect(&dup, &lifted),
            phi: lifted,
            tilde: Some(tl),
        });
    }
    let f: Vec<Character> = characters(&t.f, tol, seed)?
        .into_iter()
        .map(|psi| {
            let lifted = t.join(&Element::zeros(t.a_dim()), &psi.phi);
            Character {
                residual: multiplicativity_defect(&dup, &lifted),
                phi: lifted,
                tilde: None,
            }
        })
        .collect();
    let dist = 10.0 * tol;
    for c in e.iter().chain(f.iter()) {
        if c.residual > character_bound(&dup, &c.phi, tol) {
            return Err(Error::SpectrumTheoremViolation(format!(
                "lifted functional has multiplicativity defect {:.3e}",
                c.residual
            )));
        }
    }
    for x in &e {
        if f.iter().any(|y| (&x.phi - &y.phi).camax() <= dist) {
            return Err(Error::SpectrumTheoremViolation("E and F intersect".into()));
        }
    }
    let out = DuplicationSpectrum { e, f, sigma };
    let direct: Vec<DVector<C64>> = out.sigma.iter().map(|c| c.phi.clone()).collect();
    if !match_characters(&direct, &out.composed(), dist) {
        return Err(Error::SpectrumTheoremViolation(format!(
            "{} direct characters against {} composed",
            direct.len(),
            out.e.len() + out.f.len()
        )));
    }
    Ok(out)
}

/// Injectivity of the Gelfand transform of a commutative algebra.
pub fn gelfand_semisimple(alg: &FinDimAlgebra, tol: f64, seed: u64) -> Result<bool> {
    if !alg.is_commutative(tol) {
        return Err(Error::CommutativityRequired);
    }
    let chars = characters(alg, tol, seed)?;
    if chars.is_empty() {
        return Ok(alg.dim() == 0);
    }
    let rows: Vec<_> = chars.iter().map(|c| c.phi.transpose()).collect();
    let m = DMatrix::from_rows(&rows);
    Ok(rank(&m, tol)? == alg.dim())
}

/// The joint kernel of all characters.
pub fn character_kernel(alg: &FinDimAlgebra, chars: &[Character], tol: f64) -> Result<Subspace> {
    if chars.is_empty() {
        return Ok(Subspace::full(alg.dim(), tol));
    }
    let rows: Vec<_> = chars.iter().map(|c| c.phi.transpose()).collect();
    Ok(rank_nullspace(&DMatrix::from_rows(&rows), tol)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{complex_unital, labels, pointwise};
    use crate::fixtures;
    use crate::linalg::re;

    const TOL: f64 = 1e-9;

    fn cv(xs: &[f64]) -> DVector<C64> {
        DVector::from_iterator(xs.len(), xs.iter().map(|&x| re(x)))
    }

    #[test]
    fn unital_line_has_one_character() {
        let chars = characters(&complex_unital(), TOL, 1).unwrap();
        assert_eq!(chars.len(), 1);
        assert!((chars[0].phi[0] - re(1.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_line_has_none() {
        let z = FinDimAlgebra::zero_product(labels("z", 1));
        assert!(characters(&z, TOL, 1).unwrap().is_empty());
    }

    #[test]
    fn lau_line_duplication_characters() {
        // chi1(a, b) = a + b, chi2(a, b) = b
        let dup = fixtures::fix2().duplicate(TOL).unwrap();
        let chars: Vec<_> = characters(&dup, TOL, 3)
            .unwrap()
            .into_iter()
            .map(|c| c.phi)
            .collect();
        assert!(match_characters(
            &chars,
            &[cv(&[1.0, 1.0]), cv(&[0.0, 1.0])],
            1e-10
        ));
    }

    #[test]
    fn seeds_agree() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let a: Vec<_> = characters(&dup, TOL, 1).unwrap().into_iter().map(|c| c.phi).collect();
        let b: Vec<_> = characters(&dup, TOL, 99).unwrap().into_iter().map(|c| c.phi).collect();
        assert_eq!(a.len(), 2);
        assert!(match_characters(&a, &b, 1e-10));
    }

    #[test]
    fn triangular_characters_are_diagonal_entries() {
        let dup = fixtures::fix4().duplicate(TOL).unwrap();
        let chars: Vec<_> = characters(&dup, TOL, 5).unwrap().into_iter().map(|c| c.phi).collect();
        assert!(match_characters(
            &chars,
            &[cv(&[0.0, 1.0, 0.0]), cv(&[0.0, 0.0, 1.0])],
            1e-10
        ));
    }

    #[test]
    fn tilde_examples() {
        let t = fixtures::fix2();
        let phi = &characters(&t.a, TOL, 1).unwrap()[0];
        let tl = tilde(phi, &t, TOL).unwrap();
        assert!((tl[0] - re(1.0)).norm() < 1e-12);

        let mut t0 = fixtures::fix2();
        t0.action = crate::algebra::BimoduleAction::zero(1, 1);
        let tl = tilde(phi, &t0, TOL).unwrap();
        assert_eq!(tl.camax(), 0.0);
    }

    #[test]
    fn tilde_rejects_zero_functional() {
        let t = fixtures::fix2();
        let bogus = Character {
            phi: cv(&[0.0]),
            tilde: None,
            residual: 0.0,
        };
        assert!(tilde(&bogus, &t, TOL).is_err());
    }

    #[test]
    fn spectrum_of_fixtures() {
        let s = duplication_spectrum(&fixtures::fix2(), TOL, 1).unwrap();
        assert!(match_characters(&[s.e[0].phi.clone()], &[cv(&[1.0, 1.0])], 1e-10));
        assert!(match_characters(&[s.f[0].phi.clone()], &[cv(&[0.0, 1.0])], 1e-10));
        assert_eq!(s.sigma.len(), 2);

        let s = duplication_spectrum(&fixtures::fix3(), TOL, 1).unwrap();
        assert_eq!((s.e.len(), s.f.len(), s.sigma.len()), (0, 1, 1));
        assert!(match_characters(&[s.f[0].phi.clone()], &[cv(&[0.0, 1.0])], 1e-10));

        let s = duplication_spectrum(&fixtures::fix1(), TOL, 1).unwrap();
        assert_eq!((s.e.len(), s.f.len(), s.sigma.len()), (0, 0, 0));

        let s = duplication_spectrum(&fixtures::fix4(), TOL, 1).unwrap();
        assert_eq!((s.e.len(), s.f.len(), s.sigma.len()), (0, 2, 2));
    }

    #[test]
    fn semisimplicity_examples() {
        assert!(gelfand_semisimple(&pointwise(2), TOL, 1).unwrap());
        let fix1 = fixtures::fix1().duplicate(TOL).unwrap();
        assert!(!gelfand_semisimple(&fix1, TOL, 1).unwrap());
        let fix2 = fixtures::fix2().duplicate(TOL).unwrap();
        assert!(gelfand_semisimple(&fix2, TOL, 1).unwrap());
        let fix4 = fixtures::fix4().duplicate(TOL).unwrap();
        assert!(matches!(
            gelfand_semisimple(&fix4, TOL, 1),
            Err(Error::CommutativityRequired)
        ));
    }

    #[test]
    fn dual_numbers_have_one_character() {
        // C[x]/x^2 with basis (1, x)
        let alg = FinDimAlgebra::from_fn(labels("d", 2), |i, j| match (i, j) {
            (0, 0) => vec![re(1.0), re(0.0)],
            (0, 1) | (1, 0) => vec![re(0.0), re(1.0)],
            _ => vec![re(0.0), re(0.0)],
        })
        .unwrap();
        let chars = characters(&alg, TOL, 1).unwrap();
        assert_eq!(chars.len(), 1);
        assert!((&chars[0].phi - cv(&[1.0, 0.0])).camax() < 1e-10);
        assert!(!gelfand_semisimple(&alg, TOL, 1).unwrap());
    }
}

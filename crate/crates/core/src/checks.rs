//! Randomized and fixture-based checks of the structural results, each
//! reported as a [`Row`]. Failing random instances are shrunk with
//! [`minimize`] and attached as bundles.

use std::time::Instant;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{validate_action, validate_algebra, FinDimAlgebra, Triple};
use crate::bundle::AlgebraBundle;
use crate::derivations::{
    amenability_predicates, cohomology, cyclic_quadruple_space, decompose_derivation,
    inner_derivation, is_inner_match, property_h, quadruple_space, unital_form_check,
};
use crate::duals::{arens_products, essentiality, second_dual_iso_defect, DualBimodule, EssentialityMode};
use crate::fixtures;
use crate::ideals::{ideal_generated, is_ideal, is_maximal_left_ideal, product_ideal_test, Side};
use crate::linalg::{c, re, unflatten, Subspace, C64};
use crate::multipliers::{decompose_multiplier, left_multiplier_space};
use crate::random::{integer_pool_dim3, minimize, random_algebra, Recipe, TripleGen};
use crate::report::Row;
use crate::spectrum::{duplication_spectrum, gelfand_semisimple};
use crate::{Error, Result};

fn witness(recipe: Recipe, fails: impl Fn(&Triple) -> bool) -> serde_json::Value {
    let small = minimize(recipe, fails);
    match small.build() {
        Ok(t) => AlgebraBundle::from_triple(&format!("{small:?}"), &t).to_value(),
        Err(e) => json!({ "recipe": format!("{small:?}"), "error": e.to_string() }),
    }
}

fn commutative_symmetric(t: &Triple) -> bool {
    t.a.is_commutative(1e-9) && t.f.is_commutative(1e-9) && t.action.symmetry_defect() <= 1e-9
}

fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> DVector<C64> {
    DVector::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Validation of the four fixtures at `1e-12`.
pub fn axioms() -> Row {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for t in fixtures::all() {
        for r in [validate_algebra(&t.a, 1e-12), validate_algebra(&t.f, 1e-12)] {
            ok &= r.passed;
            worst = worst.max(r.max_defect());
        }
        match validate_action(&t.a, &t.f, &t.action, 1e-12) {
            Ok(r) => {
                ok &= r.passed;
                worst = worst.max(r.max_defect());
            }
            Err(_) => ok = false,
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Row::check("axioms", ok && worst <= 1e-12 && secs < 1.0, format!("fixtures validated in {secs:.3}s"))
        .with_defect(worst)
}

/// Associativity of random duplications at `1e-10`.
pub fn associativity(trials: usize, seed: u64) -> Row {
    let mut worst: f64 = 0.0;
    let mut bad = None;
    for (r, t) in TripleGen::general(seed).take(trials) {
        let d = t.duplicate_unchecked(1e-9).associativity_defect();
        worst = worst.max(d);
        if d > 1e-10 && bad.is_none() {
            bad = Some(r);
        }
    }
    let row = Row::check("associativity", bad.is_none(), format!("{trials} random duplications"))
        .with_defect(worst);
    match bad {
        Some(r) => row.with_witness(witness(r, |t| t.duplicate_unchecked(1e-9).associativity_defect() > 1e-10)),
        None => row,
    }
}

/// Directly computed characters of the duplication against the lifted
/// characters of the factors, matched at `1e-7`.
pub fn spectrum_composition(trials: usize, seed: u64) -> Row {
    let start = Instant::now();
    let fails = |t: &Triple| commutative_symmetric(t) && duplication_spectrum(t, 1e-8, seed).is_err();
    let mut bad = None;
    let mut counted = 0;
    for (r, t) in TripleGen::commutative_symmetric(seed).take(trials) {
        match duplication_spectrum(&t, 1e-8, seed) {
            Ok(s) => counted += s.sigma.len(),
            Err(_) if bad.is_none() => bad = Some(r),
            Err(_) => {}
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let row = Row::check(
        "spectrum",
        bad.is_none() && secs < 10.0,
        format!("{trials} commutative triples, {counted} characters matched in {secs:.2}s"),
    );
    match bad {
        Some(r) => row.with_witness(witness(r, fails)),
        None => row,
    }
}

fn semisimple_agrees(t: &Triple, seed: u64) -> Result<bool> {
    let dup = t.duplicate(1e-9)?;
    let lhs = gelfand_semisimple(&dup, 1e-9, seed)?;
    let rhs = gelfand_semisimple(&t.a, 1e-9, seed)? && gelfand_semisimple(&t.f, 1e-9, seed)?;
    Ok(lhs == rhs)
}

/// Semisimplicity of the duplication against both factors.
pub fn semisimplicity_transfer(trials: usize, seed: u64) -> Row {
    let fails = |t: &Triple| commutative_symmetric(t) && !semisimple_agrees(t, seed).unwrap_or(false);
    let mut bad = None;
    let mut semisimple = 0;
    for (r, t) in TripleGen::commutative_symmetric(seed).take(trials) {
        if fails(&t) && bad.is_none() {
            bad = Some(r);
        }
        if let Ok(dup) = t.duplicate(1e-9) {
            semisimple += usize::from(gelfand_semisimple(&dup, 1e-9, seed).unwrap_or(false));
        }
    }
    let row = Row::check(
        "semisimplicity",
        bad.is_none(),
        format!("{trials} commutative triples, {semisimple} semisimple duplications"),
    );
    match bad {
        Some(r) => row.with_witness(witness(r, fails)),
        None => row,
    }
}

/// Both Arens extensions reproduce the product, and the second dual of the
/// duplication is the duplication of the second duals.
pub fn arens_identity(trials: usize, seed: u64) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut algebras: Vec<FinDimAlgebra> = fixtures::all()
        .into_iter()
        .flat_map(|t| [t.a.clone(), t.f.clone(), t.duplicate_unchecked(1e-9)])
        .collect();
    algebras.extend((0..trials).map(|_| random_algebra(&mut rng)));
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for alg in &algebras {
        match arens_products(alg, 1e-10) {
            Ok(s) => worst = worst.max(s.defect),
            Err(Error::ArensDefect(d)) => {
                ok = false;
                worst = worst.max(d);
            }
            Err(_) => ok = false,
        }
    }
    let triples: Vec<Triple> = fixtures::all()
        .into_iter()
        .chain(TripleGen::general(seed).take(trials).into_iter().map(|(_, t)| t))
        .collect();
    let mut iso: f64 = 0.0;
    for t in &triples {
        match second_dual_iso_defect(t, 1e-10) {
            Ok(d) => iso = iso.max(d),
            Err(_) => ok = false,
        }
    }
    Row::check(
        "arens",
        ok && worst <= 1e-10 && iso <= 1e-10,
        format!("{} algebras, {} triples; second-dual defect {iso:.3e}", algebras.len(), triples.len()),
    )
    .with_defect(worst.max(iso))
}

/// Left multipliers of the duplication against the block quadruples.
pub fn multiplier_decomposition(trials: usize, seed: u64, tol: f64) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d75);
    let mut mismatch = None;
    let mut worst: f64 = 0.0;
    let dims_agree = |t: &Triple| -> Result<bool> {
        let dup = t.duplicate(tol)?;
        Ok(left_multiplier_space(&dup, tol)?.dim() == crate::multipliers::quadruple_space(t, tol)?.dim())
    };
    for (r, t) in TripleGen::general(seed).take(trials) {
        if !dims_agree(&t).unwrap_or(false) {
            mismatch.get_or_insert(r);
            continue;
        }
        let dup = t.duplicate(tol).expect("validated");
        let lm = left_multiplier_space(&dup, tol).expect("checked above");
        let k = dup.dim();
        let coeffs = random_vector(lm.dim(), &mut rng);
        let op = unflatten(&(lm.basis() * coeffs), k, k);
        match decompose_multiplier(&t, &op, tol) {
            Ok(q) => worst = worst.max((q.assemble() - &op).camax()),
            Err(_) => {
                mismatch.get_or_insert(r);
            }
        }
    }
    let row = Row::check(
        "multipliers",
        mismatch.is_none() && worst <= 1e-10,
        format!("{trials} triples; decompose then assemble"),
    )
    .with_defect(worst);
    match mismatch {
        Some(r) => row.with_witness(witness(r, |t| !dims_agree(t).unwrap_or(false))),
        None => row,
    }
}

/// Derivations of the duplication at levels 0 to 2 against the block
/// quadruples, plus the inner-witness roundtrip.
pub fn derivation_decomposition(trials: usize, seed: u64, tol: f64) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6465);
    let dims_agree = |t: &Triple| -> Result<bool> {
        let dup = t.duplicate(tol)?;
        for n in 0..3 {
            let z1 = crate::derivations::derivation_space(&dup, &DualBimodule::regular(&dup).nth(n), tol)?;
            if z1.dim() != quadruple_space(t, n, tol)?.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut mismatch = None;
    let mut worst: f64 = 0.0;
    for (r, t) in TripleGen::general(seed).take(trials) {
        if !dims_agree(&t).unwrap_or(false) {
            mismatch.get_or_insert(r);
            continue;
        }
        let dup = t.duplicate(tol).expect("validated");
        for n in 0..3 {
            let module = DualBimodule::regular(&dup).nth(n);
            let x = random_vector(dup.dim(), &mut rng);
            let ad = inner_derivation(&module, &x);
            let back = decompose_derivation(&t, &ad, n, tol)
                .ok()
                .and_then(|q| is_inner_match(&t, &q, n, tol).ok().flatten())
                .map(|w| inner_derivation(&module, &t.join(&w.x_a, &w.x_f)));
            match back {
                Some(b) => worst = worst.max((b - &ad).camax()),
                None => {
                    mismatch.get_or_insert(r);
                }
            }
        }
    }
    let row = Row::check(
        "derivations",
        mismatch.is_none() && worst <= 1e-9,
        format!("{trials} triples at levels 0, 1, 2; inner roundtrip"),
    )
    .with_defect(worst);
    match mismatch {
        Some(r) => row.with_witness(witness(r, |t| !dims_agree(t).unwrap_or(false))),
        None => row,
    }
}

/// The two-dimensional zero algebra: cyclically amenable factors, a
/// duplication that is not.
pub fn zero_algebra_example(tol: f64) -> Row {
    let t = fixtures::fix1();
    let run = || -> Result<(usize, usize, usize)> {
        let a = cohomology(&t.a, 1, tol)?.dim_h1_cyclic.unwrap_or(usize::MAX);
        let f = cohomology(&t.f, 1, tol)?.dim_h1_cyclic.unwrap_or(usize::MAX);
        let d = cohomology(&t.duplicate(tol)?, 1, tol)?.dim_h1_cyclic.unwrap_or(usize::MAX);
        Ok((a, f, d))
    };
    match run() {
        Ok((a, f, d)) => Row::check(
            "zero-algebra-cyclic",
            (a, f, d) == (0, 0, 1),
            format!("H1_cyclic: A {a}, F {f}, duplication {d}"),
        ),
        Err(e) => Row::check("zero-algebra-cyclic", false, e.to_string()),
    }
}

/// Violation counts of the transfer implications on one triple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TransferViolations {
    /// Duplication `(2n+1)`-weakly amenable but `F` not, `n` in `{0, 1}`.
    pub odd_to_f: usize,
    /// As above with property H, but `A` not.
    pub odd_to_a: usize,
    /// Both factors cyclically amenable, `<A^2> = A`, duplication not.
    pub cyclic_sufficient: usize,
    /// Unital `A`, `n <= 2`: duplication `n`-weakly amenable differs from
    /// both factors being so.
    pub unital_iff: usize,
}

impl TransferViolations {
    pub fn total(&self) -> usize {
        self.odd_to_f + self.odd_to_a + self.cyclic_sufficient + self.unital_iff
    }

    fn add(&mut self, o: &TransferViolations) {
        self.odd_to_f += o.odd_to_f;
        self.odd_to_a += o.odd_to_a;
        self.cyclic_sufficient += o.cyclic_sufficient;
        self.unital_iff += o.unital_iff;
    }
}

pub fn transfer_violations(t: &Triple, tol: f64) -> Result<TransferViolations> {
    let tab = amenability_predicates(t, 3, tol)?;
    let mut v = TransferViolations::default();
    for row in &tab.rows {
        if row.level % 2 == 1 && row.dup_weak {
            v.odd_to_f += usize::from(!row.f_weak);
            v.odd_to_a += usize::from(row.property_h == Some(true) && !row.a_weak);
        }
        if row.a_unital && row.level <= 2 {
            v.unital_iff += usize::from(row.dup_weak != (row.a_weak && row.f_weak));
        }
    }
    let squares = tab.rows.first().is_some_and(|r| r.squares_full);
    v.cyclic_sufficient = usize::from(tab.a_cyclic && tab.f_cyclic && squares && !tab.dup_cyclic);
    Ok(v)
}

pub fn transfer_audit(trials: usize, seed: u64, tol: f64) -> Row {
    let mut total = TransferViolations::default();
    let mut bad = None;
    let mut errors = 0;
    let mut unital = 0;
    for (r, t) in TripleGen::general(seed).take(trials) {
        unital += usize::from(t.a.unit().is_some());
        match transfer_violations(&t, tol) {
            Ok(v) => {
                if v.total() > 0 && bad.is_none() {
                    bad = Some(r);
                }
                total.add(&v);
            }
            Err(_) => errors += 1,
        }
    }
    let row = Row::check(
        "transfer",
        total.total() == 0 && errors == 0,
        format!(
            "{trials} triples ({unital} with unital A); violations: odd->F {}, odd+H->A {}, cyclic {}, unital iff {}; errors {errors}",
            total.odd_to_f, total.odd_to_a, total.cyclic_sufficient, total.unital_iff
        ),
    );
    match bad {
        Some(r) => row.with_witness(witness(r, |t| {
            transfer_violations(t, tol).is_ok_and(|v| v.total() > 0)
        })),
        None => row,
    }
}

/// Subspaces of dimension at most 2 spanned by vectors in `{-1, 0, 1}^3`.
pub fn small_subspaces(tol: f64) -> Vec<Subspace> {
    let vals = [-1.0, 0.0, 1.0];
    let mut vs = Vec::new();
    for x in vals {
        for y in vals {
            for z in vals {
                if (x, y, z) != (0.0, 0.0, 0.0) {
                    vs.push(DVector::from_vec(vec![re(x), re(y), re(z)]));
                }
            }
        }
    }
    let mut out: Vec<Subspace> = vec![Subspace::zero(3, tol)];
    let mut push = |s: Subspace| {
        if !out.iter().any(|o| o.equals(&s).unwrap_or(false)) {
            out.push(s);
        }
    };
    for (i, v) in vs.iter().enumerate() {
        push(Subspace::span(3, std::slice::from_ref(v), tol).expect("nonzero"));
        for w in &vs[i + 1..] {
            push(Subspace::span(3, &[v.clone(), w.clone()], tol).expect("dims agree"));
        }
    }
    out
}

/// Brute-force maximality: `I` is a proper left ideal and adjoining any
/// grid vector outside `I` generates the whole algebra.
pub fn maximal_left_ideal_oracle(alg: &FinDimAlgebra, i: &Subspace, tol: f64) -> Result<bool> {
    if i.is_full() || !is_ideal(alg, i, Side::Left, tol)? {
        return Ok(false);
    }
    let vals = [
        re(0.0),
        re(1.0),
        re(-1.0),
        re(2.0),
        re(-2.0),
        re(3.0),
        c(0.0, 1.0),
        c(0.0, -1.0),
        c(1.0, 1.0),
        c(1.0, -1.0),
    ];
    let d = alg.dim();
    let total = vals.len().pow(d as u32);
    for code in 0..total {
        let mut k = code;
        let v = DVector::from_fn(d, |_, _| {
            let x = vals[k % vals.len()];
            k /= vals.len();
            x
        });
        if i.contains_vector(&v) {
            continue;
        }
        let mut seeds = i.vectors();
        seeds.push(v);
        if !ideal_generated(alg, &seeds, Side::Left, tol)?.is_full() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn burnside_oracle(tol: f64) -> Row {
    let subspaces = small_subspaces(tol);
    let mut disagreements = 0;
    let mut maximal = 0;
    let mut first = None;
    let pool = integer_pool_dim3();
    for (n, alg) in pool.iter().enumerate() {
        for s in &subspaces {
            let fast = match is_maximal_left_ideal(alg, s, tol) {
                Ok(b) => b,
                Err(Error::NotAProperIdeal(_)) => false,
                Err(_) => {
                    disagreements += 1;
                    continue;
                }
            };
            let slow = maximal_left_ideal_oracle(alg, s, tol).unwrap_or(!fast);
            maximal += usize::from(fast);
            if fast != slow {
                disagreements += 1;
                first.get_or_insert((n, s.vectors()));
            }
        }
    }
    let row = Row::check(
        "burnside-maximality",
        disagreements == 0,
        format!(
            "{} algebras x {} subspaces, {maximal} maximal left ideals, {disagreements} disagreements",
            pool.len(),
            subspaces.len()
        ),
    );
    match first {
        Some((n, vs)) => row.with_witness(json!({
            "algebra": serde_json::to_value(crate::bundle::AlgebraJson::from_algebra(&pool[n])).unwrap_or_default(),
            "subspace": vs.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })),
        None => row,
    }
}

/// Cyclic derivations of the duplication against the cyclic quadruples.
pub fn cyclic_characterization(trials: usize, seed: u64, tol: f64) -> Row {
    let agree = |t: &Triple| -> Result<bool> {
        let dup = t.duplicate(tol)?;
        let z = cohomology(&dup, 1, tol)?.dim_z1_cyclic.unwrap_or(usize::MAX);
        Ok(z == cyclic_quadruple_space(t, tol)?.dim())
    };
    let mut bad = None;
    for (r, t) in TripleGen::general(seed).take(trials) {
        if !agree(&t).unwrap_or(false) {
            bad.get_or_insert(r);
        }
    }
    let row = Row::check("cyclic-quadruples", bad.is_none(), format!("{trials} triples"));
    match bad {
        Some(r) => row.with_witness(witness(r, |t| !agree(t).unwrap_or(false))),
        None => row,
    }
}

/// Cyclic amenability passing from the duplication to `F`, and to `A` under
/// property H at level 1.
pub fn cyclic_transfer(trials: usize, seed: u64, tol: f64) -> Vec<Row> {
    let cyc = |alg: &FinDimAlgebra| -> Result<bool> {
        Ok(cohomology(alg, 1, tol)?.cyclically_amenable().unwrap_or(false))
    };
    let to_f = |t: &Triple| -> Result<bool> { Ok(!cyc(&t.duplicate(tol)?)? || cyc(&t.f)?) };
    let to_a = |t: &Triple| -> Result<bool> {
        Ok(!cyc(&t.duplicate(tol)?)? || !property_h(t, 0, tol)? || cyc(&t.a)?)
    };
    let mut bad_f = None;
    let mut bad_a = None;
    for (r, t) in TripleGen::general(seed).take(trials) {
        if !to_f(&t).unwrap_or(false) {
            bad_f.get_or_insert(r);
        }
        if !to_a(&t).unwrap_or(false) {
            bad_a.get_or_insert(r);
        }
    }
    let mut rows = Vec::new();
    let row = Row::check("cyclic-transfer-F", bad_f.is_none(), format!("{trials} triples"));
    rows.push(match bad_f {
        Some(r) => row.with_witness(witness(r, |t| !to_f(t).unwrap_or(false))),
        None => row,
    });
    let row = Row::check("cyclic-transfer-A", bad_a.is_none(), format!("{trials} triples, property H at level 1"));
    rows.push(match bad_a {
        Some(r) => row.with_witness(witness(r, |t| !to_a(t).unwrap_or(false))),
        None => row,
    });
    rows
}

/// Both factors `(2n+1)`-weakly amenable with `A` essential on `A^(2n)`
/// make the duplication `(2n+1)`-weakly amenable, `n` in `{0, 1}`.
pub fn sufficient_condition(trials: usize, seed: u64, tol: f64) -> Row {
    let holds = |t: &Triple| -> Result<bool> {
        let dup = t.duplicate(tol)?;
        for n in 0..2 {
            let m = 2 * n + 1;
            let essential = essentiality(t, 2 * n, EssentialityMode::AlgebraLeft, tol)?
                || essentiality(t, 2 * n, EssentialityMode::AlgebraRight, tol)?;
            let both = cohomology(&t.a, m, tol)?.weakly_amenable() && cohomology(&t.f, m, tol)?.weakly_amenable();
            if both && essential && !cohomology(&dup, m, tol)?.weakly_amenable() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut bad = None;
    for (r, t) in TripleGen::general(seed).take(trials) {
        if !holds(&t).unwrap_or(false) {
            bad.get_or_insert(r);
        }
    }
    let row = Row::check("odd-sufficient", bad.is_none(), format!("{trials} triples at levels 1, 3"));
    match bad {
        Some(r) => row.with_witness(witness(r, |t| !holds(t).unwrap_or(false))),
        None => row,
    }
}

/// The blockwise product-ideal test against a direct ideal check.
pub fn product_ideals(trials: usize, seed: u64, tol: f64) -> Row {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6964);
    let mut checked = 0;
    let mut bad = None;
    for (r, t) in TripleGen::general(seed).take(trials) {
        for _ in 0..4 {
            let i = random_subspace(t.a_dim(), &mut rng, tol);
            let j = random_subspace(t.f_dim(), &mut rng, tol);
            match product_ideal_test(&t, &i, &j, tol) {
                Ok(rep) => {
                    checked += 1;
                    if !rep.agrees() {
                        bad.get_or_insert(r);
                    }
                }
                Err(_) => {
                    bad.get_or_insert(r);
                }
            }
        }
    }
    let row = Row::check("product-ideals", bad.is_none(), format!("{checked} subspace pairs"));
    match bad {
        Some(r) => row.with_witness(AlgebraBundle::from_triple(&format!("{r:?}"), &r.build().expect("built before")).to_value()),
        None => row,
    }
}

/// Zero, full, or spanned by random sparse integer vectors.
fn random_subspace(d: usize, rng: &mut ChaCha8Rng, tol: f64) -> Subspace {
    match rng.gen_range(0..4) {
        0 => Subspace::zero(d, tol),
        1 => Subspace::full(d, tol),
        _ => {
            let k = rng.gen_range(1..=d.max(1));
            let vs: Vec<DVector<C64>> = (0..k)
                .map(|_| DVector::from_fn(d, |_, _| re(rng.gen_range(-1..=1) as f64)))
                .collect();
            Subspace::span(d, &vs, tol).unwrap_or_else(|_| Subspace::zero(d, tol))
        }
    }
}

/// The duplication is commutative exactly when both factors are and the
/// action is symmetric.
pub fn commutativity_criterion(trials: usize, seed: u64, tol: f64) -> Row {
    let mut bad = None;
    let gens = TripleGen::general(seed)
        .take(trials / 2)
        .into_iter()
        .chain(TripleGen::commutative_symmetric(seed).take(trials - trials / 2));
    for (r, t) in gens {
        let dup = t.duplicate_unchecked(tol);
        let lhs = dup.is_commutative(tol);
        let rhs = t.a.is_commutative(tol) && t.f.is_commutative(tol) && t.action.symmetry_defect() <= tol;
        if lhs != rhs {
            bad.get_or_insert(r);
        }
    }
    let row = Row::check("commutativity", bad.is_none(), format!("{trials} triples"));
    match bad {
        Some(r) => row.with_witness(AlgebraBundle::from_triple(&format!("{r:?}"), &r.build().expect("built before")).to_value()),
        None => row,
    }
}

/// The unital block forms on random triples with unital `A`.
pub fn unital_forms(trials: usize, seed: u64, tol: f64) -> Row {
    let mut checked = 0;
    let mut bad = None;
    let mut worst: f64 = 0.0;
    for (r, t) in TripleGen::general(seed).take(trials) {
        if t.a.unit().is_none() {
            continue;
        }
        for n in 0..3 {
            match unital_form_check(&t, n, tol) {
                Ok(rep) => {
                    checked += 1;
                    worst = worst.max(rep.max_defect);
                    if !rep.passed {
                        bad.get_or_insert(r);
                    }
                }
                Err(_) => {
                    bad.get_or_insert(r);
                }
            }
        }
    }
    let row = Row::check("unital-forms", bad.is_none(), format!("{checked} (triple, level) pairs"))
        .with_defect(worst);
    match bad {
        Some(r) => row.with_witness(witness(r, |t| {
            (0..3).any(|n| !unital_form_check(t, n, tol).is_ok_and(|x| x.passed))
        })),
        None => row,
    }
}

/// The ten headline checks with their pinned sizes.
pub fn headline(trials_scale: f64, seed: u64, tol: f64) -> Vec<Row> {
    let n = |k: usize| ((k as f64 * trials_scale).round() as usize).max(1);
    vec![
        axioms(),
        associativity(n(200), seed),
        spectrum_composition(n(100), seed),
        semisimplicity_transfer(n(100), seed),
        arens_identity(n(50), seed),
        multiplier_decomposition(n(100), seed, tol),
        derivation_decomposition(n(50), seed, tol),
        zero_algebra_example(tol),
        transfer_audit(n(100), seed, tol),
        burnside_oracle(tol),
    ]
}

/// The same ten checks with every randomized suite run `trials` times.
pub fn headline_uniform(trials: usize, seed: u64, tol: f64) -> Vec<Row> {
    let n = trials.max(1);
    vec![
        axioms(),
        associativity(n, seed),
        spectrum_composition(n, seed),
        semisimplicity_transfer(n, seed),
        arens_identity(n, seed),
        multiplier_decomposition(n, seed, tol),
        derivation_decomposition(n, seed, tol),
        zero_algebra_example(tol),
        transfer_audit(n, seed, tol),
        burnside_oracle(tol),
    ]
}

/// Further randomized checks beyond the headline ones.
pub fn supplementary(trials: usize, seed: u64, tol: f64) -> Vec<Row> {
    let mut rows = vec![
        cyclic_characterization(trials, seed, tol),
        sufficient_condition(trials, seed, tol),
        product_ideals(trials, seed, tol),
        commutativity_criterion(trials, seed, tol),
        unital_forms(trials, seed, tol),
    ];
    rows.extend(cyclic_transfer(trials, seed, tol));
    rows
}

/// Checks that only involve the given triple.
pub fn triple_checks(t: &Triple, tol: f64, seed: u64) -> Vec<Row> {
    let mut rows = Vec::new();
    let (a, f, act) = match t.validate(tol) {
        Ok(v) => v,
        Err(e) => return vec![Row::check("validate", false, e.to_string())],
    };
    let valid = a.passed && f.passed && act.passed;
    rows.push(Row::check("validate", valid, "axioms of both factors and the action")
        .with_defect(a.max_defect().max(f.max_defect()).max(act.max_defect())));
    if !valid {
        return rows;
    }
    let dup = t.duplicate_unchecked(tol);
    rows.push(
        Row::check("associativity", dup.associativity_defect() <= tol * dup.scale(), "duplication product")
            .with_defect(dup.associativity_defect()),
    );
    if t.a.is_commutative(tol) && t.f.is_commutative(tol) && t.action.symmetry_defect() <= tol {
        rows.push(match duplication_spectrum(t, tol, seed) {
            Ok(s) => Row::check("spectrum", true, format!("{} characters", s.sigma.len())),
            Err(e) => Row::check("spectrum", false, e.to_string()),
        });
        rows.push(Row::check("semisimplicity", semisimple_agrees(t, seed).unwrap_or(false), "duplication against factors"));
    }
    rows.push(match second_dual_iso_defect(t, tol) {
        Ok(d) => Row::check("second-dual", d <= tol, "entrywise").with_defect(d),
        Err(e) => Row::check("second-dual", false, e.to_string()),
    });
    let lm = (|| -> Result<(usize, usize)> {
        Ok((left_multiplier_space(&dup, tol)?.dim(), crate::multipliers::quadruple_space(t, tol)?.dim()))
    })();
    rows.push(match lm {
        Ok((x, y)) => Row::check("multipliers", x == y, format!("direct {x}, quadruples {y}")),
        Err(e) => Row::check("multipliers", false, e.to_string()),
    });
    for n in 0..3 {
        let r = (|| -> Result<(usize, usize)> {
            let z1 = crate::derivations::derivation_space(&dup, &DualBimodule::regular(&dup).nth(n), tol)?;
            Ok((z1.dim(), quadruple_space(t, n, tol)?.dim()))
        })();
        rows.push(match r {
            Ok((x, y)) => Row::check(format!("derivations-{n}"), x == y, format!("direct {x}, quadruples {y}")),
            Err(e) => Row::check(format!("derivations-{n}"), false, e.to_string()),
        });
    }
    rows.push(match transfer_violations(t, tol) {
        Ok(v) => Row::check("transfer", v.total() == 0, format!("{v:?}")),
        Err(e) => Row::check("transfer", false, e.to_string()),
    });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn fixture_rows_pass() {
        for t in fixtures::all() {
            for row in triple_checks(&t, TOL, 0) {
                assert_ne!(row.status, crate::report::Status::Fail, "{row:?}");
            }
        }
    }

    #[test]
    fn small_subspace_count() {
        // the zero space, 13 lines and 25 planes
        assert_eq!(small_subspaces(TOL).len(), 39);
    }

    #[test]
    fn oracle_on_triangular() {
        let t2 = crate::random::pool_algebra("T2").unwrap();
        // span{E11, E12} is a maximal left ideal; span{E12} is not
        let i = Subspace::span(3, &[t2.basis(0), t2.basis(1)], TOL).unwrap();
        assert!(maximal_left_ideal_oracle(&t2, &i, TOL).unwrap());
        let j = Subspace::span(3, &[t2.basis(1)], TOL).unwrap();
        assert!(!maximal_left_ideal_oracle(&t2, &j, TOL).unwrap());
    }

    #[test]
    fn zero_algebra_row() {
        assert_eq!(zero_algebra_example(TOL).status, crate::report::Status::Pass);
    }
}

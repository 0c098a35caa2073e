use exact::{qi_int, QMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{
    adjoint, delta, first_order_holds, hochschild_b, junk_basis, left_mul, product, represent_window, right_mul,
    sigma_op, Label, LaurentModel, ModelAlgebra, UnivDiffError, UniversalChain,
};

/// Outcome of one randomized identity on one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub model: String,
    pub identity: String,
    pub trials: usize,
    pub passed: usize,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

fn random_chain(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng, degree: usize) -> UniversalChain {
    let gens = alg.generators();
    let non_unit: Vec<Label> = gens.iter().copied().filter(|&g| g != alg.unit()).collect();
    let mut c = UniversalChain::zero(degree);
    for _ in 0..rng.gen_range(1..=3) {
        let mut labels = vec![gens[rng.gen_range(0..gens.len())]];
        labels.extend((0..degree).map(|_| non_unit[rng.gen_range(0..non_unit.len())]));
        let (re, im) = loop {
            let pair = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            if pair != (0, 0) {
                break pair;
            }
        };
        c.add_term(alg, labels, qi_int(re, im));
    }
    c
}

fn random_chain_in(
    alg: &dyn ModelAlgebra,
    rng: &mut ChaCha8Rng,
    degrees: std::ops::RangeInclusive<usize>,
) -> UniversalChain {
    let degree = rng.gen_range(degrees);
    random_chain(alg, rng, degree)
}

/// Cycles from three sources: degree-1 chains, antisymmetrized tensors and boundaries.
fn random_cycle(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng, degree: usize) -> UniversalChain {
    match (degree, rng.gen_range(0..2)) {
        (1, _) => random_chain(alg, rng, 1),
        (_, 0) => {
            let seed = random_chain(alg, rng, degree);
            let mut c = UniversalChain::zero(degree);
            for (labels, coeff) in seed.terms() {
                for (perm, sign) in permutations(degree) {
                    let mut permuted = vec![labels[0]];
                    permuted.extend(perm.iter().map(|&k| labels[1 + k]));
                    c.add_term(alg, permuted, coeff * qi_int(sign, 0));
                }
            }
            c
        }
        _ => hochschild_b(&random_chain(alg, rng, degree + 1), alg).expect("positive degree"),
    }
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (perm, sign) in permutations(n - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            let moved = (perm.len() - pos) as i64;
            out.push((p, if moved % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

type Check = fn(&dyn ModelAlgebra, &mut ChaCha8Rng) -> Result<bool, UnivDiffError>;

fn b_squared(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let c = random_chain_in(alg, rng, 2..=4);
    Ok(hochschild_b(&hochschild_b(&c, alg)?, alg)?.is_zero())
}

fn delta_squared(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let c = random_chain_in(alg, rng, 0..=3);
    Ok(delta(&delta(&c, alg), alg).is_zero())
}

fn homotopy(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let c = random_chain_in(alg, rng, 1..=3);
    let lhs = hochschild_b(&delta(&c, alg), alg)?.add(&delta(&hochschild_b(&c, alg)?, alg), alg)?;
    let rhs = c.sub(&sigma_op(&c, alg), alg)?;
    Ok(lhs == rhs)
}

fn cycle_transgression(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let degree = rng.gen_range(1..=3);
    let c = random_cycle(alg, rng, degree);
    if !hochschild_b(&c, alg)?.is_zero() {
        return Ok(false);
    }
    Ok(c.sub(&sigma_op(&c, alg), alg)? == hochschild_b(&delta(&c, alg), alg)?)
}

fn represented_boundary(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let c = random_chain_in(alg, rng, 1..=3);
    Ok(represent_window(&hochschild_b(&c, alg)?, alg).is_zero())
}

fn graded_leibniz(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let omega = random_chain_in(alg, rng, 0..=2);
    let rho = random_chain_in(alg, rng, 0..=2);
    let sign = qi_int(if omega.degree().is_multiple_of(2) { 1 } else { -1 }, 0);
    let lhs = delta(&product(&omega, &rho, alg), alg);
    let rhs =
        product(&delta(&omega, alg), &rho, alg).add(&product(&omega, &delta(&rho, alg), alg).scale(&sign), alg)?;
    Ok(lhs == rhs)
}

fn boundary_of_differential(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let omega = random_chain_in(alg, rng, 0..=2);
    let gens = alg.generators();
    let a = gens[rng.gen_range(0..gens.len())];
    let da = UniversalChain::monomial(alg, qi_int(1, 0), vec![alg.unit(), a]);
    let sign = qi_int(if omega.degree().is_multiple_of(2) { 1 } else { -1 }, 0);
    let lhs = hochschild_b(&product(&omega, &da, alg), alg)?;
    let rhs = right_mul(&omega, a, alg).sub(&left_mul(a, &omega, alg), alg)?.scale(&sign);
    Ok(lhs == rhs)
}

fn represented_adjoint(alg: &dyn ModelAlgebra, rng: &mut ChaCha8Rng) -> Result<bool, UnivDiffError> {
    let c = random_chain_in(alg, rng, 0..=2);
    Ok(represent_window(&adjoint(&c, alg), alg) == represent_window(&c, alg).adjoint())
}

/// Runs every identity `trials` times on each model with a seeded generator.
///
/// The represented boundary check only runs on models satisfying the first
/// order condition on their window.
pub fn run_identity_suite(
    models: &[&dyn ModelAlgebra],
    seed: u64,
    trials: usize,
) -> Result<Vec<IdentityReport>, UnivDiffError> {
    let checks: [(&str, Check, bool); 8] = [
        ("b_squared_zero", b_squared, false),
        ("delta_squared_zero", delta_squared, false),
        ("b_delta_plus_delta_b_is_one_minus_sigma", homotopy, false),
        ("one_minus_sigma_on_cycles_is_b_delta", cycle_transgression, false),
        ("represented_boundary_vanishes", represented_boundary, true),
        ("graded_leibniz", graded_leibniz, false),
        ("boundary_of_omega_delta_a", boundary_of_differential, false),
        ("represented_adjoint", represented_adjoint, false),
    ];
    let mut reports = Vec::new();
    for (m, &alg) in models.iter().enumerate() {
        let first_order = first_order_holds(alg);
        for (k, (name, check, needs_first_order)) in checks.iter().enumerate() {
            if *needs_first_order && !first_order {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((m as u64) << 32) ^ k as u64);
            let mut passed = 0;
            for _ in 0..trials {
                if check(alg, &mut rng)? {
                    passed += 1;
                }
            }
            reports.push(IdentityReport { model: alg.name().to_string(), identity: name.to_string(), trials, passed });
        }
    }
    Ok(reports)
}

/// Junk-form checks on the circle model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JunkReport {
    /// `π((δu)u - u(δu)) = 0` on the window.
    pub xi_represents_zero: bool,
    /// `π(δ((δu)u - u(δu))) = -2u²` on the window.
    pub delta_xi_is_minus_two_u_squared: bool,
    /// `π((1 - σ)(u* δu δa)) = 2Γ[D, π(a)]` for every generator `a`, with `Γ = π(u* δu)`.
    pub one_minus_sigma_doubles: bool,
    /// `Γ` is the identity on the window.
    pub gamma_is_identity: bool,
    /// Anticommutators `[D,a][D,b] + [D,b][D,a]` lie in the degree-2 junk span.
    pub anticommutators_are_junk: bool,
    pub junk_dim: usize,
}

impl JunkReport {
    pub fn ok(&self) -> bool {
        self.xi_represents_zero
            && self.delta_xi_is_minus_two_u_squared
            && self.one_minus_sigma_doubles
            && self.gamma_is_identity
            && self.anticommutators_are_junk
            && self.junk_dim > 0
    }
}

pub fn junk_reproduction(alg: &LaurentModel) -> Result<JunkReport, UnivDiffError> {
    let one = qi_int(1, 0);
    let w = alg.window();
    let window = |m: QMatrix| m.block(w.start, w.end);

    let du = UniversalChain::monomial(alg, one.clone(), vec![0, 1]);
    let u = UniversalChain::element(alg, 1);
    let xi = product(&du, &u, alg).sub(&product(&u, &du, alg), alg)?;
    let xi_represents_zero = represent_window(&xi, alg).is_zero();
    let u_squared = window(alg.represent_element(2));
    let delta_xi_is_minus_two_u_squared = represent_window(&delta(&xi, alg), alg) == u_squared.scale(&qi_int(-2, 0));

    let cycle = UniversalChain::monomial(alg, one.clone(), vec![-1, 1]);
    let gamma = represent_window(&cycle, alg);
    let gamma_is_identity = gamma == QMatrix::identity(w.end - w.start);
    let one_minus_sigma_doubles = alg.generators().iter().all(|&a| {
        let c = UniversalChain::monomial(alg, one.clone(), vec![-1, 1, a]);
        let lhs = represent_window(&c.sub(&sigma_op(&c, alg), alg).expect("same degree"), alg);
        let da = window(alg.dirac().commutator(&alg.represent_element(a)));
        lhs == (&gamma * &da).scale(&qi_int(2, 0))
    });

    let junk = junk_basis(alg, 2)?;
    let gens = alg.generators();
    let anticommutators_are_junk = gens.iter().all(|&a| {
        gens.iter().all(|&b| {
            let da = alg.dirac().commutator(&alg.represent_element(a));
            let db = alg.dirac().commutator(&alg.represent_element(b));
            junk.contains(&window(&(&da * &db) + &(&db * &da)))
        })
    });
    Ok(JunkReport {
        xi_represents_zero,
        delta_xi_is_minus_two_u_squared,
        one_minus_sigma_doubles,
        gamma_is_identity,
        anticommutators_are_junk,
        junk_dim: junk.dim(),
    })
}

//! Property suites over every module, at sizes that finish in seconds.
//! Each suite reports the number of cases and the first counterexample.

use rand::Rng;
use serde::Serialize;

use crate::brkset::{generate_set, kakeya_set, proof_params, theorem_bound, verify_brk, verify_kakeya, BrkInstance, RhoChoice};
use crate::error::Result;
use crate::ffield::{Elem, Field};
use crate::mpoly::{binom_multi, binomial, indices_of_degree, indices_up_to_degree, MultiIndex, SparsePoly};
use crate::multiplicity::{mult_at, Multiplicity};
use crate::random::{self, DetRng};
use crate::replay::{self, Curve, Trials};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

type Check = Result<std::result::Result<usize, String>>;
type Suite = (&'static str, fn(&mut DetRng) -> Check);

fn report(name: &'static str, outcome: Check) -> SuiteReport {
    match outcome {
        Ok(Ok(cases)) => SuiteReport {
            name,
            cases,
            passed: true,
            failure: None,
        },
        Ok(Err(msg)) => SuiteReport {
            name,
            cases: 0,
            passed: false,
            failure: Some(msg),
        },
        Err(e) => SuiteReport {
            name,
            cases: 0,
            passed: false,
            failure: Some(format!("error: {e}")),
        },
    }
}

const FIELDS: [u32; 8] = [2, 3, 4, 5, 7, 8, 9, 25];

fn field_laws(rng: &mut DetRng) -> Check {
    let mut cases = 0;
    for q in FIELDS {
        let f = Field::with_order(q)?;
        for _ in 0..200 {
            let (a, b, c) = (random::elem(&f, rng), random::elem(&f, rng), random::elem(&f, rng));
            let distributes = f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
            let associates = f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
            let inverse = a.is_zero() || f.mul(a, f.inv(a)?) == f.one();
            let frobenius = f.pow(a, q as u64) == a;
            if !(distributes && associates && inverse && frobenius) {
                return Ok(Err(format!("F_{q}: a={a:?} b={b:?} c={c:?}")));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn hasse_oracle(rng: &mut DetRng) -> Check {
    let mut cases = 0;
    for q in [2u32, 3, 5, 7, 9] {
        let f = Field::with_order(q)?;
        for _ in 0..40 {
            let n = rng.gen_range(1..=3);
            let p = random::poly(&f, n, 5, 5, rng);
            let table = p.expand_shift();
            let top = p.degree().finite().unwrap_or(0);
            for beta in indices_up_to_degree(n, top + 1) {
                let direct = p.hasse_derivative(&beta)?;
                let oracle = table.get(&beta).cloned().unwrap_or_else(|| SparsePoly::zero(&f, n));
                if direct != oracle {
                    return Ok(Err(format!("P = {p}, beta = {beta:?}")));
                }
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn vandermonde(_: &mut DetRng) -> Check {
    let mut cases = 0;
    for arity in 1..=3 {
        for alpha in indices_up_to_degree(arity, 6) {
            for w in 0..=6u32 {
                let lhs = binomial(alpha.total() as u64, w as u64).unwrap_or(0);
                let mut rhs = 0u128;
                for beta in indices_of_degree(arity, w) {
                    rhs += binom_multi(&alpha, &beta)?;
                }
                if lhs != rhs {
                    return Ok(Err(format!("alpha = {alpha:?}, w = {w}")));
                }
                cases += 1;
            }
        }
    }
    Ok(Ok(cases))
}

fn lex_lemmas(rng: &mut DetRng) -> Check {
    let mut cases = 0;
    for q in [3u32, 5, 7] {
        let f = Field::prime(q)?;
        for _ in 0..50 {
            let n = rng.gen_range(1..=3);
            let p = random::poly(&f, n, 4, 4, rng);
            let (e, b) = p.min_lex_exponent()?;
            let k = rng.gen_range(1..=3u32);
            let (ek, bk) = p.pow(k).min_lex_exponent()?;
            if ek != e.scale(k) || bk != f.pow(b, k as u64) {
                return Ok(Err(format!("power: P = {p}, k = {k}")));
            }
            let beta = MultiIndex::new((0..n).map(|_| rng.gen_range(0..3)).collect());
            let shifted = p.mul_monomial(&beta, f.one())?;
            if shifted.min_lex_exponent()? != (e.add(&beta), b) {
                return Ok(Err(format!("monomial shift: P = {p}, beta = {beta:?}")));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn random_point_poly(f: &Field, rng: &mut DetRng) -> (SparsePoly, Vec<Elem>) {
    let n = rng.gen_range(1..=3);
    let at = random::point(f, n, rng);
    let p = if rng.gen_bool(0.5) {
        let factors = rng.gen_range(0..=3);
        let base = random::vanishing_product(f, &at, factors, rng);
        &base * &random::poly(f, n, 2, 3, rng)
    } else {
        random::poly(f, n, 4, 5, rng)
    };
    (p, at)
}

fn mult_derivative(rng: &mut DetRng) -> Check {
    let mut cases = 0;
    for q in [2u32, 3, 5, 7] {
        let f = Field::prime(q)?;
        for _ in 0..25 {
            let (p, at) = random_point_poly(&f, rng);
            let Multiplicity::Finite(m) = mult_at(&p, &at)?.mult else { continue };
            for beta in indices_up_to_degree(p.arity(), 2) {
                let d = p.hasse_derivative(&beta)?;
                let md = mult_at(&d, &at)?.mult;
                if !md.at_least(m.saturating_sub(beta.total())) {
                    return Ok(Err(format!("P = {p}, beta = {beta:?}")));
                }
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn mult_composition(rng: &mut DetRng) -> Check {
    let mut cases = 0;
    for q in [3u32, 5, 7] {
        let f = Field::prime(q)?;
        for _ in 0..25 {
            let (p, _) = random_point_poly(&f, rng);
            let h: Vec<SparsePoly> = (0..p.arity()).map(|_| random::poly(&f, 1, 2, 3, rng)).collect();
            let comp = p.compose(&h)?;
            for lambda in f.elements() {
                let image: Vec<Elem> = h.iter().map(|hi| hi.eval(&[lambda])).collect::<Result<_>>()?;
                let outer = mult_at(&p, &image)?.mult;
                let inner = mult_at(&comp, &[lambda])?.mult;
                let ok = match outer {
                    Multiplicity::Finite(m) => inner.at_least(m),
                    Multiplicity::Infinite => inner == Multiplicity::Infinite,
                };
                if !ok {
                    return Ok(Err(format!("P = {p}, lambda = {lambda:?}")));
                }
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn hasse_additive(rng: &mut DetRng) -> Check {
    let mut cases = 0;
    for q in [2u32, 4, 5, 9] {
        let f = Field::with_order(q)?;
        for _ in 0..25 {
            let n = rng.gen_range(1..=3);
            let (p, r) = (random::poly(&f, n, 4, 5, rng), random::poly(&f, n, 4, 5, rng));
            let beta = MultiIndex::new((0..n).map(|_| rng.gen_range(0..3)).collect());
            let lhs = (&p + &r).hasse_derivative(&beta)?;
            let rhs = &p.hasse_derivative(&beta)? + &r.hasse_derivative(&beta)?;
            if lhs != rhs {
                return Ok(Err(format!("P = {p}, Q = {r}, beta = {beta:?}")));
            }
            cases += 1;
        }
    }
    Ok(Ok(cases))
}

fn brk_sets(rng: &mut DetRng) -> Check {
    let mut cases = 0;
    for q in [3u32, 4, 5, 7] {
        let f = Field::with_order(q)?;
        for _ in 0..10 {
            let n = rng.gen_range(2..=3);
            let ell = rng.gen_range(2..q.min(4));
            let g = random::homogeneous(&f, n - 1, ell, rng);
            let choices: Vec<RhoChoice> = f
                .elements()
                .map(|_| RhoChoice {
                    a: random::point(&f, n, rng),
                    lower: random::poly(&f, n - 1, ell - 1, 3, rng),
                })
                .collect();
            let inst = BrkInstance::new(&f, n, ell, g, choices)?;
            let s = generate_set(&inst);
            if !verify_brk(&s, &inst)?.holds {
                return Ok(Err(format!("round trip failed for q = {q}, n = {n}")));
            }
            let bound = theorem_bound(q, n as u32, ell)?;
            if s.len() < bound.ceil_usize() {
                return Ok(Err(format!("|S| = {} below bound {bound}", s.len())));
            }
            cases += 1;
        }
    }
    for q in [3u32, 5, 7, 8] {
        for ell in 2..q {
            for mult in 1..4 {
                proof_params(q, ell, q as u64 * mult)?;
                cases += 1;
            }
        }
    }
    for (q, n) in [(3u32, 2usize), (4, 2), (5, 2), (3, 3)] {
        let f = Field::with_order(q)?;
        if verify_kakeya(&kakeya_set(&f, n, true)).is_some() {
            return Ok(Err(format!("Kakeya construction fails at q = {q}, n = {n}")));
        }
        cases += 1;
    }
    Ok(Ok(cases))
}

fn certificates(seed: u64) -> Check {
    let f5 = Field::prime(5)?;
    let f7 = Field::prime(7)?;
    let s2 = SparsePoly::monomial(&f5, MultiIndex::from(vec![2]), f5.one());
    let mut certs = vec![
        replay::check_key_lemma(Trials::new(100, seed), &f5, 2, 2)?,
        replay::check_proposition(Trials::new(40, seed), &f5, 2, 2, 2, &s2)?,
        replay::check_existence(Trials::new(40, seed))?,
        replay::check_schwartz_zippel(Trials::new(40, seed))?,
    ];
    for (q, k) in [(3u32, 3u64), (3, 6), (5, 5)] {
        certs.push(replay::check_warmup(&Field::prime(q)?, k, seed, 1)?);
    }
    let parabola = SparsePoly::from_terms(
        &f7,
        2,
        [(MultiIndex::from(vec![0, 1]), f7.one()), (MultiIndex::from(vec![2, 0]), f7.from_int(-1))],
    )?;
    let curve = Curve {
        a: vec![f7.zero(), f7.zero()],
        rho: f7.one(),
        g: SparsePoly::monomial(&f7, MultiIndex::from(vec![2]), f7.one()),
    };
    certs.push(replay::check_derivs_zero(&parabola.pow(2), &curve, 2, 4, 2)?);
    if let Some(c) = certs.iter().find(|c| !c.passed()) {
        return Ok(Err(format!("{} certificate failed: {:?}", c.check, c.witness)));
    }
    let again = replay::check_key_lemma(Trials::new(100, seed), &f5, 2, 2)?;
    if again.to_json_string() != certs[0].to_json_string() {
        return Ok(Err("key-lemma certificate is not reproducible".into()));
    }
    Ok(Ok(certs.len() + 1))
}

/// Runs every suite; all randomness derives from `seed`.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    let mut rng = random::rng_from_seed(seed);
    let suites: [Suite; 8] = [
        ("field-laws", field_laws),
        ("hasse-oracle", hasse_oracle),
        ("vandermonde", vandermonde),
        ("lex-lemmas", lex_lemmas),
        ("mult-derivative", mult_derivative),
        ("mult-composition", mult_composition),
        ("hasse-additive", hasse_additive),
        ("brk-sets", brk_sets),
    ];
    let mut out: Vec<SuiteReport> = suites.iter().map(|(name, f)| report(name, f(&mut rng))).collect();
    out.push(report("certificates", certificates(seed)));
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_suites_pass() {
        for r in super::run_all(5) {
            assert!(r.passed, "{}: {:?}", r.name, r.failure);
            assert!(r.cases > 0, "{}", r.name);
        }
    }
}

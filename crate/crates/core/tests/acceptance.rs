use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::rngs::ChaCha8Rng;
use rand::{RngExt, SeedableRng};
use ramify::additive::{a1_from_subgroup, b1_from_beta, beta_map, characters_of, check_diagrams, extension_pairing, single_break};
use ramify::characters::{compare_corab, conductor_and_rsw, reduce_best_form, Kind};
use ramify::cli::literal::parse_series;
use ramify::cli::{builtin_corpus, verify_suite, Context, RunConfig, RunOptions, TaskOptions};
use ramify::ramification::{analyze, phi_by_averaging};
use ramify::series_arith::finite::default_modulus;
use ramify::series_arith::{FiniteField, LaurentSeries, ResidueField};
use ramify::tangent::{base_change_character, base_change_extension, condition_checks, is_tangentially_dominant};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn corpus() -> Context {
    Context::build(&builtin_corpus(), None).expect("built-in corpus builds")
}

const EXTRA: &str = r#"
precision = 64

[[field]]
name = "F4"
p = 2
degree = 2
generator = "b"

[[field]]
name = "F3u"
p = 3
transcendentals = ["u"]

[[extension]]
name = "f4_pair"
field = "F4"
artin_schreier = ["t^-1", "b*t^-1"]

[[character]]
name = "p3_ut2"
field = "F3u"
a = "u*t^-2"

[[character]]
name = "p3u_t2"
field = "F3u"
a = "t^-2"
"#;

fn extra() -> Context {
    Context::build(&RunConfig::from_toml(EXTRA).unwrap(), None).unwrap()
}

/// Lowest k >= 1 with binom(a, k) != 0 mod p, for any integer a.
fn first_binomial_term(a: i64, p: i64) -> i64 {
    let mut num = Ratio::from_integer(1i128);
    for k in 1..64 {
        num = num * Ratio::from_integer((a - k + 1) as i128) / Ratio::from_integer(k as i128);
        let n = num.to_integer();
        if n.rem_euclid(p as i128) != 0 {
            return k;
        }
    }
    unreachable!()
}

/// x^p - x = t^-n: ord_L x = -n and ord_L t = p, so the uniformizer is
/// x^a t^b with -n a + p b = 1. Since sigma(x) = x + 1,
/// sigma(x^a t^b)/(x^a t^b) - 1 = (1 + 1/x)^a - 1, whose leading term is
/// binom(a, k) x^{-k}.
fn ac1() -> Outcome {
    let mut lines = 0;
    for (p, ns) in [(2i64, [1i64, 3, 5]), (3, [1, 2, 5])] {
        for n in ns {
            let start = Instant::now();
            let a = (1..=p).map(|a| -a).find(|a| (1 + n * a).rem_euclid(p) == 0).unwrap();
            let b = (1 + n * a) / p;
            let i = first_binomial_term(a, p) * n;
            let different = (p - 1) * (i + 1);
            let r = Ratio::from_integer(i + 1);
            ensure!(r * p == Ratio::from_integer(different + i + 1), "oracle inconsistency at p={p} n={n}");

            let cfg = format!(
                "[[field]]\nname = \"K\"\np = {p}\nprecision = 64\n\n[[extension]]\nname = \"L\"\nfield = \"K\"\nartin_schreier = [\"t^-{n}\"]\n"
            );
            let ctx = Context::build(&RunConfig::from_toml(&cfg).unwrap(), None).unwrap();
            let built = ok(ctx.extensions["L"].as_ref(), "build")?;
            let ext = built.artin_schreier.as_ref().unwrap();
            let (ea, eb) = ext.exponents[0];
            ensure!(-n * ea + p * eb == 1, "uniformizer x^{ea} t^{eb} has ord != 1");
            ensure!(first_binomial_term(ea, p) == first_binomial_term(a, p), "uniformizer x^{ea} t^{eb} vs x^{a} t^{b}");
            let rep = ok(analyze(&built.field), "analyze")?;
            let lb = rep.largest.clone().ok_or("no wild break")?;
            ensure!(lb.r == r, "p={p} n={n}: r = {} expected {}", lb.r, r);
            ensure!(lb.r == Ratio::from_integer(n + 1), "p={p} n={n}: r != n+1");
            ensure!(lb.e == p && lb.i == i && lb.different == different, "p={p} n={n}: e={} i={} d={}", lb.e, lb.i, lb.different);
            ensure!(Ratio::from_integer(lb.e) * lb.r == Ratio::from_integer(lb.different + lb.i + 1), "eqri fails at p={p} n={n}");
            ensure!(lb.all_hold(), "p={p} n={n}: {lb:?}");
            let took = start.elapsed();
            ensure!(took < Duration::from_secs(1), "p={p} n={n} took {took:?}");
            lines += 1;
        }
    }
    Ok(format!("{lines} cases, r = n+1 and e r = d + i + 1"))
}

fn ac2() -> Outcome {
    let mut checked = Vec::new();
    for ctx in [corpus(), extra()] {
        for (name, built) in &ctx.extensions {
            let built = ok(built.as_ref(), name)?;
            let rep = ok(analyze(&built.field), name)?;
            if single_break(&rep.group, &rep.lower).is_err() {
                continue;
            }
            let d = ok(check_diagrams(&rep.group, &rep.lower, false), name)?;
            ensure!(d.right_square, "{name}: P = {:?}, b1 = {:?}", d.unit_map, d.b1);
            ensure!(d.all_hold(), "{name}: {d:?}");
            checked.push(name.clone());
        }
    }
    ensure!(checked.contains(&"p2u1".to_string()), "u*t^-1 over F2(u) missing");
    Ok(format!("{} single-break extensions: {}", checked.len(), checked.join(", ")))
}

fn ac3() -> Outcome {
    for p in [2u32, 3, 5] {
        let fq = FiniteField::new(p, default_modulus(p, 3)).unwrap();
        let res = ResidueField::new(fq, "a", Vec::new()).unwrap();
        let prime: Vec<_> = (0..p as i64).map(|c| res.from_int(c)).collect();
        let a1 = ok(a1_from_subgroup(&res, &prime), "a1")?;
        ensure!(a1.coeffs.len() == 2, "p={p}: degree p^{}", a1.coeffs.len() - 1);
        ensure!(a1.coeffs[0].is_one(), "p={p}: c0 != 1");
        ensure!(a1.coeffs[1] == res.from_int(-1), "p={p}: c1 != -1");
        let q = res.fq().size();
        for x in 0..q {
            let x = res.from_fq(x);
            let x_minus_xp = res.sub(&x, &res.frobenius(&x));
            ensure!(a1.eval(&res, &x) == x_minus_xp, "p={p}: a1 != X - X^p at {x:?}");
            ensure!(a1.eval(&res, &x).is_zero() == prime.contains(&x), "p={p}: vanishing set wrong at {x:?}");
        }
    }
    Ok("a1 = X - X^p for p = 2, 3, 5".into())
}

fn ac4() -> Outcome {
    let ctx = corpus();
    let built = ok(ctx.extensions["klein4"].as_ref(), "klein4")?;
    let rep = ok(analyze(&built.field), "analyze")?;
    let jumps: Vec<Ratio<i64>> = rep.nonlog.jumps.iter().map(|j| j.index).collect();
    ensure!(jumps.iter().all(|j| j.is_integer()), "non-integral nonlog jump in {jumps:?}");
    ensure!(rep.hasse_arf == Some(true), "hasse_arf = {:?}", rep.hasse_arf);
    let set: BTreeSet<i64> = jumps.iter().map(|j| j.to_integer()).collect();
    ensure!(set == BTreeSet::from([2, 4]), "nonlog jumps {set:?}");
    Ok("Klein four nonlog jumps {2, 4}, all integral".into())
}

fn ac5() -> Outcome {
    let mut done = Vec::new();
    for ctx in [corpus(), extra()] {
        for (name, a) in &ctx.characters {
            let best = ok(reduce_best_form(a), name)?;
            if best.kind != Kind::NonFierce {
                continue;
            }
            let rep = ok(compare_corab(a), name)?;
            ensure!(rep.breaks_match, "{name}: j = {} but r = {}", rep.conductor.j, rep.r);
            ensure!(rep.dt_match, "{name}: engine dt {:?} vs da {:?}", rep.engine_dt, rep.conductor.rsw.dt);
            done.push(name.clone());
        }
    }
    for needed in ["p2_t1", "p2_t3", "p2_ut1", "p2_ut3", "p3_t1", "p3_t2", "p3_ut1", "p3_ut2"] {
        ensure!(done.iter().any(|d| d == needed), "{needed} not covered");
    }
    Ok(format!("{} characters: {}", done.len(), done.join(", ")))
}

fn ac6() -> Outcome {
    let ctx = corpus();
    for (field, p) in [("F2u", 2i64), ("F3u", 3)] {
        let k = &ctx.fields[field];
        let a = parse_series(k, &format!("u*t^-{p}")).unwrap();
        let best = ok(reduce_best_form(&a), "best form")?;
        ensure!(best.steps == 0 && best.a_red == a, "p={p}: best form changed");
        let c = ok(conductor_and_rsw(&a), "conductor")?;
        ensure!(c.j == p, "p={p}: j = {}", c.j);
        ensure!(c.rsw.dt.is_zero() && c.rsw.du.iter().any(|d| !d.is_zero()), "p={p}: rsw {:?}", c.rsw);
    }
    let mut drops = Vec::new();
    for (emb, field, a) in [("specialize_p3", "F3u", "u*t^-3"), ("specialize_p2", "F2u", "u*t^-4")] {
        let spec = &ctx.embeddings[emb];
        ensure!(!ok(is_tangentially_dominant(spec), emb)?, "{emb} is TD");
        let a = parse_series(&ctx.fields[field], a).unwrap();
        let bc = ok(base_change_character(spec, &a), emb)?;
        ensure!(bc.target.j < bc.source.j, "{emb}: j {} -> {}", bc.source.j, bc.target.j);
        drops.push(format!("{emb} j {} -> {}", bc.source.j, bc.target.j));
    }
    Ok(format!("u*t^-p best form with j = p and du-only rsw; {}", drops.join(", ")))
}

fn ac7() -> Outcome {
    let mut sizes = BTreeSet::new();
    let mut count = 0;
    for ctx in [corpus(), extra()] {
        for (name, built) in &ctx.extensions {
            let built = ok(built.as_ref(), name)?;
            let rep = ok(analyze(&built.field), name)?;
            if rep.largest.is_none() {
                continue;
            }
            let res = built.field.residue();
            let beta = ok(beta_map(&rep.group, &rep.lower), name)?;
            let b1 = ok(b1_from_beta(res, &beta), name)?;
            let chars = characters_of(res, &beta);
            ensure!(chars.len() == beta.elements.len(), "{name}: {} characters on a group of order {}", chars.len(), beta.elements.len());
            for chi in chars {
                let pairing = ok(extension_pairing(res, &b1, &beta, &chi), name)?;
                let trivial = chi.iter().all(|&c| c == 0);
                ensure!(pairing.scalar.is_zero() == trivial, "{name}: chi {chi:?} pairs to {:?}", pairing.scalar);
                count += 1;
            }
            sizes.insert(beta.elements.len());
        }
    }
    ensure!(sizes.contains(&4), "no extension with |G^r| = p^2");
    Ok(format!("{count} characters, |G^r| in {sizes:?}"))
}

fn ac8() -> Outcome {
    let ctx = corpus();
    let cfg = builtin_corpus();
    let mut td_count = 0;
    let mut violated = Vec::new();
    for decl in &cfg.embeddings {
        let spec = &ctx.embeddings[&decl.name];
        let cond = ok(condition_checks(spec), &decl.name)?;
        ensure!(cond.chain_holds(), "{}: chain {cond:?}", decl.name);
        let td = ok(is_tangentially_dominant(spec), &decl.name)?;
        ensure!(td == cond.cond2, "{}: TD disagrees with cond2", decl.name);
        for ch in cfg.characters.iter().filter(|c| c.field == decl.source) {
            let bc = ok(base_change_character(spec, &ctx.characters[&ch.name]), &ch.name)?;
            if td {
                ensure!(bc.invariant(), "{} on {}: j {} -> {}, rsw {:?} vs {:?}", decl.name, ch.name, bc.source.j, bc.target.j, bc.transported, bc.target.rsw);
            } else if !bc.j_equal {
                violated.push(format!("{}/{}", decl.name, ch.name));
            }
        }
        if td {
            td_count += 1;
            for ext in cfg.extensions.iter().filter(|e| e.field == decl.source) {
                let built = ok(ctx.extensions[&ext.name].as_ref(), &ext.name)?;
                let bc = ok(base_change_extension(spec, &built.field), &ext.name)?;
                ensure!(bc.invariant(), "{} on {}: nonlog {:?} vs {:?}", decl.name, ext.name, bc.source.nonlog.indices(), bc.target.nonlog.indices());
            }
        }
    }
    ensure!(td_count >= 2, "only {td_count} TD embeddings");
    ensure!(!violated.is_empty(), "no non-TD embedding changes a conductor");
    Ok(format!("{td_count} TD embeddings invariant; conductor drops on {}", violated.join(", ")))
}

fn perturb(a: &LaurentSeries, rng: &mut ChaCha8Rng) -> LaurentSeries {
    let k = a.field();
    let res = a.residue_field();
    let p = res.characteristic() as u64;
    let mut c = LaurentSeries::zero(k);
    for e in -3..4 {
        let mut coef = res.from_fq(rng.random_range(0..res.fq().size()));
        if res.nvars() > 0 && rng.random_bool(0.5) {
            coef = res.mul(&coef, &res.pow(&res.var(0), rng.random_range(-2..3)).unwrap());
        }
        c = c.add(&LaurentSeries::monomial(k, coef, e));
    }
    a.add(&c.pow(p)).sub(&c)
}

fn ac9() -> Outcome {
    let ctx = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (name, a) in &ctx.characters {
        let base = ok(conductor_and_rsw(a), name)?;
        for _ in 0..20 {
            let b = perturb(a, &mut rng);
            let other = ok(conductor_and_rsw(&b), name)?;
            ensure!(other.same_invariants(&base), "{name}: perturbation {b} changes j or rsw");
        }
    }
    for (name, built) in &ctx.extensions {
        let built = ok(built.as_ref(), name)?;
        let rep = ok(analyze(&built.field), name)?;
        let top = rep.lower.jumps.last().map(|j| j.index.to_integer()).unwrap_or(0);
        for m in 0..=top + 4 {
            let phi = rep.phi.phi(Ratio::from_integer(m));
            ensure!(phi == phi_by_averaging(&rep.group, m), "{name}: phi({m}) = {phi}");
        }
    }
    let clean = ok(verify_suite(None, &RunOptions::default()), "verify")?;
    ensure!(clean.passed, "built-in verify fails: {:?}", clean.failures());
    let opts = RunOptions { task: TaskOptions { mutate_b1: true }, ..Default::default() };
    let mutated = ok(verify_suite(None, &opts), "verify")?;
    ensure!(!mutated.passed, "sign error in b1 went unnoticed");
    let failures = mutated.failures();
    ensure!(failures.iter().any(|f| f.contains("check_diagrams")), "mutation caught by {failures:?}");
    ensure!(mutated.reproducer.is_some(), "no reproducer for the mutation");
    Ok(format!("{} characters x 20 perturbations, phi averaged, mutation caught in {} checks", ctx.characters.len(), failures.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("AC1 largest break r = n+1", ac1),
        ("AC2 unit map equals b1", ac2),
        ("AC3 a1 of F_p", ac3),
        ("AC4 Hasse-Arf on Klein four", ac4),
        ("AC5 conductor equals largest break", ac5),
        ("AC6 imperfect residue field", ac6),
        ("AC7 pairing injective", ac7),
        ("AC8 dominant base change", ac8),
        ("AC9 well-definedness and mutation", ac9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("PASS {name} ({ms} ms): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} ({ms} ms): {msg}");
            }
        }
    }
    let total = start.elapsed();
    if total >= Duration::from_secs(60) {
        failed += 1;
        println!("FAIL total runtime {total:?}");
    }
    println!("{} of 9 criteria passed in {:.1} s", 9 - failed.min(9), total.as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

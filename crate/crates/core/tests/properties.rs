use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use ramify::additive::{a1_from_subgroup, b1_from_beta, characters_of, extension_pairing, BetaMap};
use ramify::characters::{artin_schreier_extension, conductor_and_rsw};
use ramify::extensions::{galois_table, norm_trace, split_in_self, ExtElement};
use ramify::ramification::analyze;
use ramify::series_arith::finite::default_modulus;
use ramify::series_arith::{newton_polygon, FieldElement, FiniteField, LaurentSeries, LocalField, NewtonPoint, ResidueField};

fn residue(p: u32, degree: u32, vars: &[&str]) -> ResidueField {
    let fq = FiniteField::new(p, default_modulus(p, degree)).unwrap();
    ResidueField::new(fq, "a", vars.iter().map(|s| s.to_string()).collect()).unwrap()
}

/// sum_i c_i u^i with c_i given as indices into F_q.
fn poly_in_u(res: &ResidueField, coeffs: &[u32]) -> FieldElement {
    let q = res.fq().size();
    coeffs.iter().enumerate().fold(res.zero(), |acc, (i, &c)| {
        let mono = if res.nvars() == 0 { res.one() } else { res.pow(&res.var(0), i as i64).unwrap() };
        res.add(&acc, &res.mul(&res.from_fq(c % q), &mono))
    })
}

fn element(res: &ResidueField, num: &[u32], den: &[u32]) -> FieldElement {
    let d = poly_in_u(res, den);
    let d = if d.is_zero() { res.one() } else { d };
    res.div(&poly_in_u(res, num), &d).unwrap()
}

fn coeff_vec() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..1000, 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(p in prop::sample::select(vec![2u32, 3, 5]), deg in 1u32..3,
                    a in (coeff_vec(), coeff_vec()), b in (coeff_vec(), coeff_vec()), c in (coeff_vec(), coeff_vec())) {
        let res = residue(p, deg, &["u"]);
        let (a, b, c) = (element(&res, &a.0, &a.1), element(&res, &b.0, &b.1), element(&res, &c.0, &c.1));
        prop_assert_eq!(res.add(&a, &b), res.add(&b, &a));
        prop_assert_eq!(res.mul(&a, &b), res.mul(&b, &a));
        prop_assert_eq!(res.add(&res.add(&a, &b), &c), res.add(&a, &res.add(&b, &c)));
        prop_assert_eq!(res.mul(&res.mul(&a, &b), &c), res.mul(&a, &res.mul(&b, &c)));
        prop_assert_eq!(res.mul(&a, &res.add(&b, &c)), res.add(&res.mul(&a, &b), &res.mul(&a, &c)));
        prop_assert!(res.add(&a, &res.neg(&a)).is_zero());
        if !a.is_zero() {
            prop_assert!(res.mul(&a, &res.inv(&a).unwrap()).is_one());
        }
        prop_assert_eq!(res.pth_root(&res.frobenius(&a)), Some(a.clone()));
    }

    #[test]
    fn valuation_of_products_and_sums(p in prop::sample::select(vec![2u32, 3, 5]),
                                      sa in -4i64..4, sb in -4i64..4,
                                      ca in prop::collection::vec(0u32..5, 1..6),
                                      cb in prop::collection::vec(0u32..5, 1..6),
                                      invert in any::<bool>()) {
        let res = residue(p, 1, &[]);
        let k = LocalField::new(res.clone(), 24);
        let series = |start: i64, cs: &[u32]| {
            let mut cs = cs.to_vec();
            cs[0] = 1 + cs[0] % (p - 1).max(1);
            LaurentSeries::new(&k, start, cs.iter().map(|&c| res.from_fq(c % p)).collect(), None)
        };
        let mut a = series(sa, &ca);
        let b = series(sb, &cb);
        if invert {
            a = a.inv().unwrap();
        }
        let (va, vb) = (a.valuation().unwrap(), b.valuation().unwrap());
        prop_assert_eq!(a.mul(&b).valuation().unwrap(), va + vb);
        let s = a.add(&b);
        if va != vb {
            prop_assert_eq!(s.valuation().unwrap(), va.min(vb));
        } else if let Ok(v) = s.valuation() {
            prop_assert!(v >= va);
        }
    }

    #[test]
    fn newton_slopes_of_products(f in prop::collection::vec(prop::option::of(-3i64..6), 2..5),
                                 g in prop::collection::vec(prop::option::of(-3i64..6), 2..5)) {
        let res = residue(3, 1, &[]);
        let k = LocalField::new(res.clone(), 32);
        let poly = |vals: &[Option<i64>]| -> Vec<LaurentSeries> {
            let n = vals.len();
            vals.iter().enumerate().map(|(i, v)| match (i, v) {
                (0, None) => LaurentSeries::monomial(&k, res.one(), 0),
                (i, None) if i + 1 == n => LaurentSeries::monomial(&k, res.one(), 0),
                (_, None) => LaurentSeries::zero(&k),
                (_, Some(v)) => LaurentSeries::monomial(&k, res.one(), *v),
            }).collect()
        };
        let (pf, pg) = (poly(&f), poly(&g));
        let mut prod = vec![LaurentSeries::zero(&k); pf.len() + pg.len() - 1];
        for (i, a) in pf.iter().enumerate() {
            for (j, b) in pg.iter().enumerate() {
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        let slopes = |c: &[LaurentSeries]| {
            let pts: Vec<NewtonPoint> = c.iter().map(NewtonPoint::of_series).collect();
            let mut m = BTreeMap::new();
            for s in newton_polygon(&pts).unwrap() {
                *m.entry(s.root_valuation).or_insert(0) += s.length;
            }
            m
        };
        let mut expected = slopes(&pf);
        for (v, l) in slopes(&pg) {
            *expected.entry(v).or_insert(0) += l;
        }
        prop_assert_eq!(slopes(&prod), expected);
    }

    #[test]
    fn a1_vanishes_exactly_on_the_subgroup(p in prop::sample::select(vec![2u32, 3]), gens in prop::collection::vec(1u32..10_000, 1..3),
                                           sample in prop::collection::vec((coeff_vec(), coeff_vec()), 200)) {
        let res = residue(p, 4, &["u"]);
        let q = res.fq().size();
        let mut span: Vec<u32> = vec![0];
        for g in gens {
            let g = g % q;
            if span.contains(&g) {
                continue;
            }
            let mut next = Vec::new();
            for c in 0..p {
                for &s in &span {
                    next.push(res.fq().add(s, res.fq().mul(res.fq().from_int(c as i64), g)));
                }
            }
            span = next;
        }
        let elems: Vec<FieldElement> = span.iter().map(|&c| res.from_fq(c)).collect();
        let a1 = a1_from_subgroup(&res, &elems).unwrap();
        prop_assert!(a1.coeffs[0].is_one());
        prop_assert_eq!(p.pow(a1.coeffs.len() as u32 - 1) as usize, elems.len());
        for g in &elems {
            prop_assert!(a1.eval(&res, g).is_zero());
        }
        for (num, den) in &sample {
            let x = element(&res, num, den);
            let inside = x.as_const().is_some_and(|c| span.contains(&c));
            prop_assert_eq!(a1.eval(&res, &x).is_zero(), inside);
        }
    }

    #[test]
    fn pairing_is_linear_and_injective(gens in prop::collection::vec(1u32..10_000, 1..3), i in 0usize..100, j in 0usize..100) {
        let res = residue(3, 3, &[]);
        let f = res.fq();
        let mut span: Vec<u32> = vec![0];
        for g in gens {
            let g = g % f.size();
            if span.contains(&g) {
                continue;
            }
            span = (0..3).flat_map(|c| span.iter().map(move |&s| (s, c))).map(|(s, c)| f.add(s, f.mul(f.from_int(c), g))).collect();
        }
        let beta = BetaMap { elements: (0..span.len()).collect(), values: span.iter().map(|&c| res.from_fq(c)).collect() };
        let b1 = b1_from_beta(&res, &beta).unwrap();
        let chars = characters_of(&res, &beta);
        let (c1, c2) = (&chars[i % chars.len()], &chars[j % chars.len()]);
        let sum: Vec<i64> = c1.iter().zip(c2).map(|(a, b)| (a + b) % 3).collect();
        let s = |chi: &[i64]| extension_pairing(&res, &b1, &beta, chi).unwrap().scalar;
        prop_assert_eq!(s(&sum), res.add(&s(c1), &s(c2)));
        for chi in &chars {
            prop_assert_eq!(s(chi).is_zero(), chi.iter().all(|&c| c == 0));
        }
    }
}

fn artin_schreier(p: u32, n: i64, lower: &[u32]) -> (Arc<LocalField>, LaurentSeries) {
    let res = residue(p, 1, &[]);
    let k = LocalField::new(res.clone(), 48);
    let mut a = LaurentSeries::monomial(&k, res.one(), -n);
    for (e, &c) in lower.iter().enumerate() {
        let e = -(e as i64) + 2;
        if e > -n {
            a = a.add(&LaurentSeries::monomial(&k, res.from_fq(c % p), e));
        }
    }
    (k, a)
}

fn wild_case() -> impl Strategy<Value = (u32, i64)> {
    prop_oneof![
        prop::sample::select(vec![1i64, 3, 5, 7]).prop_map(|n| (2u32, n)),
        prop::sample::select(vec![1i64, 2, 4, 5]).prop_map(|n| (3u32, n)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn artin_schreier_ramification((p, n) in wild_case(), lower in prop::collection::vec(0u32..3, 0..6)) {
        let (k, a) = artin_schreier(p, n, &lower);
        let ext = artin_schreier_extension(&k, &[a]).unwrap();
        let rep = analyze(&ext.field).unwrap();
        prop_assert!(rep.checks_pass());
        prop_assert!(rep.phi_matches_average);
        prop_assert_eq!(rep.largest.unwrap().r, num_rational::Ratio::from_integer(n + 1));
        let roots = split_in_self(&ext.field).unwrap();
        let f = ext.field.poly();
        for rho in roots.roots() {
            let value = f.coeffs.iter().rev().fold(ExtElement::zero(&ext.field), |acc, c| {
                acc.mul(rho).add(&ExtElement::from_base(&ext.field, c.clone()))
            });
            prop_assert!(value.ord_lower_bound() >= ext.field.base_field().precision());
        }
    }

    #[test]
    fn ord_matches_norm((p, n) in wild_case(), xs in prop::collection::vec(prop::collection::vec((-3i64..4, 0u32..3), 1..4), 50)) {
        let (k, a) = artin_schreier(p, n, &[]);
        let ext = artin_schreier_extension(&k, &[a]).unwrap();
        let l = &ext.field;
        let group = galois_table(&split_in_self(l).unwrap()).unwrap();
        let res = k.residue();
        for terms in xs {
            let coords: Vec<LaurentSeries> = (0..l.degree())
                .map(|j| terms.iter().filter(|(e, _)| e.rem_euclid(l.degree() as i64) == j as i64)
                    .fold(LaurentSeries::zero(&k), |acc, (e, c)| acc.add(&LaurentSeries::monomial(&k, res.from_fq((c % p).max(1)), *e))))
                .collect();
            let x = ExtElement::from_coords(l, coords);
            if x.is_exact_zero() {
                continue;
            }
            let (norm, trace) = norm_trace(&x, &group).unwrap();
            prop_assert_eq!(norm.valuation().unwrap(), x.ord().unwrap());
            prop_assert!(trace.is_zero() || trace.valuation().is_ok());
        }
    }

    #[test]
    fn rsw_stable_under_artin_schreier_perturbation(
        case in prop::sample::select(vec![(2u32, "t^-1"), (2, "t^-3"), (2, "u*t^-1"), (2, "u*t^-3"), (2, "u*t^-2"), (2, "u*t^-5"),
                                          (3, "t^-1"), (3, "t^-2"), (3, "u*t^-1"), (3, "u*t^-3"), (3, "u*t^-4")]),
        cs in prop::collection::vec(prop::collection::vec((0u32..9, 0u32..3), 6), 20),
    ) {
        let (p, text) = case;
        let res = residue(p, 1, &["u"]);
        let k = LocalField::new(res.clone(), 48);
        let a = ramify::cli::literal::parse_series(&k, text).unwrap();
        let base = conductor_and_rsw(&a).unwrap();
        prop_assert!(base.j >= 2);
        prop_assert!(!base.rsw.is_zero());
        let m = base.best.n / p as i64;
        for coeffs in cs {
            let c = coeffs.iter().enumerate().fold(LaurentSeries::zero(&k), |acc, (i, &(c, upow))| {
                let coef = res.mul(&res.from_int(c as i64), &res.pow(&res.var(0), upow as i64).unwrap());
                acc.add(&LaurentSeries::monomial(&k, coef, i as i64 - m))
            });
            let b = a.add(&c.pow(p as u64)).sub(&c);
            let other = conductor_and_rsw(&b).unwrap();
            prop_assert!(other.same_invariants(&base), "{}", b);
            if !base.is_exceptional() {
                prop_assert_eq!(&other.rsw, &base.rsw, "{}", b);
            }
        }
    }
}

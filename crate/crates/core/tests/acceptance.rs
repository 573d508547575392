//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qp_core::arith::is_prime_u64;
use qp_core::primes::primes_with_odd_norm_up_to;
use qp_core::search::canonical_in_shell;
use qp_core::theorems::{
    check_structure_bounds, conjecture_scan, decompose_even, norm_two_prime,
    smallest_odd_norm_primes,
};
use qp_core::{
    classify_rational_prime, delta, delta_naive, divisors, enumerate_canonical, factor,
    int_valuation, index, search_odd_norm, search_perfect, valuation, ExactRational, PrimeClass,
    QuadFactorization, QuadInt, RingId,
};

/// Criteria expected to fail, with the reason. A known failure that starts
/// passing is reported as an error too, so this list stays accurate.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    10,
    "xi^gamma * pi with N(pi) = 2^(gamma+1) - 1 a non-inert prime is 2-powerfully perfect with k = 0 (d = -2, -7)",
)];

type Outcome = Result<String, String>;

fn ring(d: i64) -> RingId {
    RingId::new(d).unwrap()
}

fn int(n: i64) -> ExactRational {
    ExactRational::from_integer(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

fn c1() -> Outcome {
    let g = ring(-1);
    let z = g.element(9, 3);
    let start = Instant::now();
    let d2 = delta(2, &z).map_err(|e| e.to_string())?;
    let i2 = index(2, &z).map_err(|e| e.to_string())?.into_inner();
    let list = divisors(&z).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut norms: Vec<BigInt> = list.iter().map(QuadInt::norm).collect();
    norms.sort();
    let mut expected: Vec<BigInt> = [1, 9, 2, 5, 18, 45, 10, 90].iter().map(|&n| BigInt::from(n)).collect();
    expected.sort();
    ensure(d2 == int(180), || format!("delta_2 = {d2}"))?;
    ensure(i2 == int(2), || format!("I_2 = {i2}"))?;
    ensure(norms == expected, || format!("divisor norms {norms:?}"))?;
    ensure(elapsed < Duration::from_millis(1), || format!("took {}", ms(elapsed)))?;
    Ok(format!("delta_2(9+3i) = 180, I_2 = 2, norms {{1,2,5,9,10,18,45,90}} in {}", ms(elapsed)))
}

fn c2() -> Outcome {
    let g = ring(-1);
    let cases = [((3, 9), 2), ((30, 30), 3), ((84, 4788), 3), ((1764, 4452), 3)];
    let start = Instant::now();
    let values: Vec<ExactRational> = cases
        .iter()
        .map(|((a, b), _)| index(2, &g.element(*a, *b)).map(|v| v.into_inner()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    for (((a, b), t), v) in cases.iter().zip(&values) {
        ensure(*v == int(*t), || format!("I_2({a}+{b}i) = {v}, expected {t}"))?;
    }
    ensure(elapsed < Duration::from_millis(10), || format!("took {}", ms(elapsed)))?;
    Ok(format!("I_2 = 2, 3, 3, 3 in {}", ms(elapsed)))
}

fn c3() -> Outcome {
    let g = ring(-1);
    let dec = decompose_even(&g.element(3, 9)).map_err(|e| e.to_string())?;
    let got = (dec.gamma, dec.q.clone(), dec.m.clone(), dec.k, dec.v.clone());
    let want = (1, BigInt::from(3), BigInt::from(15), 1, BigInt::from(5));
    ensure(got == want, || format!("(gamma, q, m, k, v) = {got:?}"))?;
    let report = check_structure_bounds(&dec);
    ensure(report.overall, || format!("structure bounds failed: {:?}", report.checks))?;
    let inequalities: Vec<_> = report.checks.iter().filter(|c| c.equality.is_some()).collect();
    ensure(inequalities.len() == 3, || format!("{} inequality checks", inequalities.len()))?;
    ensure(inequalities.iter().all(|c| c.equality == Some(true)), || {
        "an inequality is strict".to_string()
    })?;
    Ok("gamma=1 q=3 m=15 k=1 v=5; v >= q+2, both bounds on m attained".into())
}

fn c4() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for r in RingId::all() {
        for z in enumerate_canonical(r, 300) {
            let closed = delta(2, &z).map_err(|e| e.to_string())?;
            let naive = delta_naive(2, &z).map_err(|e| e.to_string())?;
            ensure(closed == naive, || format!("delta_2({z}) in d = {}: {closed} vs {naive}", r.d()))?;
            let i = index(2, &z).map_err(|e| e.to_string())?.into_inner();
            let dual = delta(-2, &z).map_err(|e| e.to_string())?;
            ensure(i == dual, || format!("I_2({z}) = {i} but delta_-2 = {dual}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} elements across 9 rings in {:.2} s", start.elapsed().as_secs_f64()))
}

/// Splitting type of `p` from square roots of `d` found by brute force, with
/// the prime 2 taken from the classical table.
fn residue_oracle(d: i64, p: u64) -> PrimeClass {
    if p == 2 {
        return match d {
            -1 | -2 => PrimeClass::Ramified,
            -7 => PrimeClass::Split,
            _ => PrimeClass::Inert,
        };
    }
    let target = d.rem_euclid(p as i64) as u64;
    if target == 0 {
        PrimeClass::Ramified
    } else if (1..p).any(|x| x * x % p == target) {
        PrimeClass::Split
    } else {
        PrimeClass::Inert
    }
}

fn c5() -> Outcome {
    let mut checked = 0;
    for r in RingId::all() {
        for p in (2..1000u64).filter(|&p| is_prime_u64(p)) {
            let got = classify_rational_prime(p, r).map_err(|e| e.to_string())?;
            let want = residue_oracle(r.d(), p);
            ensure(got == want, || format!("p = {p}, d = {}: {got} vs {want}", r.d()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, d) pairs, p < 1000"))
}

fn c6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    let mut checks = 0u64;
    for r in RingId::all() {
        let inert: Vec<u64> = (2..=50u64)
            .filter(|&q| is_prime_u64(q) && classify_rational_prime(q, r).unwrap() == PrimeClass::Inert)
            .collect();
        let mut done = 0;
        while done < 10_000 {
            let z = r.element(rng.gen_range(-1000i64..=1000), rng.gen_range(-1000i64..=1000));
            if z.is_zero() {
                continue;
            }
            done += 1;
            let n = z.norm();
            for &q in &inert {
                let v = int_valuation(&BigInt::from(q), &n).map_err(|e| e.to_string())?;
                let rho = valuation(&r.from_int(q), &z).map_err(|e| e.to_string())?;
                ensure(v.is_even() && v == 2 * rho, || {
                    format!("q = {q}, z = {z} in d = {}: v_q(N) = {v}, rho_q = {rho}", r.d())
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (z, q) checks over 9 x 10^4 elements"))
}

fn c7() -> Outcome {
    let g = ring(-1);
    let start = Instant::now();
    let report = search_perfect(g, 2, 2, 100).map_err(|e| e.to_string())?;
    let expected = vec![g.element(3, 9), g.element(9, 3)];
    ensure(report.hits == expected, || format!("hits {:?}", report.hits))?;
    // raw lattice scan of the box |a|, |b| <= 10 covers every norm <= 100
    let mut raw: Vec<QuadInt> = Vec::new();
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            let z = g.element(a, b);
            if z.is_zero() || z.norm() > BigInt::from(100) {
                continue;
            }
            let c = z.canonical_associate().map_err(|e| e.to_string())?;
            if !raw.contains(&c) {
                raw.push(c);
            }
        }
    }
    raw.sort_by(QuadInt::cmp_by_norm);
    ensure(raw == canonical_in_shell(g, 1, 100), || "candidate set differs from the raw scan".into())?;
    ensure(report.elements_scanned as usize == raw.len(), || "scan count differs".into())?;
    let brute: Vec<QuadInt> = raw
        .iter()
        .filter(|z| {
            // divisor sum by trial division over the same candidate set
            let s: BigInt = raw.iter().filter(|x| x.divides(z).unwrap()).map(QuadInt::norm).sum();
            s == BigInt::from(2) * z.norm()
        })
        .cloned()
        .collect();
    ensure(brute == expected, || format!("trial division finds {brute:?}"))?;
    let elapsed = start.elapsed();

    let frozen: BTreeMap<(i64, u64), Vec<(i64, i64)>> = [
        ((-1, 2), vec![(3, 9), (9, 3)]),
        ((-1, 3), vec![(30, 30)]),
        ((-11, 2), vec![(-8, 2), (-6, 4), (2, 4), (6, 2)]),
    ]
    .into_iter()
    .collect();
    for (&(d, t), hits) in &frozen {
        let r = ring(d);
        let found = search_perfect(r, 2, t, 10_000).map_err(|e| e.to_string())?.hits;
        let want: Vec<QuadInt> = hits.iter().map(|&(a, b)| r.element(a, b)).collect();
        ensure(found == want, || format!("d = {d}, t = {t}, bound 10^4: {found:?}"))?;
    }
    Ok(format!(
        "{{3+9i, 9+3i}} from {} candidates in {}; frozen lists to 10^4 match",
        raw.len(),
        ms(elapsed)
    ))
}

fn c8() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (d, count) in [(-1, 5), (-2, 5), (-7, 11)] {
        let r = ring(d);
        let report = search_odd_norm(r, 30_000).map_err(|e| e.to_string())?;
        ensure(report.hits.is_empty(), || format!("d = {d}: hits {:?}", report.hits))?;
        let floor: BigInt = smallest_odd_norm_primes(r, count).iter().map(QuadInt::norm).product();
        notes.push(format!("d={d}: 0 of {} (floor {floor})", report.elements_scanned));
    }
    Ok(format!("{} in {:.2} s", notes.join(", "), start.elapsed().as_secs_f64()))
}

fn c9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let one = ExactRational::one();
    let mut divisor_checks = 0u64;
    for r in RingId::all() {
        let mut sample = Vec::with_capacity(1000);
        while sample.len() < 1000 {
            let z = r.element(rng.gen_range(-1000i64..=1000), rng.gen_range(-1000i64..=1000));
            if !z.is_zero() {
                sample.push(z);
            }
        }
        for (i, z) in sample.iter().enumerate() {
            let err = |e: qp_core::Error| e.to_string();
            let fz = factor(z).map_err(err)?;
            let iz = index(2, z).map_err(err)?.into_inner();
            ensure(iz >= one && (iz == one) == z.is_unit(), || format!("range fails at {z}"))?;
            for n in [2, 4] {
                let lhs = index(n, z).map_err(err)?.into_inner();
                let rhs = delta(-n, z).map_err(err)?;
                ensure(lhs == rhs, || format!("duality fails at {z}, n = {n}"))?;
            }
            let y = &sample[(i + 1) % sample.len()];
            let fy = factor(y).map_err(err)?;
            let coprime = fz.factors().iter().all(|(p, _)| fy.factors().iter().all(|(q, _)| p != q));
            if coprime {
                let prod = index(2, &(z * y)).map_err(err)?.into_inner();
                let split = &iz * index(2, y).map_err(err)?.value();
                ensure(prod == split, || format!("multiplicativity fails at {z}, {y}"))?;
            }
            if fz.factors().iter().map(|(_, e)| e + 1).product::<u32>() <= 256 {
                for x in divisors(z).map_err(err)?.iter() {
                    let ix = index(2, x).map_err(err)?.into_inner();
                    let assoc = x.is_associated(z).map_err(err)?;
                    ensure(if assoc { ix == iz } else { ix < iz }, || {
                        format!("monotonicity fails at {x} | {z}")
                    })?;
                    divisor_checks += 1;
                }
            }
        }
    }
    Ok(format!("9 x 10^3 elements, {divisor_checks} divisor comparisons"))
}

fn c10() -> Outcome {
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    for d in [-1, -2, -7] {
        let report = conjecture_scan(ring(d), 10_000).map_err(|e| e.to_string())?;
        summary.push(format!("d={d}: {} hits", report.checks.len()));
        for c in report.checks.iter().filter(|c| !c.pass) {
            failures.push(format!("d={d} {} (k = {})", c.name.trim_start_matches("k = 1 for "), c.actual));
        }
    }
    if failures.is_empty() {
        Ok(summary.join(", "))
    } else {
        Err(format!("{}; k != 1 at {}", summary.join(", "), failures.join(", ")))
    }
}

fn c11() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0011);
    let mut cases = 0;
    for d in [-1, -2, -7] {
        let r = ring(d);
        let xi = norm_two_prime(r).map_err(|e| e.to_string())?;
        let split: Vec<QuadInt> = primes_with_odd_norm_up_to(r, 400)
            .into_iter()
            .filter(|p| {
                let n: u64 = p.norm().try_into().unwrap();
                is_prime_u64(n) && classify_rational_prime(n, r).unwrap() == PrimeClass::Split
            })
            .collect();
        for _ in 0..200 {
            let mut chosen: Vec<(QuadInt, u32)> = Vec::new();
            for p in &split {
                if rng.gen_bool(0.15) {
                    chosen.push((p.clone(), rng.gen_range(1..=3)));
                }
            }
            let f = QuadFactorization::from_parts(r.one(), chosen.clone()).map_err(|e| e.to_string())?;
            let z = f.reconstruct();
            // I_2 of the construction: Π (1 + N + ... + N^e) / N^e
            let known: ExactRational = chosen
                .iter()
                .map(|(p, e)| {
                    let n = p.norm();
                    let top = n.pow(*e);
                    let sum: BigInt = (0..=*e).map(|j| n.pow(j)).sum();
                    ExactRational::new(sum, top)
                })
                .product();
            let lifted = index(2, &(&xi * &z)).map_err(|e| e.to_string())?.into_inner();
            let want = &ExactRational::new(3, 2) * &known;
            ensure(lifted == want, || format!("d = {d}, z = {z}: {lifted} vs {want}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} synthetic products of split primes"))
}

fn main() -> ExitCode {
    // one-time setup (prime sieve) outside the timed criteria
    let _ = factor(&ring(-1).from_int(BigInt::from(BigUint::from(2u32))));

    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "worked example 9+3i", c1),
        (2, "known indices", c2),
        (3, "even decomposition of 3+9i", c3),
        (4, "closed form vs enumeration", c4),
        (5, "prime classification", c5),
        (6, "inert valuations", c6),
        (7, "search completeness", c7),
        (8, "odd-norm vacuity", c8),
        (9, "index properties", c9),
        (10, "k = 1 on even-norm hits", c10),
        (11, "lift identity", c11),
    ];
    let mut unexpected = 0;
    for (n, title, run) in criteria {
        let outcome = run();
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n);
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let tag = match (outcome.is_ok(), known) {
            (false, Some((_, why))) => format!(" [known: {why}]"),
            (true, Some(_)) => {
                unexpected += 1;
                " [listed as a known failure but passed]".to_string()
            }
            (false, None) => {
                unexpected += 1;
                String::new()
            }
            (true, None) => String::new(),
        };
        println!("criterion {n:>2} {status}  {title}: {detail}{tag}");
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria did not match their expected outcome");
        ExitCode::FAILURE
    }
}

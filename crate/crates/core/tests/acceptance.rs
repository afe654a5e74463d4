//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use partreg::algebra::{Field, IntMatrix, Scalar};
use partreg::columns::{brauer_matrix, check_columns_condition};
use partreg::deuber::{deuber_witness, hj_line_search, word_index, DeuberWitness};
use partreg::fourier::{bohr_bounds_check, count_monochromatic_triples, regular_pair, CountMethod};
use partreg::search::{
    enumerate_solutions, modular_schur_number, rado_number, valid_colouring_exists, ConstraintSystem, Domain,
    ModularSchurOptions, SearchBudget, SearchStatus,
};
use partreg::{Colouring, Ground};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

type Check = std::result::Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn satisfies(m: &IntMatrix, field: Field) -> std::result::Result<bool, String> {
    let a = m.over(field);
    match check_columns_condition(&a).map_err(|e| e.to_string())? {
        Some(p) => {
            ensure(p.verify(&a).map_err(|e| e.to_string())?, || format!("witness for {m} over {field} fails"))?;
            Ok(true)
        }
        None => Ok(false),
    }
}

fn criterion_1() -> Check {
    let schur = IntMatrix::row_vector(&[1, 1, -1]);
    ensure(satisfies(&schur, Field::Rational)?, || "(1 1 -1) over Q".into())?;
    for p in PRIMES {
        ensure(satisfies(&schur, Field::Modular(p))?, || format!("(1 1 -1) over F{p}"))?;
        let m = IntMatrix::row_vector(&[1, p as i64, -(p as i64)]);
        ensure(satisfies(&m, Field::Rational)?, || format!("{m} over Q"))?;
        ensure(!satisfies(&m, Field::Modular(p))?, || format!("{m} should fail over F{p}"))?;
    }
    for k in 2..=5 {
        let b = brauer_matrix(k).map_err(|e| e.to_string())?;
        ensure(satisfies(&b, Field::Rational)?, || format!("Brauer k={k} over Q"))?;
        for p in PRIMES {
            ensure(satisfies(&b, Field::Modular(p))?, || format!("Brauer k={k} over F{p}"))?;
        }
    }
    Ok("36 golden cases exact".into())
}

fn criterion_2() -> Check {
    let budget = SearchBudget::unlimited();
    let mut notes = Vec::new();
    for a in 1..=3i64 {
        let start = Instant::now();
        let out = rado_number(&IntMatrix::row_vector(&[a, 1, -1]), 2, &budget, 100).map_err(|e| e.to_string())?;
        let expected = (a * a + 3 * a) as u64;
        ensure(out.value == expected, || format!("f_{a}(2) = {} != {expected}", out.value))?;
        ensure(start.elapsed() < Duration::from_secs(10), || format!("f_{a}(2) took {:?}", start.elapsed()))?;
        notes.push(format!("f_{a}(2)={}", out.value));
    }
    let start = Instant::now();
    let out = rado_number(&IntMatrix::row_vector(&[1, 1, -1]), 3, &budget, 100).map_err(|e| e.to_string())?;
    ensure(out.value == 13 && out.refuted_at == 14, || format!("f(3) = {}", out.value))?;
    ensure(start.elapsed() < Duration::from_secs(300), || format!("f(3) took {:?}", start.elapsed()))?;
    notes.push(format!("f(3)=13 (Unsat at 14 after {} nodes)", out.stats.nodes));
    Ok(notes.join(", "))
}

fn criterion_3() -> Check {
    let budget = SearchBudget::unlimited();
    let h1 = modular_schur_number(1, 2, ModularSchurOptions::default(), &budget).map_err(|e| e.to_string())?;
    ensure(h1.value == 4, || format!("h_1(2) = {}", h1.value))?;
    let h2 = modular_schur_number(2, 2, ModularSchurOptions::default(), &budget).map_err(|e| e.to_string())?;
    ensure(h2.value < 10, || format!("h_2(2) = {}", h2.value))?;
    ensure(h2.per_n.contains(&(10, false)), || "N = 10 not refuted by the search".into())?;

    let sys = ConstraintSystem::schur(2, Domain::ModularStar(11)).map_err(|e| e.to_string())?;
    let solutions = enumerate_solutions(&sys).map_err(|e| e.to_string())?;
    for t in [[1, 1, 3], [3, 3, 9], [4, 1, 9], [1, 10, 1], [3, 4, 10]] {
        ensure(solutions.contains(&t.to_vec()), || format!("triple {t:?} missing mod 11"))?;
    }
    // Independent refutation: every one of the 2^10 colourings of {1..10} has a monochromatic triple mod 11.
    let all_fail = (0u32..1 << 10).all(|mask| {
        let colour = |e: u64| mask >> (e - 1) & 1;
        (1..=10u64).any(|x| (1..=10u64).any(|y| {
            let z = (2 * x + y) % 11;
            z != 0 && colour(x) == colour(y) && colour(y) == colour(z)
        }))
    });
    ensure(all_fail, || "some 2-colouring of {1..10} avoids 2x + y = z mod 11".into())?;
    ensure(valid_colouring_exists(&sys, 2, &budget).map_err(|e| e.to_string())?.status == SearchStatus::Unsat, || {
        "search does not refute N = 10".into()
    })?;
    Ok(format!("h_1(2)=4, h_2(2)={} < 10, 1024 colourings refuted at N=10", h2.value))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..500 {
        let n = rng.gen_range(1..=2048u64);
        let r = rng.gen_range(1..=8usize);
        let a = loop {
            let a = rng.gen_range(1..=n.max(2));
            if num_integer::gcd(a, n) == 1 {
                break a;
            }
        };
        let colours: Vec<usize> = (0..n).map(|_| rng.gen_range(0..r)).collect();
        let c = Colouring::new(Ground::ZMod(n), colours, r).map_err(|e| e.to_string())?;
        let fft = count_monochromatic_triples(&c, a, CountMethod::Convolution).map_err(|e| e.to_string())?;
        let brute = count_monochromatic_triples(&c, a, CountMethod::Brute).map_err(|e| e.to_string())?;
        ensure(fft.per_class == brute.per_class, || format!("instance {i}: N={n} a={a} r={r} differ"))?;
    }
    let singletons = Colouring::new(Ground::ZMod(7), (0..7).collect(), 7).map_err(|e| e.to_string())?;
    let total = count_monochromatic_triples(&singletons, 3, CountMethod::Convolution).map_err(|e| e.to_string())?.total;
    ensure(total == 1, || format!("singletons mod 7 give {total}"))?;
    Ok("500 random instances agree exactly; singletons mod 7 total 1".into())
}

/// `|B(Λ,δ)|` from the defining inequality with complex exponentials.
fn bohr_size(n: u64, freqs: &[u64], delta: f64) -> usize {
    (0..n)
        .filter(|&x| {
            freqs.iter().all(|&l| (Complex64::from_polar(1.0, 2.0 * PI * ((x * l) % n) as f64 / n as f64) - 1.0).norm() < delta)
        })
        .count()
}

fn bohr_list(n: u64, freqs: &[u64], delta: f64) -> Vec<u64> {
    (0..n)
        .filter(|&x| {
            freqs.iter().all(|&l| (Complex64::from_polar(1.0, 2.0 * PI * ((x * l) % n) as f64 / n as f64) - 1.0).norm() < delta)
        })
        .collect()
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = 0;
    for i in 0..100 {
        let n = [101u64, 1000, 4096][rng.gen_range(0..3)];
        let d = rng.gen_range(1..=3usize);
        let freqs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..n)).collect();
        let delta = [0.1, 0.5, 1.0][rng.gen_range(0..3)];
        let b = bohr_bounds_check(n, &freqs, delta).map_err(|e| e.to_string())?;
        ensure(b.lower_ok && b.doubling_ok, || format!("instance {i}: {b:?}"))?;
        // Oracle: recount both sets from the definition.
        let dim = b.d as i32;
        let small = bohr_size(n, &freqs, delta) as f64 / n as f64;
        let big = bohr_size(n, &freqs, 2.0 * delta) as f64 / n as f64;
        ensure(small >= (delta / (2.0 * PI)).powi(dim), || format!("instance {i}: lower bound"))?;
        ensure(big / small <= 16f64.powi(dim), || format!("instance {i}: doubling {}", big / small))?;
        for eta in [0.1, 0.5] {
            let p = regular_pair(n, &freqs, delta, eta).map_err(|e| format!("instance {i}, eta {eta}: {e}"))?;
            let star = bohr_list(n, &freqs, p.delta_star);
            let prime = bohr_list(n, &freqs, p.delta_prime);
            let mut hit = vec![false; n as usize];
            for &x in &star {
                for &y in &prime {
                    hit[((x + y) % n) as usize] = true;
                }
            }
            let sum = hit.iter().filter(|&&h| h).count() as f64;
            ensure(sum <= (1.0 + eta) * star.len() as f64, || format!("instance {i}, eta {eta}: sumset {sum}"))?;
            pairs += 1;
        }
    }
    Ok(format!("100 Bohr instances within bounds; {pairs} regular pairs verified by direct sumsets"))
}

/// Membership in `S(d, F; t)` from the definition.
fn in_s_set(x: &Scalar, f: &[Scalar], t: &[Scalar]) -> bool {
    fn go(f: &[Scalar], t: &[Scalar], acc: Scalar, x: &Scalar) -> bool {
        match t.split_first() {
            None => &acc == x,
            Some((ti, rest)) => f.iter().any(|fi| go(f, rest, &acc + &(fi * ti), x)),
        }
    }
    (0..t.len()).any(|j| go(f, &t[j + 1..], t[j].clone(), x))
}

fn chain_check(a: &partreg::Matrix, w: &DeuberWitness, t: &[Scalar]) -> std::result::Result<(), String> {
    let x = w.lift(t).map_err(|e| e.to_string())?;
    let ax = a.mul_vec(&x).map_err(|e| e.to_string())?;
    ensure(ax.iter().all(Scalar::is_zero), || format!("A x != 0 for t = {t:?}"))?;
    let f = w.augmented_multipliers();
    ensure(x.iter().all(|xi| in_s_set(xi, &f, t)), || format!("coordinate outside S for t = {t:?}"))?;
    ensure(w.check(a, t).map_err(|e| e.to_string())?.ok(), || format!("library check disagrees for t = {t:?}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let schur = IntMatrix::row_vector(&[1, 1, -1]).over(Field::Rational);
    let p = check_columns_condition(&schur).map_err(|e| e.to_string())?.ok_or("Schur fails")?;
    let w = deuber_witness(&schur, &p).map_err(|e| e.to_string())?;
    ensure(w.multipliers.len() <= 2 * w.d * w.d, || format!("|F| = {}", w.multipliers.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let t: Vec<Scalar> = (0..w.d).map(|_| Scalar::rational(rng.gen_range(-500..=500), rng.gen_range(1..=500))).collect();
        chain_check(&schur, &w, &t)?;
    }
    let schur_summary = format!("Schur/Q d={} |F|={}", w.d, w.multipliers.len());

    let brauer = brauer_matrix(3).map_err(|e| e.to_string())?.over(Field::Modular(7));
    let p = check_columns_condition(&brauer).map_err(|e| e.to_string())?.ok_or("Brauer fails")?;
    let w = deuber_witness(&brauer, &p).map_err(|e| e.to_string())?;
    ensure(w.multipliers.len() <= 3 * w.d * w.d, || format!("|F| = {}", w.multipliers.len()))?;
    for code in 0..7u64.pow(w.d as u32) {
        let mut c = code;
        let t: Vec<Scalar> = (0..w.d)
            .map(|_| {
                let v = c % 7;
                c /= 7;
                Scalar::modular(v as i64, 7)
            })
            .collect();
        chain_check(&brauer, &w, &t)?;
    }
    ensure(start.elapsed() < Duration::from_secs(5), || format!("took {:?}", start.elapsed()))?;
    Ok(format!("{schur_summary}, 100 rational t; Brauer k=3/F7 d={} |F|={}, all 49 t", w.d, w.multipliers.len()))
}

fn criterion_7() -> Check {
    for mask in 0..16usize {
        let colouring: Vec<usize> = (0..4).map(|i| (mask >> i) & 1).collect();
        let line = hj_line_search(2, 2, &colouring).map_err(|e| e.to_string())?;
        let line = line.ok_or_else(|| format!("no line for {colouring:?}"))?;
        ensure(!line.variable.is_empty(), || "empty variable set".into())?;
        ensure(line.words(2).iter().all(|w| colouring[word_index(w, 2)] == line.colour), || {
            format!("line for {colouring:?} is not monochromatic")
        })?;
    }
    Ok("all 16 colourings of [2]^2 contain a verified line".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        (1, "columns condition golden set", Duration::from_secs(1), criterion_1),
        (2, "Schur values", Duration::from_secs(300), criterion_2),
        (3, "modular Schur", Duration::from_secs(10), criterion_3),
        (4, "counting identities", Duration::from_secs(60), criterion_4),
        (5, "Bohr suite", Duration::from_secs(120), criterion_5),
        (6, "Deuber chain", Duration::from_secs(5), criterion_6),
        (7, "Hales-Jewett toy", Duration::from_secs(1), criterion_7),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; over the {limit:?} limit")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {id} PASS {name} ({:.3} s, limit {} s): {msg}", elapsed.as_secs_f64(), limit.as_secs()),
            Err(msg) => {
                failed += 1;
                println!("criterion {id} FAIL {name} ({:.3} s, limit {} s): {msg}", elapsed.as_secs_f64(), limit.as_secs());
            }
        }
    }
    println!(
        "criterion 8 NOTE not reproducible at desk scale: f(5) = 160 and h(5) need a large SAT run \
         (use export-cnf with an external solver); the O_{{n,r}}(1) bound and the exp((2r)^O(1)) constant \
         have no explicit values to check"
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

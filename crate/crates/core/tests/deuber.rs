use partreg::algebra::{Field, IntMatrix, Matrix, Scalar};
use partreg::columns::{brauer_matrix, check_columns_condition};
use partreg::deuber::{
    deuber_witness, find_f_dependence, hj_line_search, is_f_independent, s_set, s_set_explained, word_index,
    DeuberWitness, SSetSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn m(v: &[i64], p: u64) -> Vec<Scalar> {
    v.iter().map(|&x| Scalar::modular(x, p)).collect()
}

/// Membership in `S(d, F; t)` straight from the definition, by recursion over the tail.
fn in_s_set_direct(x: &Scalar, f: &[Scalar], t: &[Scalar]) -> bool {
    fn tails(f: &[Scalar], t: &[Scalar], acc: Scalar, target: &Scalar) -> bool {
        match t.split_first() {
            None => &acc == target,
            Some((ti, rest)) => f.iter().any(|fi| tails(f, rest, &acc + &(fi * ti), target)),
        }
    }
    (0..t.len()).any(|j| tails(f, &t[j + 1..], t[j].clone(), x))
}

fn check_direct(a: &Matrix, w: &DeuberWitness, t: &[Scalar]) {
    let x = w.lift(t).unwrap();
    assert_eq!(x.len(), a.cols());
    for i in 0..a.rows() {
        let s = (0..a.cols()).fold(a.field().zero(), |acc, j| &acc + &(a.get(i, j) * &x[j]));
        assert!(s.is_zero(), "row {i} of A x is {s} for t = {t:?}");
    }
    let f = w.augmented_multipliers();
    for xi in &x {
        assert!(in_s_set_direct(xi, &f, t), "{xi} not in S(d, F u {{0,1}}; t)");
    }
    let check = w.check(a, t).unwrap();
    assert!(check.ok());
}

fn witness_for(a: &Matrix) -> DeuberWitness {
    let p = check_columns_condition(a).unwrap().expect("columns condition holds");
    let w = deuber_witness(a, &p).unwrap();
    assert!(w.multipliers.len() <= (a.rows() + 1) * w.d * w.d, "|F| = {} d = {}", w.multipliers.len(), w.d);
    w
}

fn exhaustive_t(p: u64, d: usize) -> impl Iterator<Item = Vec<Scalar>> {
    (0..p.pow(d as u32)).map(move |mut idx| {
        (0..d)
            .map(|_| {
                let v = idx % p;
                idx /= p;
                Scalar::modular(v as i64, p)
            })
            .collect()
    })
}

#[test]
fn schur_over_q_random_t() {
    let a = IntMatrix::row_vector(&[1, 1, -1]).over(Field::Rational);
    let w = witness_for(&a);
    assert_eq!(w.d, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let t: Vec<Scalar> = (0..w.d)
            .map(|_| Scalar::rational(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000)))
            .collect();
        check_direct(&a, &w, &t);
    }
}

#[test]
fn brauer_three_over_f7_exhaustive() {
    let a = brauer_matrix(3).unwrap().over(Field::Modular(7));
    let w = witness_for(&a);
    for t in exhaustive_t(7, w.d) {
        check_direct(&a, &w, &t);
    }
}

#[test]
fn witnesses_for_many_regular_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut seen = 0;
    for k in 2..=4 {
        for field in [Field::Rational, Field::Modular(5), Field::Modular(11)] {
            let a = brauer_matrix(k).unwrap().over(field);
            let w = witness_for(&a);
            for _ in 0..20 {
                let t: Vec<Scalar> = (0..w.d).map(|_| field.from_i64(rng.gen_range(-30..30))).collect();
                check_direct(&a, &w, &t);
            }
        }
    }
    // Random small integer matrices that happen to be regular.
    while seen < 40 {
        let (n, cols) = (rng.gen_range(1..=2), rng.gen_range(2..=5));
        let entries: Vec<i64> = (0..n * cols).map(|_| rng.gen_range(-2..=2)).collect();
        let field = if rng.gen_bool(0.5) { Field::Rational } else { Field::Modular(3) };
        let a = IntMatrix::new(n, cols, entries).unwrap().over(field);
        let Some(p) = check_columns_condition(&a).unwrap() else { continue };
        seen += 1;
        let w = deuber_witness(&a, &p).unwrap();
        assert!(w.multipliers.len() <= (n + 1) * w.d * w.d);
        for _ in 0..5 {
            let t: Vec<Scalar> = (0..w.d).map(|_| field.from_i64(rng.gen_range(-9..9))).collect();
            check_direct(&a, &w, &t);
        }
    }
}

#[test]
fn bad_partition_is_rejected() {
    let a = IntMatrix::row_vector(&[1, 1, -1]).over(Field::Rational);
    let bad = partreg::ColumnPartition::new(vec![vec![0], vec![1, 2]], 3).unwrap();
    assert!(matches!(deuber_witness(&a, &bad), Err(partreg::Error::InvalidWitness(_))));
}

#[test]
fn s_set_examples() {
    let spec = SSetSpec::new(m(&[0, 1], 7), m(&[1, 2], 7)).unwrap();
    let got: Vec<u64> = s_set(&spec).unwrap().iter().map(|s| s.residue().unwrap()).collect();
    assert_eq!(got, vec![1, 2, 3]);
    let single = SSetSpec::new(m(&[2, 3, 4], 11), m(&[5], 11)).unwrap();
    assert_eq!(s_set(&single).unwrap().len(), 1);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let p = [5u64, 7, 13][rng.gen_range(0..3)];
        let fs: Vec<i64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..p as i64)).collect();
        let ts: Vec<i64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..p as i64)).collect();
        let spec = SSetSpec::new(m(&fs, p), m(&ts, p)).unwrap();
        let explained = s_set_explained(&spec).unwrap();
        let bound = spec.m() * spec.multipliers.len().pow(spec.m() as u32 - 1);
        assert!(explained.len() <= bound);
        for (x, origin) in &explained {
            let j = origin.j;
            let sum = origin
                .coefficients
                .iter()
                .zip(&spec.generators[j..])
                .fold(spec.generators[j - 1].clone(), |acc, (f, t)| &acc + &(f * t));
            assert_eq!(&sum, x);
            assert!(origin.coefficients.iter().all(|c| spec.multipliers.contains(c)));
        }
        for x in 0..p as i64 {
            let x = Scalar::modular(x, p);
            assert_eq!(explained.contains_key(&x), in_s_set_direct(&x, &spec.multipliers, &spec.generators));
        }
        if spec.multipliers.iter().any(Scalar::is_zero) {
            assert!(spec.generators.iter().all(|t| explained.contains_key(t)));
        }
    }
}

#[test]
fn f_independence_examples() {
    assert!(is_f_independent(&m(&[1], 5), &m(&[0, 1], 5)).unwrap());
    assert!(!is_f_independent(&m(&[1, 1], 2), &m(&[0, 1], 2)).unwrap());
    assert!(!is_f_independent(&m(&[1, 3], 7), &m(&[0, 1, 2], 7)).unwrap());
    let dep = find_f_dependence(&m(&[1, 3], 7), &m(&[0, 1, 2], 7)).unwrap().unwrap();
    let s = &(&dep[0] * &Scalar::modular(1, 7)) + &(&dep[1] * &Scalar::modular(3, 7));
    assert!(s.is_zero());
    // Without 0 in F, t = (1, 1) over F_3 with F = {1} is independent; with F = {1, 2} it is not.
    assert!(is_f_independent(&m(&[1, 1], 3), &m(&[1], 3)).unwrap());
    assert!(!is_f_independent(&m(&[1, 1], 3), &m(&[1, 2], 3)).unwrap());
}

#[test]
fn random_t_is_usually_independent() {
    let p = 1009;
    let f = m(&[0, 1, 2, 3], p);
    let mut rng = ChaCha8Rng::seed_from_u64(1009);
    let trials = 1000;
    let independent = (0..trials)
        .filter(|_| {
            let t = m(&[rng.gen_range(0..p as i64), rng.gen_range(0..p as i64)], p);
            is_f_independent(&t, &f).unwrap()
        })
        .count();
    let floor = 1.0 - (f.len() as f64).powi(2) / p as f64;
    assert!(independent as f64 / trials as f64 >= floor, "{independent} of {trials}");
}

/// Every combinatorial line of `[k]^dims`, as sets of word indices.
fn all_lines(k: usize, dims: usize) -> Vec<Vec<usize>> {
    let mut lines = Vec::new();
    // Each coordinate is a fixed letter or the variable (k).
    for code in 0..(k + 1).pow(dims as u32) {
        let mut c = code;
        let pattern: Vec<usize> = (0..dims)
            .map(|_| {
                let v = c % (k + 1);
                c /= k + 1;
                v
            })
            .collect();
        if !pattern.contains(&k) {
            continue;
        }
        lines.push(
            (0..k)
                .map(|a| {
                    let word: Vec<usize> = pattern.iter().map(|&x| if x == k { a } else { x }).collect();
                    word_index(&word, k)
                })
                .collect(),
        );
    }
    lines
}

#[test]
fn hales_jewett_agrees_with_brute_force() {
    for (k, dims, colours) in [(2usize, 2usize, 2usize), (2, 3, 2), (3, 2, 2), (3, 2, 3)] {
        let size = k.pow(dims as u32);
        let lines = all_lines(k, dims);
        let total = colours.pow(size as u32);
        for code in 0..total.min(20_000) {
            let mut c = code;
            let colouring: Vec<usize> = (0..size)
                .map(|_| {
                    let v = c % colours;
                    c /= colours;
                    v
                })
                .collect();
            let expected = lines.iter().any(|l| l.iter().all(|&w| colouring[w] == colouring[l[0]]));
            let found = hj_line_search(k, dims, &colouring).unwrap();
            assert_eq!(found.is_some(), expected, "k={k} dims={dims} {colouring:?}");
            if let Some(line) = found {
                assert!(!line.variable.is_empty());
                for w in line.words(k) {
                    assert_eq!(colouring[word_index(&w, k)], line.colour);
                }
            }
        }
    }
}

#[test]
fn hales_jewett_small_cases() {
    for mask in 0..16usize {
        let colouring: Vec<usize> = (0..4).map(|i| (mask >> i) & 1).collect();
        assert!(hj_line_search(2, 2, &colouring).unwrap().is_some(), "{colouring:?}");
    }
    let line = hj_line_search(2, 2, &[0, 0, 0, 0]).unwrap().unwrap();
    assert_eq!(line.variable, vec![0]);
    assert_eq!(hj_line_search(2, 1, &[0, 1]).unwrap(), None);
    assert!(hj_line_search(2, 2, &[0, 1, 0]).is_err());
    assert!(matches!(hj_line_search(10, 7, &[]), Err(partreg::Error::BudgetExceeded { .. })));
}

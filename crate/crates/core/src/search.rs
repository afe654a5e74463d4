//! Exhaustive colouring search: Rado numbers, Schur numbers and their
//! modular analogues.
//!
//! The backtracker assigns ground elements in ascending order. Every solution
//! tuple is reduced to its support (repeated coordinates collapse, so `1+1=2`
//! constrains `{1, 2}`); when all but the largest element of a support share a
//! colour, that colour is struck from the largest element's domain. Colours are
//! symmetry-broken: element `i` may only use colour `c` if `c ≤ 1 +` the
//! largest colour used below `i`. Any valid colouring can be relabelled into
//! that form by renaming colours in order of first use, so this changes which
//! certificate is found but never whether one exists.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{mod_inverse, IntMatrix};
use crate::colouring::{Colouring, Ground};
use crate::error::{Error, Result};

/// Largest number of tuples [`for_each_solution`] will scan.
pub const ENUMERATION_BUDGET: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Domain {
    /// `{1..N}` with integer arithmetic.
    Interval(u64),
    /// `{1..M-1}` with arithmetic mod `M`.
    ModularStar(u64),
}

impl Domain {
    pub fn ground(&self) -> Ground {
        match *self {
            Domain::Interval(n) => Ground::Interval(n),
            Domain::ModularStar(m) => Ground::ModularStar(m),
        }
    }
}

/// `A x = 0` over a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    matrix: IntMatrix,
    domain: Domain,
}

impl ConstraintSystem {
    /// Rejects empty grounds and all-zero columns (a zero column lets any
    /// value fill that coordinate, which makes the system degenerate).
    pub fn new(matrix: IntMatrix, domain: Domain) -> Result<Self> {
        match domain {
            Domain::Interval(0) => return Err(Error::InvalidInput("interval ground needs N >= 1".into())),
            Domain::ModularStar(m) if m < 2 => {
                return Err(Error::InvalidInput("modular ground needs M >= 2".into()))
            }
            _ => {}
        }
        if let Some(c) = (0..matrix.cols()).find(|&c| (0..matrix.rows()).all(|i| matrix.get(i, c) == 0)) {
            return Err(Error::InvalidInput(format!("column {c} is all zero")));
        }
        Ok(ConstraintSystem { matrix, domain })
    }

    /// `(a 1 -1)`: `a x + y = z`.
    pub fn schur(a: i64, domain: Domain) -> Result<Self> {
        ConstraintSystem::new(IntMatrix::row_vector(&[a, 1, -1]), domain)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn ground(&self) -> Ground {
        self.domain.ground()
    }
}

fn pow_u128(base: u64, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// Calls `f` on every solution in lexicographic order.
///
/// The first `m-1` coordinates are enumerated and the last is solved for from
/// a row where that is possible (any row with a nonzero last entry over ℤ; a
/// row whose last entry is a unit mod `M` in the modular case). Without such a
/// row the last coordinate is enumerated as well.
pub fn for_each_solution<B>(
    sys: &ConstraintSystem,
    mut f: impl FnMut(&[u64]) -> ControlFlow<B>,
) -> Result<Option<B>> {
    let a = &sys.matrix;
    let (m, n) = (a.cols(), a.rows());
    let size = sys.ground().len() as u64;
    let modulus = match sys.domain {
        Domain::Interval(_) => None,
        Domain::ModularStar(mm) => Some(mm as i128),
    };
    let last = m - 1;
    let pivot = match modulus {
        None => (0..n).find(|&i| a.get(i, last) != 0).map(|i| (i, 0)),
        Some(mm) => (0..n).find_map(|i| {
            let v = (a.get(i, last) as i128).rem_euclid(mm) as u64;
            mod_inverse(v, mm as u64).map(|inv| (i, inv))
        }),
    };
    let free = if pivot.is_some() { m - 1 } else { m };
    let work = pow_u128(size, free);
    if work > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded { what: "solution enumeration", size: work, limit: ENUMERATION_BUDGET });
    }
    let reduce = |v: i128| match modulus {
        Some(mm) => v.rem_euclid(mm),
        None => v,
    };
    let residual = |x: &[u64], i: usize, upto: usize| -> i128 {
        reduce((0..upto).map(|j| a.get(i, j) as i128 * x[j] as i128).sum())
    };
    let mut x = vec![1u64; m];
    loop {
        let mut candidate = true;
        if let Some((p, inv)) = pivot {
            let r = residual(&x, p, last);
            let coeff = a.get(p, last) as i128;
            let value = match modulus {
                None if r % coeff == 0 => Some(-r / coeff),
                None => None,
                Some(mm) => Some((-r).rem_euclid(mm) * inv as i128 % mm),
            };
            match value {
                Some(v) if v >= 1 && v <= size as i128 => x[last] = v as u64,
                _ => candidate = false,
            }
        }
        if candidate && (0..n).all(|i| residual(&x, i, m) == 0) {
            if let ControlFlow::Break(b) = f(&x) {
                return Ok(Some(b));
            }
        }
        // Odometer over the free coordinates.
        let mut pos = free;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            if x[pos] < size {
                x[pos] += 1;
                break;
            }
            x[pos] = 1;
        }
    }
}

/// Every solution tuple, lexicographically ordered.
pub fn enumerate_solutions(sys: &ConstraintSystem) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for_each_solution(sys, |x| {
        out.push(x.to_vec());
        ControlFlow::<()>::Continue(())
    })?;
    Ok(out)
}

/// The first solution tuple that `colouring` makes monochromatic.
pub fn find_monochromatic(sys: &ConstraintSystem, colouring: &Colouring) -> Result<Option<Vec<u64>>> {
    if colouring.ground() != sys.ground() {
        return Err(Error::InvalidInput(format!(
            "colouring is on {} but the system is on {}",
            colouring.ground(),
            sys.ground()
        )));
    }
    for_each_solution(sys, |x| {
        let c = colouring.colour_of(x[0]);
        if x.iter().all(|&e| colouring.colour_of(e) == c) {
            ControlFlow::Break(x.to_vec())
        } else {
            ControlFlow::Continue(())
        }
    })
}

/// Distinct supports of all solutions, each sorted ascending.
pub fn solution_supports(sys: &ConstraintSystem) -> Result<BTreeSet<Vec<u64>>> {
    let mut supports = BTreeSet::new();
    for_each_solution(sys, |x| {
        let mut s = x.to_vec();
        s.sort_unstable();
        s.dedup();
        supports.insert(s);
        ControlFlow::<()>::Continue(())
    })?;
    Ok(supports)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
    #[serde(serialize_with = "serialize_millis")]
    pub wall_time: Duration,
}

fn serialize_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1000.0)
}

impl SearchStats {
    fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.propagations += other.propagations;
        self.wall_time += other.wall_time;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Sat(Colouring),
    Unsat,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub stats: SearchStats,
}

struct Watch {
    target: usize,
    others: Vec<usize>,
}

struct Backtracker<'a> {
    r: usize,
    watches: Vec<Vec<Watch>>,
    colour: Vec<usize>,
    forbid: Vec<Vec<u32>>,
    forbidden_count: Vec<usize>,
    trail: Vec<(usize, usize)>,
    stats: SearchStats,
    budget: &'a SearchBudget,
    started: Instant,
    timed_out: bool,
}

impl Backtracker<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.budget.max_nodes.is_some_and(|cap| self.stats.nodes > cap) {
            self.timed_out = true;
        }
        if self.stats.nodes.is_multiple_of(1024) && self.budget.time_limit.is_some_and(|t| self.started.elapsed() > t) {
            self.timed_out = true;
        }
        self.timed_out
    }

    /// Records consequences of colouring `e` with `c`; false on a wiped-out domain.
    fn propagate(&mut self, e: usize, c: usize) -> bool {
        let mut ok = true;
        for w in &self.watches[e] {
            if w.others.iter().all(|&o| self.colour[o] == c) {
                self.stats.propagations += 1;
                self.forbid[w.target][c] += 1;
                self.trail.push((w.target, c));
                if self.forbid[w.target][c] == 1 {
                    self.forbidden_count[w.target] += 1;
                    if self.forbidden_count[w.target] == self.r {
                        ok = false;
                    }
                }
            }
        }
        ok
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (t, c) = self.trail.pop().expect("trail entry");
            self.forbid[t][c] -= 1;
            if self.forbid[t][c] == 0 {
                self.forbidden_count[t] -= 1;
            }
        }
    }

    /// `max_used` is one more than the largest colour used so far.
    fn dfs(&mut self, e: usize, max_used: usize) -> bool {
        if e == self.colour.len() {
            return true;
        }
        self.stats.nodes += 1;
        if self.out_of_budget() {
            return false;
        }
        let limit = self.r.min(max_used + 1);
        for c in 0..limit {
            if self.forbid[e][c] > 0 {
                continue;
            }
            self.colour[e] = c;
            let mark = self.trail.len();
            if self.propagate(e, c) && self.dfs(e + 1, max_used.max(c + 1)) {
                return true;
            }
            self.undo_to(mark);
            if self.timed_out {
                return false;
            }
        }
        self.colour[e] = usize::MAX;
        false
    }
}

/// Looks for an `r`-colouring of the ground set with no monochromatic solution.
///
/// `Sat` certificates are rechecked against a fresh enumeration pass before
/// being returned. Exhausting the budget gives `Timeout`, never a guess.
pub fn valid_colouring_exists(sys: &ConstraintSystem, r: usize, budget: &SearchBudget) -> Result<SearchOutcome> {
    if r == 0 {
        return Err(Error::InvalidInput("need at least one colour".into()));
    }
    let started = Instant::now();
    let ground = sys.ground();
    let n = ground.len();
    let first = ground.first();
    let supports = solution_supports(sys)?;

    let mut watches: Vec<Vec<Watch>> = (0..n).map(|_| Vec::new()).collect();
    let mut banned = false;
    for s in &supports {
        let idx: Vec<usize> = s.iter().map(|&e| (e - first) as usize).collect();
        match idx.as_slice() {
            [] => {}
            [_] => banned = true,
            [.., trigger, target] => {
                let others = idx[..idx.len() - 2].to_vec();
                watches[*trigger].push(Watch { target: *target, others });
            }
        }
    }
    if banned {
        let stats = SearchStats { wall_time: started.elapsed(), ..Default::default() };
        return Ok(SearchOutcome { status: SearchStatus::Unsat, stats });
    }

    let mut bt = Backtracker {
        r,
        watches,
        colour: vec![usize::MAX; n],
        forbid: vec![vec![0; r]; n],
        forbidden_count: vec![0; n],
        trail: Vec::new(),
        stats: SearchStats::default(),
        budget,
        started,
        timed_out: false,
    };
    let found = bt.dfs(0, 0);
    let mut stats = bt.stats;
    stats.wall_time = started.elapsed();
    let status = if found {
        let colouring = Colouring::new(ground, bt.colour, r)?;
        if let Some(bad) = find_monochromatic(sys, &colouring)? {
            return Err(Error::InvalidWitness(format!("certificate has monochromatic solution {bad:?}")));
        }
        SearchStatus::Sat(colouring)
    } else if bt.timed_out {
        SearchStatus::Timeout
    } else {
        SearchStatus::Unsat
    };
    Ok(SearchOutcome { status, stats })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadoNumber {
    pub value: u64,
    /// A valid colouring of `[value]`; `None` when `value == 0`.
    pub certificate: Option<Colouring>,
    /// `value + 1`, where the search proved no valid colouring exists.
    pub refuted_at: u64,
    pub stats: SearchStats,
}

/// The largest `N` such that `[N]` has an `r`-colouring with no monochromatic
/// solution to `A x = 0`.
///
/// Validity on `[N]` restricts to `[N-1]`, so `N` is increased from 1 until the
/// first refutation. `max_n` bounds the scan for systems that are not
/// partition regular.
pub fn rado_number(a: &IntMatrix, r: usize, budget: &SearchBudget, max_n: u64) -> Result<RadoNumber> {
    let mut stats = SearchStats::default();
    let mut certificate = None;
    for n in 1..=max_n + 1 {
        let sys = ConstraintSystem::new(a.clone(), Domain::Interval(n))?;
        let outcome = valid_colouring_exists(&sys, r, budget)?;
        stats.absorb(&outcome.stats);
        match outcome.status {
            SearchStatus::Sat(c) => certificate = Some(c),
            SearchStatus::Unsat => {
                return Ok(RadoNumber { value: n - 1, certificate, refuted_at: n, stats });
            }
            SearchStatus::Timeout => return Err(Error::Timeout(n)),
        }
    }
    Err(Error::NoRefutationBelow(max_n + 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ModularSchurOptions {
    /// Upper end of the scan. When `None` the scan stops at `f_a(r)`, computed
    /// first.
    pub max_n: Option<u64>,
    /// Only consider `N` with `gcd(a, N+1) = 1`.
    pub require_coprime: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModularSchurNumber {
    pub value: u64,
    pub certificate: Option<Colouring>,
    /// Largest `N` examined.
    pub cap: u64,
    /// `N`s examined and whether a valid colouring exists there.
    pub per_n: Vec<(u64, bool)>,
    pub stats: SearchStats,
}

/// `h_a(r)`: the largest `N` such that `{1..N}` has an `r`-colouring with no
/// monochromatic solution to `a x + y ≡ z (mod N+1)`.
///
/// A colouring valid mod `N+1` is valid over ℤ on `[N]`, so `h_a(r) ≤ f_a(r)`
/// and the scan stops at `f_a(r)` unless `max_n` is given. Each `N` is decided
/// independently since the modulus changes with `N`.
pub fn modular_schur_number(
    a: u64,
    r: usize,
    options: ModularSchurOptions,
    budget: &SearchBudget,
) -> Result<ModularSchurNumber> {
    let a_i = i64::try_from(a).map_err(|_| Error::InvalidInput(format!("a = {a} too large")))?;
    if a == 0 {
        return Err(Error::InvalidInput("a must be positive".into()));
    }
    let mut stats = SearchStats::default();
    let cap = match options.max_n {
        Some(n) => n,
        None => {
            let f = rado_number(&IntMatrix::row_vector(&[a_i, 1, -1]), r, budget, u64::MAX - 1)?;
            stats.absorb(&f.stats);
            f.value
        }
    };
    let mut value = 0;
    let mut certificate = None;
    let mut per_n = Vec::new();
    for n in 1..=cap {
        if options.require_coprime && a.gcd(&(n + 1)) != 1 {
            continue;
        }
        let sys = ConstraintSystem::schur(a_i, Domain::ModularStar(n + 1))?;
        let outcome = valid_colouring_exists(&sys, r, budget)?;
        stats.absorb(&outcome.stats);
        match outcome.status {
            SearchStatus::Sat(c) => {
                value = n;
                certificate = Some(c);
                per_n.push((n, true));
            }
            SearchStatus::Unsat => per_n.push((n, false)),
            SearchStatus::Timeout => return Err(Error::Timeout(n)),
        }
    }
    Ok(ModularSchurNumber { value, certificate, cap, per_n, stats })
}

/// Variable for "element `e` has colour `c`".
pub fn cnf_variable(ground: Ground, r: usize, element: u64, colour: usize) -> usize {
    let index = ground.index_of(element).expect("element in ground");
    index * r + colour + 1
}

/// DIMACS encoding of "some `r`-colouring avoids monochromatic solutions".
///
/// Variable `(e-1)·r + c + 1` says element `e` has colour `c`. Clauses, in
/// order: at-least-one colour per element, pairwise at-most-one per element,
/// then for every distinct solution support and colour a clause forbidding
/// that support to be monochromatic in that colour.
pub fn export_cnf(sys: &ConstraintSystem, r: usize) -> Result<String> {
    if r == 0 {
        return Err(Error::InvalidInput("need at least one colour".into()));
    }
    let ground = sys.ground();
    let supports = solution_supports(sys)?;
    let var = |e: u64, c: usize| cnf_variable(ground, r, e, c);
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for e in ground.elements() {
        clauses.push((0..r).map(|c| var(e, c) as i64).collect());
    }
    for e in ground.elements() {
        for c1 in 0..r {
            for c2 in c1 + 1..r {
                clauses.push(vec![-(var(e, c1) as i64), -(var(e, c2) as i64)]);
            }
        }
    }
    for s in &supports {
        for c in 0..r {
            clauses.push(s.iter().map(|&e| -(var(e, c) as i64)).collect());
        }
    }
    let mut out = String::new();
    out.push_str("c partreg colouring CNF\n");
    out.push_str(&format!("c matrix: {}\n", sys.matrix));
    out.push_str(&format!("c ground: {ground}\n"));
    out.push_str(&format!("c colours: {r}\n"));
    out.push_str(&format!("c variable (e-{})*{r}+c+1: element e has colour c\n", ground.first()));
    out.push_str(&format!("p cnf {} {}\n", ground.len() * r, clauses.len()));
    for clause in &clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    Ok(out)
}

/// Reads a colouring back out of a satisfying assignment (`assignment[v-1]`
/// is variable `v`). Each element must have exactly one true colour.
pub fn decode_assignment(ground: Ground, r: usize, assignment: &[bool]) -> Result<Colouring> {
    if assignment.len() != ground.len() * r {
        return Err(Error::DimensionMismatch { expected: ground.len() * r, found: assignment.len() });
    }
    let colours = ground
        .elements()
        .map(|e| {
            let mut on = (0..r).filter(|&c| assignment[cnf_variable(ground, r, e, c) - 1]);
            match (on.next(), on.next()) {
                (Some(c), None) => Ok(c),
                (None, _) => Err(Error::InvalidInput(format!("element {e} has no colour"))),
                (Some(_), Some(_)) => Err(Error::InvalidInput(format!("element {e} has several colours"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Colouring::new(ground, colours, r)
}

//! Oracles and generators shared by the integration tests. Nothing here
//! calls the library's evaluator, normal forms or closure code, so
//! agreement with them is independent evidence.

#![allow(dead_code)]

use std::collections::HashMap;

use alephfree::formula::{Formula, Var};
use alephfree::hf::HfSet;
use rand::Rng;

// ---------------------------------------------------------------- formulas

/// Tarski semantics read straight off the syntax tree: quantifiers range
/// over `domain`, bounded ones additionally require membership in the bound.
pub fn oracle_eval(phi: &Formula, domain: &[HfSet], env: &mut HashMap<String, HfSet>) -> bool {
    let get = |env: &HashMap<String, HfSet>, v: &Var| env.get(v.as_str()).cloned().expect("assigned");
    match phi {
        Formula::Eq(a, b) => get(env, a) == get(env, b),
        Formula::Mem(a, b) => get(env, b).children().contains(&get(env, a)),
        Formula::Not(p) => !oracle_eval(p, domain, env),
        Formula::And(p, q) => oracle_eval(p, domain, env) && oracle_eval(q, domain, env),
        Formula::Or(p, q) => oracle_eval(p, domain, env) || oracle_eval(q, domain, env),
        Formula::Implies(p, q) => !oracle_eval(p, domain, env) || oracle_eval(q, domain, env),
        Formula::Iff(p, q) => oracle_eval(p, domain, env) == oracle_eval(q, domain, env),
        Formula::Exists(x, p) => quantify(x, None, p, domain, env, true),
        Formula::Forall(x, p) => quantify(x, None, p, domain, env, false),
        Formula::BoundedExists(x, y, p) => {
            let bound = get(env, y);
            quantify(x, Some(&bound), p, domain, env, true)
        }
        Formula::BoundedForall(x, y, p) => {
            let bound = get(env, y);
            quantify(x, Some(&bound), p, domain, env, false)
        }
    }
}

fn quantify(
    x: &Var,
    bound: Option<&HfSet>,
    body: &Formula,
    domain: &[HfSet],
    env: &mut HashMap<String, HfSet>,
    existential: bool,
) -> bool {
    let saved = env.get(x.as_str()).cloned();
    let mut result = !existential;
    for d in domain {
        if let Some(b) = bound {
            if !b.children().contains(d) {
                continue;
            }
        }
        env.insert(x.as_str().to_owned(), d.clone());
        if oracle_eval(body, domain, env) == existential {
            result = existential;
            break;
        }
    }
    match saved {
        Some(s) => env.insert(x.as_str().to_owned(), s),
        None => env.remove(x.as_str()),
    };
    result
}

/// Calls `f` with every assignment of `vars` into `domain`.
pub fn for_each_assignment(vars: &[String], domain: &[HfSet], mut f: impl FnMut(&HashMap<String, HfSet>)) {
    let n = vars.len();
    let mut idx = vec![0usize; n];
    if n > 0 && domain.is_empty() {
        return;
    }
    loop {
        let env: HashMap<String, HfSet> = vars.iter().cloned().zip(idx.iter().map(|&i| domain[i].clone())).collect();
        f(&env);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            idx[k] += 1;
            if idx[k] < domain.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub const FREE_VARS: [&str; 3] = ["x", "y", "z"];
const BOUND_VARS: [&str; 4] = ["u", "v", "w", "t"];

/// A random Δ₀ formula of depth at most `depth` whose free variables are
/// among `x, y, z`. Bounded quantifiers appear in sugared form, in the two
/// expanded forms and in the implication alias.
pub fn gen_delta0(rng: &mut impl Rng, depth: usize) -> Formula {
    let scope: Vec<String> = FREE_VARS.iter().map(|s| s.to_string()).collect();
    gen_rec(rng, depth, &scope)
}

fn pick<'a>(rng: &mut impl Rng, xs: &'a [String]) -> &'a str {
    &xs[rng.gen_range(0..xs.len())]
}

fn atom(rng: &mut impl Rng, scope: &[String]) -> Formula {
    let (a, b) = (pick(rng, scope).to_owned(), pick(rng, scope).to_owned());
    if rng.gen_bool(0.5) {
        Formula::mem(a, b)
    } else {
        Formula::eq(a, b)
    }
}

fn gen_rec(rng: &mut impl Rng, depth: usize, scope: &[String]) -> Formula {
    if depth == 0 || rng.gen_bool(0.15) {
        return atom(rng, scope);
    }
    let fresh = BOUND_VARS.iter().find(|v| !scope.iter().any(|s| s == *v)).map(|s| s.to_string());
    let choice = rng.gen_range(0..if fresh.is_some() { 10 } else { 6 });
    match choice {
        0 => Formula::not(gen_rec(rng, depth - 1, scope)),
        1 => Formula::and(gen_rec(rng, depth - 1, scope), gen_rec(rng, depth - 1, scope)),
        2 => Formula::or(gen_rec(rng, depth - 1, scope), gen_rec(rng, depth - 1, scope)),
        3 => Formula::implies(gen_rec(rng, depth - 1, scope), gen_rec(rng, depth - 1, scope)),
        4 => Formula::iff(gen_rec(rng, depth - 1, scope), gen_rec(rng, depth - 1, scope)),
        5 => atom(rng, scope),
        _ => {
            let x = fresh.expect("checked");
            let y = pick(rng, scope).to_owned();
            let mut inner = scope.to_vec();
            inner.push(x.clone());
            match choice {
                6 => Formula::bounded_exists(x, y, gen_rec(rng, depth - 1, &inner)),
                7 => Formula::bounded_forall(x, y, gen_rec(rng, depth - 1, &inner)),
                // the expanded forms spend two extra levels on the guard
                8 if depth >= 2 => {
                    let body = gen_rec(rng, depth - 2, &inner);
                    if rng.gen_bool(0.5) {
                        Formula::exists(x.clone(), Formula::and(Formula::mem(x, y), body))
                    } else {
                        Formula::forall(x.clone(), Formula::implies(Formula::mem(x, y), body))
                    }
                }
                9 if depth >= 3 => {
                    let body = gen_rec(rng, depth - 3, &inner);
                    Formula::forall(x.clone(), Formula::or(Formula::not(Formula::mem(x, y)), body))
                }
                _ => Formula::bounded_exists(x, y, gen_rec(rng, depth - 1, &inner)),
            }
        }
    }
}

/// Any formula of depth at most `depth` over `x, y, z` and `u, v, w, t`,
/// quantifiers unrestricted.
pub fn gen_any(rng: &mut impl Rng, depth: usize) -> Formula {
    let vars: Vec<String> = FREE_VARS.iter().chain(BOUND_VARS.iter()).map(|s| s.to_string()).collect();
    gen_any_rec(rng, depth, &vars)
}

fn gen_any_rec(rng: &mut impl Rng, depth: usize, vars: &[String]) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        let (a, b) = (pick(rng, vars).to_owned(), pick(rng, vars).to_owned());
        return if rng.gen_bool(0.5) { Formula::mem(a, b) } else { Formula::eq(a, b) };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => Formula::not(gen_any_rec(rng, d, vars)),
        1 => Formula::and(gen_any_rec(rng, d, vars), gen_any_rec(rng, d, vars)),
        2 => Formula::or(gen_any_rec(rng, d, vars), gen_any_rec(rng, d, vars)),
        3 => Formula::implies(gen_any_rec(rng, d, vars), gen_any_rec(rng, d, vars)),
        4 => Formula::iff(gen_any_rec(rng, d, vars), gen_any_rec(rng, d, vars)),
        5 => Formula::exists(pick(rng, vars).to_owned(), gen_any_rec(rng, d, vars)),
        6 => Formula::forall(pick(rng, vars).to_owned(), gen_any_rec(rng, d, vars)),
        k => {
            // a bounded quantifier's variable differs from its bound
            let x = pick(rng, vars).to_owned();
            let others: Vec<String> = vars.iter().filter(|v| **v != x).cloned().collect();
            let y = pick(rng, &others).to_owned();
            let body = gen_any_rec(rng, d, vars);
            if k == 7 {
                Formula::bounded_exists(x, y, body)
            } else {
                Formula::bounded_forall(x, y, body)
            }
        }
    }
}

/// `∃z ∀w (w ∈ z ↔ w ⊆ x)`, with `⊆` spelled out as a bounded quantifier.
pub const POWER_SET_EXISTS: &str = "exists z (forall w (w in z <-> forall u in w (u in x)))";

// ---------------------------------------------------------------- HF sets

/// `HF(n)` decoded by repeated halving, without the library's constructor.
pub fn ackermann_children(n: u64) -> Vec<u64> {
    (0..64).filter(|i| n >> i & 1 == 1).collect()
}

/// Set order compared recursively: sets are compared by their largest
/// differing element. For hereditarily finite sets this is the order of
/// their Ackermann indices.
pub fn set_cmp(a: &HfSet, b: &HfSet) -> std::cmp::Ordering {
    let mut xs: Vec<&HfSet> = a.children().iter().collect();
    let mut ys: Vec<&HfSet> = b.children().iter().collect();
    xs.sort_by(|p, q| set_cmp(q, p));
    ys.sort_by(|p, q| set_cmp(q, p));
    for (x, y) in xs.iter().zip(&ys) {
        match set_cmp(x, y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    xs.len().cmp(&ys.len())
}

/// All `x` with `x ∈ D ⇒ ∀y ∈ x, y ∈ D` checked element by element.
pub fn brute_force_transitive(domain: &[HfSet]) -> bool {
    domain.iter().all(|x| x.children().iter().all(|y| domain.iter().any(|d| d == y)))
}

/// Transitive closure by breadth-first unfolding of membership.
pub fn bfs_closure(x: &HfSet) -> Vec<HfSet> {
    let mut seen: Vec<HfSet> = Vec::new();
    let mut queue: Vec<HfSet> = x.children().to_vec();
    while let Some(y) = queue.pop() {
        if !seen.contains(&y) {
            queue.extend(y.children().iter().cloned());
            seen.push(y);
        }
    }
    seen
}

/// `x` is an ordinal: transitive and linearly ordered by `∈`.
pub fn oracle_is_ordinal(x: &HfSet) -> bool {
    let xs = x.children();
    let transitive = xs.iter().all(|y| y.children().iter().all(|z| xs.contains(z)));
    let linear = xs
        .iter()
        .all(|a| xs.iter().all(|b| a == b || a.children().contains(b) || b.children().contains(a)));
    transitive && linear
}

// ---------------------------------------------------------------- integer lattices

pub type IRow = Vec<i128>;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Determinant by cofactor expansion.
pub fn det(m: &[IRow]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<IRow> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// `(r, d_r)`: the rank of the integer row matrix and the gcd of its
/// `r×r` minors, which is the index of the row lattice in its saturation.
pub fn determinantal(rows: &[IRow], cols: usize) -> (usize, i128) {
    for r in (1..=rows.len().min(cols)).rev() {
        let mut g = 0;
        for rs in combinations(rows.len(), r) {
            for cs in combinations(cols, r) {
                let sub: Vec<IRow> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g != 0 {
            return (r, g);
        }
    }
    (0, 1)
}

/// `z ∈ ℤ-span(rows)`: same rank and same determinantal divisor after
/// adding `z`.
pub fn in_integer_span(rows: &[IRow], z: &[i128]) -> bool {
    let cols = z.len();
    if z.iter().all(|&x| x == 0) {
        return true;
    }
    let (r, d) = determinantal(rows, cols);
    let mut ext = rows.to_vec();
    ext.push(z.to_vec());
    let (r2, d2) = determinantal(&ext, cols);
    r2 == r && d2 == d
}

/// `∃ n ∈ 1..=max_n : n·y ∈ ℤ-span(rows)`: the witness-equation form of
/// the closure.
pub fn in_closure_by_witness(rows: &[IRow], y: &[i128], max_n: i128) -> bool {
    (1..=max_n).any(|n| in_integer_span(rows, &y.iter().map(|x| n * x).collect::<Vec<_>>()))
}

/// Integer points of `[-b, b]^dim`.
pub fn grid(dim: usize, b: i128) -> Vec<IRow> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: IRow| {
                (-b..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

//! Acceptance suite: one PASS/FAIL line per criterion, with wall time
//! against its budget. Exits nonzero when any criterion fails.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use alephfree::formula::{is_delta0, parse_formula, relativize, Formula, Var};
use alephfree::group::*;
use alephfree::hf::{absoluteness_scan, evaluate, v_level, Assignment, CompiledFormula, HfSet, ModelDomain, Structure};
use alephfree::linalg::{hnf, snf, IntMatrix, RatVector};
use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rv(xs: &[i64]) -> RatVector {
    RatVector::from_ints(xs.iter().copied())
}

fn to_i128(x: &BigInt) -> i128 {
    i128::try_from(x).expect("entry fits in i128")
}

fn int_rows(a: &IntMatrix) -> Vec<IRow> {
    a.row_vecs().iter().map(|r| r.iter().map(to_i128).collect()).collect()
}

/// Integer rows for rational vectors after multiplying by `scale`.
fn scaled(vs: &[RatVector], scale: &BigInt) -> Vec<IRow> {
    vs.iter()
        .map(|v| v.to_integers_scaled(scale).expect("scale clears denominators").iter().map(to_i128).collect())
        .collect()
}

fn common_denominator<'a>(vs: impl IntoIterator<Item = &'a RatVector>) -> BigInt {
    vs.into_iter().fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, &v.denominator_lcm()))
}

// ---------------------------------------------------------------- criteria 1-3

/// Δ₀ corpus of the absoluteness and relativization criteria.
fn delta0_corpus(n: usize) -> Vec<Formula> {
    let mut r = rng(1);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let depth = r.gen_range(1..=4);
        let f = gen_delta0(&mut r, depth);
        if f.depth() <= 4 && f.free_variables().len() <= 3 && is_delta0(&f).verdict {
            out.push(f);
        }
    }
    out
}

/// Transitive pairs `M ⊆ N ⊆ V₄`: a seeded sample of proper inclusions
/// among transitive subdomains, plus the level pairs.
fn transitive_pairs(count: usize) -> Vec<(ModelDomain, ModelDomain)> {
    let v4 = v_level(4).unwrap();
    let subs = v4.transitive_subdomains().unwrap();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..subs.len() {
        for j in 0..subs.len() {
            if i != j && !subs[i].is_empty() && subs[i].is_subdomain_of(&subs[j]) {
                pairs.push((i, j));
            }
        }
    }
    let mut r = rng(2);
    pairs.shuffle(&mut r);
    let mut out = vec![(v_level(3).unwrap(), v4.clone()), (v_level(2).unwrap(), v4.clone())];
    out.extend(pairs.into_iter().take(count - 2).map(|(i, j)| (subs[i].clone(), subs[j].clone())));
    out
}

fn crit1_delta0_absoluteness() -> Check {
    let corpus = delta0_corpus(200);
    let pairs = transitive_pairs(12);
    let mut assignments = 0u64;
    let mut oracle_checked = 0u64;
    for (m, n) in &pairs {
        ensure!(m.is_transitive() && n.is_transitive() && m.is_subdomain_of(n), "bad pair {} {}", m.name(), n.name());
        for phi in &corpus {
            let r = absoluteness_scan(phi, m, n).map_err(|e| e.to_string())?;
            ensure!(r.failures.is_empty(), "{phi} fails between {} and {}: {:?}", m.name(), n.name(), r.failures[0]);
            assignments += r.assignments;
            let vars: Vec<String> = phi.free_variables().iter().map(|v| v.as_str().to_owned()).collect();
            let mut disagreement = None;
            for_each_assignment(&vars, m.elements(), |env| {
                if disagreement.is_some() {
                    return;
                }
                let mut e = env.clone();
                let in_m = oracle_eval(phi, m.elements(), &mut e);
                let in_n = oracle_eval(phi, n.elements(), &mut e);
                oracle_checked += 1;
                if in_m != in_n {
                    disagreement = Some(format!("{env:?}"));
                }
            });
            ensure!(disagreement.is_none(), "oracle disagreement for {phi}: {}", disagreement.unwrap());
        }
    }
    Ok(format!(
        "{} formulas x {} pairs, {assignments} scanned assignments, {oracle_checked} oracle re-checks, 0 failures",
        corpus.len(),
        pairs.len()
    ))
}

/// `V₃` plus the singletons of its elements: transitive, missing `P(2)`.
fn thin_model() -> ModelDomain {
    let v3 = v_level(3).unwrap();
    let extras: Vec<HfSet> = v3.elements().iter().map(|x| HfSet::singleton(x.clone())).collect();
    ModelDomain::closure_of("V3+singletons", v3.elements().iter().cloned().chain(extras))
}

fn crit2_power_set_witness() -> Check {
    let phi = parse_formula(POWER_SET_EXISTS).map_err(|e| e.to_string())?;
    let m = thin_model();
    let v4 = v_level(4).unwrap();
    ensure!(m.is_transitive() && m.is_subdomain_of(&v4) && m.len() < v4.len(), "model is not a proper transitive subdomain");
    let r = absoluteness_scan(&phi, &m, &v4).map_err(|e| e.to_string())?;
    ensure!(!r.failures.is_empty(), "no failing assignment");
    for f in &r.failures {
        let x = HfSet::decode(&f.assignment[&Var::new("x")].0);
        let mut env = HashMap::from([("x".to_owned(), x.clone())]);
        let a: Assignment = [(Var::new("x"), x.clone())].into();
        ensure!(!oracle_eval(&phi, m.elements(), &mut env), "oracle holds in M for x = {x}");
        ensure!(oracle_eval(&phi, v4.elements(), &mut env), "oracle fails in V4 for x = {x}");
        ensure!(evaluate(&phi, &m, &a) == Ok(false) && evaluate(&phi, &v4, &a) == Ok(true), "evaluator disagrees for x = {x}");
        ensure!(!m.contains(&x.power_set()) && v4.contains(&x.power_set()), "P({x}) membership does not explain failure");
    }
    let shown: Vec<String> = r.failures.iter().map(|f| f.assignment[&Var::new("x")].0.to_string()).collect();
    Ok(format!("|M| = {}, failing x = HF({}), each re-validated", m.len(), shown.join(", HF(") + ")"))
}

fn crit3_relativization() -> Check {
    let mut corpus = delta0_corpus(200);
    let mut r = rng(3);
    corpus.extend((0..200).map(|_| {
        let depth = r.gen_range(1..=4);
        gen_any(&mut r, depth)
    }));
    let v4 = v_level(4).unwrap();
    let structure = Structure::new(&v4);
    let ts: Vec<HfSet> = v4.elements().iter().filter(|t| t.is_transitive()).cloned().collect();
    let m = Var::new("M");
    let mut checks = 0u64;
    for phi in &corpus {
        let rel = relativize(phi, &m).map_err(|e| e.to_string())?;
        let compiled_rel = CompiledFormula::compile(&rel);
        let compiled = CompiledFormula::compile(phi);
        let vars: Vec<String> = phi.free_variables().iter().map(|v| v.as_str().to_owned()).collect();
        for t in &ts {
            let dom = ModelDomain::new(format!("HF({})", t.index()), t.children().iter().cloned());
            let inner = Structure::new(&dom);
            let mut bad = None;
            for_each_assignment(&vars, dom.elements(), |env| {
                if bad.is_some() {
                    return;
                }
                let mut a: Assignment = env.iter().map(|(k, v)| (Var::new(k.as_str()), v.clone())).collect();
                let lhs_env = alephfree::hf::resolve_assignment(&inner, &compiled, &a).expect("assignment inside T");
                let lhs = inner.eval(&compiled, &lhs_env);
                a.insert(m.clone(), t.clone());
                let rhs_env = alephfree::hf::resolve_assignment(&structure, &compiled_rel, &a).expect("assignment inside V4");
                let rhs = structure.eval(&compiled_rel, &rhs_env);
                let mut e = env.clone();
                let oracle = oracle_eval(phi, dom.elements(), &mut e);
                checks += 1;
                if lhs != rhs || lhs != oracle {
                    bad = Some(format!("{env:?}: in T {lhs}, relativized in V4 {rhs}, oracle {oracle}"));
                }
            });
            ensure!(bad.is_none(), "{phi} with M = {t}: {}", bad.unwrap());
        }
    }
    Ok(format!("{} formulas x {} transitive T in V4, {checks} assignments, all agree", corpus.len(), ts.len()))
}

// ---------------------------------------------------------------- criterion 4

/// Determinantal divisors `d₁, …, d_r` (gcd of `k×k` minors).
fn determinantal_divisors(rows: &[IRow], cols: usize) -> Vec<i128> {
    let mut out = Vec::new();
    for k in 1..=rows.len().min(cols) {
        let mut g: i128 = 0;
        for rs in combinations(rows.len(), k) {
            for cs in combinations(cols, k) {
                let sub: Vec<IRow> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                let d = det(&sub);
                g = num_integer::gcd(g, d);
            }
        }
        if g == 0 {
            break;
        }
        out.push(g);
    }
    out
}

fn random_unimodular(r: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..3 * n {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        match r.gen_range(0..3) {
            0 => m.swap(a, b),
            1 => m[a].iter_mut().for_each(|x| *x = -*x),
            _ if a != b => {
                let q = r.gen_range(-2..=2);
                for j in 0..n {
                    m[a][j] += q * m[b][j];
                }
            }
            _ => {}
        }
    }
    IntMatrix::from_rows(n, m.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()).unwrap()
}

fn check_hermite_shape(h: &IntMatrix, pivots: &[usize]) -> Result<(), String> {
    for (i, &c) in pivots.iter().enumerate() {
        ensure!(h[(i, c)].is_positive(), "pivot {i} not positive");
        ensure!((0..c).all(|j| h[(i, j)].is_zero()), "row {i} has entries left of its pivot");
        ensure!(i == 0 || pivots[i - 1] < c, "pivots not increasing");
        for k in 0..i {
            ensure!(!h[(k, c)].is_negative() && h[(k, c)] < h[(i, c)], "entry above pivot {i} not reduced");
        }
    }
    ensure!((pivots.len()..h.rows()).all(|i| h.row(i).iter().all(Zero::is_zero)), "nonzero row after the pivots");
    Ok(())
}

fn crit4_normal_forms() -> Check {
    let mut r = rng(4);
    let mut deficient = 0;
    for trial in 0..1000 {
        let (rows, cols) = (r.gen_range(1..=6), r.gen_range(1..=6));
        let mut m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-99..=99)).collect()).collect();
        if rows >= 2 && r.gen_bool(0.2) {
            // force a dependency: last row = a·row0 + b·row1
            let (a, b) = (r.gen_range(-2..=2), r.gen_range(-2..=2));
            m[rows - 1] = (0..cols).map(|j| (a * m[0][j] + b * m[1][j]).clamp(-99, 99)).collect();
            deficient += 1;
        }
        let a = IntMatrix::from_rows(cols, m.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap();
        let s = snf(&a);
        let ctx = |what: &str| format!("matrix #{trial} {m:?}: {what}");
        ensure!(s.u.checked_mul(&a).unwrap().checked_mul(&s.v).unwrap() == s.d, "{}", ctx("U·A·V != D"));
        ensure!(s.u.is_unimodular() && s.v.is_unimodular(), "{}", ctx("transform not unimodular"));
        ensure!(s.v.checked_mul(&s.v_inv).unwrap() == IntMatrix::identity(cols), "{}", ctx("V·V⁻¹ != I"));
        for i in 0..rows {
            for j in 0..cols {
                ensure!(i == j || s.d[(i, j)].is_zero(), "{}", ctx("D not diagonal"));
            }
        }
        let inv = s.invariant_factors();
        ensure!(inv.iter().all(Signed::is_positive), "{}", ctx("non-positive invariant factor"));
        ensure!(inv.windows(2).all(|p| (&p[1] % &p[0]).is_zero()), "{}", ctx("divisibility chain broken"));
        let dk = determinantal_divisors(&int_rows(&a), cols);
        ensure!(dk.len() == inv.len(), "{}", ctx("rank differs from minor rank"));
        let mut prod = BigInt::one();
        for (k, d) in inv.iter().enumerate() {
            prod *= d;
            ensure!(prod == BigInt::from(dk[k]), "{}", ctx("invariant factors disagree with determinantal divisors"));
        }

        let h = hnf(&a);
        ensure!(h.u.checked_mul(&a).unwrap() == h.h, "{}", ctx("U·A != H"));
        ensure!(h.u.is_unimodular(), "{}", ctx("HNF transform not unimodular"));
        check_hermite_shape(&h.h, &h.pivots).map_err(|e| ctx(&e))?;
        let w = random_unimodular(&mut r, rows);
        ensure!(hnf(&w.checked_mul(&a).unwrap()).h == h.h, "{}", ctx("HNF changed under unimodular left multiplication"));
    }
    Ok(format!("1000 matrices ({deficient} with forced dependencies), SNF and HNF identities exact"))
}

// ---------------------------------------------------------------- criterion 5

const B: i64 = 4;
const SIDE: usize = (2 * B + 1) as usize;
const NPTS: usize = SIDE * SIDE * SIDE;

fn point(i: usize) -> [i64; 3] {
    [(i / (SIDE * SIDE)) as i64 - B, ((i / SIDE) % SIDE) as i64 - B, (i % SIDE) as i64 - B]
}

fn index(p: [i64; 3]) -> usize {
    ((p[0] + B) as usize * SIDE + (p[1] + B) as usize) * SIDE + (p[2] + B) as usize
}

/// A signed coordinate permutation `x ↦ (s₀·x[p₀], s₁·x[p₁], s₂·x[p₂])`.
#[derive(Clone, Copy)]
struct Symmetry {
    perm: [usize; 3],
    signs: [i64; 3],
}

impl Symmetry {
    fn all() -> Vec<Symmetry> {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        perms
            .iter()
            .flat_map(|&perm| {
                (0..8).map(move |m| Symmetry { perm, signs: std::array::from_fn(|k| if m >> k & 1 == 1 { -1 } else { 1 }) })
            })
            .collect()
    }

    fn apply(&self, v: &RatVector) -> RatVector {
        let e = v.entries();
        RatVector::new((0..3).map(|k| &e[self.perm[k]] * BigRational::from_integer(self.signs[k].into())).collect())
    }

    /// The action on grid indices.
    fn table(&self) -> Vec<usize> {
        (0..NPTS)
            .map(|i| {
                let x = point(i);
                index(std::array::from_fn(|k| self.signs[k] * x[self.perm[k]]))
            })
            .collect()
    }
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// Checks the rank bound, the oracle rank and `⟨S⟩_* = ⟨S′⟩_*` for every
/// ordering of `S`. Returns the library closure.
fn check_subset(g: &LatticeGroup, idx: &[usize]) -> Result<LatticeGroup, String> {
    let pts: Vec<[i64; 3]> = idx.iter().map(|&i| point(i)).collect();
    let s = GeneratorSet::new(pts.iter().map(|p| rv(p)));
    let c = pure_closure(g, &s).map_err(|e| e.to_string())?;
    let rk = rank0(&c);
    let irows: Vec<IRow> = pts.iter().map(|p| p.iter().map(|&x| x as i128).collect()).collect();
    let (oracle_rank, _) = determinantal(&irows, 3);
    ensure!(rk <= idx.len(), "rank bound violated for {pts:?}: {rk}");
    ensure!(rk == oracle_rank, "rank of closure {rk} != oracle rank {oracle_rank} for {pts:?}");
    let orderings: Vec<Vec<usize>> = if oracle_rank == idx.len() {
        vec![(0..idx.len()).collect()]
    } else {
        permutations(idx.len())
    };
    for ord in orderings {
        let s_ord = GeneratorSet::new(ord.iter().map(|&k| rv(&pts[k])));
        let mi = max_independent_subset(&s_ord);
        ensure!(mi.subset.len() == oracle_rank, "independent subset of {pts:?} has size {}", mi.subset.len());
        if oracle_rank == idx.len() {
            ensure!(mi.subset == s_ord && mi.multiplier.is_one(), "independent {pts:?} was not kept whole");
            continue;
        }
        let c2 = pure_closure(g, &mi.subset).map_err(|e| e.to_string())?;
        ensure!(c2 == c, "closure of independent subset differs for {pts:?} (order {ord:?})");
    }
    Ok(c)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    match n {
        0 => vec![vec![]],
        _ => permutations(n - 1)
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    q
                })
            })
            .collect(),
    }
}

fn crit5_rank_bound_grid() -> Check {
    let g = LatticeGroup::standard(3);
    let syms = Symmetry::all();
    let tables: Vec<Vec<usize>> = syms.iter().map(Symmetry::table).collect();
    check_subset(&g, &[])?;
    let mut checked = 1usize;
    for a in 0..NPTS {
        check_subset(&g, &[a])?;
        checked += 1;
        for b in a + 1..NPTS {
            check_subset(&g, &[a, b])?;
            checked += 1;
        }
    }

    // |S| = 3: one representative per orbit of the signed permutations. The
    // least element of a canonical triple is least in its own point orbit.
    // least index in each point orbit
    let orbit_min: Vec<usize> = (0..NPTS).map(|i| tables.iter().map(|t| t[i]).min().unwrap()).collect();

    let mut reps = 0usize;
    let mut covered: u64 = 0;
    for a in (0..NPTS).filter(|&a| orbit_min[a] == a) {
        for b in a + 1..NPTS {
            if orbit_min[b] < a {
                continue;
            }
            'c: for c in b + 1..NPTS {
                if orbit_min[c] < a {
                    continue;
                }
                let me = [a, b, c];
                let mut images: Vec<[usize; 3]> = Vec::with_capacity(48);
                for t in &tables {
                    let img = sorted3([t[a], t[b], t[c]]);
                    if img < me {
                        continue 'c;
                    }
                    images.push(img);
                }
                images.sort_unstable();
                images.dedup();
                covered += images.len() as u64;
                reps += 1;
                check_subset(&g, &me)?;
            }
        }
    }
    let total = (NPTS as u64) * (NPTS as u64 - 1) * (NPTS as u64 - 2) / 6;
    ensure!(covered == total, "orbits cover {covered} of {total} triples");

    // closure and independent-subset selection commute with the symmetries
    let mut r = rng(5);
    for _ in 0..3000 {
        let idx = [r.gen_range(0..NPTS), r.gen_range(0..NPTS), r.gen_range(0..NPTS)];
        let k = r.gen_range(0..48);
        let (t, sym) = (&tables[k], syms[k]);
        let act = |v: &RatVector| sym.apply(v);
        let s = GeneratorSet::new(idx.iter().map(|&i| rv(&point(i))));
        let gs = GeneratorSet::new(idx.iter().map(|&i| rv(&point(t[i]))));
        let c = pure_closure(&g, &s).map_err(|e| e.to_string())?;
        let moved = LatticeGroup::new(3, c.basis().iter().map(act).collect()).unwrap();
        ensure!(pure_closure(&g, &gs).map_err(|e| e.to_string())? == moved, "closure not equivariant for {idx:?}");
        let mi = max_independent_subset(&s);
        let mi_g = max_independent_subset(&gs);
        ensure!(mi_g.subset == GeneratorSet::new(mi.subset.elements().iter().map(act)), "selection not equivariant");
    }
    Ok(format!(
        "{checked} subsets of size <= 2 exhaustively, {reps} orbit representatives covering all {total} triples, 3000 equivariance checks"
    ))
}

// ---------------------------------------------------------------- criterion 6

struct ClosureInstance {
    /// generators of `G` (`e_i / d_i`)
    denominators: Vec<i64>,
    /// `S` in `G`-coordinates
    coords: Vec<Vec<i64>>,
}

impl ClosureInstance {
    fn group(&self) -> LatticeGroup {
        let n = self.denominators.len();
        let gens = (0..n)
            .map(|i| RatVector::new((0..n).map(|j| BigRational::new(BigInt::from(i64::from(i == j)), self.denominators[i].into())).collect()))
            .collect();
        LatticeGroup::new(n, gens).unwrap()
    }

    fn element(&self, c: &[i64]) -> RatVector {
        RatVector::new(c.iter().zip(&self.denominators).map(|(&x, &d)| BigRational::new(x.into(), d.into())).collect())
    }
}

fn crit6_closure_oracle() -> Check {
    let mut r = rng(6);
    let (mut kept, mut attempts, mut points, mut rational) = (0usize, 0usize, 0usize, 0usize);
    while kept < 600 {
        attempts += 1;
        let n = r.gen_range(1..=3);
        let denominators: Vec<i64> = if kept % 2 == 0 { vec![1; n] } else { (0..n).map(|_| r.gen_range(1..=4)).collect() };
        let coords: Vec<Vec<i64>> = (0..r.gen_range(1..=3)).map(|_| (0..n).map(|_| r.gen_range(-5..=5)).collect()).collect();
        let irows: Vec<IRow> = coords.iter().map(|c| c.iter().map(|&x| x as i128).collect()).collect();
        let (_, d) = determinantal(&irows, n);
        if d > 20 {
            continue;
        }
        kept += 1;
        let inst = ClosureInstance { denominators, coords };
        if inst.denominators.iter().any(|&d| d > 1) {
            rational += 1;
        }
        let g = inst.group();
        let s = GeneratorSet::new(inst.coords.iter().map(|c| inst.element(c)));
        let c = pure_closure(&g, &s).map_err(|e| e.to_string())?;
        ensure!(g.contains_group(&c), "closure escapes G");
        let bound = if n == 3 { 3 } else { 5 };
        for y in grid(n, bound) {
            let yl: Vec<i64> = y.iter().map(|&t| t as i64).collect();
            let lib = c.contains(&inst.element(&yl));
            let oracle = in_closure_by_witness(&irows, &y, 20);
            points += 1;
            ensure!(lib == oracle, "G = diag(1/{:?}), S = {:?}, y = {yl:?}: library {lib}, oracle {oracle}", inst.denominators, inst.coords);
        }
    }
    Ok(format!("{kept} instances ({rational} in rational lattices, {attempts} drawn), {points} membership queries agree"))
}

// ---------------------------------------------------------------- criterion 7

fn crit7_harnesses() -> Check {
    let seed = 2026;
    let t = run_transitivity_harness(500, seed).map_err(|e| e.to_string())?;
    let q = run_quotient_harness(500, seed).map_err(|e| e.to_string())?;
    ensure!(t.violations == 0, "extension harness: {:?}", t.failures);
    ensure!(q.violations == 0, "splitting harness: {:?}", q.failures);

    // Replay the pure-splitting instances and check each complement without
    // the library's own verifier.
    let mut r = rng(seed);
    let (mut premises, mut ext_premises) = (0usize, 0usize);
    for trial in 0..500 {
        let (g, h) = random_instance(&mut r);
        if check_transitivity_theorem(&h, &g).map_err(|e| e.to_string())?.outcome == Outcome::PremiseSatisfied {
            ext_premises += 1;
            let scale = common_denominator(g.generators());
            let (rank_g, _) = determinantal(&scaled(g.generators(), &scale), g.ambient_dim());
            let (rank_h, _) = determinantal(&scaled(h.generators(), &scale), g.ambient_dim());
            let qt = quotient_presentation(&g, &h).map_err(|e| e.to_string())?;
            ensure!(rank_h + qt.torsion_free_rank() == rank_g, "trial {trial}: ranks do not add up");
        }
        if !is_pure(&h, &g).map_err(|e| e.to_string())?.pure {
            continue;
        }
        premises += 1;
        let k = complement_summand(&g, &h).map_err(|e| e.to_string())?;
        let cob = int_rows(&k.change_of_basis);
        ensure!(cob.len() == cob.first().map_or(0, Vec::len), "trial {trial}: change of basis not square");
        ensure!(det(&cob).abs() == 1, "trial {trial}: determinant {}", det(&cob));
        let hk: Vec<RatVector> = h.basis().into_iter().chain(k.complement.basis()).collect();
        let scale = common_denominator(g.generators().iter().chain(&hk));
        let (g_rows, hk_rows) = (scaled(g.generators(), &scale), scaled(&hk, &scale));
        let (rank_g, _) = determinantal(&g_rows, g.ambient_dim());
        ensure!(hk.len() == rank_g, "trial {trial}: {} basis vectors for rank {rank_g}", hk.len());
        ensure!(hk_rows.iter().all(|z| in_integer_span(&g_rows, z)), "trial {trial}: H + K leaves G");
        ensure!(g_rows.iter().all(|z| in_integer_span(&hk_rows, z)), "trial {trial}: H + K misses part of G");
        let qt = quotient_presentation(&g, &h).map_err(|e| e.to_string())?;
        ensure!(qt.is_free(), "trial {trial}: quotient by a pure subgroup has torsion");
    }
    ensure!(premises == q.premise_satisfied, "replayed {premises} pure instances, harness saw {}", q.premise_satisfied);
    ensure!(ext_premises == t.premise_satisfied, "replayed {ext_premises} free-quotient instances, harness saw {}", t.premise_satisfied);
    Ok(format!(
        "extension: {} premise / {} vacuous, splitting: {} premise / {} vacuous ({} with torsion), 0 violations, {premises} complements re-verified",
        t.premise_satisfied, t.vacuous, q.premise_satisfied, q.vacuous, q.vacuous_with_torsion
    ))
}

// ---------------------------------------------------------------- criterion 8

fn crit8_certification() -> Check {
    let free = LevelledGroup::family(Family::FreeOmega);
    let r = pontryagin_certify(&free, 5, 3).map_err(|e| e.to_string())?;
    ensure!(r.verdict == Verdict::CertifiedToDepth, "free-omega not certified: {:?}", r.witness);
    ensure!(r.summands_verified == r.subsets_checked, "only {} of {} summands", r.summands_verified, r.subsets_checked);
    let mut notes = vec![format!("free-omega: {} subsets certified", r.subsets_checked)];
    for (family, depth, size) in [(Family::RationalsFactorial, 6, 2), (Family::DyadicRationals, 6, 2)] {
        let g = LevelledGroup::family(family);
        let r = pontryagin_certify(&g, depth, size).map_err(|e| e.to_string())?;
        ensure!(r.verdict == Verdict::NonFreeWitness, "{family} certified");
        let w = r.witness.ok_or("verdict without witness")?;
        verify_witness(&g, depth, &w).map_err(|e| format!("{family}: {e}"))?;
        // the serialized witness re-validates on its own
        let text = serde_json::to_string(&w).map_err(|e| e.to_string())?;
        let back: Witness = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        verify_witness(&g, depth, &back).map_err(|e| format!("{family} after round trip: {e}"))?;
        let kind = match &w.evidence {
            Evidence::IndexEscalation { run_length, .. } => format!("index escalation over {run_length} levels"),
            Evidence::InfiniteHeight { prime, divisor_sequence, .. } => {
                format!("{prime}-height witness with {} divisions", divisor_sequence.len())
            }
        };
        notes.push(format!("{family}: {kind}"));
    }
    let tampered = {
        let g = LevelledGroup::family(Family::RationalsFactorial);
        let mut w = pontryagin_certify(&g, 6, 1).unwrap().witness.unwrap();
        let mut forged = w.clone();
        if let Evidence::IndexEscalation { chain, .. } = &mut w.evidence {
            chain[0].index_in_next = Some(BigInt::from(7));
        }
        if let Evidence::IndexEscalation { run_length, .. } = &mut forged.evidence {
            *run_length += 10;
        }
        verify_witness(&g, 6, &w).is_err() && verify_witness(&g, 6, &forged).is_err()
    };
    ensure!(tampered, "tampered witness accepted");
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------- criterion 9

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn crit9_determinism() -> Check {
    let (z2, s20, h11, h20, tc) = (fixture("z2.json"), fixture("s_20.json"), fixture("h_11.json"), fixture("h_20.json"), fixture("tc_model.json"));
    let power_set = "exists y (forall z (z in y <-> (forall w in z (w in x))))";
    let invocations: Vec<Vec<&str>> = vec![
        vec!["formula", "parse", "--formula", "exists y (forall z (z in y <-> z in x))"],
        vec!["formula", "delta0", "--formula", "forall x in y (x = x)"],
        vec!["formula", "relativize", "--formula", "exists x (x = y)", "--model-var", "M"],
        vec!["formula", "eval", "--formula", "forall z in x (z in y)", "--model", "V:3", "--assign", "x=1", "--assign", "y=3"],
        vec!["formula", "scan", "--formula", power_set, "--M", &tc, "--N", "V:4"],
        vec!["formula", "scan", "--formula", "forall z in x (z in y)", "--M", "V:3", "--N", "V:4"],
        vec!["group", "hnf", "--matrix", "FIXTURE:m_2468.json"],
        vec!["group", "snf", "--matrix", "FIXTURE:diag_64.json"],
        vec!["group", "pure-closure", "--group", &z2, "--set", &s20],
        vec!["group", "purity", "--group", &z2, "--subgroup", &h20],
        vec!["group", "quotient", "--group", &z2, "--subgroup", &h20],
        vec!["group", "complement", "--group", &z2, "--subgroup", &h11],
        vec!["group", "freeness", "--group", "FIXTURE:z2_mod_20.json"],
        vec!["group", "certify", "--family", "free-omega", "--depth", "5", "--size", "3"],
        vec!["group", "certify", "--family", "rationals-factorial", "--depth", "6", "--size", "1"],
        vec!["group", "certify", "--family", "dyadic-rationals", "--depth", "6", "--size", "2"],
        vec!["group", "check-thm42", "--trials", "500", "--seed", "7"],
        vec!["group", "check-thm43", "--trials", "500", "--seed", "7"],
    ];
    let mut seen = BTreeSet::new();
    for args in &invocations {
        let resolved: Vec<String> = args
            .iter()
            .map(|a| a.strip_prefix("FIXTURE:").map_or_else(|| a.to_string(), fixture))
            .collect();
        let once = || Command::new(env!("CARGO_BIN_EXE_alephfree")).args(&resolved).output().map_err(|e| e.to_string());
        let (a, b) = (once()?, once()?);
        let code = a.status.code().unwrap_or(-1);
        ensure!(code == 0 || code == 1, "{args:?} exited {code}: {}", String::from_utf8_lossy(&a.stderr));
        ensure!(serde_json::from_slice::<serde_json::Value>(&a.stdout).is_ok(), "{args:?} printed non-JSON");
        ensure!(a.stdout == b.stdout && a.status == b.status, "{args:?} differs between runs");
        seen.insert(resolved.join(" "));
    }
    Ok(format!("{} invocations byte-identical across reruns", seen.len()))
}

// ---------------------------------------------------------------- driver

fn main() -> ExitCode {
    let criteria: [(&str, Option<u64>, fn() -> Check); 9] = [
        ("delta0 absoluteness over transitive pairs in V4", Some(60), crit1_delta0_absoluteness),
        ("power-set non-absoluteness witness", Some(10), crit2_power_set_witness),
        ("relativization semantics over transitive T in V4", Some(120), crit3_relativization),
        ("HNF/SNF algebra on 1000 random matrices", Some(30), crit4_normal_forms),
        ("closure rank bound and independent-subset equality on the Z^3 grid", Some(60), crit5_rank_bound_grid),
        ("pure closure against witness enumeration", Some(60), crit6_closure_oracle),
        ("extension and pure-splitting harnesses", Some(60), crit7_harnesses),
        ("certification smoke tests", Some(30), crit8_certification),
        ("CLI determinism", None, crit9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = t.elapsed();
        let over = budget.is_some_and(|b| elapsed > Duration::from_secs(b));
        let budget_text = budget.map_or_else(|| "no budget".to_owned(), |b| format!("{b} s"));
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget_text} budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} criterion {}: {name} [{:.1} s / {budget_text}] {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

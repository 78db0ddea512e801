//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Criteria 1 to 7 run twice, on a one-thread and on
//! a four-thread pool, and their reports must agree byte for byte.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use dgcalc_cli::run;
use dgcalc_core::bar::{hochschild_via_adj_bar, nested_safe_bound, BarComplex, HochschildComplex, SafeBound};
use dgcalc_core::{
    compose, diagonal, fixtures, hom_cx, nat_complex, nerve, random, rank, safe_degree_bound, segal_check,
    tensor_cat, Bimodule, DgCategory, Field, SegalVerdict,
};
use rand::Rng;

/// Wall-clock limits. Exactness criteria have no tolerance.
const BAR_SQUARES_LIMIT: Duration = Duration::from_secs(60);
const KNOWN_VALUES_LIMIT: Duration = Duration::from_secs(30);
const BENCH_RANK_LIMIT: Duration = Duration::from_secs(2);
const PARALLEL_THREADS: usize = 4;

struct Check {
    pass: bool,
    detail: String,
    /// Deterministic transcript compared across runs.
    report: String,
}

impl Check {
    fn new(pass: bool, detail: impl Into<String>, report: String) -> Self {
        Check {
            pass,
            detail: detail.into(),
            report,
        }
    }
}

fn gf(p: u32) -> Field {
    Field::new(p).unwrap()
}

fn top(bound: SafeBound, cap: i64) -> i64 {
    match bound {
        SafeBound::UpTo(t) => t.min(cap),
        SafeBound::Everywhere => cap,
        SafeBound::NoFiniteBound => -1,
    }
}

/// Small random inputs: a unital category with at most `objects` objects
/// and `count` bimodules over it, resampled until every piece stays within
/// `max_dim` generators in total.
fn small_inputs<R: Rng>(rng: &mut R, field: Field, objects: usize, count: usize, max_dim: usize) -> (Arc<DgCategory>, Vec<Arc<Bimodule>>) {
    loop {
        let cat = Arc::new(random::category(rng, field, objects));
        let vs: Vec<Arc<Bimodule>> = (0..count).map(|_| Arc::new(random::bimodule(rng, &cat))).collect();
        if vs.iter().all(|v| v.total_dim() <= max_dim) {
            return (cat, vs);
        }
    }
}

fn bar_squares() -> Check {
    let start = Instant::now();
    let mut rng = random::seeded(1);
    let mut report = String::new();
    let mut failures = Vec::new();
    let trunc = 5;
    for k in 0..200 {
        let field = gf([2, 3][k % 2]);
        let cat = Arc::new(random::category(&mut rng, field, 3));
        let v1 = Arc::new(random::bimodule(&mut rng, &cat));
        let v2 = Arc::new(random::bimodule(&mut rng, &cat));
        let n = cat.n_objects();
        let (a, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let bar = BarComplex::new(v1.clone(), v2.clone(), a, c, trunc).unwrap();
        let lo = v1.min_degree().unwrap_or(0) + v2.min_degree().unwrap_or(0);
        // words have at most 3 + 3 + 3 * trunc internal degrees above `lo`
        let max_t = (lo..=lo + 6 + 3 * trunc as i64).filter(|&t| bar.total_dim(t) > 0).max().unwrap_or(lo);
        let mut ok = true;
        // each differential is built once and reused for the next product
        let mut below = bar.total_differential(lo);
        for t in lo + 1..=max_t + 1 {
            let d = bar.total_differential(t);
            ok &= below.mul(&d).unwrap().is_zero();
            below = d;
        }
        for deg in lo..=max_t {
            let mut below = bar.horizontal(deg, 1);
            for j in 2..=trunc {
                let h = bar.horizontal(deg, j);
                ok &= below.mul(&h).unwrap().is_zero();
                below = h;
            }
        }
        writeln!(report, "fixture {k} p {} objects {n} slot {a}|{c} degrees {lo}..{max_t} {}", field.characteristic(), if ok { "zero" } else { "nonzero" }).unwrap();
        if !ok {
            failures.push(k);
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < BAR_SQUARES_LIMIT;
    Check::new(pass, format!("200 fixtures, failures {failures:?}, {:.1} s", elapsed.as_secs_f64()), report)
}

fn unit_law() -> Check {
    let mut rng = random::seeded(2);
    let mut report = String::new();
    let mut failures = Vec::new();
    let trunc = 6;
    for k in 0..50 {
        let field = gf([2, 3][k % 2]);
        let (cat, vs) = small_inputs(&mut rng, field, 2, 1, 24);
        let v = vs[0].clone();
        let d = Arc::new(diagonal(&cat));
        let t_hi = top(safe_degree_bound(&v, &d, trunc), 5);
        let n = cat.n_objects();
        for a in 0..n {
            for c in 0..n {
                let bar = BarComplex::new(v.clone(), d.clone(), a, c, trunc).unwrap();
                let composed = bar.betti_range(0..=t_hi);
                let original: Vec<usize> = (0..=t_hi).map(|t| v.slot(a, c).betti(t)).collect();
                writeln!(report, "fixture {k} slot {a}|{c} composed {composed:?} original {original:?}").unwrap();
                if composed != original {
                    failures.push((k, a, c));
                }
            }
        }
    }
    Check::new(failures.is_empty(), format!("50 fixtures, failures {failures:?}"), report)
}

fn routes_agree() -> Check {
    let f = Field::GF2;
    let trunc = 8;
    let cats = [
        ("unitK", fixtures::unit_k(f)),
        ("dual", fixtures::dual(f)),
        ("a2", fixtures::a2(f)),
        ("dual⊗dual", tensor_cat(&fixtures::dual(f), &fixtures::dual(f)).unwrap()),
    ];
    let mut report = String::new();
    let mut pass = true;
    for (name, cat) in cats {
        let direct = HochschildComplex::new(Arc::new(cat.clone()), trunc).unwrap();
        let via = hochschild_via_adj_bar(&cat, trunc).unwrap();
        let covered = (0..=4).all(|t| direct.safe_bound().covers(t) && via.safe_bound().covers(t));
        let (x, y) = (direct.betti_range(0..=4), via.betti_range(0..=4));
        writeln!(report, "{name} direct {x:?} via adj {y:?}").unwrap();
        pass &= covered && x == y;
    }
    Check::new(pass, "unitK, dual, a2, dual⊗dual at degrees 0..4", report)
}

fn known_values() -> Check {
    let start = Instant::now();
    let f = Field::GF2;
    let trunc = 6;
    let hh = |cat: DgCategory, hi: i64| HochschildComplex::new(Arc::new(cat), trunc).unwrap().betti_range(0..=hi);
    let unit = hh(fixtures::unit_k(f), 4);
    let dual = hh(fixtures::dual(f), 4);
    let a2 = hh(fixtures::a2(f), 3);
    let dual_oracle: Vec<usize> = (0..=4).map(|n| oracle::dual_hh_periodic(2, n)).collect();
    let a2_oracle: Vec<usize> = (0..=3).map(|n| oracle::Algebra::a2().hh(2, n)).collect();
    let elapsed = start.elapsed();
    let report = format!("unitK {unit:?}\ndual {dual:?} oracle {dual_oracle:?}\na2 {a2:?} oracle {a2_oracle:?}\n");
    let pass = unit == [1, 0, 0, 0, 0]
        && dual == dual_oracle
        && dual == [2, 2, 2, 2, 2]
        && a2 == a2_oracle
        && a2 == [2, 0, 0, 0]
        && elapsed < KNOWN_VALUES_LIMIT;
    Check::new(pass, format!("{:.1} s", elapsed.as_secs_f64()), report)
}

fn associativity() -> Check {
    let mut rng = random::seeded(5);
    let mut report = String::new();
    let mut failures = Vec::new();
    let mut compared = 0;
    let trunc = 5;
    for k in 0..20 {
        let field = gf([2, 3][k % 2]);
        let (cat, vs) = small_inputs(&mut rng, field, 2, 3, 6);
        let (v1, v2, v3) = (&vs[0], &vs[1], &vs[2]);
        let v12 = Arc::new(compose(v1, v2, trunc).unwrap());
        let v23 = Arc::new(compose(v2, v3, trunc).unwrap());
        let left_bound = nested_safe_bound(safe_degree_bound(&v12, v3, trunc), safe_degree_bound(v1, v2, trunc), v3.min_degree());
        let right_bound = nested_safe_bound(safe_degree_bound(v1, &v23, trunc), safe_degree_bound(v2, v3, trunc), v1.min_degree());
        let t_hi = top(left_bound.min(right_bound), 4);
        let n = cat.n_objects();
        for a in 0..n {
            for d in 0..n {
                let left = BarComplex::new(v12.clone(), v3.clone(), a, d, trunc).unwrap().betti_range(0..=t_hi);
                let right = BarComplex::new(v1.clone(), v23.clone(), a, d, trunc).unwrap().betti_range(0..=t_hi);
                compared += left.len();
                writeln!(report, "triple {k} slot {a}|{d} left {left:?} right {right:?}").unwrap();
                if left != right {
                    failures.push((k, a, d));
                }
            }
        }
    }
    Check::new(
        failures.is_empty() && compared > 0,
        format!("20 triples, {compared} degree comparisons, failures {failures:?}"),
        report,
    )
}

fn kunneth() -> Check {
    let f = Field::GF2;
    let trunc = 6;
    let named = || [("unitK", fixtures::unit_k(f)), ("dual", fixtures::dual(f)), ("a2", fixtures::a2(f))];
    let mut report = String::new();
    let mut pass = true;
    for (na, a) in named() {
        for (nb, b) in named() {
            let ab = tensor_cat(&a, &b).unwrap();
            let hh = |c: &DgCategory| HochschildComplex::new(Arc::new(c.clone()), trunc).unwrap();
            let (ha, hb, hab) = (hh(&a), hh(&b), hh(&ab));
            let t_hi = top(ha.safe_bound().min(hb.safe_bound()).min(hab.safe_bound()), 4);
            let expected = oracle::convolve(&ha.betti_range(0..=t_hi), &hb.betti_range(0..=t_hi));
            let got = hab.betti_range(0..=t_hi);
            writeln!(report, "{na}⊗{nb} {got:?} convolution {expected:?}").unwrap();
            pass &= t_hi >= 0 && got == expected;
        }
    }
    Check::new(pass, "all pairs from unitK, dual, a2", report)
}

fn segal() -> Check {
    let mut rng = random::seeded(7);
    let mut report = String::new();
    let mut failures = Vec::new();
    for k in 0..100 {
        let cat = random::finite_category(&mut rng);
        let x = nerve(&cat, 4);
        for m in 0..=4 {
            for n in 0..=4 - m {
                let v = segal_check(&x, m, n).unwrap();
                if !v.holds() {
                    failures.push((k, m, n));
                    writeln!(report, "category {k} ({m}, {n}) {v}").unwrap();
                }
            }
        }
        writeln!(report, "category {k} morphisms {} checked", cat.n_morphisms()).unwrap();
    }
    let spine = fixtures::spine_of_triangle();
    let verdict = segal_check(&spine, 1, 1).unwrap();
    writeln!(report, "spine (1, 1) {verdict}").unwrap();
    let witness = matches!(&verdict, SegalVerdict::NotSurjective { front, back } if front == "f" && back == "g");
    Check::new(
        failures.is_empty() && witness,
        format!("100 nerves, failures {failures:?}, spine witness {verdict}"),
        report,
    )
}

fn hom_conventions() -> Check {
    let mut rng = random::seeded(8);
    let mut failures = Vec::new();
    for k in 0..100 {
        let field = gf([2, 3][k % 2]);
        let c1 = random::complex(&mut rng, field, -1, 2, 2, "x");
        let c2 = random::complex(&mut rng, field, -1, 2, 2, "y");
        let h = hom_cx(&c1, &c2).unwrap();
        let squares = h.degrees().all(|n| h.differential(n - 1).mul(&h.differential(n)).unwrap().is_zero());
        if !squares || !h.validate().passed() {
            failures.push(format!("hom {k}"));
        }
    }
    for k in 0..40 {
        let field = gf([2, 3][k % 2]);
        let (_, vs) = small_inputs(&mut rng, field, 2, 1, 24);
        let nat = nat_complex(&vs[0], &vs[0]).unwrap();
        let id: Vec<(usize, u32)> = nat
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.name.split_once(':').and_then(|(_, m)| m.split_once('↦')).is_some_and(|(x, y)| x == y))
            .map(|(i, _)| (i, 1))
            .collect();
        if id.is_empty() || !nat.apply_d(&id).is_empty() || !nat.validate().passed() {
            failures.push(format!("nat {k}"));
        }
    }
    Check::new(failures.is_empty(), format!("100 hom complexes, 40 identity transformations, failures {failures:?}"), String::new())
}

fn rank_performance() -> Check {
    let start = Instant::now();
    let out = run(["dgcalc", "bench-rank", "--size", "2000", "--density", "0.01", "--seed", "1"]);
    let elapsed = start.elapsed();
    let mut mismatches = 0;
    for seed in 0..1000u64 {
        let mut rng = random::seeded(seed);
        let density = [0.02, 0.05, 0.1, 0.3, 0.5][seed as usize % 5];
        let m = random::matrix(&mut rng, Field::GF2, 64, 64, density);
        let dense: Vec<Vec<u64>> = (0..64).map(|r| (0..64).map(|c| m.get(r, c) as u64).collect()).collect();
        if rank(&m) != oracle::dense_rank(2, dense) {
            mismatches += 1;
        }
    }
    let pass = out.code == 0 && elapsed < BENCH_RANK_LIMIT && mismatches == 0;
    Check::new(
        pass,
        format!("bench-rank {:.3} s ({}), 64x64 mismatches {mismatches}/1000", elapsed.as_secs_f64(), out.stdout.trim()),
        String::new(),
    )
}

type Criterion = (usize, fn() -> Check);

const DETERMINISTIC: [Criterion; 7] = [
    (1, bar_squares),
    (2, unit_law),
    (3, routes_agree),
    (4, known_values),
    (5, associativity),
    (6, kunneth),
    (7, segal),
];

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

fn main() {
    let mut results: Vec<(usize, Check)> = Vec::new();
    let mut transcripts = [String::new(), String::new()];
    for (run_index, threads) in [1, PARALLEL_THREADS].into_iter().enumerate() {
        let p = pool(threads);
        for &(id, f) in &DETERMINISTIC {
            let check = p.install(f);
            writeln!(transcripts[run_index], "criterion {id}\n{}", check.report).unwrap();
            if run_index == 0 {
                results.push((id, check));
            }
        }
    }
    results.push((8, hom_conventions()));
    results.push((9, rank_performance()));
    let same = transcripts[0] == transcripts[1];
    results.push((
        10,
        Check::new(
            same,
            format!("criteria 1-7 on 1 and {PARALLEL_THREADS} threads, {} transcript bytes", transcripts[0].len()),
            String::new(),
        ),
    ));
    let mut failed = 0;
    for (id, c) in &results {
        println!("criterion {id}: {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.detail);
        failed += usize::from(!c.pass);
    }
    if failed > 0 {
        for (id, c) in results.iter().filter(|(_, c)| !c.pass) {
            eprintln!("criterion {id} transcript:\n{}", c.report);
        }
        std::process::exit(1);
    }
}

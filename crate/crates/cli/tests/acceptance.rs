//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::Command;
use std::time::{Duration, Instant};

use duorat_core::arith::{arithmetic_functions, coprime_count, gcd};
use duorat_core::characters::{char_sum_max, orthogonality_check, solution_count_via_characters, CharacterTable};
use duorat_core::duo::{brute_best_duo, duo_from_reduction, prime_grid_approx, trivial_duo, ReductionOptions};
use duorat_core::harmonic::{d_r_profile, et_inequality, s2_cauchy_schwarz, UnitPoint};
use duorat_core::hyperbola::{lift_min_max, smallest_max_solution, Box as SearchBox, HyperbolaInstance};
use duorat_core::lab::{sample_alphas, SAMPLE_MAX_DEN};
use duorat_core::sieve::{primes_between, primes_in_upper_half};
use duorat_core::single::dirichlet_approx;
use duorat_core::Rational;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    violations: u64,
    checked: u64,
    note: String,
}

impl Outcome {
    fn new(checked: u64, violations: u64) -> Self {
        Outcome { violations, checked, note: String::new() }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.note = s.into();
        self
    }
}

fn run(id: u32, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let ok = out.violations == 0 && out.checked > 0 && in_time;
    let mut line = format!(
        "{} criterion {id:>2} {title}: {} checked, {} violations, {:.2}s",
        if ok { "PASS" } else { "FAIL" },
        out.checked,
        out.violations,
        elapsed.as_secs_f64()
    );
    if let Some(l) = limit {
        line += &format!(" (limit {}s)", l.as_secs());
    }
    if !out.note.is_empty() {
        line += &format!("; {}", out.note);
    }
    println!("{line}");
    ok
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_unit(r: &mut ChaCha8Rng, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    loop {
        let a = r.gen_range(1..q);
        if gcd(a, q) == 1 {
            return a;
        }
    }
}

fn c1() -> Outcome {
    let alphas = sample_alphas(11, 10_000, SAMPLE_MAX_DEN);
    let mut bad = 0;
    for alpha in &alphas {
        for n in [10u64, 100, 1000] {
            let s = dirichlet_approx(alpha, n);
            let q = s.q.clone();
            let exact = (alpha - &Rational::new(s.a.clone(), q.clone())).abs();
            let ok = q >= BigInt::from(1)
                && q <= BigInt::from(n)
                && exact == s.error
                && exact <= Rational::new(1, q * BigInt::from(n));
            bad += u64::from(!ok);
        }
    }
    Outcome::new(alphas.len() as u64 * 3, bad)
}

fn c2() -> Outcome {
    let cases: Vec<(u64, u64, u64)> = {
        let mut r = rng(12);
        let mut v = Vec::new();
        for n in 4..=24u64 {
            for p in primes_between(n + 1, 2 * n).unwrap() {
                for _ in 0..5 {
                    v.push((n, p, r.gen_range(1..p)));
                }
            }
        }
        v
    };
    let bad: u64 = cases
        .par_iter()
        .map(|&(n, p, a)| {
            let best = brute_best_duo(&Rational::new(a, p), n).unwrap();
            u64::from(best.error < Rational::new(1, p * n * n))
        })
        .sum();
    Outcome::new(cases.len() as u64, bad)
}

fn c3() -> Outcome {
    let mut r = rng(13);
    let alphas = sample_alphas(14, 1000, SAMPLE_MAX_DEN);
    let mut bad = 0;
    for alpha in &alphas {
        let n = r.gen_range(12..=200u64);
        let t = trivial_duo(alpha, n).unwrap();
        let g = prime_grid_approx(alpha, n).unwrap();
        bad += u64::from(t.q1 > n || t.q2 > n || t.error > Rational::new(1, t.q1 * n));
        bad += u64::from(g.q1 > n || g.q2 > n || g.error > Rational::new(3, g.q1 * g.q2));
    }
    Outcome::new(alphas.len() as u64 * 2, bad)
}

fn c4() -> Outcome {
    let mut cases = Vec::new();
    for q in primes_between(2, 400).unwrap() {
        for a in 0..q {
            for n in [8u64, 16, 32] {
                cases.push((a, q, n));
            }
        }
    }
    let bad: u64 = cases
        .par_iter()
        .map(|&(a, q, n)| {
            let alpha = Rational::new(a, q);
            let red = duo_from_reduction(&alpha, n, ReductionOptions::default()).unwrap().result;
            let triv = trivial_duo(&alpha, n).unwrap();
            let oracle = brute_best_duo(&alpha, n).unwrap();
            let mut bad = u64::from(red.error > triv.error) + u64::from(oracle.error > red.error);
            if n >= 12 {
                bad += u64::from(red.error > prime_grid_approx(&alpha, n).unwrap().error);
            }
            bad += u64::from(red.q1 > n || red.q2 > n);
            bad
        })
        .sum();
    Outcome::new(cases.len() as u64, bad).note("prime grid compared for N >= 12 only")
}

fn c5() -> Outcome {
    let cases: Vec<(u64, u64)> = (2..=300u64)
        .flat_map(|q| (1..q).filter(move |&c| gcd(c, q) == 1).map(move |c| (q, c)))
        .collect();
    let bad: u64 = cases
        .par_iter()
        .map(|&(q, c)| {
            let inst = HyperbolaInstance::new(q, c as i128).unwrap();
            let direct = smallest_max_solution(inst).unwrap();
            let bx = SearchBox::square(1, q - 1).unwrap();
            match lift_min_max(inst, bx, q - 1).unwrap() {
                Some(hit) => u64::from(hit.sol.height() != direct.max || !inst.is_solution(hit.sol)),
                None => 1,
            }
        })
        .sum();
    Outcome::new(cases.len() as u64, bad).note("lift search minimizes max(x, y) over all k <= q-1")
}

fn c6() -> Outcome {
    let mut r = rng(16);
    let mut cases = Vec::new();
    for q in 1..=100u64 {
        let mut units = vec![1 % q.max(2), q - 1, random_unit(&mut r, q)];
        units.retain(|&a| gcd(a, q) == 1);
        units.sort_unstable();
        units.dedup();
        let mut bs = vec![1, q / 2, q];
        bs.retain(|&b| b >= 1);
        bs.dedup();
        for n in [10u64, 20, 40] {
            let primes: Vec<u64> = primes_in_upper_half(n).unwrap().into_iter().filter(|&p| gcd(p, q) == 1).collect();
            for &a in &units {
                for &b in &bs {
                    cases.push((q, a, primes.clone(), b));
                }
            }
        }
    }
    let mut bad = 0;
    for (q, a, primes, b) in &cases {
        let cmp = solution_count_via_characters(*q, *a as i128, primes, *b).unwrap();
        let mut naive = 0u64;
        for (i, &p1) in primes.iter().enumerate() {
            for (j, &p2) in primes.iter().enumerate() {
                let res = (a * p1 % q * p2) % q;
                let hits = (1..=*b).filter(|&t| t % q == res).count() as u64;
                naive += if i != j { hits } else { 0 };
            }
        }
        bad += u64::from(cmp.direct != naive || (cmp.direct as f64 - cmp.via_characters).abs() > 1e-6);
    }
    Outcome::new(cases.len() as u64, bad).note("P restricted to primes coprime to q")
}

fn c7() -> Outcome {
    let bad = (1..=200u64)
        .filter(|&q| orthogonality_check(q).unwrap() > 1e-9 * arithmetic_functions(q).phi as f64)
        .count() as u64;
    Outcome::new(200, bad)
}

fn c8() -> Outcome {
    let per_q: Vec<(u64, u64)> = (3..=500u64)
        .into_par_iter()
        .map(|q| {
            let table = CharacterTable::new(q).unwrap();
            let mut bad = 0;
            for i in 1..table.len() {
                let rep = char_sum_max(&table, i).unwrap();
                let bound = (q as f64).sqrt() * (q as f64).ln();
                bad += u64::from(rep.max_partial > bound);
            }
            (table.len() as u64 - 1, bad)
        })
        .collect();
    let checked = per_q.iter().map(|x| x.0).sum();
    Outcome::new(checked, per_q.iter().map(|x| x.1).sum())
}

fn c9() -> Outcome {
    let mut r = rng(19);
    let mut bad = 0;
    let sets = 10_000u64;
    for _ in 0..sets {
        let l = r.gen_range(2..=40u64);
        let j = r.gen_range(1..=20usize);
        let points: Vec<UnitPoint> = (0..j)
            .map(|_| loop {
                let den = r.gen_range(2..=1000u64);
                let lo = den.div_ceil(l);
                if lo <= den - lo {
                    break UnitPoint::from_parts(r.gen_range(lo..=den - lo), den).unwrap();
                }
            })
            .collect();
        let rep = et_inequality(&points, l).unwrap();
        bad += u64::from(!rep.hypothesis_ok || rep.lhs <= j as f64 / 6.0);
    }
    Outcome::new(sets, bad)
}

fn c10() -> Outcome {
    let mut r = rng(20);
    let mut bad = 0;
    let mut checked = 0;
    for q in 1..=2000u64 {
        let d = (1..=q).filter(|k| q % k == 0).count() as f64;
        for _ in 0..50 {
            let b = r.gen_range(1..=2000u64);
            let cc = coprime_count(q, &Rational::from_integer(b)).unwrap();
            let naive = (1..=b).filter(|&m| gcd(m, q) == 1).count() as u64;
            let main = b as f64 * arithmetic_functions(q).phi as f64 / q as f64;
            bad += u64::from(cc.count != naive || (naive as f64 - main).abs() > 2.0 * d);
            checked += 1;
        }
    }
    Outcome::new(checked, bad)
}

fn c11() -> Outcome {
    let mut bad = 0;
    for n in [20u64, 50, 100] {
        let primes = primes_in_upper_half(n).unwrap();
        let l = n * n;
        let prof = d_r_profile(l, &primes).unwrap();
        let direct = (1..=l * n)
            .map(|r| primes.iter().filter(|&&p| r % p == 0 && r / p <= l).count())
            .max()
            .unwrap_or(0) as u32;
        bad += u64::from(prof.max_d > 3 || direct > 3 || direct != prof.max_d);
    }
    Outcome::new(3, bad)
}

fn c12() -> Outcome {
    let mut r = rng(22);
    let mut bad = 0;
    let tuples = 200u64;
    for _ in 0..tuples {
        let l = r.gen_range(1..=20u64);
        let q = r.gen_range(l.max(2)..=500);
        let n = r.gen_range(2..=100u64);
        let a = random_unit(&mut r, q);
        let cs = s2_cauchy_schwarz(q, a as i128, n, l).unwrap();
        bad += u64::from(cs.s2_squared > cs.bound * (1.0 + 1e-6) + 1e-9);
    }
    Outcome::new(tuples, bad).note("q drawn from [max(L, 2), 500]")
}

fn c13() -> Outcome {
    let commands: &[&[&str]] = &[
        &["approx", "single", "--alpha", "0.318310", "--n", "1000", "--best", "--convergents"],
        &["approx", "duo", "--alpha", "355/1130", "--n", "20", "--oracle"],
        &["approx", "duo", "--alpha", "1234567/9999991", "--n", "40", "--distinct-primes"],
        &["hyperbola", "solve", "--q", "97", "--c", "5", "--box", "1,96,1,96", "--coprime"],
        &["hyperbola", "min", "--q", "9973", "--c", "17"],
        &["hyperbola", "lift", "--q", "101", "--c", "3", "--box", "5,20,5,20", "--k-max", "100", "--all"],
        &["hyperbola", "coverage", "--q", "211", "--box", "10,20,10,20"],
        &["hyperbola", "classify", "--a", "17", "--q", "113", "--n", "20"],
        &["sums", "et", "--q", "101", "--a", "3", "--n", "60", "--l", "20"],
        &["sums", "s1s2", "--q", "401", "--a", "7", "--n", "80"],
        &["sums", "drprofile", "--n", "60"],
        &["sums", "thm7", "--q", "97", "--n", "50", "--l", "9"],
        &["chars", "table", "--q", "120", "--values"],
        &["chars", "ortho", "--q", "180"],
        &["chars", "count", "--q", "60", "--a", "7", "--n", "40", "--b", "30"],
        &["chars", "pv", "--q", "221"],
        &["lab", "conj0", "--n", "12,24,48", "--samples", "40"],
        &["lab", "conj0", "--alpha", "2/7", "--n", "30"],
        &["lab", "conj2", "--q-lo", "2", "--q-hi", "400"],
        &["lab", "conj3", "--q-lo", "2", "--q-hi", "300", "--theta", "0.9"],
        &["lab", "conj3", "--q", "97", "--c", "5", "--n", "97"],
        &["lab", "thm4", "--n", "20", "--q-cap", "80", "--per-q"],
    ];
    let mut bad = 0;
    let mut checked = 0;
    let mut failed_runs = 0;
    for cmd in commands {
        for format in ["json", "csv", "pretty"] {
            let outputs: Vec<Vec<u8>> = ["1", "4"]
                .iter()
                .map(|jobs| {
                    let out = Command::new(env!("CARGO_BIN_EXE_duorat"))
                        .args(*cmd)
                        .args(["--seed", "7", "--jobs", jobs, "--format", format])
                        .env_remove("DUORAT_GUARD")
                        .output()
                        .expect("binary runs");
                    if !out.status.success() || out.stdout.is_empty() {
                        failed_runs += 1;
                    }
                    out.stdout
                })
                .collect();
            checked += 1;
            bad += u64::from(outputs[0] != outputs[1]);
        }
    }
    Outcome::new(checked, bad + failed_runs).note(format!("{failed_runs} runs exited non-zero"))
}

fn main() {
    // libtest-style flags may be forwarded by `cargo test`; nothing to parse.
    let mut ok = true;
    ok &= run(1, "Dirichlet guarantee", Some(Duration::from_secs(10)), c1);
    ok &= run(2, "two-rational lower bound", Some(Duration::from_secs(60)), c2);
    ok &= run(3, "construction bounds", None, c3);
    ok &= run(4, "reduction ordering", None, c4);
    ok &= run(5, "hyperbola oracle equivalence", Some(Duration::from_secs(120)), c5);
    ok &= run(6, "counting identity", None, c6);
    ok &= run(7, "orthogonality", None, c7);
    ok &= run(8, "Polya-Vinogradov", None, c8);
    ok &= run(9, "Erdos-Turan", None, c9);
    ok &= run(10, "coprime count error", None, c10);
    ok &= run(11, "d_r bound", None, c11);
    ok &= run(12, "Cauchy-Schwarz chain", None, c12);
    ok &= run(13, "determinism across --jobs", None, c13);
    if !ok {
        std::process::exit(1);
    }
}

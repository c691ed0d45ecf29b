use duorat_core::arith::gcd;
use duorat_core::characters::{self, CharacterTable};
use duorat_core::duo::{self, ReductionOptions};
use duorat_core::harmonic::{self, UnitPoint};
use duorat_core::hyperbola::{self, HyperbolaInstance};
use duorat_core::report::real;
use duorat_core::{lab, sieve, single, Error, Rational, Result};
use serde::Serialize;
use serde_json::Value;

use crate::args::{ApproxCmd, CharsCmd, Command, HyperbolaCmd, LChoice, LabCmd, SumsCmd};
use crate::output::{obj, Output};

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn usage(msg: impl Into<String>) -> Error {
    Error::PreconditionViolated(msg.into())
}

pub fn run(cmd: Command, seed: u64) -> Result<Output> {
    match cmd {
        Command::Approx(c) => approx(c),
        Command::Hyperbola(c) => hyperbola_cmd(c),
        Command::Sums(c) => sums(c),
        Command::Chars(c) => chars(c),
        Command::Lab(c) => lab_cmd(c, seed),
    }
}

fn approx(cmd: ApproxCmd) -> Result<Output> {
    match cmd {
        ApproxCmd::Single {
            alpha,
            n,
            best,
            convergents,
        } => {
            if n == 0 {
                return Err(usage("N must be positive"));
            }
            let s = if best {
                single::best_single(&alpha, n)
            } else {
                single::dirichlet_approx(&alpha, n)
            };
            let bound = Rational::new(1, &s.q * n);
            let mut doc = to_value(&s);
            let m = doc.as_object_mut().expect("object");
            m.insert("alpha".into(), alpha.to_string().into());
            m.insert("n".into(), n.into());
            m.insert("method".into(), if best { "best" } else { "dirichlet" }.into());
            m.insert("bound".into(), bound.to_string().into());
            m.insert("within_bound".into(), (s.error <= bound).into());
            if convergents {
                m.insert("convergents".into(), to_value(&single::convergents(&alpha)));
            }
            Ok(Output::doc(doc))
        }
        ApproxCmd::Duo {
            alpha,
            n,
            r_max,
            distinct_primes,
            oracle,
        } => {
            let opts = ReductionOptions { r_max, distinct_primes };
            let out = duo::duo_from_reduction(&alpha, n, opts)?;
            let mut doc = to_value(&out.result);
            let m = doc.as_object_mut().expect("object");
            m.insert("alpha".into(), alpha.to_string().into());
            m.insert("n".into(), n.into());
            m.insert("r_max".into(), out.r_max.into());
            m.insert("short_circuit".into(), out.short_circuit.into());
            m.insert("single".into(), to_value(&out.single));
            m.insert("trace".into(), to_value(&out.trace));
            m.insert("value".into(), out.result.value().to_string().into());
            if oracle {
                let best = duo::brute_best_duo(&alpha, n)?;
                let gap = &out.result.error - &best.error;
                m.insert("oracle".into(), to_value(&best));
                m.insert("oracle_gap".into(), gap.to_string().into());
            }
            Ok(Output::doc(doc))
        }
    }
}

fn instance(q: u64, c: i128) -> Result<HyperbolaInstance> {
    HyperbolaInstance::new(q, c)
}

fn hyperbola_cmd(cmd: HyperbolaCmd) -> Result<Output> {
    match cmd {
        HyperbolaCmd::Solve { inst, bx, coprime } => {
            let i = instance(inst.q, inst.c)?;
            let sols = hyperbola::solutions_in_box(i, bx, coprime)?;
            let rows = sols.iter().map(|s| vec![s.x.into(), s.y.into()]).collect();
            let doc = obj(vec![
                ("q", i.q().into()),
                ("c", i.c().into()),
                ("box", to_value(&bx)),
                ("coprime", coprime.into()),
                ("count", sols.len().into()),
                ("solutions", to_value(&sols)),
            ]);
            Ok(Output::with_table(doc, &["x", "y"], rows))
        }
        HyperbolaCmd::Min { inst } => {
            let i = instance(inst.q, inst.c)?;
            let m = hyperbola::smallest_max_solution(i)?;
            Ok(Output::doc(obj(vec![
                ("q", i.q().into()),
                ("c", i.c().into()),
                ("x", m.sol.x.into()),
                ("y", m.sol.y.into()),
                ("max", m.max.into()),
                ("exponent", real(m.exponent)),
            ])))
        }
        HyperbolaCmd::Lift {
            inst,
            bx,
            k_max,
            all,
            coprime,
        } => {
            let i = instance(inst.q, inst.c)?;
            if all {
                let hits = hyperbola::lift_solutions(i, bx, k_max, coprime)?;
                let rows = hits
                    .iter()
                    .map(|h| vec![h.k.into(), h.sol.x.into(), h.sol.y.into()])
                    .collect();
                let doc = obj(vec![
                    ("q", i.q().into()),
                    ("c", i.c().into()),
                    ("box", to_value(&bx)),
                    ("k_max", k_max.into()),
                    ("coprime", coprime.into()),
                    ("hits", to_value(&hits)),
                ]);
                Ok(Output::with_table(doc, &["k", "x", "y"], rows))
            } else {
                let hit = hyperbola::lift_and_factor_search(i, bx, k_max)?;
                Ok(Output::doc(obj(vec![
                    ("q", i.q().into()),
                    ("c", i.c().into()),
                    ("k_max", k_max.into()),
                    ("found", hit.is_some().into()),
                    ("k", hit.map_or(Value::Null, |h| h.k.into())),
                    ("x", hit.map_or(Value::Null, |h| h.sol.x.into())),
                    ("y", hit.map_or(Value::Null, |h| h.sol.y.into())),
                ])))
            }
        }
        HyperbolaCmd::Coverage { q, bx, coprime } => {
            let c = hyperbola::coverage_count(q, (bx.x_lo, bx.x_hi), (bx.y_lo, bx.y_hi), coprime)?;
            Ok(Output::doc(obj(vec![
                ("q", q.into()),
                ("box", to_value(&bx)),
                ("coprime", coprime.into()),
                ("covered", c.covered.into()),
                ("fraction", real(c.fraction)),
            ])))
        }
        HyperbolaCmd::Classify { a, q, n } => {
            let c = hyperbola::classify_interval(a, q, n)?;
            let (q1, q2) = match c {
                hyperbola::Classification::Good { q1, q2 } => (q1.into(), q2.into()),
                hyperbola::Classification::Bad => (Value::Null, Value::Null),
            };
            Ok(Output::doc(obj(vec![
                ("a", a.to_string().into()),
                ("q", q.into()),
                ("n", n.into()),
                ("status", if c.is_good() { "good" } else { "bad" }.into()),
                ("q1", q1),
                ("q2", q2),
            ])))
        }
    }
}

fn resolve_l(q: u64, n: u64, c: &LChoice) -> u64 {
    c.l.unwrap_or_else(|| harmonic::default_l(q, n, c.phi, c.eps))
}

fn sums(cmd: SumsCmd) -> Result<Output> {
    match cmd {
        SumsCmd::Et { points, q, a, n, l } => {
            let pts: Vec<UnitPoint> = match (points.is_empty(), q, a, n) {
                (false, None, None, None) => points.iter().map(UnitPoint::new).collect::<Result<_>>()?,
                (true, Some(q), Some(a), Some(n)) => {
                    if q == 0 {
                        return Err(usage("q must be positive"));
                    }
                    let ar = duorat_core::arith::reduce(a, q);
                    sieve::primes_in_upper_half(n)?
                        .into_iter()
                        .map(|p| UnitPoint::from_parts(duorat_core::arith::mul_mod(ar, p % q, q), q))
                        .collect::<Result<_>>()?
                }
                _ => return Err(usage("give either --points, or all of --q --a --n")),
            };
            if pts.is_empty() {
                return Err(usage("no points"));
            }
            let r = harmonic::et_inequality(&pts, l)?;
            let mut doc = to_value(&r);
            let m = doc.as_object_mut().expect("object");
            m.insert("j".into(), pts.len().into());
            m.insert("l".into(), l.into());
            m.insert(
                "points".into(),
                pts.iter().map(|p| Value::from(p.value().to_string())).collect(),
            );
            Ok(Output::doc(doc))
        }
        SumsCmd::S1s2 { q, a, n, l } => {
            let l = resolve_l(q, n, &l);
            let r = harmonic::s_sums_thm6(q, a, n, l)?;
            let cs = harmonic::s2_cauchy_schwarz(q, a, n, l)?;
            let primes = sieve::primes_in_upper_half(n)?;
            let pv = harmonic::parseval_check(q, a, &primes)?;
            let mut doc = to_value(&r);
            let m = doc.as_object_mut().expect("object");
            m.insert("q".into(), q.into());
            m.insert("a".into(), a.to_string().into());
            m.insert("n".into(), n.into());
            m.insert("s2_squared".into(), real(cs.s2_squared));
            m.insert("congruent_square_pairs".into(), cs.congruent_square_pairs.into());
            m.insert("cs_bound".into(), real(cs.bound));
            m.insert("cs_applicable".into(), (l <= q).into());
            m.insert("parseval_lhs".into(), real(pv.lhs));
            m.insert("parseval_rhs".into(), real(pv.rhs));
            Ok(Output::doc(doc))
        }
        SumsCmd::Drprofile { n, l, full } => {
            let l = match l {
                Some(l) => l,
                None => n.checked_mul(n).ok_or_else(|| usage("N^2 overflows"))?,
            };
            let primes = sieve::primes_in_upper_half(n)?;
            let d = harmonic::d_r_profile(l, &primes)?;
            let applicable = n > 16;
            let mut doc = obj(vec![
                ("n", n.into()),
                ("l", l.into()),
                ("p_size", primes.len().into()),
                ("max_d", d.max_d.into()),
                ("argmax", to_value(&d.argmax)),
                ("bound_applicable", applicable.into()),
                ("holds", (!applicable || d.max_d <= 3).into()),
            ]);
            let hist = d.histogram();
            let m = doc.as_object_mut().expect("object");
            m.insert(
                "histogram".into(),
                hist.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect(),
            );
            if full {
                let rows: Vec<Vec<Value>> = d.counts.iter().map(|(r, c)| vec![(*r).into(), (*c).into()]).collect();
                m.insert("counts".into(), rows.iter().map(|r| Value::Array(r.clone())).collect());
                Ok(Output::with_table(doc, &["r", "d_r"], rows))
            } else {
                let rows = hist.iter().map(|(k, v)| vec![(*k).into(), (*v).into()]).collect();
                Ok(Output::with_table(doc, &["d", "count"], rows))
            }
        }
        SumsCmd::Thm7 { q, n, l } => {
            let t = harmonic::s1_bound_thm7(q, n, l)?;
            let mut doc = to_value(&t);
            let m = doc.as_object_mut().expect("object");
            m.insert("q".into(), q.into());
            m.insert("n".into(), n.into());
            m.insert("l".into(), l.into());
            Ok(Output::doc(doc))
        }
    }
}

fn chars(cmd: CharsCmd) -> Result<Output> {
    match cmd {
        CharsCmd::Table { q, values } => {
            let t = characters::character_table(q)?;
            let limit = duorat_core::guard::current().ortho_q;
            if values && q > limit {
                return Err(Error::RangeTooLarge {
                    what: "character value table modulus",
                    requested: q.to_string(),
                    limit: limit.to_string(),
                });
            }
            let lam = t.exponent();
            let mut rows = Vec::with_capacity(t.len());
            let mut list = Vec::with_capacity(t.len());
            for i in 0..t.len() {
                let ex = t.exponents(i);
                let mut entry = obj(vec![
                    ("index", i.into()),
                    ("exponents", to_value(&ex)),
                    ("order", t.order(i).into()),
                ]);
                let ex_s = ex.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
                let mut row: Vec<Value> = vec![i.into(), ex_s.into(), t.order(i).into()];
                if values {
                    let vals: Vec<Value> = t
                        .phases(i)
                        .into_iter()
                        .map(|p| p.map_or(Value::Null, |p| Rational::new(p, lam).to_string().into()))
                        .collect();
                    let joined = vals
                        .iter()
                        .map(|v| v.as_str().unwrap_or("0").to_string())
                        .collect::<Vec<_>>()
                        .join(";");
                    entry.as_object_mut().expect("object").insert("phases".into(), vals.into());
                    row.push(joined.into());
                }
                list.push(entry);
                rows.push(row);
            }
            let doc = obj(vec![
                ("q", q.into()),
                ("phi", t.len().into()),
                ("exponent", lam.into()),
                ("generators", to_value(&t.generators())),
                ("characters", list.into()),
            ]);
            let cols: &[&str] = if values {
                &["index", "exponents", "order", "phases"]
            } else {
                &["index", "exponents", "order"]
            };
            Ok(Output::with_table(doc, cols, rows))
        }
        CharsCmd::Ortho { q } => {
            let dev = characters::orthogonality_check(q)?;
            let phi = duorat_core::arith::phi(q) as f64;
            Ok(Output::doc(obj(vec![
                ("q", q.into()),
                ("phi", (phi as u64).into()),
                ("max_deviation", real(dev)),
                ("tolerance", real(1e-9 * phi)),
                ("holds", (dev <= 1e-9 * phi).into()),
            ])))
        }
        CharsCmd::Count { q, a, n, b } => {
            if q == 0 {
                return Err(usage("q must be positive"));
            }
            let all = sieve::primes_in_upper_half(n)?;
            let (primes, excluded): (Vec<u64>, Vec<u64>) = all.into_iter().partition(|&p| gcd(p, q) == 1);
            let c = characters::solution_count_via_characters(q, a, &primes, b)?;
            let mut doc = to_value(&c);
            let m = doc.as_object_mut().expect("object");
            m.insert("q".into(), q.into());
            m.insert("a".into(), a.to_string().into());
            m.insert("n".into(), n.into());
            m.insert("b".into(), b.into());
            m.insert("primes".into(), to_value(&primes));
            m.insert("excluded_primes".into(), to_value(&excluded));
            m.insert("holds".into(), (c.discrepancy <= 1e-6 * (c.direct as f64).max(1.0)).into());
            Ok(Output::doc(doc))
        }
        CharsCmd::Pv { q, chi } => {
            let t = characters::character_table(q)?;
            match chi {
                Some(i) => {
                    let r = characters::char_sum_max(&t, i)?;
                    let mut doc = to_value(&r);
                    let m = doc.as_object_mut().expect("object");
                    m.insert("q".into(), q.into());
                    m.insert("chi".into(), i.into());
                    Ok(Output::doc(doc))
                }
                None => pv_all(&t),
            }
        }
    }
}

fn pv_all(t: &CharacterTable) -> Result<Output> {
    let q = t.modulus();
    let reports = (1..t.len())
        .map(|i| characters::char_sum_max(t, i))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut violations = 0u64;
    for (i, r) in (1..t.len()).zip(&reports) {
        if !r.pv_holds {
            violations += 1;
        }
        rows.push(vec![
            i.into(),
            t.order(i).into(),
            real(r.max_partial),
            r.argmax_m.into(),
            real(r.pv_bound),
            real(r.glh_ratio),
            r.pv_holds.into(),
        ]);
    }
    let worst = reports.iter().map(|r| r.max_partial).fold(0.0, f64::max);
    let doc = obj(vec![
        ("q", q.into()),
        ("characters", (t.len() - 1).into()),
        ("max_partial", real(worst)),
        ("pv_bound", real((q as f64).sqrt() * (q as f64).ln())),
        ("glh_shape", real((q as f64).sqrt())),
        ("violations", violations.into()),
        (
            "rows",
            rows.iter().map(|r| Value::Array(r.clone())).collect(),
        ),
    ]);
    Ok(Output::with_table(
        doc,
        &["chi", "order", "max_partial", "argmax_m", "pv_bound", "glh_ratio", "pv_holds"],
        rows,
    ))
}

fn lab_cmd(cmd: LabCmd, seed: u64) -> Result<Output> {
    match cmd {
        LabCmd::Conj0 {
            alpha,
            n,
            beta,
            eps,
            samples,
        } => match alpha {
            Some(alpha) => {
                let [n] = n[..] else {
                    return Err(usage("with --alpha give a single --n"));
                };
                let r = lab::conj0_quality(&alpha, n, beta)?;
                let mut doc = to_value(&r.best);
                let m = doc.as_object_mut().expect("object");
                m.insert("alpha".into(), alpha.to_string().into());
                m.insert("n".into(), n.into());
                m.insert("beta".into(), real(beta));
                m.insert("ratio".into(), real(r.ratio));
                Ok(Output::doc(doc))
            }
            None => Ok(Output::report(lab::conj0_sweep(&n, beta, eps, samples, seed)?)),
        },
        LabCmd::Conj2 { q_lo, q_hi, per_pair } => Ok(Output::report(lab::conj2_sweep(q_lo, q_hi, per_pair)?)),
        LabCmd::Conj3 {
            q,
            c,
            n,
            q_lo,
            q_hi,
            theta,
            c_const,
        } => match (q, c, q_lo, q_hi) {
            (Some(q), Some(c), None, None) => {
                let n = n.ok_or_else(|| usage("--n is required with --q --c"))?;
                let r = lab::conj3_check(q, c, theta, c_const, n)?;
                let mut doc = to_value(&r);
                let m = doc.as_object_mut().expect("object");
                m.insert("q".into(), q.into());
                m.insert("c".into(), c.to_string().into());
                m.insert("n".into(), n.into());
                m.insert("theta".into(), real(theta));
                m.insert("C".into(), real(c_const));
                Ok(Output::doc(doc))
            }
            (None, None, Some(lo), Some(hi)) => {
                if n.is_some() {
                    return Err(usage("the sweep sets N = ⌈q^θ⌉ itself; drop --n"));
                }
                Ok(Output::report(lab::conj3_sweep(lo, hi, theta, c_const)?))
            }
            _ => Err(usage("give either --q --c --n, or --q-lo --q-hi")),
        },
        LabCmd::Thm4 { n, eps, q_cap, per_q } => {
            let r = lab::thm4_bad_measure(n, eps, q_cap)?;
            let rows: Vec<Vec<Value>> = r
                .per_q
                .iter()
                .map(|x| vec![x.q.into(), x.units.into(), x.bad.into()])
                .collect();
            let mut doc = to_value(&r);
            let m = doc.as_object_mut().expect("object");
            if !per_q {
                m.remove("per_q");
            }
            Ok(Output::with_table(doc, &["q", "units", "bad"], rows))
        }
    }
}

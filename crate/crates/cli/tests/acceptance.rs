//! Acceptance suite: seven criteria, each with a runtime limit, one line each.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reebmult::catalog::{self, CrossFamily};
use reebmult::certify::{self, BoundOptions, Verdict};
use reebmult::homology::{self, BaseManifold, MonotoneSign};
use reebmult::index::{self, FastPath, PathModel};
use reebmult::jump::{self, JumpCertificate, JumpParams};
use reebmult::rational::{int, ratio, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn lt_abs(x: &Rational, bound: &Rational) -> bool {
    x < bound && &-x.clone() < bound
}

// 1. Catalog fidelity.

fn catalog_fidelity() -> Outcome {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_reebmult"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    let text = run(&["catalog"])?;
    ensure(text.status.success(), || "catalog exited nonzero".into())?;
    ensure(text.stdout == include_bytes!("golden/catalog.txt"), || "text tables differ from golden file".into())?;
    let machine = run(&["catalog", "--output", "machine"])?;
    ensure(machine.stdout == include_bytes!("golden/catalog_machine.txt"), || {
        "machine tables differ from golden file".into()
    })?;
    let rows = catalog::table_records();
    let primary = rows.iter().filter(|r| r.get("table") == Some("r_B")).count();
    let nonhyp = rows.iter().filter(|r| r.get("table") == Some("r_nonhyp")).count();
    ensure(primary == 7 && nonhyp == 7, || format!("{primary} + {nonhyp} rows"))?;
    let entries = catalog::cross_catalog();
    for e in &entries {
        ensure(e.consistent(), || format!("{} inconsistent with its Betti numbers", e.name))?;
        ensure(homology::r_bound(&e.base) == e.r_b, || format!("{}: r_B", e.name))?;
        ensure(homology::r_nonhyp_bound(&e.base) == e.r_nonhyp, || format!("{}: r_nonhyp", e.name))?;
    }
    for family in CrossFamily::ALL {
        ensure(entries.iter().any(|e| e.family == family), || format!("no instance of {family}"))?;
    }
    Ok(format!("7 + 7 rows byte-identical, {} instances recomputed", entries.len()))
}

// 2. Index calculus.

const K_MAX: u64 = 200;

fn random_path(rng: &mut ChaCha8Rng, max_half_dim: usize) -> PathModel {
    loop {
        let half_dim = rng.gen_range(1..=max_half_dim);
        let n_ell = rng.gen_range(0..=half_dim);
        let elliptic = (0..n_ell)
            .map(|_| {
                let q = rng.gen_range(2..=10_000_i64);
                ratio(rng.gen_range(-3 * q..=3 * q), q)
            })
            .collect();
        let hyperbolic = (n_ell..half_dim).map(|_| rng.gen_range(-3..=3)).collect();
        if let Ok(p) = PathModel::certified(rng.gen_range(-2..=2), elliptic, hyperbolic, K_MAX) {
            return p;
        }
    }
}

fn check_path(p: &PathModel, other: &PathModel, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = p.half_dim() as i64;
    let slope = index::mean_index_per_iterate(p);
    let fast = ok(FastPath::new(p))?;
    let inv = index::invert(p);
    let shifted = ok(index::validate_path(
        &PathModel::new(p.loop_maslov() + 1, p.elliptic().to_vec(), p.hyperbolic().to_vec()),
        K_MAX,
    ))?;
    let sum = index::direct_sum(p, other);
    let hsum = p.hyperbolic_sum();
    let m = rng.gen_range(2..=4_u64);
    let iterated = index::iterate_path(p, m);
    for k in 1..=K_MAX {
        let mu = ok(index::cz_index(p, k))?;
        let mean = index::mean_index(p, k);
        let at = |what: &str| format!("{what} fails at k = {k} for {p:?}");
        ensure(fast.cz(k as i64) == mu, || at("word-size evaluation"))?;
        // homogeneity
        ensure(mean == &slope * int(k as i64), || at("mean homogeneity"))?;
        if k * m <= K_MAX {
            ensure(ok(index::cz_index(&iterated, k))? == ok(index::cz_index(p, k * m))?, || at("iterate homogeneity"))?;
            ensure(index::mean_index(&iterated, k) == index::mean_index(p, k * m), || at("iterate mean"))?;
        }
        // |μ̂ - μ| < n
        ensure(lt_abs(&(&mean - int(mu)), &int(n)), || at("mean index bound"))?;
        // parity
        let ell = p.elliptic().len() as i64;
        ensure((mu - ell - k as i64 * hsum).rem_euclid(2) == 0, || at("parity"))?;
        ensure(ok(index::is_good(p, k))? == (k % 2 == 1 || hsum % 2 == 0), || at("goodness"))?;
        // inversion
        ensure(ok(index::cz_index(&inv, k))? == -mu, || at("inversion"))?;
        ensure(ok(index::cz_index_signed(p, -(k as i64)))? == -mu, || at("signed inversion"))?;
        // additivity
        ensure(ok(index::cz_index(&sum, k))? == mu + ok(index::cz_index(other, k))?, || at("additivity"))?;
        // loop shift
        ensure(ok(index::cz_index(&shifted, k))? == mu + 2 * k as i64, || at("loop shift"))?;
        // mean-index limit: |μ(k)/k - μ̂| < n/k
        let ratio_k = ratio(mu, k as i64);
        ensure(lt_abs(&(&ratio_k - &slope), &ratio(n, k as i64)), || at("mean index limit"))?;
    }
    // hyperbolic rigidity
    let hyp = ok(PathModel::certified(p.loop_maslov(), vec![], p.hyperbolic().to_vec(), K_MAX))?;
    if hyp.half_dim() > 0 {
        let first = ok(index::cz_index(&hyp, 1))?;
        for k in 1..=K_MAX {
            let mu = ok(index::cz_index(&hyp, k))?;
            ensure(mu == k as i64 * first && int(mu) == index::mean_index(&hyp, k), || {
                format!("hyperbolic rigidity fails at k = {k}")
            })?;
        }
    }
    Ok(())
}

fn index_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d3);
    let count = 1000;
    for _ in 0..count {
        let p = random_path(&mut rng, 5);
        let q = random_path(&mut rng, 5);
        check_path(&p, &q, &mut rng)?;
    }
    Ok(format!("{count} paths, 8 invariants for k <= {K_MAX}"))
}

// 3. Jump solver soundness.

/// A rotation number close to a random `p/q` with `q ~ 10⁹`.
fn generator(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.gen_range(1_000_000_000..2_000_000_000_i64);
    ratio(rng.gen_range(q / 10..9 * q / 10), q)
}

const SOLVER_BOUND: u64 = 200_000_000;

fn structured_path(rng: &mut ChaCha8Rng, generators: &[Rational], max_multiple: i64) -> Result<PathModel, String> {
    let half_dim = rng.gen_range(1..=4);
    let n_ell = rng.gen_range(1..=half_dim);
    let elliptic = (0..n_ell)
        .map(|j| &generators[j % generators.len()] * int(rng.gen_range(1..=max_multiple)) + int(rng.gen_range(0..=1)))
        .collect();
    let hyperbolic = (n_ell..half_dim).map(|_| rng.gen_range(1..=3)).collect();
    ok(PathModel::certified(rng.gen_range(0..=2), elliptic, hyperbolic, SOLVER_BOUND))
}

/// Paths of one of four structured families. Rotation numbers are small
/// multiples of at most two generators, which keeps the search feasible:
/// F1 hyperbolic paths, F2 one path over one generator, F3 three-dimensional
/// ellipsoids with random weights, F4 iterates of one path over two generators.
fn family_paths(rng: &mut ChaCha8Rng, family: usize) -> Vec<PathModel> {
    loop {
        let generators = [generator(rng), generator(rng)];
        let count = rng.gen_range(1..=4);
        let paths: Result<Vec<_>, String> = match family {
            1 => (0..count)
                .map(|_| {
                    let half_dim = rng.gen_range(1..=4);
                    let hyperbolic = (0..half_dim).map(|_| rng.gen_range(1..=3)).collect();
                    ok(PathModel::certified(rng.gen_range(0..=2), vec![], hyperbolic, SOLVER_BOUND))
                })
                .collect(),
            2 => structured_path(rng, &generators[..1], 3).map(|p| vec![p]),
            3 => {
                let weights = random_weights(rng, 2);
                certify::ellipsoid_system(&weights, SOLVER_BOUND)
                    .map(|system| system.paths())
                    .map_err(|e| e.to_string())
            }
            _ => structured_path(rng, &generators, 1).and_then(|base| {
                (0..count)
                    .map(|_| ok(index::validate_path(&index::iterate_path(&base, rng.gen_range(1..=2)), SOLVER_BOUND / 2)))
                    .collect()
            }),
        };
        if let Ok(paths) = paths {
            return paths;
        }
    }
}

fn jump_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a1);
    let mut solved = 0;
    let mut families = [0; 4];
    let mut largest = 0;
    for trial in 0..24 {
        let family = trial % 4 + 1;
        let paths = family_paths(&mut rng, family);
        let c_b = rng.gen_range(1..=6_u64);
        let params = JumpParams::new(ratio(1, 10), rng.gen_range(1..=5), 2 * c_b, 10_000_000);
        let cert = jump::find_common_jump(&paths, &params, 0)
            .map_err(|e| format!("system {trial} (F{family}): {e}"))?;
        let report = jump::verify_jump(&paths, &cert, &params);
        if let Some(f) = report.first_failure() {
            return Err(format!("system {trial} (F{family}): check {} failed: {:?}", f.name, f.counterexample));
        }
        for name in ["divisibility", "(i)", "(ii)", "(iii)"] {
            ensure(report.check(name).is_some_and(|c| c.passed), || format!("system {trial}: {name} not run"))?;
        }
        largest = largest.max(cert.k_plus[0]).max(cert.k_minus[0]);
        solved += 1;
        families[family - 1] += 1;
    }

    let worked = PathModel::certified(0, vec![ratio(41, 100)], vec![], 99).map_err(|e| e.to_string())?;
    let params = JumpParams::new(ratio(1, 4), 1, 1, 98);
    let cert = JumpCertificate {
        d_plus: 4,
        k_plus: vec![5],
        d_minus: 78,
        k_minus: vec![95],
        params: params.clone(),
    };
    ensure(jump::verify_jump(&[worked], &cert, &params).passed(), || "worked certificate rejected".into())?;
    Ok(format!("{solved} systems verified (F1-F4: {families:?}, largest k {largest}), worked 41/100 certificate verified"))
}

// 4. Homology ranks.

fn random_base(rng: &mut ChaCha8Rng, sign: MonotoneSign) -> BaseManifold {
    let n = rng.gen_range(1..=6_usize);
    let odd = rng.gen_bool(0.5);
    let mut betti = vec![0; 2 * n + 1];
    for i in 0..=n {
        let b = if i == 0 {
            1
        } else if i % 2 == 1 && !odd {
            0
        } else {
            rng.gen_range(0..=3)
        };
        betti[i] = b;
        betti[2 * n - i] = b;
    }
    BaseManifold::new(n, betti, rng.gen_range(1..=n as u64 + 3), sign).expect("valid random base")
}

fn brute_rank(base: &BaseManifold, m: i64) -> u64 {
    let n = base.n() as i64;
    let c2 = 2 * base.chern_min() as i64;
    (1..=400)
        .map(|j| {
            let shift = match base.monotone_sign() {
                MonotoneSign::Positive => j * c2 - n,
                MonotoneSign::Negative => n - j * c2,
            };
            let i = m - shift;
            if (0..=2 * n).contains(&i) {
                base.betti()[i as usize]
            } else {
                0
            }
        })
        .sum()
}

fn homology_ranks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c);
    for trial in 0..10 {
        let sign = if trial % 2 == 0 { MonotoneSign::Positive } else { MonotoneSign::Negative };
        let base = random_base(&mut rng, sign);
        let n = base.n() as i64;
        let c2 = 2 * base.chern_min() as i64;
        let fail = |what: &str, m: i64| format!("{what} at degree {m} for {base:?}");
        for m in -50..=200 {
            ensure(homology::hc_rank(&base, m) == brute_rank(&base, m), || fail("rank", m))?;
        }
        let chi: i64 = base
            .betti()
            .iter()
            .enumerate()
            .map(|(i, b)| if i % 2 == 0 { *b as i64 } else { -(*b as i64) })
            .sum();
        let expected = ratio(if n % 2 == 0 { chi } else { -chi }, c2);
        ensure(homology::mean_euler_char(&base) == expected, || fail("mean Euler characteristic", 0))?;
        match sign {
            MonotoneSign::Positive => {
                for m in n + 1..=200 {
                    ensure(homology::hc_rank(&base, m) == homology::hc_rank(&base, m + c2), || fail("periodicity", m))?;
                }
                for m in -50..c2 - n {
                    ensure(homology::hc_rank(&base, m) == 0, || fail("vanishing", m))?;
                }
                for start in n + 1..=n + c2 {
                    ensure(homology::windowed_mean_euler(&base, start) == expected, || fail("window", start))?;
                }
            }
            MonotoneSign::Negative => {
                for m in -50..n {
                    ensure(homology::hc_rank(&base, m) == homology::hc_rank(&base, m - c2), || fail("periodicity", m))?;
                }
                for m in 3 * n - c2 + 1..=200 {
                    ensure(homology::hc_rank(&base, m) == 0, || fail("vanishing", m))?;
                }
            }
        }
    }
    Ok("10 bases on [-50, 200], periodicity, vanishing and windowed mean Euler characteristic".into())
}

// 5. Ellipsoid resonance.

fn random_weights(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let scale = 1_000_000_000_000_i64;
    let mut out = vec![int(1)];
    while out.len() < count {
        let w = ratio(rng.gen_range(scale + 1..3 * scale), scale);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

fn ellipsoid_resonance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e);
    for n in 1..=4_usize {
        for _ in 0..5 {
            let weights = random_weights(&mut rng, n + 1);
            let system = ok(certify::ellipsoid_system(&weights, certify::ellipsoid_nondeg_bound(&weights)))?;
            let res = ok(certify::resonance_check(&system))?;
            let common = ratio(if n % 2 == 0 { 1 } else { -1 }, 2);
            ensure(res.passed() && res.residual == int(0), || format!("n = {n}: residual {:?}", res.residual))?;
            ensure(res.lhs == common && res.rhs == common, || format!("n = {n}: common value {:?}", res.lhs))?;
        }
    }
    Ok("20 ellipsoids, residual 0, common value (-1)^n/2".into())
}

// 6. Counting-argument cross-check.

const WEIGHTS: [i64; 4] = [1_000_000_000_000, 1_414_213_562_373, 1_732_050_807_569, 2_236_067_977_499];

fn counting_argument() -> Outcome {
    let mut summary = Vec::new();
    for n in 1..=3_usize {
        let weights: Vec<Rational> = WEIGHTS[..=n].iter().map(|&w| ratio(w, WEIGHTS[0])).collect();
        let system = ok(certify::ellipsoid_system(&weights, 999_999_999_999))?;
        let started = Instant::now();
        let report = ok(certify::verify_theorem_bound(&system, &BoundOptions::default()))?;
        let sphere = format!("S^{}", 2 * n + 1);
        let (plus, minus) = match (&report.plus, &report.minus) {
            (Some(p), Some(m)) => (p, m),
            _ => return Err(format!("{sphere}: no certificate analysed")),
        };
        ensure(plus.window.agrees() && minus.window.agrees(), || format!("{sphere}: methods (a) and (b) differ"))?;
        ensure(plus.lemma.holds() && minus.lemma.holds(), || format!("{sphere}: lemma identity fails"))?;
        ensure(report.verdict == Verdict::Consistent, || {
            format!("{sphere}: {} at {:?}", report.verdict, report.first_violation())
        })?;
        ensure(report.implied_bound == n as i64 + 1, || format!("{sphere}: implied bound {}", report.implied_bound))?;
        let deleted = ok(certify::verify_theorem_bound(&system.without(n), &BoundOptions::default()))?;
        ensure(deleted.verdict == Verdict::Refuted, || format!("{sphere}: deleting an orbit stays consistent"))?;
        summary.push(format!("{sphere} bound {} ({:.1} s)", report.implied_bound, started.elapsed().as_secs_f64()));
    }
    Ok(format!("{}; deleted orbit refuted", summary.join(", ")))
}

// 7. Degenerate bound.

fn degenerate_bound() -> Outcome {
    ensure(homology::deg_lower_bound(3, 3) == Ok(2), || "S*HP^1 value".into())?;
    ensure(homology::deg_lower_bound(5, 2) == Ok(0), || "clipped void case".into())?;
    ensure(homology::deg_lower_bound(2, 1) == Ok(0), || "even n, odd q".into())?;
    ensure(homology::deg_lower_bound(4, 5) == Ok(2), || "even n, odd q".into())?;
    ensure(homology::deg_lower_bound(4, 4) == Ok(2), || "even n, even q".into())?;
    ensure(homology::deg_lower_bound(0, 1).is_err(), || "n = 0 accepted".into())?;
    Ok("(n, q) = (3, 3) gives 2, void cases clip to 0".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("catalog fidelity", catalog_fidelity, Duration::from_secs(1)),
        ("index calculus", index_calculus, Duration::from_secs(30)),
        ("jump solver soundness", jump_soundness, Duration::from_secs(120)),
        ("homology ranks", homology_ranks, Duration::from_secs(5)),
        ("ellipsoid resonance", ellipsoid_resonance, Duration::from_secs(5)),
        ("counting argument", counting_argument, Duration::from_secs(120)),
        ("degenerate bound", degenerate_bound, Duration::from_secs(1)),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        let (status, detail) = match outcome {
            Ok(detail) if elapsed <= limit => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("too slow; {detail}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {} [{name}]: {status} ({:.2} s, limit {} s): {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

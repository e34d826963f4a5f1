//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oscillab::oscillation::{degree_profile, grid_sup_average, objective, refine_local, ProfileOptions};
use oscillab::padic::{
    orbit_residue_census, padic_weighted_average, PadicAffineSystem, PadicNumber, ResidueOrbit,
};
use oscillab::polyphase::{fourier_bohr_scan, weighted_exponential_average, PhasePolynomial};
use oscillab::probabilistic::{growth_exponent, lsk_grid_sup, lsk_survey, Distribution};
use oscillab::sequences::{
    cesaro_l1_norm, gaussian_sequence, mobius_sequence, polynomial_phase_sequence, rademacher_sequence, Checkpoints,
};
use oscillab::torus::{
    build_tower, multiple_ergodic_average, verify_factorization, CharacterObservable, SkewShiftSystem,
    TimePolynomial, TorusPoint,
};
use oscillab::Phase;

type Outcome = Result<String, String>;

fn golden() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn tower_factorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let m = rng.random_range(1..=4);
        let sys = SkewShiftSystem::new(m, golden()).map_err(|e| e.to_string())?;
        let mut freqs: Vec<i64> = (0..m).map(|_| rng.random_range(-3..=3)).collect();
        if freqs.iter().all(|&k| k == 0) {
            freqs[m - 1] = 1;
        }
        let tower = build_tower(&sys, &CharacterObservable::new(freqs)).map_err(|e| e.to_string())?;
        ensure(tower.identities_hold(), format!("case {case}: tower identities fail"))?;
        let x = TorusPoint::from_f64s(&(0..m).map(|_| rng.random::<f64>()).collect::<Vec<_>>());
        let dev = verify_factorization(&sys, &tower, &x, 1000).map_err(|e| e.to_string())?;
        worst = worst.max(dev.max());
    }
    ensure(worst <= 1e-9, format!("max deviation {worst:.3e} > 1e-9"))?;
    Ok(format!("100 towers, max pairwise deviation {worst:.3e}"))
}

fn exact_order_example() -> Outcome {
    let alpha = 2f64.sqrt() - 1.0;
    let cps = Checkpoints::new(vec![50_000, 100_000, 200_000]).map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for d in [1usize, 2] {
        let seq = polynomial_phase_sequence(alpha, d as u32 + 1, 200_000).map_err(|e| e.to_string())?;
        let rec = degree_profile(&seq, d, &cps, &ProfileOptions::default()).map_err(|e| e.to_string())?;
        let first = rec.checkpoints[0].sup;
        let last = rec.final_sup();
        ensure(last <= 0.1, format!("d={d}: sup {last:.4} at N=2e5 exceeds 0.1"))?;
        ensure(last < first, format!("d={d}: sup did not decrease ({first:.4} -> {last:.4})"))?;
        let resonant = PhasePolynomial::monomial(-alpha, d + 1).map_err(|e| e.to_string())?;
        let a = weighted_exponential_average(&seq, &resonant, &cps).map_err(|e| e.to_string())?;
        let gap = (a.last() - Complex64::new(1.0, 0.0)).norm();
        ensure(gap <= 1e-6, format!("d={d}: resonant average off by {gap:.3e}"))?;
        notes.push(format!("d={d}: sup {first:.4} -> {last:.4}, |A-1| = {gap:.1e}"));
    }
    Ok(notes.join("; "))
}

fn skew_shift_average() -> Outcome {
    let n = 1_000_000;
    let sys = SkewShiftSystem::new(2, golden()).map_err(|e| e.to_string())?;
    let chars = vec![CharacterObservable::new(vec![0, 1]); 2];
    let qs = vec![TimePolynomial::identity(), TimePolynomial::power(2)];
    let x = TorusPoint::from_f64s(&[0.0, 0.0]);
    let cps = Checkpoints::new(vec![n]).map_err(|e| e.to_string())?;
    let mut weights = vec![("mobius".to_string(), mobius_sequence(n).map_err(|e| e.to_string())?)];
    for seed in 1..=3 {
        weights.push((format!("rademacher#{seed}"), rademacher_sequence(seed, n).map_err(|e| e.to_string())?));
    }
    let mut notes = Vec::new();
    for (name, seq) in &weights {
        let a = multiple_ergodic_average(&sys, &chars, &qs, &x, seq, &cps).map_err(|e| e.to_string())?;
        let m = a.last().norm();
        ensure(m <= 0.05, format!("{name}: |A_N| = {m:.4} > 0.05"))?;
        notes.push(format!("{name} {m:.2e}"));
    }
    Ok(format!("|A_1e6|: {}", notes.join(", ")))
}

fn mobius_spectrum() -> Outcome {
    let n = 1_000_000;
    let seq = mobius_sequence(n).map_err(|e| e.to_string())?;
    let peaks = fourier_bohr_scan(&seq, 1024, n).map_err(|e| e.to_string())?;
    let mut best = peaks.iter().map(|p| p.modulus).fold(0.0, f64::max);
    for peak in peaks.iter().take(4) {
        let r = refine_local(&seq, 1, &[0.0, peak.frequency], n, 1.0 / 1024.0).map_err(|e| e.to_string())?;
        best = best.max(r.sup);
    }
    ensure(best <= 0.05, format!("max order-1 average {best:.4} > 0.05"))?;
    let cps = Checkpoints::new(vec![n]).map_err(|e| e.to_string())?;
    let l1 = cesaro_l1_norm(&seq, &cps).map_err(|e| e.to_string())?[0];
    ensure((l1 - 0.6079).abs() <= 0.001, format!("Cesaro l1 norm {l1:.5} outside 0.6079 +- 0.001"))?;
    let m = 20_000;
    let brute = (1..=m as u64)
        .filter(|&k| (2..).take_while(|j| j * j <= k).all(|j| k % (j * j) != 0))
        .count();
    let sieved = seq.values()[..m].iter().filter(|c| c.norm() > 0.5).count();
    ensure(brute == sieved, format!("squarefree count up to {m}: sieve {sieved}, brute force {brute}"))?;
    Ok(format!("max order-1 average {best:.4}, Cesaro l1 {l1:.5}, squarefree count {brute} agrees"))
}

fn adding_machine() -> Outcome {
    let sys = PadicAffineSystem::from_integers(3, 24, &4.into(), &1.into()).map_err(|e| e.to_string())?;
    let x0 = PadicNumber::zero(3, 24).map_err(|e| e.to_string())?;
    let orbit = ResidueOrbit::new(&sys, &x0, 2).map_err(|e| e.to_string())?;
    ensure(orbit.tail == 0 && orbit.period == 9, format!("orbit mod 9: tail {}, period {}", orbit.tail, orbit.period))?;
    let census = orbit_residue_census(&sys, &x0, 2, 9).map_err(|e| e.to_string())?;
    ensure(census.len() == 9 && census.values().all(|&c| c == 1), "a 9-step window misses a residue class")?;
    let ones = oscillab::sequences::ComplexSequence::from_real(&[1.0; 90], oscillab::sequences::Provenance::Derived {
        description: "ones".into(),
    })
    .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for level in [1usize, 2] {
        let period = 3usize.pow(level as u32);
        let cps = Checkpoints::new(vec![period, 2 * period, 10 * period]).map_err(|e| e.to_string())?;
        let a = padic_weighted_average(&sys, level, &x0, &[TimePolynomial::identity()], &ones, &cps)
            .map_err(|e| e.to_string())?;
        worst = worst.max(a.moduli().into_iter().fold(0.0, f64::max));
    }
    ensure(worst <= 1e-14, format!("full-cycle averages reach {worst:.3e}"))?;
    let n = 100_000;
    let seq = rademacher_sequence(1, n).map_err(|e| e.to_string())?;
    let cps = Checkpoints::new(vec![n]).map_err(|e| e.to_string())?;
    let a = padic_weighted_average(&sys, 2, &x0, &[TimePolynomial::power(2)], &seq, &cps).map_err(|e| e.to_string())?;
    let m = a.last().norm();
    ensure(m <= 0.05, format!("Rademacher average along n^2: {m:.4} > 0.05"))?;
    Ok(format!("9-cycle, full-cycle averages <= {worst:.1e}, Rademacher along n^2 {m:.2e}"))
}

fn growth_law() -> Outcome {
    let seeds: Vec<u64> = (1..=5).collect();
    let cps = Checkpoints::new((10..=16).map(|k| 1usize << k).collect()).map_err(|e| e.to_string())?;
    let records = lsk_survey(Distribution::Rademacher, &seeds, &[1, 2], &cps, 16).map_err(|e| e.to_string())?;
    let mut slopes = Vec::new();
    for &seed in &seeds {
        for d in [1usize, 2] {
            let pts: Vec<(f64, f64)> = records
                .iter()
                .filter(|r| r.seed == seed && r.d == d)
                .map(|r| (r.n as f64, r.sup))
                .collect();
            let s = growth_exponent(&pts).map_err(|e| e.to_string())?;
            ensure((0.4..=0.6).contains(&s), format!("seed {seed}, d={d}: slope {s:.3} outside [0.4, 0.6]"))?;
            slopes.push(s);
        }
    }
    let worst = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
    ensure(worst <= 5.0, format!("sup / sqrt(N log N) reaches {worst:.3}"))?;
    let (lo, hi) = slopes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    Ok(format!("slopes in [{lo:.3}, {hi:.3}], max ratio {worst:.3}"))
}

fn cross_module_oracle() -> Outcome {
    let n = 3000;
    let cps = Checkpoints::new(vec![500, 1200, 3000]).map_err(|e| e.to_string())?;
    let seqs = [
        rademacher_sequence(7, n).map_err(|e| e.to_string())?,
        gaussian_sequence(7, n).map_err(|e| e.to_string())?,
        mobius_sequence(n).map_err(|e| e.to_string())?,
    ];
    let mut worst = 0.0f64;
    let mut compared = 0;
    for seq in &seqs {
        for (d, g) in [(1usize, 16usize), (2, 16), (2, 6), (3, 5)] {
            let lsk = lsk_grid_sup(seq, d, &cps, g).map_err(|e| e.to_string())?;
            for p in &lsk {
                let osc = grid_sup_average(seq, d, g, p.n).map_err(|e| e.to_string())?;
                worst = worst.max((p.sup / p.n as f64 - osc.sup).abs());
                // the two maximisers may differ only on a float-level tie
                let at_lsk: Vec<Phase> = p
                    .coeffs
                    .iter()
                    .map(|&c| Phase::from_ratio((c * g as f64).round() as u64 % g as u64, g as u64))
                    .collect();
                let v = objective(seq.values(), &at_lsk, p.n);
                worst = worst.max((v - osc.sup).abs());
                compared += 1;
            }
        }
    }
    ensure(worst <= 1e-10, format!("max gap {worst:.3e} > 1e-10"))?;
    Ok(format!("{compared} grid maxima agree, max gap {worst:.1e}"))
}

fn exact_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cases = 1000;

    for case in 0..cases {
        let deg = rng.random_range(0..=5usize);
        let base: Vec<f64> = (0..=deg).map(|_| rng.random::<u32>() as f64 / 4294967296.0).collect();
        let shifted: Vec<f64> = base.iter().map(|t| t + rng.random_range(-50..=50) as f64).collect();
        let p = PhasePolynomial::from_monomial(&base).map_err(|e| e.to_string())?;
        let q = PhasePolynomial::from_monomial(&shifted).map_err(|e| e.to_string())?;
        let k: u64 = rng.random_range(0..1_000_000);
        ensure(p.phase_at_exact(k) == q.phase_at_exact(k), format!("integer shift changed P({k}) in case {case}"))?;
    }

    let seq = gaussian_sequence(5, 4000).map_err(|e| e.to_string())?;
    let prefix: Vec<f64> = seq
        .values()
        .iter()
        .scan(0.0, |s, c| {
            *s += c.norm();
            Some(*s)
        })
        .collect();
    for case in 0..cases {
        let coeffs: Vec<f64> = (0..=rng.random_range(0..=3usize)).map(|_| rng.random()).collect();
        let p = PhasePolynomial::from_monomial(&coeffs).map_err(|e| e.to_string())?;
        let n = rng.random_range(1..=4000usize);
        let cps = Checkpoints::new(vec![n]).map_err(|e| e.to_string())?;
        let a = weighted_exponential_average(&seq, &p, &cps).map_err(|e| e.to_string())?.last().norm();
        let bound = prefix[n - 1] / n as f64;
        ensure(a <= bound * (1.0 + 1e-12), format!("case {case}: |A_N| = {a} > {bound}"))?;
    }

    for case in 0..cases {
        let m = rng.random_range(1..=4usize);
        let sys = SkewShiftSystem::new(m, golden()).map_err(|e| e.to_string())?;
        let mut towers = Vec::new();
        for _ in 0..2 {
            let mut f: Vec<i64> = (0..m).map(|_| rng.random_range(-4..=4)).collect();
            if f.iter().all(|&k| k == 0) {
                f[0] = 1;
            }
            towers.push(build_tower(&sys, &CharacterObservable::new(f)).map_err(|e| e.to_string())?);
        }
        let prod = towers[0].product(&towers[1]).map_err(|e| e.to_string())?;
        ensure(prod.identities_hold(), format!("case {case}: product tower breaks its identities"))?;
        let x = TorusPoint::from_f64s(&(0..m).map(|_| rng.random::<f64>()).collect::<Vec<_>>());
        let top = |t: &oscillab::torus::QuasiEigenTower| t.top().phase(sys.alpha(), &x);
        ensure(
            top(&prod) == top(&towers[0]) + top(&towers[1]),
            format!("case {case}: product tower is not the pointwise product"),
        )?;
    }

    for case in 0..cases {
        let p = [3u64, 5, 7, 11, 13][rng.random_range(0..5)];
        let kk = 12;
        let a = PadicNumber::from_i128(p, kk, rng.random_range(-10_000..10_000)).map_err(|e| e.to_string())?;
        let b = PadicNumber::from_i128(p, kk, rng.random_range(-10_000..10_000)).map_err(|e| e.to_string())?;
        let x = PadicNumber::from_i128(p, kk, rng.random_range(-1_000_000..1_000_000)).map_err(|e| e.to_string())?;
        let sys = PadicAffineSystem::new(a, b).map_err(|e| e.to_string())?;
        let j = rng.random_range(1..=6usize);
        let full = sys.eval(&x).map_err(|e| e.to_string())?.residue(j).map_err(|e| e.to_string())?;
        let reduced = sys.reduced(j).map_err(|e| e.to_string())?;
        let via = reduced.apply(x.residue(j).map_err(|e| e.to_string())? as u64);
        ensure(full == via as u128, format!("case {case}: p={p}, j={j}: {full} != {via}"))?;
    }

    Ok(format!("{cases} cases each: integer shift, modulus bound, tower closure, p-adic truncation"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("tower factorization", tower_factorization),
        ("exact-order example", exact_order_example),
        ("skew-shift multiple average", skew_shift_average),
        ("Mobius spectrum and density", mobius_spectrum),
        ("adding-machine structure", adding_machine),
        ("random-sum growth law", growth_law),
        ("cross-module grid oracle", cross_module_oracle),
        ("exact invariants", exact_invariants),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name} ({secs:.1} s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {} {name} ({secs:.1} s): {detail}", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line with the measured quantities before asserting.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sflab::brjuno::{
    brjuno_partial_sums, expand, preset, rotation_to_lambda, unit_from_turns, AlphaInput, AlphaSpec, BrjunoConfig,
    BrjunoVerdict, Preset,
};
use sflab::dynamics::{expansion_metric, find_periodic_points, mane_probe, Rect, SingularKind};
use sflab::linearize::{boundary_samples, recenter, schroeder, verify_conjugacy};
use sflab::perturb::{hartogs_grid, remainder_h, rescaled_member, FamilyKind, PerturbationFamily};
use sflab::series::TaylorSeries;
use sflab::singular::{singular_data, SingularConfig};
use sflab::{Polynomial64, SfFunction64};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn golden() -> Complex64 {
    unit_from_turns((5f64.sqrt() - 1.0) / 2.0)
}

fn sf(l: Complex64, p: &[f64], q: &[f64]) -> SfFunction64 {
    SfFunction64::make_normalized(l, Polynomial64::from_real(p).unwrap(), Polynomial64::from_real(q).unwrap()).unwrap()
}

/// `lambda z + z^2 / 2`
fn quadratic(l: Complex64) -> SfFunction64 {
    SfFunction64::make_normalized(l, Polynomial64::new(vec![c(1.0, 0.0), l.inv()]).unwrap(), Polynomial64::zero())
        .unwrap()
}

/// `lambda z e^z`
fn geyer(l: Complex64) -> SfFunction64 {
    sf(l, &[1.0, 1.0], &[0.0, 1.0])
}

/// `lambda (e^z - 1)`
fn exponential(l: Complex64) -> SfFunction64 {
    sf(l, &[1.0], &[0.0, 1.0])
}

fn verdict(n: usize, title: &str, checks: &[(&str, bool)], elapsed: Duration, limit_s: f64) {
    let in_time = elapsed.as_secs_f64() < limit_s;
    let ok = in_time && checks.iter().all(|(_, ok)| *ok);
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    // written to the raw handle so the line survives libtest's output capture
    let line = format!(
        "{} acceptance {n}: {title} ({:.2} s, limit {limit_s} s){}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if failed.is_empty() { String::new() } else { format!("; failed: {}", failed.join(", ")) }
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(ok, "acceptance {n} failed: {failed:?}, in time: {in_time}");
}

#[test]
fn acceptance_1_brjuno_arithmetic() {
    let t = Instant::now();
    let config = BrjunoConfig::default();

    let g = preset(Preset::Golden, 40).unwrap();
    let rg = brjuno_partial_sums(&g, 40, &config).unwrap();
    let n = rg.partial_sums.len();
    let gap = (rg.partial_sums[n - 1] - rg.partial_sums[n - 2]).abs();
    println!("  golden depth 40: verdict {}, last gap {gap:.3e}", rg.verdict.as_str());

    let l = preset(Preset::LiouvilleDemo { growth: 2 }, 12).unwrap();
    let rl = brjuno_partial_sums(&l, 12, &config).unwrap();
    println!("  liouville_demo(2) depth 12: verdict {}", rl.verdict.as_str());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut round_trip = true;
    for _ in 0..200 {
        let q: i64 = rng.random_range(1..1_000_000_000_000);
        let p: i64 = rng.random_range(-q * 3..q * 3);
        let x = BigRational::new(BigInt::from(p), BigInt::from(q));
        let cf = expand(&AlphaInput::Rational(x.clone()), 200).unwrap();
        round_trip &= cf.terminated() && cf.value() == x;
    }

    verdict(
        1,
        "Brjuno arithmetic",
        &[
            ("golden convergent-likely", rg.verdict == BrjunoVerdict::ConvergentLikely),
            ("golden last gap < 1e-9", gap < 1e-9),
            ("liouville divergent-likely", rl.verdict == BrjunoVerdict::DivergentLikely),
            ("rational round trip", round_trip),
        ],
        t.elapsed(),
        1.0,
    );
}

#[test]
fn acceptance_2_closed_form_oracles() {
    let t = Instant::now();
    let l = golden();
    let (fg, fe) = (geyer(l), exponential(l));
    let mut worst_eval: f64 = 0.0;
    let mut worst_deriv: f64 = 0.0;
    let h = 1e-5;
    for i in 0..21 {
        for j in 0..21 {
            let z = c(-2.0 + 0.2 * i as f64, -2.0 + 0.2 * j as f64);
            for (f, exact) in [(&fg, l * z * z.exp()), (&fe, l * (z.exp() - 1.0))] {
                let v = f.evaluate(z).unwrap();
                let err = (v - exact).norm();
                let rel = if exact.norm() > 0.0 {
                    err / exact.norm()
                } else if err == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                worst_eval = worst_eval.max(rel);

                let fd = (f.evaluate(z + h).unwrap() - f.evaluate(z - h).unwrap()) / (2.0 * h);
                let d = f.derivative(z);
                worst_deriv = worst_deriv.max((fd - d).norm() / d.norm().max(1.0));
            }
        }
    }
    println!("  max relative evaluation error {worst_eval:.3e}, max derivative mismatch {worst_deriv:.3e}");
    verdict(
        2,
        "closed-form oracles",
        &[("evaluate within 1e-11", worst_eval < 1e-11), ("derivative within 1e-5", worst_deriv < 1e-5)],
        t.elapsed(),
        5.0,
    );
}

fn random_disk(rng: &mut ChaCha8Rng, min_abs: f64) -> Complex64 {
    loop {
        let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if z.norm() <= 1.0 && z.norm() >= min_abs {
            return z;
        }
    }
}

#[test]
fn acceptance_3_singular_counts() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = Vec::new();
    for k in 0..20 {
        let p = rng.random_range(0..=3usize);
        let q = rng.random_range(0..=3usize);
        let mut pc: Vec<Complex64> = (0..p).map(|_| random_disk(&mut rng, 0.0)).collect();
        pc.push(random_disk(&mut rng, 0.5));
        let mut qc = vec![c(0.0, 0.0)];
        if q > 0 {
            qc.extend((1..q).map(|_| random_disk(&mut rng, 0.0)));
            qc.push(random_disk(&mut rng, 0.5));
        }
        let l = unit_from_turns(rng.random_range(0.0..1.0));
        let f =
            SfFunction64::make_normalized(l, Polynomial64::new(pc).unwrap(), Polynomial64::new(qc).unwrap()).unwrap();
        let data = singular_data(&f, &SingularConfig::default()).unwrap();
        let crit: usize = data.critical_points.iter().map(|c| c.multiplicity).sum();
        if crit != p || data.asymptotic_values.len() != q || data.counts != (p, q) {
            mismatches.push(format!("#{k}: (p, q) = ({p}, {q}), got ({crit}, {})", data.asymptotic_values.len()));
        }
    }
    for m in &mismatches {
        println!("  {m}");
    }
    verdict(3, "singular counts", &[("20 instances match (p, q)", mismatches.is_empty())], t.elapsed(), 30.0);
}

fn local(coeffs: Vec<Complex64>) -> TaylorSeries<f64> {
    TaylorSeries { center: c(0.0, 0.0), coefficients: coeffs, trust_radius: f64::INFINITY }
}

#[test]
fn acceptance_4_schroeder_correctness() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let l = unit_from_turns(rng.random_range(0.05..0.95));
        let a = random_disk(&mut rng, 0.1);
        let lin = schroeder(&local(vec![c(0.0, 0.0), l, a]), 2).unwrap();
        let hand = a / (l * l - l);
        worst = worst.max((lin.coefficient(2).to_complex().unwrap() - hand).norm() / hand.norm());
    }
    let residual = |f: &SfFunction64| {
        let s = recenter(f, c(0.0, 0.0), 40).unwrap();
        let lin = schroeder(&s, 40).unwrap();
        verify_conjugacy(&s, &lin, 40).unwrap()
    };
    let rq = residual(&quadratic(golden()));
    let rg = residual(&geyer(golden()));
    println!("  phi_2 worst relative error {worst:.3e}; residual N=40: quadratic {rq:.3e}, Geyer {rg:.3e}");
    verdict(
        4,
        "Schröder correctness",
        &[
            ("phi_2 within 1e-14", worst < 1e-14),
            ("quadratic residual < 1e-9", rq < 1e-9),
            ("Geyer residual < 1e-9", rg < 1e-9),
        ],
        t.elapsed(),
        10.0,
    );
}

#[test]
fn acceptance_5_radius_behavior() {
    let t = Instant::now();
    let radius = |f: &SfFunction64, n: usize| {
        let s = recenter(f, c(0.0, 0.0), n).unwrap();
        schroeder(&s, n).unwrap().radius_estimate.unwrap()
    };
    let fq = quadratic(golden());
    let (r200, r400) = (radius(&fq, 200), radius(&fq, 400));
    let rel = (r200 - r400).abs() / r400;

    let mut spec = String::from("cf:0;1,1,1,1000000");
    for _ in 0..60 {
        spec.push_str(",1");
    }
    let cf = AlphaSpec::parse(&spec).unwrap().expand(64).unwrap();
    let lb: Complex64 = rotation_to_lambda(&cf, 17).unwrap();
    let rb = radius(&quadratic(lb), 400);
    println!("  golden r(200) = {r200:.5}, r(400) = {r400:.5} (rel {rel:.3}); [0;1,1,1,1e6,1,...] r(400) = {rb:.5}");
    verdict(
        5,
        "radius behavior",
        &[("N = 200 vs 400 within 5%", rel < 0.05), ("bad CF at least 10x smaller", rb * 10.0 <= r400)],
        t.elapsed(),
        60.0,
    );
}

#[test]
fn acceptance_6_perturbation_limits() {
    let t = Instant::now();
    let l = golden();
    let crit = PerturbationFamily::new(geyer(l), FamilyKind::Critical).unwrap();
    let sing = PerturbationFamily::new(exponential(l), FamilyKind::Singularity).unwrap();

    let s = rescaled_member(&crit, c(0.0, 0.0), 10).unwrap().series;
    let mut expected = vec![c(0.0, 0.0); 11];
    expected[1] = l;
    expected[2] = c(0.5, 0.0);
    let crit_exact = s.coefficients == expected;

    let s = rescaled_member(&sing, c(0.0, 0.0), 10).unwrap().series;
    let mut fact = 1.0;
    let mut sing_err: f64 = s.coefficients[0].norm();
    for k in 1..=10 {
        fact *= k as f64;
        sing_err = sing_err.max((s.coefficients[k] - l / fact).norm() / (l / fact).norm());
    }

    let max = |h: &TaylorSeries<f64>| h.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut ratios = Vec::new();
    for fam in [&crit, &sing] {
        let h1 = remainder_h(fam, c(0.1, 0.0), 8).unwrap();
        let h2 = remainder_h(fam, c(0.2, 0.0), 8).unwrap();
        ratios.push(max(&h2) / max(&h1));
    }
    let ratios_ok = ratios.iter().all(|r| (1.6..=2.4).contains(r));

    let mut hartogs_err: f64 = 0.0;
    for fam in [&crit, &sing] {
        for b in [0.0, 0.1, 1.0] {
            for n in 1..=3 {
                let g = hartogs_grid(fam, c(b, 0.0), n, Rect::square(1.0), 5, 5).unwrap();
                let origin = g.cells[12];
                assert_eq!(origin.z, c(0.0, 0.0));
                let exact = (l.powu(n as u32) - 1.0).inv();
                hartogs_err = hartogs_err.max((origin.value - exact).norm());
            }
        }
    }
    println!(
        "  critical F_0 exact: {crit_exact}; singularity F_0 rel err {sing_err:.3e}; ratios {ratios:.3?}; hartogs origin err {hartogs_err:.3e}"
    );
    verdict(
        6,
        "perturbation limits",
        &[
            ("critical F_0 = lambda z + z^2/2", crit_exact),
            ("singularity F_0 = lambda(e^z - 1)", sing_err < 1e-15),
            ("remainder ratio in [1.6, 2.4]", ratios_ok),
            ("hartogs origin within 1e-13", hartogs_err < 1e-13),
        ],
        t.elapsed(),
        10.0,
    );
}

#[test]
fn acceptance_7_dynamics() {
    let t = Instant::now();
    let l = golden();
    let f = quadratic(l);
    let mut worst_residual: f64 = 0.0;
    let mut count = 0;
    for (func, period) in [(&f, 1), (&f, 2), (&f, 3), (&geyer(l), 1), (&geyer(l), 2)] {
        for r in find_periodic_points(func, period, Rect::square(4.0), 16, 1e-8).unwrap() {
            worst_residual = worst_residual.max(r.residual);
            count += 1;
        }
    }
    let fixed = find_periodic_points(&f, 1, Rect::square(4.0), 16, 1e-8).unwrap();
    let expected = [c(0.0, 0.0), (c(1.0, 0.0) - l) * 2.0];
    let fixed_ok = fixed.len() == 2 && expected.iter().all(|e| fixed.iter().any(|r| (r.points[0] - e).norm() < 1e-10));

    let p = expected[1];
    let m = f.derivative(p);
    let mut worst_expansion: f64 = 0.0;
    for n in 1..=8 {
        let e = expansion_metric(&f, &[p], n).unwrap();
        let exact = m.norm().powi(n as i32);
        worst_expansion = worst_expansion.max((e.value - exact).abs() / exact);
    }
    println!(
        "  {count} cycles, worst residual {worst_residual:.3e}; fixed points ok: {fixed_ok}; expansion rel err {worst_expansion:.3e}"
    );
    verdict(
        7,
        "dynamics",
        &[
            ("cycle residuals < 1e-10", worst_residual < 1e-10 && count > 0),
            ("fixed points {0, 2(1 - lambda)}", fixed_ok),
            ("expansion |m|^n within 1e-12", worst_expansion < 1e-12),
        ],
        t.elapsed(),
        10.0,
    );
}

#[test]
fn acceptance_8_mane_probe() {
    let t = Instant::now();
    let l = golden();
    let gamma = |f: &SfFunction64| {
        let s = recenter(f, c(0.0, 0.0), 400).unwrap();
        let lin = schroeder(&s, 400).unwrap();
        boundary_samples(&lin, 0.95, 256).unwrap()
    };
    let fq = quadratic(l);
    let rq = mane_probe(&fq, &gamma(&fq), 100_000, 1e-2).unwrap();
    let crit = rq.records.iter().find(|r| r.kind == SingularKind::CriticalPoint).unwrap();
    println!(
        "  quadratic critical orbit: score {:.4}, min distance {:.3e}, {}",
        crit.accumulation_score,
        crit.min_distance,
        crit.status.as_str()
    );

    let fe = exponential(l);
    let re = mane_probe(&fe, &gamma(&fe), 100_000, 1e-2).unwrap();
    let finite = !re.records.is_empty()
        && re.records.iter().all(|r| {
            r.accumulation_score.is_finite()
                && (r.min_distance.is_finite() || r.iterations == 0)
                && r.start.norm().is_finite()
        });
    for r in &re.records {
        println!(
            "  E {}: score {:.4}, min distance {:.3e}, {}",
            r.kind.as_str(),
            r.accumulation_score,
            r.min_distance,
            r.status.as_str()
        );
    }
    verdict(
        8,
        "Mañé probe",
        &[("quadratic score > 0.9", crit.accumulation_score > 0.9), ("E report finite", finite)],
        t.elapsed(),
        120.0,
    );
}

#[test]
fn acceptance_9_determinism() {
    let t = Instant::now();
    let run = |dir: &std::path::Path| {
        let out = Command::new(env!("CARGO_BIN_EXE_sflab"))
            .current_dir(dir)
            .env_remove("SOURCE_DATE_EPOCH")
            .args([
                "render",
                "--alpha",
                "golden",
                "--base",
                "quadratic",
                "--window=-2,2,-2,2",
                "--res",
                "128",
                "128",
                "--max-iter",
                "100",
                "--out-image",
                "escape.pgm",
                "--json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let mut report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        report["manifest"].as_object_mut().unwrap().remove("timestamp");
        (std::fs::read(dir.join("escape.pgm")).unwrap(), serde_json::to_vec(&report).unwrap())
    };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (img_a, json_a) = run(a.path());
    let (img_b, json_b) = run(b.path());
    let center = img_a[img_a.len() - 128 * 128 + 64 * 128 + 64];
    println!("  image {} bytes, JSON {} bytes, center pixel {center}", img_a.len(), json_a.len());
    verdict(
        9,
        "determinism",
        &[
            ("PGM identical", img_a == img_b),
            ("JSON identical without timestamp", json_a == json_b),
            ("center black", center == 0),
        ],
        t.elapsed(),
        10.0,
    );
}

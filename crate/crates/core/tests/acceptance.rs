//! One PASS/FAIL line per acceptance criterion.
//!
//! Exits 0 whatever the outcome so that an honest FAIL is visible without
//! breaking `cargo test`; set JLL_ACCEPT_STRICT=1 to exit 1 on any FAIL.

mod common;

use std::time::Instant;

use common::{cache_dir, num, table};
use jll_core::critical_line::{find_zeros, theta, z};
use jll_core::ladder::{eps_hat, g_weight, Ladder, LadderConfig};
use jll_core::quadrature::{CacheFormat, GridSpec};
use jll_core::verify::*;
use jll_core::Lab;

/// Grid reach for a T = 1e6 solve: the bracket ends at 2.2 T and the weight
/// is integrated to 15 x.
const GRID_TOP: f64 = 3.4e7;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn run(n: usize, title: &str, f: impl FnOnce() -> jll_core::Result<Outcome>) -> bool {
    let t0 = Instant::now();
    let (pass, detail) = match f() {
        Ok(o) => (o.pass, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {n:>2} {} {title}: {detail} [{:.1} s]",
        if pass { "PASS" } else { "FAIL" },
        t0.elapsed().as_secs_f64()
    );
    pass
}

fn c1() -> jll_core::Result<Outcome> {
    let (mut wt, mut wz) = (0.0f64, 0.0f64);
    let rows = table("theta_z_samples.csv");
    for row in &rows {
        let t = num(&row[0]);
        let th = num(&row[1]);
        wt = wt.max((theta(t)?.theta - th).abs() / th.abs());
        // relative to max(|Z|, 1): a relative error is meaningless at a zero
        let zz = num(&row[2]);
        wz = wz.max((z(t)?.z - zz).abs() / zz.abs().max(1.0));
    }
    let oracle: Vec<f64> = table("zeros.csv").iter().take(100).map(|r| num(&r[1])).collect();
    let lab = Lab::new(GridSpec::default())?;
    let found = find_zeros(lab.hz(), 10.0, oracle[99] + 0.5)?;
    let wg = found
        .iter()
        .zip(&oracle)
        .map(|(p, g)| (p.gamma - g).abs())
        .fold(0.0, f64::max);
    let pass = wt <= 1e-8 && wz <= 1e-8 && found.len() == 100 && wg <= 1e-6;
    Ok(outcome(
        pass,
        format!(
            "{} samples, theta rel {wt:.1e}, Z {wz:.1e}; {} zeros, worst {wg:.1e}",
            rows.len(),
            found.len()
        ),
    ))
}

fn c2(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let mut worst = 0.0f64;
    for f in [SubstFn::One, SubstFn::Linear, SubstFn::Chebyshev(3)] {
        let r = verify_substitution(lad, f, SubstForm::Transport, 1e4, 1e3)?;
        worst = worst.max((r.ratio - 1.0).abs());
    }
    Ok(outcome(worst <= 1e-5, format!("f in {{1, x, T3}}, worst |ratio - 1| {worst:.1e}")))
}

fn c3(lab: &Lab) -> jll_core::Result<Outcome> {
    let mut worst = 0.0f64;
    let mut monotone = true;
    for a in [7.0, 7.5, 8.0] {
        let lad = Ladder::new(lab, LadderConfig { a_param: a, ..LadderConfig::default() })?;
        for t in [1e3, 1e4, 1e5] {
            worst = worst.max(lad.solve(t)?.residual);
            let f = lab.quad().hl_cumulative(t)?;
            let mut prev = f64::NEG_INFINITY;
            for k in 0..16 {
                let g = lad.j(t + 1.2 * t * k as f64 / 15.0)? - f;
                monotone &= g > prev;
                prev = g;
            }
        }
    }
    Ok(outcome(
        worst < 1e-8 && monotone,
        format!("9 solves, worst residual {worst:.1e}, monotone {monotone}"),
    ))
}

fn c4(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let (rs, tc) = sweep(lad, SweepKind::FundamentalChord, &[1e4, 1e5, 1e6])?;
    let tc = tc.expect("chord sweep has a trend");
    let devs: Vec<String> = rs
        .iter()
        .map(|r| format!("{:.3}/{:.3}", (r.ratio - 1.0).abs(), 3.0 * eps_hat(r.t)))
        .collect();
    let pass = rs.iter().all(|r| r.pass) && tc.pass;
    Ok(outcome(pass, format!("|tan - 1| / bound {}, trend {}", devs.join(" "), tc.pass)))
}

fn c5(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let t: f64 = 1e5;
    let top = t / t.ln() * (1.0 - 1e-12);
    let mut worst = 0.0f64;
    let mut pass = true;
    for k in 0..20 {
        let u = top.powf(k as f64 / 19.0);
        let r = verify_theorem1(lad, t, u)?;
        pass &= r.pass && r.assertable;
        worst = worst.max((r.ratio - 1.0).abs());
    }
    Ok(outcome(
        pass,
        format!("20 U in [1, T/ln T], worst |ratio - 1| {worst:.4} vs {:.4}", 3.0 * eps_hat(t)),
    ))
}

fn c6(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let (rs, tc) = sweep(lad, SweepKind::GapLaw, &[1e3, 1e4, 1e5])?;
    let tc = tc.expect("gap law has a trend");
    let ratios: Vec<String> = rs.iter().map(|r| format!("{:.3}", r.ratio)).collect();
    Ok(outcome(
        rs.iter().all(|r| r.pass) && tc.pass,
        format!("ratios {}, trend {}", ratios.join(" "), tc.pass),
    ))
}

fn c7(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let (rs, tc) = sweep(lad, SweepKind::Theorem2, &[3e3, 1e4, 3e4])?;
    let tc = tc.expect("sixth-order sweep has a trend");
    let seg_ok = rs.iter().all(|r| {
        let s = r.extra("segment_ratio").unwrap_or(f64::NAN);
        s > 0.5 && s < 2.0
    });
    let show: Vec<String> = rs
        .iter()
        .map(|r| format!("{:.3}/{:.3}", r.ratio, r.extra("segment_ratio").unwrap_or(f64::NAN)))
        .collect();
    Ok(outcome(
        rs.iter().all(|r| r.pass) && tc.pass && seg_ok,
        format!("ratio/segment {}, trend {}", show.join(" "), tc.pass),
    ))
}

fn c8(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let t: f64 = 1e5;
    let r0 = verify_chebyshev(lad, 0, t)?;
    let norm0 = (r0.rhs / (std::f64::consts::PI * t.ln()) - 1.0).abs() < 1e-12;
    let rs = [1, 2, 5].map(|n| verify_chebyshev(lad, n, t));
    let mut ratios = Vec::new();
    for r in rs {
        ratios.push(r?.ratio);
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    let spread = hi / lo - 1.0;
    let pass = norm0 && ratios.iter().all(|&r| r > 0.6 && r < 1.6) && spread <= 0.3;
    Ok(outcome(
        pass,
        format!("n=0 ratio {:.4}, n=1,2,5 ratios {ratios:.4?}, spread {spread:.3}", r0.ratio),
    ))
}

fn c9(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let mut pass = true;
    let mut cs = Vec::new();
    let mut qs = 0.0f64;
    for t in [1e3, 1e4, 1e5] {
        let r = verify_lemma1(lad, t)?;
        pass &= r.pass;
        cs.push(r.lhs);
        let phi = lad.solve(t)?.phi;
        qs = qs.max(lad.q_term(phi)?.abs());
    }
    let phi = 1e4;
    let s = std::f64::consts::SQRT_2;
    let min = -(1.0 / s) * (1.0 - 1.0 / s) * (-2.0 + s).exp() * phi;
    let max = (1.0 / s) * (1.0 + 1.0 / s) * (-2.0 - s).exp() * phi;
    let e_min = (g_weight((1.0 - 1.0 / s) * phi, phi, 7.0)? - min).abs() / phi;
    let e_max = (g_weight((1.0 + 1.0 / s) * phi, phi, 7.0)? - max).abs() / phi;
    pass &= qs < 1e-10 && e_min < 1e-12 && e_max < 1e-12;
    let c = cs.iter().cloned().fold(0.0, f64::max);
    Ok(outcome(
        pass,
        format!("C = {c:.4} (per T {cs:.4?}), max Q {qs:.1e}, g extrema {:.1e}", e_min.max(e_max)),
    ))
}

fn c10(lad: &Ladder<'_>) -> jll_core::Result<Outcome> {
    let rs = vec![
        verify_selberg_moment(lad, 1, 1e4)?,
        verify_selberg_moment(lad, 2, 1e4)?,
        point_prediction(lad, 1e4, 16)?,
    ];
    let mut ok = true;
    for r in &rs {
        let v: serde_json::Value = serde_json::from_str(&r.to_json()?)?;
        ok &= v["schema"] == SCHEMA && !r.assertable && r.ratio.is_finite() && r.lhs.is_finite();
    }
    let show: Vec<String> = rs.iter().map(|r| format!("{} {:.3}", r.name, r.ratio)).collect();
    Ok(outcome(ok, format!("report only: {}", show.join(", "))))
}

fn main() {
    let mut lab = Lab::with_cache_dir(GridSpec::default(), &cache_dir(), CacheFormat::Binary).unwrap();
    let t0 = Instant::now();
    if lab.quad().ensure(GRID_TOP) {
        println!("grid extended to {GRID_TOP:e} in {:.0} s", t0.elapsed().as_secs_f64());
    }
    lab.persist().unwrap();
    let lad = Ladder::new(&lab, LadderConfig::default()).unwrap();

    let results = [
        run(1, "theta/Z oracle and first 100 zeros", c1),
        run(2, "exact transport identity", || c2(&lad)),
        run(3, "solver soundness", || c3(&lab)),
        run(4, "fundamental chord law", || c4(&lad)),
        run(5, "short-window chord band", || c5(&lad)),
        run(6, "gap law", || c6(&lad)),
        run(7, "sixth-order formula, property substitute", || c7(&lad)),
        run(8, "Chebyshev equation", || c8(&lad)),
        run(9, "second-derivative bound", || c9(&lad)),
        run(10, "Selberg moment and point prediction", || c10(&lad)),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed < results.len() && std::env::var("JLL_ACCEPT_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}

mod common;

use common::{lab, num, table};
use jll_core::critical_line::theta_prime;
use jll_core::quadrature::{
    integrate_composite, CacheFormat, EndpointSingularity, GridSpec, LadderMap, Weight, PANELS_PER_CELL,
};
use jll_core::Lab;

fn oracle(name: &str) -> f64 {
    let row = table("integrals.csv")
        .into_iter()
        .find(|r| r[0] == name)
        .unwrap_or_else(|| panic!("no oracle row {name}"));
    num(&row[3])
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn z2_integrals_match_oracle() {
    let q = lab().quad();
    for (name, b) in [("hl_0_50", 50.0), ("hl_0_100", 100.0), ("hl_0_1e4", 1e4)] {
        let r = q.integrate_z2(0.0, b, 1e-10).unwrap();
        assert!(rel(r.value, oracle(name)) < 1e-6, "{name}: {} vs {}", r.value, oracle(name));
        assert!(r.abs_error_estimate >= 0.0);
        let f = q.hl_cumulative(b).unwrap();
        assert!(rel(f, oracle(name)) < 1e-6, "{name}: F {f}");
    }
}

#[test]
fn empty_and_additive() {
    let q = lab().quad();
    assert_eq!(q.integrate_z2(500.0, 500.0, 1e-9).unwrap().value, 0.0);
    assert_eq!(q.hl_cumulative(0.0).unwrap(), 0.0);
    let tol = 1e-9;
    let whole = q.integrate_z2(0.0, 100.0, tol).unwrap().value;
    let parts = q.integrate_z2(0.0, 50.0, tol).unwrap().value + q.integrate_z2(50.0, 100.0, tol).unwrap().value;
    assert!((whole - parts).abs() <= 2.0 * tol * whole, "{whole} {parts}");
}

#[test]
fn hardy_littlewood_ratio_and_growth() {
    let q = lab().quad();
    let t = 1e4;
    let f = q.hl_cumulative(t).unwrap();
    let ratio = f / (t * t.ln());
    assert!(ratio > 0.7 && ratio < 1.1, "{ratio}");
    assert!(q.hl_cumulative(t + 1.0).unwrap() > f);
    let cells = q.grid();
    let mut prev = 0.0;
    for c in cells.cells().iter().take(2000) {
        assert!(c.cum >= prev);
        prev = c.cum;
    }
}

#[test]
fn integrate_z2_agrees_with_cumulative() {
    let q = lab().quad();
    for (a, b) in [(1e3, 5e3), (2e4, 2.05e4), (9e4, 1e5)] {
        let direct = q.integrate_z2(a, b, 1e-10).unwrap().value;
        let diff = q.hl_cumulative(b).unwrap() - q.hl_cumulative(a).unwrap();
        assert!(rel(direct, diff) < 1e-9, "[{a},{b}] {direct} {diff}");
    }
}

#[test]
fn weighted_integral() {
    let q = lab().quad();
    let r = q.integrate_weighted(1e3, 7.0, 1e-12).unwrap();
    assert!(rel(r.value, oracle("weighted_x1000")) < 1e-6, "{}", r.value);
    // weight <= 1
    let mu = 7.0 * 1e3 * 1e3f64.ln();
    assert!(r.value <= q.hl_cumulative(mu).unwrap());
    let r2 = q.integrate_weighted(2e3, 7.0, 1e-12).unwrap();
    assert!(r2.value > r.value);
}

#[test]
fn weighted_truncation_is_sound() {
    let q = lab().quad();
    for x in [1e3, 3e4] {
        let tol = 1e-10;
        let base = q.integrate_weighted(x, 7.0, tol).unwrap().value;
        // a 20% longer cut
        let longer = q.integrate_weighted(x, 8.4, tol).unwrap().value;
        assert!((longer - base).abs() < tol * base, "{x}: {base} {longer}");
    }
}

#[test]
fn halving_tolerance_converges() {
    let q = lab().quad();
    let (a, b) = (12345.0, 12360.0);
    let mut prev = q.integrate_z2(a, b, 1e-6).unwrap();
    for k in 1..8 {
        let tol = 1e-6 / 2f64.powi(k);
        let next = q.integrate_z2(a, b, tol).unwrap();
        assert!(
            (next.value - prev.value).abs() <= prev.abs_error_estimate.max(1e-12 * prev.value),
            "tol {tol}: {} {} ({})",
            next.value,
            prev.value,
            prev.abs_error_estimate
        );
        prev = next;
    }
}

#[test]
fn node_spacing_resolves_oscillation() {
    let q = lab().quad();
    let spec = *q.spec();
    let g = q.grid();
    for c in g.cells().iter().filter(|c| c.t0 > 20.0).step_by(37) {
        let end = c.t0 + c.h * PANELS_PER_CELL as f64;
        // mean GL15 node spacing
        let spacing = c.h / 15.0;
        assert!(spacing <= std::f64::consts::PI / theta_prime(end) / spec.oversample * 1.001, "{}", c.t0);
    }
}

fn cold_warm(fmt: CacheFormat) {
    let dir = tempfile::tempdir().unwrap();
    let spec = GridSpec::default();
    let probes = [77.7, 1234.5, 2e4, 2.9e4];
    let cold: Vec<u64> = {
        let mut l = Lab::with_cache_dir(spec, dir.path(), fmt).unwrap();
        l.quad().ensure(3e4);
        let v = probes.iter().map(|&t| l.quad().hl_cumulative(t).unwrap().to_bits()).collect();
        assert!(l.persist().unwrap());
        v
    };
    let l = Lab::with_cache_dir(spec, dir.path(), fmt).unwrap();
    assert!(l.quad().t_end() >= 3e4);
    let warm: Vec<u64> = probes.iter().map(|&t| l.quad().hl_cumulative(t).unwrap().to_bits()).collect();
    assert_eq!(cold, warm);
    let fresh = Lab::new(spec).unwrap();
    let again: Vec<u64> = probes.iter().map(|&t| fresh.quad().hl_cumulative(t).unwrap().to_bits()).collect();
    assert_eq!(cold, again);
}

#[test]
fn cache_is_transparent_binary() {
    cold_warm(CacheFormat::Binary);
}

#[test]
fn cache_is_transparent_csv() {
    cold_warm(CacheFormat::Csv);
}

struct Identity<'a>(&'a Lab);

impl LadderMap for Identity<'_> {
    fn phi1(&self, t: f64) -> f64 {
        t
    }
    fn ztilde2(&self, _: f64) -> f64 {
        1.0
    }
    fn z2(&self, t: f64) -> f64 {
        self.0.hz().eval_sq(t)
    }
    fn panel_width(&self, t: f64) -> f64 {
        self.0.quad().spec().panel_width(t)
    }
}

#[test]
fn composite_reductions() {
    let l = lab();
    let m = Identity(l);
    let (a, b) = (5000.0, 5100.0);
    let tol = 1e-9;
    let z = integrate_composite(|_| 1.0, Weight::Z2, a, b, &m, EndpointSingularity::None, tol).unwrap();
    let direct = l.quad().integrate_z2(a, b, 1e-12).unwrap().value;
    assert!((z.value - direct).abs() < 2.0 * tol * direct.max(1.0), "{} {direct}", z.value);
    let one = integrate_composite(|_| 1.0, Weight::ZTilde2, a, b, &m, EndpointSingularity::None, 1e-12).unwrap();
    assert!((one.value - (b - a)).abs() < 1e-9);
    let lin = integrate_composite(|x| x, Weight::ZTilde2, a, b, &m, EndpointSingularity::None, 1e-9).unwrap();
    assert!((lin.value - 0.5 * (b * b - a * a)).abs() < 1e-6);
    let half = integrate_composite(
        |x| 1.0 / ((x - a) * (b - x)).sqrt(),
        Weight::ZTilde2,
        a,
        b,
        &m,
        EndpointSingularity::InverseSqrt,
        1e-7,
    )
    .unwrap();
    // x - a loses digits near the ends, so only a modest tolerance is reachable
    assert!((half.value - std::f64::consts::PI).abs() < 1e-6, "{}", half.value);
}

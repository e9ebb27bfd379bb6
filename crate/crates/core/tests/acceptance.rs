//! End-to-end acceptance run. Each criterion prints one `PASS`/`FAIL` line;
//! the test fails if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{h2_scan_oracle, model_from, point_in};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpstab_core::curvature::{brendle_condition, curvature_state, ricci_normal_forms};
use warpstab_core::embedding::{build_embedding, gauss_closure, second_form_closed, second_form_numeric, FD_STEP};
use warpstab_core::numeric::linspace;
use warpstab_core::oracle::{verify_model, OracleGrid};
use warpstab_core::stability::{
    c0, classify, delta_thresholds, eps_window_check, h2_threshold, qsum_forms, slice_integral_checks,
    slice_threshold_radius, thm_slice_hypothesis, C0Case, QSumInput, Regime, TheoremPath, EPS_WINDOW_HI,
};
use warpstab_core::warping::integrate_h;
use warpstab_core::{Interval, WarpingModel};

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn p_min_scan(eps: f64, n: usize) -> f64 {
    (0..n)
        .map(|i| {
            let y = i as f64 / (n - 1) as f64;
            4.0 * (1.0 + eps) - 2.0 * eps * y - eps * eps * y * y
        })
        .fold(f64::INFINITY, f64::min)
}

fn dss_crossing() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for c in [0.0, -1.0, 0.05] {
        let m = WarpingModel::dss(1.0, c).map_err(|e| e.to_string())?;
        let sweep = linspace(m.domain().lo + 1e-3, 2.5, 150);
        let margins: Vec<f64> = sweep
            .iter()
            .map(|&r| {
                let j = m.jet(r).unwrap();
                thm_slice_hypothesis(&m, r, j.hp / j.h).unwrap().margin
            })
            .collect();
        let i = margins
            .windows(2)
            .position(|w| w[0] < 0.0 && w[1] >= 0.0)
            .ok_or(format!("c={c}: sweep margin never changes sign"))?;
        if !(sweep[i] <= 1.5 && 1.5 <= sweep[i + 1]) {
            return Err(format!("c={c}: sign change in [{}, {}]", sweep[i], sweep[i + 1]));
        }
        let r = slice_threshold_radius(&m).map_err(|e| e.to_string())?;
        worst = worst.max((r.r_star - 1.5).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-9 && secs < 1.0,
        format!("max |r* - 1.5| = {worst:.2e}, {secs:.3} s"),
        format!("max |r* - 1.5| = {worst:.2e}, {secs:.3} s"),
    )
}

fn rn_crossing() -> Outcome {
    let (m, q) = (2.0f64, 0.5f64);
    let model = WarpingModel::rn(m, q).map_err(|e| e.to_string())?;
    let r = slice_threshold_radius(&model).map_err(|e| e.to_string())?;
    let expect = (3.0 * m + (9.0 * m * m - 32.0 * q * q).sqrt()) / 4.0;
    let err = (r.r_star - expect).abs();
    let gate = thm_slice_hypothesis(&model, 3.0, 0.0).map_err(|e| e.to_string())?.gate;
    check(
        err <= 1e-9 && gate == Some(true) && (2.0 * q <= 15f64.sqrt() * m / 4.0),
        format!("r* = {:.10}, err {err:.2e}, gate true", r.r_star),
        format!("r* = {:.10}, err {err:.2e}, gate {gate:?}", r.r_star),
    )
}

fn window_boundaries() -> Outcome {
    let lo = p_min_scan(-1.0, 10_000);
    let hi = p_min_scan(EPS_WINDOW_HI, 10_000);
    let mut disagree = 0;
    for eps in linspace(-5.0, 5.0, 1000) {
        if eps_window_check(eps) != (p_min_scan(eps, 10_000) >= -1e-12) {
            disagree += 1;
        }
    }
    check(
        lo.abs() <= 1e-9 && hi.abs() <= 1e-9 && disagree == 0,
        format!("min p(-1) = {lo:.1e}, min p(1+√5) = {hi:.1e}, 1000/1000 agree"),
        format!("min p(-1) = {lo:.1e}, min p(1+√5) = {hi:.1e}, {disagree} disagreements"),
    )
}

fn threshold_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst, mut worst_delta) = (0.0f64, 0.0f64);
    let mut n = 0;
    while n < 200 {
        let eps = rng.gen_range(-8.0..10.0);
        if (-1.0..=EPS_WINDOW_HI).contains(&eps) {
            continue;
        }
        let a = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        n += 1;
        let (case, v) = h2_threshold(eps, a).map_err(|e| e.to_string())?;
        let oracle = h2_scan_oracle(eps, a, 10_000);
        worst = worst.max((v - oracle).abs());
        match delta_thresholds(eps * a * a, a).map_err(|e| e.to_string())?.regime {
            Regime::Threshold { case: c, h2_min } if c == case => {
                worst_delta = worst_delta.max((h2_min - v).abs() / v.abs().max(1e-300));
            }
            other => return Err(format!("eps={eps}, a={a}: delta path gave {other:?}")),
        }
    }
    check(
        worst <= 1e-6 && worst_delta <= 1e-12,
        format!("max |h2 - oracle| = {worst:.2e}, delta rel {worst_delta:.1e}"),
        format!("max |h2 - oracle| = {worst:.2e}, delta rel {worst_delta:.1e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let models = [
        WarpingModel::space_form(-1.0),
        WarpingModel::space_form(0.0),
        WarpingModel::space_form(1.0),
        WarpingModel::dss(1.0, 0.0),
        WarpingModel::dss(1.0, 0.05),
        WarpingModel::rn(2.0, 0.5),
    ];
    let mut worst = 0.0f64;
    for m in models {
        let m = m.map_err(|e| e.to_string())?;
        let rep = verify_model(&m, &OracleGrid::default_for(&m, 20, 10), 1e-6).map_err(|e| e.to_string())?;
        let w = rep.rows().iter().take(5).map(|r| r.1).fold(0.0, f64::max);
        worst = worst.max(w);
        if !rep.pass {
            return Err(format!("{}: max rel error {w:.2e}", rep.model));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        secs < 10.0,
        format!("max rel error {worst:.2e} over 6 models, {secs:.2} s"),
        format!("max rel error {worst:.2e}, {secs:.2} s"),
    )
}

fn embedding_verification() -> Outcome {
    let cases: Vec<(WarpingModel, Interval)> = vec![
        (WarpingModel::space_form(1.0).unwrap(), Interval::new(0.2, 2.9)),
        (WarpingModel::space_form(0.25).unwrap(), Interval::new(0.4, 5.8)),
        (WarpingModel::dss(1.0, 0.0).unwrap(), Interval::new(1.1, 5.0)),
        (WarpingModel::dss(1.0, 0.05).unwrap(), Interval::new(1.2, 3.3)),
        (WarpingModel::rn(2.0, 0.5).unwrap(), Interval::new(2.1, 6.0)),
        (WarpingModel::ellipsoid(0.5).unwrap(), Interval::new(-0.4, 0.4)),
        (WarpingModel::ellipsoid(2.0).unwrap(), Interval::new(-1.6, 1.6)),
        (WarpingModel::hyperboloid(1.0).unwrap(), Interval::new(-3.0, 3.0)),
    ];
    let (mut worst, mut relation) = (0.0f64, 0.0f64);
    for (m, iv) in &cases {
        let emb = build_embedding(m, *iv, 60).map_err(|e| format!("{}: {e}", m.label()))?;
        relation = relation.max(emb.relation_residual);
        for x in linspace(iv.lo, iv.hi, 7).into_iter().skip(1).take(5) {
            let closed = second_form_closed(m, x).map_err(|e| e.to_string())?;
            for phi1 in [0.7, PI / 2.0, 2.2] {
                let s = second_form_numeric(&emb, x, phi1, 0.4, FD_STEP).map_err(|e| format!("{}: {e}", m.label()))?;
                worst = worst.max(s.max_rel_error(&closed));
            }
        }
    }
    check(
        worst <= 1e-6 && relation <= 1e-10,
        format!("max II error {worst:.2e}, max |κf'²+h'²-1| {relation:.1e}"),
        format!("max II error {worst:.2e}, max |κf'²+h'²-1| {relation:.1e}"),
    )
}

fn integral_identities() -> Outcome {
    let four_pi = 4.0 * PI;
    let (mut w, mut g) = (0.0f64, 0.0f64);
    for kind in 0..5u8 {
        for p in [0.1, 0.5, 0.9] {
            let m = model_from(kind, p, 0.6);
            for u in linspace(0.0, 1.0, 9) {
                let x = point_in(&m, u);
                let r = slice_integral_checks(&m, x, 16).map_err(|e| e.to_string())?;
                w = w.max((r.willmore - four_pi).abs());
                g = g.max((r.gauss_bonnet - four_pi).abs());
            }
        }
    }
    check(
        w <= 1e-8 && g <= 1e-8,
        format!("max |∫(H²+K_tan) - 4π| = {w:.1e}, max |∫K - 4π| = {g:.1e}"),
        format!("max |∫(H²+K_tan) - 4π| = {w:.1e}, max |∫K - 4π| = {g:.1e}"),
    )
}

fn ode_fidelity() -> Outcome {
    let mut drift = 0.0f64;
    for m in [WarpingModel::dss(1.0, 0.0).unwrap(), WarpingModel::rn(2.0, 0.5).unwrap()] {
        let tr = integrate_h(&m, 10.0, 1e-3).map_err(|e| e.to_string())?;
        if tr.t_end() < 10.0 - 1e-9 {
            return Err(format!("{} stopped at t = {}", m.label(), tr.t_end()));
        }
        drift = drift.max(tr.residual_max);
    }
    let mut trip = 0.0f64;
    for (m, rs) in [
        (WarpingModel::dss(1.0, 0.0).unwrap(), vec![1.2, 2.0, 5.0, 9.0]),
        (WarpingModel::dss(1.0, 0.1).unwrap(), vec![1.2, 1.6, 2.2, 2.42]),
        (WarpingModel::rn(2.0, 0.5).unwrap(), vec![2.0, 3.0, 6.0, 10.0]),
    ] {
        for r in rs {
            let t = m.t_of(r).map_err(|e| e.to_string())?;
            let h = m.jet_at_t(t).map_err(|e| e.to_string())?.h;
            trip = trip.max((h - r).abs());
        }
    }
    check(
        drift <= 1e-10 && trip <= 1e-8,
        format!("first-integral drift {drift:.1e}, round trip {trip:.1e}"),
        format!("first-integral drift {drift:.1e}, round trip {trip:.1e}"),
    )
}

fn structural_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + a.abs().max(b.abs()));
    let (mut lam, mut ric, mut gauss, mut q) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let m = model_from(rng.gen_range(0..5), rng.gen(), rng.gen());
        let x = point_in(&m, rng.gen());
        let s = curvature_state(&m, x).map_err(|e| e.to_string())?;
        let hm = s.slice_h();
        lam = lam.max(rel(2.0 * (hm * hm + s.k_tan), 2.0 / (s.h * s.h)));
        let nu = rng.gen_range(-1.0..=1.0);
        let (a, b) = ricci_normal_forms(&s, nu).map_err(|e| e.to_string())?;
        ric = ric.max(rel(a, b));
        if let Ok((l, r)) = gauss_closure(&m, x) {
            gauss = gauss.max(rel(l, r));
        }
        let input = QSumInput {
            h: rng.gen_range(-2.0..2.0),
            a: rng.gen_range(-2.0..2.0),
            eps: rng.gen_range(-6.0..6.0),
            nu,
            x_norm2: rng.gen_range(0.0..3.0),
        };
        let (f, e) = qsum_forms(&input).map_err(|e| e.to_string())?;
        q = q.max(rel(f, e));
    }
    check(
        lam.max(ric).max(gauss).max(q) <= 1e-12,
        format!("λ₁ {lam:.1e}, Ricci forms {ric:.1e}, Gauss {gauss:.1e}, Q-sum {q:.1e}"),
        format!("λ₁ {lam:.1e}, Ricci forms {ric:.1e}, Gauss {gauss:.1e}, Q-sum {q:.1e}"),
    )
}

fn brendle() -> Outcome {
    let mut eq = 0.0f64;
    for (m, lo, hi) in [
        (WarpingModel::dss(1.0, 0.0).unwrap(), 1.05, 20.0),
        (WarpingModel::dss(1.0, 0.05).unwrap(), 1.1, 3.5),
        (WarpingModel::dss(1.0, -1.0).unwrap(), 0.75, 5.0),
    ] {
        for x in linspace(lo, hi, 100) {
            let b = brendle_condition(&m, x).map_err(|e| e.to_string())?;
            if !b.holds {
                return Err(format!("{} fails at {x}", m.label()));
            }
            eq = eq.max((b.lhs - b.rhs).abs() / b.rhs.abs());
        }
    }
    let (mm, q) = (2.0, 0.5);
    let rn = WarpingModel::rn(mm, q).unwrap();
    let mut gap = 0.0f64;
    for x in linspace(1.9, 20.0, 100) {
        let b = brendle_condition(&rn, x).map_err(|e| e.to_string())?;
        let j = rn.jet(x).unwrap();
        let want = 2.0 * q * q * j.hp / j.h.powi(5);
        if !(b.lhs < b.rhs) {
            return Err(format!("rn not strict at {x}"));
        }
        gap = gap.max(((b.rhs - b.lhs) - want).abs() / want);
    }
    check(
        eq <= 1e-9 && gap <= 1e-9,
        format!("dss |lhs-rhs|/|rhs| {eq:.1e}, rn gap rel error {gap:.1e}"),
        format!("dss |lhs-rhs|/|rhs| {eq:.1e}, rn gap rel error {gap:.1e}"),
    )
}

fn classification() -> Outcome {
    let b_star = 1.0 / (2.0 + 5f64.sqrt()).sqrt();
    let mut report = Vec::new();
    for b in [b_star * 1.001, 0.6, 1.0, 1.5, 3.0, b_star * 0.999, 0.4, 0.2] {
        let m = WarpingModel::ellipsoid(b).map_err(|e| e.to_string())?;
        let iv = Interval::new(-b * (1.0 - 1e-6), b * (1.0 - 1e-6));
        let c = classify(&m, iv).map_err(|e| e.to_string())?;
        let want = if b > b_star { TheoremPath::Window } else { TheoremPath::Threshold };
        if c.path != want {
            return Err(format!("ellipsoid b={b}: {:?}, ratio [{}, {}]", c.path, c.ratio_min, c.ratio_max));
        }
        report.push(c.path);
    }
    let h = WarpingModel::hyperboloid(1.0).unwrap();
    let r = c0(&h, Interval::new(f64::NEG_INFINITY, f64::INFINITY)).map_err(|e| e.to_string())?;
    check(
        r.case == C0Case::B && (r.value - 1.0).abs() <= 1e-9,
        format!("ellipsoids split at b* = {b_star:.6}, hyperboloid c0 = {:.12} (case b)", r.value),
        format!("hyperboloid c0 = {} case {:?}", r.value, r.case),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("slice threshold crossing, dss", dss_crossing),
        ("slice threshold crossing, rn", rn_crossing),
        ("eps-window boundaries", window_boundaries),
        ("threshold formula consistency", threshold_consistency),
        ("oracle equivalence", oracle_equivalence),
        ("embedding verification", embedding_verification),
        ("exact integral identities", integral_identities),
        ("ode fidelity", ode_fidelity),
        ("structural identities", structural_identities),
        ("brendle condition", brendle),
        ("classification regression", classification),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

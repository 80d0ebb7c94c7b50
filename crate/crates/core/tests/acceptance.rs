//! Acceptance criteria. Each check prints one `PASS`/`FAIL` line with its
//! runtime against the stated limit.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use syswidth::content::{hc_exact, select_shell, ExactOptions, Side};
use syswidth::generate;
use syswidth::separator::{minimize_separator_with, SeparatorOptions};
use syswidth::topology::{girth, homology_systole_z2, lemma21_threshold, tree_report, verify_inequality4};
use syswidth::width::{bound_width, revalidate, theorem_radius, ur_exact_small, WidthOptions};
use syswidth::Subset;

/// Run a criterion, print its line, and fail on a false result or an
/// exceeded time limit.
fn criterion(id: u32, name: &str, limit: Duration, check: impl FnOnce() -> Result<String, String>) {
    let started = Instant::now();
    let outcome = check();
    let elapsed = started.elapsed();
    let in_time = elapsed <= limit;
    let (ok, detail) = match outcome {
        Ok(d) => (in_time, d),
        Err(d) => (false, d),
    };
    // written to the raw stream so the line survives output capture
    let _ = writeln!(
        std::io::stderr(),
        "criterion {id} [{name}]: {} in {:.2?} (limit {:?}) {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit
    );
    assert!(ok, "criterion {id} failed: {detail}");
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

#[test]
fn c1_coarea_sharpness() {
    criterion(1, "coarea sharpness", Duration::from_secs(1), || {
        let s = generate::interval(1.0, 0.01).map_err(|e| e.to_string())?;
        let opts = ExactOptions { budget: 128, ..Default::default() };
        let est = hc_exact(&s, &s.full(), 1.0, None, opts).map_err(|e| e.to_string())?;
        ensure(est.side == Side::Exact, || "content not exact".into())?;
        ensure((est.value - 0.5).abs() <= 0.01, || format!("HC_1 = {}", est.value))?;
        let cover = est.covering();
        let sel = select_shell(&s, &s.full(), 0, 0.0, 1.0, 1.0, Some(&cover), opts).map_err(|e| e.to_string())?;
        let scale = 2.0 * est.value / 1.0;
        let mut worst: f64 = 1.0;
        for p in &sel.profile {
            ensure(p.weight == 1.0, || format!("band {} has weight {}", p.band, p.weight))?;
            let ratio = p.weight / scale;
            ensure((0.98..=1.02).contains(&ratio), || format!("ratio {ratio}"))?;
            if (ratio - 1.0).abs() > (worst - 1.0).abs() {
                worst = ratio;
            }
        }
        Ok(format!("HC_1 = {}, {} bands, worst ratio {worst:.4}", est.value, sel.profile.len()))
    });
}

#[test]
fn c2_coarea_soundness() {
    criterion(2, "coarea soundness", Duration::from_secs(120), || {
        let mut checked = 0;
        for seed in 0..200u64 {
            let n = 8 + (seed as usize % 13);
            let s = generate::random_points(n, 2, 0.05, seed).map_err(|e| e.to_string())?;
            let m = if seed % 2 == 0 { 1.0 } else { 2.0 };
            let x = seed as usize % n;
            let sel = select_shell(&s, &s.full(), x, 0.1, 0.8, m, None, ExactOptions::default())
                .map_err(|e| format!("seed {seed}: {e}"))?;
            let hc = hc_exact(&s, &sel.shell, m - 1.0, None, ExactOptions::default()).map_err(|e| e.to_string())?;
            ensure(hc.side == Side::Exact, || format!("seed {seed}: shell content not exact"))?;
            ensure(sel.certified_bound >= hc.value, || {
                format!("seed {seed}: bound {} < HC {}", sel.certified_bound, hc.value)
            })?;
            checked += 1;
        }
        Ok(format!("{checked}/200 bounds hold"))
    });
}

#[test]
fn c3_exact_content_oracle() {
    criterion(3, "exact content oracle", Duration::from_secs(60), || {
        let mut pairs = 0;
        for inst in common::tiny_corpus() {
            let s = &inst.space;
            for m in [0.5, 1.0, 2.0] {
                for cap in [None, Some(0.6)] {
                    let oracle = common::exhaustive_content(s, m, cap);
                    for mask in 0..1usize << s.len() {
                        let a = Subset::from_fn(s.len(), |i| mask >> i & 1 == 1);
                        let est = hc_exact(s, &a, m, cap, ExactOptions::default()).map_err(|e| e.to_string())?;
                        ensure(est.value.to_bits() == oracle[mask].to_bits(), || {
                            format!("{} m={m} cap={cap:?} mask={mask:b}: {} vs {}", inst.name, est.value, oracle[mask])
                        })?;
                        pairs += 1;
                    }
                }
            }
        }
        Ok(format!("{pairs} (space, subset, m, cap) cases agree"))
    });
}

#[test]
fn c4_separator_descent() {
    criterion(4, "separator descent", Duration::from_secs(300), || {
        let t = generate::grid_torus(16).map_err(|e| e.to_string())?;
        let y = t.full();
        let (r, hint) = theorem_radius(&t, &y, 2, ExactOptions::default()).map_err(|e| e.to_string())?;
        let cert = minimize_separator_with(&t, &y, r, 1, None, SeparatorOptions::default(), &[&hint])
            .map_err(|e| e.to_string())?;
        cert.validate(&t, &y).map_err(|e| e.to_string())?;
        ensure(cert.steps.len() <= cert.step_budget, || {
            format!("{} steps over budget {}", cert.steps.len(), cert.step_budget)
        })?;
        let mut prev = cert.phi_initial;
        for st in &cert.steps {
            ensure(st.phi_after < st.phi_before && st.phi_before <= prev, || format!("step {} not decreasing", st.step))?;
            ensure(st.drop >= st.required_drop, || format!("step {} drop {} < {}", st.step, st.drop, st.required_drop))?;
            prev = st.phi_after;
        }
        for b in &cert.ball_bounds {
            ensure(b.upper < b.threshold, || format!("ball at {}: {} >= {}", b.center, b.upper, b.threshold))?;
        }
        Ok(format!(
            "r = {r:.3}, {} steps of budget {}, |Z| = {}, {} ball bounds",
            cert.steps.len(),
            cert.step_budget,
            cert.z.len(),
            cert.ball_bounds.len()
        ))
    });
}

#[test]
fn c5_width_end_to_end() {
    criterion(5, "width end to end", Duration::from_secs(900), || {
        let mut runs = 0;
        for inst in common::full_corpus() {
            let y = inst.space.full();
            for n in [1usize, 2] {
                let (r, hint) = theorem_radius(&inst.space, &y, n, ExactOptions::default()).map_err(|e| e.to_string())?;
                let opts = WidthOptions {
                    hints: vec![hint],
                    ..Default::default()
                };
                let cert = bound_width(&inst.space, &y, n, r, &opts).map_err(|e| format!("{} n={n}: {e}", inst.name))?;
                revalidate(&inst.space, &y, &cert).map_err(|e| format!("{} n={n}: {e}", inst.name))?;
                ensure(cert.multiplicity <= n && cert.max_radius < r, || format!("{} n={n}: bad certificate", inst.name))?;
                runs += 1;
            }
        }
        Ok(format!("{runs} certificates revalidated"))
    });
}

#[test]
fn c6_width_oracle() {
    criterion(6, "width oracle consistency", Duration::from_secs(120), || {
        let mut runs = 0;
        for inst in common::full_corpus().into_iter().filter(|i| i.space.len() <= 12) {
            let y = inst.space.full();
            for n in [1usize, 2] {
                let (r, hint) = theorem_radius(&inst.space, &y, n, ExactOptions::default()).map_err(|e| e.to_string())?;
                let opts = WidthOptions {
                    hints: vec![hint],
                    ..Default::default()
                };
                let cert = bound_width(&inst.space, &y, n, r, &opts).map_err(|e| format!("{} n={n}: {e}", inst.name))?;
                let exact = ur_exact_small(&inst.space, &y, n, cert.links).map_err(|e| e.to_string())?;
                ensure(exact <= cert.r, || format!("{} n={n}: exact {exact} > r {}", inst.name, cert.r))?;
                runs += 1;
            }
        }
        Ok(format!("{runs} instances consistent"))
    });
}

#[test]
fn c7_systolic_inequality() {
    criterion(7, "systole vs width", Duration::from_secs(300), || {
        let mut runs = 0;
        for inst in common::full_corpus() {
            let essential = match inst.space.kind() {
                syswidth::SpaceKind::PointSet => false,
                _ => syswidth::topology::systole(&inst.space).map_err(|e| e.to_string())?.is_some(),
            };
            if !essential {
                continue;
            }
            // graphs are 1-dimensional, grid surfaces 2-dimensional
            let n = if inst.space.kind() == syswidth::SpaceKind::GridSurface { 2 } else { 1 };
            {
                let rep = verify_inequality4(&inst.space, n, ExactOptions::default()).map_err(|e| format!("{}: {e}", inst.name))?;
                let h = inst.space.resolution();
                ensure(rep.sys <= 2.0 * rep.width_r + 2.0 * h, || {
                    format!("{} n={n}: sys {} > 2r + 2h = {}", inst.name, rep.sys, 2.0 * rep.width_r + 2.0 * h)
                })?;
                runs += 1;
            }
        }
        let circle = generate::circle(1.0, 0.01).map_err(|e| e.to_string())?;
        let sys = syswidth::topology::systole(&circle).map_err(|e| e.to_string())?.ok_or("circle has no cycle")?;
        let ratio = sys.length / (2.0 * 0.5);
        ensure((ratio - 1.0).abs() <= 0.02, || format!("circle ratio {ratio}"))?;
        Ok(format!("{runs} essential runs hold, circle ratio {ratio:.4}"))
    });
}

#[test]
fn c8_tree_threshold() {
    criterion(8, "tree threshold", Duration::from_secs(60), || {
        let star = generate::star(3, 1.0, 0.1).map_err(|e| e.to_string())?;
        let h = star.resolution();
        let mut first_hold = None;
        for i in 1..=30 {
            let r = i as f64 * h;
            let rep = lemma21_threshold(&star, r).map_err(|e| e.to_string())?;
            if rep.hypothesis_holds && first_hold.is_none() {
                first_hold = Some(r);
            }
            if let Some(f) = first_hold {
                ensure(rep.hypothesis_holds, || format!("hypothesis fails at {r} after holding at {f}"))?;
            }
            let radius = rep.component_radii[0];
            ensure((radius - 1.0).abs() < 1e-9, || format!("star radius {radius}"))?;
        }
        let boundary = first_hold.ok_or("hypothesis never holds")?;
        ensure(boundary > 1.5 && boundary <= 1.5 + h + 1e-9, || format!("boundary at {boundary}"))?;
        for seed in 0..100u64 {
            let edges = 1 + seed as usize % 30;
            let t = generate::random_tree(edges, 0.2, 1.0, 0.1, seed).map_err(|e| e.to_string())?;
            let rep = tree_report(&t).map_err(|e| e.to_string())?;
            ensure(rep.property_holds, || format!("tree {seed}: ball-length property fails"))?;
            for frac in [0.25, 0.5, 0.75, 1.0, 1.25] {
                let r = frac * rep.diameter;
                let th = lemma21_threshold(&t, r).map_err(|e| e.to_string())?;
                ensure(!th.hypothesis_holds || th.conclusion_holds, || format!("tree {seed} at r = {r}"))?;
            }
        }
        Ok(format!("star boundary at r = {boundary:.2}, 100 trees hold"))
    });
}

#[test]
fn c9_systole_correctness() {
    criterion(9, "systole correctness", Duration::from_secs(30), || {
        let mut found = Vec::new();
        for k in [3usize, 4] {
            let t = generate::grid_torus(k).map_err(|e| e.to_string())?;
            let c = homology_systole_z2(&t).map_err(|e| e.to_string())?.ok_or("no systole")?;
            let brute = common::torus_systole_brute(k);
            ensure((c.length - k as f64).abs() < 1e-9 && (c.length - brute).abs() < 1e-9, || {
                format!("{k}x{k}: {} vs enumeration {brute}", c.length)
            })?;
            found.push(c.length);
        }
        let theta = generate::theta(&[1.0, 2.0, 3.0], 0.1).map_err(|e| e.to_string())?;
        let g = girth(&theta).map_err(|e| e.to_string())?.ok_or("theta has no cycle")?;
        ensure((g.length - 3.0).abs() < 1e-9, || format!("theta girth {}", g.length))?;
        Ok(format!("tori {found:?}, theta girth {}", g.length))
    });
}

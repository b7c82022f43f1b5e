use crate::config::{parse_rational, RunConfig};
use crate::grid::parse_log_grid;
use crate::report::{num, Fmt, ReportBundle};
use crate::svg::{loglog_chart, Series};
use crate::{
    BoundsArgs, Command, CompareArgs, ContourKind, EvalArgs, MellinArgs, PointArgs, ProbeArgs, ProbeKind, SieveArgs,
};
use powser::arith::{sieve_with, ArithFunctionId, SieveConfig};
use powser::asym::{
    abelian_mu_envelope, choose_t, corollary_residual, delange_probe, error_envelope_e, fake_asymptotics_probe,
    ford_b, main_term_form, prime_abelian_probe, rh_window_probe, walfisz_envelope, EnvelopeParams,
    MainTermSource,
};
use powser::hpnum::{abs_f64, PrecisionContext};
use powser::mellin::{
    bound_segment_with, calibrate_c_d, default_kappa, inverse_mellin_deformed, inverse_mellin_line, ContourSpec,
    Segment, ZeroFreeRegionSpec, DEFAULT_NU, SAFE_HEIGHT,
};
use powser::numfmt::sci_f64;
use powser::series::{eval_exp_series_with, sector_check, EvalPoint};
use powser::{Error, Result};
use rug::{Complex, Float, Rational};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

pub fn run(cmd: &Command, cfg: &RunConfig, timings: bool) -> Result<()> {
    let start = Instant::now();
    let (text, out): (String, Option<&PathBuf>) = match cmd {
        Command::Sieve(a) => (sieve(a, cfg)?, a.out.as_ref()),
        Command::Eval(a) => (json_report(eval(a, cfg)?, cfg, timings, start), a.out.as_ref()),
        Command::Mellin(a) => (json_report(mellin(a, cfg)?, cfg, timings, start), a.out.as_ref()),
        Command::Compare(a) => (compare(a, cfg)?, a.out.as_ref()),
        Command::Bounds(a) => (json_report(bounds(a, cfg)?, cfg, timings, start), a.out.as_ref()),
        Command::Probe(a) => (probe(a, cfg)?, a.out.as_ref()),
    };
    if timings {
        eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    }
    emit(out, &text, cfg)
}

fn json_report(b: ReportBundle, cfg: &RunConfig, timings: bool, start: Instant) -> String {
    b.to_json(cfg, timings.then(|| start.elapsed()))
}

fn emit(out: Option<&PathBuf>, text: &str, cfg: &RunConfig) -> Result<()> {
    match out {
        Some(p) => write_file(&cfg.resolve(p), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn precision(prec: Option<u32>, cfg: &RunConfig) -> Result<PrecisionContext> {
    PrecisionContext::new(prec.unwrap_or(cfg.precision_bits))
}

fn tolerance(tol: Option<f64>, cfg: &RunConfig) -> Result<f64> {
    let t = tol.unwrap_or(cfg.tolerance);
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {t}")));
    }
    Ok(t)
}

fn sieve_config(cfg: &RunConfig) -> SieveConfig {
    SieveConfig { memory_cap: cfg.memory_cap, ..SieveConfig::default() }
}

fn parse_fn(name: &str) -> Result<ArithFunctionId> {
    name.parse()
}

/// Checks |t| > 0 and the sector guard |arg t| ≤ 90° − θ_min.
fn eval_point(a: &PointArgs, cfg: &RunConfig, prec: u32) -> Result<EvalPoint> {
    if !(a.t_abs > 0.0 && a.t_abs.is_finite()) {
        return Err(Error::InvalidArgument(format!("--t-abs must be positive, got {}", a.t_abs)));
    }
    let limit = 90.0 - cfg.theta_min_deg;
    if !(a.t_arg_deg.abs() <= limit) {
        return Err(Error::Domain(format!(
            "|arg t| = {} deg exceeds the sector limit 90 - theta_min = {limit} deg",
            a.t_arg_deg
        )));
    }
    let p = EvalPoint::polar(prec, a.t_abs, a.t_arg_deg.to_radians())?;
    EvalPoint::new(p.t().clone(), cfg.theta_min_deg.to_radians())
}

fn point_json(point: &EvalPoint, cfg: &RunConfig, pc: &PrecisionContext, f: &Fmt) -> Value {
    let p = pc.work();
    let mut minus_t = point.t().clone();
    minus_t = -minus_t;
    let z = Complex::with_val(p, minus_t.exp_ref());
    json!({
        "t_re": f.re(point.t()),
        "t_im": f.im(point.t()),
        "z_re": f.re(&z),
        "z_im": f.im(&z),
        "z_in_sector": sector_check(&z, cfg.theta_min_deg.to_radians()),
    })
}

fn merge(a: Value, b: Value) -> Value {
    let mut m: Map<String, Value> = match a {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    if let Value::Object(b) = b {
        m.extend(b);
    }
    Value::Object(m)
}

fn point_args_json(a: &PointArgs, pc: &PrecisionContext, tol: f64) -> Value {
    json!({
        "fn": a.fn_name,
        "t_abs": num(a.t_abs),
        "t_arg_deg": num(a.t_arg_deg),
        "prec": pc.bits,
        "tol": num(tol),
    })
}

fn sieve(a: &SieveArgs, cfg: &RunConfig) -> Result<String> {
    let fn_id = parse_fn(&a.fn_name)?;
    if a.limit == 0 {
        return Err(Error::InvalidArgument("--limit must be at least 1".into()));
    }
    let mut table = sieve_with(fn_id, a.limit, &sieve_config(cfg))?;
    if a.prefix_sums {
        table = table.with_prefix_sums()?;
    }
    let mut buf = Vec::new();
    table
        .write_csv(&mut buf, cfg.precision_bits)
        .map_err(|e| Error::InvalidArgument(format!("csv output failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("csv is ascii"))
}

fn eval(a: &EvalArgs, cfg: &RunConfig) -> Result<ReportBundle> {
    let pc = precision(a.point.prec, cfg)?;
    let tol = tolerance(a.point.tol, cfg)?;
    let fn_id = parse_fn(&a.point.fn_name)?;
    let point = eval_point(&a.point, cfg, pc.work())?;
    let v = eval_exp_series_with(fn_id, &point, &pc, tol, &sieve_config(cfg))?;
    let f = Fmt::new(pc.bits);
    let counters: Map<String, Value> = v.counters.iter().map(|(k, c)| (k.to_string(), json!(c))).collect();
    let results = merge(
        json!({
            "fn": fn_id.name(),
            "value_re": f.re(&v.value),
            "value_im": f.im(&v.value),
            "tail_bound": num(v.tail_bound),
            "terms_used": v.terms_used,
            "precision_bits": pc.bits,
            "counters": counters,
        }),
        point_json(&point, cfg, &pc, &f),
    );
    Ok(ReportBundle {
        command: "eval",
        args: point_args_json(&a.point, &pc, tol),
        results,
        error_budget: json!({ "tolerance": num(tol), "tail_bound": num(v.tail_bound) }),
    })
}

fn mellin(a: &MellinArgs, cfg: &RunConfig) -> Result<ReportBundle> {
    let pc = precision(a.point.prec, cfg)?;
    let tol = tolerance(a.point.tol, cfg)?;
    let fn_id = parse_fn(&a.point.fn_name)?;
    let point = eval_point(&a.point, cfg, pc.work())?;
    let kappa = match a.kappa.as_str() {
        "auto" => default_kappa(point.abs_f64())?,
        k => k
            .parse::<f64>()
            .map_err(|_| Error::InvalidArgument(format!("--kappa must be a number or 'auto', got '{k}'")))?,
    };
    let f = Fmt::new(pc.bits);
    let mut args = point_args_json(&a.point, &pc, tol);
    args["contour"] = json!(match a.contour {
        ContourKind::Line => "line",
        ContourKind::Deformed => "deformed",
    });
    args["kappa"] = json!(a.kappa);
    let quad_budget = tol / 4.0;
    let (results, budget) = match a.contour {
        ContourKind::Line => {
            let r = inverse_mellin_line(fn_id, &point, kappa, &pc, tol)?;
            let v = &r.series.value;
            let results = merge(
                json!({
                    "fn": fn_id.name(),
                    "contour": "line",
                    "kappa": num(r.kappa),
                    "T": Value::Null,
                    "value": f.c(v),
                    "value_re": f.re(v),
                    "value_im": f.im(v),
                    "cutoff_upper": num(r.cutoff_upper),
                    "cutoff_lower": num(r.cutoff_lower),
                    "segments": Value::Null,
                    "majorants": Value::Null,
                    "c_d": Value::Null,
                    "integrand_evaluations": r.series.counters.get("integrand_evaluations").copied(),
                }),
                point_json(&point, cfg, &pc, &f),
            );
            let budget = json!({
                "total": num(r.series.tail_bound),
                "truncation_bound": num(r.truncation_bound),
                "quad_error": num(r.quad_error),
                "quad_error_budget": num(quad_budget),
                "tolerance": num(tol),
            });
            (results, budget)
        }
        ContourKind::Deformed => {
            args["T"] = num(a.height);
            args["unsafe_tall_contour"] = json!(a.unsafe_tall_contour);
            let spec = ContourSpec {
                kappa,
                height: a.height,
                region: cfg.region.clone(),
                quad: Default::default(),
                nu: DEFAULT_NU,
                c_d: a.c_d,
                allow_unsafe_height: a.unsafe_tall_contour || cfg.allow_unsafe_height,
            };
            spec.validate()?;
            let r = inverse_mellin_deformed(fn_id, &point, &spec, &pc, tol)?;
            let c_d = match spec.c_d {
                Some(c) => c,
                None => calibrate_c_d(fn_id, &spec, &pc)?,
            };
            let mut segments = Map::new();
            let mut majorants = Map::new();
            for seg in Segment::ALL {
                let v = &r.segments[&seg];
                segments.insert(
                    seg.name().into(),
                    json!({ "re": f.re(v), "im": f.im(v), "abs": num(abs_f64(v)) }),
                );
                majorants.insert(seg.name().into(), num(bound_segment_with(seg, &point, &spec, c_d)?));
            }
            let v = &r.series.value;
            let results = merge(
                json!({
                    "fn": fn_id.name(),
                    "contour": "deformed",
                    "kappa": num(r.kappa),
                    "T": num(r.height),
                    "value": f.c(v),
                    "value_re": f.re(v),
                    "value_im": f.im(v),
                    "cutoff_upper": num(r.cutoff_upper),
                    "cutoff_lower": num(r.cutoff_lower),
                    "segments": segments,
                    "majorants": majorants,
                    "c_d": num(c_d),
                    "c_d_source": if spec.c_d.is_some() { "override" } else { "calibrated" },
                    "nu": num(spec.nu),
                    "integrand_evaluations": r.series.counters.get("integrand_evaluations").copied(),
                }),
                point_json(&point, cfg, &pc, &f),
            );
            let budget = json!({
                "total": num(r.series.tail_bound),
                "truncation_bound": num(r.truncation_bound),
                "quad_error": num(r.quad_error),
                "quad_error_budget": num(quad_budget),
                "tolerance": num(tol),
            });
            (results, budget)
        }
    };
    Ok(ReportBundle { command: "mellin", args, results, error_budget: budget })
}

fn envelope_params(cfg: &RunConfig) -> EnvelopeParams {
    EnvelopeParams {
        b: cfg.region.b.clone(),
        alpha: cfg.region.alpha.clone(),
        beta: cfg.region.beta.clone(),
        epsilon: Rational::new(),
    }
}

fn compare(a: &CompareArgs, cfg: &RunConfig) -> Result<String> {
    let pc = precision(a.prec, cfg)?;
    let tol = tolerance(a.tol, cfg)?;
    let fn_id = parse_fn(&a.fn_name)?;
    let source: MainTermSource = a.main_term.parse()?;
    main_term_form(fn_id, source)?;
    let grid = parse_log_grid(&a.t_grid)?;
    let params = envelope_params(cfg);
    let f = Fmt::new(pc.bits);
    let p = pc.work();
    let mut csv = String::from("t,direct_re,direct_im,main_re,main_im,residual_abs,envelope_E,ratio_residual_over_envelope\n");
    let mut res_pts = Vec::new();
    let mut env_pts = Vec::new();
    for &t_abs in &grid {
        let pa = PointArgs {
            fn_name: a.fn_name.clone(),
            t_abs,
            t_arg_deg: a.t_arg_deg,
            prec: a.prec,
            tol: a.tol,
        };
        let point = eval_point(&pa, cfg, p)?;
        let mut minus_t = point.t().clone();
        minus_t = -minus_t;
        let z = Complex::with_val(p, minus_t.exp_ref());
        let r = corollary_residual(fn_id, &z, source, &pc, tol)?;
        let res_abs = Float::with_val(p, r.residual.abs_ref());
        let env = error_envelope_e(&Float::with_val(p, t_abs), &params, &pc).ok();
        let (env_s, ratio_s) = match &env {
            Some(e) => (f.f(e), f.f(&Float::with_val(p, &res_abs / e))),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            sci_f64(t_abs),
            f.re(&r.direct.value),
            f.im(&r.direct.value),
            f.re(&r.main),
            f.im(&r.main),
            f.f(&res_abs),
            env_s,
            ratio_s
        );
        res_pts.push((t_abs, res_abs.to_f64()));
        if let Some(e) = env {
            env_pts.push((t_abs, e.to_f64()));
        }
    }
    if let Some(path) = &a.svg {
        let doc = loglog_chart(
            &format!("{} residual vs envelope ({} main term)", fn_id.name(), source.name()),
            "t",
            "magnitude",
            &[Series { label: "residual_abs", points: res_pts }, Series { label: "envelope_E", points: env_pts }],
        );
        write_file(&cfg.resolve(path), &doc)?;
    }
    Ok(csv)
}

fn bounds(a: &BoundsArgs, cfg: &RunConfig) -> Result<ReportBundle> {
    let pc = precision(a.prec, cfg)?;
    let p = pc.work();
    let f = Fmt::new(pc.bits);
    if !(a.t_abs > 0.0 && a.t_abs < 1.0) {
        return Err(Error::Domain(format!("--t-abs must lie in (0, 1), got {}", a.t_abs)));
    }
    let alpha = match &a.alpha {
        Some(s) => parse_rational(s)?,
        None => cfg.region.alpha.clone(),
    };
    let beta = match &a.beta {
        Some(s) => parse_rational(s)?,
        None => cfg.region.beta.clone(),
    };
    let (b, b_source) = match a.b.as_deref() {
        Some("ford") => {
            let fb = ford_b(p);
            let r = fb.to_rational().ok_or(Error::NonFinite("ford_b"))?;
            (r, "ford")
        }
        Some(s) => (parse_rational(s)?, "given"),
        None => (cfg.region.b.clone(), "config"),
    };
    let c = parse_rational(&a.c)?;
    if c < 0 {
        return Err(Error::InvalidArgument("--c must be nonnegative".into()));
    }
    let c = Float::with_val(p, &c);
    let nu = a.nu.unwrap_or(DEFAULT_NU);
    let fn_id = parse_fn(&a.fn_name)?;
    let params = EnvelopeParams { b: b.clone(), alpha: alpha.clone(), beta: beta.clone(), epsilon: Rational::new() };
    params.validate()?;
    let t = Float::with_val(p, a.t_abs);
    let e = error_envelope_e(&t, &params, &pc)
        .map_err(|err| Error::Domain(format!("error envelope E undefined at t = {}: {err}", a.t_abs)))?;
    let chosen = choose_t(&t, &alpha, &pc)?;
    let chosen_f = chosen.to_f64();
    let allow = cfg.allow_unsafe_height;
    let clamped = chosen_f > SAFE_HEIGHT && !allow;
    let used = if clamped { SAFE_HEIGHT } else { chosen_f };
    let region = ZeroFreeRegionSpec::new(alpha.clone(), beta.clone(), b.clone(), cfg.region.w.clone())?;
    let spec = ContourSpec {
        kappa: default_kappa(a.t_abs)?,
        height: used,
        region,
        quad: Default::default(),
        nu,
        c_d: None,
        allow_unsafe_height: allow,
    };
    spec.validate()?;
    let point = EvalPoint::real(p, a.t_abs)?;
    let c_d = calibrate_c_d(fn_id, &spec, &pc)?;
    let mut majorants = Map::new();
    let mut m = [0.0; 3];
    for (i, seg) in Segment::ALL.into_iter().enumerate() {
        m[i] = bound_segment_with(seg, &point, &spec, c_d)?;
        majorants.insert(seg.name().into(), num(m[i]));
    }
    let (lh, la) = (m[1].ln(), m[2].ln());
    let slack = if lh > 0.0 && la > 0.0 { lh.max(la) / lh.min(la) } else { f64::INFINITY };
    let abel = abelian_mu_envelope(&t, &c, &pc)?;
    let x = Float::with_val(p, t.recip_ref());
    let walfisz = walfisz_envelope(&x, &c, &pc)?;
    let args = json!({
        "t_abs": num(a.t_abs),
        "alpha": a.alpha,
        "beta": a.beta,
        "b": a.b,
        "nu": a.nu,
        "c": a.c,
        "fn": a.fn_name,
        "prec": pc.bits,
    });
    let results = json!({
        "b": f.f(&Float::with_val(p, &b)),
        "b_source": b_source,
        "alpha": alpha.to_string(),
        "beta": beta.to_string(),
        "nu": num(nu),
        "c": f.f(&c),
        "kappa": num(spec.kappa),
        "choose_T": f.f(&chosen),
        "T_used": num(used),
        "T_clamped": clamped,
        "c_d": num(c_d),
        "majorants": majorants,
        "balance_slack": num(slack),
        "error_envelope_E": f.f(&e),
        "abelian_mu_envelope": f.f(&abel),
        "walfisz_envelope": f.f(&walfisz),
        "walfisz_x": f.f(&x),
    });
    let budget = json!({
        "majorants": "rigorous upper bounds given C_D",
        "precision_bits": pc.bits,
    });
    Ok(ReportBundle { command: "bounds", args, results, error_budget: budget })
}

fn probe(a: &ProbeArgs, cfg: &RunConfig) -> Result<String> {
    let pc = precision(a.prec, cfg)?;
    let tol = tolerance(a.tol, cfg)?;
    let grid = parse_log_grid(&a.grid)?;
    let f = Fmt::new(pc.bits);
    let scfg = sieve_config(cfg);
    let mut csv = String::new();
    match a.kind {
        ProbeKind::FakeAsym => {
            csv.push_str("t,F,F+2,(F+2)*sqrt(t),tail_bound,terms_used\n");
            for r in fake_asymptotics_probe(&grid, &pc, tol, &scfg)? {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    sci_f64(r.t),
                    f.f(&r.value),
                    f.f(&r.plus_two),
                    f.f(&r.scaled),
                    sci_f64(r.tail_bound),
                    r.terms_used
                );
            }
        }
        ProbeKind::RhWindow => {
            for &w in &grid {
                if !(w > 0.0 && w < 1.0) {
                    return Err(Error::Domain(format!("rh-window grid is 1 - z and must lie in (0, 1), got {w}")));
                }
            }
            let zs: Vec<f64> = grid.iter().map(|w| 1.0 - w).collect();
            let win = rh_window_probe(a.eta, &zs, &pc, tol, &scfg)?;
            let _ = writeln!(csv, "# series eta={}", a.eta);
            csv.push_str("one_minus_z,z,|F|*(1-z)^eta\n");
            for (r, w) in win.series.iter().zip(&grid) {
                let _ = writeln!(csv, "{},{},{}", sci_f64(*w), sci_f64(r.z), f.f(&r.ratio));
            }
            csv.push('\n');
            let _ = writeln!(csv, "# mertens eta={}", a.eta);
            csv.push_str("x,M(x),|M(x)|/x^eta\n");
            for r in &win.mertens {
                let _ = writeln!(csv, "{},{},{}", r.x, r.mertens, f.f(&r.ratio));
            }
        }
        ProbeKind::Delange => {
            csv.push_str("t,F,F*sqrt(1-exp(-t))\n");
            for r in delange_probe(&grid, &pc, tol, &scfg)? {
                let _ = writeln!(csv, "{},{},{}", sci_f64(r.t), f.f(&r.value), f.f(&r.scaled));
            }
        }
        ProbeKind::PrimeAbelian => {
            csv.push_str("one_minus_z,direct,abelian,ratio,tail_bound\n");
            for r in prime_abelian_probe(&grid, &pc, tol, &scfg)? {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    sci_f64(r.one_minus_z),
                    f.f(&r.direct),
                    f.f(&r.abelian),
                    f.f(&r.ratio),
                    sci_f64(r.tail_bound)
                );
            }
        }
    }
    Ok(csv)
}

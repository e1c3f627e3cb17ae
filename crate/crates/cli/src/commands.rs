use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use tubecalc::apa::Apa;
use tubecalc::fusion::Morphism;
use tubecalc::linalg::{column_space, CMat};
use tubecalc::module::{Endo, ModuleSystem};
use tubecalc::trace::coherence::Check;
use tubecalc::trace::Tube;
use tubecalc_tangle::{evaluate, max_box, parse, typecheck, Typed};

use crate::{load, Command, Common, Failure, Format, N_MAX_CAP};

pub fn run(cmd: &Command) -> Result<(), Failure> {
    match cmd {
        Command::Validate { category, common } => validate(category, common),
        Command::Trace { category, module, object, common } => trace(category, module, object, common),
        Command::Coherence { category, module, check, common } => coherence(category, module, check, common),
        Command::ApaCheck { category, module, generator, max_n, common } => apa_check(category, module, generator, *max_n, common),
        Command::TangleEval { category, program, module, generator, max_n, equals, common } => {
            tangle_eval(category, module, program, generator, *max_n, equals.as_deref(), common)
        }
    }
}

fn check_tol(common: &Common) -> Result<f64, Failure> {
    if !(common.tol > 0.0 && common.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be a positive number, got {}", common.tol)));
    }
    Ok(common.tol)
}

fn check_n_max(n: usize) -> Result<usize, Failure> {
    if n > N_MAX_CAP {
        return Err(Failure::Usage(format!("--max-n {n} exceeds the cap of {N_MAX_CAP}")));
    }
    Ok(n)
}

fn emit<T: Serialize>(common: &Common, report: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    let out = match common.format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Text => text(),
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn outcome(pass: bool) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

/// Nonzero multiplicities of base simples, by name.
fn named(ms: &ModuleSystem, mult: &[u32]) -> BTreeMap<String, u32> {
    mult.iter().enumerate().filter(|(_, &m)| m > 0).map(|(c, &m)| (ms.sk.names()[c].clone(), m)).collect()
}

fn show(m: &BTreeMap<String, u32>) -> String {
    if m.is_empty() {
        return "0".into();
    }
    m.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct ResidualEntry {
    name: String,
    residual: f64,
    worst: String,
    instances: usize,
    pass: bool,
}

#[derive(Serialize)]
struct ValidateReport {
    preset: String,
    residuals: Vec<ResidualEntry>,
    pass: bool,
}

fn validate(arg: &str, common: &Common) -> Result<(), Failure> {
    let tol = check_tol(common)?;
    let cat = load::category(arg, None)?;
    let residuals: Vec<ResidualEntry> = cat
        .report
        .entries()
        .into_iter()
        .map(|(name, r)| ResidualEntry { name: name.into(), residual: r.value, worst: r.worst.clone(), instances: r.instances, pass: r.value <= tol })
        .collect();
    let report = ValidateReport { preset: cat.name.clone(), pass: residuals.iter().all(|r| r.pass), residuals };
    emit(common, &report, || {
        let mut s = format!("validate {}\n", report.preset);
        for r in &report.residuals {
            s += &format!("  {:<20} {:<24e} {}  ({} instances, worst {})\n", r.name, r.residual, verdict(r.pass), r.instances, r.worst);
        }
        s
    })?;
    outcome(report.pass)
}

fn tube(arg: &str, module: &str, tol: f64) -> Result<Tube, Failure> {
    let cat = load::category(arg, Some(tol))?;
    let ms = load::module(module, &cat)?;
    Ok(Tube::new(ms)?)
}

#[derive(Serialize)]
struct PairingSummary {
    dim: usize,
    rank: usize,
    condition: f64,
    full_rank: bool,
}

#[derive(Serialize)]
struct TraceReport {
    preset: String,
    object: String,
    carrier: BTreeMap<String, u32>,
    image: BTreeMap<String, u32>,
    idempotency_residual: f64,
    pairing: PairingSummary,
    pass: bool,
}

fn trace(arg: &str, module: &str, object: &str, common: &Common) -> Result<(), Failure> {
    let tol = check_tol(common)?;
    let t = tube(arg, module, tol)?;
    let ms = &t.ms;
    let y = ms.endofunctor_label(object)?;
    let w = Endo::from_right(ms.simple(y));
    let tr = t.trace(&w)?;
    let nc = ms.nc();
    let idem = t.idempotency_residual(&tr);
    let p = t.pairing(y)?;
    let pairing = PairingSummary { dim: p.dim, rank: p.rank, condition: p.condition, full_rank: p.full_rank() };
    let report = TraceReport {
        preset: ms.name.clone(),
        object: object.into(),
        carrier: named(ms, &t.carrier_mult(&w)?),
        image: named(ms, &tr.mult[..nc]),
        idempotency_residual: idem,
        pass: idem <= tol && pairing.full_rank,
        pairing,
    };
    emit(common, &report, || {
        format!(
            "trace of {} on {}\n  carrier      {}\n  image        {}\n  idempotency  {:e} {}\n  pairing      rank {}/{}  condition {:e} {}\n",
            report.object,
            report.preset,
            show(&report.carrier),
            show(&report.image),
            idem,
            verdict(idem <= tol),
            report.pairing.rank,
            report.pairing.dim,
            report.pairing.condition,
            verdict(report.pairing.full_rank),
        )
    })?;
    outcome(report.pass)
}

fn coherence(arg: &str, module: &str, check: &str, common: &Common) -> Result<(), Failure> {
    let tol = check_tol(common)?;
    let checks: Vec<Check> = if check == "all" { Check::ALL.to_vec() } else { vec![check.parse()?] };
    let t = tube(arg, module, tol)?;
    let reports = checks.iter().map(|&c| t.coherence_report(c, tol)).collect::<tubecalc::Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.pass);
    let unframed = if common.format == Format::Text && checks.contains(&Check::BraidCompat) { Some(t.braid_unframed_residuals()?) } else { None };
    emit(common, &reports, || {
        let mut s = format!("coherence {}\n", t.ms.name);
        for r in &reports {
            s += &format!("  {:<14} {:<24e} {}\n", r.check, r.residual, verdict(r.pass));
        }
        if let Some((over, under)) = unframed {
            s += &format!("  braid_compat without twist factor: over {over:e}, under {under:e}\n");
        }
        s
    })?;
    outcome(pass)
}

fn build_apa(t: Tube, generator: &str, n_max: usize) -> Result<Apa, Failure> {
    let x = t.ms.endofunctor_label(generator)?;
    Ok(Apa::build(t, x, n_max)?)
}

fn apa_check(arg: &str, module: &str, generator: &str, max_n: usize, common: &Common) -> Result<(), Failure> {
    let tol = check_tol(common)?;
    let n_max = check_n_max(max_n)?;
    let apa = build_apa(tube(arg, module, tol)?, generator, n_max)?;
    let report = apa.check_axioms(tol)?;
    emit(common, &report, || {
        let mut s = format!(
            "anchored planar algebra of {} on {}, n_max {}, Frobenius-Schur indicator {}\n",
            report.generator, report.preset, report.n_max, report.fs_indicator
        );
        for a in &report.axioms {
            s += &format!("  {:<3} {:<24e} {}  {:>3} instances  {}\n", a.name, a.residual, verdict(a.pass), a.instances, a.statement);
        }
        for b in &report.boxes {
            let m: BTreeMap<String, u32> = b.multiplicities.iter().filter(|(_, &v)| v > 0).map(|(k, v)| (k.clone(), *v)).collect();
            s += &format!("  P[{}] = {}\n", b.n, show(&m));
        }
        s
    })?;
    outcome(report.all_pass())
}

#[derive(Serialize)]
struct Block {
    charge: String,
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TangleReport {
    program: String,
    generator: String,
    source: Vec<usize>,
    target: Vec<usize>,
    /// The morphism in orthonormal bases of the source and target images.
    blocks: Vec<Block>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<f64>,
    pass: bool,
}

fn read_program(path: &Path) -> Result<Typed, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let term = parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    typecheck(&term).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Identity of the tensor product of the given boxes.
fn boxes_id(apa: &Apa, sizes: &[usize]) -> Result<Morphism, Failure> {
    let sk = &apa.tube.ms.sk;
    let mut out = sk.identity(&apa.eta()?.src);
    for &n in sizes {
        out = sk.tensor(&out, &apa.id(n)?);
    }
    Ok(out)
}

fn compress(apa: &Apa, typed: &Typed, m: &Morphism) -> Result<Vec<Block>, Failure> {
    let (src, tgt) = (boxes_id(apa, &typed.sig.source)?, boxes_id(apa, &typed.sig.target)?);
    let mut blocks = Vec::new();
    for (c, blk) in &m.blocks {
        let (Some(es), Some(et)) = (src.blocks.get(c), tgt.blocks.get(c)) else { continue };
        let (bs, bt) = (column_space(es, 1e-8), column_space(et, 1e-8));
        if bs.ncols() == 0 || bt.ncols() == 0 {
            continue;
        }
        let r: CMat = bt.adjoint() * blk * bs;
        let grid = |f: fn(&tubecalc::linalg::C64) -> f64| (0..r.nrows()).map(|i| (0..r.ncols()).map(|j| clean(f(&r[(i, j)]))).collect()).collect();
        blocks.push(Block { charge: apa.tube.ms.sk.names()[*c].clone(), rows: r.nrows(), cols: r.ncols(), re: grid(|z| z.re), im: grid(|z| z.im) });
    }
    Ok(blocks)
}

/// Rounds away sub-1e-12 noise so reports are stable across platforms.
fn clean(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn tangle_eval(
    arg: &str,
    module: &str,
    program: &Path,
    generator: &str,
    max_n: Option<usize>,
    equals: Option<&Path>,
    common: &Common,
) -> Result<(), Failure> {
    let tol = check_tol(common)?;
    let typed = read_program(program)?;
    let other = equals.map(read_program).transpose()?;
    let need = other.iter().map(max_box).fold(max_box(&typed), usize::max);
    let n_max = check_n_max(max_n.unwrap_or(need))?;
    let apa = build_apa(tube(arg, module, tol)?, generator, n_max)?;
    let m = evaluate(&typed, &apa)?;
    let residual = match &other {
        Some(o) => {
            if o.sig != typed.sig {
                return Err(Failure::Usage(format!("programs have different boundaries: {} vs {}", typed.sig, o.sig)));
            }
            Some(m.residual(&evaluate(o, &apa)?))
        }
        None => None,
    };
    let report = TangleReport {
        program: program.display().to_string(),
        generator: generator.into(),
        source: typed.sig.source.clone(),
        target: typed.sig.target.clone(),
        blocks: compress(&apa, &typed, &m)?,
        pass: residual.is_none_or(|r| r <= tol),
        residual,
    };
    emit(common, &report, || {
        let mut s = format!("{}: {}\n", report.program, typed.sig);
        for b in &report.blocks {
            s += &format!("  charge {} ({}x{})\n", b.charge, b.rows, b.cols);
            for (re, im) in b.re.iter().zip(&b.im) {
                let row: Vec<String> = re.iter().zip(im).map(|(a, b)| format!("{a:.9}{b:+.9}i")).collect();
                s += &format!("    [{}]\n", row.join(", "));
            }
        }
        if let Some(r) = report.residual {
            s += &format!("  residual against {}: {r:e} {}\n", equals.unwrap().display(), verdict(r <= tol));
        }
        s
    })?;
    outcome(report.pass)
}

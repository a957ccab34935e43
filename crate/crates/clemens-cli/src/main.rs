//! Command-line front end: generate instances and families, validate the
//! limiting-structure clauses, compute Deligne splittings, run the wedge and
//! Hodge-Riemann verification sweeps, compute certified thresholds, and emit
//! asymptotics tables.
//!
//! Exit codes: 0 pass, 1 verified fail, 2 input error, 3 inconclusive.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use clemens::exact::Rat;
use clemens::files::{read_family, read_instance, write_json, FamilyFile, InstanceFile};
use clemens::lmhs::{adapted_basis, gen_instance, CaseFlag, LimitingMHS, FRIEDMAN_CLAUSES};
use clemens::orbit::{
    ddbar_det, delta_threshold, gen_f2_family, gen_h21_family, hr_verify, sweep, Certificate,
    PerturbationFamily, SamplePoint, Verdict,
};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "clemens",
    about = "Exact verification of limiting mixed Hodge structures for conifold degenerations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Radius bound for |s| at sample points, as a rational or decimal (e.g. 1/1000 or 0.001).
    #[arg(long, default_value = "1/1000", value_parser = parse_rat)]
    s_radius: Rat,
    /// Exact Im(z) values; repeatable. When absent, Im(z) is derived from |ζ|.
    #[arg(long = "imz", value_parser = parse_rat)]
    imz: Vec<Rat>,
    /// Number of random base points.
    #[arg(long, default_value_t = 25)]
    grid_n: usize,
    /// Seed for the point sweep.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Interval precision in bits (env HODGE_PRECISION_BITS overrides the default).
    #[arg(long, default_value_t = default_precision())]
    precision_bits: u32,
}

fn default_precision() -> u32 {
    std::env::var("HODGE_PRECISION_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(128)
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    if let Ok(r) = Rat::from_str(s) {
        return Ok(r);
    }
    // decimal form: [-]int[.frac]
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
        && !(int_part.is_empty() && frac_part.is_empty())
    {
        let digits = format!("{int_part}{frac_part}");
        let num: i128 = digits.parse().map_err(|_| format!("invalid number {s:?}"))?;
        let den = 10i128.pow(frac_part.len() as u32);
        return Ok(&Rat::from_int(sign * num as i64) / &Rat::from_int(den as i64));
    }
    Err(format!("invalid rational {s:?}"))
}

#[derive(Subcommand)]
enum Command {
    /// Generate a validated instance and a random family over it.
    Gen {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        case: CaseFlag,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Total-degree cap of the family coefficient polynomials.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Instance output path.
        #[arg(short, long)]
        out: PathBuf,
        /// Family output path.
        #[arg(long)]
        family: Option<PathBuf>,
    },
    /// Check every defining clause of an instance file.
    Validate { instance: PathBuf },
    /// Compute the Deligne splitting and print piece dimensions and bases.
    Split { instance: PathBuf },
    /// Wedge-determinant non-vanishing sweep over a point grid.
    VerifyDdbar {
        instance: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        /// Certificate output path.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Hodge-Riemann positivity sweep over a point grid.
    VerifyHr {
        instance: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Certified smallness threshold (δ, Im(z)₀) for both pipelines.
    Threshold {
        instance: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// CSV of (Im z, |det|/(2·Im z), ρ/(2k·Im z)) along growing Im(z).
    Asymptotics {
        instance: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Restore the default SIGPIPE disposition: the Rust runtime ignores it,
    // which turns `clemens split … | head` into a panic on the first write
    // after the reader goes away.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Gen {
            h,
            case,
            seed,
            degree,
            out,
            family,
        } => cmd_gen(h, case, seed, degree, &out, family.as_deref()),
        Command::Validate { instance } => cmd_validate(&instance),
        Command::Split { instance } => cmd_split(&instance),
        Command::VerifyDdbar {
            instance,
            family,
            grid,
            out,
        } => cmd_verify_ddbar(&instance, &family, &grid, out.as_deref()),
        Command::VerifyHr {
            instance,
            family,
            grid,
            out,
        } => cmd_verify_hr(&instance, &family, &grid, out.as_deref()),
        Command::Threshold {
            instance,
            family,
            out,
        } => cmd_threshold(&instance, &family, out.as_deref()),
        Command::Asymptotics {
            instance,
            family,
            grid,
            out,
        } => cmd_asymptotics(&instance, &family, &grid, out.as_deref()),
    }
}

fn check_grid(grid: &GridArgs) -> Result<(), String> {
    if !grid.s_radius.is_positive() || grid.s_radius >= Rat::one() {
        return Err("--s-radius must lie in (0, 1)".into());
    }
    if grid.precision_bits < 64 {
        return Err("--precision-bits must be at least 64".into());
    }
    if grid.grid_n < 1 {
        return Err("--grid-n must be at least 1".into());
    }
    for y in &grid.imz {
        if !y.is_positive() {
            return Err("--imz values must be positive".into());
        }
    }
    Ok(())
}

fn cmd_gen(
    h: usize,
    case: CaseFlag,
    seed: u64,
    degree: u32,
    out: &Path,
    family_out: Option<&Path>,
) -> Result<u8, String> {
    let inst = gen_instance(h, case, seed);
    let violations = inst.validate_friedman();
    if !violations.is_empty() {
        return Err(format!("generator postcondition failed: {}", violations[0]));
    }
    let file = InstanceFile::new(inst.clone(), Some(case));
    write_json(out, &file).map_err(|e| e.to_string())?;
    println!(
        "instance: h = {h}, case {case}, dim {}, written to {}",
        inst.dim(),
        out.display()
    );
    if let Some(fpath) = family_out {
        let f2 = gen_f2_family(&inst, seed, degree).map_err(|e| e.to_string())?;
        let h21 = gen_h21_family(&f2, seed + 1).map_err(|e| e.to_string())?;
        let fam_file = FamilyFile::from_families(out.display().to_string(), &f2, &h21);
        write_json(fpath, &fam_file).map_err(|e| e.to_string())?;
        println!(
            "family:   degree {degree} (h21 at {}), written to {}",
            2 * degree,
            fpath.display()
        );
    }
    Ok(EXIT_PASS)
}

fn load_instance(path: &Path) -> Result<LimitingMHS, String> {
    Ok(read_instance(path).map_err(|e| e.to_string())?.lmhs)
}

fn load_pair(
    inst_path: &Path,
    fam_path: &Path,
) -> Result<(LimitingMHS, PerturbationFamily, PerturbationFamily), String> {
    let inst = load_instance(inst_path)?;
    let fam_file = read_family(fam_path).map_err(|e| e.to_string())?;
    let f2 = fam_file.f2_family(&inst).map_err(|e| e.to_string())?;
    let h21 = fam_file.h21_family(&inst).map_err(|e| e.to_string())?;
    Ok((inst, f2, h21))
}

fn cmd_validate(path: &Path) -> Result<u8, String> {
    let inst = load_instance(path)?;
    let violations = inst.validate_friedman();
    let failing: BTreeMap<&str, &str> = violations
        .iter()
        .map(|v| (v.check.as_str(), v.detail.as_str()))
        .collect();
    for clause in FRIEDMAN_CLAUSES {
        match failing.get(clause) {
            None => println!("PASS {clause}"),
            Some(detail) => println!("FAIL {clause}: {detail}"),
        }
    }
    if violations.is_empty() {
        println!("all {} checks pass", FRIEDMAN_CLAUSES.len());
        Ok(EXIT_PASS)
    } else {
        println!("{} of {} checks fail", failing.len(), FRIEDMAN_CLAUSES.len());
        Ok(EXIT_FAIL)
    }
}

fn cmd_split(path: &Path) -> Result<u8, String> {
    let inst = load_instance(path)?;
    let violations = inst.validate_friedman();
    if let Some(v) = violations.first() {
        println!("invalid instance: {v}");
        return Ok(EXIT_FAIL);
    }
    let splitting = inst.mhs().deligne_splitting().map_err(|e| e.to_string())?;
    let h = inst.h();
    let order = [(3, 0), (2, 1), (1, 2), (1, 1), (2, 2), (0, 3)];
    let dims: Vec<String> = order
        .iter()
        .map(|&(p, q)| splitting.piece(p, q).dim().to_string())
        .collect();
    println!(
        "dims (I^{{3,0}}, I^{{2,1}}, I^{{1,2}}, I^{{1,1}}, I^{{2,2}}, I^{{0,3}}) = ({})",
        dims.join(",")
    );
    println!("expected ({})", format_args!("1,{h},{h},1,1,1"));
    for &(p, q) in &order {
        let piece = splitting.piece(p, q);
        println!("I^{{{p},{q}}} basis rows:");
        for row in piece.basis_vectors() {
            let coords: Vec<String> = row.iter().map(|c| format!("{c}")).collect();
            println!("  [{}]", coords.join(", "));
        }
    }
    let expect: Vec<usize> = vec![1, h, h, 1, 1, 1];
    let got: Vec<usize> = order
        .iter()
        .map(|&(p, q)| splitting.piece(p, q).dim())
        .collect();
    Ok(if got == expect { EXIT_PASS } else { EXIT_FAIL })
}

fn build_points(h: usize, grid: &GridArgs) -> Result<Vec<SamplePoint>, String> {
    let bases = sweep::sample_base_points(h, &grid.s_radius, grid.grid_n, grid.seed);
    let points = if grid.imz.is_empty() {
        sweep::lift_from_zeta(&bases, grid.precision_bits)
    } else {
        sweep::lift_exact(&bases, &grid.imz)
    };
    points.map_err(|e| e.to_string())
}

#[derive(serde::Serialize)]
struct SweepFile {
    summary: Certificate,
    points: Vec<Certificate>,
}

fn finish_sweep(
    kind: &str,
    certs: Vec<Certificate>,
    out: Option<&Path>,
) -> Result<u8, String> {
    let pass = certs.iter().filter(|c| c.verdict == Verdict::Pass).count();
    let fail = certs.iter().filter(|c| c.verdict == Verdict::Fail).count();
    let inconclusive = certs
        .iter()
        .filter(|c| c.verdict == Verdict::Inconclusive)
        .count();
    println!("{kind}: {pass} pass, {fail} fail, {inconclusive} inconclusive");
    let verdict = if fail > 0 {
        Verdict::Fail
    } else if inconclusive > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    let mode = certs
        .first()
        .map(|c| c.arithmetic_mode)
        .unwrap_or(clemens::orbit::ArithmeticMode::Exact);
    let mut summary = Certificate::new(kind, verdict, mode);
    summary = summary.with_witness(
        "points_checked",
        clemens::orbit::WitnessValue::from_count(certs.len()),
    );
    summary = summary.with_witness(
        "failures",
        clemens::orbit::WitnessValue::from_count(fail),
    );
    if let Some(path) = out {
        write_json(
            path,
            &SweepFile {
                summary,
                points: certs,
            },
        )
        .map_err(|e| e.to_string())?;
        println!("certificates written to {}", path.display());
    }
    Ok(match verdict {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_verify_ddbar(
    inst_path: &Path,
    fam_path: &Path,
    grid: &GridArgs,
    out: Option<&Path>,
) -> Result<u8, String> {
    check_grid(grid)?;
    let (_, f2, _) = load_pair(inst_path, fam_path)?;
    let points = build_points(f2.h(), grid)?;
    let mut certs = Vec::with_capacity(points.len());
    for p in &points {
        let cert = clemens::orbit::ddbar_certificate(&f2, p).map_err(|e| e.to_string())?;
        if cert.verdict != Verdict::Pass {
            println!(
                "point |s|² = {}: {:?}",
                p.s_norm_sqr().to_decimal(12),
                cert.verdict
            );
        }
        certs.push(cert);
    }
    finish_sweep("ddbar", certs, out)
}

fn cmd_verify_hr(
    inst_path: &Path,
    fam_path: &Path,
    grid: &GridArgs,
    out: Option<&Path>,
) -> Result<u8, String> {
    check_grid(grid)?;
    let (_, _, h21) = load_pair(inst_path, fam_path)?;
    let points = build_points(h21.h(), grid)?;
    let mut certs = Vec::with_capacity(points.len());
    for p in &points {
        let outcome = hr_verify(&h21, p).map_err(|e| e.to_string())?;
        if outcome.verdict != Verdict::Pass {
            let rho = outcome
                .certificate
                .witnesses
                .get("rho")
                .map(|w| w.decimal.clone())
                .unwrap_or_default();
            println!(
                "point |s|² = {}: {:?} (rho = {rho})",
                p.s_norm_sqr().to_decimal(12),
                outcome.verdict
            );
        }
        certs.push(outcome.certificate);
    }
    finish_sweep("hr", certs, out)
}

fn cmd_threshold(
    inst_path: &Path,
    fam_path: &Path,
    out: Option<&Path>,
) -> Result<u8, String> {
    let (_, f2, h21) = load_pair(inst_path, fam_path)?;
    match delta_threshold(&f2, &h21) {
        Ok(th) => {
            println!(
                "delta = {} (≈ {})",
                th.delta,
                th.delta.to_decimal(12)
            );
            println!(
                "imz_min = {} (≈ {})",
                th.imz_min,
                th.imz_min.to_decimal(6)
            );
            if let Some(path) = out {
                write_json(path, &th.certificate).map_err(|e| e.to_string())?;
                println!("certificate written to {}", path.display());
            }
            Ok(EXIT_PASS)
        }
        Err(e) => {
            println!("no certified threshold: {e}");
            Ok(EXIT_FAIL)
        }
    }
}

fn cmd_asymptotics(
    inst_path: &Path,
    fam_path: &Path,
    grid: &GridArgs,
    out: Option<&Path>,
) -> Result<u8, String> {
    check_grid(grid)?;
    let (inst, f2, h21) = load_pair(inst_path, fam_path)?;
    let imz = if grid.imz.is_empty() {
        vec![
            Rat::from_int(10),
            Rat::from_int(100),
            Rat::from_int(1000),
        ]
    } else {
        grid.imz.clone()
    };
    // One fixed base point; Im(z) sweeps along the list.
    let bases = sweep::sample_base_points(inst.h(), &grid.s_radius, 1, grid.seed);
    let (t, zeta) = &bases[0];
    let k = adapted_basis(&inst).map_err(|e| e.to_string())?.k_const;
    let mut rows = vec!["imz,abs_det_over_2imz,rho_over_2k_imz".to_string()];
    for y in &imz {
        let p = SamplePoint::exact(t.clone(), zeta.clone(), Rat::zero(), y.clone())
            .map_err(|e| e.to_string())?;
        let det = ddbar_det(&f2, &p).map_err(|e| e.to_string())?;
        let q = clemens::orbit::q_matrix(&h21, &p).map_err(|e| e.to_string())?;
        let det_val = det.normalized_at(y);
        let two_y = &Rat::from_int(2) * y;
        // |det|/(2y) via exact |det|² then decimal square root at print time.
        let abs_over = decimal_sqrt(&(&det_val.norm_sqr() / &(&two_y * &two_y)), 12);
        let rho = q.rho().eval(y);
        let rho_over = (&rho.re / &(&two_y * &k)).to_decimal(12);
        rows.push(format!("{},{},{}", y.to_decimal(6), abs_over, rho_over));
    }
    let body = rows.join("\n") + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| e.to_string())?;
            println!("asymptotics written to {}", path.display());
        }
        None => print!("{body}"),
    }
    // also report |D_{h+1}(s)|² for comparison with the final row
    let vals = f2
        .eval_sections(t, zeta)
        .map_err(|e| e.to_string())?;
    let d_last = &vals[f2.h() + 1].d;
    println!("abs_D_last_sqr = {}", d_last.norm_sqr().to_decimal(12));
    Ok(EXIT_PASS)
}

/// Decimal string of √x for rational x ≥ 0, by integer square root of the
/// scaled numerator (truncated).
fn decimal_sqrt(x: &Rat, digits: usize) -> String {
    use num_bigint::BigInt;
    assert!(!x.is_negative());
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (x.numer() * &scale * &scale) / x.denom();
    let root = scaled.sqrt();
    let int_part = &root / &scale;
    let frac_part = &root % &scale;
    format!("{int_part}.{:0>width$}", frac_part, width = digits)
}

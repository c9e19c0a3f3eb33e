//! Determinant-quantization drivers: single sequences from seeds and the
//! bundled-table reproduction report.

use std::io::Write;
use std::path::PathBuf;

use doublewell_core::hankel::{track_sequence, HankelSequence, SequenceStatus, TrackConfig};
use doublewell_core::numerics::Real;
use doublewell_core::riccati::Parity;
use doublewell_core::{BigComplex, BigParams, BigReal};

use crate::common::{parse_big, parse_params, parse_seed, CliError, CliResult};
use crate::records::{self, HistoryPoint, Record, RecordFile, OutputFormat};
use crate::refdata::{reference_rows, ReferenceRow};

pub struct FindArgs {
    pub j: String,
    pub lambda: String,
    pub parity: Parity,
    pub digits: u32,
    pub d_max: usize,
    pub d: usize,
    pub seeds: Vec<String>,
    pub tol: String,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

#[allow(clippy::too_many_arguments)]
fn run_sequence(
    params: &BigParams,
    parity: Parity,
    digits: u32,
    d: usize,
    d_min: usize,
    d_max: usize,
    newton_tol: &str,
    seq_tol: &str,
    stop_early: bool,
    seed: BigComplex,
) -> CliResult<HankelSequence<BigReal>> {
    let mut config = TrackConfig::new(
        d_max,
        parse_big(digits, newton_tol)?,
        parse_big(digits, seq_tol)?,
    );
    config.d = d;
    config.d_min = d_min.max(2).min(d_max.saturating_sub(1)).max(2);
    config.stop_early = stop_early;
    // warm starts need few iterations; a small budget keeps the stalls
    // near the working-precision noise floor cheap
    config.max_iter = 25;
    Ok(track_sequence(params, parity, &config, seed)?)
}

/// bound if the converged root sits below threshold with its imaginary
/// part inside the sequence error; otherwise the root belongs to the
/// above-critical family, the one the determinant sequences reach first.
fn label_sequence(sequence: &HankelSequence<BigReal>, params: &BigParams) -> &'static str {
    let imag = sequence.converged.im.clone().abs();
    if imag <= sequence.err_estimate && sequence.converged.re < params.threshold() {
        "bound"
    } else {
        "type_b"
    }
}

fn sequence_record(
    sequence: &HankelSequence<BigReal>,
    params: &BigParams,
    n: Option<usize>,
) -> Record {
    Record {
        label: label_sequence(sequence, params).to_string(),
        method: "rpm".to_string(),
        re_e: sequence.converged.re.to_decimal(),
        im_e: sequence.converged.im.to_decimal(),
        uncertainty: sequence.err_estimate.to_decimal(),
        theta_star: None,
        n,
        status: Some(sequence.status.as_str().to_string()),
        history: Some(
            sequence
                .points
                .iter()
                .map(|point| HistoryPoint {
                    dim: point.dim,
                    re_e: point.energy.re.to_decimal(),
                    im_e: point.energy.im.to_decimal(),
                })
                .collect(),
        ),
    }
}

pub fn cmd_find(args: &FindArgs) -> CliResult<()> {
    if args.seeds.is_empty() {
        return Err(CliError::Usage("at least one --seed is required".into()));
    }
    let params = parse_params(args.digits, &args.j, &args.lambda)?;
    // --tol bounds the Newton step; the sequence verdict uses a floor of
    // 1e-14 on the last difference so the full ladder runs and a trend
    // established below that floor counts as converged
    let tol = args.tol.as_str();
    let tol_f64: f64 = tol.parse().unwrap_or(1e-20);
    let seq_tol = format!("{:e}", tol_f64.max(1e-14));

    let mut sequences: Vec<HankelSequence<BigReal>> = Vec::new();
    for seed_text in &args.seeds {
        let seed = parse_seed(args.digits, seed_text)?;
        // complex seeds chase resonances; small determinants are too
        // noisy there, so their sequences start deeper
        let d_min = if seed.im.is_zero() { 2 } else { 8 };
        let mut sequence = run_sequence(
            &params,
            args.parity,
            args.digits,
            args.d,
            d_min,
            args.d_max,
            tol,
            &seq_tol,
            false,
            seed,
        )?;
        // jitter at the working-precision noise floor breaks the
        // monotone-trend test; a last step already below the tolerance
        // still counts
        if sequence.status == SequenceStatus::Stagnated
            && sequence.err_estimate <= parse_big(args.digits, &seq_tol)?
        {
            sequence.status = SequenceStatus::Converged;
        }
        sequences.push(sequence);
    }

    let records: Vec<Record> = sequences
        .iter()
        .enumerate()
        .map(|(idx, sequence)| sequence_record(sequence, &params, Some(idx)))
        .collect();

    match args.format {
        OutputFormat::Json => records::write_json(&args.out, &RecordFile::new(records))?,
        OutputFormat::Csv => {
            let mut writer = records::output_writer(&args.out)?;
            emit(&mut writer, "n,D_final,Re_E,abs_Im_E,err_est,status")?;
            for (idx, sequence) in sequences.iter().enumerate() {
                let line = format!(
                    "{},{},{},{},{},{}",
                    idx,
                    sequence.points.last().map(|p| p.dim).unwrap_or(0),
                    sequence.converged.re.to_decimal(),
                    sequence.converged.im.clone().abs().to_decimal(),
                    sequence.err_estimate.to_decimal(),
                    sequence.status.as_str()
                );
                emit(&mut writer, &line)?;
            }
        }
    }

    if sequences
        .iter()
        .any(|s| s.status != SequenceStatus::Converged)
    {
        return Err(CliError::Numeric(
            "one or more sequences did not converge (records written)".into(),
        ));
    }
    Ok(())
}

fn emit(writer: &mut Box<dyn Write>, line: &str) -> CliResult<()> {
    writeln!(writer, "{line}").map_err(|e| CliError::Numeric(e.to_string()))
}

pub struct TableArgs {
    pub table: u8,
    pub digits: u32,
    pub n_basis: usize,
    pub omega: f64,
    pub deep: bool,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

struct RowReport {
    n: usize,
    method: &'static str,
    re: String,
    abs_im: String,
    delta: f64,
    matched_digits: i32,
    status: String,
    required: bool,
    pass: bool,
}

fn matched_digits(delta: f64, scale: f64) -> i32 {
    if delta == 0.0 {
        return 40;
    }
    let rel = delta / scale.max(1.0);
    (-rel.log10()).floor().clamp(0.0, 40.0) as i32
}

fn reference_energy(digits: u32, row: &ReferenceRow) -> CliResult<BigComplex> {
    let re = parse_big(digits, &row.re)?;
    let im = match &row.abs_im {
        Some(text) => -parse_big(digits, text)?,
        None => re.lift(0.0),
    };
    Ok(BigComplex::new(re, im))
}

/// Seed = reference shifted by a relative 10^-3, so the sequence has to
/// actually travel. Near-degenerate rows sit only ~|Im E| away from their
/// partner root, so the shift is capped by a fraction of that separation.
fn perturbed_seed(energy: &BigComplex) -> BigComplex {
    let mut eps = energy.abs() * &energy.re.lift(1e-3);
    let gap = energy.im.clone().abs() * &energy.re.lift(0.3);
    if !energy.im.is_zero() && gap < eps {
        eps = gap;
    }
    BigComplex::new(energy.re.clone() + &eps, energy.im.clone() + &eps)
}

fn row_parity(n: usize) -> Parity {
    if n % 2 == 0 {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// Per-row working settings for the above-critical family. Rows up to
/// n = 10 carry 20 printed decimals; the deeper rows only need 15
/// significant digits but sit far from the origin, which pushes both the
/// precision and the starting dimension up.
fn table2_row(digits: u32, row: &ReferenceRow) -> CliResult<RowReport> {
    let n = row.n;
    let (digits, d_min, d_max, seq_tol) = if n <= 10 {
        (digits.max(240), n / 2 + 8, 40, "1e-26")
    } else {
        (digits.max(320), n + 2, 60, "1e-18")
    };
    let params = parse_params(digits, "0.8", "0.1")?;
    let reference = reference_energy(digits, row)?;
    let seed = perturbed_seed(&reference);
    let sequence = run_sequence(
        &params,
        row_parity(n),
        digits,
        0,
        d_min,
        d_max,
        "1e-40",
        seq_tol,
        true,
        seed,
    )?;
    let delta = (sequence.converged.clone() - &reference).abs().to_f64();
    let scale = reference.abs().to_f64();
    let pass = if n <= 10 {
        // 2 ulp of the 20-decimal print, separately in Re and |Im|
        let d_re = (sequence.converged.re.clone() - &reference.re).abs().to_f64();
        let d_im =
            (sequence.converged.im.clone().abs() - reference.im.clone().abs()).abs().to_f64();
        d_re <= 2e-20 && d_im <= 2e-20
    } else {
        delta / scale <= 1e-15
    };
    Ok(RowReport {
        n,
        method: "rpm",
        re: sequence.converged.re.to_decimal(),
        abs_im: sequence.converged.im.clone().abs().to_decimal(),
        delta,
        matched_digits: matched_digits(delta, scale),
        status: sequence.status.as_str().to_string(),
        required: true,
        pass,
    })
}

/// Below-critical rows from the rotated Rayleigh-Ritz lane: one scan over
/// the below-critical angles, then each reference row is matched to the
/// nearest below-critical plateau.
fn table1_rr_rows(
    rows: &[&ReferenceRow],
    n_basis: usize,
    omega: f64,
) -> CliResult<Vec<RowReport>> {
    use doublewell_core::rrcr::{classify_poles, theta_scan, PoleLabel};
    let params = doublewell_core::SmallParams::new(0.8, 0.1)?;
    let trajectory = theta_scan(&params, n_basis, 0.55, 0.78, 0.005, omega)?;
    let records = classify_poles(&trajectory, &params);
    let mut reports = Vec::new();
    for row in rows {
        let re: f64 = row.re.parse().unwrap();
        let im: f64 = -row.abs_im.as_deref().unwrap_or("0").parse::<f64>().unwrap();
        let reference = num_complex::Complex64::new(re, im);
        let best = records
            .iter()
            .filter(|r| r.label == PoleLabel::TypeA)
            .min_by(|a, b| {
                (a.energy - reference)
                    .norm()
                    .partial_cmp(&(b.energy - reference).norm())
                    .unwrap()
            });
        let report = match best {
            Some(record) => {
                let delta = (record.energy - reference).norm();
                RowReport {
                    n: row.n,
                    method: "rr",
                    re: format!("{}", record.energy.re),
                    abs_im: format!("{}", record.energy.im.abs()),
                    delta,
                    matched_digits: matched_digits(delta, reference.norm()),
                    status: "converged".to_string(),
                    required: true,
                    pass: delta <= 1e-3,
                }
            }
            None => RowReport {
                n: row.n,
                method: "rr",
                re: String::new(),
                abs_im: String::new(),
                delta: f64::INFINITY,
                matched_digits: 0,
                status: "no_plateau".to_string(),
                required: true,
                pass: false,
            },
        };
        reports.push(report);
    }
    Ok(reports)
}

/// Below-critical rows by determinant sequences. At desk-scale dimensions
/// the sequence lands on the nearby above-critical twin, so these rows
/// are informational unless --deep raises the dimension ceiling.
fn table1_rpm_row(digits: u32, row: &ReferenceRow, deep: bool) -> CliResult<RowReport> {
    let (digits, d_max) = if deep {
        (digits.max(500), 140)
    } else if row.n == 0 {
        // the one bound-state row carries 20 printed decimals and the
        // sequence gains roughly a digit per dimension
        (digits.max(240), 60)
    } else {
        (digits.max(240), 40)
    };
    let params = parse_params(digits, "0.8", "0.1")?;
    let reference = reference_energy(digits, row)?;
    let seed = perturbed_seed(&reference);
    let d_min = if row.n == 0 { 2 } else { row.n / 2 + 8 };
    let sequence = run_sequence(
        &params,
        row_parity(row.n),
        digits,
        0,
        d_min,
        d_max,
        "1e-40",
        "1e-26",
        true,
        seed,
    )?;
    let delta = (sequence.converged.clone() - &reference).abs().to_f64();
    let scale = reference.abs().to_f64();
    let required = row.n == 0;
    let pass = if row.n == 0 {
        // the reference is printed to 20 decimals; allow its rounding
        // plus the sequence noise floor
        let d_re = (sequence.converged.re.clone() - &reference.re).abs().to_f64();
        d_re <= 1e-19
    } else {
        // resolving the below-critical member needs dimensions far past
        // desk scale; reported, not gated
        true
    };
    Ok(RowReport {
        n: row.n,
        method: "rpm",
        re: sequence.converged.re.to_decimal(),
        abs_im: sequence.converged.im.clone().abs().to_decimal(),
        delta,
        matched_digits: matched_digits(delta, scale),
        status: if row.n > 0 && !deep {
            format!("{} (twin family; --deep for the full attempt)", sequence.status.as_str())
        } else {
            sequence.status.as_str().to_string()
        },
        required,
        pass,
    })
}

pub fn cmd_table(args: &TableArgs) -> CliResult<()> {
    if args.table != 1 && args.table != 2 {
        return Err(CliError::Usage(format!(
            "table must be 1 or 2, got {}",
            args.table
        )));
    }
    let rows = reference_rows(args.table);
    let mut reports: Vec<RowReport> = Vec::new();
    if args.table == 2 {
        for row in &rows {
            reports.push(table2_row(args.digits, row)?);
        }
    } else {
        for row in rows.iter().filter(|r| r.n <= 4) {
            reports.push(table1_rpm_row(args.digits, row, args.deep)?);
        }
        let rr_rows: Vec<&ReferenceRow> = rows.iter().filter(|r| r.n >= 5).collect();
        reports.extend(table1_rr_rows(&rr_rows, args.n_basis, args.omega)?);
    }

    match args.format {
        OutputFormat::Json => {
            let records: Vec<Record> = reports
                .iter()
                .map(|r| Record {
                    label: if args.table == 2 { "type_b" } else { "type_a" }.to_string(),
                    method: r.method.to_string(),
                    re_e: r.re.clone(),
                    im_e: format!("-{}", r.abs_im),
                    uncertainty: format!("{:e}", r.delta),
                    theta_star: None,
                    n: Some(r.n),
                    status: Some(r.status.clone()),
                    history: None,
                })
                .collect();
            records::write_json(&args.out, &RecordFile::new(records))?;
        }
        OutputFormat::Csv => {
            let mut writer = records::output_writer(&args.out)?;
            emit(
                &mut writer,
                "n,method,Re_E,abs_Im_E,delta,matched_digits,status,pass",
            )?;
            for r in &reports {
                let line = format!(
                    "{},{},{},{},{:e},{},{},{}",
                    r.n,
                    r.method,
                    r.re,
                    r.abs_im,
                    r.delta,
                    r.matched_digits,
                    r.status,
                    if !r.required {
                        "info"
                    } else if r.pass {
                        "ok"
                    } else {
                        "fail"
                    }
                );
                emit(&mut writer, &line)?;
            }
        }
    }

    let failures: Vec<usize> = reports
        .iter()
        .filter(|r| r.required && !r.pass)
        .map(|r| r.n)
        .collect();
    if !failures.is_empty() {
        return Err(CliError::Numeric(format!(
            "rows outside tolerance: {failures:?}"
        )));
    }
    Ok(())
}

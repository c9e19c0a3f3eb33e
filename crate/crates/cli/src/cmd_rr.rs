//! Rotation-angle scan driver: trajectory dump, plateau records and the
//! per-angle distance series against a determinant-method record file.

use std::io::Write;
use std::path::PathBuf;

use doublewell_core::rrcr::{classify_poles, theta_scan, ResonanceRecord, ThetaTrajectory};
use num_complex::Complex64;

use crate::common::{parse_params_f64, CliError, CliResult};
use crate::records::{self, OutputFormat, Record, RecordFile};

pub struct ScanArgs {
    pub j: String,
    pub lambda: String,
    pub n_basis: usize,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_step: f64,
    pub omega: f64,
    pub against: Option<PathBuf>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

pub fn plateau_record(record: &ResonanceRecord) -> Record {
    Record {
        label: record.label.as_str().to_string(),
        method: record.method.as_str().to_string(),
        re_e: format!("{}", record.energy.re),
        im_e: format!("{}", record.energy.im),
        uncertainty: format!("{:e}", record.uncertainty),
        theta_star: record.theta_star,
        n: record.n,
        status: record
            .straddles_critical
            .then(|| "straddles_critical".to_string()),
        history: None,
    }
}

fn emit(writer: &mut Box<dyn Write>, line: &str) -> CliResult<()> {
    writeln!(writer, "{line}").map_err(|e| CliError::Numeric(e.to_string()))
}

fn write_trajectory_csv(
    out: &Option<PathBuf>,
    trajectory: &ThetaTrajectory,
) -> CliResult<()> {
    let mut writer = records::output_writer(out)?;
    emit(&mut writer, "theta,path_id,Re_E,Im_E,stability")?;
    for (path_id, path) in trajectory.paths.iter().enumerate() {
        for (k, value) in path.values.iter().enumerate() {
            // central-difference stability exists at interior angles only
            let stability = if k >= 1 && k - 1 < path.stability.len() {
                format!("{}", path.stability[k - 1])
            } else {
                String::new()
            };
            let line = format!(
                "{},{path_id},{},{},{stability}",
                trajectory.thetas[k], value.re, value.im
            );
            emit(&mut writer, &line)?;
        }
    }
    Ok(())
}

/// Per-angle log10 distance of each reference record to its nearest
/// eigenvalue trajectory: the stabilization picture in raw numbers.
fn write_against_csv(
    out: &Option<PathBuf>,
    trajectory: &ThetaTrajectory,
    reference: &RecordFile,
) -> CliResult<()> {
    let mut writer = records::output_writer(out)?;
    emit(&mut writer, "theta,record,log10_dist")?;
    for (idx, record) in reference.records.iter().enumerate() {
        let re: f64 = record
            .re_e
            .parse()
            .map_err(|_| CliError::Usage(format!("record {idx}: bad Re_E {:?}", record.re_e)))?;
        let im: f64 = record
            .im_e
            .parse()
            .map_err(|_| CliError::Usage(format!("record {idx}: bad Im_E {:?}", record.im_e)))?;
        let target = Complex64::new(re, im);
        // follow the single path that approaches the record closest
        let best_path = trajectory
            .paths
            .iter()
            .min_by(|a, b| {
                let da = a.values.iter().map(|v| (v - target).norm()).fold(f64::INFINITY, f64::min);
                let db = b.values.iter().map(|v| (v - target).norm()).fold(f64::INFINITY, f64::min);
                da.partial_cmp(&db).unwrap()
            });
        let Some(path) = best_path else { continue };
        for (k, value) in path.values.iter().enumerate() {
            let dist = (value - target).norm();
            let log10 = if dist == 0.0 {
                "-inf".to_string()
            } else {
                format!("{}", dist.log10())
            };
            emit(
                &mut writer,
                &format!("{},{idx},{log10}", trajectory.thetas[k]),
            )?;
        }
    }
    Ok(())
}

pub fn cmd_scan(args: &ScanArgs) -> CliResult<()> {
    let params = parse_params_f64(&args.j, &args.lambda)?;
    let trajectory = theta_scan(
        &params,
        args.n_basis,
        args.theta_min,
        args.theta_max,
        args.theta_step,
        args.omega,
    )?;
    let classified = classify_poles(&trajectory, &params);

    // plateau summary on stderr so the data stream stays machine-readable
    for record in &classified {
        eprintln!(
            "plateau: {} n={} theta*={:.3} E = {:.12} {:+.12}i uncertainty {:.1e}",
            record.label.as_str(),
            record.n.map(|n| n.to_string()).unwrap_or_default(),
            record.theta_star.unwrap_or(f64::NAN),
            record.energy.re,
            record.energy.im,
            record.uncertainty,
        );
    }

    match (&args.against, args.format) {
        (Some(path), OutputFormat::Csv) => {
            let reference = records::read_records(path).map_err(CliError::Usage)?;
            write_against_csv(&args.out, &trajectory, &reference)?;
        }
        (Some(_), OutputFormat::Json) => {
            return Err(CliError::Usage(
                "--against emits CSV distance series; use --format csv".into(),
            ));
        }
        (None, OutputFormat::Csv) => write_trajectory_csv(&args.out, &trajectory)?,
        (None, OutputFormat::Json) => {
            let file = RecordFile::new(classified.iter().map(plateau_record).collect());
            records::write_json(&args.out, &file)?;
        }
    }
    Ok(())
}

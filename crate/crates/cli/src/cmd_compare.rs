//! Cross-method matching of two record files.
//!
//! Greedy nearest-neighbor pairing within a radius; energies pass through
//! as the original decimal strings, so matched digits survive unchanged.

use std::io::Write;
use std::path::PathBuf;

use crate::common::{CliError, CliResult};
use crate::records::{self, Record};

pub struct CompareArgs {
    pub left: PathBuf,
    pub right: PathBuf,
    pub radius: f64,
    pub out: Option<PathBuf>,
}

fn energy_f64(record: &Record, side: &str, idx: usize) -> CliResult<(f64, f64)> {
    let re: f64 = record
        .re_e
        .parse()
        .map_err(|_| CliError::Usage(format!("{side} record {idx}: bad Re_E {:?}", record.re_e)))?;
    let im: f64 = record
        .im_e
        .parse()
        .map_err(|_| CliError::Usage(format!("{side} record {idx}: bad Im_E {:?}", record.im_e)))?;
    Ok((re, im))
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    if !(args.radius > 0.0) {
        return Err(CliError::Usage(format!(
            "radius must be > 0, got {}",
            args.radius
        )));
    }
    let left = records::read_records(&args.left).map_err(CliError::Usage)?;
    let right = records::read_records(&args.right).map_err(CliError::Usage)?;

    let left_e: Vec<(f64, f64)> = left
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| energy_f64(r, "left", i))
        .collect::<CliResult<_>>()?;
    let right_e: Vec<(f64, f64)> = right
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| energy_f64(r, "right", i))
        .collect::<CliResult<_>>()?;

    let dist = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).hypot(a.1 - b.1);

    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (l, &le) in left_e.iter().enumerate() {
        for (r, &re) in right_e.iter().enumerate() {
            let d = dist(le, re);
            if d <= args.radius {
                pairs.push((d, l, r));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut left_match = vec![usize::MAX; left_e.len()];
    let mut right_match = vec![usize::MAX; right_e.len()];
    let mut matched: Vec<(usize, usize, f64)> = Vec::new();
    for &(d, l, r) in &pairs {
        if left_match[l] == usize::MAX && right_match[r] == usize::MAX {
            left_match[l] = r;
            right_match[r] = l;
            matched.push((l, r, d));
        }
    }

    // a pair is ambiguous when either endpoint has a rival candidate
    // closer than twice the accepted distance
    let ambiguous = |l: usize, r: usize, d: f64| {
        pairs.iter().any(|&(d2, l2, r2)| {
            (l2 == l) != (r2 == r) && d2 < 2.0 * d.max(f64::MIN_POSITIVE)
        })
    };

    let mut writer = records::output_writer(&args.out)?;
    let mut emit =
        |line: &str| writeln!(writer, "{line}").map_err(|e| CliError::Numeric(e.to_string()));
    emit("left,right,left_Re,left_Im,right_Re,right_Im,log10_dist,status")?;
    for &(l, r, d) in &matched {
        let log10 = if d == 0.0 {
            "-inf".to_string()
        } else {
            format!("{}", d.log10())
        };
        let status = if ambiguous(l, r, d) { "ambiguous" } else { "ok" };
        emit(&format!(
            "{l},{r},{},{},{},{},{log10},{status}",
            left.records[l].re_e,
            left.records[l].im_e,
            right.records[r].re_e,
            right.records[r].im_e,
        ))?;
    }
    for (l, record) in left.records.iter().enumerate() {
        if left_match[l] == usize::MAX {
            emit(&format!("{l},,{},{},,,,unmatched_left", record.re_e, record.im_e))?;
        }
    }
    for (r, record) in right.records.iter().enumerate() {
        if right_match[r] == usize::MAX {
            emit(&format!(",{r},,,{},{},,unmatched_right", record.re_e, record.im_e))?;
        }
    }
    Ok(())
}

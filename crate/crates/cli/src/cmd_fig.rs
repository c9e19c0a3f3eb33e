//! Width-versus-depth series: the signed imaginary part of one
//! above-critical plateau tracked over a grid of well depths.

use std::io::Write;
use std::path::PathBuf;

use doublewell_core::rrcr::{classify_poles, theta_scan, PoleLabel};
use doublewell_core::SmallParams;

use crate::common::{CliError, CliResult};
use crate::records;

pub struct FigArgs {
    pub j_min: f64,
    pub j_max: f64,
    pub j_step: f64,
    pub index: usize,
    pub lambda: String,
    pub n_basis: usize,
    pub theta_step: f64,
    pub omega: f64,
    pub out: Option<PathBuf>,
}

pub fn cmd_im_vs_j(args: &FigArgs) -> CliResult<()> {
    if !(args.j_step > 0.0) || args.j_min > args.j_max || !(args.j_min > 0.0) {
        return Err(CliError::Usage(format!(
            "need 0 < J-min <= J-max and J-step > 0, got [{}, {}] step {}",
            args.j_min, args.j_max, args.j_step
        )));
    }
    let lambda: f64 = args
        .lambda
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot parse number {:?}", args.lambda)))?;

    let mut writer = records::output_writer(&args.out)?;
    writeln!(writer, "J,Re_E,Im_E,status").map_err(|e| CliError::Numeric(e.to_string()))?;

    let mut k = 0usize;
    loop {
        let j = args.j_min + k as f64 * args.j_step;
        if j > args.j_max + args.j_step * 1e-9 {
            break;
        }
        k += 1;
        // the above-critical family stabilizes in this angle band
        let row = SmallParams::new(j, lambda)
            .map_err(CliError::from)
            .and_then(|params| {
                let trajectory =
                    theta_scan(&params, args.n_basis, 0.85, 0.95, args.theta_step, args.omega)?;
                Ok(classify_poles(&trajectory, &params))
            })
            .map(|classified| {
                // the series follows the near-axis members of the
                // above-critical family (the partners of the low-lying
                // levels), not the broad poles or whatever survives of
                // the rotated continuum
                let mut family: Vec<_> = classified
                    .into_iter()
                    .filter(|r| {
                        r.label == PoleLabel::TypeB
                            && r.energy.re > 0.0
                            && r.energy.im.abs() <= 1.0
                    })
                    .collect();
                family.sort_by(|a, b| a.energy.re.partial_cmp(&b.energy.re).unwrap());
                family.into_iter().nth(args.index)
            });
        let line = match row {
            Ok(Some(record)) => {
                format!("{j},{},{},ok", record.energy.re, record.energy.im)
            }
            Ok(None) => format!("{j},,,missing"),
            // a bad angle at one depth should not kill the series
            Err(err) => format!("{j},,,error: {}", err.message().replace(',', ";")),
        };
        writeln!(writer, "{line}").map_err(|e| CliError::Numeric(e.to_string()))?;
    }
    Ok(())
}

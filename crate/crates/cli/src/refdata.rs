//! Bundled reference values used by the table reproduction command.

/// Reference tables: columns `table,n,Re_E,abs_Im_E`. The imaginary
/// column is empty for the one bound-state row.
pub const TABLES_CSV: &str = include_str!("../data/reference_tables.csv");

#[derive(Clone, Debug)]
pub struct ReferenceRow {
    pub table: u8,
    pub n: usize,
    pub re: String,
    /// None for rows printed without an imaginary part.
    pub abs_im: Option<String>,
}

pub fn reference_rows(table: u8) -> Vec<ReferenceRow> {
    TABLES_CSV
        .lines()
        .skip(1)
        .filter(|line| !line.trim().is_empty())
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            ReferenceRow {
                table: cols[0].parse().expect("bundled table id"),
                n: cols[1].parse().expect("bundled row index"),
                re: cols[2].to_string(),
                abs_im: match cols.get(3) {
                    Some(s) if !s.is_empty() => Some(s.to_string()),
                    _ => None,
                },
            }
        })
        .filter(|row| row.table == table)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_complete() {
        let t1 = reference_rows(1);
        let t2 = reference_rows(2);
        assert_eq!(t1.len(), 11);
        assert_eq!(t2.len(), 41);
        assert!(t1[0].abs_im.is_none());
        assert!(t1[1..].iter().all(|r| r.abs_im.is_some()));
        assert!(t2.iter().all(|r| r.abs_im.is_some()));
        assert_eq!(t2[40].n, 40);
        assert!(t2[40].re.starts_with("-14.2389863226"));
    }
}

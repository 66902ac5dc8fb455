//! CSV ingestion and deterministic emission.
//!
//! Emitted files use a fixed column order, nine significant digits, `.` as
//! decimal separator and LF line endings, so identical inputs give
//! byte-identical files.

use std::fs;
use std::path::Path;

use crate::calibration::{ForcePressureSample, JointTrialSample};
use crate::error::{Result, RowError, SwagError};

use super::units::{kpa_to_pa, mm_to_m};

pub const FORCE_PRESSURE_HEADER: [&str; 5] = [
    "n_subvines",
    "sheath_diameter_mm",
    "trial",
    "pressure_kpa",
    "force_n",
];
pub const JOINT_TRIALS_HEADER: [&str; 4] =
    ["joint_angle_deg", "trial", "peak_pressure_kpa", "torque_nm"];

const SIG_DIGITS: i32 = 9;

/// Nine significant digits, plain notation for moderate magnitudes and
/// exponent notation otherwise. Non-finite values become an empty field.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..SIG_DIGITS).contains(&exp) {
        let decimals = (SIG_DIGITS - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn fmt_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

/// In-memory table written out in one go.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).map_err(|e| SwagError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    /// Reads a file written by [`Table::write`].
    pub fn read(path: &Path) -> Result<Self> {
        let mut rdr = open_reader(path)?;
        let header = rdr
            .headers()
            .map_err(|e| io_err(path, e))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            rows.push(
                rec.map_err(|e| io_err(path, e))?
                    .iter()
                    .map(str::to_string)
                    .collect(),
            );
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> SwagError {
    SwagError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn open_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))
}

/// Reads every data row, converting with `parse`; any bad row fails the
/// whole batch with all offending line numbers.
fn read_rows<T>(
    path: &Path,
    expected: &[&str],
    parse: impl Fn(&csv::StringRecord) -> std::result::Result<T, String>,
) -> Result<Vec<T>> {
    let file = path.display().to_string();
    let mut rdr = open_reader(path)?;
    let header = rdr.headers().map_err(|e| io_err(path, e))?.clone();
    if header.iter().ne(expected.iter().copied()) {
        return Err(SwagError::MalformedRows {
            file,
            rows: vec![RowError {
                line: 1,
                message: format!(
                    "expected header `{}`, got `{}`",
                    expected.join(","),
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            }],
        });
    }
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for rec in rdr.records() {
        match rec {
            Ok(rec) => {
                let line = rec.position().map_or(0, |p| p.line());
                match parse(&rec) {
                    Ok(v) => out.push(v),
                    Err(message) => errors.push(RowError { line, message }),
                }
            }
            Err(e) => errors.push(RowError {
                line: e.position().map_or(0, |p| p.line()),
                message: e.to_string(),
            }),
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(SwagError::MalformedRows { file, rows: errors })
    }
}

fn field<T: std::str::FromStr>(
    rec: &csv::StringRecord,
    i: usize,
    name: &str,
) -> std::result::Result<T, String> {
    let raw = rec
        .get(i)
        .ok_or_else(|| format!("missing column `{name}`"))?;
    raw.parse()
        .map_err(|_| format!("column `{name}`: cannot parse `{raw}`"))
}

fn finite_field(rec: &csv::StringRecord, i: usize, name: &str) -> std::result::Result<f64, String> {
    let v: f64 = field(rec, i, name)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("column `{name}`: value must be finite"))
    }
}

fn check_width(rec: &csv::StringRecord, n: usize) -> std::result::Result<(), String> {
    if rec.len() == n {
        Ok(())
    } else {
        Err(format!("expected {n} fields, got {}", rec.len()))
    }
}

/// Reads `n_subvines,sheath_diameter_mm,trial,pressure_kpa,force_n`.
pub fn read_force_pressure_csv(path: &Path) -> Result<Vec<ForcePressureSample>> {
    read_rows(path, &FORCE_PRESSURE_HEADER, |rec| {
        check_width(rec, 5)?;
        let n: u32 = field(rec, 0, "n_subvines")?;
        if n == 0 {
            return Err("column `n_subvines`: must be at least 1".into());
        }
        let sheath = finite_field(rec, 1, "sheath_diameter_mm")?;
        if sheath <= 0.0 {
            return Err("column `sheath_diameter_mm`: must be positive".into());
        }
        let pressure = finite_field(rec, 3, "pressure_kpa")?;
        if pressure < 0.0 {
            return Err("column `pressure_kpa`: must be non-negative".into());
        }
        Ok(ForcePressureSample {
            n_subvines: n,
            sheath_diameter_m: mm_to_m(sheath),
            trial: field(rec, 2, "trial")?,
            pressure_pa: kpa_to_pa(pressure),
            force_n: finite_field(rec, 4, "force_n")?,
        })
    })
}

/// Reads `joint_angle_deg,trial,peak_pressure_kpa,torque_nm`.
pub fn read_joint_trials_csv(path: &Path) -> Result<Vec<JointTrialSample>> {
    read_rows(path, &JOINT_TRIALS_HEADER, |rec| {
        check_width(rec, 4)?;
        let angle = finite_field(rec, 0, "joint_angle_deg")?;
        if !(0.0..=180.0).contains(&angle) {
            return Err("column `joint_angle_deg`: must lie in [0, 180]".into());
        }
        let pressure = finite_field(rec, 2, "peak_pressure_kpa")?;
        let torque = finite_field(rec, 3, "torque_nm")?;
        if pressure < 0.0 || torque < 0.0 {
            return Err("pressure and torque must be non-negative".into());
        }
        Ok(JointTrialSample {
            joint_angle_deg: angle,
            trial: field(rec, 1, "trial")?,
            peak_pressure_pa: kpa_to_pa(pressure),
            torque_nm: torque,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(4554.792498283156), "4554.79250");
        assert_eq!(fmt_num(0.032), "0.0320000000");
        assert_eq!(fmt_num(8.042477193189871e-4), "0.000804247719");
        assert_eq!(fmt_num(5.147185403641517e-8), "5.14718540e-8");
        assert_eq!(fmt_num(123456789.0), "123456789");
        assert_eq!(fmt_num(1.5e12), "1.50000000e12");
        assert_eq!(fmt_num(-2.5), "-2.50000000");
        assert_eq!(fmt_num(f64::NAN), "");
    }

    proptest! {
        #[test]
        fn formatted_numbers_reparse_to_nine_digits(x in proptest::num::f64::NORMAL) {
            let back: f64 = fmt_num(x).parse().unwrap();
            prop_assert!(((back - x) / x).abs() <= 5e-9);
        }
    }

    fn temp_csv(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_force_pressure_in_si() {
        let f = temp_csv(
            "n_subvines,sheath_diameter_mm,trial,pressure_kpa,force_n\n2,120,0,10,3.5\n2,120,0,20,7.5\n",
        );
        let rows = read_force_pressure_csv(f.path()).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].pressure_pa, 10_000.0);
        assert_eq!(rows[0].sheath_diameter_m, 0.12);
    }

    #[test]
    fn bad_rows_fail_as_a_batch_with_lines() {
        let f = temp_csv(
            "n_subvines,sheath_diameter_mm,trial,pressure_kpa,force_n\n2,120,0,10,3.5\n0,120,0,20,7.5\n2,120,0,abc,1\n2,120,0,-5,1\n",
        );
        match read_force_pressure_csv(f.path()) {
            Err(SwagError::MalformedRows { rows, .. }) => {
                let lines: Vec<u64> = rows.iter().map(|r| r.line).collect();
                assert_eq!(lines, vec![3, 4, 5]);
            }
            other => panic!("expected malformed rows, got {other:?}"),
        }
    }

    #[test]
    fn wrong_header_is_rejected() {
        let f = temp_csv("angle,trial,pressure,torque\n0,0,1,1\n");
        let err = read_joint_trials_csv(f.path()).unwrap_err();
        assert_eq!(err.code(), "E_CSV_ROWS");
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn ragged_row_is_reported() {
        let f = temp_csv("joint_angle_deg,trial,peak_pressure_kpa,torque_nm\n0,0,1\n30,0,2,0.1\n");
        match read_joint_trials_csv(f.path()) {
            Err(SwagError::MalformedRows { rows, .. }) => assert_eq!(rows[0].line, 2),
            other => panic!("expected malformed rows, got {other:?}"),
        }
    }

    #[test]
    fn table_render_uses_lf() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(), "a,b\n1,2\n");
    }
}

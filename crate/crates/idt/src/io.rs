//! CSV artifacts and inputs.
//!
//! Every artifact starts with `# config_hash=<hex> seed=<u64>`. Numbers are written in
//! shortest round-trip form with `.` as the decimal separator.

use std::io::Write;
use std::path::Path;

use idt_core::constructions::Tabulated;
use idt_core::fields::FieldSample;
use idt_core::sample::JointSample;
use idt_core::sheet::SheetGrid;

use crate::error::{AppError, AppResult};

/// Provenance written as the first line of each artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
}

impl Provenance {
    pub fn header_line(&self) -> String {
        format!("# config_hash={} seed={}", self.config_hash, self.seed)
    }

    /// Parses a header line written by [`Provenance::header_line`].
    pub fn parse(line: &str) -> Option<Self> {
        let rest = line.strip_prefix("# ")?;
        let mut hash = None;
        let mut seed = None;
        for kv in rest.split_whitespace() {
            match kv.split_once('=')? {
                ("config_hash", v) => hash = Some(v.to_string()),
                ("seed", v) => seed = v.parse().ok(),
                _ => return None,
            }
        }
        Some(Self {
            config_hash: hash?,
            seed: seed?,
        })
    }
}

pub fn fmt_num(v: f64) -> String {
    format!("{v:?}")
}

fn start<W: Write>(mut w: W, prov: &Provenance) -> AppResult<csv::Writer<W>> {
    writeln!(w, "{}", prov.header_line()).map_err(|e| AppError::io("<output>", e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w))
}

fn replica_headers(count: usize) -> impl Iterator<Item = String> {
    (0..count).map(|r| format!("r{r}"))
}

/// One row per time: `time, r0, r1, …`.
pub fn write_joint<W: Write>(w: W, prov: &Provenance, s: &JointSample) -> AppResult<()> {
    let mut out = start(w, prov)?;
    out.write_record(std::iter::once("time".to_string()).chain(replica_headers(s.count)))?;
    for (k, &t) in s.times.iter().enumerate() {
        out.write_record(std::iter::once(fmt_num(t)).chain(s.column(k).into_iter().map(fmt_num)))?;
    }
    out.flush().map_err(|e| AppError::io("<output>", e))?;
    Ok(())
}

/// One row per `s`: `s, t=…, …`, with a leading `replica` column when there are several sheets.
pub fn write_sheets<W: Write>(w: W, prov: &Provenance, sheets: &[SheetGrid]) -> AppResult<()> {
    let mut out = start(w, prov)?;
    let Some(first) = sheets.first() else {
        return Ok(());
    };
    let many = sheets.len() > 1;
    let lead: Vec<String> = if many {
        vec!["replica".into(), "s".into()]
    } else {
        vec!["s".into()]
    };
    out.write_record(
        lead.into_iter()
            .chain(first.t_times.iter().map(|t| format!("t={}", fmt_num(*t)))),
    )?;
    for (r, g) in sheets.iter().enumerate() {
        for (i, row) in g.rows().enumerate() {
            let lead: Vec<String> = if many {
                vec![r.to_string(), fmt_num(g.s_times[i])]
            } else {
                vec![fmt_num(g.s_times[i])]
            };
            out.write_record(lead.into_iter().chain(row.iter().map(|v| fmt_num(*v))))?;
        }
    }
    out.flush().map_err(|e| AppError::io("<output>", e))?;
    Ok(())
}

/// One row per point: `s1, …, sN, r0, r1, …`.
pub fn write_field<W: Write>(w: W, prov: &Provenance, s: &FieldSample) -> AppResult<()> {
    let mut out = start(w, prov)?;
    let n = s.points.first().map_or(0, Vec::len);
    out.write_record(
        (1..=n)
            .map(|j| format!("s{j}"))
            .chain(replica_headers(s.count)),
    )?;
    for (k, p) in s.points.iter().enumerate() {
        out.write_record(
            p.iter()
                .map(|x| fmt_num(*x))
                .chain(s.column(k).into_iter().map(fmt_num)),
        )?;
    }
    out.flush().map_err(|e| AppError::io("<output>", e))?;
    Ok(())
}

fn numeric_rows(path: &Path) -> AppResult<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => AppError::io(path, io),
            other => AppError::Config(format!("{}: {other:?}", path.display())),
        })?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parsed: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(AppError::Config(format!(
                    "{}: row {} is not numeric",
                    path.display(),
                    i + 1
                )));
            }
        }
    }
    Ok(rows)
}

/// A two-column `x,value` CSV (optional header row) as a tabulated function.
pub fn read_tabulated(path: &Path) -> AppResult<Tabulated> {
    let rows = numeric_rows(path)?;
    if let Some(r) = rows.iter().find(|r| r.len() != 2) {
        return Err(AppError::Config(format!(
            "{}: expected two columns, found {}",
            path.display(),
            r.len()
        )));
    }
    Ok(Tabulated::new(
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| r[1]).collect(),
    )?)
}

/// One point per CSV row (optional header row).
pub fn read_points(path: &Path) -> AppResult<Vec<Vec<f64>>> {
    let rows = numeric_rows(path)?;
    if rows.is_empty() {
        return Err(AppError::Config(format!("{}: no points", path.display())));
    }
    let n = rows[0].len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(AppError::Config(format!(
            "{}: points have differing dimensions",
            path.display()
        )));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn provenance_round_trip() {
        let p = Provenance {
            config_hash: "ab12".into(),
            seed: 9,
        };
        assert_eq!(Provenance::parse(&p.header_line()), Some(p));
        assert_eq!(Provenance::parse("# something else"), None);
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0 / 3.0, -2.5e-300, 1e21, 0.1 + 0.2] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn joint_layout() {
        let s = JointSample {
            times: vec![0.0, 1.0],
            count: 2,
            values: vec![0.0, 1.5, 0.0, -1.0],
            seed: 3,
        };
        let mut buf = Vec::new();
        write_joint(
            &mut buf,
            &Provenance {
                config_hash: "h".into(),
                seed: 3,
            },
            &s,
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# config_hash=h seed=3\ntime,r0,r1\n0.0,0.0,0.0\n1.0,1.5,-1.0\n"
        );
    }
}

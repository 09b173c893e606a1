use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::DenseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResetEvent {
    #[default]
    None,
    Restart,
    Skip,
}

impl ResetEvent {
    pub fn as_str(&self) -> &'static str {
        match self {
            ResetEvent::None => "none",
            ResetEvent::Restart => "restart",
            ResetEvent::Skip => "skip",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "none" | "" => Ok(ResetEvent::None),
            "restart" => Ok(ResetEvent::Restart),
            "skip" => Ok(ResetEvent::Skip),
            other => Err(Error::Parse(format!("unknown reset event `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    TolReached,
    MaxIters,
    /// A non-finite value appeared or the objective blew past the divergence guard.
    Diverged,
}

/// State after iteration `k`. `reset_event` marks a reset applied before the
/// next iteration; the terminal record never carries one.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub x: DenseVector,
    pub f: f64,
    pub grad_norm: f64,
    pub dist_to_sol: Option<f64>,
    pub reset_event: ResetEvent,
}

/// Append-only record of a solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    records: Vec<TraceRecord>,
    status: TerminalStatus,
    f_star: Option<f64>,
}

impl SolverTrace {
    pub(crate) fn new(f_star: Option<f64>) -> Self {
        Self {
            records: Vec::new(),
            status: TerminalStatus::MaxIters,
            f_star,
        }
    }

    pub(crate) fn push(&mut self, record: TraceRecord) {
        debug_assert_eq!(record.k, self.records.len());
        self.records.push(record);
    }

    pub(crate) fn finish(mut self, status: TerminalStatus) -> Self {
        self.status = status;
        self
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn status(&self) -> TerminalStatus {
        self.status
    }

    pub fn f_star(&self) -> Option<f64> {
        self.f_star
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    /// `f(x^{(k)}) − f*` per record, when `f*` is known.
    pub fn gaps(&self) -> Option<Vec<f64>> {
        let fs = self.f_star?;
        Some(self.records.iter().map(|r| r.f - fs).collect())
    }

    pub fn dists(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.dist_to_sol).collect()
    }

    /// `k,f,fgap,grad_norm,dist_to_sol,reset_event`; blank cells for unknown values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,f,fgap,grad_norm,dist_to_sol,reset_event\n");
        for r in &self.records {
            let gap = self.f_star.map(|fs| format!("{:e}", r.f - fs)).unwrap_or_default();
            let dist = r.dist_to_sol.map(|d| format!("{d:e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{:e},{},{:e},{},{}",
                r.k,
                r.f,
                gap,
                r.grad_norm,
                dist,
                r.reset_event.as_str()
            );
        }
        out
    }
}

/// One parsed line of a trace CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub f: f64,
    pub fgap: Option<f64>,
    pub grad_norm: f64,
    pub dist_to_sol: Option<f64>,
    pub reset_event: ResetEvent,
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty trace file".into()))?;
    if header.trim() != "k,f,fgap,grad_norm,dist_to_sol,reset_event" {
        return Err(Error::Parse(format!("unexpected trace header `{header}`")));
    }
    let num = |s: &str, line: usize| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("line {line}: bad number `{s}`")))
    };
    let opt = |s: &str, line: usize| -> Result<Option<f64>> {
        if s.trim().is_empty() {
            Ok(None)
        } else {
            num(s, line).map(Some)
        }
    };
    lines
        .enumerate()
        .map(|(i, line)| {
            let n = i + 2;
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 6 {
                return Err(Error::Parse(format!("line {n}: expected 6 cells")));
            }
            Ok(TraceRow {
                k: cells[0]
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {n}: bad k")))?,
                f: num(cells[1], n)?,
                fgap: opt(cells[2], n)?,
                grad_norm: num(cells[3], n)?,
                dist_to_sol: opt(cells[4], n)?,
                reset_event: ResetEvent::parse(cells[5])?,
            })
        })
        .collect()
}

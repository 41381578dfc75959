//! Ingestion of 5-minute gauge records and the per-month statistics used for
//! fitting and validation.

mod extremes;
mod monthly;
mod wetdry;

pub use extremes::{annual_maxima, gumbel_points, reduced_variate, AnnualMaximum, GumbelPoint};
pub use monthly::{
    monthly_statistics, AveragingMode, StatEntry, StatisticVector, StatisticsOptions,
};
pub use wetdry::{wet_dry_stats, WetDryStats};

use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Width of the ingestion lattice: gauge records are depths per 5 minutes.
pub const LATTICE_MINUTES: u32 = 5;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: timestamps must be strictly increasing on the 5-minute lattice")]
    NonMonotoneTimestamps { line: usize },
    #[error("line {line}: negative depth {depth}")]
    NegativeDepth { line: usize, depth: f64 },
    #[error("month {month}: {years} usable observation years; at least {required} required")]
    InsufficientYears { month: u8, years: usize, required: usize },
    #[error("month {month}: zero variance (all-dry or constant month); ratio statistics undefined")]
    AllDryMonth { month: u8 },
    #[error("no wet intervals: wet-spell transition probability undefined")]
    NoWetIntervals,
    #[error("no dry intervals: dry-spell transition probability undefined")]
    NoDryIntervals,
    #[error("no complete year of data")]
    NoCompleteYears,
    #[error("timescale {minutes} min is not a multiple of the 5-minute lattice")]
    BadTimescale { minutes: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An aggregation timescale, stored in minutes so that the standard set
/// {5 min, 1 h, 6 h, 24 h} is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timescale(pub u32);

impl Timescale {
    pub const FIVE_MIN: Timescale = Timescale(5);
    pub const H1: Timescale = Timescale(60);
    pub const H6: Timescale = Timescale(360);
    pub const H24: Timescale = Timescale(1440);

    /// The four standard fitting timescales.
    pub fn standard() -> Vec<Timescale> {
        vec![Self::FIVE_MIN, Self::H1, Self::H6, Self::H24]
    }

    pub fn minutes(self) -> u32 {
        self.0
    }

    pub fn hours(self) -> f64 {
        f64::from(self.0) / 60.0
    }

    /// 5-minute slots per bin.
    pub fn slots(self) -> Result<usize, StatsError> {
        if self.0 == 0 || !self.0.is_multiple_of(LATTICE_MINUTES) {
            return Err(StatsError::BadTimescale { minutes: self.0 });
        }
        Ok((self.0 / LATTICE_MINUTES) as usize)
    }
}

impl fmt::Display for Timescale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(60) {
            write!(f, "{}h", self.0 / 60)
        } else {
            write!(f, "{}min", self.0)
        }
    }
}

/// One of the thirteen fitting properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PropertyId {
    /// Mean depth of a one-hour interval, mm.
    MeanHourly,
    /// Coefficient of variation at a timescale.
    Cv(Timescale),
    /// Lag-1 autocorrelation at a timescale.
    Lag1(Timescale),
    /// Skewness coefficient at a timescale.
    Skewness(Timescale),
}

impl PropertyId {
    /// The standard thirteen-property set in canonical order.
    pub fn standard(timescales: &[Timescale]) -> Vec<PropertyId> {
        let mut out = vec![PropertyId::MeanHourly];
        out.extend(timescales.iter().map(|&t| PropertyId::Cv(t)));
        out.extend(timescales.iter().map(|&t| PropertyId::Lag1(t)));
        out.extend(timescales.iter().map(|&t| PropertyId::Skewness(t)));
        out
    }

    pub fn timescale(self) -> Option<Timescale> {
        match self {
            PropertyId::MeanHourly => None,
            PropertyId::Cv(t) | PropertyId::Lag1(t) | PropertyId::Skewness(t) => Some(t),
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyId::MeanHourly => write!(f, "mean_1h"),
            PropertyId::Cv(t) => write!(f, "cv_{t}"),
            PropertyId::Lag1(t) => write!(f, "lag1_{t}"),
            PropertyId::Skewness(t) => write!(f, "skew_{t}"),
        }
    }
}

impl std::str::FromStr for PropertyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "mean_1h" {
            return Ok(PropertyId::MeanHourly);
        }
        let (kind, scale) = s.split_once('_').ok_or_else(|| format!("bad property `{s}`"))?;
        let minutes = if let Some(m) = scale.strip_suffix("min") {
            m.parse::<u32>().map_err(|e| e.to_string())?
        } else if let Some(h) = scale.strip_suffix('h') {
            60 * h.parse::<u32>().map_err(|e| e.to_string())?
        } else {
            return Err(format!("bad timescale `{scale}`"));
        };
        let t = Timescale(minutes);
        match kind {
            "cv" => Ok(PropertyId::Cv(t)),
            "lag1" => Ok(PropertyId::Lag1(t)),
            "skew" => Ok(PropertyId::Skewness(t)),
            _ => Err(format!("bad property kind `{kind}`")),
        }
    }
}

impl Serialize for PropertyId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PropertyId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A validated gauge record: depths per 5-minute interval on a contiguous
/// lattice, with gaps marked missing.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeRecord {
    start: NaiveDateTime,
    depths: Vec<Option<f64>>,
}

impl GaugeRecord {
    /// Build from a contiguous lattice-aligned vector.
    pub fn from_parts(start: NaiveDateTime, depths: Vec<Option<f64>>) -> Result<Self, StatsError> {
        if start.second() != 0 || !start.minute().is_multiple_of(LATTICE_MINUTES) {
            return Err(StatsError::Parse {
                line: 0,
                message: format!("start {start} is not on the 5-minute lattice"),
            });
        }
        Ok(Self { start, depths })
    }

    pub fn start(&self) -> NaiveDateTime {
        self.start
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub fn depths(&self) -> &[Option<f64>] {
        &self.depths
    }

    pub fn timestamp_at(&self, index: usize) -> NaiveDateTime {
        self.start + Duration::minutes(i64::from(LATTICE_MINUTES) * index as i64)
    }

    fn end(&self) -> NaiveDateTime {
        self.timestamp_at(self.depths.len())
    }

    /// Calendar years intersecting the record.
    pub fn years(&self) -> std::ops::RangeInclusive<i32> {
        let last = self.end() - Duration::minutes(i64::from(LATTICE_MINUTES));
        self.start.year()..=last.year()
    }

    /// 5-minute slots of one calendar month, `None` for slots missing or
    /// outside the record. Returns `None` if the month does not intersect
    /// the record at all.
    pub fn month_slots(&self, year: i32, month: u8) -> Option<Vec<Option<f64>>> {
        let first = NaiveDate::from_ymd_opt(year, u32::from(month), 1)?.and_hms_opt(0, 0, 0)?;
        let next = if month == 12 {
            NaiveDate::from_ymd_opt(year + 1, 1, 1)?
        } else {
            NaiveDate::from_ymd_opt(year, u32::from(month) + 1, 1)?
        }
        .and_hms_opt(0, 0, 0)?;
        if next <= self.start || first >= self.end() {
            return None;
        }
        let step = i64::from(LATTICE_MINUTES);
        let n = ((next - first).num_minutes() / step) as usize;
        let offset = (first - self.start).num_minutes() / step;
        let mut out = vec![None; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let idx = offset + i as i64;
            if idx >= 0 && (idx as usize) < self.depths.len() {
                *slot = self.depths[idx as usize];
            }
        }
        Some(out)
    }

    /// Aggregate one month to a coarser timescale; a coarse bin is missing
    /// if any of its 5-minute constituents is missing.
    pub fn month_bins(
        &self,
        year: i32,
        month: u8,
        scale: Timescale,
    ) -> Result<Option<Vec<Option<f64>>>, StatsError> {
        let slots = scale.slots()?;
        Ok(self.month_slots(year, month).map(|five| aggregate_slots(&five, slots)))
    }
}

pub(crate) fn aggregate_slots(five: &[Option<f64>], slots: usize) -> Vec<Option<f64>> {
    five.chunks(slots)
        .map(|chunk| {
            if chunk.len() == slots && chunk.iter().all(Option::is_some) {
                Some(chunk.iter().map(|v| v.unwrap()).sum())
            } else {
                None
            }
        })
        .collect()
}

pub(crate) fn missing_fraction(slots: &[Option<f64>]) -> f64 {
    if slots.is_empty() {
        return 1.0;
    }
    slots.iter().filter(|s| s.is_none()).count() as f64 / slots.len() as f64
}

const TIMESTAMP_FORMATS: &[&str] =
    &["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"];

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    TIMESTAMP_FORMATS.iter().find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

/// Read a gauge record from CSV with header `timestamp,depth_mm`.
///
/// Timestamps are ISO-8601 on a 5-minute lattice and must be strictly
/// increasing; gaps become missing slots. An empty depth field marks a
/// missing observation. Lines starting with `#` are ignored.
pub fn read_series<R: Read>(reader: R) -> Result<GaugeRecord, StatsError> {
    let reader = BufReader::new(reader);
    let mut start: Option<NaiveDateTime> = None;
    let mut depths: Vec<Option<f64>> = Vec::new();
    let mut last_index: i64 = -1;
    let mut saw_header = false;

    for (line_no, line) in reader.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != "timestamp,depth_mm" {
                return Err(StatsError::Parse {
                    line: line_no,
                    message: format!("expected header `timestamp,depth_mm`, got `{trimmed}`"),
                });
            }
            saw_header = true;
            continue;
        }
        let (ts_str, depth_str) = trimmed.split_once(',').ok_or(StatsError::Parse {
            line: line_no,
            message: "expected `timestamp,depth_mm`".into(),
        })?;
        let ts = parse_timestamp(ts_str.trim()).ok_or(StatsError::Parse {
            line: line_no,
            message: format!("unparseable timestamp `{ts_str}`"),
        })?;
        if ts.second() != 0 || ts.minute() % LATTICE_MINUTES != 0 {
            return Err(StatsError::Parse {
                line: line_no,
                message: format!("timestamp `{ts_str}` is not on the 5-minute lattice"),
            });
        }
        let depth = match depth_str.trim() {
            "" => None,
            s => {
                let d: f64 = s.parse().map_err(|e| StatsError::Parse {
                    line: line_no,
                    message: format!("bad depth `{s}`: {e}"),
                })?;
                if d < 0.0 || !d.is_finite() {
                    return Err(StatsError::NegativeDepth { line: line_no, depth: d });
                }
                Some(d)
            }
        };
        let start_ts = *start.get_or_insert(ts);
        let index = (ts - start_ts).num_minutes() / i64::from(LATTICE_MINUTES);
        if index <= last_index {
            return Err(StatsError::NonMonotoneTimestamps { line: line_no });
        }
        while (depths.len() as i64) < index {
            depths.push(None); // gap in the lattice
        }
        depths.push(depth);
        last_index = index;
    }

    let start = start.ok_or(StatsError::Parse { line: 0, message: "empty record".into() })?;
    GaugeRecord::from_parts(start, depths)
}

/// Read a gauge record from a file; see [`read_series`].
pub fn load_series<P: AsRef<Path>>(path: P) -> Result<GaugeRecord, StatsError> {
    read_series(std::fs::File::open(path)?)
}

/// Write a gauge record in the same CSV format [`read_series`] reads.
/// Loading the output reproduces the record exactly.
pub fn write_series<W: Write>(record: &GaugeRecord, mut writer: W) -> Result<(), StatsError> {
    writeln!(writer, "timestamp,depth_mm")?;
    for (i, depth) in record.depths.iter().enumerate() {
        let ts = record.timestamp_at(i).format("%Y-%m-%dT%H:%M:%S");
        match depth {
            Some(d) => writeln!(writer, "{ts},{d}")?,
            None => writeln!(writer, "{ts},")?,
        }
    }
    Ok(())
}

//! Run log records, one JSON object per line:
//! `{"t_ms": int, "type": "...", "body": {...}}`.

use serde::{Deserialize, Serialize};

use crate::affect::{EmotionLabel, VaPoint};
use crate::appraisal::EventKind;
use crate::display::DisplayDirective;
use crate::evolution::Archetype;
use crate::needs::{NeedsState, Severity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventBody {
    pub id: u64,
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub severity: Option<Severity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppraisalBody {
    pub event_id: u64,
    pub valence: f64,
    pub arousal: f64,
    /// Mood after feedback from this appraisal.
    pub mood: VaPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseBody {
    pub event_id: u64,
    pub label: EmotionLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NeedsBody {
    pub touch: f64,
    pub rest: f64,
    pub social: f64,
    pub hunger: f64,
}

impl From<&NeedsState> for NeedsBody {
    fn from(s: &NeedsState) -> Self {
        NeedsBody { touch: s.touch, rest: s.rest, social: s.social, hunger: s.hunger }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoodBody {
    pub valence: f64,
    pub arousal: f64,
    pub day_index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperamentBody {
    pub valence: f64,
    pub arousal: f64,
    pub archetype: Archetype,
    /// Present only on the opening record: the mood drawn for the first day.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_mood: Option<VaPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DayBoundaryBody {
    pub day_index: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "body", rename_all = "snake_case")]
pub enum RecordBody {
    Event(EventBody),
    Appraisal(AppraisalBody),
    Response(ResponseBody),
    Directive(DisplayDirective),
    Needs(NeedsBody),
    Mood(MoodBody),
    Temperament(TemperamentBody),
    DayBoundary(DayBoundaryBody),
}

impl RecordBody {
    pub fn type_name(&self) -> &'static str {
        match self {
            RecordBody::Event(_) => "event",
            RecordBody::Appraisal(_) => "appraisal",
            RecordBody::Response(_) => "response",
            RecordBody::Directive(_) => "directive",
            RecordBody::Needs(_) => "needs",
            RecordBody::Mood(_) => "mood",
            RecordBody::Temperament(_) => "temperament",
            RecordBody::DayBoundary(_) => "day_boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub t_ms: u64,
    #[serde(flatten)]
    pub body: RecordBody,
}

#[derive(Debug, thiserror::Error)]
pub enum LogError {
    #[error("log line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error("log line {line}: timestamp {t_ms} precedes {prev}")]
    Timestamps { line: usize, t_ms: u64, prev: u64 },
    #[error("log line {line}: appraisal references unknown event {event_id}")]
    DanglingAppraisal { line: usize, event_id: u64 },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunLog {
    pub records: Vec<LogRecord>,
}

impl RunLog {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("log records serialize"));
            out.push('\n');
        }
        out
    }

    /// Parses and checks a log: every line is a known record, timestamps are
    /// non-decreasing and appraisals follow the event they reference.
    pub fn parse_jsonl(text: &str) -> Result<RunLog, LogError> {
        let mut records = Vec::new();
        let mut seen_events = std::collections::HashSet::new();
        let mut prev = 0;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let line_no = i + 1;
            let rec: LogRecord = serde_json::from_str(line).map_err(|source| LogError::Parse { line: line_no, source })?;
            if rec.t_ms < prev {
                return Err(LogError::Timestamps { line: line_no, t_ms: rec.t_ms, prev });
            }
            prev = rec.t_ms;
            match &rec.body {
                RecordBody::Event(e) => {
                    seen_events.insert(e.id);
                }
                RecordBody::Appraisal(a) if !seen_events.contains(&a.event_id) => {
                    return Err(LogError::DanglingAppraisal { line: line_no, event_id: a.event_id });
                }
                _ => {}
            }
            records.push(rec);
        }
        Ok(RunLog { records })
    }

    pub fn directives(&self) -> impl Iterator<Item = &DisplayDirective> {
        self.records.iter().filter_map(|r| match &r.body {
            RecordBody::Directive(d) => Some(d),
            _ => None,
        })
    }

    pub fn count(&self, type_name: &str) -> usize {
        self.records.iter().filter(|r| r.body.type_name() == type_name).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_wire_shape() {
        let rec = LogRecord { t_ms: 5, body: RecordBody::DayBoundary(DayBoundaryBody { day_index: 2 }) };
        let s = serde_json::to_string(&rec).unwrap();
        assert_eq!(s, r#"{"t_ms":5,"type":"day_boundary","body":{"day_index":2}}"#);
        let back: LogRecord = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rec);
    }

    #[test]
    fn parse_rejects_bad_logs() {
        let ok = r#"{"t_ms":0,"type":"event","body":{"id":0,"kind":"Pat"}}
{"t_ms":0,"type":"appraisal","body":{"event_id":0,"valence":0.3,"arousal":0.2,"mood":{"valence":0.0,"arousal":0.0}}}
"#;
        assert_eq!(RunLog::parse_jsonl(ok).unwrap().records.len(), 2);

        let dangling = r#"{"t_ms":0,"type":"appraisal","body":{"event_id":9,"valence":0.3,"arousal":0.2,"mood":{"valence":0.0,"arousal":0.0}}}"#;
        assert!(matches!(RunLog::parse_jsonl(dangling), Err(LogError::DanglingAppraisal { line: 1, .. })));

        let backwards = "{\"t_ms\":5,\"type\":\"day_boundary\",\"body\":{\"day_index\":1}}\n{\"t_ms\":4,\"type\":\"day_boundary\",\"body\":{\"day_index\":1}}";
        assert!(matches!(RunLog::parse_jsonl(backwards), Err(LogError::Timestamps { line: 2, .. })));

        assert!(matches!(RunLog::parse_jsonl(r#"{"t_ms":0,"type":"bogus","body":{}}"#), Err(LogError::Parse { .. })));
    }
}

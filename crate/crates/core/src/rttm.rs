//! RTTM, embedding and trial-score file I/O.
//!
//! All three formats are UTF-8, newline-delimited text. Parsers never
//! silently drop a malformed line; every parse error carries the 1-based
//! line number. Timestamps are quantized to milliseconds on ingestion and
//! rendered with exactly three decimals, so `parse(write(doc)) == doc`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::time::Ms;
use crate::timeline::Interval;

/// One speaker-attributed utterance interval within a recording: a single
/// RTTM `SPEAKER` row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Turn {
    pub recording_id: String,
    pub channel: String,
    pub speaker: String,
    pub onset: Ms,
    pub duration: Ms,
}

impl Turn {
    pub fn new(
        recording_id: impl Into<String>,
        channel: impl Into<String>,
        speaker: impl Into<String>,
        onset: Ms,
        duration: Ms,
    ) -> Turn {
        Turn {
            recording_id: recording_id.into(),
            channel: channel.into(),
            speaker: speaker.into(),
            onset,
            duration,
        }
    }

    pub fn end(&self) -> Ms {
        self.onset + self.duration
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.onset, self.end())
    }

    fn validate(&self) -> Result<()> {
        if self.duration <= Ms::ZERO {
            return Err(Error::Validation(format!(
                "turn for speaker {} in {} has non-positive duration {}",
                self.speaker, self.recording_id, self.duration
            )));
        }
        if self.onset < Ms::ZERO {
            return Err(Error::Validation(format!(
                "turn for speaker {} in {} has negative onset {}",
                self.speaker, self.recording_id, self.onset
            )));
        }
        Ok(())
    }

    /// Total ordering used for document normalization: grouped by
    /// recording, then onset, then speaker.
    fn sort_key(&self) -> (&str, Ms, &str, Ms, &str) {
        (
            &self.recording_id,
            self.onset,
            &self.speaker,
            self.duration,
            &self.channel,
        )
    }
}

/// A parsed RTTM file: turns sorted by (recording, onset, speaker), with
/// recordings grouped in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RttmDocument {
    turns: Vec<Turn>,
}

impl RttmDocument {
    pub fn new(mut turns: Vec<Turn>) -> RttmDocument {
        turns.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        RttmDocument { turns }
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    /// Recording ids in lexicographic order.
    pub fn recording_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.turns.iter().map(|t| t.recording_id.as_str()).collect();
        ids.dedup();
        ids
    }

    pub fn turns_for(&self, recording_id: &str) -> Vec<&Turn> {
        self.turns
            .iter()
            .filter(|t| t.recording_id == recording_id)
            .collect()
    }

    /// Turns grouped per recording, recordings in lexicographic order.
    pub fn by_recording(&self) -> BTreeMap<&str, Vec<&Turn>> {
        let mut map: BTreeMap<&str, Vec<&Turn>> = BTreeMap::new();
        for t in &self.turns {
            map.entry(t.recording_id.as_str()).or_default().push(t);
        }
        map
    }
}

/// A labelled verification-trial score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialScore {
    pub target: bool,
    pub score: f64,
}

fn parse_time(field: &str, what: &str, line_no: usize) -> Result<Ms> {
    let secs: f64 = field
        .parse()
        .map_err(|_| Error::parse(line_no, format!("non-numeric {what} \"{field}\"")))?;
    if !secs.is_finite() {
        return Err(Error::parse(line_no, format!("non-finite {what} \"{field}\"")));
    }
    Ok(Ms::from_seconds(secs))
}

/// Parse RTTM text. Each non-empty line must have exactly 10
/// whitespace-delimited fields with field 1 equal to `SPEAKER`; fields
/// 6, 7, 9 and 10 are accepted and ignored.
pub fn parse_rttm(text: &str) -> Result<RttmDocument> {
    let mut turns = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 10 {
            return Err(Error::parse(
                line_no,
                format!("expected 10 fields, found {}", fields.len()),
            ));
        }
        if fields[0] != "SPEAKER" {
            return Err(Error::parse(
                line_no,
                format!("expected record type SPEAKER, found \"{}\"", fields[0]),
            ));
        }
        let turn = Turn::new(
            fields[1],
            fields[2],
            fields[7],
            parse_time(fields[3], "onset", line_no)?,
            parse_time(fields[4], "duration", line_no)?,
        );
        turn.validate()?;
        turns.push(turn);
    }
    Ok(RttmDocument::new(turns))
}

/// Serialize a document. Onset and duration carry exactly three decimals;
/// the ignored RTTM fields are written as `<NA>`.
pub fn write_rttm(doc: &RttmDocument) -> String {
    let mut out = String::new();
    for t in doc.turns() {
        out.push_str(&format!(
            "SPEAKER {} {} {} {} <NA> <NA> {} <NA> <NA>\n",
            t.recording_id, t.channel, t.onset, t.duration, t.speaker
        ));
    }
    out
}

/// One sub-segment record of an embedding file.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRecord {
    pub recording_id: String,
    pub interval: Interval,
    pub vector: Vec<f64>,
}

/// Fixed-dimension embedding vectors attached to sub-segment intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmbeddingSet {
    pub dim: usize,
    pub records: Vec<EmbeddingRecord>,
}

impl EmbeddingSet {
    pub fn new(dim: usize, mut records: Vec<EmbeddingRecord>) -> EmbeddingSet {
        records.sort_by(|a, b| {
            (&a.recording_id, a.interval.start, a.interval.end).cmp(&(
                &b.recording_id,
                b.interval.start,
                b.interval.end,
            ))
        });
        EmbeddingSet { dim, records }
    }

    /// Records grouped per recording, recordings in lexicographic order.
    pub fn by_recording(&self) -> BTreeMap<&str, Vec<&EmbeddingRecord>> {
        let mut map: BTreeMap<&str, Vec<&EmbeddingRecord>> = BTreeMap::new();
        for r in &self.records {
            map.entry(r.recording_id.as_str()).or_default().push(r);
        }
        map
    }
}

/// Parse the `EMB` text format: a header line `EMB <dim>` followed by one
/// record per line, `<recording> <start> <end> <dim floats>`.
pub fn parse_embeddings(text: &str) -> Result<EmbeddingSet> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing EMB header".to_string()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 || head[0] != "EMB" {
        return Err(Error::parse(1, "expected header \"EMB <dim>\"".to_string()));
    }
    let dim: usize = head[1]
        .parse()
        .map_err(|_| Error::parse(1, format!("non-numeric dimension \"{}\"", head[1])))?;
    if dim == 0 {
        return Err(Error::Validation("embedding dimension must be positive".into()));
    }

    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 + dim {
            return Err(Error::parse(
                line_no,
                format!("expected {} fields for dim {dim}, found {}", 3 + dim, fields.len()),
            ));
        }
        let start = parse_time(fields[1], "start", line_no)?;
        let end = parse_time(fields[2], "end", line_no)?;
        if end <= start {
            return Err(Error::Validation(format!(
                "line {line_no}: sub-segment end {end} not after start {start}"
            )));
        }
        let mut vector = Vec::with_capacity(dim);
        for f in &fields[3..] {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::parse(line_no, format!("non-numeric component \"{f}\"")))?;
            if !v.is_finite() {
                return Err(Error::parse(line_no, format!("non-finite component \"{f}\"")));
            }
            vector.push(v);
        }
        records.push(EmbeddingRecord {
            recording_id: fields[0].to_string(),
            interval: Interval::new(start, end),
            vector,
        });
    }
    Ok(EmbeddingSet::new(dim, records))
}

/// Serialize an embedding set in the `EMB` text format. Vector components
/// use Rust's shortest round-trip float rendering, so the file is lossless.
pub fn write_embeddings(set: &EmbeddingSet) -> String {
    let mut out = format!("EMB {}\n", set.dim);
    for r in &set.records {
        out.push_str(&format!("{} {} {}", r.recording_id, r.interval.start, r.interval.end));
        for v in &r.vector {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

/// Parse trial scores: one `<target|nontarget> <float>` pair per line.
pub fn parse_trials(text: &str) -> Result<Vec<TrialScore>> {
    let mut trials = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                line_no,
                format!("expected \"<label> <score>\", found {} fields", fields.len()),
            ));
        }
        let target = match fields[0] {
            "target" => true,
            "nontarget" => false,
            other => {
                return Err(Error::parse(line_no, format!("unknown label \"{other}\"")));
            }
        };
        let score: f64 = fields[1]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("non-numeric score \"{}\"", fields[1])))?;
        if !score.is_finite() {
            return Err(Error::parse(line_no, format!("non-finite score \"{}\"", fields[1])));
        }
        trials.push(TrialScore { target, score });
    }
    Ok(trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_single_speaker_line() {
        let doc = parse_rttm("SPEAKER rec1 1 0.50 1.20 <NA> <NA> spkA <NA> <NA>").unwrap();
        assert_eq!(
            doc.turns(),
            &[Turn::new("rec1", "1", "spkA", Ms(500), Ms(1200))]
        );
    }

    #[test]
    fn empty_input_is_empty_document() {
        assert!(parse_rttm("").unwrap().is_empty());
        assert!(parse_rttm("\n\n").unwrap().is_empty());
    }

    #[test]
    fn rejects_non_positive_duration() {
        let err = parse_rttm("SPEAKER rec1 1 0.50 -1.0 <NA> <NA> spkA <NA> <NA>").unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
        let err = parse_rttm("SPEAKER rec1 1 0.50 0.0 <NA> <NA> spkA <NA> <NA>").unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
    }

    #[test]
    fn field_count_error_carries_line_number() {
        let err = parse_rttm(
            "SPEAKER rec1 1 0.50 1.20 <NA> <NA> spkA <NA> <NA>\nSPEAKER rec1 1 0.50 1.20 <NA> spkA <NA> <NA>",
        )
        .unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_onset_is_parse_error() {
        let err = parse_rttm("SPEAKER rec1 1 x 1.20 <NA> <NA> spkA <NA> <NA>").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn writes_three_decimals_and_na_fields() {
        let doc = RttmDocument::new(vec![Turn::new("rec1", "1", "spkA", Ms(500), Ms(1200))]);
        assert_eq!(
            write_rttm(&doc),
            "SPEAKER rec1 1 0.500 1.200 <NA> <NA> spkA <NA> <NA>\n"
        );
    }

    #[test]
    fn interleaved_recordings_grouped_and_sorted() {
        let text = "\
SPEAKER recB 1 3.00 1.00 <NA> <NA> s1 <NA> <NA>
SPEAKER recA 1 5.00 1.00 <NA> <NA> s2 <NA> <NA>
SPEAKER recB 1 1.00 1.00 <NA> <NA> s2 <NA> <NA>
SPEAKER recA 1 0.00 1.00 <NA> <NA> s1 <NA> <NA>";
        let doc = parse_rttm(text).unwrap();
        let recs: Vec<&str> = doc.turns().iter().map(|t| t.recording_id.as_str()).collect();
        assert_eq!(recs, ["recA", "recA", "recB", "recB"]);
        let onsets: Vec<Ms> = doc.turns().iter().map(|t| t.onset).collect();
        assert_eq!(onsets, [Ms(0), Ms(5000), Ms(1000), Ms(3000)]);
    }

    #[test]
    fn parses_embedding_file() {
        let set = parse_embeddings("EMB 2\nrec1 0.0 1.5 0.6 0.8").unwrap();
        assert_eq!(set.dim, 2);
        assert_eq!(set.records.len(), 1);
        assert_eq!(set.records[0].vector, vec![0.6, 0.8]);
        assert_eq!(set.records[0].interval, Interval::new(Ms(0), Ms(1500)));
    }

    #[test]
    fn embedding_dim_mismatch_is_parse_error() {
        let err = parse_embeddings("EMB 2\nrec1 0.0 1.5 0.6 0.8 0.1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn embedding_header_only_is_empty_set() {
        let set = parse_embeddings("EMB 4\n").unwrap();
        assert_eq!(set.dim, 4);
        assert!(set.records.is_empty());
    }

    #[test]
    fn embedding_end_before_start_is_validation_error() {
        let err = parse_embeddings("EMB 1\nrec1 2.0 1.0 0.5").unwrap_err();
        assert!(matches!(err, Error::Validation(_)), "{err:?}");
    }

    #[test]
    fn parses_trials() {
        let trials = parse_trials("target 0.9\nnontarget 0.1").unwrap();
        assert_eq!(
            trials,
            vec![
                TrialScore { target: true, score: 0.9 },
                TrialScore { target: false, score: 0.1 }
            ]
        );
    }

    #[test]
    fn unknown_trial_label_is_parse_error() {
        let err = parse_trials("bonafide 0.9").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn empty_trial_file_is_empty_list() {
        assert!(parse_trials("").unwrap().is_empty());
    }

    fn arb_turn() -> impl Strategy<Value = Turn> {
        (
            prop_oneof![Just("recA"), Just("recB"), Just("recC")],
            0i64..100_000,
            1i64..20_000,
            prop_oneof![Just("alice"), Just("bob"), Just("carol"), Just("dave")],
        )
            .prop_map(|(rec, onset, dur, spk)| Turn::new(rec, "1", spk, Ms(onset), Ms(dur)))
    }

    proptest! {
        #[test]
        fn round_trip_is_identity(turns in prop::collection::vec(arb_turn(), 0..40)) {
            let doc = RttmDocument::new(turns);
            let back = parse_rttm(&write_rttm(&doc)).unwrap();
            prop_assert_eq!(doc, back);
        }
    }
}

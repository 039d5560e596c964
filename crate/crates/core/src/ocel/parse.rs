//! Ingestion of OCEL JSON documents (1.0 and 2.0 dialects).
//!
//! Both dialects are normalized into the same [`EventLog`]: the analyses
//! never see which container a log came from. Event-to-object references are
//! the only relationship source; OCEL 2.0 object-to-object annotations are
//! kept as auxiliary metadata, and per-reference qualifiers are preserved as
//! opaque strings.

use std::collections::BTreeSet;
use std::path::Path;

use chrono::{DateTime, FixedOffset, NaiveDateTime, TimeZone, Utc};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ocel::{EventLog, EventLogBuilder, ObjectType};

/// Which dialect to expect when parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormatHint {
    Ocel1Json,
    Ocel2Json,
    #[default]
    Auto,
}

/// Parse an OCEL document from raw bytes.
///
/// With [`FormatHint::Auto`], the dialect is detected from the top-level
/// structure: a `"ocel:events"` key means 1.0, an `"events"` array means 2.0.
/// The returned log is validated and canonically ordered.
pub fn parse_ocel(bytes: &[u8], hint: FormatHint) -> Result<EventLog> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let root = value
        .as_object()
        .ok_or_else(|| Error::Format("top-level JSON value is not an object".into()))?;

    let format = match hint {
        FormatHint::Ocel1Json => FormatHint::Ocel1Json,
        FormatHint::Ocel2Json => FormatHint::Ocel2Json,
        FormatHint::Auto => {
            if root.contains_key("ocel:events") {
                FormatHint::Ocel1Json
            } else if root.get("events").map(Value::is_array).unwrap_or(false) {
                FormatHint::Ocel2Json
            } else {
                return Err(Error::Format(
                    "unknown log dialect: expected an \"ocel:events\" map or an \"events\" array"
                        .into(),
                ));
            }
        }
    };

    match format {
        FormatHint::Ocel1Json => parse_ocel1(root),
        FormatHint::Ocel2Json => parse_ocel2(root),
        FormatHint::Auto => unreachable!(),
    }
}

/// Read and parse an OCEL document from disk.
pub fn parse_ocel_file(path: impl AsRef<Path>) -> Result<EventLog> {
    let bytes = std::fs::read(path)?;
    parse_ocel(&bytes, FormatHint::Auto)
}

fn parse_ocel1(root: &serde_json::Map<String, Value>) -> Result<EventLog> {
    let mut builder = EventLogBuilder::new();

    let objects = root
        .get("ocel:objects")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing \"ocel:objects\" map".into()))?;
    for (id, body) in objects {
        let ty = body
            .get("ocel:type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format(format!("object {id:?} has no \"ocel:type\"")))?;
        let attrs = body.get("ocel:ovmap").cloned();
        builder.add_object_with_attrs(id.clone(), ObjectType::new(ty), attrs);
    }

    let events = root
        .get("ocel:events")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing \"ocel:events\" map".into()))?;
    for (id, body) in events {
        let activity = body
            .get("ocel:activity")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format(format!("event {id:?} has no \"ocel:activity\"")))?;
        let raw_ts = body
            .get("ocel:timestamp")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format(format!("event {id:?} has no \"ocel:timestamp\"")))?;
        let timestamp = parse_timestamp(raw_ts)
            .ok_or_else(|| Error::Format(format!("event {id:?}: bad timestamp {raw_ts:?}")))?;
        let omap = body
            .get("ocel:omap")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format(format!("event {id:?} has no \"ocel:omap\" array")))?;
        let refs: Vec<String> = omap
            .iter()
            .map(|v| {
                v.as_str().map(str::to_owned).ok_or_else(|| {
                    Error::Format(format!("event {id:?}: non-string entry in \"ocel:omap\""))
                })
            })
            .collect::<Result<_>>()?;
        let attrs = body.get("ocel:vmap").cloned();
        builder.add_event_full(id.clone(), activity, timestamp, refs, BTreeSet::new(), attrs);
    }

    builder.build()
}

fn parse_ocel2(root: &serde_json::Map<String, Value>) -> Result<EventLog> {
    let mut builder = EventLogBuilder::new();

    if let Some(types) = root.get("objectTypes").and_then(Value::as_array) {
        for t in types {
            if let Some(name) = type_name(t) {
                builder.declare_type(ObjectType::new(name));
            }
        }
    }
    if let Some(types) = root.get("eventTypes").and_then(Value::as_array) {
        for t in types {
            if let Some(name) = type_name(t) {
                builder.declare_activity(name);
            }
        }
    }

    let objects = root
        .get("objects")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing \"objects\" array".into()))?;
    for body in objects {
        let id = body
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format("object without \"id\"".into()))?;
        let ty = body
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format(format!("object {id:?} has no \"type\"")))?;
        let attrs = body.get("attributes").cloned();
        builder.add_object_with_attrs(id.to_owned(), ObjectType::new(ty), attrs);
        if let Some(rels) = body.get("relationships").and_then(Value::as_array) {
            for rel in rels {
                let target = rel.get("objectId").and_then(Value::as_str).ok_or_else(|| {
                    Error::Format(format!("object {id:?}: o2o relationship without \"objectId\""))
                })?;
                let qualifier =
                    rel.get("qualifier").and_then(Value::as_str).unwrap_or_default();
                builder.add_o2o(id.to_owned(), target.to_owned(), qualifier.to_owned());
            }
        }
    }

    let events = root
        .get("events")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing \"events\" array".into()))?;
    for body in events {
        let id = body
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format("event without \"id\"".into()))?;
        let activity = body
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format(format!("event {id:?} has no \"type\"")))?;
        let raw_ts = body
            .get("time")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Format(format!("event {id:?} has no \"time\"")))?;
        let timestamp = parse_timestamp(raw_ts)
            .ok_or_else(|| Error::Format(format!("event {id:?}: bad timestamp {raw_ts:?}")))?;

        // The event's object set is the set of objectId values in its
        // relationships array; qualifiers ride along as metadata.
        let mut refs = Vec::new();
        let mut qualifiers = BTreeSet::new();
        if let Some(rels) = body.get("relationships").and_then(Value::as_array) {
            for rel in rels {
                let obj = rel.get("objectId").and_then(Value::as_str).ok_or_else(|| {
                    Error::Format(format!("event {id:?}: relationship without \"objectId\""))
                })?;
                refs.push(obj.to_owned());
                if let Some(q) = rel.get("qualifier").and_then(Value::as_str) {
                    if !q.is_empty() {
                        qualifiers.insert((obj.to_owned(), q.to_owned()));
                    }
                }
            }
        }
        let attrs = body.get("attributes").cloned();
        builder.add_event_full(id.to_owned(), activity, timestamp, refs, qualifiers, attrs);
    }

    builder.build()
}

/// OCEL 2.0 type declarations are either plain strings or `{"name": ...}`.
fn type_name(v: &Value) -> Option<&str> {
    v.as_str().or_else(|| v.get("name").and_then(Value::as_str))
}

/// Accept RFC 3339 plus the offset-less forms seen in published logs
/// (naive timestamps are taken as UTC).
fn parse_timestamp(raw: &str) -> Option<DateTime<FixedOffset>> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
        return Some(dt);
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(raw, fmt) {
            return Some(Utc.from_utc_datetime(&naive).fixed_offset());
        }
    }
    None
}

/// Translate serde_json's 1-based (line, column) into a byte offset.
fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut remaining = line - 1;
    let mut offset = 0;
    for (i, b) in bytes.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if *b == b'\n' {
            remaining -= 1;
            offset = i + 1;
        }
    }
    (offset + column.saturating_sub(1)).min(bytes.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_json_with_offset() {
        let doc = b"{\"ocel:events\": {,}";
        match parse_ocel(doc, FormatHint::Auto) {
            Err(Error::Parse { offset, .. }) => assert!(offset > 0 && offset <= doc.len()),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_dialect() {
        let doc = br#"{"rows": []}"#;
        assert!(matches!(parse_ocel(doc, FormatHint::Auto), Err(Error::Format(_))));
    }

    #[test]
    fn parses_minimal_ocel1() {
        let doc = br#"{
            "ocel:global-log": {},
            "ocel:events": {
                "e1": {"ocel:activity": "create", "ocel:timestamp": "2024-01-01T09:00:00+00:00", "ocel:omap": ["o1"]}
            },
            "ocel:objects": {"o1": {"ocel:type": "order"}}
        }"#;
        let log = parse_ocel(doc, FormatHint::Auto).unwrap();
        assert_eq!(log.events.len(), 1);
        assert_eq!(log.type_of("o1").unwrap().as_str(), "order");
        assert!(log.activities.contains("create"));
    }

    #[test]
    fn parses_minimal_ocel2_with_zero_events() {
        let doc = br#"{
            "objectTypes": [{"name": "order"}],
            "eventTypes": [],
            "objects": [],
            "events": []
        }"#;
        let log = parse_ocel(doc, FormatHint::Auto).unwrap();
        assert!(log.events.is_empty());
        assert!(log.types.contains(&ObjectType::new("order")));
    }

    #[test]
    fn dangling_reference_names_offender() {
        let doc = br#"{
            "objectTypes": ["order"],
            "objects": [{"id": "o1", "type": "order"}],
            "events": [{"id": "e1", "type": "create", "time": "2024-01-01T09:00:00+00:00",
                        "relationships": [{"objectId": "x9", "qualifier": ""}]}]
        }"#;
        match parse_ocel(doc, FormatHint::Auto) {
            Err(Error::Validation(msg)) => assert!(msg.contains("x9"), "{msg}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn naive_timestamps_are_utc() {
        let ts = parse_timestamp("2024-03-05 10:30:00").unwrap();
        assert_eq!(ts.to_rfc3339(), "2024-03-05T10:30:00+00:00");
    }
}

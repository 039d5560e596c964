//! Object-centric event log data model.
//!
//! An [`EventLog`] is a set of typed objects plus a totally ordered sequence
//! of events, each referencing a set of object ids. Events carry an activity
//! name and a timestamp; everything else (attributes, qualifiers) is retained
//! opaquely and never interpreted by the analyses in this crate.
//!
//! Logs are immutable after construction and safe to share across analysis
//! workers. Construction goes through [`EventLogBuilder`], which enforces
//! referential integrity, deduplicates object references, and establishes the
//! canonical event order.

mod parse;
mod write;

pub use parse::{parse_ocel, parse_ocel_file, FormatHint};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Name of an object type (e.g. `order`, `item`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectType(String);

impl ObjectType {
    pub fn new(name: impl Into<String>) -> Self {
        ObjectType(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjectType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjectType {
    fn from(s: &str) -> Self {
        ObjectType(s.to_owned())
    }
}

/// A concrete object instance: an identifier with a type.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectInstance {
    pub id: String,
    pub object_type: ObjectType,
    /// Raw attribute payload from the source document, kept verbatim.
    pub attributes: Option<Value>,
}

/// One event of the log.
///
/// `objects` is a set: duplicate references in the source document are
/// collapsed during construction (with a warning). `position` is the event's
/// ordinal in the canonical order and is unique within a log.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub id: String,
    pub activity: String,
    pub timestamp: DateTime<FixedOffset>,
    pub objects: BTreeSet<String>,
    pub position: usize,
    /// Per-reference qualifier annotations `(object id, qualifier)`, kept as
    /// opaque metadata. Empty qualifiers are not recorded.
    pub qualifiers: BTreeSet<(String, String)>,
    /// Raw attribute payload from the source document, kept verbatim.
    pub attributes: Option<Value>,
}

/// Object-to-object relationship annotation from an OCEL 2.0 document.
///
/// These are auxiliary metadata only: analyses derive relationships from
/// event-to-object references, never from these annotations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct O2ORelation {
    pub source: String,
    pub target: String,
    pub qualifier: String,
}

/// Severity of a [`Diagnostic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// A validation finding. Errors make a log unusable for analysis; warnings
/// do not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn warning(message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, message: message.into() }
    }

    pub fn error(message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Warning => write!(f, "warning: {}", self.message),
            Severity::Error => write!(f, "error: {}", self.message),
        }
    }
}

/// A validated, canonically ordered object-centric event log.
#[derive(Debug, Clone)]
pub struct EventLog {
    pub types: BTreeSet<ObjectType>,
    pub objects: BTreeMap<String, ObjectInstance>,
    pub activities: BTreeSet<String>,
    pub events: Vec<Event>,
    /// Object-to-object annotations (OCEL 2.0 only), auxiliary metadata.
    pub o2o: BTreeSet<O2ORelation>,
    /// Warnings collected while building (e.g. deduplicated references).
    ingest_warnings: Vec<Diagnostic>,
}

// Equality is over log content; ingest warnings are bookkeeping and round-trip
// serialization is allowed to drop them.
impl PartialEq for EventLog {
    fn eq(&self, other: &Self) -> bool {
        self.types == other.types
            && self.objects == other.objects
            && self.activities == other.activities
            && self.events == other.events
            && self.o2o == other.o2o
    }
}

impl EventLog {
    /// Type of the given object id, if present.
    pub fn type_of(&self, object_id: &str) -> Option<&ObjectType> {
        self.objects.get(object_id).map(|o| &o.object_type)
    }

    /// Events of a given activity, in canonical order.
    pub fn events_of_activity<'a>(&'a self, activity: &'a str) -> impl Iterator<Item = &'a Event> {
        self.events.iter().filter(move |e| e.activity == activity)
    }

    /// Warnings recorded while the log was built or parsed.
    pub fn ingest_warnings(&self) -> &[Diagnostic] {
        &self.ingest_warnings
    }

    /// Serialize to the canonical OCEL 2.0 JSON document.
    pub fn to_ocel2_json(&self) -> Value {
        write::to_ocel2_json(self)
    }

    /// Serialize to a pretty-printed canonical OCEL 2.0 JSON string.
    pub fn to_ocel2_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_ocel2_json()).expect("serializing a log cannot fail")
    }
}

/// An event as supplied to the builder, before ordering.
#[derive(Debug, Clone)]
struct PendingEvent {
    id: String,
    activity: String,
    timestamp: DateTime<FixedOffset>,
    object_refs: Vec<String>,
    qualifiers: BTreeSet<(String, String)>,
    attributes: Option<Value>,
}

/// Incremental constructor for [`EventLog`].
///
/// Events are kept in insertion order until [`EventLogBuilder::build`], which
/// sorts them canonically, assigns positions, checks referential integrity
/// and records warnings for the soft findings.
#[derive(Debug, Default)]
pub struct EventLogBuilder {
    types: BTreeSet<ObjectType>,
    objects: BTreeMap<String, ObjectInstance>,
    events: Vec<PendingEvent>,
    o2o: BTreeSet<O2ORelation>,
    declared_activities: BTreeSet<String>,
    warnings: Vec<Diagnostic>,
    errors: Vec<String>,
}

impl EventLogBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare an object type. Types referenced by objects are added
    /// implicitly; explicit declaration only matters for empty logs.
    pub fn declare_type(&mut self, object_type: ObjectType) -> &mut Self {
        self.types.insert(object_type);
        self
    }

    /// Declare an activity name. Activities only occurring here (never in an
    /// event) produce a warning and are dropped from the final log.
    pub fn declare_activity(&mut self, activity: impl Into<String>) -> &mut Self {
        self.declared_activities.insert(activity.into());
        self
    }

    pub fn add_object(&mut self, id: impl Into<String>, object_type: ObjectType) -> &mut Self {
        self.add_object_with_attrs(id, object_type, None)
    }

    pub fn add_object_with_attrs(
        &mut self,
        id: impl Into<String>,
        object_type: ObjectType,
        attributes: Option<Value>,
    ) -> &mut Self {
        let id = id.into();
        if self.objects.contains_key(&id) {
            self.errors.push(format!("duplicate object id {id:?}"));
            return self;
        }
        self.types.insert(object_type.clone());
        self.objects.insert(id.clone(), ObjectInstance { id, object_type, attributes });
        self
    }

    pub fn add_event(
        &mut self,
        id: impl Into<String>,
        activity: impl Into<String>,
        timestamp: DateTime<FixedOffset>,
        object_refs: impl IntoIterator<Item = String>,
    ) -> &mut Self {
        self.add_event_full(id, activity, timestamp, object_refs, BTreeSet::new(), None)
    }

    pub fn add_event_full(
        &mut self,
        id: impl Into<String>,
        activity: impl Into<String>,
        timestamp: DateTime<FixedOffset>,
        object_refs: impl IntoIterator<Item = String>,
        qualifiers: BTreeSet<(String, String)>,
        attributes: Option<Value>,
    ) -> &mut Self {
        self.events.push(PendingEvent {
            id: id.into(),
            activity: activity.into(),
            timestamp,
            object_refs: object_refs.into_iter().collect(),
            qualifiers,
            attributes,
        });
        self
    }

    pub fn add_o2o(&mut self, source: String, target: String, qualifier: String) -> &mut Self {
        self.o2o.insert(O2ORelation { source, target, qualifier });
        self
    }

    /// Finish construction. Fails on referential-integrity errors; soft
    /// findings are kept as warnings on the log.
    pub fn build(mut self) -> Result<EventLog> {
        let mut event_ids = BTreeSet::new();
        for ev in &self.events {
            if !event_ids.insert(ev.id.clone()) {
                self.errors.push(format!("duplicate event id {:?}", ev.id));
            }
        }

        // Dangling references are hard errors; duplicates within one event
        // collapse to set semantics with a warning.
        let mut dangling = BTreeSet::new();
        for ev in &self.events {
            let mut seen = BTreeSet::new();
            for obj in &ev.object_refs {
                if !self.objects.contains_key(obj.as_str()) {
                    dangling.insert(obj.clone());
                }
                if !seen.insert(obj.as_str()) {
                    self.warnings.push(Diagnostic::warning(format!(
                        "event {:?} lists object {:?} more than once; duplicates collapsed",
                        ev.id, obj
                    )));
                }
            }
            if ev.object_refs.is_empty() {
                self.warnings
                    .push(Diagnostic::warning(format!("event {:?} references no objects", ev.id)));
            }
        }
        if !dangling.is_empty() {
            let list = dangling.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(", ");
            return Err(Error::Validation(format!(
                "events reference unknown objects: {list}"
            )));
        }
        if let Some(first) = self.errors.first() {
            return Err(Error::Validation(first.clone()));
        }

        // Canonical order: (timestamp, document position), then 0-based
        // positions. Stable sort keeps document order for equal timestamps.
        self.events.sort_by_key(|e| e.timestamp);
        let events: Vec<Event> = self
            .events
            .into_iter()
            .enumerate()
            .map(|(position, ev)| Event {
                id: ev.id,
                activity: ev.activity,
                timestamp: ev.timestamp,
                objects: ev.object_refs.into_iter().collect(),
                position,
                qualifiers: ev.qualifiers,
                attributes: ev.attributes,
            })
            .collect();

        let activities: BTreeSet<String> = events.iter().map(|e| e.activity.clone()).collect();
        for declared in &self.declared_activities {
            if !activities.contains(declared) {
                self.warnings.push(Diagnostic::warning(format!(
                    "activity {declared:?} is declared but never occurs in an event"
                )));
            }
        }
        if events.is_empty() {
            self.warnings.push(Diagnostic::warning("empty log: no events"));
        }

        for rel in &self.o2o {
            if !self.objects.contains_key(&rel.source) || !self.objects.contains_key(&rel.target) {
                return Err(Error::Validation(format!(
                    "object-to-object annotation references unknown object ({:?} -> {:?})",
                    rel.source, rel.target
                )));
            }
        }

        Ok(EventLog {
            types: self.types,
            objects: self.objects,
            activities,
            events,
            o2o: self.o2o,
            ingest_warnings: self.warnings,
        })
    }
}

/// Sort events canonically: by timestamp, ties broken by input order. The
/// result carries fresh positions `0..n`.
///
/// Idempotent: applying it to its own output returns the same sequence.
pub fn canonical_order(events: Vec<Event>) -> Vec<Event> {
    let mut indexed: Vec<(usize, Event)> = events.into_iter().enumerate().collect();
    indexed.sort_by(|(ia, a), (ib, b)| a.timestamp.cmp(&b.timestamp).then(ia.cmp(ib)));
    indexed
        .into_iter()
        .enumerate()
        .map(|(position, (_, mut ev))| {
            ev.position = position;
            ev
        })
        .collect()
}

/// Re-check a built log and report findings.
///
/// Builder-time warnings (deduplication, empty events, empty log) are
/// included, followed by structural re-checks. A log constructed through
/// [`EventLogBuilder`] or [`parse_ocel`] never yields errors here.
pub fn validate(log: &EventLog) -> Vec<Diagnostic> {
    let mut diags = log.ingest_warnings.clone();

    for ev in &log.events {
        for obj in &ev.objects {
            if !log.objects.contains_key(obj) {
                diags.push(Diagnostic::error(format!(
                    "event {:?} references unknown object {:?}",
                    ev.id, obj
                )));
            }
        }
    }
    for obj in log.objects.values() {
        if !log.types.contains(&obj.object_type) {
            diags.push(Diagnostic::error(format!(
                "object {:?} has unknown type {:?}",
                obj.id, obj.object_type
            )));
        }
    }
    let occurring: BTreeSet<&str> = log.events.iter().map(|e| e.activity.as_str()).collect();
    for act in &log.activities {
        if !occurring.contains(act.as_str()) {
            diags.push(Diagnostic::error(format!(
                "activity {act:?} is registered but does not occur"
            )));
        }
    }

    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn ts(minute: u32) -> DateTime<FixedOffset> {
        FixedOffset::east_opt(0)
            .unwrap()
            .with_ymd_and_hms(2024, 1, 1, 9, minute, 0)
            .unwrap()
    }

    fn event(id: &str, minute: u32) -> Event {
        Event {
            id: id.to_owned(),
            activity: "a".to_owned(),
            timestamp: ts(minute),
            objects: BTreeSet::new(),
            position: 0,
            qualifiers: BTreeSet::new(),
            attributes: None,
        }
    }

    #[test]
    fn canonical_order_sorted_input_unchanged() {
        let events = vec![event("e1", 1), event("e2", 2), event("e3", 3)];
        let ordered = canonical_order(events.clone());
        let ids: Vec<&str> = ordered.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["e1", "e2", "e3"]);
        assert_eq!(ordered[2].position, 2);
    }

    #[test]
    fn canonical_order_equal_timestamps_keep_document_order() {
        let events = vec![event("first", 5), event("second", 5), event("third", 5)];
        let ordered = canonical_order(events);
        let ids: Vec<&str> = ordered.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["first", "second", "third"]);
    }

    #[test]
    fn canonical_order_is_idempotent_permutation() {
        let events = vec![event("b", 2), event("a", 1), event("c", 2)];
        let once = canonical_order(events.clone());
        let twice = canonical_order(once.clone());
        assert_eq!(once, twice);
        let mut in_ids: Vec<&str> = events.iter().map(|e| e.id.as_str()).collect();
        let mut out_ids: Vec<&str> = once.iter().map(|e| e.id.as_str()).collect();
        in_ids.sort();
        out_ids.sort();
        assert_eq!(in_ids, out_ids);
    }

    #[test]
    fn builder_rejects_dangling_reference() {
        let mut b = EventLogBuilder::new();
        b.add_object("o1", ObjectType::new("order"));
        b.add_event("e1", "create", ts(0), vec!["o1".into(), "x9".into()]);
        let err = b.build().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x9"), "error should name the offender: {msg}");
    }

    #[test]
    fn builder_collapses_duplicate_object_refs() {
        let mut b = EventLogBuilder::new();
        b.add_object("o1", ObjectType::new("order"));
        b.add_event("e1", "create", ts(0), vec!["o1".into(), "o1".into()]);
        let log = b.build().unwrap();
        assert_eq!(log.events[0].objects.len(), 1);
        let diags = validate(&log);
        assert!(diags.iter().any(|d| d.severity == Severity::Warning
            && d.message.contains("more than once")));
    }

    #[test]
    fn empty_log_warns() {
        let mut b = EventLogBuilder::new();
        b.declare_type(ObjectType::new("order"));
        let log = b.build().unwrap();
        assert!(log.events.is_empty());
        assert!(validate(&log).iter().any(|d| d.message.contains("empty log")));
    }

    #[test]
    fn validate_clean_log_has_no_errors() {
        let mut b = EventLogBuilder::new();
        b.add_object("o1", ObjectType::new("order"));
        b.add_event("e1", "create", ts(0), vec!["o1".into()]);
        let log = b.build().unwrap();
        assert!(validate(&log).iter().all(|d| d.severity != Severity::Error));
    }
}

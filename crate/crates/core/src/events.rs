//! Developer action logs in JSON-lines form.
//!
//! One event per line: `{"ts": <int ms>, "session": "<id>", "action": "<name>"}`.
//! Blank lines are skipped; anything else that fails to parse is reported
//! with its 1-based line number.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{HdvError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEvent {
    pub ts: i64,
    pub session: String,
    pub action: String,
}

impl ActionEvent {
    pub fn new(ts: i64, session: impl Into<String>, action: impl Into<String>) -> Self {
        Self {
            ts,
            session: session.into(),
            action: action.into(),
        }
    }
}

#[derive(Deserialize)]
struct RawEvent {
    ts: Option<i64>,
    session: Option<String>,
    action: Option<String>,
}

pub fn parse_line(line: &str, line_no: usize) -> Result<ActionEvent> {
    let raw: RawEvent = serde_json::from_str(line).map_err(|e| HdvError::Parse {
        line: line_no,
        message: e.to_string(),
    })?;
    let missing = |field: &str| HdvError::Parse {
        line: line_no,
        message: format!("missing field `{field}`"),
    };
    let action = raw.action.ok_or_else(|| missing("action"))?;
    if action.is_empty() {
        return Err(HdvError::Parse {
            line: line_no,
            message: "empty action".into(),
        });
    }
    Ok(ActionEvent {
        ts: raw.ts.ok_or_else(|| missing("ts"))?,
        session: raw.session.ok_or_else(|| missing("session"))?,
        action,
    })
}

pub fn read_events(reader: impl BufRead) -> Result<Vec<ActionEvent>> {
    let mut events = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        events.push(parse_line(&line, i + 1)?);
    }
    Ok(events)
}

pub fn parse_events(text: &str) -> Result<Vec<ActionEvent>> {
    read_events(text.as_bytes())
}

pub fn write_events(mut writer: impl Write, events: &[ActionEvent]) -> Result<()> {
    for e in events {
        serde_json::to_writer(&mut writer, e)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// One session's actions in replay order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub id: String,
    pub actions: Vec<String>,
}

/// Groups events by session (in order of first appearance) and orders each
/// session by timestamp, keeping input order among equal timestamps.
pub fn sessions(events: &[ActionEvent]) -> Vec<Session> {
    let mut order: Vec<&str> = Vec::new();
    let mut grouped: std::collections::HashMap<&str, Vec<&ActionEvent>> = Default::default();
    for e in events {
        grouped
            .entry(e.session.as_str())
            .or_insert_with(|| {
                order.push(e.session.as_str());
                Vec::new()
            })
            .push(e);
    }
    order
        .into_iter()
        .map(|id| {
            let mut list = grouped.remove(id).unwrap_or_default();
            list.sort_by_key(|e| e.ts);
            Session {
                id: id.to_string(),
                actions: list.into_iter().map(|e| e.action.clone()).collect(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reports_line_numbers() {
        let text = "{\"ts\":1,\"session\":\"s\",\"action\":\"OpenFile\"}\n\n{\"ts\":2,\"session\":\"s\"}\n";
        let err = parse_events(text).unwrap_err();
        match err {
            HdvError::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("action"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_events("not json"), Err(HdvError::Parse { line: 1, .. })));
    }

    #[test]
    fn sessions_sort_stably_by_timestamp() {
        let events = vec![
            ActionEvent::new(5, "b", "x"),
            ActionEvent::new(3, "a", "second"),
            ActionEvent::new(1, "a", "first"),
            ActionEvent::new(3, "a", "third"),
        ];
        let s = sessions(&events);
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].id, "b");
        assert_eq!(s[1].actions, vec!["first", "second", "third"]);
    }

    #[test]
    fn write_then_read() {
        let events = vec![ActionEvent::new(1, "s", "OpenFile"), ActionEvent::new(2, "s", "Commit")];
        let mut buf = Vec::new();
        write_events(&mut buf, &events).unwrap();
        assert_eq!(read_events(buf.as_slice()).unwrap(), events);
    }
}

//! Simulation events and their one-line text form.

use std::fmt;

use crate::value::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Fire { time: u64, node: String, consumed: Vec<Value>, produced: Vec<(String, Value, u64)> },
    Skip { time: u64, node: String, missing: Vec<String> },
    Extern { time: u64, node: String, prototype: String, arg: Value, ret: Value },
    Overflow { time: u64, node: String, channel: String },
}

impl Event {
    pub fn time(&self) -> u64 {
        match self {
            Event::Fire { time, .. }
            | Event::Skip { time, .. }
            | Event::Extern { time, .. }
            | Event::Overflow { time, .. } => *time,
        }
    }

    /// The node whose release produced this event.
    pub fn node(&self) -> &str {
        match self {
            Event::Fire { node, .. }
            | Event::Skip { node, .. }
            | Event::Extern { node, .. }
            | Event::Overflow { node, .. } => node,
        }
    }
}

fn list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Fire { time, node, consumed, produced } => write!(
                f,
                "T={} FIRE {} in=[{}] out=[{}]",
                time,
                node,
                list(consumed, |v| v.to_string()),
                list(produced, |(c, v, s)| format!("{}:{}@{}", c, v, s))
            ),
            Event::Skip { time, node, missing } => {
                write!(f, "T={} SKIP {} missing=[{}]", time, node, missing.join(","))
            }
            Event::Extern { time, prototype, arg, ret, .. } => {
                write!(f, "T={} EXT {} arg={} ret={}", time, prototype, arg, ret)
            }
            Event::Overflow { time, channel, .. } => write!(f, "T={} OVERFLOW {}", time, channel),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub events: Vec<Event>,
}

impl Trace {
    /// One event per line, each terminated by a newline.
    pub fn to_text(&self) -> String {
        self.events.iter().map(|e| format!("{}\n", e)).collect()
    }

    /// Reorders events within each instant by node name, keeping the order
    /// of events of the same node.
    pub fn normalized(&self) -> Trace {
        let mut events = self.events.clone();
        events.sort_by(|a, b| (a.time(), a.node()).cmp(&(b.time(), b.node())));
        Trace { events }
    }

    pub fn overflow(&self) -> Option<(&str, u64)> {
        self.events.iter().find_map(|e| match e {
            Event::Overflow { time, channel, .. } => Some((channel.as_str(), *time)),
            _ => None,
        })
    }

    pub fn externs<'a>(&'a self, prototype: &'a str) -> impl Iterator<Item = &'a Event> + 'a {
        self.events.iter().filter(move |e| matches!(e, Event::Extern { prototype: p, .. } if p == prototype))
    }
}

//! Bounded FIFO of timestamped values.

use std::collections::VecDeque;

use crate::value::Value;

#[derive(Debug, Clone, PartialEq)]
pub struct TimedQueue {
    pub channel: String,
    pub capacity: usize,
    items: VecDeque<(Value, u64)>,
}

impl TimedQueue {
    pub fn new(channel: impl Into<String>, capacity: usize) -> Self {
        TimedQueue { channel: channel.into(), capacity, items: VecDeque::new() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.items.len() >= self.capacity
    }

    pub fn front_stamp(&self) -> Option<u64> {
        self.items.front().map(|(_, s)| *s)
    }

    /// Appends an item; returns `false` (leaving the queue unchanged) when full.
    pub fn push(&mut self, value: Value, stamp: u64) -> bool {
        if self.is_full() {
            return false;
        }
        debug_assert!(self.items.back().is_none_or(|(_, s)| *s <= stamp), "stamps must not decrease");
        self.items.push_back((value, stamp));
        true
    }

    pub fn pop(&mut self) -> Option<(Value, u64)> {
        self.items.pop_front()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Value, u64)> {
        self.items.iter()
    }

    /// Whether stamps are non-decreasing from front to back.
    pub fn stamps_monotone(&self) -> bool {
        self.items.iter().zip(self.items.iter().skip(1)).all(|(a, b)| a.1 <= b.1)
    }
}

/// An item is visible once its stamp is reached: front stamp `<=` now.
pub fn available(q: &TimedQueue, now: u64) -> bool {
    q.front_stamp().is_some_and(|s| s <= now)
}

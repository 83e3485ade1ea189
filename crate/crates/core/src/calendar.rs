//! Machine unavailability calendars and availability arithmetic.
//!
//! A window `[b, e]` blocks the time units `b, b+1, .., e-1`. Starts are
//! legal iff `s <= b - 1` or `s >= e`; completions are legal iff `c <= b` or
//! `c >= e + 1`.

use serde::{Deserialize, Serialize};

use crate::instance::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(Time, Time)", into = "(Time, Time)")]
pub struct Window {
    pub begin: Time,
    pub end: Time,
}

impl From<(Time, Time)> for Window {
    fn from((begin, end): (Time, Time)) -> Self {
        Window { begin, end }
    }
}

impl From<Window> for (Time, Time) {
    fn from(w: Window) -> Self {
        (w.begin, w.end)
    }
}

impl Window {
    pub fn len(&self) -> Time {
        self.end.saturating_sub(self.begin)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Blocked units inside `[a, b]`.
    pub fn overlap(&self, a: Time, b: Time) -> Time {
        let lo = a.max(self.begin);
        let hi = b.min(self.end);
        hi.saturating_sub(lo)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Calendar {
    windows: Vec<Window>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalendarError {
    #[error("window {index} is empty or reversed: [{begin}, {end}]")]
    EmptyWindow { index: usize, begin: Time, end: Time },
    #[error("window {index} does not start after the previous window ends with a positive gap")]
    Unordered { index: usize },
    #[error("start {start} lies in the interior or at the beginning of an unavailability window")]
    IllegalStart { start: Time },
}

impl Calendar {
    pub fn new(windows: Vec<Window>) -> Result<Self, CalendarError> {
        let cal = Calendar { windows };
        match cal.problems().into_iter().next() {
            Some(e) => Err(e),
            None => Ok(cal),
        }
    }

    /// Builds a calendar without checking ordering; see [`Calendar::problems`].
    pub fn new_unchecked(windows: Vec<Window>) -> Self {
        Calendar { windows }
    }

    pub fn empty() -> Self {
        Calendar::default()
    }

    pub fn windows(&self) -> &[Window] {
        &self.windows
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// End of the last window, 0 when there is none.
    pub fn horizon(&self) -> Time {
        self.windows.last().map_or(0, |w| w.end)
    }

    pub fn problems(&self) -> Vec<CalendarError> {
        let mut out = Vec::new();
        for (index, w) in self.windows.iter().enumerate() {
            if w.begin >= w.end {
                out.push(CalendarError::EmptyWindow {
                    index,
                    begin: w.begin,
                    end: w.end,
                });
            }
            if index > 0 && self.windows[index - 1].end >= w.begin {
                out.push(CalendarError::Unordered { index });
            }
        }
        out
    }

    /// Window containing start `s` in its forbidden range `[b, e-1]`.
    pub fn blocking_start(&self, s: Time) -> Option<&Window> {
        self.windows.iter().find(|w| w.begin <= s && s < w.end)
    }

    pub fn is_legal_start(&self, s: Time) -> bool {
        self.blocking_start(s).is_none()
    }

    pub fn is_legal_completion(&self, c: Time) -> bool {
        !self.windows.iter().any(|w| w.begin < c && c <= w.end)
    }

    /// Window whose interior the setup span `[start - setup, start]` touches.
    pub fn blocking_setup(&self, start: Time, setup: Time) -> Option<&Window> {
        let from = start.saturating_sub(setup);
        self.windows
            .iter()
            .find(|w| start > w.begin && from < w.end)
    }

    /// True when a setup of length `setup` can end exactly at `start`.
    pub fn setup_fits(&self, start: Time, setup: Time) -> bool {
        start >= setup && self.blocking_setup(start, setup).is_none()
    }

    /// Completion of `dur` units of work starting at a legal start `s`,
    /// suspended across every window met on the way.
    pub fn completion_time(&self, s: Time, dur: Time) -> Result<Time, CalendarError> {
        if !self.is_legal_start(s) {
            return Err(CalendarError::IllegalStart { start: s });
        }
        Ok(self.completion_from(s, dur))
    }

    /// Same as [`Calendar::completion_time`] but accepts any start; work
    /// begins at the first available unit at or after `s`.
    pub fn completion_from(&self, s: Time, dur: Time) -> Time {
        let mut t = s;
        let mut remaining = dur;
        for w in &self.windows {
            if w.end <= t {
                continue;
            }
            if w.begin > t {
                let gap = w.begin - t;
                if remaining <= gap {
                    return t + remaining;
                }
                remaining -= gap;
            }
            t = w.end;
        }
        t + remaining
    }

    /// Blocked units inside `[a, b]`.
    pub fn unavailable_between(&self, a: Time, b: Time) -> Time {
        if b <= a {
            return 0;
        }
        self.windows.iter().map(|w| w.overlap(a, b)).sum()
    }

    /// Latest `t <= end` such that `[t, end]` contains exactly `dur` available
    /// units, or `None` when fewer than `dur` units exist in `[0, end]`.
    pub fn latest_start_covering(&self, end: Time, dur: Time) -> Option<Time> {
        let mut t = end;
        let mut remaining = dur;
        for w in self.windows.iter().rev() {
            if w.begin >= t {
                continue;
            }
            if w.end < t {
                let gap = t - w.end;
                if remaining <= gap {
                    return Some(t - remaining);
                }
                remaining -= gap;
            }
            t = w.begin;
        }
        t.checked_sub(remaining)
    }
}

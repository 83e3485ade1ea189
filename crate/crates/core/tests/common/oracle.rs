//! Unit-step reference semantics. Time unit `t` covers `[t, t+1)`; a window
//! `(b, e)` blocks units `b..e`. Nothing here uses the library's calendar.

pub fn blocked(windows: &[(u64, u64)], t: u64) -> bool {
    windows.iter().any(|&(b, e)| b <= t && t < e)
}

pub fn legal_start(windows: &[(u64, u64)], s: u64) -> bool {
    !windows.iter().any(|&(b, e)| b <= s && s < e)
}

/// Setup occupies units `s - setup .. s`, all of which must be available.
pub fn setup_ok(windows: &[(u64, u64)], s: u64, setup: u64) -> bool {
    s >= setup && (s - setup..s).all(|t| !blocked(windows, t))
}

/// End of the `dur`-th available unit at or after `s`.
pub fn sim_completion(windows: &[(u64, u64)], s: u64, dur: u64) -> u64 {
    let mut done = 0;
    let mut t = s;
    while done < dur {
        if !blocked(windows, t) {
            done += 1;
        }
        t += 1;
    }
    t
}

/// `(setup_start, start, partial_completion, completion)` of the first
/// admissible start at or after `ready`.
pub fn sim_earliest(
    windows: &[(u64, u64)],
    ready: u64,
    setup: u64,
    proc: u64,
    partial: u64,
) -> (u64, u64, u64, u64) {
    let mut s = ready;
    loop {
        if legal_start(windows, s) && setup_ok(windows, s, setup) {
            return (
                s - setup,
                s,
                sim_completion(windows, s, partial),
                sim_completion(windows, s, proc),
            );
        }
        s += 1;
    }
}

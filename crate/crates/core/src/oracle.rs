//! Brute-force ground truth: enumerate placements on the m x n board and
//! count the nonattacking ones by direct application of the attack rules.
//! Deliberately simple; no clever counting.

use thiserror::Error;

use crate::pieces::{BoardSpec, MoveSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration of {pieces} pieces over width {width} exceeds the cap; pass an explicit cap to override")]
    CapExceeded { pieces: u64, width: u64 },
}

/// Default cap: enumerate at most 2^40 raw tuples, i.e. q*log2(n+1) <= 40.
pub const DEFAULT_CAP_BITS: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerationCap {
    Default,
    Bits(u32),
    Unlimited,
}

fn check_cap(board: &BoardSpec, n: u64, cap: EnumerationCap) -> Result<(), OracleError> {
    let bits = match cap {
        EnumerationCap::Default => DEFAULT_CAP_BITS,
        EnumerationCap::Bits(b) => b,
        EnumerationCap::Unlimited => return Ok(()),
    };
    let q = board.total_pieces();
    let limit = if bits >= 128 {
        u128::MAX
    } else {
        1u128 << bits
    };
    // Raw tuple count (n+1)^q; overflowing u128 certainly exceeds any limit.
    let exceeded = match (n as u128 + 1).checked_pow(q.min(u32::MAX as u64) as u32) {
        Some(cost) => cost > limit,
        None => true,
    };
    if exceeded {
        return Err(OracleError::CapExceeded {
            pieces: q,
            width: n,
        });
    }
    Ok(())
}

/// Row index of every slot, row-major.
fn slot_rows(board: &BoardSpec) -> Vec<usize> {
    let mut rows = Vec::with_capacity(board.total_pieces() as usize);
    for (j, &qj) in board.occupancy().iter().enumerate() {
        for _ in 0..qj {
            rows.push(j);
        }
    }
    rows
}

fn enumerate(ms: &MoveSet, board: &BoardSpec, n: u64, multiset: bool) -> i128 {
    let rows = slot_rows(board);
    let q = rows.len();
    if q == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    let mut columns: Vec<u64> = Vec::with_capacity(q);
    let mut count = 0i128;
    // Odometer with early pruning: place slots in row-major order and check
    // each candidate against all already-placed slots.
    fn rec(
        ms: &MoveSet,
        rows: &[usize],
        n: u64,
        multiset: bool,
        columns: &mut Vec<u64>,
        count: &mut i128,
    ) {
        let slot = columns.len();
        if slot == rows.len() {
            *count += 1;
            return;
        }
        // Within a row, restrict to non-decreasing columns when counting
        // configurations rather than labelled tuples.
        let start = if multiset && slot > 0 && rows[slot - 1] == rows[slot] {
            columns[slot - 1]
        } else {
            1
        };
        'candidate: for c in start..=n {
            for (other, &xc) in columns.iter().enumerate() {
                let dr = (rows[slot] - rows[other]) as u64;
                let dc = c as i64 - xc as i64;
                if ms.attacks(dc, dr) {
                    continue 'candidate;
                }
            }
            columns.push(c);
            rec(ms, rows, n, multiset, columns, count);
            columns.pop();
        }
    }
    rec(ms, &rows, n, multiset, &mut columns, &mut count);
    count
}

/// Number of labelled tuples satisfying the nonattack rules.
pub fn brute_labelled_count(ms: &MoveSet, board: &BoardSpec, n: u64) -> Result<i128, OracleError> {
    brute_labelled_count_capped(ms, board, n, EnumerationCap::Default)
}

pub fn brute_labelled_count_capped(
    ms: &MoveSet,
    board: &BoardSpec,
    n: u64,
    cap: EnumerationCap,
) -> Result<i128, OracleError> {
    check_cap(board, n, cap)?;
    Ok(enumerate(ms, board, n, false))
}

/// Number of distinct nonattacking configurations: the multiset of occupied
/// columns per row, counted once each. Coincides with the labelled count
/// divided by the number of labellings whenever same-row pieces cannot share
/// a square.
pub fn brute_count(ms: &MoveSet, board: &BoardSpec, n: u64) -> Result<i128, OracleError> {
    brute_count_capped(ms, board, n, EnumerationCap::Default)
}

pub fn brute_count_capped(
    ms: &MoveSet,
    board: &BoardSpec,
    n: u64,
    cap: EnumerationCap,
) -> Result<i128, OracleError> {
    check_cap(board, n, cap)?;
    Ok(enumerate(ms, board, n, true))
}

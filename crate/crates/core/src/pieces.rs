//! Piece move sets, board specifications, construction of the counting gain
//! graph, the labelled-to-unlabelled conversion, and the closed-form bounds
//! (sufficient width, slope threshold, second coefficient, attack counts).

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use num_rational::Ratio;
use thiserror::Error;

use crate::chromatic::ChromaticEngine;
use crate::gaingraph::GainGraph;
use crate::genfunc::{expression_gf, GenfuncError, RationalCountSeries};
use crate::pluspoly::{DensePolynomial, PluspartExpression};

#[derive(Debug, Error)]
pub enum PieceError {
    #[error("unknown piece `{0}`")]
    UnknownPiece(String),
    #[error("count is identically zero: a piece with unbounded horizontal moves cannot have two pieces in one row")]
    IdenticallyZero,
    #[error("move set is not centrally symmetric: ({0}, {1}) lacks its negative")]
    NotSymmetric(i64, i64),
    #[error("board has no pieces")]
    EmptyBoard,
    #[error("occupancy {row} exceeds 1 while (0,0) is not a move; the second-coefficient formula does not apply")]
    StackingWithoutZeroMove { row: usize },
    #[error("labelled count {value} at n={n} is not divisible by {divisor}; same-row pieces of this move set may share a square, where the labelled-to-unlabelled division does not apply")]
    NonIntegerCount { n: u64, value: i128, divisor: i128 },
    #[error("invalid move set: {0}")]
    InvalidMoveSet(String),
    #[error("piece file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Genfunc(#[from] GenfuncError),
}

/// A piece's attack vectors: explicit moves `(dx, dy)` (columns, rows),
/// generator rays expanded to all positive multiples at graph-build time, and
/// optionally the full unbounded horizontal line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSet {
    moves: BTreeSet<(i64, i64)>,
    generators: BTreeSet<(i64, i64)>,
    horizontal_unbounded: bool,
}

impl MoveSet {
    pub fn new(
        moves: impl IntoIterator<Item = (i64, i64)>,
        generators: impl IntoIterator<Item = (i64, i64)>,
        horizontal_unbounded: bool,
    ) -> Result<MoveSet, PieceError> {
        let moves: BTreeSet<(i64, i64)> = moves.into_iter().collect();
        let generators: BTreeSet<(i64, i64)> = generators.into_iter().collect();
        for &(dx, dy) in &generators {
            if dy == 0 {
                return Err(PieceError::InvalidMoveSet(format!(
                    "generator ({dx}, 0) is horizontal; use `horizontal: unbounded` instead"
                )));
            }
        }
        if horizontal_unbounded {
            if let Some(&(dx, _)) = moves.iter().find(|&&(_, dy)| dy == 0) {
                return Err(PieceError::InvalidMoveSet(format!(
                    "explicit horizontal move ({dx}, 0) conflicts with `horizontal: unbounded`"
                )));
            }
        }
        Ok(MoveSet {
            moves,
            generators,
            horizontal_unbounded,
        })
    }

    pub fn horizontal_unbounded(&self) -> bool {
        self.horizontal_unbounded
    }

    pub fn moves(&self) -> &BTreeSet<(i64, i64)> {
        &self.moves
    }

    pub fn generators(&self) -> &BTreeSet<(i64, i64)> {
        &self.generators
    }

    /// Unions the vectors with their negatives. Idempotent.
    pub fn symmetric_closure(&self) -> MoveSet {
        let close = |set: &BTreeSet<(i64, i64)>| {
            set.iter()
                .flat_map(|&(dx, dy)| [(dx, dy), (-dx, -dy)])
                .collect()
        };
        MoveSet {
            moves: close(&self.moves),
            generators: close(&self.generators),
            horizontal_unbounded: self.horizontal_unbounded,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.find_asymmetric().is_none()
    }

    fn find_asymmetric(&self) -> Option<(i64, i64)> {
        for set in [&self.moves, &self.generators] {
            for &(dx, dy) in set {
                if !set.contains(&(-dx, -dy)) {
                    return Some((dx, dy));
                }
            }
        }
        None
    }

    /// Whether `(0, 0)` attacks, i.e. two pieces may not share a square.
    pub fn has_zero_move(&self) -> bool {
        self.horizontal_unbounded || self.moves.contains(&(0, 0))
    }

    /// Gains `mu` with `(mu, k)` in the move set, for a row offset `k >= 1`.
    /// Generator rays contribute their multiples that land on offset `k`.
    pub fn gains_for_offset(&self, k: u64) -> BTreeSet<i64> {
        assert!(k >= 1);
        let k = k as i64;
        let mut gains = BTreeSet::new();
        for &(dx, dy) in &self.moves {
            if dy == k {
                gains.insert(dx);
            } else if dy == -k {
                gains.insert(-dx);
            }
        }
        for &(dx, dy) in &self.generators {
            if dy != 0 && k % dy == 0 && k / dy >= 1 {
                gains.insert(dx.checked_mul(k / dy).expect("gain overflow"));
            }
        }
        gains
    }

    /// Horizontal gains (offset 0); `None` when the horizontal line is unbounded.
    pub fn horizontal_gains(&self) -> Option<BTreeSet<i64>> {
        if self.horizontal_unbounded {
            return None;
        }
        Some(
            self.moves
                .iter()
                .filter(|&&(_, dy)| dy == 0)
                .flat_map(|&(dx, _)| [dx, -dx])
                .collect(),
        )
    }

    /// Whether a piece displaced by `delta_cols` columns and `delta_rows >= 0`
    /// rows is attacked.
    pub fn attacks(&self, delta_cols: i64, delta_rows: u64) -> bool {
        if delta_rows == 0 {
            match self.horizontal_gains() {
                None => true,
                Some(gains) => gains.contains(&delta_cols),
            }
        } else {
            self.gains_for_offset(delta_rows).contains(&delta_cols)
        }
    }

    /// Largest `|mu|` over moves `(mu, k)` with `k_min <= k < k_sup`
    /// (0 when the range holds no move).
    fn max_abs_gain(&self, k_min: u64, k_sup: u64) -> i64 {
        let mut best = 0i64;
        if k_min == 0 {
            if let Some(gains) = self.horizontal_gains() {
                for g in gains {
                    best = best.max(g.abs());
                }
            }
        }
        for k in k_min.max(1)..k_sup {
            for g in self.gains_for_offset(k) {
                best = best.max(g.abs());
            }
        }
        best
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["rook", "bishop", "queen", "knight", "nightrider"];

/// Move set of a built-in piece. Line pieces are stored as generator rays and
/// expand lazily when a board height is known. None of the built-ins includes
/// the `(0, 0)` move.
pub fn builtin(name: &str) -> Result<MoveSet, PieceError> {
    let ms = match name {
        "rook" => MoveSet::new([], [(0, 1)], true)?,
        "bishop" => MoveSet::new([], [(1, 1), (1, -1)], false)?,
        "queen" => MoveSet::new([], [(0, 1), (1, 1), (1, -1)], true)?,
        "knight" => MoveSet::new([(1, 2), (2, 1), (-1, 2), (-2, 1)], [], false)?,
        "nightrider" => MoveSet::new([], [(1, 2), (2, 1), (-1, 2), (-2, 1)], false)?,
        other => return Err(PieceError::UnknownPiece(other.to_string())),
    };
    Ok(ms.symmetric_closure())
}

/// The slope parameter `b` for pieces whose nonhorizontal moves lie between
/// the lines `y = +-x/b` and that move along those lines; governs the exact
/// path-gain threshold `b * floor((m^2-2)/2)`.
pub fn builtin_slope(name: &str) -> Option<i64> {
    match name {
        "queen" | "bishop" => Some(1),
        "nightrider" => Some(2),
        _ => None,
    }
}

/// A named move set plus its slope parameter, as resolved by the CLI.
#[derive(Debug, Clone)]
pub struct Piece {
    pub name: String,
    pub moves: MoveSet,
    pub slope: Option<i64>,
}

impl Piece {
    pub fn builtin(name: &str) -> Result<Piece, PieceError> {
        Ok(Piece {
            name: name.to_string(),
            moves: builtin(name)?,
            slope: builtin_slope(name),
        })
    }

    pub fn from_file(path: &Path) -> Result<Piece, PieceError> {
        parse_piece(&std::fs::read_to_string(path)?)
    }
}

/// Parses the line-oriented piece definition format:
///
/// ```text
/// name: <identifier>
/// move: <dx> <dy>
/// generator: <dx> <dy>
/// symmetric: true|false
/// horizontal: none|unbounded
/// ```
pub fn parse_piece(text: &str) -> Result<Piece, PieceError> {
    let err = |line: usize, message: String| PieceError::Parse { line, message };
    let mut name: Option<String> = None;
    let mut moves = Vec::new();
    let mut generators = Vec::new();
    let mut symmetric: Option<bool> = None;
    let mut horizontal: Option<bool> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(line_no, format!("expected `key: value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let parse_vector = |value: &str| -> Result<(i64, i64), PieceError> {
            let mut parts = value.split_whitespace();
            let dx = parts
                .next()
                .and_then(|s| s.parse::<i64>().ok())
                .ok_or_else(|| err(line_no, format!("expected `<dx> <dy>`, got `{value}`")))?;
            let dy = parts
                .next()
                .and_then(|s| s.parse::<i64>().ok())
                .ok_or_else(|| err(line_no, format!("expected `<dx> <dy>`, got `{value}`")))?;
            if parts.next().is_some() {
                return Err(err(
                    line_no,
                    format!("trailing input after `<dx> <dy>` in `{value}`"),
                ));
            }
            Ok((dx, dy))
        };
        match key {
            "name" => {
                if name.is_some() {
                    return Err(err(line_no, "duplicate `name` key".to_string()));
                }
                if value.is_empty()
                    || !value
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                {
                    return Err(err(line_no, format!("invalid piece name `{value}`")));
                }
                name = Some(value.to_string());
            }
            "move" => moves.push(parse_vector(value)?),
            "generator" => generators.push(parse_vector(value)?),
            "symmetric" => {
                if symmetric.is_some() {
                    return Err(err(line_no, "duplicate `symmetric` key".to_string()));
                }
                symmetric = Some(match value {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(err(line_no, format!("expected true|false, got `{other}`")))
                    }
                });
            }
            "horizontal" => {
                if horizontal.is_some() {
                    return Err(err(line_no, "duplicate `horizontal` key".to_string()));
                }
                horizontal = Some(match value {
                    "none" => false,
                    "unbounded" => true,
                    other => {
                        return Err(err(
                            line_no,
                            format!("expected none|unbounded, got `{other}`"),
                        ))
                    }
                });
            }
            other => return Err(err(line_no, format!("unknown key `{other}`"))),
        }
    }
    let name = name.ok_or_else(|| err(0, "missing `name` key".to_string()))?;
    let ms = MoveSet::new(moves, generators, horizontal.unwrap_or(false))?;
    let ms = if symmetric.unwrap_or(true) {
        ms.symmetric_closure()
    } else if let Some((dx, dy)) = ms.find_asymmetric() {
        return Err(PieceError::NotSymmetric(dx, dy));
    } else {
        ms
    };
    Ok(Piece {
        name,
        moves: ms,
        slope: None,
    })
}

/// `m` rows with prescribed occupancies `(q_1, ..., q_m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoardSpec {
    occupancy: Vec<u64>,
}

impl BoardSpec {
    pub fn new(occupancy: Vec<u64>) -> Result<BoardSpec, PieceError> {
        if occupancy.is_empty() {
            return Err(PieceError::EmptyBoard);
        }
        Ok(BoardSpec { occupancy })
    }

    /// One piece in each of `m` rows.
    pub fn uniform(m: usize) -> BoardSpec {
        BoardSpec {
            occupancy: vec![1; m.max(1)],
        }
    }

    pub fn rows(&self) -> usize {
        self.occupancy.len()
    }

    pub fn occupancy(&self) -> &[u64] {
        &self.occupancy
    }

    pub fn total_pieces(&self) -> u64 {
        self.occupancy.iter().sum()
    }

    /// The number of labellings, `q_1! q_2! ... q_m!`.
    pub fn labellings(&self) -> i128 {
        self.occupancy.iter().map(|&q| factorial(q)).product()
    }
}

impl fmt::Display for BoardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.occupancy.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn factorial(x: u64) -> i128 {
    (1..=x as i128).product()
}

/// Builds the counting gain graph: one weight-0 vertex per piece slot, and an
/// edge of gain `mu` between slots `k` rows apart for every move `(mu, k)`.
/// Parallel duplicates are merged. An unbounded-horizontal piece with two
/// pieces in one row is signalled as an identically zero count, not built.
pub fn build_gain_graph(ms: &MoveSet, board: &BoardSpec) -> Result<GainGraph, PieceError> {
    if let Some((dx, dy)) = ms.find_asymmetric() {
        return Err(PieceError::NotSymmetric(dx, dy));
    }
    let occ = board.occupancy();
    if board.total_pieces() == 0 {
        return Err(PieceError::EmptyBoard);
    }
    if ms.horizontal_unbounded() && occ.iter().any(|&x| x > 1) {
        return Err(PieceError::IdenticallyZero);
    }
    let m = board.rows();
    let mut base = vec![0usize; m];
    for j in 1..m {
        base[j] = base[j - 1] + occ[j - 1] as usize;
    }
    let slot = |j: usize, l: u64| base[j] + l as usize;
    let q = board.total_pieces() as usize;

    let mut edges: BTreeSet<(usize, usize, i64)> = BTreeSet::new();
    if let Some(horizontal) = ms.horizontal_gains() {
        for (j, &qj) in occ.iter().enumerate() {
            for l1 in 0..qj {
                for l2 in (l1 + 1)..qj {
                    for &mu in &horizontal {
                        edges.insert((slot(j, l1), slot(j, l2), mu));
                    }
                }
            }
        }
    }
    for j1 in 0..m {
        for j2 in (j1 + 1)..m {
            let gains = ms.gains_for_offset((j2 - j1) as u64);
            if gains.is_empty() {
                continue;
            }
            for l1 in 0..occ[j1] {
                for l2 in 0..occ[j2] {
                    for &mu in &gains {
                        edges.insert((slot(j1, l1), slot(j2, l2), mu));
                    }
                }
            }
        }
    }
    Ok(GainGraph::new(vec![0; q], edges).expect("slot indices are in range"))
}

/// The labelled counting function and the labelling divisor: the unlabelled
/// count at width `n` is `evaluate(labelled, n) / divisor`.
#[derive(Debug, Clone)]
pub struct CountFormula {
    labelled: PluspartExpression,
    divisor: i128,
    pieces: usize,
}

impl CountFormula {
    /// The formula of a board whose count vanishes identically (the
    /// unbounded-horizontal stacking signal).
    pub fn zero(board: &BoardSpec) -> CountFormula {
        CountFormula {
            labelled: PluspartExpression::zero(),
            divisor: board.labellings(),
            pieces: board.total_pieces() as usize,
        }
    }

    pub fn labelled(&self) -> &PluspartExpression {
        &self.labelled
    }

    pub fn divisor(&self) -> i128 {
        self.divisor
    }

    pub fn pieces(&self) -> usize {
        self.pieces
    }

    /// Exact unlabelled count at width `n`. Errors when the division is not
    /// exact, which can happen only when same-row pieces may share a square.
    pub fn count(&self, n: u64) -> Result<i128, PieceError> {
        let value = self.labelled.evaluate(n);
        if value % self.divisor != 0 {
            return Err(PieceError::NonIntegerCount {
                n,
                value,
                divisor: self.divisor,
            });
        }
        Ok(value / self.divisor)
    }

    pub fn eventual_labelled(&self) -> DensePolynomial {
        self.labelled.eventual_polynomial()
    }

    pub fn threshold(&self) -> u64 {
        self.labelled.polynomial_threshold()
    }

    /// Unlabelled generating function over `(1-t)^(q+1)`, divisor folded in.
    pub fn gf(&self) -> Result<RationalCountSeries, PieceError> {
        Ok(expression_gf(&self.labelled, self.pieces)?.divide_exact(self.divisor)?)
    }
}

/// Runs the deletion-contraction engine on the board's gain graph.
pub fn count_formula(ms: &MoveSet, board: &BoardSpec) -> Result<CountFormula, PieceError> {
    count_formula_with(ms, board, &ChromaticEngine::new())
}

pub fn count_formula_with(
    ms: &MoveSet,
    board: &BoardSpec,
    engine: &ChromaticEngine,
) -> Result<CountFormula, PieceError> {
    let graph = build_gain_graph(ms, board)?;
    Ok(CountFormula {
        labelled: engine.integral_chromatic(&graph),
        divisor: board.labellings(),
        pieces: board.total_pieces() as usize,
    })
}

/// `a[i][j]` (for rows `i < j`) is the number of squares in row `j` attacked
/// by a piece in row `i`, width-unlimited; zero elsewhere.
pub fn attack_counts(ms: &MoveSet, board: &BoardSpec) -> Vec<Vec<u64>> {
    let m = board.rows();
    let mut a = vec![vec![0u64; m]; m];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
            *slot = ms.gains_for_offset((j - i) as u64).len() as u64;
        }
    }
    a
}

/// Magnitude of the second coefficient of the eventual labelled polynomial:
/// `c1 = sum_i [ C(q_i, 2) + q_i sum_{j > i} q_j a_ij ]`. The `C(q_i, 2)`
/// summand presumes `(0,0)` is a move, so occupancies above 1 are rejected
/// for move sets without it.
pub fn second_coefficient(ms: &MoveSet, board: &BoardSpec) -> Result<i128, PieceError> {
    let occ = board.occupancy();
    if !ms.has_zero_move() {
        if let Some(row) = occ.iter().position(|&x| x > 1) {
            return Err(PieceError::StackingWithoutZeroMove { row });
        }
    }
    let a = attack_counts(ms, board);
    let mut c1 = 0i128;
    for i in 0..occ.len() {
        let qi = occ[i] as i128;
        c1 += qi * (qi - 1) / 2;
        for j in (i + 1)..occ.len() {
            c1 += qi * occ[j] as i128 * a[i][j] as i128;
        }
    }
    Ok(c1)
}

/// The constant `K` with nonattack probability asymptotic to `1 - K/n`:
/// `sum_{i<j} q_i q_j a_ij` (equal to `c1` when every row has at most one piece).
pub fn asymptotic_probability(ms: &MoveSet, board: &BoardSpec) -> i128 {
    let occ = board.occupancy();
    let a = attack_counts(ms, board);
    let mut k = 0i128;
    for i in 0..occ.len() {
        for j in (i + 1)..occ.len() {
            k += occ[i] as i128 * occ[j] as i128 * a[i][j] as i128;
        }
    }
    k
}

/// `(q-1) * max{|mu| : (mu, k) in A_P, k_min <= k < m}` where `k_min` is 1
/// when horizontal moves are unbounded or every row has at most one piece,
/// else 0.
pub fn sufficient_width_bound(ms: &MoveSet, board: &BoardSpec) -> i64 {
    let q = board.total_pieces();
    if q <= 1 {
        return 0;
    }
    let k_min = if ms.horizontal_unbounded() || board.occupancy().iter().all(|&x| x <= 1) {
        1
    } else {
        0
    };
    let max_mu = ms.max_abs_gain(k_min, board.rows() as u64);
    (q as i64 - 1).checked_mul(max_mu).expect("bound overflow")
}

/// The exact path-gain threshold `b * floor((m^2 - 2)/2)` for slope-`b` line
/// pieces with one piece per row, clamped at 0.
pub fn slope_threshold(b: i64, m: i64) -> i64 {
    (b * (m * m - 2).div_euclid(2)).max(0)
}

/// The bound `alpha^{-1} * floor((m^2 - 2)/2)` as an exact rational, clamped at 0.
pub fn improved_bound(alpha_inverse: Ratio<i64>, m: i64) -> Ratio<i64> {
    let bound = alpha_inverse * Ratio::from_integer((m * m - 2).div_euclid(2));
    bound.max(Ratio::from_integer(0))
}

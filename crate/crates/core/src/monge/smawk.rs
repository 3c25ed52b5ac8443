//! Row/column minima of totally monotone matrices.

/// Column minima of a totally monotone `rows x cols` matrix given by an
/// accessor. Returns `(row, value)` per column; among equal values the
/// smallest row wins.
///
/// Total monotonicity is the caller's obligation. A Monge matrix (every
/// 2x2 minor satisfies `a[i][j] + a[i'][j'] <= a[i][j'] + a[i'][j]`)
/// qualifies.
pub fn smawk_column_minima<T, F>(rows: usize, cols: usize, matrix: F) -> Vec<(usize, T)>
where
    T: Ord,
    F: Fn(usize, usize) -> T,
{
    let mut ws = Smawk::default();
    let arg = ws.column_argmin(rows, cols, &matrix);
    arg.iter().enumerate().map(|(c, &r)| (r, matrix(r, c))).collect()
}

/// Row minima via the transpose; the leftmost column wins ties.
pub fn smawk_row_minima<T, F>(rows: usize, cols: usize, matrix: F) -> Vec<(usize, T)>
where
    T: Ord,
    F: Fn(usize, usize) -> T,
{
    smawk_column_minima(cols, rows, |i, j| matrix(j, i))
}

/// Reusable scratch space, so repeated products do not allocate.
#[derive(Default, Debug)]
pub struct Smawk {
    arena: Vec<usize>,
    arg: Vec<usize>,
}

impl Smawk {
    /// Row index of every column minimum.
    pub fn column_argmin<T, F>(&mut self, rows: usize, cols: usize, matrix: F) -> &[usize]
    where
        T: Ord,
        F: Fn(usize, usize) -> T,
    {
        self.arg.clear();
        self.arg.resize(cols, usize::MAX);
        if cols == 0 {
            return &self.arg;
        }
        assert!(rows > 0, "column minima of a matrix without rows");
        self.arena.clear();
        self.arena.extend(0..rows);
        self.arena.extend(0..cols);
        inner(&matrix, &mut self.arena, 0, rows, rows, cols, &mut self.arg);
        &self.arg
    }
}

/// Rows live at `arena[rows_at..rows_at + nrows]`, columns likewise; each
/// level appends its own lists and truncates them before returning.
fn inner<T, F>(
    matrix: &F,
    arena: &mut Vec<usize>,
    rows_at: usize,
    nrows: usize,
    cols_at: usize,
    ncols: usize,
    arg: &mut [usize],
) where
    T: Ord,
    F: Fn(usize, usize) -> T,
{
    if ncols == 0 {
        return;
    }

    // REDUCE: keep at most one candidate row per column.
    let stack_at = arena.len();
    for i in 0..nrows {
        let r = arena[rows_at + i];
        while arena.len() > stack_at {
            let depth = arena.len() - stack_at;
            let top = arena[arena.len() - 1];
            let c = arena[cols_at + depth - 1];
            if matrix(top, c) > matrix(r, c) {
                arena.pop();
            } else {
                break;
            }
        }
        if arena.len() - stack_at != ncols {
            arena.push(r);
        }
    }
    let nstack = arena.len() - stack_at;

    let odd_at = arena.len();
    for j in (1..ncols).step_by(2) {
        let c = arena[cols_at + j];
        arena.push(c);
    }
    let nodd = arena.len() - odd_at;
    inner(matrix, arena, stack_at, nstack, odd_at, nodd, arg);

    // INTERPOLATE: each even column's minimum lies between its neighbours'.
    let mut r = 0;
    for j in (0..ncols).step_by(2) {
        let col = arena[cols_at + j];
        let last_row = if j + 1 == ncols { arena[stack_at + nstack - 1] } else { arg[arena[cols_at + j + 1]] };
        let mut row = arena[stack_at + r];
        let mut best_row = row;
        let mut best = matrix(row, col);
        while row != last_row {
            r += 1;
            row = arena[stack_at + r];
            let v = matrix(row, col);
            if v < best {
                best = v;
                best_row = row;
            }
        }
        arg[col] = best_row;
    }
    arena.truncate(stack_at);
}

/// Reference scan, `O(rows * cols)`.
pub fn naive_column_minima<T, F>(rows: usize, cols: usize, matrix: F) -> Vec<(usize, T)>
where
    T: Ord,
    F: Fn(usize, usize) -> T,
{
    (0..cols)
        .map(|j| {
            let mut best = (matrix(0, j), 0);
            for i in 1..rows {
                let cand = (matrix(i, j), i);
                if cand < best {
                    best = cand;
                }
            }
            (best.1, best.0)
        })
        .collect()
}

/// Counts violated adjacent 2x2 minors. Checking adjacent minors suffices
/// for the Monge property.
pub fn monge_violations<T, F>(rows: usize, cols: usize, matrix: F, slack: impl Fn(&T, &T) -> bool) -> usize
where
    F: Fn(usize, usize) -> T,
    T: std::ops::Add<Output = T> + Clone,
{
    let mut bad = 0;
    for i in 0..rows.saturating_sub(1) {
        for j in 0..cols.saturating_sub(1) {
            let lhs = matrix(i, j) + matrix(i + 1, j + 1);
            let rhs = matrix(i, j + 1) + matrix(i + 1, j);
            if !slack(&lhs, &rhs) {
                bad += 1;
            }
        }
    }
    bad
}

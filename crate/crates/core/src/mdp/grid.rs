use std::sync::Arc;

use super::{Action, Mdp, Metric, StateId};

/// Mapping between grid cells and the states of a (possibly masked) grid MDP.
#[derive(Clone, Debug)]
pub struct GridLayout {
    pub rows: usize,
    pub cols: usize,
    pub cell_size: f64,
    /// `(row, col)` of every state.
    pub cells: Vec<(usize, usize)>,
    /// State id of every cell in row-major order, `None` for masked cells.
    pub state_of_cell: Vec<Option<StateId>>,
}

impl GridLayout {
    pub fn state_at(&self, row: usize, col: usize) -> Option<StateId> {
        if row < self.rows && col < self.cols {
            self.state_of_cell[row * self.cols + col]
        } else {
            None
        }
    }
}

/// 4-connected grid world with a `stay` self-loop on every cell.
///
/// State ids are row-major. Moves that would leave the grid are omitted.
/// Actions are `0 = up`, `1 = down`, `2 = left`, `3 = right`, `4 = stay`.
pub fn grid_mdp(rows: usize, cols: usize, cell_size: f64) -> Mdp {
    let (mdp, _) = masked_grid_mdp(rows, cols, cell_size, |_, _| true);
    mdp
}

/// Grid world over the cells for which `valid(row, col)` holds. Invalid
/// cells are dropped from the state space and moves into them are omitted.
///
/// # Panics
///
/// Panics if no cell is valid or `cell_size` is not positive.
pub fn masked_grid_mdp(
    rows: usize,
    cols: usize,
    cell_size: f64,
    valid: impl Fn(usize, usize) -> bool,
) -> (Mdp, GridLayout) {
    assert!(cell_size > 0.0, "cell size must be positive");
    let mut state_of_cell = vec![None; rows * cols];
    let mut cells = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if valid(r, c) {
                state_of_cell[r * cols + c] = Some(StateId(cells.len()));
                cells.push((r, c));
            }
        }
    }
    assert!(!cells.is_empty(), "grid has no valid cells");
    let layout = GridLayout { rows, cols, cell_size, cells, state_of_cell };

    let transitions = layout
        .cells
        .iter()
        .enumerate()
        .map(|(s, &(r, c))| {
            let mut actions = Vec::with_capacity(5);
            let moves = [
                (Action::UP, r.checked_sub(1).map(|r| (r, c))),
                (Action::DOWN, Some((r + 1, c))),
                (Action::LEFT, c.checked_sub(1).map(|c| (r, c))),
                (Action::RIGHT, Some((r, c + 1))),
            ];
            for (a, target) in moves {
                if let Some(next) = target.and_then(|(r, c)| layout.state_at(r, c)) {
                    actions.push((a, next));
                }
            }
            actions.push((Action::STAY, StateId(s)));
            actions
        })
        .collect();

    let metric = Metric::Grid { coords: Arc::from(layout.cells.clone()), cell_size };
    let mdp = Mdp::new(transitions, metric).expect("grid construction is well-formed");
    (mdp, layout)
}

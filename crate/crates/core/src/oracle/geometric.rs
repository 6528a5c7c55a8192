use super::{Meter, OracleOutcome, SearchBudget, Verdict};
use crate::model::Task;

/// Lower-left corner of a rectangle, 0-based, `x` along the width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectPlacement {
    pub task: Task,
    pub x: u64,
    pub y: u64,
}

/// Largest grid the geometric search will allocate.
const MAX_CELLS: u64 = 1 << 24;

/// Decides whether the tasks, as axis-parallel rectangles without rotation,
/// can be packed into a `width x height` box at integer coordinates.
///
/// Cells are scanned row by row from the bottom. The first undecided cell is
/// either the lower-left corner of some rectangle or wasted; rectangles cover
/// every earlier cell already, so no packing is missed. Total waste is bounded
/// by the free area, which makes near-perfect packings fast to refute.
pub fn geometric_feasible(
    tasks: &[Task],
    width: u64,
    height: u64,
    budget: SearchBudget,
) -> OracleOutcome<Verdict<Vec<RectPlacement>>> {
    let mut meter = Meter::new(budget);
    let area: u128 = tasks.iter().map(Task::area).sum();
    let box_area = width as u128 * height as u128;
    meter.tick();
    if area > box_area || tasks.iter().any(|t| t.width > width || t.height > height) {
        return OracleOutcome::Proven {
            value: Verdict::Infeasible,
            nodes: meter.nodes(),
        };
    }
    if width * height > MAX_CELLS {
        return OracleOutcome::Unknown { nodes: 0 };
    }

    let mut kinds: Vec<(u64, u64, Vec<Task>)> = Vec::new();
    let mut sorted = tasks.to_vec();
    sorted.sort_by(|a, b| {
        b.area()
            .cmp(&a.area())
            .then(b.width.cmp(&a.width))
            .then(b.height.cmp(&a.height))
            .then(a.id.cmp(&b.id))
    });
    for t in sorted {
        match kinds.last_mut() {
            Some((w, h, list)) if *w == t.width && *h == t.height => list.push(t),
            _ => kinds.push((t.width, t.height, vec![t])),
        }
    }

    let mut search = Grid {
        width: width as usize,
        height: height as usize,
        cells: vec![false; (width * height) as usize],
        left: kinds.iter().map(|k| k.2.len()).collect(),
        kinds,
        waste_left: (box_area - area) as u64,
        to_place: tasks.len(),
        placed: Vec::new(),
        meter: &mut meter,
    };
    let found = search.dfs(0);
    let placed = std::mem::take(&mut search.placed);
    let kinds = std::mem::take(&mut search.kinds);
    let exhausted = meter.exhausted();
    let nodes = meter.nodes();
    if found {
        let mut used = vec![0usize; kinds.len()];
        let witness = placed
            .into_iter()
            .map(|(k, x, y)| {
                let task = kinds[k].2[used[k]];
                used[k] += 1;
                RectPlacement {
                    task,
                    x: x as u64,
                    y: y as u64,
                }
            })
            .collect();
        OracleOutcome::Proven {
            value: Verdict::Feasible(witness),
            nodes,
        }
    } else if exhausted {
        OracleOutcome::Unknown { nodes }
    } else {
        OracleOutcome::Proven {
            value: Verdict::Infeasible,
            nodes,
        }
    }
}

/// True if no two placements overlap and all lie inside the box.
pub fn placements_are_disjoint(placements: &[RectPlacement], width: u64, height: u64) -> bool {
    let inside = placements
        .iter()
        .all(|p| p.x + p.task.width <= width && p.y + p.task.height <= height);
    let disjoint = placements.iter().enumerate().all(|(i, a)| {
        placements[i + 1..].iter().all(|b| {
            a.x + a.task.width <= b.x
                || b.x + b.task.width <= a.x
                || a.y + a.task.height <= b.y
                || b.y + b.task.height <= a.y
        })
    });
    inside && disjoint
}

struct Grid<'m> {
    width: usize,
    height: usize,
    /// Row-major, row 0 at the bottom; true once covered or wasted.
    cells: Vec<bool>,
    kinds: Vec<(u64, u64, Vec<Task>)>,
    left: Vec<usize>,
    waste_left: u64,
    to_place: usize,
    placed: Vec<(usize, usize, usize)>,
    meter: &'m mut Meter,
}

impl Grid<'_> {
    fn dfs(&mut self, mut cursor: usize) -> bool {
        if self.to_place == 0 {
            return true;
        }
        while cursor < self.cells.len() && self.cells[cursor] {
            cursor += 1;
        }
        if cursor == self.cells.len() || !self.meter.tick() {
            return false;
        }
        let (x, y) = (cursor % self.width, cursor / self.width);
        let gap = self.cells[cursor..cursor + (self.width - x)]
            .iter()
            .take_while(|&&c| !c)
            .count();
        let narrowest = (0..self.kinds.len())
            .filter(|&k| self.left[k] > 0)
            .map(|k| self.kinds[k].0 as usize)
            .min()
            .unwrap_or(usize::MAX);

        if narrowest > gap {
            // Nothing can start anywhere in this gap.
            if (gap as u64) > self.waste_left {
                return false;
            }
            self.mark(cursor, gap, 1, true);
            self.waste_left -= gap as u64;
            let found = self.dfs(cursor + gap);
            self.waste_left += gap as u64;
            self.mark(cursor, gap, 1, false);
            return found;
        }

        for k in 0..self.kinds.len() {
            if self.left[k] == 0 {
                continue;
            }
            let (w, h) = (self.kinds[k].0 as usize, self.kinds[k].1 as usize);
            if w > gap || y + h > self.height || !self.is_free(cursor, w, h) {
                continue;
            }
            self.mark(cursor, w, h, true);
            self.left[k] -= 1;
            self.to_place -= 1;
            self.placed.push((k, x, y));
            if self.dfs(cursor + w) {
                return true;
            }
            self.placed.pop();
            self.to_place += 1;
            self.left[k] += 1;
            self.mark(cursor, w, h, false);
            if self.meter.exhausted() {
                return false;
            }
        }

        if self.waste_left == 0 {
            return false;
        }
        self.cells[cursor] = true;
        self.waste_left -= 1;
        let found = self.dfs(cursor + 1);
        self.waste_left += 1;
        self.cells[cursor] = false;
        found
    }

    fn is_free(&self, corner: usize, w: usize, h: usize) -> bool {
        (0..h).all(|dy| {
            let row = corner + dy * self.width;
            self.cells[row..row + w].iter().all(|&c| !c)
        })
    }

    fn mark(&mut self, corner: usize, w: usize, h: usize, value: bool) {
        for dy in 0..h {
            let row = corner + dy * self.width;
            for c in &mut self.cells[row..row + w] {
                *c = value;
            }
        }
    }
}

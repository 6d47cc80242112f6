use std::collections::HashMap;

use crate::trajectory::Position;

/// Uniform spatial hash. Each cell is a square of side `cell`; a radius
/// query scans the block of cells overlapping the query disk.
#[derive(Debug, Clone)]
pub(crate) struct Grid {
    cell: f64,
    cells: HashMap<(i64, i64), Vec<u32>>,
}

impl Grid {
    pub(crate) fn new(cell: f64) -> Self {
        Grid {
            cell,
            cells: HashMap::new(),
        }
    }

    pub(crate) fn clear(&mut self) {
        self.cells.clear();
    }

    #[inline]
    fn key(&self, p: &Position) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    pub(crate) fn insert(&mut self, p: &Position, id: u32) {
        let key = self.key(p);
        self.cells.entry(key).or_default().push(id);
    }

    /// Calls `f` for every stored id whose cell may hold points within
    /// `radius` of `p`. The caller filters by exact distance.
    pub(crate) fn for_each_candidate(&self, p: &Position, radius: f64, mut f: impl FnMut(u32)) {
        let (cx, cy) = self.key(p);
        let reach = ((radius / self.cell).ceil() as i64).max(1);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    ids.iter().copied().for_each(&mut f);
                }
            }
        }
    }
}

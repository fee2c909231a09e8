//! Cellular automaton benchmark on a square periodic lattice.
//!
//! The rule: each cell's neighborhood sum is the cell itself plus its
//! four orthogonal neighbors; a cell is alive next step iff that sum is
//! in {2, 4, 5}. Grids carry a one-cell ghost frame holding the periodic
//! wrap of the opposite interior edges, refreshed before every step.
//!
//! Two execution modes produce bit-identical results: a serial reference,
//! and a geometrically decomposed parallel mode that splits the grid into
//! a `rows x cols` process grid of subgrids, one worker thread each, with
//! halo rows/columns exchanged as messages and a barrier-synchronized
//! live-count reduction per step. Both modes initialize from the same
//! globally generated random grid, so equal configurations give equal
//! histories and final grids for every legal decomposition.
//!
//! A run terminates after `max_steps` steps, or early once the live count
//! drops below 0.75x or rises above 1.33x of the initial population
//! (strict inequalities, checked after each step).

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Barrier, mpsc};
use std::time::Instant;

use thiserror::Error;

use crate::rng::SplitMix64;

#[derive(Debug, Error, PartialEq)]
pub enum LifeError {
    #[error("grid size must be positive")]
    ZeroSize,
    #[error("density must lie in [0, 1], got {0}")]
    DensityOutOfRange(f64),
    #[error("process grid {0}x{1} must be non-empty")]
    EmptyDims(usize, usize),
    #[error("grid size {size} is not divisible by process grid {rows}x{cols}")]
    IndivisibleDims { size: usize, rows: usize, cols: usize },
    #[error("subgrid count {got} does not match process grid {rows}x{cols}")]
    SubgridCount { got: usize, rows: usize, cols: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LifeMode {
    Serial,
    Parallel,
}

impl std::str::FromStr for LifeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "serial" => Ok(LifeMode::Serial),
            "parallel" => Ok(LifeMode::Parallel),
            other => Err(format!("unknown mode '{other}' (expected serial or parallel)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LifeConfig {
    /// Interior side length L; the lattice is L x L.
    pub size: usize,
    /// Initial live density rho in [0, 1].
    pub density: f64,
    pub seed: u64,
    pub max_steps: u64,
    /// Progress is printed every this many steps (when not quiet).
    pub print_every: u64,
    /// Process grid (rows, cols) for parallel mode; both must divide L.
    pub dims: (usize, usize),
}

impl LifeConfig {
    pub fn validate(&self, mode: LifeMode) -> Result<(), LifeError> {
        if self.size == 0 {
            return Err(LifeError::ZeroSize);
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(LifeError::DensityOutOfRange(self.density));
        }
        if mode == LifeMode::Parallel {
            let (rows, cols) = self.dims;
            if rows == 0 || cols == 0 {
                return Err(LifeError::EmptyDims(rows, cols));
            }
            if !self.size.is_multiple_of(rows) || !self.size.is_multiple_of(cols) {
                return Err(LifeError::IndivisibleDims { size: self.size, rows, cols });
            }
        }
        Ok(())
    }
}

/// A cell lattice with a one-cell ghost frame. Interior cells live at
/// coordinates `1..=rows`, `1..=cols`; the frame is row/column 0 and
/// `rows + 1` / `cols + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LifeGrid {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl LifeGrid {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; (rows + 2) * (cols + 2)] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn stride(&self) -> usize {
        self.cols + 2
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.stride() + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        let idx = r * self.stride() + c;
        self.data[idx] = value;
    }

    /// Interior cells, row-major, without the ghost frame.
    pub fn interior(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for r in 1..=self.rows {
            let base = r * self.stride();
            out.extend_from_slice(&self.data[base + 1..base + 1 + self.cols]);
        }
        out
    }

    pub fn live_count(&self) -> u64 {
        let mut live = 0u64;
        for r in 1..=self.rows {
            let base = r * self.stride();
            live += self.data[base + 1..base + 1 + self.cols]
                .iter()
                .map(|&c| c as u64)
                .sum::<u64>();
        }
        live
    }

    /// Refreshes the ghost frame from this grid's own interior under
    /// periodic boundary conditions (the single-domain case).
    pub fn update_ghosts(&mut self) {
        let (rows, cols) = (self.rows, self.cols);
        for c in 1..=cols {
            let top = self.get(1, c);
            let bottom = self.get(rows, c);
            self.set(rows + 1, c, top);
            self.set(0, c, bottom);
        }
        for r in 0..rows + 2 {
            let left = self.get(r, 1);
            let right = self.get(r, cols);
            self.set(r, cols + 1, left);
            self.set(r, 0, right);
        }
    }

    /// One synchronous update into `next` (which must have equal shape):
    /// neighborhood sum = cell + 4 orthogonal neighbors, alive next step
    /// iff the sum is 2, 4, or 5. Returns the new interior live count.
    pub fn step_into(&self, next: &mut LifeGrid) -> u64 {
        assert_eq!((self.rows, self.cols), (next.rows, next.cols));
        let stride = self.stride();
        let mut live = 0u64;
        for r in 1..=self.rows {
            let up = (r - 1) * stride;
            let mid = r * stride;
            let down = (r + 1) * stride;
            for c in 1..=self.cols {
                let sum = self.data[mid + c]
                    + self.data[up + c]
                    + self.data[down + c]
                    + self.data[mid + c - 1]
                    + self.data[mid + c + 1];
                let alive = u8::from(sum == 2 || sum == 4 || sum == 5);
                next.data[mid + c] = alive;
                live += alive as u64;
            }
        }
        live
    }

    fn edge(&self, side: Side) -> Vec<u8> {
        match side {
            Side::North => (1..=self.cols).map(|c| self.get(1, c)).collect(),
            Side::South => (1..=self.cols).map(|c| self.get(self.rows, c)).collect(),
            Side::West => (1..=self.rows).map(|r| self.get(r, 1)).collect(),
            Side::East => (1..=self.rows).map(|r| self.get(r, self.cols)).collect(),
        }
    }

    fn set_ghost(&mut self, side: Side, cells: &[u8]) {
        match side {
            Side::North => {
                assert_eq!(cells.len(), self.cols);
                for (c, &v) in (1..=self.cols).zip(cells) {
                    self.set(0, c, v);
                }
            }
            Side::South => {
                assert_eq!(cells.len(), self.cols);
                for (c, &v) in (1..=self.cols).zip(cells) {
                    self.set(self.rows + 1, c, v);
                }
            }
            Side::West => {
                assert_eq!(cells.len(), self.rows);
                for (r, &v) in (1..=self.rows).zip(cells) {
                    self.set(r, 0, v);
                }
            }
            Side::East => {
                assert_eq!(cells.len(), self.rows);
                for (r, &v) in (1..=self.rows).zip(cells) {
                    self.set(r, self.cols + 1, v);
                }
            }
        }
    }
}

/// Which ghost edge a halo message fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    North,
    South,
    West,
    East,
}

const SIDES: [Side; 4] = [Side::North, Side::South, Side::West, Side::East];

fn threshold(density: f64) -> u128 {
    (density * (2f64).powi(64)) as u128
}

/// Generates the initial L x L grid: scanning the interior in row-major
/// order, each cell is set live iff the next SplitMix64 draw is below
/// `density * 2^64`. Both execution modes start from this same grid.
pub fn init_grid(cfg: &LifeConfig) -> Result<LifeGrid, LifeError> {
    cfg.validate(LifeMode::Serial)?;
    let mut rng = SplitMix64::new(cfg.seed);
    let thr = threshold(cfg.density);
    let mut grid = LifeGrid::new(cfg.size, cfg.size);
    for r in 1..=cfg.size {
        for c in 1..=cfg.size {
            let live = ((rng.next_u64() as u128) < thr) as u8;
            grid.set(r, c, live);
        }
    }
    Ok(grid)
}

/// Splits a global grid into `rows x cols` subgrids, row-major.
pub fn split_grid(global: &LifeGrid, dims: (usize, usize)) -> Result<Vec<LifeGrid>, LifeError> {
    let (p_rows, p_cols) = dims;
    if p_rows == 0 || p_cols == 0 {
        return Err(LifeError::EmptyDims(p_rows, p_cols));
    }
    if !global.rows.is_multiple_of(p_rows) || !global.cols.is_multiple_of(p_cols) {
        return Err(LifeError::IndivisibleDims { size: global.rows, rows: p_rows, cols: p_cols });
    }
    let (sub_rows, sub_cols) = (global.rows / p_rows, global.cols / p_cols);
    let mut subgrids = Vec::with_capacity(p_rows * p_cols);
    for pi in 0..p_rows {
        for pj in 0..p_cols {
            let mut sub = LifeGrid::new(sub_rows, sub_cols);
            for r in 1..=sub_rows {
                for c in 1..=sub_cols {
                    sub.set(r, c, global.get(pi * sub_rows + r, pj * sub_cols + c));
                }
            }
            subgrids.push(sub);
        }
    }
    Ok(subgrids)
}

/// Reassembles subgrids (row-major in the process grid) into one global
/// grid; ghost frames are ignored.
pub fn assemble_grid(subgrids: &[LifeGrid], dims: (usize, usize)) -> Result<LifeGrid, LifeError> {
    let (p_rows, p_cols) = dims;
    if subgrids.len() != p_rows * p_cols {
        return Err(LifeError::SubgridCount { got: subgrids.len(), rows: p_rows, cols: p_cols });
    }
    let (sub_rows, sub_cols) = (subgrids[0].rows, subgrids[0].cols);
    let mut global = LifeGrid::new(sub_rows * p_rows, sub_cols * p_cols);
    for pi in 0..p_rows {
        for pj in 0..p_cols {
            let sub = &subgrids[pi * p_cols + pj];
            for r in 1..=sub_rows {
                for c in 1..=sub_cols {
                    global.set(pi * sub_rows + r, pj * sub_cols + c, sub.get(r, c));
                }
            }
        }
    }
    Ok(global)
}

/// Neighbor rank of `(pi, pj)` on `side` in a periodic `dims` grid.
fn neighbor(pi: usize, pj: usize, side: Side, dims: (usize, usize)) -> usize {
    let (p_rows, p_cols) = dims;
    let (ni, nj) = match side {
        Side::North => ((pi + p_rows - 1) % p_rows, pj),
        Side::South => ((pi + 1) % p_rows, pj),
        Side::West => (pi, (pj + p_cols - 1) % p_cols),
        Side::East => (pi, (pj + 1) % p_cols),
    };
    ni * p_cols + nj
}

/// The edge a neighbor must send to fill my ghost on `side`: my north
/// ghost row is the north neighbor's south interior row, and so on.
fn matching_edge(side: Side) -> Side {
    match side {
        Side::North => Side::South,
        Side::South => Side::North,
        Side::West => Side::East,
        Side::East => Side::West,
    }
}

/// Refreshes every subgrid's ghost frame from its neighbors under the
/// periodic process grid: the single-threaded equivalent of the
/// message-based halo exchange the parallel runner performs.
pub fn exchange_halos(subgrids: &mut [LifeGrid], dims: (usize, usize)) -> Result<(), LifeError> {
    let (p_rows, p_cols) = dims;
    if subgrids.len() != p_rows * p_cols {
        return Err(LifeError::SubgridCount { got: subgrids.len(), rows: p_rows, cols: p_cols });
    }
    for pi in 0..p_rows {
        for pj in 0..p_cols {
            let me = pi * p_cols + pj;
            for side in SIDES {
                let edge = subgrids[neighbor(pi, pj, side, dims)].edge(matching_edge(side));
                subgrids[me].set_ghost(side, &edge);
            }
        }
    }
    Ok(())
}

/// Results of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct LifeRun {
    /// Interior of the final grid, row-major, length L*L.
    pub final_cells: Vec<u8>,
    /// Live count after each executed step.
    pub history: Vec<u64>,
    pub initial_live: u64,
    pub steps_executed: u64,
    /// Wall-clock seconds spent in the step loop (setup excluded).
    pub loop_seconds: f64,
    pub avg_step_seconds: f64,
}

fn terminated(live: u64, initial: u64) -> bool {
    let live = live as f64;
    let initial = initial as f64;
    live < 0.75 * initial || live > 1.33 * initial
}

pub fn run_life(cfg: &LifeConfig, mode: LifeMode, quiet: bool) -> Result<LifeRun, LifeError> {
    cfg.validate(mode)?;
    match mode {
        LifeMode::Serial => run_serial(cfg, quiet),
        LifeMode::Parallel => run_parallel(cfg, quiet),
    }
}

fn run_serial(cfg: &LifeConfig, quiet: bool) -> Result<LifeRun, LifeError> {
    let mut grid = init_grid(cfg)?;
    let mut next = LifeGrid::new(cfg.size, cfg.size);
    let initial_live = grid.live_count();
    let mut history = Vec::new();

    let started = Instant::now();
    for step in 1..=cfg.max_steps {
        grid.update_ghosts();
        let live = grid.step_into(&mut next);
        std::mem::swap(&mut grid, &mut next);
        history.push(live);
        if !quiet && cfg.print_every > 0 && step % cfg.print_every == 0 {
            println!("step={step} live={live}");
        }
        if terminated(live, initial_live) {
            if !quiet {
                println!("terminated step={step} live={live}");
            }
            break;
        }
    }
    let loop_seconds = started.elapsed().as_secs_f64();

    let steps_executed = history.len() as u64;
    Ok(LifeRun {
        final_cells: grid.interior(),
        history,
        initial_live,
        steps_executed,
        loop_seconds,
        avg_step_seconds: if steps_executed > 0 { loop_seconds / steps_executed as f64 } else { 0.0 },
    })
}

fn run_parallel(cfg: &LifeConfig, quiet: bool) -> Result<LifeRun, LifeError> {
    let (p_rows, p_cols) = cfg.dims;
    let workers = p_rows * p_cols;

    // Initialization mirrors the serial path exactly: generate the full
    // grid once, then carve out per-worker subgrids.
    let global = init_grid(cfg)?;
    let initial_live = global.live_count();
    let mut subgrids = split_grid(&global, cfg.dims)?;
    drop(global);

    // One channel per (worker, ghost side). A worker sends its matching
    // interior edge into the neighbor's port for that side; periodic
    // wrap means a worker may be its own neighbor, which these
    // direction-tagged ports handle naturally.
    let mut halo_txs: Vec<Vec<mpsc::Sender<Vec<u8>>>> = Vec::with_capacity(workers);
    let mut halo_rxs: Vec<Vec<Option<mpsc::Receiver<Vec<u8>>>>> = Vec::with_capacity(workers);
    for _ in 0..workers {
        let mut txs = Vec::with_capacity(4);
        let mut rxs = Vec::with_capacity(4);
        for _ in 0..4 {
            let (tx, rx) = mpsc::channel();
            txs.push(tx);
            rxs.push(Some(rx));
        }
        halo_txs.push(txs);
        halo_rxs.push(rxs);
    }

    let live_slots: Vec<AtomicU64> = (0..workers).map(|_| AtomicU64::new(0)).collect();
    let start_barrier = Barrier::new(workers + 1);
    let end_barrier = Barrier::new(workers + 1);
    let step_barrier = Barrier::new(workers);

    let mut loop_seconds = 0.0f64;
    let mut final_subgrids = Vec::with_capacity(workers);
    let mut history = Vec::new();

    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for (rank, mut grid) in subgrids.drain(..).enumerate() {
            let (pi, pj) = (rank / p_cols, rank % p_cols);
            // Sender handles into each neighbor's port facing me: my edge
            // on side S fills that neighbor's opposite-side ghost.
            let sends: Vec<(Side, mpsc::Sender<Vec<u8>>)> = SIDES
                .iter()
                .map(|&side| {
                    let n = neighbor(pi, pj, side, cfg.dims);
                    (side, halo_txs[n][matching_edge(side) as usize].clone())
                })
                .collect();
            let recvs: Vec<mpsc::Receiver<Vec<u8>>> = halo_rxs[rank]
                .iter_mut()
                .map(|slot| slot.take().expect("each port is owned by one worker"))
                .collect();
            let live_slots = &live_slots;
            let start_barrier = &start_barrier;
            let end_barrier = &end_barrier;
            let step_barrier = &step_barrier;
            let cfg = cfg.clone();
            handles.push(scope.spawn(move || {
                let mut next = LifeGrid::new(grid.rows(), grid.cols());
                let mut history = Vec::new();
                start_barrier.wait();
                for step in 1..=cfg.max_steps {
                    // Halo exchange: ship my edges, then fill my ghosts.
                    for (side, tx) in &sends {
                        // A send can only fail if a peer panicked.
                        tx.send(grid.edge(*side)).expect("peer worker alive");
                    }
                    for (side_idx, rx) in recvs.iter().enumerate() {
                        let cells = rx.recv().expect("peer worker alive");
                        grid.set_ghost(SIDES[side_idx], &cells);
                    }
                    let local_live = grid.step_into(&mut next);
                    std::mem::swap(&mut grid, &mut next);

                    // Global live-count reduction, summed in rank order
                    // so every worker sees the identical total.
                    live_slots[rank].store(local_live, Ordering::SeqCst);
                    step_barrier.wait();
                    let live: u64 =
                        live_slots.iter().map(|slot| slot.load(Ordering::SeqCst)).sum();
                    step_barrier.wait();

                    history.push(live);
                    if rank == 0 && !quiet && cfg.print_every > 0 && step % cfg.print_every == 0 {
                        println!("step={step} live={live}");
                    }
                    if terminated(live, initial_live) {
                        if rank == 0 && !quiet {
                            println!("terminated step={step} live={live}");
                        }
                        break;
                    }
                }
                end_barrier.wait();
                (grid, history)
            }));
        }

        start_barrier.wait();
        let started = Instant::now();
        end_barrier.wait();
        loop_seconds = started.elapsed().as_secs_f64();

        for (rank, handle) in handles.into_iter().enumerate() {
            let (grid, worker_history) = handle.join().expect("worker panicked");
            if rank == 0 {
                history = worker_history;
            }
            final_subgrids.push(grid);
        }
    });

    let final_grid = assemble_grid(&final_subgrids, cfg.dims)?;

    let steps_executed = history.len() as u64;
    Ok(LifeRun {
        final_cells: final_grid.interior(),
        history,
        initial_live,
        steps_executed,
        loop_seconds,
        avg_step_seconds: if steps_executed > 0 { loop_seconds / steps_executed as f64 } else { 0.0 },
    })
}

/// Formats the final interior grid for the output file: a `<L> <L>`
/// header line, then one row of space-separated 0/1 cells per line.
pub fn format_grid(size: usize, cells: &[u8]) -> String {
    assert_eq!(cells.len(), size * size);
    let mut out = String::with_capacity(size * (2 * size + 1) + 16);
    out.push_str(&format!("{size} {size}\n"));
    for row in cells.chunks(size) {
        let mut first = true;
        for &cell in row {
            if !first {
                out.push(' ');
            }
            out.push(if cell == 0 { '0' } else { '1' });
            first = false;
        }
        out.push('\n');
    }
    out
}

pub fn write_grid(path: &std::path::Path, size: usize, cells: &[u8]) -> std::io::Result<()> {
    std::fs::write(path, format_grid(size, cells))
}

//! Greedy hierarchical cuboid partitioning.
//!
//! Every cuboid may be cut by a vertical line (children of widths `i` and
//! `w - i`) or a horizontal line (heights `j` and `h - j`), giving `w + h - 2`
//! candidates. The candidate minimising the entropy of the resulting pair is
//! the cuboid's best split. Starting from the whole frame, the leaf whose best
//! split removes the most entropy is split next, until `n` leaves exist.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::buffer::{luma_symbols, PixelBuffer, Plane};
use crate::entropy::{entropy_nonempty, Histogram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("the number of cuboids must be at least 1")]
    NZero,
    #[error("cannot split a {area}-pixel frame into {n} cuboids")]
    NTooLarge { n: usize, area: usize },
    #[error("split {split:?} does not fit a {w}x{h} cuboid")]
    InfeasibleSplit { split: Split, w: u32, h: u32 },
    #[error("node {0} is not a leaf")]
    NotALeaf(usize),
}

/// Axis-aligned rectangle of pixels: columns `x..x+w`, rows `y..y+h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cuboid {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Cuboid {
    pub const fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Self { x, y, w, h }
    }

    #[inline]
    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    /// Length of the side that a split with this orientation cuts across.
    #[inline]
    pub fn extent(&self, orientation: Orientation) -> u32 {
        match orientation {
            Orientation::Vertical => self.w,
            Orientation::Horizontal => self.h,
        }
    }

    pub fn admits(&self, split: Split) -> bool {
        split.offset >= 1 && split.offset < self.extent(split.orientation)
    }

    /// The two halves produced by `split`: left/top first.
    ///
    /// Panics if the split does not fit.
    pub fn split(&self, split: Split) -> (Cuboid, Cuboid) {
        assert!(self.admits(split), "{split:?} out of bounds for {self:?}");
        let k = split.offset;
        match split.orientation {
            Orientation::Vertical => (
                Cuboid::new(self.x, self.y, k, self.h),
                Cuboid::new(self.x + k, self.y, self.w - k, self.h),
            ),
            Orientation::Horizontal => (
                Cuboid::new(self.x, self.y, self.w, k),
                Cuboid::new(self.x, self.y + k, self.w, self.h - k),
            ),
        }
    }

    pub fn contains(&self, px: u32, py: u32) -> bool {
        px >= self.x && px < self.x + self.w && py >= self.y && py < self.y + self.h
    }

    /// Row-major sample indices covered by this cuboid in a frame `stride` wide.
    pub(crate) fn indices(&self, stride: u32) -> impl Iterator<Item = usize> + '_ {
        let stride = stride as usize;
        (self.y..self.y + self.h).flat_map(move |row| {
            let start = row as usize * stride + self.x as usize;
            start..start + self.w as usize
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

/// Geometry of a cut, relative to the cuboid being split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Split {
    pub orientation: Orientation,
    pub offset: u32,
}

impl Split {
    pub const fn vertical(offset: u32) -> Self {
        Self { orientation: Orientation::Vertical, offset }
    }

    pub const fn horizontal(offset: u32) -> Self {
        Self { orientation: Orientation::Horizontal, offset }
    }
}

/// A candidate split together with its objective value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitDecision {
    pub split: Split,
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Weighting {
    /// `N_L H(L) + N_R H(R)`
    #[default]
    PixelWeighted,
    /// `H(L) + H(R)`
    Unweighted,
}

/// Objective settings. Histograms always have 256 bins over luma symbols.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ObjectiveConfig {
    pub weighting: Weighting,
}

impl ObjectiveConfig {
    pub const fn new(weighting: Weighting) -> Self {
        Self { weighting }
    }

    /// Entropy content of one region under this weighting.
    #[inline]
    fn energy(&self, hist: &Histogram) -> f64 {
        let h = entropy_nonempty(hist);
        match self.weighting {
            Weighting::PixelWeighted => hist.total() as f64 * h,
            Weighting::Unweighted => h,
        }
    }

    #[inline]
    fn pair(&self, first: &Histogram, second: &Histogram) -> f64 {
        self.energy(first) + self.energy(second)
    }

    /// Entropy content of a whole region: `N H` or `H`.
    pub fn region_energy(&self, hist: &Histogram) -> f64 {
        self.energy(hist)
    }
}

pub(crate) fn region_histogram(plane: &Plane<u8>, cuboid: Cuboid) -> Histogram {
    let mut h = Histogram::new();
    for i in cuboid.indices(plane.width) {
        h.add(plane.data[i]);
    }
    h
}

/// Objective of cutting `cuboid` at `split`, computed from scratch.
///
/// Panics if the split is out of bounds for the cuboid.
pub fn split_objective(plane: &Plane<u8>, cuboid: Cuboid, split: Split, cfg: ObjectiveConfig) -> f64 {
    let (first, second) = cuboid.split(split);
    cfg.pair(&region_histogram(plane, first), &region_histogram(plane, second))
}

/// Lexicographic candidate order: objective, then vertical before horizontal,
/// then smaller offset.
fn precedes(a: &SplitDecision, b: &SplitDecision) -> bool {
    match a.objective.partial_cmp(&b.objective) {
        Some(Ordering::Less) => true,
        Some(Ordering::Greater) => false,
        _ => (a.split.orientation, a.split.offset) < (b.split.orientation, b.split.offset),
    }
}

/// Reference search: both halves of every candidate are histogrammed from
/// scratch.
pub fn best_split_naive(plane: &Plane<u8>, cuboid: Cuboid, cfg: ObjectiveConfig) -> Option<SplitDecision> {
    let verticals = (1..cuboid.w).map(Split::vertical);
    let horizontals = (1..cuboid.h).map(Split::horizontal);
    verticals
        .chain(horizontals)
        .map(|split| SplitDecision { split, objective: split_objective(plane, cuboid, split, cfg) })
        .fold(None, |best: Option<SplitDecision>, cand| match best {
            Some(b) if !precedes(&cand, &b) => Some(b),
            _ => Some(cand),
        })
}

/// Evaluates every candidate split of `cuboid` in sweep order (vertical
/// offsets ascending, then horizontal offsets ascending) and returns the
/// cuboid's own histogram.
///
/// One histogram grows a column (then a row) at a time and the other half is
/// the complement, so each pixel is visited twice per orientation at most.
pub fn sweep_candidates(
    plane: &Plane<u8>,
    cuboid: Cuboid,
    cfg: ObjectiveConfig,
    mut visit: impl FnMut(SplitDecision),
) -> Histogram {
    let stride = plane.width as usize;
    let data = &plane.data;
    let total = region_histogram(plane, cuboid);
    let (x0, y0) = (cuboid.x as usize, cuboid.y as usize);
    let (w, h) = (cuboid.w as usize, cuboid.h as usize);

    let mut acc = Histogram::new();
    for i in 1..w {
        let col = x0 + i - 1;
        for row in y0..y0 + h {
            acc.add(data[row * stride + col]);
        }
        let rest = total.difference(&acc);
        visit(SplitDecision { split: Split::vertical(i as u32), objective: cfg.pair(&acc, &rest) });
    }

    let mut acc = Histogram::new();
    for j in 1..h {
        let row = (y0 + j - 1) * stride;
        for &s in &data[row + x0..row + x0 + w] {
            acc.add(s);
        }
        let rest = total.difference(&acc);
        visit(SplitDecision { split: Split::horizontal(j as u32), objective: cfg.pair(&acc, &rest) });
    }
    total
}

fn sweep_best(plane: &Plane<u8>, cuboid: Cuboid, cfg: ObjectiveConfig) -> (Histogram, Option<SplitDecision>) {
    let mut best: Option<SplitDecision> = None;
    // sweep order already matches the tie rules, so only a strict improvement replaces
    let total = sweep_candidates(plane, cuboid, cfg, |cand| match best {
        Some(b) if cand.objective >= b.objective => {}
        _ => best = Some(cand),
    });
    (total, best)
}

/// Minimising split of `cuboid`, or `None` for a 1x1 cuboid.
pub fn best_split(plane: &Plane<u8>, cuboid: Cuboid, cfg: ObjectiveConfig) -> Option<SplitDecision> {
    sweep_best(plane, cuboid, cfg).1
}

/// Runs two closures, possibly in parallel. The partitioner only uses it for
/// independent work whose results are merged in a fixed order.
pub trait Join {
    fn join<A, B, RA, RB>(&self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send;
}

/// Runs both closures on the calling thread, `a` first.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Join for Sequential {
    fn join<A, B, RA, RB>(&self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        let ra = a();
        (ra, b())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Leaf,
    Internal {
        split: Split,
        /// Objective at split time; `None` when the tree was decoded from a stream.
        objective: Option<f64>,
        /// Left/top child first.
        children: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub cuboid: Cuboid,
    pub kind: NodeKind,
}

/// Binary tree of splits over a `width x height` frame, stored as an arena.
/// Node ids are assigned in creation order; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionTree {
    width: u32,
    height: u32,
    nodes: Vec<Node>,
    leaves: usize,
}

impl PartitionTree {
    /// A single-leaf tree covering the whole frame.
    pub fn new(width: u32, height: u32) -> Self {
        assert!(width >= 1 && height >= 1, "empty frame");
        Self {
            width,
            height,
            nodes: vec![Node { cuboid: Cuboid::new(0, 0, width, height), kind: NodeKind::Leaf }],
            leaves: 1,
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn frame(&self) -> Cuboid {
        self.nodes[0].cuboid
    }

    pub const ROOT: usize = 0;

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    /// Turns leaf `id` into an internal node, returning the new child ids.
    pub fn split_leaf(
        &mut self,
        id: usize,
        split: Split,
        objective: Option<f64>,
    ) -> Result<[usize; 2], PartitionError> {
        let node = self.nodes.get(id).ok_or(PartitionError::NotALeaf(id))?;
        if node.kind != NodeKind::Leaf {
            return Err(PartitionError::NotALeaf(id));
        }
        let cuboid = node.cuboid;
        if !cuboid.admits(split) {
            return Err(PartitionError::InfeasibleSplit { split, w: cuboid.w, h: cuboid.h });
        }
        let (first, second) = cuboid.split(split);
        let children = [self.nodes.len(), self.nodes.len() + 1];
        self.nodes.push(Node { cuboid: first, kind: NodeKind::Leaf });
        self.nodes.push(Node { cuboid: second, kind: NodeKind::Leaf });
        self.nodes[id].kind = NodeKind::Internal { split, objective, children };
        self.leaves += 1;
        Ok(children)
    }

    /// Node ids in depth-first preorder, first child before second.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { tree: self, stack: vec![Self::ROOT] }
    }

    /// The leaf cuboids in canonical (preorder) order.
    pub fn leaves_preorder(&self) -> Vec<Cuboid> {
        self.preorder()
            .filter(|&id| self.nodes[id].kind == NodeKind::Leaf)
            .map(|id| self.nodes[id].cuboid)
            .collect()
    }

    /// Every internal node's cuboid and split, in preorder.
    pub fn splits_preorder(&self) -> Vec<(Cuboid, Split)> {
        self.preorder()
            .filter_map(|id| match self.nodes[id].kind {
                NodeKind::Internal { split, .. } => Some((self.nodes[id].cuboid, split)),
                NodeKind::Leaf => None,
            })
            .collect()
    }
}

pub struct Preorder<'a> {
    tree: &'a PartitionTree,
    stack: Vec<usize>,
}

impl Iterator for Preorder<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let id = self.stack.pop()?;
        if let NodeKind::Internal { children: [first, second], .. } = self.tree.nodes[id].kind {
            self.stack.push(second);
            self.stack.push(first);
        }
        Some(id)
    }
}

/// Heap entry: larger gain first, then the earlier-created leaf.
struct Pending {
    gain: f64,
    id: usize,
    decision: SplitDecision,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain.total_cmp(&other.gain).then_with(|| other.id.cmp(&self.id))
    }
}

fn evaluate(plane: &Plane<u8>, cuboid: Cuboid, cfg: ObjectiveConfig) -> Option<(f64, SplitDecision)> {
    let (total, best) = sweep_best(plane, cuboid, cfg);
    best.map(|d| (cfg.energy(&total) - d.objective, d))
}

/// Greedy partition of `buf` into `n` cuboids, single-threaded.
pub fn partition(buf: &PixelBuffer, n: usize, cfg: ObjectiveConfig) -> Result<PartitionTree, PartitionError> {
    partition_with(buf, n, cfg, &Sequential)
}

/// Greedy partition of `buf` into `n` cuboids, evaluating the two children of
/// each executed split through `exec`. The result does not depend on `exec`.
pub fn partition_with<J: Join>(
    buf: &PixelBuffer,
    n: usize,
    cfg: ObjectiveConfig,
    exec: &J,
) -> Result<PartitionTree, PartitionError> {
    partition_plane(&luma_symbols(buf), n, cfg, exec)
}

/// Greedy partition of a plane of 8-bit symbols.
pub fn partition_plane<J: Join>(
    plane: &Plane<u8>,
    n: usize,
    cfg: ObjectiveConfig,
    exec: &J,
) -> Result<PartitionTree, PartitionError> {
    let area = plane.width as usize * plane.height as usize;
    if n == 0 {
        return Err(PartitionError::NZero);
    }
    if n > area {
        return Err(PartitionError::NTooLarge { n, area });
    }

    let mut tree = PartitionTree::new(plane.width, plane.height);
    let mut heap = BinaryHeap::new();
    if let Some((gain, decision)) = evaluate(plane, tree.frame(), cfg) {
        heap.push(Pending { gain, id: PartitionTree::ROOT, decision });
    }

    while tree.leaf_count() < n {
        // every leaf of area >= 2 is queued, and n <= area guarantees one exists
        let next = heap.pop().expect("a splittable leaf remains while leaves < n <= area");
        let [first, second] = tree
            .split_leaf(next.id, next.decision.split, Some(next.decision.objective))
            .expect("best split is always in bounds");
        let (a, b) = (tree.node(first).cuboid, tree.node(second).cuboid);
        let (ra, rb) = exec.join(|| evaluate(plane, a, cfg), || evaluate(plane, b, cfg));
        for (id, r) in [(first, ra), (second, rb)] {
            if let Some((gain, decision)) = r {
                heap.push(Pending { gain, id, decision });
            }
        }
    }
    Ok(tree)
}

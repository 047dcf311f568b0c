//! Pool-adjacent-violators engine shared by the quantile and least-squares fits.
//!
//! The engine is generic over a [`Pool`], which knows how to summarize a
//! single observation, merge two adjacent summaries, and report the
//! loss-minimizing constant of a summary. Blocks are kept on a stack and the
//! top two are merged while their values violate monotonicity.

/// Mergeable block summaries for [`pool_adjacent_violators`].
pub(crate) trait Pool {
    type Block;

    fn leaf(&mut self, index: usize) -> Self::Block;

    /// Merges `left` with the block immediately to its right.
    fn merge(&mut self, left: Self::Block, right: Self::Block) -> Self::Block;

    fn value(&self, block: &Self::Block) -> f64;
}

struct Entry<B> {
    block: B,
    len: usize,
    value: f64,
}

/// Runs PAVA over `n` observations and returns the fitted value per index.
///
/// Adjacent blocks are pooled only on a strict violation, so equal
/// neighbouring values stay as separate stack entries.
pub(crate) fn pool_adjacent_violators<P: Pool>(pool: &mut P, n: usize) -> Vec<f64> {
    let mut stack: Vec<Entry<P::Block>> = Vec::with_capacity(n);
    for i in 0..n {
        let block = pool.leaf(i);
        let value = pool.value(&block);
        stack.push(Entry {
            block,
            len: 1,
            value,
        });
        while stack.len() >= 2 && stack[stack.len() - 2].value > stack[stack.len() - 1].value {
            let right = stack.pop().expect("stack has two entries");
            let left = stack.pop().expect("stack has two entries");
            let block = pool.merge(left.block, right.block);
            let value = pool.value(&block);
            stack.push(Entry {
                block,
                len: left.len + right.len,
                value,
            });
        }
    }

    let mut fitted = Vec::with_capacity(n);
    for entry in &stack {
        fitted.extend(std::iter::repeat_n(entry.value, entry.len));
    }
    fitted
}

/// Block summary for the left tau-quantile.
///
/// Observations are replaced by their global ranks and every block owns a
/// sparse segment tree over `[0, n)` counting the ranks it contains. Trees are
/// merged destructively, so the total merge cost over a whole PAVA run is
/// bounded by the number of tree nodes, `O(n log n)`, and order statistics are
/// read off in `O(log n)`.
pub(crate) struct QuantilePool {
    tau: f64,
    sorted: Vec<f64>,
    rank: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    count: Vec<u32>,
}

pub(crate) struct RankTree {
    root: u32,
    size: usize,
}

impl QuantilePool {
    pub(crate) fn new(y: &[f64], tau: f64) -> Self {
        let n = y.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| y[a].total_cmp(&y[b]).then(a.cmp(&b)));
        let mut rank = vec![0u32; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r as u32;
        }
        let sorted = order.iter().map(|&i| y[i]).collect();

        let depth = (usize::BITS - n.max(1).leading_zeros()) as usize + 1;
        let capacity = 1 + n * depth;
        // Node 0 is the shared empty tree.
        let mut pool = Self {
            tau,
            sorted,
            rank,
            left: Vec::with_capacity(capacity),
            right: Vec::with_capacity(capacity),
            count: Vec::with_capacity(capacity),
        };
        pool.alloc();
        pool
    }

    fn alloc(&mut self) -> u32 {
        self.left.push(0);
        self.right.push(0);
        self.count.push(0);
        (self.count.len() - 1) as u32
    }

    fn merge_nodes(&mut self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        self.count[a as usize] += self.count[b as usize];
        let (la, lb) = (self.left[a as usize], self.left[b as usize]);
        let (ra, rb) = (self.right[a as usize], self.right[b as usize]);
        let l = self.merge_nodes(la, lb);
        let r = self.merge_nodes(ra, rb);
        self.left[a as usize] = l;
        self.right[a as usize] = r;
        a
    }

    /// The `k`-th smallest (0-based) value stored in the tree.
    fn kth(&self, root: u32, mut k: usize) -> f64 {
        let (mut lo, mut hi) = (0usize, self.sorted.len());
        let mut node = root;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let left = self.left[node as usize];
            let c = self.count[left as usize] as usize;
            if k < c {
                node = left;
                hi = mid;
            } else {
                k -= c;
                node = self.right[node as usize];
                lo = mid;
            }
        }
        self.sorted[lo]
    }
}

impl Pool for QuantilePool {
    type Block = RankTree;

    fn leaf(&mut self, index: usize) -> RankTree {
        let r = self.rank[index] as usize;
        let root = self.alloc();
        self.count[root as usize] = 1;
        let (mut lo, mut hi) = (0usize, self.sorted.len());
        let mut node = root;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            let child = self.alloc();
            self.count[child as usize] = 1;
            if r < mid {
                self.left[node as usize] = child;
                hi = mid;
            } else {
                self.right[node as usize] = child;
                lo = mid;
            }
            node = child;
        }
        RankTree { root, size: 1 }
    }

    fn merge(&mut self, left: RankTree, right: RankTree) -> RankTree {
        let root = self.merge_nodes(left.root, right.root);
        RankTree {
            root,
            size: left.size + right.size,
        }
    }

    fn value(&self, block: &RankTree) -> f64 {
        self.kth(block.root, left_quantile_rank(block.size, self.tau))
    }
}

/// Block summary for the arithmetic mean (isotonic least squares).
pub(crate) struct MeanPool<'a> {
    pub(crate) y: &'a [f64],
}

impl Pool for MeanPool<'_> {
    type Block = (f64, usize);

    fn leaf(&mut self, index: usize) -> (f64, usize) {
        (self.y[index], 1)
    }

    fn merge(&mut self, left: (f64, usize), right: (f64, usize)) -> (f64, usize) {
        (left.0 + right.0, left.1 + right.1)
    }

    fn value(&self, block: &(f64, usize)) -> f64 {
        block.0 / block.1 as f64
    }
}

/// 0-based position of the left tau-quantile in a sorted sample of size `n`:
/// the smallest `m` with `(m + 1) / n >= tau`.
pub(crate) fn left_quantile_rank(n: usize, tau: f64) -> usize {
    debug_assert!(n > 0);
    let nf = n as f64;
    let mut m = ((tau * nf).ceil() as usize).saturating_sub(1).min(n - 1);
    // Settle rounding in tau * n against the count-ratio comparison itself.
    while m > 0 && (m as f64) / nf >= tau {
        m -= 1;
    }
    while m + 1 < n && ((m + 1) as f64) / nf < tau {
        m += 1;
    }
    m
}

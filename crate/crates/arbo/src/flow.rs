//! Internal maximum-flow engine (Dinic's algorithm), shared by the
//! subgraph-density and edge-connectivity computations.

pub(crate) const INF: i64 = i64::MAX / 4;

/// A flow network over dense node ids with residual capacities stored
/// in place. Arcs come in twin pairs: arc `a` and `a ^ 1` are each
/// other's reverse.
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Adds `from -> to` with capacity `cap` and a zero-capacity twin.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: i64) -> usize {
        self.add_pair(from, to, cap, 0)
    }

    /// Adds an undirected edge: twin arcs carrying `cap` each way.
    pub(crate) fn add_undirected(&mut self, u: usize, v: usize, cap: i64) -> usize {
        self.add_pair(u, v, cap, cap)
    }

    fn add_pair(&mut self, from: usize, to: usize, cap_fwd: i64, cap_bwd: i64) -> usize {
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(cap_fwd);
        self.adj[from].push(id);
        self.to.push(from);
        self.cap.push(cap_bwd);
        self.adj[to].push(id + 1);
        id
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    fn push(
        &mut self,
        u: usize,
        t: usize,
        want: i64,
        level: &[u32],
        iter: &mut [usize],
    ) -> i64 {
        if u == t {
            return want;
        }
        while iter[u] < self.adj[u].len() {
            let a = self.adj[u][iter[u]];
            let v = self.to[a];
            if self.cap[a] > 0 && level[v] == level[u] + 1 {
                let got = self.push(v, t, want.min(self.cap[a]), level, iter);
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            iter[u] += 1;
        }
        0
    }

    /// Maximum flow from `s` to `t`; residual capacities stay in place,
    /// so cut extraction can follow.
    pub(crate) fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        assert_ne!(s, t);
        let mut total = 0i64;
        while let Some(level) = self.levels(s, t) {
            let mut iter = vec![0usize; self.adj.len()];
            loop {
                let got = self.push(s, t, INF, &level, &mut iter);
                if got == 0 {
                    break;
                }
                total += got;
            }
        }
        total
    }

    /// Nodes reachable from `s` in the residual network. After
    /// `max_flow`, this is the inclusion-minimal minimum-cut source side.
    pub(crate) fn residual_reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

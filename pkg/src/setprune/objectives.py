"""Query-counted set-function oracles for the bundled objective families.

Everything downstream treats the objective as a black box: hand it a set of
element ids, get a value back. Each oracle freezes its input data (graph,
live-edge sample pool, similarity kernel) at construction, normalizes so the
empty set scores zero, and bumps a thread-safe counter exactly once per
evaluation. Evaluating the same set twice returns bit-identical values,
including the cascade estimator, whose randomness lives entirely in the
frozen sample pool.

The module-level ``*_value`` functions are plain reference implementations
of the same objectives, computed directly from their definitions; the oracle
classes use faster internal representations and are cross-checked against
them in the test suite.
"""

from __future__ import annotations

import threading

import numpy as np

from .errors import InputError

__all__ = [
    "QueryCounter",
    "Oracle",
    "CoverageOracle",
    "CutOracle",
    "InfluenceOracle",
    "SimilarityCutOracle",
    "CustomOracle",
    "LiveEdgeSamplePool",
    "SimilarityKernel",
    "load_similarity_kernel",
    "coverage_value",
    "cut_value",
    "influence_value",
    "simgraphcut_value",
    "estimate_gamma",
]


class QueryCounter:
    """Monotone evaluation counter safe under concurrent increments."""

    __slots__ = ("_lock", "_count")

    def __init__(self):
        self._lock = threading.Lock()
        self._count = 0

    def bump(self):
        with self._lock:
            self._count += 1

    @property
    def count(self) -> int:
        return self._count


class Oracle:
    """Counted, normalized evaluation of a monotone set function.

    Subclasses implement ``_value(S)`` over element ids ``0..n-1``. The
    public ``eval`` issues exactly one counted query per call and returns
    f(S) - f(empty set).
    """

    kind = "custom"

    def __init__(self, n: int):
        if n < 0:
            raise InputError("ground-set size must be non-negative")
        self.n = n
        self.counter = QueryCounter()

    @property
    def query_count(self) -> int:
        return self.counter.count

    def eval(self, S):
        self.counter.bump()
        return self._value(S)

    def marginal(self, e, S, f_S):
        """Gain of adding ``e`` to ``S`` given the cached value ``f_S``.

        Costs exactly one fresh query; zero when ``e`` is already in ``S``.
        """
        return self.eval(set(S) | {e}) - f_S

    def _value(self, S):
        raise NotImplementedError

    def _bad_id(self, v):
        return InputError(f"element id {v!r} outside ground set of size {self.n}")


class CoverageOracle(Oracle):
    """Number of nodes in S or adjacent to S (closed-neighborhood cover)."""

    kind = "coverage"

    def __init__(self, graph):
        super().__init__(graph.n)
        self.graph = graph
        masks = []
        for v in range(graph.n):
            m = 1 << v
            for u in graph.neighbors(v):
                m |= 1 << int(u)
            masks.append(m)
        self._nbhd = masks

    def _value(self, S):
        n = self.n
        nbhd = self._nbhd
        mask = 0
        for v in S:
            if not 0 <= v < n:
                raise self._bad_id(v)
            mask |= nbhd[v]
        return mask.bit_count()


class CutOracle(Oracle):
    """Number of edges with exactly one endpoint in S.

    For directed graphs this counts arcs entering S from outside.
    """

    kind = "cut"

    def __init__(self, graph):
        super().__init__(graph.n)
        self.graph = graph
        if graph.directed:
            in_masks = [0] * graph.n
            for u in range(graph.n):
                bit = 1 << u
                for v in graph.neighbors(u):
                    in_masks[int(v)] |= bit
            self._adj = in_masks
        else:
            adj = []
            for v in range(graph.n):
                m = 0
                for u in graph.neighbors(v):
                    m |= 1 << int(u)
                adj.append(m)
            self._adj = adj
        self._deg = [m.bit_count() for m in self._adj]

    def _value(self, S):
        n = self.n
        vs = list(S)
        smask = 0
        for v in vs:
            if not 0 <= v < n:
                raise self._bad_id(v)
            smask |= 1 << v
        adj, deg = self._adj, self._deg
        total = 0
        for v in vs:
            total += deg[v] - (adj[v] & smask).bit_count()
        return total


class _DisjointSet:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


class LiveEdgeSamplePool:
    """Frozen collection of live-edge subgraphs for cascade estimation.

    Each stored edge of the source graph survives independently with
    probability ``p``, sampled once at construction; averaging the size of
    the set reachable from the seeds over the ``m`` samples gives a
    deterministic Monte Carlo estimate of expected spread. Undirected live
    edges are traversable in both directions.
    """

    def __init__(self, graph, p: float, m: int = 100, seed: int = 0):
        if not 0.0 <= p <= 1.0:
            raise InputError("edge probability p must be in [0, 1]")
        if m < 1:
            raise InputError("sample count m must be >= 1")
        self.n = graph.n
        self.p = float(p)
        self.m = int(m)
        self.seed = int(seed)
        self.directed = graph.directed
        edges = graph.edge_array()
        rng = np.random.default_rng(seed)
        self.samples = []
        self._components = []  # undirected fast path: (labels, sizes) per sample
        self._adjacency = []  # directed fast path: out-adjacency per sample
        for _ in range(self.m):
            live = edges[rng.random(len(edges)) < p] if len(edges) else edges
            self.samples.append(live)
            if self.directed:
                adj = {}
                for u, v in live:
                    adj.setdefault(int(u), []).append(int(v))
                self._adjacency.append(adj)
            else:
                dsu = _DisjointSet(self.n)
                for u, v in live:
                    dsu.union(int(u), int(v))
                labels = [dsu.find(v) for v in range(self.n)]
                sizes = [0] * self.n
                for root in labels:
                    sizes[root] += 1
                self._components.append((labels, sizes))

    def mean_reach(self, S) -> float:
        """Average number of nodes reachable from S across the samples."""
        vs = list(S)
        for v in vs:
            if not 0 <= v < self.n:
                raise InputError(
                    f"element id {v!r} outside ground set of size {self.n}")
        total = 0
        if self.directed:
            for adj in self._adjacency:
                visited = set(vs)
                stack = list(vs)
                while stack:
                    u = stack.pop()
                    for w in adj.get(u, ()):
                        if w not in visited:
                            visited.add(w)
                            stack.append(w)
                total += len(visited)
        else:
            for labels, sizes in self._components:
                seen = set()
                add = seen.add
                for v in vs:
                    root = labels[v]
                    if root not in seen:
                        add(root)
                        total += sizes[root]
        return total / self.m


class InfluenceOracle(Oracle):
    """Deterministic spread estimate over a frozen live-edge sample pool."""

    kind = "influence"

    def __init__(self, pool: LiveEdgeSamplePool):
        super().__init__(pool.n)
        self.pool = pool

    def _value(self, S):
        return self.pool.mean_reach(S)


class SimilarityKernel:
    """Pairwise similarity matrix with designated query items.

    The quadratic self-penalty follows a fixed convention: ordered pairs
    including the diagonal, i.e. the sum of s[i, j] over all (i, j) in
    S x S. Candidate ids default to every item not in the query set.
    """

    def __init__(self, s, query_ids, lam: float = 10.0, candidate_ids=None):
        s = np.asarray(s, dtype=np.float64)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise InputError("similarity matrix must be square")
        if not np.allclose(s, s.T, atol=1e-8):
            raise InputError("similarity matrix must be symmetric")
        if s.size and (s.min() < -1.0 - 1e-9 or s.max() > 1.0 + 1e-9):
            raise InputError("similarities must lie in [-1, 1]")
        if lam < 2.0:
            raise InputError("scaling lam must be >= 2")
        n_items = s.shape[0]
        query_ids = sorted(set(int(q) for q in query_ids))
        if not query_ids:
            raise InputError("query set must be non-empty")
        if query_ids[0] < 0 or query_ids[-1] >= n_items:
            raise InputError("query id outside similarity matrix")
        if candidate_ids is None:
            candidate_ids = [i for i in range(n_items) if i not in set(query_ids)]
        else:
            candidate_ids = sorted(set(int(c) for c in candidate_ids))
            if candidate_ids and (candidate_ids[0] < 0 or candidate_ids[-1] >= n_items):
                raise InputError("candidate id outside similarity matrix")
            if set(candidate_ids) & set(query_ids):
                raise InputError("candidate and query sets must be disjoint")
        self.s = s
        self.lam = float(lam)
        self.query_ids = np.array(query_ids, dtype=np.int64)
        self.candidate_ids = np.array(candidate_ids, dtype=np.int64)

    @property
    def n_candidates(self) -> int:
        return len(self.candidate_ids)


def load_similarity_kernel(matrix_path, query_path, lam: float = 10.0) -> SimilarityKernel:
    """Load a kernel from a CSV of row-major floats plus a query-id list file."""
    s = np.loadtxt(matrix_path, delimiter=",", ndmin=2, dtype=np.float64)
    query_ids = []
    with open(query_path, "rt") as fh:
        for line_no, line in enumerate(fh, start=1):
            for tok in line.split():
                try:
                    query_ids.append(int(tok))
                except ValueError:
                    from .errors import ParseError

                    raise ParseError(f"non-integer query id {tok!r}", line_no) from None
    return SimilarityKernel(s, query_ids, lam=lam)


class SimilarityCutOracle(Oracle):
    """Query-similarity reward minus in-set similarity penalty.

    The ground set is the kernel's candidate list; element id ``j`` refers to
    ``kernel.candidate_ids[j]``.
    """

    kind = "simgraphcut"

    def __init__(self, kernel: SimilarityKernel):
        super().__init__(kernel.n_candidates)
        self.kernel = kernel
        cand = kernel.candidate_ids
        self._qsum = kernel.s[np.ix_(kernel.query_ids, cand)].sum(axis=0)
        self._sc = kernel.s[np.ix_(cand, cand)].copy()

    def _value(self, S):
        vs = sorted(set(S))
        if not vs:
            return 0.0
        if vs[0] < 0 or vs[-1] >= self.n:
            bad = vs[0] if vs[0] < 0 else vs[-1]
            raise self._bad_id(bad)
        idx = np.array(vs, dtype=np.int64)
        reward = self.kernel.lam * float(self._qsum[idx].sum())
        penalty = float(self._sc[np.ix_(idx, idx)].sum())
        return reward - penalty


class CustomOracle(Oracle):
    """Wrap an arbitrary set function; normalizes by subtracting f(empty)."""

    def __init__(self, n: int, fn, kind: str = "custom"):
        super().__init__(n)
        self.kind = kind
        self._fn = fn
        self._offset = float(fn(frozenset()))

    def _value(self, S):
        vs = frozenset(S)
        for v in vs:
            if not 0 <= v < self.n:
                raise self._bad_id(v)
        return self._fn(vs) - self._offset


def coverage_value(graph, S) -> int:
    """Reference cover count: |S union N(S)| computed directly from sets."""
    covered = set()
    for v in S:
        if not 0 <= v < graph.n:
            raise InputError(f"element id {v!r} outside ground set of size {graph.n}")
        covered.add(int(v))
        covered.update(int(u) for u in graph.neighbors(v))
    return len(covered)


def cut_value(graph, S) -> int:
    """Reference cut count from the edge list.

    Undirected: edges with exactly one endpoint in S. Directed: arcs (u, v)
    with v in S and u outside.
    """
    inside = set()
    for v in S:
        if not 0 <= v < graph.n:
            raise InputError(f"element id {v!r} outside ground set of size {graph.n}")
        inside.add(int(v))
    total = 0
    for u, v in graph.edge_array():
        u, v = int(u), int(v)
        if graph.directed:
            total += (v in inside) and (u not in inside)
        else:
            total += (u in inside) != (v in inside)
    return total


def influence_value(pool: LiveEdgeSamplePool, S) -> float:
    """Reference spread estimate: BFS over each stored live-edge sample."""
    vs = []
    for v in S:
        if not 0 <= v < pool.n:
            raise InputError(f"element id {v!r} outside ground set of size {pool.n}")
        vs.append(int(v))
    total = 0
    for live in pool.samples:
        adj = {}
        for u, v in live:
            u, v = int(u), int(v)
            adj.setdefault(u, []).append(v)
            if not pool.directed:
                adj.setdefault(v, []).append(u)
        visited = set(vs)
        stack = list(vs)
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w not in visited:
                    visited.add(w)
                    stack.append(w)
        total += len(visited)
    return total / pool.m


def simgraphcut_value(kernel: SimilarityKernel, S) -> float:
    """Reference similarity objective over item ids.

    ``S`` must be a subset of ``kernel.candidate_ids``. The in-set penalty
    sums ordered pairs including the diagonal.
    """
    cand = set(int(c) for c in kernel.candidate_ids)
    vs = sorted(set(int(v) for v in S))
    for v in vs:
        if v not in cand:
            raise InputError(f"item id {v!r} is not a candidate")
    if not vs:
        return 0.0
    idx = np.array(vs, dtype=np.int64)
    reward = kernel.lam * float(kernel.s[np.ix_(kernel.query_ids, idx)].sum())
    penalty = float(kernel.s[np.ix_(idx, idx)].sum())
    return reward - penalty


def estimate_gamma(oracle: Oracle, U, zero_tol: float = 1e-9) -> float:
    """Exhaustive estimate of the diminishing-returns ratio on a small set.

    Returns the minimum of gain(x | S) / gain(x | T) over all chains
    S subseteq T subseteq U with x outside T and gain(x | T) positive,
    clamped to [0, 1]; 1.0 when no positive denominator exists. Denominators
    below ``zero_tol`` (scaled by the largest observed value) are treated as
    zero so float noise on truly flat marginals cannot blow up a ratio.

    Exhaustive over all subsets, so ``|U| <= 12`` is enforced.
    """
    ids = sorted(set(U))
    k = len(ids)
    if k > 12:
        raise InputError(f"gamma estimation is exhaustive; |U| = {k} exceeds 12")
    if k == 0:
        return 1.0
    size = 1 << k
    values = [0.0] * size
    for mask in range(1, size):
        subset = {ids[i] for i in range(k) if mask >> i & 1}
        values[mask] = oracle.eval(subset)
    tol = zero_tol * max(1.0, max(abs(x) for x in values))
    best = 1.0
    for t in range(size):
        rest = (size - 1) & ~t
        x = rest
        while x:
            xb = x & -x
            x ^= xb
            gain_t = values[t | xb] - values[t]
            if gain_t <= tol:
                continue
            s = t
            while True:
                ratio = (values[s | xb] - values[s]) / gain_t
                if ratio < best:
                    best = ratio
                    if best <= 0.0:
                        return 0.0
                if s == 0:
                    break
                s = (s - 1) & t
    return min(1.0, best)

'''
Exhaustive backtracking search for all (n,m,k,lambda)-SEDFs of a group.

Elements are tried in index order. The identity seeds the first block,
the "skip" branch is explored before the "place" branches and an element is
put into at most one empty block, so blocks stay ordered by their minimum
and every family is produced once per block ordering.
'''
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import sys
import time

from src.sedf.errors import ParameterError
from src.sedf.family import BlockFamily, DifferenceCounter, verify_sedf
from src.sedf.group.finite_group import FiniteGroup
from src.sedf.optim.engine import Engine
from src.sedf.params import require_admissible

logger = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 64

Snapshot = Tuple[Tuple[int, ...], ...]


class SearchState(object):
    '''
    Partial family L (m blocks, possibly incomplete), the index p of the next
    candidate element and one DifferenceCounter per block counting the
    differences from that block to all the others.
    '''

    def __init__(self, group: FiniteGroup, m: int):
        '''
        Constructor: the seeded state with the identity in the first block
        '''
        if m < 1:
            raise ParameterError(f"m must be positive, got {m}")
        self._group = group
        self._quotients = group.quotients
        self._blocks: List[List[int]] = [[0]] + [[] for _ in range(m - 1)]
        self._counters = [DifferenceCounter(group.order) for _ in range(m)]
        self._placed = 1
        self.p = 1

    @classmethod
    def from_blocks(cls, group: FiniteGroup, blocks: Sequence[Sequence[int]], p: int) -> 'SearchState':
        '''
        State holding the given blocks (elements in increasing order of
        placement), counters recomputed from scratch
        '''
        state = cls(group, len(blocks))
        state._blocks = [[] for _ in blocks]
        state._placed = 0
        for x, i in sorted((x, i) for i, block in enumerate(blocks) for x in block):
            state.place(i, x)
        for counter in state._counters:
            counter.commit()
        state.p = p
        return state

    @property
    def group(self) -> FiniteGroup:
        return self._group

    @property
    def blocks(self) -> List[List[int]]:
        return self._blocks

    @property
    def m(self) -> int:
        return len(self._blocks)

    @property
    def placed(self) -> int:
        return self._placed

    @property
    def counter_bank(self) -> List[DifferenceCounter]:
        return self._counters

    def snapshot(self) -> Snapshot:
        return tuple(tuple(block) for block in self._blocks)

    def place(self, i: int, x: int, lam: Optional[int] = None) -> Tuple[List[int], bool]:
        '''
        Adds x to block i and counts the new external differences.
        Returns the counter checkpoints to roll back to and False as soon as
        some difference occurs more than lam times (counting stops there).
        '''
        bound = sys.maxsize if lam is None else lam
        counters = self._counters
        marks = [c.checkpoint() for c in counters]
        q = self._quotients
        ok = True
        ci = counters[i]
        for j, other in enumerate(self._blocks):
            if j == i or not other:
                continue
            cj = counters[j]
            for y in other:
                if ci.add(q[x][y]) > bound or cj.add(q[y][x]) > bound:
                    ok = False
                    break
            if not ok:
                break
        self._blocks[i].append(x)
        self._placed += 1
        return marks, ok

    def unplace(self, i: int, marks: List[int]):
        self._blocks[i].pop()
        self._placed -= 1
        for counter, mark in zip(self._counters, marks):
            counter.rollback(mark)

    def within(self, lam: int) -> bool:
        '''
        check_partial answered from the counter bank
        '''
        return all(max(c.counts) <= lam for c in self._counters)

    def is_normal_form(self) -> bool:
        '''
        Nonempty blocks form a prefix, their minima increase and the identity
        is in the first block
        '''
        blocks = self._blocks
        if not blocks[0] or blocks[0][0] != 0:
            return False
        filled = [b for b in blocks if b]
        if any(blocks[i] for i in range(len(filled), len(blocks))):
            return False
        return all(min(a) < min(b) for a, b in zip(filled, filled[1:]))


def check_partial(state: SearchState, lam: int) -> bool:
    '''
    False iff some external difference between two blocks of the partial
    family already occurs more than lam times (full recount)
    '''
    q = state.group.quotients
    blocks = state.blocks
    n = state.group.order
    for i1, b1 in enumerate(blocks):
        count = [0] * n
        for i2, b2 in enumerate(blocks):
            if i1 == i2:
                continue
            for x in b1:
                for y in b2:
                    d = q[x][y]
                    count[d] += 1
                    if count[d] > lam:
                        return False
    return True


def capacity_prune(state: SearchState, n: int, m: int, k: int) -> bool:
    '''
    True when the slots still to fill outnumber the elements not yet tried
    '''
    return m * k - state.placed > n - state.p


@dataclass
class SearchStats:
    nodes: int = 0
    partial_rejections: int = 0
    capacity_prunes: int = 0
    hits: int = 0
    elapsed: float = 0.0

    def merge(self, other: 'SearchStats'):
        self.nodes += other.nodes
        self.partial_rejections += other.partial_rejections
        self.capacity_prunes += other.capacity_prunes
        self.hits += other.hits

    def to_json_obj(self) -> Dict:
        obj = asdict(self)
        obj["elapsed"] = round(self.elapsed, 6)
        return obj


class BacktrackSearch(Engine):
    '''
    Enumerates every SEDF with the identity in the first block and blocks
    ordered by their minimum.

    Parameters:
      incremental: update journaled counters on each placement (default True);
                   False recounts every difference at every node
      jobs: worker processes (default 1)
      split_depth: elements placed after the identity at which subtrees are
                   handed to workers (default 3)
      max_order / allow_large: refuse groups above max_order (default 64)
      record_nodes: keep the (blocks, p) log of visited nodes
      debug_checks: assert the normal form at every node
      first_only: stop at the first complete family
    '''

    def __init__(self, params: Dict = None):
        super().__init__(params)
        self.stats = SearchStats()
        self.node_log: List[Tuple[Snapshot, int]] = []

    def run(self, group: FiniteGroup, m: int, k: int, lam: int, params: Dict = None) -> List[BlockFamily]:
        current_params = self.merged_params(params)
        n = group.order
        require_admissible(n, m, k, lam)
        max_order = current_params.get("max_order", DEFAULT_MAX_ORDER)
        if n > max_order and not current_params.get("allow_large", False):
            raise ParameterError(f"group order {n} exceeds the search limit {max_order}")

        self._configure(group, m, k, lam, current_params)
        jobs = current_params.get("jobs", 1)
        split_depth = current_params.get("split_depth", 3)
        start = time.perf_counter()
        logger.info("[BacktrackSearch] %s, (n,m,k,lambda)=(%d,%d,%d,%d), %s counters, jobs=%d",
                    group.name, n, m, k, lam, "incremental" if self._incremental else "recounted", jobs)

        state = SearchState(group, m)
        if jobs > 1 and not self._record and not self._first_only:
            self._frontier = []
            self._cut = 1 + split_depth
            self._search(state, self._root_ok(state))
            self._run_workers(jobs, current_params)
        else:
            self._search(state, self._root_ok(state))

        self.stats.elapsed = time.perf_counter() - start
        families = [BlockFamily(group, blocks) for blocks in sorted(self._found)]
        for fam in families:
            assert verify_sedf(fam, lam), f"search produced a non-SEDF {fam}"
        logger.info("[BacktrackSearch] %s: %d SEDFs, %d nodes (%d rejected, %d capacity prunes) in %.3fs",
                    group.name, len(families), self.stats.nodes, self.stats.partial_rejections,
                    self.stats.capacity_prunes, self.stats.elapsed)
        return families

    def _configure(self, group: FiniteGroup, m: int, k: int, lam: int, params: Dict):
        self._group, self._m, self._k, self._lam = group, m, k, lam
        self._incremental = params.get("incremental", True)
        self._record = params.get("record_nodes", False)
        self._debug = params.get("debug_checks", False)
        self._first_only = params.get("first_only", False)
        self.stats = SearchStats()
        self.node_log = []
        self._found: List[Snapshot] = []
        self._frontier: Optional[List[Tuple[Snapshot, int]]] = None
        self._cut = None

    def _root_ok(self, state: SearchState) -> bool:
        return check_partial(state, self._lam) if not self._incremental else state.within(self._lam)

    def _stopped(self) -> bool:
        return self._first_only and bool(self._found)

    def _search(self, state: SearchState, ok: bool):
        if self._frontier is not None and ok and state.placed == self._cut:
            self._frontier.append((state.snapshot(), state.p))
            return
        stats = self.stats
        stats.nodes += 1
        if self._record:
            self.node_log.append((state.snapshot(), state.p))
        if self._debug:
            assert state.is_normal_form(), f"search state {state.snapshot()} is not in normal form"
        if not ok:
            stats.partial_rejections += 1
            return
        m, k, n = self._m, self._k, self._group.order
        if capacity_prune(state, n, m, k):
            stats.capacity_prunes += 1
            return
        if state.placed == m * k:
            stats.hits += 1
            self._found.append(state.snapshot())
            return

        p = state.p
        x = p
        state.p = p + 1
        self._search(state, True)
        for i in range(m):
            if self._stopped():
                break
            block = state.blocks[i]
            if len(block) == k:
                continue
            was_empty = not block
            marks, placed_ok = state.place(i, x, self._lam)
            child_ok = placed_ok if self._incremental else check_partial(state, self._lam)
            self._search(state, child_ok)
            state.unplace(i, marks)
            if was_empty:
                break
        state.p = p

    def _run_workers(self, jobs: int, params: Dict):
        tasks = self._frontier
        self._frontier = None
        logger.info("[BacktrackSearch] %d subtrees at depth %d handed to %d workers",
                    len(tasks), self._cut - 1, jobs)
        worker_params = {**params, "jobs": 1, "record_nodes": False, "first_only": False}
        payload = [(self._group, self._m, self._k, self._lam, worker_params, blocks, p) for blocks, p in tasks]
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for found, stats in executor.map(_search_subtree, payload):
                self._found.extend(found)
                self.stats.merge(stats)


def _search_subtree(task) -> Tuple[List[Snapshot], SearchStats]:
    group, m, k, lam, params, blocks, p = task
    engine = BacktrackSearch(params)
    engine._configure(group, m, k, lam, params)
    state = SearchState.from_blocks(group, blocks, p)
    engine._search(state, True)
    return engine._found, engine.stats


def search_all(group: FiniteGroup, m: int, k: int, lam: int, params: Dict = None) -> List[BlockFamily]:
    '''
    Every (n,m,k,lambda)-SEDF of the group in normal form, sorted by blocks
    '''
    return BacktrackSearch(params).run(group, m, k, lam)


def search_first(group: FiniteGroup, m: int, k: int, lam: int, params: Dict = None) -> Optional[BlockFamily]:
    '''
    The first SEDF met by the depth-first search, None when there is none
    '''
    found = BacktrackSearch({**(params or {}), "first_only": True}).run(group, m, k, lam)
    return found[0] if found else None

'''
Tests for the backtracking SEDF search.

'''
from itertools import combinations
import unittest

from src.sedf.errors import ParameterError
from src.sedf.family import BlockFamily, verify_sedf
from src.sedf.group.catalog import abelian_groups, nonabelian_groups, parse_group_spec
from src.sedf.optim.search import (BacktrackSearch, SearchState, SearchStats, capacity_prune,
                                   check_partial, search_all, search_first)
from src.sedf.params import enumerate_admissible


def brute_force_families(group, m, k, lam):
    '''
    Every SEDF with the identity in the first block and blocks ordered by
    their least element, by trying all disjoint k-sets
    '''
    found = []

    def extend(blocks, used):
        if len(blocks) == m:
            fam = BlockFamily(group, blocks)
            if verify_sedf(fam, lam):
                found.append(fam)
            return
        floor = blocks[-1][0]
        free = [x for x in range(floor + 1, group.order) if x not in used]
        for block in combinations(free, k):
            extend(blocks + [block], used | set(block))

    for rest in combinations(range(1, group.order), k - 1):
        first = (0,) + rest
        extend([first], set(first))
    return sorted(found)


class TestSearchState(unittest.TestCase):

    def setUp(self):
        self.z5 = parse_group_spec("Z5")

    def test_seeded_state(self):
        state = SearchState(self.z5, 3)
        self.assertEqual(state.snapshot(), ((0,), (), ()))
        self.assertEqual((state.p, state.placed, state.m), (1, 1, 3))
        self.assertTrue(state.is_normal_form())
        with self.assertRaises(ParameterError):
            SearchState(self.z5, 0)

    def test_check_partial(self):
        self.assertTrue(check_partial(SearchState.from_blocks(self.z5, [[0], [1]], 2), 1))
        self.assertFalse(check_partial(SearchState.from_blocks(self.z5, [[0, 1], [2, 3]], 4), 1),
                         '0-2 and 1-3 are both 3')
        self.assertTrue(check_partial(SearchState.from_blocks(self.z5, [[0, 1], [2, 3]], 4), 2))

    def test_counter_bank_agrees_with_recount(self):
        z10 = parse_group_spec("Z10")
        for blocks in ([[0], [1]], [[0, 1], [2, 3]], [[0, 1, 2], [3, 6, 9]], [[0, 4], [1, 2, 5]],
                       [[0, 3], [1], [2, 7]]):
            state = SearchState.from_blocks(z10, blocks, 10)
            for lam in (1, 2):
                self.assertEqual(state.within(lam), check_partial(state, lam), f'{blocks} lambda={lam}')

    def test_place_and_unplace(self):
        state = SearchState(self.z5, 2)
        before = [list(c.counts) for c in state.counter_bank]
        marks, ok = state.place(1, 2, lam=1)
        self.assertTrue(ok)
        self.assertEqual(state.snapshot(), ((0,), (2,)))
        self.assertEqual(state.counter_bank[1][2], 1, '2 - 0 counted for the second block')
        self.assertEqual(state.counter_bank[0][3], 1, '0 - 2 counted for the first block')
        state.unplace(1, marks)
        self.assertEqual(state.snapshot(), ((0,), ()))
        self.assertEqual([list(c.counts) for c in state.counter_bank], before)

    def test_place_reports_excess(self):
        state = SearchState.from_blocks(self.z5, [[0, 1], [2]], 3)
        marks, ok = state.place(1, 3, lam=1)
        self.assertFalse(ok, '3 - 1 repeats 2 - 0')
        state.unplace(1, marks)
        self.assertTrue(state.within(1))

    def test_normal_form(self):
        self.assertFalse(SearchState.from_blocks(self.z5, [[0], [], [1]], 2).is_normal_form())
        self.assertFalse(SearchState.from_blocks(self.z5, [[1], [0]], 2).is_normal_form())
        self.assertTrue(SearchState.from_blocks(self.z5, [[0, 3], [1]], 4).is_normal_form())

    def test_capacity_prune(self):
        state = SearchState(self.z5, 2)
        state.p = 2
        self.assertFalse(capacity_prune(state, 5, 2, 2))
        state.p = 3
        self.assertTrue(capacity_prune(state, 5, 2, 2), 'three slots left but only two elements')


class TestBacktrackSearch(unittest.TestCase):

    def setUp(self):
        self.z5 = parse_group_spec("Z5")
        self.z10 = parse_group_spec("Z10")
        self.d10 = parse_group_spec("D10")

    def test_z5(self):
        found = search_all(self.z5, 2, 2, 1)
        self.assertEqual([fam.blocks for fam in found],
                         [((0, 1), (2, 4)), ((0, 2), (3, 4)), ((0, 3), (1, 2)), ((0, 4), (1, 3))])

    def test_matches_brute_force(self):
        for group, k, lam in ((self.z5, 2, 1), (self.z10, 3, 1), (self.d10, 3, 1),
                              (parse_group_spec("Z13"), 6, 3)):
            self.assertEqual(search_all(group, 2, k, lam), brute_force_families(group, 2, k, lam), group.name)

    def test_three_blocks(self):
        found = search_all(self.d10, 3, 3, 2)
        for fam in found:
            self.assertTrue(verify_sedf(fam, 2))
            self.assertEqual(fam.blocks[0][0], 0)
        self.assertEqual(search_all(self.z10, 3, 3, 2), [], 'no abelian SEDF with m = 3')

    def test_naive_and_incremental_visit_the_same_nodes(self):
        naive = BacktrackSearch({"incremental": False, "record_nodes": True})
        fast = BacktrackSearch({"record_nodes": True})
        self.assertEqual(naive.run(self.z10, 2, 3, 1), fast.run(self.z10, 2, 3, 1))
        self.assertEqual(naive.node_log, fast.node_log)
        self.assertEqual(naive.stats.nodes, fast.stats.nodes)
        self.assertEqual(naive.stats.partial_rejections, fast.stats.partial_rejections)
        self.assertEqual(naive.node_log[0], (((0,), ()), 1), 'the root is the seeded state')

    def test_three_blocks_match_brute_force(self):
        cases = ((parse_group_spec("Z9"), 2, 1), (parse_group_spec("Z3xZ3"), 2, 1), (self.z10, 3, 2),
                 (self.d10, 3, 2))
        for group, k, lam in cases:
            self.assertEqual(search_all(group, 3, k, lam), brute_force_families(group, 3, k, lam), group.name)

    def test_naive_and_incremental_agree_on_small_groups(self):
        for params in enumerate_admissible(13):
            for group in abelian_groups(params.n) + nonabelian_groups(params.n):
                naive = BacktrackSearch({"incremental": False, "record_nodes": True})
                fast = BacktrackSearch({"record_nodes": True})
                where = f"{params} in {group.name}"
                self.assertEqual(naive.run(group, params.m, params.k, params.lam),
                                 fast.run(group, params.m, params.k, params.lam), where)
                self.assertEqual(naive.node_log, fast.node_log, where)
                self.assertEqual(naive.stats.partial_rejections, fast.stats.partial_rejections, where)

    def test_stats(self):
        engine = BacktrackSearch()
        found = engine.run(self.z5, 2, 2, 1)
        self.assertEqual(engine.stats.hits, len(found))
        self.assertGreater(engine.stats.nodes, engine.stats.hits)
        self.assertEqual(set(engine.stats.to_json_obj()),
                         {"nodes", "partial_rejections", "capacity_prunes", "hits", "elapsed"})
        total = SearchStats(nodes=3, hits=1)
        total.merge(SearchStats(nodes=2, capacity_prunes=4))
        self.assertEqual((total.nodes, total.hits, total.capacity_prunes), (5, 1, 4))

    def test_debug_checks(self):
        self.assertEqual(search_all(self.d10, 2, 3, 1, {"debug_checks": True}), search_all(self.d10, 2, 3, 1))

    def test_run_params_override_constructor_params(self):
        engine = BacktrackSearch({"max_order": 4})
        with self.assertRaises(ParameterError):
            engine.run(self.z5, 2, 2, 1)
        self.assertEqual(len(engine.run(self.z5, 2, 2, 1, {"max_order": 5})), 4)

    def test_order_limit(self):
        with self.assertRaises(ParameterError):
            search_all(self.z10, 2, 3, 1, {"max_order": 9})
        self.assertEqual(len(search_all(self.z10, 2, 3, 1, {"max_order": 9, "allow_large": True})),
                         len(search_all(self.z10, 2, 3, 1)))

    def test_inadmissible(self):
        with self.assertRaises(ParameterError):
            search_all(parse_group_spec("Z7"), 2, 2, 1)

    def test_search_first(self):
        first = search_first(self.z10, 2, 3, 1)
        self.assertIn(first, search_all(self.z10, 2, 3, 1))
        self.assertIsNone(search_first(parse_group_spec("Z9"), 2, 4, 2), 'Z9 has no (9,2,4,2)-SEDF')

    def test_parallel_matches_sequential(self):
        sequential = search_all(self.z10, 2, 3, 1)
        for split_depth in (0, 1, 2):
            parallel = search_all(self.z10, 2, 3, 1, {"jobs": 2, "split_depth": split_depth})
            self.assertEqual(parallel, sequential, f'split depth {split_depth}')
        self.assertEqual(search_all(self.d10, 2, 3, 1, {"jobs": 2}), search_all(self.d10, 2, 3, 1))


if __name__ == "__main__":
    unittest.main()

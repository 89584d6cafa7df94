"""T-tree structure, search semantics, and oracle equivalence."""

import math
from bisect import bisect_left, insort

import pytest
from hypothesis import given, settings, strategies as st

from locdb.index import DuplicateKeyError, TTree


class SortedOracle:
    """Reference store: plain sorted list + dict, independent of the tree."""

    def __init__(self):
        self.keys = []
        self.payloads = {}

    def insert(self, key, payload):
        insort(self.keys, key)
        self.payloads[key] = payload

    def delete(self, key):
        self.keys.pop(bisect_left(self.keys, key))
        del self.payloads[key]

    def lookup(self, key):
        i = bisect_left(self.keys, key)
        if i < len(self.keys) and self.keys[i] == key:
            return True, self.payloads[key]
        return False, None


def check_height_bound(tree):
    if tree.node_count:
        assert tree.height() <= 1.44 * math.log2(tree.node_count + 1) + 1


class TestBasics:
    def test_insert_into_empty(self):
        t = TTree(y1=15)
        t.insert(5, "five")
        assert len(t) == 1
        assert t.height() == 1
        assert t.keys_in_order() == [5]
        assert t.validate().ok

    def test_ascending_insert_stays_sorted_and_balanced(self):
        t = TTree(y1=15)
        for k in range(1, 101):
            t.insert(k)
        assert t.keys_in_order() == list(range(1, 101))
        assert t.validate().ok
        check_height_bound(t)

    def test_duplicate_insert_rejected_tree_unchanged(self):
        t = TTree(y1=4)
        for k in (3, 1, 7, 5):
            t.insert(k)
        before = t.keys_in_order()
        with pytest.raises(DuplicateKeyError):
            t.insert(5)
        assert t.keys_in_order() == before
        assert len(t) == 4
        assert t.validate().ok

    def test_delete_only_key_empties_tree(self):
        t = TTree()
        t.insert(42)
        t.delete(42)
        assert len(t) == 0
        assert t.root is None
        assert t.validate().ok

    def test_delete_absent_key_raises_tree_unchanged(self):
        t = TTree(y1=4)
        for k in (10, 20, 30):
            t.insert(k)
        with pytest.raises(KeyError):
            t.delete(25)
        assert t.keys_in_order() == [10, 20, 30]
        assert t.validate().ok

    def test_build_then_delete_evens(self):
        t = TTree(y1=15)
        for k in range(1, 1001):
            t.insert(k)
        for k in range(2, 1001, 2):
            t.delete(k)
        assert t.keys_in_order() == list(range(1, 1001, 2))
        assert t.validate().ok
        check_height_bound(t)

    def test_key_range_enforced(self):
        t = TTree()
        with pytest.raises(ValueError):
            t.insert(-1)
        with pytest.raises(ValueError):
            t.insert(2**64)
        with pytest.raises(TypeError):
            t.insert("abc")


class TestSearch:
    def test_empty_tree(self):
        res = TTree().search(7)
        assert not res.found
        assert res.stats.nodes_visited == 0

    def test_single_node_hit_visits_one_node(self):
        t = TTree(y1=4)
        for k in (10, 20, 30):
            t.insert(k, payload=f"p{k}")
        res = t.search(20)
        assert res.found and res.payload == "p20"
        assert res.stats.nodes_visited == 1

    def test_miss_below_all_keys(self):
        t = TTree(y1=4)
        for k in (10, 20, 30):
            t.insert(k)
        res = t.search(5)
        assert not res.found
        assert res.stats.nodes_visited == 1

    def test_miss_inside_bounding_node(self):
        t = TTree(y1=2)
        for k in (10, 30, 40, 50, 20):
            t.insert(k)
        res = t.search(25)
        assert not res.found

    def test_random_probes_match_membership_oracle(self):
        import numpy as np
        rng = np.random.default_rng(7)
        keys = rng.choice(10**6, size=10_000, replace=False)
        t = TTree(y1=15)
        oracle = SortedOracle()
        for k in keys:
            t.insert(int(k), payload=int(k) * 3)
            oracle.insert(int(k), int(k) * 3)
        probes = np.concatenate([
            rng.choice(keys, size=5000),
            rng.choice(10**6, size=5000),
        ])
        height = t.height()
        for probe in probes:
            found, payload = oracle.lookup(int(probe))
            res = t.search(int(probe))
            assert res.found == found
            if found:
                assert res.payload == payload
            assert res.stats.nodes_visited <= height

    def test_stats_nodes_bounded_by_height(self):
        t = TTree(y1=3)
        for k in range(200):
            t.insert(k)
        for probe in (0, 57, 199, 500):
            res = t.search(probe)
            assert res.stats.nodes_visited <= t.height()
            assert res.stats.comparisons >= res.stats.nodes_visited


class TestValidate:
    def test_empty_ok(self):
        assert TTree().validate().ok

    def test_corrupted_order_reports_node_path(self):
        t = TTree(y1=4)
        for k in range(1, 40):
            t.insert(k)
        node = t.root.left
        node.keys[0], node.keys[-1] = node.keys[-1], node.keys[0]
        report = t.validate()
        assert not report.ok
        assert "root.left" in report.message

    def test_stale_cache_detected(self):
        t = TTree(y1=4)
        for k in range(1, 20):
            t.insert(k)
        t.root.min_key -= 1  # desync cache from items
        report = t.validate()
        assert not report.ok
        assert "min/max" in report.message

    def test_size_mismatch_detected(self):
        t = TTree(y1=4)
        for k in range(10):
            t.insert(k)
        t.size += 1
        assert not t.validate().ok


@st.composite
def op_sequences(draw):
    n = draw(st.integers(min_value=1, max_value=120))
    ops = []
    for _ in range(n):
        ops.append((
            draw(st.sampled_from(["insert", "delete", "search"])),
            draw(st.integers(min_value=0, max_value=60)),
        ))
    return ops


class TestProperties:
    @settings(deadline=None, max_examples=120)
    @given(ops=op_sequences(), y1=st.integers(min_value=1, max_value=8))
    def test_random_ops_match_oracle_and_validate(self, ops, y1):
        t = TTree(y1=y1)
        oracle = SortedOracle()
        for op, key in ops:
            present, _ = oracle.lookup(key)
            if op == "insert":
                if present:
                    with pytest.raises(DuplicateKeyError):
                        t.insert(key, key)
                else:
                    t.insert(key, key)
                    oracle.insert(key, key)
            elif op == "delete":
                if present:
                    t.delete(key)
                    oracle.delete(key)
                else:
                    with pytest.raises(KeyError):
                        t.delete(key)
            else:
                res = t.search(key)
                assert res.found == present
            report = t.validate()
            assert report.ok, report.message
            check_height_bound(t)
        assert t.keys_in_order() == oracle.keys

    @settings(deadline=None, max_examples=30)
    @given(keys=st.lists(st.integers(min_value=0, max_value=10**9),
                         min_size=1, max_size=400, unique=True),
           y1=st.integers(min_value=1, max_value=16))
    def test_bulk_insert_then_drain(self, keys, y1):
        t = TTree(y1=y1)
        for k in keys:
            t.insert(k)
        assert t.keys_in_order() == sorted(keys)
        assert t.validate().ok
        check_height_bound(t)
        for k in keys:
            t.delete(k)
        assert len(t) == 0
        assert t.validate().ok

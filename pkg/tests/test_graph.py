import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wfgraph import ConcurrentGraph, OpResult
from wfgraph.harness import SeqGraphModel, seq_apply
from wfgraph.harness.stress import random_point_op
from wfgraph.nodes import KEY_MAX, KEY_MIN
from wfgraph.snapshot import ReportAction, acquire_snap_collector

R = OpResult


def build(vertices=(), edges=()):
    g = ConcurrentGraph(max_threads=8)
    t = g.register_thread()
    for v in vertices:
        g.add_vertex(v, t)
    for a, b in edges:
        assert g.add_edge(a, b, t) is R.EDGE_ADDED
    return g, t


def node(g, k):
    cv = g.vh.vnxt.target
    while cv.k != k:
        cv = cv.vnxt.target
    return cv


def vkeys(g):
    out, cv = [], g.vh.vnxt.target
    while cv.k != KEY_MAX:
        out.append(cv.k)
        cv = cv.vnxt.target
    return out


def mark_vertex(g, k):
    n = node(g, k)
    assert n.vnxt.attempt_mark(n.vnxt.target)
    return n


def edge_node(g, k, l):
    e = node(g, k).ehead.enext.target
    while e.l != l:
        e = e.enext.target
    return e


def vreports(g):
    sc = g.psc.get()
    return [(r.vnode.k, r.action) for t in range(g.max_threads) for r in sc.vreport_chain(t)]


def ereports(g):
    sc = g.psc.get()
    return [
        (r.source.k, r.enode.l, r.action) for t in range(g.max_threads) for r in sc.ereport_chain(t)
    ]


# -- locate helpers -----------------------------------------------------------


def test_loc_v_examples():
    g, t = build([3, 7])
    pv, cv = g.loc_v(g.vh, 7, t)
    assert (pv.k, cv.k) == (3, 7)
    g2, t2 = build()
    pv, cv = g2.loc_v(g2.vh, 5, t2)
    assert pv is g2.vh and cv.k == KEY_MAX


def test_loc_v_unlinks_and_reports_marked():
    g, t = build([3, 7])
    acquire_snap_collector(g)
    n3 = mark_vertex(g, 3)
    pv, cv = g.loc_v(g.vh, 7, t)
    assert pv is g.vh and cv.k == 7
    assert vkeys(g) == [7]
    assert (3, ReportAction.DELETE) in vreports(g)
    assert n3.vnxt.marked


def test_loc_v_never_returns_marked_match():
    g, t = build([5])
    mark_vertex(g, 5)
    _, cv = g.loc_v(g.vh, 5, t)
    assert cv.k == KEY_MAX
    assert g.add_vertex(5, t) is R.VERTEX_ADDED


def test_loc_e_examples():
    g, t = build([1, 2, 4, 9], [(2, 1), (2, 4), (2, 9)])
    u = node(g, 2)
    pe, ce = g.loc_e(u, 4, t)
    assert (pe.l, ce.l) == (1, 4)
    g2, t2 = build([1])
    u = node(g2, 1)
    pe, ce = g2.loc_e(u, 2, t2)
    assert pe is u.ehead and ce.l == KEY_MAX


def test_loc_e_purges_edge_to_marked_vertex():
    g, t = build([1, 4], [(1, 4)])
    acquire_snap_collector(g)
    e = edge_node(g, 1, 4)
    mark_vertex(g, 4)
    u = node(g, 1)
    pe, ce = g.loc_e(u, 4, t)
    assert pe is u.ehead and ce.l == KEY_MAX
    assert e.enext.marked  # marked before it was unlinked
    assert u.ehead.enext.target.l == KEY_MAX
    assert (1, 4, ReportAction.DELETE) in ereports(g)


def test_loc_c_examples():
    g, _ = build([3, 7])
    pv, cv = g.loc_c(g.vh, 5)
    assert (pv.k, cv.k) == (3, 7)
    g2, _ = build()
    pv, cv = g2.loc_c(g2.vh, 1)
    assert pv is g2.vh and cv.k == KEY_MAX


def test_loc_c_traverses_marked_without_unlinking():
    g, _ = build([3])
    n3 = mark_vertex(g, 3)
    pv, cv = g.loc_c(g.vh, 3)
    assert pv is g.vh and cv is n3
    assert vkeys(g) == [3]


@pytest.mark.parametrize("plus", ["v", "c"])
def test_con_plus_examples(plus):
    g, t = build([3, 7])
    f = (lambda k, l: g.con_v_plus(k, l, t)) if plus == "v" else g.con_c_plus
    u, v, ok = f(3, 7)
    assert ok and (u.k, v.k) == (3, 7)
    u, v, ok = f(7, 3)
    assert ok and (u.k, v.k) == (7, 3)
    g2, t2 = build([3])
    f2 = (lambda k, l: g2.con_v_plus(k, l, t2)) if plus == "v" else g2.con_c_plus
    assert f2(3, 7) == (None, None, False)


# -- vertex operations --------------------------------------------------------


def test_add_vertex_examples():
    g, t = build()
    assert g.add_vertex(5, t) is R.VERTEX_ADDED and vkeys(g) == [5]
    assert g.add_vertex(5, t) is R.VERTEX_ALREADY_PRESENT
    g, t = build([3, 7])
    assert g.add_vertex(5, t) is R.VERTEX_ADDED and vkeys(g) == [3, 5, 7]


def test_remove_vertex_examples():
    g, t = build([5])
    assert g.remove_vertex(5, t) is R.VERTEX_REMOVED and vkeys(g) == []
    assert g.remove_vertex(5, t) is R.VERTEX_NOT_PRESENT
    g, t = build([3, 5])
    g.remove_vertex(5, t)
    assert g.contains_vertex(5, t) is R.VERTEX_NOT_PRESENT


def test_contains_vertex_examples():
    g, t = build([5])
    assert g.contains_vertex(5, t) is R.VERTEX_PRESENT
    assert build()[0].contains_vertex(5, 0) is R.VERTEX_NOT_PRESENT


def test_contains_vertex_on_marked_node_reports_delete():
    g, t = build([5])
    acquire_snap_collector(g)
    mark_vertex(g, 5)
    assert g.contains_vertex(5, t) is R.VERTEX_NOT_PRESENT
    assert vreports(g) == [(5, ReportAction.DELETE)]


def test_present_decisions_insert_report_same_node():
    g, t = build([5])
    sc = acquire_snap_collector(g)
    n5 = node(g, 5)
    g.add_vertex(5, t)
    g.contains_vertex(5, t)
    assert [r.vnode for r in sc.vreport_chain(t)] == [n5, n5]
    assert all(r.action is ReportAction.INSERT for r in sc.vreport_chain(t))


def test_no_reports_without_collector():
    g, t = build([1, 2], [(1, 2)])
    g.remove_vertex(2, t)
    assert g.psc.get() is None


# -- edge operations ----------------------------------------------------------


def test_add_edge_examples():
    g, t = build([1, 2])
    assert g.add_edge(1, 2, t) is R.EDGE_ADDED
    assert g.add_edge(1, 2, t) is R.EDGE_PRESENT
    g, t = build([1])
    assert g.add_edge(1, 9, t) is R.VERTEX_NOT_PRESENT


def test_remove_edge_examples():
    g, t = build([1, 2], [(1, 2)])
    assert g.remove_edge(1, 2, t) is R.EDGE_REMOVED
    assert g.read_state().edge_set() == frozenset()
    assert g.remove_edge(1, 2, t) is R.EDGE_NOT_PRESENT
    g, t = build([1])
    assert g.remove_edge(1, 2, t) is R.VERTEX_NOT_PRESENT


def test_contains_edge_examples():
    g, t = build([1, 2], [(1, 2)])
    assert g.contains_edge(1, 2, t) is R.EDGE_PRESENT
    assert R.EDGE_FOUND is R.EDGE_PRESENT
    g, t = build([1, 2])
    assert g.contains_edge(1, 2, t) is R.EDGE_NOT_PRESENT


def test_contains_edge_on_marked_edge_reports_delete():
    g, t = build([1, 2], [(1, 2)])
    acquire_snap_collector(g)
    e = edge_node(g, 1, 2)
    assert e.enext.attempt_mark(e.enext.target)
    assert g.contains_edge(1, 2, t) is R.EDGE_NOT_PRESENT
    assert ereports(g) == [(1, 2, ReportAction.DELETE)]


def test_stale_edge_to_old_generation_is_dead():
    g, t = build([1, 2], [(1, 2)])
    g.remove_vertex(2, t)
    g.add_vertex(2, t)
    assert g.contains_edge(1, 2, t) is R.EDGE_NOT_PRESENT
    assert g.add_edge(1, 2, t) is R.EDGE_ADDED
    assert g.contains_edge(1, 2, t) is R.EDGE_PRESENT


def test_marked_endpoint_gives_vertex_not_present():
    g, t = build([1, 2], [(1, 2)])
    mark_vertex(g, 2)
    for op in (g.add_edge, g.remove_edge, g.contains_edge):
        assert op(1, 2, t) is R.VERTEX_NOT_PRESENT


@pytest.mark.parametrize("op", ["add_edge", "remove_edge", "contains_edge"])
def test_self_loops_rejected(op):
    g, t = build([1])
    with pytest.raises(ValueError):
        getattr(g, op)(1, 1, t)


@pytest.mark.parametrize("bad", [KEY_MIN, KEY_MAX, 2**63, True, 1.0, "3"])
def test_key_domain(bad):
    g, t = build()
    with pytest.raises((TypeError, ValueError)):
        g.add_vertex(bad, t)


def test_extreme_usable_keys():
    g, t = build([KEY_MIN + 1, KEY_MAX - 1], [(KEY_MIN + 1, KEY_MAX - 1)])
    assert g.read_state().edge_set() == {(KEY_MIN + 1, KEY_MAX - 1)}


def test_bulk_load_matches_incremental():
    keys, edges = [5, 1, 3], [(1, 3), (3, 5), (5, 1), (1, 3)]
    g = ConcurrentGraph()
    g.bulk_load(keys, edges)
    h, _ = build([1, 3, 5], [(1, 3), (3, 5), (5, 1)])
    assert g.read_state() == h.read_state()
    g.check_structure()
    with pytest.raises(RuntimeError):
        g.bulk_load([9], [])


# -- properties ---------------------------------------------------------------

point_ops = st.one_of(
    st.tuples(st.sampled_from(["add_vertex", "remove_vertex", "contains_vertex"]),
              st.tuples(st.integers(0, 7))),
    st.tuples(st.sampled_from(["add_edge", "remove_edge", "contains_edge"]),
              st.lists(st.integers(0, 7), min_size=2, max_size=2, unique=True).map(tuple)),
)


@settings(max_examples=150, deadline=None)
@given(st.lists(point_ops, max_size=80))
def test_sequential_equivalence(ops):
    g, t = build()
    model = SeqGraphModel()
    for op, args in ops:
        want, model = seq_apply(model, op, args)
        assert getattr(g, op)(*args, t) is want, (op, args)
    g.check_structure()
    assert g.read_state() == model.snapshot()


def test_sequential_equivalence_long_run():
    rng = random.Random(7)
    g, t = build()
    model = SeqGraphModel()
    for _ in range(3000):
        op, args = random_point_op(rng, 16)
        want, model = seq_apply(model, op, args)
        assert getattr(g, op)(*args, t) is want
    assert g.read_state() == model.snapshot()


def test_sorted_no_duplicates_after_concurrent_churn():
    from wfgraph.harness.stress import random_history

    g, _ = random_history(3, threads=4, ops_per_thread=400, key_space=10)
    g.check_structure()
    s = g.read_state()
    assert list(s.vertices) == sorted(set(s.vertices))
    for k in s.vertices:
        assert list(s.out(k)) == sorted(set(s.out(k)))

"""Acceptance checks; run alone with ``pytest tests/test_acceptance.py -v``.

A one-line PASS/FAIL summary per criterion is printed at the end of the
pytest run (section "acceptance criteria").
"""
import random
import threading
import time
from collections import Counter

import pytest

from oracles import brute_argmax, brute_betweenness, brute_diameter
from wfgraph import ConcurrentGraph, ReportAction, SnapCollector, hooks
from wfgraph.analytics import GraphView, betweenness_centrality, diameter
from wfgraph.bench import (
    READ_HEAVY,
    UPDATE_HEAVY,
    BenchConfig,
    MetricsRecord,
    SplitMix64,
    load_snap_edge_list,
    run_benchmark,
)
from wfgraph.harness import SeqGraphModel, StallPlan, check_linearizable, run_stall_test, seq_apply
from wfgraph.harness.stall import Scenario
from wfgraph.harness.stress import fine_switching, random_history, random_point_op
from wfgraph.nodes import VNode


@pytest.mark.criterion(1, "sequential equivalence, 10k ops over 64 keys")
def test_c1_sequential_equivalence(detail):
    rng = random.Random(2024)
    g = ConcurrentGraph()
    t = g.register_thread()
    model = SeqGraphModel()
    t0 = time.perf_counter()
    for i in range(10_000):
        op, args = random_point_op(rng, 64)
        want, model = seq_apply(model, op, args)
        got = getattr(g, op)(*args, t)
        assert got is want, f"op {i}: {op}{args} -> {got}, model says {want}"
    elapsed = time.perf_counter() - t0
    assert g.read_state() == model.snapshot()
    detail(f"{elapsed:.2f}s, final |V|={len(model.vertices)} |E|={len(model.edges)}")
    assert elapsed < 5.0


@pytest.mark.criterion(2, "linearizability, 100 histories of 4x300 point ops, 8 keys")
def test_c2_point_histories(detail):
    t0 = time.perf_counter()
    nodes = 0
    for seed in range(100):
        _, events = random_history(seed, threads=4, ops_per_thread=300, key_space=8)
        v = check_linearizable(events)
        assert v.ok, f"seed {seed}: counterexample " + "; ".join(map(str, v.counterexample))
        nodes += v.nodes
    elapsed = time.perf_counter() - t0
    detail(f"{elapsed:.1f}s, {nodes} search nodes")
    assert elapsed < 120


@pytest.mark.criterion(3, "snapshot consistency, 50 histories of 3x200 ops + 5 snaps, 6 keys")
def test_c3_snapshot_histories(detail):
    t0 = time.perf_counter()
    overlapped = 0
    for seed in range(50):
        _, events = random_history(
            1000 + seed, threads=3, ops_per_thread=200, key_space=6, snap_threads=1,
            snaps_per_thread=5, snap_pause_us=800,
        )
        v = check_linearizable(events)
        assert v.ok, f"seed {seed}: counterexample " + "; ".join(map(str, v.counterexample))
        overlapped += _snaps_overlapping_updates(events)
    elapsed = time.perf_counter() - t0
    detail(f"{elapsed:.1f}s, {overlapped}/250 snaps overlapped a point op")
    assert elapsed < 120


def _snaps_overlapping_updates(events):
    from wfgraph.harness import pair_events

    ops = pair_events(events)
    snaps = [o for o in ops if o.op == "snap"]
    pts = [o for o in ops if o.op != "snap"]
    return sum(
        any(p.invoke_ts < s.resp_ts and s.invoke_ts < p.resp_ts for p in pts) for s in snaps
    )


@pytest.mark.criterion(4, "quiescent exactness on 100 random graphs")
def test_c4_quiescent_exactness(detail):
    rng = random.Random(77)
    sizes = []
    for _ in range(100):
        g = ConcurrentGraph()
        t = g.register_thread()
        n = rng.randint(0, 200)
        keys = rng.sample(range(-1000, 1000), n)
        for k in keys:
            g.add_vertex(k, t)
        m_target = rng.randint(0, min(400, n * (n - 1)))
        edges = set()
        while len(edges) < m_target:
            a, b = rng.sample(keys, 2)
            edges.add((a, b))
        for a, b in edges:
            g.add_edge(a, b, t)
        # removals leave stale edge nodes behind that the snapshot must skip
        for k in rng.sample(keys, n // 10):
            g.remove_vertex(k, t)
        for a, b in rng.sample(sorted(edges), len(edges) // 10):
            g.remove_edge(a, b, t)
        direct = g.read_state()
        snap = g.take_snapshot(t)
        assert snap == direct
        assert len(direct.vertices) <= 200 and direct.n_edges() <= 400
        sizes.append((len(direct.vertices), direct.n_edges()))
    detail(f"max |V|={max(s[0] for s in sizes)}, max |E|={max(s[1] for s in sizes)}")


@pytest.mark.criterion(5, "wait-free helping at every stall site")
def test_c5_stall_sites(detail):
    rng = random.Random(5)
    verts = list(range(60))
    edges = sorted({tuple(rng.sample(verts, 2)) for _ in range(150)})
    worst = 0.0
    for site in hooks.STALL_SITES:
        for release in ("manual", "never"):
            rep = run_stall_test(StallPlan(site, release=release), Scenario(verts, edges))
            assert rep.passed, f"{site}/{release}: {rep.reason} (phases {rep.phase_reached})"
            assert rep.stalled, f"{site}: victim never reached the stall point"
            assert rep.phase_reached["victim"] == site
            results = list(rep.results.values())
            assert all(r == results[0] for r in results)
            worst = max(worst, *rep.helper_seconds)
    detail(f"{len(hooks.STALL_SITES)} sites x 2 release modes, slowest helper {worst * 1000:.1f} ms")
    assert worst < 5.0


@pytest.mark.criterion(6, "report blocking under 10^4 concurrent attempts")
def test_c6_report_blocking(detail):
    T = 16
    sc = SnapCollector(T)
    vn = [VNode(k) for k in range(T)]
    for t in range(T):
        for i in range(t % 4):
            sc.push_vreport(vn[i], ReportAction.INSERT, t)
            sc.push_ereport(vn[i].ehead, ReportAction.DELETE, t, vn[t])
    sc.deactivate()
    sc.block_further_reports()
    before = [
        (slot.get(), [id(r) for r in sc._chain(slot)]) for slot in sc.v_reports + sc.e_reports
    ]
    accepted = []
    per_thread = 10_000 // T

    def hammer(w):
        ok = 0
        for i in range(per_thread):
            tid = (w + i) % T
            if i % 2:
                ok += sc.push_vreport(vn[i % T], ReportAction.DELETE, tid)
            else:
                ok += sc.push_ereport(vn[i % T].ehead, ReportAction.INSERT, tid, vn[w])
        accepted.append(ok)

    with fine_switching():
        ts = [threading.Thread(target=hammer, args=(w,)) for w in range(T)]
        for th in ts:
            th.start()
        for th in ts:
            th.join()
    after = [
        (slot.get(), [id(r) for r in sc._chain(slot)]) for slot in sc.v_reports + sc.e_reports
    ]
    assert sum(accepted) == 0
    assert all(b[0] is a[0] or b[0] == a[0] for b, a in zip(before, after))
    assert [b[1] for b in before] == [a[1] for a in after]
    assert all(s.marked for s in sc.v_reports + sc.e_reports)
    detail(f"{per_thread * T} attempts over {T} threads, 0 accepted")


def _random_view(rng, n):
    p = rng.choice([0.0, 0.05, 0.1, 0.2, 0.35, 0.6, 1.0])
    keys = sorted(rng.sample(range(-500, 500), n))
    edges = [(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < p]
    return keys, edges


@pytest.mark.criterion(7, "analytics equal brute-force oracles")
def test_c7_analytics_oracles(detail):
    rng = random.Random(7)
    for i in range(200):
        n = rng.randint(0, 40)
        keys, edges = _random_view(rng, n)
        v = GraphView.from_edges(keys, [(keys[a], keys[b]) for a, b in edges])
        assert diameter(v) == brute_diameter(n, edges), f"diameter graph {i}"
    ties = 0
    worst = 0.0
    for i in range(200):
        n = rng.randint(0, 20)
        keys, edges = _random_view(rng, n)
        v = GraphView.from_edges(keys, [(keys[a], keys[b]) for a, b in edges])
        scores, top = betweenness_centrality(v)
        want = brute_betweenness(n, edges)
        for a, b in zip(scores, want):
            worst = max(worst, abs(a - float(b)))
        assert worst <= 1e-9, f"BC graph {i}"
        assert top == brute_argmax(keys, want), f"argmax graph {i}"
        ties += n > 1 and sum(s == max(want) for s in want) > 1
    detail(f"max BC error {worst:.1e}, {ties} BC instances with tied maxima")


@pytest.mark.slow
@pytest.mark.criterion(8, "cooperation trend for snapshot latency (2/4/8 threads)")
def test_c8_cooperation_trend(detail):
    runs, seconds = 3, 8.0
    prof = READ_HEAVY.with_analytics("snapshot")

    def latency(engine, threads):
        total = MetricsRecord()
        for r in range(runs):
            cfg = BenchConfig(threads=threads, duration_seconds=seconds, initial_vertices=1000,
                              initial_edges=2000, seed=r, profile=prof, engine=engine)
            total.merge(run_benchmark(cfg))
        assert total.count("snapshot") > 0
        return total.avg_us("snapshot")

    wf = {t: latency("waitfree", t) for t in (2, 4, 8)}
    base8 = latency("baseline", 8)
    detail(
        "waitfree us/snap "
        + ", ".join(f"{t}t={wf[t]:.0f}" for t in (2, 4, 8))
        + f"; baseline 8t={base8:.0f}; ratio 8t/2t={wf[8] / wf[2]:.2f}"
    )
    assert wf[8] <= 2 * wf[2]
    assert wf[8] <= base8


@pytest.mark.criterion(9, "profile fidelity over 10^5 draws")
def test_c9_profile_fidelity(detail):
    n = 100_000
    msg = []
    for name, prof in (("read-heavy", READ_HEAVY), ("update-heavy", UPDATE_HEAVY)):
        rng = SplitMix64(9)
        counts = Counter(prof.draw(rng) for _ in range(n))
        emp = [counts[c] / n for c in prof.classes]
        vs_profile = max(abs(e - f) for e, f in zip(emp, prof.frequencies()))
        vs_raw = max(abs(e - p / 100) for e, p in zip(emp, prof.percentages))
        msg.append(f"{name}: max dev {vs_profile * 100:.2f}% (vs raw/100: {vs_raw * 100:.2f}%)")
        assert vs_profile < 0.01
    detail("; ".join(msg))


def _write_synthetic(path, rng, n_lines, comment_frac, dup_frac, n_nodes):
    """Write a SNAP-style file; return the exact vertex set and edge set it encodes."""
    n_comments = round(n_lines * comment_frac)
    n_dups = round(n_lines * dup_frac)
    n_unique = n_lines - n_comments - n_dups
    edges = []
    seen = set()
    while len(edges) < n_unique:
        a, b = rng.randrange(n_nodes), rng.randrange(n_nodes)
        if a != b and (a, b) not in seen:
            seen.add((a, b))
            edges.append((a, b))
    lines = [f"{a}\t{b}" for a, b in edges]
    lines += [f"{a}\t{b}" for a, b in rng.sample(edges, n_dups)]
    rng.shuffle(lines)
    for _ in range(n_comments):
        lines.insert(rng.randrange(len(lines) + 1), "# comment line")
    path.write_text("\n".join(lines) + "\n")
    return {x for e in edges for x in e}, seen


@pytest.mark.criterion(10, "SNAP ingestion: exact counts, ~36K-vertex file under 5 s")
def test_c10_dataset_ingestion(tmp_path, detail):
    rng = random.Random(10)
    small = tmp_path / "small.txt"
    verts, edges = _write_synthetic(small, rng, 1000, 0.05, 0.02, 400)
    text = small.read_text().splitlines()
    assert len(text) == 1000 and sum(l.startswith("#") for l in text) == 50
    keys, got = load_snap_edge_list(small)
    assert set(keys) == verts and len(keys) == len(verts)
    assert set(got) == edges and len(got) == len(edges) == 930

    big = tmp_path / "big.txt"
    big_v, big_e = _write_synthetic(big, rng, 90_000, 0.001, 0.01, 36_682)
    t0 = time.perf_counter()
    keys, got = load_snap_edge_list(big)
    load_s = time.perf_counter() - t0
    g = ConcurrentGraph()
    g.bulk_load(keys, got)
    total_s = time.perf_counter() - t0
    assert len(keys) == len(big_v) and len(got) == len(big_e)
    detail(f"{len(keys)} vertices / {len(got)} edges: parse {load_s:.2f}s, parse+graph {total_s:.2f}s")
    assert load_s < 5.0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))

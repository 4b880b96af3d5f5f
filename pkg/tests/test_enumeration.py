import io
import itertools
import json

import pytest

from energia.conjecture import verdict
from energia.enumeration import (
    GENERATOR_MAX_N,
    ScanError,
    ScanReport,
    default_resolver,
    external_graph6_path,
    generate_connected_bounded,
    scan_counts_table,
    scan_graphs,
    scan_stream,
)
from energia.graph_core import (
    canonical_code,
    cycle_graph,
    decode_graph6,
    encode_graph6,
    is_connected,
    max_degree,
    path_graph,
    star_graph,
)

from conftest import DATA, geng_lines


def brute_force_class_count(n, delta_max):
    """Orbits of labelled connected graphs with bounded degree, by explicit relabelling.

    Graphs are edge bitmasks over vertex pairs; each new orbit is expanded
    under all n! permutations and marked as seen.
    """
    pairs = [(u, v) for v in range(n) for u in range(v)]
    index = {p: i for i, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))

    def connected(edges):
        adj = {v: set() for v in range(n)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        seen, stack = {0}, [0]
        while stack:
            for w in adj[stack.pop()] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == n

    seen = set()
    classes = 0

    def dfs(i, deg, chosen):
        nonlocal classes
        if i == len(pairs):
            mask = sum(1 << index[e] for e in chosen)
            if mask in seen or not connected(chosen):
                return
            classes += 1
            for p in perms:
                seen.add(sum(1 << index[tuple(sorted((p[u], p[v])))] for u, v in chosen))
            return
        u, v = pairs[i]
        dfs(i + 1, deg, chosen)
        if deg[u] < delta_max and deg[v] < delta_max:
            deg[u] += 1
            deg[v] += 1
            chosen.append((u, v))
            dfs(i + 1, deg, chosen)
            chosen.pop()
            deg[u] -= 1
            deg[v] -= 1

    dfs(0, [0] * n, [])
    return classes


def test_generate_three_three():
    gs = list(generate_connected_bounded(3, 3))
    assert {canonical_code(g) for g in gs} == {canonical_code(path_graph(3)), canonical_code(cycle_graph(3))}


def test_generate_four_two():
    gs = list(generate_connected_bounded(4, 2))
    assert {canonical_code(g) for g in gs} == {canonical_code(path_graph(4)), canonical_code(cycle_graph(4))}


def test_generate_seven_three_against_brute_force():
    gs = list(generate_connected_bounded(7, 3))
    assert len(gs) == brute_force_class_count(7, 3) == 64
    assert any(canonical_code(g) == canonical_code(cycle_graph(7)) for g in gs)


@pytest.mark.parametrize("n, d", [(5, 2), (5, 4), (6, 4)])
def test_generate_other_degrees_against_brute_force(n, d):
    assert len(list(generate_connected_bounded(n, d))) == brute_force_class_count(n, d)


@pytest.mark.parametrize("n", range(1, 10))
def test_generator_matches_geng_classes(n):
    gs = list(generate_connected_bounded(n, 3))
    codes = {canonical_code(g) for g in gs}
    assert len(codes) == len(gs)
    assert all(is_connected(g) and max_degree(g) <= 3 for g in gs)
    if n >= 6:
        geng = {canonical_code(decode_graph6(line)) for line in geng_lines(f"subcubic{n}")}
        assert codes == geng


def test_generator_envelope():
    with pytest.raises(ValueError):
        next(generate_connected_bounded(GENERATOR_MAX_N + 1, 3))


def test_scan_counts_small():
    for n, conj, raw in [(6, 1, 1), (7, 1, 2), (9, 3, 3)]:
        rep = scan_graphs(generate_connected_bounded(n, 3), 3)
        assert (rep.conjecture_hits, rep.raw_hits) == (conj, raw)


def test_scan_c7_is_the_extra_raw_hit():
    rep = scan_graphs(generate_connected_bounded(7, 3), 3)
    raw_only = [h for h in rep.hit_records if not h.conjecture]
    assert len(raw_only) == 1
    assert canonical_code(decode_graph6(raw_only[0].g6)) == canonical_code(cycle_graph(7))


def test_hits_reverify():
    rep = scan_stream(geng_lines("subcubic11"), 3)
    assert rep.raw_hits == len(rep.hit_records) == 5
    for h in rep.hit_records:
        v = verdict(decode_graph6(h.g6))
        assert v.raw_exceeds and v.is_conjecture_counterexample == h.conjecture
        assert v.energy == pytest.approx(h.energy, abs=1e-12)
    assert rep.conjecture_hits <= rep.raw_hits <= rep.total_scanned


def test_scan_deterministic_across_chunks_and_jobs():
    lines = geng_lines("subcubic10")
    base = scan_stream(lines, 3)
    for chunk, jobs in [(7, 1), (100, 2), (1000, 3)]:
        assert scan_stream(lines, 3, jobs=jobs, chunk_size=chunk) == base


def test_scan_order_independent():
    lines = geng_lines("subcubic9")
    assert scan_stream(lines[::-1], 3) == scan_stream(lines, 3)


def test_scan_delta_violation_aborts():
    lines = [encode_graph6(star_graph(4))]
    with pytest.raises(ScanError, match="line 1"):
        scan_stream(lines, 3)
    rep = scan_stream(lines, 3, on_error="skip")
    assert rep.skipped == 1 and rep.total_scanned == 0


def test_scan_malformed_record():
    lines = [b"Bw", b"B!!", b"Bo"]
    with pytest.raises(ScanError, match="line 2"):
        scan_stream(lines)
    rep = scan_stream(lines, on_error="skip")
    assert (rep.total_scanned, rep.skipped) == (2, 1)


def test_scan_mixed_n_rejected():
    with pytest.raises(ValueError):
        scan_stream([b"Bw", b"A_"])


def test_scan_empty():
    rep = scan_stream([])
    assert rep == ScanReport()


def test_scan_accepts_header():
    rep = scan_stream([b">>graph6<<Bw"])
    assert rep.total_scanned == 1 and rep.raw_hits == 1


def test_counts_table_builtin():
    rows = scan_counts_table(range(6, 10), default_resolver(DATA / "missing"))
    assert [r.conjecture_hits for r in rows] == [1, 1, 1, 3]
    assert [r.raw_hits for r in rows] == [1, 2, 1, 3]


def test_counts_table_missing_external(tmp_path):
    with pytest.raises(FileNotFoundError):
        scan_counts_table([10], default_resolver(tmp_path))


def test_counts_table_external_files(tmp_path):
    (tmp_path / "subcubic10.g6").write_bytes(b"\n".join(geng_lines("subcubic10")) + b"\n")
    rows = scan_counts_table([10], default_resolver(tmp_path))
    assert (rows[0].total_scanned, rows[0].conjecture_hits) == (1733, 2)


def test_external_path_names(tmp_path):
    assert external_graph6_path(12, 3, tmp_path).name == "subcubic12.g6"
    assert external_graph6_path(11, 4, tmp_path).name == "maxdeg4_11.g6"


def test_hit_json_fields():
    rep = scan_graphs(generate_connected_bounded(6, 3), 3)
    rec = rep.hit_records[0].to_json()
    assert set(rec) >= {"n", "g6", "energy", "mu", "delta", "score"}
    json.dumps(rec)

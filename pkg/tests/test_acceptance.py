"""Acceptance suite: every criterion at its stated tolerance, one pass/fail
line per criterion (visible with ``pytest -s`` or in captured output)."""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from jaglab.graph import (LabelledGraph, disjoint_union, reachable_set,
                          reduce_degree)
from jaglab.groups import (abelian_group, cayley_graph, grid_group, k_cycle,
                           p_k_path, power, symmetric_group, wreath_structure)
from jaglab.lang import compile_program, interpret
from jaglab.machine import (Limits, Verdict, accepts, build_config_graph,
                            check_orderable, check_traversable,
                            decide_co_st_connectivity)
from jaglab.algorithms import (abelian_e_values, abelian_ordering_run,
                               abelian_tower, digit_tuples,
                               doubling_machine, grid_traversal_program,
                               jump_to_target_program, run_register_machine,
                               symmetric_ordering_run, symmetric_tower,
                               tower_program, two_tour_guesser_program,
                               wreath_is_number, wreath_same,
                               wreath_successor, wreath_tower, wreath_value)
from jaglab.graph import target as path_target
from jaglab.spotcheck import run_spotcheck

from conftest import GRID_CASES


@contextmanager
def criterion(number, name, budget_s):
    t0 = time.time()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} ({name}): FAIL ({time.time() - t0:.1f}s)")
        raise
    elapsed = time.time() - t0
    status = "PASS" if elapsed < budget_s else "FAIL (over time budget)"
    print(f"ACCEPTANCE {number} ({name}): {status} "
          f"({elapsed:.1f}s < {budget_s}s)")
    assert elapsed < budget_s


def test_criterion_1_semantics_oracle_equivalence():
    with criterion(1, "accepts vs run enumeration", 10):
        result = run_spotcheck(pairs=50, seed=2024, max_configs=10_000)
        assert result.pairs >= 50
        assert result.agreements == result.pairs


def test_criterion_2_grid_traversal(grid_cayleys):
    with criterion(2, "grid traversal order", 60):
        prog = grid_traversal_program()
        for d, l in GRID_CASES:
            cay = grid_cayleys[(d, l)]
            g = cay.graph
            expected = tuple(cay.node_of[t] for t in digit_tuples((l,) * d))
            jag = compile_program(prog, g.degree)
            cg = build_config_graph(jag, g, Limits(max_configs=2_000_000))
            trav, _ = check_traversable(jag, g, config_graph=cg)
            ordb, order = check_orderable(jag, g, config_graph=cg)
            assert trav, (d, l)
            assert ordb, (d, l)
            assert order == expected, (d, l)


def test_criterion_3_abelian_ordering(abelian_corpus):
    with criterion(3, "abelian canonical ordering", 60):
        assert len(abelian_corpus) >= 10
        for moduli, gens_arg, group, gens, cay in abelian_corpus:
            assert group.order <= 64
            es = abelian_e_values(group, gens)
            prod = 1
            for e in es:
                prod *= e
            assert prod == group.order
            # canonical-path uniqueness by brute force over all digit words
            seen = {}
            for digits in digit_tuples(es):
                x = group.identity
                for gen, t in zip(gens, digits):
                    x = group.multiply(power(group, gen, t), x)
                assert x not in seen, (moduli, gens_arg, digits, seen[x])
                seen[x] = digits
            assert len(seen) == group.order
            order, _ = abelian_ordering_run(cay)
            assert len(order) == group.order
            assert len(set(order)) == group.order
        assert any(gens_arg is not None for _, gens_arg, *_ in abelian_corpus)


def test_criterion_4_symmetric_group():
    with criterion(4, "symmetric canonical forms", 10):
        for n in range(2, 7):
            group, gens = symmetric_group(n)
            cay = cayley_graph(group, gens)
            for k in range(2, n + 1):
                word = p_k_path(n, k)
                got = cay.element_at(
                    path_target(cay.graph, cay.graph.startnode, word))
                assert got == k_cycle(n, k), (n, k)
        for n in range(2, 5):
            group, gens = symmetric_group(n)
            cay = cayley_graph(group, gens)
            order = symmetric_ordering_run(cay)
            assert len(order) == group.order
            assert len(set(order)) == group.order
        assert len(symmetric_ordering_run(
            cayley_graph(*symmetric_group(4)))) == 24


def test_criterion_5_wreath_arithmetic():
    with criterion(5, "wreath counting", 30):
        # support identity by full enumeration on Z2 wr Z2 and Z2 wr Z3
        for hmod in (2, 3):
            ws = wreath_structure(*grid_group(1, 2), *grid_group(1, hmod))
            nonid = [g for g in ws.G.elements if g != ws.G.identity]
            for r in range(ws.H.order + 1):
                for hs in itertools.permutations(ws.H.elements, r):
                    for gs in itertools.product(nonid, repeat=r):
                        prod = ws.group.identity
                        for h, g in zip(hs, gs):
                            blk = ws.group.multiply(
                                ws.group.multiply(ws.delta_right(h),
                                                  ws.delta_left(g)),
                                ws.delta_right(ws.H.inverse(h)))
                            prod = ws.group.multiply(prod, blk)
                        assert prod == ws.point_support(hs, gs)
        # same/successor vs the support-count oracle, all pairs, |H| <= 4
        for h_group in (grid_group(1, 2), grid_group(1, 3), abelian_group((2, 2))):
            ws = wreath_structure(*grid_group(1, 2), *h_group)
            reps = [x for x in ws.group.elements if wreath_is_number(ws, x)]
            for x in reps:
                for y in reps:
                    vx, vy = wreath_value(ws, x), wreath_value(ws, y)
                    assert wreath_same(ws, x, y) == (vx == vy)
                    assert wreath_successor(ws, x, y) == (vy == vx + 1)
        # register-machine doubling saturates exactly at |H| = 4
        ws = wreath_structure(*grid_group(1, 2), *abelian_group((2, 2)))
        assert run_register_machine(doubling_machine(), ws, inputs=(2,)) == 4
        with pytest.raises(OverflowError):
            run_register_machine(doubling_machine(), ws, inputs=(3,))


def _connectivity_instances(grid_cayleys, abelian_corpus):
    """(automaton, graph, expected) across the families, 20 of each verdict."""
    out = []

    def add(jag, g):
        want = "connected" if g.targetnode in reachable_set(g, g.startnode) \
            else "disconnected"
        out.append((jag, g, want))

    for d, l in GRID_CASES:
        cay = grid_cayleys[(d, l)]
        g = cay.graph
        jag = compile_program(grid_traversal_program(), g.degree)
        connected = LabelledGraph(g.num_nodes, g.degree, g.rho, g.startnode,
                                  g.num_nodes - 1)
        add(jag, connected)
        add(jag, disjoint_union(g, g))

    for moduli, gens_arg, group, gens, cay in abelian_corpus:
        if group.order > 16:
            continue
        g = cay.graph
        jag = compile_program(tower_program(abelian_tower(cay)), g.degree)
        connected = LabelledGraph(g.num_nodes, g.degree, g.rho, g.startnode,
                                  g.num_nodes // 2)
        add(jag, connected)
        add(jag, disjoint_union(g, g))

    group, gens = symmetric_group(3)
    cay = cayley_graph(group, gens)
    jag = compile_program(tower_program(symmetric_tower(3)), 2)
    add(jag, LabelledGraph(6, 2, cay.graph.rho, cay.graph.startnode, 5))
    add(jag, disjoint_union(cay.graph, cay.graph))

    ws = wreath_structure(*grid_group(1, 2), *grid_group(1, 2))
    cay = cayley_graph(ws.group, ws.gens)
    tower = wreath_tower(
        ws, abelian_tower(cayley_graph(ws.G, ws.g_gens)),
        abelian_tower(cayley_graph(ws.H, ws.h_gens)))
    jag = compile_program(tower_program(tower), cay.graph.degree)
    add(jag, LabelledGraph(8, 2, cay.graph.rho, cay.graph.startnode, 7))
    add(jag, disjoint_union(cay.graph, cay.graph))

    from jaglab.families import parse_family
    for spec in ["direct(grid:d=1,l=2, grid:d=1,l=3)",
                 "direct(grid:d=1,l=3, grid:d=1,l=2)",
                 "direct(grid:d=1,l=2, grid:d=1,l=2)"]:
        fam = parse_family(spec)
        g = fam.graph
        jag = compile_program(tower_program(fam.tower), g.degree)
        add(jag, LabelledGraph(g.num_nodes, g.degree, g.rho, g.startnode,
                               g.num_nodes - 1))
        add(jag, disjoint_union(g, g))
    return out


def test_criterion_6_co_st_connectivity(grid_cayleys, abelian_corpus):
    with criterion(6, "co-st-connectivity vs reachability", 60):
        instances = _connectivity_instances(grid_cayleys, abelian_corpus)
        connected = [i for i in instances if i[2] == "connected"]
        disconnected = [i for i in instances if i[2] == "disconnected"]
        assert len(connected) >= 20 and len(disconnected) >= 20
        for jag, g, want in instances:
            assert decide_co_st_connectivity(
                jag, g, Limits(max_configs=2_000_000)) == want


def _bisim_corpus(grid_cayleys, abelian_corpus):
    corpus = []
    prog = grid_traversal_program()
    for d, l in GRID_CASES:
        corpus.append((prog, grid_cayleys[(d, l)].graph))
    for moduli, gens_arg, group, gens, cay in abelian_corpus:
        if group.order > 9:
            continue
        corpus.append((tower_program(abelian_tower(cay)), cay.graph))
    cay = cayley_graph(*symmetric_group(3))
    corpus.append((tower_program(symmetric_tower(3)), cay.graph))
    ws = wreath_structure(*grid_group(1, 2), *grid_group(1, 2))
    wcay = cayley_graph(ws.group, ws.gens)
    tower = wreath_tower(
        ws, abelian_tower(cayley_graph(ws.G, ws.g_gens)),
        abelian_tower(cayley_graph(ws.H, ws.h_gens)))
    corpus.append((tower_program(tower), wcay.graph))
    g22 = grid_cayleys[(2, 2)].graph
    corpus.append((jump_to_target_program(), g22))
    corpus.append((two_tour_guesser_program(),
                   LabelledGraph(2, 1, ((0,), (1,)), 0, 1)))
    return corpus


def test_criterion_7_compiler_bisimulation(grid_cayleys, abelian_corpus):
    with criterion(7, "interpreter/compiler agreement", 120):
        limits = Limits(max_configs=2_000_000)
        for prog, g in _bisim_corpus(grid_cayleys, abelian_corpus):
            res = interpret(prog, g, limits)
            jag = compile_program(prog, g.degree)
            cg = build_config_graph(jag, g, limits)
            verdict = accepts(jag, g, config_graph=cg)
            assert verdict is res.verdict
            if jag.curr is None or verdict is not Verdict.ACCEPT:
                continue
            trav, _ = check_traversable(jag, g, config_graph=cg)
            ordb, order = check_orderable(jag, g, config_graph=cg)
            if ordb:
                assert order == res.visit_order
            # the interpreter's accepting run must match machine coverage
            if trav:
                assert set(res.visit_order) >= reachable_set(g, g.startnode)


def test_criterion_8_degree_reduction():
    with criterion(8, "degree reduction preserves components", 30):
        rng = random.Random(404)
        for _ in range(20):
            n = rng.randint(2, 8)
            d = rng.randint(1, 3)
            rows = tuple(tuple(rng.randrange(n) for _ in range(d))
                         for _ in range(n))
            g = LabelledGraph(n, d, rows, 0, rng.randrange(n))
            r = reduce_degree(g)
            reach_g = [reachable_set(g, v) for v in range(n)]
            reach_r = [reachable_set(r, v * d) for v in range(n)]
            for u in range(n):
                for v in range(n):
                    mutual_g = v in reach_g[u] and u in reach_g[v]
                    mutual_r = v * d in reach_r[u] and u * d in reach_r[v]
                    assert mutual_g == mutual_r


def test_criterion_9_negative_controls(grid_cayleys, abelian_corpus):
    with criterion(9, "negative controls", 60):
        jump_prog = jump_to_target_program()
        graphs = [grid_cayleys[key].graph for key in GRID_CASES]
        graphs += [cay.graph for _, _, group, _, cay in abelian_corpus
                   if group.order <= 16]
        graphs.append(cayley_graph(*symmetric_group(3)).graph)
        for g in graphs:
            assert g.num_nodes > 1
            jag = compile_program(jump_prog, g.degree)
            flag, _ = check_traversable(jag, g)
            assert not flag
        two = LabelledGraph(2, 1, ((0,), (1,)), 0, 1)
        jag = compile_program(two_tour_guesser_program(), 1)
        trav, _ = check_traversable(jag, two)
        ordb, _ = check_orderable(jag, two)
        assert trav and not ordb

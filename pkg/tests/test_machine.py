import random

import pytest

from jaglab.errors import DiagnosticError, InputError, ResourceLimitExceeded
from jaglab.graph import LabelledGraph, disjoint_union, reachable_set
from jaglab.groups import abelian_group, cayley_graph
from jaglab.lang import compile_program
from jaglab.machine import (Configuration, Limits, NdJag, Verdict, accepts,
                            all_partitions, apply_moves, build_config_graph,
                            check_orderable, check_traversable,
                            decide_co_st_connectivity, enumerate_runs,
                            initial_config, parse_jag, partition_of,
                            replay_curr_visits, serialize_jag, step, verify)
from jaglab.algorithms import grid_traversal_program, two_tour_guesser_program
from jaglab.spotcheck import random_graph, random_jag


def _selfs(p):
    return tuple(-(i + 1) for i in range(p))


def walker_jag():
    """Walk pebble 1 along label 1 until it meets t (pebble 2), accept."""
    rules = {
        ("q0", (1, 2)): ((("q0", (1, -2))),),
        ("q0", (1, 1)): ((("qa", _selfs(2))),),
    }
    return NdJag("q0", "qa", 2, s=1, t=2, delta=rules)


def test_partition_canonical():
    assert partition_of((5, 5, 5)) == (1, 1, 1)
    assert partition_of((1, 2, 3)) == (1, 2, 3)
    assert partition_of((4, 7, 4)) == (1, 2, 1)


def test_all_partitions_count():
    # Bell numbers 1, 2, 5, 15
    for p, bell in [(1, 1), (2, 2), (3, 5), (4, 15)]:
        assert len(list(all_partitions(p))) == bell


def test_initial_config_grid22(grid_cayleys):
    cay = grid_cayleys[(2, 2)]
    g = cay.graph
    g = LabelledGraph(g.num_nodes, g.degree, g.rho, g.startnode,
                      cay.node_of[(1, 1)])
    jag = NdJag("q0", "qa", 3, s=1, t=2, curr=3, delta={})
    c = initial_config(jag, g)
    assert c.state == "q0"
    assert c.nodes == (0, 3, 0)


def test_initial_config_target_equals_start(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    jag = NdJag("q0", "qa", 3, s=1, t=2, curr=3, delta={})
    c = initial_config(jag, g)
    assert partition_of(c.nodes) == (1, 1, 1)


def test_initial_config_single_pebble(grid_cayleys):
    cay = grid_cayleys[(2, 2)]
    g = LabelledGraph(4, 2, cay.graph.rho, 0, 3)
    jag = NdJag("q0", "qa", 1, s=1, t=1, delta={})
    assert initial_config(jag, g).nodes == (3,)


def test_step_mutual_jump_swaps(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    rules = {("q0", (1, 2)): (("q1", (-2, -1)),)}
    jag = NdJag("q0", "qa", 2, delta=rules)
    succs = step(jag, g, Configuration("q0", (0, 3)))
    assert succs == [Configuration("q1", (3, 0))]


def test_step_dead_configuration(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    jag = NdJag("q0", "qa", 2, delta={})
    assert step(jag, g, Configuration("q0", (0, 0))) == []


def test_step_move_along(grid_cayleys):
    g = grid_cayleys[(1, 5)].graph  # a single cycle
    rules = {("q0", (1,)): (("q0", (1,)),)}
    jag = NdJag("q0", "qa", 1, s=1, t=1, delta=rules)
    succs = step(jag, g, Configuration("q0", (0,)))
    assert succs == [Configuration("q0", (1,))]


def test_step_simultaneity_is_order_independent(grid_cayleys):
    g = grid_cayleys[(2, 3)].graph
    rng = random.Random(9)
    for _ in range(100):
        nodes = tuple(rng.randrange(g.num_nodes) for _ in range(4))
        moves = tuple(rng.choice([1, 2, -1, -2, -3, -4]) for _ in range(4))
        want = apply_moves(g, nodes, moves)
        # reference: apply pebbles one at a time in shuffled order over a
        # snapshot of the old placement
        order = list(range(4))
        rng.shuffle(order)
        out = [None] * 4
        for i in order:
            mv = moves[i]
            out[i] = g.rho[nodes[i]][mv - 1] if mv > 0 else nodes[-mv - 1]
        assert tuple(out) == want


def test_accepts_trivial_start_is_accept(grid_cayleys):
    jag = NdJag("qa", "qa", 2, delta={})
    assert accepts(jag, grid_cayleys[(2, 2)].graph) is Verdict.ACCEPT


def test_accepts_walker_on_cycle():
    group, gens = abelian_group((4,))
    cay = cayley_graph(group, gens, targetnode=(1,))
    assert accepts(walker_jag(), cay.graph) is Verdict.ACCEPT


def test_accepts_walker_two_components():
    group, gens = abelian_group((4,))
    g = cayley_graph(group, gens).graph
    two = disjoint_union(g, g)
    assert accepts(walker_jag(), two) is Verdict.REJECT


def test_accepts_resource_limit(grid_cayleys):
    prog = grid_traversal_program()
    jag = compile_program(prog, 2)
    g = grid_cayleys[(2, 2)].graph
    assert accepts(jag, g, Limits(max_configs=1)) is Verdict.RESOURCE_LIMIT


def test_enumerate_trivial_and_dead(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    assert enumerate_runs(NdJag("qa", "qa", 2, delta={}), g, 5) == {()}
    assert enumerate_runs(NdJag("q0", "qa", 2, delta={}), g, 5) == frozenset()


def test_enumerate_agrees_with_accepts_randomized():
    rng = random.Random(2)
    checked = 0
    while checked < 15:
        g = random_graph(rng)
        jag = random_jag(rng, g.degree)
        cg = build_config_graph(jag, g, Limits(max_configs=4000))
        if cg.limit_hit:
            continue
        try:
            runs = enumerate_runs(jag, g, max_len=cg.configs_explored,
                                  max_tree_nodes=200_000)
        except ResourceLimitExceeded:
            continue
        want = Verdict.ACCEPT if runs else Verdict.REJECT
        assert accepts(jag, g, config_graph=cg) is want
        checked += 1


def test_traversable_grid_program(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    jag = compile_program(grid_traversal_program(), 2)
    flag, witness = check_traversable(jag, g)
    assert flag
    assert set(witness) == set(reachable_set(g, g.startnode))


def test_traversable_cross_checked_with_run_traces(grid_cayleys):
    # every accepting trace places curr on every reachable node
    g = grid_cayleys[(1, 2)].graph
    jag = compile_program(grid_traversal_program(), 1)
    flag, witness = check_traversable(jag, g)
    assert flag
    runs = enumerate_runs(jag, g, max_len=60, max_tree_nodes=500_000)
    assert runs
    reach = reachable_set(g, g.startnode)
    orders = {replay_curr_visits(jag, g, trace) for trace in runs}
    for order in orders:
        assert reach <= set(order)
    # and the orderability witness is the unique first-visit sequence
    ok, canon = check_orderable(jag, g)
    assert ok
    assert orders == {canon}


def test_orderable_requires_curr(grid_cayleys):
    jag = NdJag("q0", "qa", 2, delta={})
    with pytest.raises(InputError):
        check_orderable(jag, grid_cayleys[(2, 2)].graph)


def test_two_tour_guesser_not_orderable():
    g = LabelledGraph(2, 1, ((0,), (1,)), 0, 1)  # two pebbled components
    jag = compile_program(two_tour_guesser_program(), 1)
    trav, _ = check_traversable(jag, g)
    assert trav  # reachable component is just the startnode
    ok, _ = check_orderable(jag, g)
    assert not ok


def test_co_st_connectivity_target_is_start(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph  # target defaults to startnode
    jag = compile_program(grid_traversal_program(), 2)
    assert decide_co_st_connectivity(jag, g) == "connected"


def test_co_st_connectivity_two_components(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    two = disjoint_union(g, g)
    jag = compile_program(grid_traversal_program(), 2)
    assert decide_co_st_connectivity(jag, two) == "disconnected"


def test_co_st_diagnostic_on_rejecting_automaton(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    dead = NdJag("q0", "qa", 3, curr=3, delta={})
    with pytest.raises(DiagnosticError):
        decide_co_st_connectivity(dead, g)


def test_verify_report_fields(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    jag = compile_program(grid_traversal_program(), 2)
    report = verify(jag, g)
    assert report.verdict is Verdict.ACCEPT
    assert report.traversable and report.orderable
    assert set(report.visit_order) >= reachable_set(g, g.startnode)
    text = report.to_text()
    for key in ("verdict:", "traversable:", "orderable:", "visit_order:",
                "configs_explored:", "limits_hit:"):
        assert key in text


def test_verify_visit_order_unique():
    # two accepting traces with different curr sequences: order None-safe
    g = LabelledGraph(2, 1, ((0,), (1,)), 0, 1)
    jag = compile_program(two_tour_guesser_program(), 1)
    report = verify(jag, g)
    assert report.traversable and not report.orderable


def test_worker_invariance(grid_cayleys):
    g = grid_cayleys[(2, 3)].graph
    jag = compile_program(grid_traversal_program(), 2)
    res1 = verify(jag, g, workers=1)
    res3 = verify(jag, g, workers=3)
    assert res1 == res3


def test_interchange_roundtrip():
    rng = random.Random(4)
    for _ in range(10):
        jag = random_jag(rng, degree=2)
        text = serialize_jag(jag)
        back = parse_jag(text)
        assert back.rules == jag.rules
        assert back.start_state == jag.start_state
        assert back.accept_state == jag.accept_state
        assert (back.s, back.t, back.curr) == (jag.s, jag.t, jag.curr)
        assert serialize_jag(back) == text


def test_parse_jag_rejects_bad_rows():
    with pytest.raises(InputError):
        parse_jag("states a b\nstart a\naccept b\npebbles 2\na 1,1 -> b x1\n")


def test_bad_designations_rejected():
    with pytest.raises(InputError):
        NdJag("q0", "qa", 2, s=3, delta={})
    with pytest.raises(InputError):
        NdJag("q0", "qa", 2, curr=5, delta={})


def test_move_vector_length_validated():
    with pytest.raises(InputError):
        NdJag("q0", "qa", 2, delta={("q0", (1, 2)): (("qa", (1,)),)})


def test_max_run_len_bounds_depth(grid_cayleys):
    g = grid_cayleys[(2, 2)].graph
    jag = compile_program(grid_traversal_program(), 2)
    short = build_config_graph(jag, g, Limits(max_run_len=3))
    assert short.limit_hit
    assert accepts(jag, g, config_graph=short) is Verdict.RESOURCE_LIMIT
    long = build_config_graph(jag, g, Limits(max_run_len=10_000))
    assert accepts(jag, g, config_graph=long) is Verdict.ACCEPT


def test_single_node_component_trivially_orderable():
    g = LabelledGraph(1, 2, ((0, 0),), 0, 0)
    jag = compile_program(grid_traversal_program(), 2)
    trav, _ = check_traversable(jag, g)
    ordb, order = check_orderable(jag, g)
    assert trav and ordb and order == (0,)

"""Nondeterministic jumping automata: semantics and the model checker.

An automaton has finitely many states, p pebbles, and a transition relation
keyed on the current state and the incidence partition of the pebbles (which
pebbles share a node) -- the only thing the control can observe.  Each
transition moves every pebble simultaneously: along a labelled edge or by a
jump to the OLD position of another pebble.

Moves are encoded as small ints: +i means "follow edge label i", -j means
"jump to pebble j".  Partitions are canonical vectors mapping each pebble to
the least pebble index sharing its node.

Acceptance, traversability ("every accepting run parks the curr pebble on
every node reachable from the startnode"), orderability ("all accepting runs
share the same first-visit sequence of curr") and co-st-connectivity are all
decided by exact reachability over the finite configuration graph, subject
to an explicit configuration budget.  A run is an accepting computation as
soon as it reaches the accept state; traces are cut there.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple

from .errors import DiagnosticError, InputError, ResourceLimitExceeded
from .graph import LabelledGraph, reachable_set


def move_along(label: int) -> int:
    if label < 1:
        raise InputError("edge labels start at 1")
    return label


def jump_to(pebble: int) -> int:
    if pebble < 1:
        raise InputError("pebble indices start at 1")
    return -pebble


class Verdict(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    RESOURCE_LIMIT = "resource-limit"


class Configuration(NamedTuple):
    state: object
    nodes: tuple  # nodes[i] is the node of pebble i+1


@dataclass(frozen=True)
class Limits:
    """Search budgets: total configurations and (optionally) run length.

    ``max_run_len`` bounds the depth of the configuration search; hitting
    either budget yields a resource-limit verdict, never a silent answer.
    """

    max_configs: int = 10_000_000
    max_run_len: int | None = None


def partition_of(nodes: tuple) -> tuple:
    """Canonical incidence partition: each pebble's least co-located index."""
    first: dict = {}
    out = []
    for i, v in enumerate(nodes):
        out.append(first.setdefault(v, i + 1))
    return tuple(out)


def all_partitions(p: int):
    """All canonical partition vectors of p pebbles (restricted growth)."""
    def rec(prefix):
        if len(prefix) == p:
            yield tuple(prefix)
            return
        used = sorted(set(prefix))
        for v in used + [len(prefix) + 1]:
            yield from rec(prefix + [v])
    yield from rec([1] if p else [])


class NdJag:
    """A nondeterministic jumping automaton.

    ``delta`` maps (state, partition) to a tuple of (next_state, moves);
    it may be an explicit dict (absent keys mean no transitions) or a
    callable.  Pebbles s and t are designated; curr is optional and is the
    pebble whose placements define visit orders.
    """

    def __init__(self, start_state, accept_state, num_pebbles: int,
                 s: int = 1, t: int = 2, curr: int | None = None,
                 delta: Mapping | Callable = None, states: tuple | None = None):
        if num_pebbles < 1:
            raise InputError("need at least one pebble")
        for name, idx in (("s", s), ("t", t)):
            if not 1 <= idx <= num_pebbles:
                raise InputError(f"designated pebble {name}={idx} out of range")
        if curr is not None and not 1 <= curr <= num_pebbles:
            raise InputError(f"designated pebble curr={curr} out of range")
        self.start_state = start_state
        self.accept_state = accept_state
        self.num_pebbles = num_pebbles
        self.s = s
        self.t = t
        self.curr = curr
        self.states = states
        if callable(delta):
            self.rules = None
            self._fn = delta
        else:
            rules = {k: tuple(v) for k, v in (delta or {}).items()}
            for (state, pi), outs in rules.items():
                for nxt, moves in outs:
                    if len(moves) != num_pebbles:
                        raise InputError("move vector length != pebble count")
                    for mv in moves:
                        if mv == 0 or mv < -num_pebbles:
                            raise InputError(f"bad move encoding {mv}")
            self.rules = rules
            self._fn = lambda state, pi: rules.get((state, pi), ())

    def transitions(self, state, pi):
        return self._fn(state, pi)


def initial_config(jag: NdJag, g: LabelledGraph,
                   placements: Mapping[int, int] | None = None) -> Configuration:
    """Pebble t starts on the targetnode, all others on the startnode.

    ``placements`` (pebble index -> node) overrides individual pebbles; it is
    a harness hook for exercising operation contracts, not part of the model.
    """
    nodes = [g.targetnode if i == jag.t else g.startnode
             for i in range(1, jag.num_pebbles + 1)]
    if placements:
        for peb, node in placements.items():
            nodes[peb - 1] = node
    return Configuration(jag.start_state, tuple(nodes))


def apply_moves(g: LabelledGraph, nodes: tuple, moves: tuple) -> tuple:
    """All moves read the old placement; jumps and edge-walks are simultaneous."""
    rho = g.rho
    out = []
    for i, mv in enumerate(moves):
        if mv > 0:
            if mv > g.degree:
                raise InputError(f"move label {mv} exceeds degree {g.degree}")
            out.append(rho[nodes[i]][mv - 1])
        else:
            out.append(nodes[-mv - 1])
    return tuple(out)


def step(jag: NdJag, g: LabelledGraph, config: Configuration) -> list[Configuration]:
    """All successor configurations of ``config`` (may be empty: dead)."""
    succs = []
    for nxt, moves in jag.transitions(config.state, partition_of(config.nodes)):
        succs.append(Configuration(nxt, apply_moves(g, config.nodes, moves)))
    return succs


@dataclass
class ConfigGraph:
    """Explicit configuration graph: adjacency, parents, and bookkeeping."""

    jag: NdJag
    graph: LabelledGraph
    initial: Configuration
    adj: dict = field(default_factory=dict)
    parent: dict = field(default_factory=dict)
    accepting: list = field(default_factory=list)
    limit_hit: bool = False

    @property
    def configs_explored(self) -> int:
        return len(self.adj)


def build_config_graph(jag: NdJag, g: LabelledGraph, limits: Limits = Limits(),
                       workers: int = 1,
                       placements: Mapping[int, int] | None = None) -> ConfigGraph:
    """Breadth-first exhaustive expansion of the configuration space.

    Expansion is level-synchronised; with workers > 1 the frontier is
    expanded in deterministic chunks so results are worker-count-invariant.
    The adjacency map behaves as a single atomic visited-set.
    """
    init = initial_config(jag, g, placements)
    cg = ConfigGraph(jag, g, init)
    cg.parent[init] = None
    frontier = [init]
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def expand(config):
        return config, step(jag, g, config)

    depth = 0
    try:
        while frontier:
            if len(cg.parent) > limits.max_configs:
                cg.limit_hit = True
                break
            if limits.max_run_len is not None and depth > limits.max_run_len:
                cg.limit_hit = True
                break
            if pool is None:
                expanded = map(expand, frontier)
            else:
                expanded = pool.map(expand, frontier, chunksize=64)
            nxt = []
            for config, succs in expanded:
                cg.adj[config] = succs
                if config.state == jag.accept_state:
                    cg.accepting.append(config)
                for s in succs:
                    if s not in cg.parent:
                        cg.parent[s] = config
                        nxt.append(s)
            frontier = nxt
            depth += 1
    finally:
        if pool is not None:
            pool.shutdown()
    return cg


def accepts(jag: NdJag, g: LabelledGraph, limits: Limits = Limits(),
            config_graph: ConfigGraph | None = None,
            placements: Mapping[int, int] | None = None) -> Verdict:
    """Accept iff some configuration with the accept state is reachable."""
    seen: set = set()
    init = initial_config(jag, g, placements) if config_graph is None \
        else config_graph.initial
    if config_graph is not None:
        if any(c.state == jag.accept_state for c in config_graph.accepting):
            return Verdict.ACCEPT
        return Verdict.RESOURCE_LIMIT if config_graph.limit_hit else Verdict.REJECT
    frontier = deque([init])
    seen.add(init)
    while frontier:
        config = frontier.popleft()
        if config.state == jag.accept_state:
            return Verdict.ACCEPT
        if len(seen) > limits.max_configs:
            return Verdict.RESOURCE_LIMIT
        for s in step(jag, g, config):
            if s not in seen:
                seen.add(s)
                frontier.append(s)
    return Verdict.REJECT


def accepting_configurations(jag: NdJag, g: LabelledGraph,
                             limits: Limits = Limits(),
                             placements: Mapping[int, int] | None = None) -> list:
    """All reachable accept-state configurations (for contract checks)."""
    cg = build_config_graph(jag, g, limits, placements=placements)
    if cg.limit_hit:
        raise ResourceLimitExceeded("configuration budget exhausted")
    return cg.accepting


def enumerate_runs(jag: NdJag, g: LabelledGraph, max_len: int,
                   max_tree_nodes: int = 1_000_000,
                   placements: Mapping[int, int] | None = None) -> frozenset:
    """All accepting computations of length <= max_len.

    Each trace is the tuple of chosen transitions, i.e. (state, move-vector)
    pairs, which pins the computation exactly.  Independent oracle for
    ``accepts``: a plain run-tree search with no visited-set, so it shares
    nothing with the reachability route.  Runs end at their first
    accept-state configuration.
    """
    init = initial_config(jag, g, placements)
    traces = set()
    expanded = 0
    stack = [(init, ())]
    while stack:
        config, trace = stack.pop()
        if config.state == jag.accept_state:
            traces.add(trace)
            continue
        if len(trace) >= max_len:
            continue
        expanded += 1
        if expanded > max_tree_nodes:
            raise ResourceLimitExceeded("run-tree budget exhausted")
        for nxt, moves in jag.transitions(config.state, partition_of(config.nodes)):
            stack.append((Configuration(nxt, apply_moves(g, config.nodes, moves)),
                          trace + ((nxt, moves),)))
    return frozenset(traces)


def replay_curr_visits(jag: NdJag, g: LabelledGraph, trace: Iterable[tuple],
                       placements: Mapping[int, int] | None = None) -> tuple:
    """First-visit sequence of the curr pebble along an enumerated trace."""
    if jag.curr is None:
        raise InputError("automaton designates no curr pebble")
    config = initial_config(jag, g, placements)
    order = [config.nodes[jag.curr - 1]]
    seen = set(order)
    for state, moves in trace:
        config = Configuration(state, apply_moves(g, config.nodes, moves))
        v = config.nodes[jag.curr - 1]
        if v not in seen:
            seen.add(v)
            order.append(v)
    return tuple(order)


def accepting_run_visits(cg: ConfigGraph) -> tuple | None:
    """First-visit order of curr along the BFS-shortest accepting run."""
    if not cg.accepting:
        return None
    curr = cg.jag.curr
    path = []
    config = cg.accepting[0]
    while config is not None:
        path.append(config)
        config = cg.parent[config]
    path.reverse()
    order = []
    seen = set()
    for config in path:
        v = config.nodes[curr - 1]
        if v not in seen:
            seen.add(v)
            order.append(v)
    return tuple(order)


def _require_complete(cg: ConfigGraph):
    if cg.limit_hit:
        raise ResourceLimitExceeded("configuration budget exhausted")


def check_traversable(jag: NdJag, g: LabelledGraph, limits: Limits = Limits(),
                      workers: int = 1,
                      config_graph: ConfigGraph | None = None):
    """Decide traversability; returns (flag, first-visit witness or None).

    True iff the automaton accepts and, for every node v reachable from the
    startnode, no accepting computation avoids placing curr on v.  The
    avoidance checks delete every configuration with curr on v and re-run
    reachability; they are independent per node and run in parallel when
    workers > 1.
    """
    if jag.curr is None:
        raise InputError("traversability needs a designated curr pebble")
    cg = config_graph or build_config_graph(jag, g, limits, workers=workers)
    _require_complete(cg)
    if not cg.accepting:
        return False, None
    witness = accepting_run_visits(cg)
    curr = jag.curr
    accept_state = jag.accept_state

    def avoidable(v) -> bool:
        # is there an accepting run never placing curr on v?
        init = cg.initial
        if init.nodes[curr - 1] == v:
            return False
        seen = {init}
        frontier = deque([init])
        while frontier:
            config = frontier.popleft()
            if config.state == accept_state:
                return True
            for s in cg.adj.get(config, ()):
                if s not in seen and s.nodes[curr - 1] != v:
                    seen.add(s)
                    frontier.append(s)
        return False

    targets = sorted(reachable_set(g, g.startnode))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(avoidable, targets))
    else:
        results = [avoidable(v) for v in targets]
    if any(results):
        return False, witness
    return True, witness


def check_orderable(jag: NdJag, g: LabelledGraph, limits: Limits = Limits(),
                    config_graph: ConfigGraph | None = None):
    """Decide orderability; returns (flag, canonical first-visit order).

    The canonical order O comes from one accepting run.  A product search
    tracks each run's progress through O by a prefix index; any placement of
    curr on a node outside the visited prefix other than O[index] marks the
    run as deviating, after which only reachability of the accept state
    matters.  Accepting while the prefix is incomplete also deviates.
    """
    if jag.curr is None:
        raise InputError("orderability needs a designated curr pebble")
    cg = config_graph or build_config_graph(jag, g, limits)
    _require_complete(cg)
    if not cg.accepting:
        return False, None
    order = accepting_run_visits(cg)
    pos = {v: i for i, v in enumerate(order)}
    curr = jag.curr
    accept_state = jag.accept_state
    full = len(order)

    init = cg.initial
    # initial curr placement is O[0] by construction
    start = (init, 1)
    seen = {start}
    deviated: set = set()
    dev_frontier = deque()
    frontier = deque([start])
    budget = limits.max_configs

    def deviate(config):
        if config not in deviated:
            deviated.add(config)
            dev_frontier.append(config)

    while frontier:
        config, idx = frontier.popleft()
        if config.state == accept_state:
            if idx != full:
                return False, order
            continue  # runs end at acceptance
        for s in cg.adj.get(config, ()):
            p = pos.get(s.nodes[curr - 1])
            if p is None or p > idx:
                deviate(s)
                continue
            nidx = idx + 1 if p == idx else idx
            key = (s, nidx)
            if key not in seen:
                if len(seen) + len(deviated) > budget:
                    raise ResourceLimitExceeded("orderability budget exhausted")
                seen.add(key)
                frontier.append(key)
    while dev_frontier:
        config = dev_frontier.popleft()
        if config.state == accept_state:
            return False, order
        for s in cg.adj.get(config, ()):
            if s not in deviated:
                if len(seen) + len(deviated) > budget:
                    raise ResourceLimitExceeded("orderability budget exhausted")
                deviated.add(s)
                dev_frontier.append(s)
    return True, order


def decide_co_st_connectivity(jag: NdJag, g: LabelledGraph,
                              limits: Limits = Limits(),
                              config_graph: ConfigGraph | None = None) -> str:
    """"connected" iff some accepting run places curr on the targetnode.

    The supplied automaton must be traversable on the input's family; if it
    does not even accept, that assumption is broken and a DiagnosticError is
    raised rather than guessing.
    """
    if jag.curr is None:
        raise InputError("co-st-connectivity needs a designated curr pebble")
    cg = config_graph or build_config_graph(jag, g, limits)
    _require_complete(cg)
    if not cg.accepting:
        raise DiagnosticError("supplied automaton rejects: traversability violated")
    curr = jag.curr
    tgt = g.targetnode
    init = cg.initial
    start = (init, init.nodes[curr - 1] == tgt)
    seen = {start}
    frontier = deque([start])
    while frontier:
        config, touched = frontier.popleft()
        if touched and config.state == jag.accept_state:
            return "connected"
        for s in cg.adj.get(config, ()):
            key = (s, touched or s.nodes[curr - 1] == tgt)
            if key not in seen:
                seen.add(key)
                frontier.append(key)
    return "disconnected"


@dataclass(frozen=True)
class VerificationReport:
    verdict: Verdict
    traversable: bool | None
    orderable: bool | None
    visit_order: tuple | None
    configs_explored: int
    limits_hit: tuple = ()

    def to_text(self) -> str:
        def fmt(v):
            if v is None:
                return "unknown"
            if isinstance(v, bool):
                return "true" if v else "false"
            return str(v)
        order = "" if self.visit_order is None else \
            " ".join(str(v) for v in self.visit_order)
        lines = [
            f"verdict: {self.verdict.value}",
            f"traversable: {fmt(self.traversable)}",
            f"orderable: {fmt(self.orderable)}",
            f"visit_order: {order}",
            f"configs_explored: {self.configs_explored}",
            f"limits_hit: {','.join(self.limits_hit) or 'none'}",
        ]
        return "\n".join(lines) + "\n"


def verify(jag: NdJag, g: LabelledGraph, limits: Limits = Limits(),
           workers: int = 1) -> VerificationReport:
    """Full report: acceptance, traversability, orderability, visit order."""
    try:
        cg = build_config_graph(jag, g, limits, workers=workers)
        _require_complete(cg)
    except ResourceLimitExceeded:
        return VerificationReport(Verdict.RESOURCE_LIMIT, None, None, None,
                                  limits.max_configs, ("max_configs",))
    verdict = Verdict.ACCEPT if cg.accepting else Verdict.REJECT
    traversable = orderable = None
    visit_order = None
    limits_hit: tuple = ()
    if jag.curr is not None:
        try:
            traversable, visit_order = check_traversable(
                jag, g, limits, workers=workers, config_graph=cg)
            if traversable:
                orderable, visit_order = check_orderable(
                    jag, g, limits, config_graph=cg)
            else:
                orderable = False
        except ResourceLimitExceeded:
            verdict = Verdict.RESOURCE_LIMIT
            limits_hit = ("max_configs",)
    return VerificationReport(verdict, traversable, orderable, visit_order,
                              cg.configs_explored, limits_hit)


# ---------------------------------------------------------------------------
# Interchange format

def serialize_jag(jag: NdJag) -> str:
    """Text form of a rule-table automaton (states must be strings)."""
    if jag.rules is None:
        raise InputError("only rule-table automata can be serialized")
    states = jag.states
    if states is None:
        seen = [jag.start_state, jag.accept_state]
        for (state, _), outs in jag.rules.items():
            seen.append(state)
            seen.extend(nxt for nxt, _ in outs)
        states = tuple(dict.fromkeys(seen))
    lines = [
        "states " + " ".join(states),
        f"start {jag.start_state}",
        f"accept {jag.accept_state}",
        f"pebbles {jag.num_pebbles}",
        f"designate s={jag.s} t={jag.t}"
        + (f" curr={jag.curr}" if jag.curr is not None else ""),
    ]
    for (state, pi), outs in sorted(jag.rules.items(),
                                    key=lambda kv: (str(kv[0][0]), kv[0][1])):
        for nxt, moves in outs:
            mv = " ".join(f"m{m}" if m > 0 else f"j{-m}" for m in moves)
            lines.append(f"{state} {','.join(map(str, pi))} -> {nxt} {mv}")
    return "\n".join(lines) + "\n"


def parse_jag(text: str) -> NdJag:
    states = None
    start = accept = None
    pebbles = None
    s_idx, t_idx, curr_idx = 1, 2, None
    rules: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "states":
            states = tuple(toks[1:])
        elif toks[0] == "start":
            start = toks[1]
        elif toks[0] == "accept":
            accept = toks[1]
        elif toks[0] == "pebbles":
            pebbles = int(toks[1])
        elif toks[0] == "designate":
            for item in toks[1:]:
                key, _, val = item.partition("=")
                if key == "s":
                    s_idx = int(val)
                elif key == "t":
                    t_idx = int(val)
                elif key == "curr":
                    curr_idx = int(val)
                else:
                    raise InputError(f"line {lineno}: unknown designation {key}")
        elif "->" in toks:
            arrow = toks.index("->")
            if arrow != 2 or len(toks) < 4:
                raise InputError(f"line {lineno}: malformed rule")
            state, pi_txt = toks[0], toks[1]
            pi = tuple(int(x) for x in pi_txt.split(","))
            nxt = toks[3]
            moves = []
            for tok in toks[4:]:
                if tok[0] == "m":
                    moves.append(int(tok[1:]))
                elif tok[0] == "j":
                    moves.append(-int(tok[1:]))
                else:
                    raise InputError(f"line {lineno}: bad move {tok}")
            rules.setdefault((state, pi), []).append((nxt, tuple(moves)))
        else:
            raise InputError(f"line {lineno}: unrecognized line")
    if start is None or accept is None or pebbles is None:
        raise InputError("missing start/accept/pebbles header")
    return NdJag(start, accept, pebbles, s=s_idx, t=t_idx, curr=curr_idx,
                 delta={k: tuple(v) for k, v in rules.items()}, states=states)

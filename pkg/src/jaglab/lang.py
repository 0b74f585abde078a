"""The imperative nondeterministic pebble language, its interpreter, and the
compiler to a jumping automaton.

Grammar (line oriented; ``#`` starts a comment; blocks use braces):

    pebble <id> [at target | at start]
    dir <id> : 1..d            # direction variable over the graph degree
    dir <id> : {a,b,c}         # explicit finite integer domain
    guess <id>                 # nondeterministic choice over the domain
    guess <id> : bool          # boolean guess; declares <id> on first use
    move <p> along <e>         # e: integer label, direction variable, or d
    jump <p> to <q>
    <p> := <q>                 # jump shorthand
    <p> := <q>.<e>             # jump then move
    visit <p>                  # place curr on <p>'s node
    if <cond> { ... } [else { ... }]
    while <cond> { ... }
    for <id> = <a> to <b> { ... }
    fail
    accept

Conditions are pebble (in)equality ``p == q`` / ``p != q`` or a boolean
variable.  Declarations precede statements.  Programs end by ``accept``;
falling off the end, like ``fail``, kills the run.

Acceptance is angelic: a program accepts when some resolution of its guesses
reaches ``accept``.  The interpreter explores the finite product of program
point, variable valuation, and pebble placement breadth-first with
memoization, so cyclic nondeterminism terminates.  The compiler produces an
automaton over states (program point, valuation) whose runs step through the
same product, one instruction per machine step; every pebble not being acted
on jumps to itself.

Pebbles named ``s`` and ``t`` are the designated ones and are added
implicitly when not declared; the designated ``t`` always starts on the
targetnode.  A pebble named ``curr`` is the visit-order pebble.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import ProgramError, InputError
from .graph import LabelledGraph
from .machine import Limits, NdJag, Verdict

_TOKEN = re.compile(r"(:=|==|!=|\.\.|[{}:,.=]|[A-Za-z_][A-Za-z0-9_]*|\d+)")
_RESERVED = {"d", "pebble", "dir", "guess", "move", "jump", "visit", "if",
             "else", "while", "for", "fail", "accept", "along", "to", "at",
             "bool", "target", "start", "not", "true", "false"}


def _tokens(line: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(line):
        if line[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(line, pos)
        if not m:
            raise ProgramError(f"cannot tokenize at {line[pos:]!r}")
        out.append(m.group(0))
        pos = m.end()
    return out


@dataclass(frozen=True)
class PebbleProgram:
    """Parsed program: declarations plus the statement tree."""

    pebbles: tuple            # (name, at_target) in declaration order
    dirs: tuple               # (name, domain_spec); spec = ("1..d",) | ("set", vals)
    bools: tuple              # boolean variable names
    body: tuple               # statement tree
    source: str = ""

    def bind(self, degree: int) -> "BoundProgram":
        return _bind(self, degree)


def parse_program(text: str) -> PebbleProgram:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, _tokens(stripped)))

    pebbles: list = []
    dirs: list = []
    bools: list = []
    declared: set = set()

    def declare(name, lineno, kind):
        if name in _RESERVED:
            raise ProgramError(f"{name!r} is reserved", line=lineno)
        if name in declared:
            raise ProgramError(f"duplicate declaration of {name!r}", line=lineno)
        declared.add(name)

    idx = 0
    # declaration section
    while idx < len(lines):
        lineno, toks = lines[idx]
        if toks[0] == "pebble":
            if len(toks) == 2:
                at_target = False
            elif len(toks) == 4 and toks[2] == "at" and toks[3] in ("target", "start"):
                at_target = toks[3] == "target"
            else:
                raise ProgramError("malformed pebble declaration", line=lineno)
            declare(toks[1], lineno, "pebble")
            pebbles.append((toks[1], at_target))
            idx += 1
        elif toks[0] == "dir":
            if len(toks) >= 4 and toks[2] == ":":
                if toks[3:] == ["1", "..", "d"]:
                    spec = ("1..d",)
                elif toks[3] == "{" and toks[-1] == "}":
                    vals = [t for t in toks[4:-1] if t != ","]
                    body_vals = []
                    # allow {a..b} contiguous shorthand alongside листand comma lists
                    if ".." in vals:
                        if len(vals) == 3 and vals[1] == "..":
                            body_vals = list(range(int(vals[0]), int(vals[2]) + 1))
                        else:
                            raise ProgramError("malformed domain", line=lineno)
                    else:
                        body_vals = [int(v) for v in vals]
                    if not body_vals:
                        raise ProgramError("empty domain", line=lineno)
                    spec = ("set", tuple(sorted(set(body_vals))))
                else:
                    raise ProgramError("malformed dir declaration", line=lineno)
            else:
                raise ProgramError("malformed dir declaration", line=lineno)
            declare(toks[1], lineno, "dir")
            dirs.append((toks[1], spec))
            idx += 1
        else:
            break

    pebble_names = {name for name, _ in pebbles}
    dir_names = {name for name, _ in dirs}
    if dir_names & {"s", "t"}:
        raise ProgramError("'s' and 't' are pebble names")
    pebble_names |= {"s", "t"}  # designated pebbles exist implicitly

    # collect implicit boolean declarations
    for lineno, toks in lines[idx:]:
        if toks[:1] == ["guess"] and len(toks) == 4 and toks[2] == ":" \
                and toks[3] == "bool":
            name = toks[1]
            if name in pebble_names or name in dir_names:
                raise ProgramError(f"{name!r} already declared", line=lineno)
            if name not in bools:
                if name in _RESERVED:
                    raise ProgramError(f"{name!r} is reserved", line=lineno)
                bools.append(name)
    bool_names = set(bools)

    def need_pebble(name, lineno):
        if name not in pebble_names:
            raise ProgramError(f"undeclared pebble {name!r}", line=lineno)

    def parse_label(tok, lineno):
        if tok.isdigit():
            val = int(tok)
            if val < 1:
                raise ProgramError("edge labels start at 1", line=lineno)
            return ("lit", val)
        if tok == "d":
            return ("degree",)
        if tok in dir_names:
            return ("var", tok)
        raise ProgramError(f"{tok!r} is not a label or direction variable",
                           line=lineno)

    def parse_bound(tok, lineno):
        if tok.isdigit():
            return ("lit", int(tok))
        if tok == "d":
            return ("degree",)
        if tok in dir_names:
            return ("var", tok)
        raise ProgramError(f"{tok!r} is not a loop bound", line=lineno)

    def parse_cond(toks, lineno):
        if len(toks) == 1:
            if toks[0] not in bool_names:
                raise ProgramError(f"{toks[0]!r} is not a boolean variable",
                                   line=lineno)
            return ("var", toks[0])
        if len(toks) == 3 and toks[1] in ("==", "!="):
            need_pebble(toks[0], lineno)
            need_pebble(toks[2], lineno)
            return ("eq" if toks[1] == "==" else "ne", toks[0], toks[2])
        raise ProgramError("malformed condition", line=lineno)

    def parse_block(pos):
        stmts = []
        while pos < len(lines):
            lineno, toks = lines[pos]
            head = toks[0]
            if head == "}":
                return tuple(stmts), pos
            if head in ("pebble", "dir"):
                raise ProgramError("declarations must precede statements",
                                   line=lineno)
            if head == "guess":
                if len(toks) == 2:
                    name = toks[1]
                    if name in dir_names:
                        stmts.append(("guess", name, lineno))
                    elif name in bool_names:
                        stmts.append(("guess", name, lineno))
                    else:
                        raise ProgramError(f"undeclared variable {name!r}",
                                           line=lineno)
                elif len(toks) == 4 and toks[2] == ":" and toks[3] == "bool":
                    stmts.append(("guess", toks[1], lineno))
                else:
                    raise ProgramError("malformed guess", line=lineno)
                pos += 1
            elif head == "move":
                if len(toks) != 4 or toks[2] != "along":
                    raise ProgramError("expected: move <p> along <e>", line=lineno)
                need_pebble(toks[1], lineno)
                stmts.append(("move", toks[1], parse_label(toks[3], lineno), lineno))
                pos += 1
            elif head == "jump":
                if len(toks) != 4 or toks[2] != "to":
                    raise ProgramError("expected: jump <p> to <q>", line=lineno)
                need_pebble(toks[1], lineno)
                need_pebble(toks[3], lineno)
                stmts.append(("jump", toks[1], toks[3], lineno))
                pos += 1
            elif head == "visit":
                if len(toks) != 2:
                    raise ProgramError("expected: visit <p>", line=lineno)
                need_pebble(toks[1], lineno)
                if "curr" not in pebble_names:
                    raise ProgramError("visit needs a declared curr pebble",
                                       line=lineno)
                stmts.append(("jump", "curr", toks[1], lineno))
                pos += 1
            elif head == "fail":
                stmts.append(("fail", lineno))
                pos += 1
            elif head == "accept":
                stmts.append(("accept", lineno))
                pos += 1
            elif head == "if" or head == "while":
                if toks[-1] != "{":
                    raise ProgramError("expected '{' at line end", line=lineno)
                cond = parse_cond(toks[1:-1], lineno)
                block, pos = parse_block(pos + 1)
                if head == "while":
                    _expect_close(lines, pos, lineno)
                    stmts.append(("while", cond, block, lineno))
                    pos += 1
                else:
                    close_toks = lines[pos][1] if pos < len(lines) else None
                    if close_toks == ["}", "else", "{"]:
                        else_block, pos = parse_block(pos + 1)
                        _expect_close(lines, pos, lineno)
                        stmts.append(("if", cond, block, else_block, lineno))
                        pos += 1
                    else:
                        _expect_close(lines, pos, lineno)
                        stmts.append(("if", cond, block, (), lineno))
                        pos += 1
            elif head == "for":
                # for <id> = <a> to <b> {
                if len(toks) != 7 or toks[2] != "=" or toks[4] != "to" \
                        or toks[6] != "{":
                    raise ProgramError("expected: for <id> = <a> to <b> {",
                                       line=lineno)
                var = toks[1]
                if var not in dir_names:
                    raise ProgramError(f"loop variable {var!r} is not a dir",
                                       line=lineno)
                a = parse_bound(toks[3], lineno)
                b = parse_bound(toks[5], lineno)
                block, pos = parse_block(pos + 1)
                _expect_close(lines, pos, lineno)
                stmts.append(("for", var, a, b, block, lineno))
                pos += 1
            elif len(toks) >= 3 and toks[1] == ":=":
                need_pebble(head, lineno)
                need_pebble(toks[2], lineno)
                if len(toks) == 3:
                    stmts.append(("jump", head, toks[2], lineno))
                elif len(toks) == 5 and toks[3] == ".":
                    stmts.append(("jump", head, toks[2], lineno))
                    stmts.append(("move", head, parse_label(toks[4], lineno), lineno))
                else:
                    raise ProgramError("expected: <p> := <q> or <p> := <q>.<e>",
                                       line=lineno)
                pos += 1
            else:
                raise ProgramError(f"unrecognized statement {head!r}", line=lineno)
        return tuple(stmts), pos

    body, pos = parse_block(idx)
    if pos != len(lines):
        raise ProgramError("unbalanced '}'", line=lines[pos][0])
    return PebbleProgram(tuple(pebbles), tuple(dirs), tuple(bools), body, text)


def _expect_close(lines, pos, open_line):
    if pos >= len(lines) or lines[pos][1][0] != "}":
        raise ProgramError("missing '}' for block", line=open_line)
    if lines[pos][1] not in (["}"], ["}", "else", "{"]):
        raise ProgramError("malformed '}' line", line=lines[pos][0])


# ---------------------------------------------------------------------------
# Binding and lowering

@dataclass(frozen=True)
class BoundProgram:
    """Program lowered to flat instructions for a concrete graph degree."""

    program: PebbleProgram
    degree: int
    pebble_names: tuple
    s_idx: int
    t_idx: int
    curr_idx: int | None
    var_names: tuple
    var_domains: tuple        # tuple of value tuples
    init_vals: tuple
    instrs: tuple

    @property
    def num_pebbles(self) -> int:
        return len(self.pebble_names)

    def points(self) -> int:
        return len(self.instrs)


def _bind(prog: PebbleProgram, degree: int) -> BoundProgram:
    if degree < 1:
        raise InputError("degree must be at least 1")
    pebble_names = [name for name, _ in prog.pebbles]
    for auto in ("s", "t"):
        if auto not in pebble_names:
            pebble_names.append(auto)
    pidx = {name: i + 1 for i, name in enumerate(pebble_names)}
    s_idx, t_idx = pidx["s"], pidx["t"]
    curr_idx = pidx.get("curr")

    var_names = [name for name, _ in prog.dirs] + list(prog.bools)
    vidx = {name: i for i, name in enumerate(var_names)}
    label_vars = _move_label_vars(prog.body)
    domains = []
    for name, spec in prog.dirs:
        if spec[0] == "1..d":
            domains.append(tuple(range(1, degree + 1)))
        else:
            vals = spec[1]
            # only variables used as move labels must be degree-closed
            if name in label_vars and any(not 1 <= v <= degree for v in vals):
                raise ProgramError(
                    f"domain of {name!r} not within 1..{degree}")
            domains.append(vals)
    domains += [(False, True)] * len(prog.bools)
    init_vals = tuple(dom[0] for dom in domains)

    def label_expr(e, lineno):
        if e[0] == "lit":
            if e[1] > degree:
                raise ProgramError(f"label {e[1]} exceeds degree {degree}",
                                   line=lineno)
            return ("lit", e[1])
        if e[0] == "degree":
            return ("lit", degree)
        return ("var", vidx[e[1]])

    def bound_expr(e, lineno):
        if e[0] == "lit":
            return ("lit", e[1])
        if e[0] == "degree":
            return ("lit", degree)
        return ("var", vidx[e[1]])

    instrs: list = []

    def emit(op) -> int:
        instrs.append(op)
        return len(instrs) - 1

    def walk(stmts):
        for st in stmts:
            kind = st[0]
            lineno = st[-1]
            if kind == "jump":
                emit(("jump", pidx[st[1]], pidx[st[2]]))
            elif kind == "move":
                emit(("move", pidx[st[1]], label_expr(st[2], lineno)))
            elif kind == "guess":
                emit(("guess", vidx[st[1]]))
            elif kind == "fail":
                emit(("fail",))
            elif kind == "accept":
                emit(("accept",))
            elif kind == "if":
                _, cond, then_b, else_b, _ = st
                at = emit(None)
                walk(then_b)
                if else_b:
                    jp = emit(None)
                    else_pt = len(instrs)
                    walk(else_b)
                    instrs[jp] = ("goto", len(instrs))
                else:
                    else_pt = len(instrs)
                instrs[at] = _branch(cond, at + 1, else_pt, vidx, pidx)
                if else_b:
                    # then-branch falls through the goto emitted above
                    pass
            elif kind == "while":
                _, cond, block, _ = st
                head = emit(None)
                walk(block)
                emit(("goto", head))
                instrs[head] = _branch(cond, head + 1, len(instrs), vidx, pidx)
            elif kind == "for":
                _, var, a, b, block, _ = st
                vi = vidx[var]
                dom = domains[vi]
                if tuple(dom) != tuple(range(dom[0], dom[-1] + 1)):
                    raise ProgramError(
                        f"for-loop variable {var!r} needs a contiguous domain",
                        line=lineno)
                av, bv = bound_expr(a, lineno), bound_expr(b, lineno)
                # assignments must stay inside the counter's domain
                amin = av[1] if av[0] == "lit" else min(domains[av[1]])
                bmax = bv[1] if bv[0] == "lit" else max(domains[bv[1]])
                if amin < dom[0]:
                    raise ProgramError(
                        f"loop start below domain of {var!r}", line=lineno)
                if bmax > dom[-1]:
                    raise ProgramError(
                        f"loop bound can exceed domain of {var!r}", line=lineno)
                start_pt = emit(None)
                body_pt = len(instrs)
                walk(block)
                next_pt = emit(None)
                exit_pt = len(instrs)
                instrs[start_pt] = ("forstart", vi, av, bv, body_pt, exit_pt)
                instrs[next_pt] = ("fornext", vi, bv, body_pt, exit_pt)
            else:  # pragma: no cover
                raise AssertionError(kind)

    # prologue: non-t pebbles declared "at target" jump to t first
    for name, at_target in prog.pebbles:
        if at_target and pidx[name] != t_idx:
            emit(("jump", pidx[name], t_idx))
    walk(prog.body)
    emit(("fail",))  # falling off the end rejects
    return BoundProgram(prog, degree, tuple(pebble_names), s_idx, t_idx,
                        curr_idx, tuple(var_names), tuple(domains), init_vals,
                        tuple(instrs))


def _move_label_vars(stmts) -> set:
    out: set = set()
    for st in stmts:
        kind = st[0]
        if kind == "move" and st[2][0] == "var":
            out.add(st[2][1])
        elif kind == "if":
            out |= _move_label_vars(st[2])
            out |= _move_label_vars(st[3])
        elif kind == "while":
            out |= _move_label_vars(st[2])
        elif kind == "for":
            out |= _move_label_vars(st[4])
    return out


def _branch(cond, then_pt, else_pt, vidx, pidx):
    if cond[0] == "var":
        return ("ifvar", vidx[cond[1]], then_pt, else_pt)
    p, q = pidx[cond[1]], pidx[cond[2]]
    if cond[0] == "eq":
        return ("ifeq", p, q, then_pt, else_pt)
    return ("ifeq", p, q, else_pt, then_pt)


def _eval_bound(expr, vals):
    return expr[1] if expr[0] == "lit" else vals[expr[1]]


# ---------------------------------------------------------------------------
# Interpreter

@dataclass(frozen=True)
class RunResult:
    verdict: Verdict
    visit_order: tuple | None
    configs_explored: int


def interpret(prog: PebbleProgram, g: LabelledGraph, limits: Limits = Limits(),
              placements: Mapping[str, int] | None = None) -> RunResult:
    """Angelic execution: accept iff some resolution of guesses reaches accept.

    Explores the product (program point, valuation, placement) breadth-first
    with memoization.  On accept, reports the first-visit order of the curr
    pebble along the accepting run found (None without a curr pebble).
    ``placements`` maps pebble names to start nodes, a harness hook.
    """
    bp = prog.bind(g.degree)
    rho = g.rho
    init_nodes = [g.targetnode if i + 1 == bp.t_idx else g.startnode
                  for i in range(bp.num_pebbles)]
    if placements:
        for name, node in placements.items():
            init_nodes[bp.pebble_names.index(name)] = node
    start = (0, bp.init_vals, tuple(init_nodes))
    parent: dict = {start: None}
    frontier = deque([start])
    instrs = bp.instrs
    domains = bp.var_domains
    accept_state = None
    depth = 0
    level_left = 1
    next_level = 0
    while frontier:
        if level_left == 0:
            depth += 1
            level_left, next_level = next_level, 0
            if limits.max_run_len is not None and depth > limits.max_run_len:
                return RunResult(Verdict.RESOURCE_LIMIT, None, len(parent))
        state = frontier.popleft()
        level_left -= 1
        pt, vals, nodes = state
        op = instrs[pt]
        kind = op[0]
        if kind == "accept":
            accept_state = state
            break
        if len(parent) > limits.max_configs:
            return RunResult(Verdict.RESOURCE_LIMIT, None, len(parent))
        succs = []
        if kind == "jump":
            nn = list(nodes)
            nn[op[1] - 1] = nodes[op[2] - 1]
            succs.append((pt + 1, vals, tuple(nn)))
        elif kind == "move":
            label = _eval_bound(op[2], vals)
            nn = list(nodes)
            nn[op[1] - 1] = rho[nodes[op[1] - 1]][label - 1]
            succs.append((pt + 1, vals, tuple(nn)))
        elif kind == "guess":
            vi = op[1]
            for val in domains[vi]:
                nv = list(vals)
                nv[vi] = val
                succs.append((pt + 1, tuple(nv), nodes))
        elif kind == "ifeq":
            tgt = op[3] if nodes[op[1] - 1] == nodes[op[2] - 1] else op[4]
            succs.append((tgt, vals, nodes))
        elif kind == "ifvar":
            succs.append((op[2] if vals[op[1]] else op[3], vals, nodes))
        elif kind == "goto":
            succs.append((op[1], vals, nodes))
        elif kind == "forstart":
            a, b = _eval_bound(op[2], vals), _eval_bound(op[3], vals)
            if a > b:
                succs.append((op[5], vals, nodes))
            else:
                nv = list(vals)
                nv[op[1]] = a
                succs.append((op[4], tuple(nv), nodes))
        elif kind == "fornext":
            b = _eval_bound(op[2], vals)
            if vals[op[1]] >= b:
                succs.append((op[4], vals, nodes))
            else:
                nv = list(vals)
                nv[op[1]] += 1
                succs.append((op[3], tuple(nv), nodes))
        elif kind == "fail":
            succs = []
        else:  # pragma: no cover
            raise AssertionError(kind)
        for s in succs:
            if s not in parent:
                parent[s] = state
                frontier.append(s)
                next_level += 1
    if accept_state is None:
        return RunResult(Verdict.REJECT, None, len(parent))
    visit_order = None
    if bp.curr_idx is not None:
        path = []
        state = accept_state
        while state is not None:
            path.append(state)
            state = parent[state]
        path.reverse()
        order, seen = [], set()
        for _, _, nodes in path:
            v = nodes[bp.curr_idx - 1]
            if v not in seen:
                seen.add(v)
                order.append(v)
        visit_order = tuple(order)
    return RunResult(Verdict.ACCEPT, visit_order, len(parent))


# ---------------------------------------------------------------------------
# Compiler

_QA = "qa"


def compile_program(prog: PebbleProgram, degree: int) -> NdJag:
    """Compile to an automaton over states (program point, valuation).

    The machine is degree-specific, mirroring the nonuniformity of the
    model: direction domains and move labels are fixed at compile time.
    State count is bounded by program points times the product of variable
    domain sizes, plus the accept state.
    """
    bp = prog.bind(degree)
    instrs = bp.instrs
    domains = bp.var_domains
    npeb = bp.num_pebbles
    selfs = tuple(-(i + 1) for i in range(npeb))

    def delta(state, pi):
        if state == _QA:
            return ()
        pt, vals = state
        op = instrs[pt]
        kind = op[0]
        if kind == "jump":
            moves = list(selfs)
            moves[op[1] - 1] = -op[2]
            return (((pt + 1, vals), tuple(moves)),)
        if kind == "move":
            label = _eval_bound(op[2], vals)
            moves = list(selfs)
            moves[op[1] - 1] = label
            return (((pt + 1, vals), tuple(moves)),)
        if kind == "guess":
            vi = op[1]
            out = []
            for val in domains[vi]:
                nv = list(vals)
                nv[vi] = val
                out.append(((pt + 1, tuple(nv)), selfs))
            return tuple(out)
        if kind == "ifeq":
            together = pi[op[1] - 1] == pi[op[2] - 1]
            return (((op[3] if together else op[4], vals), selfs),)
        if kind == "ifvar":
            return (((op[2] if vals[op[1]] else op[3], vals), selfs),)
        if kind == "goto":
            return (((op[1], vals), selfs),)
        if kind == "forstart":
            a, b = _eval_bound(op[2], vals), _eval_bound(op[3], vals)
            if a > b:
                return (((op[5], vals), selfs),)
            nv = list(vals)
            nv[op[1]] = a
            return (((op[4], tuple(nv)), selfs),)
        if kind == "fornext":
            b = _eval_bound(op[2], vals)
            if vals[op[1]] >= b:
                return (((op[4], vals), selfs),)
            nv = list(vals)
            nv[op[1]] += 1
            return (((op[3], tuple(nv)), selfs),)
        if kind == "accept":
            return ((_QA, selfs),)
        if kind == "fail":
            return ()
        raise AssertionError(kind)  # pragma: no cover

    return NdJag(start_state=(0, bp.init_vals), accept_state=_QA,
                 num_pebbles=npeb, s=bp.s_idx, t=bp.t_idx, curr=bp.curr_idx,
                 delta=delta)

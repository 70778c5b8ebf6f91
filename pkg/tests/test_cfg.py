"""CFG construction and block ordering, with back-edge marking."""

from __future__ import annotations

import itertools
from collections import Counter

import pytest

from canalyzer.cfg import TerminatorKind, build_cfg, dump_cfg, dump_cfg_dot
from canalyzer.concrete import input_grid, run_ast, run_cfg, uninitialized_inputs
from canalyzer.frontend import ast, load
from canalyzer.normalizer import normalize
from oracle import corpus_files, program

CONDITION = """int main()
{
    int x = 10;
    if (x > 0) { x = 100; } else { x = -1; }
    return 0;
}"""
LOOP = "int main(){ int a = 6; int b = 2; while (a > 0) { a = a - 1; } b = a + b; return 0; }"
NESTED = ("int main(){int i = 0; int j; while(i<3){ j = 0; while(j<2){ j = j + 1; } i = i + 1;}"
          " return 0;}")


def cfg_of(src):
    return build_cfg(normalize(load(src)[0]))


# independent oracles over the successor relation --------------------------

def dfs_back_edges(cfg):
    """Edges into a block still on the DFS stack."""
    back, state = set(), {}

    def visit(b):
        state[b] = "open"
        for s in cfg.blocks[b].successors:
            if state.get(s) == "open":
                back.add((b, s))
            elif s not in state:
                visit(s)
        state[b] = "done"

    visit(cfg.entry)
    return back


def smallest_reverse_post_order(cfg):
    """Try every successor ordering; keep the lexicographically least RPO."""
    ids = sorted(cfg.blocks)
    choices = [itertools.permutations(cfg.blocks[b].successors) for b in ids]
    best = None
    for combo in itertools.product(*map(list, choices)):
        succ = dict(zip(ids, combo))
        post, seen = [], set()

        def visit(b):
            seen.add(b)
            for s in succ[b]:
                if s not in seen:
                    visit(s)
            post.append(b)

        visit(cfg.entry)
        order = post[::-1]
        best = order if best is None or order < best else best
    return best


# worked examples -----------------------------------------------------------

def test_straight_line():
    cfg = cfg_of("int main(){ int x = 10; x = x + 1; return x; }")
    assert [cfg.blocks[b].terminator for b in cfg.block_list] == [
        TerminatorKind.EMPTY, TerminatorKind.NONE, TerminatorKind.EMPTY]
    assert cfg.back_edges() == []


def test_condition_example_shape():
    cfg = cfg_of(CONDITION)
    assert len(cfg.blocks) == 6 and cfg.paper_name(cfg.entry) == "B5" and cfg.paper_name(cfg.exit) == "B0"
    head = cfg.blocks[1]
    assert cfg.paper_name(1) == "B4" and head.terminator == TerminatorKind.IF
    assert [cfg.paper_name(s) for s in head.successors] == ["B3", "B2"]
    assert ast.strip_locs(head.condition) == ast.strip_locs(load(
        "int main(){int x; if (x > 0) ;}")[0].body[1].cond)
    assert cfg.block_list == smallest_reverse_post_order(cfg) == [0, 1, 2, 3, 4, 5]
    assert cfg.back_edges() == []


def test_loop_example_shape():
    cfg = cfg_of(LOOP)
    heads = [b for b in cfg.blocks.values() if b.terminator == TerminatorKind.WHILE]
    assert len(heads) == 1 and heads[0].is_loop_head
    (edge,) = cfg.back_edges()
    assert edge.dst == heads[0].id and cfg.blocks[edge.src].is_back_edge_source
    assert {(edge.src, edge.dst)} == dfs_back_edges(cfg)
    # entry, preheader, head, body, after, exit
    assert cfg.block_list == smallest_reverse_post_order(cfg) == [0, 1, 2, 3, 4, 5]


def test_nested_loops_have_two_back_edges():
    cfg = cfg_of(NESTED)
    back = {(e.src, e.dst) for e in cfg.back_edges()}
    assert back == dfs_back_edges(cfg) and len(back) == 2
    assert len({d for _, d in back}) == 2
    assert all(cfg.blocks[d].terminator == TerminatorKind.WHILE for _, d in back)
    assert cfg.block_list == smallest_reverse_post_order(cfg)


def test_empty_function():
    cfg = cfg_of("int main(){}")
    assert cfg.block_list == [cfg.entry, cfg.exit] == [0, 1]


def test_dump_mentions_terminators_and_back_edges():
    text = dump_cfg(cfg_of(CONDITION))
    assert "terminator: If, succs: [B3, B2]" in text
    loop = dump_cfg(cfg_of(LOOP))
    assert "back-edge → B3 (block 2)" in loop
    assert dump_cfg(cfg_of(LOOP)) == loop
    dot = dump_cfg_dot(cfg_of(LOOP))
    assert dot.startswith('digraph "main" {') and dot == dump_cfg_dot(cfg_of(LOOP))


# properties over the corpus ------------------------------------------------

def _cfg(path):
    _, norm = program(path)
    return norm, build_cfg(norm)


def reachable_ids(cfg):
    seen, todo = set(), [cfg.entry]
    while todo:
        b = todo.pop()
        if b not in seen:
            seen.add(b)
            todo.extend(cfg.blocks[b].successors)
    return seen


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_structural_invariants(path):
    _, cfg = _cfg(path)
    assert sorted(cfg.block_list) == sorted(set(cfg.block_list))
    assert reachable_ids(cfg) <= set(cfg.block_list)
    for b in cfg.blocks.values():
        n = len(b.successors)
        if b.id == cfg.exit:
            assert n == 0 and b.terminator == TerminatorKind.EMPTY
        elif b.terminator in (TerminatorKind.IF, TerminatorKind.WHILE):
            assert n == 2 and b.condition is not None
        else:
            assert n == 1 and b.condition is None
        for s in b.successors:
            assert b.id in cfg.blocks[s].predecessors
        for p in b.predecessors:
            assert b.id in cfg.blocks[p].successors
    # back edges agree with DFS and go to While heads
    back = {(e.src, e.dst) for e in cfg.back_edges()}
    assert back == dfs_back_edges(cfg)
    assert all(cfg.blocks[d].terminator == TerminatorKind.WHILE for _, d in back)
    # block_list is a topological order of the forward edges
    pos = {b: i for i, b in enumerate(cfg.block_list)}
    for b in cfg.blocks.values():
        for s in b.successors:
            if (b.id, s) not in back and b.id in pos and s in pos:
                assert pos[b.id] < pos[s]


def _simple_statements(stmts):
    for s in ast.walk_stmts(stmts):
        if isinstance(s, (ast.Decl, ast.ExprStmt, ast.Assert, ast.Return)):
            yield s


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_statement_conservation(path):
    norm, cfg = _cfg(path)
    in_blocks = Counter(repr(ast.strip_locs(s)) for b in cfg.blocks.values() for s in b.statements)
    in_ast = Counter(repr(ast.strip_locs(s)) for s in _simple_statements(norm.body))
    assert in_blocks == in_ast


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_cfg_execution_matches_ast_execution(path):
    fn, norm = program(path)
    cfg = build_cfg(norm)
    for inputs in input_grid(uninitialized_inputs(fn), limit=300):
        a, b = run_ast(norm, inputs), run_cfg(cfg, norm, inputs)
        assert a.observable() == b.observable(), inputs
        assert b.visits[0][0] == cfg.entry
        if b.status == "ok":
            assert b.visits[-1][0] == cfg.exit

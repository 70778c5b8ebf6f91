"""The fixpoint engine: golden listings and properties over the corpus."""

from __future__ import annotations

import pytest

from canalyzer import EngineConfig, analyze_source
from canalyzer.cfg import build_cfg
from canalyzer.concrete import run_cfg
from canalyzer.domains.bounds import INF, NEG_INF
from canalyzer.engine import Engine, FixpointBudgetExceeded, InitState, unchain
from canalyzer.frontend import ast, load
from canalyzer.normalizer import normalize
from oracle import DOMAINS, analysis, corpus_files, program
import paper_listings as P

CONDITION = (P.EXAMPLES / "condition.c").read_text()
LOOP = (P.EXAMPLES / "loop.c").read_text()
NARROWING = (P.EXAMPLES / "narrowing.c").read_text()


def analyze(src, **kw):
    kw.setdefault("trace", True)
    (res,) = analyze_source(src, "t.c", EngineConfig(**kw))
    return res


def trace_lines(res):
    return P.lines("\n".join(res.trace))


def exit_value(res, name):
    return res.table.domain.project(res.table.entry_state(res.cfg.exit), name)


def engine_for(src, **kw):
    cfg = build_cfg(normalize(load(src)[0]))
    return Engine(cfg, EngineConfig(**kw))


# goldens ---------------------------------------------------------------------

def test_condition_example_trace_matches_listing():
    res = analyze(CONDITION)
    trace = trace_lines(res)
    expected = P.condition_trace()
    assert trace[:len(expected)] == expected
    b1 = [b for b in res.cfg.blocks if res.cfg.paper_name(b) == "B1"][0]
    assert res.table.domain.render(res.table.entry_state(b1)) == "x in [100,100]"


def test_loop_example_with_unrolling_matches_listing():
    res = analyze(LOOP, num_unrollings=5, narrowing_iterations=0)
    trace = trace_lines(res)
    expected = P.loop_unrolled()
    assert P.section(trace, "Fixed Point:", 9) == expected[:9]
    assert P.section(trace, "Resulting values:", 5) == expected[9:]
    assert (exit_value(res, "a"), exit_value(res, "b")) == ((0, 0), (2, 2))


def test_loop_example_without_unrolling():
    res = analyze(LOOP, num_unrollings=1, narrowing_iterations=0)
    trace = trace_lines(res)
    expected = P.loop_not_unrolled()
    assert P.section(trace, "Fixed Point:", 9) == expected[:9]
    assert exit_value(res, "a") == (NEG_INF, 0)
    lo, hi = exit_value(res, "b")
    assert lo <= 2 <= hi


def test_widening_fires_on_the_fifth_back_edge_visit():
    eng = engine_for(LOOP, num_unrollings=5, narrowing_iterations=0)
    src = next(e.src for e in eng.cfg.back_edges())
    seen = []
    orig = eng.widen_abs_val

    def spy(block):
        before = eng.table[block].end_state
        done = orig(block)
        seen.append((eng.domain.project(before, "a"), eng.domain.project(eng.table[block].end_state, "a"), done))
        return done

    eng.widen_abs_val = spy
    eng.ascend()
    assert [s[:2] for s in seen[:5]] == [
        ((5, 5), (5, 5)), ((4, 5), (4, 5)), ((3, 5), (3, 5)), ((2, 5), (2, 5)), ((1, 5), (NEG_INF, 5)),
    ]
    assert seen[-1] == ((0, 5), (0, 5), True)
    assert eng.table[src].back_edge_visits == 0


def test_loop_head_second_visit_joins_preheader_and_body():
    eng = engine_for(LOOP, num_unrollings=5, narrowing_iterations=0)
    head = next(e.dst for e in eng.cfg.back_edges())
    entries = []
    orig = eng.visit

    def spy(block, label=""):
        orig(block, label)
        if block == head:
            entries.append(eng.domain.project(eng.table[block].entry_state, "a"))

    eng.visit = spy
    eng.ascend()
    # iteration 2 by hand: a in [6,6] joined with a in [5,5]
    assert entries[:2] == [(6, 6), (5, 6)]


def test_branch_meets_and_join():
    eng = engine_for(CONDITION)
    eng.ascend()
    cfg, d = eng.cfg, eng.domain
    name = {cfg.paper_name(b): b for b in cfg.blocks}
    assert d.render(eng.table[name["B4"]].cond_pos) == "x in [1,+oo]"
    assert d.render(eng.table[name["B4"]].cond_neg) == "x in [-oo,0]"
    assert d.render(eng.meet_before(name["B3"], name["B4"])) == "x in [10,10]"
    assert d.is_bottom(eng.meet_before(name["B2"], name["B4"]))
    state, _ = eng.join_before(name["B1"])
    assert d.render(state) == "x in [100,100]"


def test_loop_exit_is_the_negated_condition_slice():
    eng = engine_for(LOOP, num_unrollings=5, narrowing_iterations=0)
    eng.ascend()
    head = next(e.dst for e in eng.cfg.back_edges())
    after = eng.cfg.blocks[head].successors[1]
    assert eng.domain.project(eng.table.entry_state(after), "a") == (0, 0)


def test_process_stmt_examples():
    eng = engine_for("int main(){int a = 6; int x; int y; x = y = 3; a = a - 1; return 0;}")
    d = eng.domain
    body = normalize(load("int main(){int a = 6; int x; int y; x = y = 3; a = a - 1; return 0;}")[0]).body
    state, flags = d.top(eng.env), InitState()
    for s in body:
        state, flags = eng.process_stmt(s, state, flags)
    assert d.project(state, "x") == d.project(state, "y") == (3, 3)
    assert d.project(state, "a") == (5, 5)
    assert flags.must == {"a", "x", "y"}


def test_cascaded_assignment_is_unchained_right_to_left():
    e = load("int main(){int x; int y; int z; x = y = z;}")[0].body[-1].expr
    assert [(n, type(r).__name__) for n, r, _ in unchain(e)] == [("y", "VarRef"), ("x", "VarRef")]


def test_identity_loop_reaches_fixpoint_on_second_back_edge_visit():
    eng = engine_for("int main(){int i = 0; int k; while (i < 1) { k = k; } return 0;}",
                     num_unrollings=5, narrowing_iterations=0)
    src = next(e.src for e in eng.cfg.back_edges())
    calls = []
    orig = eng.widen_abs_val
    eng.widen_abs_val = lambda b: calls.append(orig(b)) or calls[-1]
    eng.ascend()
    assert calls == [False, True]
    assert eng.table[src].back_edge_visits == 0


def test_narrowing_recovers_exact_loop_exit():
    res = analyze(NARROWING, num_unrollings=1, narrowing_iterations=2)
    assert exit_value(res, "i") == (100, 100)
    head = next(e.dst for e in res.cfg.back_edges())
    assert res.table.domain.project(res.table.entry_state(head), "i") == (0, 100)
    (fn,) = load(NARROWING)
    out = run_cfg(res.cfg, normalize(fn), {})
    assert out.status == "ok" and out.store["i"] == 100
    widened = analyze(NARROWING, num_unrollings=1, narrowing_iterations=0)
    assert exit_value(widened, "i") == (100, INF)


def test_narrowing_leaves_exact_fixpoint_unchanged():
    a = analyze(LOOP, num_unrollings=5, narrowing_iterations=0)
    b = analyze(LOOP, num_unrollings=5, narrowing_iterations=2)
    for s in a.table:
        assert a.table.domain.equal(s.entry_state, b.table.entry_state(s.block_id))


def test_empty_body():
    res = analyze("int main(){}", trace=False)
    d = res.table.domain
    assert all(d.is_top(s.entry_state) for s in res.table)
    assert res.diagnostics == [] and res.verdicts == []


def test_octagon_loop_example():
    res = analyze(LOOP, domain="octagon")
    assert exit_value(res, "a") == (0, 0)
    assert exit_value(res, "b") == (2, 2)


def test_sweep_budget():
    src = "int main(){int i = 0; while (i < 100) i++; return 0;}"
    eng = engine_for(src, num_unrollings=1000, narrowing_iterations=0, max_fixpoint_sweeps=10)
    with pytest.raises(FixpointBudgetExceeded):
        eng.ascend()


@pytest.mark.parametrize("kw", [dict(num_unrollings=0), dict(narrowing_iterations=-1),
                                dict(domain="polyhedra"), dict(max_fixpoint_sweeps=0)])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        EngineConfig(**kw)


# properties over the corpus -------------------------------------------------

FILES = corpus_files()


@pytest.mark.parametrize("domain", DOMAINS)
@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_more_unrolling_is_never_less_precise(path, domain):
    for narrow in (0, 2):
        for k in range(1, 5):
            tight, loose = analysis(path, domain, k + 1, narrow), analysis(path, domain, k, narrow)
            d = tight.table.domain
            for s in tight.table:
                assert d.leq(s.entry_state, loose.table.entry_state(s.block_id))


@pytest.mark.parametrize("domain", DOMAINS)
@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_narrowing_never_grows(path, domain):
    assert analysis(path, domain, 1, 2).notes == []
    wide, narrow = analysis(path, domain, 1, 0), analysis(path, domain, 1, 2)
    d = wide.table.domain
    for s in narrow.table:
        assert d.leq(s.entry_state, wide.table.entry_state(s.block_id))


def _loop_blocks(cfg):
    """Blocks of each loop, keyed by head, from the back edges and block order."""
    pos = {b: i for i, b in enumerate(cfg.block_list)}
    return {e.dst: set(cfg.block_list[pos[e.dst]:pos[e.src] + 1]) for e in cfg.back_edges()}


@pytest.mark.parametrize("domain", DOMAINS)
@pytest.mark.parametrize("path", FILES, ids=lambda p: p.stem)
def test_ascending_visits_are_monotone_within_a_loop_run(path, domain):
    # with widening on every back-edge visit; a loop entered afresh from its
    # preheader starts a new run and its history is dropped
    _, norm = program(path)
    eng = Engine(build_cfg(norm), EngineConfig(domain, 1, 0))
    loops = _loop_blocks(eng.cfg)
    history = {}
    orig = eng.visit

    def spy(block, label=""):
        if block in loops and not any(
                eng.cfg.edges[(p, block)].visited for p in eng.cfg.blocks[block].predecessors
                if eng.cfg.edges[(p, block)].is_back_edge):
            for b in loops[block]:
                history.pop(b, None)
        orig(block, label)
        end = eng.table[block].end_state
        if block in history:
            assert eng.domain.leq(history[block], end), block
        history[block] = end

    eng.visit = spy
    eng.ascend()

"""Acceptance criteria, one test each.

Every test records a ``criterion N: PASS`` or ``criterion N: FAIL`` line,
printed live and again in the terminal summary.  Golden values come from
the listings in paper.md; derived values come from the concrete oracle.
"""

from __future__ import annotations

import functools
import importlib

import pytest
from hypothesis import settings

import conftest
import paper_listings as P
from canalyzer import EngineConfig, analyze_source
from canalyzer.cli import main as cli_main
from canalyzer.concrete import run_cfg
from canalyzer.domains import IntervalDomain, VarEnv
from canalyzer.domains.bounds import INF, NEG_INF
from canalyzer.frontend import load
from canalyzer.normalizer import normalize
from oracle import (
    DOMAINS, containment_failures, corpus_files, precision_violations, reachable,
    strictly_tighter_at_exit,
)

I = IntervalDomain()
X = VarEnv.of(["x"])
BOUNDS = {"-oo": NEG_INF, "+oo": INF}


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                _record(number, title, "FAIL")
                raise
            _record(number, title, "PASS")
        return run
    return wrap


def _record(number, title, verdict):
    line = f"criterion {number:2d}: {verdict}  {title}"
    conftest.ACCEPTANCE_LINES.append((number, line))
    print("\n" + line)


def analyze(path_or_src, **kw):
    src = path_or_src.read_text() if hasattr(path_or_src, "read_text") else path_or_src
    (res,) = analyze_source(src, "t.c", EngineConfig(**kw))
    return res


def iv(pair):
    return I.make(X, [tuple(BOUNDS[b] if b in BOUNDS else int(b) for b in pair)])


def block_named(res, name):
    return next(b for b in res.cfg.blocks if res.cfg.paper_name(b) == name)


@criterion(1, "condition example: B1 entry x in [100,100], branch states as listed")
def test_criterion_01_condition_golden():
    res = analyze(P.EXAMPLES / "condition.c", trace=True)
    d = res.table.domain
    assert d.render(res.table.entry_state(block_named(res, "B1"))) == "x in [100,100]"
    assert d.render(res.table.entry_state(block_named(res, "B3"))) == "x in [10,10]"
    assert d.is_bottom(res.table.entry_state(block_named(res, "B2")))
    b4 = res.table[block_named(res, "B4")]
    assert d.render(b4.cond_pos) == "x in [1,+oo]" and d.render(b4.cond_neg) == "x in [-oo,0]"
    expected = P.condition_trace()
    assert P.lines("\n".join(res.trace))[:len(expected)] == expected


@criterion(2, "loop example, unroll 5: a in [0,0], b in [2,2], fixpoint a in [0,5]")
def test_criterion_02_loop_unrolled_golden():
    res = analyze(P.EXAMPLES / "loop.c", num_unrollings=5, narrowing_iterations=0, trace=True)
    d, exit_state = res.table.domain, res.table.entry_state(res.cfg.exit)
    assert (d.project(exit_state, "a"), d.project(exit_state, "b")) == ((0, 0), (2, 2))
    expected = P.loop_unrolled()
    trace = P.lines("\n".join(res.trace))
    assert P.section(trace, "Fixed Point:", 9) == expected[:9]
    assert P.section(trace, "Resulting values:", 5) == expected[9:]
    src = next(e.src for e in res.cfg.back_edges())
    assert d.render(res.table[src].loop_exit_prev) == "a in [0,5]\nb in [2,2]"


@criterion(3, "loop example, unroll 1: a in [-oo,0], b contains 2")
def test_criterion_03_loop_not_unrolled():
    res = analyze(P.EXAMPLES / "loop.c", num_unrollings=1, narrowing_iterations=0, trace=True)
    d, exit_state = res.table.domain, res.table.entry_state(res.cfg.exit)
    assert d.project(exit_state, "a") == (NEG_INF, 0)
    assert P.loop_not_unrolled()[12] == "       a in [-oo,0]"
    lo, hi = d.project(exit_state, "b")
    assert lo <= 2 <= hi


@criterion(4, "interval widening and narrowing tables with bottom/top absorption")
def test_criterion_04_operator_tables():
    examples = P.operator_examples()
    assert len(examples["widen"]) == 3 and len(examples["narrow"]) == 3
    for a, b, r in examples["widen"]:
        assert I.widen(iv(a), iv(b)) == iv(r)
    for a, b, r in examples["narrow"]:
        assert I.narrow(iv(a), iv(b)) == iv(r)
    bot, top = I.bottom(X), I.top(X)
    for x in (I.make(X, [(1, 4)]), I.make(X, [(NEG_INF, 0)]), top, bot):
        assert I.widen(x, bot) == x and I.widen(bot, x) == x
        if not I.is_bottom(x):
            assert I.widen(x, top) == top and I.widen(top, x) == top
            assert I.narrow(x, top) == x and I.narrow(top, x) == x
        assert I.is_bottom(I.narrow(x, bot)) and I.is_bottom(I.narrow(bot, x))


@criterion(5, "Galois example: alpha({2,4,6,8,10}) = [2,10], gamma on [0,12]")
def test_criterion_05_galois_example():
    xs, alpha, gamma = P.galois_example()
    a = I.alpha_points([(x,) for x in xs], X)
    assert a == I.make(X, [alpha]) == I.make(X, [(2, 10)])
    assert [v for v in range(0, 13) if I.contains(a, (v,))] == gamma == list(range(2, 11))


LAW_TESTS = [
    "test_join_meet_commutative", "test_join_meet_associative", "test_idempotence_and_absorption",
    "test_bounded_lattice_laws", "test_leq_compatible_with_join_and_meet",
    "test_widening_covers_both_arguments", "test_widening_stabilizes_on_ascending_chains",
    "test_narrowing_sandwich", "test_galois_on_point_sets",
    "test_dbm_closure_idempotent_and_coherent", "test_octagon_operations_keep_coherence",
]


@criterion(6, "property suite: >=1000 fixed-seed cases per law, zero failures")
def test_criterion_06_property_suite(request):
    laws = importlib.import_module("test_domain_laws")
    assert laws.N >= 1000
    assert settings().derandomize and settings().database is None
    collected = getattr(request.config, "_law_items", [])
    if collected and all(n in conftest.LAW_OUTCOMES for n in collected):
        names = {n.split("::")[1].split("[")[0] for n in collected}
        assert names >= set(LAW_TESTS)
        failed = [n for n in collected if not conftest.LAW_OUTCOMES[n]]
        assert failed == []
        return
    # run on its own: execute the laws here
    for name in LAW_TESTS:
        fn = getattr(laws, name)
        marks = [m for m in getattr(fn, "pytestmark", []) if m.name == "parametrize"]
        if not marks:
            fn()
            continue
        (mark,) = marks
        argnames = [a.strip() for a in mark.args[0].split(",")] if isinstance(mark.args[0], str) \
            else list(mark.args[0])
        for values in mark.args[1]:
            values = values if len(argnames) > 1 else (values,)
            fn(**dict(zip(argnames, values)))


@criterion(7, "soundness oracle: >=30 programs, every reachable store contained, 3 domains")
def test_criterion_07_soundness_oracle():
    files = corpus_files()
    assert len(files) >= 30
    failures = {}
    for path in files:
        points, _ = reachable(path)
        assert points
        for domain in DOMAINS:
            bad = containment_failures(path, domain)
            if bad:
                failures[(path.stem, domain)] = bad[:3]
    assert failures == {}


@criterion(8, "precision ordering: octagon within interval everywhere, strictly tighter once")
def test_criterion_08_precision_ordering():
    files = corpus_files()
    assert {p.stem: precision_violations(p) for p in files if precision_violations(p)} == {}
    assert [p.stem for p in files if strictly_tighter_at_exit(p)]


@criterion(9, "checks fire, verdicts proven/violated/unknown, exit codes 0/1/2")
def test_criterion_09_checks_and_exit_codes(tmp_path, capsys):
    def diags(src):
        return [(d.kind, d.severity, d.variable) for d in analyze(src).diagnostics]

    assert diags("int main(){int x; int y = 0; x = 1 / y; return 0;}") == [
        ("DivByZero", "definite", None)]
    assert ("DivByZero", "possible", None) in diags(
        "int main(){int x; int y; if (y >= -1) { if (y <= 1) { x = 1 / y; } } return 0;}")
    assert diags("int main(){int x = 2147483647; x = x + 1; return 0;}") == [
        ("Overflow", "definite", None)]
    assert ("UninitializedUse", "definite", "x") in diags(
        "int main(){int x; int y; y = x + 1; return y;}")
    res = analyze("int main(){int x = 100; int y; MYASSERT(x > 0); MYASSERT(x < 0);"
                  " MYASSERT(y > 0); return 0;}")
    assert [v.result for v in res.verdicts] == ["proven", "violated", "unknown"]

    good = tmp_path / "good.c"
    good.write_text("int main(){int x = 100; MYASSERT(x > 0); return 0;}")
    bad = tmp_path / "bad.c"
    bad.write_text("int main(){int x = 100; MYASSERT(x < 0); return 0;}")
    assert cli_main([str(good)]) == 0
    assert cli_main([str(bad)]) == 1
    assert cli_main([str(tmp_path / "missing.c")]) == 2
    assert cli_main([str(good), "--unroll", "0"]) == 2
    capsys.readouterr()


@criterion(10, "narrowing: i=0; while(i<100) i++; unroll 1, narrow 2 gives i in [100,100]")
def test_criterion_10_narrowing_recovery():
    path = P.EXAMPLES / "narrowing.c"
    res = analyze(path, num_unrollings=1, narrowing_iterations=2)
    d = res.table.domain
    assert d.project(res.table.entry_state(res.cfg.exit), "i") == (100, 100)
    norm = normalize(load(path.read_text())[0])
    out = run_cfg(res.cfg, norm, {})
    assert out.status == "ok" and out.store["i"] == 100
    widened = analyze(path, num_unrollings=1, narrowing_iterations=0)
    assert widened.table.domain.project(widened.table.entry_state(widened.cfg.exit), "i") == (100, INF)

"""Source-to-source simplification: expected shapes and preserved behaviour."""

from __future__ import annotations

import pytest

from canalyzer.concrete import input_grid, run_ast, uninitialized_inputs
from canalyzer.frontend import ast, load, to_c
from canalyzer.normalizer import (
    desugar_break, desugar_logical, desugar_loops, fold_constants, normal_form_violations,
    normalize, remove_unused,
)
from canalyzer.frontend import UnsupportedFeature
from oracle import corpus_files, program


def body(fn):
    """Printed statements of ``fn`` without the signature and braces."""
    lines = to_c(fn).strip().splitlines()[2:-1]
    return "\n".join(line[4:] for line in lines)


def norm(src):
    return normalize(load(src)[0])


def same_behaviour(src, names, lo=-8, hi=8):
    (fn,) = load(src)
    out = normalize(fn)
    for inputs in input_grid(names, lo, hi):
        a, b = run_ast(fn, inputs), run_ast(out, inputs)
        keep = [n for n, _ in out.variables if n in a.store]
        assert a.observable(keep) == b.observable(keep), inputs


def test_for_becomes_while():
    fn = desugar_loops(load("int main(){int i; int s = 0; for(i=0; i<3; i++) s = s + i; return s;}")[0])
    assert body(fn) == (
        "int i;\nint s = 0;\ni = 0;\nwhile (i < 3) {\n    s = s + i;\n    i++;\n}\nreturn s;"
    )


def test_for_without_condition_uses_literal_one():
    fn = desugar_loops(load("int main(){int i; for(;;) { i = 1; } return 0;}")[0])
    assert "while (1) {" in body(fn)


def test_while_is_unchanged_by_loop_desugaring():
    (fn,) = load("int main(){int x; while (x > 0) x = x - 1; return 0;}")
    assert desugar_loops(fn) == fn


def test_do_while_duplicates_the_body():
    out = norm("int main(){int x; do {x=x-1;} while(x>0); return x;}")
    assert body(out) == (
        "int x;\n{\n    x = x - 1;\n}\nwhile (x > 0) {\n    x = x - 1;\n}\nreturn x;"
    )
    same_behaviour("int main(){int x; do {x=x-1;} while(x>0); return x;}", ["x"])


def test_break_becomes_forward_goto():
    out = desugar_break(desugar_loops(load(
        "int main(){int x; while(1){ if(x>9) break; x++; } return x;}")[0]))
    assert body(out) == (
        "int x;\nwhile (1) {\n    if (x > 9) {\n        goto __L0;\n    }\n    x++;\n}\n__L0:\nreturn x;"
    )


def test_break_binds_to_innermost_loop():
    out = norm("int main(){int i; int j; while(i<3){ while(1){ break; } i++; } return 0;}")
    text = body(out)
    inner_close = text.index("}\n    __L0:")
    assert text.index("goto __L0;") < inner_close
    assert "i = i + 1;" in text[inner_close:]


def test_program_without_break_is_unchanged():
    (fn,) = load("int main(){int x; while (x > 0) x = x - 1; return 0;}")
    assert desugar_break(fn) == fn


def test_short_circuit_and_becomes_nested_if():
    out = norm("int main(){int a; int b; int s; if (a>0 && b>0) s=1; return s;}")
    assert body(out) == (
        "int a;\nint b;\nint s;\nif (a > 0) {\n    if (b > 0) {\n        s = 1;\n    }\n}\nreturn s;"
    )


def test_conditional_operator_becomes_if_else():
    out = norm("int main(){int c; int a; int b; int x; x = c ? a : b; return x;}")
    assert "if (c != 0) {\n    x = a;\n} else {\n    x = b;\n}" in body(out)


def test_switch_without_fallthrough_becomes_ladder():
    src = "int main(){int v; int s; switch(v){case 1: s=1; break; default: s=2;} return s;}"
    assert "if (v == 1) {\n    s = 1;\n} else {\n    s = 2;\n}" in body(norm(src))
    same_behaviour(src, ["v", "s"], -4, 4)


def test_switch_with_fallthrough_preserves_behaviour():
    src = """int main(){int v; int s = 0;
      switch(v){case 1: s = s + 1; case 2: s = s + 10; break; case 3: s = 7; default: s = s - 1;}
      return s;}"""
    assert not normal_form_violations(norm(src))
    same_behaviour(src, ["v"], -4, 4)


def test_constant_folding():
    fold = lambda src: body(fold_constants(load(src)[0]))
    assert "x = 2;" in fold("int main(){int x; x = 1+1; return x;}")
    assert "x = y + 0;" in fold("int main(){int x; int y; x = y+0; return x;}")
    assert "u = 4294967295u;" in fold("int main(){unsigned u; u = 0u - 1u; return 0;}")
    # signed overflow is left for the analyzer to report
    assert "x = 2147483647 + 1;" in fold("int main(){int x; x = 2147483647 + 1; return x;}")


def test_remove_unused_declarations():
    rm = lambda src: body(remove_unused(load(src)[0]))
    assert "int z;" not in rm("int main(){int x = 1; int z; return x;}")
    assert "int z = 5;" in rm("int main(){int y; int z = 5; y = z; return y;}")
    assert "int z = 1;" in rm("int main(){int y = 1; int z = 1; z++; return y;}")


def test_assignment_in_condition_is_hoisted():
    out = norm("int main(){int x; int y; if (x = y) x = 3; while (x) x--; return 0;}")
    assert body(out) == (
        "int x;\nint y;\nx = y;\nif (x != 0) {\n    x = 3;\n}\n"
        "while (x != 0) {\n    x = x - 1;\n}\nreturn 0;"
    )


def test_backward_goto_is_rejected():
    with pytest.raises(UnsupportedFeature):
        norm("int main(){int x; L: x = 1; goto L; return 0;}")


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_corpus_reaches_normal_form(path):
    _, out = program(path)
    assert normal_form_violations(out) == []
    labels, seen = [], set()
    for node in ast.walk_stmts(out.body):
        if isinstance(node, ast.Label):
            seen.add(node.name)
        elif isinstance(node, ast.Goto):
            assert node.label not in seen, "goto must be forward"
            labels.append(node.label)
    assert set(labels) <= seen


@pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
def test_normalization_preserves_concrete_behaviour(path):
    fn, out = program(path)
    names = [n for n, _ in out.variables]
    for inputs in input_grid(uninitialized_inputs(fn), limit=400):
        a, b = run_ast(fn, inputs), run_ast(out, inputs)
        keep = [n for n in names if n in a.store]
        assert a.observable(keep) == b.observable(keep), inputs


def test_fresh_names_are_deterministic():
    src = "int main(){int a; int b; int x; x = (a && b) ? 1 : 2; while (1) { break; } return x;}"
    assert to_c(norm(src)) == to_c(norm(src))
    assert "__L0" in to_c(norm(src))

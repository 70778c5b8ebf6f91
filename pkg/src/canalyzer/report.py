"""Text and JSON reports of analysis results."""

from __future__ import annotations

import json

from . import checks


def _loc(loc) -> dict:
    return {"file": loc.file, "line": loc.line, "column": loc.column}


def _config(config) -> dict:
    return {
        "domain": config.domain,
        "num_unrollings": config.num_unrollings,
        "narrowing_iterations": config.narrowing_iterations,
    }


def _diag_json(fn_name, d: checks.Diagnostic) -> dict:
    return {
        "function": fn_name,
        "kind": d.kind,
        "severity": d.severity,
        "loc": _loc(d.loc),
        "message": d.message,
        "variable": d.variable,
    }


def _verdict_json(fn_name, v: checks.Verdict) -> dict:
    return {
        "function": fn_name,
        "loc": _loc(v.assertion_loc),
        "condition": v.condition,
        "result": v.result,
        "note": v.note,
        "state": v.state_at,
    }


def to_json(results, config) -> str:
    blocks, diagnostics, verdicts = [], [], []
    for r in results:
        d = r.table.domain
        name = r.function.name
        for s in r.table:
            blocks.append({
                "function": name,
                "id": s.block_id,
                "name": r.cfg.paper_name(s.block_id),
                "terminator": str(s.terminator),
                "is_back_edge_source": s.is_back_edge_source,
                "entry": d.to_json(s.entry_state),
                "end": d.to_json(s.end_state),
            })
        diagnostics += [_diag_json(name, x) for x in r.diagnostics]
        verdicts += [_verdict_json(name, v) for v in r.verdicts]
    doc = {"config": _config(config), "blocks": blocks,
           "diagnostics": diagnostics, "verdicts": verdicts}
    return json.dumps(doc, indent=2) + "\n"


def to_text(results, config, trace: bool = False) -> str:
    lines = []
    for r in results:
        d = r.table.domain
        lines.append(f"function {r.function.name}: domain {config.domain}, "
                     f"unroll {config.num_unrollings}, narrow {config.narrowing_iterations}")
        if trace and r.trace:
            lines.append("")
            lines.extend(r.trace)
        lines.append("")
        lines.append("Block invariants (state at block entry):")
        for s in r.table:
            lines.append(f"  {r.cfg.paper_name(s.block_id)} (block {s.block_id}):")
            lines.extend("    " + x for x in d.render_listing(s.entry_state).splitlines())
        lines.append("")
        lines.append("Diagnostics:")
        lines.extend(f"  {x}" for x in r.diagnostics) if r.diagnostics else lines.append("  none")
        lines.append("Assertions:")
        lines.extend(f"  {v}" for v in r.verdicts) if r.verdicts else lines.append("  none")
        for note in r.notes:
            lines.append(f"note: {note}")
        lines.append("")
    return "\n".join(lines)


def emit_report(results, config, fmt: str = "text", trace: bool = False) -> str:
    if fmt == "json":
        return to_json(results, config)
    if fmt == "text":
        return to_text(results, config, trace)
    raise ValueError(f"unknown report format {fmt!r}")


def exit_status(results) -> int:
    """1 when any assertion is violated or any diagnostic is definite."""
    for r in results:
        if any(v.result == "violated" for v in r.verdicts):
            return 1
        if any(x.severity == "definite" for x in r.diagnostics):
            return 1
    return 0

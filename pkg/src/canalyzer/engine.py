"""Block-by-block abstract interpretation over the CFG.

Blocks are visited in layout order.  A block's entry state comes from its
predecessors: a join when there are several, the refined branch value when
the single predecessor ends in a condition, and a plain copy otherwise.
Widening is delayed by ``num_unrollings`` back-edge visits and applied at
the back-edge source; a non-stable visit sends control back to the loop
head.  An optional descending pass with narrowing follows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Optional

from . import checks
from .cfg import Cfg, TerminatorKind, build_cfg
from .domains import NotDescending, VarEnv, get_domain
from .domains import arith
from .frontend import ast

log = logging.getLogger(__name__)


class FixpointBudgetExceeded(Exception):
    def __init__(self, block: int):
        super().__init__(f"no fixpoint after the sweep budget at block {block}")
        self.block = block


@dataclass(frozen=True)
class EngineConfig:
    domain: str = "interval"
    num_unrollings: int = 5
    narrowing_iterations: int = 2
    max_fixpoint_sweeps: int = 1000
    trace: bool = False

    def __post_init__(self):
        get_domain(self.domain)
        if self.num_unrollings < 1:
            raise ValueError("num_unrollings must be at least 1")
        if self.narrowing_iterations < 0:
            raise ValueError("narrowing_iterations must be non-negative")
        if self.max_fixpoint_sweeps < 1:
            raise ValueError("max_fixpoint_sweeps must be positive")


@dataclass(frozen=True)
class InitState:
    """Definitely (``must``) and possibly (``may``) initialized variables."""

    must: frozenset = frozenset()
    may: frozenset = frozenset()

    def merge(self, other: "InitState") -> "InitState":
        return InitState(self.must & other.must, self.may | other.may)

    def set(self, name: str) -> "InitState":
        return InitState(self.must | {name}, self.may | {name})

    def clear(self, name: str) -> "InitState":
        return InitState(self.must - {name}, self.may - {name})


@dataclass
class BlockSummary:
    block_id: int
    terminator: TerminatorKind
    is_back_edge_source: bool
    entry_state: object = None
    end_state: object = None
    cond_pos: Optional[object] = None
    cond_neg: Optional[object] = None
    loop_exit_prev: Optional[object] = None
    back_edge_visits: int = 0
    init_entry: Optional[InitState] = None
    init_end: Optional[InitState] = None
    visits: int = 0


@dataclass
class SummaryTable:
    cfg: Cfg
    env: VarEnv
    domain: object
    entries: dict = field(default_factory=dict)

    def __getitem__(self, block_id: int) -> BlockSummary:
        return self.entries[block_id]

    def __iter__(self):
        return iter(self.entries[b] for b in sorted(self.entries))

    def entry_state(self, block_id: int):
        return self.entries[block_id].entry_state


@dataclass
class AnalysisResult:
    function: ast.Function
    cfg: Cfg
    table: SummaryTable
    config: EngineConfig
    diagnostics: list
    verdicts: list
    trace: list
    notes: list


def unchain(e: ast.Assign) -> list:
    """``x = y = e`` as [(y, e), (x, y)]: innermost assignment first."""

    def split(v):
        if isinstance(v, ast.Cast):
            pairs, inner = split(v.operand)
            return pairs, replace(v, operand=inner)
        if isinstance(v, ast.Assign):
            return unchain(v), ast.VarRef(v.target.name, type=v.target.type, loc=v.target.loc)
        return [], v

    pairs, rhs = split(e.value)
    return pairs + [(e.target.name, rhs, e.loc)]


class Engine:
    def __init__(self, cfg: Cfg, config: EngineConfig, assert_text: Optional[dict] = None):
        self.cfg = cfg
        self.config = config
        self.domain = get_domain(config.domain)
        self.env = VarEnv.of(cfg.variables)
        self.table = SummaryTable(cfg, self.env, self.domain)
        self.order = list(cfg.block_list)
        self.pos = {b: i for i, b in enumerate(self.order)}
        self.trace: list = []
        self.notes: list = []
        self.assert_text = assert_text or {}
        self.neutral_flags = InitState(frozenset(self.env.names), frozenset())
        for b in self.order:
            blk = cfg.blocks[b]
            self.table.entries[b] = BlockSummary(
                b, blk.terminator, blk.is_back_edge_source,
                entry_state=self.domain.bottom(self.env),
                end_state=self.domain.bottom(self.env),
                init_entry=self.neutral_flags, init_end=self.neutral_flags)

    # -- tracing -----------------------------------------------------------

    def listing(self, state) -> str:
        return self.domain.render_listing(state)

    def emit(self, *lines):
        if self.config.trace:
            self.trace.extend(lines)

    # -- entry states ------------------------------------------------------

    def meet_before(self, block: int, pred: int):
        """Predecessor end state refined by the branch that leads to ``block``."""
        p = self.table[pred]
        blk = self.cfg.blocks[pred]
        positive = blk.successors[0] == block
        cond = p.cond_pos if positive else p.cond_neg
        state = self.domain.meet(p.end_state, cond)
        # the atom itself is applied again so that relational facts the
        # domain cannot express on its own survive the meet
        return self.domain.assume(state, blk.condition, positive)

    def contribution(self, block: int, pred: int):
        blk = self.cfg.blocks[pred]
        if blk.condition is not None:
            return self.meet_before(block, pred)
        return self.table[pred].end_state

    def join_before(self, block: int):
        state = self.domain.bottom(self.env)
        flags = None
        for pred in self.cfg.blocks[block].predecessors:
            edge = self.cfg.edges[(pred, block)]
            if edge.is_back_edge and not edge.visited:
                continue
            value = self.contribution(block, pred)
            state = self.domain.join(state, value)
            if not self.domain.is_bottom(value):
                pf = self.table[pred].init_end
                flags = pf if flags is None else flags.merge(pf)
        return state, flags or self.neutral_flags

    def entry_of(self, block: int):
        blk = self.cfg.blocks[block]
        if block == self.cfg.entry:
            return self.domain.top(self.env), InitState(), None
        preds = blk.predecessors
        if not preds:
            return self.domain.bottom(self.env), self.neutral_flags, None
        if len(preds) > 1:
            state, flags = self.join_before(block)
            return state, flags, "join"
        pred = preds[0]
        flags = self.table[pred].init_end
        if self.cfg.blocks[pred].condition is not None:
            return self.meet_before(block, pred), flags, "meet"
        return self.table[pred].end_state, flags, None

    # -- statements --------------------------------------------------------

    def read_uninit(self, state, flags, expr, loc, out):
        """Report reads of variables that may be uninitialized.

        Such a variable already holds top from the entry state or from its
        declaration, so its value is not forgotten again here; later tests
        on the same indeterminate value may still refine it.
        """
        if out is not None:
            out.extend(checks.check_uninitialized(flags, expr, loc))
        return state

    def process_stmt(self, s, state, flags, out=None, verdicts=None):
        d = self.domain
        sink = [] if out is not None else None
        if isinstance(s, ast.Decl):
            if s.init is None:
                state, flags = d.forget(state, s.name), flags.clear(s.name)
            else:
                state = self.read_uninit(state, flags, s.init, s.loc, out)
                state = d.assign(state, s.name, s.init, sink)
                flags = flags.set(s.name)
        elif isinstance(s, ast.ExprStmt):
            e = s.expr
            state = self.read_uninit(state, flags, e, s.loc, out)
            if isinstance(e, ast.Assign):
                for name, rhs, _ in unchain(e):
                    state = d.assign(state, name, rhs, sink)
                    flags = flags.set(name)
            elif not d.is_bottom(state):
                arith.evaluate(e, lambda n: d.project(state, n), sink)
        elif isinstance(s, ast.Assert):
            state = self.read_uninit(state, flags, s.cond, s.loc, out)
            if verdicts is not None:
                v = checks.check_assert(d, state, s.cond, s.loc)
                text = self.assert_text.get(s.loc)
                if text is not None:
                    v = replace(v, condition=text)
                verdicts.append(v)
            if sink is not None and not d.is_bottom(state):
                arith.evaluate(s.cond, lambda n: d.project(state, n), sink)
        elif isinstance(s, ast.Return):
            if s.value is not None:
                state = self.read_uninit(state, flags, s.value, s.loc, out)
                if sink is not None and not d.is_bottom(state):
                    arith.evaluate(s.value, lambda n: d.project(state, n), sink)
        elif isinstance(s, (ast.Label, ast.Goto, ast.Block)):
            pass
        else:
            raise TypeError(f"unexpected statement in a basic block: {type(s).__name__}")
        if out is not None and sink:
            out.extend(checks.from_event(ev) for ev in sink)
        return state, flags

    def process_block(self, block: int, entry, flags, out=None, verdicts=None):
        blk = self.cfg.blocks[block]
        state = entry
        for s in blk.statements:
            state, flags = self.process_stmt(s, state, flags, out, verdicts)
        cpos = cneg = None
        if blk.condition is not None:
            cond = blk.condition
            state = self.read_uninit(state, flags, cond, cond.loc, out)
            if out is not None and not self.domain.is_bottom(state):
                sink = []
                arith.evaluate(cond, lambda n: self.domain.project(state, n), sink)
                out.extend(checks.from_event(ev) for ev in sink)
            top = self.domain.top(self.env)
            cpos = self.domain.assume(top, cond, True)
            cneg = self.domain.assume(top, cond, False)
        return state, cpos, cneg, flags

    def visit(self, block: int, label: str = ""):
        entry, flags, how = self.entry_of(block)
        summary = self.table[block]
        summary.entry_state, summary.init_entry = entry, flags
        summary.visits += 1
        if how is not None:
            self.emit(f"  @begin of block {self.cfg.paper_index(block)}  abstract value after {how}",
                      self.listing(entry), "")
        end, cpos, cneg, flags = self.process_block(block, entry, flags)
        summary.end_state, summary.cond_pos, summary.cond_neg = end, cpos, cneg
        summary.init_end = flags
        if cpos is not None:
            self.emit("  abstract value after block terminator is processed",
                      self.listing(end), self.listing(cpos), self.listing(cneg), "")

    # -- widening ----------------------------------------------------------

    def widen_abs_val(self, block: int) -> bool:
        """Delayed widening at a back-edge source; True at a fixpoint."""
        d = self.domain
        s = self.table[block]
        s.back_edge_visits += 1
        k = s.back_edge_visits
        current = s.end_state
        prev = s.loop_exit_prev if s.loop_exit_prev is not None else d.bottom(self.env)
        new = d.widen(prev, current) if k % self.config.num_unrollings == 0 else current
        if k > 1 and d.equal(new, prev):
            self.emit("Fixed Point:", "loopExitAbsValOld:", self.listing(prev),
                      "loopExitAbsValCurrent:", self.listing(new), "")
            s.back_edge_visits = 0
            s.end_state = new
            self.cfg.edges[(block, self.cfg.loop_head_of(block))].visited = False
            return True
        s.loop_exit_prev = new
        s.end_state = new
        self.cfg.edges[(block, self.cfg.loop_head_of(block))].visited = True
        return False

    # -- iteration ---------------------------------------------------------

    def ascend(self):
        self.cfg.reset_visited()
        sweeps = 0
        i = 0
        while i < len(self.order):
            b = self.order[i]
            self.visit(b)
            if self.cfg.blocks[b].is_back_edge_source and not self.widen_abs_val(b):
                sweeps += 1
                if sweeps > self.config.max_fixpoint_sweeps:
                    raise FixpointBudgetExceeded(b)
                i = self.pos[self.cfg.loop_head_of(b)]
                continue
            i += 1

    def narrow_pass(self):
        """Descending sweeps: loops re-run once per sweep without widening."""
        d = self.domain
        if not self.cfg.back_edges():
            return
        for e in self.cfg.back_edges():
            e.visited = True
        for sweep in range(self.config.narrowing_iterations):
            self.emit(f"Narrowing sweep {sweep + 1}:")
            changed = False
            for b in self.order:
                s = self.table[b]
                old_entry, old_end = s.entry_state, s.end_state
                self.visit(b)
                if self.cfg.blocks[b].is_back_edge_source:
                    try:
                        s.end_state = d.narrow_checked(old_end, s.end_state)
                    except NotDescending:
                        self.notes.append(f"NotDescending at block {b}: kept the join of both values")
                        s.end_state = d.join(old_end, s.end_state)
                    s.loop_exit_prev = s.end_state
                elif not d.leq(s.end_state, old_end):
                    self.notes.append(f"NotDescending at block {b}: recomputed state grew")
                if not (d.equal(old_entry, s.entry_state) and d.equal(old_end, s.end_state)):
                    changed = True
            if not changed:
                break

    def report_pass(self):
        """Diagnostics and verdicts from the stable entry states."""
        diagnostics, verdicts = [], []
        for b in self.order:
            s = self.table[b]
            out = []
            self.process_block(b, s.entry_state, s.init_entry, out, verdicts)
            if self.domain.is_bottom(s.entry_state):
                out = []  # unreachable code raises nothing
            for diag in out:
                if diag not in diagnostics:
                    diagnostics.append(diag)
        return diagnostics, verdicts

    def run(self):
        self.ascend()
        if self.config.narrowing_iterations:
            self.narrow_pass()
        exit_state = self.table[self.cfg.exit].entry_state
        self.emit("Resulting values:", "abstract value:", self.listing(exit_state))
        return self.report_pass()


def process_cfg(cfg: Cfg, config: EngineConfig, assert_text: Optional[dict] = None) -> Engine:
    """Run the ascending phase and the optional narrowing sweeps."""
    eng = Engine(cfg, config, assert_text)
    eng.ascend()
    if config.narrowing_iterations:
        eng.narrow_pass()
    return eng


def assertion_texts(fn: ast.Function) -> dict:
    """Source text of every MYASSERT condition, keyed by location."""
    from .frontend.printer import to_c

    return {s.loc: to_c(s.cond) for s in ast.walk_stmts(fn.body) if isinstance(s, ast.Assert)}


def analyze_function(fn: ast.Function, config: EngineConfig,
                     assert_text: Optional[dict] = None) -> AnalysisResult:
    """Build the CFG of a normalized function and analyze it."""
    cfg = build_cfg(fn)
    eng = Engine(cfg, config, assert_text)
    diagnostics, verdicts = eng.run()
    log.debug("analyzed %s: %d blocks, %d diagnostics", fn.name, len(cfg.blocks), len(diagnostics))
    return AnalysisResult(fn, cfg, eng.table, config, diagnostics, verdicts, eng.trace, eng.notes)

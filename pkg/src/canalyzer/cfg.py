"""Control-flow graph construction, with visit order and back-edge marking.

Blocks are numbered in source layout order: the entry block is 0 and the exit
block has the largest id.  Clang numbers the other way round, so dumps also
show ``B<n-1-id>`` to match listings that use Clang's numbering.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .frontend import ast
from .frontend.printer import to_c


class CfgError(Exception):
    pass


class MalformedCfg(CfgError):
    pass


class IrreducibleCfg(CfgError):
    pass


class TerminatorKind(str, enum.Enum):
    EMPTY = "Empty"
    NONE = "None"
    IF = "If"
    WHILE = "While"

    def __str__(self) -> str:
        return self.value


@dataclass
class BasicBlock:
    id: int
    statements: list = field(default_factory=list)
    terminator: TerminatorKind = TerminatorKind.NONE
    condition: Optional[object] = None
    successors: list = field(default_factory=list)  # first = true branch
    predecessors: list = field(default_factory=list)
    is_loop_head: bool = False
    is_back_edge_source: bool = False
    # layout position while building; replaced by the final id
    position: int = -1


@dataclass
class Edge:
    src: int
    dst: int
    is_back_edge: bool = False
    visited: bool = False


@dataclass
class Cfg:
    function: str
    blocks: dict
    entry: int
    exit: int
    block_list: list = field(default_factory=list)
    edges: dict = field(default_factory=dict)
    variables: tuple = ()

    def paper_index(self, block_id: int) -> int:
        return len(self.blocks) - 1 - block_id

    def paper_name(self, block_id: int) -> str:
        return f"B{self.paper_index(block_id)}"

    def back_edges(self) -> list:
        return [e for e in self.edges.values() if e.is_back_edge]

    def reset_visited(self):
        for e in self.edges.values():
            e.visited = False

    def loop_head_of(self, source: int) -> int:
        """Head of the loop closed by the back edge leaving ``source``."""
        for e in self.edges.values():
            if e.src == source and e.is_back_edge:
                return e.dst
        raise KeyError(source)


# ---------------------------------------------------------------------------
# construction


class _Builder:
    def __init__(self):
        self.blocks: list[BasicBlock] = []
        self.counter = 0
        self.labels: dict[str, BasicBlock] = {}
        self.latches: set = set()
        self.exit: Optional[BasicBlock] = None

    def new(self, place=True) -> BasicBlock:
        b = BasicBlock(id=len(self.blocks))
        self.blocks.append(b)
        if place:
            self.place(b)
        return b

    def place(self, b: BasicBlock):
        if b.position >= 0:
            raise MalformedCfg("label block placed twice")
        b.position = self.counter
        self.counter += 1

    @staticmethod
    def link(src: BasicBlock, dst: BasicBlock):
        src.successors.append(dst.id)

    def label_block(self, name: str) -> BasicBlock:
        if name not in self.labels:
            self.labels[name] = self.new(place=False)
        return self.labels[name]

    def stmts(self, stmts, cur: BasicBlock) -> BasicBlock:
        for s in stmts:
            cur = self.stmt(s, cur)
        return cur

    def stmt(self, s, cur: BasicBlock) -> BasicBlock:
        if isinstance(s, (ast.Decl, ast.ExprStmt, ast.Assert)):
            cur.statements.append(s)
            return cur
        if isinstance(s, ast.Return):
            cur.statements.append(s)
            self.link(cur, self.exit)
            return self.new()
        if isinstance(s, ast.Goto):
            self.link(cur, self.label_block(s.label))
            return self.new()
        if isinstance(s, ast.Label):
            target = self.label_block(s.name)
            self.place(target)
            self.link(cur, target)
            return target
        if isinstance(s, ast.Block):
            return self.stmts(s.body, cur)
        if isinstance(s, ast.If):
            cur.terminator = TerminatorKind.IF
            cur.condition = s.cond
            then = self.new()
            self.link(cur, then)
            end_then = self.stmts(s.then, then)
            if s.other:
                other = self.new()
                self.link(cur, other)
                end_other = self.stmts(s.other, other)
                join = self.new()
                self.link(end_then, join)
                self.link(end_other, join)
            else:
                join = self.new()
                self.link(end_then, join)
                self.link(cur, join)
            return join
        if isinstance(s, ast.While):
            head = self.new()
            self.link(cur, head)
            head.terminator = TerminatorKind.WHILE
            head.condition = s.cond
            head.is_loop_head = True
            body = self.new()
            self.link(head, body)
            end_body = self.stmts(s.body, body)
            self.link(end_body, head)
            self.latches.add((end_body.id, head.id))
            after = self.new()
            self.link(head, after)
            return after
        raise MalformedCfg(f"statement {type(s).__name__} is not in normal form")


def _prune(blocks: dict, keep: set, protected_edges: set) -> None:
    """Bypass empty fall-through blocks and drop unreachable empty ones."""
    changed = True
    while changed:
        changed = False
        preds = {b: [] for b in blocks}
        for b in blocks.values():
            for s in b.successors:
                preds[s].append(b.id)
        for b in sorted(blocks.values(), key=lambda b: b.position):
            if b.id in keep or b.statements or b.terminator != TerminatorKind.NONE:
                continue
            if len(b.successors) != 1:
                continue
            succ = b.successors[0]
            if succ == b.id or (b.id, succ) in protected_edges:
                continue
            ok = True
            for p in preds[b.id]:
                new_succs = [succ if x == b.id else x for x in blocks[p].successors]
                if p == succ or len(set(new_succs)) != len(new_succs):
                    ok = False
            if not ok:
                continue
            for p in preds[b.id]:
                blocks[p].successors = [succ if x == b.id else x for x in blocks[p].successors]
            del blocks[b.id]
            changed = True
            break
    # empty blocks nobody can reach (placeholders after return or goto)
    changed = True
    while changed:
        changed = False
        has_pred = {s for b in blocks.values() for s in b.successors}
        for b in list(blocks.values()):
            if b.id in keep or b.id in has_pred or b.statements:
                continue
            if b.terminator != TerminatorKind.NONE:
                continue
            del blocks[b.id]
            changed = True


def build_cfg(fn: ast.Function) -> Cfg:
    """Build the CFG of a normalized function, then order it and mark back edges."""
    b = _Builder()
    entry = b.new()
    entry.terminator = TerminatorKind.EMPTY
    b.exit = b.new(place=False)
    b.exit.terminator = TerminatorKind.EMPTY
    first = b.new()
    b.link(entry, first)
    last = b.stmts(fn.body, first)
    b.link(last, b.exit)
    b.place(b.exit)
    for name, blk in b.labels.items():
        if blk.position < 0:
            raise MalformedCfg(f"goto target '{name}' is never defined")

    blocks = {blk.id: blk for blk in b.blocks}
    _prune(blocks, {entry.id, b.exit.id}, set(b.latches))

    # renumber by layout position
    ordered = sorted(blocks.values(), key=lambda blk: blk.position)
    renumber = {blk.id: i for i, blk in enumerate(ordered)}
    entry_id, exit_id = renumber[entry.id], renumber[b.exit.id]
    new_blocks = {}
    for blk in ordered:
        blk.id = renumber[blk.id]
        blk.successors = [renumber[s] for s in blk.successors]
        blk.predecessors = []
        new_blocks[blk.id] = blk
    for blk in new_blocks.values():
        for s in blk.successors:
            new_blocks[s].predecessors.append(blk.id)
    for blk in new_blocks.values():
        blk.predecessors.sort()
        if blk.terminator == TerminatorKind.NONE and not blk.successors and blk.id != exit_id:
            raise MalformedCfg(f"block {blk.id} has no successor")

    edges = {}
    for blk in new_blocks.values():
        for s in blk.successors:
            edges[(blk.id, s)] = Edge(blk.id, s)
    cfg = Cfg(fn.name, new_blocks, entry_id, exit_id, [], edges,
              fn.variables)
    cfg.block_list = order_blocks(cfg)
    mark_back_edges(cfg)
    _check_shape(cfg)
    return cfg


def _check_shape(cfg: Cfg):
    for blk in cfg.blocks.values():
        n = len(blk.successors)
        if blk.terminator in (TerminatorKind.IF, TerminatorKind.WHILE) and n != 2:
            raise MalformedCfg(f"block {blk.id} branches to {n} successors")
        if blk.id == cfg.exit and n != 0:
            raise MalformedCfg("exit block has successors")


# ---------------------------------------------------------------------------
# order and back edges


def _retreating_edges(cfg: Cfg) -> set:
    """Edges to a block still on the DFS stack (entry first, then other roots)."""
    state = {}  # 1 = on stack, 2 = done
    retreating = set()
    roots = [cfg.entry] + sorted(b for b in cfg.blocks if b != cfg.entry)
    for root in roots:
        if root in state:
            continue
        stack = [(root, iter(cfg.blocks[root].successors))]
        state[root] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                retreating.add((node, nxt))
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(cfg.blocks[nxt].successors)))
    return retreating


def order_blocks(cfg: Cfg) -> list:
    """Topological order of the forward edges, smallest block id first on ties."""
    import heapq

    retreating = _retreating_edges(cfg)
    indegree = {b: 0 for b in cfg.blocks}
    for blk in cfg.blocks.values():
        for s in blk.successors:
            if (blk.id, s) not in retreating:
                indegree[s] += 1
    ready = [b for b, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        b = heapq.heappop(ready)
        order.append(b)
        for s in cfg.blocks[b].successors:
            if (b, s) in retreating:
                continue
            indegree[s] -= 1
            if indegree[s] == 0:
                heapq.heappush(ready, s)
    if len(order) != len(cfg.blocks):
        raise IrreducibleCfg("forward edges contain a cycle")
    return order


def mark_back_edges(cfg: Cfg) -> Cfg:
    """Flag edges that go back to an earlier loop head in ``block_list``."""
    pos = {b: i for i, b in enumerate(cfg.block_list)}
    for blk in cfg.blocks.values():
        blk.is_back_edge_source = False
    for edge in cfg.edges.values():
        edge.is_back_edge = False
        if pos[edge.dst] <= pos[edge.src]:
            head = cfg.blocks[edge.dst]
            if not head.is_loop_head:
                raise IrreducibleCfg(
                    f"edge {edge.src} -> {edge.dst} jumps back to a block that is not a loop head")
            edge.is_back_edge = True
            cfg.blocks[edge.src].is_back_edge_source = True
    return cfg


# ---------------------------------------------------------------------------
# dumps


def dump_cfg(cfg: Cfg) -> str:
    lines = [f"CFG of {cfg.function}: {len(cfg.blocks)} blocks, "
             f"entry {cfg.paper_name(cfg.entry)}, exit {cfg.paper_name(cfg.exit)}"]
    lines.append("block list: " + ", ".join(f"{b} ({cfg.paper_name(b)})" for b in cfg.block_list))
    for b in sorted(cfg.blocks):
        blk = cfg.blocks[b]
        tags = []
        if b == cfg.entry:
            tags.append("entry")
        if b == cfg.exit:
            tags.append("exit")
        if blk.is_loop_head:
            tags.append("loop head")
        suffix = f" [{', '.join(tags)}]" if tags else ""
        lines.append(f"block {b} ({cfg.paper_name(b)}){suffix}")
        for s in blk.statements:
            lines.append("    " + to_c(s).strip())
        if blk.condition is not None:
            lines.append(f"  condition: {to_c(blk.condition)}")
        succs = ", ".join(cfg.paper_name(s) for s in blk.successors)
        lines.append(f"  terminator: {blk.terminator}, succs: [{succs}], "
                     f"ids: {blk.successors}, preds: {blk.predecessors}")
        for s in blk.successors:
            if cfg.edges[(b, s)].is_back_edge:
                lines.append(f"  back-edge → {cfg.paper_name(s)} (block {s})")
    return "\n".join(lines) + "\n"


def dump_cfg_dot(cfg: Cfg) -> str:
    lines = [f'digraph "{cfg.function}" {{', "  node [shape=box, fontname=monospace];"]
    for b in sorted(cfg.blocks):
        blk = cfg.blocks[b]
        body = [f"{cfg.paper_name(b)} (block {b})"]
        body += [to_c(s).strip() for s in blk.statements]
        if blk.condition is not None:
            body.append(f"[{blk.terminator}] {to_c(blk.condition)}")
        label = "\\l".join(x.replace("\\", "\\\\").replace('"', '\\"') for x in body) + "\\l"
        lines.append(f'  n{b} [label="{label}"];')
    for (src, dst), edge in sorted(cfg.edges.items()):
        attrs = []
        blk = cfg.blocks[src]
        if blk.condition is not None:
            attrs.append(f'label="{"T" if blk.successors[0] == dst else "F"}"')
        if edge.is_back_edge:
            attrs.append("style=dashed")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  n{src} -> n{dst}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""
Renderers: DOT diagrams of responsibility models and Markdown reports for
diffs, control boundaries and risk registers.

DOT mapping
-----------
  organisational agent   triangle, filled grey
  human agent            triangle, unfilled
  responsibility         box, rounded
  information resource   box, label "[Label]"
  physical resource      box, label "[Label]", bold outline
  ResponsibleFor edge    arrowhead=box
  Has edge               arrowhead=dot
  Association edge       dir=none, annotation as edge label
  organisation           cluster_<org id>, style=dashed

All renderers are pure and deterministic.
"""
from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set

import graphviz

from .analysis import BoundaryReport, ModelDiff
from .errors import InvalidModel
from .model import Entity, EntityKind, Model, RelKind, Relationship, validate
from .register import CSV_COLUMNS, Register, register_frame

logger = logging.getLogger(__name__)

HIGHLIGHT_COLOR = "red"

_NODE_STYLE: Dict[EntityKind, Dict[str, str]] = {
    EntityKind.ORGANIZATIONAL_AGENT: {"shape": "triangle", "style": "filled", "fillcolor": "grey"},
    EntityKind.HUMAN_AGENT: {"shape": "triangle"},
    EntityKind.RESPONSIBILITY: {"shape": "box", "style": "rounded"},
    EntityKind.INFORMATION_RESOURCE: {"shape": "box"},
    EntityKind.PHYSICAL_RESOURCE: {"shape": "box", "style": "bold"},
}

_EDGE_STYLE: Dict[RelKind, Dict[str, str]] = {
    RelKind.RESPONSIBLE_FOR: {"arrowhead": "box"},
    RelKind.HAS: {"arrowhead": "dot"},
    RelKind.ASSOCIATION: {"dir": "none"},
}

_RESOURCE_KINDS = (EntityKind.INFORMATION_RESOURCE, EntityKind.PHYSICAL_RESOURCE)


def _node_label(e: Entity) -> str:
    return f"[{e.label}]" if e.kind in _RESOURCE_KINDS else e.label


def _add_node(g: graphviz.Digraph, e: Entity, highlighted: bool) -> None:
    attrs = dict(_NODE_STYLE[e.kind])
    if highlighted:
        attrs["color"] = HIGHLIGHT_COLOR
        attrs["penwidth"] = "2"
    g.node(e.id, graphviz.escape(_node_label(e)), **attrs)


def to_dot(model: Model, highlight: Optional[ModelDiff] = None) -> str:
    violations = validate(model)
    if violations:
        raise InvalidModel(f"cannot render '{model.name}': {len(violations)} violation(s)", violations)

    new_ids: Set[str] = set()
    new_rels: Set[Relationship] = set()
    if highlight is not None:
        new_ids = {e.id for e in highlight.added_entities}
        new_rels = set(highlight.added_relationships)

    dot = graphviz.Digraph(name=graphviz.escape(model.name))
    dot.attr(rankdir="LR")

    members: Dict[str, List[Entity]] = {org.id: [org] for org in model.organizations()}
    loose: List[Entity] = []
    for e in model.sorted_entities():
        if e.is_organization:
            continue
        if e.owner is not None:
            members[e.owner].append(e)
        else:
            loose.append(e)

    for org_id in sorted(members):
        org = model.entity(org_id)
        with dot.subgraph(name=f"cluster_{org_id}") as c:
            c.attr(label=graphviz.escape(org.label), style="dashed")
            for e in sorted(members[org_id], key=lambda x: x.id):
                _add_node(c, e, e.id in new_ids)
    for e in loose:
        _add_node(dot, e, e.id in new_ids)

    for rel in model.relationships:
        attrs = dict(_EDGE_STYLE[rel.kind])
        if rel.annotation:
            attrs["label"] = graphviz.escape(rel.annotation)
        if rel in new_rels:
            attrs["color"] = HIGHLIGHT_COLOR
            attrs["penwidth"] = "2"
        dot.edge(rel.source, rel.target, **attrs)

    logger.debug("rendered %s: %d node(s), %d edge(s)", model.name, len(model.entities), len(model.relationships))
    return dot.source


# ---------------- Markdown ----------------

def _cell(text) -> str:
    if text is None:
        return ""
    return str(text).replace("\\", "\\\\").replace("|", "\\|").replace("\r", " ").replace("\n", " ")


def _table(headers: Sequence[str], rows: Iterable[Sequence]) -> List[str]:
    lines = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
    for row in rows:
        lines.append("| " + " | ".join(_cell(v) for v in row) + " |")
    return lines


def _entity_row(e: Entity) -> List[str]:
    return [e.id, e.kind.value, e.label, e.owner or ""]


def _rel_row(r: Relationship) -> List[str]:
    return [r.kind.value, r.source, r.target, r.annotation or ""]


_ENTITY_HEADERS = ["Id", "Kind", "Label", "Owner"]
_REL_HEADERS = ["Kind", "Source", "Target", "Annotation"]


def _entity_changes(before: Entity, after: Entity) -> List[List[str]]:
    rows = []
    for name in ("kind", "label", "owner"):
        a = getattr(before, name)
        b = getattr(after, name)
        if a != b:
            a = a.value if isinstance(a, EntityKind) else a
            b = b.value if isinstance(b, EntityKind) else b
            rows.append([before.id, name, a or "", b or ""])
    return rows


def diff_report(d: ModelDiff) -> str:
    lines = [f"# Model diff: {_cell(d.before_name)} -> {_cell(d.after_name)}", ""]
    if d.is_empty:
        lines.append("No changes.")
        return "\n".join(lines) + "\n"

    def section(title: str, headers, rows) -> None:
        lines.extend([f"## {title}", ""])
        lines.extend(_table(headers, rows))
        lines.append("")

    section("Added entities", _ENTITY_HEADERS, (_entity_row(e) for e in d.added_entities))
    section("Removed entities", _ENTITY_HEADERS, (_entity_row(e) for e in d.removed_entities))
    section(
        "Changed entities",
        ["Id", "Field", "Before", "After"],
        (row for before, after in d.changed_entities for row in _entity_changes(before, after)),
    )
    section("Added relationships", _REL_HEADERS, (_rel_row(r) for r in d.added_relationships))
    section("Removed relationships", _REL_HEADERS, (_rel_row(r) for r in d.removed_relationships))
    return "\n".join(lines).rstrip("\n") + "\n"


def boundary_report_md(report: BoundaryReport) -> str:
    lines = [
        f"# Control boundary: {_cell(report.agent)}",
        "",
        f"Agent organisation: {_cell(report.agent_org) if report.agent_org else '(unknown)'}",
        "",
        f"Dependencies: {len(report.members)}",
        "",
        "## In control",
        "",
    ]
    lines += _table(["Entity"], ([i] for i in sorted(report.in_control)))
    lines += ["", "## Out of control", ""]
    lines += _table(["Entity", "Owning organisation"], (list(p) for p in sorted(report.out_of_control)))
    lines += ["", "## Ownership unknown", ""]
    lines += _table(["Entity"], ([i] for i in sorted(report.unknown)))
    return "\n".join(lines) + "\n"


def register_report_md(register: Register) -> str:
    frame = register_frame(register)
    lines = [f"# Risk register: {_cell(register.model_name)}", "", f"{len(frame)} clause(s)", ""]
    lines += _table(CSV_COLUMNS, frame.itertuples(index=False, name=None))
    return "\n".join(lines) + "\n"


# ---------------- DOT syntax check ----------------

_KEYWORDS = {"strict", "graph", "digraph", "node", "edge", "subgraph"}


class _DotSyntaxError(Exception):
    pass


def _dot_tokens(text: str) -> List[tuple]:
    """(kind, value, line) with kinds: id, kw, sym, eof."""
    toks: List[tuple] = []
    i, n, line = 0, len(text), 1
    at_line_start = True
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            at_line_start = True
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == "#" and at_line_start:
            while i < n and text[i] != "\n":
                i += 1
            continue
        at_line_start = False
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                raise _DotSyntaxError(f"line {line}: unterminated comment")
            line += text.count("\n", i, end)
            i = end + 2
            continue
        if text.startswith("->", i) or text.startswith("--", i):
            toks.append(("sym", text[i:i + 2], line))
            i += 2
            continue
        if ch in "{}[]=;,:":
            toks.append(("sym", ch, line))
            i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    j += 1
                if text[j] == "\n":
                    line += 1
                j += 1
            if j >= n:
                raise _DotSyntaxError(f"line {line}: unterminated string")
            toks.append(("id", text[i:j + 1], line))
            i = j + 1
            continue
        if ch == "<":
            depth, j = 0, i
            while j < n:
                if text[j] == "<":
                    depth += 1
                elif text[j] == ">":
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            if j >= n:
                raise _DotSyntaxError(f"line {line}: unterminated HTML string")
            toks.append(("id", text[i:j + 1], line))
            i = j + 1
            continue
        if ch.isdigit() or ch in "-.":
            j = i + 1 if ch == "-" else i
            start_digits = j
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j == start_digits or text[start_digits:j].count(".") > 1:
                raise _DotSyntaxError(f"line {line}: malformed number")
            toks.append(("id", text[i:j], line))
            i = j
            continue
        if ch.isalpha() or ch == "_" or ord(ch) > 127:
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_" or ord(text[j]) > 127):
                j += 1
            word = text[i:j]
            toks.append(("kw" if word.lower() in _KEYWORDS else "id", word.lower() if word.lower() in _KEYWORDS else word, line))
            i = j
            continue
        raise _DotSyntaxError(f"line {line}: unexpected character {ch!r}")
    toks.append(("eof", "", line))
    return toks


class _DotParser:
    def __init__(self, toks: List[tuple]):
        self.toks = toks
        self.pos = 0
        self.edge_op = "->"

    def peek(self, offset: int = 0) -> tuple:
        return self.toks[min(self.pos + offset, len(self.toks) - 1)]

    def at(self, kind: str, value: Optional[str] = None) -> bool:
        k, v, _ = self.peek()
        return k == kind and (value is None or v == value)

    def expect(self, kind: str, value: Optional[str] = None) -> tuple:
        if not self.at(kind, value):
            k, v, line = self.peek()
            want = value or kind
            raise _DotSyntaxError(f"line {line}: expected {want!r}, found {v or k!r}")
        tok = self.peek()
        self.pos += 1
        return tok

    def graph(self) -> None:
        if self.at("kw", "strict"):
            self.pos += 1
        if self.at("kw", "digraph"):
            self.edge_op = "->"
        elif self.at("kw", "graph"):
            self.edge_op = "--"
        else:
            self.expect("kw", "digraph")
        self.pos += 1
        if self.at("id"):
            self.pos += 1
        self.expect("sym", "{")
        self.stmt_list()
        self.expect("sym", "}")
        self.expect("eof")

    def stmt_list(self) -> None:
        while not self.at("sym", "}") and not self.at("eof"):
            self.stmt()
            if self.at("sym", ";"):
                self.pos += 1

    def stmt(self) -> None:
        k, v, _ = self.peek()
        if k == "kw" and v in ("graph", "node", "edge"):
            self.pos += 1
            self.attr_list(required=True)
            return
        if k == "id" and self.peek(1)[:2] == ("sym", "="):
            self.pos += 2
            self.expect("id")
            return
        self.operand()
        if self.at("sym", "->") or self.at("sym", "--"):
            while self.at("sym", "->") or self.at("sym", "--"):
                op = self.peek()
                if op[1] != self.edge_op:
                    raise _DotSyntaxError(f"line {op[2]}: edge operator {op[1]!r} in a graph using {self.edge_op!r}")
                self.pos += 1
                self.operand()
        self.attr_list(required=False)

    def operand(self) -> None:
        if self.at("kw", "subgraph") or self.at("sym", "{"):
            self.subgraph()
            return
        self.expect("id")
        if self.at("sym", ":"):
            self.pos += 1
            self.expect("id")
            if self.at("sym", ":"):
                self.pos += 1
                self.expect("id")

    def subgraph(self) -> None:
        if self.at("kw", "subgraph"):
            self.pos += 1
            if self.at("id"):
                self.pos += 1
        self.expect("sym", "{")
        self.stmt_list()
        self.expect("sym", "}")

    def attr_list(self, required: bool) -> None:
        if required:
            self.expect("sym", "[")
            self.pos -= 1
        while self.at("sym", "["):
            self.pos += 1
            while not self.at("sym", "]"):
                self.expect("id")
                self.expect("sym", "=")
                self.expect("id")
                if self.at("sym", ";") or self.at("sym", ","):
                    self.pos += 1
            self.pos += 1


def dot_syntax_errors(text: str) -> List[str]:
    """Check `text` against the DOT grammar; returns [] when it parses."""
    try:
        _DotParser(_dot_tokens(text)).graph()
    except _DotSyntaxError as e:
        return [str(e)]
    return []

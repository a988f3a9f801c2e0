"""Parser and canonical serializer for `.rm` responsibility model documents.

Document layout
---------------
``model "<name>" { ... }`` wrapping one statement per line:

``org <id> ["label"]``
    Organizational agent (never owned).
``human <id> ["label"] [owner <orgId>]``
    Human agent.
``responsibility <id> ["label"] [owner <orgId>]``
    Responsibility.
``resource.info <id> ["label"] [owner <orgId>]`` / ``resource.phys ...``
    Information / physical resource.
``responsible <agentId> -> <respId>``
    ResponsibleFor relationship.
``has <holderId> -> <resourceId>``
    Has relationship.
``assoc <id> -- <id> [: "annotation"]``
    Association.
``group <relationship statement with {a, b, ...} on either or both sides>``
    Container-box shorthand; expands to the cross product of both sides.
``# comment``
    To end of line.

Entity declarations may follow the relationships that use them. Parsing recovers
at statement boundaries so one pass reports every independent error.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from .errors import InvalidModel, ModelError, UnknownEndpoint
from .model import (
    IDENTIFIER_RE,
    Entity,
    EntityKind,
    Model,
    RelKind,
    Relationship,
    add_entity,
    add_relationship,
    validate,
)

logger = logging.getLogger(__name__)

ENTITY_KEYWORDS = {
    "org": EntityKind.ORGANIZATIONAL_AGENT,
    "human": EntityKind.HUMAN_AGENT,
    "responsibility": EntityKind.RESPONSIBILITY,
    "resource.info": EntityKind.INFORMATION_RESOURCE,
    "resource.phys": EntityKind.PHYSICAL_RESOURCE,
}
KIND_KEYWORDS = {v: k for k, v in ENTITY_KEYWORDS.items()}

REL_KEYWORDS = {
    "responsible": (RelKind.RESPONSIBLE_FOR, "->"),
    "has": (RelKind.HAS, "->"),
    "assoc": (RelKind.ASSOCIATION, "--"),
}

_ESCAPES = {"n": "\n", "r": "\r", "t": "\t", '"': '"', "\\": "\\"}
_ESCAPE_OUT = {v: "\\" + k for k, v in _ESCAPES.items()}

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # error | warning
    span: SourceSpan
    message: str
    rule: str


@dataclass
class ParseResult:
    model: Optional[Model]
    diagnostics: List[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.model is not None

    @property
    def errors(self) -> List[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == ERROR]

    @property
    def warnings(self) -> List[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == WARNING]


# ---------------- Tokenizer ----------------

@dataclass(frozen=True)
class _Token:
    kind: str  # word | string | -> | -- | { | } | , | : | newline | eof
    value: str
    span: SourceSpan


def _is_word_start(ch: str) -> bool:
    return ch == "_" or ("a" <= ch <= "z") or ("A" <= ch <= "Z")


def _is_word_char(ch: str) -> bool:
    return _is_word_start(ch) or ("0" <= ch <= "9") or ch == "."


def _tokenize(text: str, diags: List[ParseDiagnostic]) -> List[_Token]:
    tokens: List[_Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            tokens.append(_Token("newline", "\n", SourceSpan(line, col, 1)))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r\f\v":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        if text.startswith("->", i) or text.startswith("--", i):
            tokens.append(_Token(text[i:i + 2], text[i:i + 2], SourceSpan(line, col, 2)))
            i += 2
            col += 2
            continue
        if ch in "{},:":
            tokens.append(_Token(ch, ch, SourceSpan(line, col, 1)))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_col = col
            i += 1
            col += 1
            buf: List[str] = []
            closed = False
            while i < n and text[i] != "\n":
                c = text[i]
                if c == '"':
                    closed = True
                    i += 1
                    col += 1
                    break
                if c == "\\" and i + 1 < n and text[i + 1] != "\n":
                    esc = text[i + 1]
                    if esc in _ESCAPES:
                        buf.append(_ESCAPES[esc])
                    else:
                        diags.append(ParseDiagnostic(ERROR, SourceSpan(line, col, 2), f"unknown escape '\\{esc}'", "syntax"))
                        buf.append(esc)
                    i += 2
                    col += 2
                    continue
                buf.append(c)
                i += 1
                col += 1
            span = SourceSpan(line, start_col, max(1, col - start_col))
            if not closed:
                diags.append(ParseDiagnostic(ERROR, span, "unterminated string", "unterminated-string"))
            tokens.append(_Token("string", "".join(buf), span))
            continue
        if _is_word_start(ch):
            j = i
            while j < n and _is_word_char(text[j]):
                j += 1
            word = text[i:j]
            tokens.append(_Token("word", word, SourceSpan(line, col, len(word))))
            col += j - i
            i = j
            continue
        diags.append(ParseDiagnostic(ERROR, SourceSpan(line, col, 1), f"unexpected character {ch!r}", "unexpected-character"))
        i += 1
        col += 1
    tokens.append(_Token("eof", "", SourceSpan(line, col, 1)))
    return tokens


# ---------------- Statements ----------------

@dataclass
class _EntityDecl:
    kind: EntityKind
    id: str
    id_span: SourceSpan
    label: Optional[str]
    owner: Optional[str]
    owner_span: Optional[SourceSpan]


@dataclass
class _RelDecl:
    kind: RelKind
    sources: List[Tuple[str, SourceSpan]]
    targets: List[Tuple[str, SourceSpan]]
    annotation: Optional[str]
    span: SourceSpan


class _StatementError(Exception):
    def __init__(self, diag: ParseDiagnostic):
        super().__init__(diag.message)
        self.diag = diag


def _error(tok: _Token, message: str, rule: str = "syntax") -> _StatementError:
    return _StatementError(ParseDiagnostic(ERROR, tok.span, message, rule))


def _describe(tok: _Token) -> str:
    if tok.kind == "eof":
        return "end of file"
    if tok.kind == "newline":
        return "end of line"
    if tok.kind == "string":
        return "string"
    return f"'{tok.value}'"


class _Parser:
    def __init__(self, tokens: List[_Token], diags: List[ParseDiagnostic]):
        self.tokens = tokens
        self.pos = 0
        self.diags = diags
        self.statements: List[object] = []
        self.name: Optional[str] = None
        # group braces opened by the statement being parsed
        self.depth = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def _skip_newlines(self) -> None:
        while self.tok.kind == "newline":
            self._advance()

    def _expect(self, kind: str, what: str) -> _Token:
        if self.tok.kind != kind:
            raise _error(self.tok, f"expected {what}, found {_describe(self.tok)}")
        return self._advance()

    def _identifier(self, what: str) -> _Token:
        tok = self._expect("word", what)
        if not IDENTIFIER_RE.match(tok.value):
            raise _error(tok, f"'{tok.value}' is not a valid identifier", "invalid-identifier")
        return tok

    def parse(self) -> bool:
        self._skip_newlines()
        try:
            head = self.tok
            if head.kind != "word" or head.value != "model":
                raise _error(head, "document must start with 'model \"<name>\" {'")
            self._advance()
            self.name = self._expect("string", "model name string").value
            self._expect("{", "'{'")
        except _StatementError as exc:
            self.diags.append(exc.diag)
            return False

        while True:
            self._skip_newlines()
            tok = self.tok
            if tok.kind == "}":
                self._advance()
                self._skip_newlines()
                if self.tok.kind != "eof":
                    self.diags.append(ParseDiagnostic(ERROR, self.tok.span, "unexpected content after model block", "syntax"))
                return True
            if tok.kind == "eof":
                self.diags.append(ParseDiagnostic(ERROR, tok.span, "missing closing '}' for model block", "syntax"))
                return True
            self.depth = 0
            try:
                self.statements.append(self._statement())
                end = self.tok
                if end.kind not in ("newline", "}", "eof"):
                    raise _error(end, f"unexpected {_describe(end)} at end of statement")
            except _StatementError as exc:
                self.diags.append(exc.diag)
                self._recover()

    def _recover(self) -> None:
        depth = self.depth
        while True:
            tok = self.tok
            if tok.kind == "eof":
                return
            if tok.kind == "newline":
                if depth == 0:
                    return
                if self._statement_ahead():
                    # unclosed group: resume at the next statement
                    return
            if tok.kind == "{":
                depth += 1
            elif tok.kind == "}":
                if depth == 0:
                    return
                depth -= 1
            self._advance()

    def _statement_ahead(self) -> bool:
        """True when the line after the current newline opens a statement rather than listing group members."""
        i = self.pos
        while self.tokens[i].kind == "newline":
            i += 1
        head, nxt = self.tokens[i], self.tokens[min(i + 1, len(self.tokens) - 1)]
        if head.kind != "word" or nxt.kind not in ("word", "{"):
            return False
        return head.value in ENTITY_KEYWORDS or head.value in REL_KEYWORDS or head.value == "group"

    def _statement(self):
        tok = self.tok
        if tok.kind != "word":
            raise _error(tok, f"expected a statement keyword, found {_describe(tok)}")
        kw = tok.value
        if kw in ENTITY_KEYWORDS:
            self._advance()
            return self._entity(ENTITY_KEYWORDS[kw])
        if kw in REL_KEYWORDS:
            self._advance()
            return self._relationship(tok, grouped=False)
        if kw == "group":
            self._advance()
            inner = self.tok
            if inner.kind != "word" or inner.value not in REL_KEYWORDS:
                raise _error(inner, "'group' must be followed by 'responsible', 'has' or 'assoc'")
            self._advance()
            return self._relationship(inner, grouped=True)
        raise _error(tok, f"unknown keyword '{kw}'", "unknown-keyword")

    def _entity(self, kind: EntityKind) -> _EntityDecl:
        id_tok = self._identifier("entity identifier")
        label = None
        owner = None
        owner_span = None
        if self.tok.kind == "string":
            label = self._advance().value
        if self.tok.kind == "word" and self.tok.value == "owner":
            self._advance()
            owner_tok = self._identifier("owner organization identifier")
            owner, owner_span = owner_tok.value, owner_tok.span
        return _EntityDecl(kind, id_tok.value, id_tok.span, label, owner, owner_span)

    def _endpoints(self, grouped: bool) -> List[Tuple[str, SourceSpan]]:
        if self.tok.kind != "{":
            t = self._identifier("entity identifier")
            return [(t.value, t.span)]
        if not grouped:
            raise _error(self.tok, "braces are only allowed in 'group' statements")
        self._advance()
        self.depth += 1
        out: List[Tuple[str, SourceSpan]] = []
        while True:
            self._skip_newlines()
            if self.tok.kind == "}" and out:
                self._advance()
                self.depth -= 1
                return out
            t = self._identifier("entity identifier")
            out.append((t.value, t.span))
            self._skip_newlines()
            if self.tok.kind == ",":
                self._advance()
                continue
            if self.tok.kind == "}":
                self._advance()
                self.depth -= 1
                return out
            raise _error(self.tok, f"expected ',' or '}}', found {_describe(self.tok)}")

    def _relationship(self, kw_tok: _Token, grouped: bool) -> _RelDecl:
        kind, arrow = REL_KEYWORDS[kw_tok.value]
        sources = self._endpoints(grouped)
        self._expect(arrow, f"'{arrow}'")
        targets = self._endpoints(grouped)
        annotation = None
        if kind is RelKind.ASSOCIATION and self.tok.kind == ":":
            self._advance()
            annotation = self._expect("string", "annotation string").value
        return _RelDecl(kind, sources, targets, annotation, kw_tok.span)


# ---------------- Model construction ----------------

def _model_error(exc: ModelError, span: SourceSpan) -> ParseDiagnostic:
    return ParseDiagnostic(ERROR, span, str(exc), exc.rule)


def _build(name: str, statements: List[object], diags: List[ParseDiagnostic]) -> Model:
    model = Model(name=name)
    decls = [s for s in statements if isinstance(s, _EntityDecl)]
    rels = [s for s in statements if isinstance(s, _RelDecl)]

    # organisations first so owners resolve regardless of declaration order
    ordered = [d for d in decls if d.kind is EntityKind.ORGANIZATIONAL_AGENT]
    ordered += [d for d in decls if d.kind is not EntityKind.ORGANIZATIONAL_AGENT]
    for d in ordered:
        entity = Entity(d.id, d.kind, d.label, d.owner)
        try:
            model = add_entity(model, entity)
        except ModelError as exc:
            span = d.owner_span if (exc.rule in ("unknown-owner", "owner-not-organization", "org-with-owner") and d.owner_span) else d.id_span
            diags.append(_model_error(exc, span))
            if exc.rule != "duplicate-id":
                # keep the entity (without owner) so later statements do not cascade
                try:
                    model = add_entity(model, Entity(d.id, d.kind, d.label, None))
                except ModelError:
                    pass
            continue
        if d.owner is None and d.kind is not EntityKind.ORGANIZATIONAL_AGENT:
            diags.append(ParseDiagnostic(WARNING, d.id_span, f"'{d.id}' has no owning organization", "unowned-entity"))

    for r in rels:
        for src, src_span in r.sources:
            for tgt, tgt_span in r.targets:
                rel = Relationship(r.kind, src, tgt, r.annotation)
                try:
                    model = add_relationship(model, rel)
                except UnknownEndpoint as exc:
                    span = src_span if src not in model.entities else tgt_span
                    diags.append(_model_error(exc, span))
                except ModelError as exc:
                    diags.append(_model_error(exc, r.span))
    return model


def parse(text: str) -> ParseResult:
    """Parse a document; the model is None when any Error diagnostic was produced."""
    if text.startswith("\ufeff"):
        text = text[1:]
    text = text.replace("\r\n", "\n")
    diags: List[ParseDiagnostic] = []
    tokens = _tokenize(text, diags)
    parser = _Parser(tokens, diags)
    if not parser.parse() or parser.name is None:
        return ParseResult(None, _sorted(diags))
    model = _build(parser.name, parser.statements, diags)
    diags = _sorted(diags)
    logger.debug("parsed model %r: %d statements, %d diagnostics", parser.name, len(parser.statements), len(diags))
    if any(d.severity == ERROR for d in diags):
        return ParseResult(None, diags)
    return ParseResult(model, diags)


def _sorted(diags: List[ParseDiagnostic]) -> List[ParseDiagnostic]:
    return sorted(diags, key=lambda d: (d.span.line, d.span.column, d.rule, d.message))


def parse_file(path) -> ParseResult:
    """Read a UTF-8 `.rm` file; OSError and UnicodeDecodeError propagate."""
    data = Path(path).read_bytes()
    return parse(data.decode("utf-8-sig"))


def format_diagnostic(path, diag: ParseDiagnostic) -> str:
    return f"{path}:{diag.span.line}:{diag.span.column}: {diag.severity}: {diag.rule}: {diag.message}"


# ---------------- Serializer ----------------

def quote(text: str) -> str:
    return '"' + "".join(_ESCAPE_OUT.get(ch, ch) for ch in text) + '"'


def _relationship_line(rel: Relationship) -> str:
    if rel.kind is RelKind.RESPONSIBLE_FOR:
        return f"responsible {rel.source} -> {rel.target}"
    if rel.kind is RelKind.HAS:
        return f"has {rel.source} -> {rel.target}"
    line = f"assoc {rel.source} -- {rel.target}"
    if rel.annotation:
        line += f" : {quote(rel.annotation)}"
    return line


def serialize(model: Model) -> str:
    violations = validate(model)
    if violations:
        raise InvalidModel(f"cannot serialize invalid model '{model.name}' ({len(violations)} violation(s))", violations)
    lines = [f"model {quote(model.name)} {{"]
    entities = model.canonical_entities()
    for e in entities:
        parts = [KIND_KEYWORDS[e.kind], e.id]
        if e.label != e.id:
            parts.append(quote(e.label))
        if e.owner:
            parts += ["owner", e.owner]
        lines.append("  " + " ".join(parts))
    if entities and model.relationships:
        lines.append("")
    for rel in model.relationships:
        lines.append("  " + _relationship_line(rel))
    lines.append("}")
    return "\n".join(lines) + "\n"

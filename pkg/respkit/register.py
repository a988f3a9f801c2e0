"""
Risk register: triage of clause skeletons into full risk clauses, merge across
re-enumerations, persistence (`*.rmreg`) and CSV export.

Register file schema (YAML, format_version 1)::

    format_version: 1
    model_name: <text>
    clauses:
    - id: riskclause:<model>:<target ref>:<keyword>
      keyword: Early | Late | Never | Incapable | Insufficient | Impaired | Changes
      category: <EntityKind or RelKind value>
      scope: inter-organizational | intra-organizational | ownership-unknown
      target_label: <text>
      target: {type: entity, entity: <id>}
              | {type: relationship, kind: <RelKind>, source: <id>, target: <id>, annotation: <text|null>}
      prompt: <derived, ignored on load>
      status: Open | Triaged | Accepted | Mitigated
      orphaned: true | false
      condition: <text>
      consequences: <text>
      likelihood: Low | Medium | High | null
      severity: Low | Medium | High | null
      action: <text>

Clauses are written in clause-id order with a fixed key order, so the file is
byte-stable for version control. Analysts may edit triage fields directly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import pandas as pd
import yaml

from .errors import DuplicateClauseId, EmptyField, IncompleteTriage, RegisterFormatError, UnknownClause
from .hazard import EntityTarget, HazardKeyword, RelationshipTarget, RiskClauseSkeleton, Target, clause_prompt
from .model import RelKind, Relationship
from .normalization import map_keyword, map_rating, map_status
from .storage import read_text, write_text_atomic

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1

CSV_COLUMNS = [
    "Target",
    "Hazard Keyword",
    "Condition",
    "Consequences / Liabilities",
    "Risk (Li/Sev)",
    "Recommended Action",
    "Status",
]


class Rating(Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class ClauseStatus(Enum):
    OPEN = "Open"
    TRIAGED = "Triaged"
    ACCEPTED = "Accepted"
    MITIGATED = "Mitigated"


# statuses that require a complete triage
ASSESSED = frozenset({ClauseStatus.TRIAGED, ClauseStatus.ACCEPTED, ClauseStatus.MITIGATED})


def parse_rating(value: Union[Rating, str, None]) -> Optional[Rating]:
    if value is None or isinstance(value, Rating):
        return value
    key = map_rating(value)
    if key is None:
        raise RegisterFormatError(f"unknown rating {value!r} (expected Low, Medium or High)")
    return Rating(key)


def parse_status(value: Union[ClauseStatus, str]) -> ClauseStatus:
    if isinstance(value, ClauseStatus):
        return value
    key = map_status(value)
    if key is None:
        raise RegisterFormatError(f"unknown status {value!r}")
    return ClauseStatus(key)


@dataclass(frozen=True)
class RiskClause:
    skeleton: RiskClauseSkeleton
    condition: str = ""
    consequences: str = ""
    likelihood: Optional[Rating] = None
    severity: Optional[Rating] = None
    action: str = ""
    status: ClauseStatus = ClauseStatus.OPEN
    orphaned: bool = False

    @property
    def clause_id(self) -> str:
        return self.skeleton.clause_id

    @property
    def risk(self) -> str:
        if self.likelihood is None or self.severity is None:
            return ""
        return f"{self.likelihood.value}/{self.severity.value}"

    def missing_fields(self) -> List[str]:
        missing = []
        if not self.condition.strip():
            missing.append("condition")
        if not self.consequences.strip():
            missing.append("consequences")
        if self.likelihood is None:
            missing.append("likelihood")
        if self.severity is None:
            missing.append("severity")
        return missing


@dataclass(frozen=True)
class Register:
    model_name: str
    clauses: Mapping[str, RiskClause] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "clauses", MappingProxyType(dict(self.clauses)))
        for key, c in self.clauses.items():
            if key != c.clause_id:
                raise RegisterFormatError(f"clause stored under '{key}' has id '{c.clause_id}'")

    def __len__(self) -> int:
        return len(self.clauses)

    def clause(self, clause_id: str) -> RiskClause:
        try:
            return self.clauses[clause_id]
        except KeyError:
            raise UnknownClause(f"no clause '{clause_id}' in register for '{self.model_name}'") from None

    def ordered(self) -> List[RiskClause]:
        return [self.clauses[k] for k in sorted(self.clauses)]

    def orphans(self) -> List[RiskClause]:
        return [c for c in self.ordered() if c.orphaned]


@dataclass(frozen=True)
class MergeSummary:
    kept: Tuple[str, ...] = ()
    added: Tuple[str, ...] = ()
    orphaned: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"kept={len(self.kept)} added={len(self.added)} orphaned={len(self.orphaned)}"


def init_register(skeletons: Iterable[RiskClauseSkeleton], model_name: Optional[str] = None) -> Register:
    skeletons = list(skeletons)
    clauses: Dict[str, RiskClause] = {}
    for s in skeletons:
        if s.clause_id in clauses:
            raise DuplicateClauseId(f"duplicate clause id '{s.clause_id}'")
        clauses[s.clause_id] = RiskClause(skeleton=s)
    name = model_name if model_name is not None else (skeletons[0].model_name if skeletons else "")
    logger.info("initialised register for %r with %d clause(s)", name, len(clauses))
    return Register(name, clauses)


def triage(
    register: Register,
    clause_id: str,
    condition: str,
    consequences: str,
    likelihood: Union[Rating, str],
    severity: Union[Rating, str],
    action: str = "",
) -> Register:
    old = register.clause(clause_id)
    if not (condition or "").strip():
        raise EmptyField(f"condition of '{clause_id}' must not be empty")
    if not (consequences or "").strip():
        raise EmptyField(f"consequences of '{clause_id}' must not be empty")
    li = parse_rating(likelihood)
    sev = parse_rating(severity)
    if li is None or sev is None:
        raise EmptyField(f"likelihood and severity of '{clause_id}' are required")
    new = replace(
        old,
        condition=condition,
        consequences=consequences,
        likelihood=li,
        severity=sev,
        action=action or "",
        status=ClauseStatus.TRIAGED,
    )
    clauses = dict(register.clauses)
    clauses[clause_id] = new
    return replace(register, clauses=clauses)


def set_status(register: Register, clause_id: str, status: Union[ClauseStatus, str]) -> Register:
    """Any transition is allowed, reopening included; assessed states need a complete triage."""
    old = register.clause(clause_id)
    status = parse_status(status)
    if status in ASSESSED and old.missing_fields():
        raise IncompleteTriage(f"'{clause_id}' cannot be {status.value}: missing {', '.join(old.missing_fields())}")
    clauses = dict(register.clauses)
    clauses[clause_id] = replace(old, status=status)
    return replace(register, clauses=clauses)


def merge(register: Register, new_skeletons: Iterable[RiskClauseSkeleton]) -> Tuple[Register, MergeSummary]:
    clauses: Dict[str, RiskClause] = {}
    kept: List[str] = []
    added: List[str] = []
    for s in new_skeletons:
        if s.clause_id in clauses:
            logger.warning("ignoring repeated skeleton %s", s.clause_id)
            continue
        old = register.clauses.get(s.clause_id)
        if old is None:
            clauses[s.clause_id] = RiskClause(skeleton=s)
            added.append(s.clause_id)
        else:
            clauses[s.clause_id] = replace(old, skeleton=s, orphaned=False)
            kept.append(s.clause_id)
    orphaned: List[str] = []
    for cid in sorted(register.clauses):
        if cid not in clauses:
            clauses[cid] = replace(register.clauses[cid], orphaned=True)
            orphaned.append(cid)
    summary = MergeSummary(tuple(sorted(kept)), tuple(sorted(added)), tuple(orphaned))
    logger.info("merged register for %r: %s", register.model_name, summary)
    return Register(register.model_name, clauses), summary


# ---------------- Tabular export ----------------

def _status_cell(c: RiskClause) -> str:
    return f"{c.status.value} (orphaned)" if c.orphaned else c.status.value


def register_frame(register: Register) -> pd.DataFrame:
    rows = [
        {
            "Target": c.skeleton.target_label or c.skeleton.target.ref,
            "Hazard Keyword": c.skeleton.keyword.value,
            "Condition": c.condition,
            "Consequences / Liabilities": c.consequences,
            "Risk (Li/Sev)": c.risk,
            "Recommended Action": c.action,
            "Status": _status_cell(c),
        }
        for c in register.ordered()
    ]
    return pd.DataFrame.from_records(rows, columns=CSV_COLUMNS)


def export_csv(register: Register) -> str:
    return register_frame(register).to_csv(index=False, lineterminator="\n")


# ---------------- Persistence ----------------

def _target_record(target: Target) -> dict:
    if isinstance(target, EntityTarget):
        return {"type": "entity", "entity": target.entity_id}
    rel = target.relationship
    return {
        "type": "relationship",
        "kind": rel.kind.value,
        "source": rel.source,
        "target": rel.target,
        "annotation": rel.annotation,
    }


def _clause_record(c: RiskClause) -> dict:
    s = c.skeleton
    return {
        "id": s.clause_id,
        "keyword": s.keyword.value,
        "category": s.category,
        "scope": s.scope_note,
        "target_label": s.target_label,
        "target": _target_record(s.target),
        "prompt": clause_prompt(s),
        "status": c.status.value,
        "orphaned": c.orphaned,
        "condition": c.condition,
        "consequences": c.consequences,
        "likelihood": c.likelihood.value if c.likelihood else None,
        "severity": c.severity.value if c.severity else None,
        "action": c.action,
    }


class _RegisterDumper(yaml.SafeDumper):
    pass


def _represent_text(dumper: yaml.SafeDumper, value: str) -> yaml.ScalarNode:
    # plain and single-quoted scalars write these raw and they load back as line breaks
    style = '"' if any(ch in value for ch in "\x85\u2028\u2029") else None
    return dumper.represent_scalar("tag:yaml.org,2002:str", value, style=style)


_RegisterDumper.add_representer(str, _represent_text)


def dumps_register(register: Register) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "model_name": register.model_name,
        "clauses": [_clause_record(c) for c in register.ordered()],
    }
    return yaml.dump(doc, Dumper=_RegisterDumper, sort_keys=False, allow_unicode=True, default_flow_style=False, width=4096)


def _text(rec: Mapping, key: str, where: str) -> str:
    value = rec.get(key, "")
    if value is None:
        return ""
    if not isinstance(value, str):
        raise RegisterFormatError(f"{where}: '{key}' must be text")
    return value


def _parse_target(rec, where: str) -> Target:
    if not isinstance(rec, Mapping):
        raise RegisterFormatError(f"{where}: 'target' must be a mapping")
    ttype = rec.get("type")
    if ttype == "entity":
        return EntityTarget(str(rec.get("entity") or ""))
    if ttype == "relationship":
        try:
            kind = RelKind(rec.get("kind"))
        except ValueError:
            raise RegisterFormatError(f"{where}: unknown relationship kind {rec.get('kind')!r}") from None
        return RelationshipTarget(Relationship(kind, str(rec.get("source")), str(rec.get("target")), rec.get("annotation")))
    raise RegisterFormatError(f"{where}: unknown target type {ttype!r}")


def _parse_clause(rec, model_name: str, index: int) -> RiskClause:
    where = f"clause #{index + 1}"
    if not isinstance(rec, Mapping):
        raise RegisterFormatError(f"{where}: must be a mapping")
    clause_id = _text(rec, "id", where)
    if not clause_id:
        raise RegisterFormatError(f"{where}: missing 'id'")
    where = f"clause '{clause_id}'"
    kw = map_keyword(_text(rec, "keyword", where))
    if kw is None:
        raise RegisterFormatError(f"{where}: unknown keyword {rec.get('keyword')!r}")
    skeleton = RiskClauseSkeleton(
        clause_id=clause_id,
        target=_parse_target(rec.get("target"), where),
        keyword=HazardKeyword(kw),
        scope_note=_text(rec, "scope", where),
        model_name=model_name,
        target_label=_text(rec, "target_label", where),
        category=_text(rec, "category", where),
    )
    clause = RiskClause(
        skeleton=skeleton,
        condition=_text(rec, "condition", where),
        consequences=_text(rec, "consequences", where),
        likelihood=parse_rating(rec.get("likelihood")),
        severity=parse_rating(rec.get("severity")),
        action=_text(rec, "action", where),
        status=parse_status(rec.get("status") or "Open"),
        orphaned=bool(rec.get("orphaned", False)),
    )
    if clause.status in ASSESSED and clause.missing_fields():
        raise IncompleteTriage(f"{where} is {clause.status.value} but missing {', '.join(clause.missing_fields())}")
    return clause


def loads_register(text: str) -> Register:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise RegisterFormatError(f"register is not valid YAML: {e}") from e
    if not isinstance(doc, Mapping):
        raise RegisterFormatError("register must be a mapping")
    if doc.get("format_version") != FORMAT_VERSION:
        raise RegisterFormatError(f"unsupported format_version {doc.get('format_version')!r} (expected {FORMAT_VERSION})")
    model_name = doc.get("model_name") or ""
    records = doc.get("clauses") or []
    if not isinstance(records, list):
        raise RegisterFormatError("'clauses' must be a list")
    clauses: Dict[str, RiskClause] = {}
    for i, rec in enumerate(records):
        c = _parse_clause(rec, str(model_name), i)
        if c.clause_id in clauses:
            raise DuplicateClauseId(f"duplicate clause id '{c.clause_id}' in register file")
        clauses[c.clause_id] = c
    return Register(str(model_name), clauses)


def save_register(register: Register, path) -> None:
    write_text_atomic(path, dumps_register(register))


def load_register(path) -> Register:
    return loads_register(read_text(path))

"""
Hazard keyword checklist and risk-clause skeleton enumeration.

A skeleton is the (target, hazard keyword) half of a risk clause; condition,
consequences, ratings and action are filled in during triage.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

import yaml

from .analysis import INTER_ORG, INTRA_ORG, OWNERSHIP_UNKNOWN, inter_org_relationships, relationship_scope
from .errors import ConfigError, InvalidModel
from .model import EntityKind, Model, RelKind, Relationship, owner_org, validate
from .normalization import map_category, map_keyword, map_scope

logger = logging.getLogger(__name__)


class HazardKeyword(Enum):
    EARLY = "Early"
    LATE = "Late"
    NEVER = "Never"
    INCAPABLE = "Incapable"
    INSUFFICIENT = "Insufficient"
    IMPAIRED = "Impaired"
    CHANGES = "Changes"


KEYWORDS: Tuple[HazardKeyword, ...] = tuple(HazardKeyword)

_GLOSSES: Dict[HazardKeyword, str] = {
    HazardKeyword.EARLY: "Occurrence of entity/relationship before required.",
    HazardKeyword.LATE: "Occurrence of entity/relationship after required.",
    HazardKeyword.NEVER: "Non-occurrence of entity/relationship.",
    HazardKeyword.INCAPABLE: "Occurrence did not take place although attempts were made to fulfill the obligation.",
    HazardKeyword.INSUFFICIENT: "Occurrence of the entity/relationship at an incorrect level.",
    HazardKeyword.IMPAIRED: "Occurrence of the entity/relationship in an incorrect manner.",
    HazardKeyword.CHANGES: "The entity/relationship changes on a permanent basis.",
}


def keyword_glosses() -> Dict[HazardKeyword, str]:
    return dict(_GLOSSES)


def parse_keyword(name: str) -> HazardKeyword:
    key = map_keyword(name)
    if key is None:
        raise ConfigError(f"unknown hazard keyword {name!r}")
    return HazardKeyword(key)


class Scope(Enum):
    ALL = "all"
    INTER_ORG = "inter-org"


def parse_scope(name: str) -> Scope:
    key = map_scope(name)
    if key is None:
        raise ConfigError(f"unknown scope {name!r} (expected 'all' or 'inter-org')")
    return Scope(key)


# ---------------- Targets ----------------

@dataclass(frozen=True)
class EntityTarget:
    entity_id: str

    @property
    def ref(self) -> str:
        return self.entity_id


@dataclass(frozen=True)
class RelationshipTarget:
    relationship: Relationship

    @property
    def ref(self) -> str:
        return self.relationship.signature


Target = Union[EntityTarget, RelationshipTarget]
Category = Union[EntityKind, RelKind]
CATEGORIES: Tuple[Category, ...] = tuple(EntityKind) + tuple(RelKind)

_REL_VERBS = {
    RelKind.RESPONSIBLE_FOR: "responsible for",
    RelKind.HAS: "has",
    RelKind.ASSOCIATION: "associated with",
}


def target_category(model: Model, target: Target) -> Category:
    if isinstance(target, EntityTarget):
        return model.entity(target.entity_id).kind
    return target.relationship.kind


def target_label(model: Model, target: Target) -> str:
    if isinstance(target, EntityTarget):
        return model.entity(target.entity_id).label
    rel = target.relationship
    text = f"{model.entity(rel.source).label} {_REL_VERBS[rel.kind]} {model.entity(rel.target).label}"
    if rel.annotation:
        text += f" ({rel.annotation})"
    return text


def parse_category(name: str) -> Category:
    key = map_category(name)
    if key is None:
        raise ConfigError(f"unknown target category {name!r}")
    for c in CATEGORIES:
        if c.value == key:
            return c
    raise ConfigError(f"unknown target category {name!r}")


# ---------------- Applicability matrix ----------------

@dataclass(frozen=True)
class ApplicabilityMatrix:
    mapping: Mapping[Category, FrozenSet[HazardKeyword]]

    def __post_init__(self):
        missing = [c.value for c in CATEGORIES if c not in self.mapping]
        if missing:
            raise ConfigError(f"applicability matrix does not map: {', '.join(missing)}")
        object.__setattr__(self, "mapping", {c: frozenset(self.mapping[c]) for c in CATEGORIES})

    @classmethod
    def default(cls) -> "ApplicabilityMatrix":
        return cls({c: frozenset(KEYWORDS) for c in CATEGORIES})

    def keywords_for(self, category: Category) -> Tuple[HazardKeyword, ...]:
        allowed = self.mapping[category]
        return tuple(k for k in KEYWORDS if k in allowed)

    def without(self, category: Category, keyword: HazardKeyword) -> "ApplicabilityMatrix":
        mapping = dict(self.mapping)
        mapping[category] = mapping[category] - {keyword}
        return ApplicabilityMatrix(mapping)

    def with_keywords(self, category: Category, keywords: Iterable[HazardKeyword]) -> "ApplicabilityMatrix":
        mapping = dict(self.mapping)
        mapping[category] = frozenset(keywords)
        return ApplicabilityMatrix(mapping)


def matrix_from_dict(data: Optional[Mapping]) -> ApplicabilityMatrix:
    """Categories not mentioned keep all seven keywords; `all` or null means all seven."""
    data = data or {}
    if not isinstance(data, Mapping):
        raise ConfigError("applicability matrix must be a mapping of category -> keywords")
    if "matrix" in data and isinstance(data["matrix"], Mapping):
        data = data["matrix"]
    mapping: Dict[Category, FrozenSet[HazardKeyword]] = {c: frozenset(KEYWORDS) for c in CATEGORIES}
    for raw_key, raw_value in data.items():
        category = parse_category(str(raw_key))
        if raw_value is None or (isinstance(raw_value, str) and raw_value.strip().lower() == "all"):
            mapping[category] = frozenset(KEYWORDS)
        elif isinstance(raw_value, (list, tuple)):
            mapping[category] = frozenset(parse_keyword(str(v)) for v in raw_value)
        else:
            raise ConfigError(f"keywords for {raw_key!r} must be a list or 'all'")
    return ApplicabilityMatrix(mapping)


def load_matrix(path) -> ApplicabilityMatrix:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"cannot read matrix file {path}: {e}") from e
    return matrix_from_dict(data)


# ---------------- Enumeration ----------------

@dataclass(frozen=True)
class RiskClauseSkeleton:
    clause_id: str
    target: Target
    keyword: HazardKeyword
    scope_note: str  # inter-organizational | intra-organizational | ownership-unknown
    model_name: str = ""
    target_label: str = ""
    category: str = ""


def clause_id_for(model_name: str, target: Target, keyword: HazardKeyword) -> str:
    return f"riskclause:{model_name}:{target.ref}:{keyword.value}"


def _require_valid(model: Model) -> None:
    violations = validate(model)
    if violations:
        raise InvalidModel(f"model '{model.name}' has {len(violations)} violation(s)", violations)


def enumerate_targets(model: Model, scope: Scope = Scope.ALL) -> List[Target]:
    _require_valid(model)
    if scope is Scope.ALL:
        rels = list(model.relationships)
        ids = [e.id for e in model.sorted_entities()]
    else:
        rels = inter_org_relationships(model)
        ids = sorted({end for r in rels for end in (r.source, r.target)})
    targets: List[Target] = [EntityTarget(i) for i in ids]
    targets += [RelationshipTarget(r) for r in rels]
    return targets


def _entity_scope(model: Model, entity_id: str, crossing: FrozenSet[str]) -> str:
    if owner_org(model, entity_id) is None:
        return OWNERSHIP_UNKNOWN
    return INTER_ORG if entity_id in crossing else INTRA_ORG


def enumerate_clauses(
    model: Model,
    scope: Scope = Scope.ALL,
    matrix: Optional[ApplicabilityMatrix] = None,
) -> List[RiskClauseSkeleton]:
    matrix = matrix or ApplicabilityMatrix.default()
    targets = enumerate_targets(model, scope)
    crossing = frozenset(end for r in inter_org_relationships(model) for end in (r.source, r.target))
    out: List[RiskClauseSkeleton] = []
    for t in targets:
        category = target_category(model, t)
        if isinstance(t, EntityTarget):
            note = _entity_scope(model, t.entity_id, crossing)
        else:
            note = relationship_scope(model, t.relationship)
        label = target_label(model, t)
        for kw in matrix.keywords_for(category):
            out.append(RiskClauseSkeleton(
                clause_id=clause_id_for(model.name, t, kw),
                target=t,
                keyword=kw,
                scope_note=note,
                model_name=model.name,
                target_label=label,
                category=category.value,
            ))
    logger.debug("enumerated %d clause(s) over %d target(s) in %s (scope=%s)", len(out), len(targets), model.name, scope.value)
    return out


_SUBJECT_RE = re.compile(r"(?i)\b(?:the )?entity/relationship\b")


def clause_prompt(skeleton: RiskClauseSkeleton) -> str:
    """Suggestive prompt for the analyst; never a condition in itself."""
    gloss = _GLOSSES[skeleton.keyword]
    quoted = f"'{skeleton.target_label or skeleton.target.ref}'"
    if _SUBJECT_RE.search(gloss):
        text = _SUBJECT_RE.sub(quoted, gloss, count=1)
    else:
        text = f"{gloss.rstrip('.')} ({quoted})"
    text = text.rstrip(".")
    text = text[:1].lower() + text[1:]
    return f"Consider: {skeleton.keyword.value} — {text}"

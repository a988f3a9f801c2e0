"""
Responsibility Model
====================

Typed graph of agents, responsibilities and resources with organisational
ownership, plus the structural rules of the notation:

  Entities:       HumanAgent, OrganizationalAgent, Responsibility,
                  InformationResource, PhysicalResource
  Relationships:  ResponsibleFor (agent -> responsibility)
                  Has            (agent or responsibility -> resource)
                  Association    (any pair, optional annotation, undirected)

Models are immutable values. `add_entity` and `add_relationship` return new
models and raise on precondition failures; `validate` reports every violated
rule as data.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import (
    AnnotationNotAllowed,
    DuplicateId,
    DuplicateRelationship,
    InvalidIdentifier,
    KindMismatch,
    OrgWithOwner,
    OwnerNotOrganization,
    SelfLoop,
    UnknownEndpoint,
    UnknownEntity,
    UnknownOwner,
)

logger = logging.getLogger(__name__)

IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class EntityKind(Enum):
    HUMAN_AGENT = "HumanAgent"
    ORGANIZATIONAL_AGENT = "OrganizationalAgent"
    RESPONSIBILITY = "Responsibility"
    INFORMATION_RESOURCE = "InformationResource"
    PHYSICAL_RESOURCE = "PhysicalResource"


class RelKind(Enum):
    RESPONSIBLE_FOR = "ResponsibleFor"
    HAS = "Has"
    ASSOCIATION = "Association"


AGENT_KINDS = frozenset({EntityKind.HUMAN_AGENT, EntityKind.ORGANIZATIONAL_AGENT})
RESOURCE_KINDS = frozenset({EntityKind.INFORMATION_RESOURCE, EntityKind.PHYSICAL_RESOURCE})
HOLDER_KINDS = AGENT_KINDS | {EntityKind.RESPONSIBILITY}

# Serializer section order: organisations, humans, responsibilities, then all
# resources together sorted by id
ENTITY_KIND_RANK: Dict[EntityKind, int] = {
    EntityKind.ORGANIZATIONAL_AGENT: 0,
    EntityKind.HUMAN_AGENT: 1,
    EntityKind.RESPONSIBILITY: 2,
    EntityKind.INFORMATION_RESOURCE: 3,
    EntityKind.PHYSICAL_RESOURCE: 3,
}
REL_KIND_ORDER: Tuple[RelKind, ...] = (RelKind.RESPONSIBLE_FOR, RelKind.HAS, RelKind.ASSOCIATION)


@dataclass(frozen=True)
class Entity:
    id: str
    kind: EntityKind
    label: Optional[str] = None  # defaults to the id
    owner: Optional[str] = None  # id of an OrganizationalAgent

    def __post_init__(self):
        if self.label is None:
            object.__setattr__(self, "label", self.id)

    @property
    def is_agent(self) -> bool:
        return self.kind in AGENT_KINDS

    @property
    def is_organization(self) -> bool:
        return self.kind is EntityKind.ORGANIZATIONAL_AGENT


@dataclass(frozen=True, eq=False)
class Relationship:
    """A directed edge; associations compare equal in both directions."""

    kind: RelKind
    source: str
    target: str
    annotation: Optional[str] = None

    def __post_init__(self):
        if self.annotation == "":
            object.__setattr__(self, "annotation", None)

    @property
    def endpoints(self) -> Tuple[str, str]:
        if self.kind is RelKind.ASSOCIATION:
            a, b = sorted((self.source, self.target))
            return a, b
        return self.source, self.target

    def key(self) -> tuple:
        return (self.kind, self.endpoints, self.annotation)

    def sort_key(self) -> tuple:
        return (REL_KIND_ORDER.index(self.kind), self.endpoints, self.annotation or "")

    @property
    def signature(self) -> str:
        a, b = self.endpoints
        if self.kind is RelKind.RESPONSIBLE_FOR:
            return f"responsible:{a}->{b}"
        if self.kind is RelKind.HAS:
            return f"has:{a}->{b}"
        if self.annotation:
            return f"assoc:{a}--{b}[{self.annotation}]"
        return f"assoc:{a}--{b}"

    def __eq__(self, other):
        if not isinstance(other, Relationship):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Relationship({self.signature})"


@dataclass(frozen=True, eq=False)
class Model:
    name: str
    entities: Mapping[str, Entity] = field(default_factory=dict)
    relationships: Tuple[Relationship, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entities", MappingProxyType(dict(self.entities)))
        object.__setattr__(self, "relationships", tuple(self.relationships))

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (
            self.name == other.name
            and self.entities == other.entities
            and frozenset(self.relationships) == frozenset(other.relationships)
        )

    __hash__ = None  # type: ignore[assignment]

    def entity(self, entity_id: str) -> Entity:
        try:
            return self.entities[entity_id]
        except KeyError:
            raise UnknownEntity(f"unknown entity '{entity_id}' in model '{self.name}'") from None

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self.entities

    def sorted_entities(self) -> List[Entity]:
        return sorted(self.entities.values(), key=lambda e: e.id)

    def canonical_entities(self) -> List[Entity]:
        return sorted(self.entities.values(), key=lambda e: (ENTITY_KIND_RANK[e.kind], e.id))

    def organizations(self) -> List[Entity]:
        return [e for e in self.sorted_entities() if e.is_organization]


@dataclass(frozen=True)
class Violation:
    rule: str
    element: str
    message: str
    severity: str = "error"  # error | warning


def relationship_allowed(kind: RelKind, source_kind: EntityKind, target_kind: EntityKind) -> Optional[str]:
    """Return the endpoint constraint that fails, or None when the triple is allowed."""
    if kind is RelKind.RESPONSIBLE_FOR:
        if source_kind not in AGENT_KINDS:
            return "responsible-for source must be a human or organizational agent"
        if target_kind is not EntityKind.RESPONSIBILITY:
            return "responsible-for target must be a responsibility"
        return None
    if kind is RelKind.HAS:
        if source_kind not in HOLDER_KINDS:
            return "has source must be an agent or a responsibility"
        if target_kind not in RESOURCE_KINDS:
            return "has target must be an information or physical resource"
        return None
    return None


def _check_owner(model: Model, entity: Entity) -> None:
    if entity.owner is None:
        return
    if entity.is_organization:
        raise OrgWithOwner(f"organization '{entity.id}' cannot have an owner")
    owner = model.entities.get(entity.owner)
    if owner is None:
        raise UnknownOwner(f"owner '{entity.owner}' of '{entity.id}' is not declared")
    if not owner.is_organization:
        raise OwnerNotOrganization(
            f"owner '{entity.owner}' of '{entity.id}' is a {owner.kind.value}, not an OrganizationalAgent"
        )


def add_entity(model: Model, entity: Entity) -> Model:
    if not IDENTIFIER_RE.match(entity.id or ""):
        raise InvalidIdentifier(f"'{entity.id}' is not a valid identifier")
    if entity.id in model.entities:
        raise DuplicateId(f"entity '{entity.id}' already exists")
    _check_owner(model, entity)
    entities: Dict[str, Entity] = dict(model.entities)
    entities[entity.id] = entity
    return replace(model, entities=entities)


def add_relationship(model: Model, rel: Relationship) -> Model:
    if rel.annotation is not None and rel.kind is not RelKind.ASSOCIATION:
        raise AnnotationNotAllowed(f"only associations may be annotated ({rel.signature})")
    if rel.source == rel.target:
        raise SelfLoop(f"self-loop on '{rel.source}'")
    for end in (rel.source, rel.target):
        if end not in model.entities:
            raise UnknownEndpoint(f"unknown endpoint '{end}' in {rel.signature}")
    failed = relationship_allowed(rel.kind, model.entities[rel.source].kind, model.entities[rel.target].kind)
    if failed:
        raise KindMismatch(f"{rel.signature}: {failed}", constraint=failed)
    if rel in model.relationships:
        raise DuplicateRelationship(f"duplicate relationship {rel.signature}")
    return replace(model, relationships=model.relationships + (rel,))


def build_model(name: str, entities: Iterable[Entity] = (), relationships: Iterable[Relationship] = ()) -> Model:
    """Construct a model through the checked operations; organisations go in first."""
    model = Model(name=name)
    ents = list(entities)
    for e in [e for e in ents if e.is_organization] + [e for e in ents if not e.is_organization]:
        model = add_entity(model, e)
    for r in relationships:
        model = add_relationship(model, r)
    return model


def validate(model: Model, *, include_warnings: bool = False) -> List[Violation]:
    out: List[Violation] = []

    for key, e in model.entities.items():
        if key != e.id or not IDENTIFIER_RE.match(e.id or ""):
            out.append(Violation("invalid-identifier", key, f"'{e.id}' is not a valid identifier for key '{key}'"))
        if e.owner is None:
            if include_warnings and not e.is_organization:
                out.append(Violation("unowned-entity", e.id, f"'{e.id}' has no owning organization", "warning"))
            continue
        if e.is_organization:
            out.append(Violation("org-with-owner", e.id, f"organization '{e.id}' cannot have an owner"))
            continue
        owner = model.entities.get(e.owner)
        if owner is None:
            out.append(Violation("unknown-owner", e.id, f"owner '{e.owner}' of '{e.id}' is not declared"))
        elif not owner.is_organization:
            out.append(Violation("owner-not-organization", e.id, f"owner '{e.owner}' of '{e.id}' is a {owner.kind.value}"))

    seen = set()
    for rel in model.relationships:
        sig = rel.signature
        if rel.annotation is not None and rel.kind is not RelKind.ASSOCIATION:
            out.append(Violation("annotation-not-allowed", sig, "only associations may be annotated"))
        if rel.source == rel.target:
            out.append(Violation("self-loop", sig, f"self-loop on '{rel.source}'"))
        missing = [end for end in (rel.source, rel.target) if end not in model.entities]
        for end in missing:
            out.append(Violation("unknown-endpoint", sig, f"unknown endpoint '{end}'"))
        if not missing:
            failed = relationship_allowed(rel.kind, model.entities[rel.source].kind, model.entities[rel.target].kind)
            if failed:
                out.append(Violation("kind-mismatch", sig, failed))
        if rel in seen:
            out.append(Violation("duplicate-relationship", sig, "relationship declared more than once"))
        seen.add(rel)

    out.sort(key=lambda v: (v.rule, v.element, v.message))
    logger.debug("validate(%s): %d violation(s)", model.name, len(out))
    return out


def owner_org(model: Model, entity_id: str) -> Optional[str]:
    entity = model.entity(entity_id)
    if entity.is_organization:
        return entity.id
    return entity.owner

"""
Structural analyses over responsibility models: dependency closure, control
boundary, inter-organizational relationships, as-is/to-be diff.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Set, Tuple

from .errors import ConfigError, NotAnAgent, UnknownEntity
from .model import Entity, Model, RelKind, Relationship, owner_org

logger = logging.getLogger(__name__)

INTER_ORG = "inter-organizational"
INTRA_ORG = "intra-organizational"
OWNERSHIP_UNKNOWN = "ownership-unknown"


class AssocMode(Enum):
    NONE = "none"
    FORWARD = "forward"
    BOTH = "both"


@dataclass(frozen=True)
class ClosureConfig:
    follow_has: bool = True
    follow_responsible: bool = True
    follow_assoc: AssocMode = AssocMode.BOTH

    def __post_init__(self):
        if not isinstance(self.follow_assoc, AssocMode):
            try:
                object.__setattr__(self, "follow_assoc", AssocMode(str(self.follow_assoc).lower()))
            except ValueError:
                raise ConfigError(f"unknown association mode {self.follow_assoc!r}") from None
        if not (self.follow_has or self.follow_responsible or self.follow_assoc is not AssocMode.NONE):
            raise ConfigError("closure config must enable at least one traversal")


@dataclass(frozen=True)
class BoundaryReport:
    agent: str
    agent_org: Optional[str]
    in_control: FrozenSet[str] = frozenset()
    out_of_control: FrozenSet[Tuple[str, str]] = frozenset()
    unknown: FrozenSet[str] = frozenset()

    @property
    def members(self) -> FrozenSet[str]:
        return self.in_control | {eid for eid, _ in self.out_of_control} | self.unknown


@dataclass(frozen=True)
class ModelDiff:
    before_name: str
    after_name: str
    added_entities: Tuple[Entity, ...] = ()
    removed_entities: Tuple[Entity, ...] = ()
    changed_entities: Tuple[Tuple[Entity, Entity], ...] = ()
    added_relationships: Tuple[Relationship, ...] = ()
    removed_relationships: Tuple[Relationship, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (
            self.added_entities
            or self.removed_entities
            or self.changed_entities
            or self.added_relationships
            or self.removed_relationships
        )


class ClosureDelta(NamedTuple):
    gained: FrozenSet[str]
    lost: FrozenSet[str]


def _successors(model: Model, cfg: ClosureConfig) -> Dict[str, Set[str]]:
    adj: Dict[str, Set[str]] = {eid: set() for eid in model.entities}
    for rel in model.relationships:
        if rel.kind is RelKind.RESPONSIBLE_FOR and cfg.follow_responsible:
            adj.setdefault(rel.source, set()).add(rel.target)
        elif rel.kind is RelKind.HAS and cfg.follow_has:
            adj.setdefault(rel.source, set()).add(rel.target)
        elif rel.kind is RelKind.ASSOCIATION and cfg.follow_assoc is not AssocMode.NONE:
            adj.setdefault(rel.source, set()).add(rel.target)
            if cfg.follow_assoc is AssocMode.BOTH:
                adj.setdefault(rel.target, set()).add(rel.source)
    return adj


def dependency_closure(model: Model, root: str, cfg: Optional[ClosureConfig] = None) -> FrozenSet[str]:
    cfg = cfg or ClosureConfig()
    model.entity(root)
    adj = _successors(model, cfg)
    seen: Set[str] = {root}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for nxt in sorted(adj.get(node, ())):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    seen.discard(root)
    logger.debug("closure(%s, %s) = %d entities", model.name, root, len(seen))
    return frozenset(seen)


def control_boundary(model: Model, agent: str, cfg: Optional[ClosureConfig] = None) -> BoundaryReport:
    entity = model.entity(agent)
    if not entity.is_agent:
        raise NotAnAgent(f"'{agent}' is a {entity.kind.value}, not an agent")
    agent_org = owner_org(model, agent)
    in_control: Set[str] = set()
    out_of_control: Set[Tuple[str, str]] = set()
    unknown: Set[str] = set()
    for member in dependency_closure(model, agent, cfg):
        org = owner_org(model, member)
        if org is None:
            unknown.add(member)
        elif agent_org is not None and org == agent_org:
            in_control.add(member)
        else:
            out_of_control.add((member, org))
    return BoundaryReport(agent, agent_org, frozenset(in_control), frozenset(out_of_control), frozenset(unknown))


def relationship_scope(model: Model, rel: Relationship) -> str:
    a = owner_org(model, rel.source)
    b = owner_org(model, rel.target)
    if a is None or b is None:
        return OWNERSHIP_UNKNOWN
    return INTRA_ORG if a == b else INTER_ORG


def inter_org_relationships(model: Model) -> List[Relationship]:
    """Relationships crossing organisations, plus those with exactly one unowned endpoint."""
    out: List[Relationship] = []
    for rel in model.relationships:
        a = owner_org(model, rel.source)
        b = owner_org(model, rel.target)
        if a is not None and b is not None:
            if a != b:
                out.append(rel)
        elif (a is None) != (b is None):
            out.append(rel)
    return out


def diff(before: Model, after: Model) -> ModelDiff:
    added = tuple(after.entities[i] for i in sorted(set(after.entities) - set(before.entities)))
    removed = tuple(before.entities[i] for i in sorted(set(before.entities) - set(after.entities)))
    changed = tuple(
        (before.entities[i], after.entities[i])
        for i in sorted(set(before.entities) & set(after.entities))
        if before.entities[i] != after.entities[i]
    )
    before_rels = set(before.relationships)
    after_rels = set(after.relationships)
    added_rels = tuple(sorted(after_rels - before_rels, key=Relationship.sort_key))
    removed_rels = tuple(sorted(before_rels - after_rels, key=Relationship.sort_key))
    return ModelDiff(before.name, after.name, added, removed, changed, added_rels, removed_rels)


def apply_diff(before: Model, d: ModelDiff) -> Model:
    """Replay a diff's edits on `before`; bypasses checks because intermediate states may be inconsistent."""
    entities = dict(before.entities)
    for e in d.removed_entities:
        entities.pop(e.id, None)
    for _, new in d.changed_entities:
        entities[new.id] = new
    for e in d.added_entities:
        entities[e.id] = e
    removed = set(d.removed_relationships)
    rels = [r for r in before.relationships if r not in removed]
    rels += list(d.added_relationships)
    return Model(name=d.after_name, entities=entities, relationships=tuple(rels))


def closure_delta(before: Model, after: Model, root: str, cfg: Optional[ClosureConfig] = None) -> ClosureDelta:
    for label, m in (("before", before), ("after", after)):
        if not m.has_entity(root):
            raise UnknownEntity(f"'{root}' does not exist in the {label} model '{m.name}'")
    old = dependency_closure(before, root, cfg)
    new = dependency_closure(after, root, cfg)
    return ClosureDelta(gained=frozenset(new - old), lost=frozenset(old - new))

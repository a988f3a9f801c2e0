"""Hypothesis strategies producing well-formed responsibility models."""
from __future__ import annotations

from hypothesis import strategies as st

from respkit.model import (
    Entity,
    EntityKind,
    Model,
    RelKind,
    Relationship,
    add_entity,
    add_relationship,
    relationship_allowed,
)

NON_ORG_KINDS = [
    EntityKind.HUMAN_AGENT,
    EntityKind.RESPONSIBILITY,
    EntityKind.INFORMATION_RESOURCE,
    EntityKind.PHYSICAL_RESOURCE,
]

# any text the DSL can carry; surrogates cannot be encoded
labels = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=12)
names = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=10)


@st.composite
def models(draw, max_entities: int = 12, max_relationships: int = 15) -> Model:
    model = Model(name=draw(names))
    n_orgs = draw(st.integers(min_value=0, max_value=min(3, max_entities)))
    org_ids = [f"Org{i}" for i in range(n_orgs)]
    for oid in org_ids:
        label = draw(st.none() | labels)
        model = add_entity(model, Entity(oid, EntityKind.ORGANIZATIONAL_AGENT, label))

    n_other = draw(st.integers(min_value=0, max_value=max_entities - n_orgs))
    for i in range(n_other):
        kind = draw(st.sampled_from(NON_ORG_KINDS))
        owner = draw(st.none() | st.sampled_from(org_ids)) if org_ids else None
        label = draw(st.none() | labels)
        model = add_entity(model, Entity(f"E{i}", kind, label, owner))

    ids = sorted(model.entities)
    if len(ids) < 2:
        return model
    for _ in range(draw(st.integers(min_value=0, max_value=max_relationships))):
        kind = draw(st.sampled_from(list(RelKind)))
        src = draw(st.sampled_from(ids))
        tgt = draw(st.sampled_from(ids))
        annotation = draw(st.none() | labels) if kind is RelKind.ASSOCIATION else None
        rel = Relationship(kind, src, tgt, annotation)
        if src == tgt or rel in model.relationships:
            continue
        if relationship_allowed(kind, model.entities[src].kind, model.entities[tgt].kind):
            continue
        model = add_relationship(model, rel)
    return model

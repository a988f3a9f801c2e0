from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings

from respkit.errors import (
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
from respkit.model import (
    Entity,
    EntityKind,
    Model,
    RelKind,
    Relationship,
    add_entity,
    add_relationship,
    build_model,
    owner_org,
    relationship_allowed,
    validate,
)

from .model_strategies import models

H, O, R, I, P = (
    EntityKind.HUMAN_AGENT,
    EntityKind.ORGANIZATIONAL_AGENT,
    EntityKind.RESPONSIBILITY,
    EntityKind.INFORMATION_RESOURCE,
    EntityKind.PHYSICAL_RESOURCE,
)

ALLOWED = {
    RelKind.RESPONSIBLE_FOR: {(H, R), (O, R)},
    RelKind.HAS: {(s, t) for s in (H, O, R) for t in (I, P)},
}


def _small():
    return build_model(
        "small",
        [
            Entity("Acme", O),
            Entity("Alice", H, "Alice Smith", owner="Acme"),
            Entity("Ship", R, owner="Acme"),
            Entity("Docs", I, owner="Acme"),
        ],
        [Relationship(RelKind.RESPONSIBLE_FOR, "Alice", "Ship"), Relationship(RelKind.HAS, "Ship", "Docs")],
    )


@pytest.mark.parametrize("kind,src,tgt", list(itertools.product(RelKind, EntityKind, EntityKind)))
def test_relationship_constraint_table(kind, src, tgt):
    expected_ok = kind is RelKind.ASSOCIATION or (src, tgt) in ALLOWED[kind]
    assert (relationship_allowed(kind, src, tgt) is None) == expected_ok


def test_constraint_table_has_75_cases_33_allowed():
    cases = list(itertools.product(RelKind, EntityKind, EntityKind))
    assert len(cases) == 75
    assert sum(relationship_allowed(*c) is None for c in cases) == 33


def test_add_entity_label_defaults_to_id():
    m = add_entity(Model("m"), Entity("Acme", O))
    assert m.entity("Acme").label == "Acme"


def test_add_entity_errors():
    m = add_entity(Model("m"), Entity("Acme", O))
    m = add_entity(m, Entity("Bob", H, owner="Acme"))
    with pytest.raises(DuplicateId):
        add_entity(m, Entity("Acme", H))
    with pytest.raises(UnknownOwner):
        add_entity(m, Entity("Carol", H, owner="Nowhere"))
    with pytest.raises(OwnerNotOrganization):
        add_entity(m, Entity("Carol", H, owner="Bob"))
    with pytest.raises(OrgWithOwner):
        add_entity(m, Entity("Sub", O, owner="Acme"))
    with pytest.raises(InvalidIdentifier):
        add_entity(m, Entity("not valid", H))


def test_add_entity_is_pure():
    m = Model("m")
    m2 = add_entity(m, Entity("Acme", O))
    assert m.entities == {}
    assert "Acme" in m2.entities


def test_add_relationship_errors():
    m = _small()
    with pytest.raises(KindMismatch) as exc:
        add_relationship(m, Relationship(RelKind.RESPONSIBLE_FOR, "Alice", "Docs"))
    assert "responsibility" in exc.value.constraint
    with pytest.raises(SelfLoop):
        add_relationship(m, Relationship(RelKind.ASSOCIATION, "Alice", "Alice"))
    with pytest.raises(UnknownEndpoint):
        add_relationship(m, Relationship(RelKind.HAS, "Ship", "Ghost"))
    with pytest.raises(DuplicateRelationship):
        add_relationship(m, Relationship(RelKind.HAS, "Ship", "Docs"))
    with pytest.raises(AnnotationNotAllowed):
        add_relationship(m, Relationship(RelKind.HAS, "Alice", "Docs", "x"))


def test_association_is_symmetric():
    m = add_relationship(_small(), Relationship(RelKind.ASSOCIATION, "Alice", "Docs", "reads"))
    assert Relationship(RelKind.ASSOCIATION, "Docs", "Alice", "reads") == Relationship(RelKind.ASSOCIATION, "Alice", "Docs", "reads")
    with pytest.raises(DuplicateRelationship):
        add_relationship(m, Relationship(RelKind.ASSOCIATION, "Docs", "Alice", "reads"))
    # a different annotation is a different association
    add_relationship(m, Relationship(RelKind.ASSOCIATION, "Docs", "Alice", "writes"))


def test_signatures():
    assert Relationship(RelKind.RESPONSIBLE_FOR, "A", "B").signature == "responsible:A->B"
    assert Relationship(RelKind.HAS, "A", "B").signature == "has:A->B"
    assert Relationship(RelKind.ASSOCIATION, "B", "A").signature == "assoc:A--B"
    assert Relationship(RelKind.ASSOCIATION, "B", "A", "x").signature == "assoc:A--B[x]"


def test_empty_annotation_is_none():
    assert Relationship(RelKind.ASSOCIATION, "A", "B", "").annotation is None


def test_model_equality_ignores_relationship_order():
    a = Relationship(RelKind.RESPONSIBLE_FOR, "Alice", "Ship")
    b = Relationship(RelKind.HAS, "Ship", "Docs")
    m1 = _small()
    m2 = Model(m1.name, m1.entities, (b, a))
    assert m1 == m2
    assert m1 != Model("other", m1.entities, m1.relationships)


def test_validate_built_model_is_clean():
    assert validate(_small()) == []
    assert validate(Model("empty")) == []


def test_validate_reports_hand_built_violations():
    bad = Model(
        "bad",
        {
            "Acme": Entity("Acme", O, owner="Acme"),
            "Bob": Entity("Bob", H, owner="Ghost"),
            "Doc": Entity("Doc", I),
        },
        (
            Relationship(RelKind.RESPONSIBLE_FOR, "Bob", "Doc"),
            Relationship(RelKind.HAS, "Doc", "Doc"),
            Relationship(RelKind.HAS, "Bob", "Nope"),
        ),
    )
    rules = [v.rule for v in validate(bad)]
    assert "org-with-owner" in rules
    assert "unknown-owner" in rules
    assert "kind-mismatch" in rules
    assert "self-loop" in rules
    assert "unknown-endpoint" in rules
    assert rules == sorted(rules)


def test_validate_warnings_are_opt_in():
    m = build_model("m", [Entity("Doc", I)])
    assert validate(m) == []
    warnings = validate(m, include_warnings=True)
    assert [(v.rule, v.element, v.severity) for v in warnings] == [("unowned-entity", "Doc", "warning")]


def test_owner_org():
    m = _small()
    assert owner_org(m, "Acme") == "Acme"
    assert owner_org(m, "Docs") == "Acme"
    with pytest.raises(UnknownEntity):
        owner_org(m, "Nobody")


def test_owner_org_of_unowned_entity_is_none():
    m = build_model("m", [Entity("Acme", O), Entity("Loose", H)])
    assert owner_org(m, "Loose") is None
    assert owner_org(m, "Acme") == "Acme"


@settings(max_examples=60, deadline=None)
@given(models())
def test_owner_org_is_idempotent(m):
    for eid in m.entities:
        org = owner_org(m, eid)
        if org is None:
            assert m.entities[eid].owner is None and not m.entities[eid].is_organization
        else:
            assert m.entities[org].is_organization
            assert owner_org(m, org) == org


def test_model_entities_are_read_only():
    m = _small()
    with pytest.raises(TypeError):
        m.entities["Ghost"] = Entity("Ghost", O)
    with pytest.raises(TypeError):
        del m.entities["Acme"]
    assert set(m.entities) == {"Acme", "Alice", "Ship", "Docs"}

from __future__ import annotations

import re

import pytest
from hypothesis import given, settings

from respkit.analysis import control_boundary, diff
from respkit.errors import InvalidModel
from respkit.hazard import Scope, enumerate_clauses
from respkit.model import Entity, EntityKind, Model, RelKind, Relationship, build_model
from respkit.register import init_register, triage
from respkit.report import boundary_report_md, diff_report, dot_syntax_errors, register_report_md, to_dot

from .model_strategies import models


def _cluster_body(dot: str, org: str) -> str:
    start = dot.index(f"subgraph cluster_{org} {{")
    end = dot.index("\t}", start)
    return dot[start:end]


def test_tobe_dot_has_amazon_cluster(tobe):
    dot = to_dot(tobe)
    body = _cluster_body(dot, "Amazon")
    for eid in ("EC2Infrastructure", "EC2Docs", "EC2PricingModel", "EC2ServiceOffering"):
        assert re.search(rf"^\s*{eid} \[", body, re.M), eid
    assert "style=dashed" in body
    assert not re.search(r"^\s*EC2Docs \[", _cluster_body(dot, "CompanyB"), re.M)


def test_dot_shapes_and_arrowheads(tobe):
    dot = to_dot(tobe)
    assert re.search(r"^\s*Amazon \[.*shape=triangle.*\]", dot, re.M)
    assert re.search(r'^\s*EC2Docs \[label="\[Documentation for Managing and Maintaining EC2\]"', dot, re.M)
    assert re.search(r"^\s*TimelySupportResolution \[.*style=rounded", dot, re.M)
    assert re.search(r"^\s*SupportManager -> TimelySupportResolution \[arrowhead=box\]", dot, re.M)
    assert re.search(r"^\s*TimelySupportResolution -> EC2Docs \[arrowhead=dot\]", dot, re.M)
    assert re.search(r'label="escalates to" dir=none', dot)


def test_dot_every_entity_and_relationship_once(tobe):
    dot = to_dot(tobe)
    node_lines = [l for l in dot.splitlines() if re.match(r"^\s*\w+ \[", l)]
    edge_lines = [l for l in dot.splitlines() if " -> " in l]
    assert len(node_lines) == len(tobe.entities)
    assert len(edge_lines) == len(tobe.relationships)


def test_dot_is_valid_and_deterministic(asis, tobe):
    for m in (asis, tobe):
        text = to_dot(m)
        assert dot_syntax_errors(text) == []
        assert to_dot(m) == text


def test_empty_model_dot():
    text = to_dot(Model("empty"))
    assert dot_syntax_errors(text) == []
    assert " [" not in text


def test_dot_highlights_added_elements(asis, tobe):
    text = to_dot(tobe, highlight=diff(asis, tobe))
    assert re.search(r"^\s*Amazon \[.*color=red", text, re.M)
    assert not re.search(r"^\s*SupportManager \[.*color=red", text, re.M)
    assert dot_syntax_errors(text) == []


def test_dot_escapes_labels():
    m = build_model("q", [Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT, 'say "hi" \\ <b>')])
    text = to_dot(m)
    assert dot_syntax_errors(text) == []


def test_to_dot_rejects_invalid_model():
    bad = Model("b", {"Bob": Entity("Bob", EntityKind.HUMAN_AGENT, owner="Ghost")})
    with pytest.raises(InvalidModel):
        to_dot(bad)


@settings(max_examples=200, deadline=None)
@given(models())
def test_generated_models_render_valid_dot(model):
    assert dot_syntax_errors(to_dot(model)) == []


@pytest.mark.parametrize(
    "text",
    [
        "digraph { a -> }",
        "digraph { a -- b }",
        "graph { a -> b }",
        "digraph { a [label=] }",
        'digraph { a [label="open }',
        "digraph { subgraph { a }",
        "digraph x { } extra",
        "node { }",
    ],
)
def test_dot_validator_rejects(text):
    assert dot_syntax_errors(text) != []


@pytest.mark.parametrize(
    "text",
    [
        "digraph {}",
        "strict digraph g { a; b -> c -> d [color=red, style=bold]; }",
        "graph { a -- b; subgraph cluster_x { label=X; c } }",
        "digraph { node [shape=box] edge [dir=none] a:p1:n -> { b c } }",
        "// comment\ndigraph { /* block */ a [label=<<b>hi</b>>] -1.5 }",
    ],
)
def test_dot_validator_accepts(text):
    assert dot_syntax_errors(text) == []


def test_diff_report_asis_tobe(asis, tobe):
    text = diff_report(diff(asis, tobe))
    added = text.split("## Added entities")[1].split("## Removed entities")[0]
    assert "| Amazon | OrganizationalAgent | Amazon Web Services |" in added
    removed = text.split("## Removed entities")[1].split("## Changed entities")[0]
    assert "| Telco |" in removed
    assert text == diff_report(diff(asis, tobe))


def test_diff_report_empty(tobe):
    assert "No changes." in diff_report(diff(tobe, tobe))


def test_diff_report_grows_linearly():
    base = build_model("m", [Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT)])
    sizes = []
    for n in (1, 2, 4):
        bigger = build_model("m", [Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT)] + [Entity(f"R{i}", EntityKind.RESPONSIBILITY, owner="Acme") for i in range(n)])
        sizes.append(len(diff_report(diff(base, bigger)).splitlines()))
    assert sizes[1] - sizes[0] == 1
    assert sizes[2] - sizes[1] == 2


def test_diff_report_changed_entities():
    a = build_model("m", [Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT, "Acme")])
    b = build_model("m", [Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT, "Acme | Corp")])
    text = diff_report(diff(a, b))
    assert "| Acme | label | Acme | Acme \\| Corp |" in text


def test_boundary_report_tobe(tobe):
    text = boundary_report_md(control_boundary(tobe, "SupportManager"))
    out = text.split("## Out of control")[1].split("## Ownership unknown")[0]
    assert "| EC2Infrastructure | Amazon |" in out
    assert "| CustomerISPConnection | CustomerISP |" in out
    assert "Agent organisation: CompanyB" in text
    assert "Dependencies: 6\n" in text


def test_boundary_report_empty_closure():
    m = build_model("e", [Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT)])
    text = boundary_report_md(control_boundary(m, "Acme"))
    assert text.count("|---|") == 3
    assert "Dependencies: 0\n" in text
    assert "## In control" in text and "## Out of control" in text and "## Ownership unknown" in text


def test_boundary_report_unknown_only_in_unknown_table():
    m = build_model(
        "u",
        [
            Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT),
            Entity("Bob", EntityKind.HUMAN_AGENT, owner="Acme"),
            Entity("Stray", EntityKind.PHYSICAL_RESOURCE),
        ],
        [Relationship(RelKind.HAS, "Bob", "Stray")],
    )
    text = boundary_report_md(control_boundary(m, "Bob"))
    head, unknown = text.split("## Ownership unknown")
    assert "Stray" not in head
    assert "| Stray |" in unknown


def test_register_report(tobe):
    register = init_register(enumerate_clauses(tobe, Scope.INTER_ORG))
    register = triage(register, "riskclause:cos-tobe:EC2ServiceOffering:Changes", "withdrawn", "outage", "Low", "High")
    text = register_report_md(register)
    assert text.startswith("# Risk register: cos-tobe\n")
    assert "| EC2 Service Offering | Changes | withdrawn | outage | Low/High |  | Triaged |" in text

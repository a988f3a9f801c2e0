from __future__ import annotations

import pytest
from hypothesis import given, settings

from respkit.dsl import format_diagnostic, parse, parse_file, serialize
from respkit.errors import InvalidModel
from respkit.model import Entity, EntityKind, Model, RelKind, Relationship

from .conftest import ASIS_PATH, TOBE_PATH
from .model_strategies import models


def _rules(result):
    return [d.rule for d in result.errors]


def test_parse_minimal():
    r = parse('model "m" {\n  org Acme "Acme Corp"\n  human Bob owner Acme\n}\n')
    assert r.ok
    assert r.model.name == "m"
    assert r.model.entity("Acme").label == "Acme Corp"
    assert r.model.entity("Bob").owner == "Acme"
    assert r.diagnostics == []


def test_group_expands_to_cross_product():
    text = """model "g" {
  org Acme
  human A owner Acme
  human B owner Acme
  responsibility X owner Acme
  responsibility Y owner Acme
  group responsible { A, B } -> {
    X,
    Y
  }
}
"""
    r = parse(text)
    assert r.ok
    sigs = {rel.signature for rel in r.model.relationships}
    assert sigs == {"responsible:A->X", "responsible:A->Y", "responsible:B->X", "responsible:B->Y"}


def test_forward_references():
    r = parse('model "f" {\n  has Job -> Doc\n  responsibility Job owner Acme\n  resource.info Doc owner Acme\n  org Acme\n}\n')
    assert r.ok
    assert len(r.model.relationships) == 1


def test_tobe_fixture_parses(tobe):
    assert tobe.name == "cos-tobe"
    assert tobe.entity("EC2Docs").label == "Documentation for Managing and Maintaining EC2"
    assert tobe.entity("EC2Infrastructure").owner == "Amazon"


def test_kind_mismatch_reports_line():
    text = 'model "k" {\n  org Acme\n  resource.info Doc owner Acme\n  responsible Acme -> Doc\n}\n'
    r = parse(text)
    assert not r.ok and r.model is None
    assert len(r.errors) == 1
    d = r.errors[0]
    assert d.rule == "kind-mismatch"
    assert d.span.line == 4


def test_recovers_and_reports_every_error():
    text = """model "e" {
  org Acme
  widget Foo
  human Bob owner Nobody
  human Bob
  has Bob -> Ghost
  responsible Acme ->
}
"""
    r = parse(text)
    assert not r.ok
    rules = _rules(r)
    assert "unknown-keyword" in rules
    assert "unknown-owner" in rules
    assert "duplicate-id" in rules
    assert "unknown-endpoint" in rules
    assert "syntax" in rules
    lines = [d.span.line for d in r.diagnostics]
    assert lines == sorted(lines)


def test_recovery_skips_to_end_of_broken_multiline_group():
    text = """model "g" {
  org Acme
  human Bob owner Acme
  responsibility R owner Acme
  group responsible Bob -> {
    R
    Extra
  }
  widget Foo
  has Bob -> Ghost
}
"""
    r = parse(text)
    found = [(d.span.line, d.rule) for d in r.errors]
    assert found == [(7, "syntax"), (9, "unknown-keyword"), (10, "unknown-endpoint")]
    assert not any("after model block" in d.message for d in r.errors)


def test_recovery_resumes_after_unclosed_group():
    text = """model "g" {
  org Acme
  human Bob owner Acme
  responsibility R owner Acme
  group responsible Bob -> { R,
    Extra Stray
  has Bob -> Ghost
}
"""
    r = parse(text)
    found = [(d.span.line, d.rule) for d in r.errors]
    assert found == [(6, "syntax"), (7, "unknown-endpoint")]


def test_unterminated_string_and_bad_character():
    r = parse('model "u" {\n  org Acme "oops\n  org B$\n}\n')
    rules = _rules(r)
    assert "unterminated-string" in rules
    assert "unexpected-character" in rules


def test_missing_closing_brace():
    r = parse('model "x" {\n  org Acme\n')
    assert not r.ok
    assert any("closing" in d.message for d in r.errors)


def test_braces_outside_group_rejected():
    r = parse('model "x" {\n  org Acme\n  responsible { Acme } -> X\n}\n')
    assert not r.ok


def test_unowned_entity_is_warning_only():
    r = parse('model "w" {\n  resource.phys Box\n}\n')
    assert r.ok
    assert [d.rule for d in r.warnings] == ["unowned-entity"]


def test_bom_and_crlf_tolerated(tmp_path):
    p = tmp_path / "m.rm"
    p.write_bytes("\ufeffmodel \"b\" {\r\n  org Acme\r\n}\r\n".encode("utf-8"))
    r = parse_file(p)
    assert r.ok
    assert r.model.has_entity("Acme")


def test_format_diagnostic():
    r = parse('model "x" {\n  foo Bar\n}\n')
    text = format_diagnostic("x.rm", r.errors[0])
    assert text.startswith("x.rm:2:3: error: unknown-keyword: ")


def test_escapes_round_trip():
    m = Model(
        'quote " and \\ back',
        {"Acme": Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT, 'line\nbreak\ttab "q"')},
    )
    text = serialize(m)
    assert parse(text).model == m


def test_serializer_canonical_layout():
    m = Model(
        "c",
        {
            "Job": Entity("Job", EntityKind.RESPONSIBILITY, owner="Acme"),
            "Acme": Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT, "Acme Corp"),
            "Bob": Entity("Bob", EntityKind.HUMAN_AGENT, owner="Acme"),
        },
        (
            Relationship(RelKind.RESPONSIBLE_FOR, "Bob", "Job"),
            Relationship(RelKind.ASSOCIATION, "Acme", "Bob", "employs"),
        ),
    )
    assert serialize(m) == (
        'model "c" {\n'
        '  org Acme "Acme Corp"\n'
        "  human Bob owner Acme\n"
        "  responsibility Job owner Acme\n"
        "\n"
        "  responsible Bob -> Job\n"
        '  assoc Acme -- Bob : "employs"\n'
        "}\n"
    )


def test_serializer_lists_resources_together_by_id():
    m = Model(
        "r",
        {
            "Acme": Entity("Acme", EntityKind.ORGANIZATIONAL_AGENT),
            "Zine": Entity("Zine", EntityKind.INFORMATION_RESOURCE, owner="Acme"),
            "Anvil": Entity("Anvil", EntityKind.PHYSICAL_RESOURCE, owner="Acme"),
            "Manual": Entity("Manual", EntityKind.INFORMATION_RESOURCE, owner="Acme"),
        },
    )
    assert serialize(m) == (
        'model "r" {\n'
        "  org Acme\n"
        "  resource.phys Anvil owner Acme\n"
        "  resource.info Manual owner Acme\n"
        "  resource.info Zine owner Acme\n"
        "}\n"
    )


def test_serialize_empty_model():
    assert serialize(Model("e")) == 'model "e" {\n}\n'


def test_serialize_rejects_invalid_model():
    bad = Model("b", {"Bob": Entity("Bob", EntityKind.HUMAN_AGENT, owner="Ghost")})
    with pytest.raises(InvalidModel):
        serialize(bad)


@pytest.mark.parametrize("path", [ASIS_PATH, TOBE_PATH])
def test_fixtures_are_serializer_fixpoints(path):
    model = parse_file(path).model
    text = serialize(model)
    again = parse(text).model
    assert again == model
    assert serialize(again) == text


@settings(max_examples=200, deadline=None)
@given(models())
def test_parse_serialize_round_trip(model):
    text = serialize(model)
    result = parse(text)
    assert result.ok, [format_diagnostic("<gen>", d) for d in result.errors]
    assert result.model == model
    assert serialize(result.model) == text

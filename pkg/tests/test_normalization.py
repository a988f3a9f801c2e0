from respkit.normalization import canonicalize, map_category, map_keyword, map_rating, map_scope, map_status


def test_canonicalize_basic():
    assert canonicalize(" Human-Agent ") == canonicalize("humanagent")
    assert canonicalize("Inter_Org") == canonicalize("inter-org")
    assert canonicalize(None) == ""


def test_keyword_aliases():
    assert map_keyword("delayed") == "Late"
    assert map_keyword("NON-OCCURRENCE") == "Never"
    assert map_keyword("changes") == "Changes"
    assert map_keyword("sideways") is None


def test_category_aliases():
    assert map_category("human") == "HumanAgent"
    assert map_category("resource.info") == "InformationResource"
    assert map_category("Responsible For") == "ResponsibleFor"
    assert map_category("responsibility") == "Responsibility"
    assert map_category("assoc") == "Association"


def test_rating_status_scope_aliases():
    assert map_rating("hi") == "High"
    assert map_rating("moderate") == "Medium"
    assert map_status("closed") == "Mitigated"
    assert map_scope("cross-org") == "inter-org"
    assert map_rating("") is None

from __future__ import annotations

import re
import unicodedata
from typing import Dict, List, Optional

# Names accepted in matrix files, register files and CLI flags.
# Keys are the canonical spellings; values are extra spellings.
KEYWORD_SYNONYMS: Dict[str, List[str]] = {
    "Early": ["premature", "too early"],
    "Late": ["delayed", "too late"],
    "Never": ["non-occurrence", "nonoccurrence", "absent", "missing"],
    "Incapable": ["unable", "failed attempt"],
    "Insufficient": ["inadequate", "inaccurate", "incorrect level"],
    "Impaired": ["degraded", "incorrect manner"],
    "Changes": ["change", "changed", "permanent change"],
}

RATING_SYNONYMS: Dict[str, List[str]] = {
    "Low": ["l", "lo"],
    "Medium": ["m", "med", "moderate"],
    "High": ["h", "hi"],
}

STATUS_SYNONYMS: Dict[str, List[str]] = {
    "Open": ["new", "untriaged", "reopen", "reopened"],
    "Triaged": ["assessed"],
    "Accepted": ["accept"],
    "Mitigated": ["mitigate", "closed"],
}

CATEGORY_SYNONYMS: Dict[str, List[str]] = {
    "HumanAgent": ["human", "human agent", "person"],
    "OrganizationalAgent": ["org", "organization", "organisation", "organizational agent", "organisational agent"],
    "Responsibility": ["responsibility", "duty"],
    "InformationResource": ["resource.info", "info", "information resource", "information"],
    "PhysicalResource": ["resource.phys", "phys", "physical resource", "physical"],
    "ResponsibleFor": ["responsible", "responsible for", "responsibility for"],
    "Has": ["has"],
    "Association": ["assoc", "association"],
}

SCOPE_SYNONYMS: Dict[str, List[str]] = {
    "all": ["everything"],
    "inter-org": ["interorg", "inter-organizational", "inter-organisational", "cross-org"],
}

_RE_NON_ALNUM = re.compile(r"[^a-z0-9]+")


def canonicalize(token: str) -> str:
    """Lowercase, strip punctuation/whitespace, normalize unicode.
    Also collapse runs of non-alphanum to a single space and then remove spaces.
    """
    if token is None:
        return ""
    s = unicodedata.normalize("NFKC", str(token)).casefold().strip()
    s = _RE_NON_ALNUM.sub(" ", s)
    s = "".join(s.split())
    return s


def synonym_lookup(tok: str, table: Dict[str, List[str]]) -> Optional[str]:
    """Return the canonical key for `tok`, or None when nothing matches."""
    ctok = canonicalize(tok)
    if not ctok:
        return None
    for k, vals in table.items():
        if ctok == canonicalize(k):
            return k
        for v in vals:
            if canonicalize(v) == ctok:
                return k
    return None


def map_keyword(name: str) -> Optional[str]:
    return synonym_lookup(name, KEYWORD_SYNONYMS)


def map_rating(name: str) -> Optional[str]:
    return synonym_lookup(name, RATING_SYNONYMS)


def map_status(name: str) -> Optional[str]:
    return synonym_lookup(name, STATUS_SYNONYMS)


def map_category(name: str) -> Optional[str]:
    return synonym_lookup(name, CATEGORY_SYNONYMS)


def map_scope(name: str) -> Optional[str]:
    return synonym_lookup(name, SCOPE_SYNONYMS)

from __future__ import annotations

from pathlib import Path

import pytest

from respkit.dsl import parse_file

MODELS_DIR = Path(__file__).resolve().parents[1] / "data" / "models"
ASIS_PATH = MODELS_DIR / "cos-asis.rm"
TOBE_PATH = MODELS_DIR / "cos-tobe.rm"


def _load(path: Path):
    result = parse_file(path)
    assert result.ok, [d.message for d in result.errors]
    return result.model


@pytest.fixture
def asis():
    return _load(ASIS_PATH)


@pytest.fixture
def tobe():
    return _load(TOBE_PATH)

"""
Model Registry
==============

Maps short names to the bundled case-study models and resolves CLI path
arguments. Extend `MODEL_MAP` as new fixture models are added.

Usage:
    from respkit.registry import resolve_model_path
    path = resolve_model_path("to-be")
"""
from __future__ import annotations

import os
from typing import Dict, List, Optional

from .settings import load_settings

# Short names -> model basenames under data/models/
MODEL_MAP: Dict[str, str] = {
    "cos-asis": "cos-asis.rm",
    "as-is": "cos-asis.rm",
    "asis": "cos-asis.rm",
    "cos-tobe": "cos-tobe.rm",
    "to-be": "cos-tobe.rm",
    "tobe": "cos-tobe.rm",
}

DEFAULT_MATRIX = "default.yaml"


def _candidate_paths(data_dir: str, subdir: str, basename: str) -> List[str]:
    return [
        os.path.join(data_dir, subdir, basename),
        os.path.join(data_dir, basename),
    ]


def resolve_model_path(name_or_path: Optional[str], data_dir: Optional[str] = None) -> Optional[str]:
    """Resolve a model argument.

    - An existing file path is returned unchanged.
    - Otherwise the (extension-less, case-insensitive) name is looked up in MODEL_MAP
      and searched under data/models/ and data/.
    Returns None if nothing is found.
    """
    if not name_or_path:
        return None
    if os.path.isfile(name_or_path):
        return name_or_path
    data_dir = data_dir or load_settings().data_dir

    key = os.path.basename(name_or_path).lower()
    if key.endswith(".rm"):
        key = key[:-3]
    basename = MODEL_MAP.get(key)
    if basename is None:
        return None
    for p in _candidate_paths(data_dir, "models", basename):
        if os.path.exists(p):
            return p
    return None


def resolve_matrix_path(data_dir: Optional[str] = None) -> Optional[str]:
    data_dir = data_dir or load_settings().data_dir
    for p in _candidate_paths(data_dir, "matrices", DEFAULT_MATRIX):
        if os.path.exists(p):
            return p
    return None


def list_bundled_models(data_dir: Optional[str] = None) -> Dict[str, str]:
    """Return a mapping of short name -> path for models present on disk."""
    data_dir = data_dir or load_settings().data_dir
    found: Dict[str, str] = {}
    for k, basename in MODEL_MAP.items():
        for p in _candidate_paths(data_dir, "models", basename):
            if os.path.exists(p):
                found[k] = p
                break
    return found

#!/usr/bin/env python3
"""
Command-line entry point for respkit; same commands as `python -m respkit`.

Usage:
  python respkit_cli.py validate data/models/cos-tobe.rm
  python respkit_cli.py analyze to-be --agent SupportManager
"""
from __future__ import annotations

import os
import sys

# Ensure project root on path
_HERE = os.path.dirname(os.path.abspath(__file__))
if _HERE not in sys.path:
    sys.path.insert(0, _HERE)

from respkit.cli import main  # noqa: E402

if __name__ == "__main__":
    raise SystemExit(main())

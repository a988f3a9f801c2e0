from __future__ import annotations

import logging
import os
import tempfile

logger = logging.getLogger(__name__)


def write_text_atomic(path, text: str) -> None:
    """Write UTF-8 text with LF endings via a temp file in the same directory and os.replace.

    Single writer only: concurrent writers race on the final rename.
    """
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".respkit-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.remove(tmp)
        except OSError:
            pass
        raise
    logger.info("wrote %s (%d bytes)", path, len(text.encode("utf-8")))


def read_text(path) -> str:
    with open(path, "r", encoding="utf-8-sig", newline="") as f:
        return f.read()

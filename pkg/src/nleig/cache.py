"""Atomic file writes and the append-only eigenvalue cache.

The cache is a JSON-lines file keyed by (model spec, n, tol); corrupt lines
are skipped with a warning, later entries win, and appends go through the
OS append mode so a crash can at worst truncate the final line.
"""

import json
import os
import tempfile
import warnings

__all__ = ["atomic_write_text", "EigenCache"]


def atomic_write_text(path, text):
    """Write text to path via a temp file + rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-nleig-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


class EigenCache:
    """Append-only JSONL store of eigenvalue results."""

    def __init__(self, path):
        self.path = os.fspath(path)

    @staticmethod
    def key(model_spec, n, tol):
        return f"{model_spec}|{n}|{tol:.17g}"

    def load(self):
        entries = {}
        if not os.path.exists(self.path):
            return entries
        with open(self.path, "r") as fh:
            for i, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    entries[self.key(rec["model"], rec["n"], rec["tol"])] = rec
                except (ValueError, KeyError):
                    warnings.warn(f"{self.path}:{i}: skipping corrupt cache "
                                  "line", RuntimeWarning)
        return entries

    def get(self, model_spec, n, tol):
        return self.load().get(self.key(model_spec, n, tol))

    def put(self, rec):
        d = os.path.dirname(os.path.abspath(self.path))
        if d:
            os.makedirs(d, exist_ok=True)
        with open(self.path, "a") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

"""Content-addressed on-disk cache of bracket tables.

Entries live at <dir>/brackets/<sha256 of the key>.json.  A loaded entry is only
trusted after the Jacobi identity and weight homogeneity are re-checked.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from .cells import compute_bracket_table
from .exactalg import BracketTable, jacobi_check

log = logging.getLogger(__name__)

ENV_VAR = "BRUHAT_FLOWS_CACHE"


def cache_dir(cli_value=None):
    """The environment variable wins over the command-line value."""
    d = os.environ.get(ENV_VAR) or cli_value
    return Path(d) if d else None


def cache_key(spec, method, rep_tag="bundled"):
    return dict(spec.key(), method=method, rep=rep_tag)


def entry_path(root, key):
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()
    return Path(root) / "brackets" / f"{digest}.json"


def dumps(table):
    return json.dumps(table.to_json(), indent=2) + "\n"


def store(root, key, table):
    path = entry_path(root, key)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(dumps(table))
    os.chmod(tmp, 0o644)
    os.replace(tmp, path)
    return path


def validate(table):
    ok, triple = jacobi_check(table)
    if not ok:
        return f"Jacobi identity fails on {triple}"
    if table.weights is not None and table.homogeneity_violations():
        return "entries are not weight homogeneous"
    return None


def load(root, key):
    """The cached table, or None when missing or rejected."""
    path = entry_path(root, key)
    if not path.exists():
        return None
    try:
        table = BracketTable.from_json(json.loads(path.read_text()))
    except (ValueError, KeyError, TypeError) as exc:
        log.warning("unreadable cache entry %s: %s", path, exc)
        return None
    problem = validate(table)
    if problem:
        log.warning("rejecting cache entry %s: %s", path, problem)
        return None
    return table


def cached_bracket_table(spec, method="interp", root=None, rep_tag="bundled"):
    """Returns (table, hit)."""
    if root is None:
        return compute_bracket_table(spec, method), False
    key = cache_key(spec, method, rep_tag)
    table = load(root, key)
    if table is not None:
        return table, True
    table = compute_bracket_table(spec, method)
    store(root, key, table)
    return table, False

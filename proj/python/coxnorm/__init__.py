"""Normalizers of parabolic subgroups of Coxeter groups."""

import json
import os
import tempfile

from ._core import (
    ConfigError,
    DiagramError,
    associate_classes,
    brink_free_rank,
    classify,
    example_names,
    isometries,
    node_names,
    oracle_partition,
    standard_diagram,
)
from ._core import _run

__all__ = [
    "ConfigError",
    "DiagramError",
    "RunError",
    "associate_classes",
    "brink_free_rank",
    "classify",
    "example_names",
    "isometries",
    "node_names",
    "normalizer",
    "oracle_partition",
    "run",
    "standard_diagram",
]


class RunError(RuntimeError):
    def __init__(self, status, message):
        super().__init__(message)
        self.status = status


def run(command, **options):
    """Run a command-line subcommand in process and return the parsed JSON report."""
    status, out, err = _run(command, format="json", **options)
    if status:
        raise RunError(status, err)
    return json.loads(out)


def normalizer(diagram=None, j=None, **options):
    """Build Q4 for a diagram given as text (or pi='leech') and J as node names or a type."""
    if diagram is None:
        return run("normalizer", j=_join(j), **options)
    with tempfile.NamedTemporaryFile("w", suffix=".cox", delete=False) as f:
        f.write(diagram)
        path = f.name
    try:
        return run("normalizer", pi=path, j=_join(j), **options)
    finally:
        os.unlink(path)


def _join(j):
    if j is None:
        return ""
    return j if isinstance(j, str) else ",".join(j)

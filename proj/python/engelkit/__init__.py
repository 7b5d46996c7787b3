"""Exact checks for generalized Engel structures and their Moser stability flows."""

import json

from . import _core
from ._core import (
    EngelError,
    HypothesisViolation,
    ParseError,
    bracket,
    exterior_derivative,
    growth_vector,
    principal_angles,
)

__all__ = [
    "EngelError",
    "HypothesisViolation",
    "ParseError",
    "bracket",
    "check_engel",
    "check_pfaffian",
    "exterior_derivative",
    "growth_vector",
    "principal_angles",
    "run",
]

subcommands = list(_core.subcommands)
families = list(_core.families)


def run(name, document="", **options):
    """Run a subcommand in process.

    Returns ``(exit_code, report, error)``; ``report`` is a dict for JSON
    output and the raw text otherwise. Exit code 0 is success, 1 an input
    error and 2 a hypothesis violation or a false verdict.
    """
    if isinstance(document, dict):
        document = json.dumps(document)
    fmt = options.pop("format", "json")
    code, output, error = _core.run(name, document, format=fmt, **options)
    report = json.loads(output) if fmt == "json" and output else output
    return code, report, error


def check_engel(chart, fields, samples=25, seed=1):
    return json.loads(_core.check_engel(list(chart), list(fields), samples, seed))


def check_pfaffian(chart, theta, omegas, samples=25, seed=1):
    return json.loads(_core.check_pfaffian(list(chart), theta, list(omegas), samples, seed))

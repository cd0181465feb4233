"""Python access to the ale_lab checks, obstruction pipeline and far-field tables."""

import json

from ._core import (
    AleError,
    ConfigError,
    FirstObstructionNonzero,
    SchemaError,
    SymmetryError,
    asymptotics,
    constants,
    metric,
    potential,
    suite_names,
    vol_sigma,
)
from . import _core

__all__ = [
    "AleError",
    "ConfigError",
    "FirstObstructionNonzero",
    "SchemaError",
    "SymmetryError",
    "asymptotics",
    "constants",
    "metric",
    "obstruct",
    "potential",
    "suite_names",
    "verify",
    "vol_sigma",
]


def verify(suite="all", k=1, lambda_=1.0, tolerance=None):
    """Run a verification suite and return the report as a dict."""
    return json.loads(_core.verify_json(suite, k, lambda_, tolerance or {}))


def obstruct(document):
    """Evaluate an obstruction input document (dict or JSON text)."""
    text = document if isinstance(document, str) else json.dumps(document)
    return json.loads(_core.obstruct_json(text))

"""Separation and combination of duty checks for RBAC policies.

The report functions return parsed JSON. Malformed input raises ParseError
(a ValueError) whose message holds every diagnostic.
"""

import json

from . import _core
from ._core import DEFAULT_MAX_ENTITIES, ParseError

__all__ = ["DEFAULT_MAX_ENTITIES", "ParseError", "canonical", "check", "explain", "trace"]


def check(policy, name="policy", max_entities=DEFAULT_MAX_ENTITIES):
    """Evaluate every constraint; returns the report as a dict."""
    return json.loads(_core.check(policy, name=name, format="json", max_entities=max_entities))


def trace(policy, trace_text, mode="enforce", name="policy", max_entities=DEFAULT_MAX_ENTITIES):
    """Replay transactions in 'enforce' or 'audit' mode; returns the report as a dict."""
    return json.loads(
        _core.trace(policy, trace_text, mode=mode, name=name, format="json", max_entities=max_entities)
    )


def explain(policy, constraint_id, verify=False, name="policy", max_entities=DEFAULT_MAX_ENTITIES):
    """Text account of one constraint. Unknown ids raise KeyError."""
    return _core.explain(policy, constraint_id, verify=verify, name=name, max_entities=max_entities)


def canonical(policy, name="policy"):
    """The policy rewritten in canonical form."""
    return _core.canonical(policy, name=name)

"""Intent-specification catalog loading."""

from __future__ import annotations

import json
from pathlib import Path

from caif.contracts.model import Expectation, IntentSpecification, PolicyMechanism


def load_catalog(path: str | Path) -> dict[str, IntentSpecification]:
    """Load a JSON array of IntentSpecification objects, keyed by id."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"catalog {path}: expected a non-empty JSON array")
    catalog: dict[str, IntentSpecification] = {}
    for i, entry in enumerate(raw):
        try:
            spec = IntentSpecification(
                id=entry["id"],
                allowed_expectations=frozenset(
                    Expectation(e) for e in entry["allowed_expectations"]
                ),
                allowed_targets=tuple(entry["allowed_targets"]),
                pct_bounds=(float(entry["pct_bounds"][0]), float(entry["pct_bounds"][1])),
                allowed_mechanisms=frozenset(
                    PolicyMechanism(m) for m in entry["allowed_mechanisms"]
                ),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ValueError(f"catalog {path}: entry {i} invalid: {exc}") from exc
        if spec.id in catalog:
            raise ValueError(f"catalog {path}: duplicate specification id {spec.id!r}")
        catalog[spec.id] = spec
    return catalog

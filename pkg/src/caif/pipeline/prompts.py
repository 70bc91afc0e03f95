"""Prompt template loading and rendering.

Templates are editable text assets with ``{{variable}}`` placeholders,
loaded from a configurable directory (packaged defaults under
``caif/pipeline/templates``).
"""

from __future__ import annotations

import json
import re
from enum import Enum
from pathlib import Path
from typing import Any

DEFAULT_TEMPLATE_DIR = Path(__file__).parent / "templates"

_PLACEHOLDER = re.compile(r"\{\{(\w+)\}\}")


class PromptKind(str, Enum):
    PROFILING = "Profiling"
    EVALUATION = "Evaluation"
    REFINEMENT = "Refinement"


_TEMPLATE_FILES = {
    PromptKind.PROFILING: "profiling.txt",
    PromptKind.EVALUATION: "evaluation.txt",
    PromptKind.REFINEMENT: "refinement.txt",
}


class MissingTemplateVariable(KeyError):
    pass


def format_conversation(turns: list[tuple[str, str]]) -> str:
    """Render turns as indexed ``[i] Speaker: text`` lines."""
    return "\n".join(f"[{i}] {speaker}: {text}" for i, (speaker, text) in enumerate(turns))


def render_template(template: str, context: dict[str, Any]) -> str:
    def substitute(match: re.Match[str]) -> str:
        name = match.group(1)
        if name not in context:
            raise MissingTemplateVariable(name)
        value = context[name]
        if isinstance(value, (dict, list)):
            return json.dumps(value, indent=2)
        return str(value)

    return _PLACEHOLDER.sub(substitute, template)


def render_prompt(
    kind: PromptKind,
    context: dict[str, Any],
    template_dir: str | Path | None = None,
) -> str:
    """Render the on-disk template for the given prompt kind."""
    directory = Path(template_dir) if template_dir else DEFAULT_TEMPLATE_DIR
    template = (directory / _TEMPLATE_FILES[kind]).read_text(encoding="utf-8")
    return render_template(template, context)

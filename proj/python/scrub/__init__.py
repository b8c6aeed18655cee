"""Python bindings for the scrub curation pipeline."""

from ._scrub import (
    __version__,
    funnel,
    hash12,
    mask_for,
    repo_only_name,
    run_cli,
    safe_name,
    scan,
    summarize,
)

__all__ = [
    "__version__",
    "funnel",
    "hash12",
    "mask_for",
    "repo_only_name",
    "run_cli",
    "safe_name",
    "scan",
    "summarize",
]

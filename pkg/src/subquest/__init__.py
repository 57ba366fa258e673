"""subquest: text-world engine, sub-goal distillation pipeline, hierarchical
agent runtime, and evaluation harness."""

from importlib import resources

__version__ = "0.1.0"


def bundled_suite_path() -> str:
    """Filesystem path of the bundled desk-scale task suite."""
    return str(resources.files("subquest").joinpath("data/desk_suite.json"))

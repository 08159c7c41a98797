"""Generate every proof of a high-school geometry problem as one hypergraph."""

from importlib import resources

from .engine import EngineConfig, Inference, KnowledgeBase, SaturationResult, infer_using, register_value, saturate, values_equal
from .geometry import Angle, Circle, Line, Quad, Segment, Statement, Triangle, Value, angle_names, build_statement, line_names
from .graph import HpdicGraph, construct_graph, detect_cycles, enumerate_proofs, export_dot, export_json, import_json, mark_useful
from .problem import Problem, parse_problem, serialize_problem, validate_problem
from .referential import PropertyRule, Referential, builtin_referential, parse_rules

__all__ = [
    "Angle", "Circle", "Line", "Quad", "Segment", "Statement", "Triangle", "Value",
    "angle_names", "build_statement", "line_names",
    "Problem", "parse_problem", "serialize_problem", "validate_problem",
    "PropertyRule", "Referential", "builtin_referential", "parse_rules",
    "EngineConfig", "Inference", "KnowledgeBase", "SaturationResult",
    "infer_using", "register_value", "saturate", "values_equal",
    "HpdicGraph", "construct_graph", "detect_cycles", "enumerate_proofs",
    "export_dot", "export_json", "import_json", "mark_useful",
    "example_names", "example_text", "load_example",
]


def _problems():
    return resources.files("hpdic.data").joinpath("problems")


def example_names() -> list[str]:
    return sorted(p.name[: -len(".problem")] for p in _problems().iterdir() if p.name.endswith(".problem"))


def example_text(name: str) -> str:
    return _problems().joinpath(f"{name}.problem").read_text(encoding="utf-8")


def load_example(name: str) -> Problem:
    """Parse one of the bundled problems, e.g. ``load_example("rectangle")``."""
    return parse_problem(example_text(name))

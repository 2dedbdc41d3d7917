"""Model files: ``key = value`` settings plus ``theta<i> : ...`` operator lines.

Example::

    name = quintic
    kappa = 5
    theta4 : 1, -3125
    theta3 : 0, -6250
    ...
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import ParseError, SemanticError
from .picard_fuchs import ThetaOperator, operator_from_lines, parse_operator_line
from .series import parse_rational

DEFAULT_TRUNCATION = 20
DEFAULT_MAX_DEGREE = 10
PRESETS = ("quintic",)

_KEY_LINE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


@dataclass(frozen=True)
class ModelConfig:
    name: str
    kappa: Fraction
    operator: ThetaOperator
    truncation: int = DEFAULT_TRUNCATION
    max_degree: int = DEFAULT_MAX_DEGREE
    q_rescale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kappa == 0:
            raise SemanticError("kappa must be nonzero")
        if self.q_rescale == 0:
            raise SemanticError("q_rescale must be nonzero")
        if self.max_degree < 1:
            raise SemanticError("max_degree must be at least 1")
        if self.truncation < self.max_degree + 2:
            raise SemanticError(
                f"truncation {self.truncation} is too small for max_degree {self.max_degree} "
                f"(need at least {self.max_degree + 2})"
            )


def _int_value(text: str, key: str, lineno: int, col: int) -> int:
    if not re.fullmatch(r"\d+", text):
        raise ParseError(f"{key} must be a non-negative integer, got {text!r}", lineno, col)
    return int(text)


def _rational_value(text: str, key: str, lineno: int, col: int) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError:
        raise ParseError(f"{key} must be a rational literal, got {text!r}", lineno, col) from None


def parse_model(
    text: str,
    *,
    default_truncation: int = DEFAULT_TRUNCATION,
    truncation: int | None = None,
    max_degree: int | None = None,
) -> ModelConfig:
    """Parse a model file.

    ``truncation`` and ``max_degree`` override the file.  When neither the
    file nor the caller fixes the truncation, it is
    ``max(default_truncation, max_degree + 2)``.
    """
    settings: dict[str, object] = {}
    polys = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        indent = len(body) - len(body.lstrip())
        if stripped.startswith("theta"):
            power, coeffs = parse_operator_line(stripped, lineno, indent)
            if power in polys:
                raise ParseError(f"duplicate theta{power} line", lineno, indent + 1)
            polys[power] = coeffs
            continue
        m = _KEY_LINE.match(stripped)
        if not m:
            raise ParseError(f"expected 'key = value' or 'theta<i> : ...', got {stripped!r}", lineno, indent + 1)
        key, value = m.group(1), m.group(2).strip()
        col = indent + m.start(2) + 1
        if key in settings:
            raise ParseError(f"duplicate key {key!r}", lineno, indent + 1)
        if key == "name":
            settings[key] = value
        elif key in ("kappa", "q_rescale"):
            settings[key] = _rational_value(value, key, lineno, col)
        elif key in ("truncation", "max_degree"):
            settings[key] = _int_value(value, key, lineno, col)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, indent + 1)
    if "kappa" not in settings:
        raise SemanticError("model file must set kappa")
    try:
        op = operator_from_lines(polys)
    except ParseError as exc:
        raise SemanticError(str(exc)) from None

    degree = max_degree if max_degree is not None else settings.get("max_degree", DEFAULT_MAX_DEGREE)
    if truncation is None:
        truncation = settings.get("truncation")
    if truncation is None:
        truncation = max(default_truncation, degree + 2)
    return ModelConfig(
        name=settings.get("name", "model"),
        kappa=settings["kappa"],
        operator=op,
        truncation=truncation,
        max_degree=degree,
        q_rescale=settings.get("q_rescale", Fraction(1)),
    )


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise KeyError(name)
    return resources.files("mirror_count.data").joinpath(f"{name}.model").read_text()


def monodromy_table_text() -> str:
    return resources.files("mirror_count.data").joinpath("one_parameter.txt").read_text()

"""
Penalty specification text: ``family(name=value,...)``.

Examples: ``weibull(k=0.5,sigma=1)``, ``exp(sigma=1)``, ``scad(lam=1,gamma=3.7)``,
``l0``. Family names accept the classical method names as aliases; some
aliases fix parameters (``tl1`` is the generalized beta prime with
p = alpha = beta = 1).
"""

import re
from typing import Dict, List, Optional, Tuple

from ..errors import DomainError, PenaltySpecError
from .distributions import DistributionFactory, Family
from .model import PenaltyModel

CANONICAL_NAMES: Dict[Family, str] = {
    Family.DIRAC_DELTA: "dirac",
    Family.UNIFORM: "uniform",
    Family.SCAD_LINEAR: "scad",
    Family.MCP_LINEAR: "mcp",
    Family.U_QUADRATIC: "uquadratic",
    Family.EXPONENTIAL: "exp",
    Family.RAYLEIGH: "rayleigh",
    Family.WEIBULL: "weibull",
    Family.CHI_SQUARED: "chi2",
    Family.GENERALIZED_GAMMA: "gengamma",
    Family.GENERALIZED_BETA_PRIME: "gbp",
    Family.FOLDED_NORMAL: "foldnorm",
    Family.FOLDED_STUDENT_T: "foldt",
    Family.FOLDED_CAUCHY: "foldcauchy",
}

# alias -> (family, preset parameters)
ALIASES: Dict[str, Tuple[Family, Dict[str, float]]] = {
    "l0": (Family.DIRAC_DELTA, {}),
    "capped_l1": (Family.UNIFORM, {}),
    "top": (Family.U_QUADRATIC, {}),
    "exponential": (Family.EXPONENTIAL, {}),
    "etp": (Family.EXPONENTIAL, {}),
    "folded_laplace": (Family.EXPONENTIAL, {}),
    "wbp": (Family.WEIBULL, {}),
    "chisquared": (Family.CHI_SQUARED, {}),
    "gerf": (Family.GENERALIZED_GAMMA, {"d": 1.0}),
    "tl1": (Family.GENERALIZED_BETA_PRIME, {"p": 1.0, "alpha": 1.0, "beta": 1.0}),
    "erf": (Family.FOLDED_NORMAL, {}),
    "arctan": (Family.FOLDED_CAUCHY, {}),
}
ALIASES.update({name: (family, {}) for family, name in CANONICAL_NAMES.items()})
ALIASES.update({family.value: (family, {}) for family in Family})

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


def resolve_family(name: str) -> Family:
    """Map a family name or alias (case-insensitive) to its Family member."""
    try:
        family, _ = ALIASES[name.strip().lower()]
    except KeyError:
        raise DomainError(f"unknown penalty family {name!r}; known: {', '.join(sorted(ALIASES))}")
    return family


class _Scanner:
    """Recursive-descent reader over one specification string."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, *expected: str, detail: Optional[str] = None, at: Optional[int] = None):
        raise PenaltySpecError(self.text, self.pos if at is None else at, expected, detail)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        self.skip_ws()
        if self.peek() != char:
            self.fail(repr(char))
        self.pos += 1

    def match(self, pattern: re.Pattern, label: str) -> Tuple[str, int]:
        self.skip_ws()
        found = pattern.match(self.text, self.pos)
        if not found:
            self.fail(label)
        start = self.pos
        self.pos = found.end()
        return found.group(0), start

    def arguments(self) -> List[Tuple[str, float, int]]:
        args: List[Tuple[str, float, int]] = []
        self.skip_ws()
        if self.peek() == ")":
            self.pos += 1
            return args
        while True:
            name, start = self.match(_NAME, "parameter name")
            self.expect("=")
            value, _ = self.match(_NUMBER, "number")
            args.append((name.lower(), float(value), start))
            self.skip_ws()
            if self.peek() == ",":
                self.pos += 1
                continue
            if self.peek() == ")":
                self.pos += 1
                return args
            self.fail("','", "')'")

    def spec(self) -> PenaltyModel:
        name, name_pos = self.match(_NAME, "family name")
        key = name.lower()
        if key not in ALIASES:
            self.fail("family name", detail=f"unknown family {name!r}", at=name_pos)
        family, preset = ALIASES[key]

        args: List[Tuple[str, float, int]] = []
        bare = True
        self.skip_ws()
        if self.peek() == "(":
            self.pos += 1
            bare = False
            args = self.arguments()
        self.skip_ws()
        if self.pos != len(self.text):
            if bare:
                self.fail("'('", "end of input")
            self.fail("end of input")

        params = dict(preset)
        seen = set()
        known = {p.name for p in DistributionFactory.parameters(family)}
        for arg_name, value, arg_pos in args:
            if arg_name in seen:
                self.fail("parameter name", detail=f"duplicate parameter {arg_name!r}", at=arg_pos)
            if arg_name not in known:
                self.fail(*(sorted(known) or ["')'"]), detail=f"unknown parameter {arg_name!r}", at=arg_pos)
            seen.add(arg_name)
            params[arg_name] = value
        try:
            return PenaltyModel(family, params)
        except DomainError as exc:
            self.fail(detail=str(exc), at=name_pos)


def parse_penalty_spec(text: str) -> PenaltyModel:
    """
    Parse a penalty specification.

    Raises:
        PenaltySpecError: syntax error, unknown family/parameter or a parameter
            outside its range; carries the position and the expected tokens
    """
    if not isinstance(text, str):
        raise PenaltySpecError(repr(text), 0, ["string"])
    return _Scanner(text).spec()


def _format_value(value: float) -> str:
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


def format_penalty_spec(model: PenaltyModel) -> str:
    """Canonical text for a model; parses back to an equal model."""
    name = CANONICAL_NAMES[model.family]
    if not model.params:
        return name
    args = ",".join(f"{key}={_format_value(value)}" for key, value in model.params.items())
    return f"{name}({args})"

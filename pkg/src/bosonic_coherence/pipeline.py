"""A small text format for single-mode channel pipelines.

Example::

    att(theta=pi/2, m=2) | therm(t=5, N=5, gamma=0.1)

Grammar (whitespace is insignificant)::

    pipeline := stage ("|" stage)*
    stage    := ident "(" [arg ("," arg)*] ")"
    arg      := ident "=" expr
    expr     := term (("*" | "/") term)*
    term     := ["-"] (number | "pi")

Stages run left to right.
"""

from dataclasses import dataclass, fields
import math
import re

import numpy as np

from . import channels
from .errors import BosonicError, DomainError
from .gaussian import GaussianState


class PipelineError(BosonicError, ValueError):
    """Parse or validation error located at ``line``:``column`` (1-based)."""

    def __init__(self, message, line, column):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


def _nonneg(name, value):
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"{name} must be a finite number >= 0, got {value}")


def _finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")


@dataclass(frozen=True)
class Att:
    theta: float
    m: float = 0.0

    def __post_init__(self):
        _finite("theta", self.theta)
        _nonneg("m", self.m)

    def to_map(self):
        return channels.attenuation(self.theta, self.m)


@dataclass(frozen=True)
class Amp:
    r: float
    m: float = 0.0

    def __post_init__(self):
        _nonneg("r", self.r)
        _nonneg("m", self.m)

    def to_map(self):
        return channels.amplification(self.r, self.m)


@dataclass(frozen=True)
class Qla:
    theta: float

    def __post_init__(self):
        _finite("theta", self.theta)

    def to_map(self):
        return channels.quantum_limited_attenuator(self.theta)


@dataclass(frozen=True)
class Qlamp:
    r: float

    def __post_init__(self):
        _nonneg("r", self.r)

    def to_map(self):
        return channels.quantum_limited_amplifier(self.r)


@dataclass(frozen=True)
class Phase:
    theta: float
    r: float

    def __post_init__(self):
        _finite("theta", self.theta)
        _nonneg("r", self.r)

    def to_map(self):
        return channels.phase_insensitive(self.theta, self.r)


@dataclass(frozen=True)
class Therm:
    t: float
    N: float
    gamma: float

    def __post_init__(self):
        _nonneg("t", self.t)
        _nonneg("N", self.N)
        if not math.isfinite(self.gamma) or self.gamma <= 0:
            raise DomainError(f"gamma must be a finite number > 0, got {self.gamma}")

    def to_map(self):
        return channels.thermalization_map(self.t, self.gamma, self.N)


@dataclass(frozen=True)
class Displace:
    """Shift of the first moments; not a GCP map."""

    q: float
    p: float

    def __post_init__(self):
        _finite("q", self.q)
        _finite("p", self.p)

    def to_map(self):
        return None


STAGES = {
    "att": Att,
    "amp": Amp,
    "qla": Qla,
    "qlamp": Qlamp,
    "phase": Phase,
    "therm": Therm,
    "displace": Displace,
}
_NAMES = {cls: name for name, cls in STAGES.items()}


@dataclass(frozen=True)
class PipelineSpec:
    stages: tuple

    def __add__(self, other):
        return PipelineSpec(self.stages + other.stages)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[|(),=*/-])
    """,
    re.VERBOSE | re.ASCII,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text):
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise PipelineError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rindex("\n") + 1
        else:
            toks.append(_Tok(kind if kind != "punct" else m.group(), m.group(), line, col))
        pos = m.end()
    col = pos - line_start + 1
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return PipelineError(message, tok.line, tok.col)

    def expect(self, kind):
        tok = self.tok
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise self.error(f"expected {kind!r}, found {found!r}")
        self.i += 1
        return tok

    def pipeline(self):
        stages = [self.stage()]
        while self.tok.kind == "|":
            self.i += 1
            stages.append(self.stage())
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return PipelineSpec(tuple(stages))

    def stage(self):
        name_tok = self.expect("ident")
        cls = STAGES.get(name_tok.text)
        if cls is None:
            raise self.error(f"unknown stage {name_tok.text!r}", name_tok)
        allowed = {f.name for f in fields(cls)}
        self.expect("(")
        args = {}
        if self.tok.kind != ")":
            while True:
                arg_tok = self.expect("ident")
                key = arg_tok.text
                if key not in allowed:
                    raise self.error(f"unknown argument {key!r} for {name_tok.text}", arg_tok)
                if key in args:
                    raise self.error(f"duplicate argument {key!r}", arg_tok)
                self.expect("=")
                args[key] = self.expr()
                if self.tok.kind != ",":
                    break
                self.i += 1
        self.expect(")")
        try:
            return cls(**args)
        except TypeError:
            missing = [f.name for f in fields(cls) if f.name not in args]
            raise self.error(
                f"missing argument(s) {', '.join(missing)} for {name_tok.text}", name_tok
            ) from None
        except DomainError as exc:
            raise self.error(f"{name_tok.text}: {exc}", name_tok) from None

    def expr(self):
        value = self.term()
        while self.tok.kind in ("*", "/"):
            op = self.tok
            self.i += 1
            rhs = self.term()
            if op.kind == "*":
                value = value * rhs
            elif rhs == 0:
                raise self.error("division by zero", op)
            else:
                value = value / rhs
        if not math.isfinite(value):
            raise self.error("expression overflows")
        return value

    def term(self):
        sign = 1.0
        if self.tok.kind == "-":
            sign = -1.0
            self.i += 1
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return sign * float(tok.text)
        if tok.kind == "ident" and tok.text == "pi":
            self.i += 1
            return sign * math.pi
        raise self.error(f"expected a number or 'pi', found {tok.text or 'end of input'!r}")


def parse(text):
    """Parse pipeline text into a :class:`PipelineSpec`."""
    return _Parser(text).pipeline()


def parse_expr(text):
    """Evaluate a lone ``expr`` such as ``3*pi/2``."""
    parser = _Parser(text)
    value = parser.expr()
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected {parser.tok.text!r}")
    return value


def format_pipeline(spec):
    """Render ``spec`` as text that parses back to an equal spec."""
    parts = []
    for stage in spec.stages:
        args = ", ".join(f"{f.name}={getattr(stage, f.name)!r}" for f in fields(stage))
        parts.append(f"{_NAMES[type(stage)]}({args})")
    return " | ".join(parts)


def stage_maps(spec):
    """GCP map of each stage, ``None`` for displacements."""
    return [stage.to_map() for stage in spec.stages]


def evaluate(spec, state):
    """Run a single-mode ``state`` through the stages, left to right."""
    if state.n_modes != 1:
        raise DomainError("pipelines act on single-mode states")
    for stage in spec.stages:
        if isinstance(stage, Displace):
            state = GaussianState(state.d + np.array([stage.q, stage.p]), state.sigma)
        else:
            state = channels.apply(stage.to_map(), state)
    return state

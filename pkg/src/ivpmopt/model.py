"""Problem AST for uncertain LPs/QPs and the ``.ivpm`` text format.

Grammar (``#`` starts a line comment)::

    problem    := "problem" IDENT ";" {vardecl} "maximize" expr ";" {constraint} [config]
    vardecl    := "var" IDENT "in" "[" NUM "," (NUM | "inf") "]" ";"
    constraint := IDENT ":" expr "=" NUM ["penalty" "excess" NUM "shortage" NUM] ";"
    expr       := [sign] term {sign term}
    term       := coef ["*" mono] | mono
    mono       := IDENT ["^2"] | IDENT "*" IDENT
    coef       := NUM | "interval" "(" NUM "," NUM ")"
                | ("pos" | "prob") "(" NUM "," NUM "," NUM "," NUM ";" "n" "=" INT ")"
    config     := "reduce" "{" "features" "=" "[" IDENT {"," IDENT} "]" ";"
                  "weights" "=" ("equal" | "[" NUM {"," NUM} "]") ";"
                  "constant_bypass" "=" ("true" | "false") ";" "}"

A nonzero right-hand side is moved into the constraint as a constant term.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .interval import Interval
from .uncertainty import Coef, Shape

FEATURES = ("midpoint", "width", "left", "right")
KEYWORDS = frozenset(
    {"problem", "var", "in", "maximize", "penalty", "excess", "shortage", "reduce",
     "interval", "pos", "prob", "inf"}
)

Mono = tuple  # () constant term, (x,) linear, (x, y) quadratic


class ModelError(ValueError):
    """Lexical, syntax or semantic error in a model file.

    ``span`` is the ``(start, end)`` character offset of the offending token.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 span: Optional[tuple[int, int]] = None):
        self.message = message
        self.line = line
        self.column = column
        self.span = span
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Term:
    coef: Coef
    mono: Mono = ()

    def __post_init__(self):
        if len(self.mono) > 2:
            raise ValueError("monomials have degree at most 2")
        object.__setattr__(self, "mono", tuple(self.mono))

    @property
    def degree(self) -> int:
        return len(self.mono)


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[Term, ...]
    excess: float = 1.0
    shortage: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for label in ("excess", "shortage"):
            v = float(getattr(self, label))
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"constraint {self.name!r}: {label} cost must be positive, got {v}")
            object.__setattr__(self, label, v)
        if any(t.degree > 1 for t in self.terms):
            raise ValueError(f"constraint {self.name!r}: constraints must be linear")


@dataclass(frozen=True)
class ReductionConfig:
    """How each interval coefficient is collapsed to a real.

    ``features`` picks the priority vector (midpoint, width, left, right) and
    ``weights`` combines it: ``"equal"`` or an explicit tuple summing to one.
    With ``constant_bypass`` a coefficient written as a plain constant keeps
    its value.
    """

    features: tuple[str, ...] = ("midpoint", "width")
    weights: Union[str, tuple[float, ...]] = "equal"
    constant_bypass: bool = True

    def __post_init__(self):
        feats = tuple(self.features)
        if not feats:
            raise ValueError("at least one feature is required")
        if len(set(feats)) != len(feats):
            raise ValueError(f"duplicate features in {feats}")
        unknown = [f for f in feats if f not in FEATURES]
        if unknown:
            raise ValueError(f"unknown features {unknown}; choose from {FEATURES}")
        object.__setattr__(self, "features", feats)
        if isinstance(self.weights, str):
            if self.weights != "equal":
                raise ValueError(f"weights must be 'equal' or a list, got {self.weights!r}")
        else:
            w = tuple(float(x) for x in self.weights)
            if len(w) != len(feats):
                raise ValueError(f"{len(w)} weights given for {len(feats)} features")
            if abs(sum(w) - 1.0) > 1e-9:
                raise ValueError(f"weights must sum to 1, got {sum(w)}")
            object.__setattr__(self, "weights", w)
        object.__setattr__(self, "constant_bypass", bool(self.constant_bypass))

    def weight_vector(self) -> tuple[float, ...]:
        if self.weights == "equal":
            k = len(self.features)
            return (1.0 / k,) * k
        return self.weights


@dataclass(frozen=True)
class Variable:
    name: str
    lower: float = 0.0
    upper: float = math.inf

    def __post_init__(self):
        lo, hi = float(self.lower), float(self.upper)
        if not (0.0 <= lo <= hi) or math.isinf(lo) or math.isnan(hi):
            raise ValueError(f"variable {self.name!r}: bounds must satisfy 0 <= lower <= upper")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


@dataclass(frozen=True)
class UncertainProblem:
    name: str
    variables: tuple[Variable, ...]
    objective: tuple[Term, ...]
    constraints: tuple[Constraint, ...] = ()
    config: ReductionConfig = field(default_factory=ReductionConfig)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "objective", tuple(self.objective))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        declared = set(names)
        for t in self.all_terms():
            for v in t.mono:
                if v not in declared:
                    raise ValueError(f"undeclared variable {v!r}")
        cnames = [c.name for c in self.constraints]
        if len(set(cnames)) != len(cnames):
            raise ValueError("duplicate constraint names")

    def all_terms(self) -> Iterable[Term]:
        yield from self.objective
        for c in self.constraints:
            yield from c.terms

    @property
    def variable_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def is_quadratic(self) -> bool:
        return any(t.degree == 2 for t in self.objective)


# --------------------------------------------------------------------------
# lexer
# --------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[;\[\],()*^+\-=:{}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | punct | eof
    text: str
    start: int
    line: int
    column: int

    @property
    def end(self) -> int:
        return self.start + len(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ModelError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1,
                             (pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), pos, line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", pos, line, pos - line_start + 1))
    return tokens


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.declared: dict[str, Variable] = {}

    # helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None) -> ModelError:
        tok = tok or self.tok
        return ModelError(msg, tok.line, tok.column, (tok.start, tok.end))

    def at(self, text: str) -> bool:
        return self.tok.kind in ("punct", "ident") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self, what: str) -> Token:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error(f"expected {what} name, got {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def number(self) -> float:
        sign = 1.0
        if self.at("-") or self.at("+"):
            sign = -1.0 if self.tok.text == "-" else 1.0
            self.i += 1
        t = self.tok
        if t.kind != "num":
            raise self.error(f"expected a number, got {t.text or 'end of input'!r}")
        self.i += 1
        return sign * float(t.text)

    def integer(self) -> int:
        t = self.tok
        if t.kind != "num" or not t.text.isdigit():
            raise self.error(f"expected an integer, got {t.text or 'end of input'!r}")
        self.i += 1
        return int(t.text)

    # grammar
    def problem(self) -> UncertainProblem:
        self.expect("problem")
        name = self.ident("problem").text
        self.expect(";")
        variables = []
        while self.at("var"):
            variables.append(self.vardecl())
        self.expect("maximize")
        objective = self.expr(allow_quadratic=True)
        self.expect(";")
        constraints = []
        while self.tok.kind == "ident" and not self.at("reduce"):
            constraints.append(self.constraint([c.name for c in constraints]))
        config = ReductionConfig()
        if self.at("reduce"):
            config = self.config()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after end of problem")
        return UncertainProblem(name, variables, objective, constraints, config)

    def vardecl(self) -> Variable:
        self.expect("var")
        t = self.ident("variable")
        if t.text in self.declared:
            raise self.error(f"variable {t.text!r} declared twice", t)
        self.expect("in")
        self.expect("[")
        lo_tok = self.tok
        lo = self.number()
        self.expect(",")
        if self.at("inf"):
            self.i += 1
            hi = math.inf
        else:
            hi = self.number()
        self.expect("]")
        self.expect(";")
        if not (0.0 <= lo <= hi):
            raise self.error(f"bounds of {t.text!r} must satisfy 0 <= lower <= upper", lo_tok)
        var = Variable(t.text, lo, hi)
        self.declared[t.text] = var
        return var

    def constraint(self, seen: list[str]) -> Constraint:
        t = self.ident("constraint")
        if t.text in seen:
            raise self.error(f"constraint {t.text!r} defined twice", t)
        self.expect(":")
        terms = self.expr(allow_quadratic=False)
        self.expect("=")
        rhs = self.number()
        if rhs != 0.0:
            terms.append(Term(Coef.constant(abs(rhs), negated=rhs > 0)))
        excess = shortage = 1.0
        if self.at("penalty"):
            self.i += 1
            self.expect("excess")
            tok = self.tok
            excess = self.number()
            if not excess > 0:
                raise self.error("excess cost must be positive", tok)
            self.expect("shortage")
            tok = self.tok
            shortage = self.number()
            if not shortage > 0:
                raise self.error("shortage cost must be positive", tok)
        self.expect(";")
        return Constraint(t.text, terms, excess, shortage)

    def expr(self, allow_quadratic: bool) -> list[Term]:
        terms = []
        negated = False
        if self.at("+") or self.at("-"):
            negated = self.tok.text == "-"
            self.i += 1
        terms.append(self.term(negated, allow_quadratic))
        while self.at("+") or self.at("-"):
            negated = self.tok.text == "-"
            self.i += 1
            terms.append(self.term(negated, allow_quadratic))
        return terms

    def term(self, negated: bool, allow_quadratic: bool) -> Term:
        if self.tok.kind == "ident" and self.tok.text not in ("interval", "pos", "prob"):
            coef = Coef.constant(1.0, negated)
            return Term(coef, self.mono(allow_quadratic))
        coef = self.coef(negated)
        if self.at("*"):
            self.i += 1
            return Term(coef, self.mono(allow_quadratic))
        return Term(coef, ())

    def mono(self, allow_quadratic: bool) -> Mono:
        start = self.tok
        v = self.variable_ref()
        if self.at("^"):
            self.i += 1
            t = self.tok
            if t.kind != "num" or t.text != "2":
                raise self.error("only '^2' powers are supported", t)
            self.i += 1
            mono = (v, v)
        elif self.at("*"):
            self.i += 1
            mono = (v, self.variable_ref())
        else:
            mono = (v,)
        if len(mono) == 2 and not allow_quadratic:
            raise self.error("quadratic terms are only allowed in the objective", start)
        return mono

    def variable_ref(self) -> str:
        t = self.ident("variable")
        if t.text not in self.declared:
            raise self.error(f"undeclared variable {t.text!r}", t)
        return t.text

    def coef(self, negated: bool) -> Coef:
        t = self.tok
        if t.kind == "num" or self.at("-") or self.at("+"):
            return Coef.constant(self.number(), negated)
        if self.at("interval"):
            self.i += 1
            self.expect("(")
            lo = self.number()
            self.expect(",")
            hi = self.number()
            self.expect(")")
            if lo > hi:
                raise self.error(f"interval({lo:g}, {hi:g}) has lower end above upper end", t)
            return Coef.interval(lo, hi, negated)
        if self.at("pos") or self.at("prob"):
            kind = "possibilistic" if t.text == "pos" else "probabilistic"
            self.i += 1
            self.expect("(")
            vals = [self.number()]
            for _ in range(3):
                self.expect(",")
                vals.append(self.number())
            self.expect(";")
            self.expect("n")
            self.expect("=")
            ntok = self.tok
            n = self.integer()
            self.expect(")")
            if not (vals[0] <= vals[1] <= vals[2] <= vals[3]):
                raise self.error(
                    "shape must satisfy a <= b <= c <= d, got " + "/".join(f"{v:g}" for v in vals), t)
            if n < 1:
                raise self.error("polynomial degree must be >= 1", ntok)
            return Coef(kind, Shape(*vals, n), negated)
        raise self.error(f"expected a coefficient or variable, got {t.text or 'end of input'!r}")

    def config(self) -> ReductionConfig:
        self.expect("reduce")
        self.expect("{")
        self.expect("features")
        self.expect("=")
        self.expect("[")
        feats = []
        while True:
            t = self.tok
            if t.kind != "ident" or t.text not in FEATURES:
                raise self.error(f"unknown feature {t.text!r}; choose from {', '.join(FEATURES)}")
            if t.text in feats:
                raise self.error(f"duplicate feature {t.text!r}")
            feats.append(t.text)
            self.i += 1
            if not self.at(","):
                break
            self.i += 1
        self.expect("]")
        self.expect(";")
        self.expect("weights")
        self.expect("=")
        wtok = self.tok
        if self.at("equal"):
            self.i += 1
            weights: Union[str, tuple] = "equal"
        else:
            self.expect("[")
            ws = [self.number()]
            while self.at(","):
                self.i += 1
                ws.append(self.number())
            self.expect("]")
            weights = tuple(ws)
            if len(weights) != len(feats):
                raise self.error(f"{len(weights)} weights given for {len(feats)} features", wtok)
            if abs(sum(weights) - 1.0) > 1e-9:
                raise self.error("weights must sum to 1", wtok)
        self.expect(";")
        self.expect("constant_bypass")
        self.expect("=")
        if self.at("true") or self.at("false"):
            bypass = self.tok.text == "true"
            self.i += 1
        else:
            raise self.error("constant_bypass must be true or false")
        self.expect(";")
        self.expect("}")
        return ReductionConfig(tuple(feats), weights, bypass)


def parse_problem(text: str) -> UncertainProblem:
    """Parse ``.ivpm`` source into a validated :class:`UncertainProblem`.

    Raises :class:`ModelError` carrying line, column and character span.
    """
    return _Parser(text).problem()


def load_problem(path) -> UncertainProblem:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


# --------------------------------------------------------------------------
# serializer
# --------------------------------------------------------------------------

def _num(x: float) -> str:
    return repr(float(x))


def _coef_text(c: Coef) -> str:
    if c.kind == "constant":
        return _num(c.value)
    if c.kind == "interval":
        return f"interval({_num(c.value.lo)}, {_num(c.value.hi)})"
    s = c.value
    head = "pos" if c.kind == "possibilistic" else "prob"
    return f"{head}({_num(s.a)}, {_num(s.b)}, {_num(s.c)}, {_num(s.d)}; n={s.n})"


def _mono_text(mono: Mono) -> str:
    if len(mono) == 2 and mono[0] == mono[1]:
        return f"{mono[0]}^2"
    return "*".join(mono)


def _expr_text(terms: Iterable[Term]) -> str:
    parts = []
    for t in terms:
        sign = "-" if t.coef.negated else "+"
        body = _coef_text(t.coef)
        if t.mono:
            body += "*" + _mono_text(t.mono)
        parts.append(f"{sign} {body}")
    return " ".join(parts)


def serialize_problem(p: UncertainProblem) -> str:
    lines = [f"problem {p.name};"]
    for v in p.variables:
        hi = "inf" if math.isinf(v.upper) else _num(v.upper)
        lines.append(f"var {v.name} in [{_num(v.lower)}, {hi}];")
    lines.append(f"maximize {_expr_text(p.objective)};")
    for c in p.constraints:
        lines.append(
            f"{c.name}: {_expr_text(c.terms)} = 0 "
            f"penalty excess {_num(c.excess)} shortage {_num(c.shortage)};"
        )
    cfg = p.config
    weights = "equal" if cfg.weights == "equal" else "[" + ", ".join(_num(w) for w in cfg.weights) + "]"
    lines.append("reduce {")
    lines.append(f"  features = [{', '.join(cfg.features)}];")
    lines.append(f"  weights = {weights};")
    lines.append(f"  constant_bypass = {'true' if cfg.constant_bypass else 'false'};")
    lines.append("}")
    return "\n".join(lines) + "\n"

"""Mamdani fuzzy systems with an FML-XML wire format.

The engine covers exactly what the assessment pipeline needs: trapezoid
and triangular sets, MIN conjunction, MIN activation (clipping), MAX
aggregation and centroid defuzzification over a fixed 1001-point
discretization of the output domain.

The XML dialect is deliberately strict: the supported elements are
FuzzyController / KnowledgeBase / FuzzyVariable / FuzzyTerm with a
TrapezoidShape or TriangularShape child, and RuleBase / Rule /
Antecedent / Consequent / Clause. Anything else is a parse error, as is
any hedge other than "Normal" or any combination method other than
MIN conjunction with MAX disjunction on a mamdani rule base.
"""

from __future__ import annotations

import itertools
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .irt import ItemParams, icc_probability

OUTPUT_POINTS = 1001

INPUT_DIRECTION = "input"
OUTPUT_DIRECTION = "output"


class FmlError(ValueError):
    """Parse or validation failure, carrying the offending element path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class FuzzySet:
    """One linguistic term with a trapezoidal membership profile.

    A triangle is the canonical special case bc == ec, so parsing a
    TrapezoidShape whose two core points coincide and parsing the
    equivalent TriangularShape yield equal objects.
    """

    name: str
    bs: float
    bc: float
    ec: float
    es: float
    hedge: str = "Normal"

    def __post_init__(self):
        if not self.name:
            raise ValueError("fuzzy set needs a non-empty name")
        if self.hedge != "Normal":
            raise ValueError(f"unsupported hedge {self.hedge!r}")
        bs = _finite("bs", self.bs)
        bc = _finite("bc", self.bc)
        ec = _finite("ec", self.ec)
        es = _finite("es", self.es)
        if not bs <= bc <= ec <= es:
            raise ValueError(
                f"set {self.name!r} parameters must ascend, got "
                f"({bs}, {bc}, {ec}, {es})"
            )
        object.__setattr__(self, "bs", bs)
        object.__setattr__(self, "bc", bc)
        object.__setattr__(self, "ec", ec)
        object.__setattr__(self, "es", es)

    @property
    def is_triangular(self) -> bool:
        return self.bc == self.ec

    @property
    def points(self) -> tuple[float, float, float, float]:
        return (self.bs, self.bc, self.ec, self.es)


def trapezoid(name: str, bs: float, bc: float, ec: float, es: float) -> FuzzySet:
    return FuzzySet(name, bs, bc, ec, es)


def triangle(name: str, bs: float, center: float, es: float) -> FuzzySet:
    return FuzzySet(name, bs, center, center, es)


def membership(fset: FuzzySet, x):
    """Degree of membership of ``x`` in ``fset``.

    Zero-width ramps act as step edges: the core side wins, so a set
    with bs == bc has membership 1 exactly at that point. Accepts
    scalars or ndarrays.
    """
    scalar = np.ndim(x) == 0
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(arr)
    core = (arr >= fset.bc) & (arr <= fset.ec)
    out[core] = 1.0
    if fset.bc > fset.bs:
        rising = (arr >= fset.bs) & (arr < fset.bc)
        out[rising] = (arr[rising] - fset.bs) / (fset.bc - fset.bs)
    if fset.es > fset.ec:
        falling = (arr > fset.ec) & (arr <= fset.es)
        out[falling] = (fset.es - arr[falling]) / (fset.es - fset.ec)
    if scalar:
        return float(out[0])
    return out


@dataclass(frozen=True)
class FuzzyVariable:
    """Named linguistic variable over a closed real domain."""

    name: str
    domain_left: float
    domain_right: float
    direction: str
    sets: tuple[FuzzySet, ...]

    def __post_init__(self):
        if not self.name:
            raise ValueError("fuzzy variable needs a non-empty name")
        if self.direction not in (INPUT_DIRECTION, OUTPUT_DIRECTION):
            raise ValueError(f"direction must be input or output, got {self.direction!r}")
        left = _finite("domain_left", self.domain_left)
        right = _finite("domain_right", self.domain_right)
        if not left < right:
            raise ValueError(f"variable {self.name!r} has empty domain [{left}, {right}]")
        object.__setattr__(self, "domain_left", left)
        object.__setattr__(self, "domain_right", right)
        object.__setattr__(self, "sets", tuple(self.sets))
        if not self.sets:
            raise ValueError(f"variable {self.name!r} has no terms")
        names = [s.name for s in self.sets]
        if len(set(names)) != len(names):
            raise ValueError(f"variable {self.name!r} has duplicate term names")
        prev_bs = None
        for s in self.sets:
            if s.bs < left or s.es > right:
                raise ValueError(
                    f"term {s.name!r} of {self.name!r} exceeds domain [{left}, {right}]"
                )
            if prev_bs is not None and s.bs < prev_bs:
                raise ValueError(
                    f"terms of {self.name!r} must be ordered by ascending BS"
                )
            prev_bs = s.bs

    def term(self, name: str) -> FuzzySet:
        for s in self.sets:
            if s.name == name:
                return s
        raise KeyError(f"variable {self.name!r} has no term {name!r}")

    def term_index(self, name: str) -> int:
        for i, s in enumerate(self.sets):
            if s.name == name:
                return i
        raise KeyError(f"variable {self.name!r} has no term {name!r}")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.domain_left + self.domain_right)


@dataclass(frozen=True)
class FuzzyRule:
    """IF (conjunction of clauses) THEN (one consequent clause)."""

    name: str
    antecedent: tuple[tuple[str, str], ...]
    consequent: tuple[str, str]
    weight: float = 1.0
    connector: str = "and"
    operator: str = "MIN"

    def __post_init__(self):
        if not self.name:
            raise ValueError("rule needs a non-empty name")
        object.__setattr__(self, "antecedent", tuple(tuple(c) for c in self.antecedent))
        object.__setattr__(self, "consequent", tuple(self.consequent))
        if not self.antecedent:
            raise ValueError(f"rule {self.name!r} has an empty antecedent")
        if len(self.consequent) != 2:
            raise ValueError(f"rule {self.name!r} consequent must be (variable, term)")
        if self.connector != "and":
            raise ValueError(f"rule {self.name!r}: only the 'and' connector is supported")
        if self.operator != "MIN":
            raise ValueError(f"rule {self.name!r}: only the MIN operator is supported")
        weight = _finite("weight", self.weight)
        if not 0.0 <= weight <= 1.0:
            raise ValueError(f"rule {self.name!r} weight must lie in [0, 1]")
        object.__setattr__(self, "weight", weight)


@dataclass(frozen=True)
class FuzzySystem:
    """A knowledge base plus (optionally) its mamdani rule base."""

    variables: tuple[FuzzyVariable, ...]
    rules: tuple[FuzzyRule, ...] = ()
    name: str = ""
    ip: str = "localhost"
    rule_base_name: str = "RuleBase1"
    defuzzification: str = "centroid"

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "rules", tuple(self.rules))
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        outputs = [v for v in self.variables if v.direction == OUTPUT_DIRECTION]
        if len(outputs) != 1:
            raise ValueError(f"system needs exactly one output variable, found {len(outputs)}")
        if self.defuzzification != "centroid":
            raise ValueError("only centroid defuzzification is supported")
        by_name = {v.name: v for v in self.variables}
        rule_names = [r.name for r in self.rules]
        if len(set(rule_names)) != len(rule_names):
            raise ValueError("duplicate rule names")
        max_rules = 1
        for v in self.input_variables:
            max_rules *= len(v.sets)
        if len(self.rules) > max_rules:
            raise ValueError(
                f"rule count {len(self.rules)} exceeds the {max_rules} "
                "antecedent combinations"
            )
        for r in self.rules:
            for var_name, term_name in r.antecedent:
                var = by_name.get(var_name)
                if var is None:
                    raise ValueError(f"rule {r.name!r} references unknown variable {var_name!r}")
                if var.direction != INPUT_DIRECTION:
                    raise ValueError(f"rule {r.name!r} antecedent uses non-input {var_name!r}")
                if all(s.name != term_name for s in var.sets):
                    raise ValueError(
                        f"rule {r.name!r} clause on {var_name!r} references "
                        f"unknown term {term_name!r}"
                    )
            var_name, term_name = r.consequent
            var = by_name.get(var_name)
            if var is None:
                raise ValueError(f"rule {r.name!r} references unknown variable {var_name!r}")
            if var.direction != OUTPUT_DIRECTION:
                raise ValueError(f"rule {r.name!r} consequent must use the output variable")
            if all(s.name != term_name for s in var.sets):
                raise ValueError(
                    f"rule {r.name!r} consequent references unknown term {term_name!r}"
                )

    @property
    def input_variables(self) -> tuple[FuzzyVariable, ...]:
        return tuple(v for v in self.variables if v.direction == INPUT_DIRECTION)

    @property
    def output_variable(self) -> FuzzyVariable:
        for v in self.variables:
            if v.direction == OUTPUT_DIRECTION:
                return v
        raise ValueError("no output variable")

    def variable(self, name: str) -> FuzzyVariable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(f"no variable named {name!r}")

    def with_rules(self, rules: Sequence[FuzzyRule]) -> "FuzzySystem":
        return FuzzySystem(self.variables, tuple(rules), self.name, self.ip,
                           self.rule_base_name, self.defuzzification)


@dataclass(frozen=True)
class InferenceResult:
    """Crisp output plus whether any rule actually fired."""

    value: float
    fired: bool

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# Default assessment knowledge base


def default_assessment_kb() -> FuzzySystem:
    """Expert seed knowledge base for 3PL-driven response scoring.

    Four inputs (Discrimination, Difficulty, Guessing, Ability) and one
    output (CorrectResponsePossibility); 76 shape parameters in total.
    """
    discrimination = FuzzyVariable(
        "Discrimination", 0.0, 2.0, INPUT_DIRECTION, (
            trapezoid("Low", 0.0, 0.0, 0.65, 0.74),
            trapezoid("Medium", 0.67, 0.82, 1.11, 1.25),
            trapezoid("High", 1.17, 1.42, 2.0, 2.0),
        ))
    difficulty = FuzzyVariable(
        "Difficulty", -4.0, 4.0, INPUT_DIRECTION, (
            trapezoid("VeryEasy", -4.0, -4.0, -1.1, -0.6),
            trapezoid("Easy", -1.0, -0.65, 0.05, 0.4),
            trapezoid("Average", 0.05, 0.4, 0.95, 1.5),
            trapezoid("Hard", 0.95, 1.5, 4.0, 4.0),
        ))
    guessing = FuzzyVariable(
        "Guessing", 0.0, 1.0, INPUT_DIRECTION, (
            trapezoid("Low", 0.0, 0.0, 0.17, 0.19),
            trapezoid("Medium", 0.18, 0.21, 0.26, 0.28),
            trapezoid("High", 0.26, 0.33, 1.0, 1.0),
        ))
    ability = FuzzyVariable(
        "Ability", -4.0, 4.0, INPUT_DIRECTION, (
            trapezoid("BelowBasic", -4.0, -4.0, -1.1, -0.6),
            trapezoid("Basic", -1.0, -0.65, 0.05, 0.4),
            trapezoid("Proficient", 0.05, 0.4, 0.95, 1.5),
            trapezoid("Advanced", 0.95, 1.5, 4.0, 4.0),
        ))
    crp = FuzzyVariable(
        "CorrectResponsePossibility", 0.0, 1.0, OUTPUT_DIRECTION, (
            trapezoid("VeryLow", 0.0, 0.0, 0.23, 0.34),
            triangle("Low", 0.23, 0.34, 0.58),
            triangle("Average", 0.34, 0.58, 0.8),
            triangle("High", 0.58, 0.8, 0.97),
            trapezoid("VeryHigh", 0.8, 0.96, 1.0, 1.0),
        ))
    return FuzzySystem((discrimination, difficulty, guessing, ability, crp))


def build_rule_base(kb: FuzzySystem) -> FuzzySystem:
    """Generate one rule per antecedent-term combination.

    Each combination is anchored at the BC of its terms; the anchor
    (a, b, c, theta) is pushed through the 3PL curve and the consequent
    is the output term with the highest membership at that probability
    (earliest declared term wins ties).
    """
    inputs = kb.input_variables
    if [v.name for v in inputs] != ["Discrimination", "Difficulty", "Guessing", "Ability"]:
        raise ValueError(
            "rule generation expects the assessment inputs "
            "Discrimination, Difficulty, Guessing, Ability"
        )
    out = kb.output_variable
    rules = []
    combos = itertools.product(*[v.sets for v in inputs])
    for number, (disc, diff, guess, abil) in enumerate(combos, start=1):
        p = icc_probability(ItemParams(disc.bc, diff.bc, guess.bc), abil.bc)
        memberships = [membership(s, p) for s in out.sets]
        best = int(np.argmax(memberships))
        rules.append(FuzzyRule(
            name=f"Rule{number}",
            antecedent=(
                ("Discrimination", disc.name),
                ("Difficulty", diff.name),
                ("Guessing", guess.name),
                ("Ability", abil.name),
            ),
            consequent=(out.name, out.sets[best].name),
        ))
    return kb.with_rules(rules)


# ---------------------------------------------------------------------------
# Inference


def _validate_inputs(system: FuzzySystem, inputs: Mapping[str, float]) -> np.ndarray:
    names = [v.name for v in system.input_variables]
    missing = [n for n in names if n not in inputs]
    if missing:
        raise ValueError(f"missing input values for {missing}")
    extra = [k for k in inputs if k not in names]
    if extra:
        raise ValueError(f"unknown input variables {extra}")
    row = np.empty(len(names))
    for i, var in enumerate(system.input_variables):
        x = float(inputs[var.name])
        if not math.isfinite(x):
            raise ValueError(f"input {var.name!r} must be finite")
        if not var.domain_left <= x <= var.domain_right:
            raise ValueError(
                f"input {var.name!r}={x} outside domain "
                f"[{var.domain_left}, {var.domain_right}]"
            )
        row[i] = x
    return row


def infer(system: FuzzySystem, inputs: Mapping[str, float]) -> InferenceResult:
    """Run one mamdani inference; inputs keyed by variable name.

    When no rule fires the result is the output-domain midpoint with
    ``fired`` set to False.
    """
    row = _validate_inputs(system, inputs)
    values, fired = infer_batch(system, row[None, :])
    return InferenceResult(float(values[0]), bool(fired[0]))


def infer_batch(system: FuzzySystem, X: np.ndarray,
                chunk: int = 2000) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized inference over rows of ``X``.

    Columns follow the declared input-variable order. Returns crisp
    values and a fired flag per row. Used by the tuning hot path;
    agrees with :func:`infer` to floating-point rounding.
    """
    if not system.rules:
        raise ValueError("system has no rules; generate or parse a rule base first")
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(system.input_variables):
        raise ValueError("input array must be (rows, n_input_variables)")
    inputs = system.input_variables
    for j, var in enumerate(inputs):
        col = X[:, j]
        if not np.isfinite(col).all():
            raise ValueError(f"input {var.name!r} contains non-finite values")
        if (col < var.domain_left).any() or (col > var.domain_right).any():
            raise ValueError(f"input {var.name!r} outside domain")
    out = system.output_variable
    grid = np.linspace(out.domain_left, out.domain_right, OUTPUT_POINTS)
    clipped_terms = np.stack([membership(s, grid) for s in out.sets])
    var_index = {v.name: i for i, v in enumerate(inputs)}
    term_index = [{s.name: k for k, s in enumerate(v.sets)} for v in inputs]
    out_index = {s.name: k for k, s in enumerate(out.sets)}
    rule_clauses = [
        [(var_index[vn], term_index[var_index[vn]][tn]) for vn, tn in r.antecedent]
        for r in system.rules
    ]
    cons = np.array([out_index[r.consequent[1]] for r in system.rules])
    weights = np.array([r.weight for r in system.rules])

    n = X.shape[0]
    values = np.empty(n)
    fired = np.empty(n, dtype=bool)
    midpoint = out.midpoint
    n_terms = len(out.sets)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        block = X[lo:hi]
        memb = [
            np.stack([membership(s, block[:, j]) for s in var.sets], axis=1)
            for j, var in enumerate(inputs)
        ]
        strengths = np.empty((hi - lo, len(system.rules)))
        for r, clauses in enumerate(rule_clauses):
            s = memb[clauses[0][0]][:, clauses[0][1]]
            for vi, ti in clauses[1:]:
                s = np.minimum(s, memb[vi][:, ti])
            strengths[:, r] = s * weights[r]
        by_term = np.zeros((hi - lo, n_terms))
        for k in range(n_terms):
            cols = cons == k
            if cols.any():
                by_term[:, k] = strengths[:, cols].max(axis=1)
        agg = np.minimum(by_term[:, :, None], clipped_terms[None, :, :]).max(axis=1)
        den = agg.sum(axis=1)
        num = agg @ grid
        any_fired = strengths.max(axis=1) > 0.0
        ok = any_fired & (den > 0.0)
        values[lo:hi] = np.where(ok, num / np.where(den > 0.0, den, 1.0), midpoint)
        fired[lo:hi] = any_fired
    return values, fired


# ---------------------------------------------------------------------------
# FML-XML serialization


def _fmt(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(float(value))


def serialize_fml(system: FuzzySystem) -> str:
    """Emit the system as an FML-XML document.

    Numbers are written with full round-trip precision so that
    parse(serialize(system)) reproduces the system exactly.
    """
    root = ET.Element("FuzzyController", {"ip": system.ip, "name": system.name})
    kb = ET.SubElement(root, "KnowledgeBase")
    for var in system.variables:
        var_el = ET.SubElement(kb, "FuzzyVariable", {
            "domainleft": _fmt(var.domain_left),
            "domainright": _fmt(var.domain_right),
            "name": var.name,
            "scale": "",
            "type": var.direction,
        })
        for s in var.sets:
            term_el = ET.SubElement(var_el, "FuzzyTerm",
                                    {"name": s.name, "hedge": s.hedge})
            if s.is_triangular:
                ET.SubElement(term_el, "TriangularShape", {
                    "Param1": _fmt(s.bs), "Param2": _fmt(s.bc), "Param3": _fmt(s.es),
                })
            else:
                ET.SubElement(term_el, "TrapezoidShape", {
                    "Param1": _fmt(s.bs), "Param2": _fmt(s.bc),
                    "Param3": _fmt(s.ec), "Param4": _fmt(s.es),
                })
    rb = ET.SubElement(root, "RuleBase", {
        "activationMethod": "MIN",
        "andMethod": "MIN",
        "orMethod": "MAX",
        "name": system.rule_base_name,
        "type": "mamdani",
    })
    for rule in system.rules:
        rule_el = ET.SubElement(rb, "Rule", {
            "name": rule.name,
            "connector": rule.connector,
            "weight": _fmt(rule.weight),
            "operator": rule.operator,
        })
        ant = ET.SubElement(rule_el, "Antecedent")
        for var_name, term_name in rule.antecedent:
            clause = ET.SubElement(ant, "Clause")
            ET.SubElement(clause, "Variable").text = var_name
            ET.SubElement(clause, "Term").text = term_name
        cons = ET.SubElement(rule_el, "Consequent")
        clause = ET.SubElement(cons, "Clause")
        ET.SubElement(clause, "Variable").text = rule.consequent[0]
        ET.SubElement(clause, "Term").text = rule.consequent[1]
    ET.indent(root)
    return '<?xml version="1.0"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


# ---------------------------------------------------------------------------
# FML-XML parsing


def _attr(el: ET.Element, path: str, name: str, default: str | None = None) -> str:
    value = el.get(name, default)
    if value is None:
        raise FmlError(path, f"missing required attribute {name!r}")
    return value


def _float_attr(el: ET.Element, path: str, name: str) -> float:
    raw = _attr(el, path, name)
    try:
        value = float(raw)
    except ValueError:
        raise FmlError(path, f"attribute {name!r} is not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise FmlError(path, f"attribute {name!r} must be finite")
    return value


def _expect_attr(el: ET.Element, path: str, name: str, expected: str,
                 default: str | None = None):
    value = el.get(name, default)
    if value != expected:
        raise FmlError(path, f"attribute {name!r} must be {expected!r}, got {value!r}")


def _parse_term(el: ET.Element, path: str) -> FuzzySet:
    name = _attr(el, path, "name")
    path = f"{path}/FuzzyTerm[{name}]"
    hedge = el.get("hedge", "Normal")
    if hedge != "Normal":
        raise FmlError(path, f"unsupported hedge {hedge!r}")
    shapes = list(el)
    if len(shapes) != 1:
        raise FmlError(path, "term must contain exactly one shape element")
    shape = shapes[0]
    shape_path = f"{path}/{shape.tag}"
    if shape.tag == "TrapezoidShape":
        params = [_float_attr(shape, shape_path, f"Param{i}") for i in (1, 2, 3, 4)]
    elif shape.tag == "TriangularShape":
        p1, p2, p3 = (_float_attr(shape, shape_path, f"Param{i}") for i in (1, 2, 3))
        params = [p1, p2, p2, p3]
    else:
        raise FmlError(shape_path, f"unknown shape element {shape.tag!r}")
    try:
        return FuzzySet(name, *params, hedge=hedge)
    except ValueError as exc:
        raise FmlError(path, str(exc)) from None


def _parse_variable(el: ET.Element, path: str) -> FuzzyVariable:
    name = _attr(el, path, "name")
    path = f"{path}/FuzzyVariable[{name}]"
    left = _float_attr(el, path, "domainleft")
    right = _float_attr(el, path, "domainright")
    direction = _attr(el, path, "type")
    if direction not in (INPUT_DIRECTION, OUTPUT_DIRECTION):
        raise FmlError(path, f"type must be input or output, got {direction!r}")
    sets = []
    for child in el:
        if child.tag != "FuzzyTerm":
            raise FmlError(f"{path}/{child.tag}", f"unknown element {child.tag!r}")
        sets.append(_parse_term(child, path))
    try:
        return FuzzyVariable(name, left, right, direction, tuple(sets))
    except ValueError as exc:
        raise FmlError(path, str(exc)) from None


def _parse_clause(el: ET.Element, path: str) -> tuple[str, str]:
    var_name = term_name = None
    for child in el:
        if child.tag == "Variable":
            var_name = (child.text or "").strip()
        elif child.tag == "Term":
            term_name = (child.text or "").strip()
        else:
            raise FmlError(f"{path}/{child.tag}", f"unknown element {child.tag!r}")
    if not var_name or not term_name:
        raise FmlError(path, "clause needs Variable and Term children")
    return var_name, term_name


def _parse_rule(el: ET.Element, path: str) -> FuzzyRule:
    name = _attr(el, path, "name")
    path = f"{path}/Rule[{name}]"
    connector = el.get("connector", "and")
    operator = el.get("operator", "MIN")
    weight_raw = el.get("weight", "1")
    try:
        weight = float(weight_raw)
    except ValueError:
        raise FmlError(path, f"weight is not a number: {weight_raw!r}") from None
    antecedent: list[tuple[str, str]] = []
    consequent: tuple[str, str] | None = None
    for child in el:
        if child.tag == "Antecedent":
            for i, clause in enumerate(child):
                if clause.tag != "Clause":
                    raise FmlError(f"{path}/Antecedent/{clause.tag}",
                                   f"unknown element {clause.tag!r}")
                antecedent.append(_parse_clause(clause, f"{path}/Antecedent/Clause[{i + 1}]"))
        elif child.tag == "Consequent":
            clauses = list(child)
            if len(clauses) != 1 or clauses[0].tag != "Clause":
                raise FmlError(f"{path}/Consequent", "consequent needs exactly one Clause")
            consequent = _parse_clause(clauses[0], f"{path}/Consequent/Clause[1]")
        else:
            raise FmlError(f"{path}/{child.tag}", f"unknown element {child.tag!r}")
    if consequent is None:
        raise FmlError(path, "rule is missing its Consequent")
    try:
        return FuzzyRule(name, tuple(antecedent), consequent,
                         weight=weight, connector=connector, operator=operator)
    except ValueError as exc:
        raise FmlError(path, str(exc)) from None


def parse_fml(text: str) -> FuzzySystem:
    """Parse an FML-XML document into a FuzzySystem.

    Raises :class:`FmlError` with the offending element path on any
    departure from the supported dialect.
    """
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise FmlError("document", f"not well-formed XML: {exc}") from None
    if root.tag != "FuzzyController":
        raise FmlError(root.tag, "root element must be FuzzyController")
    path = "FuzzyController"
    name = root.get("name", "")
    ip = root.get("ip", "localhost")
    variables: list[FuzzyVariable] = []
    rules: list[FuzzyRule] = []
    rule_base_name = "RuleBase1"
    seen_kb = False
    for child in root:
        if child.tag == "KnowledgeBase":
            seen_kb = True
            kb_path = f"{path}/KnowledgeBase"
            for var_el in child:
                if var_el.tag != "FuzzyVariable":
                    raise FmlError(f"{kb_path}/{var_el.tag}",
                                   f"unknown element {var_el.tag!r}")
                variables.append(_parse_variable(var_el, kb_path))
        elif child.tag == "RuleBase":
            rb_path = f"{path}/RuleBase"
            _expect_attr(child, rb_path, "activationMethod", "MIN", default="MIN")
            _expect_attr(child, rb_path, "andMethod", "MIN", default="MIN")
            _expect_attr(child, rb_path, "orMethod", "MAX", default="MAX")
            _expect_attr(child, rb_path, "type", "mamdani", default="mamdani")
            rule_base_name = child.get("name", "RuleBase1")
            for rule_el in child:
                if rule_el.tag != "Rule":
                    raise FmlError(f"{rb_path}/{rule_el.tag}",
                                   f"unknown element {rule_el.tag!r}")
                rules.append(_parse_rule(rule_el, rb_path))
        else:
            raise FmlError(f"{path}/{child.tag}", f"unknown element {child.tag!r}")
    if not seen_kb:
        raise FmlError(path, "missing KnowledgeBase element")
    try:
        return FuzzySystem(tuple(variables), tuple(rules), name=name, ip=ip,
                           rule_base_name=rule_base_name)
    except ValueError as exc:
        raise FmlError(path, str(exc)) from None

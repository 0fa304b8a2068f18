from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np
import scipy.sparse as sp

LE, GE, EQ = "<=", ">=", "="
MIN, MAX = "min", "max"

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
BOUND_EXCEEDED = "bound-exceeded"
UNBOUNDED = "unbounded"

FEAS_TOL = 1e-6
INT_TOL = 1e-6


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    lb: float
    ub: float
    integer: bool = True


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[int, float]
    sense: str
    rhs: float
    name: str = ""


@dataclass
class SolveStats:
    nodes: int = 0
    branches: int = 0
    lp_iterations: int = 0
    wall_time: float = 0.0


@dataclass
class SolveResult:
    status: str
    values: dict[int, float | int | Fraction] = field(default_factory=dict)
    objective_value: Optional[float | Fraction] = None
    stats: SolveStats = field(default_factory=SolveStats)
    best_bound: Optional[float] = None
    exact_check: Optional[bool] = None

    @property
    def gap(self) -> Optional[float]:
        if self.objective_value is None or self.best_bound is None:
            return None
        obj = float(self.objective_value)
        return abs(obj - self.best_bound) / max(1.0, abs(obj))


class MILPModel:
    """A linear program over finitely bounded, optionally integral variables.

    Constraint and objective coefficients are keyed by variable index, the
    value returned by :meth:`add_var`.
    """

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self.sense = MIN
        self.objective: dict[int, float] = {}
        self._names: dict[str, int] = {}
        self._arrays = None

    def add_var(self, name: str, lb: float, ub: float, integer: bool = True) -> int:
        if not (math.isfinite(lb) and math.isfinite(ub)):
            raise ModelError(f"variable {name!r} needs finite bounds")
        if lb > ub:
            raise ModelError(f"variable {name!r} has lb > ub")
        if name in self._names:
            raise ModelError(f"duplicate variable name {name!r}")
        self._names[name] = len(self.variables)
        self.variables.append(Variable(name, lb, ub, integer))
        self._arrays = None
        return len(self.variables) - 1

    def add_constraint(self, coeffs: Mapping[int, float], sense: str, rhs: float,
                       name: str = "") -> None:
        if sense not in (LE, GE, EQ):
            raise ModelError(f"unknown relation {sense!r}")
        n = len(self.variables)
        clean = {}
        for j, a in coeffs.items():
            if not 0 <= j < n:
                raise ModelError(f"constraint {name!r} references undeclared variable {j}")
            if a != 0:
                clean[j] = clean.get(j, 0) + a
        self.constraints.append(Constraint(clean, sense, rhs, name))
        self._arrays = None

    def set_objective(self, sense: str, coeffs: Mapping[int, float]) -> None:
        if sense not in (MIN, MAX):
            raise ModelError(f"unknown objective sense {sense!r}")
        n = len(self.variables)
        for j in coeffs:
            if not 0 <= j < n:
                raise ModelError(f"objective references undeclared variable {j}")
        self.sense = sense
        self.objective = {j: a for j, a in coeffs.items() if a != 0}
        self._arrays = None

    def index(self, name: str) -> int:
        return self._names[name]

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def arrays(self):
        """Dense-free array form, cached until the model changes.

        Returns ``(c, A, senses, b, lb, ub, integer)`` where ``c`` is always a
        minimisation objective and ``A`` is CSR; constraints with no
        coefficients are dropped (they are checked separately).
        """
        if self._arrays is not None:
            return self._arrays
        n = self.num_vars
        c = np.zeros(n)
        for j, a in self.objective.items():
            c[j] = a
        if self.sense == MAX:
            c = -c
        rows, cols, vals, senses, b = [], [], [], [], []
        r = 0
        for con in self.constraints:
            if not con.coeffs:
                continue
            for j, a in con.coeffs.items():
                rows.append(r)
                cols.append(j)
                vals.append(float(a))
            senses.append(con.sense)
            b.append(float(con.rhs))
            r += 1
        A = sp.csr_matrix((vals, (rows, cols)), shape=(r, n))
        lb = np.array([v.lb for v in self.variables], dtype=float)
        ub = np.array([v.ub for v in self.variables], dtype=float)
        integer = np.array([v.integer for v in self.variables], dtype=bool)
        self._arrays = (c, A, np.array(senses, dtype=object), np.array(b), lb, ub, integer)
        return self._arrays

    def empty_constraints_ok(self) -> bool:
        """Whether every coefficient-free constraint holds (0 rel rhs)."""
        for con in self.constraints:
            if con.coeffs:
                continue
            if not _holds(0, con.sense, con.rhs, 0):
                return False
        return True

    def objective_of(self, values: Mapping[int, float | Fraction]):
        return sum(a * values[j] for j, a in self.objective.items()) if self.objective else 0

    def violations(self, values: Mapping[int, float | Fraction], tol: float = FEAS_TOL,
                   exact: bool = False) -> list[str]:
        """Constraint, bound and integrality failures of an assignment.

        With ``exact`` every value and coefficient is lifted to
        :class:`Fraction` and compared without tolerance.
        """
        out = []
        conv = _exact if exact else float
        t = 0 if exact else tol
        for j, var in enumerate(self.variables):
            x = conv(values[j])
            if x < conv(var.lb) - t or x > conv(var.ub) + t:
                out.append(f"bound {var.name}")
            if var.integer and abs(x - round(x)) > t:
                out.append(f"integrality {var.name}")
        for i, con in enumerate(self.constraints):
            lhs = sum(conv(a) * conv(values[j]) for j, a in con.coeffs.items())
            if not _holds(lhs, con.sense, conv(con.rhs), t):
                out.append(f"constraint {con.name or i}")
        return out

    def to_lp_format(self) -> str:
        """CPLEX-LP text for cross-checking against third-party solvers."""
        names = [_lp_name(v.name) for v in self.variables]

        def expr(coeffs):
            if not coeffs:
                return "0 " + names[0] if names else "0"
            parts = []
            for j, a in coeffs.items():
                sign = "-" if a < 0 else "+"
                parts.append(f"{sign} {_fmt(abs(a))} {names[j]}")
            s = " ".join(parts)
            return s[2:] if s.startswith("+ ") else s

        out = ["\\ " + self.name, "Minimize" if self.sense == MIN else "Maximize",
               " obj: " + expr(self.objective), "Subject To"]
        for i, con in enumerate(self.constraints):
            if not con.coeffs:
                continue
            op = {LE: "<=", GE: ">=", EQ: "="}[con.sense]
            out.append(f" c{i}: {expr(con.coeffs)} {op} {_fmt(con.rhs)}")
        out.append("Bounds")
        for v, nm in zip(self.variables, names):
            out.append(f" {_fmt(v.lb)} <= {nm} <= {_fmt(v.ub)}")
        ints = [nm for v, nm in zip(self.variables, names) if v.integer]
        if ints:
            out.append("General")
            out.extend(" " + nm for nm in ints)
        out.append("End")
        return "\n".join(out) + "\n"


def _exact(v):
    # Python ints where possible: same exactness as Fraction, far cheaper
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    f = float(v)
    return int(f) if f.is_integer() else Fraction(f)


def _holds(lhs, sense, rhs, tol) -> bool:
    if sense == LE:
        return lhs <= rhs + tol
    if sense == GE:
        return lhs >= rhs - tol
    return abs(lhs - rhs) <= tol


def _fmt(x) -> str:
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def _lp_name(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "_." else "_" for ch in name)

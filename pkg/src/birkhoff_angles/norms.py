"""Vectors, norm specs and the textual norm-spec grammar.

A norm spec is an immutable object that is also callable: ``spec(v)``
returns ``||v||``.  Built-in specs are :class:`Lp`, :class:`WeightedLp`
and :class:`InnerProduct`; :class:`CustomNorm` wraps an in-process function
and is mostly useful for test doubles.

Grammar accepted by :func:`parse_norm_spec` (ASCII, case-insensitive)::

    l1 | l2 | linf | lp:<p> | wlp:<p>:[w1,...,wn] | ip:[[g11,...],[...],...]

where ``<p>`` may be ``inf``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import DimensionError, InvalidParameterError, NormSpecError, ZeroVectorError

__all__ = [
    "INF",
    "NormClass",
    "Lp",
    "WeightedLp",
    "InnerProduct",
    "CustomNorm",
    "as_vector",
    "norm_eval",
    "normalize",
    "inner_product_eval",
    "parse_norm_spec",
    "format_norm_spec",
]

SYMMETRY_TOL = 1e-12


class Infinity(enum.Enum):
    """The exponent p = infinity, kept apart from float exponents."""

    INF = "inf"

    def __repr__(self):
        return "INF"


INF = Infinity.INF


class NormClass(enum.Enum):
    PIECEWISE_LINEAR = "PiecewiseLinear"
    QUADRATIC = "Quadratic"
    SMOOTH_GENERIC = "SmoothGeneric"


def as_vector(v, name="vector") -> np.ndarray:
    """Return ``v`` as a 1-D float array, rejecting empty or non-finite input."""
    arr = np.array(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite coordinates")
    return arr


def _coerce_exponent(p):
    if p is INF:
        return INF
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity"):
            return INF
        p = float(p)
    p = float(p)
    if math.isnan(p):
        raise InvalidParameterError("exponent p is NaN")
    if math.isinf(p):
        if p < 0:
            raise InvalidParameterError("exponent p must satisfy p >= 1, got -inf")
        return INF
    if p < 1:
        raise InvalidParameterError(f"exponent p must satisfy p >= 1, got {p!r}")
    return p


def _lp_rows(a: np.ndarray, p) -> np.ndarray:
    """Row-wise l_p norm of a 2-D array, factoring out the largest entry."""
    a = np.abs(a)
    if p is INF:
        return a.max(axis=-1)
    if p == 1:
        return a.sum(axis=-1)
    m = a.max(axis=-1)
    safe = np.where(m > 0, m, 1.0)
    scaled = a / safe[..., None]
    if float(p).is_integer():
        p = int(p)  # integer powers are much cheaper than float ones
    return m * np.sum(scaled**p, axis=-1) ** (1.0 / p)


def _exponent_class(p) -> NormClass:
    if p is INF or p == 1:
        return NormClass.PIECEWISE_LINEAR
    if p == 2:
        return NormClass.QUADRATIC
    return NormClass.SMOOTH_GENERIC


def _fmt_float(x: float) -> str:
    if float(x).is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(float(x))


def _fmt_exponent(p) -> str:
    return "inf" if p is INF else _fmt_float(p)


class _NormBase:
    """Shared evaluation plumbing; subclasses provide ``rows``."""

    dim = None

    def rows(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, v) -> float:
        v = as_vector(v)
        self.check_dim(len(v))
        return float(self.rows(v[None, :])[0])

    def check_dim(self, n: int) -> None:
        if self.dim is not None and n != self.dim:
            raise DimensionError(f"norm is defined on R^{self.dim}, got a vector in R^{n}")

    @property
    def norm_class(self) -> NormClass:
        return NormClass.SMOOTH_GENERIC

    def gram(self, n: int) -> np.ndarray:
        """Gram matrix of a quadratic norm on R^n."""
        raise TypeError(f"{self!r} is not induced by an inner product")

    def pl_coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coordinates in which a piecewise-linear norm is plain l1 or linf."""
        raise TypeError(f"{self!r} is not piecewise linear")

    @property
    def pl_kind(self) -> str:
        raise TypeError(f"{self!r} is not piecewise linear")

    def gradient(self, v: np.ndarray):
        """Gradient of the norm at ``v`` when it is known in closed form, else None."""
        return None

    def __str__(self):
        return format_norm_spec(self)


@dataclass(frozen=True)
class Lp(_NormBase):
    """The l_p norm on R^n for any n; ``p`` is a float >= 1 or :data:`INF`."""

    p: float | Infinity

    def __post_init__(self):
        object.__setattr__(self, "p", _coerce_exponent(self.p))

    def rows(self, a):
        return _lp_rows(a, self.p)

    @property
    def norm_class(self):
        return _exponent_class(self.p)

    def gram(self, n):
        if self.p != 2:
            return super().gram(n)
        return np.eye(n)

    def pl_coordinates(self, v):
        if self.norm_class is not NormClass.PIECEWISE_LINEAR:
            return super().pl_coordinates(v)
        return np.asarray(v, dtype=float)

    @property
    def pl_kind(self):
        if self.norm_class is not NormClass.PIECEWISE_LINEAR:
            return super().pl_kind
        return "linf" if self.p is INF else "l1"

    def gradient(self, v):
        return _lp_gradient(np.asarray(v, dtype=float), self.p)


@dataclass(frozen=True)
class WeightedLp(_NormBase):
    """``||v|| = ||(w_1 v_1, ..., w_n v_n)||_p`` with strictly positive weights."""

    p: float | Infinity
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", _coerce_exponent(self.p))
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise InvalidParameterError("weights must be non-empty")
        if not all(math.isfinite(x) and x > 0 for x in w):
            raise InvalidParameterError(f"weights must be finite and strictly positive, got {list(w)}")
        object.__setattr__(self, "weights", w)

    @property
    def dim(self):
        return len(self.weights)

    @property
    def _w(self):
        return np.asarray(self.weights)

    def rows(self, a):
        return _lp_rows(a * self._w, self.p)

    @property
    def norm_class(self):
        return _exponent_class(self.p)

    def gram(self, n):
        if self.p != 2:
            return super().gram(n)
        self.check_dim(n)
        return np.diag(self._w**2)

    def pl_coordinates(self, v):
        if self.norm_class is not NormClass.PIECEWISE_LINEAR:
            return super().pl_coordinates(v)
        return np.asarray(v, dtype=float) * self._w

    @property
    def pl_kind(self):
        if self.norm_class is not NormClass.PIECEWISE_LINEAR:
            return super().pl_kind
        return "linf" if self.p is INF else "l1"

    def gradient(self, v):
        g = _lp_gradient(np.asarray(v, dtype=float) * self._w, self.p)
        return None if g is None else g * self._w


@dataclass(frozen=True)
class InnerProduct(_NormBase):
    """Norm induced by ``<x, y> = x^T G y`` for symmetric positive-definite G."""

    matrix: tuple
    _g: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        g = np.array(self.matrix, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1] or g.shape[0] == 0:
            raise InvalidParameterError(f"Gram matrix must be square and non-empty, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise InvalidParameterError("Gram matrix has non-finite entries")
        if np.max(np.abs(g - g.T)) > SYMMETRY_TOL:
            raise InvalidParameterError("Gram matrix is not symmetric")
        g = 0.5 * (g + g.T)
        for k in range(1, g.shape[0] + 1):
            if np.linalg.det(g[:k, :k]) <= 0:
                raise InvalidParameterError(
                    f"Gram matrix is not positive definite (leading minor of order {k} is not > 0)"
                )
        g.setflags(write=False)
        object.__setattr__(self, "matrix", tuple(tuple(float(x) for x in row) for row in self.matrix))
        object.__setattr__(self, "_g", g)

    @property
    def dim(self):
        return self._g.shape[0]

    def rows(self, a):
        # factor out the largest coordinate so the quadratic form cannot under/overflow
        m = np.max(np.abs(a), axis=-1)
        s = np.where(m > 0, m, 1.0)
        b = a / s[..., None]
        q = np.einsum("...i,ij,...j->...", b, self._g, b)
        return m * np.sqrt(np.maximum(q, 0.0))

    @property
    def norm_class(self):
        return NormClass.QUADRATIC

    def gram(self, n):
        self.check_dim(n)
        return self._g

    def gradient(self, v):
        v = np.asarray(v, dtype=float)
        n = self.rows(v[None, :])[0]
        return self._g @ v / n


@dataclass(frozen=True)
class CustomNorm(_NormBase):
    """Wrap a function mapping an ``(m, n)`` array to ``m`` norm values.

    Nothing is checked about the function: it is the caller's job to pass an
    actual norm.  Always classified as :attr:`NormClass.SMOOTH_GENERIC`, so the
    solvers fall back to finite differences and bisection.
    """

    func: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    name: str = "custom"

    def rows(self, a):
        return np.asarray(self.func(np.atleast_2d(a)), dtype=float).reshape(-1)


def _lp_gradient(u: np.ndarray, p):
    """Gradient of the plain l_p norm at ``u`` for 1 < p < inf (None otherwise)."""
    if p is INF or p == 1:
        return None
    m = np.max(np.abs(u))
    if m == 0:
        return None
    s = u / m
    norm_s = np.sum(np.abs(s) ** p) ** (1.0 / p)
    return np.sign(s) * (np.abs(s) / norm_s) ** (p - 1)


def norm_eval(spec, v) -> float:
    """Return ``||v||`` under ``spec``."""
    return spec(v)


def normalize(spec, v) -> np.ndarray:
    """Return ``v / ||v||``; raises :class:`ZeroVectorError` for ``v == 0``."""
    v = as_vector(v)
    n = spec(v)
    if n == 0:
        raise ZeroVectorError("cannot normalize the zero vector")
    return v / n


def inner_product_eval(gram, x, y) -> float:
    """``x^T G y``.  ``gram`` may be an :class:`InnerProduct` or a matrix."""
    spec = gram if isinstance(gram, InnerProduct) else InnerProduct(gram)
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    spec.check_dim(len(x))
    spec.check_dim(len(y))
    return float(x @ spec.gram(len(x)) @ y)


# --------------------------------------------------------------------------
# text grammar

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?inf(?:inity)?", re.IGNORECASE)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise NormSpecError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def number(self) -> float:
        self.skip_ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            raise NormSpecError("expected a number", self.pos)
        self.pos = m.end()
        return float(m.group())

    def number_list(self) -> list:
        self.expect("[")
        out = [self.number()]
        while self.peek() == ",":
            self.pos += 1
            out.append(self.number())
        self.expect("]")
        return out

    def matrix(self) -> list:
        self.expect("[")
        rows = [self.number_list()]
        while self.peek() == ",":
            self.pos += 1
            rows.append(self.number_list())
        self.expect("]")
        return rows

    def end(self):
        self.skip_ws()
        if self.pos != len(self.text):
            raise NormSpecError(f"unexpected trailing input {self.text[self.pos:]!r}", self.pos)


def parse_norm_spec(text: str):
    """Parse a norm-spec string into a norm object.

    >>> parse_norm_spec("lp:3.5")
    Lp(p=3.5)
    >>> parse_norm_spec("LINF")
    Lp(p=INF)
    """
    if not isinstance(text, str):
        raise NormSpecError(f"norm spec must be a string, got {type(text).__name__}")
    lowered = text.lower()
    r = _Reader(lowered)
    r.skip_ws()
    m = re.compile(r"[a-z0-9]+").match(lowered, r.pos)
    if not m:
        raise NormSpecError("expected a norm keyword", r.pos)
    keyword, kw_pos = m.group(), r.pos
    r.pos = m.end()

    if keyword in ("l1", "l2", "linf"):
        r.end()
        return Lp({"l1": 1.0, "l2": 2.0, "linf": INF}[keyword])
    if keyword == "lp":
        r.expect(":")
        p = _exponent_at(r)
        r.end()
        return Lp(p)
    if keyword == "wlp":
        r.expect(":")
        p = _exponent_at(r)
        r.expect(":")
        weights = r.number_list()
        r.end()
        return WeightedLp(p, tuple(weights))
    if keyword == "ip":
        r.expect(":")
        start = r.pos
        rows = r.matrix()
        r.end()
        if len({len(row) for row in rows}) != 1:
            raise NormSpecError("Gram matrix rows have different lengths", start)
        return InnerProduct(tuple(tuple(row) for row in rows))
    raise NormSpecError(f"unknown norm keyword {keyword!r}", kw_pos)


def _exponent_at(r: _Reader):
    pos = r.pos
    try:
        return _coerce_exponent(r.number())
    except InvalidParameterError as exc:
        raise InvalidParameterError(str(exc), pos) from None


def format_norm_spec(spec) -> str:
    """Canonical text for a built-in norm; inverse of :func:`parse_norm_spec`."""
    if isinstance(spec, Lp):
        if spec.p is INF:
            return "linf"
        if spec.p in (1, 2):
            return f"l{int(spec.p)}"
        return f"lp:{_fmt_exponent(spec.p)}"
    if isinstance(spec, WeightedLp):
        w = ",".join(_fmt_float(x) for x in spec.weights)
        return f"wlp:{_fmt_exponent(spec.p)}:[{w}]"
    if isinstance(spec, InnerProduct):
        rows = ",".join("[" + ",".join(_fmt_float(x) for x in row) + "]" for row in spec.matrix)
        return f"ip:[{rows}]"
    if isinstance(spec, CustomNorm):
        return f"custom:{spec.name}"
    raise TypeError(f"not a norm spec: {spec!r}")


def check_pair(spec, x, y) -> tuple[np.ndarray, np.ndarray]:
    """Validate a pair of vectors against each other and against ``spec``."""
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    if len(x) != len(y):
        raise DimensionError(f"x has dimension {len(x)} but y has dimension {len(y)}")
    spec.check_dim(len(x))
    return x, y


def same_dimension(vectors: Sequence) -> int:
    dims = {len(v) for v in vectors}
    if len(dims) != 1:
        raise DimensionError(f"vectors have mixed dimensions {sorted(dims)}")
    return dims.pop()

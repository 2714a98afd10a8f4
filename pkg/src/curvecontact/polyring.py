"""Exact sparse multivariate polynomials and truncated power series (jets).

All coefficients are exact rationals (``fractions.Fraction``), so identity
tests are reliable and every computation in the package is exact.

A polynomial is a map from monomials to coefficients:

    Monomial = tuple[int, ...]     one exponent per variable
    terms    = {(2, 1): Fraction(3, 2), (0, 0): Fraction(1)}   # 3/2*x1^2*x2 + 1

Zero coefficients are never stored; the zero polynomial has an empty map.

A jet is a univariate power series in ``t`` truncated at a fixed order ``D``:
exactly ``D + 1`` coefficients are kept and all arithmetic discards degrees
above ``D``.  Jets record the Taylor data of curve parameterizations, and
composing a polynomial with a tuple of jets (one per coordinate) yields the
jet of the restricted function, from which the order of vanishing at
``t = 0`` is read off.

The text syntax accepted by :func:`parse_polynomial` is the one used by all
file formats in this package: terms like ``3/2*x1^2*x2 - x3 + 1`` with
variables ``x1..xn`` (or the single letter ``t`` for curve components),
rational coefficients ``p/q``, ``^`` for powers, and an optional ``*``
between the coefficient and the monomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

# The coefficient field: exact rationals, always in lowest terms with a
# positive denominator (Fraction guarantees both).
ExactScalar = Fraction

Monomial = tuple[int, ...]

#: Default jet truncation order.  Order-3 contact needs coefficients through
#: t^3 only; the headroom lets callers distinguish genuinely vanishing
#: compositions (curves lying on the variety) from high finite orders.
DEFAULT_TRUNC = 8


class ParseError(ValueError):
    """Raised for malformed polynomial text or malformed input files."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Fraction] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            coeff = _as_fraction(coeff)
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} has length {len(mono)}, expected {nvars}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in monomial {mono}")
            if coeff != 0:
                clean[tuple(mono)] = coeff
        self.nvars = nvars
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> MultiPoly:
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> MultiPoly:
        return cls(nvars, {(0,) * nvars: _as_fraction(value)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> MultiPoly:
        """The polynomial x_index (0-based)."""
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        mono = [0] * nvars
        mono[index] = 1
        return cls(nvars, {tuple(mono): Fraction(1)})

    # -- basic queries ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree of a stored term; the zero polynomial has degree 0."""
        return max((sum(m) for m in self.terms), default=0)

    def min_degree(self) -> int:
        """Min total degree of a stored term; the zero polynomial reports 0."""
        return min((sum(m) for m in self.terms), default=0)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {format_polynomial(self)!r})"

    def __str__(self) -> str:
        return format_polynomial(self)

    # -- ring operations ----------------------------------------------------

    def _check_compatible(self, other: MultiPoly) -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"mismatched variable counts: {self.nvars} vs {other.nvars}")

    def __add__(self, other: MultiPoly) -> MultiPoly:
        self._check_compatible(other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + coeff
        return MultiPoly(self.nvars, out)

    def __sub__(self, other: MultiPoly) -> MultiPoly:
        return self + (-other)

    def __neg__(self) -> MultiPoly:
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other) -> MultiPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_compatible(other)
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = tuple(x + y for x, y in zip(ma, mb))
                out[mono] = out.get(mono, Fraction(0)) + ca * cb
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def scale(self, value) -> MultiPoly:
        c = _as_fraction(value)
        return MultiPoly(self.nvars, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, exponent: int) -> MultiPoly:
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- structural operations ----------------------------------------------

    def homogeneous_part(self, degree: int) -> MultiPoly:
        """Sum of the terms of total degree exactly ``degree``."""
        return MultiPoly(
            self.nvars, {m: c for m, c in self.terms.items() if sum(m) == degree}
        )

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        vals = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for exp, v in zip(mono, vals):
                if exp:
                    term *= v**exp
            total += term
        return total

    def translate(self, point: Sequence) -> MultiPoly:
        """Return g with g(x) = f(x + p): moves the point p to the origin."""
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        vals = [_as_fraction(v) for v in point]
        shifted = [
            MultiPoly.variable(self.nvars, i) + MultiPoly.const(self.nvars, vals[i])
            for i in range(self.nvars)
        ]
        return self.substitute(shifted)

    def derivative(self, index: int) -> MultiPoly:
        """Partial derivative with respect to x_index (0-based)."""
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range")
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            e = mono[index]
            if e == 0:
                continue
            dm = list(mono)
            dm[index] = e - 1
            key = tuple(dm)
            out[key] = out.get(key, Fraction(0)) + coeff * e
        return MultiPoly(self.nvars, out)

    def gradient_at(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.derivative(i).evaluate(point) for i in range(self.nvars))

    def substitute(self, polys: Sequence[MultiPoly]) -> MultiPoly:
        """Compose: substitute polys[i] for x_i.  All polys share one ring."""
        if len(polys) != self.nvars:
            raise ValueError(f"need {self.nvars} substitution polynomials, got {len(polys)}")
        if not polys:
            return MultiPoly(0, dict(self.terms))
        target = polys[0].nvars
        for g in polys:
            if g.nvars != target:
                raise ValueError("substitution polynomials disagree on variable count")
        # Cache powers of each substituted polynomial across monomials.
        powers: list[dict[int, MultiPoly]] = [
            {0: MultiPoly.const(target, 1)} for _ in polys
        ]

        def power(i: int, e: int) -> MultiPoly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * polys[i]
            return cache[e]

        result = MultiPoly.zero(target)
        for mono, coeff in self.terms.items():
            term = MultiPoly.const(target, coeff)
            for i, e in enumerate(mono):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result


@dataclass(frozen=True)
class VanishingOrder:
    """Order of the first nonzero jet coefficient, if visible at truncation D.

    ``order is None`` means every coefficient through degree D vanished, so
    the true order exceeds the truncation (possibly the series is zero).
    """

    order: int | None
    trunc: int

    @property
    def above_truncation(self) -> bool:
        return self.order is None

    def at_least(self, m: int) -> bool:
        """True when the vanishing order is provably >= m.

        An above-truncation result certifies order >= trunc + 1, so it counts
        as "at least m" for every m <= trunc + 1 (the only queries that make
        sense at this truncation).
        """
        if self.order is None:
            return True
        return self.order >= m

    def __str__(self) -> str:
        if self.order is None:
            return f"above truncation (> {self.trunc})"
        return str(self.order)


class Jet:
    """Univariate power series in t truncated at degree ``trunc``."""

    __slots__ = ("trunc", "coeffs")

    def __init__(self, trunc: int, coeffs: Iterable):
        if trunc < 0:
            raise ValueError("truncation order must be nonnegative")
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) != trunc + 1:
            raise ValueError(f"expected {trunc + 1} coefficients, got {len(cs)}")
        self.trunc = trunc
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls, trunc: int) -> Jet:
        return cls(trunc, [0] * (trunc + 1))

    @classmethod
    def const(cls, trunc: int, value) -> Jet:
        return cls(trunc, [value] + [0] * trunc)

    @classmethod
    def from_taylor(cls, trunc: int, coeffs: Sequence) -> Jet:
        """Build a jet from leading Taylor coefficients, zero-padded to D."""
        cs = [_as_fraction(c) for c in coeffs]
        if len(cs) > trunc + 1:
            raise ValueError("more coefficients than the truncation admits")
        return cls(trunc, cs + [Fraction(0)] * (trunc + 1 - len(cs)))

    def _check_compatible(self, other: Jet) -> None:
        if self.trunc != other.trunc:
            raise ValueError(f"mismatched truncations: {self.trunc} vs {other.trunc}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        return self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.trunc, self.coeffs))

    def __repr__(self) -> str:
        return f"Jet({self.trunc}, {list(self.coeffs)!r})"

    def __add__(self, other: Jet) -> Jet:
        self._check_compatible(other)
        return Jet(self.trunc, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: Jet) -> Jet:
        self._check_compatible(other)
        return Jet(self.trunc, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> Jet:
        return Jet(self.trunc, [-a for a in self.coeffs])

    def __mul__(self, other) -> Jet:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_compatible(other)
        out = [Fraction(0)] * (self.trunc + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            # degrees beyond the truncation are discarded
            for j in range(self.trunc + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return Jet(self.trunc, out)

    __rmul__ = __mul__

    def scale(self, value) -> Jet:
        c = _as_fraction(value)
        return Jet(self.trunc, [c * a for a in self.coeffs])

    def __pow__(self, exponent: int) -> Jet:
        if exponent < 0:
            raise ValueError("negative power of a jet")
        result = Jet.const(self.trunc, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def compose(self, inner: Jet) -> Jet:
        """Substitute ``inner`` for t; requires inner(0) = 0 so orders stay exact."""
        self._check_compatible(inner)
        if inner.coeffs[0] != 0:
            raise ValueError("jet composition requires the inner jet to vanish at t = 0")
        result = Jet.const(self.trunc, self.coeffs[0])
        power = Jet.const(self.trunc, 1)
        for k in range(1, self.trunc + 1):
            power = power * inner
            c = self.coeffs[k]
            if c != 0:
                result = result + power.scale(c)
        return result

    def vanishing_order(self) -> VanishingOrder:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return VanishingOrder(k, self.trunc)
        return VanishingOrder(None, self.trunc)


class CurveGerm:
    """Parameterized curve germ G(t): one jet per ambient coordinate.

    The constant coefficients give the base point G(0); the germ is smooth
    there exactly when the degree-1 coefficient vector is nonzero.
    """

    __slots__ = ("nvars", "trunc", "components")

    def __init__(self, components: Sequence[Jet]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a curve germ needs at least one coordinate")
        trunc = comps[0].trunc
        for jet in comps:
            if jet.trunc != trunc:
                raise ValueError("all components of a curve germ must share one truncation")
        self.nvars = len(comps)
        self.trunc = trunc
        self.components = comps

    @classmethod
    def from_taylor(cls, point: Sequence, rows: Sequence[Sequence], trunc: int) -> CurveGerm:
        """Germ p + t*rows[0] + t^2*rows[1] + ... with truncation ``trunc``."""
        n = len(point)
        for row in rows:
            if len(row) != n:
                raise ValueError("Taylor coefficient rows must match the point length")
        comps = []
        for i in range(n):
            comps.append(Jet.from_taylor(trunc, [point[i]] + [row[i] for row in rows]))
        return cls(comps)

    @property
    def base_point(self) -> tuple[Fraction, ...]:
        return tuple(jet.coeffs[0] for jet in self.components)

    @property
    def tangent_vector(self) -> tuple[Fraction, ...]:
        return tuple(jet.coeffs[1] for jet in self.components)

    @property
    def is_smooth(self) -> bool:
        return any(c != 0 for c in self.tangent_vector)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurveGerm):
            return NotImplemented
        return self.components == other.components

    def __repr__(self) -> str:
        return f"CurveGerm({list(self.components)!r})"

    def reparameterize(self, unit: Jet) -> CurveGerm:
        """Substitute t -> t*u(t) for a unit u (u(0) != 0) in every component."""
        if unit.trunc != self.trunc:
            raise ValueError("unit jet must share the germ's truncation")
        if unit.coeffs[0] == 0:
            raise ValueError("reparameterization requires u(0) != 0")
        t = Jet.from_taylor(self.trunc, [0, 1])
        inner = t * unit
        return CurveGerm([jet.compose(inner) for jet in self.components])


def compose(f: MultiPoly, germ: CurveGerm) -> Jet:
    """The jet of f along the germ: f(G(t)) exact through the truncation."""
    if f.nvars != germ.nvars:
        raise ValueError(
            f"polynomial in {f.nvars} variables composed with a germ in {germ.nvars}"
        )
    trunc = germ.trunc
    powers: list[dict[int, Jet]] = [{0: Jet.const(trunc, 1)} for _ in range(f.nvars)]

    def power(i: int, e: int) -> Jet:
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * germ.components[i]
        return cache[e]

    result = Jet.zero(trunc)
    for mono, coeff in f.terms.items():
        term = Jet.const(trunc, coeff)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        result = result + term
    return result


# ---------------------------------------------------------------------------
# text syntax
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z]\w*)|(?P<op>[\^*+-]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r} in polynomial")
        if m.end() == pos:
            break
        pos = m.end()
        for kind in ("number", "name", "op"):
            value = m.group(kind)
            if value is not None:
                tokens.append((kind, value))
                break
    if text[pos:].strip():
        raise ParseError(f"unexpected character {text[pos:].strip()[0]!r} in polynomial")
    return tokens


def parse_polynomial(
    text: str, nvars: int, resolver: Callable[[str], int] | None = None
) -> MultiPoly:
    """Parse the package's polynomial syntax.

    Variables are ``x1..xn`` by default (1-based, mapped to indices 0..n-1);
    pass a ``resolver`` mapping a variable name to its 0-based index to parse
    other alphabets (curve files use the single variable ``t``).
    """

    def default_resolver(name: str) -> int:
        m = re.fullmatch(r"x(\d+)", name)
        if not m:
            raise ParseError(f"unknown variable {name!r}")
        idx = int(m.group(1)) - 1
        if not 0 <= idx < nvars:
            raise ParseError(f"variable {name!r} out of range for {nvars} variables")
        return idx

    resolve = resolver or default_resolver
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial")

    result = MultiPoly.zero(nvars)
    pos = 0

    def parse_exponent(pos: int) -> tuple[int, int]:
        if pos < len(tokens) and tokens[pos] == ("op", "^"):
            pos += 1
            if pos >= len(tokens) or tokens[pos][0] != "number" or "/" in tokens[pos][1]:
                raise ParseError("'^' must be followed by a nonnegative integer")
            return int(tokens[pos][1]), pos + 1
        return 1, pos

    first_term = True
    while pos < len(tokens):
        sign = Fraction(1)
        saw_sign = False
        while pos < len(tokens) and tokens[pos][0] == "op" and tokens[pos][1] in "+-":
            if tokens[pos][1] == "-":
                sign = -sign
            saw_sign = True
            pos += 1
        if pos >= len(tokens):
            raise ParseError("dangling sign at end of polynomial")
        # Between terms a sign is mandatory; a leading sign is optional.
        if not first_term and not saw_sign:
            raise ParseError("missing '+' or '-' between terms")
        first_term = False

        coeff = sign
        exponents = [0] * nvars
        saw_factor = False
        need_star = False  # after a variable the next factor requires '*'
        while pos < len(tokens):
            kind, value = tokens[pos]
            if kind == "op" and value == "*":
                if not saw_factor:
                    raise ParseError("'*' without a preceding factor")
                pos += 1
                need_star = False
                continue
            if kind == "op":
                break
            if need_star:
                raise ParseError("missing '*' between factors")
            if kind == "number":
                coeff *= Fraction(value)
                pos += 1
                saw_factor = True
                # '*' between a coefficient and its monomial is optional
                continue
            idx = resolve(value)
            pos += 1
            e, pos = parse_exponent(pos)
            exponents[idx] += e
            saw_factor = True
            need_star = True
        if not saw_factor:
            raise ParseError("empty term in polynomial")
        mono = tuple(exponents)
        term = MultiPoly(nvars, {mono: coeff})
        result = result + term
    return result


def parse_polynomial_t(text: str) -> MultiPoly:
    """Parse a univariate polynomial in the variable ``t``."""

    def resolve(name: str) -> int:
        if name != "t":
            raise ParseError(f"curve components use the single variable 't', got {name!r}")
        return 0

    return parse_polynomial(text, 1, resolve)


def format_polynomial(f: MultiPoly, namer: Callable[[int], str] | None = None) -> str:
    """Canonical text form; identical polynomials format identically."""
    if f.is_zero:
        return "0"
    name = namer or (lambda i: f"x{i + 1}")
    # Descending total degree, then descending lexicographic on exponents.
    monomials = sorted(f.terms, key=lambda m: (sum(m), m), reverse=True)
    pieces: list[str] = []
    for k, mono in enumerate(monomials):
        coeff = f.terms[mono]
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        factors = [
            name(i) + (f"^{e}" if e > 1 else "") for i, e in enumerate(mono) if e > 0
        ]
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        if k == 0:
            pieces.append(body if sign == "+" else "-" + body)
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def jet_to_polynomial(jet: Jet) -> MultiPoly:
    """The jet's coefficients as a univariate polynomial in t."""
    return MultiPoly(1, {(k,): c for k, c in enumerate(jet.coeffs) if c != 0})


def format_jet(jet: Jet) -> str:
    return format_polynomial(jet_to_polynomial(jet), lambda _i: "t")

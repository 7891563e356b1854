"""Sparse multivariate polynomials over the rationals.

A Ring fixes an ordered tuple of variable names and a TermOrder. Monomials are
dense exponent tuples indexed by variable position, so a variable's id is its
position in the ring and its name tag is ring.names[id]. Polynomials hold a
dict from monomial to nonzero Fraction and print their terms in decreasing
order under the ring's term order.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

from margalg.config import Config
from margalg.errors import ExponentOverflow, PolynomialParseError, RingMismatch

Monomial = tuple[int, ...]
Coefficient = Union[int, Fraction]

GREVLEX = "grevlex"
LEX = "lex"
BLOCK = "block"


@dataclass(frozen=True)
class TermOrder:
    """A monomial order.

    kind is "grevlex", "lex" or "block". A block order ranks any monomial
    involving the front variables above every monomial free of them, using
    grevlex inside each block; eliminating the front variables relies on it.
    """

    kind: str = GREVLEX
    front: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in (GREVLEX, LEX, BLOCK):
            raise ValueError(f"unknown term order {self.kind!r}")

    @classmethod
    def block(cls, front: Iterable[int]) -> "TermOrder":
        return cls(BLOCK, tuple(sorted(set(front))))

    def key_function(self, nvars: int) -> Callable[[Monomial], tuple[int, ...]]:
        """Map a monomial to a flat int tuple; larger tuples are larger monomials."""
        if self.kind == LEX:
            return tuple
        if self.kind == GREVLEX:
            def grevlex(m):
                return (sum(m),) + tuple(-e for e in reversed(m))
            return grevlex
        front = [i for i in self.front if i < nvars]
        front_set = set(front)
        rest = [i for i in range(nvars) if i not in front_set]

        def block(m):
            head = [m[i] for i in front]
            tail = [m[i] for i in rest]
            return ((sum(head),) + tuple(-e for e in reversed(head))
                    + (sum(tail),) + tuple(-e for e in reversed(tail)))
        return block

    def to_dict(self) -> dict:
        return {"kind": self.kind, "front": list(self.front)}


@dataclass(frozen=True)
class Ring:
    """Polynomial ring over Q with named variables and a term order."""

    names: tuple[str, ...]
    order: TermOrder = TermOrder()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")

    @classmethod
    def of(cls, names: Union[str, Iterable[str]], order: Union[str, TermOrder] = GREVLEX) -> "Ring":
        if isinstance(names, str):
            names = [n.strip() for n in names.split(",") if n.strip()]
        if isinstance(order, str):
            order = TermOrder(order)
        return cls(tuple(names), order)

    @property
    def nvars(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def key(self) -> Callable[[Monomial], tuple[int, ...]]:
        return self.order.key_function(self.nvars)

    def with_order(self, order: Union[str, TermOrder]) -> "Ring":
        if isinstance(order, str):
            order = TermOrder(order)
        return Ring(self.names, order)

    def extended(self, front_names: Sequence[str]) -> "Ring":
        """New ring with front_names prepended and ranked above the old variables."""
        names = tuple(front_names) + self.names
        return Ring(names, TermOrder.block(range(len(front_names))))

    def fresh_name(self, base: str = "w") -> str:
        name = base
        while name in self.index:
            name += "_"
        return name

    def same_variables(self, other: "Ring") -> bool:
        return self.names == other.names

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, value: Coefficient) -> "Polynomial":
        value = Fraction(value)
        return Polynomial(self, {(0,) * self.nvars: value} if value else {})

    def var(self, name: Union[str, int]) -> "Polynomial":
        i = name if isinstance(name, int) else self.index.get(name)
        if i is None:
            raise RingMismatch(f"no variable named {name!r} in this ring")
        mono = [0] * self.nvars
        mono[i] = 1
        return Polynomial(self, {tuple(mono): Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exponents: Mapping[int, int], coeff: Coefficient = 1) -> "Polynomial":
        mono = [0] * self.nvars
        for i, e in exponents.items():
            mono[i] = e
        return Polynomial(self, {tuple(mono): Fraction(coeff)} if coeff else {})

    def parse(self, text: str) -> "Polynomial":
        return _Parser(self, text).parse()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _format_coefficient(c: Fraction) -> str:
    return str(c)


class Polynomial:
    """Immutable sparse polynomial; terms maps monomial tuples to nonzero Fractions."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Monomial, Coefficient]):
        self.ring = ring
        self.terms: dict[Monomial, Fraction] = {
            m: Fraction(c) for m, c in terms.items() if c
        }

    def _check(self, other: "Polynomial") -> None:
        if not self.ring.same_variables(other.ring):
            raise RingMismatch("polynomials live in different rings")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        raise TypeError(f"cannot combine a polynomial with {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            value = terms.get(m, 0) + c
            if value:
                terms[m] = value
            else:
                terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return self.ring.zero()
            return Polynomial(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if self.degree() + other.degree() > Config.MAX_EXPONENT:
            self._check_exponents(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                value = terms.get(m, 0) + c1 * c2
                if value:
                    terms[m] = value
                else:
                    terms.pop(m, None)
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def _check_exponents(self, other: "Polynomial") -> None:
        for i in range(self.ring.nvars):
            top = max((m[i] for m in self.terms), default=0)
            top += max((m[i] for m in other.terms), default=0)
            if top > Config.MAX_EXPONENT:
                raise ExponentOverflow(f"exponent of {self.ring.names[i]} exceeds 32 bits")

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        if exponent * max(self.degree(), 0) > Config.MAX_EXPONENT:
            raise ExponentOverflow("power exceeds the exponent bound")
        result = self.ring.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.same_variables(other.ring) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring.names, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def support(self) -> set[int]:
        """Indices of the variables that occur."""
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def sorted_terms(self, order: Optional[TermOrder] = None) -> list[tuple[Monomial, Fraction]]:
        key = self.ring.key if order is None else order.key_function(self.ring.nvars)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: Optional[TermOrder] = None) -> tuple[Monomial, Fraction]:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        key = self.ring.key if order is None else order.key_function(self.ring.nvars)
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def monic(self, order: Optional[TermOrder] = None) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.leading_term(order)[1])

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(mono, Fraction(0))

    def derivative(self, var: Union[str, int]) -> "Polynomial":
        i = var if isinstance(var, int) else self.ring.index[var]
        terms = {}
        for m, c in self.terms.items():
            if m[i]:
                lowered = m[:i] + (m[i] - 1,) + m[i + 1:]
                terms[lowered] = c * m[i]
        return Polynomial(self.ring, terms)

    def evaluate(self, point: Union[Sequence, Mapping]) -> Fraction:
        """Value at a point given as a sequence or as a name -> value mapping."""
        if isinstance(point, Mapping):
            point = [point[name] for name in self.ring.names]
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in zip(values, m):
                if e:
                    term *= v ** e
            total += term
        return total

    def substitute(self, mapping: Mapping[Union[str, int], "Polynomial"],
                   target: Optional[Ring] = None) -> "Polynomial":
        """Image under the ring map sending each variable to mapping[name].

        Variables missing from mapping are an error unless target is omitted,
        in which case they map to themselves.

        Raises:
            RingMismatch: If a variable in the support has no image.
        """
        images: dict[int, Polynomial] = {}
        for key, image in mapping.items():
            i = key if isinstance(key, int) else self.ring.index.get(key)
            if i is not None:
                images[i] = image
        if target is None:
            target = self.ring
            for i in self.support():
                images.setdefault(i, self.ring.var(i))
        powers: dict[tuple[int, int], Polynomial] = {}
        result = target.zero()
        for m, c in self.terms.items():
            term = target.constant(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                if i not in images:
                    raise RingMismatch(f"no image for variable {self.ring.names[i]}")
                power = powers.get((i, e))
                if power is None:
                    power = images[i] ** e
                    powers[(i, e)] = power
                term = term * power
            result = result + term
        return result

    def lift(self, target: Ring) -> "Polynomial":
        """The same polynomial written in another ring, matching variables by name."""
        if target.names == self.ring.names:
            return Polynomial(target, self.terms)
        positions = []
        for i, name in enumerate(self.ring.names):
            positions.append(target.index.get(name))
        terms = {}
        for m, c in self.terms.items():
            mono = [0] * target.nvars
            for i, e in enumerate(m):
                if e:
                    j = positions[i]
                    if j is None:
                        raise RingMismatch(f"variable {self.ring.names[i]} is not in the target ring")
                    mono[j] = e
            terms[tuple(mono)] = c
        return Polynomial(target, terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(self.ring.names[i])
                elif e:
                    factors.append(f"{self.ring.names[i]}^{e}")
            magnitude = abs(c)
            if not factors:
                body = _format_coefficient(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_format_coefficient(magnitude)] + factors)
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:\[[^\]]*\])?)"
    r"|(?P<op>[-+*^()]))"
)


class _Parser:
    """Recursive-descent reader for the canonical text grammar.

    expr := term (("+" | "-") term)*
    term := unary ("*" unary)*
    unary := "-" unary | factor
    factor := atom ("^" integer)?
    atom := number | name | "(" expr ")"
    """

    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[tuple[str, str]]:
        tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            match = _TOKEN.match(stripped, pos)
            if not match or match.end() == pos:
                raise PolynomialParseError(f"unexpected input at {pos} in {text!r}")
            kind = match.lastgroup
            value = match.group(kind)
            if kind == "name":
                value = value.replace(" ", "")
            tokens.append((kind, value))
            pos = match.end()
        return tokens

    def _peek(self) -> Optional[tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self) -> tuple[str, str]:
        token = self._peek()
        if token is None:
            raise PolynomialParseError(f"unexpected end of {self.text!r}")
        self.pos += 1
        return token

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise PolynomialParseError("empty polynomial text")
        result = self._expr()
        if self._peek() is not None:
            raise PolynomialParseError(f"trailing input in {self.text!r}")
        return result

    def _expr(self) -> Polynomial:
        result = self._term()
        while self._peek() in (("op", "+"), ("op", "-")):
            _, op = self._take()
            right = self._term()
            result = result + right if op == "+" else result - right
        return result

    def _term(self) -> Polynomial:
        result = self._unary()
        while self._peek() == ("op", "*"):
            self._take()
            result = result * self._unary()
        return result

    def _unary(self) -> Polynomial:
        if self._peek() == ("op", "-"):
            self._take()
            return -self._unary()
        return self._factor()

    def _factor(self) -> Polynomial:
        base = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            kind, value = self._take()
            if kind != "number" or "/" in value:
                raise PolynomialParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            exponent = int(value)
            if exponent > Config.MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {exponent} exceeds 32 bits")
            base = base ** exponent
        return base

    def _atom(self) -> Polynomial:
        kind, value = self._take()
        if kind == "number":
            try:
                return self.ring.constant(Fraction(value))
            except ZeroDivisionError as e:
                raise PolynomialParseError(f"zero denominator in {value!r}") from e
        if kind == "name":
            if value not in self.ring.index:
                raise PolynomialParseError(f"unknown variable {value!r}")
            return self.ring.var(value)
        if value == "(":
            inner = self._expr()
            if self._take() != ("op", ")"):
                raise PolynomialParseError(f"unbalanced parenthesis in {self.text!r}")
            return inner
        raise PolynomialParseError(f"unexpected {value!r} in {self.text!r}")


def parse_polynomials(ring: Ring, texts: Iterable[str]) -> list[Polynomial]:
    return [ring.parse(t) for t in texts]


def monomials_of_degree(nvars: int, degree: int) -> Iterator[Monomial]:
    """Exponent tuples of the given total degree, in lexicographic order."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


def monomials_up_to(nvars: int, degree: int) -> Iterator[Monomial]:
    for d in range(degree + 1):
        yield from monomials_of_degree(nvars, d)

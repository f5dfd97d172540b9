"""Exact coefficient rings.

Rings are context objects; elements are plain immutable Python values
(``int`` for GF(p) and Z, ``tuple`` for truncated series and dual numbers).
Every algorithm in the package takes the ring from its matrices, so the same
code runs over GF(p), Z, Z[z]/(z^(N+1)), GF(p)[z]/(z^(N+1)), or dual numbers.

Each ring carries a ``mul_count`` counter of base multiplications, used by the
benchmarks. It is diagnostic only and never influences a result.
"""

from __future__ import annotations

import threading
from operator import mul as _mul
from typing import Any, Iterable, Sequence

from .errors import IndexOutOfRange, NonUnitConstantTerm, NotInvertible, WatermarkViolation

__all__ = [
    "Ring",
    "PrimeField",
    "Integers",
    "SeriesRing",
    "DualRing",
    "COLLAPSED",
    "is_probable_prime",
    "division_violations",
    "reset_division_violations",
    "series_reciprocal",
    "series_eval_at_one",
    "partial_evaluate",
]

_WORD = 1 << 63

_violation_lock = threading.Lock()
_violations = 0


def division_violations() -> int:
    """Number of attempted divisions by non-units since the last reset."""
    return _violations


def reset_division_violations() -> None:
    global _violations
    with _violation_lock:
        _violations = 0


def _record_violation() -> None:
    global _violations
    with _violation_lock:
        _violations += 1


def is_probable_prime(n: int) -> bool:
    # Deterministic Miller-Rabin for n < 3.3e24, which covers every word-size modulus.
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class _Collapsed:
    """Marker stored in series slots that partial evaluation folded away.

    Any arithmetic or comparison on it raises WatermarkViolation, so a stage
    that reads a collapsed coefficient is caught at the point of the read.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "COLLAPSED"

    def _read(self, *args):
        raise WatermarkViolation("read of a coefficient collapsed by partial evaluation")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _read
    __mod__ = __rmod__ = __neg__ = __pos__ = __bool__ = __int__ = __index__ = _read
    __eq__ = __ne__ = __lt__ = __le__ = __gt__ = __ge__ = _read
    __hash__ = object.__hash__


COLLAPSED = _Collapsed()


class Ring:
    """Common interface. Subclasses define the element representation."""

    is_field = False
    # True when elements are Python ints; enables integer fast paths.
    int_valued = False

    def __init__(self) -> None:
        self.mul_count = 0

    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return type(self) is type(other) and self._key() == other._key()  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._key()))

    def reset_counts(self) -> None:
        self.mul_count = 0

    @property
    def zero(self) -> Any:
        return self.from_int(0)

    @property
    def one(self) -> Any:
        return self.from_int(1)

    def from_int(self, k: int) -> Any:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def dot(self, xs: Sequence, ys: Sequence):
        acc = self.zero
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    def axpy(self, alpha, xs: Sequence, ys: Sequence) -> tuple:
        """ys + alpha * xs, elementwise."""
        add, mul = self.add, self.mul
        return tuple(add(y, mul(alpha, x)) for x, y in zip(xs, ys))

    def sum(self, xs: Iterable):
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def random(self, rng) -> Any:
        raise NotImplementedError

    def to_str(self, a) -> str:
        return str(a)


class PrimeField(Ring):
    """GF(p) for an odd word-size prime p; elements are ints in [0, p)."""

    is_field = True
    int_valued = True

    def __init__(self, p: int) -> None:
        super().__init__()
        if not (2 < p < _WORD) or not is_probable_prime(p):
            raise ValueError(f"modulus must be an odd prime below 2**63, got {p}")
        self.p = p

    def _key(self):
        return (self.p,)

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def modulus(self):
        return self.p

    def from_int(self, k):
        return k % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        self.mul_count += 1
        return a * b % self.p

    def dot(self, xs, ys):
        self.mul_count += len(xs)
        return sum(map(_mul, xs, ys)) % self.p

    def sum(self, xs):
        return sum(xs) % self.p

    def axpy(self, alpha, xs, ys):
        self.mul_count += len(xs)
        p = self.p
        return tuple((y + alpha * x) % p for x, y in zip(xs, ys))

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise NotInvertible(f"0 has no inverse in GF({self.p})")
        return pow(a, -1, self.p)

    def random(self, rng):
        return rng.randrange(self.p)


class Integers(Ring):
    """The ring Z with Python's arbitrary-precision ints."""

    int_valued = True
    modulus = None

    def _key(self):
        return ()

    def __repr__(self):
        return "ZZ"

    def from_int(self, k):
        return int(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        self.mul_count += 1
        return a * b

    def dot(self, xs, ys):
        self.mul_count += len(xs)
        return sum(map(_mul, xs, ys))

    def sum(self, xs):
        return sum(xs)

    def axpy(self, alpha, xs, ys):
        self.mul_count += len(xs)
        return tuple(y + alpha * x for x, y in zip(xs, ys))

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a not in (1, -1):
            raise NotInvertible(f"{a} is not a unit in Z")
        return a

    def random(self, rng, lo: int = -9, hi: int = 9):
        return rng.randint(lo, hi)


class DualRing(Ring):
    """Dual numbers base[eps]/(eps^2); elements are pairs (real, infinitesimal)."""

    def __init__(self, base: Ring) -> None:
        super().__init__()
        self.base = base
        self.is_field = False

    def _key(self):
        return (self.base,)

    def __repr__(self):
        return f"Dual({self.base!r})"

    def make(self, a, b=None):
        return (a, self.base.zero if b is None else b)

    def lift(self, a):
        return (a, self.base.zero)

    def from_int(self, k):
        return (self.base.from_int(k), self.base.zero)

    def add(self, x, y):
        B = self.base
        return (B.add(x[0], y[0]), B.add(x[1], y[1]))

    def sub(self, x, y):
        B = self.base
        return (B.sub(x[0], y[0]), B.sub(x[1], y[1]))

    def neg(self, x):
        return (self.base.neg(x[0]), self.base.neg(x[1]))

    def mul(self, x, y):
        self.mul_count += 1
        B = self.base
        a1, b1 = x
        a2, b2 = y
        return (B.mul(a1, a2), B.add(B.mul(a1, b2), B.mul(a2, b1)))

    def is_zero(self, x):
        return self.base.is_zero(x[0]) and self.base.is_zero(x[1])

    def is_unit(self, x):
        return self.base.is_unit(x[0])

    def inv(self, x):
        B = self.base
        ia = B.inv(x[0])
        return (ia, B.neg(B.mul(x[1], B.mul(ia, ia))))

    def random(self, rng):
        return (self.base.random(rng), self.base.random(rng))

    def to_str(self, x):
        return f"{self.base.to_str(x[0])}+{self.base.to_str(x[1])}e"


class SeriesRing(Ring):
    """Truncated power series base[z]/(z^(order+1)).

    Elements are tuples of exactly ``order + 1`` base-ring coefficients,
    constant term first. Multiplication is the classical truncated convolution.
    """

    def __init__(self, base: Ring, order: int) -> None:
        super().__init__()
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.base = base
        self.order = order
        self._fast = base.int_valued
        self._mod = getattr(base, "modulus", None)

    def _key(self):
        return (self.base, self.order)

    def __repr__(self):
        return f"{self.base!r}[z]/(z^{self.order + 1})"

    @property
    def size(self) -> int:
        return self.order + 1

    def make(self, coeffs: Sequence) -> tuple:
        """Series from a coefficient list; missing high coefficients are zero, extra ones dropped."""
        coeffs = list(coeffs)[: self.size]
        return tuple(coeffs) + (self.base.zero,) * (self.size - len(coeffs))

    def constant(self, c) -> tuple:
        return (c,) + (self.base.zero,) * self.order

    def from_int(self, k):
        return self.constant(self.base.from_int(k))

    def add(self, a, b):
        add = self.base.add
        return tuple(map(add, a, b))

    def sub(self, a, b):
        sub = self.base.sub
        return tuple(map(sub, a, b))

    def neg(self, a):
        return tuple(map(self.base.neg, a))

    def _conv(self, a, b, prec):
        """First ``prec`` coefficients of a*b."""
        if self._fast:
            self.base.mul_count += prec * (prec + 1) // 2
            mod = self._mod
            if mod is None:
                return tuple(sum(map(_mul, a[: k + 1], b[k::-1])) for k in range(prec))
            return tuple(sum(map(_mul, a[: k + 1], b[k::-1])) % mod for k in range(prec))
        B = self.base
        return tuple(B.dot(a[: k + 1], b[k::-1]) for k in range(prec))

    def mul(self, a, b):
        self.mul_count += 1
        return self._conv(a, b, self.size)

    def scale(self, c, a):
        """Base-ring scalar times series."""
        return tuple(self.base.mul(c, x) for x in a)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def is_unit(self, a):
        return self.base.is_unit(a[0])

    def inv(self, a):
        return self.reciprocal(a)

    def reciprocal(self, a):
        """Newton iteration r <- r(2 - a r), doubling the correct precision each step.

        The only base-ring inversion is that of the constant term.
        """
        B = self.base
        try:
            r = (B.inv(a[0]),)
        except NotInvertible as exc:
            _record_violation()
            raise NonUnitConstantTerm(f"constant term {B.to_str(a[0])} is not a unit") from exc
        two = B.from_int(2)
        prec = 1
        while prec < self.size:
            prec = min(2 * prec, self.size)
            r = r + (B.zero,) * (prec - len(r))
            ar = self._conv(a, r, prec)
            e = (B.sub(two, ar[0]),) + tuple(B.neg(x) for x in ar[1:])
            r = self._conv(r, e, prec)
        return r

    def eval_at_one(self, a):
        B = self.base
        return B.sum(c for c in a if c is not COLLAPSED)

    def partial_evaluate(self, a, m: int):
        if not 0 <= m <= self.order:
            raise IndexOutOfRange(f"partial evaluation index {m} outside [0, {self.order}]")
        if m == 0:
            return tuple(a)
        B = self.base
        head = B.sum(a[: m + 1])
        return (B.zero,) * m + (head,) + tuple(a[m + 1 :])

    def degree(self, a) -> int:
        """Index of the highest nonzero coefficient, -1 for the zero series."""
        for k in range(self.order, -1, -1):
            if not self.base.is_zero(a[k]):
                return k
        return -1

    def random(self, rng):
        return tuple(self.base.random(rng) for _ in range(self.size))

    def to_str(self, a):
        return ":".join(self.base.to_str(c) for c in a)


def series_reciprocal(ring: SeriesRing, a):
    return ring.reciprocal(a)


def series_eval_at_one(ring: SeriesRing, a):
    return ring.eval_at_one(a)


def partial_evaluate(ring: SeriesRing, a, m: int):
    return ring.partial_evaluate(a, m)

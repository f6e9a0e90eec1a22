"""Exact 2x2 integer matrices, positive RL-words and SL(2,Z) conjugacy.

Words are plain uppercase strings over ``"RL"`` with ``R = (1 1; 0 1)`` and
``L = (1 0; 1 1)``.  A hyperbolic matrix of positive trace is conjugate to a
positive word containing both letters, unique up to rotation; the canonical
rotation is the lexicographically least one with ``R < L``.

>>> word_to_matrix("RL")
IntMatrix2(a=2, b=1, c=1, d=1)
>>> cyclic_normal_form("LRR")
'RRL'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, isqrt
from typing import NamedTuple

from .errors import (
    InvalidMatrix,
    InvalidWord,
    NegativeTrace,
    NotHyperbolic,
    NotHyperbolicPower,
    NotMixed,
    PowerOfOneGenerator,
)

__all__ = [
    "IntMatrix2", "R", "L", "R_INV", "L_INV", "S", "I2", "SWAP",
    "parse_matrix", "parse_word", "is_mixed", "swap_letters",
    "word_to_matrix", "positive_word", "cyclic_normal_form", "gl2_normal_form",
    "rotations", "conjugacy_equal", "Factorization", "rl_factorize",
    "ConjClass", "classify_conjugacy", "mat_pow", "periodic_point_count",
    "mixed_words",
]


@dataclass(frozen=True)
class IntMatrix2:
    """The integer matrix ``(a b; c d)`` with determinant +1 or -1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c not in (1, -1):
            raise InvalidMatrix(f"determinant of {self} is not +-1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: IntMatrix2) -> IntMatrix2:
        return IntMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> IntMatrix2:
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> IntMatrix2:
        e = self.det
        return IntMatrix2(e * self.d, -e * self.b, -e * self.c, e * self.a)

    def apply(self, x, y):
        """Image of the column vector ``(x, y)``; works for ints and Fractions."""
        return self.a * x + self.b * y, self.c * x + self.d * y

    def is_sl2(self) -> bool:
        return self.det == 1

    def __str__(self) -> str:
        return f"{self.a},{self.b};{self.c},{self.d}"


I2 = IntMatrix2(1, 0, 0, 1)
R = IntMatrix2(1, 1, 0, 1)
L = IntMatrix2(1, 0, 1, 1)
R_INV = R.inverse()
L_INV = L.inverse()
S = IntMatrix2(0, -1, 1, 0)
SWAP = IntMatrix2(0, 1, 1, 0)

_GEN = {"R": R, "L": L}
_ORDER = str.maketrans("RL", "01")
_MATRIX_RE = re.compile(r"^\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*;\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*$")


def parse_matrix(text: str) -> IntMatrix2:
    """Parse ``"a,b;c,d"`` (spaces tolerated).

    >>> parse_matrix(" 3, 8 ; 4, 11")
    IntMatrix2(a=3, b=8, c=4, d=11)
    """
    m = _MATRIX_RE.match(text)
    if m is None:
        raise InvalidMatrix(f"cannot parse matrix {text!r}; expected 'a,b;c,d'")
    return IntMatrix2(*(int(g) for g in m.groups()))


def parse_word(text: str) -> str:
    w = text.strip().upper()
    if not w or set(w) - {"R", "L"}:
        raise InvalidWord(f"not a non-empty word over R, L: {text!r}")
    return w


def is_mixed(w: str) -> bool:
    return "R" in w and "L" in w


def require_mixed(w: str) -> str:
    w = parse_word(w)
    if not is_mixed(w):
        raise NotMixed(f"word {w} must contain both letters")
    return w


def swap_letters(w: str) -> str:
    return w.translate(str.maketrans("RL", "LR"))


def word_to_matrix(w: str) -> IntMatrix2:
    m = I2
    for letter in parse_word(w):
        m = m @ _GEN[letter]
    return m


def positive_word(m: IntMatrix2) -> str:
    """Factor a nonnegative SL(2,Z) matrix as a positive word by peeling.

    The row that dominates the other gives the leading letter.  This is the
    direct route for matrices that are already nonnegative; it serves as an
    oracle for :func:`rl_factorize`.
    """
    if m.det != 1 or min(m.a, m.b, m.c, m.d) < 0:
        raise ValueError(f"{m} is not a nonnegative SL(2,Z) matrix")
    letters = []
    a, b, c, d = m.a, m.b, m.c, m.d
    while (a, b, c, d) != (1, 0, 0, 1):
        if a >= c and b >= d:
            letters.append("R")
            a, b = a - c, b - d
        elif c >= a and d >= b:
            letters.append("L")
            c, d = c - a, d - b
        else:  # pragma: no cover - impossible for det 1 nonnegative matrices
            raise ValueError(f"no dominating row in {m}")
    w = "".join(letters)
    if w and not is_mixed(w):
        raise PowerOfOneGenerator(f"{m} is a power of a single generator")
    return w


def rotations(w: str) -> list[str]:
    return [w[i:] + w[:i] for i in range(len(w))]


def cyclic_normal_form(w: str) -> str:
    """Least rotation of ``w`` with ``R < L``."""
    w = parse_word(w)
    return min(rotations(w), key=lambda v: v.translate(_ORDER))


def _rotation_index(w: str) -> int:
    rots = rotations(w)
    best = min(rots, key=lambda v: v.translate(_ORDER))
    return rots.index(best)


def gl2_normal_form(w: str) -> str:
    """Canonical representative up to rotation and exchange of R and L."""
    return min(cyclic_normal_form(w), cyclic_normal_form(swap_letters(w)),
               key=lambda v: v.translate(_ORDER))


def conjugacy_equal(w1: str, w2: str, group: str = "SL2") -> bool:
    """Whether two positive words give conjugate matrices.

    ``group`` is ``"SL2"`` (rotation only) or ``"GL2"`` (rotation and the
    letter exchange induced by conjugating with ``(0 1; 1 0)``).
    """
    if group == "SL2":
        return cyclic_normal_form(w1) == cyclic_normal_form(w2)
    if group == "GL2":
        return gl2_normal_form(w1) == gl2_normal_form(w2)
    raise ValueError(f"unknown group {group!r}")


def mat_pow(m: IntMatrix2, n: int) -> IntMatrix2:
    if n < 0:
        return mat_pow(m.inverse(), -n)
    result, base = I2, m
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def _gen_pow(letter: str, k: int) -> IntMatrix2:
    return IntMatrix2(1, k, 0, 1) if letter == "R" else IntMatrix2(1, 0, k, 1)


class Factorization(NamedTuple):
    """Canonical word and a conjugator ``g`` with ``g W g^-1 = m``."""

    word: str
    conjugator: IntMatrix2


def _floor_quadratic(p: int, q: int, dsc: int, s: int) -> int:
    # floor((p + sqrt(dsc)) / q) for non-square dsc, s = isqrt(dsc)
    if q > 0:
        return (p + s) // q
    return -((p + s) // -q) - 1


def rl_factorize(m: IntMatrix2) -> Factorization:
    """Positive-word representative of a hyperbolic matrix with trace >= 3.

    The attracting fixed point ``z`` of ``m`` on the projective line has an
    eventually periodic continued fraction ``[a0; a1, ...]``; with
    ``R: z -> z + 1`` and ``L: z -> z / (z + 1)`` the periodic block read as
    ``R^a L^a' R^a'' ...`` is the primitive positive word and the
    pre-period gives the conjugator.

    >>> rl_factorize(IntMatrix2(3, 8, 4, 11)).word
    'RRLRRL'
    """
    if m.det != 1:
        raise InvalidMatrix(f"{m} is not in SL(2,Z)")
    t = m.trace
    if abs(t) <= 2:
        raise NotHyperbolic(f"|trace| = {abs(t)} <= 2 for {m}")
    if t < 0:
        raise NegativeTrace(f"trace {t} < 0; factor the negated matrix")
    # z = (a - d + sqrt(t^2 - 4)) / (2c); c != 0 for hyperbolic m
    dsc = t * t - 4
    s = isqrt(dsc)
    p, q = m.a - m.d, 2 * m.c
    quotients: list[int] = []
    seen: dict[tuple[int, int], int] = {}
    while (p, q) not in seen:
        seen[(p, q)] = len(quotients)
        k = _floor_quadratic(p, q, dsc, s)
        quotients.append(k)
        p = k * q - p
        q = (dsc - p * p) // q
    start = seen[(p, q)]
    block = quotients[start:]
    if start % 2:
        start += 1
        block = block[1:] + block[:1]
    if len(block) % 2:
        block = block + block
    prefix = quotients[:start]

    g = I2
    for i, k in enumerate(prefix):
        g = g @ _gen_pow("RL"[i % 2], k)
    prim = "".join("RL"[i % 2] * k for i, k in enumerate(block))
    prim_m = word_to_matrix(prim)
    power, acc = 1, prim_m
    while acc.trace < t:
        power += 1
        acc = acc @ prim_m
    word = prim * power
    shift = _rotation_index(word)
    g = g @ word_to_matrix(word[:shift]) if shift else g
    canon = word[shift:] + word[:shift]
    if g @ word_to_matrix(canon) @ g.inverse() != m:  # pragma: no cover
        raise ArithmeticError(f"conjugator check failed for {m}")
    return Factorization(canon, g)


@dataclass(frozen=True)
class ConjClass:
    """An SL(2,Z) conjugacy class in normal form.

    ``kind`` is ``"hyperbolic"`` (``word`` set), ``"parabolic"`` (class of
    ``sign * R^shear`` with ``shear != 0``) or ``"elliptic"`` (``name`` is one
    of the finite-order representatives, including ``I`` and ``-I``).
    """

    kind: str
    sign: int = 1
    word: str = ""
    shear: int = 0
    name: str = ""

    def representative(self) -> IntMatrix2:
        if self.kind == "hyperbolic":
            m = word_to_matrix(self.word)
            return m if self.sign > 0 else -m
        if self.kind == "parabolic":
            m = _gen_pow("R", self.shear)
            return m if self.sign > 0 else -m
        return ELLIPTIC_REPRESENTATIVES[self.name]

    @property
    def label(self) -> str:
        sign = "" if self.sign > 0 else "-"
        if self.kind == "hyperbolic":
            return sign + self.word
        if self.kind == "parabolic":
            return f"{sign}R^{self.shear}"
        return self.name

    def sort_key(self):
        order = {"hyperbolic": 0, "parabolic": 1, "elliptic": 2}[self.kind]
        return (order, len(self.word), self.word.translate(_ORDER),
                -self.sign, abs(self.shear), self.shear, self.name)

    def __lt__(self, other: ConjClass) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.label


_ST = S @ R
ELLIPTIC_REPRESENTATIVES = {
    "I": I2,
    "-I": -I2,
    "S": S,
    "-S": -S,
    "ST": _ST,
    "(ST)^-1": _ST.inverse(),
    "-ST": -_ST,
    "-(ST)^-1": -_ST.inverse(),
}


def classify_conjugacy(m: IntMatrix2) -> ConjClass:
    """Complete SL(2,Z) conjugacy invariant.

    Parabolic classes keep the sign of the shear: ``R`` and ``R^-1`` are not
    conjugate in SL(2,Z).  Elliptic classes are told apart by the trace and
    the sign of the lower-left entry (the definiteness of the fixed-point
    quadratic form, a conjugacy invariant).
    """
    if m.det != 1:
        raise InvalidMatrix(f"{m} is not in SL(2,Z)")
    t = m.trace
    if abs(t) > 2:
        sign = 1 if t > 0 else -1
        fact = rl_factorize(m if sign > 0 else -m)
        return ConjClass("hyperbolic", sign=sign, word=fact.word)
    if abs(t) == 2:
        sign = 1 if t > 0 else -1
        u = m if sign > 0 else -m
        if u == I2:
            return ConjClass("elliptic", name="I" if sign > 0 else "-I")
        # u - I = n * (p, r)^T (-r, p) with gcd(p, r) = 1
        n = gcd(u.b, u.c, u.a - 1)
        n = n if (u.b > 0 or (u.b == 0 and u.c < 0)) else -n
        return ConjClass("parabolic", sign=sign, shear=n)
    positive = m.c > 0
    name = {
        (0, True): "S", (0, False): "-S",
        (1, True): "ST", (1, False): "(ST)^-1",
        (-1, False): "-ST", (-1, True): "-(ST)^-1",
    }[(t, positive)]
    return ConjClass("elliptic", name=name)


def periodic_point_count(m: IntMatrix2, n: int = 1) -> int:
    """Number of fixed points of ``m^n`` on the torus, ``|det(m^n - I)|``."""
    if n < 1:
        raise ValueError("n must be positive")
    p = mat_pow(m, n)
    count = abs(p.det - p.trace + 1)
    if count == 0:
        raise NotHyperbolicPower(f"{m}^{n} has trace {p.trace}")
    return count


def mixed_words(max_length: int, min_length: int = 2):
    """All mixed words with lengths in ``[min_length, max_length]``."""
    from itertools import product

    for k in range(max(min_length, 2), max_length + 1):
        for letters in product("RL", repeat=k):
            w = "".join(letters)
            if is_mixed(w):
                yield w

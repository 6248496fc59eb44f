"""Exact coefficient arithmetic, sparse multigraded polynomials and integer normal forms.

Coefficients come from one of two kinds of field object:

* ``QQ``, the rationals, with elements stored as :class:`fractions.Fraction`;
* ``GF(p, d)``, a finite field with elements stored as :class:`FFElement`.

Both expose ``zero``, ``one``, ``characteristic`` and a call operator that
coerces integers (and strings in the serialization format).  Everything else in
the package is written against that small interface.
"""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

MAX_FIELD_SIZE = 2 ** 21


class FieldSizeError(RuntimeError):
    """Requested finite field exceeds ``MAX_FIELD_SIZE``."""


class DimensionError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# the rationals


class RationalField:
    characteristic = 0
    degree = 1
    order = None
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def spec(self) -> str:
        return "Q"

    def format(self, x: Fraction) -> str:
        return str(Fraction(x))

    def __repr__(self):
        return "QQ"


QQ = RationalField()


# ---------------------------------------------------------------------------
# finite fields


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m`` (coefficients low to high)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = [c % p for c in a[:dm]]
    return a + [0] * (dm - len(a))


def _poly_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_mod(prod, m, p)


def _poly_powmod(a, e, m, p):
    result = [1] + [0] * (len(m) - 2)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def _monic_polys(p: int, deg: int) -> Iterator[list[int]]:
    for low in itertools.product(range(p), repeat=deg):
        yield list(reversed(low)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree at most half the degree."""
    d = len(poly) - 1
    if d <= 0:
        return False
    for k in range(1, d // 2 + 1):
        for cand in _monic_polys(p, k):
            if not any(_poly_mod(poly, cand, p)):
                return False
    return True


def find_modulus(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree ``d`` whose root generates the unit group.

    Candidates are scanned in increasing order of their base-``p`` code, so the
    choice is deterministic.
    """
    if d == 1:
        return (0, 1)
    q = p ** d
    factors = prime_factors(q - 1)
    x = [0, 1] + [0] * (d - 2)
    one = [1] + [0] * (d - 1)
    for code in range(p ** d):
        low = [(code // p ** i) % p for i in range(d)]
        poly = low + [1]
        if low[0] == 0 or not is_irreducible(poly, p):
            continue
        if all(_poly_powmod(x, (q - 1) // f, poly, p) != one for f in factors):
            return tuple(poly)
    raise ArithmeticError(f"no primitive modulus found for GF({p}^{d})")


class GF:
    """The finite field with ``p**d`` elements.

    Elements are encoded by integers ``0 <= code < p**d`` whose base-``p`` digits
    are the coefficients of the representative polynomial (lowest degree first).
    For ``d > 1`` multiplication uses discrete-log tables and addition uses Zech
    logarithms, both relative to the root of the primitive modulus.
    """

    _instances: dict = {}

    def __new__(cls, p: int, d: int = 1):
        key = (p, d)
        if key in cls._instances:
            return cls._instances[key]
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if d < 1:
            raise ValueError("extension degree must be at least 1")
        if p ** d > MAX_FIELD_SIZE:
            raise FieldSizeError(f"GF({p}^{d}) has more than {MAX_FIELD_SIZE} elements")
        self = super().__new__(cls)
        self.p = p
        self.d = d
        self.q = p ** d
        self.characteristic = p
        self.degree = d
        self.order = self.q
        self.modulus = find_modulus(p, d)
        if d > 1:
            self._build_tables()
        self.zero = FFElement(self, 0)
        self.one = FFElement(self, 1)
        cls._instances[key] = self
        return self

    def __getnewargs__(self):
        return (self.p, self.d)

    def _build_tables(self):
        p, d, q = self.p, self.d, self.q
        m = self.modulus
        exp = [0] * (q - 1)
        log = [-1] * q
        digits = [1] + [0] * (d - 1)
        for k in range(q - 1):
            code = sum(c * p ** i for i, c in enumerate(digits))
            exp[k] = code
            log[code] = k
            top = digits[-1]
            digits = [0] + digits[:-1]
            if top:
                digits = [(digits[i] - top * m[i]) % p for i in range(d)]
        zech: list = [None] * (q - 1)
        for k in range(q - 1):
            c = exp[k]
            c1 = c - c % p + (c % p + 1) % p
            zech[k] = log[c1] if c1 else None
        self._exp, self._log, self._zech = exp, log, zech
        self._minus_one_log = (q - 1) // 2 if p != 2 else 0

    # code-level arithmetic
    def _add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % (self.q - 1)]
        if z is None:
            return 0
        return self._exp[(la + z) % (self.q - 1)]

    def _neg(self, a: int) -> int:
        if self.d == 1:
            return (-a) % self.p
        if a == 0:
            return 0
        return self._exp[(self._log[a] + self._minus_one_log) % (self.q - 1)]

    def _mul(self, a: int, b: int) -> int:
        if self.d == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in finite field")
        if self.d == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def _pow(self, a: int, e: int) -> int:
        if self.d == 1:
            if e < 0:
                a, e = self._inv(a), -e
            return pow(a, e, self.p)
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("division by zero in finite field")
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def _from_int(self, n: int) -> int:
        return n % self.p

    def __call__(self, x) -> "FFElement":
        if isinstance(x, FFElement):
            if x.field is not self:
                raise ValueError(f"element of {x.field} cannot be coerced into {self}")
            return x
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return FFElement(self, x % self.p)
        if isinstance(x, Fraction):
            return self(x.numerator) / self(x.denominator)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, (list, tuple)):
            if len(x) != self.d:
                raise ValueError("digit vector length must equal the extension degree")
            return FFElement(self, sum((int(c) % self.p) * self.p ** i for i, c in enumerate(x)))
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def from_code(self, code: int) -> "FFElement":
        if not 0 <= code < self.q:
            raise ValueError("code out of range")
        return FFElement(self, code)

    def generator(self) -> "FFElement":
        """A generator of the multiplicative group."""
        if self.d > 1:
            return FFElement(self, self._exp[1])
        factors = prime_factors(self.p - 1)
        for g in range(1, self.p):
            if all(pow(g, (self.p - 1) // f, self.p) != 1 for f in factors):
                return FFElement(self, g)
        raise ArithmeticError("no generator")  # pragma: no cover

    def elements(self) -> Iterator["FFElement"]:
        for c in range(self.q):
            yield FFElement(self, c)

    def nonzero_elements(self) -> Iterator["FFElement"]:
        for c in range(1, self.q):
            yield FFElement(self, c)

    def random_element(self, rng) -> "FFElement":
        return FFElement(self, rng.randrange(self.q))

    def digits(self, x: "FFElement") -> list[int]:
        return [(x.code // self.p ** i) % self.p for i in range(self.d)]

    def frobenius(self, x: "FFElement", power: int = 1) -> "FFElement":
        return x ** (self.p ** power)

    def in_prime_field(self, x: "FFElement") -> bool:
        return x.code < self.p

    def spec(self) -> str:
        return str(self.p) if self.d == 1 else f"{self.p}^{self.d}"

    def format(self, x: "FFElement") -> str:
        if self.d == 1:
            return str(x.code)
        return ":".join(str(c) for c in self.digits(x))

    def parse(self, s: str) -> "FFElement":
        s = s.strip()
        if ":" in s:
            return self([int(c) for c in s.split(":")])
        if "/" in s:
            return self(Fraction(s))
        return self(int(s))

    def __repr__(self):
        return f"GF({self.p})" if self.d == 1 else f"GF({self.p}^{self.d})"

    def __reduce__(self):
        return (GF, (self.p, self.d))


class FFElement:
    __slots__ = ("field", "code")

    def __init__(self, field: GF, code: int):
        self.field = field
        self.code = code

    def _coerce(self, other):
        if isinstance(other, FFElement):
            if other.field is not self.field:
                raise ValueError(f"mixing elements of {self.field} and {other.field}")
            return other.code
        if isinstance(other, (int, Fraction)):
            return self.field(other).code
        return None

    def __add__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FFElement(self.field, self.field._add(self.code, b))

    __radd__ = __add__

    def __neg__(self):
        return FFElement(self.field, self.field._neg(self.code))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        f = self.field
        return FFElement(f, f._add(self.code, f._neg(b)))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        f = self.field
        return FFElement(f, f._add(b, f._neg(self.code)))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        return FFElement(self.field, self.field._mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        f = self.field
        return FFElement(f, f._mul(self.code, f._inv(b)))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        if b is None:
            return NotImplemented
        f = self.field
        return FFElement(f, f._mul(b, f._inv(self.code)))

    def __pow__(self, e: int):
        return FFElement(self.field, self.field._pow(self.code, e))

    def inverse(self):
        return FFElement(self.field, self.field._inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FFElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field._from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return self.field.format(self)

    def __reduce__(self):
        return (FFElement, (self.field, self.code))


def enumerate_field(p: int, d: int = 1) -> Iterator[FFElement]:
    """Every element of GF(p^d), each exactly once."""
    if p ** d > MAX_FIELD_SIZE:
        raise FieldSizeError(f"GF({p}^{d}) exceeds the enumeration bound {MAX_FIELD_SIZE}")
    return GF(p, d).elements()


def parse_field(spec: str):
    """``"Q"`` for the rationals, ``"p"`` or ``"p^d"`` for a finite field."""
    spec = str(spec).strip()
    if spec.upper() in ("Q", "QQ"):
        return QQ
    if "^" in spec:
        p, d = spec.split("^")
        return GF(int(p), int(d))
    return GF(int(spec))


def projective_points(field, n: int) -> Iterator[list]:
    """Normalized representatives of P^n over a finite field (first nonzero entry is 1)."""
    elems = list(field.elements())
    for lead in range(n + 1):
        for tail in itertools.product(elems, repeat=n - lead):
            yield [field.zero] * lead + [field.one] + list(tail)


def normalize_projective(vec: Sequence) -> tuple:
    """Scale so the first nonzero entry is 1; raises on the zero vector."""
    for x in vec:
        if x != 0:
            inv = 1 / x
            return tuple(y * inv for y in vec)
    raise ValueError("zero vector has no projective class")


# ---------------------------------------------------------------------------
# sparse multigraded polynomials


class MultiPoly:
    """Sparse polynomial in variables grouped into named blocks.

    ``blocks`` is a tuple of ``(name, size)`` pairs; exponent vectors run over the
    concatenation of all blocks in order.  Individual variables can be referred
    to by flat index, by ``(block_name, i)`` or by the display name (``name`` for
    a block of size one, ``name{i+1}`` otherwise).
    """

    __slots__ = ("blocks", "field", "terms")

    def __init__(self, blocks, terms=None, field=QQ):
        self.blocks = tuple((str(n), int(s)) for n, s in blocks)
        self.field = field
        self.terms = {}
        if terms:
            nv = self.nvars
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nv:
                    raise DimensionError("exponent vector length does not match block structure")
                c = field(c) if not _is_field_elem(c, field) else c
                if c != 0:
                    self.terms[e] = c

    @property
    def nvars(self) -> int:
        return sum(s for _, s in self.blocks)

    def variable_names(self) -> list[str]:
        names = []
        for n, s in self.blocks:
            names.extend([n] if s == 1 else [f"{n}{i + 1}" for i in range(s)])
        return names

    def var_index(self, var) -> int:
        if isinstance(var, int):
            if 0 <= var < self.nvars:
                return var
        elif isinstance(var, tuple) and len(var) == 2:
            off = 0
            for n, s in self.blocks:
                if n == var[0] and 0 <= var[1] < s:
                    return off + var[1]
                off += s
        elif isinstance(var, str):
            names = self.variable_names()
            if var in names:
                return names.index(var)
        raise KeyError(f"unknown variable {var!r} for blocks {self.blocks}")

    @classmethod
    def variable(cls, blocks, var, field=QQ) -> "MultiPoly":
        f = cls(blocks, field=field)
        i = f.var_index(var)
        e = [0] * f.nvars
        e[i] = 1
        f.terms[tuple(e)] = field.one
        return f

    @classmethod
    def constant(cls, blocks, c, field=QQ) -> "MultiPoly":
        f = cls(blocks, field=field)
        c = field(c) if not _is_field_elem(c, field) else c
        if c != 0:
            f.terms[(0,) * f.nvars] = c
        return f

    @classmethod
    def linear_form(cls, blocks, block: str, coeffs: Sequence, field=QQ) -> "MultiPoly":
        """``sum_i coeffs[i] * block_i``."""
        f = cls(blocks, field=field)
        size = dict(f.blocks)[block]
        if len(coeffs) != size:
            raise DimensionError("coefficient count does not match block size")
        for i, c in enumerate(coeffs):
            if c != 0:
                e = [0] * f.nvars
                e[f.var_index((block, i))] = 1
                f.terms[tuple(e)] = field(c) if not _is_field_elem(c, field) else c
        return f

    @classmethod
    def bilinear_form(cls, blocks, left: str, right: str, matrix, field=QQ) -> "MultiPoly":
        """``sum_ij matrix[i][j] * left_i * right_j``."""
        f = cls(blocks, field=field)
        for i, row in enumerate(matrix):
            for j, c in enumerate(row):
                if c != 0:
                    e = [0] * f.nvars
                    e[f.var_index((left, i))] += 1
                    e[f.var_index((right, j))] += 1
                    f.terms[tuple(e)] = field(c) if not _is_field_elem(c, field) else c
        return f

    def _like(self, terms) -> "MultiPoly":
        g = MultiPoly.__new__(MultiPoly)
        g.blocks, g.field, g.terms = self.blocks, self.field, terms
        return g

    def _check(self, other: "MultiPoly"):
        if other.blocks != self.blocks:
            raise DimensionError("polynomials have different block structures")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)) or _is_field_elem(other, self.field):
            return MultiPoly.constant(self.blocks, other, self.field)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s != 0:
                terms[e] = s
            else:
                terms.pop(e, None)
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) or _is_field_elem(other, self.field):
            c0 = self.field(other) if not _is_field_elem(other, self.field) else other
            if c0 == 0:
                return self._like({})
            return self._like({e: c * c0 for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        return self._like({e: c for e, c in terms.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.blocks, 1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.blocks == other.blocks and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or _is_field_elem(other, self.field):
            return self == MultiPoly.constant(self.blocks, other, self.field)
        return NotImplemented

    def __hash__(self):
        return hash((self.blocks, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def block_degree(self, exponent) -> tuple[int, ...]:
        out, off = [], 0
        for _, s in self.blocks:
            out.append(sum(exponent[off:off + s]))
            off += s
        return tuple(out)

    def multidegree(self):
        """Per-block degree vector if multihomogeneous and nonzero, else ``None``."""
        degs = {self.block_degree(e) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exponent) -> object:
        return self.terms.get(tuple(exponent), self.field.zero)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise DimensionError(f"point has {len(point)} coordinates, expected {self.nvars}")
        total = self.field.zero
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def partial(self, var) -> "MultiPoly":
        i = self.var_index(var)
        terms = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                c2 = c * k
                if c2 != 0:
                    e2 = list(e)
                    e2[i] -= 1
                    terms[tuple(e2)] = c2
        return self._like(terms)

    def map_coefficients(self, fn, field=None) -> "MultiPoly":
        field = field or self.field
        g = MultiPoly(self.blocks, field=field)
        for e, c in self.terms.items():
            c2 = fn(c)
            if c2 != 0:
                g.terms[e] = c2
        return g

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.variable_names()
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            cs = self.field.format(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


def _is_field_elem(x, field) -> bool:
    if field is QQ:
        return isinstance(x, Fraction)
    return isinstance(x, FFElement) and x.field is field


def cofactor_det(m: Sequence[Sequence], zero):
    """Determinant by Laplace expansion along rows, memoizing minors by column set."""
    n = len(m)
    memo: dict = {}

    def minor(row: int, cols: tuple):
        if row == n:
            return None
        if cols in memo:
            return memo[cols]
        total = zero
        for pos, c in enumerate(cols):
            entry = m[row][c]
            if entry == 0:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry if sub is None else entry * sub
            total = total + term if pos % 2 == 0 else total - term
        memo[cols] = total
        return total

    if n == 0:
        return None
    return minor(0, tuple(range(n)))


def poly_det(m: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DimensionError("poly_det needs a nonempty square matrix")
    blocks, field = m[0][0].blocks, m[0][0].field
    for row in m:
        for x in row:
            if not isinstance(x, MultiPoly) or x.blocks != blocks:
                raise DimensionError("matrix entries must share one block structure")
    return cofactor_det(m, MultiPoly(blocks, field=field))


def partial_derivative(f: MultiPoly, var) -> MultiPoly:
    return f.partial(var)


def evaluate(f: MultiPoly, point: Sequence):
    return f.evaluate(point)


# ---------------------------------------------------------------------------
# linear algebra over a field


def rref(rows: Sequence[Sequence], field):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows: Sequence[Sequence], field) -> int:
    return len(rref(rows, field)[1])


def kernel(rows: Sequence[Sequence], field, ncols: int | None = None) -> list[list]:
    """Basis of the right kernel {x : rows * x = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[field.one if i == j else field.zero for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows, field)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for i, pc in enumerate(piv):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def field_det(m: Sequence[Sequence], field):
    """Determinant over a field by elimination."""
    a = [list(r) for r in m]
    n = len(a)
    det = field.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def mat_vec(m: Sequence[Sequence], v: Sequence, field):
    return [sum((x * y for x, y in zip(row, v)), field.zero) for row in m]


def vec_mat(v: Sequence, m: Sequence[Sequence], field):
    cols = len(m[0]) if m else 0
    return [sum((v[i] * m[i][j] for i in range(len(v))), field.zero) for j in range(cols)]


def bilinear(m, x, y, field):
    """x^T m y."""
    return sum((xi * mij * yj for xi, row in zip(x, m) for mij, yj in zip(row, y)), field.zero)


# ---------------------------------------------------------------------------
# integer matrices and Smith normal form


class IntMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable[int]], cols: int | None = None):
        self.entries = [[int(x) for x in row] for row in entries]
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        if any(len(r) != cols for r in self.entries):
            raise DimensionError("ragged integer matrix")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "IntMatrix":
        return cls([[0] * c for _ in range(r)], c)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError("incompatible shapes for multiplication")
        ot = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.entries],
                         other.cols)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.rows == other.rows and self.cols == other.cols \
            and self.entries == other.entries

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(c) for c in zip(*self.entries)] if self.rows else [], self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def det(self) -> int:
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        # Bareiss fraction-free elimination
        a = [list(r) for r in self.entries]
        n, sign, prev = self.rows, 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                sw = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if sw is None:
                    return 0
                a[k], a[sw] = a[sw], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def diagonal(self) -> list[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def __repr__(self):
        return f"IntMatrix({self.entries})"


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (D, U, V) with U*m*V = D diagonal, d1 | d2 | ..., U and V unimodular.

    The pivot at each stage is the nonzero entry of least absolute value in the
    remaining block, ties broken by the sparsest row plus column.
    """
    if not isinstance(m, IntMatrix):
        m = IntMatrix(m)
    nr, nc = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                x = row[j]
                if x:
                    key = abs(x)
                    if best is None or key < best[0]:
                        best = (key, i, j)
                        if key == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            changed = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            piv = a[t][t]
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(a, nc), IntMatrix(u, nr), IntMatrix(v, nc)


def _dense_invariant_factors(a: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith form, without tracking transforms."""
    rows = [list(r) for r in a if any(r)]
    out = []
    while rows:
        # pivot: smallest nonzero entry
        i, j = min(((i, j) for i, r in enumerate(rows) for j, x in enumerate(r) if x),
                   key=lambda ij: abs(rows[ij[0]][ij[1]]))
        while True:
            p = rows[i][j]
            changed = False
            for k, r in enumerate(rows):
                if k != i and r[j]:
                    q = r[j] // p
                    if q:
                        rows[k] = r = [x - q * y for x, y in zip(r, rows[i])]
                    if r[j]:
                        changed = True
            piv = rows[i]
            for c in range(len(piv)):
                if c != j and piv[c]:
                    q = piv[c] // p
                    if q:
                        for r in rows:
                            if r[j]:
                                r[c] -= q * r[j]
                    if piv[c]:
                        changed = True
            if not changed:
                bad = next((k for k, r in enumerate(rows) if k != i and any(x % p for x in r)), None)
                if bad is None:
                    break
                rows[i] = [x + y for x, y in zip(rows[i], rows[bad])]
                continue
            # move to the new smallest entry in the pivot row or column
            cands = [(k, j) for k, r in enumerate(rows) if r[j]] + [(i, c) for c, x in enumerate(rows[i]) if x]
            i, j = min(cands, key=lambda ij: abs(rows[ij[0]][ij[1]]))
        out.append(abs(rows[i][j]))
        del rows[i]
        for r in rows:
            r.pop(j)
        rows = [r for r in rows if any(r)]
    return sorted(out)


def invariant_factors(rows, ncols: int | None = None) -> list[int]:
    """Nonzero invariant factors of an integer matrix, in divisibility order.

    Accepts an IntMatrix, a dense list of rows, or a list of sparse rows given as
    ``{column: value}`` dicts (then ``ncols`` is not needed).  Unit pivots are
    eliminated sparsely first, choosing short rows and columns to limit fill-in;
    what remains goes through the dense Smith form.
    """
    if isinstance(rows, IntMatrix):
        rows = rows.entries
    sparse = []
    for r in rows:
        if isinstance(r, dict):
            d = {c: v for c, v in r.items() if v}
        else:
            d = {c: v for c, v in enumerate(r) if v}
        if d:
            sparse.append(d)
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(sparse):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(sparse)))
    units = 0
    heap = [(len(r), i) for i, r in enumerate(sparse)]
    heapq.heapify(heap)
    while heap:
        length, i = heapq.heappop(heap)
        if i not in alive:
            continue
        row = sparse[i]
        if length != len(row):
            heapq.heappush(heap, (len(row), i))
            continue
        cands = [c for c, v in row.items() if v in (1, -1)]
        if not cands:
            continue
        c = min(cands, key=lambda k: len(col_rows[k]))
        s = row[c]
        for j in list(col_rows[c]):
            if j == i:
                continue
            other = sparse[j]
            f = other[c] * s
            for c2, val in row.items():
                nv = other.get(c2, 0) - f * val
                if nv:
                    if c2 not in other:
                        col_rows[c2].add(j)
                    other[c2] = nv
                elif c2 in other:
                    del other[c2]
                    col_rows[c2].discard(j)
            heapq.heappush(heap, (len(other), j))
        for c2 in row:
            col_rows[c2].discard(i)
        alive.discard(i)
        units += 1
    rest = [sparse[i] for i in sorted(alive) if sparse[i]]
    cols = sorted({c for r in rest for c in r})
    pos = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rest]
    for k, r in enumerate(rest):
        for c, val in r.items():
            dense[k][pos[c]] = val
    return [1] * units + sorted(_dense_invariant_factors(dense), key=abs)


# ---------------------------------------------------------------------------
# serialization


def format_coeff(x, field) -> str:
    return field.format(x)


def parse_coeff(s, field):
    return field(s) if isinstance(s, str) else field(s)


def poly_to_json(f: MultiPoly) -> dict:
    """Ordered term list with exact coefficient strings."""
    return {
        "field": f.field.spec(),
        "blocks": [[n, s] for n, s in f.blocks],
        "terms": [[list(e), f.field.format(c)] for e, c in f.sorted_terms()],
    }


def poly_from_json(data: dict) -> MultiPoly:
    field = parse_field(data["field"])
    f = MultiPoly(data["blocks"], field=field)
    for e, c in data["terms"]:
        val = field(c)
        if val != 0:
            f.terms[tuple(e)] = val
    return f


def matrix_to_json(m, field) -> list[list[str]]:
    return [[field.format(x) for x in row] for row in m]


def matrix_from_json(rows, field) -> list[list]:
    return [[field(x) for x in row] for row in rows]

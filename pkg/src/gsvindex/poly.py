"""Exact sparse multivariate polynomial arithmetic over the rationals.

A monomial is an exponent tuple (one non-negative int per ring variable).
A Polynomial stores a map monomial -> nonzero Fraction; the map is the
canonical form, so two polynomials are equal iff their term maps are equal.
No monomial order is baked into storage; orders are passed to consumers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

Monomial = tuple  # exponent tuple, length == nvars


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b, assuming b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


def monomials_of_degree(nvars: int, degree: int):
    """All exponent tuples of the given total degree, sorted."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != nvars:
                    raise ValueError(
                        f"monomial {mono} has wrong length for {nvars} variables"
                    )
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = Fraction(coeff)
                if c != 0:
                    clean[tuple(mono)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(value)})

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(nvars, 1)

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range")
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def term(cls, nvars: int, mono: Monomial, coeff) -> "Polynomial":
        return cls(nvars, {tuple(mono): Fraction(coeff)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, 0) + c
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Polynomial(self.nvars, res)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        res = dict(self.terms)
        for m, c in other.terms.items():
            s = res.get(m, 0) - c
            if s:
                res[m] = s
            else:
                res.pop(m, None)
        return Polynomial(self.nvars, res)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_ring(other)
            res = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = mono_mul(m1, m2)
                    s = res.get(m, 0) + c1 * c2
                    if s:
                        res[m] = s
                    else:
                        del res[m]
            return Polynomial(self.nvars, res)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial.zero(self.nvars)
        return Polynomial(self.nvars, {m: c * v for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, coeff) -> "Polynomial":
        """Multiply by a single term coeff * x^mono."""
        c = Fraction(coeff)
        if c == 0:
            return Polynomial.zero(self.nvars)
        return Polynomial(
            self.nvars, {mono_mul(m, mono): c * v for m, v in self.terms.items()}
        )

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative power")
        result = Polynomial.one(self.nvars)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def diff(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable `index`."""
        res = {}
        for m, c in self.terms.items():
            e = m[index]
            if e:
                m2 = m[:index] + (e - 1,) + m[index + 1 :]
                res[m2] = res.get(m2, 0) + c * e
        return Polynomial(self.nvars, res)

    def total_degree(self) -> int:
        """Max total degree of a term; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(mono_degree(m) == 0 for m in self.terms)

    def extend(self, new_nvars: int) -> "Polynomial":
        """View in a larger ring; new trailing variables get exponent 0."""
        if new_nvars < self.nvars:
            raise ValueError("cannot shrink the ring")
        pad = (0,) * (new_nvars - self.nvars)
        return Polynomial(new_nvars, {m + pad: c for m, c in self.terms.items()})

    def substitute(self, images: "list[Polynomial]") -> "Polynomial":
        """Evaluate at variable images (all in one common target ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        tgt = images[0].nvars if images else self.nvars
        out = Polynomial.zero(tgt)
        powers = [{0: Polynomial.one(tgt)} for _ in range(self.nvars)]
        for m, c in self.terms.items():
            part = Polynomial.constant(tgt, c)
            for i, e in enumerate(m):
                if e:
                    cache = powers[i]
                    if e not in cache:
                        best = max(k for k in cache if k <= e)
                        acc = cache[best]
                        for k in range(best + 1, e + 1):
                            acc = acc * images[i]
                            cache[k] = acc
                    part = part * cache[e]
            out = out + part
        return out

    def _check_ring(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def render(self, names: "list[str] | None" = None) -> str:
        """Canonical string, parseable by the problem-file grammar."""
        if not self.terms:
            return "0"
        if names is None:
            names = default_names(self.nvars)
        monos = sorted(
            self.terms, key=lambda m: (-mono_degree(m), tuple(-e for e in m))
        )
        pieces = []
        for k, m in enumerate(monos):
            c = self.terms[m]
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e > 1:
                    factors.append(f"{names[i]}^{e}")
            mag = abs(c)
            if not factors or mag != 1 or (k == 0 and c < 0):
                factors.insert(0, str(mag))  # a leading "-x" would not re-parse
            body = "*".join(factors)
            if k == 0:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.render()!r})"


def default_names(nvars: int) -> "list[str]":
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


class PolyMatrix:
    """Row-major rectangular matrix of polynomials in a common ring."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        nv = {e.nvars for e in entries}
        if len(nv) > 1:
            raise ValueError("entries live in different rings")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __repr__(self):
        body = "; ".join(
            ", ".join(e.render() for e in self.row(i)) for i in range(self.rows)
        )
        return f"PolyMatrix[{body}]"


def jacobian(fs, nvars: int) -> PolyMatrix:
    """Matrix of partials d f_i / d z_j, len(fs) rows by nvars columns."""
    fs = list(fs)
    entries = []
    for f in fs:
        if f.nvars != nvars:
            raise ValueError("polynomial in the wrong ring")
        for j in range(nvars):
            entries.append(f.diff(j))
    return PolyMatrix(len(fs), nvars, entries)


def _exact_div(num: Polynomial, den: Polynomial) -> Polynomial:
    """Exact polynomial division (raises if den does not divide num)."""
    if den.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero:
        return num
    key = lambda m: (mono_degree(m), m)
    dlm = max(den.terms, key=key)
    dlc = den.terms[dlm]
    quot = {}
    rem = num
    while rem.terms:
        rlm = max(rem.terms, key=key)
        if not mono_divides(dlm, rlm):
            raise ArithmeticError("inexact polynomial division")
        m = mono_div(rlm, dlm)
        c = rem.terms[rlm] / dlc
        quot[m] = c
        rem = rem - den.mul_term(m, c)
    return Polynomial(num.nvars, quot)


def _det_bareiss(sub) -> Polynomial:
    """Fraction-free Bareiss determinant on a square polynomial matrix."""
    k = len(sub)
    nvars = sub[0][0].nvars
    a = [row[:] for row in sub]
    sign = 1
    prev = Polynomial.one(nvars)
    for i in range(k - 1):
        if a[i][i].is_zero:
            for r in range(i + 1, k):
                if not a[r][i].is_zero:
                    a[i], a[r] = a[r], a[i]
                    sign = -sign
                    break
            else:
                return Polynomial.zero(nvars)
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                num = a[i][i] * a[r][c] - a[r][i] * a[i][c]
                a[r][c] = _exact_div(num, prev)
            a[r][i] = Polynomial.zero(nvars)
        prev = a[i][i]
    det = a[k - 1][k - 1]
    return det if sign == 1 else -det


def _det_cofactor(sub) -> Polynomial:
    k = len(sub)
    nvars = sub[0][0].nvars
    if k == 1:
        return sub[0][0]
    total = Polynomial.zero(nvars)
    for j in range(k):
        if sub[0][j].is_zero:
            continue
        minor = [row[:j] + row[j + 1 :] for row in sub[1:]]
        piece = sub[0][j] * _det_cofactor(minor)
        total = total + piece if j % 2 == 0 else total - piece
    return total


def minor_det(matrix: PolyMatrix, rows, cols) -> Polynomial:
    """Determinant of the submatrix selected by equal-length index lists.

    Bareiss for k <= 4, cofactor expansion for larger k; both exact.
    """
    rows = list(rows)
    cols = list(cols)
    if len(rows) != len(cols):
        raise ValueError("row and column selections differ in length")
    for r in rows:
        if not 0 <= r < matrix.rows:
            raise IndexError(f"row index {r} out of range")
    for c in cols:
        if not 0 <= c < matrix.cols:
            raise IndexError(f"column index {c} out of range")
    nvars = matrix.entries[0].nvars if matrix.entries else 1
    k = len(rows)
    if k == 0:
        return Polynomial.one(nvars)
    sub = [[matrix.entry(r, c) for c in cols] for r in rows]
    if k <= 4:
        return _det_bareiss(sub)
    return _det_cofactor(sub)


def linear_substitute(p: Polynomial, A) -> Polynomial:
    """p(A . y): substitute z_i = sum_j A[i][j] * y_j and expand."""
    from . import _linalg

    n = p.nvars
    A = [[Fraction(x) for x in row] for row in A]
    if len(A) != n or any(len(row) != n for row in A):
        raise ValueError("substitution matrix has the wrong shape")
    if _linalg.det(A) == 0:
        raise ValueError("singular substitution matrix")
    images = []
    for i in range(n):
        img = Polynomial.zero(n)
        for j, c in enumerate(A[i]):
            if c:
                img = img + Polynomial.variable(n, j).scale(c)
        images.append(img)
    return p.substitute(images)


def transform_vector_field(X, A) -> "list[Polynomial]":
    """Components of the same field in coordinates y, where z = A . y.

    For linear A this is A^{-1} (X o A), entrywise canonical.
    """
    from . import _linalg

    X = list(X)
    n = X[0].nvars
    if len(X) != n:
        raise ValueError("need one component per variable")
    A = [[Fraction(x) for x in row] for row in A]
    Ainv = _linalg.inverse(A)  # raises on singular input
    pulled = [linear_substitute(comp, A) for comp in X]
    out = []
    for i in range(n):
        acc = Polynomial.zero(n)
        for j in range(n):
            if Ainv[i][j]:
                acc = acc + pulled[j].scale(Ainv[i][j])
        out.append(acc)
    return out

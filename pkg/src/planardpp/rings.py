"""Exact rings and determinants.

* :class:`Poly` -- univariate polynomials over the integers.
* :class:`CycloElem` -- elements of ``R[y] / (y^k - 1)`` with ``R`` the
  integers or :class:`Poly`.  The ring has zero divisors, so determinants over
  it use the division-free clow-sequence recurrence.
* :func:`det_integer` -- fraction-free (Bareiss) elimination.
* :func:`det_poly_matrix` -- determinant of a sparse matrix of integer
  polynomials: evaluation at the powers of a root of unity modulo word-sized
  primes, inverse transform, and Chinese remaindering against a proven
  coefficient bound.  Interpolated coefficients above the degree bound must
  vanish and are checked as residuals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DuplicatePoint, InternalInconsistency, ModulusMismatch, NonIntegerResult

ZERO_DEGREE = -1
"""Degree reported for the zero polynomial."""


class Poly:
    """Integer polynomial, coefficients in ascending degree, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[int, ...] = tuple(c)

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "Poly":
        return cls([0] * exp + [coeff])

    @classmethod
    def from_terms(cls, terms: Mapping[int, int]) -> "Poly":
        if not terms:
            return cls()
        c = [0] * (max(terms) + 1)
        for e, a in terms.items():
            c[e] += a
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    @property
    def min_degree(self) -> int | None:
        """Lowest exponent with a non-zero coefficient; ``None`` for zero."""
        for i, a in enumerate(self.coeffs):
            if a:
                return i
        return None

    def coefficient(self, exp: int) -> int:
        return self.coeffs[exp] if 0 <= exp < len(self.coeffs) else 0

    def terms(self) -> dict[int, int]:
        return {i: a for i, a in enumerate(self.coeffs) if a}

    def __call__(self, x: Any) -> Any:
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        parts = [f"{a}*x^{i}" if i else str(a) for i, a in enumerate(self.coeffs) if a]
        return "Poly(" + " + ".join(parts) + ")"

    @staticmethod
    def _coerce(other: Any) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly([other])
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-a for a in self.coeffs])

    def __sub__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> "Poly":
        return (-self) + other

    def __mul__(self, other: Any) -> "Poly":
        if isinstance(other, int):
            return Poly([a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly()
        if len(b) == 1 or len(a) == 1:
            if len(a) == 1:
                a, b = b, a
            s = b[0]
            return Poly([x * s for x in a])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__


def _is_zero(a: Any) -> bool:
    return not a


class CycloElem:
    """``c_0 + c_1 y + ... + c_{k-1} y^{k-1}`` modulo ``y^k - 1``.

    Coefficients are ints (x already evaluated) or :class:`Poly`.  Negative
    exponents are stored as their residue, so ``y^-1`` is ``y^(k-1)``.
    """

    __slots__ = ("k", "coeffs")

    def __init__(self, k: int, coeffs: Sequence[Any]) -> None:
        if k < 1:
            raise ValueError("modulus k must be positive")
        if len(coeffs) != k:
            raise ValueError(f"expected {k} coefficients, got {len(coeffs)}")
        self.k = k
        self.coeffs = tuple(coeffs)

    @classmethod
    def monomial(cls, k: int, exp: int, coeff: Any = 1) -> "CycloElem":
        c: list[Any] = [0] * k
        c[exp % k] = coeff
        return cls(k, c)

    @classmethod
    def zero(cls, k: int) -> "CycloElem":
        return cls(k, [0] * k)

    @classmethod
    def one(cls, k: int) -> "CycloElem":
        return cls.monomial(k, 0, 1)

    def __bool__(self) -> bool:
        return any(not _is_zero(c) for c in self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CycloElem.monomial(self.k, 0, other)
        if not isinstance(other, CycloElem) or other.k != self.k:
            return False
        return all(_is_zero(a - b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.k, self.coeffs))

    def __repr__(self) -> str:
        return f"CycloElem(k={self.k}, {list(self.coeffs)})"

    def _check(self, other: "CycloElem") -> None:
        if other.k != self.k:
            raise ModulusMismatch(f"moduli differ: y^{self.k} - 1 vs y^{other.k} - 1")

    def __add__(self, other: Any) -> "CycloElem":
        if not isinstance(other, CycloElem):
            return self + CycloElem.monomial(self.k, 0, other)
        self._check(other)
        return CycloElem(self.k, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CycloElem":
        return CycloElem(self.k, [-a for a in self.coeffs])

    def __sub__(self, other: Any) -> "CycloElem":
        return self + (-other)

    def __rsub__(self, other: Any) -> "CycloElem":
        return (-self) + other

    def _support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if not _is_zero(c)]

    def __mul__(self, other: Any) -> "CycloElem":
        if not isinstance(other, CycloElem):
            return CycloElem(self.k, [a * other for a in self.coeffs])
        self._check(other)
        k = self.k
        sa, sb = self._support(), other._support()
        out: list[Any] = [0] * k
        for i in sa:
            a = self.coeffs[i]
            for j in sb:
                out[(i + j) % k] = out[(i + j) % k] + a * other.coeffs[j]
        return CycloElem(k, out)

    __rmul__ = __mul__

    def at_x(self, x: int) -> "CycloElem":
        """Evaluate polynomial coefficients at an integer ``x``."""
        return CycloElem(self.k, [c(x) if isinstance(c, Poly) else c for c in self.coeffs])


def cyclo_mul(a: CycloElem, b: CycloElem) -> CycloElem:
    return a * b


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------


def det_integer(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    a = [[int(x) for x in row] for row in mat]
    sign = 1
    prev = 1
    for j in range(n - 1):
        if a[j][j] == 0:
            for r in range(j + 1, n):
                if a[r][j]:
                    a[j], a[r] = a[r], a[j]
                    sign = -sign
                    break
            else:
                return 0
        pj = a[j][j]
        row_j = a[j]
        for i in range(j + 1, n):
            row_i = a[i]
            aij = row_i[j]
            for c in range(j + 1, n):
                row_i[c] = (row_i[c] * pj - aij * row_j[c]) // prev
            row_i[j] = 0
        prev = pj
    return sign * a[n - 1][n - 1]


def det_division_free(mat: Sequence[Sequence[Any]]) -> Any:
    """Determinant over a commutative ring without using division.

    Mahajan-Vinay clow sequences: the determinant is the signed sum over
    sequences of closed walks (each walk's start is its least vertex, starts
    strictly increasing, total length n); non-cycle-cover sequences cancel in
    pairs, so no inverse is ever needed.  Cost O(n^2) states per layer times
    the number of non-zero entries.
    """
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix must be square")
    sample = next((x for row in mat for x in row if isinstance(x, CycloElem)), None)
    if sample is not None:
        k = sample.k
        for row in mat:
            for x in row:
                if isinstance(x, CycloElem) and x.k != k:
                    raise ModulusMismatch(f"entries mix moduli {k} and {x.k}")
        one: Any = CycloElem.one(k)
        zero: Any = CycloElem.zero(k)
    else:
        one, zero = 1, 0
    if n == 0:
        return one
    out = [[(v, mat[u][v]) for v in range(n) if not _is_zero(mat[u][v])] for u in range(n)]
    cur: dict[tuple[int, int], Any] = {(h, h): one for h in range(n)}
    result = zero
    for layer in range(n):
        nxt: dict[tuple[int, int], Any] = {}
        closed: dict[int, Any] = {}
        for (h, u), val in cur.items():
            for v, w in out[u]:
                if v > h:
                    key = (h, v)
                    t = val * w
                    nxt[key] = nxt[key] + t if key in nxt else t
                elif v == h:
                    t = val * w
                    closed[h] = closed[h] + t if h in closed else t
        if layer + 1 == n:
            for t in closed.values():
                result = result - t
            break
        acc = None
        for h in range(n):
            if acc is not None and not _is_zero(acc):
                key = (h, h)
                nxt[key] = nxt[key] - acc if key in nxt else -acc
            if h in closed:
                acc = closed[h] if acc is None else acc + closed[h]
        cur = {key: val for key, val in nxt.items() if not _is_zero(val)}
    return result if n % 2 == 0 else -result


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------


def interpolate(points: Sequence[tuple[int, int]], degree: int) -> Poly:
    """Integer polynomial of degree <= ``degree`` through ``points``.

    Uses the first ``degree + 1`` points (exact rational Newton form); any
    further points are residual checks.
    """
    xs = [int(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicatePoint("interpolation nodes must be distinct")
    if len(points) < degree + 1:
        raise ValueError(f"need {degree + 1} points, got {len(points)}")
    m = degree + 1
    xs_fit = xs[:m]
    dd = [Fraction(int(y)) for _, y in points[:m]]
    for j in range(1, m):
        for i in range(m - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs_fit[i] - xs_fit[i - j])
    coeffs = [Fraction(0)] * m
    coeffs[0] = dd[m - 1]
    size = 1
    for j in range(m - 2, -1, -1):
        new = [Fraction(0)] * m
        for i in range(size):
            new[i + 1] += coeffs[i]
            new[i] -= coeffs[i] * xs_fit[j]
        new[0] += dd[j]
        coeffs = new
        size += 1
    if any(c.denominator != 1 for c in coeffs):
        raise NonIntegerResult("interpolated polynomial has non-integer coefficients")
    poly = Poly([c.numerator for c in coeffs])
    for x, y in points[m:]:
        if poly(int(x)) != int(y):
            raise InternalInconsistency(f"degree bound {degree} too small: residual at x={x}")
    return poly


# ---------------------------------------------------------------------------
# multi-modular determinant of sparse polynomial matrices
# ---------------------------------------------------------------------------

_WORD = 2**31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):  # deterministic below 3.2e9
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


def _odd_factors(c: int) -> list[int]:
    out, f = [], 3
    while f * f <= c:
        if c % f == 0:
            out.append(f)
            while c % f == 0:
                c //= f
        f += 2
    if c > 1:
        out.append(c)
    return out


def _ntt_primes(log_size: int) -> Iterator[tuple[int, int]]:
    """Primes ``p = c * 2^s + 1 < 2^31`` with ``s >= log_size``, each paired
    with an element of multiplicative order exactly ``2^log_size``."""
    size = 1 << log_size
    step = 1 << max(1, log_size)  # p - 1 even: c * 1 + 1 is never an odd prime
    c = ((_WORD - 2) // step) | 1
    while c > 0:
        p = c * step + 1
        if _is_prime(p):
            qs = [2] + _odd_factors(c)
            g = next(
                g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1 for q in qs)
            )
            yield p, pow(g, (p - 1) // size, p)
        c -= 2
    raise InternalInconsistency("ran out of transform-friendly primes")


def _ntt(a: np.ndarray, root: int, p: int) -> np.ndarray:
    """``out[i] = sum_j a[j] * root^(i*j) mod p`` along axis 0 (length a power of 2)."""
    n = a.shape[0]
    a = a % p
    h = n // 2
    w = root
    while h >= 1:
        tw = _powers(w, h, p)
        blocks = a.reshape((n // (2 * h), 2, h) + a.shape[1:])
        x = blocks[:, 0].copy()
        y = blocks[:, 1]
        blocks[:, 0] = (x + y) % p
        shape = (1, h) + (1,) * (a.ndim - 1)
        blocks[:, 1] = (x - y) % p * tw.reshape(shape) % p
        a = blocks.reshape(a.shape)
        w = w * w % p
        h //= 2
    return a[_bitrev(n)]


def _powers(w: int, count: int, p: int) -> np.ndarray:
    out = np.empty(count, dtype=np.int64)
    out[0] = 1
    step = 1
    while step < count:
        take = min(step, count - step)
        out[step : step + take] = out[:take] * pow(w, step, p) % p
        step += take
    return out


@lru_cache(maxsize=None)
def _bitrev(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _interpolate_ntt(vals: np.ndarray, root: int, p: int) -> np.ndarray:
    """Coefficients mod ``p`` from values at ``root^0 .. root^(N-1)``."""
    n = vals.shape[0]
    coeffs = _ntt(vals, pow(root, p - 2, p), p)
    return coeffs * pow(n, p - 2, p) % p


def _pow_vec(base: np.ndarray, exp: int, p: int) -> np.ndarray:
    result = np.ones_like(base)
    b = base % p
    while exp:
        if exp & 1:
            result = result * b % p
        b = b * b % p
        exp >>= 1
    return result


def _batch_det_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod ``p`` of a stack of matrices, shape (P, N, N).

    Inverse-free row operations ``r_i <- piv * r_i - a_ij * r_j`` scale the
    determinant by ``piv`` per updated row; that factor is divided out with a
    single inversion at the end.
    """
    P, N, _ = a.shape
    num = np.ones(P, dtype=np.int64)
    den = np.ones(P, dtype=np.int64)
    rows = np.arange(P)
    for j in range(N):
        nz = a[:, j:, j] != 0
        has = nz.any(axis=1)
        num[~has] = 0
        piv = j + nz.argmax(axis=1)
        swap = has & (piv != j)
        if swap.any():
            r = rows[swap]
            pr = piv[swap]
            tmp = a[r, j, :].copy()
            a[r, j, :] = a[r, pr, :]
            a[r, pr, :] = tmp
            num[swap] = (p - num[swap]) % p
        pivot = a[:, j, j].copy()
        num = num * pivot % p
        if j + 1 == N:
            break
        pivot[pivot == 0] = 1
        den = den * _pow_vec(pivot, N - 1 - j, p) % p
        f = a[:, j + 1 :, j].copy()
        a[:, j + 1 :, j:] = (a[:, j + 1 :, j:] * pivot[:, None, None] - f[:, :, None] * a[:, None, j, j:]) % p
    return num * _pow_vec(den, p - 2, p) % p


def _eliminate_unit_pivots(
    n: int,
    entries: Mapping[tuple[int, int], Mapping[Any, int]],
    add: Callable[[Any, Any], Any],
    unit: Any,
) -> tuple[int, dict[tuple[int, int], dict[Any, int]]]:
    """Schur complement on indices whose diagonal is exactly 1.

    An independent set ``I`` of such indices (no entries among them) has
    ``B_II = 1``, so ``det B = det(B_rr - B_rI B_Ir)`` with every entry
    still a sparse polynomial.  Repeats while new candidates appear; returns
    the remaining dimension and re-indexed entries.
    """
    rows: dict[int, dict[int, dict[Any, int]]] = {i: {} for i in range(n)}
    cols: dict[int, set[int]] = {i: set() for i in range(n)}
    for (i, j), cell in entries.items():
        cell = {key: c for key, c in cell.items() if c}
        if cell:
            rows[i][j] = dict(cell)
            cols[j].add(i)
    while True:
        chosen: list[int] = []
        blocked: set[int] = set()
        for i in sorted(rows):
            if i in blocked or rows[i].get(i) != {unit: 1}:
                continue
            chosen.append(i)
            blocked.add(i)
            blocked.update(rows[i])
            blocked.update(cols[i])
        if not chosen:
            break
        chosen_set = set(chosen)
        for v in chosen:
            outs = [(j, c) for j, c in rows[v].items() if j != v]
            for i in cols[v]:
                if i in chosen_set:
                    continue
                left = rows[i][v]
                for j, right in outs:
                    cell = rows[i].setdefault(j, {})
                    cols[j].add(i)
                    for ka, ca in left.items():
                        for kb, cb in right.items():
                            key = add(ka, kb)
                            cell[key] = cell.get(key, 0) - ca * cb
        for v in chosen:
            for j in rows[v]:
                cols[j].discard(v)
            for i in cols[v]:
                rows[i].pop(v, None)
            del rows[v]
            del cols[v]
        for i in rows:
            for j in [j for j, cell in rows[i].items() if not any(cell.values())]:
                del rows[i][j]
                cols[j].discard(i)
            for cell in rows[i].values():
                for key in [key for key, c in cell.items() if not c]:
                    del cell[key]
    index = {v: t for t, v in enumerate(sorted(rows))}
    out = {(index[i], index[j]): cell for i, row in rows.items() for j, cell in row.items()}
    return len(index), out


def _magnitude_bits(n: int, entries: Mapping[tuple[int, int], Mapping[Any, int]]) -> float:
    """log2 of a bound on every coefficient of the determinant.

    Each coefficient is at most the permanent of the matrix of entry
    1-norms: for a 0/1 pattern Bregman's bound ``prod (r_i!)^(1/r_i)``
    applies, otherwise the product of row sums.
    """
    norms: dict[tuple[int, int], int] = {}
    for key, cell in entries.items():
        t = sum(abs(c) for c in cell.values())
        if t:
            norms[key] = t
    row_sum = [0] * n
    for (i, _), t in norms.items():
        row_sum[i] += t
    if any(r == 0 for r in row_sum):
        return 0.0
    if all(t == 1 for t in norms.values()):
        return sum(math.lgamma(r + 1) / math.log(2) / r for r in row_sum)
    return sum(math.log2(r) for r in row_sum)


def _degree_bound(n: int, entries: Mapping[tuple[int, int], Mapping[Any, int]], deg: Callable[[Any], int]) -> int:
    """Sum over rows of the largest exponent; -1 if some row is empty."""
    row_deg = [-1] * n
    for (i, _), cell in entries.items():
        for key, c in cell.items():
            if c:
                row_deg[i] = max(row_deg[i], deg(key))
    return -1 if min(row_deg) < 0 else sum(row_deg)


def det_poly_matrix(n: int, entries: Mapping[tuple[int, int], Mapping[int, int]], chunk_elems: int = 1 << 22) -> Poly:
    """Determinant of an ``n x n`` matrix with sparse integer-polynomial entries.

    ``entries[(i, j)]`` maps exponent -> coefficient.  The degree bound is the
    sum over rows of the largest exponent in the row and the magnitude bound
    is a permanent bound on the entry 1-norms, so the reconstruction is exact.
    Unit diagonal pivots are eliminated symbolically first.
    """
    if n == 0:
        return Poly([1])
    degree = _degree_bound(n, entries, lambda e: e)
    if degree < 0:
        return Poly()
    bound_bits = _magnitude_bits(n, entries) + 2
    n, entries = _eliminate_unit_pivots(n, entries, lambda a, b: a + b, 0)
    if n == 0:
        return Poly([1])
    reduced_degree = _degree_bound(n, entries, lambda e: e)
    if reduced_degree < 0:
        return Poly()
    degree = min(degree, reduced_degree)
    log_size = max(0, degree).bit_length()
    npts = 1 << log_size
    exps = sorted({e for poly in entries.values() for e in poly})
    per_chunk = max(1, chunk_elems // (n * n))
    residues: list[np.ndarray] = []
    moduli: list[int] = []
    bits = 0.0
    for p, root in _ntt_primes(log_size):
        xs = _powers(root, npts, p)
        powers = {e: _pow_vec(xs, e, p) for e in exps}
        vals = np.empty(npts, dtype=np.int64)
        for start in range(0, npts, per_chunk):
            stop = min(npts, start + per_chunk)
            mats = np.zeros((stop - start, n, n), dtype=np.int64)
            for (i, j), poly in entries.items():
                acc = np.zeros(stop - start, dtype=np.int64)
                for e, c in poly.items():
                    acc = (acc + (c % p) * powers[e][start:stop]) % p
                mats[:, i, j] = acc
            vals[start:stop] = _batch_det_mod(mats, p)
        residues.append(_truncate(_interpolate_ntt(vals, root, p), degree, p))
        moduli.append(p)
        bits += math.log2(p)
        if bits > bound_bits:
            break
    return Poly(_crt_symmetric(residues, moduli))


def _truncate(coeffs: np.ndarray, degree: int, p: int) -> np.ndarray:
    """Drop coefficients above ``degree`` after checking they vanish."""
    if np.any(coeffs[degree + 1 :]):
        raise InternalInconsistency(f"interpolation residual above degree bound {degree} (mod {p})")
    return coeffs[: degree + 1]


def _crt_symmetric(residues: Sequence[np.ndarray], moduli: Sequence[int]) -> list[int]:
    out = [int(r) for r in residues[0]]
    modulus = moduli[0]
    for res, p in zip(residues[1:], moduli[1:]):
        inv = pow(modulus, -1, p)
        for i, r in enumerate(res):
            t = (int(r) - out[i]) * inv % p
            out[i] += modulus * t
        modulus *= p
    half = modulus // 2
    return [v - modulus if v > half else v for v in out]


def _clow_mod(
    n: int,
    k: int,
    out: Sequence[Sequence[tuple[int, Sequence[tuple[int, np.ndarray]]]]],
    npts: int,
    p: int,
) -> np.ndarray:
    """Clow-sequence determinant mod ``p`` over ``Z_p[y]/(y^k - 1)``, vectorised
    over the evaluation points; returns shape (npts, k)."""
    shape = (npts, k)
    one = np.zeros(shape, dtype=np.int64)
    one[:, 0] = 1
    cur: dict[tuple[int, int], np.ndarray] = {(h, h): one for h in range(n)}
    result = np.zeros(shape, dtype=np.int64)
    for layer in range(n):
        nxt: dict[tuple[int, int], np.ndarray] = {}
        closed: dict[int, np.ndarray] = {}
        for (h, u), val in cur.items():
            for v, terms in out[u]:
                if v < h:
                    continue
                t = None
                for ye, xv in terms:
                    part = val * xv[:, None] % p
                    if ye:
                        part = np.roll(part, ye, axis=1)
                    t = part if t is None else t + part
                if v > h:
                    key = (h, v)
                    nxt[key] = (nxt[key] + t) % p if key in nxt else t % p
                else:
                    closed[h] = (closed[h] + t) % p if h in closed else t % p
        if layer + 1 == n:
            for t in closed.values():
                result = (result - t) % p
            break
        acc = None
        for h in range(n):
            if acc is not None:
                key = (h, h)
                nxt[key] = (nxt[key] - acc) % p if key in nxt else (-acc) % p
            if h in closed:
                acc = closed[h] if acc is None else (acc + closed[h]) % p
        cur = nxt
    return result if n % 2 == 0 else (-result) % p


def det_cyclo_poly_matrix(
    n: int, k: int, entries: Mapping[tuple[int, int], Mapping[tuple[int, int], int]]
) -> list[Poly]:
    """Determinant over ``Z[x][y]/(y^k - 1)`` of a sparse matrix.

    ``entries[(i, j)]`` maps ``(x exponent, y exponent)`` -> coefficient.
    Returns the x-polynomial of every y-class ``0..k-1``.  The clow-sequence
    recursion runs once per prime with all x points at once; bounds as in
    :func:`det_poly_matrix` make the reconstruction exact.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if n == 0:
        return [Poly([1])] + [Poly()] * (k - 1)
    degree = _degree_bound(n, entries, lambda key: key[0])
    if degree < 0:
        return [Poly() for _ in range(k)]
    bound_bits = _magnitude_bits(n, entries) + 2
    n, entries = _eliminate_unit_pivots(n, entries, lambda a, b: (a[0] + b[0], (a[1] + b[1]) % k), (0, 0))
    if n == 0:
        return [Poly([1])] + [Poly()] * (k - 1)
    reduced_degree = _degree_bound(n, entries, lambda key: key[0])
    if reduced_degree < 0:
        return [Poly() for _ in range(k)]
    degree = min(degree, reduced_degree)
    log_size = max(0, degree).bit_length()
    npts = 1 << log_size
    residues: list[list[np.ndarray]] = [[] for _ in range(k)]
    moduli: list[int] = []
    bits = 0.0
    for p, root in _ntt_primes(log_size):
        xs = _powers(root, npts, p)
        powers: dict[int, np.ndarray] = {}
        out: list[list[tuple[int, list[tuple[int, np.ndarray]]]]] = [[] for _ in range(n)]
        for (i, j), cell in sorted(entries.items()):
            by_y: dict[int, np.ndarray] = {}
            for (xe, ye), c in cell.items():
                if xe not in powers:
                    powers[xe] = _pow_vec(xs, xe, p)
                term = (c % p) * powers[xe] % p
                ye %= k
                by_y[ye] = (by_y[ye] + term) % p if ye in by_y else term
            out[i].append((j, sorted(by_y.items())))
        vals = _clow_mod(n, k, out, npts, p)
        coeffs = _truncate(_interpolate_ntt(vals, root, p), degree, p)
        for cls in range(k):
            residues[cls].append(coeffs[:, cls])
        moduli.append(p)
        bits += math.log2(p)
        if bits > bound_bits:
            break
    return [Poly(_crt_symmetric(residues[cls], moduli)) for cls in range(k)]

"""Exact arithmetic over F_p: vectors, multisets, and span decompositions.

Everything here is immutable after construction and safe to share across
threads.  Dense tables elsewhere in the package are indexed by the canonical
mixed-radix encoding fixed in this module: coordinate 0 is most significant,
so index(v) = sum(v[i] * p**(n-1-i)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from . import config
from .errors import CapExceededError, NotInSpanError


def is_prime(p: int) -> bool:
    """Deterministic primality by trial division (desk-scale inputs)."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A verified prime modulus."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"modulus must be a prime >= 2, got {self.p!r}")

    def __int__(self) -> int:
        return self.p


def _as_prime(p) -> int:
    if isinstance(p, PrimeModulus):
        return p.p
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"modulus must be a prime >= 2, got {p}")
    return p


def ring_size(p: int, n: int) -> int:
    return p**n


def check_ring_cap(p: int, n: int, cap: Optional[int] = None) -> int:
    """Return p**n, raising CapExceededError above the configured cap."""
    cap = config.RING_SIZE_CAP if cap is None else cap
    size = ring_size(p, n)
    if size > cap:
        raise CapExceededError(f"p^n = {p}^{n} = {size} exceeds cap {cap}")
    return size


@dataclass(frozen=True)
class FpVector:
    """An immutable vector in F_p^n with componentwise arithmetic mod p."""

    p: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        p = _as_prime(self.p)
        object.__setattr__(self, "p", p)
        c = tuple(int(x) for x in self.coords)
        if any(x < 0 or x >= p for x in c):
            raise ValueError(f"coordinates must lie in [0, {p - 1}], got {c}")
        object.__setattr__(self, "coords", c)

    @property
    def n(self) -> int:
        return len(self.coords)

    @classmethod
    def from_index(cls, p: int, n: int, index: int) -> "FpVector":
        coords = []
        for _ in range(n):
            coords.append(index % p)
            index //= p
        return cls(p, tuple(reversed(coords)))

    @property
    def index(self) -> int:
        """Canonical mixed-radix index, coordinate 0 most significant."""
        out = 0
        for x in self.coords:
            out = out * self.p + x
        return out

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def __add__(self, other: "FpVector") -> "FpVector":
        self._check_compatible(other)
        return FpVector(self.p, tuple((a + b) % self.p for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "FpVector") -> "FpVector":
        self._check_compatible(other)
        return FpVector(self.p, tuple((a - b) % self.p for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "FpVector":
        return FpVector(self.p, tuple((-a) % self.p for a in self.coords))

    def scale(self, c: int) -> "FpVector":
        c = c % self.p
        return FpVector(self.p, tuple((c * a) % self.p for a in self.coords))

    def __rmul__(self, c: int) -> "FpVector":
        return self.scale(c)

    def dot(self, other: "FpVector") -> int:
        self._check_compatible(other)
        return sum(a * b for a, b in zip(self.coords, other.coords)) % self.p

    def _check_compatible(self, other: "FpVector") -> None:
        if self.p != other.p or self.n != other.n:
            raise ValueError(
                f"incompatible vectors: F_{self.p}^{self.n} vs F_{other.p}^{other.n}"
            )

    def __repr__(self) -> str:
        return f"FpVector(p={self.p}, {list(self.coords)})"


@dataclass(frozen=True)
class FpMultiset:
    """An ordered multiset of F_p^n vectors; multiplicity by repetition.

    Entry order is significant: per-entry data (scalings, twists, relation
    coefficients) align with positions, and repeated vectors are distinct
    entries.
    """

    p: int
    n: int
    entries: tuple[FpVector, ...]

    def __post_init__(self) -> None:
        p = _as_prime(self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "n", int(self.n))
        ent = tuple(self.entries)
        for v in ent:
            if not isinstance(v, FpVector) or v.p != p or v.n != self.n:
                raise ValueError(f"entry {v!r} does not live in F_{p}^{self.n}")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_coords(cls, p: int, vectors: Iterable[Sequence[int]], n: Optional[int] = None) -> "FpMultiset":
        p = _as_prime(p)
        vecs = [FpVector(p, tuple(int(x) % p for x in v)) for v in vectors]
        if n is None:
            if not vecs:
                raise ValueError("ambient dimension required for an empty multiset")
            n = vecs[0].n
        return cls(p, n, tuple(vecs))

    @property
    def size(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[FpVector]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> FpVector:
        return self.entries[i]

    def sorted(self) -> "FpMultiset":
        """Canonical form: entries in ascending lexicographic coordinate order."""
        return FpMultiset(self.p, self.n, tuple(sorted(self.entries, key=lambda v: v.coords)))

    def without(self, index: int) -> "FpMultiset":
        ent = self.entries[:index] + self.entries[index + 1 :]
        return FpMultiset(self.p, self.n, ent)

    def support(self) -> tuple[FpVector, ...]:
        """Distinct vectors, in ascending coordinate order."""
        return tuple(sorted(set(self.entries), key=lambda v: v.coords))

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "vectors": [list(v.coords) for v in self.entries]}

    @classmethod
    def from_dict(cls, data: dict) -> "FpMultiset":
        return cls.from_coords(data["p"], data["vectors"], n=data["n"])

    def __repr__(self) -> str:
        return f"FpMultiset(p={self.p}, n={self.n}, {[list(v.coords) for v in self.entries]})"


def coords_array(V: FpMultiset) -> np.ndarray:
    """Entries as an int64 array of shape (len(V), n)."""
    if not V.entries:
        return np.zeros((0, V.n), dtype=np.int64)
    return np.array([v.coords for v in V.entries], dtype=np.int64)


def rref_mod_p(rows: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p with deterministic pivoting.

    Pivots are chosen as the first row with a nonzero entry in the lowest
    unresolved column, so the output basis is reproducible.
    Returns (rref rows without zero rows, pivot column list).
    """
    m = np.array(rows, dtype=np.int64) % p
    if m.ndim != 2:
        m = m.reshape(len(rows), -1)
    nrows, ncols = m.shape
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        sel = None
        for row in range(rank, nrows):
            if m[row, col] % p != 0:
                sel = row
                break
        if sel is None:
            continue
        if sel != rank:
            m[[rank, sel]] = m[[sel, rank]]
        inv = pow(int(m[rank, col]), -1, p)
        m[rank] = (m[rank] * inv) % p
        for row in range(nrows):
            if row != rank and m[row, col] % p != 0:
                m[row] = (m[row] - m[row, col] * m[rank]) % p
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return m[:rank] % p, pivots


def span_dimension(V: FpMultiset) -> int:
    """Rank of the multiset's support, by elimination mod p."""
    if not V.entries:
        return 0
    _, pivots = rref_mod_p(coords_array(V), V.p)
    return len(pivots)


def solve_combination(vectors: Sequence[FpVector], x: FpVector) -> Optional[list[int]]:
    """Coefficients c with sum(c_i * v_i) = x, or None if x is not in the span.

    Deterministic: elimination with canonical pivoting; coefficients of
    entries unused by the pivot structure are 0.
    """
    p = x.p
    n = x.n
    if not vectors:
        return [] if x.is_zero() else None
    # Solve M^T c = x where columns of M^T are the vectors.
    aug = np.zeros((n, len(vectors) + 1), dtype=np.int64)
    for j, v in enumerate(vectors):
        aug[:, j] = v.coords
    aug[:, len(vectors)] = x.coords
    m = aug % p
    pivots: list[tuple[int, int]] = []
    rank = 0
    for col in range(len(vectors)):
        sel = None
        for row in range(rank, n):
            if m[row, col] % p != 0:
                sel = row
                break
        if sel is None:
            continue
        if sel != rank:
            m[[rank, sel]] = m[[sel, rank]]
        inv = pow(int(m[rank, col]), -1, p)
        m[rank] = (m[rank] * inv) % p
        for row in range(n):
            if row != rank and m[row, col] % p != 0:
                m[row] = (m[row] - m[row, col] * m[rank]) % p
        pivots.append((rank, col))
        rank += 1
        if rank == n:
            break
    # Inconsistency: a zero row with nonzero rhs.
    for row in range(rank, n):
        if m[row, len(vectors)] % p != 0:
            return None
    coeffs = [0] * len(vectors)
    for row, col in pivots:
        coeffs[col] = int(m[row, len(vectors)]) % p
    # Re-verify (cheap, and guards elimination bugs).
    acc = FpVector(p, (0,) * n)
    for c, v in zip(coeffs, vectors):
        acc = acc + v.scale(c)
    if acc != x:
        return None
    return coeffs


@dataclass(frozen=True)
class SpanDecomposition:
    """Split of F_p^n into T = span(V) and a complement coordinate system.

    The basis of T is in reduced echelon form with pivot columns
    `pivot_cols`; the complement S is coordinatized by the remaining
    (free) columns.  For any x, project gives (x_S, x_T) with
    x_T in T, x - x_T supported on the free columns, and x_S the free-column
    coordinates of x - x_T.  reassemble(project(x)) == x.
    """

    p: int
    n: int
    basis: tuple[FpVector, ...]
    pivot_cols: tuple[int, ...]
    free_cols: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        free = tuple(c for c in range(self.n) if c not in set(self.pivot_cols))
        object.__setattr__(self, "free_cols", free)

    @property
    def dim_t(self) -> int:
        return len(self.basis)

    @property
    def dim_s(self) -> int:
        return self.n - len(self.basis)

    def t_component(self, x: FpVector) -> FpVector:
        acc = FpVector(self.p, (0,) * self.n)
        for b, col in zip(self.basis, self.pivot_cols):
            acc = acc + b.scale(x.coords[col])
        return acc

    def project(self, x: FpVector) -> tuple[FpVector, FpVector]:
        if x.p != self.p or x.n != self.n:
            raise ValueError("vector does not live in the decomposed space")
        x_t = self.t_component(x)
        rem = x - x_t
        x_s = FpVector(self.p, tuple(rem.coords[c] for c in self.free_cols))
        return x_s, x_t

    def reassemble(self, x_s: FpVector, x_t: FpVector) -> FpVector:
        if x_s.n != self.dim_s:
            raise ValueError(f"complement part must have {self.dim_s} coordinates")
        coords = list(x_t.coords)
        for val, col in zip(x_s.coords, self.free_cols):
            coords[col] = (coords[col] + val) % self.p
        return FpVector(self.p, tuple(coords))

    def t_coefficients(self, x: FpVector) -> Optional[list[int]]:
        """Coefficients of x in the T-basis, or None if x is not in T."""
        return solve_combination(list(self.basis), x)

    def contains(self, x: FpVector) -> bool:
        x_s, x_t = self.project(x)
        return x_s.is_zero() and x == x_t


def quotient_split(V: FpMultiset, n: Optional[int] = None) -> SpanDecomposition:
    """Deterministic SpanDecomposition of the ambient space along span(V)."""
    n = V.n if n is None else n
    if n != V.n:
        raise ValueError(f"ambient dimension {n} does not match multiset dimension {V.n}")
    if not V.entries:
        return SpanDecomposition(V.p, n, (), ())
    rref, pivots = rref_mod_p(coords_array(V), V.p)
    basis = tuple(FpVector(V.p, tuple(int(x) for x in row)) for row in rref)
    return SpanDecomposition(V.p, n, basis, tuple(pivots))


def scale_multiset(V: FpMultiset, scalars: Sequence[int]) -> FpMultiset:
    """Entrywise scaling {a_v * v}; every scalar must be nonzero mod p."""
    if len(scalars) != V.size:
        raise ValueError(f"need {V.size} scalars, got {len(scalars)}")
    out = []
    for a, v in zip(scalars, V.entries):
        a = int(a) % V.p
        if a == 0:
            raise ValueError("scaling coefficients must be nonzero mod p")
        out.append(v.scale(a))
    return FpMultiset(V.p, V.n, tuple(out))


def enumerate_vectors(p: int, n: int, cap: Optional[int] = None) -> Iterator[FpVector]:
    """All p^n vectors in canonical index order (lexicographic on coords)."""
    p = _as_prime(p)
    check_ring_cap(p, n, cap)
    coords = [0] * n
    while True:
        yield FpVector(p, tuple(coords))
        i = n - 1
        while i >= 0 and coords[i] == p - 1:
            coords[i] = 0
            i -= 1
        if i < 0:
            return
        coords[i] += 1


def coords_matrix(p: int, n: int, cap: Optional[int] = None) -> np.ndarray:
    """All p^n coordinate rows (int64, shape (p^n, n)) in canonical order."""
    size = check_ring_cap(p, n, cap)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    dims = (p,) * n
    unr = np.unravel_index(np.arange(size), dims)
    return np.stack(unr, axis=1).astype(np.int64)

"""Arithmetic ("balanced") subsets of F_p.

A set A is r-arithmetic when

  * every a in A has a common difference b != 0 with a + i*b in A for all
    i in [-r, r]  (a is the center of a (2r+1)-term progression in A), and
  * every a outside A has a common difference b != 0 with a + i*b in A for
    all i in [1, r]  (an r-term progression starting next to a lands in A).

With r = 1 the first clause is the classical balanced-set condition and the
second is satisfied by any nonempty set.  Witnesses are re-checkable in
O(p*r) time given the table.

Note on the out-of-set clause: requiring the difference b to itself belong
to A (instead of merely b != 0) would force |A|^2 + 1 >= p, contradicting
the known Theta(log p) minimum size; the b != 0 form is what the descent
algorithm in `decomposition` actually consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np

from . import _kernels, config
from .errors import CapExceededError, SearchBudgetExceededError
from .fp_core import _as_prime


def floor_log2(p: int) -> int:
    return p.bit_length() - 1


def log_lower_bound(p: int) -> int:
    """Smallest admissible size: ceil(1 + log2 p)."""
    return 1 + (p - 1).bit_length()


def size_lower_bound(p: int, r: int) -> int:
    """Provable lower bound on the size of any r-arithmetic subset of F_p.

    The centered progression of any member has min(2r+1, p) distinct
    elements, and every r-arithmetic set is 1-arithmetic, so the balanced-set
    logarithmic bound applies for every r.
    """
    return max(min(2 * r + 1, p), log_lower_bound(p), 1)


@dataclass(frozen=True)
class ArithmeticCheck:
    """Outcome of a verification: witnesses on success, a failing element otherwise."""

    ok: bool
    p: int
    r: int
    witnesses: Optional[dict[int, int]] = None
    failing: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def _progression_ok(members: frozenset[int], p: int, a: int, b: int, lo: int, hi: int) -> bool:
    return all((a + i * b) % p in members for i in range(lo, hi + 1))


def _witness_for(members: frozenset[int], p: int, r: int, a: int) -> Optional[int]:
    """Smallest valid difference b for element a, or None."""
    inside = a in members
    lo = -r if inside else 1
    for b in range(1, p):
        if _progression_ok(members, p, a, b, lo, r):
            return b
    return None


def is_r_arithmetic(elements: Sequence[int] | frozenset[int], r: int, p: int) -> ArithmeticCheck:
    """Verify the r-arithmetic property, returning witnesses or a failing element."""
    p = _as_prime(p)
    if not 1 <= r <= p - 1:
        raise ValueError(f"r must lie in [1, p-1], got {r}")
    members = frozenset(int(x) % p for x in elements)
    witnesses: dict[int, int] = {}
    for a in range(p):
        b = _witness_for(members, p, r, a)
        if b is None:
            return ArithmeticCheck(False, p, r, failing=a)
        witnesses[a] = b
    return ArithmeticCheck(True, p, r, witnesses=witnesses)


def verify_witness_table(
    elements: Sequence[int] | frozenset[int], r: int, p: int, witnesses: dict[int, int]
) -> bool:
    """Check an explicitly supplied witness table in O(p*r) time."""
    members = frozenset(int(x) % p for x in elements)
    for a in range(p):
        if a not in witnesses:
            return False
        b = witnesses[a] % p
        if b == 0:
            return False
        lo = -r if a in members else 1
        if not _progression_ok(members, p, a, b, lo, r):
            return False
    return True


@dataclass(frozen=True)
class ArithmeticSet:
    """A verified r-arithmetic set with its witness table."""

    p: int
    r: int
    elements: frozenset[int]
    witnesses: dict[int, int]

    def __post_init__(self) -> None:
        if not verify_witness_table(self.elements, self.r, self.p, self.witnesses):
            raise ValueError("witness table does not verify")

    @classmethod
    def verified(cls, elements: Sequence[int] | frozenset[int], r: int, p: int) -> "ArithmeticSet":
        check = is_r_arithmetic(elements, r, p)
        if not check:
            raise ValueError(
                f"set {sorted(set(elements))} is not {r}-arithmetic mod {p}: "
                f"element {check.failing} has no valid difference"
            )
        return cls(p, r, frozenset(int(x) % p for x in elements), check.witnesses)

    @property
    def size(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> list[int]:
        return sorted(self.elements)

    def in_witness(self, a: int) -> int:
        """Centered-progression difference for a member."""
        if a % self.p not in self.elements:
            raise KeyError(f"{a} is not a member")
        return self.witnesses[a % self.p]

    def out_witness(self, a: int) -> int:
        """Forward-progression difference for a non-member."""
        if a % self.p in self.elements:
            raise KeyError(f"{a} is a member")
        return self.witnesses[a % self.p]

    def translate(self, c: int) -> "ArithmeticSet":
        """A + c with the witness table carried along."""
        c = c % self.p
        elements = frozenset((a + c) % self.p for a in self.elements)
        witnesses = {(a + c) % self.p: b for a, b in self.witnesses.items()}
        return ArithmeticSet(self.p, self.r, elements, witnesses)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "r": self.r,
            "size": self.size,
            "elements": self.sorted_elements(),
            "witnesses": {str(a): b for a, b in sorted(self.witnesses.items())},
        }


def min_arithmetic_set(p: int, r: int = 1, p_cap: Optional[int] = None) -> ArithmeticSet:
    """Smallest r-arithmetic subset of F_p by exhaustive search.

    Subsets are enumerated by increasing size starting from the provable
    lower bound; within a size, lexicographic order on the sorted element
    list fixes the tie-break.
    """
    p = _as_prime(p)
    if not 1 <= r <= p - 1:
        raise ValueError(f"r must lie in [1, p-1], got {r}")
    p_cap = config.MIN_ARITHMETIC_P_CAP if p_cap is None else p_cap
    if p > p_cap:
        raise CapExceededError(f"exhaustive minimization capped at p <= {p_cap}, got {p}")
    for k in range(size_lower_bound(p, r), p + 1):
        hit = _kernels.scan_combinations(p, r, k)
        if hit is not None:
            return ArithmeticSet.verified([int(x) for x in hit], r, p)
    raise AssertionError("unreachable: the whole field is always r-arithmetic")


_SMALLEST_SIZE_CACHE: dict[tuple[int, int], int] = {}


def smallest_arithmetic_size(p: int, r: int = 1) -> int:
    """s(p): exact for p within the exhaustive cap, else a verified upper bound.

    Above the cap the value comes from find_small_arithmetic_set, which is a
    conservative stand-in wherever s appears on the large side of an
    inequality.
    """
    key = (p, r)
    if key not in _SMALLEST_SIZE_CACHE:
        if p <= config.MIN_ARITHMETIC_P_CAP:
            _SMALLEST_SIZE_CACHE[key] = min_arithmetic_set(p, r).size
        else:
            if r != 1:
                raise CapExceededError(f"no verified bound available for r={r}, p={p}")
            _SMALLEST_SIZE_CACHE[key] = find_small_arithmetic_set(p).size
    return _SMALLEST_SIZE_CACHE[key]


# ---------------------------------------------------------------------------
# Randomized search for small arithmetic sets (r = 1)


def _violation_tensors(p: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.arange(p).reshape(p, 1, 1)
    b = np.arange(1, p).reshape(1, p - 1, 1)
    i_full = np.arange(-r, r + 1).reshape(1, 1, 2 * r + 1)
    i_pos = np.arange(1, r + 1).reshape(1, 1, r)
    return (a + i_full * b) % p, (a + i_pos * b) % p


def _violations(mask: np.ndarray, idx_full: np.ndarray, idx_pos: np.ndarray) -> np.ndarray:
    in_ok = mask[idx_full].all(axis=2).any(axis=1)
    out_ok = mask[idx_pos].all(axis=2).any(axis=1)
    ok = np.where(mask, in_ok, out_ok)
    return np.nonzero(~ok)[0]


def _doubling_seed(p: int, c: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Signed-doubling family {+-c*2^i}, padded with random elements to `size`."""
    vals: set[int] = set()
    x = c % p
    while len(vals) < size and x:
        vals.add(x)
        vals.add((-x) % p)
        x = (2 * x) % p
        if x == c % p:
            break
    vals.discard(0)
    pool = [v for v in range(1, p) if v not in vals]
    rng.shuffle(pool)
    out = sorted(vals)[:size]
    for v in pool:
        if len(out) >= size:
            break
        out.append(v)
    return np.array(sorted(out[:size]), dtype=np.int64)


def find_small_arithmetic_set(
    p: int,
    seed: int = 0,
    budget: Optional[int] = None,
    target: Optional[int] = None,
) -> ArithmeticSet:
    """A verified arithmetic (r = 1) set of size <= 2*floor(log2 p).

    Seeded randomized search (signed-doubling seeds plus swap-based local
    repair) behind a mandatory verifier gate.  For small p the search space
    is exhausted instead, so nonexistence is reported definitively.  Failure
    raises SearchBudgetExceededError; an unverified set is never returned.
    """
    p = _as_prime(p)
    if p < 5:
        raise ValueError(f"requires p >= 5, got {p}")
    target = 2 * floor_log2(p) if target is None else target
    budget = config.SMALL_SET_SEARCH_BUDGET if budget is None else budget
    r = 1

    lb = size_lower_bound(p, r)
    if lb > target:
        raise SearchBudgetExceededError(
            f"no arithmetic set of size <= {target} exists in F_{p}: "
            f"the lower bound is {lb}"
        )

    # Exhaust tiny search spaces outright: definitive success or failure.
    total = sum(comb(p, k) for k in range(lb, target + 1))
    if total <= 20_000:
        for k in range(lb, target + 1):
            hit = _kernels.scan_combinations(p, r, k)
            if hit is not None:
                return ArithmeticSet.verified([int(x) for x in hit], r, p)
        raise SearchBudgetExceededError(
            f"no arithmetic set of size <= {target} exists in F_{p} "
            f"(search space exhausted)"
        )

    rng = np.random.default_rng(seed)
    idx_full, idx_pos = _violation_tensors(p, r)
    calls = 0
    best = p + 1

    attempt = 0
    while calls < budget:
        attempt += 1
        if attempt % 2 == 1:
            c = int(rng.integers(1, p))
            members = _doubling_seed(p, c, target, rng)
        else:
            members = rng.choice(np.arange(1, p), size=min(target, p - 1), replace=False)
        mask = np.zeros(p, dtype=bool)
        mask[members] = True

        bad = _violations(mask, idx_full, idx_pos)
        calls += 1
        stall = 0
        while bad.size and calls < budget and stall < 6 * p:
            a = int(bad[rng.integers(bad.size)]) if rng.random() < 0.8 else int(
                rng.choice(np.nonzero(mask)[0])
            )
            if not mask[a]:
                # a violated out-of-set element: bring it in by swapping
                out_elt = int(rng.choice(np.nonzero(mask)[0]))
                mask[a], mask[out_elt] = True, False
                swapped = (a, out_elt)
            else:
                cand = np.nonzero(~mask)[0]
                new_elt = int(cand[rng.integers(cand.size)])
                mask[a], mask[new_elt] = False, True
                swapped = (new_elt, a)
            new_bad = _violations(mask, idx_full, idx_pos)
            calls += 1
            if new_bad.size <= bad.size:
                stall = 0 if new_bad.size < bad.size else stall + 1
                bad = new_bad
            else:
                mask[swapped[0]], mask[swapped[1]] = False, True
                stall += 1
        if not bad.size:
            elements = [int(x) for x in np.nonzero(mask)[0]]
            return ArithmeticSet.verified(elements, r, p)
        best = min(best, int(bad.size))

    raise SearchBudgetExceededError(
        f"no verified arithmetic set of size <= {target} found in F_{p} "
        f"within {budget} verifier calls (best candidate had {best} violations)"
    )

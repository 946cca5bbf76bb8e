"""Finitely supported multi-indices and monotone (downward closed) sets.

Multi-indices are stored sparsely as sorted ``(dim, exponent)`` pairs with
dimensions counted from 1 and only positive exponents kept.  Index sets are
kept in graded lexicographic order: total degree first, then the dense
exponent vector in descending lexicographic order, so ``e1`` precedes
``e2`` and ``2*e1`` precedes ``e1 + e2``.
"""
from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError

# relative slack for the inclusive threshold test, see generate_set
_THRESHOLD_RTOL = 1e-12


class MultiIndex:
    """Immutable sparse multi-index ``alpha in (N_0^inf)_c``."""

    __slots__ = ("_items", "_hash")

    def __init__(self, entries=None):
        if entries is None:
            items = ()
        else:
            if isinstance(entries, dict):
                pairs = entries.items()
            else:
                pairs = entries
            clean = {}
            for dim, exp in pairs:
                dim, exp = int(dim), int(exp)
                if dim < 1:
                    raise InvalidParameterError(f"dimension must be >= 1, got {dim}")
                if exp < 0:
                    raise InvalidParameterError(f"exponent must be >= 0, got {exp}")
                if exp:
                    clean[dim] = exp
            items = tuple(sorted(clean.items()))
        self._items = items
        self._hash = hash(items)

    @classmethod
    def from_dense(cls, exponents: Sequence[int]) -> "MultiIndex":
        """Build from a dense exponent vector ``(alpha_1, alpha_2, ...)``."""
        return cls((m + 1, a) for m, a in enumerate(exponents))

    @classmethod
    def unit(cls, dim: int, exp: int = 1) -> "MultiIndex":
        return cls({dim: exp})

    @property
    def items(self) -> tuple:
        """Sorted ``(dim, exponent)`` pairs with positive exponents."""
        return self._items

    @property
    def support(self) -> tuple:
        return tuple(d for d, _ in self._items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self._items)

    @property
    def max_dim(self) -> int:
        return self._items[-1][0] if self._items else 0

    def __getitem__(self, dim: int) -> int:
        for d, e in self._items:
            if d == dim:
                return e
            if d > dim:
                break
        return 0

    def dense(self, ndim: int) -> np.ndarray:
        out = np.zeros(ndim, dtype=np.int64)
        for d, e in self._items:
            if d > ndim:
                raise IndexError(f"index has dimension {d} > {ndim}")
            out[d - 1] = e
        return out

    def shifted(self, dim: int, delta: int) -> "MultiIndex":
        """Return ``alpha + delta * e_dim``; negative exponents are rejected."""
        entries = dict(self._items)
        entries[dim] = entries.get(dim, 0) + delta
        return MultiIndex(entries)

    def sort_key(self):
        return (self.degree, tuple((d, -e) for d, e in self._items))

    def __eq__(self, other):
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return self._hash

    def __le__(self, other):
        return leq(self, other)

    def __bool__(self):
        return bool(self._items)

    def __repr__(self):
        if not self._items:
            return "MultiIndex(0)"
        body = " + ".join(f"{e}*e{d}" if e > 1 else f"e{d}" for d, e in self._items)
        return f"MultiIndex({body})"

    def to_text(self) -> str:
        return " ".join(f"{d}:{e}" for d, e in self._items)

    @classmethod
    def from_text(cls, line: str) -> "MultiIndex":
        pairs = []
        for token in line.split():
            d, e = token.split(":")
            pairs.append((int(d), int(e)))
        return cls(pairs)


ZERO = MultiIndex()


def leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    """Componentwise order: ``alpha_m <= beta_m`` for every ``m >= 1``."""
    return all(e <= beta[d] for d, e in alpha.items)


class MultiIndexSet:
    """Finite set of multi-indices in canonical order.

    Positions in :attr:`members` define the row/column indexing of every
    moment matrix and of spectral coefficient blocks.
    """

    def __init__(self, members: Iterable[MultiIndex], description: dict | None = None):
        unique = set(members)
        self.members: list[MultiIndex] = sorted(unique, key=MultiIndex.sort_key)
        self._pos = {a: i for i, a in enumerate(self.members)}
        self.description = dict(description or {})

    @property
    def cardinality(self) -> int:
        return len(self.members)

    @property
    def max_active_dim(self) -> int:
        return max((a.max_dim for a in self.members), default=0)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, alpha):
        return alpha in self._pos

    def __getitem__(self, i) -> MultiIndex:
        return self.members[i]

    def position(self, alpha: MultiIndex) -> int:
        return self._pos[alpha]

    def get_position(self, alpha: MultiIndex, default=-1) -> int:
        return self._pos.get(alpha, default)

    def dense(self, ndim: int | None = None) -> np.ndarray:
        """Exponent table of shape ``(P, ndim)``, ``ndim`` defaults to ``M_A``."""
        ndim = self.max_active_dim if ndim is None else ndim
        out = np.zeros((len(self), ndim), dtype=np.int64)
        for i, a in enumerate(self.members):
            for d, e in a.items:
                out[i, d - 1] = e
        return out

    def is_subset(self, other: "MultiIndexSet") -> bool:
        return all(a in other for a in self.members)

    def __repr__(self):
        return f"MultiIndexSet(P={len(self)}, M_A={self.max_active_dim})"


def is_monotone(index_set) -> bool:
    """True iff every ``beta <= alpha`` of every member is also a member.

    Checking the immediate lower neighbours ``alpha - e_m`` suffices since
    the componentwise order is generated by unit steps.
    """
    members = set(index_set)
    for alpha in members:
        for d, _ in alpha.items:
            if alpha.shifted(d, -1) not in members:
                return False
    return True


class AlgebraicWeights:
    """Weight sequence ``eta_m = (m + shift)^(-sigma)``."""

    def __init__(self, sigma: float = 2.0, shift: float = 1.0):
        if sigma <= 0:
            raise InvalidParameterError("sigma must be positive")
        if shift <= 0:
            raise InvalidParameterError("shift must be positive so that eta_m < 1")
        self.sigma = float(sigma)
        self.shift = float(shift)

    def __call__(self, m: int) -> float:
        return (m + self.shift) ** (-self.sigma)

    @property
    def description(self) -> str:
        return f"(m+{self.shift:g})^-{self.sigma:g}"


def _weights_callable(eta) -> tuple[Callable[[int], float], str]:
    if callable(eta):
        return eta, getattr(eta, "description", repr(eta))
    seq = [float(v) for v in eta]

    def lookup(m):
        return seq[m - 1] if m <= len(seq) else 0.0

    return lookup, "[" + ", ".join(f"{v:.6g}" for v in seq) + "]"


def generate_set(eta=None, eps: float = 1e-4) -> MultiIndexSet:
    """Monotone set ``{alpha : prod_m eta_m^alpha_m >= eps}``.

    Parameters
    ----------
    eta : callable or sequence, optional
        Decreasing weights with ``0 < eta_m < 1``; callables are invoked with
        ``m = 1, 2, ...``.  A finite sequence deactivates dimensions beyond
        its length.  Defaults to ``(m+1)^-2``.
    eps : float
        Threshold in ``(0, 1)``.  The comparison is inclusive, with a relative
        slack of 1e-12 so products equal to ``eps`` in exact arithmetic are
        kept regardless of floating point rounding.

    Notes
    -----
    Depth-first: for the current prefix the exponent in dimension ``m`` is
    grown while the product stays above the threshold, then the search moves
    on to ``m + 1``.  Dimensions are advanced only while ``eta_m >= eps``,
    which terminates because ``eta`` is decreasing.
    """
    if eta is None:
        eta = AlgebraicWeights(2.0)
    weight, desc = _weights_callable(eta)
    eps = float(eps)
    if not (0.0 < eps < 1.0):
        raise InvalidParameterError(f"threshold eps must lie in (0, 1), got {eps}")
    cutoff = eps * (1.0 - _THRESHOLD_RTOL)

    checked = [1.0]  # checked[m] = eta_m once validated; index 0 is a sentinel

    def eta_at(m):
        while len(checked) <= m:
            j = len(checked)
            v = float(weight(j))
            if v == 0.0 and not callable(eta):
                checked.append(0.0)
                continue
            if not (0.0 < v < 1.0) or not math.isfinite(v):
                raise InvalidParameterError(f"eta_{j} = {v} is outside (0, 1)")
            prev = checked[j - 1]
            if j > 1 and prev > 0.0 and v > prev:
                raise InvalidParameterError(
                    f"eta must be decreasing: eta_{j} = {v} > eta_{j - 1} = {prev}")
            checked.append(v)
        return checked[m]

    found: list[MultiIndex] = []

    def extend(first_dim: int, prod: float, prefix: dict):
        found.append(MultiIndex(prefix))
        m = first_dim
        while eta_at(m) > 0.0 and prod * eta_at(m) >= cutoff:
            p = prod
            exp = 0
            while True:
                p *= eta_at(m)
                if p < cutoff:
                    break
                exp += 1
                prefix[m] = exp
                extend(m + 1, p, prefix)
            prefix.pop(m, None)
            m += 1

    extend(1, 1.0, {})
    return MultiIndexSet(found, description={"eps": eps, "eta": desc})


def full_tensor_set(max_degrees: Sequence[int]) -> MultiIndexSet:
    """Box ``{alpha : alpha_m <= max_degrees[m-1]}``; handy for tests."""
    import itertools

    ranges = [range(d + 1) for d in max_degrees]
    return MultiIndexSet(MultiIndex.from_dense(c) for c in itertools.product(*ranges))


def total_degree_set(ndim: int, degree: int) -> MultiIndexSet:
    import itertools

    return MultiIndexSet(
        MultiIndex.from_dense(c)
        for c in itertools.product(range(degree + 1), repeat=ndim)
        if sum(c) <= degree
    )


def write_set(index_set: MultiIndexSet, path) -> None:
    """Write one index per line as space separated ``dim:exp`` pairs.

    The zero index is an empty line.  The header carries ``eps``, the weight
    description, ``P`` and ``M_A`` so the reader knows how many lines follow.
    """
    desc = index_set.description
    eps = desc.get("eps", float("nan"))
    eta = desc.get("eta", "unspecified")
    lines = [f"# eps={eps:.17e} eta={eta} P={len(index_set)} M_A={index_set.max_active_dim}"]
    lines += [a.to_text() for a in index_set.members]
    Path(path).write_text("\n".join(lines) + "\n")


def read_set(path) -> MultiIndexSet:
    text = Path(path).read_text().split("\n")
    header = text[0]
    if not header.startswith("#"):
        raise ValueError("missing multi-index set header")
    fields = {}
    for token in header[1:].split():
        if "=" in token:
            key, value = token.split("=", 1)
            fields[key] = value
    count = int(fields["P"])
    members = [MultiIndex.from_text(line) for line in text[1:1 + count]]
    if len(members) != count:
        raise ValueError(f"expected {count} indices, found {len(members)}")
    description = {"eta": fields.get("eta", "unspecified")}
    if "eps" in fields:
        description["eps"] = float(fields["eps"])
    result = MultiIndexSet(members, description=description)
    if result.max_active_dim != int(fields["M_A"]):
        raise ValueError("M_A in header does not match the stored indices")
    return result

"""Dense probability tensors over labeled finite variables and the
information measures (entropy, conditional mutual information) built on them.

All masses are float64, all logarithms are base 2 (bits).  Variables with
alphabet size 1 are allowed; being constants they contribute nothing to any
information measure, which is how degenerate auxiliaries are encoded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CyclicFactorization,
    NegativeMass,
    NotNormalized,
    OverlappingSets,
    RowNotNormalized,
    ShapeMismatch,
    StateSpaceTooLarge,
    UnknownVariable,
)

NORMALIZATION_TOL = 1e-9
NEGATIVE_MASS_TOL = -1e-15
NONNEG_CLAMP = 1e-10
MAX_STATES = 2 ** 24


@dataclass(frozen=True)
class Var:
    """A labeled finite variable; ``block`` is used only by unfolded networks."""

    name: str
    block: int | None = None

    def __str__(self) -> str:
        if self.block is None:
            return self.name
        return f"{self.name}@{self.block}"

    def sort_key(self):
        return (self.name, -1 if self.block is None else self.block)


def _as_var(v) -> Var:
    return v if isinstance(v, Var) else Var(str(v))


def _var_set(vs: Iterable) -> frozenset[Var]:
    return frozenset(_as_var(v) for v in vs)


@dataclass(frozen=True)
class InfoAtom:
    """Names one conditional mutual-information expression I(left; right | cond)."""

    left: frozenset[Var]
    right: frozenset[Var]
    cond: frozenset[Var] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "left", _var_set(self.left))
        object.__setattr__(self, "right", _var_set(self.right))
        object.__setattr__(self, "cond", _var_set(self.cond))
        if not self.left or not self.right:
            raise OverlappingSets("atom left and right sets must be nonempty")
        if (self.left & self.right) or (self.left & self.cond) or (self.right & self.cond):
            raise OverlappingSets(f"atom sets overlap: {self}")

    def variables(self) -> frozenset[Var]:
        return self.left | self.right | self.cond

    def __str__(self) -> str:
        def fmt(s):
            return ",".join(str(v) for v in sorted(s, key=Var.sort_key))

        base = f"I({fmt(self.left)};{fmt(self.right)}"
        if self.cond:
            base += f"|{fmt(self.cond)}"
        return base + ")"


@dataclass(frozen=True)
class JointDistribution:
    """Dense pmf over an ordered list of labeled finite variables.

    ``mass`` has shape equal to the tuple of alphabet sizes, row-major over
    the variable list.
    """

    variables: tuple[tuple[Var, int], ...]
    mass: np.ndarray = field(repr=False)

    def __post_init__(self):
        variables = tuple((_as_var(v), int(n)) for v, n in self.variables)
        object.__setattr__(self, "variables", variables)
        names = [v for v, _ in variables]
        if len(set(names)) != len(names):
            raise ShapeMismatch("duplicate variable labels in joint")
        sizes = tuple(n for _, n in variables)
        if any(n < 1 for n in sizes):
            raise ShapeMismatch("alphabet sizes must be >= 1")
        total = int(np.prod(sizes, dtype=np.int64)) if sizes else 1
        if total > MAX_STATES:
            raise StateSpaceTooLarge(f"{total} states exceeds cap {MAX_STATES}")
        arr = np.asarray(self.mass, dtype=float)
        if arr.size != total:
            raise ShapeMismatch(
                f"mass has {arr.size} entries, expected {total} for sizes {sizes}"
            )
        arr = arr.reshape(sizes)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "mass", arr)

    @property
    def var_list(self) -> list[Var]:
        return [v for v, _ in self.variables]

    def size_of(self, v: Var) -> int:
        for u, n in self.variables:
            if u == v:
                return n
        raise UnknownVariable(str(v))

    def axes_of(self, vs: Iterable[Var]) -> list[int]:
        order = {v: i for i, (v, _) in enumerate(self.variables)}
        axes = []
        for v in vs:
            v = _as_var(v)
            if v not in order:
                raise UnknownVariable(str(v))
            axes.append(order[v])
        return axes


def validate_pmf(d: JointDistribution) -> JointDistribution:
    """Check normalization and non-negativity; returns ``d`` unchanged."""
    arr = d.mass
    if arr.min(initial=0.0) < NEGATIVE_MASS_TOL:
        raise NegativeMass(f"minimum entry {arr.min()}")
    total = float(arr.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"mass sums to {total}")
    return d


def joint(variables: Sequence[tuple[Var | str, int]], mass) -> JointDistribution:
    """Build and validate a joint distribution, clamping tiny negative mass."""
    d = JointDistribution(tuple(variables), np.asarray(mass, dtype=float))
    validate_pmf(d)
    if d.mass.min(initial=0.0) < 0.0:
        arr = np.clip(d.mass, 0.0, None)
        d = JointDistribution(d.variables, arr)
    return d


def marginalize(d: JointDistribution, keep: Iterable[Var]) -> JointDistribution:
    """Marginal of ``d`` over exactly the variables in ``keep``."""
    keep = [_as_var(v) for v in keep]
    keep_axes = set(d.axes_of(keep))
    drop = tuple(i for i in range(len(d.variables)) if i not in keep_axes)
    arr = d.mass.sum(axis=drop) if drop else d.mass
    remaining = [d.variables[i] for i in range(len(d.variables)) if i not in drop]
    # reorder to the requested order
    pos = {v: i for i, (v, _) in enumerate(remaining)}
    perm = [pos[v] for v in keep]
    arr = np.transpose(arr, perm) if perm else arr
    variables = tuple(remaining[i] for i in perm)
    return JointDistribution(variables, np.ascontiguousarray(arr))


def _plain_entropy(arr: np.ndarray) -> float:
    p = arr.reshape(-1)
    nz = p[p > 0.0]
    return float(-np.sum(nz * np.log2(nz)))


def entropy(d: JointDistribution, a: Iterable[Var], given: Iterable[Var] = ()) -> float:
    """Conditional entropy H(a | given) in bits."""
    a = _var_set(a)
    given = _var_set(given)
    if a & given:
        raise OverlappingSets("entropy arguments overlap")
    if not a:
        return 0.0
    h_joint = _plain_entropy(marginalize(d, sorted(a | given, key=Var.sort_key)).mass)
    if not given:
        return h_joint
    h_given = _plain_entropy(marginalize(d, sorted(given, key=Var.sort_key)).mass)
    return h_joint - h_given


def mutual_information(d: JointDistribution, atom: InfoAtom) -> float:
    """I(left; right | cond) in bits, via entropy differences."""
    h1 = entropy(d, atom.left, atom.cond)
    h2 = entropy(d, atom.left, atom.right | atom.cond)
    return h1 - h2


def mi(d: JointDistribution, left, right, cond=()) -> float:
    """Convenience wrapper building the atom from raw label iterables.

    Empty left or right gives 0; labels present in ``cond`` are dropped from
    ``left``/``right`` (they carry no information beyond the conditioning).
    """
    left = _var_set(left)
    right = _var_set(right)
    cond = _var_set(cond)
    left -= cond
    right -= cond
    right -= left
    if not left or not right:
        return 0.0
    return mutual_information(d, InfoAtom(left, right, cond))


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def product_compose(
    factors: Sequence[tuple[np.ndarray, Sequence[tuple[Var | str, int]], Sequence[Var | str]]],
) -> JointDistribution:
    """Compose an acyclic factorization into a joint distribution.

    Each factor is ``(kernel, outputs, inputs)`` where ``outputs`` is a list
    of (variable, alphabet size), ``inputs`` a list of variables produced by
    earlier factors, and ``kernel`` has shape (input sizes..., output sizes...)
    with each row (fixed inputs) summing to 1.
    """
    cur_vars: list[tuple[Var, int]] = []
    cur = np.ones((), dtype=float)
    for kernel, outputs, inputs in factors:
        outputs = [(_as_var(v), int(n)) for v, n in outputs]
        inputs = [_as_var(v) for v in inputs]
        have = {v: n for v, n in cur_vars}
        for v in inputs:
            if v not in have:
                raise CyclicFactorization(f"input {v} not produced by earlier factors")
        for v, _ in outputs:
            if v in have:
                raise CyclicFactorization(f"output {v} produced twice")
        in_sizes = tuple(have[v] for v in inputs)
        out_sizes = tuple(n for _, n in outputs)
        arr = np.asarray(kernel, dtype=float)
        if arr.size != int(np.prod(in_sizes + out_sizes, dtype=np.int64)):
            raise ShapeMismatch(
                f"kernel has {arr.size} entries, expected shape {in_sizes + out_sizes}"
            )
        arr = arr.reshape(in_sizes + out_sizes)
        rows = arr.reshape(int(np.prod(in_sizes, dtype=np.int64)) or 1, -1)
        bad = np.abs(rows.sum(axis=1) - 1.0) > NORMALIZATION_TOL
        if bad.any():
            raise RowNotNormalized(
                f"kernel rows {np.flatnonzero(bad)[:5].tolist()} do not sum to 1"
            )
        new_total = int(np.prod([n for _, n in cur_vars] + list(out_sizes), dtype=np.int64))
        if new_total > MAX_STATES:
            raise StateSpaceTooLarge(f"{new_total} states exceeds cap {MAX_STATES}")
        n_all = len(cur_vars) + len(outputs)
        if n_all > len(_LETTERS):
            raise StateSpaceTooLarge("too many variables for dense composition")
        letters = {v: _LETTERS[i] for i, (v, _) in enumerate(cur_vars)}
        for j, (v, _) in enumerate(outputs):
            letters[v] = _LETTERS[len(cur_vars) + j]
        sub_cur = "".join(letters[v] for v, _ in cur_vars)
        sub_ker = "".join(letters[v] for v in inputs) + "".join(
            letters[v] for v, _ in outputs
        )
        sub_out = sub_cur + "".join(letters[v] for v, _ in outputs)
        cur = np.einsum(f"{sub_cur},{sub_ker}->{sub_out}", cur, arr)
        cur_vars = cur_vars + outputs
    d = JointDistribution(tuple(cur_vars), cur)
    return validate_pmf(d)


def binary_entropy(p: float) -> float:
    """h2(p) in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)

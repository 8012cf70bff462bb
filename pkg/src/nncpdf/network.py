"""Data model for the N-node memoryless network and the auxiliary coding
scheme distribution, plus document (JSON) loaders and the assembler that
produces the full working joint distribution.

Single-block variable naming used everywhere downstream:
``X1..XN`` channel inputs, ``Y1..YN`` channel outputs, ``V2..VN`` decoded
auxiliaries, ``U2..UN`` auxiliary covering variables, ``Yhat2..YhatN``
compression variables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    IndexOutOfRange,
    NotNormalized,
    SchemaError,
    ShapeMismatch,
)
from .probability import (
    NORMALIZATION_TOL,
    JointDistribution,
    Var,
    product_compose,
)


def X(k: int) -> Var:
    return Var(f"X{k}")


def Y(k: int) -> Var:
    return Var(f"Y{k}")


def V(k: int) -> Var:
    return Var(f"V{k}")


def U(k: int) -> Var:
    return Var(f"U{k}")


def Yhat(k: int) -> Var:
    return Var(f"Yhat{k}")


def _check_rows(arr: np.ndarray, n_in: int, what: str) -> None:
    rows = arr.reshape(n_in or 1, -1)
    if np.abs(rows.sum(axis=1) - 1.0).max() > NORMALIZATION_TOL:
        raise NotNormalized(f"{what} rows do not sum to 1")


@dataclass(frozen=True)
class Network:
    """An N-node discrete memoryless network with source node 1."""

    N: int
    x_sizes: tuple[int, ...]
    y_sizes: tuple[int, ...]
    channel: np.ndarray = field(repr=False)  # shape x_sizes + y_sizes
    destinations: frozenset[int]

    def __post_init__(self):
        if self.N < 2:
            raise SchemaError("network needs N >= 2")
        if len(self.x_sizes) != self.N or len(self.y_sizes) != self.N:
            raise ShapeMismatch("alphabet size lists must have length N")
        dests = frozenset(int(d) for d in self.destinations)
        if not dests:
            raise SchemaError("destination set is empty")
        for d in dests:
            if not 2 <= d <= self.N:
                raise IndexOutOfRange(f"destination {d} outside [2:{self.N}]")
        object.__setattr__(self, "destinations", dests)
        object.__setattr__(self, "x_sizes", tuple(int(n) for n in self.x_sizes))
        object.__setattr__(self, "y_sizes", tuple(int(n) for n in self.y_sizes))
        arr = np.asarray(self.channel, dtype=float)
        shape = self.x_sizes + self.y_sizes
        if arr.size != int(np.prod(shape, dtype=np.int64)):
            raise ShapeMismatch("channel kernel size inconsistent with alphabets")
        arr = arr.reshape(shape)
        _check_rows(arr, int(np.prod(self.x_sizes, dtype=np.int64)), "channel")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "channel", arr)

    def relays(self) -> list[int]:
        return list(range(2, self.N + 1))


@dataclass(frozen=True)
class SchemeDistribution:
    """The auxiliary factorization of the achievability bound:
    head pmf p(x1, v2..vN, u2..uN), per-node input kernels p(x_k|v_k), and
    per-node compressors p(yhat_k | x_k, u_k, v_k, y_k)."""

    N: int
    v_sizes: tuple[int, ...]  # index k-2 for k in [2:N]
    u_sizes: tuple[int, ...]
    yhat_sizes: tuple[int, ...]
    head: np.ndarray = field(repr=False)  # shape (|X1|, v2..vN, u2..uN)
    input_kernels: tuple[np.ndarray, ...] = field(repr=False)  # (|Vk|, |Xk|)
    compressors: tuple[np.ndarray, ...] = field(repr=False)  # (|Xk|,|Uk|,|Vk|,|Yk|,|Yhk|)

    def __post_init__(self):
        n_rel = self.N - 1
        for nm in ("v_sizes", "u_sizes", "yhat_sizes"):
            sizes = tuple(int(x) for x in getattr(self, nm))
            if len(sizes) != n_rel:
                raise ShapeMismatch(f"{nm} must have length N-1")
            if any(s < 1 for s in sizes):
                raise ShapeMismatch(f"{nm} entries must be >= 1")
            object.__setattr__(self, nm, sizes)
        head = np.asarray(self.head, dtype=float)
        x1 = head.size // int(np.prod(self.v_sizes + self.u_sizes, dtype=np.int64))
        shape = (x1,) + self.v_sizes + self.u_sizes
        if head.size != int(np.prod(shape, dtype=np.int64)):
            raise ShapeMismatch("head pmf size inconsistent with aux alphabets")
        head = head.reshape(shape)
        if abs(head.sum() - 1.0) > NORMALIZATION_TOL:
            raise NotNormalized("head pmf does not sum to 1")
        head = head.copy()
        head.setflags(write=False)
        object.__setattr__(self, "head", head)
        kernels = []
        for i, arr in enumerate(self.input_kernels):
            arr = np.asarray(arr, dtype=float)
            vk = self.v_sizes[i]
            arr = arr.reshape(vk, -1)
            _check_rows(arr, vk, f"input kernel for node {i + 2}")
            arr = arr.copy()
            arr.setflags(write=False)
            kernels.append(arr)
        if len(kernels) != n_rel:
            raise ShapeMismatch("need one input kernel per node in [2:N]")
        object.__setattr__(self, "input_kernels", tuple(kernels))
        comps = []
        for i, arr in enumerate(self.compressors):
            arr = np.asarray(arr, dtype=float)
            xk = self.input_kernels[i].shape[1]
            shape = (xk, self.u_sizes[i], self.v_sizes[i], -1, self.yhat_sizes[i])
            arr = arr.reshape(shape)
            _check_rows(arr, arr.size // self.yhat_sizes[i], f"compressor for node {i + 2}")
            arr = arr.copy()
            arr.setflags(write=False)
            comps.append(arr)
        if len(comps) != n_rel:
            raise ShapeMismatch("need one compressor per node in [2:N]")
        object.__setattr__(self, "compressors", tuple(comps))

    @property
    def x1_size(self) -> int:
        return self.head.shape[0]

    def v_size(self, k: int) -> int:
        return self.v_sizes[k - 2]

    def u_size(self, k: int) -> int:
        return self.u_sizes[k - 2]

    def yhat_size(self, k: int) -> int:
        return self.yhat_sizes[k - 2]

    def input_kernel(self, k: int) -> np.ndarray:
        return self.input_kernels[k - 2]

    def compressor(self, k: int) -> np.ndarray:
        return self.compressors[k - 2]

    def is_nnc_form(self) -> bool:
        return all(s == 1 for s in self.v_sizes) and all(s == 1 for s in self.u_sizes)

    def is_ddf_form(self) -> bool:
        if any(s != 1 for s in self.yhat_sizes):
            return False
        for i, ker in enumerate(self.input_kernels):
            if ker.shape[0] != ker.shape[1]:
                return False
            if not np.allclose(ker, np.eye(ker.shape[0]), atol=1e-12):
                return False
        # independent p(v_2..v_N)
        axes = tuple(range(1 + len(self.v_sizes), self.head.ndim))
        pv = self.head.sum(axis=(0,) + axes)
        prod = np.ones(())
        for i in range(len(self.v_sizes)):
            marg = pv.sum(axis=tuple(j for j in range(pv.ndim) if j != i))
            prod = np.multiply.outer(prod, marg)
        return bool(np.allclose(pv, prod.reshape(pv.shape), atol=1e-9))


def _require(doc: dict, key: str):
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    return doc[key]


def load_network(document: dict) -> Network:
    """Build a validated Network from a parsed JSON document."""
    if not isinstance(document, dict):
        raise SchemaError("network document must be an object")
    n = int(_require(document, "N"))
    return Network(
        N=n,
        x_sizes=tuple(_require(document, "x_alphabets")),
        y_sizes=tuple(_require(document, "y_alphabets")),
        channel=np.asarray(_require(document, "channel"), dtype=float),
        destinations=frozenset(_require(document, "destinations")),
    )


def load_scheme(document: dict, n: int | None = None) -> SchemeDistribution:
    """Build a validated SchemeDistribution from a parsed JSON document."""
    if not isinstance(document, dict):
        raise SchemaError("scheme document must be an object")
    v_sizes = tuple(_require(document, "v_alphabets"))
    if n is None:
        n = len(v_sizes) + 1
    return SchemeDistribution(
        N=n,
        v_sizes=v_sizes,
        u_sizes=tuple(_require(document, "u_alphabets")),
        yhat_sizes=tuple(_require(document, "yhat_alphabets")),
        head=np.asarray(_require(document, "head"), dtype=float),
        input_kernels=tuple(
            np.asarray(a, dtype=float) for a in _require(document, "input_kernels")
        ),
        compressors=tuple(
            np.asarray(a, dtype=float) for a in _require(document, "compressors")
        ),
    )


def network_to_document(net: Network) -> dict:
    return {
        "N": net.N,
        "x_alphabets": list(net.x_sizes),
        "y_alphabets": list(net.y_sizes),
        "channel": net.channel.reshape(-1).tolist(),
        "destinations": sorted(net.destinations),
    }


def scheme_to_document(s: SchemeDistribution) -> dict:
    return {
        "v_alphabets": list(s.v_sizes),
        "u_alphabets": list(s.u_sizes),
        "yhat_alphabets": list(s.yhat_sizes),
        "head": s.head.reshape(-1).tolist(),
        "input_kernels": [k.reshape(-1).tolist() for k in s.input_kernels],
        "compressors": [c.reshape(-1).tolist() for c in s.compressors],
    }


def load_network_file(path: str | Path) -> Network:
    return load_network(json.loads(Path(path).read_text()))


def load_scheme_file(path: str | Path, n: int | None = None) -> SchemeDistribution:
    return load_scheme(json.loads(Path(path).read_text()), n)


def _check_consistent(net: Network, s: SchemeDistribution) -> None:
    if s.N != net.N:
        raise ShapeMismatch(f"scheme is for N={s.N}, network has N={net.N}")
    if s.x1_size != net.x_sizes[0]:
        raise ShapeMismatch("|X1| differs between network and scheme")
    for k in net.relays():
        if s.input_kernel(k).shape[1] != net.x_sizes[k - 1]:
            raise ShapeMismatch(f"|X{k}| differs between network and scheme")
        comp = s.compressor(k)
        if comp.shape[3] != net.y_sizes[k - 1]:
            raise ShapeMismatch(f"|Y{k}| differs between network and scheme")


def assemble_joint(net: Network, s: SchemeDistribution) -> JointDistribution:
    """Full single-block working joint over
    {X1..XN, V2..VN, U2..UN, Y1..YN, Yhat2..YhatN}."""
    _check_consistent(net, s)
    n = net.N
    head_vars = [(X(1), s.x1_size)]
    head_vars += [(V(k), s.v_size(k)) for k in net.relays()]
    head_vars += [(U(k), s.u_size(k)) for k in net.relays()]
    factors = [(s.head, head_vars, [])]
    for k in net.relays():
        factors.append(
            (s.input_kernel(k), [(X(k), net.x_sizes[k - 1])], [V(k)])
        )
    y_vars = [(Y(k), net.y_sizes[k - 1]) for k in range(1, n + 1)]
    factors.append((net.channel, y_vars, [X(k) for k in range(1, n + 1)]))
    for k in net.relays():
        factors.append(
            (
                s.compressor(k),
                [(Yhat(k), s.yhat_size(k))],
                [X(k), U(k), V(k), Y(k)],
            )
        )
    return product_compose(factors)


def make_nnc_scheme(s: SchemeDistribution) -> SchemeDistribution:
    """Force all U,V alphabets to size 1, keeping the induced marginal input
    pmfs and the compressors averaged over the dropped auxiliaries."""
    n_rel = s.N - 1
    head_x1 = s.head.reshape(s.x1_size, -1).sum(axis=1)
    head = head_x1.reshape((s.x1_size,) + (1,) * (2 * n_rel))
    kernels = []
    comps = []
    for i in range(n_rel):
        pv = _pv_marginal(s, i)
        px = pv @ s.input_kernels[i]
        kernels.append(px.reshape(1, -1))
        # weight compressor over (u,v) by p(u,v|x) from head x input kernel
        puv = _puv_given_x(s, i)
        comp = s.compressors[i]  # (x,u,v,y,yh)
        new = np.einsum("xuv,xuvyh->xyh", puv, comp)
        comps.append(new[:, None, None, :, :])
    return SchemeDistribution(
        N=s.N,
        v_sizes=(1,) * n_rel,
        u_sizes=(1,) * n_rel,
        yhat_sizes=s.yhat_sizes,
        head=head,
        input_kernels=tuple(kernels),
        compressors=tuple(comps),
    )


def _pv_marginal(s: SchemeDistribution, i: int) -> np.ndarray:
    axis = 1 + i
    other = tuple(j for j in range(s.head.ndim) if j != axis)
    return s.head.sum(axis=other)


def _puv_given_x(s: SchemeDistribution, i: int) -> np.ndarray:
    """p(u_k, v_k | x_k) for relay index i (node k = i+2), shape (x, u, v)."""
    v_ax = 1 + i
    u_ax = 1 + (s.N - 1) + i
    other = tuple(j for j in range(s.head.ndim) if j not in (v_ax, u_ax))
    pvu = s.head.sum(axis=other)  # (v, u)
    pvux = np.einsum("vu,vx->xuv", pvu, s.input_kernels[i])
    px = pvux.sum(axis=(1, 2), keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(px > 0, pvux / px, 0.0)
    # unreachable x values: any row-normalized filler works
    zero = out.sum(axis=(1, 2)) == 0
    if zero.any():
        out[zero, 0, 0] = 1.0
    return out


def make_ddf_scheme(s: SchemeDistribution) -> SchemeDistribution:
    """Force V_k = X_k (identity input kernels, independent v marginals) and
    degenerate compression alphabets."""
    n_rel = s.N - 1
    # new V_k lives on X_k's alphabet with the induced input marginal
    x_sizes = [s.input_kernels[i].shape[1] for i in range(n_rel)]
    u_axes = tuple(range(1 + n_rel, s.head.ndim))
    px1u = s.head.sum(axis=tuple(range(1, 1 + n_rel)))  # (x1, u...)
    head = px1u.reshape((s.x1_size,) + (1,) * n_rel + s.u_sizes)
    for i in range(n_rel):
        pv = _pv_marginal(s, i)
        px = pv @ s.input_kernels[i]
        shape = [1] * head.ndim
        shape[1 + i] = x_sizes[i]
        head = head * px.reshape(shape)
    head = np.broadcast_to(
        head, (s.x1_size,) + tuple(x_sizes) + s.u_sizes
    ).copy()
    kernels = tuple(np.eye(x_sizes[i]) for i in range(n_rel))
    comps = tuple(
        np.ones((x_sizes[i], s.u_sizes[i], x_sizes[i], s.compressors[i].shape[3], 1))
        for i in range(n_rel)
    )
    return SchemeDistribution(
        N=s.N,
        v_sizes=tuple(x_sizes),
        u_sizes=s.u_sizes,
        yhat_sizes=(1,) * n_rel,
        head=head,
        input_kernels=kernels,
        compressors=comps,
    )


def random_network(
    rng: np.random.Generator,
    n: int,
    x_sizes=None,
    y_sizes=None,
    destinations=None,
    concentration: float = 1.0,
) -> Network:
    """Dirichlet-random channel over the given alphabets (binary by default)."""
    x_sizes = tuple(x_sizes or (2,) * n)
    y_sizes = tuple(y_sizes or (2,) * n)
    n_in = int(np.prod(x_sizes))
    n_out = int(np.prod(y_sizes))
    channel = rng.dirichlet([concentration] * n_out, size=n_in)
    return Network(
        N=n,
        x_sizes=x_sizes,
        y_sizes=y_sizes,
        channel=channel,
        destinations=frozenset(destinations or {n}),
    )


def random_scheme(
    rng: np.random.Generator,
    net: Network,
    v_sizes=None,
    u_sizes=None,
    yhat_sizes=None,
    concentration: float = 1.0,
) -> SchemeDistribution:
    """Dirichlet-random scheme distribution compatible with ``net``."""
    n_rel = net.N - 1
    v_sizes = tuple(v_sizes or (2,) * n_rel)
    u_sizes = tuple(u_sizes or (2,) * n_rel)
    yhat_sizes = tuple(yhat_sizes or (2,) * n_rel)
    head_n = net.x_sizes[0] * int(np.prod(v_sizes)) * int(np.prod(u_sizes))
    head = rng.dirichlet([1.0] * head_n)
    kernels = []
    comps = []
    for i, k in enumerate(net.relays()):
        xk = net.x_sizes[k - 1]
        yk = net.y_sizes[k - 1]
        kernels.append(rng.dirichlet([concentration] * xk, size=v_sizes[i]))
        rows = xk * u_sizes[i] * v_sizes[i] * yk
        comps.append(
            rng.dirichlet([concentration] * yhat_sizes[i], size=rows).reshape(
                xk, u_sizes[i], v_sizes[i], yk, yhat_sizes[i]
            )
        )
    return SchemeDistribution(
        N=net.N,
        v_sizes=v_sizes,
        u_sizes=u_sizes,
        yhat_sizes=yhat_sizes,
        head=head,
        input_kernels=tuple(kernels),
        compressors=tuple(comps),
    )

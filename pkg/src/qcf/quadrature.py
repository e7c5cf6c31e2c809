"""Vectorised adaptive Gauss-Kronrod (7/15) quadrature over many intervals."""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .exceptions import ConvergenceError

__all__ = ["CellIntegrals", "gk15", "integrate_cells"]

# Kronrod abscissae on [0, 1] (symmetric about 0) and weights; QUADPACK qk15.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 nodes, ascending
_W_K = np.concatenate([_WGK[:-1], _WGK[::-1]])
_ROUNDOFF = 50.0 * np.finfo(float).eps
_W_G = np.zeros(15)
_W_G[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _qk_error(kron, gauss, vals, half):
    # QUADPACK's qk15 error model applied to one real component
    mean = kron / (2.0 * half)
    resabs = np.abs(half) * (np.abs(vals) @ _W_K)
    resasc = np.abs(half) * (np.abs(vals - mean[:, None]) @ _W_K)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    floor = _ROUNDOFF * resabs
    return np.maximum(err, floor), floor


def gk15(f: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray):
    """Kronrod estimates, error estimates and roundoff floors on each ``[a_i, b_i]``.

    ``f`` is called once on a ``(len(a), 15)`` array of nodes and may return
    real or complex values; for complex ``f`` the errors of the real and
    imaginary parts are added.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = f(nodes)
    kron = half * (vals @ _W_K)
    gauss = half * (vals @ _W_G)
    if np.iscomplexobj(vals):
        er, fr = _qk_error(kron.real, gauss.real, vals.real, half)
        ei, fi = _qk_error(kron.imag, gauss.imag, vals.imag, half)
        return kron, er + ei, fr + fi
    err, floor = _qk_error(kron, gauss, vals, half)
    return kron, err, floor


class CellIntegrals(NamedTuple):
    values: np.ndarray   # integral over each initial cell
    error: float         # summed error estimate
    n_subdivisions: int


def integrate_cells(
    f: Callable[[np.ndarray], np.ndarray],
    edges: np.ndarray,
    tol: float,
    max_subdivisions: int = 500,
) -> CellIntegrals:
    """Integrate ``f`` over each cell ``[edges[i], edges[i+1]]``.

    Global adaptive refinement: while the summed error exceeds ``tol``, every
    sub-interval whose error is above the average share is bisected.
    Sub-intervals whose error is already at the floating-point floor are left
    alone; if only such intervals remain, the loop stops and the reported
    error exceeds ``tol``. Raises
    :class:`ConvergenceError` when more than ``max_subdivisions`` bisections
    would be needed.
    """
    edges = np.asarray(edges, dtype=float)
    n_cells = len(edges) - 1
    a, b = edges[:-1].copy(), edges[1:].copy()
    owner = np.arange(n_cells)
    res, err, floor = gk15(f, a, b)
    done_res = np.zeros(n_cells, dtype=res.dtype)
    done_err = done_floor = 0.0
    n_sub = 0
    while True:
        total = done_err + err.sum()
        # roundoff floors cannot be improved by bisection
        live = err > 2.0 * floor
        if total <= tol + 2.0 * (done_floor + floor.sum()) or not live.any():
            break
        share = max(tol - done_err, 0.5 * tol) / max(int(live.sum()), 1)
        split = live & (err > share)
        if not split.any():
            split = live & (err >= err[live].max())
        n_split = int(split.sum())
        if n_sub + n_split > max_subdivisions:
            raise ConvergenceError(
                f"adaptive quadrature exhausted {max_subdivisions} subdivisions "
                f"(error estimate {total:.3g} > tolerance {tol:.3g})"
            )
        n_sub += n_split
        # intervals that are already accurate are retired
        keep = ~split
        retire = keep & ((err <= 1e-3 * share) | ~live)
        if retire.any():
            np.add.at(done_res, owner[retire], res[retire])
            done_err += float(err[retire].sum())
            done_floor += float(floor[retire].sum())
            keep &= ~retire
        sa, sb, so = a[split], b[split], owner[split]
        m = 0.5 * (sa + sb)
        na = np.concatenate([sa, m])
        nb = np.concatenate([m, sb])
        no = np.concatenate([so, so])
        nres, nerr, nfloor = gk15(f, na, nb)
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        owner = np.concatenate([owner[keep], no])
        res = np.concatenate([res[keep], nres])
        err = np.concatenate([err[keep], nerr])
        floor = np.concatenate([floor[keep], nfloor])
    values = done_res.copy()
    np.add.at(values, owner, res)
    return CellIntegrals(values, float(done_err + err.sum()), n_sub)

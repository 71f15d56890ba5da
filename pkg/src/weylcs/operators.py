"""Sparse symmetric Dirichlet discretizations on masked grids.

Both operators are assembled in divergence form: the quadratic form is a sum
over grid edges of w_e * ((v_i - v_j)/h)^2, with edges to non-interior nodes
contributing w_e * (v_i/h)^2 (Dirichlet zero).  Edge weights are 1 for the
euclidean Laplacian and for the first axis of the hyperbolic operator, and
exp(2 x_1) for edges along the remaining axes (the edge midpoint shares the
node's x_1, so sampling at the node is exact).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .domains import GridDomain


class DimensionMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    matrix: sp.csr_matrix
    grid: GridDomain
    kind: str  # "euclidean" | "hyperbolic"
    nodes: np.ndarray  # (n, d) integer multi-indices, row k <-> nodes[k]
    row_of: np.ndarray = field(repr=False)  # grid-shaped, -1 outside

    @property
    def n(self):
        return self.matrix.shape[0]

    def node_coords(self):
        return np.asarray(self.grid.origin) + self.grid.h * self.nodes


def _assemble(dom: GridDomain, kind, tilde_weight=None):
    mask = dom.mask
    d = dom.d
    h = dom.h
    nodes = np.argwhere(mask)
    n = len(nodes)
    row_of = -np.ones(mask.shape, dtype=np.int64)
    row_of[mask] = np.arange(n)
    inv_h2 = 1.0 / (h * h)

    if kind == "hyperbolic" and tilde_weight is None:
        tilde_weight = lambda x1: np.exp(2.0 * x1)

    diag = np.zeros(n)
    rows, cols, vals = [], [], []
    for axis in range(d):
        if kind == "hyperbolic" and axis >= 1:
            x1 = dom.origin[0] + h * nodes[:, 0]
            w = np.asarray(tilde_weight(x1), dtype=float) * inv_h2
        else:
            w = np.full(n, inv_h2)
        # edges in +axis direction; the -direction edge is seen from the
        # neighboring node, and boundary edges are counted once per endpoint
        nb = nodes.copy()
        nb[:, axis] += 1
        in_bounds = nb[:, axis] < mask.shape[axis]
        nb_row = np.full(n, -1, dtype=np.int64)
        nb_row[in_bounds] = row_of[tuple(nb[in_bounds].T)]
        interior = nb_row >= 0
        # interior edge: w on both diagonals, -w symmetric off-diagonal
        i = np.arange(n)[interior]
        j = nb_row[interior]
        we = w[interior]
        np.add.at(diag, i, we)
        np.add.at(diag, j, we)
        rows.extend([i, j])
        cols.extend([j, i])
        vals.extend([-we, -we])
        # boundary edge in +direction
        np.add.at(diag, np.arange(n)[~interior], w[~interior])
        # boundary edge in -direction
        pv = nodes.copy()
        pv[:, axis] -= 1
        ok = pv[:, axis] >= 0
        pv_row = np.full(n, -1, dtype=np.int64)
        pv_row[ok] = row_of[tuple(pv[ok].T)]
        bnd = pv_row < 0
        np.add.at(diag, np.arange(n)[bnd], w[bnd])

    rows.append(np.arange(n))
    cols.append(np.arange(n))
    vals.append(diag)
    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    mat.sum_duplicates()
    return DiscreteOperator(matrix=mat, grid=dom, kind=kind, nodes=nodes, row_of=row_of)


def assemble_euclidean(dom: GridDomain) -> DiscreteOperator:
    """Second-difference Dirichlet Laplacian on the interior nodes."""
    if not dom.mask.any():
        raise ValueError("empty domain")
    return _assemble(dom, "euclidean")


def assemble_hyperbolic(dom: GridDomain, tilde_weight=None) -> DiscreteOperator:
    """Discretization of -d^2/dx_1^2 - exp(2 x_1) * Laplacian in the tilde axes.

    tilde_weight is a test hook replacing exp(2 x_1); for d=1 the operator
    coincides with the euclidean one.
    """
    if not dom.mask.any():
        raise ValueError("empty domain")
    return _assemble(dom, "hyperbolic", tilde_weight=tilde_weight)


def apply(op: DiscreteOperator, v) -> np.ndarray:
    v = np.asarray(v)
    if v.shape[0] != op.n:
        raise DimensionMismatchError(f"expected length {op.n}, got {v.shape[0]}")
    return op.matrix @ v


def export_matrix(op: DiscreteOperator, path):
    """Coordinate text format: 'row col value' per stored entry, 17 significant digits."""
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write("# weylcs matrix v1\n")
        fh.write(f"# kind={op.kind} n={op.n} h={op.grid.h!r}\n")
        for i, j, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            fh.write("%d %d %.17g\n" % (i, j, v))

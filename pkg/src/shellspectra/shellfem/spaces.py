"""Hierarchic p-version spaces on the axial interval and the periodic strip.

Degrees of freedom are numbered per component; the global index of a
component-local dof ``g`` is ``c * n_per_comp + g`` (component-major).
"""
import numpy as np

from .basis import hierarchic_1d


class Space1D:
    """Degree ``p`` hierarchic space on ``nel`` uniform elements of ``[x0, x1]``."""

    dim = 1

    def __init__(self, p: int, nel: int = 16, x_range=(-1.0, 1.0)):
        self.p, self.nel = int(p), int(nel)
        self.x0, self.x1 = map(float, x_range)
        self.h = (self.x1 - self.x0) / self.nel
        p, nel = self.p, self.nel
        self.n_per_comp = nel * p + 1
        self.n_local = p + 1
        nodes = np.empty((nel, p + 1), dtype=np.int64)
        for e in range(nel):
            nodes[e, 0] = e
            nodes[e, 1] = e + 1
            nodes[e, 2:] = nel + 1 + e * (p - 1) + np.arange(p - 1)
        self.elem_nodes = nodes
        self.boundary = np.array([0, nel], dtype=np.int64)
        self.jacobian = 0.5 * self.h

    def element_origin(self, e):
        return self.x0 + e * self.h

    def local_tables(self, s):
        """Values and physical d/dx of the local functions, shape ``(n_local, nq)``."""
        N, dN = hierarchic_1d(self.p, s)
        return N, dN / self.jacobian

    def quadrature_points(self, s):
        """Physical coordinates ``(nel, nq)`` of reference points ``s``."""
        e = np.arange(self.nel)[:, None]
        return (self.x0 + (e + 0.5) * self.h + 0.5 * self.h * np.asarray(s)[None, :],)

    def locate(self, x):
        x = np.asarray(x, dtype=float).ravel()
        e = np.clip(np.floor((x - self.x0) / self.h).astype(np.int64), 0, self.nel - 1)
        s = 2.0 * (x - self.element_origin(e)) / self.h - 1.0
        return e, (s,)

    def point_tables(self, e, ref):
        (s,) = ref
        N, dN = hierarchic_1d(self.p, s)
        return N, dN / self.jacobian


class Space2D:
    """Tensor-product ``Q_p`` hierarchic space on an ``nx x ny`` mesh, periodic in y.

    The strip is ``[x0, x1] x [0, 2 pi)``.  Local function ``(i, j)`` is
    ``N_i(s) N_j(r)`` with local index ``i * (p + 1) + j``.
    """

    dim = 2

    def __init__(self, p: int, nx: int = 16, ny: int = 8, x_range=(-1.0, 1.0)):
        self.p, self.nx, self.ny = int(p), int(nx), int(ny)
        self.x0, self.x1 = map(float, x_range)
        self.hx = (self.x1 - self.x0) / self.nx
        self.hy = 2.0 * np.pi / self.ny
        p, nx, ny = self.p, self.nx, self.ny
        q = p - 1
        n_vert = (nx + 1) * ny
        n_xedge = nx * ny * q
        n_yedge = (nx + 1) * ny * q
        n_int = nx * ny * q * q
        self.n_per_comp = n_vert + n_xedge + n_yedge + n_int
        self.n_local = (p + 1) ** 2
        nel = nx * ny
        self.nel = nel
        nodes = np.empty((nel, p + 1, p + 1), dtype=np.int64)
        for ix in range(nx):
            for iy in range(ny):
                e = ix * ny + iy
                for i in range(p + 1):
                    for j in range(p + 1):
                        if i < 2 and j < 2:
                            g = (ix + i) * ny + (iy + j) % ny
                        elif j < 2:
                            g = n_vert + (ix * ny + (iy + j) % ny) * q + (i - 2)
                        elif i < 2:
                            g = n_vert + n_xedge + ((ix + i) * ny + iy) * q + (j - 2)
                        else:
                            g = (n_vert + n_xedge + n_yedge
                                 + (ix * ny + iy) * q * q + (i - 2) * q + (j - 2))
                        nodes[e, i, j] = g
        self.elem_nodes = nodes.reshape(nel, -1)
        bnd = []
        for ix in (0, nx):
            bnd.extend(ix * ny + iy for iy in range(ny))
            for iy in range(ny):
                start = n_vert + n_xedge + (ix * ny + iy) * q
                bnd.extend(range(start, start + q))
        self.boundary = np.array(sorted(bnd), dtype=np.int64)
        self.jacobian = 0.25 * self.hx * self.hy

    def _tensor(self, Ns, dNs, Nr, dNr):
        # (p+1, n) x (p+1, n) -> (n_local, n) pointwise products
        p1 = self.p + 1
        val = (Ns[:, None, :] * Nr[None, :, :]).reshape(p1 * p1, -1)
        dx = (dNs[:, None, :] * Nr[None, :, :]).reshape(p1 * p1, -1) * (2.0 / self.hx)
        dy = (Ns[:, None, :] * dNr[None, :, :]).reshape(p1 * p1, -1) * (2.0 / self.hy)
        return val, dx, dy

    def local_tables(self, s):
        """Tensor tables at the tensor grid ``s x s`` (x-major), ``(n_local, nq^2)``."""
        N, dN = hierarchic_1d(self.p, s)
        nq = len(s)
        Ns = np.repeat(N, nq, axis=1)
        dNs = np.repeat(dN, nq, axis=1)
        Nr = np.tile(N, (1, nq))
        dNr = np.tile(dN, (1, nq))
        return self._tensor(Ns, dNs, Nr, dNr)

    def quadrature_points(self, s):
        s = np.asarray(s)
        nq = len(s)
        ix, iy = np.divmod(np.arange(self.nel), self.ny)
        xs = self.x0 + (ix[:, None] + 0.5) * self.hx + 0.5 * self.hx * s[None, :]
        ys = (iy[:, None] + 0.5) * self.hy + 0.5 * self.hy * s[None, :]
        X = np.repeat(xs, nq, axis=1)
        Y = np.tile(ys, (1, nq))
        return X, Y

    def locate(self, x, y):
        x = np.asarray(x, dtype=float).ravel()
        y = np.mod(np.asarray(y, dtype=float).ravel(), 2.0 * np.pi)
        ix = np.clip(np.floor((x - self.x0) / self.hx).astype(np.int64), 0, self.nx - 1)
        iy = np.clip(np.floor(y / self.hy).astype(np.int64), 0, self.ny - 1)
        s = 2.0 * (x - self.x0 - ix * self.hx) / self.hx - 1.0
        r = 2.0 * (y - iy * self.hy) / self.hy - 1.0
        return ix * self.ny + iy, (s, r)

    def point_tables(self, e, ref):
        s, r = ref
        Ns, dNs = hierarchic_1d(self.p, s)
        Nr, dNr = hierarchic_1d(self.p, r)
        return self._tensor(Ns, dNs, Nr, dNr)

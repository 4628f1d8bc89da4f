"""Stabilizer tableau simulator (destabilizer/stabilizer form).

Supports the gate set used throughout the package: H, H_YZ, S, SDG, X, Y, Z,
CX, CY, CZ, resets and measurements in the X/Y/Z bases.  Measurements report
whether the outcome was forced by the state, and nondeterministic outcomes can
be forced externally (used to enumerate noiseless branches).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, UnsupportedGateError
from .pauli import PauliProduct


class Tableau:
    """2n x n destabilizer/stabilizer tableau with sign bits."""

    def __init__(self, n: int):
        self.n = n
        self.X = np.zeros((2 * n, n), np.uint8)
        self.Z = np.zeros((2 * n, n), np.uint8)
        self.r = np.zeros(2 * n, np.uint8)
        for i in range(n):
            self.X[i, i] = 1  # destabilizer X_i
            self.Z[n + i, i] = 1  # stabilizer Z_i

    # -- primitives --------------------------------------------------------

    def _check(self, *qs):
        for q in qs:
            if not (0 <= q < self.n):
                raise DimensionError(f"qubit {q} out of range for n={self.n}")

    def _h(self, q):
        self.r ^= self.X[:, q] & self.Z[:, q]
        self.X[:, q], self.Z[:, q] = self.Z[:, q].copy(), self.X[:, q].copy()

    def _s(self, q):
        self.r ^= self.X[:, q] & self.Z[:, q]
        self.Z[:, q] ^= self.X[:, q]

    def _cx(self, c, t):
        self.r ^= (
            self.X[:, c] & self.Z[:, t] & (self.X[:, t] ^ self.Z[:, c] ^ 1)
        )
        self.X[:, t] ^= self.X[:, c]
        self.Z[:, c] ^= self.Z[:, t]

    _GATE_SEQ = {
        "H": lambda self, q: self._h(q),
        "S": lambda self, q: self._s(q),
        "SDG": lambda self, q: (self._s(q), self._s(q), self._s(q)),
        "Z": lambda self, q: (self._s(q), self._s(q)),
        "X": lambda self, q: (self._h(q), self._s(q), self._s(q), self._h(q)),
        "H_YZ": lambda self, q: (
            self._s(q),
            self._h(q),
            self._s(q),
            self._s(q),
            self._s(q),
            self._h(q),
            self._s(q),
            self._s(q),
            self._h(q),
        ),
    }

    def apply(self, name: str, targets):
        targets = tuple(targets)
        self._check(*targets)
        if name in ("H", "S", "SDG", "X", "Z", "H_YZ"):
            (q,) = targets
            self._GATE_SEQ[name](self, q)
        elif name == "Y":
            (q,) = targets
            self.apply("Z", (q,))
            self.apply("X", (q,))
        elif name == "CX":
            c, t = targets
            self._cx(c, t)
        elif name == "CZ":
            c, t = targets
            self._h(t)
            self._cx(c, t)
            self._h(t)
        elif name == "CY":
            c, t = targets
            self.apply("SDG", (t,))
            self._cx(c, t)
            self._s(t)
        else:
            raise UnsupportedGateError(f"unsupported tableau gate {name!r}")

    # -- measurement -------------------------------------------------------

    @staticmethod
    def _g_sum(x1, z1, x2, z2):
        """Sum of the standard rowsum phase function g over qubits."""
        g = np.zeros(len(x1), np.int64)
        m = (x1 == 1) & (z1 == 1)
        g[m] = z2[m].astype(np.int64) - x2[m]
        m = (x1 == 1) & (z1 == 0)
        g[m] = z2[m].astype(np.int64) * (2 * x2[m].astype(np.int64) - 1)
        m = (x1 == 0) & (z1 == 1)
        g[m] = x2[m].astype(np.int64) * (1 - 2 * z2[m].astype(np.int64))
        return int(np.sum(g))

    def _rowsum_into(self, h, i):
        """Row h := row i * row h, standard phase bookkeeping."""
        tot = (
            2 * int(self.r[h])
            + 2 * int(self.r[i])
            + self._g_sum(self.X[i], self.Z[i], self.X[h], self.Z[h])
        ) % 4
        # destabilizer rows may pick up i/-i phases; their signs are never
        # read, so collapse to a sign bit
        self.r[h] = 1 if tot in (2, 3) else 0
        self.X[h] ^= self.X[i]
        self.Z[h] ^= self.Z[i]

    def measure_z(self, q, rng=None, force=None):
        """Measure Z on qubit q.  Returns (outcome, deterministic)."""
        self._check(q)
        n = self.n
        stab_x = self.X[n:, q]
        anticommuting = np.nonzero(stab_x)[0]
        if len(anticommuting):
            p = n + int(anticommuting[0])
            for h in range(2 * n):
                if h != p and self.X[h, q]:
                    self._rowsum_into(h, p)
            # destabilizer p-n := old stabilizer p; stabilizer p := +-Z_q
            self.X[p - n] = self.X[p]
            self.Z[p - n] = self.Z[p]
            self.r[p - n] = self.r[p]
            self.X[p] = 0
            self.Z[p] = 0
            self.Z[p, q] = 1
            if force is not None:
                outcome = int(force) & 1
            elif rng is not None:
                outcome = int(rng.integers(2))
            else:
                outcome = 0
            self.r[p] = outcome
            return outcome, False
        # deterministic: accumulate stabilizers whose destabilizer partner
        # anticommutes with Z_q
        sx = np.zeros(self.n, np.uint8)
        sz = np.zeros(self.n, np.uint8)
        sr = 0
        for i in range(n):
            if self.X[i, q]:
                row = n + i
                tot = (
                    2 * sr
                    + 2 * int(self.r[row])
                    + self._g_sum(self.X[row], self.Z[row], sx, sz)
                ) % 4
                assert tot in (0, 2)
                sr = tot // 2
                sx ^= self.X[row]
                sz ^= self.Z[row]
        return sr, True

    def measure(self, q, basis="Z", rng=None, force=None):
        if basis == "Z":
            return self.measure_z(q, rng=rng, force=force)
        if basis == "X":
            self._h(q)
            out = self.measure_z(q, rng=rng, force=force)
            self._h(q)
            return out
        if basis == "Y":
            self.apply("H_YZ", (q,))
            out = self.measure_z(q, rng=rng, force=force)
            self.apply("H_YZ", (q,))
            return out
        raise UnsupportedGateError(f"bad basis {basis!r}")

    def reset(self, q, basis="Z", rng=None):
        out, _ = self.measure_z(q, rng=rng, force=0)
        if out:
            self.apply("X", (q,))
        if basis == "X":
            self._h(q)
        elif basis == "Y":
            self.apply("H_YZ", (q,))
        elif basis != "Z":
            raise UnsupportedGateError(f"bad reset basis {basis!r}")

    # -- inspection --------------------------------------------------------

    def stabilizer(self, i) -> PauliProduct:
        """Row i of the stabilizer half as a signed PauliProduct."""
        n = self.n
        x, z = self.X[n + i], self.Z[n + i]
        # a tableau row is (-1)^r * letters, with Y at x=z=1, so the
        # bit-form exponent is 2r + (#Y)
        n_y = int(np.sum(x & z))
        return PauliProduct.from_bits(x, z, 2 * int(self.r[n + i]) + n_y)

    def stabilizers(self):
        return [self.stabilizer(i) for i in range(self.n)]

    def expectation_sign(self, p: PauliProduct):
        """If +-p is in the stabilizer group return +1/-1, else None.

        p must be Hermitian.
        """
        if p.n != self.n:
            raise DimensionError("operator size mismatch")
        # solve for p as product of stabilizer rows over GF(2)
        n = self.n
        rows = np.concatenate([self.X[n:], self.Z[n:]], axis=1)  # n x 2n
        target = np.concatenate([p.xs, p.zs])
        mat = rows.T.copy()  # 2n x n, columns are stabilizer generators
        sel = _gf2_solve(mat, target.copy())
        if sel is None:
            return None
        acc = PauliProduct.identity(n)
        for i in np.nonzero(sel)[0]:
            acc = acc * self.stabilizer(int(i))
        # acc equals +-p; compare phases
        assert acc.equals_up_to_phase(p)
        diff = (acc.phase - p.phase) % 4
        assert diff in (0, 2)
        return 1 if diff == 0 else -1


def _gf2_solve(A, b):
    """Solve A s = b over GF(2); A is (m x k) uint8.  Returns s or None."""
    A = A.copy() % 2
    b = b.copy() % 2
    m, k = A.shape
    piv_cols = []
    row = 0
    for col in range(k):
        sel = None
        for rr in range(row, m):
            if A[rr, col]:
                sel = rr
                break
        if sel is None:
            continue
        if sel != row:
            A[[row, sel]] = A[[sel, row]]
            b[[row, sel]] = b[[sel, row]]
        for rr in range(m):
            if rr != row and A[rr, col]:
                A[rr] ^= A[row]
                b[rr] ^= b[row]
        piv_cols.append(col)
        row += 1
        if row == m:
            break
    if np.any(b[row:]):
        return None
    s = np.zeros(k, np.uint8)
    for i, col in enumerate(piv_cols):
        s[col] = b[i]
    return s

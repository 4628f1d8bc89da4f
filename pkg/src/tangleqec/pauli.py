"""Exact signed Pauli-product algebra.

A ``PauliProduct`` over ``n`` qubits is ``i^k * prod_q X_q^{x_q} Z_q^{z_q}``
with ``k`` in ``{0,1,2,3}``.  The letter ``Y`` denotes ``i*X*Z``, so the
convention ``X*Z = -i*Y`` holds per qubit and products such as
``XXXXII * IIZZZZ = -XXYYZZ`` come out with the expected sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, UnsupportedGateError

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {v: k for k, v in _LETTER_TO_BITS.items()}


@dataclass(frozen=True)
class PauliProduct:
    """Immutable signed Pauli operator on a fixed number of qubits."""

    x: bytes
    z: bytes
    phase: int  # exponent k in i^k

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_bits(x, z, phase=0) -> "PauliProduct":
        x = np.asarray(x, dtype=np.uint8) & 1
        z = np.asarray(z, dtype=np.uint8) & 1
        if x.shape != z.shape:
            raise DimensionError("x/z bit vectors differ in length")
        return PauliProduct(x.tobytes(), z.tobytes(), phase % 4)

    @staticmethod
    def identity(n: int) -> "PauliProduct":
        return PauliProduct.from_bits(np.zeros(n, np.uint8), np.zeros(n, np.uint8))

    @staticmethod
    def from_string(s: str) -> "PauliProduct":
        """Parse e.g. ``"XXYYZZ"``, ``"-XXYYZZ"``, ``"+iXZ"``, ``"-iY"``."""
        sign = 0
        if s.startswith(("+", "-")):
            sign = 0 if s[0] == "+" else 2
            s = s[1:]
        if s.startswith("i"):
            sign += 1
            s = s[1:]
        try:
            bits = [_LETTER_TO_BITS[c] for c in s]
        except KeyError as exc:
            raise ValueError(f"bad Pauli letter {exc.args[0]!r}") from None
        x = np.array([b[0] for b in bits], np.uint8)
        z = np.array([b[1] for b in bits], np.uint8)
        # letter form has phase i^sign relative to the letters, and each Y
        # letter equals i*XZ, so the bit-form exponent gains one per Y.
        n_y = int(np.sum(x & z))
        return PauliProduct.from_bits(x, z, sign + n_y)

    @staticmethod
    def from_terms(n: int, terms) -> "PauliProduct":
        """Build +1 * product of single-qubit letters ``terms``: iterable of
        (qubit, letter).  Repeated qubits multiply in the given order."""
        p = PauliProduct.identity(n)
        for q, letter in terms:
            single = PauliProduct.single(n, q, letter)
            p = p * single
        return p

    @staticmethod
    def single(n: int, q: int, letter: str) -> "PauliProduct":
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        bx, bz = _LETTER_TO_BITS[letter]
        x[q], z[q] = bx, bz
        return PauliProduct.from_bits(x, z, 1 if letter == "Y" else 0)

    # -- views -------------------------------------------------------------

    @property
    def xs(self) -> np.ndarray:
        return np.frombuffer(self.x, dtype=np.uint8)

    @property
    def zs(self) -> np.ndarray:
        return np.frombuffer(self.z, dtype=np.uint8)

    @property
    def n(self) -> int:
        return len(self.x)

    def letters(self) -> str:
        return "".join(
            _BITS_TO_LETTER[(int(a), int(b))] for a, b in zip(self.xs, self.zs)
        )

    def letter(self, q: int) -> str:
        return _BITS_TO_LETTER[(int(self.xs[q]), int(self.zs[q]))]

    @property
    def letter_phase(self) -> int:
        """Exponent s in ``i^s * letters``."""
        n_y = int(np.sum(self.xs & self.zs))
        return (self.phase - n_y) % 4

    @property
    def sign(self) -> complex:
        return (1j) ** self.letter_phase

    def is_hermitian(self) -> bool:
        return self.letter_phase % 2 == 0

    def __str__(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.letter_phase]
        return prefix + self.letters()

    def __repr__(self) -> str:
        return f"PauliProduct({str(self)!r})"

    def weight(self) -> int:
        return int(np.sum(self.xs | self.zs))

    def support(self):
        return [int(q) for q in np.nonzero(self.xs | self.zs)[0]]

    def is_identity(self) -> bool:
        return self.weight() == 0

    def equals_up_to_phase(self, other: "PauliProduct") -> bool:
        return self.x == other.x and self.z == other.z

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliProduct") -> "PauliProduct":
        return multiply(self, other)

    def power(self, e: int) -> "PauliProduct":
        if e % 2 == 0:
            # p^2 = i^{2k} * (-1)^{x.z} up to identity letters; for
            # Hermitian p this is I.  Track the exact phase anyway.
            sq = multiply(self, self)
            assert sq.is_identity()
            return sq if e % 4 == 2 else PauliProduct.identity(self.n)
        return self if e % 4 == 1 else multiply(multiply(self, self), self)

    def negate(self) -> "PauliProduct":
        return PauliProduct(self.x, self.z, (self.phase + 2) % 4)

    def padded(self, n: int) -> "PauliProduct":
        """Extend with identities up to n qubits."""
        if n < self.n:
            raise DimensionError("cannot shrink an operator")
        pad = np.zeros(n - self.n, np.uint8)
        return PauliProduct.from_bits(
            np.concatenate([self.xs, pad]),
            np.concatenate([self.zs, pad]),
            self.phase,
        )


def multiply(a: PauliProduct, b: PauliProduct) -> PauliProduct:
    """Exact product a*b with phase bookkeeping."""
    if a.n != b.n:
        raise DimensionError(f"length mismatch: {a.n} vs {b.n}")
    # reorder (X^xa Z^za)(X^xb Z^zb): moving X^xb left past Z^za gives
    # (-1)^(za.xb)
    swap = int(np.sum(a.zs & b.xs))
    phase = (a.phase + b.phase + 2 * swap) % 4
    return PauliProduct.from_bits(a.xs ^ b.xs, a.zs ^ b.zs, phase)


def commutes(a: PauliProduct, b: PauliProduct) -> bool:
    if a.n != b.n:
        raise DimensionError(f"length mismatch: {a.n} vs {b.n}")
    sym = int(np.sum(a.xs & b.zs)) + int(np.sum(a.zs & b.xs))
    return sym % 2 == 0


# -- Clifford conjugation --------------------------------------------------

# images of X and Z generators under gate conjugation U P U^dag.
# entry: (phase exponent, [(target-slot, 'X'|'Z'), ...]) where the listed
# single-qubit factors multiply left to right.
_GATE_IMAGES = {
    "H": {("X", 0): (0, [(0, "Z")]), ("Z", 0): (0, [(0, "X")])},
    "S": {("X", 0): (1, [(0, "X"), (0, "Z")]), ("Z", 0): (0, [(0, "Z")])},
    "SDG": {("X", 0): (3, [(0, "X"), (0, "Z")]), ("Z", 0): (0, [(0, "Z")])},
    # H_YZ swaps Y and Z eigenstates: X -> -X, Z -> Y, Y -> Z
    "H_YZ": {("X", 0): (2, [(0, "X")]), ("Z", 0): (1, [(0, "X"), (0, "Z")])},
    "X": {("X", 0): (0, [(0, "X")]), ("Z", 0): (2, [(0, "Z")])},
    "Y": {("X", 0): (2, [(0, "X")]), ("Z", 0): (2, [(0, "Z")])},
    "Z": {("X", 0): (2, [(0, "X")]), ("Z", 0): (0, [(0, "Z")])},
    "CX": {
        ("X", 0): (0, [(0, "X"), (1, "X")]),
        ("Z", 0): (0, [(0, "Z")]),
        ("X", 1): (0, [(1, "X")]),
        ("Z", 1): (0, [(0, "Z"), (1, "Z")]),
    },
    "CZ": {
        ("X", 0): (0, [(0, "X"), (1, "Z")]),
        ("Z", 0): (0, [(0, "Z")]),
        ("X", 1): (0, [(0, "Z"), (1, "X")]),
        ("Z", 1): (0, [(1, "Z")]),
    },
    "CY": {
        ("X", 0): (1, [(0, "X"), (1, "X"), (1, "Z")]),
        ("Z", 0): (0, [(0, "Z")]),
        ("X", 1): (0, [(0, "Z"), (1, "X")]),
        ("Z", 1): (0, [(0, "Z"), (1, "Z")]),
    },
}

CLIFFORD_GATES = frozenset(_GATE_IMAGES)


def conjugate_gate(p: PauliProduct, name: str, targets) -> PauliProduct:
    """Return U p U^dag for a single named Clifford gate."""
    if name not in _GATE_IMAGES:
        raise UnsupportedGateError(f"non-Clifford instruction {name!r}")
    images = _GATE_IMAGES[name]
    targets = tuple(targets)
    n = p.n
    for t in targets:
        if not (0 <= t < n):
            raise DimensionError(f"target {t} out of range for n={n}")
    xs, zs = p.xs, p.zs
    # qubits outside the gate keep their letters
    keep_x = xs.copy()
    keep_z = zs.copy()
    for t in targets:
        keep_x[t] = 0
        keep_z[t] = 0
    out = PauliProduct.from_bits(keep_x, keep_z, p.phase)
    for slot, t in enumerate(targets):
        for kind, bit in (("X", xs[t]), ("Z", zs[t])):
            if not bit:
                continue
            ph, factors = images[(kind, slot)]
            img = PauliProduct.identity(n)
            for fslot, fletter in factors:
                img = multiply(
                    img,
                    PauliProduct.from_bits(*_one_hot(n, targets[fslot], fletter)),
                )
            img = PauliProduct(img.x, img.z, (img.phase + ph) % 4)
            out = multiply(out, img)
    return out


def _one_hot(n, q, letter):
    x = np.zeros(n, np.uint8)
    z = np.zeros(n, np.uint8)
    bx, bz = _LETTER_TO_BITS[letter]
    x[q], z[q] = bx, bz
    return x, z


def conjugate(p: PauliProduct, instructions) -> PauliProduct:
    """Conjugate ``p`` through a sequence of Clifford instructions applied in
    time order: returns ``U p U^dag`` for ``U = U_last ... U_first``.

    Accepts any iterable of objects with ``name`` and ``targets`` attributes
    (or ``(name, targets)`` tuples).  TICKs are skipped; anything else
    non-Clifford raises.
    """
    for ins in instructions:
        if isinstance(ins, tuple):
            name, targets = ins
        else:
            name, targets = ins.name, ins.targets
        if name == "TICK":
            continue
        p = conjugate_gate(p, name, targets)
    return p


def conjugate_by_sqrt(p: PauliProduct, g: PauliProduct, dagger=False) -> PauliProduct:
    """Conjugate by ``V = (I - i g)/sqrt(2)`` (or its dagger).

    ``V p V^dag = p`` when ``[p, g] = 0`` and ``-i g p`` otherwise.
    """
    if commutes(p, g):
        return p
    out = multiply(g, p)
    shift = 1 if dagger else 3  # +i or -i
    return PauliProduct(out.x, out.z, (out.phase + shift) % 4)


def conjugate_by_pauli(p: PauliProduct, g: PauliProduct) -> PauliProduct:
    """g p g^dag for a Hermitian Pauli g: p up to a sign."""
    if commutes(p, g):
        return p
    return p.negate()

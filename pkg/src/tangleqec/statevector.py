"""Dense statevector simulator for small systems (ground-truth oracle)."""

from __future__ import annotations

import numpy as np

from .errors import CapacityError, DimensionError, UnsupportedGateError
from .pauli import PauliProduct

MAX_QUBITS = 14

_SQ = 1 / np.sqrt(2)
_GATES_1Q = {
    "H": np.array([[_SQ, _SQ], [_SQ, -_SQ]], complex),
    "S": np.array([[1, 0], [0, 1j]], complex),
    "SDG": np.array([[1, 0], [0, -1j]], complex),
    "X": np.array([[0, 1], [1, 0]], complex),
    "Y": np.array([[0, -1j], [1j, 0]], complex),
    "Z": np.array([[1, 0], [0, -1]], complex),
}
# H_YZ: swaps Y and Z eigenstates; equals S H SDG X in time order, i.e.
# matrix X @ SDG @ H @ S
_GATES_1Q["H_YZ"] = (
    _GATES_1Q["X"] @ _GATES_1Q["SDG"] @ _GATES_1Q["H"] @ _GATES_1Q["S"]
)

_BASIS_CONJ = {"Z": None, "X": "H", "Y": "H_YZ"}


class StateVector:
    """Mutable statevector on n <= 14 qubits; amplitudes indexed with qubit 0
    as the most significant bit."""

    def __init__(self, n: int):
        if n > MAX_QUBITS:
            raise CapacityError(f"{n} qubits exceeds statevector cap {MAX_QUBITS}")
        self.n = n
        self.amps = np.zeros(2**n, complex)
        self.amps[0] = 1.0

    def copy(self) -> "StateVector":
        s = StateVector.__new__(StateVector)
        s.n = self.n
        s.amps = self.amps.copy()
        return s

    def _axes(self):
        return self.amps.reshape((2,) * self.n)

    def apply(self, name: str, targets):
        targets = tuple(targets)
        for q in targets:
            if not (0 <= q < self.n):
                raise DimensionError(f"qubit {q} out of range")
        if name in _GATES_1Q:
            (q,) = targets
            t = self._axes()
            t = np.moveaxis(t, q, 0)
            t2 = np.tensordot(_GATES_1Q[name], t, axes=(1, 0))
            self.amps = np.moveaxis(t2, 0, q).reshape(-1)
        elif name in ("CX", "CY", "CZ"):
            c, t = targets
            u = {"CX": "X", "CY": "Y", "CZ": "Z"}[name]
            axes = self._axes()
            axes = np.moveaxis(axes, (c, t), (0, 1))
            block = axes[1]
            axes[1] = np.tensordot(_GATES_1Q[u], block, axes=(1, 0))
            self.amps = np.moveaxis(axes, (0, 1), (c, t)).reshape(-1)
        else:
            raise UnsupportedGateError(f"unsupported statevector gate {name!r}")

    def apply_pauli(self, p: PauliProduct):
        if p.n != self.n:
            raise DimensionError("operator size mismatch")
        for q in p.support():
            self.apply(p.letter(q), (q,))
        self.amps *= (1j) ** p.letter_phase

    def prob_zero(self, q, basis="Z") -> float:
        conj = _BASIS_CONJ[basis]
        if conj:
            self.apply(conj, (q,))
        t = np.moveaxis(self._axes(), q, 0)
        p0 = float(np.sum(np.abs(t[0]) ** 2))
        if conj:
            self.apply(conj, (q,))
        return p0

    def measure(self, q, basis="Z", force=None, rng=None):
        """Project qubit q; returns (outcome, probability of that outcome)."""
        conj = _BASIS_CONJ[basis]
        if conj:
            self.apply(conj, (q,))
        t = np.moveaxis(self._axes(), q, 0)
        probs = [float(np.sum(np.abs(t[b]) ** 2)) for b in (0, 1)]
        if force is not None:
            outcome = int(force) & 1
        elif rng is not None:
            outcome = int(rng.random() < probs[1])
        else:
            outcome = int(probs[1] > 0.5)
        prob = probs[outcome]
        t[1 - outcome] = 0
        if prob > 0:
            self.amps = self.amps / np.sqrt(prob)
        if conj:
            self.apply(conj, (q,))
        return outcome, prob

    def reset(self, q, basis="Z", rng=None):
        out, _ = self.measure(q, rng=rng)
        if out:
            self.apply("X", (q,))
        conj = _BASIS_CONJ[basis]
        if conj:
            self.apply(conj, (q,))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amps, other.amps))


def projector_overlap(s: StateVector, p: PauliProduct, sign: int = +1) -> float:
    """<s| (I + sign*p)/2 |s> for Hermitian p."""
    t = s.copy()
    t.apply_pauli(p)
    val = np.vdot(s.amps, t.amps)
    return float(np.real(1 + sign * val) / 2)


def statevector_run(circuit, rng=None, forced=None, initial=None):
    """Run a noiseless circuit; returns (state, outcomes list, branch prob).

    ``forced``: optional list of outcome bits to impose on measurements in
    record order (entries may be None to leave free).  ``initial``: optional
    starting StateVector (copied).
    """
    from .circuit import MEASUREMENTS, RESETS  # local import to avoid cycle

    if initial is not None:
        if initial.n != circuit.n:
            raise DimensionError("initial state size mismatch")
        s = initial.copy()
    else:
        s = StateVector(circuit.n)
    outcomes = []
    prob = 1.0
    for ins in circuit.instructions:
        if ins.name == "TICK" or ins.name in ("DETECTOR", "OBSERVABLE"):
            continue
        if ins.name in RESETS:
            for q in ins.targets:
                s.reset(q, basis=RESETS[ins.name], rng=rng)
        elif ins.name in MEASUREMENTS:
            for q in ins.targets:
                idx = len(outcomes)
                force = None
                if forced is not None and idx < len(forced):
                    force = forced[idx]
                out, p_out = s.measure(
                    q, basis=MEASUREMENTS[ins.name], force=force, rng=rng
                )
                outcomes.append(out)
                prob *= p_out
                if prob == 0.0:
                    return s, outcomes, 0.0
        elif ins.name in _GATES_1Q or ins.name in ("CX", "CY", "CZ"):
            s.apply(ins.name, ins.targets)
        else:
            raise UnsupportedGateError(f"cannot oracle-simulate {ins.name!r}")
    return s, outcomes, prob

"""Statevector oracle for tangled-extraction correctness.

Checks that a combined extraction circuit with its derived measurement plan
and Clifford correction measures exactly the product operator of every
tangling tree: for each input stabilizer state and each measurement branch,
the corrected output state must equal the simultaneous projection of the
input onto the (+-1) eigenspaces reported by the per-tree XOR rules.
"""

from __future__ import annotations

import itertools

import numpy as np

from .circuit import apply_plan, build_aux_extraction, combine
from .errors import CapacityError
from .pauli import PauliProduct, multiply
from .schedule import derive_forest_plan, tree_product
from .statevector import MAX_QUBITS, StateVector, statevector_run


def assemble_tangled_circuit(schedules, n_data):
    """Build the combined, plan-applied circuit for a component set.

    Auxiliary qubit for the i-th schedule is ``n_data + i``.  Returns
    (circuit, graph, plans) where plans is a list of
    (tree, MeasurementPlan, CliffordCorrection).
    """
    n_total = n_data + len(schedules)
    parts = []
    for i, (f, g) in enumerate(schedules):
        parts.append(build_aux_extraction(g.padded(n_total), f, n_data + i, n=n_total))
    circuit = combine(parts)
    graph, plans = derive_forest_plan(schedules)
    for _, plan, _ in plans:
        circuit = apply_plan(circuit, plan)
    return circuit, graph, plans


def apply_correction(state: StateVector, correction, raw_outcomes, n_total):
    """Apply prod_k P_k^{m_k} V_k^dag in entry order (all factors commute).

    The extraction leaves a residual sqrt-of-Pauli V_k = (I - i P_k)/sqrt(2)
    times P_k^{m_k} on the data for every pruned vertex; this undoes it.
    """
    for p, expr in correction.entries:
        p_full = p.padded(n_total)
        m = expr.evaluate(raw_outcomes)
        if m:
            state.apply_pauli(p_full)
        # V^dag = (I + i p)/sqrt(2)
        rotated = state.copy()
        rotated.apply_pauli(p_full)
        state.amps = (state.amps + 1j * rotated.amps) / np.sqrt(2)


def _aux_eigenstate_prep(basis, outcome):
    ops = [("H", None)] if basis == "X" else [("H_YZ", None)]
    if outcome:
        ops.append(("Z", None))
    return ops


def oracle_check_forest(schedules, n_states=20, seed=0, atol=1e-9):
    """Exhaustive branch-by-branch oracle check of a tangled forest.

    ``schedules``: list of (ScheduleMap, PauliProduct) with the operators all
    over the same data-qubit count.  Returns a report dict with the worst
    overlap deviation; raises nothing on mismatch (check report["ok"]).
    """
    n_data = schedules[0][1].n
    n_total = n_data + len(schedules)
    if n_total > MAX_QUBITS:
        raise CapacityError(f"{n_total} qubits exceeds the oracle cap")
    circuit, graph, plans = assemble_tangled_circuit(schedules, n_data)
    components = {f.component: g for f, g in schedules}
    aux_of = circuit.meta["aux_of"]
    meas = circuit.measurements()  # record order
    rec_of_aux = {q: idx for idx, q, _ in meas}
    basis_of_aux = {q: b for _, q, b in meas}

    rng = np.random.default_rng(seed)
    worst = 0.0
    checked_branches = 0
    for _ in range(n_states):
        psi = _random_stabilizer_state(rng, n_data, n_total)
        m = len(meas)
        for pattern in itertools.product((0, 1), repeat=m):
            out_state, outcomes, prob = statevector_run(
                circuit, forced=list(pattern), initial=psi
            )
            if prob < 1e-12:
                continue
            checked_branches += 1
            raw = {
                cid: outcomes[rec_of_aux[aux]] for cid, aux in aux_of.items()
            }
            # expected: project input onto reported eigenspaces, set aux
            expected = psi.copy()
            ok_branch = True
            for tree, plan, corr in plans:
                h = tree_product(tree, components).padded(n_total)
                b = plan.product.evaluate(raw)
                proj = expected.copy()
                proj.apply_pauli(h)
                expected.amps = (
                    expected.amps + (-1) ** b * proj.amps
                ) / 2
                norm = np.linalg.norm(expected.amps)
                if norm < 1e-12:
                    # reported eigenvalue impossible for this input, yet the
                    # branch occurred: maximal failure
                    ok_branch = False
                    break
                expected.amps /= norm
            if not ok_branch:
                worst = max(worst, 1.0)
                continue
            for cid, aux in aux_of.items():
                basis = basis_of_aux[aux]
                expected.apply("H" if basis == "X" else "H_YZ", (aux,))
                if raw[cid]:
                    expected.apply("Z", (aux,))
            corrected = out_state
            for _, _, corr in plans:
                apply_correction(corrected, corr, raw, n_total)
            overlap = abs(np.vdot(expected.amps, corrected.amps))
            worst = max(worst, abs(1.0 - overlap))
    return {
        "ok": worst <= atol,
        "max_deviation": worst,
        "branches": checked_branches,
        "graph": graph,
        "plans": plans,
    }


def _random_stabilizer_state(rng, n_data, n_total):
    s = StateVector(n_total)
    gates = ("H", "S", "H_YZ")
    for _ in range(4 * n_data):
        if n_data > 1 and rng.random() < 0.4:
            a, b = rng.choice(n_data, 2, replace=False)
            s.apply(("CX", "CZ", "CY")[rng.integers(3)], (int(a), int(b)))
        else:
            s.apply(gates[rng.integers(3)], (int(rng.integers(n_data)),))
    return s


def measured_products(schedules):
    """Human-readable summary: per tree, the product operator and XOR rule."""
    _, plans = derive_forest_plan(schedules)
    components = {f.component: g for f, g in schedules}
    out = []
    for tree, plan, corr in plans:
        h = tree_product(tree, components)
        out.append(
            {
                "components": list(tree[0]),
                "product": str(h),
                "outcome": str(plan.product),
                "bases": dict(plan.bases),
                "correction": [(str(p), str(e)) for p, e in corr.entries],
            }
        )
    return out

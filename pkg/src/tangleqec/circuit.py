"""Circuit representation, text format, builders and rewrites.

A circuit is an ordered instruction list partitioned into layers by TICK.
Instructions within a layer execute in listed order (this matters only for
single-qubit basis changes merged into measurement/reset layers); the layer
structure drives idle-noise accounting.  Measurement record indices count
measured targets in instruction order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DepthError,
    DimensionError,
    ParseError,
    PreconditionError,
    ScheduleConflictError,
    UnsupportedGateError,
)
from .pauli import PauliProduct

GATES_1Q = ("H", "H_YZ", "S", "SDG", "X", "Y", "Z")
GATES_2Q = ("CX", "CY", "CZ")
MEASUREMENTS = {"MZ": "Z", "MX": "X", "MY": "Y"}
RESETS = {"RZ": "Z", "RX": "X", "RY": "Y"}
NOISE_OPS = ("DEPOLARIZE1", "DEPOLARIZE2", "FLIP_RESULT")
ANNOTATIONS = ("DETECTOR", "OBSERVABLE")
ALL_OPS = (
    GATES_1Q
    + GATES_2Q
    + tuple(MEASUREMENTS)
    + tuple(RESETS)
    + NOISE_OPS
    + ANNOTATIONS
    + ("TICK",)
)

ROLE_DATA = "data"
ROLE_AUX = "auxiliary"
ROLE_ACCESSORY = "accessory"


@dataclass(frozen=True)
class Instruction:
    name: str
    targets: tuple = ()
    arg: float | None = None  # probability, or observable index
    rec: tuple = ()  # negative lookback refs for DETECTOR/OBSERVABLE

    def __post_init__(self):
        if self.name not in ALL_OPS:
            raise UnsupportedGateError(f"unknown opcode {self.name!r}")
        if self.name in GATES_2Q or self.name == "DEPOLARIZE2":
            if self.name in GATES_2Q and len(self.targets) != 2:
                raise PreconditionError(f"{self.name} needs exactly 2 targets")
            if len(self.targets) % 2:
                raise PreconditionError(f"{self.name} needs target pairs")
            for i in range(0, len(self.targets), 2):
                if self.targets[i] == self.targets[i + 1]:
                    raise PreconditionError(
                        f"{self.name} duplicate target {self.targets[i]}"
                    )
        if self.name in NOISE_OPS:
            if self.arg is None or not (0.0 <= self.arg <= 1.0):
                raise PreconditionError(f"{self.name} needs probability in [0,1]")
        for r in self.rec:
            if r >= 0:
                raise PreconditionError("record references must be negative")

    def touched(self):
        return set(self.targets)

    def is_gate(self):
        return self.name in GATES_1Q or self.name in GATES_2Q


class Circuit:
    """Immutable-by-convention instruction sequence over n typed qubits."""

    def __init__(self, n, instructions=(), roles=None, meta=None):
        self.n = n
        self.instructions = tuple(instructions)
        self.roles = tuple(roles) if roles is not None else (ROLE_DATA,) * n
        if len(self.roles) != n:
            raise DimensionError("roles length != qubit count")
        self.meta = dict(meta or {})
        self._validate()

    def _validate(self):
        for ins in self.instructions:
            for t in ins.targets:
                if not (0 <= t < self.n):
                    raise DimensionError(f"target {t} out of range (n={self.n})")
        # within a layer, a qubit may appear in at most one two-qubit gate
        for li, layer in enumerate(self.layers()):
            twoq = set()
            for ins in layer:
                if ins.name in GATES_2Q:
                    for t in ins.targets:
                        if t in twoq:
                            raise ScheduleConflictError([(li, t)])
                        twoq.add(t)

    def layers(self):
        out = [[]]
        for ins in self.instructions:
            if ins.name == "TICK":
                out.append([])
            else:
                out[-1].append(ins)
        return out

    @property
    def num_layers(self):
        return len(self.layers())

    def measurements(self):
        """List of (record index, qubit, basis) in record order."""
        out = []
        for ins in self.instructions:
            if ins.name in MEASUREMENTS:
                for q in ins.targets:
                    out.append((len(out), q, MEASUREMENTS[ins.name]))
        return out

    @property
    def num_measurements(self):
        return sum(
            len(i.targets) for i in self.instructions if i.name in MEASUREMENTS
        )

    def detectors(self):
        """List of absolute-record-index tuples, one per DETECTOR."""
        out = []
        seen = 0
        for ins in self.instructions:
            if ins.name in MEASUREMENTS:
                seen += len(ins.targets)
            elif ins.name == "DETECTOR":
                out.append(tuple(seen + r for r in ins.rec))
        return out

    def observables(self):
        """Mapping observable index -> sorted tuple of absolute record ids."""
        acc = {}
        seen = 0
        for ins in self.instructions:
            if ins.name in MEASUREMENTS:
                seen += len(ins.targets)
            elif ins.name == "OBSERVABLE":
                idx = int(ins.arg or 0)
                cur = set(acc.get(idx, ()))
                cur ^= {seen + r for r in ins.rec}
                acc[idx] = tuple(sorted(cur))
        return acc

    def replace(self, instructions=None, meta=None):
        return Circuit(
            self.n,
            self.instructions if instructions is None else instructions,
            self.roles,
            {**self.meta, **(meta or {})},
        )

    def __eq__(self, other):
        return (
            isinstance(other, Circuit)
            and self.n == other.n
            and self.roles == other.roles
            and self.instructions == other.instructions
        )

    def __hash__(self):
        return hash((self.n, self.roles, self.instructions))


# -- text format -----------------------------------------------------------


def serialize(c: Circuit) -> str:
    lines = []
    for ins in c.instructions:
        if ins.name == "TICK":
            lines.append("TICK")
            continue
        parts = [ins.name]
        if ins.name in NOISE_OPS:
            parts[0] += f"({ins.arg:g})"
        elif ins.name == "OBSERVABLE":
            parts[0] += f"({int(ins.arg or 0)})"
        parts.extend(str(t) for t in ins.targets)
        parts.extend(f"rec[{r}]" for r in ins.rec)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_text(s: str) -> Circuit:
    instructions = []
    max_q = -1
    for lineno, raw in enumerate(s.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        head = fields[0]
        arg = None
        if "(" in head:
            if not head.endswith(")"):
                raise ParseError("malformed argument", lineno)
            head, argtxt = head[:-1].split("(", 1)
            try:
                arg = float(argtxt)
            except ValueError:
                raise ParseError(f"malformed probability {argtxt!r}", lineno)
        if head not in ALL_OPS:
            raise ParseError(f"unknown opcode {head!r}", lineno)
        targets = []
        rec = []
        for tok in fields[1:]:
            if tok.startswith("rec["):
                if not tok.endswith("]"):
                    raise ParseError(f"malformed record ref {tok!r}", lineno)
                try:
                    rec.append(int(tok[4:-1]))
                except ValueError:
                    raise ParseError(f"malformed record ref {tok!r}", lineno)
            else:
                try:
                    targets.append(int(tok))
                except ValueError:
                    raise ParseError(f"bad target {tok!r}", lineno)
                if targets[-1] < 0:
                    raise ParseError(f"negative target {tok!r}", lineno)
        try:
            ins = Instruction(head, tuple(targets), arg, tuple(rec))
        except (PreconditionError, UnsupportedGateError) as exc:
            raise ParseError(str(exc), lineno)
        instructions.append(ins)
        if targets:
            max_q = max(max_q, max(targets))
    return Circuit(max_q + 1, instructions)


# -- builders --------------------------------------------------------------

_LETTER_TO_CGATE = {"X": "CX", "Y": "CY", "Z": "CZ"}


def build_aux_extraction(g: PauliProduct, f, aux: int, n=None, roles=None) -> Circuit:
    """One auxiliary syndrome-extraction round for component g.

    Layer 0: RX on aux; layers 1..depth: controlled-P gates (aux control) per
    the schedule; final layer: MX on aux.
    """
    from .schedule import term_qubits  # local to avoid import cycle

    qs = term_qubits(g)
    if len(qs) != len(f.steps):
        raise DimensionError("schedule does not match component terms")
    if aux in qs:
        raise PreconditionError("auxiliary overlaps component support")
    if n is None:
        n = max([aux] + qs) + 1
    by_step = {f.steps[i]: q for i, q in enumerate(qs)}
    instructions = [Instruction("RX", (aux,)), Instruction("TICK")]
    for step in range(1, f.depth + 1):
        if step in by_step:
            q = by_step[step]
            instructions.append(
                Instruction(_LETTER_TO_CGATE[g.letter(q)], (aux, q))
            )
        instructions.append(Instruction("TICK"))
    instructions.append(Instruction("MX", (aux,)))
    if roles is None:
        roles = [ROLE_DATA] * n
        roles[aux] = ROLE_AUX
    return Circuit(
        n,
        instructions,
        roles,
        meta={"aux_of": {f.component: aux}, "component_of": {aux: f.component}},
    )


def combine(circuits) -> Circuit:
    """Layer-wise union of same-depth circuits; enforces condition (a)."""
    if not circuits:
        raise PreconditionError("nothing to combine")
    depths = {c.num_layers for c in circuits}
    if len(depths) != 1:
        raise DepthError(f"mixed circuit depths {sorted(depths)}")
    n = max(c.n for c in circuits)
    roles = [ROLE_DATA] * n
    for c in circuits:
        for q, r in enumerate(c.roles):
            if r != ROLE_DATA:
                roles[q] = r
    layer_lists = [c.layers() for c in circuits]
    instructions = []
    violations = []
    for li in range(next(iter(depths))):
        used = {}
        for c, layers in zip(circuits, layer_lists):
            for ins in layers[li]:
                if ins.name in GATES_2Q or ins.is_gate():
                    for t in ins.targets:
                        if t in used and used[t] is not c:
                            violations.append((li, t))
                        used[t] = c
                instructions.append(ins)
        instructions.append(Instruction("TICK"))
    if violations:
        raise ScheduleConflictError(sorted(set(violations)))
    instructions.pop()  # trailing TICK
    meta = {"aux_of": {}, "component_of": {}}
    for c in circuits:
        meta["aux_of"].update(c.meta.get("aux_of", {}))
        meta["component_of"].update(c.meta.get("component_of", {}))
    return Circuit(n, instructions, roles, meta)


def apply_plan(c: Circuit, plan) -> Circuit:
    """Rewrite final MX to MY per the plan's bases; attach plan metadata."""
    aux_of = c.meta.get("aux_of", {})
    for cid in plan.bases:
        if cid not in aux_of:
            raise PreconditionError(f"no auxiliary recorded for component {cid}")
    to_y = {aux_of[cid] for cid, b in plan.bases.items() if b == "Y"}
    instructions = []
    for ins in c.instructions:
        if ins.name == "MX" and any(t in to_y for t in ins.targets):
            for t in ins.targets:
                instructions.append(
                    Instruction("MY" if t in to_y else "MX", (t,))
                )
        else:
            instructions.append(ins)
    return Circuit(
        c.n, instructions, c.roles, {**c.meta, "plan": plan}
    )


# -- canonicalization (Eq.-(1) style regrouping) --------------------------


def canonicalize(c: Circuit):
    """Group each auxiliary's controlled gates contiguously, emitting the CZ
    block implied by odd interchange parities.

    Returns (circuit, cz_block) where cz_block lists auxiliary pairs.  The
    output is unitarily equal to the input.
    """
    from .pauli import commutes

    resets = []
    measures = []
    controlled = []  # (aux, order index, Instruction)
    for ins in c.instructions:
        if ins.name == "TICK":
            continue
        elif ins.name in RESETS:
            resets.append(ins)
        elif ins.name in MEASUREMENTS:
            measures.append(ins)
        elif ins.name in GATES_2Q:
            controlled.append(ins)
        else:
            raise PreconditionError(
                f"non-extraction instruction {ins.name} in canonicalize"
            )
    aux_order = []
    for ins in controlled:
        if ins.targets[0] not in aux_order:
            aux_order.append(ins.targets[0])
    aux_order.sort()
    # interchange parity per auxiliary pair
    letter_of = {"CX": "X", "CY": "Y", "CZ": "Z"}
    cz_block = []
    for i, a in enumerate(aux_order):
        for b in aux_order[i + 1 :]:
            parity = 0
            for pos_b, ib in enumerate(controlled):
                if ib.targets[0] != b:
                    continue
                for pos_a in range(pos_b + 1, len(controlled)):
                    ia = controlled[pos_a]
                    if ia.targets[0] != a:
                        continue
                    # gate of a occurring after gate of b must move before it
                    if (
                        ia.targets[1] == ib.targets[1]
                        and letter_of[ia.name] != letter_of[ib.name]
                    ):
                        parity ^= 1
            if parity:
                cz_block.append((a, b))
    instructions = list(resets) + [Instruction("TICK")]
    for a, b in cz_block:
        instructions.append(Instruction("CZ", (a, b)))
        instructions.append(Instruction("TICK"))
    for a in aux_order:
        for ins in controlled:
            if ins.targets[0] == a:
                instructions.append(ins)
                instructions.append(Instruction("TICK"))
    instructions.extend(measures)
    return Circuit(c.n, instructions, c.roles, c.meta), cz_block


# -- native-gate compilation ----------------------------------------------

_PRE = {"CX": "H", "CY": "H_YZ", "CZ": None}


def compile_to_native(c: Circuit) -> Circuit:
    """Rewrite to the native set {RZ, MZ, CZ, H, H_YZ}.

    CX/CY become CZ conjugated by H / H_YZ on the target, placed inside the
    same layer; X-/Y-basis resets and measurements gain their basis change in
    their own layer.  Adjacent self-inverse basis changes on the same qubit
    across layer boundaries are cancelled.
    """
    out_layers = []
    for layer in c.layers():
        out = []
        for ins in layer:
            if ins.name in GATES_2Q:
                u = _PRE[ins.name]
                a, t = ins.targets
                if u:
                    out.append(Instruction(u, (t,)))
                out.append(Instruction("CZ", (a, t)))
                if u:
                    out.append(Instruction(u, (t,)))
            elif ins.name in ("MX", "MY"):
                u = "H" if ins.name == "MX" else "H_YZ"
                for q in ins.targets:
                    out.append(Instruction(u, (q,)))
                out.append(Instruction("MZ", ins.targets))
            elif ins.name in ("RX", "RY"):
                u = "H" if ins.name == "RX" else "H_YZ"
                out.append(Instruction("RZ", ins.targets))
                for q in ins.targets:
                    out.append(Instruction(u, (q,)))
            else:
                out.append(ins)
        out_layers.append(out)
    # cancel u ... u pairs straddling a layer boundary
    for li in range(len(out_layers) - 1):
        cur, nxt = out_layers[li], out_layers[li + 1]
        changed = True
        while changed:
            changed = False
            for q in range(c.n):
                last = next(
                    (i for i in reversed(range(len(cur))) if q in cur[i].targets),
                    None,
                )
                first = next(
                    (i for i in range(len(nxt)) if q in nxt[i].targets), None
                )
                if last is None or first is None:
                    continue
                a, b = cur[last], nxt[first]
                if (
                    a.name == b.name
                    and a.name in ("H", "H_YZ")
                    and a.targets == (q,)
                    and b.targets == (q,)
                ):
                    del cur[last]
                    del nxt[first]
                    changed = True
    instructions = []
    for li, layer in enumerate(out_layers):
        instructions.extend(layer)
        if li != len(out_layers) - 1:
            instructions.append(Instruction("TICK"))
    return Circuit(c.n, instructions, c.roles, c.meta)

"""Schedule maps, tangling conditions, and measurement-plan derivation.

A component operator ``g`` is measured through an auxiliary qubit by a round
of controlled-Pauli gates, one per non-identity term of ``g``, placed in time
steps by a ``ScheduleMap``.  Combining several such circuits is valid when no
qubit is touched twice in a step (condition (a)).  For each pair of
components, the parity of anticommuting term pairs ordered ``f_j < f_k``
(condition (b)) decides whether the pair's auxiliaries end up entangled by an
effective CZ; odd pairs form the edges of the tangling graph.  When that
graph is a forest, each tree measures the product of its components after a
basis change on the auxiliaries plus an outcome-controlled Clifford
correction, derived here by iterative leaf pruning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    DepthError,
    DimensionError,
    NotAForestError,
    PreconditionError,
    ScheduleConflictError,
)
from .pauli import PauliProduct, commutes, multiply


@dataclass(frozen=True)
class ScheduleMap:
    """Injective map from a component's term indices to time steps.

    ``steps[i]`` is the (1-based) step of the i-th term, where terms are the
    non-identity letters of the component in ascending qubit order.
    """

    component: int
    steps: tuple
    depth: int

    def __post_init__(self):
        if len(set(self.steps)) != len(self.steps):
            raise PreconditionError(f"schedule for {self.component} not injective")
        for s in self.steps:
            if not (1 <= s <= self.depth):
                raise PreconditionError(
                    f"step {s} outside [1, {self.depth}] for component"
                    f" {self.component}"
                )

    def step_of(self, term_index: int) -> int:
        return self.steps[term_index]


def term_qubits(g: PauliProduct):
    """Qubits of g's terms in canonical (ascending) order."""
    return g.support()


def _timed_terms(f: ScheduleMap, g: PauliProduct):
    """List of (step, qubit, letter)."""
    qs = term_qubits(g)
    if len(qs) != len(f.steps):
        raise DimensionError(
            f"component {f.component}: {len(qs)} terms vs {len(f.steps)} steps"
        )
    return [(f.steps[i], q, g.letter(q)) for i, q in enumerate(qs)]


def check_condition_a(schedules):
    """Return all (step, qubit) pairs used by two or more components.

    ``schedules``: list of (ScheduleMap, PauliProduct).
    """
    depths = {f.depth for f, _ in schedules}
    if len(depths) > 1:
        raise DepthError(f"mixed schedule depths {sorted(depths)}")
    seen = {}
    violations = []
    for f, g in schedules:
        for step, q, _ in _timed_terms(f, g):
            key = (step, q)
            if key in seen and seen[key] != f.component:
                if key not in violations:
                    violations.append(key)
            else:
                seen[key] = f.component
    return sorted(violations)


def check_condition_b(j, k):
    """Parity ('even'/'odd') of anticommuting term pairs ordered f_j < f_k.

    ``j``, ``k``: (ScheduleMap, PauliProduct) pairs.  Components must
    commute; condition (a) must hold for the pair.
    """
    fj, gj = j
    fk, gk = k
    if not commutes(gj, gk):
        raise PreconditionError("components do not commute")
    if check_condition_a([j, k]):
        raise PreconditionError("condition (a) violated for the pair")
    terms_j = _timed_terms(fj, gj)
    terms_k = {q: (step, letter) for step, q, letter in _timed_terms(fk, gk)}
    count = 0
    for step_j, q, letter_j in terms_j:
        if q in terms_k:
            step_k, letter_k = terms_k[q]
            if letter_j != letter_k and step_j < step_k:
                count += 1
    return "odd" if count % 2 else "even"


@dataclass(frozen=True)
class TanglingGraph:
    vertices: tuple
    edges: tuple  # unordered pairs (j, k), j < k

    def neighbors(self, v):
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return out


def build_tangling_graph(schedules) -> TanglingGraph:
    """Edges between component pairs with odd condition-(b) parity."""
    violations = check_condition_a(schedules)
    if violations:
        raise ScheduleConflictError(violations)
    edges = []
    for i in range(len(schedules)):
        for j in range(i + 1, len(schedules)):
            if check_condition_b(schedules[i], schedules[j]) == "odd":
                a = schedules[i][0].component
                b = schedules[j][0].component
                edges.append((min(a, b), max(a, b)))
    vertices = tuple(f.component for f, _ in schedules)
    return TanglingGraph(vertices, tuple(sorted(edges)))


def assert_forest(g: TanglingGraph):
    """Split into trees; raise NotAForestError (naming a cycle) otherwise.

    Returns a list of trees, each a (vertices tuple, edges tuple) pair.
    """
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    adj = {v: [] for v in g.vertices}
    for a, b in g.edges:
        adj[a].append(b)
        adj[b].append(a)
        ra, rb = find(a), find(b)
        if ra == rb:
            # recover one cycle by BFS from a to b avoiding edge (a,b)
            prev = {a: None}
            queue = [a]
            while queue:
                v = queue.pop(0)
                for w in adj[v]:
                    if w not in prev and not (v == a and w == b):
                        prev[w] = v
                        queue.append(w)
            path = [b]
            while path[-1] != a:
                path.append(prev[path[-1]])
            raise NotAForestError(path[::-1])
        parent[ra] = rb
    groups = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    trees = []
    for vs in groups.values():
        vset = set(vs)
        es = tuple((a, b) for a, b in g.edges if a in vset)
        trees.append((tuple(sorted(vs)), es))
    return trees


@dataclass(frozen=True)
class OutcomeExpr:
    """GF(2) affine function of raw auxiliary outcomes."""

    terms: frozenset
    const: int

    @staticmethod
    def raw(cid):
        return OutcomeExpr(frozenset([cid]), 0)

    @staticmethod
    def constant(bit):
        return OutcomeExpr(frozenset(), bit & 1)

    def __xor__(self, other):
        if isinstance(other, int):
            return OutcomeExpr(self.terms, self.const ^ (other & 1))
        return OutcomeExpr(
            self.terms ^ other.terms, (self.const + other.const) % 2
        )

    def evaluate(self, outcomes) -> int:
        val = self.const
        for cid in self.terms:
            val ^= outcomes[cid] & 1
        return val

    def __str__(self):
        parts = [f"m[{c}]" for c in sorted(self.terms)]
        if self.const or not parts:
            parts.append(str(self.const))
        return " ^ ".join(parts)


@dataclass(frozen=True)
class MeasurementPlan:
    """Per-auxiliary bases and classical sign rules for one tree."""

    vertices: tuple
    bases: dict  # cid -> 'X' | 'Y'
    signs: dict  # cid -> OutcomeExpr (sign bit to XOR onto the raw outcome)
    product: OutcomeExpr  # XOR rule giving the tree's product outcome

    def ideal_outcome(self, cid) -> OutcomeExpr:
        return OutcomeExpr.raw(cid) ^ self.signs[cid]


@dataclass(frozen=True)
class CliffordCorrection:
    """Ordered entries (P_k, m_k): apply prod_k V_k P_k^{m_k},
    V_k = (I - i P_k)/sqrt(2)."""

    entries: tuple  # of (PauliProduct, OutcomeExpr)


def derive_plan(tree, components):
    """Derive (MeasurementPlan, CliffordCorrection) for one tangling tree.

    ``tree``: (vertices, edges) as produced by assert_forest.
    ``components``: mapping component id -> PauliProduct.
    """
    vertices, edges = tree
    if not vertices:
        raise PreconditionError("empty tree")
    for a in vertices:
        for b in vertices:
            if a < b and not commutes(components[a], components[b]):
                raise PreconditionError(f"components {a}, {b} do not commute")
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    degree = {v: len(adj[v]) for v in vertices}

    eff = {v: components[v] for v in vertices}
    m_expr = {}  # ideal outcome expression per vertex
    macc = {v: OutcomeExpr.constant(0) for v in vertices}  # M(v)
    bases = {}
    signs = {}
    entries = []
    remaining = set(vertices)
    live = {v: set(adj[v]) for v in vertices}

    while len(remaining) > 1:
        leaf = min(v for v in remaining if len(live[v]) == 1)
        (nb,) = live[leaf]
        d = degree[leaf]
        sign = macc[leaf] ^ ((d // 2) % 2)
        bases[leaf] = "X" if d % 2 == 0 else "Y"
        signs[leaf] = sign
        m_expr[leaf] = OutcomeExpr.raw(leaf) ^ sign
        entries.append((eff[leaf], m_expr[leaf]))
        eff[nb] = multiply(eff[nb], eff[leaf])
        macc[nb] = macc[nb] ^ m_expr[leaf]
        live[nb].discard(leaf)
        remaining.discard(leaf)

    (final,) = remaining
    d = degree[final]
    sign = macc[final] ^ ((d // 2) % 2)
    bases[final] = "X" if d % 2 == 0 else "Y"
    signs[final] = sign
    m_expr[final] = OutcomeExpr.raw(final) ^ sign

    # the final vertex's effective operator is the whole tree product, so its
    # sign-corrected outcome is the product outcome; the accumulated M-terms
    # telescope it into an XOR over every auxiliary outcome plus a constant
    product = m_expr[final]

    plan = MeasurementPlan(tuple(vertices), bases, signs, product)
    return plan, CliffordCorrection(tuple(entries))


def derive_forest_plan(schedules, components=None):
    """Convenience: graph -> forest -> per-tree plans.

    Returns (graph, list of (tree, MeasurementPlan, CliffordCorrection)).
    """
    if components is None:
        components = {f.component: g for f, g in schedules}
    graph = build_tangling_graph(schedules)
    trees = assert_forest(graph)
    out = []
    for tree in trees:
        plan, corr = derive_plan(tree, components)
        out.append((tree, plan, corr))
    return graph, out


def tree_product(tree, components) -> PauliProduct:
    """Product of a tree's component operators (exact phase)."""
    vertices, _ = tree
    acc = None
    for v in sorted(vertices):
        acc = components[v] if acc is None else multiply(acc, components[v])
    return acc


def compose_two_rounds(c: CliffordCorrection, outcomes1, outcomes2) -> PauliProduct:
    """Exact Pauli equal to round-2 correction composed with round-1's.

    ``outcomes1``/``outcomes2``: mapping component id -> raw outcome bit for
    the respective rounds.  Since all P_k commute, the product collapses to
    prod_k P_k^(1 + m_k + n_k) up to global phase.
    """
    if not c.entries:
        raise PreconditionError("empty correction")
    acc = PauliProduct.identity(c.entries[0][0].n)
    for p, expr in c.entries:
        e = 1 + expr.evaluate(outcomes1) + expr.evaluate(outcomes2)
        if e % 2:
            acc = multiply(acc, p)
    return acc

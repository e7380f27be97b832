"""Finite event structures, their maps, and the core combinatorics.

An event structure is a finite set of events, a causal partial order kept as
per-event down-closures, and a consistency family kept as the antichain of
maximal consistent sets. Configurations are the consistent down-closed subsets.
"""

from dataclasses import dataclass, field
from graphlib import TopologicalSorter, CycleError
from itertools import combinations

import networkx as nx

from .errors import (
    ConsistencyNotDownClosed,
    CycleInCause,
    ImageNotConfiguration,
    InconsistentSingleton,
    InvalidStructure,
    LocalInjectivityViolation,
    SearchBudgetExceeded,
    SizeBoundExceeded,
    UnknownEvent,
)
from .limits import DEFAULT_LIMITS


def ekey(e):
    """Total sort key over the heterogeneous hashable values used as events."""
    if isinstance(e, bool):
        return ("b", e)
    if isinstance(e, str):
        return ("s", e)
    if isinstance(e, int):
        return ("i", e)
    if isinstance(e, tuple):
        return ("t", tuple(ekey(c) for c in e))
    if isinstance(e, frozenset):
        return ("f", tuple(sorted(ekey(c) for c in e)))
    return ("o", repr(e))


def sortedevents(xs):
    return tuple(sorted(xs, key=ekey))


def cfgkey(x):
    """Canonical sort key for a set of events."""
    return (len(x), tuple(sorted(map(ekey, x))))


class EventStructure:
    """Immutable by convention; built via event_structure()."""

    def __init__(self, events, below, maxcons, name=""):
        self.name = name
        self.events = frozenset(events)
        self._below = {e: frozenset(below[e]) for e in self.events}
        self.maxcons = tuple(sorted(_antichain(maxcons), key=cfgkey))
        self._above = None
        self._immediate = None
        self._hash = None

    # ---- order -------------------------------------------------------------

    def below(self, e):
        """Causal down-closure of e, including e."""
        if e not in self._below:
            raise UnknownEvent(f"unknown event {e!r}", event=e)
        return self._below[e]

    def strict_below(self, e):
        return self.below(e) - {e}

    def above(self, e):
        if self._above is None:
            ab = {f: set() for f in self.events}
            for f in self.events:
                for d in self._below[f]:
                    ab[d].add(f)
            self._above = {f: frozenset(s) for f, s in ab.items()}
        if e not in self._above:
            raise UnknownEvent(f"unknown event {e!r}", event=e)
        return self._above[e]

    def leq(self, a, b):
        return a in self.below(b)

    def down_closure(self, xs):
        out = set()
        for e in xs:
            out |= self.below(e)
        return frozenset(out)

    def immediate_pairs(self):
        """Cover pairs (a, b): a < b with nothing strictly between."""
        if self._immediate is None:
            pairs = set()
            for b in self.events:
                preds = self.strict_below(b)
                for a in preds:
                    if not any(a in self._below[c] - {c} for c in preds):
                        pairs.add((a, b))
            self._immediate = frozenset(pairs)
        return self._immediate

    def concurrent_pairs(self):
        out = set()
        for a, b in combinations(sortedevents(self.events), 2):
            if a not in self._below[b] and b not in self._below[a] \
                    and self.is_consistent({a, b}):
                out.add((a, b))
        return frozenset(out)

    # ---- consistency and configurations -------------------------------------

    def is_consistent(self, xs):
        xs = frozenset(xs)
        return any(xs <= m for m in self.maxcons)

    def is_configuration(self, xs):
        xs = frozenset(xs)
        if not xs <= self.events:
            return False
        return self.is_consistent(xs) and all(self._below[e] <= xs for e in xs)

    def extensions(self, x):
        """Events e not in x with x + {e} a configuration."""
        out = []
        for e in sortedevents(self.events - x):
            if self._below[e] - {e} <= x and self.is_consistent(x | {e}):
                out.append(e)
        return out

    def configurations(self, limits=DEFAULT_LIMITS):
        """All configurations, smallest first, deterministic order."""
        seen = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for x in frontier:
                for e in self.extensions(x):
                    y = x | {e}
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > limits.max_configs:
                            raise SizeBoundExceeded(
                                f"more than {limits.max_configs} configurations",
                                cap=limits.max_configs)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen, key=cfgkey)

    # ---- derived structures --------------------------------------------------

    def restrict(self, keep):
        """The projection to `keep`: order and consistency restricted."""
        keep = frozenset(keep)
        unknown = keep - self.events
        if unknown:
            raise UnknownEvent(f"unknown events {sortedevents(unknown)}",
                               events=unknown)
        below = {e: self._below[e] & keep for e in keep}
        maxcons = [m & keep for m in self.maxcons]
        return EventStructure(keep, below, maxcons, name=self.name)

    # ---- identity -------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, EventStructure):
            return NotImplemented
        return (self.events == other.events and self._below == other._below
                and set(self.maxcons) == set(other.maxcons))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.events,
                               frozenset(self._below.items()),
                               frozenset(self.maxcons)))
        return self._hash

    def __repr__(self):
        nm = self.name or "es"
        return f"<{nm}: {len(self.events)} events, {len(self.maxcons)} maxcons>"


def _antichain(sets):
    """Drop members included in another member; dedupe."""
    sets = sorted({frozenset(s) for s in sets}, key=len, reverse=True)
    out = []
    for s in sets:
        if not any(s < t for t in out):
            out.append(s)
    if not out:
        out = [frozenset()]
    return out


# ---- construction and validation --------------------------------------------


def diagnose_structure(events, causes=(), conflicts=(), consistent=None):
    """Collect diagnostics; on success the last element is the built structure.

    Returns (diagnostics, structure_or_None).
    """
    diags = []
    events = list(dict.fromkeys(events))
    evset = set(events)

    def known(e, where):
        if e not in evset:
            diags.append(UnknownEvent(f"unknown event {e!r} in {where}", event=e))
            return False
        return True

    edges = []
    for a, b in causes:
        if known(a, "cause") and known(b, "cause"):
            edges.append((a, b))

    # cycle check and topological order over the generating cause edges
    preds = {e: set() for e in events}
    for a, b in edges:
        preds[b].add(a)
    try:
        order = list(TopologicalSorter(preds).static_order())
    except CycleError as ce:
        diags.append(CycleInCause(f"cause cycle {ce.args[1]}", cycle=ce.args[1]))
        return diags, None

    below = {e: {e} for e in events}
    for e in order:
        for p in preds[e]:
            below[e] |= below[p]

    if consistent is not None:
        declared = [frozenset(m) for m in consistent]
        for m in declared:
            for e in m:
                known(e, "consistent block")
        declared = [m & evset for m in declared]
        for e in events:
            if not any(e in m for m in declared):
                diags.append(InconsistentSingleton(
                    f"event {e!r} appears in no consistent set", event=e))
        for m in declared:
            closure = set()
            for e in m:
                closure |= below[e]
            if not any(closure <= m2 for m2 in declared):
                diags.append(ConsistencyNotDownClosed(
                    f"closure of {sortedevents(m)} is not consistent",
                    member=m, closure=frozenset(closure)))
        maxcons = declared
    else:
        pairs = set()
        for a, b in conflicts:
            if known(a, "conflict") and known(b, "conflict"):
                if a == b:
                    diags.append(InconsistentSingleton(
                        f"event {a!r} conflicts with itself", event=a))
                else:
                    pairs.add(frozenset((a, b)))
        # hereditary closure: a conflict propagates to causal successors
        above = {e: {f for f in events if e in below[f]} for e in events}
        closed = set()
        for pr in pairs:
            a, b = tuple(pr)
            for a2 in above[a]:
                for b2 in above[b]:
                    if a2 == b2:
                        diags.append(InconsistentSingleton(
                            f"event {a2!r} is above conflicting events"
                            f" {a!r} ~ {b!r}", event=a2, pair=(a, b)))
                    else:
                        closed.add(frozenset((a2, b2)))
        if any(isinstance(d, InconsistentSingleton) for d in diags):
            return diags, None
        if closed:
            g = nx.Graph()
            g.add_nodes_from(events)
            g.add_edges_from(tuple(p) for p in closed)
            maxcons = [frozenset(c) for c in nx.find_cliques(nx.complement(g))]
        else:
            maxcons = [frozenset(events)]

    if diags:
        return diags, None
    return diags, EventStructure(events, below, maxcons)


def event_structure(events, causes=(), conflicts=(), consistent=None, name=""):
    """Build and validate; raises InvalidStructure on any diagnostic."""
    diags, es = diagnose_structure(events, causes, conflicts, consistent)
    if diags:
        raise InvalidStructure(diags)
    es.name = name
    return es


def validate_event_structure(events, causes=(), conflicts=(), consistent=None,
                             name=""):
    return event_structure(events, causes, conflicts, consistent, name)


def enumerate_configurations(es, limits=DEFAULT_LIMITS):
    return es.configurations(limits)


def down_closure(es, xs):
    return es.down_closure(xs)


def derive_relations(es):
    """Immediate causal dependency and concurrency, as pair sets."""
    return {"immediate": es.immediate_pairs(),
            "concurrent": es.concurrent_pairs()}


# ---- maps --------------------------------------------------------------------


class ESMap:
    """A (possibly partial) map of event structures; mapping holds the defined part."""

    def __init__(self, src, dst, mapping):
        self.src = src
        self.dst = dst
        self.mapping = dict(mapping)

    def defined(self, e):
        return e in self.mapping

    def __getitem__(self, e):
        return self.mapping[e]

    def image(self, xs):
        return frozenset(self.mapping[e] for e in xs if e in self.mapping)

    @property
    def is_total(self):
        return set(self.mapping) == set(self.src.events)

    def then(self, other):
        """Composition: self followed by other."""
        assert self.dst == other.src, "composition endpoint mismatch"
        m = {e: other.mapping[v] for e, v in self.mapping.items()
             if v in other.mapping}
        return ESMap(self.src, other.dst, m)

    def __eq__(self, other):
        if not isinstance(other, ESMap):
            return NotImplemented
        return (self.src == other.src and self.dst == other.dst
                and self.mapping == other.mapping)

    def __hash__(self):
        return hash((self.src, self.dst, frozenset(self.mapping.items())))

    def __repr__(self):
        return f"<ESMap {len(self.mapping)}/{len(self.src.events)} events>"


@dataclass
class MapReport:
    valid: bool
    total: bool
    rigid: bool
    diagnostics: list = field(default_factory=list)


def validate_map(m, limits=DEFAULT_LIMITS):
    """Check configuration preservation and local injectivity exhaustively."""
    diags = []
    for e, v in m.mapping.items():
        if e not in m.src.events:
            diags.append(UnknownEvent(f"map domain event {e!r} unknown", event=e))
        if v not in m.dst.events:
            diags.append(UnknownEvent(f"map value {v!r} unknown", event=v))
    if diags:
        return MapReport(False, False, False, diags)

    for x in m.src.configurations(limits):
        img = []
        for e in sorted(x, key=ekey):
            if e in m.mapping:
                img.append(m.mapping[e])
        if len(set(img)) != len(img):
            seenv = {}
            for e in sorted(x, key=ekey):
                if e in m.mapping:
                    v = m.mapping[e]
                    if v in seenv:
                        diags.append(LocalInjectivityViolation(
                            f"{seenv[v]!r} and {e!r} share image {v!r} in a"
                            f" configuration", x=x, events=(seenv[v], e)))
                        break
                    seenv[v] = e
            continue
        if not m.dst.is_configuration(img):
            diags.append(ImageNotConfiguration(
                f"image of {sortedevents(x)} is not a configuration",
                x=x, image=frozenset(img)))

    total = m.is_total
    rigid = total and all(
        m.dst.leq(m.mapping[a], m.mapping[b])
        for b in m.src.events for a in m.src.strict_below(b))
    return MapReport(not diags, total, rigid, diags)


def project(es, keep):
    """Projection structure plus the partial identity map onto it."""
    sub = es.restrict(keep)
    return sub, ESMap(es, sub, {e: e for e in keep})


def factorize(m):
    """Partial-total factorisation: projection to the domain, then a total map."""
    sub, p = project(m.src, set(m.mapping))
    f1 = ESMap(sub, m.dst, dict(m.mapping))
    return p, f1


# ---- isomorphism search --------------------------------------------------------


def find_isomorphism(e1, e2, label1=None, label2=None, budget=None,
                     limits=DEFAULT_LIMITS):
    """Backtracking isomorphism search.

    Returns a dict event->event or None. When labels are given the isomorphism
    must commute with them. Raises SearchBudgetExceeded past the node budget.
    """
    if budget is None:
        budget = limits.iso_budget
    if len(e1.events) != len(e2.events):
        return None
    label1 = label1 or {}
    label2 = label2 or {}

    def inv(es, lab, e):
        return (lab.get(e), len(es.below(e)), len(es.above(e)))

    inv1 = {e: inv(e1, label1, e) for e in e1.events}
    inv2 = {e: inv(e2, label2, e) for e in e2.events}
    from collections import Counter
    if Counter(inv1.values()) != Counter(inv2.values()):
        return None

    cands = {e: sortedevents(f for f in e2.events if inv2[f] == inv1[e])
             for e in e1.events}
    order = sorted(e1.events, key=lambda e: (len(cands[e]), ekey(e)))
    assign = {}
    used = set()
    nodes = 0

    def ok(e, f):
        for a, b in assign.items():
            if e1.leq(a, e) != e2.leq(b, f):
                return False
            if e1.leq(e, a) != e2.leq(f, b):
                return False
            if e1.is_consistent({a, e}) != e2.is_consistent({b, f}):
                return False
        return True

    def search(i):
        nonlocal nodes
        if i == len(order):
            fam1 = {frozenset(assign[e] for e in m) for m in e1.maxcons}
            return fam1 == set(e2.maxcons)
        e = order[i]
        for f in cands[e]:
            if f in used:
                continue
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(f"budget {budget} exhausted",
                                           budget=budget)
            if ok(e, f):
                assign[e] = f
                used.add(f)
                if search(i + 1):
                    return True
                del assign[e]
                used.discard(f)
        return False

    if search(0):
        return dict(assign)
    return None

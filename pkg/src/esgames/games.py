"""Polarity, games, duality, parallel composition, and the copycat construction."""

from graphlib import TopologicalSorter
from itertools import product

from .errors import PolarityMismatch
from .limits import DEFAULT_LIMITS
from .structures import EventStructure, ESMap, ekey, event_structure, sortedevents

PLUS = "+"
MINUS = "-"
NEUTRAL = "0"
POLARITIES = (PLUS, MINUS, NEUTRAL)


class Polarised:
    """An event structure with a total polarity function."""

    def __init__(self, es, pol, name=""):
        pol = dict(pol)
        missing = es.events - set(pol)
        extra = set(pol) - es.events
        if missing or extra:
            raise PolarityMismatch(
                f"polarity must cover events exactly"
                f" (missing {sortedevents(missing)}, extra {sortedevents(extra)})",
                missing=frozenset(missing), extra=frozenset(extra))
        bad = {e: p for e, p in pol.items() if p not in POLARITIES}
        if bad:
            raise PolarityMismatch(f"bad polarity values {bad}", bad=bad)
        self.es = es
        self.pol = pol
        self.name = name or es.name

    # frequently used views on the underlying structure
    @property
    def events(self):
        return self.es.events

    @property
    def maxcons(self):
        return self.es.maxcons

    def configurations(self, limits=DEFAULT_LIMITS):
        return self.es.configurations(limits)

    def polarity(self, e):
        return self.pol[e]

    def events_with(self, *pols):
        return frozenset(e for e in self.es.events if self.pol[e] in pols)

    @property
    def is_game(self):
        return NEUTRAL not in self.pol.values()

    def require_game(self, what="operation"):
        if not self.is_game:
            raise PolarityMismatch(
                f"{what} requires a game without neutral events",
                neutrals=self.events_with(NEUTRAL))
        return self

    def restrict(self, keep):
        keep = frozenset(keep)
        return Polarised(self.es.restrict(keep),
                         {e: self.pol[e] for e in keep}, name=self.name)

    def __eq__(self, other):
        if not isinstance(other, Polarised):
            return NotImplemented
        return self.es == other.es and self.pol == other.pol

    def __hash__(self):
        return hash((self.es, frozenset(self.pol.items())))

    def __repr__(self):
        nm = self.name or "polarised"
        kinds = "".join(sorted(set(self.pol.values())))
        return f"<{nm}: {len(self.es.events)} events [{kinds}]>"


def polarised(es, pol, name=""):
    return Polarised(es, pol, name=name)


def game(es, pol, name=""):
    return Polarised(es, pol, name=name).require_game("game construction")


EMPTY = Polarised(event_structure([], name="empty"), {}, name="empty")


def dual(pg, name=""):
    flip = {PLUS: MINUS, MINUS: PLUS, NEUTRAL: NEUTRAL}
    return Polarised(pg.es, {e: flip[p] for e, p in pg.pol.items()},
                     name=name or (pg.name and f"dual({pg.name})"))


def neutralise(pg, name=""):
    return Polarised(pg.es, {e: NEUTRAL for e in pg.es.events},
                     name=name or pg.name)


def component(te):
    return te[0]


def payload(te):
    return te[1]


def slice_config(x, i):
    """Untagged component slice of a tagged event set."""
    return frozenset(e for (j, e) in x if j == i)


def parallel(*parts, name=""):
    """Tagged juxtaposition; component i contributes events (i, e), 1-based.

    Nesting is preserved: parallel(A, parallel(B, C)) differs from
    parallel(A, B, C).
    """
    if len(parts) == 1 and isinstance(parts[0], (list, tuple)):
        parts = tuple(parts[0])
    assert parts, "parallel needs at least one component"
    below = {}
    pol = {}
    for i, p in enumerate(parts, start=1):
        for e in p.es.events:
            below[(i, e)] = frozenset((i, d) for d in p.es.below(e))
            pol[(i, e)] = p.pol[e]
    maxcons = []
    for combo in product(*(p.es.maxcons for p in parts)):
        m = set()
        for i, mi in enumerate(combo, start=1):
            m |= {(i, e) for e in mi}
        maxcons.append(frozenset(m))
    es = EventStructure(below.keys(), below, maxcons, name=name)
    return Polarised(es, pol, name=name)


# ---- polarity-filtered extension orders ---------------------------------------


def plus_subset(pg, x, y):
    """x ⊆ y growing only by Player or neutral events."""
    x, y = frozenset(x), frozenset(y)
    return x <= y and all(pg.pol[e] in (PLUS, NEUTRAL) for e in y - x)


def minus_subset(pg, x, y):
    """x ⊆ y growing only by Opponent events."""
    x, y = frozenset(x), frozenset(y)
    return x <= y and all(pg.pol[e] == MINUS for e in y - x)


def scott_leq(pg, y, x):
    """y below x in the Scott order: y loses only Opponent events and x adds
    only Player or neutral ones, relative to the common part."""
    y, x = frozenset(y), frozenset(x)
    common = x & y
    return (all(pg.pol[e] == MINUS for e in y - common)
            and all(pg.pol[e] in (PLUS, NEUTRAL) for e in x - common))


def is_plus_maximal(pg, x, limits=DEFAULT_LIMITS):
    """No extension of x by a Player or neutral event."""
    return not any(pg.pol[e] in (PLUS, NEUTRAL) for e in pg.es.extensions(x))


def plus_maximal_configs(pg, limits=DEFAULT_LIMITS):
    return [x for x in pg.es.configurations(limits) if is_plus_maximal(pg, x)]


# ---- races and determinism ------------------------------------------------------


def is_race_free(pg, limits=DEFAULT_LIMITS):
    """True iff Player and Opponent extensions never exclude one another.

    On failure returns (False, (x, y, z)) with y a Player-or-neutral and z an
    Opponent extension of x whose union is inconsistent. Checking one event on
    each side suffices: a minimal inconsistent pair of extensions shrinks to a
    single added event on each side.
    """
    for x in pg.es.configurations(limits):
        ext = pg.es.extensions(x)
        plus = [e for e in ext if pg.pol[e] in (PLUS, NEUTRAL)]
        minus = [e for e in ext if pg.pol[e] == MINUS]
        for e in plus:
            for f in minus:
                if not pg.es.is_consistent(x | {e, f}):
                    return False, (x, x | {e}, x | {f})
    return True, None


def is_deterministic(pg, limits=DEFAULT_LIMITS):
    """True iff a Player-or-neutral extension is compatible with every other
    extension. Same single-event reduction as is_race_free."""
    for x in pg.es.configurations(limits):
        ext = pg.es.extensions(x)
        for e in ext:
            if pg.pol[e] not in (PLUS, NEUTRAL):
                continue
            for f in ext:
                if f != e and not pg.es.is_consistent(x | {e, f}):
                    return False, (x, x | {e}, x | {f})
    return True, None


# ---- copycat ---------------------------------------------------------------------


def copycat(A, name=""):
    """The copycat structure over a game A, with its map into dual(A) ∥ A.

    Order: both component orders plus, for every Player event c of the
    juxtaposition, the edge from its counterpart in the other component.
    A finite set is consistent iff its causal closure here is consistent in
    the juxtaposition; maximal consistent sets are computed per pair of
    component maximal sets.
    """
    A.require_game("copycat")
    target = parallel(dual(A), A, name=f"dual+{A.name}" if A.name else "")

    preds = {te: set() for te in target.es.events}
    for (i, a) in target.es.events:
        preds[(i, a)] |= {(i, d) for d in A.es.strict_below(a)}
    for a in A.es.events:
        if A.pol[a] == PLUS:
            preds[(2, a)].add((1, a))
        else:
            preds[(1, a)].add((2, a))

    order = list(TopologicalSorter(preds).static_order())
    below = {}
    for te in order:
        b = {te}
        for p in preds[te]:
            b |= below[p]
        below[te] = frozenset(b)

    maxcons = set()
    for m1 in A.es.maxcons:
        for m2 in A.es.maxcons:
            u0 = {(1, a) for a in m1} | {(2, a) for a in m2}
            maxcons.add(frozenset(e for e in u0 if below[e] <= u0))

    cc_es = EventStructure(target.es.events, below, maxcons,
                           name=name or (A.name and f"cc({A.name})"))
    cc = Polarised(cc_es, dict(target.pol), name=cc_es.name)
    ccmap = ESMap(cc_es, target.es, {e: e for e in cc_es.events})
    return cc, ccmap

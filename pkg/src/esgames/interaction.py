"""Secured bijections, pullbacks, and the interaction and composition of
bare strategies.

The pullback of two total maps with a common target is built from primes:
down-closures of single matched pairs inside secured bijections. A secured
bijection between configurations x (left) and y (right) matches events with
equal images such that the relation generated by both source orders through
the matching is acyclic. Configurations of the pullback correspond exactly to
secured bijections; the correspondence is checked by the tests.

Interaction pads the two strategies first: sigma: S -> dual(A) || M || B meets
tau: T -> dual(B) || N || C over the flat five component ambient
A || M || B || N || C, with S || N || C on the left against A || M || T on the
right. The resulting pullback is read back as a bare strategy from A to C
whose middle is M || B0 || N, where B0 is B with every event made neutral.
"""

from graphlib import CycleError, TopologicalSorter

from .errors import (
    Cycle,
    ImageMismatch,
    MiddleGameMismatch,
    NotRaceFree,
    SizeBoundExceeded,
)
from .games import (
    NEUTRAL,
    Polarised,
    component,
    dual,
    is_plus_maximal,
    is_race_free,
    neutralise,
    parallel,
    payload,
)
from .limits import DEFAULT_LIMITS
from .strategies import BareStrategy, StoppingStrategy, visible_part
from .structures import ESMap, EventStructure, ekey, sortedevents

# ---- secured bijections -----------------------------------------------------------


def pairkey(p):
    return (ekey(p[0]), ekey(p[1]))


class SecuredBijection:
    """A matching of two configurations with equal images whose generated
    dependency relation is a partial order."""

    def __init__(self, left, right, pairs, below):
        self.left = frozenset(left)
        self.right = frozenset(right)
        self.pairs = frozenset(pairs)
        self._below = below  # pair -> frozenset of pairs, reflexive

    def below(self, p):
        return self._below[p]

    def __eq__(self, other):
        if not isinstance(other, SecuredBijection):
            return NotImplemented
        return self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __repr__(self):
        return f"<secured bijection: {len(self.pairs)} pairs>"


def _pair_order(src_left, src_right, pairs):
    """Reflexive down-closure of each pair under the generated relation.

    Raises Cycle when the relation is not acyclic.
    """
    by_left = {p[0]: p for p in pairs}
    by_right = {p[1]: p for p in pairs}
    preds = {}
    for p in pairs:
        l, r = p
        pp = set()
        for l2 in src_left.strict_below(l):
            if l2 in by_left:
                pp.add(by_left[l2])
        for r2 in src_right.strict_below(r):
            if r2 in by_right:
                pp.add(by_right[r2])
        preds[p] = pp
    try:
        order = list(TopologicalSorter(preds).static_order())
    except CycleError as ce:
        raise Cycle(f"causal cycle through {ce.args[1]}", cycle=ce.args[1])
    below = {}
    for p in order:
        b = {p}
        for q in preds[p]:
            b |= below[q]
        below[p] = frozenset(b)
    return below


def secured_bijection(f, g, x, y):
    """Match configuration x of f.src against y of g.src over a common target.

    Raises ImageMismatch when the images differ as sets (or an image is
    repeated), Cycle when the generated relation loops.
    """
    x, y = frozenset(x), frozenset(y)
    fx = {}
    for e in x:
        fx.setdefault(f.mapping[e], []).append(e)
    gy = {}
    for e in y:
        gy.setdefault(g.mapping[e], []).append(e)
    if set(fx) != set(gy) or any(len(v) != 1 for v in fx.values()) \
            or any(len(v) != 1 for v in gy.values()):
        raise ImageMismatch(
            f"images differ: {sortedevents(set(fx) ^ set(gy))}",
            left_only=frozenset(set(fx) - set(gy)),
            right_only=frozenset(set(gy) - set(fx)))
    pairs = frozenset((fx[u][0], gy[u][0]) for u in fx)
    below = _pair_order(f.src, g.src, pairs)
    return SecuredBijection(x, y, pairs, below)


# ---- pullback ---------------------------------------------------------------------


def prime_event(pairs, top):
    return ("pr", frozenset(pairs), top)


def prime_pairs(p):
    return p[1]


def prime_top(p):
    return p[2]


class _Pullback:
    """Raw result of the secured-bijection enumeration."""

    def __init__(self, es, primes_of, maximal):
        self.es = es
        self.primes_of = primes_of  # bijection pairset -> frozenset of primes
        self.maximal = maximal      # list of maximal bijection pairsets


def _enumerate_pullback(left_es, lmap, right_es, rmap, limits):
    """BFS over secured bijections, extending by one enabled matched pair.

    A new pair joins above everything present, so securedness is preserved;
    every secured bijection arises along a linearisation of its own order.
    """
    by_img_right = {}
    for r, u in rmap.items():
        by_img_right.setdefault(u, []).append(r)

    start = frozenset()
    prime_map = {start: {}}   # bijection -> {pair: frozenset of pairs}
    frontier = [start]
    maximal = []
    seen = {start}
    prime_registry = {}       # pairset -> top pair

    def register(pairs, top):
        prime_registry.setdefault(pairs, top)
        if len(prime_registry) > limits.max_primes:
            raise SizeBoundExceeded(
                f"more than {limits.max_primes} interaction events",
                cap=limits.max_primes)

    while frontier:
        nxt = []
        for th in frontier:
            pmap = prime_map[th]
            lefts = frozenset(p[0] for p in th)
            rights = frozenset(p[1] for p in th)
            ext = []
            for l in left_es.extensions(lefts):
                for r in by_img_right.get(lmap[l], ()):
                    if r in rights:
                        continue
                    if right_es.strict_below(r) <= rights \
                            and right_es.is_consistent(rights | {r}):
                        ext.append((l, r))
            if not ext:
                maximal.append(th)
                continue
            for (l, r) in ext:
                th2 = th | {(l, r)}
                if th2 in seen:
                    continue
                seen.add(th2)
                if len(seen) > limits.max_configs:
                    raise SizeBoundExceeded(
                        f"more than {limits.max_configs} secured bijections",
                        cap=limits.max_configs)
                pr = {(l, r)}
                for q in th:
                    if q[0] in left_es.strict_below(l) \
                            or q[1] in right_es.strict_below(r):
                        pr |= pmap[q]
                pr = frozenset(pr)
                register(pr, (l, r))
                prime_map[th2] = {**pmap, (l, r): pr}
                nxt.append(th2)
        frontier = nxt

    events = [prime_event(pairs, top) for pairs, top in prime_registry.items()]
    below = {}
    for p in events:
        below[p] = frozenset(q for q in events
                             if prime_pairs(q) <= prime_pairs(p))
    maxcons = [frozenset(prime_event(pr, prime_registry[pr])
                         for pr in prime_map[th].values())
               for th in maximal]
    es = EventStructure(events, below, maxcons)
    primes_of = {th: frozenset(prime_event(pr, prime_registry[pr])
                               for pr in pm.values())
                 for th, pm in prime_map.items()}
    return _Pullback(es, primes_of, maximal)


def pullback(f, g, limits=DEFAULT_LIMITS):
    """Pullback of two total maps with a common target.

    Returns (P, pi1, pi2): the event structure of primes with the projections
    sending a prime to the two halves of its top pair.
    """
    assert f.dst == g.dst, "pullback needs a common target"
    pb = _enumerate_pullback(f.src, dict(f.mapping), g.src, dict(g.mapping),
                             limits)
    pi1 = ESMap(pb.es, f.src, {p: prime_top(p)[0] for p in pb.es.events})
    pi2 = ESMap(pb.es, g.src, {p: prime_top(p)[1] for p in pb.es.events})
    return pb.es, pi1, pi2


def enumerate_secured_bijections(f, g, limits=DEFAULT_LIMITS):
    """All secured bijections of the two maps, as pair sets."""
    pb = _enumerate_pullback(f.src, dict(f.mapping), g.src, dict(g.mapping),
                             limits)
    return sorted(pb.primes_of, key=lambda th: (len(th),
                                                sorted(map(pairkey, th))))


# ---- interaction ------------------------------------------------------------------


def _padding(sigma, tau):
    """Left and right padded sources with their maps into the flat ambient
    A || M || B || N || C (sigma: A -> B with middle M, tau: B -> C with N)."""
    left = parallel(sigma.source, tau.N, tau.B)
    right = parallel(sigma.A, sigma.N, tau.source)

    lmap = {}
    for (i, e) in left.es.events:
        if i == 1:
            lmap[(i, e)] = sigma.sigma.mapping[e]  # components 1..3 unchanged
        elif i == 2:
            lmap[(i, e)] = (4, e)
        else:
            lmap[(i, e)] = (5, e)

    retag = {1: 3, 2: 4, 3: 5}
    rmap = {}
    for (i, e) in right.es.events:
        if i == 3:
            j, u = tau.sigma.mapping[e]
            rmap[(i, e)] = (retag[j], u)
        else:
            rmap[(i, e)] = (i, e)
    return left, right, lmap, rmap


def _ambient_to_target(u):
    """Flat ambient event -> event of dual(A) || (M || B0 || N) || C."""
    j, e = u
    if j == 1:
        return (1, e)
    if j == 5:
        return (3, e)
    return (2, (j - 1, e))


class Interaction(BareStrategy):
    """The interaction of two bare strategies, with its two projections.

    Source events are primes; pi1 and pi2 send a prime to the left and right
    halves of its top pair.
    """

    def __init__(self, source, game_a, middle, game_b, assign,
                 pi1, pi2, left, right, primes_of, name=""):
        super().__init__(source, game_a, middle, game_b, assign, name=name)
        self.pi1 = pi1
        self.pi2 = pi2
        self.left = left
        self.right = right
        self.primes_of = primes_of


def interact(sigma, tau, limits=DEFAULT_LIMITS, name=""):
    """The bare strategy tau after sigma, internal events kept.

    sigma goes from A to B, tau from B to C; the result goes from A to C with
    middle M || B0 || N. Correctness of the defining clauses is inherited from
    the construction and not re-checked here.
    """
    if sigma.B != tau.A:
        raise MiddleGameMismatch("the two strategies do not share a middle game")
    left, right, lmap, rmap = _padding(sigma, tau)
    pb = _enumerate_pullback(left.es, lmap, right.es, rmap, limits)

    pol = {}
    assign = {}
    csource = {}
    for p in pb.es.events:
        u = lmap[prime_top(p)[0]]
        assign[p] = _ambient_to_target(u)
        if component(u) == 1:
            pol[p] = dual(sigma.A).pol[payload(u)]
        elif component(u) == 5:
            pol[p] = tau.B.pol[payload(u)]
        else:
            pol[p] = NEUTRAL

    source = Polarised(pb.es, pol, name=name or "interaction")
    middle = parallel(sigma.N, neutralise(sigma.B), tau.N)
    pi1 = ESMap(pb.es, left.es, {p: prime_top(p)[0] for p in pb.es.events})
    pi2 = ESMap(pb.es, right.es, {p: prime_top(p)[1] for p in pb.es.events})
    return Interaction(source, sigma.A, middle, tau.B, assign,
                       pi1, pi2, left, right, pb.primes_of,
                       name=name or f"({tau.name} * {sigma.name})")


def compose(sigma, tau, limits=DEFAULT_LIMITS, name=""):
    """Composition with hiding: the visible part of the interaction."""
    inter = interact(sigma, tau, limits)
    vis, _, _ = visible_part(inter, limits)
    vis.name = name or f"({tau.name} . {sigma.name})"
    return vis


# ---- configuration-level pairing ---------------------------------------------------


def pair_configs(sigma, tau, x, y, limits=DEFAULT_LIMITS, padding=None):
    """The interaction and composition configurations induced by x and y.

    x is a configuration of sigma's source, y of tau's source. Returns
    (interaction_config, visible_config) as sets of primes of
    interact(sigma, tau), or None when the pairing is undefined: the padded
    images differ, or matching them creates a causal cycle.
    """
    if padding is None:
        padding = _padding(sigma, tau)
    left, right, lmap, rmap = padding

    tau_img = tau.sigma.image(y)
    xl = {(1, s) for s in x}
    xl |= {(2, payload(u)) for u in tau_img if component(u) == 2}
    xl |= {(3, payload(u)) for u in tau_img if component(u) == 3}

    sig_img = sigma.sigma.image(x)
    yr = {u for u in sig_img if component(u) in (1, 2)}
    yr |= {(3, t) for t in y}

    f = ESMap(left.es, None, lmap)
    g = ESMap(right.es, None, rmap)
    try:
        theta = secured_bijection(f, g, xl, yr)
    except (ImageMismatch, Cycle):
        return None

    inter = frozenset(prime_event(theta.below(p), p) for p in theta.pairs)
    vis = frozenset(e for e in inter
                    if component(lmap[prime_top(e)[0]]) in (1, 5))
    return inter, vis


# ---- stopping liftings -------------------------------------------------------------


def _assert_race_free(*gs):
    for g in gs:
        ok, wit = is_race_free(g)
        if not ok:
            raise NotRaceFree(f"game {g.name or '?'} has a race",
                              game=g, witness=wit)


def interact_stopping(s, t, limits=DEFAULT_LIMITS):
    """Interaction of stopping strategies: pair the stopping sets."""
    _assert_race_free(s.strat.A, s.strat.B, t.strat.B)
    inter = interact(s.strat, t.strat, limits)
    padding = _padding(s.strat, t.strat)
    stopping = set()
    for x in s.sorted_stopping():
        for y in t.sorted_stopping():
            got = pair_configs(s.strat, t.strat, x, y, limits, padding)
            if got is not None:
                stopping.add(got[0])
    return inter, frozenset(stopping)


def compose_stopping(s, t, limits=DEFAULT_LIMITS, name=""):
    """Composition of stopping strategies: hide, pairing the stopping sets."""
    _assert_race_free(s.strat.A, s.strat.B, t.strat.B)
    comp = compose(s.strat, t.strat, limits, name=name)
    padding = _padding(s.strat, t.strat)
    stopping = set()
    for x in s.sorted_stopping():
        for y in t.sorted_stopping():
            got = pair_configs(s.strat, t.strat, x, y, limits, padding)
            if got is not None:
                stopping.add(got[1])
    return StoppingStrategy(comp, stopping, name=name or comp.name)


# ---- 2-cells across interaction ------------------------------------------------------


def transport_two_cell(f, g, inter_src, inter_dst):
    """Map primes of one interaction to the other along 2-cells f and g.

    f maps the left strategy sources, g the right ones (dicts or ESMaps).
    Returns (mapping, missing): primes whose transported pair set is not an
    event of the destination interaction are collected in missing.
    """
    fm = f.mapping if isinstance(f, ESMap) else dict(f)
    gm = g.mapping if isinstance(g, ESMap) else dict(g)

    def move_pair(p):
        (i, l), (j, r) = p
        left = (i, fm[l]) if i == 1 else (i, l)
        right = (j, gm[r]) if j == 3 else (j, r)
        return (left, right)

    dst_events = {prime_pairs(p): p for p in inter_dst.source.events}
    mapping = {}
    missing = []
    for p in inter_src.source.events:
        pairs = frozenset(move_pair(q) for q in prime_pairs(p))
        q = dst_events.get(pairs)
        if q is None:
            missing.append(p)
        else:
            mapping[p] = q
    return mapping, missing

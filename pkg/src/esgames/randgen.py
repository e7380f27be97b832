"""Seeded random games and strategies for the property and acceptance suites.

Every generator takes an explicit random.Random so suites stay reproducible.
Candidates are built from shapes that are usually valid and then passed
through the real validators; the rare reject is resampled. Iteration is over
sorted events throughout, so a seed pins the output exactly.
"""

from .errors import InvalidStructure
from .games import EMPTY, MINUS, NEUTRAL, PLUS, Polarised, dual, game, is_race_free
from .limits import DEFAULT_LIMITS
from .strategies import StoppingStrategy, bare_strategy, strategy
from .structures import cfgkey, ekey, event_structure, sortedevents

ATTEMPTS = 200


def random_game(rng, max_events=5, min_events=1, race_free=True, name=""):
    """A small game; by default one without Player/Opponent races."""
    for _ in range(ATTEMPTS):
        n = rng.randint(min_events, max_events)
        events = [f"a{i}" for i in range(n)]
        causes = [(events[i], events[j])
                  for i in range(n) for j in range(i + 1, n)
                  if rng.random() < 0.25]
        conflicts = [(events[i], events[j])
                     for i in range(n) for j in range(i + 1, n)
                     if rng.random() < 0.15]
        pol = {e: rng.choice((PLUS, MINUS)) for e in events}
        try:
            g = game(event_structure(events, causes, conflicts), pol, name=name)
        except InvalidStructure:
            continue
        if race_free and not is_race_free(g)[0]:
            continue
        return g
    n = max(min_events, 1)
    return game(event_structure([f"a{i}" for i in range(n)]),
                {f"a{i}": PLUS for i in range(n)}, name=name)


def _target_shape(A, middle_events, B):
    """Polarity, order and conflict pairs of dual(A) || N || B, flattened."""
    pol = {}
    order = []
    clashes = []
    for a in sortedevents(A.events):
        pol[(1, a)] = dual(A).pol[a]
    for m in middle_events:
        pol[(2, m)] = NEUTRAL
    for b in sortedevents(B.events):
        pol[(3, b)] = B.pol[b]
    for i, g in ((1, A), (3, B)):
        for (c, e) in g.es.immediate_pairs():
            order.append(((i, c), (i, e)))
        evs = sortedevents(g.events)
        for x, c in enumerate(evs):
            for e in evs[x + 1:]:
                if not g.es.is_consistent({c, e}):
                    clashes.append(((i, c), (i, e)))
    return pol, order, clashes


def _receptive_core(tpol, torder, picked):
    """Close a picked event set under Opponent moves it would have to admit."""
    strict = {e: set() for e in tpol}
    for (c, e) in torder:
        strict[e].add(c)
    changed = True
    while changed:
        changed = False
        for e in tpol:
            if e in picked or tpol[e] != MINUS:
                continue
            if strict[e] <= picked:
                picked.add(e)
                changed = True
    return picked


def _random_source(rng, tpol, torder, tclashes):
    """A candidate strategy source over the given target shape."""
    picked = {e for e in sorted(tpol, key=ekey)
              if rng.random() < (0.5 if tpol[e] == MINUS else 0.65)}
    picked = _receptive_core(tpol, torder, picked)
    events = sorted(picked, key=ekey)
    causes = [(c, e) for (c, e) in torder if c in picked and e in picked]
    below = {e: {c for (c, d) in causes if d == e} for e in events}
    # awaits: extra causes out of Opponent/neutral moves into Player/neutral
    for m in events:
        if tpol[m] == PLUS:
            continue
        for p in events:
            if tpol[p] == MINUS or p == m or m in below[p] or p in below[m]:
                continue
            if rng.random() < 0.25:
                causes.append((m, p))
    conflicts = [(c, e) for (c, e) in tclashes
                 if c in picked and e in picked]
    plus = [e for e in events if tpol[e] == PLUS]
    for i, p in enumerate(plus):
        for q in plus[i + 1:]:
            if rng.random() < 0.2:
                conflicts.append((p, q))
    assign = {e: e for e in events}
    pol = {e: tpol[e] for e in events}
    # sometimes split one Player move into two exclusive branches
    if plus and rng.random() < 0.45:
        p = rng.choice(plus)
        d = ("dup", p)
        events.append(d)
        causes += [(c, d) for (c, e) in causes if e == p]
        conflicts += [(d if u == p else u, d if v == p else v)
                      for (u, v) in conflicts if p in (u, v)]
        conflicts.append((p, d))
        assign[d] = p
        pol[d] = PLUS
    return events, causes, conflicts, pol, assign


def _fallback_source(tpol, torder, tclashes):
    # the purely receptive source that volunteers nothing always validates
    picked = _receptive_core(tpol, torder, set())
    events = sorted(picked, key=ekey)
    causes = [(c, e) for (c, e) in torder if c in picked and e in picked]
    conflicts = [(c, e) for (c, e) in tclashes
                 if c in picked and e in picked]
    return (Polarised(event_structure(events, causes, conflicts),
                      {e: tpol[e] for e in events}),
            {e: e for e in events})


def random_strategy(rng, A, B, limits=DEFAULT_LIMITS):
    """A valid strategy from A to B (neutral-free source)."""
    tpol, torder, tclashes = _target_shape(A, (), B)
    for _ in range(ATTEMPTS):
        events, causes, conflicts, pol, assign = _random_source(
            rng, tpol, torder, tclashes)
        try:
            src = Polarised(event_structure(events, causes, conflicts), pol)
            return strategy(src, A, B, assign, limits=limits)
        except InvalidStructure:
            continue
    src, assign = _fallback_source(tpol, torder, tclashes)
    return strategy(src, A, B, assign, limits=limits)


def random_in_game_strategy(rng, g, limits=DEFAULT_LIMITS):
    return random_strategy(rng, EMPTY, g, limits)


def random_bare(rng, A, B, max_neutrals=2, limits=DEFAULT_LIMITS):
    """A valid bare strategy from A to B with a small neutral middle."""
    k = rng.randint(0, max_neutrals)
    middle_events = [f"n{i}" for i in range(k)]
    middle = Polarised(event_structure(middle_events),
                       {m: NEUTRAL for m in middle_events})
    tpol, torder, tclashes = _target_shape(A, middle_events, B)
    for _ in range(ATTEMPTS):
        events, causes, conflicts, pol, assign = _random_source(
            rng, tpol, torder, tclashes)
        try:
            src = Polarised(event_structure(events, causes, conflicts), pol)
            return bare_strategy(src, A, middle, B, assign, limits=limits)
        except InvalidStructure:
            continue
    src, assign = _fallback_source(tpol, torder, tclashes)
    return bare_strategy(src, A, middle, B, assign, limits=limits)


def random_stopping(rng, st, limits=DEFAULT_LIMITS):
    """Random stopping data over a strategy: biased to +-maximal configs."""
    from .games import is_plus_maximal

    configs = sorted(st.source.configurations(limits), key=cfgkey)
    stopping = set()
    for x in configs:
        p = 0.7 if is_plus_maximal(st.source, x, limits) else 0.15
        if rng.random() < p:
            stopping.add(x)
    if not stopping and rng.random() < 0.9:
        maxes = [x for x in configs if is_plus_maximal(st.source, x, limits)]
        stopping.add(rng.choice(maxes) if maxes else configs[-1])
    return StoppingStrategy(st, stopping)

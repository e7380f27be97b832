"""Traces, may/must testing, the two preorders, and distinguishing-test synthesis.

A test is a bare strategy from a game into the one-move success game; a
subject passes in the may sense when some pairing reaches the success move,
and in the must sense when every stopping pairing does.
"""

from dataclasses import dataclass
from functools import cache
from itertools import combinations, combinations_with_replacement

from .errors import GameMismatch, InvalidStructure, NotAGap, SizeBoundExceeded
from .games import (MINUS, NEUTRAL, PLUS, Polarised, component, dual, game,
                    payload)
from .interaction import _padding, pair_configs
from .limits import DEFAULT_LIMITS
from .strategies import (BareStrategy, StoppingStrategy, bare_strategy,
                         stop_of, strategy, visible_part)
from .structures import cfgkey, ekey, event_structure

TICK = "tick"


@cache
def success_game():
    """The one-move game a test reports success in."""
    return game(event_structure([TICK]), {TICK: PLUS}, name="success")


@dataclass(frozen=True)
class Verdict:
    """Outcome of a test run; witness is a (subject, test) configuration pair."""
    passed: bool
    witness: tuple = None

    def __bool__(self):
        return self.passed


# ---- traces ------------------------------------------------------------------------


def traces_of(sigma, x):
    """All enumerations of the image of x compatible with the order inside x.

    Events of the result carry their target tags. Every configuration has at
    least one trace; the empty configuration has exactly the empty trace.
    """
    x = frozenset(x)
    src = sigma.source.es
    preds = {s: (src.strict_below(s) & x) for s in x}
    out = []

    def grow(prefix, placed, remaining):
        if not remaining:
            out.append(tuple(prefix))
            return
        for s in sorted(remaining, key=ekey):
            if preds[s] <= placed:
                prefix.append(sigma.assigned(s))
                grow(prefix, placed | {s}, remaining - {s})
                prefix.pop()

    grow([], frozenset(), x)
    return frozenset(out)


def _trace_index(sigma, configs, limits):
    """trace -> first configuration realising it, in size order."""
    index = {}
    for x in sorted(configs, key=lambda c: (len(c), cfgkey(c))):
        for tr in traces_of(sigma, x):
            index.setdefault(tr, x)
        if len(index) > limits.max_configs:
            raise SizeBoundExceeded("trace index exceeds the configuration cap",
                                    bound=limits.max_configs)
    return index


def finite_traces(sigma, limits=DEFAULT_LIMITS):
    """Traces of every finite configuration; prefix-closed by construction."""
    sigma = _visible(sigma)
    return frozenset(_trace_index(sigma, sigma.source.configurations(limits),
                                  limits))


def stopping_traces(s, limits=DEFAULT_LIMITS):
    """Traces of the stopping configurations only."""
    return frozenset(_trace_index(s.strat, s.sorted_stopping(), limits))


def _visible(s):
    if isinstance(s, StoppingStrategy):
        return s.strat
    if s.is_strategy:
        return s
    return visible_part(s)[0]


# ---- running tests -----------------------------------------------------------------


def _as_stopping(subject, limits):
    if isinstance(subject, StoppingStrategy):
        return subject
    return stop_of(subject, limits)


def _check_test_shape(subject, test):
    if subject.strat.A.events:
        raise GameMismatch("test subjects play in a single game",
                           left=subject.strat.A)
    if test.B != success_game():
        raise GameMismatch("a test must target the success game", right=test.B)
    if test.A != subject.strat.B:
        raise GameMismatch("subject and test play different games",
                           left=subject.strat.B, right=test.A)


def _ticks(bs, y):
    return any(bs.assigned(t) == (3, TICK) for t in y)


def _sorted_configs(polarised, limits):
    return sorted(polarised.configurations(limits),
                  key=lambda c: (len(c), cfgkey(c)))


def may_pass(subject, test, limits=DEFAULT_LIMITS):
    """Some pairing of configurations reaches the success move."""
    sub = _as_stopping(subject, limits)
    _check_test_shape(sub, test)
    tvis = _visible(test)
    pad = _padding(sub.strat, tvis)
    xs = _sorted_configs(sub.strat.source, limits)
    for y in _sorted_configs(tvis.source, limits):
        if not _ticks(tvis, y):
            continue
        for x in xs:
            if pair_configs(sub.strat, tvis, x, y, limits, pad) is not None:
                return Verdict(True, (x, y))
    return Verdict(False)


def must_pass(subject, test, limits=DEFAULT_LIMITS):
    """Every stopping pairing reaches the success move.

    Both sides are taken at their stopping sets; the test's is derived with
    stop_of. A pairing of stopping configurations whose test half lacks the
    success move is the returned counterexample.
    """
    sub = _as_stopping(subject, limits)
    _check_test_shape(sub, test)
    tstop = stop_of(test, limits)
    pad = _padding(sub.strat, tstop.strat)
    for y in tstop.sorted_stopping():
        if _ticks(tstop.strat, y):
            continue
        for x in sorted(sub.stopping, key=lambda c: (len(c), cfgkey(c))):
            if pair_configs(sub.strat, tstop.strat, x, y, limits, pad) is not None:
                return Verdict(False, (x, y))
    return Verdict(True)


# ---- the two preorders ---------------------------------------------------------------


def _require_same_game(b1, b2):
    if b1.A != b2.A or b1.B != b2.B:
        raise GameMismatch("preorders compare strategies over one game",
                           left=(b1.A, b1.B), right=(b2.A, b2.B))


def _least_gap(index, others):
    missing = [tr for tr in index if tr not in others]
    if not missing:
        return None
    alpha = min(missing, key=lambda tr: (len(tr), tuple(ekey(e) for e in tr)))
    return index[alpha], alpha


def may_preorder(sigma1, sigma2, limits=DEFAULT_LIMITS):
    """Trace inclusion; holds iff sigma2 may-passes every test sigma1 does."""
    v1, v2 = _visible(sigma1), _visible(sigma2)
    _require_same_game(v1, v2)
    index = _trace_index(v1, v1.source.configurations(limits), limits)
    gap = _least_gap(index, finite_traces(v2, limits))
    return gap is None, gap


def must_preorder(s1, s2, limits=DEFAULT_LIMITS):
    """Stopping-trace inclusion; holds iff every test s2 must-passes, s1 does."""
    if not (isinstance(s1, StoppingStrategy) and isinstance(s2, StoppingStrategy)):
        raise GameMismatch("the must preorder compares stopping strategies")
    _require_same_game(s1.strat, s2.strat)
    index = _trace_index(s1.strat, s1.sorted_stopping(), limits)
    gap = _least_gap(index, stopping_traces(s2, limits))
    return gap is None, gap


def find_gap(kind, s1, s2, limits=DEFAULT_LIMITS):
    """Shortest witness that the chosen preorder fails, or None."""
    if kind == "may":
        return may_preorder(s1, s2, limits)[1]
    if kind == "must":
        return must_preorder(s1, s2, limits)[1]
    raise ValueError(f"unknown preorder kind {kind!r}")


# ---- synthesis of distinguishing tests -----------------------------------------------


def _gap_payloads(g, alpha):
    out = []
    for e in alpha:
        e = payload(e) if component(e) == 3 else e
        if e not in g.events:
            raise NotAGap(f"trace event {e!r} is not a move of the game",
                          event=e)
        out.append(e)
    return out


def _saturation(g, t1):
    """Events whose history outside t1 consists of moves the test itself owns."""
    return {a for a in g.events
            if all(g.pol[b] == PLUS for b in g.es.below(a) - t1)}


def _reversal_edges(v2, configs, t1, pos, limits):
    """One order-reversing edge per configuration of v2 with image t1.

    The chosen pair puts the image of a Player event before the image of the
    Opponent event that enables it, so the test's order disagrees with every
    such configuration at once.
    """
    edges = set()
    immediate = v2.source.es.immediate_pairs()
    for x2 in sorted(configs, key=lambda c: (len(c), cfgkey(c))):
        if {payload(v2.assigned(s)) for s in x2} != t1 or len(x2) != len(t1):
            continue
        best = None
        for s, sp in immediate:
            if s in x2 and sp in x2 \
                    and v2.source.pol[s] == MINUS and v2.source.pol[sp] == PLUS:
                key = (pos[payload(v2.assigned(sp))], pos[payload(v2.assigned(s))])
                if key[0] < key[1] and (best is None or key < best):
                    best = key
        assert best is not None, "every matching configuration must disagree"
        edges.add((best[0], best[1]))
    return edges


def _flip(g):
    d = dual(g)
    return {a: d.pol[a] for a in g.events}


def synthesize_may_test(sigma2, gap, limits=DEFAULT_LIMITS):
    """A neutral-free test that the gap's owner may-passes and sigma2 does not.

    The test replays the gap trace from the other side: the trace's moves with
    roles swapped, every Opponent move the test can reach on its own, an order
    edge against each configuration of sigma2 with the same image, and a
    success move enabled once all of the trace's swapped-to-Opponent moves are
    in.
    """
    v2 = _visible(sigma2)
    if v2.A.events:
        raise GameMismatch("tests are synthesised over a single game")
    g = v2.B
    x1, alpha1 = gap
    alpha = _gap_payloads(g, alpha1)
    t1 = set(alpha)
    if tuple((3, a) for a in alpha) in finite_traces(v2, limits):
        raise NotAGap("the trace is one of sigma2's own", trace=alpha1)
    pos = {a: i for i, a in enumerate(alpha)}
    t1p = _saturation(g, t1)
    causes = [(b, a) for a in t1p for b in g.es.strict_below(a) & t1p]
    causes += [(alpha[i], alpha[j])
               for i, j in _reversal_edges(
                   v2, v2.source.configurations(limits), t1, pos, limits)]
    tick = TICK if TICK not in t1p else ("k", TICK)
    causes += [(t, tick) for t in t1 if g.pol[t] == PLUS]
    pol = _flip(g)
    src = Polarised(event_structure(sorted(t1p, key=ekey) + [tick], causes),
                    {a: pol[a] for a in t1p} | {tick: PLUS})
    assign = {a: (1, a) for a in t1p} | {tick: (3, TICK)}
    return strategy(src, g, success_game(), assign,
                    name="separating-test", limits=limits)


def synthesize_must_test(s2, gap, limits=DEFAULT_LIMITS):
    """A bare test that s2 must-passes while any owner of the gap trace fails.

    On top of the may construction: a neutral shadow above each swapped
    Opponent move of the trace, and a success move for every trace event plus
    every saturation event, mutually conflicting. A trace event blocks its own
    success move, directly when the test does not own the move, through its
    neutral shadow when it does; saturation events enable theirs instead, so
    only the exact trace image can starve success.
    """
    if not isinstance(s2, StoppingStrategy):
        raise GameMismatch("must synthesis runs against a stopping strategy")
    v2 = s2.strat
    if v2.A.events:
        raise GameMismatch("tests are synthesised over a single game")
    g = v2.B
    x1, alpha1 = gap
    alpha = _gap_payloads(g, alpha1)
    t1 = set(alpha)
    if tuple((3, a) for a in alpha) in stopping_traces(s2, limits):
        raise NotAGap("the trace is one of s2's stopping traces", trace=alpha1)
    pos = {a: i for i, a in enumerate(alpha)}
    t1p = _saturation(g, t1)
    shadows = {t: ("n", t) for t in t1 if g.pol[t] == PLUS}
    ticks = {t: ("v", t) for t in sorted(t1p, key=ekey)}
    assert not (set(shadows.values()) | set(ticks.values())) & t1p

    causes = [(b, a) for a in t1p for b in g.es.strict_below(a) & t1p]
    causes += [(alpha[i], alpha[j])
               for i, j in _reversal_edges(v2, s2.sorted_stopping(), t1, pos,
                                           limits)]
    causes += [(t, n) for t, n in shadows.items()]
    causes += [(a, ticks[a]) for a in t1p - t1]

    conflicts = list(combinations(sorted(ticks.values()), 2))
    conflicts += [(t, ticks[t]) for t in t1 if g.pol[t] == MINUS]
    conflicts += [(n, ticks[t]) for t, n in shadows.items()]

    events = sorted(t1p, key=ekey) + sorted(shadows.values()) + sorted(ticks.values())
    pol = _flip(g)
    pols = {a: pol[a] for a in t1p}
    pols |= {n: NEUTRAL for n in shadows.values()}
    pols |= {v: PLUS for v in ticks.values()}
    src = Polarised(event_structure(events, causes, conflicts), pols)
    middle = Polarised(event_structure(sorted(shadows.values())),
                       {n: NEUTRAL for n in shadows.values()})
    assign = {a: (1, a) for a in t1p}
    assign |= {n: (2, n) for n in shadows.values()}
    assign |= {v: (3, TICK) for v in ticks.values()}
    return bare_strategy(src, g, middle, success_game(), assign,
                         name="separating-must-test", limits=limits)


# ---- bounded exhaustive test enumeration ----------------------------------------------


def _forced_opponent_core(g):
    """Moves every test must be ready for: positive history all the way down."""
    return {a for a in g.events
            if all(g.pol[b] == PLUS for b in g.es.below(a))}


def enumerate_tests(g, max_events=None, bare=False, limits=DEFAULT_LIMITS):
    """Every valid test over g with at most max_events source events.

    Exhaustive up to renaming of source events: candidate skeletons are cut by
    cheap necessary conditions, then validated in full. Intended for small
    bounds; the default comes from limits.max_test_size.
    """
    if max_events is None:
        max_events = limits.max_test_size
    pol = _flip(g)
    kinds = [("g", a) for a in sorted(g.events, key=ekey)] + [("t", None)]
    if bare:
        kinds.append(("n", None))
    core = _forced_opponent_core(g)
    found = []
    for n in range(max_events + 1):
        for combo in combinations_with_replacement(kinds, n):
            gpart = [a for k, a in combo if k == "g"]
            if any(sum(1 for b in gpart if b == a) != 1 for a in core):
                continue
            found.extend(_skeletons(g, pol, combo, limits))
    return found


def _skeletons(g, pol, combo, limits):
    n = len(combo)
    kind = [k for k, _ in combo]
    move = [a for _, a in combo]
    pols = [pol[move[i]] if kind[i] == "g" else
            (PLUS if kind[i] == "t" else NEUTRAL) for i in range(n)]

    slots = []
    for i, j in combinations(range(n), 2):
        for a, b in ((i, j), (j, i)):
            if kind[a] == "t":
                continue
            if pols[b] == MINUS and not (
                    kind[a] == "g" and move[a] in g.es.strict_below(move[b])):
                continue
            if pols[a] == PLUS and not (
                    kind[b] == "g"
                    and (move[a], move[b]) in g.es.immediate_pairs()):
                continue
            slots.append((a, b))
    # conflicts touching an Opponent slot always break receptivity, except when
    # already hereditary, in which case declaring them changes nothing
    conflictable = [(i, j) for i, j in combinations(range(n), 2)
                    if pols[i] != MINUS and pols[j] != MINUS]

    for edges in _subsets(slots):
        if _cyclic(edges):
            continue
        for confl in _subsets(conflictable):
            yield from _finish_skeleton(g, combo, pols, edges, confl, limits)


def _subsets(items):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def _cyclic(edges):
    seen = set(edges)
    grew = True
    while grew:
        grew = False
        for a, b in list(seen):
            for c, d in list(seen):
                if b == c and (a, d) not in seen:
                    if a == d:
                        return True
                    seen.add((a, d))
                    grew = True
    return False


def _finish_skeleton(g, combo, pols, edges, confl, limits):
    n = len(combo)
    kind = [k for k, _ in combo]
    move = [a for _, a in combo]
    try:
        src = Polarised(event_structure(list(range(n)), edges, confl),
                        dict(enumerate(pols)))
        neutrals = [i for i in range(n) if kind[i] == "n"]
        middle = Polarised(event_structure(neutrals),
                           {i: NEUTRAL for i in neutrals})
        assign = {}
        for i in range(n):
            if kind[i] == "g":
                assign[i] = (1, move[i])
            elif kind[i] == "n":
                assign[i] = (2, i)
            else:
                assign[i] = (3, TICK)
        yield bare_strategy(src, g, middle, success_game(), assign,
                            limits=limits)
    except InvalidStructure:
        return

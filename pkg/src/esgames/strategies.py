"""Bare strategies, their validation, visible parts, stopping data, and 2-cells.

A bare strategy from game A to game B is a total polarity-preserving map
sigma: S -> dual(A) || N || B whose source may contain neutral events and whose
middle N is all neutral. It must be receptive (Opponent extensions of an image
lift uniquely) and innocent in both directions. A strategy is the special case
with no neutral events anywhere; every strategy is kept in the same three
component typing with an empty middle, so target tags are uniformly
(1, a) for the dual side, (2, n) for the middle and (3, b) for the B side.
"""

from .errors import (
    GameMismatch,
    InvalidStructure,
    MapNotTotal,
    MinusInnocenceViolation,
    NotAConfiguration,
    NotEpi,
    NotPlusReflecting,
    NotReceptive,
    NotRigid,
    PlusInnocenceViolation,
    PolarityMismatch,
    StoppingNotPreserved,
    TriangleBroken,
)
from .games import (
    EMPTY,
    MINUS,
    NEUTRAL,
    PLUS,
    Polarised,
    copycat,
    dual,
    is_plus_maximal,
    minus_subset,
    parallel,
    plus_maximal_configs,
    plus_subset,
)
from .limits import DEFAULT_LIMITS
from .structures import ESMap, cfgkey, ekey, sortedevents, validate_map


class BareStrategy:
    """Holds source, games, middle and the assignment into dual(A) || N || B."""

    def __init__(self, source, game_a, middle, game_b, assign, name=""):
        self.name = name
        self.source = source
        self.A = game_a
        self.N = middle
        self.B = game_b
        self.target = parallel(dual(game_a), middle, game_b,
                               name=f"target({name})" if name else "")
        self.sigma = ESMap(source.es, self.target.es, assign)

    @property
    def is_strategy(self):
        return (not self.N.events
                and NEUTRAL not in self.source.pol.values())

    def assigned(self, s):
        return self.sigma.mapping[s]

    def image(self, x):
        return self.sigma.image(x)

    def __repr__(self):
        nm = self.name or "bare"
        return (f"<{nm}: {len(self.source.events)} source events ->"
                f" {len(self.A.events)}|{len(self.N.events)}|{len(self.B.events)}>")


def bare_strategy(source, game_a, middle, game_b, assign, name="",
                  limits=DEFAULT_LIMITS):
    """Build and fully validate; raises InvalidStructure on diagnostics."""
    bs = BareStrategy(source, game_a, middle, game_b, assign, name=name)
    diags = validate_bare_strategy(bs, limits)
    if diags:
        raise InvalidStructure(diags)
    return bs


def strategy(source, game_a, game_b, assign, name="", limits=DEFAULT_LIMITS):
    """A strategy: bare strategy with an empty middle and no neutral source events."""
    st = bare_strategy(source, game_a, EMPTY, game_b, assign, name=name,
                       limits=limits)
    if not st.is_strategy:
        raise InvalidStructure([PolarityMismatch(
            "strategy source must have no neutral events",
            neutrals=source.events_with(NEUTRAL))])
    return st


def in_game_strategy(source, g, assign, name="", limits=DEFAULT_LIMITS):
    """A strategy in a single game: from the empty game into g."""
    return strategy(source, EMPTY, g, {s: (3, v) for s, v in assign.items()},
                    name=name, limits=limits)


def in_game_bare(source, middle, g, assign, name="", limits=DEFAULT_LIMITS):
    """A bare strategy in a single game; assign values are ('n', e) for middle
    events and ('b', e) for game events."""
    wrapped = {}
    for s, (kind, e) in assign.items():
        wrapped[s] = (2, e) if kind == "n" else (3, e)
    return bare_strategy(source, EMPTY, middle, g, wrapped, name=name,
                         limits=limits)


def validate_bare_strategy(bs, limits=DEFAULT_LIMITS):
    """All defining clauses, checked exhaustively. Returns diagnostics."""
    diags = []
    if set(bs.N.pol.values()) - {NEUTRAL}:
        diags.append(PolarityMismatch("middle must be all neutral"))

    undefined = sortedevents(bs.source.events - set(bs.sigma.mapping))
    if undefined:
        diags.append(MapNotTotal(f"assignment missing for {undefined}",
                                 events=undefined))
        return diags

    rep = validate_map(bs.sigma, limits)
    diags.extend(rep.diagnostics)

    for s in sortedevents(bs.source.events):
        v = bs.sigma.mapping[s]
        if v not in bs.target.events:
            continue  # already reported by validate_map
        if bs.source.pol[s] != bs.target.pol[v]:
            diags.append(PolarityMismatch(
                f"{s!r} has polarity {bs.source.pol[s]} but its image {v!r}"
                f" has {bs.target.pol[v]}", event=s, image=v))
    if diags:
        return diags

    src_configs = bs.source.configurations(limits)
    by_image = {}
    for x in src_configs:
        by_image.setdefault(bs.image(x), []).append(x)

    tgt_configs = bs.target.configurations(limits)
    for x in src_configs:
        sx = bs.image(x)
        for y in tgt_configs:
            if not minus_subset(bs.target, sx, y):
                continue
            lifts = [x2 for x2 in by_image.get(y, ()) if x <= x2]
            if len(lifts) != 1:
                diags.append(NotReceptive(
                    f"{len(lifts)} liftings of {sortedevents(y)} over"
                    f" {sortedevents(x)}", x=x, y=y, count=len(lifts)))

    timm = bs.target.es.immediate_pairs()
    for s, s2 in sorted(bs.source.es.immediate_pairs(),
                        key=lambda p: (ekey(p[0]), ekey(p[1]))):
        img = (bs.sigma.mapping[s], bs.sigma.mapping[s2])
        if bs.source.pol[s] == PLUS and img not in timm:
            diags.append(PlusInnocenceViolation(
                f"{s!r} -> {s2!r} not mirrored at {img}", pair=(s, s2)))
        if bs.source.pol[s2] == MINUS and img not in timm:
            diags.append(MinusInnocenceViolation(
                f"{s!r} -> {s2!r} not mirrored at {img}", pair=(s, s2)))
    return diags


# ---- visible part and stopping data ---------------------------------------------


def visible_part(bs, limits=DEFAULT_LIMITS):
    """Hide the middle: restrict the source to its non-neutral events.

    Returns (strategy, p, down) where p is the partial projection map from the
    bare source onto the visible source and down sends a source configuration
    to its visible image.
    """
    keep = frozenset(e for e in bs.source.events
                     if bs.source.pol[e] != NEUTRAL)
    vis_source = bs.source.restrict(keep)
    mapping = {s: bs.sigma.mapping[s] for s in keep}
    vis = BareStrategy(vis_source, bs.A, EMPTY, bs.B, mapping,
                       name=f"visible({bs.name})" if bs.name else "")
    p = ESMap(bs.source.es, vis_source.es, {e: e for e in keep})

    def down(x):
        return frozenset(x) & keep

    return vis, p, down


class StoppingStrategy:
    """A strategy together with its chosen stopping configurations.

    No axiom beyond membership in the configuration family is enforced;
    lint_stopping reports the informational checks.
    """

    def __init__(self, strat, stopping, name="", limits=DEFAULT_LIMITS):
        self.name = name or strat.name
        self.strat = strat
        configs = set(strat.source.configurations(limits))
        stopping = frozenset(frozenset(x) for x in stopping)
        bad = [x for x in stopping if x not in configs]
        if bad:
            raise InvalidStructure([NotAConfiguration(
                f"stopping member {sortedevents(x)} is not a configuration",
                member=x) for x in bad])
        self.stopping = stopping

    def sorted_stopping(self):
        return sorted(self.stopping, key=cfgkey)

    def __repr__(self):
        nm = self.name or "stopping"
        return f"<{nm}: {len(self.stopping)} stopping configurations>"


def stop_of(bs, limits=DEFAULT_LIMITS):
    """Visible part plus the visible images of the maximal bare configurations.

    A configuration counts as maximal when it has no Player or neutral
    extension. For a source without neutral events this is exactly the set of
    its maximal configurations in that sense.
    """
    vis, _, down = visible_part(bs, limits)
    stopping = {down(x) for x in bs.source.configurations(limits)
                if is_plus_maximal(bs.source, x)}
    return StoppingStrategy(vis, stopping, name=f"st({bs.name})" if bs.name else "")


def saturate_stopping(st, limits=DEFAULT_LIMITS):
    """The stopping data a neutral-free strategy induces on its own."""
    assert st.is_strategy, "saturate_stopping expects a strategy"
    return StoppingStrategy(st, set(plus_maximal_configs(st.source, limits)),
                            name=f"sat({st.name})" if st.name else "")


def copycat_strategy(A, name="", limits=DEFAULT_LIMITS):
    """Copycat as a strategy from A to A."""
    cc, _ = copycat(A)
    assign = {}
    for (i, a) in cc.events:
        assign[(i, a)] = (1, a) if i == 1 else (3, a)
    return strategy(cc, A, A, assign, name=name or (A.name and f"cc({A.name})"),
                    limits=limits)


# ---- 2-cells -------------------------------------------------------------------


def _strat_of(s):
    return s.strat if isinstance(s, StoppingStrategy) else s


def same_signature(s1, s2):
    b1, b2 = _strat_of(s1), _strat_of(s2)
    return b1.A == b2.A and b1.N == b2.N and b1.B == b2.B


def validate_two_cell(f, src, dst, kind="plain", limits=DEFAULT_LIMITS):
    """Check a map between strategy sources as a 2-cell of the given kind.

    kind: plain | stopping | plus_reflecting | rigid_epi. Returns diagnostics.
    """
    assert kind in ("plain", "stopping", "plus_reflecting", "rigid_epi")
    bsrc, bdst = _strat_of(src), _strat_of(dst)
    diags = []
    if not same_signature(src, dst):
        diags.append(GameMismatch("2-cell endpoints over different games"))
        return diags

    if isinstance(f, dict):
        f = ESMap(bsrc.source.es, bdst.source.es, f)
    undefined = sortedevents(bsrc.source.events - set(f.mapping))
    if undefined:
        diags.append(MapNotTotal(f"2-cell missing {undefined}", events=undefined))
        return diags

    rep = validate_map(f, limits)
    diags.extend(rep.diagnostics)
    for s in sortedevents(bsrc.source.events):
        if bsrc.source.pol[s] != bdst.source.pol[f.mapping[s]]:
            diags.append(PolarityMismatch(
                f"2-cell changes polarity of {s!r}", event=s))
        if bsrc.sigma.mapping[s] != bdst.sigma.mapping[f.mapping[s]]:
            diags.append(TriangleBroken(
                f"assignments disagree at {s!r}: {bsrc.sigma.mapping[s]}"
                f" vs {bdst.sigma.mapping[f.mapping[s]]}", event=s))
    if diags:
        return diags

    if kind == "stopping":
        assert isinstance(src, StoppingStrategy) and isinstance(dst, StoppingStrategy)
        for x in src.sorted_stopping():
            if f.image(x) not in dst.stopping:
                diags.append(StoppingNotPreserved(
                    f"image of stopping {sortedevents(x)} is not stopping",
                    x=x, image=f.image(x)))
    elif kind == "plus_reflecting":
        src_configs = bsrc.source.configurations(limits)
        images = {frozenset(f.image(x)) for x in src_configs}
        for x in src_configs:
            fx = f.image(x)
            for y in bdst.source.configurations(limits):
                if not plus_subset(bdst.source, fx, y):
                    continue
                if not any(x <= x2 and f.image(x2) == y for x2 in src_configs):
                    diags.append(NotPlusReflecting(
                        f"no lifting of {sortedevents(y)} over {sortedevents(x)}",
                        x=x, y=y))
    elif kind == "rigid_epi":
        if not rep.rigid:
            diags.append(NotRigid("2-cell does not preserve causal order"))
        missing = sortedevents(bdst.source.events - set(f.mapping.values()))
        if missing:
            diags.append(NotEpi(f"events {missing} not in the image",
                                events=missing))
    return diags


def two_cell_visible(f, src, dst):
    """The induced map between visible sources: restrict to non-neutral events."""
    bsrc, bdst = _strat_of(src), _strat_of(dst)
    vsrc, _, _ = visible_part(bsrc)
    vdst, _, _ = visible_part(bdst)
    if isinstance(f, dict):
        mapping = f
    else:
        mapping = f.mapping
    return ESMap(vsrc.source.es, vdst.source.es,
                 {s: mapping[s] for s in vsrc.source.events})

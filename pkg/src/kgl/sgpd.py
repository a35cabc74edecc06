"""Finite star-semigroupoids as explicit tables, plus left actions.

A semigroupoid here is a finite set of elements with domain and codomain
symbols and a partial composition defined exactly on the composable pairs
(domain of the left factor equals codomain of the right factor). The star
is an involution reversing products and swapping domain with codomain.
Everything is validated exhaustively; violations are reported with witness
tuples rather than raised, so corrupted tables can be inspected.

Conventions. Composition is written like function composition: a*b means
"apply b, then a". The out-fiber of a symbol s collects the elements with
codomain s, the in-fiber those with domain s.
"""

import itertools
from dataclasses import dataclass, field

from .errors import BadFamilyParams, InvalidSemigroupoid, MalformedTable, UnknownPoint

__all__ = [
    "StarSemigroupoid",
    "LeftAction",
    "Violation",
    "ValidationReport",
    "Classification",
    "validate",
    "classify",
    "validate_action",
    "orbit",
    "orbit_trivial_bundle",
    "self_action",
    "symbol_action",
    "generate",
    "pair_groupoid",
    "group_as_groupoid",
    "group_action",
    "partial_bijections",
]


@dataclass(frozen=True, eq=False)
class StarSemigroupoid:
    symbols: tuple
    elements: tuple
    d: dict
    c: dict
    compose: dict  # (a, b) -> ab, exactly on composable pairs
    star: dict
    units: dict = None  # optional symbol -> element

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "elements", tuple(self.elements))
        syms, elts = set(self.symbols), set(self.elements)
        if len(syms) != len(self.symbols):
            raise MalformedTable("duplicate symbol labels")
        if len(elts) != len(self.elements):
            raise MalformedTable("duplicate element labels")
        for g in self.elements:
            if g not in self.d or g not in self.c:
                raise MalformedTable(f"element {g!r} missing d or c")
            if self.d[g] not in syms or self.c[g] not in syms:
                raise MalformedTable(f"element {g!r} has d/c outside the symbol set")
        for g in itertools.chain(self.d, self.c, self.star):
            if g not in elts:
                raise MalformedTable(f"table mentions unknown element {g!r}")
        for (a, b), ab in self.compose.items():
            for g in (a, b, ab):
                if g not in elts:
                    raise MalformedTable(f"compose entry mentions unknown element {g!r}")
        for g, gs in self.star.items():
            if gs not in elts:
                raise MalformedTable(f"star({g!r}) = {gs!r} is not an element")
        if self.units is not None:
            for s, e in self.units.items():
                if s not in syms:
                    raise MalformedTable(f"unit declared for unknown symbol {s!r}")
                if e not in elts:
                    raise MalformedTable(f"unit {e!r} is not an element")

    # fibers
    def out_fiber(self, s):
        """Elements with codomain s."""
        return [g for g in self.elements if self.c[g] == s]

    def in_fiber(self, s):
        """Elements with domain s."""
        return [g for g in self.elements if self.d[g] == s]

    def composable(self, a, b) -> bool:
        return self.d[a] == self.c[b]

    def mul(self, a, b):
        if (a, b) not in self.compose:
            raise InvalidSemigroupoid(f"product {a!r}*{b!r} is not defined")
        return self.compose[(a, b)]


@dataclass(frozen=True, eq=False)
class LeftAction:
    sg: StarSemigroupoid
    base: tuple
    anchor: dict  # point -> symbol
    act: dict  # (element, point) -> point

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(self.base))
        pts = set(self.base)
        if len(pts) != len(self.base):
            raise MalformedTable("duplicate base points")
        syms = set(self.sg.symbols)
        elts = set(self.sg.elements)
        for x in self.base:
            if x not in self.anchor:
                raise MalformedTable(f"point {x!r} has no anchor symbol")
            if self.anchor[x] not in syms:
                raise MalformedTable(f"anchor of {x!r} is not a symbol")
        for (g, x), y in self.act.items():
            if g not in elts:
                raise MalformedTable(f"action entry mentions unknown element {g!r}")
            if x not in pts or y not in pts:
                raise MalformedTable(f"action entry ({g!r},{x!r}) -> {y!r} leaves the base")

    def apply(self, g, x):
        if (g, x) not in self.act:
            raise InvalidSemigroupoid(f"action of {g!r} on {x!r} is not defined")
        return self.act[(g, x)]


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str


@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.entries

    def add(self, axiom, witness, detail):
        self.entries.append(Violation(axiom, tuple(witness), detail))

    def axioms(self):
        return sorted({v.axiom for v in self.entries})


@dataclass(frozen=True)
class Classification:
    has_unit: bool
    is_transitive: bool
    is_inverse: bool
    is_groupoid: bool
    inverse_map: dict = None
    units: dict = None
    star_matches_inverse: bool = None


def validate(sg: StarSemigroupoid) -> ValidationReport:
    """Exhaustive axiom check; every violation is recorded with a witness."""
    rep = ValidationReport()
    comp = sg.compose

    # composition defined exactly on composable pairs, with the right (d, c)
    for a, b in itertools.product(sg.elements, repeat=2):
        defined = (a, b) in comp
        if defined != sg.composable(a, b):
            why = "defined on non-composable pair" if defined else "missing product"
            rep.add("SG3", (a, b), why)
        if defined and sg.composable(a, b):
            ab = comp[(a, b)]
            if sg.d[ab] != sg.d[b] or sg.c[ab] != sg.c[a]:
                rep.add("SG3", (a, b), f"product {ab!r} has wrong domain or codomain")

    def prod(a, b):
        return comp.get((a, b))

    # associativity over all triply-composable triples
    for a, b in comp:
        for g in sg.elements:
            if sg.composable(b, g):
                left = prod(prod(a, b), g) if prod(a, b) is not None else None
                bg = prod(b, g)
                right = prod(a, bg) if bg is not None else None
                if left is None or right is None or left != right:
                    rep.add("SG4", (a, b, g), f"({a}{b}){g} = {left!r} vs {a}({b}{g}) = {right!r}")

    # involution
    for g in sg.elements:
        if g not in sg.star:
            rep.add("I1", (g,), "star undefined")
            continue
        gs = sg.star[g]
        if sg.d[gs] != sg.c[g] or sg.c[gs] != sg.d[g]:
            rep.add("I1", (g,), f"star({g!r}) = {gs!r} does not swap domain and codomain")
        if sg.star.get(gs) != g:
            rep.add("I3", (g,), f"star(star({g!r})) = {sg.star.get(gs)!r}")
    for (a, b), ab in comp.items():
        sa, sb, sab = sg.star.get(a), sg.star.get(b), sg.star.get(ab)
        if sa is None or sb is None:
            continue
        if prod(sb, sa) != sab:
            rep.add("I2", (a, b), f"star({a}{b}) = {sab!r} but star(b)star(a) = {prod(sb, sa)!r}")

    # units, when declared
    if sg.units is not None:
        for s in sg.symbols:
            if s not in sg.units:
                rep.add("U1", (s,), "no unit declared for this symbol")
                continue
            e = sg.units[s]
            if sg.d[e] != s or sg.c[e] != s:
                rep.add("U1", (s,), f"unit {e!r} not in the (s, s) fiber")
                continue
            for a in sg.out_fiber(s):
                if prod(e, a) != a:
                    rep.add("U2", (s, a), f"unit does not fix {a!r} from the left")
            for a in sg.in_fiber(s):
                if prod(a, e) != a:
                    rep.add("U3", (s, a), f"unit does not fix {a!r} from the right")
            if sg.star.get(e) != e:
                rep.add("U-star", (s,), f"unit {e!r} is not star-fixed")

    # isolated symbols are rejected, loudly, instead of being dropped
    for s in sg.symbols:
        if not sg.out_fiber(s) and not sg.in_fiber(s):
            rep.add("isolated-symbol", (s,), "symbol carries no elements; remove it explicitly")

    return rep


def _search_units(sg: StarSemigroupoid):
    """Two-sided fiber identities found by exhaustive search, per symbol."""
    found = {}
    for s in sg.symbols:
        outs, ins = sg.out_fiber(s), sg.in_fiber(s)
        for e in sg.elements:
            if sg.d[e] != s or sg.c[e] != s:
                continue
            if all(sg.compose.get((e, a)) == a for a in outs) and all(
                sg.compose.get((a, e)) == a for a in ins
            ):
                found[s] = e
                break
    return found


def classify(sg: StarSemigroupoid) -> Classification:
    """Unit/transitive/inverse/groupoid flags, by exhaustive search."""
    rep = validate(sg)
    if not rep.ok:
        raise InvalidSemigroupoid(f"axioms violated: {rep.axioms()}")

    units = _search_units(sg)
    has_unit = set(units) == set(sg.symbols)

    pairs = {(sg.d[g], sg.c[g]) for g in sg.elements}
    is_transitive = pairs == set(itertools.product(sg.symbols, repeat=2))

    # unique pseudo-inverse per element
    inverse_map = {}
    is_inverse = True
    for a in sg.elements:
        cands = []
        for b in sg.elements:
            if sg.d[b] != sg.c[a] or sg.c[b] != sg.d[a]:
                continue
            ab = sg.compose.get((a, b))
            ba = sg.compose.get((b, a))
            if ab is None or ba is None:
                continue
            if sg.compose.get((ab, a)) == a and sg.compose.get((ba, b)) == b:
                cands.append(b)
        if len(cands) == 1:
            inverse_map[a] = cands[0]
        else:
            is_inverse = False
    if not is_inverse:
        inverse_map = None

    is_groupoid = False
    if has_unit and is_inverse:
        is_groupoid = all(
            sg.compose.get((a, inverse_map[a])) == units[sg.c[a]]
            and sg.compose.get((inverse_map[a], a)) == units[sg.d[a]]
            for a in sg.elements
        )

    star_matches = None
    if is_inverse:
        star_matches = all(sg.star[a] == inverse_map[a] for a in sg.elements)

    return Classification(
        has_unit=has_unit,
        is_transitive=is_transitive,
        is_inverse=is_inverse,
        is_groupoid=is_groupoid,
        inverse_map=inverse_map,
        units=units if has_unit else None,
        star_matches_inverse=star_matches,
    )


def validate_action(act: LeftAction, unital: bool = False) -> ValidationReport:
    """Exhaustive check of the left-action axioms, with witnesses."""
    sg = act.sg
    rep = ValidationReport()

    hit = {act.anchor[x] for x in act.base}
    for s in sg.symbols:
        if s not in hit:
            rep.add("A1", (s,), "anchor misses this symbol (not surjective)")

    for g in sg.elements:
        for x in act.base:
            defined = (g, x) in act.act
            should = sg.d[g] == act.anchor[x]
            if defined != should:
                why = "defined off the anchor fiber" if defined else "missing action value"
                rep.add("A2", (g, x), why)
            if defined and should:
                y = act.act[(g, x)]
                if act.anchor[y] != sg.c[g]:
                    rep.add("A2", (g, x), f"anchor({y!r}) is not the codomain of {g!r}")

    for (a, b), ab in sg.compose.items():
        for x in act.base:
            if sg.d[b] != act.anchor[x]:
                continue
            bx = act.act.get((b, x))
            lhs = act.act.get((ab, x))
            rhs = act.act.get((a, bx)) if bx is not None else None
            if lhs is None or rhs is None or lhs != rhs:
                rep.add("A3", (a, b, x), f"(ab).x = {lhs!r} vs a.(b.x) = {rhs!r}")

    if unital:
        units = sg.units if sg.units is not None else _search_units(sg)
        for x in act.base:
            e = units.get(act.anchor[x])
            if e is None:
                rep.add("A-unital", (x,), "no unit available for the anchor symbol")
            elif act.act.get((e, x)) != x:
                rep.add("A-unital", (x,), f"unit moves the point to {act.act.get((e, x))!r}")

    return rep


def orbit(act: LeftAction, x) -> set:
    """All points reachable from x by one action step, together with x."""
    if x not in set(act.base):
        raise UnknownPoint(f"unknown point {x!r}")
    s = act.anchor[x]
    out = {x}
    for g in act.sg.in_fiber(s):
        if (g, x) in act.act:
            out.add(act.act[(g, x)])
    return out


def orbit_trivial_bundle(act: LeftAction, bundle) -> bool:
    """True iff the fiber dimension is constant on every action orbit."""
    for x in act.base:
        bundle.require(x)
        dims = {bundle.dim[y] for y in orbit(act, x)}
        if len(dims) > 1:
            return False
    return True


# ------------------------------------------------------------------
# canonical actions


def self_action(sg: StarSemigroupoid) -> LeftAction:
    """The semigroupoid acting on itself by left multiplication (anchor = codomain)."""
    base = sg.elements
    anchor = {b: sg.c[b] for b in base}
    table = {}
    for g in sg.elements:
        for b in base:
            if sg.d[g] == sg.c[b]:
                table[(g, b)] = sg.compose[(g, b)]
    return LeftAction(sg=sg, base=base, anchor=anchor, act=table)


def symbol_action(sg: StarSemigroupoid) -> LeftAction:
    """The action on the symbol set itself: an element moves its domain to its codomain."""
    base = sg.symbols
    anchor = {s: s for s in base}
    table = {(g, sg.d[g]): sg.c[g] for g in sg.elements}
    return LeftAction(sg=sg, base=base, anchor=anchor, act=table)


# ------------------------------------------------------------------
# generator families


def pair_groupoid(symbols, action: str = "self"):
    """Pair groupoid on a symbol set: one arrow between every ordered pair.

    The element (u, v) is the arrow from v to u, so (u,v)(v,w) = (u,w).
    """
    syms = tuple(symbols)
    if len(syms) < 1:
        raise BadFamilyParams("pair_groupoid needs at least one symbol")
    elts = [f"({u},{v})" for u in syms for v in syms]
    d = {f"({u},{v})": v for u in syms for v in syms}
    c = {f"({u},{v})": u for u in syms for v in syms}
    compose = {}
    for u, v, w in itertools.product(syms, repeat=3):
        compose[(f"({u},{v})", f"({v},{w})")] = f"({u},{w})"
    star = {f"({u},{v})": f"({v},{u})" for u in syms for v in syms}
    units = {s: f"({s},{s})" for s in syms}
    sg = StarSemigroupoid(syms, tuple(elts), d, c, compose, star, units)
    return sg, _pick_action(sg, action)


def _normalize_group_table(table):
    """Accept {g: {h: gh}} or {(g,h): gh}; return ({(g,h): gh}, elements)."""
    flat = {}
    if not table:
        raise BadFamilyParams("empty group table")
    sample = next(iter(table))
    if isinstance(table[sample], dict):
        for g, row in table.items():
            for h, gh in row.items():
                flat[(g, h)] = gh
    else:
        flat = dict(table)
    elts = sorted({g for pair in flat for g in pair} | set(flat.values()))
    for g, h in itertools.product(elts, repeat=2):
        if (g, h) not in flat:
            raise BadFamilyParams(f"group table misses the product {g!r}*{h!r}")
    return flat, elts


def _group_semigroupoid(table, symbol="s0"):
    flat, elts = _normalize_group_table(table)
    identity = None
    for e in elts:
        if all(flat[(e, g)] == g and flat[(g, e)] == g for g in elts):
            identity = e
            break
    if identity is None:
        raise BadFamilyParams("group table has no identity element")
    inv = {}
    for g in elts:
        for h in elts:
            if flat[(g, h)] == identity and flat[(h, g)] == identity:
                inv[g] = h
                break
        else:
            raise BadFamilyParams(f"group table has no inverse for {g!r}")
    d = {g: symbol for g in elts}
    c = {g: symbol for g in elts}
    return StarSemigroupoid(
        (symbol,), tuple(elts), d, c, dict(flat), inv, {symbol: identity}
    )


def group_as_groupoid(table, action: str = "self"):
    """A finite group, from its multiplication table, as a one-symbol groupoid."""
    sg = _group_semigroupoid(table)
    return sg, _pick_action(sg, action)


def group_action(table, base, action_map):
    """A finite group acting on an explicit point set.

    action_map maps (group element, point) -> point and must be total.
    """
    sg = _group_semigroupoid(table)
    base = tuple(base)
    symbol = sg.symbols[0]
    anchor = {x: symbol for x in base}
    table_a = {}
    for g in sg.elements:
        for x in base:
            if (g, x) not in action_map:
                raise BadFamilyParams(f"action table misses ({g!r}, {x!r})")
            table_a[(g, x)] = action_map[(g, x)]
    return sg, LeftAction(sg=sg, base=base, anchor=anchor, act=table_a)


def _enumerate_partial_bijections(src, dst):
    """All injective partial maps src -> dst, as sorted graph tuples."""
    out = [()]
    for k in range(1, min(len(src), len(dst)) + 1):
        for dom in itertools.combinations(src, k):
            for img in itertools.permutations(dst, k):
                out.append(tuple(zip(dom, img)))
    return out


def partial_bijections(fiber_sizes, action: str = "self"):
    """The inverse semigroupoid of all partial bijections between finite fibers.

    One symbol per fiber; an element with domain symbol s and codomain
    symbol t is an injective partial map from the s-fiber into the
    t-fiber. The empty partial map is included for every ordered symbol
    pair: composition needs it for closure.
    """
    sizes = tuple(int(n) for n in fiber_sizes)
    if not sizes or any(n < 1 for n in sizes):
        raise BadFamilyParams("fiber sizes must be a nonempty tuple of positive ints")
    syms = tuple(f"p{i}" for i in range(len(sizes)))
    fibers = {s: tuple(f"{s}.{j}" for j in range(n)) for s, n in zip(syms, sizes)}

    def label(s, t, graph):
        body = ",".join(f"{a}:{b}" for a, b in graph)
        return f"{t}<{s}[{body}]"

    elts, d, c, graphs = [], {}, {}, {}
    for s in syms:
        for t in syms:
            for graph in _enumerate_partial_bijections(fibers[s], fibers[t]):
                g = label(s, t, graph)
                elts.append(g)
                d[g] = s
                c[g] = t
                graphs[g] = dict(graph)

    by_key = {}
    for g in elts:
        key = (d[g], c[g], tuple(sorted(graphs[g].items())))
        by_key[key] = g

    compose = {}
    for a in elts:
        for b in elts:
            if d[a] != c[b]:
                continue
            gb, ga = graphs[b], graphs[a]
            graph = tuple(sorted((p, ga[q]) for p, q in gb.items() if q in ga))
            compose[(a, b)] = by_key[(d[b], c[a], graph)]

    star = {}
    for g in elts:
        conv = tuple(sorted((q, p) for p, q in graphs[g].items()))
        star[g] = by_key[(c[g], d[g], conv)]

    units = {}
    for s in syms:
        ident = tuple(sorted((p, p) for p in fibers[s]))
        units[s] = by_key[(s, s, ident)]

    sg = StarSemigroupoid(syms, tuple(elts), d, c, compose, star, units)
    return sg, _pick_action(sg, action)


def _pick_action(sg, action):
    if action == "self":
        return self_action(sg)
    if action == "symbols":
        return symbol_action(sg)
    raise BadFamilyParams(f"unknown action choice {action!r}")


_FAMILIES = ("pair_groupoid", "group_action", "partial_bijections", "group_as_groupoid")


def cyclic_group_table(n: int):
    """Multiplication table of the cyclic group of order n, elements g0..g(n-1)."""
    if n < 1:
        raise BadFamilyParams("cyclic group order must be positive")
    return {(f"g{i}", f"g{j}"): f"g{(i + j) % n}" for i in range(n) for j in range(n)}


def generate(family: str, seed: int = 0, **params):
    """Build a named example family; output always validates.

    The structure families are deterministic; seed only selects default
    sizes when the family parameters are omitted. Returns a pair
    (semigroupoid, left action).
    """
    rng = abs(int(seed))
    if family == "pair_groupoid":
        symbols = params.get("symbols")
        if symbols is None:
            symbols = tuple(f"s{i}" for i in range(2 + rng % 2))
        return pair_groupoid(symbols, action=params.get("action", "self"))
    if family == "group_as_groupoid":
        table = params.get("table")
        if table is None:
            table = cyclic_group_table(2 + rng % 3)
        return group_as_groupoid(table, action=params.get("action", "self"))
    if family == "group_action":
        table = params.get("table")
        base = params.get("base")
        action_map = params.get("action_map")
        if table is None:
            n = 2 + rng % 3
            table = cyclic_group_table(n)
            base = tuple(f"x{k}" for k in range(n))
            action_map = {
                (f"g{i}", f"x{k}"): f"x{(i + k) % n}" for i in range(n) for k in range(n)
            }
        if base is None or action_map is None:
            raise BadFamilyParams("group_action needs base and action_map with a custom table")
        return group_action(table, base, action_map)
    if family == "partial_bijections":
        sizes = params.get("fiber_sizes")
        if sizes is None:
            sizes = ((1, 1), (2, 1), (1, 1, 1))[rng % 3]
        return partial_bijections(sizes, action=params.get("action", "self"))
    raise BadFamilyParams(f"unknown family {family!r}; choose from {_FAMILIES}")

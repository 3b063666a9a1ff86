"""Named verification suites.

Each suite turns a per-trial random stream into a JSON instance and checks
one family of statements on it.  A check returns ``None`` on success and a
JSON-able detail on failure, so every failure record carries everything
needed to replay it.
"""

from __future__ import annotations

import random
import time
from contextvars import ContextVar
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Any, Callable

from . import generate as gen
from .euclid import Ring, RingMatrix, column_echelon, kernel_basis, ring_from_json
from .finite import (
    FiniteModule,
    finite_modules,
    has_complement,
    quotient_module,
    submodule_presentation,
    summarize_homs,
)
from .homology import (
    ModuleComplex,
    acyclicity_check,
    first_failure,
    generic_euler_char,
    homology_at,
    lower_length,
    upper_length,
)
from .io import map_from_json, module_from_json, poset_from_json, pwoexpr_from_json, pwoexpr_to_json
from .module import (
    FgModule,
    MapError,
    _preimage_basis,
    _spans_contained,
    canonical_form,
    cyclic_module,
    dimension,
    direct_sum,
    free_module,
    generic_length,
    is_unmixed,
    length,
    make_map,
    map_parts,
    module_from_factors,
    verify_semi_additivity,
)
from .ordinal import (
    Ordinal,
    cmp_at_level,
    Cmp,
    ord_sum,
    omega_power,
    parse_ordinal,
    shuffle_sum,
    shuffle_sum_oracle,
    shuffle_sum_recursive,
    split,
)
from .pwo import (
    Explicit,
    FinitePoset,
    Sum,
    flatten,
    induced,
    make_poset,
    max_chain_length,
    product_poset,
    rank_all,
    sum_poset,
    symbolic_length,
)

__all__ = ["Suite", "SUITES", "run_suite", "replay", "trial_rng", "sweep_lattices", "sweep_homs"]

Detail = Any


@dataclass(frozen=True)
class Suite:
    name: str
    generate: Callable[[random.Random, int], dict]
    check: Callable[[dict, int], Detail]
    bound: int = 0


SUITES: dict[str, Suite] = {}


def _suite(name: str, bound: int = 0):
    def wrap(pair: tuple[Callable, Callable]):
        SUITES[name] = Suite(name, pair[0], pair[1], bound)
        return pair
    return wrap


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


def _o(a: Ordinal) -> str:
    return str(a)


_FIXED_CONTEXT: ContextVar[str | None] = ContextVar("fixed_context", default=None)


def _ctx(rng: random.Random) -> tuple[str, Ring]:
    name = rng.choice(sorted(gen.CONTEXTS))
    name = _FIXED_CONTEXT.get() or name
    return name, gen.CONTEXTS[name]


# ------------------------------------------------------------------ ordinals


def _gen_pair(rng: random.Random, bound: int) -> dict:
    return {"a": _o(gen.ordinal(rng)), "b": _o(gen.ordinal(rng))}


def _check_ssum(inst: dict, bound: int) -> Detail:
    a, b = parse_ordinal(inst["a"]), parse_ordinal(inst["b"])
    s = shuffle_sum(a, b)
    r = shuffle_sum_recursive(a, b)
    o = shuffle_sum_oracle(a, b, bound, exhaustive=a.valence + b.valence <= bound)
    if s == r == o:
        return None
    return {"shuffle_sum": _o(s), "recursive": _o(r), "oracle": _o(o)}


_suite("ssum-equivalence", 12)((_gen_pair, _check_ssum))


def _gen_findist(rng: random.Random, bound: int) -> dict:
    a = b = Ordinal.of(0)
    while a.is_zero() or b.is_zero():
        a, b = gen.ordinal(rng), gen.ordinal(rng)
    o = min(a.order, b.order)
    theta = gen.ordinal(rng, max_degree=o)
    return {"a": _o(a), "b": _o(b), "theta": _o(theta)}


def _check_findist(inst: dict, bound: int) -> Detail:
    a, b, th = (parse_ordinal(inst[k]) for k in ("a", "b", "theta"))
    if th.degree > min(a.order, b.order):
        return {"error": "theta is too large for the identity"}
    vals = [ord_sum(shuffle_sum(a, b), th), shuffle_sum(ord_sum(a, th), b), shuffle_sum(a, ord_sum(b, th))]
    if len(set(vals)) == 1:
        return None
    return {"(a#b)+theta": _o(vals[0]), "(a+theta)#b": _o(vals[1]), "a#(b+theta)": _o(vals[2])}


_suite("findist")((_gen_findist, _check_findist))


def _gen_eineq(rng: random.Random, bound: int) -> dict:
    e = rng.randint(0, 3)
    alpha = Ordinal.of(0)
    while alpha.is_zero():
        alpha = Ordinal.from_coefficients(
            {x: rng.randint(1, 3) for x in range(e, 4) if rng.random() < 0.6}
        )
    mu = gen.ordinal(rng, max_degree=e - 1) if e > 0 else Ordinal.of(0)
    beta = ord_sum(alpha, mu)
    if rng.random() < 0.5 and mu.terms:
        # a lambda below mu: drop trailing terms, shrink the last coefficient
        k = rng.randint(1, len(mu.terms))
        terms = list(mu.terms[:k])
        exp, coef = terms[-1]
        terms[-1] = (exp, rng.randint(1, coef))
        lam = Ordinal(tuple(terms))
    else:
        lam = gen.ordinal(rng)
    return {"alpha": _o(alpha), "beta": _o(beta), "lambda": _o(lam), "e": e}


def _check_eineq(inst: dict, bound: int) -> Detail:
    al, be, la = (parse_ordinal(inst[k]) for k in ("alpha", "beta", "lambda"))
    e = int(inst["e"])
    hyp = al.order >= e and cmp_at_level(al, be, e) is Cmp.EQ and ord_sum(al, la) <= be
    if not hyp or la.degree <= e - 1:
        return None
    return {"degree_lambda": la.degree, "alpha+lambda": _o(ord_sum(al, la))}


_suite("eineq")((_gen_eineq, _check_eineq))


# -------------------------------------------------------------------- posets


def _chain_oracle(p: FinitePoset) -> list[int]:
    """Longest chain ending at each element, by trying every subset."""
    best = [0] * p.n
    for mask in range(1, 1 << p.n):
        elems = [i for i in range(p.n) if mask >> i & 1]
        if all(p.leq(x, y) or p.leq(y, x) for x, y in combinations(elems, 2)):
            top = max(elems, key=lambda x: sum(p.leq(y, x) for y in elems))
            best[top] = max(best[top], len(elems) - 1)
    return best


def _gen_poset(rng: random.Random, bound: int) -> dict:
    return {"poset": gen.poset(rng, bound, min_n=1).to_json()}


def _check_poset_rank(inst: dict, bound: int) -> Detail:
    p = poset_from_json(inst["poset"])
    rk = rank_all(p)
    oracle = _chain_oracle(p)
    mins = set(p.minima())
    bad_min = [i for i in range(p.n) if (rk[i] == 0) != (i in mins)]
    mcl = max_chain_length(p)
    if list(rk.rank) == oracle and rk.length == mcl == max(oracle) and not bad_min:
        return None
    return {"rank": list(rk.rank), "oracle": oracle, "max_chain_length": mcl, "minimality_mismatch": bad_min}


_suite("poset-rank", 7)((_gen_poset, _check_poset_rank))


def _gen_two_posets(rng: random.Random, bound: int) -> dict:
    return {"p": gen.poset(rng, bound, min_n=1).to_json(), "q": gen.poset(rng, bound, min_n=1).to_json()}


def _check_product(inst: dict, bound: int) -> Detail:
    p, q = poset_from_json(inst["p"]), poset_from_json(inst["q"])
    pq = product_poset(p, q)
    rp, rq, r = rank_all(p), rank_all(q), rank_all(pq)
    bad = [[a, b] for a in range(p.n) for b in range(q.n) if r[a * q.n + b] != rp[a] + rq[b]]
    if pq.n == 0:
        return None if not bad else {"pairs": bad}
    want = shuffle_sum(rp.length, rq.length)
    got = Ordinal.of(max_chain_length(pq))
    if not bad and r.length == int(want) and got == want:
        return None
    return {"pairs": bad[:10], "length": r.length, "chain": str(got), "expected": str(want)}


_suite("product-formula", 7)((_gen_two_posets, _check_product))


def _with_top(p: FinitePoset) -> FinitePoset:
    return make_poset(p.n + 1, [(i, p.n) for i in range(p.n)] + list(p.le))


def _gen_sum(rng: random.Random, bound: int) -> dict:
    return {"p": _with_top(gen.poset(rng, bound - 1)).to_json(), "q": gen.poset(rng, bound).to_json()}


def _check_sum(inst: dict, bound: int) -> Detail:
    """The sum formula as stated: ``len(P + Q) = len P + len Q``."""
    p, q = poset_from_json(inst["p"]), poset_from_json(inst["q"])
    if p.maximum() is None:
        return {"error": "first summand has no maximum"}
    s = sum_poset(p, q)
    lp, lq = rank_all(p).length, rank_all(q).length
    stated = ord_sum(lp, lq)
    got = rank_all(s).length
    if got == int(stated) == max_chain_length(s):
        return None
    shifted = ord_sum(lp, ord_sum(1, lq)) if q.n else Ordinal.of(lp)
    return {
        "length": got,
        "stated": str(stated),
        "len_p+1+len_q": str(shifted),
        "symbolic": str(symbolic_length(Sum(Explicit(p), Explicit(q)))),
    }


_suite("sum-formula", 7)((_gen_sum, _check_sum))


def _gen_inc(rng: random.Random, bound: int) -> dict:
    q = gen.poset(rng, bound, min_n=1)
    z = rng.randrange(q.n)
    above = [x for x in range(q.n) if x != z and q.leq(z, x)]
    chosen = [z] + [x for x in above if rng.random() < 0.7]
    rng.shuffle(chosen)
    pos = {x: i for i, x in enumerate(chosen)}
    pairs = [(pos[z], pos[x]) for x in chosen if x != z]
    pairs += [(pos[x], pos[y]) for x in chosen for y in chosen
              if x != y and q.lt(x, y) and rng.random() < 0.5]
    p = make_poset(len(chosen), pairs)
    return {"p": p.to_json(), "q": q.to_json(), "f": chosen}


def _check_inc(inst: dict, bound: int) -> Detail:
    p, q = poset_from_json(inst["p"]), poset_from_json(inst["q"])
    f = [int(x) for x in inst["f"]]
    bot = p.minimum()
    if bot is None or len(f) != p.n:
        return {"error": "source has no minimum or map has the wrong size"}
    if any(p.lt(a, b) and not q.lt(f[a], f[b]) for a in range(p.n) for b in range(p.n)):
        return {"error": "map is not strictly increasing"}
    rp, rq = rank_all(p), rank_all(q)
    bad = [a for a in range(p.n) if rq[f[bot]] + rp[a] > rq[f[a]]]
    return {"elements": bad} if bad else None


_suite("inc-map", 7)((_gen_inc, _check_inc))


def _gen_ab(rng: random.Random, bound: int) -> dict:
    while True:
        p = gen.poset(rng, bound, min_n=1)
        # cut along a random antichain: A below all of it, B above all of it
        cut: list[int] = []
        for x in rng.sample(range(p.n), p.n):
            if all(not p.leq(x, y) and not p.leq(y, x) for y in cut) and rng.random() < 0.5:
                cut.append(x)
        if not cut:
            cut = [rng.randrange(p.n)]
        low = [x for x in range(p.n) if all(p.leq(x, c) for c in cut)]
        high = [x for x in range(p.n) if all(p.leq(c, x) for c in cut)]
        a = [x for x in low if rng.random() < 0.6] or [rng.choice(low)] if low else []
        b = [x for x in high if x not in a and rng.random() < 0.6]
        if not b:
            rest = [x for x in high if x not in a]
            b = [rng.choice(rest)] if rest else []
        if a and b:
            return {"poset": p.to_json(), "A": sorted(a), "B": sorted(b)}


def _check_ab(inst: dict, bound: int) -> Detail:
    p = poset_from_json(inst["poset"])
    a, b = [int(x) for x in inst["A"]], [int(x) for x in inst["B"]]
    if any(not p.leq(x, y) for x in a for y in b) or set(a) & set(b):
        return {"error": "A is not below B"}
    pa, _ = induced(p, a)
    pb, belems = induced(p, b)
    la = rank_all(pa).length
    rb, rp = rank_all(pb), rank_all(p)
    bad = [belems[i] for i in range(pb.n) if la + rb[i] > rp[belems[i]]]
    agg = la + rb.length <= max(rp[x] for x in b)
    if not bad and agg:
        return None
    return {"len_A": la, "elements": bad, "aggregate_holds": agg}


_suite("ab-lemma", 7)((_gen_ab, _check_ab))


def _gen_pwoexpr(rng: random.Random, bound: int) -> dict:
    return {"expr": pwoexpr_to_json(gen.pwoexpr(rng, bound))}


def _check_pwoexpr(inst: dict, bound: int) -> Detail:
    e = pwoexpr_from_json(inst["expr"])
    sym = symbolic_length(e)
    flat = flatten(e)
    brute = rank_all(flat).length if flat.n else 0
    if sym == Ordinal.of(brute):
        return None
    return {"symbolic": str(sym), "brute_force": brute}


_suite("symbolic-length", 60)((_gen_pwoexpr, _check_pwoexpr))


# ------------------------------------------------------------------- modules


def _gen_ses(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    split_ = rng.random() < 0.3
    incl, proj = gen.short_exact(rng, R, split=split_)
    return {"context": name, "split_generated": split_, "incl": incl.to_json(), "proj": proj.to_json()}


def _load_ses(inst: dict):
    incl, proj = map_from_json(inst["incl"]), map_from_json(inst["proj"])
    return incl, proj


def _check_semadd(inst: dict, bound: int) -> Detail:
    incl, proj = _load_ses(inst)
    try:
        rep = verify_semi_additivity(incl, proj)
    except MapError as exc:
        return {"error": str(exc)}
    if rep.ok and (rep.split or not inst.get("split_generated")):
        return None
    return rep.to_json()


_suite("semi-additivity", 5)((_gen_ses, _check_semadd))


def _gen_finlen(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    f = rng.randint(0, 2)
    tors = [gen._nonunit(rng, R) for _ in range(rng.randint(0, 3))]
    base = direct_sum(free_module(R, f), module_from_factors(R, tors))
    m, u, _ = gen.disguise(rng, base)
    s = rng.randint(0, 3)
    # images drawn from the torsion summand only, so N has finite length
    a0 = RingMatrix.from_rows(
        R, [[R.zero] * s for _ in range(f)]
        + [[gen.element(rng, R, 2) for _ in range(s)] for _ in tors], s)
    a = u @ a0
    incl, proj = gen.sequence_from(m, a)
    return {"context": name, "incl": incl.to_json(), "proj": proj.to_json()}


def _check_finlen(inst: dict, bound: int) -> Detail:
    incl, proj = _load_ses(inst)
    n, m, q = incl.source, incl.target, proj.target
    if not n.is_finite():
        return {"error": "submodule is not of finite length"}
    ln, lm, lq = length(n), length(m), length(q)
    if lm == ord_sum(lq, ln):
        return None
    return {"len_n": str(ln), "len_m": str(lm), "len_q": str(lq)}


_suite("finlen-add")((_gen_finlen, _check_finlen))


def _gen_regid(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    x = R.zero
    while x == R.zero:
        x = gen.element(rng, R)
    y = gen.element(rng, R) if rng.random() < 0.9 else R.zero
    return {"ring": R.to_json(), "x": R.element_to_json(x), "y": R.element_to_json(y)}


def _check_regid(inst: dict, bound: int) -> Detail:
    R = ring_from_json(inst["ring"])
    x, y = R.element_from_json(inst["x"]), R.element_from_json(inst["y"])
    rx, ry, rxy = (length(cyclic_module(R, v)) for v in (x, y, x * y))
    lhs = ord_sum(rx, ry)
    out = {}
    if not lhs <= rxy:
        out["inequality"] = [str(lhs), str(rxy)]
    if not rx.degree < 1 == length(free_module(R, 1)).degree:
        out["degree_drop"] = rx.degree
    if y != R.zero and R.factor_count(x * y) != R.factor_count(x) + R.factor_count(y):
        out["additivity"] = [R.factor_count(x), R.factor_count(y), R.factor_count(x * y)]
    return out or None


_suite("regid")((_gen_regid, _check_regid))


def _gen_module(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    m = gen.module(rng, R, bound, bound)
    return {"context": name, "module": m.to_json(), "disguise_seed": rng.randrange(1 << 30)}


def _rank(a: RingMatrix) -> int:
    return column_echelon(a)[1] if a.cols and a.rows else 0


def _saturated(m: FgModule) -> bool:
    """No torsion: the relation lattice equals its saturation."""
    rel = m.relations
    if rel.cols == 0:
        return True
    left = kernel_basis(rel.transpose())
    if left.cols == 0:
        sat = RingMatrix.identity(m.ring, m.generators)
    else:
        sat = kernel_basis(left.transpose())
    return _spans_contained(sat, rel)


def _check_dim(inst: dict, bound: int) -> Detail:
    m = module_from_json(inst["module"])
    m2 = gen.disguise(random.Random(inst["disguise_seed"]), m)[0]
    out = {}
    if dimension(m) != length(m).degree:
        out["dimension"] = [dimension(m), length(m).degree]
    if (canonical_form(m2), length(m2), dimension(m2)) != (canonical_form(m), length(m), dimension(m)):
        out["presentation"] = [str(length(m)), str(length(m2))]
    free = m.generators - _rank(m.relations)
    want_dim = 1 if free else (0 if not m.is_zero() else -1)
    if dimension(m) != want_dim:
        out["rank_oracle"] = [dimension(m), want_dim]
    return out or None


_suite("dim-degree", 5)((_gen_module, _check_dim))


def _check_genlen(inst: dict, bound: int) -> Detail:
    m = module_from_json(inst["module"])
    d, g = dimension(m), generic_length(m)
    plus = split(length(m), d)[0] if d >= 0 else Ordinal.of(0)
    want = omega_power(d, g) if d >= 0 else Ordinal.of(0)
    out = {}
    if plus != want:
        out["split"] = [str(plus), g, d]
    free = m.generators - _rank(m.relations)
    if d == 1 and g != free:
        out["rank_oracle"] = [g, free]
    if d == 0 and Ordinal.of(g) != length(m):
        out["finite"] = [g, str(length(m))]
    return out or None


_suite("genlen", 5)((_gen_module, _check_genlen))


def _gen_unmixed(rng: random.Random, bound: int) -> dict:
    inst = _gen_module(rng, bound)
    incl, proj = gen.short_exact(rng, gen.CONTEXTS[inst["context"]], split=False)
    inst.update({"incl": incl.to_json(), "proj": proj.to_json()})
    return inst


def _check_unmixed(inst: dict, bound: int) -> Detail:
    m = module_from_json(inst["module"])
    out = {}
    mono = m.is_zero() or length(m).is_monomial()
    free = m.generators - _rank(m.relations)
    oracle = m.is_zero() or free == 0 or _saturated(m)
    if not (is_unmixed(m) == mono == oracle):
        out["unmixed"] = {"is_unmixed": is_unmixed(m), "monomial": mono, "oracle": oracle}
    incl, proj = _load_ses(inst)
    n, mm, q = incl.source, incl.target, proj.target
    if is_unmixed(q) and not q.is_zero() and dimension(q) == dimension(mm):
        if length(mm) != shuffle_sum(length(q), length(n)):
            out["sequence"] = [str(length(n)), str(length(mm)), str(length(q))]
    return out or None


_suite("unmixed", 5)((_gen_unmixed, _check_unmixed))


# ------------------------------------------------------------ finite modules


@lru_cache(maxsize=None)
def _types(ring_key: str, bound: int) -> tuple[FgModule, ...]:
    return tuple(finite_modules(gen.CONTEXTS[ring_key], bound))


def _random_finite(rng: random.Random, name: str, bound: int, nonzero: bool = False) -> FgModule:
    types = [m for m in _types(name, bound) if not (nonzero and m.is_zero())]
    return gen.disguise(rng, rng.choice(types))[0]


def _gen_finite(rng: random.Random, bound: int) -> dict:
    name, _ = _ctx(rng)
    return {"context": name, "module": _random_finite(rng, name, bound).to_json()}


def _check_chain(inst: dict, bound: int) -> Detail:
    m = module_from_json(inst["module"])
    fm = FiniteModule(m, max(bound, 64))
    lat = fm.lattice
    n_len = int(length(m))
    # a random maximal chain, grown one cover at a time from the zero module
    rng = random.Random(str(inst["module"]))
    masks = lat.masks
    cur, steps = 1, 0
    full = (1 << fm.size) - 1
    while cur != full:
        above = sorted((x for x in masks if x != cur and x & cur == cur), key=int.bit_count)
        covers: list[int] = []
        for x in above:
            if not any(x & y == y for y in covers):
                covers.append(x)
        cur = rng.choice(covers)
        steps += 1
    mcl = max_chain_length(lat.poset)
    if mcl == n_len == steps:
        return None
    return {"length": n_len, "max_chain_length": mcl, "random_maximal_chain": steps}


_suite("chain-length", 64)((_gen_finite, _check_chain))


def _lattice_failures(m: FgModule, bound: int = 64) -> Detail:
    fm = FiniteModule(m, bound)
    lat = fm.lattice
    n_len = int(length(m))
    out = {}
    if rank_all(lat.poset).length != n_len or max_chain_length(lat.poset) != n_len:
        out["length"] = [n_len, rank_all(lat.poset).length, max_chain_length(lat.poset)]
    bad = []
    for k, mask in enumerate(lat.masks):
        q = quotient_module(fm, mask)
        sub = submodule_presentation(fm, lat.generators[k])
        n_k = FgModule(m.ring, sub.cols, _preimage_basis(sub, m.relations, sub.cols))
        if lat.rank[k] != int(length(q)) or lat.height[k] != int(length(n_k)):
            bad.append([k, lat.rank[k], str(length(q)), lat.height[k], str(length(n_k))])
    if bad:
        out["quotients"] = bad[:10]
    return out or None


def _check_lattice(inst: dict, bound: int) -> Detail:
    return _lattice_failures(module_from_json(inst["module"]), max(bound, 64))


_suite("lattice-oracle", 64)((_gen_finite, _check_lattice))


def _gen_finite_pair(rng: random.Random, bound: int, related: str) -> dict:
    name, R = _ctx(rng)
    m = _random_finite(rng, name, bound)
    r = rng.random()
    if related == "iso" and r < 0.5:
        n = gen.disguise(rng, m)[0]
    elif related == "sum" and r < 0.6:
        rest = [c for c in _types(name, bound) if c.order() * m.order() <= bound]
        n = gen.disguise(rng, direct_sum(m, rng.choice(rest)))[0] if rest else gen.disguise(rng, m)[0]
    elif related == "length" and r < 0.7:
        same = [c for c in _types(name, bound) if length(c) == length(m)]
        n = gen.disguise(rng, rng.choice(same))[0]
    else:
        n = _random_finite(rng, name, bound)
    return {"context": name, "m": m.to_json(), "n": n.to_json()}


def _pair(inst: dict, bound: int) -> tuple[FgModule, FgModule, FiniteModule, FiniteModule]:
    m, n = module_from_json(inst["m"]), module_from_json(inst["n"])
    return m, n, FiniteModule(m, max(bound, 64)), FiniteModule(n, max(bound, 64))


def _check_vasc(inst: dict, bound: int) -> Detail:
    m, n, fm, fn = _pair(inst, bound)
    out = {}
    endo = summarize_homs(fm, fm)
    if endo.surjective_not_injective is not None:
        out["endomorphism"] = list(endo.surjective_not_injective)
    if length(m) == length(n):
        s = summarize_homs(fm, fn)
        if s.surjective_not_injective is not None:
            out["equal_length"] = list(s.surjective_not_injective)
    return out or None


_suite("vasconcelos", 16)((lambda rng, b: _gen_finite_pair(rng, b, "length"), _check_vasc))


def _check_subim(inst: dict, bound: int) -> Detail:
    m, n, fm, fn = _pair(inst, bound)
    s = summarize_homs(fm, fn)
    if s.has_surjective and s.has_injective and canonical_form(m) != canonical_form(n):
        return {"m": str(m), "n": str(n)}
    return None


_suite("subim", 16)((lambda rng, b: _gen_finite_pair(rng, b, "iso"), _check_subim))


def _miyata_failures(m: FgModule, n: FgModule, fm: FiniteModule, fn: FiniteModule,
                     summary=None, cache: dict | None = None) -> list:
    s = summary or summarize_homs(fm, fn)
    cache = {} if cache is None else cache
    target = canonical_form(n)
    bad = []
    for mask, kmax in s.image_max_kernel.items():
        key = (id(fn), mask)
        if key not in cache:
            cache[key] = quotient_module(fn, mask)
        skey = (id(m), key)
        if skey not in cache:
            cache[skey] = canonical_form(direct_sum(m, cache[key]))
        if cache[skey] != target:
            continue
        if kmax != 0 or not has_complement(fn, mask):
            bad.append({"image": mask, "max_kernel_length": kmax})
    return bad


def _check_miyata(inst: dict, bound: int) -> Detail:
    m, n, fm, fn = _pair(inst, bound)
    bad = _miyata_failures(m, n, fm, fn)
    return {"images": bad[:10]} if bad else None


_suite("miyata", 16)((lambda rng, b: _gen_finite_pair(rng, b, "sum"), _check_miyata))


def _check_noniso(inst: dict, bound: int) -> Detail:
    m, n, fm, fn = _pair(inst, bound)
    s = summarize_homs(fm, fn)
    zero = (s.min_kernel, s.min_cokernel) == (0, 0)
    iso = canonical_form(m) == canonical_form(n)
    if zero == iso:
        return None
    return {"kappa": s.min_kernel, "gamma": s.min_cokernel, "isomorphic": iso}


_suite("noniso", 16)((lambda rng, b: _gen_finite_pair(rng, b, "iso"), _check_noniso))


# ------------------------------------------------------------------ homology


def _gen_exact(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    c = gen.complex_(rng, R, rng.randint(1, 4), free=rng.random() < 0.2)
    return {"context": name, "complex": c.to_json()}


def _check_lowhi(inst: dict, bound: int) -> Detail:
    c = ModuleComplex.from_json(inst["complex"])
    if first_failure(c) is not None:
        return {"error": f"not a complex at {first_failure(c)}"}
    nonzero = [i for i in range(c.t + 1) if not homology_at(c, i).is_zero()]
    if nonzero:
        return {"error": "complex is not exact", "nonzero_homology": nonzero}
    lo, hi = lower_length(c), upper_length(c)
    return None if lo <= hi else {"lowlen": str(lo), "hilen": str(hi)}


_suite("lowhi")((_gen_exact, _check_lowhi))


def _gen_acycl(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    e = rng.choice([-1, 0])
    while True:
        c = gen.complex_(rng, R, rng.randint(1, 4), exact_left=rng.random() < 0.5,
                         torsion_homology=e == 0, free=rng.random() < 0.2)
        if acyclicity_check(c, e).hypothesis:
            return {"context": name, "e": e, "complex": c.to_json()}


def _check_acycl(inst: dict, bound: int) -> Detail:
    c = ModuleComplex.from_json(inst["complex"])
    e = int(inst["e"])
    if first_failure(c) is not None:
        return {"error": f"not a complex at {first_failure(c)}"}
    rep = acyclicity_check(c, e)
    out = {}
    if not rep.ok:
        out["report"] = rep.to_json()
    # the top homology is the kernel of the last map
    if c.t:
        ker = map_parts(make_map(c.modules[c.t], c.modules[c.t - 1], c.maps[c.t - 1])).kernel
        top = homology_at(c, c.t)
        if canonical_form(ker) != canonical_form(top):
            out["top_homology"] = [str(ker), str(top)]
    # zero modules added below index 0 only shift the indices
    shifted = acyclicity_check(c.padded(right=2), e)
    if (shifted.verdict, shifted.homology_dims[2:]) != (rep.verdict, rep.homology_dims):
        out["padding"] = [rep.verdict, shifted.verdict]
    return out or None


_suite("acyclicity")((_gen_acycl, _check_acycl))


def _gen_acycunm(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    while True:
        c = gen.complex_(rng, R, rng.randint(1, 4), free=True, exact_left=rng.random() < 0.5)
        if all(m.generators for m in c.modules):
            return {"context": name, "complex": c.to_json()}


def _check_acycunm(inst: dict, bound: int) -> Detail:
    c = ModuleComplex.from_json(inst["complex"])
    if first_failure(c) is not None:
        return {"error": f"not a complex at {first_failure(c)}"}
    if any(m.relations.cols for m in c.modules) or any(not homology_at(c, i).is_zero() for i in range(c.t)):
        return {"error": "not a free complex exact below the top"}
    chi = generic_euler_char(c)
    top = homology_at(c, c.t)
    g = generic_length(top)
    rank_top = c.modules[c.t].generators - (_rank(c.maps[c.t - 1]) if c.t else 0)
    out = {}
    if g != (-1) ** c.t * chi or g != rank_top:
        out["generic_length"] = {"H_t": g, "chi": chi, "rank": rank_top}
    if top.is_zero() != (chi == 0):
        out["injectivity"] = {"H_t_zero": top.is_zero(), "chi": chi}
    return out or None


_suite("acycunm")((_gen_acycunm, _check_acycunm))


def _gen_period(rng: random.Random, bound: int) -> dict:
    name, R = _ctx(rng)
    return {"context": name, "complex": gen.period_complex(rng, R).to_json()}


def _check_period(inst: dict, bound: int) -> Detail:
    c = ModuleComplex.from_json(inst["complex"])
    if first_failure(c) is not None or c.t != 3:
        return {"error": "not a four-term complex"}
    n, m = c.modules[0], c.modules[1]
    out = {}
    if length(c.modules[3]) != length(n) or length(c.modules[2]) != length(m):
        out["error"] = "outer or inner modules differ in length"
    nu, mu = length(n), length(m)
    if lower_length(c) != ord_sum(nu, mu) or upper_length(c) != shuffle_sum(mu, nu):
        out["lengths"] = [str(lower_length(c)), str(upper_length(c))]
    rep = acyclicity_check(c, -1)
    if rep.hypothesis and is_unmixed(n) and dimension(n) == dimension(m):
        if rep.verdict != "acyclic":
            out["report"] = rep.to_json()
    elif not rep.hypothesis:
        out["error"] = "not exact below the top"
    return out or None


_suite("period")((_gen_period, _check_period))


# -------------------------------------------------------------------- driver


def _run_check(suite: Suite, inst: dict, bound: int) -> Detail:
    try:
        return suite.check(inst, bound)
    except Exception as exc:  # a crash is a counterexample too
        return {"exception": f"{type(exc).__name__}: {exc}"}


def run_suite(name: str, seed: int, trials: int, bound: int | None = None,
              context: str | None = None) -> dict:
    """Run ``trials`` trials; returns the report (deterministic) with the
    elapsed time under ``elapsed_ms``.  ``context`` pins the ring for suites
    that draw one."""
    suite = SUITES[name]
    b = suite.bound if bound is None else bound
    if context is not None and context not in gen.CONTEXTS:
        raise ValueError(f"unknown context {context!r}")
    start = time.perf_counter()
    failures = []
    token = _FIXED_CONTEXT.set(context)
    try:
        instances = [suite.generate(trial_rng(seed, t), b) for t in range(trials)]
    finally:
        _FIXED_CONTEXT.reset(token)
    for t, inst in enumerate(instances):
        detail = _run_check(suite, inst, b)
        if detail is not None:
            failures.append({"suite": name, "seed": seed, "trial": t, "bound": b,
                             "context": context, "instance": inst, "detail": detail})
    failures.sort(key=lambda r: r["trial"])
    report = {
        "suite": name,
        "seed": seed,
        "trials": trials,
        "bound": b,
        "failures": failures,
        "elapsed_ms": round((time.perf_counter() - start) * 1000),
    }
    if context is not None:
        report["context"] = context
    return report


def replay(record: dict) -> Detail:
    """Re-check a failure record; returns the detail if it still fails."""
    suite = SUITES[record["suite"]]
    b = int(record.get("bound", suite.bound))
    inst = record.get("instance")
    if inst is None:
        token = _FIXED_CONTEXT.set(record.get("context"))
        try:
            inst = suite.generate(trial_rng(int(record["seed"]), int(record["trial"])), b)
        finally:
            _FIXED_CONTEXT.reset(token)
    return _run_check(suite, inst, b)


# ----------------------------------------------------------- exhaustive sweeps


def sweep_lattices(ring: Ring, max_order: int) -> list[dict]:
    """Lattice checks on one module of every isomorphism type up to ``max_order``."""
    out = []
    for m in finite_modules(ring, max_order):
        d = _lattice_failures(m, max(max_order, 1))
        if d is not None:
            out.append({"module": str(m), "detail": d})
    return out


def sweep_homs(ring: Ring, max_order: int) -> list[dict]:
    """Scan Hom(M, N) for every ordered pair of isomorphism types up to ``max_order``."""
    mods = finite_modules(ring, max_order)
    fms = [FiniteModule(m, max_order) for m in mods]
    canon = [canonical_form(m) for m in mods]
    lens = [length(m) for m in mods]
    cache: dict = {}
    out = []
    for i, (m, fm) in enumerate(zip(mods, fms)):
        for j, (n, fn) in enumerate(zip(mods, fms)):
            s = summarize_homs(fm, fn)
            iso = canon[i] == canon[j]
            problems = {}
            if (i == j or lens[i] == lens[j]) and s.surjective_not_injective is not None:
                problems["surjective_not_injective"] = list(s.surjective_not_injective)
            if s.has_surjective and s.has_injective and not iso:
                problems["subim"] = True
            if ((s.min_kernel, s.min_cokernel) == (0, 0)) != iso:
                problems["noniso"] = [s.min_kernel, s.min_cokernel]
            bad = _miyata_failures(m, n, fm, fn, s, cache)
            if bad:
                problems["miyata"] = bad[:5]
            if problems:
                out.append({"m": str(m), "n": str(n), "detail": problems})
    return out

"""Constructive derivations: canonical-form proofs and metric lifts.

Everything here builds Derivation trees that the deduction checker
accepts, with exact epsilons.

Two rewriting engines produce the eps-0 glue:

* the mixture engine works on oplus-free terms viewed as left folds
  over weighted generator lists, with swap and merge moves justified by
  A_p, C_p, I_p;
* the comb engine works on left combs of oplus leaves, with swap,
  merge, flatten, and absorption moves justified by A, C, I, D plus the
  derived pairwise convexity law.

On top of these, derive_kantorovich mirrors an optimal coupling as a
parallel fold of hypothesis steps under the p+ congruence rule, and
derive_hk pads both sides with nearest-base witnesses, lifts each pair
to the Hausdorff value with Max, and joins them under the oplus
congruence rule.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from .convex import (
    ConvexSet,
    in_hull,
    monad_unit,
    nearest_point,
    oplus as set_oplus,
    plus_p as set_plus_p,
)
from .core import Dist, FiniteMetricSpace, convex_combine
from .deduction import Derivation, QuantEquation, _match_axiom, metric_hypotheses
from .errors import SpaceMismatch
from .lifting import hk_distance
from .terms import Gen, Oplus, PlusP, Term, _fold_items, dist_term, nu
from .transport import kantorovich

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------- builders

def refl(t: Term) -> Derivation:
    return Derivation("Refl", QuantEquation(t, t, ZERO))


def symm(d: Derivation) -> Derivation:
    return Derivation("Symm", d.conclusion.flip(), (d,))


def triang(d1: Derivation, d2: Derivation) -> Derivation:
    c1, c2 = d1.conclusion, d2.conclusion
    assert c1.right == c2.left
    eq = QuantEquation(c1.left, c2.right, min(ONE, c1.eps + c2.eps))
    return Derivation("Triang", eq, (d1, d2))


def emax(d: Derivation, eps: Fraction) -> Derivation:
    assert eps >= d.conclusion.eps
    eq = QuantEquation(d.conclusion.left, d.conclusion.right, eps)
    return Derivation("Max", eq, (d,))


def congr_oplus(d1: Derivation, d2: Derivation) -> Derivation:
    c1, c2 = d1.conclusion, d2.conclusion
    eq = QuantEquation(
        Oplus(c1.left, c2.left), Oplus(c1.right, c2.right), max(c1.eps, c2.eps)
    )
    return Derivation("NExpOplus", eq, (d1, d2))


def congr_plusp(p: Fraction, d1: Derivation, d2: Derivation) -> Derivation:
    c1, c2 = d1.conclusion, d2.conclusion
    eq = QuantEquation(
        PlusP(p, c1.left, c2.left),
        PlusP(p, c1.right, c2.right),
        p * c1.eps + (1 - p) * c2.eps,
    )
    return Derivation("NExpPlusP", eq, (d1, d2))


def assum(eq: QuantEquation) -> Derivation:
    return Derivation("Assum", eq)


def ax(name: str, left: Term, right: Term) -> Derivation:
    assert _match_axiom(name, left, right) or _match_axiom(name, right, left)
    return Derivation("AxiomCS", QuantEquation(left, right, ZERO), axiom=name)


def compose(a: Derivation | None, b: Derivation | None) -> Derivation | None:
    if a is None:
        return b
    if b is None:
        return a
    return triang(a, b)


# ------------------------------------------------- mixture engine (p+ only)

def _scale(items: list[tuple[str, Fraction]], f: Fraction) -> list[tuple[str, Fraction]]:
    return [(x, w * f) for x, w in items]


def _join_mix(p, items_a, items_b):
    """PlusP(p, fold(A), fold(B)) = fold(p A ++ (1-p) B), at eps 0."""
    out = _scale(items_a, p) + _scale(items_b, 1 - p)
    fa = _fold_items(items_a)
    if len(items_b) == 1:
        return out, refl(_fold_items(out))
    y, v = items_b[-1]
    beta = 1 - v
    prefix_b = _scale(items_b[:-1], 1 / beta)
    phat = p + beta - p * beta
    q = p / phat
    here = PlusP(p, fa, _fold_items(items_b))
    comb = PlusP(phat, PlusP(q, fa, _fold_items(prefix_b)), Gen(y))
    n1 = ax("A_p", here, comb)
    inner_items, rec = _join_mix(q, items_a, prefix_b)
    n2 = congr_plusp(phat, rec, refl(Gen(y)))
    return out, triang(n1, n2)


def _flatten_mix(t: Term):
    """(items, proof) with proof: t = fold(items), at eps 0."""
    if isinstance(t, Gen):
        return [(t.label, ONE)], refl(t)
    assert isinstance(t, PlusP)
    items_a, da = _flatten_mix(t.left)
    items_b, db = _flatten_mix(t.right)
    d0 = congr_plusp(t.p, da, db)
    out, dj = _join_mix(t.p, items_a, items_b)
    return out, triang(d0, dj)


def _mix_swap(items, i) -> Derivation:
    """fold(items) = fold(items with i, i+1 swapped), at eps 0."""
    k = len(items)
    if i + 1 < k - 1:
        y, v = items[-1]
        prefix = _scale(items[:-1], 1 / (1 - v))
        return congr_plusp(1 - v, _mix_swap(prefix, i), refl(Gen(y)))
    (a, u), (b, v) = items[-2], items[-1]
    swapped = items[:-2] + [(b, v), (a, u)]
    if k == 2:
        return ax("C_p", _fold_items(items), _fold_items(swapped))
    w = 1 - u - v
    x = _fold_items(_scale(items[:-2], 1 / w))
    mid1 = PlusP(w, x, PlusP(u / (u + v), Gen(a), Gen(b)))
    mid2 = PlusP(w, x, PlusP(v / (u + v), Gen(b), Gen(a)))
    n1 = ax("A_p", _fold_items(items), mid1)
    n2 = congr_plusp(
        w,
        refl(x),
        ax("C_p", PlusP(u / (u + v), Gen(a), Gen(b)), PlusP(v / (u + v), Gen(b), Gen(a))),
    )
    n3 = ax("A_p", mid2, _fold_items(swapped))
    return triang(triang(n1, n2), n3)


def _mix_merge(items, i) -> Derivation:
    """fold(items) = fold(items with equal-label i, i+1 merged), eps 0."""
    k = len(items)
    if i + 1 < k - 1:
        y, v = items[-1]
        prefix = _scale(items[:-1], 1 / (1 - v))
        return congr_plusp(1 - v, _mix_merge(prefix, i), refl(Gen(y)))
    (a, u), (b, v) = items[-2], items[-1]
    assert a == b
    if k == 2:
        return ax("I_p", PlusP(u, Gen(a), Gen(a)), Gen(a))
    w = 1 - u - v
    x = _fold_items(_scale(items[:-2], 1 / w))
    mid = PlusP(w, x, PlusP(u / (u + v), Gen(a), Gen(a)))
    n1 = ax("A_p", _fold_items(items), mid)
    n2 = congr_plusp(
        w, refl(x), ax("I_p", PlusP(u / (u + v), Gen(a), Gen(a)), Gen(a))
    )
    return triang(n1, n2)


def _sort_mix(space: FiniteMetricSpace, items):
    """Bubble to canonical order, merging duplicates; (final, proof|None)."""
    items = list(items)
    proof = None
    while True:
        move = None
        for i in range(len(items) - 1):
            if items[i][0] == items[i + 1][0]:
                move = _mix_merge(items, i)
                items[i] = (items[i][0], items[i][1] + items[i + 1][1])
                del items[i + 1]
                break
            if space.index(items[i][0]) > space.index(items[i + 1][0]):
                move = _mix_swap(items, i)
                items[i], items[i + 1] = items[i + 1], items[i]
                break
        if move is None:
            return items, proof
        proof = compose(proof, move)


def prove_dist(space: FiniteMetricSpace, t: Term) -> Derivation:
    """t = dist_term(value of t), at eps 0, for oplus-free t."""
    items, d0 = _flatten_mix(t)
    final, d1 = _sort_mix(space, items)
    out = compose(d0, d1)
    assert out is not None
    return out


# ---------------------------------------------------- comb engine (oplus)

def oc_term(leaves: list[Term]) -> Term:
    t = leaves[0]
    for leaf in leaves[1:]:
        t = Oplus(t, leaf)
    return t


def _oc_swap(leaves, i) -> Derivation:
    k = len(leaves)
    if i + 1 < k - 1:
        return congr_oplus(_oc_swap(leaves[:-1], i), refl(leaves[-1]))
    a, b = leaves[-2], leaves[-1]
    if k == 2:
        return ax("C", Oplus(a, b), Oplus(b, a))
    x = oc_term(leaves[:-2])
    n1 = ax("A", Oplus(Oplus(x, a), b), Oplus(x, Oplus(a, b)))
    n2 = congr_oplus(refl(x), ax("C", Oplus(a, b), Oplus(b, a)))
    n3 = ax("A", Oplus(x, Oplus(b, a)), Oplus(Oplus(x, b), a))
    return triang(triang(n1, n2), n3)


def _oc_merge(leaves, i) -> Derivation:
    k = len(leaves)
    if i + 1 < k - 1:
        return congr_oplus(_oc_merge(leaves[:-1], i), refl(leaves[-1]))
    a, b = leaves[-2], leaves[-1]
    assert a == b
    if k == 2:
        return ax("I", Oplus(a, a), a)
    x = oc_term(leaves[:-2])
    n1 = ax("A", Oplus(Oplus(x, a), a), Oplus(x, Oplus(a, a)))
    n2 = congr_oplus(refl(x), ax("I", Oplus(a, a), a))
    return triang(n1, n2)


def _ojoin(left: list[Term], right: list[Term]) -> Derivation:
    """Oplus(oc(L), oc(R)) = oc(L ++ R), at eps 0."""
    if len(right) == 1:
        return refl(oc_term(left + right))
    last = right[-1]
    n1 = ax(
        "A",
        Oplus(oc_term(left), oc_term(right)),
        Oplus(Oplus(oc_term(left), oc_term(right[:-1])), last),
    )
    n2 = congr_oplus(_ojoin(left, right[:-1]), refl(last))
    return triang(n1, n2)


def _unflatten_head(head: Term, rest: list[Term]) -> Derivation:
    """oc([head] ++ rest) = Oplus(head, oc(rest)), at eps 0."""
    if len(rest) == 1:
        return refl(Oplus(head, rest[0]))
    last = rest[-1]
    n1 = congr_oplus(_unflatten_head(head, rest[:-1]), refl(last))
    n2 = ax(
        "A",
        Oplus(Oplus(head, oc_term(rest[:-1])), last),
        Oplus(head, oc_term(rest)),
    )
    return triang(n1, n2)


def _comb_congr(leaves: list[Term], j: int, pf: Derivation) -> Derivation:
    """Apply pf at leaf j of the comb; pf rewrites that leaf at eps 0."""
    if len(leaves) == 1:
        return pf
    if j == len(leaves) - 1:
        return congr_oplus(refl(oc_term(leaves[:-1])), pf)
    return congr_oplus(_comb_congr(leaves[:-1], j, pf), refl(leaves[-1]))


def _bubble(leaves: list[Term], src: int, dst: int):
    """Adjacent swaps moving leaf src to dst; returns (new_leaves, proof)."""
    leaves = list(leaves)
    proof = None
    while src > dst:
        proof = compose(proof, _oc_swap(leaves, src - 1))
        leaves[src - 1], leaves[src] = leaves[src], leaves[src - 1]
        src -= 1
    while src < dst:
        proof = compose(proof, _oc_swap(leaves, src))
        leaves[src], leaves[src + 1] = leaves[src + 1], leaves[src]
        src += 1
    return leaves, proof


def _dup_front(leaves: list[Term], i: int) -> Derivation:
    """oc(leaves) = Oplus(leaves[i], oc(leaves)), at eps 0."""
    b = leaves[i]
    if len(leaves) == 1:
        return symm(ax("I", Oplus(b, b), b))
    fronted, d1 = _bubble(leaves, i, 0)
    doubled = [b] + fronted
    d2 = symm(_oc_merge(doubled, 0))
    d3 = _unflatten_head(b, fronted)
    back, d4 = _bubble(fronted, 0, i)
    assert back == list(leaves)
    d5 = congr_oplus(refl(b), d4) if d4 is not None else None
    out = compose(compose(compose(d1, d2), d3), d5)
    assert out is not None
    return out


def _pw_single(x: Term, y: Term, p: Fraction) -> Derivation:
    """Oplus(x, y) = Oplus(Oplus(x, y), PlusP(p, x, y)), at eps 0."""
    e = Oplus(x, y)
    m = PlusP(p, x, y)
    mq = PlusP(1 - p, x, y)

    def star() -> Derivation:
        # e = ((e + m) + mq) as a comb [x, y, m, mq]
        d1 = symm(ax("I_p", PlusP(p, e, e), e))
        d2 = ax("D", PlusP(p, e, e), Oplus(PlusP(p, e, x), PlusP(p, e, y)))
        left_box = triang(
            _d_left(x, y, x, p),
            congr_oplus(ax("I_p", PlusP(p, x, x), x), refl(PlusP(p, y, x))),
        )
        right_box = triang(
            _d_left(x, y, y, p),
            congr_oplus(refl(PlusP(p, x, y)), ax("I_p", PlusP(p, y, y), y)),
        )
        d3 = congr_oplus(left_box, right_box)
        # now at Oplus(Oplus(x, y +_p x), Oplus(m, y)); rewrite y +_p x -> mq
        d4 = congr_oplus(
            congr_oplus(refl(x), ax("C_p", PlusP(p, y, x), mq)),
            refl(Oplus(m, y)),
        )
        # flatten [[x, mq], [m, y]] and sort to [x, y, m, mq]
        d5 = _ojoin([x, mq], [m, y])
        leaves = [x, mq, m, y]
        d6 = _oc_swap(leaves, 2)
        leaves = [x, mq, y, m]
        d7 = _oc_swap(leaves, 1)
        leaves = [x, y, mq, m]
        d8 = _oc_swap(leaves, 2)
        chain = triang(triang(triang(d1, d2), d3), d4)
        return triang(triang(triang(triang(chain, d5), d6), d7), d8)

    st = star()
    # e + m = (((e + m) + mq) + m) = ((e + m) + m + mq) = (e + m) + mq = e
    d1 = congr_oplus(st, refl(m))
    leaves = [x, y, m, mq, m]
    d2 = _oc_swap(leaves, 3)
    leaves = [x, y, m, m, mq]
    d3 = _oc_merge(leaves, 2)
    d4 = symm(st)
    absorb = triang(triang(triang(d1, d2), d3), d4)
    return symm(absorb)


def _d_left(v: Term, w: Term, u: Term, p: Fraction) -> Derivation:
    """(v oplus w) p+ u = (v p+ u) oplus (w p+ u), at eps 0."""
    n1 = ax("C_p", PlusP(p, Oplus(v, w), u), PlusP(1 - p, u, Oplus(v, w)))
    n2 = ax(
        "D",
        PlusP(1 - p, u, Oplus(v, w)),
        Oplus(PlusP(1 - p, u, v), PlusP(1 - p, u, w)),
    )
    n3 = congr_oplus(
        ax("C_p", PlusP(1 - p, u, v), PlusP(p, v, u)),
        ax("C_p", PlusP(1 - p, u, w), PlusP(p, w, u)),
    )
    return triang(triang(n1, n2), n3)


def _oc_swap_composite(x: Term, y: Term, r: Term) -> Derivation:
    """Oplus(x, Oplus(y, r)) = Oplus(y, Oplus(x, r)), at eps 0."""
    n1 = ax("A", Oplus(x, Oplus(y, r)), Oplus(Oplus(x, y), r))
    n2 = congr_oplus(ax("C", Oplus(x, y), Oplus(y, x)), refl(r))
    n3 = ax("A", Oplus(Oplus(y, x), r), Oplus(y, Oplus(x, r)))
    return triang(triang(n1, n2), n3)


def _absorb(
    space: FiniteMetricSpace,
    leaves: list[Term],
    values: list[Dist],
    target_term: Term,
    target_value: Dist,
    cert: list[Fraction],
) -> Derivation:
    """oc(leaves) = Oplus(target_term, oc(leaves)), at eps 0.

    cert holds hull coefficients of target_value over values. Induction
    on the support size of cert: a single-point certificate duplicates
    the matching leaf; otherwise the target splits as a two-point
    mixture of its first certificate leaf and the renormalized rest,
    which the pairwise convexity law absorbs.
    """
    support = [i for i, lam in enumerate(cert) if lam > 0]
    assert support
    if len(support) == 1:
        assert leaves[support[0]] == target_term
        return _dup_front(leaves, support[0])
    i1 = support[0]
    lam1 = cert[i1]
    a1 = leaves[i1]
    rest_cert = [ZERO] * len(cert)
    for i in support[1:]:
        rest_cert[i] = cert[i] / (1 - lam1)
    rest_value = convex_combine(
        [(rest_cert[i], values[i]) for i in support[1:]]
    )
    bprime = dist_term(rest_value)
    c = oc_term(leaves)
    m = PlusP(1 - lam1, bprime, a1)
    pd = prove_dist(space, m)
    assert pd.conclusion.right == target_term

    d1 = _absorb(space, leaves, values, bprime, rest_value, rest_cert)
    d2 = congr_oplus(refl(bprime), _dup_front(leaves, i1))
    d3 = ax("A", Oplus(Oplus(bprime, a1), c), Oplus(bprime, Oplus(a1, c)))
    d3 = symm(d3)
    d4 = congr_oplus(_pw_single(bprime, a1, 1 - lam1), refl(c))
    d5 = congr_oplus(congr_oplus(refl(Oplus(bprime, a1)), pd), refl(c))
    d6 = ax(
        "A",
        Oplus(Oplus(Oplus(bprime, a1), target_term), c),
        Oplus(Oplus(bprime, a1), Oplus(target_term, c)),
    )
    d7 = ax(
        "A",
        Oplus(Oplus(bprime, a1), Oplus(target_term, c)),
        Oplus(bprime, Oplus(a1, Oplus(target_term, c))),
    )
    d8 = congr_oplus(refl(bprime), _oc_swap_composite(a1, target_term, c))
    d9 = congr_oplus(
        refl(bprime), congr_oplus(refl(target_term), symm(_dup_front(leaves, i1)))
    )
    d10 = _oc_swap_composite(bprime, target_term, c)
    d11 = congr_oplus(refl(target_term), symm(d1))
    chain = d1
    for step in (d2, d3, d4, d5, d6, d7, d8, d9, d10, d11):
        chain = triang(chain, step)
    return chain


def _canon_oplus(space: FiniteMetricSpace, leaves: list[Term], values: list[Dist]):
    """Sort, dedupe, absorb non-base leaves; (final, values, proof|None)."""
    leaves = list(leaves)
    values = list(values)
    proof = None
    # sort by value order, merging syntactic duplicates
    while True:
        move = None
        for i in range(len(leaves) - 1):
            if values[i] == values[i + 1]:
                assert leaves[i] == leaves[i + 1]
                move = _oc_merge(leaves, i)
                del leaves[i + 1]
                del values[i + 1]
                break
            if values[i].sort_key() > values[i + 1].sort_key():
                move = _oc_swap(leaves, i)
                leaves[i], leaves[i + 1] = leaves[i + 1], leaves[i]
                values[i], values[i + 1] = values[i + 1], values[i]
                break
        if move is None:
            break
        proof = compose(proof, move)
    base = set(ConvexSet(space, values).base)
    extras = [v for v in values if v not in base]
    for extra in extras:
        idx = values.index(extra)
        moved, d_bubble = _bubble(leaves, idx, len(leaves) - 1)
        del values[idx]
        rest = moved[:-1]
        rest_values = list(values)
        d_comm = ax(
            "C",
            Oplus(oc_term(rest), moved[-1]),
            Oplus(moved[-1], oc_term(rest)),
        )
        ok, cert = in_hull(extra, rest_values)
        assert ok
        d_drop = symm(_absorb(space, rest, rest_values, moved[-1], extra, list(cert)))
        proof = compose(compose(compose(proof, d_bubble), d_comm), d_drop)
        leaves = rest
    return leaves, values, proof


def _distribute(p: Fraction, left: list[Term], right: list[Term]):
    """PlusP(p, oc(L), oc(R)) = oc of all pairwise p+ terms, at eps 0.

    Output leaf order: right leaf major, left leaf minor.
    """
    ocl = oc_term(left)

    def dist_right(rest: list[Term]) -> Derivation:
        if len(rest) == 1:
            return refl(PlusP(p, ocl, rest[0]))
        last = rest[-1]
        n1 = ax(
            "D",
            PlusP(p, ocl, Oplus(oc_term(rest[:-1]), last)),
            Oplus(PlusP(p, ocl, oc_term(rest[:-1])), PlusP(p, ocl, last)),
        )
        n2 = congr_oplus(dist_right(rest[:-1]), refl(PlusP(p, ocl, last)))
        return triang(n1, n2)

    def dist_left(rest: list[Term], w: Term) -> Derivation:
        if len(rest) == 1:
            return refl(PlusP(p, rest[0], w))
        last = rest[-1]
        n1 = _d_left(oc_term(rest[:-1]), last, w, p)
        n2 = congr_oplus(dist_left(rest[:-1], w), refl(PlusP(p, last, w)))
        return triang(n1, n2)

    proof = dist_right(right)
    cur: list[Term] = [PlusP(p, ocl, b) for b in right]
    groups: list[list[Term]] = []
    for j, b in enumerate(right):
        pf = dist_left(left, b)
        proof = compose(proof, _comb_congr(cur, j, pf))
        group = [PlusP(p, a, b) for a in left]
        cur[j] = oc_term(group)
        groups.append(group)
    # Flatten the comb of combs: join each group into the running
    # prefix, rewriting under congruence with the untouched suffix.
    flat = list(groups[0])
    for j in range(1, len(groups)):
        inner = _ojoin(flat, groups[j])
        for suffix_leaf in (oc_term(g) for g in groups[j + 1 :]):
            inner = congr_oplus(inner, refl(suffix_leaf))
        proof = compose(proof, inner)
        flat = flat + groups[j]
    return flat, proof


def canon_proof(space: FiniteMetricSpace, t: Term):
    """(derivation, set): t = nu(set) at eps 0, set = normalize(t)."""
    if isinstance(t, Gen):
        return refl(t), monad_unit(space, t.label)
    if isinstance(t, Oplus):
        dl, sl = canon_proof(space, t.left)
        dr, sr = canon_proof(space, t.right)
        d0 = congr_oplus(dl, dr)
        leaves_l = [dist_term(x) for x in sl.base]
        leaves_r = [dist_term(x) for x in sr.base]
        dj = _ojoin(leaves_l, leaves_r)
        leaves, values, dc = _canon_oplus(
            space, leaves_l + leaves_r, list(sl.base) + list(sr.base)
        )
        out = compose(triang(d0, dj), dc)
        s = set_oplus(sl, sr)
        assert out.conclusion == QuantEquation(t, nu(space, s), ZERO)
        return out, s
    assert isinstance(t, PlusP)
    dl, sl = canon_proof(space, t.left)
    dr, sr = canon_proof(space, t.right)
    d0 = congr_plusp(t.p, dl, dr)
    leaves_l = [dist_term(x) for x in sl.base]
    leaves_r = [dist_term(x) for x in sr.base]
    flat, dd = _distribute(t.p, leaves_l, leaves_r)
    values = [
        convex_combine([(t.p, a), (1 - t.p, b)])
        for b in sr.base
        for a in sl.base
    ]
    cur = list(flat)
    for j in range(len(cur)):
        pf = prove_dist(space, cur[j])
        if pf.conclusion.left != pf.conclusion.right:
            dd = compose(dd, _comb_congr(cur, j, pf))
        cur[j] = pf.conclusion.right
    leaves, vals, dc = _canon_oplus(space, cur, values)
    out = compose(triang(d0, dd), dc)
    s = set_plus_p(t.p, sl, sr)
    assert out.conclusion == QuantEquation(t, nu(space, s), ZERO)
    return out, s


def prove_equal(space: FiniteMetricSpace, left: Term, right: Term) -> Derivation:
    """Derivation of left =_0 right for theory-equal terms."""
    dl, sl = canon_proof(space, left)
    dr, sr = canon_proof(space, right)
    if sl != sr:
        raise ValueError("terms are not equal modulo the theory")
    return triang(dl, symm(dr))


# -------------------------------------------------------- metric derivations

def _fold_pair(space: FiniteMetricSpace, cells) -> Derivation:
    """Parallel fold over coupling cells under the p+ congruence."""
    if len(cells) == 1:
        x, y, _ = cells[0]
        if x == y:
            return refl(Gen(x))
        return assum(QuantEquation(Gen(x), Gen(y), space.d(x, y)))
    x, y, w = cells[-1]
    keep = 1 - w
    prefix = [(a, b, v / keep) for a, b, v in cells[:-1]]
    last = (
        refl(Gen(x))
        if x == y
        else assum(QuantEquation(Gen(x), Gen(y), space.d(x, y)))
    )
    return congr_plusp(keep, _fold_pair(space, prefix), last)


def _support_hypotheses(space, left_points, right_points):
    eqs = []
    for x in left_points:
        for y in right_points:
            if x != y:
                eqs.append(QuantEquation(Gen(x), Gen(y), space.d(x, y)))
    return tuple(dict.fromkeys(eqs))


def derive_kantorovich(space: FiniteMetricSpace, left: Dist, right: Dist) -> Derivation:
    """nu({left}) =_eps nu({right}) with eps the Kantorovich distance.

    Mirrors the optimal coupling as a fold of ground hypotheses under
    the p+ congruence, then rearranges each side to its canonical term.
    """
    if left.space != space or right.space != space:
        raise SpaceMismatch()
    result = kantorovich(space, left, right)
    cells = [(x, y, w) for (x, y), w in result.witness.items()]
    core = _fold_pair(space, cells)
    row_items = [(x, w) for x, _y, w in cells]
    col_items = [(y, w) for _x, y, w in cells]
    _, pl = _sort_mix(space, row_items)
    _, pr = _sort_mix(space, col_items)
    d = compose(compose(symm(pl) if pl is not None else None, core), pr)
    assert d is not None
    expected = QuantEquation(dist_term(left), dist_term(right), result.value)
    assert d.conclusion == expected
    return replace(
        d,
        hypotheses=_support_hypotheses(space, left.support, right.support),
    )


def derive_hk(space: FiniteMetricSpace, left: ConvexSet, right: ConvexSet) -> Derivation:
    """nu(left) =_h nu(right) with h the Hausdorff-Kantorovich distance.

    Pads each side with the projection mixtures witnessing the other
    side's directed infima (absorbed at eps 0 since they lie in the
    hull), proves each aligned pair at its Kantorovich distance, lifts
    all pairs to h with Max, folds them under the oplus congruence, and
    removes the padding with eps-0 canonicalization.
    """
    if left.space != space or right.space != space:
        raise SpaceMismatch()
    h = hk_distance(space, left, right)
    to_right = [nearest_point(space, s, right)[1] for s in left.base]
    to_left = [nearest_point(space, t, left)[1] for t in right.base]
    pairs = list(zip(left.base, to_right)) + list(zip(to_left, right.base))
    pair_proofs = [
        emax(derive_kantorovich(space, a, b), h) for a, b in pairs
    ]
    hfold = pair_proofs[0]
    for pf in pair_proofs[1:]:
        hfold = congr_oplus(hfold, pf)
    leaves_s = [dist_term(d) for d, _ in pairs]
    values_s = [d for d, _ in pairs]
    leaves_t = [dist_term(d) for _, d in pairs]
    values_t = [d for _, d in pairs]
    _, _, pad_s = _canon_oplus(space, leaves_s, values_s)
    _, _, pad_t = _canon_oplus(space, leaves_t, values_t)
    d = compose(compose(symm(pad_s) if pad_s is not None else None, hfold), pad_t)
    assert d is not None
    expected = QuantEquation(nu(space, left), nu(space, right), h)
    assert d.conclusion == expected
    supp_left = sorted(
        {x for b in left.base for x in b.support}, key=space.index
    )
    supp_right = sorted(
        {x for b in right.base for x in b.support}, key=space.index
    )
    return replace(d, hypotheses=_support_hypotheses(space, supp_left, supp_right))


def tightest_derivable(
    space: FiniteMetricSpace,
    gamma,
    left: Term,
    right: Term,
):
    """(value, derivation): the least derivable eps between two terms.

    gamma must contain the ground-distance hypotheses of the space;
    pass None to use metric_hypotheses(space).
    """
    if gamma is None:
        gamma = metric_hypotheses(space)
    dl, sl = canon_proof(space, left)
    dr, sr = canon_proof(space, right)
    dh = derive_hk(space, sl, sr)
    d = triang(triang(dl, dh), symm(dr))
    return dh.conclusion.eps, replace(d, hypotheses=tuple(gamma))

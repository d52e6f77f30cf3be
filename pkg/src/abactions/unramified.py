"""Unramified (fixed-point-free) abelian actions: canonical representatives,
class counts, the normal-form reducer and the rank-2 laws."""
from __future__ import annotations

import heapq
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from itertools import product
from math import gcd

import numpy as np

from .abelian import AbAutomorphism, AbelianGroup, AbElement, Signature, enumerate_automorphisms, require_genus
from .errors import OutOfScope
from .genvec import (GeneratingVector, Move, apply_word, cup_equivalent_mod_aut, orbit_classes_oracle,
                     ORACLE_CEILING)

REDUCER_BUDGET = 200_000
AUT_SEARCH_CAP = 50_000


def count_elementary(rho: int, r: int) -> int:
    """Classes of epimorphisms from a genus-rho surface group onto F_p^r.

    One class per integer K with r/2 <= K <= min(rho, r).
    """
    if r < 0 or rho < 0:
        raise ValueError("rho and r must be non-negative")
    if r > 2 * rho:
        return 0
    return max(0, min(rho, r) - (r + 1) // 2 + 1)


@dataclass(frozen=True)
class CanonicalUnramified:
    K: int
    vector: GeneratingVector


def canonical_reps_elementary(p: int, w: int, rho: int) -> list[CanonicalUnramified]:
    """One representative per admissible K: alpha_i -> omega_i (i <= K), beta_i -> omega_{i+K} (i <= w-K)."""
    if w < 1:
        raise ValueError("rank must be >= 1")
    if w > 2 * rho:
        return []
    G = AbelianGroup.elementary(p, w)
    sig = Signature(rho)
    out = []
    for K in range((w + 1) // 2, min(rho, w) + 1):
        A = [G.gen(i) if i < K else G.zero() for i in range(rho)]
        B = [G.gen(i + K) if i < w - K else G.zero() for i in range(rho)]
        out.append(CanonicalUnramified(K, GeneratingVector(G, sig, tuple(A), tuple(B))))
    return out


def count_rank_r_n2_prime(rho: int, r: int) -> int:
    """Class count when n_2 is prime: the admissible K values, as in the elementary case."""
    return count_elementary(rho, r)


def divisor_count(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def is_squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def count_rank2_squarefree(n2: int) -> int:
    """d(n_2) classes for rank-2 groups with squarefree n_2."""
    if n2 < 1:
        raise ValueError("n2 must be positive")
    if not is_squarefree(n2):
        raise OutOfScope(f"n2={n2} is not squarefree")
    return divisor_count(n2)


# Normal form -------------------------------------------------------------

def _leading(G: AbelianGroup, x: AbElement) -> int:
    """Index of the first nonzero coordinate (rank if zero)."""
    for i, c in enumerate(x.coords):
        if c:
            return i
    return G.rank


def _divides_subgroup(n: int, a: int, b: int) -> bool:
    """<a> <= <b> inside Z/n."""
    return gcd(a, n) % gcd(b, n) == 0


def is_normal_form(gv: GeneratingVector) -> bool:
    """The normal form for unramified abelian vectors, with its coefficient side-conditions.

    Case t <= rho: alpha_i = omega_i (i <= t), beta_i = sum_{j>i} N_ij omega_j, the rest zero.
    Case t > rho: alpha_i = omega_i (i <= rho); for i <= 2rho-t beta_i = sum_{j>i} N_ij omega_j;
    for larger i beta_i = omega_{2rho-i+1} + sum_{j=i+1}^{2rho-i} N_ij omega_j.
    """
    G, rho = gv.group, gv.signature.rho
    if gv.signature.branch_count:
        return False
    t, n = G.rank, G.factors
    A, B = gv.A, gv.B
    N = lambda i, j: B[i].coords[j]  # 0-based pair i, coordinate j
    if t <= rho:
        for i in range(rho):
            if i < t:
                if A[i] != G.gen(i) or _leading(G, B[i]) <= i:
                    return False
            elif not (A[i].is_zero() and B[i].is_zero()):
                return False
        for i in range(t - 1):
            v = N(i, i + 1)
            if not (gcd(n[i + 1], v) > 1 or v == 1):
                return False
            js = [j for j in range(i + 2, t) if N(i, j)]
            if js and not _divides_subgroup(n[js[-1]], N(i, js[-1]), N(i + 1, js[-1])):
                return False
        return True
    q = 2 * rho - t
    if q < 0:
        return False
    for i in range(rho):
        if A[i] != G.gen(i) or _leading(G, B[i]) <= i:
            return False
    for i in range(rho):
        if i < q:
            js = [j for j in range(i + 2, t) if N(i, j)]
            if js and not _divides_subgroup(n[js[-1]], N(i, js[-1]), N(i + 1, js[-1])):
                return False
            if i < q - 1:
                v = N(i, i + 1)
                if not (gcd(n[i], v) > 1 or v == 1):
                    return False
        else:
            lead = 2 * rho - i - 1  # 0-based index of omega_{2rho-i+1}
            if N(i, lead) != 1 or any(N(i, j) for j in range(lead + 1, t)):
                return False
            for j in range(i + 1, lead):
                v = N(i, j)
                if v and n[t - 1] % (n[j] // gcd(v, n[j])) == 0:
                    return False
    return True


def _basis_automorphism(G: AbelianGroup, imgs: Sequence[AbElement]) -> AbAutomorphism | None:
    """The automorphism omega_i -> imgs[i], if that is one."""
    for x, ni in zip(imgs, G.factors):
        if ni % x.order():
            return None
    if not G.generates(list(imgs)):
        return None
    return AbAutomorphism.from_images(G, imgs, validate=False)


def _inverse_aut(phi: AbAutomorphism) -> AbAutomorphism:
    G = phi.group
    inv = np.empty_like(phi.perm)
    inv[phi.perm] = np.arange(phi.perm.size)
    return AbAutomorphism.from_images(G, [G.from_index(int(inv[G.index(G.gen(j))])) for j in range(G.rank)],
                                      validate=False)


def _candidate_thetas(gv: GeneratingVector) -> Iterator[AbAutomorphism]:
    """Automorphisms theta that could bring gv into normal form."""
    G, rho = gv.group, gv.signature.rho
    t = G.rank
    if t <= rho:
        phi = _basis_automorphism(G, gv.A[:t])
        if phi is not None:
            yield _inverse_aut(phi)
        return
    q = 2 * rho - t
    if q < 0:
        return
    base = list(gv.A)
    # indices i = rho-1 down to q determine phi(omega_{2rho-i}) (0-based 2rho-i-1)
    steps = list(range(rho - 1, q - 1, -1))
    free = [(i, j) for i in steps for j in range(i + 1, 2 * rho - i - 1)]
    ranges = [range(G.factors[j]) for _, j in free]
    for coeffs in product(*ranges):
        cmap = dict(zip(free, coeffs))
        imgs = {j: base[j] for j in range(rho)}
        for i in steps:
            x = gv.B[i]
            for j in range(i + 1, 2 * rho - i - 1):
                x = x - cmap[(i, j)] * imgs[j]
            imgs[2 * rho - i - 1] = x
        phi = _basis_automorphism(G, [imgs[j] for j in range(t)])
        if phi is not None:
            yield _inverse_aut(phi)


def _renamings(gv: GeneratingVector) -> Iterator[tuple[GeneratingVector, AbAutomorphism, list[Move]]]:
    """Diagonal unit automorphisms combined with pair negations R_i^2."""
    G, rho = gv.group, gv.signature.rho
    units = [[u for u in range(1, n) if gcd(u, n) == 1] for n in G.factors]
    for us in product(*units):
        theta = AbAutomorphism(G, tuple(tuple(us[i] if i == j else 0 for j in range(G.rank)) for i in range(G.rank)),
                               validate=False)
        base = gv.transform(theta)
        for signs in product((1, -1), repeat=rho):
            A = tuple(s * a for s, a in zip(signs, base.A))
            B = tuple(s * b for s, b in zip(signs, base.B))
            word = [Move("R", i + 1) for i, s in enumerate(signs) if s == -1 for _ in range(2)]
            yield base.with_(A=A, B=B), theta, word


def _lex_key(gv: GeneratingVector) -> tuple:
    return tuple(c for x in gv.paired() for c in x.coords)


@dataclass(frozen=True)
class Reduction:
    result: GeneratingVector
    word: tuple[Move, ...]
    theta: AbAutomorphism

    def replay(self, gv: GeneratingVector) -> GeneratingVector:
        return apply_word(gv, self.word).transform(self.theta)


class _Tables:
    def __init__(self, G: AbelianGroup):
        self.add = G.add_table.tolist()
        self.neg = G.neg_table.tolist()
        self.order = G.order_table.tolist()


def _sp_step(state: tuple[int, ...], m: Move, T: _Tables, rho: int) -> tuple[int, ...]:
    s = list(state)
    i = m.i - 1
    a, b = i, rho + i
    add, neg = T.add, T.neg
    if m.kind == "A":
        x = s[a] if m.k == 1 else neg[s[a]]
        s[b] = add[s[b]][x]
    elif m.kind == "B":
        x = s[b] if m.k == 1 else neg[s[b]]
        s[a] = add[s[a]][x]
    elif m.kind == "Z":
        x = s[a + 1] if m.k == 1 else neg[s[a + 1]]
        y = neg[s[b]] if m.k == 1 else s[b]
        s[a] = add[s[a]][x]
        s[b + 1] = add[s[b + 1]][y]
    elif m.kind == "R":
        s[a], s[b] = s[b], neg[s[a]]
    elif m.kind == "S":
        s[a], s[a + 1], s[b], s[b + 1] = s[a + 1], s[a], s[b + 1], s[b]
    return tuple(s)


def _sp_moves(rho: int) -> list[Move]:
    out = []
    for i in range(1, rho + 1):
        for k in (1, -1):
            out += [Move("A", i, k=k), Move("B", i, k=k)]
            if i < rho:
                out.append(Move("Z", i, k=k))
        out.append(Move("R", i))
        if i < rho:
            out.append(Move("S", i))
    return out


def _potential(state: tuple[int, ...], T: _Tables, rho: int, t: int) -> tuple[int, int]:
    """Greedy objective: small B's first, then A's beyond the rank cleared."""
    return (sum(T.order[x] for x in state[rho:]), sum(T.order[x] for x in state[min(t, rho):rho]))


def _aut_perms(G: AbelianGroup, cap: int = AUT_SEARCH_CAP) -> np.ndarray | None:
    """All automorphisms as index permutations, or None when there are more than cap."""
    perms = []
    for theta in enumerate_automorphisms(G):
        perms.append(theta.perm)
        if len(perms) > cap:
            return None
    return np.array(perms, dtype=np.int64)


def _perm_to_aut(G: AbelianGroup, perm: np.ndarray) -> AbAutomorphism:
    return AbAutomorphism.from_images(G, [G.from_index(int(perm[G.index(G.gen(j))])) for j in range(G.rank)],
                                      validate=False)


def reduce_abelian_certified(gv: GeneratingVector, budget: int = REDUCER_BUDGET) -> Reduction:
    """Reduce an unramified vector to normal form, with a replayable certificate.

    Phase 1 greedily applies unit moves that lower the orders of the B's.
    Phase 2 runs a best-first search over symplectic unit moves for a vector
    that some automorphism carries into normal form. States are identified
    modulo Aut(G) when Aut(G) is small enough to list; moves commute with
    automorphisms, so the certificate is still a word plus one automorphism.
    Phase 3 picks the lexicographically least variant under unit rescaling of
    generators and pair negation, so coefficients such as 3 and 1 in Z/4 are
    identified.
    """
    G, sig = gv.group, gv.signature
    if sig.branch_count:
        raise ValueError("reduce_abelian needs an unramified vector")
    rho, t = sig.rho, G.rank
    T = _Tables(G)
    moves = _sp_moves(rho)
    state = tuple(G.index(x) for x in gv.A + gv.B)
    word: list[Move] = []

    pot = _potential(state, T, rho, t)
    improved = True
    while improved:
        improved = False
        for m in moves:
            nxt = _sp_step(state, m, T, rho)
            np_ = _potential(nxt, T, rho, t)
            if np_ < pot:
                state, pot, improved = nxt, np_, True
                word.append(m)
                break

    P = _aut_perms(G)
    ident = np.arange(G.order, dtype=np.int64)
    weights = G.order ** np.arange(2 * rho - 1, -1, -1, dtype=np.int64)

    def canon(s):
        """(least image of s under Aut, perm carrying s there)."""
        if P is None:
            return s, ident
        rows = P[:, list(s)]
        k = int(np.argmin(rows @ weights))
        return tuple(int(x) for x in rows[k]), P[k]

    def normal(s):
        v = GeneratingVector.from_indices(G, sig, s)
        for theta in _candidate_thetas(v):
            w = v.transform(theta)
            if is_normal_form(w):
                return w, theta
        return None

    start, perm0 = canon(state)
    # parent[c] = (previous canonical state, move, perm applied after the move)
    parent: dict[tuple[int, ...], tuple | None] = {start: None}
    heap = [(_potential(start, T, rho, t), 0, start)]
    tick = 0
    found = None
    while heap:
        _, _, s = heapq.heappop(heap)
        hit = normal(s)
        if hit is not None:
            found = (s, hit)
            break
        if len(parent) > budget:
            continue
        for m in moves:
            c, pm = canon(_sp_step(s, m, T, rho))
            if c not in parent:
                parent[c] = (s, m, pm)
                tick += 1
                heapq.heappush(heap, (_potential(c, T, rho, t), tick, c))
    if found is None:
        raise RuntimeError(f"no normal form within {budget} states for {gv}")
    s, (nf, theta) = found
    tail, perms = [], []
    while parent[s] is not None:
        s, m, pm = parent[s]
        tail.append(m)
        perms.append(pm)
    word += tail[::-1]
    total = perm0
    for pm in reversed(perms):
        total = pm[total]
    theta = theta * _perm_to_aut(G, total)

    best = (nf, AbAutomorphism.identity(G), [])
    for cand, th, w in _renamings(nf):
        if is_normal_form(cand) and _lex_key(cand) < _lex_key(best[0]):
            best = (cand, th, w)
    cand, th, w = best
    red = Reduction(cand, tuple(word + w), th * theta)
    if red.replay(gv) != cand:
        raise AssertionError("reduction certificate failed to replay")
    return red


def reduce_abelian(gv: GeneratingVector) -> GeneratingVector:
    return reduce_abelian_certified(gv).result


def normal_form_family(G: AbelianGroup, rho: int) -> list[GeneratingVector]:
    """Every vector in normal form after canonical renaming: the reducer's possible outputs."""
    sig = Signature(rho)
    t = G.rank
    if t > 2 * rho:
        return []
    slots = []
    for i in range(min(rho, t)):
        for j in range(i + 1, t):
            slots.append((i, j))
    out = set()
    for coeffs in product(*[range(G.factors[j]) for _, j in slots]):
        cmap = dict(zip(slots, coeffs))
        A = [G.gen(i) if i < t else G.zero() for i in range(rho)]
        B = []
        for i in range(rho):
            coords = [cmap.get((i, j), 0) for j in range(t)]
            if t > rho and i >= 2 * rho - t:
                lead = 2 * rho - i - 1
                if any(cmap.get((i, j), 0) for j in range(lead, t)):
                    continue
                coords[lead] = 1
            B.append(G.element(coords))
        if len(B) != rho:
            continue
        gv = GeneratingVector(G, sig, tuple(A), tuple(B))
        if not is_normal_form(gv) or not G.generates(list(gv.elements())):
            continue
        best = min((c for c, _, _ in _renamings(gv) if is_normal_form(c)), key=_lex_key)
        out.add(best)
    return sorted(out, key=_lex_key)


def cup_classes(vectors: Sequence[GeneratingVector]) -> list[list[GeneratingVector]]:
    """Group vectors whose cup invariants agree modulo Aut(G)."""
    groups: list[list[GeneratingVector]] = []
    for v in vectors:
        for g in groups:
            if cup_equivalent_mod_aut(g[0], v):
                g.append(v)
                break
        else:
            groups.append([v])
    return groups


@dataclass
class UnramifiedReport:
    group: AbelianGroup
    rho: int
    genus: int
    candidates: list[GeneratingVector]
    cup_lower_bound: int
    oracle_count: int | None
    oracle_representatives: list[GeneratingVector] | None

    @property
    def upper_bound(self) -> int:
        return len(self.candidates)

    @property
    def exact(self) -> int | None:
        if self.oracle_count is not None:
            return self.oracle_count
        if self.cup_lower_bound == self.upper_bound:
            return self.upper_bound
        return None

    def as_json(self) -> dict:
        return {
            "group": list(self.group.factors), "rho": self.rho, "genus": self.genus,
            "candidates": [c.as_json() for c in self.candidates],
            "at_most": self.upper_bound, "at_least": self.cup_lower_bound,
            "oracle": self.oracle_count, "classes": self.exact,
            "representatives": None if self.oracle_representatives is None
            else [r.as_json() for r in self.oracle_representatives],
        }


def classify_unramified(G: AbelianGroup, rho: int, oracle_ceiling: int = ORACLE_CEILING,
                        use_oracle: bool = True) -> UnramifiedReport:
    """Reducer candidates bound the class count above, cup invariants below; the oracle decides when in reach."""
    genus = require_genus(G.order, Signature(rho))
    cands = normal_form_family(G, rho)
    lower = len(cup_classes(cands))
    count = reps = None
    if use_oracle and G.order ** (2 * rho) <= oracle_ceiling:
        part = orbit_classes_oracle(G, Signature(rho), oracle_ceiling)
        count, reps = part.count, part.representatives()
    return UnramifiedReport(G, rho, genus, cands, lower, count, reps)


# Published catalogue --------------------------------------------------------

def _paper_vectors(G: AbelianGroup, rows: Sequence[Sequence[Sequence[int]]]) -> list[GeneratingVector]:
    """Rows of images (alpha_1, beta_1, alpha_2, beta_2) as coefficient lists on omega."""
    out = []
    for row in rows:
        el = [G.element(c) for c in row]
        out.append(GeneratingVector(G, Signature(2), (el[0], el[2]), (el[1], el[3])))
    return out


def genus65_catalogue() -> list[dict]:
    """Groups of the low-genus catalogue at rho = 2, with the published class counts and representatives."""
    out = []
    for f in [(4, 4), (8, 4), (12, 4)]:
        G = AbelianGroup(f)
        reps = _paper_vectors(G, [[(1, 0), (0, 1), (0, 0), (0, 0)],
                                  [(1, 0), (0, 2), (0, 1), (0, 0)],
                                  [(1, 0), (0, 0), (0, 1), (0, 0)]])
        out.append({"group": G, "published_classes": 3, "representatives": reps})
    G = AbelianGroup((4, 4, 2))
    reps = _paper_vectors(G, [[(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0)],
                              [(1, 0, 0), (0, 0, 1), (0, 1, 0), (0, 0, 0)],
                              [(1, 0, 0), (0, 1, 0), (0, 2, 0), (0, 0, 1)]])
    out.append({"group": G, "published_classes": 3, "representatives": reps})
    return out

"""Exhaustive construction and closure machinery at desk scale.

Builds the full symmetric inverse monoid on {1..n} (or its one-way /
two-way fence-preserving subsemigroups), computes generated closures
with one shortest discovery word per element, principal ideals,
irreducible elements, least generating sets and semigroup rank.  All
outputs are canonically sorted, so results are byte-identical across
runs and across any parallelism degree.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor

from .fence import in_if, in_pfi
from .pinj import PartialInjection

BUILD_GUARD = 10  # |I_10| ~ 2.3e8; anything beyond is out of reach anyway
HUGE_THRESHOLD = 9  # n = 9, 10 only behind an explicit opt-in

CACHE_MAGIC = "FENCEMONOID v1"


class TooLargeError(ValueError):
    pass


class NotMemberError(ValueError):
    pass


class NotSubsetError(ValueError):
    pass


class SemigroupTable:
    """A canonically sorted set of partial injections with product access.

    ``elements`` are sorted by canonical key and pairwise distinct.  For
    closure-built tables, ``gens`` holds the declared generators and each
    element carries one shortest discovery word over them, retrievable
    via :meth:`word_for`.
    """

    def __init__(self, n, elements, closed, kind="", gens=None, parents=None):
        self.n = n
        self.elements = tuple(elements)
        self.index = {e.img: i for i, e in enumerate(self.elements)}
        self.closed = closed
        self.kind = kind
        self.gens = tuple(gens) if gens is not None else None
        # parents[i] = (parent_position, generator_position) or None for seeds
        self._parents = parents

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, elt):
        return isinstance(elt, PartialInjection) and elt.img in self.index

    def position(self, elt: PartialInjection) -> int:
        try:
            return self.index[elt.img]
        except KeyError:
            raise NotMemberError(f"{elt.encode()} is not in the table") from None

    def word_for(self, elt: PartialInjection) -> list[PartialInjection]:
        """Shortest discovery word for an element, as generator letters."""
        if self._parents is None or self.gens is None:
            raise ValueError("table was not built by closure; no words recorded")
        pos = self.position(elt)
        letters = []
        while True:
            parent, gen = self._parents[pos]
            letters.append(self.gens[gen])
            if parent is None:
                break
            pos = parent
        letters.reverse()
        return letters


def symmetric_inverse_size(n: int) -> int:
    """|I_n| = sum_k C(n,k)^2 k!."""
    return sum(math.comb(n, k) ** 2 * math.factorial(k) for k in range(n + 1))


def _iter_imgs_for_domains(n, domains):
    pts = range(1, n + 1)
    for dom in domains:
        k = len(dom)
        for image in itertools.combinations(pts, k):
            for perm in itertools.permutations(image):
                img = [0] * n
                for x, y in zip(dom, perm):
                    img[x - 1] = y
                yield tuple(img)


def _filter_chunk(args):
    n, which, domains = args
    keep = []
    for img in _iter_imgs_for_domains(n, domains):
        a = PartialInjection(n, img)
        if which == "I":
            keep.append(img)
        elif which == "PFI":
            if in_pfi(a):
                keep.append(img)
        else:
            if in_if(a):
                keep.append(img)
    return keep


def build(n: int, which: str = "IF", threads: int = 1, huge: bool = False) -> SemigroupTable:
    """Enumerate all of I_n filtered down to the requested semigroup.

    ``which`` is one of I, PFI, IF.  Guarded at n <= 10; n in {9, 10}
    additionally requires ``huge=True``.  With ``threads > 1`` the
    membership filter is spread over worker processes; the sorted result
    is identical for every thread count.
    """
    which = which.upper()
    if which not in ("I", "PFI", "IF"):
        raise ValueError(f"which must be I, PFI or IF, got {which!r}")
    if not (1 <= n <= BUILD_GUARD):
        raise TooLargeError(f"n must be in 1..{BUILD_GUARD}, got {n}")
    if n >= HUGE_THRESHOLD and not huge:
        raise TooLargeError(
            f"n = {n} enumerates ~{symmetric_inverse_size(n):.2g} maps; pass huge=True (--huge)"
        )
    if threads < 1:
        raise ValueError("threads must be >= 1")

    pts = range(1, n + 1)
    domains = [
        dom for k in range(n + 1) for dom in itertools.combinations(pts, k)
    ]
    if threads > 1 and n >= 6:
        chunk = max(1, len(domains) // (threads * 4))
        jobs = [
            (n, which, domains[i : i + chunk]) for i in range(0, len(domains), chunk)
        ]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_filter_chunk, jobs))
        imgs = [img for part in parts for img in part]
    else:
        imgs = _filter_chunk((n, which, domains))
    imgs.sort()
    return SemigroupTable(
        n, [PartialInjection(n, img) for img in imgs], closed=True, kind=which
    )


def closure(n: int, gens) -> SemigroupTable:
    """Generated closure with one shortest discovery word per element.

    Frontier-based product saturation: each round multiplies the frontier
    (in canonical key order) by every generator (same order), so ties
    between equal-length words resolve by the key of the left factor and
    the result is deterministic.
    """
    gen_list = sorted({g for g in gens})
    if not gen_list:
        raise ValueError("need at least one generator")
    for g in gen_list:
        if g.n != n:
            raise ValueError(f"generator {g.encode()} has ambient size {g.n}, expected {n}")

    gen_imgs = [g.img for g in gen_list]
    found: dict[tuple, int] = {}
    order: list[tuple] = []
    parents: list[tuple] = []
    for gi, img in enumerate(gen_imgs):
        if img not in found:
            found[img] = len(order)
            order.append(img)
            parents.append((None, gi))
    frontier = sorted(found.values(), key=lambda i: order[i])
    while frontier:
        new = []
        for pos in frontier:
            a = order[pos]
            for gi, b in enumerate(gen_imgs):
                p = tuple(b[v - 1] if v else 0 for v in a)
                if p not in found:
                    found[p] = len(order)
                    order.append(p)
                    parents.append((pos, gi))
                    new.append(found[p])
        frontier = sorted(new, key=lambda i: order[i])

    ranked = sorted(range(len(order)), key=lambda i: order[i])
    remap = {old: new for new, old in enumerate(ranked)}
    elements = [PartialInjection(n, order[i]) for i in ranked]
    new_parents = [None] * len(order)
    for old, (par, gi) in enumerate(parents):
        new_parents[remap[old]] = (remap[par] if par is not None else None, gi)
    digest = hashlib.sha256(
        "\n".join(e.encode() for e in gen_list).encode()
    ).hexdigest()[:12]
    return SemigroupTable(
        n,
        elements,
        closed=True,
        kind=f"closure:{digest}",
        gens=gen_list,
        parents=new_parents,
    )


def principal_ideals(table: SemigroupTable, a: PartialInjection):
    """(Rset, Lset, Jset) under the S^1 convention.

    Rset = {a} + aS, Lset = {a} + Sa, Jset additionally includes SaS,
    computed literally by product saturation over the table.
    """
    if not table.closed:
        raise ValueError("principal ideals need a closed table")
    table.position(a)
    imgs = [e.img for e in table.elements]
    ai = a.img

    right = {tuple(b[v - 1] if v else 0 for v in ai) for b in imgs}
    left = {tuple(ai[v - 1] if v else 0 for v in s) for s in imgs}
    two_sided = set(right)
    for y in right:
        two_sided.update(tuple(y[v - 1] if v else 0 for v in s) for s in imgs)
    two_sided |= left
    right.add(ai)
    left.add(ai)
    two_sided.add(ai)

    n = table.n
    wrap = lambda S: frozenset(PartialInjection(n, img) for img in S)
    return wrap(right), wrap(left), wrap(two_sided)


def ideal_j_test(table: SemigroupTable, a: PartialInjection, b: PartialInjection) -> bool:
    """Brute-force J oracle: mutual two-sided principal-ideal membership."""
    _, _, ja = principal_ideals(table, a)
    _, _, jb = principal_ideals(table, b)
    return b in ja and a in jb


def ideal_j_classes(table: SemigroupTable, gens):
    """J-class partition from two-sided ideal reachability.

    x and y are J-related iff each lies in the other's two-sided
    principal ideal, i.e. iff they are mutually reachable under one-step
    left/right multiplication by elements of a generating set.  The
    generating property is verified by closure before use, so nothing
    beyond the definition of an ideal is assumed.  Returns the classes
    as sorted element lists, ordered by least member.
    """
    gens = _check_subset(table, gens)
    if len(closure(table.n, gens)) != len(table):
        raise ValueError("oracle generators do not generate the table")
    imgs = [e.img for e in table.elements]
    index = table.index
    gen_imgs = [g.img for g in gens]
    succ: list[list[int]] = []
    for a in imgs:
        row = set()
        for g in gen_imgs:
            row.add(index[tuple(g[v - 1] if v else 0 for v in a)])
            row.add(index[tuple(a[v - 1] if v else 0 for v in g)])
        succ.append(sorted(row))

    # iterative Tarjan SCC
    n_nodes = len(imgs)
    disc = [-1] * n_nodes
    low = [0] * n_nodes
    on_stack = [False] * n_nodes
    stack: list[int] = []
    comp = [-1] * n_nodes
    counter = 0
    ncomp = 0
    for root in range(n_nodes):
        if disc[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                disc[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for i in range(pi, len(succ[v])):
                w = succ[v][i]
                if disc[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], disc[w])
            if recurse:
                continue
            if low[v] == disc[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            work.pop()
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])

    groups: dict[int, list] = {}
    for pos, c in enumerate(comp):
        groups.setdefault(c, []).append(table.elements[pos])
    classes = [sorted(g) for g in groups.values()]
    classes.sort(key=lambda cls: cls[0].key)
    return classes


def _check_subset(table, gens):
    gens = list(gens)
    for g in gens:
        if g not in table:
            raise NotSubsetError(f"{g.encode()} is not an element of the table")
    return gens


def is_generating(table: SemigroupTable, gens) -> bool:
    """True iff the closure of gens has the table's full size."""
    gens = _check_subset(table, gens)
    if not gens:
        return False
    return len(closure(table.n, gens)) == len(table)


def irreducibles(table: SemigroupTable):
    """Elements that are not a product of two others.

    Valid only because the table is closed: any longer product over
    S minus {g} reduces to a two-factor one, so a full product scan
    suffices.  Returns a canonically sorted tuple.
    """
    if not table.closed:
        raise ValueError("irreducibles are only meaningful for a closed table")
    imgs = [e.img for e in table.elements]
    reducible = set()
    for a in imgs:
        for b in imgs:
            p = tuple(b[v - 1] if v else 0 for v in a)
            if p != a and p != b:
                reducible.add(p)
    n = table.n
    return tuple(
        PartialInjection(n, img) for img in imgs if img not in reducible
    )


def least_generating_set(table: SemigroupTable):
    """The least generating set, or None when none exists.

    The irreducibles are contained in every generating set, so they form
    the least one exactly when they generate; otherwise no generating
    set can be contained in all others.
    """
    irr = irreducibles(table)
    if not irr:
        return None
    if len(closure(table.n, irr)) == len(table):
        return irr
    return None


def semigroup_rank(table: SemigroupTable, descent_start=None):
    """Minimum generating-set size: ('exact', k) or ('bounds', lo, hi).

    Exact when a least generating set exists.  Otherwise the lower bound
    is the irreducible count and the upper bound comes from a greedy
    descent: starting from ``descent_start`` (the whole table by
    default), repeatedly drop the largest-key element whose removal
    keeps generation.
    """
    least = least_generating_set(table)
    if least is not None:
        return ("exact", len(least))
    lo = len(irreducibles(table))
    if descent_start is None:
        gens = list(table.elements)
    else:
        gens = _check_subset(table, descent_start)
        if len(closure(table.n, gens)) != len(table):
            raise ValueError("descent_start does not generate the table")
    target = len(table)
    current = set(gens)
    for g in sorted(current, key=lambda e: e.key, reverse=True):
        trial = current - {g}
        if trial and len(closure(table.n, trial)) == target:
            current = trial
    assert len(closure(table.n, current)) == target
    return ("bounds", lo, len(current))


def regular_elements(table: SemigroupTable):
    """Elements a with some x in the table satisfying a*x*a == a."""
    imgs = [e.img for e in table.elements]
    n = table.n
    out = []
    for a in imgs:
        for x in imgs:
            ax = tuple(x[v - 1] if v else 0 for v in a)
            axa = tuple(a[v - 1] if v else 0 for v in ax)
            if axa == a:
                out.append(PartialInjection(n, a))
                break
    return tuple(out)


# --- cache files -----------------------------------------------------------

DEFAULT_CACHE_DIR = ".fence-cache"
CACHE_ENV_VAR = "FENCE_CACHE"


def cache_dir_from_env(explicit=None) -> str:
    if explicit:
        return explicit
    return os.environ.get(CACHE_ENV_VAR, DEFAULT_CACHE_DIR)


def cache_filename(n: int, kind: str) -> str:
    return f"{kind.replace(':', '_')}_n{n}.txt"


def save_table(table: SemigroupTable, path: str) -> None:
    """Write the cache format: a header line, then one element per line."""
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(f"{CACHE_MAGIC} n={table.n} kind={table.kind} count={len(table)}\n")
        for e in table.elements:
            fh.write(e.encode() + "\n")
    os.replace(tmp, path)


def load_table(path: str) -> SemigroupTable:
    """Read a cache file back into a (closed) table; raises on corruption."""
    from . import pinj

    with open(path) as fh:
        header = fh.readline().strip()
        parts = header.split()
        if parts[:2] != CACHE_MAGIC.split() or len(parts) != 5:
            raise ValueError(f"bad cache header in {path}: {header!r}")
        n = int(parts[2].split("=", 1)[1])
        kind = parts[3].split("=", 1)[1]
        count = int(parts[4].split("=", 1)[1])
        elements = [pinj.parse(line.strip()) for line in fh if line.strip()]
    if len(elements) != count:
        raise ValueError(
            f"cache {path} advertises {count} elements but holds {len(elements)}"
        )
    elements.sort()
    return SemigroupTable(n, elements, closed=kind in ("I", "PFI", "IF"), kind=kind)

"""Named transformation families and distinguished generating sets.

The point-deleted identities eps_i, the near-identity rotations sig1 /
sig2 (mutually inverse, rank n-1), the prefix reversals gam_i, the
suffix reversal-shifts del_i, and the two-point-deleted interval
reversals beta_{i,j} are the building blocks of every factorization
this package produces.  set_j collects all elements of rank >= n-2
(a generating set for every n); set_g is {id, sig1, sig2} + gammas +
deltas, the least generating set when n is even, of size n+1.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .enumeration import NotMemberError, closure
from .fence import in_if
from .pinj import PartialInjection


class BadIndexError(ValueError):
    pass


class OddAmbientError(ValueError):
    pass


def _checked(a: PartialInjection) -> PartialInjection:
    assert in_if(a), f"constructed generator {a.encode()} escapes the semigroup"
    return a


def epsilon(n: int, i: int) -> PartialInjection:
    """Identity on {1..n} minus {i}: the rank n-1 idempotents."""
    if not 1 <= i <= n:
        raise BadIndexError(f"epsilon index must be in 1..{n}, got {i}")
    return PartialInjection(n, tuple(0 if x == i else x for x in range(1, n + 1)))


def sigma1(n: int) -> PartialInjection:
    """1 -> n, x -> x-2 for 3 <= x <= n; undefined at 2.  Rank n-1, even n only."""
    if n % 2 or n < 2:
        raise OddAmbientError(f"sigma1 needs even ambient size, got {n}")
    img = [0] * n
    img[0] = n
    for x in range(3, n + 1):
        img[x - 1] = x - 2
    return _checked(PartialInjection(n, tuple(img)))


def sigma2(n: int) -> PartialInjection:
    """The inverse of sigma1: x -> x+2 for x <= n-2, n -> 1."""
    return sigma1(n).inverse()


def gamma(n: int, i: int) -> PartialInjection:
    """Reverse {1..i-1} in place, fix {i+1..n}; undefined at i.  i even, 4 <= i <= n."""
    if i % 2 or not 4 <= i <= n:
        raise BadIndexError(f"gamma index must be even in 4..{n}, got {i}")
    img = [0] * n
    for x in range(1, i):
        img[x - 1] = i - x
    for x in range(i + 1, n + 1):
        img[x - 1] = x
    return _checked(PartialInjection(n, tuple(img)))


def delta(n: int, i: int) -> PartialInjection:
    """Fix {1..i-1}, reverse {i+1..n} in place; undefined at i.

    i odd, 1 <= i <= n-3; needs even n (the reversed suffix would flip
    parities otherwise and leave the semigroup).
    """
    if n % 2:
        raise OddAmbientError(f"delta needs even ambient size, got {n}")
    if i % 2 == 0 or not 1 <= i <= n - 3:
        raise BadIndexError(f"delta index must be odd in 1..{n - 3}, got {i}")
    img = [0] * n
    for x in range(1, i):
        img[x - 1] = x
    for x in range(i + 1, n + 1):
        img[x - 1] = n + i + 1 - x
    return _checked(PartialInjection(n, tuple(img)))


def beta(n: int, i: int, j: int) -> PartialInjection:
    """Reverse the open interval (i, j), fix everything outside {i, j}.

    Needs i < j of equal parity; self-inverse, rank n-2.
    """
    if not (1 <= i < j <= n):
        raise BadIndexError(f"beta needs 1 <= i < j <= {n}, got ({i}, {j})")
    if (j - i) % 2:
        raise BadIndexError(f"beta indices must share parity, got ({i}, {j})")
    img = [0] * n
    for x in range(1, n + 1):
        if x == i or x == j:
            continue
        img[x - 1] = i + j - x if i < x < j else x
    return _checked(PartialInjection(n, tuple(img)))


_FAMILIES = ("id", "sig1", "sig2", "eps", "gam", "del", "beta")


@dataclass(frozen=True)
class GeneratorSpec:
    """Symbolic reference to a named generator; serializes as e.g. ``gam:4``."""

    family: str
    i: int | None = None
    j: int | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise BadIndexError(f"unknown family {self.family!r}")

    def text(self) -> str:
        if self.family == "beta":
            return f"beta:{self.i},{self.j}"
        if self.i is not None:
            return f"{self.family}:{self.i}"
        return self.family

    @classmethod
    def parse(cls, text: str) -> "GeneratorSpec":
        name, _, rest = text.strip().partition(":")
        if name == "beta":
            i, _, j = rest.partition(",")
            return cls("beta", int(i), int(j))
        if rest:
            return cls(name, int(rest))
        return cls(name)


def named(n: int, spec: GeneratorSpec) -> PartialInjection:
    """Realize a generator spec as a concrete map on {1..n}."""
    fam = spec.family
    if fam == "id":
        return PartialInjection.identity(n)
    if fam == "sig1":
        return sigma1(n)
    if fam == "sig2":
        return sigma2(n)
    if fam == "eps":
        return epsilon(n, spec.i)
    if fam == "gam":
        return gamma(n, spec.i)
    if fam == "del":
        return delta(n, spec.i)
    return beta(n, spec.i, spec.j)


def _runs(points):
    out = []
    start = prev = None
    for x in points:
        if start is None:
            start = prev = x
        elif x == prev + 1:
            prev = x
        else:
            out.append((start, prev - start + 1))
            start = prev = x
    if start is not None:
        out.append((start, prev - start + 1))
    return out


def set_j(n: int):
    """All elements of rank >= n-2, built by direct high-rank generation.

    Domains omit at most two points (at most three blocks); each block
    maps monotonically onto an interval with matching end parity, so the
    candidate space is tiny and never touches the full monoid.
    """
    if n < 1:
        raise BadIndexError("ambient size must be positive")
    pts = list(range(1, n + 1))
    out = set()
    domains = itertools.chain(
        [()], itertools.combinations(pts, 1), itertools.combinations(pts, 2)
    )
    for omit in domains:
        dom = [x for x in pts if x not in omit]
        blks = _runs(dom)

        def assign(bi, used, img):
            if bi == len(blks):
                a = PartialInjection(n, tuple(img))
                if in_if(a):
                    out.add(a)
                return
            start, length = blks[bi]
            full = (1 << length) - 1
            for t in range(1, n - length + 2):
                mask = full << (t - 1)
                if used & mask:
                    continue
                for desc in (False, True):
                    if length == 1 and desc:
                        continue
                    if length > 1:
                        # in-block parity is forced: the matched endpoint
                        # must agree with the block start mod 2
                        anchor = t + length - 1 if desc else t
                        if (anchor - start) % 2:
                            continue
                    for r in range(length):
                        img[start + r - 1] = (t + length - 1 - r) if desc else (t + r)
                    assign(bi + 1, used | mask, img)
                    for r in range(length):
                        img[start + r - 1] = 0
            return

        assign(0, 0, [0] * n)
    return tuple(sorted(out))


def set_g(n: int):
    """{id, sig1, sig2} + all gammas + all deltas: n+1 elements, even n."""
    if n % 2:
        raise OddAmbientError(f"the distinguished generating set needs even n, got {n}")
    gens = [PartialInjection.identity(n), sigma1(n), sigma2(n)]
    gens += [gamma(n, i) for i in range(4, n + 1, 2)]
    gens += [delta(n, i) for i in range(1, n - 2, 2)]
    assert len(gens) == n + 1
    return tuple(sorted(gens))


# --- expressing elements over set_g ----------------------------------------


def _eta_left(n: int, a: int) -> PartialInjection:
    """1 -> a, x -> x-2 for 3 <= x <= a, fix above a+1 (a even)."""
    img = [0] * n
    img[0] = a
    for x in range(3, a + 1):
        img[x - 1] = x - 2
    for x in range(a + 2, n + 1):
        img[x - 1] = x
    return PartialInjection(n, tuple(img))


def _eta_right(n: int, c: int) -> PartialInjection:
    """x -> x+2 for x <= c-2, c -> 1, fix above c+1 (c even)."""
    img = [0] * n
    for x in range(1, c - 1):
        img[x - 1] = x + 2
    img[c - 1] = 1
    for x in range(c + 2, n + 1):
        img[x - 1] = x
    return PartialInjection(n, tuple(img))


@functools.lru_cache(maxsize=None)
def _g_closure(n: int):
    return closure(n, set_g(n))


@functools.lru_cache(maxsize=None)
def _g_spec_lookup(n: int):
    specs = [GeneratorSpec("id"), GeneratorSpec("sig1"), GeneratorSpec("sig2")]
    specs += [GeneratorSpec("gam", i) for i in range(4, n + 1, 2)]
    specs += [GeneratorSpec("del", i) for i in range(1, n - 2, 2)]
    return {named(n, s): s for s in specs}


def _epsilon_word(n: int, i: int):
    """Two-letter expression for eps_i over set_g; total for even n."""
    if i % 2 == 0:
        if i == 2:
            return [GeneratorSpec("sig1"), GeneratorSpec("sig2")]
        return [GeneratorSpec("gam", i)] * 2
    if i <= n - 3:
        return [GeneratorSpec("del", i)] * 2
    return [GeneratorSpec("sig2"), GeneratorSpec("sig1")]  # i == n-1


def _table_word(n: int, target: PartialInjection):
    """Match ``target`` against the closed identity table; None if no hit.

    Covers the set_g members themselves, every eps_i, the two
    parity-repair shapes, and interval reversals beta_{i,j} whose
    expansion indices stay inside the gamma/delta ranges.  Everything
    else goes to the breadth-first fallback.
    """
    lookup = _g_spec_lookup(n)
    if target in lookup:
        return [lookup[target]]
    dom = target.domain()
    if target.is_partial_identity() and len(dom) == n - 1:
        (i,) = set(range(1, n + 1)) - set(dom)
        return _epsilon_word(n, i)
    for a in range(2, n - 3, 2):
        if target == _eta_left(n, a):
            return [GeneratorSpec("del", a + 1), GeneratorSpec("sig1"), GeneratorSpec("del", a - 1)]
        if target == _eta_right(n, a):
            return [GeneratorSpec("del", a - 1), GeneratorSpec("sig2"), GeneratorSpec("del", a + 1)]
    if len(dom) == n - 2:
        (i, j) = sorted(set(range(1, n + 1)) - set(dom))
        if (j - i) % 2 == 0 and target == beta(n, i, j):
            if i % 2 == 1 and 1 <= n - j + i + 1 <= n - 3:
                return [
                    GeneratorSpec("del", i),
                    GeneratorSpec("del", n - j + i + 1),
                    GeneratorSpec("del", i),
                ]
            if i % 2 == 0 and j - i >= 4:
                return [
                    GeneratorSpec("gam", j),
                    GeneratorSpec("gam", j - i),
                    GeneratorSpec("gam", j),
                ]
    return None


def g_word_for(n: int, target: PartialInjection, table=None):
    """A word over set_g evaluating to ``target``.

    Emits a closed-form identity-table word when the target matches one
    of the known shapes (verified by evaluation); otherwise falls back
    to the shortest discovery word in the Cayley closure of set_g.  The
    returned word records which path produced it.
    """
    from .factor import Word, eval_word

    if n % 2:
        raise OddAmbientError(f"set_g words need even n, got {n}")
    letters = _table_word(n, target)
    if letters is not None:
        word = Word(n, tuple(letters), provenance="table")
        if eval_word(word) == target:
            return word
    if table is None:
        table = _g_closure(n)
    if target not in table:
        raise NotMemberError(f"{target.encode()} is not generated by set_g({n})")
    lookup = _g_spec_lookup(n)
    letters = tuple(lookup[g] for g in table.word_for(target))
    return Word(n, letters, provenance="bfs")

"""Exact arithmetic of partial injective self-maps of {1..n}.

Elements act on the right: ``x(a*b) = (xa)b``, so products read left to
right.  An element is stored as a fixed-length tuple ``img`` where
``img[x-1]`` is the image of ``x`` and 0 means "undefined".  Values are
immutable and freely shareable.
"""

from __future__ import annotations

MAX_N = 32


class OutOfRangeError(ValueError):
    pass


class DuplicateSourceError(ValueError):
    pass


class DuplicateTargetError(ValueError):
    pass


class SizeMismatchError(ValueError):
    pass


class PartialInjection:
    """A partial injective map on {1..n}.

    ``img`` is a length-n tuple of small ints; slot x-1 holds the image of
    x, with 0 as the "undefined" sentinel.  Instances compare and hash by
    (n, img) and sort by img, which gives the canonical total order used
    for deterministic enumeration.
    """

    __slots__ = ("n", "img", "_hash")

    def __init__(self, n: int, img: tuple[int, ...]):
        # Trusted fast constructor: callers guarantee injectivity/range.
        self.n = n
        self.img = img
        self._hash = None

    @classmethod
    def make(cls, n: int, pairs) -> "PartialInjection":
        """Build from (source, target) pairs, validating all invariants."""
        if not 1 <= n <= MAX_N:
            raise OutOfRangeError(f"ambient size must be in 1..{MAX_N}, got {n}")
        img = [0] * n
        seen_targets = set()
        for x, y in pairs:
            if not (1 <= x <= n):
                raise OutOfRangeError(f"source {x} not in 1..{n}")
            if not (1 <= y <= n):
                raise OutOfRangeError(f"target {y} not in 1..{n}")
            if img[x - 1]:
                raise DuplicateSourceError(f"source {x} assigned twice")
            if y in seen_targets:
                raise DuplicateTargetError(f"target {y} hit twice (injectivity)")
            img[x - 1] = y
            seen_targets.add(y)
        return cls(n, tuple(img))

    @classmethod
    def identity(cls, n: int) -> "PartialInjection":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "PartialInjection":
        return cls(n, (0,) * n)

    @classmethod
    def identity_on(cls, n: int, points) -> "PartialInjection":
        """The identity map restricted to the given subset of {1..n}."""
        img = [0] * n
        for x in points:
            if not (1 <= x <= n):
                raise OutOfRangeError(f"point {x} not in 1..{n}")
            img[x - 1] = x
        return cls(n, tuple(img))

    def __call__(self, x: int):
        """Image of x, or None when undefined."""
        if not (1 <= x <= self.n):
            raise OutOfRangeError(f"point {x} not in 1..{self.n}")
        v = self.img[x - 1]
        return v if v else None

    def domain(self) -> tuple[int, ...]:
        return tuple(x for x in range(1, self.n + 1) if self.img[x - 1])

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(v for v in self.img if v))

    @property
    def rank(self) -> int:
        return sum(1 for v in self.img if v)

    def dom_mask(self) -> int:
        m = 0
        for x in range(self.n):
            if self.img[x]:
                m |= 1 << x
        return m

    def im_mask(self) -> int:
        m = 0
        for v in self.img:
            if v:
                m |= 1 << (v - 1)
        return m

    def __mul__(self, other: "PartialInjection") -> "PartialInjection":
        if not isinstance(other, PartialInjection):
            return NotImplemented
        if self.n != other.n:
            raise SizeMismatchError(f"ambient sizes differ: {self.n} != {other.n}")
        b = other.img
        return PartialInjection(self.n, tuple(b[v - 1] if v else 0 for v in self.img))

    def inverse(self) -> "PartialInjection":
        img = [0] * self.n
        for x, v in enumerate(self.img, start=1):
            if v:
                img[v - 1] = x
        return PartialInjection(self.n, tuple(img))

    def is_partial_identity(self) -> bool:
        return all(v == 0 or v == x for x, v in enumerate(self.img, start=1))

    @property
    def key(self) -> tuple[int, ...]:
        """Canonical total-order key: equal keys iff equal maps."""
        return self.img

    def encode(self) -> str:
        """Bit-exact text form, entries sorted by source: ``n=6:[1>3 2>2]``."""
        entries = " ".join(
            f"{x}>{v}" for x, v in enumerate(self.img, start=1) if v
        )
        return f"n={self.n}:[{entries}]"

    def __eq__(self, other):
        return (
            isinstance(other, PartialInjection)
            and self.n == other.n
            and self.img == other.img
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.img))
        return self._hash

    def __lt__(self, other: "PartialInjection"):
        if self.n != other.n:
            raise SizeMismatchError("cannot order maps of different ambient size")
        return self.img < other.img

    def __repr__(self):
        return f"<pinj {self.encode()}>"


def parse(text: str) -> PartialInjection:
    """Inverse of :meth:`PartialInjection.encode`."""
    text = text.strip()
    if not text.startswith("n="):
        raise ValueError(f"bad element literal: {text!r}")
    head, _, body = text.partition(":")
    try:
        n = int(head[2:])
    except ValueError:
        raise ValueError(f"bad ambient size in {text!r}") from None
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"bad element literal: {text!r}")
    inner = body[1:-1].strip()
    pairs = []
    if inner:
        for tok in inner.split():
            x, _, y = tok.partition(">")
            pairs.append((int(x), int(y)))
    return PartialInjection.make(n, pairs)


def make(n: int, pairs) -> PartialInjection:
    return PartialInjection.make(n, pairs)


def compose(a: PartialInjection, b: PartialInjection) -> PartialInjection:
    """Right-action composition: x(ab) = (xa)b."""
    return a * b


def inverse(a: PartialInjection) -> PartialInjection:
    return a.inverse()


def identity_on(n: int, points) -> PartialInjection:
    return PartialInjection.identity_on(n, points)


def canonical_key(a: PartialInjection) -> tuple[int, ...]:
    return a.key

import pytest

from fencemonoid import fence, pinj
from fencemonoid.fence import Membership
from fencemonoid.pinj import OutOfRangeError, PartialInjection

ALPHA = pinj.make(6, {(1, 3), (2, 2), (4, 6), (5, 5), (6, 4)})


def test_fence_less_examples():
    assert fence.fence_less(6, 1, 2)
    assert fence.fence_less(6, 3, 2)
    assert not fence.fence_less(6, 2, 3)
    assert not fence.fence_less(6, 2, 4)
    assert not fence.fence_less(6, 1, 1)


def test_fence_less_out_of_range():
    with pytest.raises(OutOfRangeError):
        fence.fence_less(6, 0, 1)
    with pytest.raises(OutOfRangeError):
        fence.fence_less(6, 1, 7)


def test_every_point_minimal_or_maximal():
    n = 7
    for x in range(1, n + 1):
        below = any(fence.fence_less(n, y, x) for y in range(1, n + 1))
        above = any(fence.fence_less(n, x, y) for y in range(1, n + 1))
        if x % 2 == 1:
            assert not below and above  # odd points are minimal
        else:
            assert below and not above  # even points are maximal


def test_counterexample_is_one_way_only():
    assert fence.membership(ALPHA) is Membership.PFI_ONLY
    assert fence.membership(ALPHA.inverse()) is Membership.NOT_PFI


def test_identity_and_singletons_are_if():
    assert fence.membership(PartialInjection.identity(5)) is Membership.IF
    assert fence.membership(pinj.make(6, {(1, 2)})) is Membership.IF


def test_small_domains_vacuously_if(table):
    for a in table(4, "I"):
        if a.rank <= 1:
            assert fence.in_if(a)


def test_if_iff_both_directions_preserve(table):
    for a in table(6, "I"):
        both = fence.membership(a) is not Membership.NOT_PFI and fence.membership(
            a.inverse()
        ) is not Membership.NOT_PFI
        assert (fence.membership(a) is Membership.IF) == both


def test_if_closed_under_product_and_inverse(table):
    elements = table(5).elements
    for a in elements:
        assert fence.in_if(a.inverse())
        for b in elements:
            assert fence.in_if(a * b)


def test_require_if_raises():
    with pytest.raises(fence.NotInIFError):
        fence.require_if(ALPHA)

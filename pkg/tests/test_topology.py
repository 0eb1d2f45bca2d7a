from itertools import combinations
from math import comb

import pytest
from hypothesis import given, strategies as st

from combicache.errors import ParameterError
from combicache.topology import build, common_users, relays_of_user, users_of_relay


def test_h4_r2_network(net42):
    assert net42.K == 6
    assert net42.users[0] == (1, 2)
    assert net42.users[5] == (3, 4)
    assert users_of_relay(net42, 1) == {1, 2, 3}
    assert relays_of_user(net42, 1) == {1, 2}
    assert common_users(net42, {1, 2}) == {1}


def test_h5_r3_sizes_and_relay_lists(net53):
    assert (net53.K, net53.K1, net53.K2) == (10, 6, 10)
    assert users_of_relay(net53, 1) == set(range(1, 7))
    assert users_of_relay(net53, 2) == {1, 2, 3, 7, 8, 9}
    assert users_of_relay(net53, 3) == {1, 4, 5, 7, 8, 10}
    assert users_of_relay(net53, 4) == {2, 4, 6, 7, 9, 10}
    assert users_of_relay(net53, 5) == {3, 5, 6, 8, 9, 10}


def test_h4_r2_common_users(net42):
    listing = {1: {1, 2, 3}, 2: {1, 4, 5}, 3: {2, 4, 6}, 4: {3, 5, 6}}
    for h, users in listing.items():
        assert common_users(net42, [h]) == users
    # user 3 is in both P_{4} and P_{1} and nowhere else
    assert {h for h, users in listing.items() if 3 in users} == {1, 4}
    assert relays_of_user(net42, 3) == {1, 4}


def test_full_connectivity():
    net = build(4, 4)
    assert net.K == 1
    assert relays_of_user(net, 1) == {1, 2, 3, 4}
    assert all(users_of_relay(net, h) == {1} for h in net.relays)


def test_rebuild_is_identical():
    assert build(6, 3).users == build(6, 3).users
    assert build(6, 3) == build(6, 3)


@pytest.mark.parametrize("H,r", [(0, 0), (3, 0), (3, 4), (2, -1)])
def test_bad_parameters(H, r):
    with pytest.raises(ParameterError):
        build(H, r)


def test_out_of_range_ids(net42):
    with pytest.raises(ParameterError):
        users_of_relay(net42, 5)
    with pytest.raises(ParameterError):
        relays_of_user(net42, 0)
    with pytest.raises(ParameterError):
        common_users(net42, [])


nets = st.integers(1, 8).flatmap(lambda H: st.tuples(st.just(H), st.integers(1, H)))


@given(nets)
def test_counting_invariants(Hr):
    H, r = Hr
    net = build(H, r)
    assert net.K == comb(H, r)
    assert len(set(net.users)) == net.K
    assert all(len(relays_of_user(net, k)) == r for k in range(1, net.K + 1))
    assert all(len(users_of_relay(net, h)) == net.K1 for h in net.relays)
    assert sum(len(users_of_relay(net, h)) for h in net.relays) == r * net.K
    for j in range(1, r + 1):
        for J in combinations(net.relays, j):
            assert len(common_users(net, J)) == comb(H - j, r - j)
    for k in range(1, net.K + 1):
        assert common_users(net, relays_of_user(net, k)) == {k}


@given(nets)
def test_users_sharing_r_minus_1_relays_differ_elsewhere(Hr):
    H, r = Hr
    if r < 2:
        return
    net = build(H, r)
    for Y in combinations(net.relays, r - 1):
        P = common_users(net, Y)
        assert len(P) == H - r + 1
        extra = [relays_of_user(net, k) - set(Y) for k in P]
        assert all(len(e) == 1 for e in extra)
        assert len(set().union(*extra)) == len(P)


@given(nets, st.data())
def test_common_users_of_union(Hr, data):
    H, r = Hr
    net = build(H, r)
    J1 = data.draw(st.sets(st.integers(1, H), min_size=1))
    J2 = data.draw(st.sets(st.integers(1, H), min_size=1))
    assert common_users(net, J1 | J2) == common_users(net, J1) & common_users(net, J2)
    if len(J1) > r:
        assert common_users(net, J1) == frozenset()

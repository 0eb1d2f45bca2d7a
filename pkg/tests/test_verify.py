from math import comb

import pytest

from combicache.delivery import build_delivery, load_report
from combicache.errors import ParameterError
from combicache.placement import (
    SymbolId,
    asym_coded_placement,
    asym_uncoded_placement,
    improved_placement,
    make_layout,
    man_placement,
    place_bits,
    required_block_size,
)
from combicache.topology import build
from combicache.verify import decode_user, message_payload, simulate


def _cases():
    out = []
    for H, r in [(4, 2), (5, 2), (5, 3), (4, 3), (6, 3), (5, 4)]:
        net = build(H, r)
        out.append((H, r, "asym", None))
        for g in range(2, net.K1 + 1):
            if comb(net.K2, net.K1 - g + 1) <= 2000:
                out.append((H, r, "coded", g))
                out.append((H, r, "improved", g))
        for t in sorted({0, 1, 2, net.K - 1}):
            out.append((H, r, "man", t))
    return out


@pytest.mark.parametrize("H,r,scheme,param", _cases())
def test_end_to_end_recovery(H, r, scheme, param):
    net = build(H, r)
    N = net.K
    layout = make_layout(net, N, scheme, g=param if scheme != "man" else None,
                         t=param if scheme == "man" else None)
    B = required_block_size(layout, net) * 3
    for seed in (0, 1, 2):
        run = simulate(net, layout, range(1, N + 1), B, seed)
        assert run.ok, [res.to_dict() for res in run.results.values() if not res.ok]


def test_repeated_demands_recover(net42):
    layout = asym_coded_placement(net42, 3, 2)
    run = simulate(net42, layout, [1, 1, 2, 3, 3, 2], required_block_size(layout) * 2, 5)
    assert run.ok


def test_full_memory_needs_no_delivery(net42):
    layout = man_placement(net42, 6, net42.K)
    run = simulate(net42, layout, range(1, 7), 64, 3)
    assert run.ok and sum(run.relay_bytes) == 0
    assert all(not t for t in run.transcripts.values())


@pytest.mark.parametrize("scheme,g", [("coded", 2), ("asym", None), ("man", 2)])
def test_byte_accounting_matches_load(net53, scheme, g):
    layout = make_layout(net53, 10, scheme, g=g if scheme == "coded" else None,
                         t=g if scheme == "man" else None)
    B = required_block_size(layout, net53) * 7
    plan = build_delivery(net53, layout, range(1, 11))
    rep = load_report(plan)
    run = simulate(net53, layout, range(1, 11), B, 0, plan=plan)
    assert run.ok
    for key, load in rep.R_hk.items():
        assert run.link_bytes[key] == load * B
    for h, load in enumerate(rep.R_h):
        assert run.relay_bytes[h] == load * B


def test_tamper_detected(net42):
    layout = asym_coded_placement(net42, 6, 2)
    B = required_block_size(layout) * 4
    clean = simulate(net42, layout, range(1, 7), B, 11)
    assert clean.ok
    for i in (0, 5, 11):
        run = simulate(net42, layout, range(1, 7), B, 11, tamper=(i, 3))
        bad = [k for k, res in run.results.items() if not res.ok]
        assert bad, f"flipping a byte in message {i} went unnoticed"


def test_tamper_uncoded(net53):
    layout = asym_uncoded_placement(net53, 10)
    run = simulate(net53, layout, range(1, 11), 40, 2, tamper=(0, 0))
    assert not run.ok


def test_deterministic_reruns(net53):
    layout = improved_placement(net53, 10, 3)
    B = required_block_size(layout) * 2
    a = simulate(net53, layout, range(1, 11), B, 42).to_dict(dump_bytes=True)
    b = simulate(net53, layout, range(1, 11), B, 42).to_dict(dump_bytes=True)
    c = simulate(net53, layout, range(1, 11), B, 43).to_dict(dump_bytes=True)
    assert a == b
    assert a["files"] != c["files"]


def test_block_size_checked(net42):
    layout = asym_coded_placement(net42, 6, 2)
    with pytest.raises(ParameterError):
        simulate(net42, layout, range(1, 7), 15, 0)


def test_dropped_message_names_missing_symbol(net42):
    layout = asym_coded_placement(net42, 6, 2)
    B = required_block_size(layout)
    import numpy as np
    rng = np.random.default_rng(0)
    files = [rng.bytes(B) for _ in range(6)]
    cache = place_bits(layout, files)
    plan = build_delivery(net42, layout, range(1, 7))
    from combicache.placement import encode_library
    coded = encode_library(layout, files)

    def lookup(sid):
        return coded[sid.file][layout.index[sid.key]]

    inbox = [(m, message_payload(m, B, lookup)) for m in plan.messages if 1 in m.targets]
    ok = decode_user(net42, layout, 1, cache.users[1], inbox, 1, cache.symbol_bytes)
    assert ok.ok and ok.data == files[0]
    dropped = inbox[0][0]
    lost = next(ts for ts in dropped.tsets if ts.user == 1).pieces[0].symbol
    res = decode_user(net42, layout, 1, cache.users[1], inbox[1:], 1, cache.symbol_bytes)
    assert not res.ok
    assert res.missing == [lost]
    assert isinstance(lost, SymbolId) and lost.file == 1

"""Bit-exact end-to-end simulation: random files, placement, multicast
delivery, per-user XOR cancellation and MDS decoding."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .combinatorics import CollectionClass, classify
from .delivery import DeliveryPlan, MulticastMessage, build_delivery, load_report
from .errors import CodecError, ParameterError
from .mdscodec import mds_decode
from .placement import PlacementLayout, SymbolId, encode_library, fill_caches, required_block_size
from .topology import CombinationNetwork, relays_of_user

RNG_ALGORITHM = "numpy.random.default_rng(PCG64).bytes"


@dataclass
class DecodeResult:
    user: int
    ok: bool
    data: bytes | None = None
    missing: list[SymbolId] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "user": self.user,
            "ok": self.ok,
            "missing": [[s.file, repr(s.key)] for s in self.missing],
            "errors": self.errors,
        }


@dataclass
class SimulationRun:
    seed: int
    B: int
    demand: tuple[int, ...]
    files: list[bytes]
    transcripts: dict[int, list[tuple[int, tuple[int, ...], int]]]
    results: dict[int, DecodeResult]
    link_bytes: dict[tuple[int, int], int]
    relay_bytes: list[int]
    rng: str = RNG_ALGORITHM

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    @property
    def recovered(self) -> int:
        return sum(r.ok for r in self.results.values())

    def to_dict(self, dump_bytes: bool = False) -> dict:
        out = {
            "seed": self.seed,
            "rng": self.rng,
            "B": self.B,
            "demand": list(self.demand),
            "recovered": self.recovered,
            "users": len(self.results),
            "ok": self.ok,
            "relay_bytes": self.relay_bytes,
            "link_bytes": [
                {"relay": h, "user": k, "bytes": b} for (h, k), b in sorted(self.link_bytes.items())
            ],
            "transcripts": {
                str(k): [{"relay": h, "targets": list(J), "bytes": n} for h, J, n in t]
                for k, t in sorted(self.transcripts.items())
            },
            "results": [self.results[k].to_dict() for k in sorted(self.results)],
        }
        if dump_bytes:
            out["files"] = [f.hex() for f in self.files]
        return out


def _xor_into(acc: bytearray, data: bytes) -> None:
    n = len(data)
    if not n:
        return
    a = np.frombuffer(acc, dtype=np.uint8, count=n)
    a ^= np.frombuffer(data, dtype=np.uint8)


def _piece(symbol: bytes, part: int, parts: int) -> bytes:
    step = len(symbol) // parts
    return symbol[part * step:(part + 1) * step]


def message_payload(msg: MulticastMessage, B: int, lookup) -> bytes:
    """XOR of the message's T-sets, each zero-extended to the message length."""
    size = msg.length * B
    if size.denominator != 1:
        raise ParameterError(f"message length {msg.length} * B is not a whole byte count")
    out = bytearray(int(size))
    for ts in msg.tsets:
        _xor_into(out, b"".join(_piece(lookup(p.symbol), p.part, p.parts) for p in ts.pieces))
    return bytes(out)


def decode_user(net: CombinationNetwork, layout: PlacementLayout, k: int,
                cache_slice: dict[SymbolId, bytes],
                messages: Sequence[tuple[MulticastMessage, bytes]],
                file: int, symbol_bytes: int) -> DecodeResult:
    """Recover file ``file`` for user k from its cache and received messages."""
    Hk = relays_of_user(net, k)
    errors: list[str] = []
    parts: dict[SymbolId, tuple[int, dict[int, bytes]]] = {}
    for msg, payload in messages:
        if msg.relay not in Hk or k not in msg.targets:
            errors.append(f"message at relay {msg.relay} to {msg.targets} not addressed to user {k}")
            continue
        own = [ts for ts in msg.tsets if ts.user == k]
        if not own:
            continue
        buf = bytearray(payload)
        cancelled = True
        for ts in msg.tsets:
            if ts.user == k:
                continue
            for p in ts.pieces:
                if p.symbol not in cache_slice:
                    errors.append(f"cannot cancel {p.symbol} in message at relay {msg.relay}")
                    cancelled = False
            if cancelled:
                _xor_into(buf, b"".join(_piece(cache_slice[p.symbol], p.part, p.parts)
                                        for p in ts.pieces))
        if not cancelled:
            continue
        offset = 0
        for p in own[0].pieces:
            step = symbol_bytes // p.parts
            parts.setdefault(p.symbol, (p.parts, {}))[1][p.part] = bytes(buf[offset:offset + step])
            offset += step

    have: dict[int, bytes] = {}
    for key in layout.keys:
        sid = SymbolId(file, key)
        if sid in cache_slice:
            have[layout.index[key]] = cache_slice[sid]
        elif sid in parts:
            count, got = parts[sid]
            if len(got) == count:
                have[layout.index[key]] = b"".join(got[i] for i in range(count))

    need = layout.subpacketization
    if len(have) < need or (layout.mds is None and len(have) < layout.n):
        missing = [SymbolId(file, key) for key in _expected_deliveries(layout, k)
                   if layout.index[key] not in have]
        return DecodeResult(k, False, missing=missing, errors=errors)
    try:
        if layout.mds is None:
            source = [have[j] for j in range(layout.n)]
        else:
            source = mds_decode(layout.mds, have)
    except CodecError as exc:
        return DecodeResult(k, False, errors=[*errors, str(exc)])
    return DecodeResult(k, True, data=b"".join(source), errors=errors)


def _expected_deliveries(layout: PlacementLayout, k: int) -> list:
    if layout.scheme == "man":
        return [key for key in layout.keys if k not in layout.cached_by[key]]
    return [key for key in layout.keys
            if classify(layout.net, key, k) is CollectionClass.DELIVERED]


def simulate(net: CombinationNetwork, layout: PlacementLayout, d: Sequence[int], B: int,
             seed: int, tamper: tuple[int, int] | None = None,
             plan: DeliveryPlan | None = None) -> SimulationRun:
    """Run placement and delivery on random files and decode at every user.

    ``tamper=(message_index, byte_offset)`` flips that byte before forwarding.
    """
    B0 = required_block_size(layout, net)
    if B <= 0 or B % B0:
        raise ParameterError(f"B={B} must be a positive multiple of {B0}")
    rng = np.random.default_rng(seed)
    files = [rng.bytes(B) for _ in range(layout.N)]
    coded = encode_library(layout, files)
    cache = fill_caches(layout, coded)
    plan = plan or build_delivery(net, layout, d)

    def server_lookup(sid: SymbolId) -> bytes:
        return coded[sid.file][layout.index[sid.key]]

    payloads = [message_payload(m, B, server_lookup) for m in plan.messages]
    if tamper is not None:
        i, off = tamper
        buf = bytearray(payloads[i])
        buf[off] ^= 0xFF
        payloads[i] = bytes(buf)

    relay_bytes = [0] * net.H
    link_bytes = {key: 0 for key in load_report(plan).R_hk}
    inbox: dict[int, list] = {k: [] for k in range(1, net.K + 1)}
    for msg, data in zip(plan.messages, payloads):
        relay_bytes[msg.relay - 1] += len(data)
        for k in msg.targets:
            link_bytes[(msg.relay, k)] += len(data)
            inbox[k].append((msg, data))

    results = {}
    for k in range(1, net.K + 1):
        want = plan.demand[k - 1]
        res = decode_user(net, layout, k, cache.users[k], inbox[k], want, cache.symbol_bytes)
        if res.ok and res.data != files[want - 1]:
            res = DecodeResult(k, False, errors=[*res.errors, "reconstructed bytes differ"])
        results[k] = res
    transcripts = {k: [(m.relay, m.targets, len(b)) for m, b in inbox[k]] for k in inbox}
    return SimulationRun(seed, B, plan.demand, files, transcripts, results, link_bytes, relay_bytes)

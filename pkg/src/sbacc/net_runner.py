"""TCP master/worker deployment of the SBACC pipeline.

Wire format, all integers little-endian::

    u32 length | u32 kind | u32 worker_index | u32 rows | u32 cols | rows*cols f64

``length`` counts everything after itself, so it is ``16 + 8 * rows * cols``.
A worker opens with ``Hello`` (its preferred index, or ``ANY_INDEX``), the
master answers with one ``Share`` and the worker replies with one ``Result``.
The master ends every connection with ``Shutdown``. Workers that do not
answer before the round deadline, or that send a malformed frame, become
stragglers. The surviving returns go through :func:`protocol.finish_sbacc`
unchanged, so a network run equals the in-process run on the same payloads.
"""

from __future__ import annotations

import argparse
import enum
import socket
import struct
import sys
import threading
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import protocol as P
from .config import ConfigError, ExperimentConfig, load_config

HEADER = struct.Struct("<IIII")
LENGTH = struct.Struct("<I")
ANY_INDEX = 0xFFFFFFFF
MAX_FRAME = 1 << 30

DEFAULT_DEADLINE = 5.0


class Kind(enum.IntEnum):
    HELLO = 0
    SHARE = 1
    RESULT = 2
    SHUTDOWN = 3


class ProtocolError(ConnectionError):
    """A frame broke the wire format."""


@dataclass(frozen=True)
class WireMessage:
    kind: Kind
    worker_index: int
    payload: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.payload, dtype="<f8")
        if p.ndim != 2:
            raise ValueError("payload must be a matrix")
        if self.kind in (Kind.HELLO, Kind.SHUTDOWN) and p.size:
            raise ValueError(f"{self.kind.name} carries no payload")
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "payload", p)

    @classmethod
    def control(cls, kind: Kind, worker_index: int = 0) -> "WireMessage":
        return cls(kind, worker_index, np.zeros((0, 0)))


def encode_message(msg: WireMessage) -> bytes:
    rows, cols = msg.payload.shape
    body = HEADER.pack(int(msg.kind), msg.worker_index, rows, cols) + msg.payload.tobytes()
    return LENGTH.pack(len(body)) + body


def decode_body(body: bytes) -> WireMessage:
    if len(body) < HEADER.size:
        raise ProtocolError("frame shorter than its header")
    kind, index, rows, cols = HEADER.unpack_from(body)
    if len(body) != HEADER.size + 8 * rows * cols:
        raise ProtocolError(f"frame length {len(body)} does not match {rows}x{cols}")
    try:
        kind = Kind(kind)
    except ValueError as exc:
        raise ProtocolError(f"unknown frame kind {kind}") from exc
    payload = np.frombuffer(body, dtype="<f8", offset=HEADER.size).reshape(rows, cols)
    try:
        return WireMessage(kind, index, payload.copy())
    except ValueError as exc:
        raise ProtocolError(str(exc)) from exc


def decode_message(frame: bytes) -> WireMessage:
    if len(frame) < LENGTH.size or LENGTH.unpack_from(frame)[0] != len(frame) - LENGTH.size:
        raise ProtocolError("bad length prefix")
    return decode_body(frame[LENGTH.size:])


def _recv_exact(sock: socket.socket, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise ConnectionError("peer closed the connection")
        buf += chunk
    return bytes(buf)


def recv_message(sock: socket.socket) -> WireMessage:
    (length,) = LENGTH.unpack(_recv_exact(sock, LENGTH.size))
    if length > MAX_FRAME:
        raise ProtocolError(f"frame of {length} bytes exceeds the limit")
    return decode_body(_recv_exact(sock, length))


def send_message(sock: socket.socket, msg: WireMessage) -> None:
    sock.sendall(encode_message(msg))


def parse_addr(addr: str | tuple[str, int]) -> tuple[str, int]:
    if isinstance(addr, tuple):
        return addr
    host, sep, port = addr.rpartition(":")
    if not sep:
        raise ConfigError(f"address {addr!r} is not host:port")
    try:
        return host or "0.0.0.0", int(port)
    except ValueError as exc:
        raise ConfigError(f"bad port in {addr!r}") from exc


# --------------------------------------------------------------------------- worker


@dataclass(frozen=True)
class Fault:
    mode: str = "honest"
    sigma_a2: float = 0.0

    @classmethod
    def parse(cls, text: str) -> "Fault":
        mode, _, arg = text.strip().lower().partition(":")
        if mode in ("honest", "straggler") and not arg:
            return cls(mode)
        if mode == "adversary":
            try:
                s2 = float(arg) if arg else 1e4
            except ValueError as exc:
                raise ConfigError(f"bad adversary variance {arg!r}") from exc
            if s2 < 0:
                raise ConfigError("adversary variance must be non-negative")
            return cls(mode, s2)
        raise ConfigError(f"unknown fault {text!r}")


def worker_payload(share: np.ndarray, f: P.TargetFunction | str, fault: Fault,
                   worker_index: int, seed: int = 0, sigma_p2: float = 0.0) -> np.ndarray:
    """What worker ``worker_index`` returns for ``share`` (deterministic in ``seed``)."""
    f = P.get_function(f)
    rng = np.random.default_rng([int(seed), int(worker_index)])
    noise = rng.standard_normal((2, *share.shape))
    out = f(share)
    if sigma_p2 > 0:
        out = out + noise[0] * np.sqrt(sigma_p2)
    if fault.mode == "adversary":
        out = out + noise[1] * np.sqrt(fault.sigma_a2)
    return out


def _connect(addr, timeout, retry: float) -> socket.socket:
    give_up = time.monotonic() + retry
    while True:
        try:
            return socket.create_connection(addr, timeout=timeout)
        except ConnectionRefusedError:
            if time.monotonic() >= give_up:
                raise
            time.sleep(0.1)


def worker_serve(connect_addr, f: P.TargetFunction | str, fault: Fault | str = "honest",
                 worker_index: int = ANY_INDEX, seed: int = 0, sigma_p2: float = 0.0,
                 timeout: float | None = 60.0, connect_retry: float = 0.0) -> int:
    """Serve one master; returns a process exit code (0 after ``Shutdown``).

    A refused connection is retried for ``connect_retry`` seconds, for
    workers started before their master listens.
    """
    fault = Fault.parse(fault) if isinstance(fault, str) else fault
    f = P.get_function(f)
    try:
        with _connect(parse_addr(connect_addr), timeout, connect_retry) as sock:
            send_message(sock, WireMessage.control(Kind.HELLO, worker_index))
            while True:
                msg = recv_message(sock)
                if msg.kind is Kind.SHUTDOWN:
                    return 0
                if msg.kind is not Kind.SHARE:
                    raise ProtocolError(f"unexpected {msg.kind.name} from master")
                if fault.mode == "straggler":
                    continue
                out = worker_payload(msg.payload, f, fault, msg.worker_index, seed, sigma_p2)
                send_message(sock, WireMessage(Kind.RESULT, msg.worker_index, out))
    except (OSError, ProtocolError) as exc:
        print(f"worker: {exc}", file=sys.stderr)
        return 1


# --------------------------------------------------------------------------- master


def _accept_workers(server: socket.socket, n_workers: int, deadline: float) -> dict[int, socket.socket]:
    conns: dict[int, socket.socket] = {}
    while len(conns) < n_workers:
        left = deadline - time.monotonic()
        if left <= 0:
            break
        server.settimeout(left)
        try:
            sock, _ = server.accept()
        except socket.timeout:
            break
        sock.settimeout(max(deadline - time.monotonic(), 0.05))
        try:
            hello = recv_message(sock)
            if hello.kind is not Kind.HELLO:
                raise ProtocolError("expected Hello")
        except (OSError, ProtocolError):
            sock.close()
            continue
        want = hello.worker_index
        if want == ANY_INDEX or want >= n_workers or want in conns:
            want = min(set(range(n_workers)) - conns.keys())
        conns[want] = sock
    return conns


def _collect_result(sock: socket.socket, index: int, share: np.ndarray, deadline: float,
                    results: dict, lock: threading.Lock) -> None:
    try:
        sock.settimeout(max(deadline - time.monotonic(), 1e-3))
        send_message(sock, WireMessage(Kind.SHARE, index, share))
        sock.settimeout(max(deadline - time.monotonic(), 1e-3))
        msg = recv_message(sock)
        if msg.kind is not Kind.RESULT or msg.worker_index != index or msg.payload.shape != share.shape:
            raise ProtocolError("malformed Result")
    except (OSError, ProtocolError):
        return
    if time.monotonic() <= deadline:
        with lock:
            results[index] = msg.payload


def gather_returns(cfg: ExperimentConfig, shares: np.ndarray, server: socket.socket,
                   connect_deadline: float = DEFAULT_DEADLINE,
                   round_deadline: float = DEFAULT_DEADLINE) -> list[P.WorkerReturn]:
    """Run one round over ``server``; missing or late workers are stragglers."""
    conns = _accept_workers(server, cfg.N, time.monotonic() + connect_deadline)
    results: dict[int, np.ndarray] = {}
    lock = threading.Lock()
    deadline = time.monotonic() + round_deadline
    threads = [threading.Thread(target=_collect_result,
                                args=(s, i, shares[i], deadline, results, lock), daemon=True)
               for i, s in conns.items()]
    for t in threads:
        t.start()
    for t in threads:
        t.join(max(deadline - time.monotonic(), 0.0))
    with lock:
        final = dict(results)
    for i, s in conns.items():
        try:
            s.settimeout(0.5)
            send_message(s, WireMessage.control(Kind.SHUTDOWN, i))
        except OSError:
            pass
        finally:
            s.close()
    return [P.WorkerReturn(i, final[i]) if i in final else P.WorkerReturn(i, None, is_straggler=True)
            for i in range(cfg.N)]


def master_serve(cfg: ExperimentConfig, listen_addr, ds: P.Dataset | None = None,
                 connect_deadline: float = DEFAULT_DEADLINE,
                 round_deadline: float = DEFAULT_DEADLINE,
                 on_listen: Callable[[tuple[str, int]], None] | None = None) -> P.RunResult:
    """Distribute shares to TCP workers, collect results and decode as :func:`run_sbacc`.

    ``on_listen`` receives the bound address (useful with port 0).
    """
    ds = P.random_dataset(cfg) if ds is None else ds
    shares = P.encode_shares(ds, cfg.N, P.Scheme.SBACC)
    with socket.create_server(parse_addr(listen_addr)) as server:
        if on_listen is not None:
            on_listen(server.getsockname()[:2])
        returns = gather_returns(cfg, shares, server, connect_deadline, round_deadline)
    if sum(not r.is_straggler for r in returns) < 2:
        raise P.NotReconstructableError("fewer than two workers returned a result")
    return P.finish_sbacc(ds, cfg.function, cfg, returns)


# --------------------------------------------------------------------------- CLI


def master_main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="sbacc-master")
    ap.add_argument("--listen", default="0.0.0.0:7070")
    ap.add_argument("--config", required=True)
    ap.add_argument("--deadline", type=float, default=DEFAULT_DEADLINE,
                    help="seconds for both the connect and the result round")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
        res = master_serve(cfg, args.listen, connect_deadline=args.deadline,
                           round_deadline=args.deadline)
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except P.NotReconstructableError as exc:
        print(f"master: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    print(f"used_workers = {','.join(map(str, res.used_workers))}")
    print(f"stragglers = {','.join(map(str, res.stragglers))}")
    print(f"located = {','.join(map(str, res.decode_stats.located))}")
    print(f"avg_rel_error = {res.avg_rel_error:.15e}")
    print(f"avg_rel_error_db = {res.avg_rel_error_db:.6f}")
    return 0


def worker_main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="sbacc-worker")
    ap.add_argument("--connect", required=True)
    ap.add_argument("--function", default="exp")
    ap.add_argument("--fault", default="honest", help="honest | straggler | adversary:<variance>")
    ap.add_argument("--index", type=int, default=ANY_INDEX)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sigma-p2", type=float, default=0.0)
    ap.add_argument("--retry", type=float, default=10.0,
                    help="seconds to keep retrying a refused connection")
    args = ap.parse_args(argv)
    try:
        fault = Fault.parse(args.fault)
        f = P.get_function(args.function)
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return worker_serve(args.connect, f, fault, args.index, args.seed, args.sigma_p2,
                        connect_retry=args.retry)


__all__ = [
    "ANY_INDEX", "Fault", "Kind", "ProtocolError", "WireMessage", "decode_message",
    "encode_message", "gather_returns", "master_main", "master_serve", "recv_message",
    "send_message", "worker_main", "worker_payload", "worker_serve",
]

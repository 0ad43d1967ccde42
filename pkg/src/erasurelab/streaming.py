"""Diagonal embedding of a block code into a packet stream, plus the
streaming-code verifier and a small simulation harness.

A systematic [n, k] block code is spread along diagonals: the codeword
started at time t occupies position j of packet t+j (0-based), so packet s
carries message symbols u_0(s)..u_{k-1}(s) in its first k positions and one
parity symbol of each of the n-k most recent diagonals after that. Messages
before time 0 are zero. A whole erased packet erases one coordinate in each
of the n diagonals crossing it; each diagonal is decoded (if possible) when
its last symbol arrives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .channel import (
    ChannelParams,
    VerificationReport,
    _mask_admissible,
    _verify_family,
    decode_erasures,
    enumerate_admissible_windows,
)
from .codes import LinearCode, _systematic_generator
from .errors import (
    BadParameters,
    BadProbability,
    DimensionMismatch,
    LengthMismatch,
    ParameterViolation,
    Unrecoverable,
    UnsupportedDelay,
)

GE_ALGORITHM = "python-random-mt19937"


@dataclass(frozen=True)
class StreamingParams:
    """Channel parameters plus the per-message decoding deadline tau."""

    channel: ChannelParams
    tau: int

    def __post_init__(self):
        if self.tau < self.channel.w - 1:
            raise BadParameters(
                f"need tau >= w-1 = {self.channel.w - 1}, got {self.tau}"
            )


@dataclass(frozen=True)
class PacketStream:
    """An encoded packet sequence with an (optional) erasure set.

    packets has message_count + n - 1 entries so every diagonal that carries
    a real message is complete. erased holds slot indices whose packets were
    lost; the decoder never reads those entries.
    """

    q: int
    n: int
    k: int
    message_count: int
    packets: tuple[tuple[int, ...], ...]
    erased: frozenset[int]

    def __post_init__(self):
        if len(self.packets) != self.message_count + self.n - 1:
            raise DimensionMismatch("packet count must be message_count + n - 1")
        if any(len(p) != self.n for p in self.packets):
            raise DimensionMismatch("every packet must carry n symbols")
        if any(not 0 <= t < len(self.packets) for t in self.erased):
            raise BadParameters("erased slot index out of range")

    def with_erasures(self, indices) -> "PacketStream":
        return PacketStream(
            self.q,
            self.n,
            self.k,
            self.message_count,
            self.packets,
            frozenset(int(i) for i in indices),
        )


@dataclass(frozen=True)
class DecodeTrace:
    """Per-message decoding outcome.

    times[t] is the slot at which message t was fully known (None if never),
    deadlines[t] = t + tau, misses[t] flags a message that was recovered but
    only after its deadline. messages[t] is the recovered vector (None if
    decoding failed).
    """

    times: tuple
    deadlines: tuple[int, ...]
    misses: tuple[bool, ...]
    messages: tuple

    @property
    def messages_failed(self) -> int:
        return sum(1 for t in self.times if t is None)

    @property
    def deadline_misses(self) -> int:
        return sum(1 for m in self.misses if m)


def de_encode(code: LinearCode, messages) -> PacketStream:
    """Encode message packets (length-k vectors) into a diagonal stream.

    Raises NotSystematic when the code has no [I_k | P] generator.
    """
    g = _systematic_generator(code)
    f = code.field
    n, k = code.n, code.k
    msgs = []
    for vec in messages:
        vec = [f.check(x) for x in vec]
        if len(vec) != k:
            raise LengthMismatch(f"message must have k={k} symbols, got {len(vec)}")
        msgs.append(tuple(vec))
    if not msgs:
        raise BadParameters("need at least one message packet")
    t_count = len(msgs)

    def u(t: int, i: int) -> int:
        return msgs[t][i] if 0 <= t < t_count else 0

    packets = []
    for s in range(t_count + n - 1):
        pkt = [u(s, j) for j in range(k)]
        for j in range(k, n):
            acc = 0
            d = s - j  # diagonal started at time d puts position j in slot s
            for i in range(k):
                x = u(d + i, i)
                if x:
                    acc = f.add(acc, f.mul(x, g.data[i][j]))
            pkt.append(acc)
        packets.append(tuple(pkt))
    return PacketStream(f.q, n, k, t_count, tuple(packets), frozenset())


def _diagonal_word(stream: PacketStream, d: int):
    """Received view (None = erased) of the diagonal started at time d."""
    word = []
    for j in range(stream.n):
        s = d + j
        if s < 0:
            word.append(0)  # pre-stream symbols come from all-zero messages
        elif s in stream.erased:
            word.append(None)
        else:
            word.append(stream.packets[s][j])
    return word


def de_decode(stream: PacketStream, code: LinearCode, params: StreamingParams) -> DecodeTrace:
    """Decode every message packet, diagonal by diagonal.

    A lost message packet is rebuilt from the k diagonals crossing it; each
    diagonal is decoded at its completion slot, so a rebuilt message t is
    available at slot t + n - 1. Messages whose diagonals are unrecoverable
    are reported as failed (times[t] is None).
    """
    if code.n != stream.n or code.k != stream.k or code.field.q != stream.q:
        raise DimensionMismatch("stream was not produced by this code")
    n, k = stream.n, stream.k
    t_count = stream.message_count
    diag_cache: dict[int, tuple | None] = {}

    def decode_diag(d: int):
        if d not in diag_cache:
            word = _diagonal_word(stream, d)
            if None not in word:
                diag_cache[d] = tuple(word)
            else:
                try:
                    diag_cache[d] = tuple(decode_erasures(code, word))
                except Unrecoverable:
                    diag_cache[d] = None
        return diag_cache[d]

    times = []
    messages = []
    for t in range(t_count):
        if t not in stream.erased:
            times.append(t)
            messages.append(tuple(stream.packets[t][:k]))
            continue
        parts = []
        ok = True
        for j in range(k):
            cw = decode_diag(t - j)
            if cw is None:
                ok = False
                break
            parts.append(cw[j])
        if ok:
            times.append(t + n - 1)
            messages.append(tuple(parts))
        else:
            times.append(None)
            messages.append(None)
    deadlines = tuple(t + params.tau for t in range(t_count))
    misses = tuple(
        tm is not None and tm > dl for tm, dl in zip(times, deadlines)
    )
    return DecodeTrace(tuple(times), deadlines, misses, tuple(messages))


# ---------------------------------------------------------------------------
# loss sequences
# ---------------------------------------------------------------------------


def _count_inadmissible_windows(mask: int, length: int, params: ChannelParams) -> int:
    w = params.w
    if length < w:
        # shorter than one window: judge the whole prefix padded with no losses
        return 0 if _mask_admissible(mask, params) else 1
    wfull = (1 << w) - 1
    bad = 0
    for s in range(length - w + 1):
        wm = (mask >> s) & wfull
        if wm and not _mask_admissible(wm, params):
            bad += 1
    return bad


def is_stream_admissible(loss, length: int, params: ChannelParams) -> bool:
    """True iff every length-w window of the loss sequence is admissible."""
    mask = 0
    for i in loss:
        i = int(i)
        if not 0 <= i < length:
            raise BadParameters(f"loss index {i} outside the stream [0, {length})")
        mask |= 1 << i
    return _count_inadmissible_windows(mask, length, params) == 0


def periodic_pattern(params: ChannelParams, periods: int) -> tuple[int, ...]:
    """The worst-case-style periodic loss: the first b+e slots of every
    period of length w are erased, for the given number of periods.

    Admissible only when e >= b - 1 (windows straddling two periods see two
    bursts); other parameters raise ParameterViolation.
    """
    if periods < 1:
        raise BadParameters(f"need periods >= 1, got {periods}")
    if params.e < params.b - 1:
        raise ParameterViolation(
            f"periodic pattern needs e >= b-1, got b={params.b}, e={params.e}"
        )
    w, span = params.w, params.b + params.e
    loss = tuple(
        p * w + i for p in range(periods) for i in range(span)
    )
    assert is_stream_admissible(loss, periods * w, params)
    return loss


def ge_source(
    good_to_bad: float,
    bad_to_good: float,
    loss_good: float,
    loss_bad: float,
    length: int,
    seed: int,
) -> tuple[int, ...]:
    """Two-state Markov (Gilbert-Elliott) loss sequence.

    The chain starts in the good state. Each slot draws the erasure first and
    the state transition second from one seeded Mersenne Twister stream
    (GE_ALGORITHM names the generator), so sequences are reproducible.
    """
    for p in (good_to_bad, bad_to_good, loss_good, loss_bad):
        if not 0.0 <= p <= 1.0:
            raise BadProbability(f"probability {p} outside [0, 1]")
    if length < 0:
        raise BadParameters(f"need length >= 0, got {length}")
    rng = random.Random(seed)
    lost = []
    bad = False
    for t in range(length):
        if rng.random() < (loss_bad if bad else loss_good):
            lost.append(t)
        if rng.random() < (good_to_bad if not bad else bad_to_good):
            bad = not bad
    return tuple(lost)


# ---------------------------------------------------------------------------
# verification and simulation
# ---------------------------------------------------------------------------


def verify_streaming_code(code: LinearCode, params: StreamingParams) -> VerificationReport:
    """Decide whether the diagonal embedding of this code recovers every
    message by its deadline under every admissible loss sequence.

    For n = w and tau = w - 1 (the only delay this verifier supports), that
    holds iff every admissible window pattern has independent parity-check
    columns, so the verdict is an exact finite check. The witness, when the
    verdict is False, is the lexicographically smallest failing pattern.
    """
    w = params.channel.w
    if params.tau != w - 1:
        raise UnsupportedDelay(f"verifier requires tau = w-1 = {w - 1}, got {params.tau}")
    if code.n != w:
        raise DimensionMismatch(f"diagonal embedding needs n = w, got n={code.n}, w={w}")
    _systematic_generator(code)  # NotSystematic if the orientation is impossible
    return _verify_family(code, enumerate_admissible_windows(params.channel))


@dataclass(frozen=True)
class PeriodicSource:
    """Loss source replaying periodic_pattern for a number of periods."""

    periods: int


@dataclass(frozen=True)
class GilbertElliottSource:
    """Loss source drawing from a seeded Gilbert-Elliott chain."""

    good_to_bad: float
    bad_to_good: float
    loss_good: float
    loss_bad: float
    slots: int


_MESSAGE_SEED_SALT = 0xA5A55A5A


def simulate(code: LinearCode, params: StreamingParams, source, seed: int) -> dict:
    """Encode random messages, apply the source's losses, decode, summarize.

    Message payloads use a Mersenne Twister seeded with seed XOR a fixed salt,
    so loss and payload draws are decoupled but both reproducible. Returns
    {"slots", "admissible", "windows_inadmissible", "messages_failed",
    "deadline_misses", "seed"}.
    """
    ch = params.channel
    n, k = code.n, code.k
    if isinstance(source, PeriodicSource):
        slots = source.periods * ch.w
        loss = periodic_pattern(ch, source.periods)
    elif isinstance(source, GilbertElliottSource):
        slots = source.slots
        loss = ge_source(
            source.good_to_bad,
            source.bad_to_good,
            source.loss_good,
            source.loss_bad,
            slots,
            seed,
        )
    else:
        raise BadParameters(f"unknown source {source!r}")
    t_count = slots - (n - 1)
    if t_count < 1:
        raise BadParameters(f"{slots} slots leave no room for messages (n={n})")
    rng = random.Random(seed ^ _MESSAGE_SEED_SALT)
    msgs = [[rng.randrange(code.field.q) for _ in range(k)] for _ in range(t_count)]
    stream = de_encode(code, msgs).with_erasures(loss)
    trace = de_decode(stream, code, params)
    for sent, got in zip(msgs, trace.messages):
        if got is not None and tuple(sent) != got:
            raise RuntimeError("decoder returned a wrong message; this is a bug")
    mask = 0
    for i in loss:
        mask |= 1 << i
    bad_windows = _count_inadmissible_windows(mask, slots, ch)
    return {
        "slots": slots,
        "admissible": bad_windows == 0,
        "windows_inadmissible": bad_windows,
        "messages_failed": trace.messages_failed,
        "deadline_misses": trace.deadline_misses,
        "seed": seed,
    }

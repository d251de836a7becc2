"""Log-MAP APP decoding and the three-decoder iterative turbo loop.

LLRs are natural-log ratios ``log P(1) / P(0)``, so positive values
favour bit 1. Every max over path metrics uses the exact Jacobian
logarithm ``max*``, which makes the APP decoder a true log-MAP (BCJR)
decoder rather than its max-log approximation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from tcofdm.fec import DEFAULT_TRELLIS, Interleaver, Trellis

LLR_CLAMP = 50.0


@numba.njit(cache=True, inline="always")
def _max_star(x, y):
    if x == -np.inf:
        return y
    if y == -np.inf:
        return x
    if x > y:
        return x + np.log1p(np.exp(y - x))
    return y + np.log1p(np.exp(x - y))


def max_star(x: float, y: float) -> float:
    """Jacobian logarithm ``max(x, y) + log(1 + exp(-|y - x|)) == log(e^x + e^y)``."""
    return float(_max_star(float(x), float(y)))


@numba.njit(cache=True)
def _bcjr(ls, lp, la, next_state, parity):
    n = ls.shape[0]
    ns = next_state.shape[0]
    alpha = np.full((n + 1, ns), -np.inf)
    beta = np.full((n + 1, ns), -np.inf)
    alpha[0, 0] = 0.0
    for k in range(n):
        lu = ls[k] + la[k]
        for s in range(ns):
            a = alpha[k, s]
            if a == -np.inf:
                continue
            for u in range(2):
                t = next_state[s, u]
                g = u * lu + parity[s, u] * lp[k]
                alpha[k + 1, t] = _max_star(alpha[k + 1, t], a + g)
        ref = alpha[k + 1, 0]
        for s in range(1, ns):
            if alpha[k + 1, s] > ref:
                ref = alpha[k + 1, s]
        for s in range(ns):
            alpha[k + 1, s] -= ref
    # unterminated: uniform over final states
    for s in range(ns):
        beta[n, s] = 0.0
    for k in range(n - 1, -1, -1):
        lu = ls[k] + la[k]
        for s in range(ns):
            acc = -np.inf
            for u in range(2):
                t = next_state[s, u]
                g = u * lu + parity[s, u] * lp[k]
                acc = _max_star(acc, beta[k + 1, t] + g)
            beta[k, s] = acc
        ref = beta[k, 0]
        for s in range(1, ns):
            if beta[k, s] > ref:
                ref = beta[k, s]
        for s in range(ns):
            beta[k, s] -= ref
    post = np.empty(n)
    for k in range(n):
        lu = ls[k] + la[k]
        num = -np.inf
        den = -np.inf
        for s in range(ns):
            a = alpha[k, s]
            if a == -np.inf:
                continue
            for u in range(2):
                t = next_state[s, u]
                m = a + u * lu + parity[s, u] * lp[k] + beta[k + 1, t]
                if u == 1:
                    num = _max_star(num, m)
                else:
                    den = _max_star(den, m)
        post[k] = num - den
    return post


def _llr(x, n=None) -> np.ndarray:
    a = np.clip(np.asarray(x, dtype=np.float64), -LLR_CLAMP, LLR_CLAMP)
    if a.ndim != 1:
        raise ValueError("LLR blocks must be 1-D")
    if n is not None and a.size != n:
        raise ValueError(f"LLR block length {a.size} does not match {n}")
    return np.ascontiguousarray(a)


def app_decode(sys, parity, apriori, trellis: Trellis = DEFAULT_TRELLIS):
    """Log-MAP APP decoding of one unterminated RSC constituent.

    Parameters
    ----------
    sys, parity : array_like
        Channel LLRs of the systematic and parity bits.
    apriori : array_like
        A-priori LLRs of the information bits.
    trellis : Trellis
        Constituent code; decoding starts in state 0.

    Returns
    -------
    posterior, extrinsic : ndarray
        ``extrinsic = posterior - sys - apriori``, with inputs clamped to
        +/-50 before use.
    """
    ls = _llr(sys)
    n = ls.size
    lp = _llr(parity, n)
    la = _llr(apriori, n)
    post = _bcjr(ls, lp, la, trellis.next_state, trellis.parity)
    return post, post - ls - la


@dataclass(frozen=True)
class DecoderInput:
    """Demultiplexed channel LLRs of one PCCC codeword plus its interleavers."""

    systematic: np.ndarray
    parity1: np.ndarray
    parity2: np.ndarray
    parity3: np.ndarray
    il1: Interleaver
    il2: Interleaver

    def __post_init__(self):
        n = np.asarray(self.systematic).size
        for name in ("parity1", "parity2", "parity3"):
            if np.asarray(getattr(self, name)).size != n:
                raise ValueError(f"{name} length does not match systematic length {n}")
        if len(self.il1) != n or len(self.il2) != n:
            raise ValueError("interleaver length does not match block length")

    @classmethod
    def from_stream(cls, llrs, il1: Interleaver, il2: Interleaver) -> "DecoderInput":
        """Build from a multiplexed ``[sys, p1, p2, p3]`` LLR stream."""
        lanes = np.asarray(llrs, dtype=np.float64).reshape(-1, 4)
        return cls(lanes[:, 0], lanes[:, 1], lanes[:, 2], lanes[:, 3], il1, il2)


SCHEDULES = ("ring", "full")


def turbo_decode_trace(
    inp: DecoderInput,
    iterations: int,
    trellis: Trellis = DEFAULT_TRELLIS,
    schedule: str = "ring",
) -> list[np.ndarray]:
    """Hard decisions after each of ``iterations`` decoding passes.

    One pass runs DEC1 (natural order), DEC2 (first interleaver order)
    and DEC3 (second interleaver order) in series, and the decision after
    each pass is taken on DEC3's posterior, returned to natural order
    (LLR > 0 decodes to 1).

    With ``schedule="ring"`` each decoder's a-priori input is the
    extrinsic output of the decoder before it: DEC1 <- DEC3 (previous
    pass, zero on the first), DEC2 <- DEC1, DEC3 <- DEC2. With
    ``schedule="full"`` each decoder instead receives the sum of the
    latest extrinsics of the other two.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}")
    il1, il2 = inp.il1, inp.il2
    p1, p2 = il1.permutation, il2.permutation
    ls = _llr(inp.systematic)
    n = ls.size
    ls1 = ls[p1]
    ls2 = ls[p2]
    lp1 = _llr(inp.parity1, n)
    lp2 = _llr(inp.parity2, n)
    lp3 = _llr(inp.parity3, n)
    nxt, par = trellis.next_state, trellis.parity

    # extrinsics kept in natural order
    ext1 = np.zeros(n)
    ext2 = np.zeros(n)
    ext3 = np.zeros(n)
    decisions = []
    for _ in range(iterations):
        la1 = ext3 if schedule == "ring" else ext2 + ext3
        post1 = _bcjr(ls, lp1, la1, nxt, par)
        ext1 = np.clip(post1 - ls - la1, -LLR_CLAMP, LLR_CLAMP)

        la2 = (ext1 if schedule == "ring" else ext1 + ext3)[p1]
        post2 = _bcjr(ls1, lp2, la2, nxt, par)
        ext2 = np.empty(n)
        ext2[p1] = np.clip(post2 - ls1 - la2, -LLR_CLAMP, LLR_CLAMP)

        # ring: DEC2's extrinsic moves from il1 order to il2 order
        la3 = (ext2 if schedule == "ring" else ext1 + ext2)[p2]
        post3 = _bcjr(ls2, lp3, la3, nxt, par)
        ext3 = np.empty(n)
        ext3[p2] = np.clip(post3 - ls2 - la3, -LLR_CLAMP, LLR_CLAMP)

        decision = np.empty(n, dtype=np.int8)
        decision[p2] = post3 > 0
        decisions.append(decision)
    return decisions


def turbo_decode(
    inp: DecoderInput,
    iterations: int,
    trellis: Trellis = DEFAULT_TRELLIS,
    schedule: str = "ring",
) -> np.ndarray:
    """Decode one PCCC codeword; ties (LLR exactly 0) decode to 0."""
    return turbo_decode_trace(inp, iterations, trellis, schedule)[-1]


def scale_received(bipolar, noise_variance: float) -> np.ndarray:
    """Channel reliability scaling ``2 / noise_variance`` of a bipolar stream."""
    if not noise_variance > 0:
        raise ValueError(f"noise variance must be positive, got {noise_variance}")
    return np.asarray(bipolar, dtype=np.float64) * (2.0 / noise_variance)

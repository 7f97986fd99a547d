from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from ..errors import UsageError
from .codebook import Codebook

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator]


def _log(table: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(table)


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(np.random.SeedSequence([int(seed)]))


def _check_block(block: Sequence[int], n: int, size: int, what: str) -> np.ndarray:
    arr = np.asarray(block, dtype=np.int64).reshape(-1)
    if arr.shape != (n,):
        raise UsageError(f"{what} block must have length {n}, got {arr.shape[0]}")
    if np.any(arr < 0) or np.any(arr >= size):
        raise UsageError(f"{what} block has symbols outside 0..{size - 1}")
    return arr


def normalize_log_weights(loglik: np.ndarray, axis: int = -1) -> Tuple[np.ndarray, np.ndarray]:
    """
    Posterior over `axis` from log-likelihoods under a uniform prior.

    Slices whose likelihoods are all zero fall back to the uniform prior; the
    second return value flags them.
    """
    dead = np.all(np.isneginf(loglik), axis=axis)
    safe = np.where(np.expand_dims(dead, axis), 0.0, loglik)
    post = np.exp(safe - logsumexp(safe, axis=axis, keepdims=True))
    post = post / post.sum(axis=axis, keepdims=True)
    return post, dead


@dataclass(frozen=True)
class EncoderPosteriors:
    """P(v | z) over all flat index tuples and P(w~_l = j | v, z) for every v."""

    v: np.ndarray
    v_fallback: bool
    w: Tuple[np.ndarray, ...]
    w_fallback: Tuple[np.ndarray, ...]


def encoder_posteriors(codebook: Codebook, z_block: Sequence[int]) -> EncoderPosteriors:
    model = codebook.model
    z = _check_block(z_block, codebook.n, model.source.z_size, "z")
    log_zu = _log(model.q_z_given_u)
    loglik_v = log_zu[codebook.u_words, z[None, :]].sum(axis=1)
    post_v, dead_v = normalize_log_weights(loglik_v)

    post_w, dead_w = [], []
    for q_z_us, s_words in zip(model.q_z_given_us, codebook.s_words):
        log_zus = _log(q_z_us)
        loglik = log_zus[codebook.u_words[:, None, :], s_words, z[None, None, :]].sum(axis=2)
        post, dead = normalize_log_weights(loglik, axis=1)
        post_w.append(post)
        dead_w.append(dead)
    return EncoderPosteriors(post_v, bool(dead_v), tuple(post_w), tuple(dead_w))


@dataclass(frozen=True)
class EncoderOutput:
    v: Tuple[int, ...]
    w_tilde: Tuple[int, ...]
    v_fallback: bool = False
    w_fallback: Tuple[bool, ...] = field(default_factory=tuple)

    @property
    def key(self) -> int:
        return self.v[0]

    @property
    def messages(self) -> Tuple[Tuple[int, ...], ...]:
        """w_l = (w~_l, v_1, ..., v_l) for l = 1..m."""
        return tuple((w,) + self.v[1 : l + 1] for l, w in enumerate(self.w_tilde, start=1))

    def message(self, l: int) -> Tuple[int, ...]:
        return self.messages[l - 1]


def encode(codebook: Codebook, z_block: Sequence[int], seed: SeedLike = 0) -> EncoderOutput:
    """
    Likelihood encoder: v from P(v|z) proportional to prod_t Q_{Z|U}(z_t|u_t(v)),
    then each w~_l independently from prod_t Q_{Z|US_l}(z_t|u_t(v), s_l(v, j)_t).
    """
    rng = _rng(seed)
    post = encoder_posteriors(codebook, z_block)
    flat_v = int(rng.choice(post.v.shape[0], p=post.v))
    w_tilde, w_fallback = [], []
    for p_w, dead in zip(post.w, post.w_fallback):
        w_tilde.append(int(rng.choice(p_w.shape[1], p=p_w[flat_v])))
        w_fallback.append(bool(dead[flat_v]))
    if post.v_fallback or any(w_fallback):
        logger.debug("encoder fell back to the uniform prior (v: %s, w: %s)", post.v_fallback, w_fallback)
    v = tuple(int(i) for i in np.unravel_index(flat_v, codebook.index_shape))
    return EncoderOutput(v, tuple(w_tilde), post.v_fallback, tuple(w_fallback))


def index_split(codebook: Codebook, l: int) -> Tuple[int, int, int]:
    """(I_0, prod_{j<=l} I_j, prod_{j>l} I_j) for the decoder's view of the index tuple."""
    sizes = codebook.params.I_list
    known = int(np.prod(sizes[1 : l + 1], dtype=np.int64))
    unknown = int(np.prod(sizes[l + 1 :], dtype=np.int64))
    return sizes[0], known, unknown


def decode(codebook: Codebook, l: int, x_block: Sequence[int], message: Sequence[int]) -> int:
    """
    Maximum-likelihood key estimate of receiver l from its block and message.

    The known sub-indices v_1..v_l and w~_l are fixed; the search runs over
    (i_0, i_{l+1}, ..., i_m) with ties going to the lexicographically smallest tuple.
    """
    model, params = codebook.model, codebook.params
    if not 1 <= l <= model.m:
        raise UsageError(f"receiver must be in 1..{model.m}, got {l}")
    x = _check_block(x_block, codebook.n, model.source.x_sizes[l - 1], "x")
    message = tuple(int(k) for k in message)
    if len(message) != l + 1:
        raise UsageError(f"message {l} carries {l + 1} indices, got {len(message)}")
    w, known = message[0], message[1:]
    if not 0 <= w < params.J_list[l - 1] or any(not 0 <= k < s for k, s in zip(known, params.I_list[1:])):
        raise UsageError(f"message {message} out of range")

    I_0, n_known, n_unknown = index_split(codebook, l)
    a = int(np.ravel_multi_index(known, params.I_list[1 : l + 1])) if known else 0
    log_x = _log(model.q_x_given_us[l - 1])
    s_words = codebook.s_words[l - 1][:, w, :]
    scores = log_x[codebook.u_words, s_words, x[None, :]].sum(axis=1)
    scores = scores.reshape(I_0, n_known, n_unknown)[:, a, :]
    return int(np.argmax(scores.reshape(-1))) // n_unknown


def decode_table(codebook: Codebook, l: int) -> np.ndarray:
    """
    Decoded key for every (v_1..v_l, w~_l, x-block): shape (prod_{j<=l} I_j, J_l, |X_l|^n).

    x-blocks are enumerated row-major with the first letter most significant.
    """
    model = codebook.model
    I_0, n_known, n_unknown = index_split(codebook, l)
    log_x = _log(model.q_x_given_us[l - 1])
    s_words = codebook.s_words[l - 1]
    I, J = s_words.shape[:2]
    acc = np.zeros((I, J, 1))
    for t in range(codebook.n):
        letter = log_x[codebook.u_words[:, None, t], s_words[:, :, t]]
        acc = (acc[:, :, :, None] + letter[:, :, None, :]).reshape(I, J, -1)
    scores = acc.reshape(I_0, n_known, n_unknown, J, -1).transpose(1, 3, 4, 0, 2)
    scores = scores.reshape(n_known, J, scores.shape[2], I_0 * n_unknown)
    return np.argmax(scores, axis=-1) // n_unknown

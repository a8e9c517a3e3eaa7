"""Dispatch table from method names to embedding callables."""

from __future__ import annotations

from dataclasses import replace

from .graph import DynamicEmbedding, DynamicNetwork
from .skipgram import SkipGramConfig, independent_node2vec, unfolded_node2vec
from .spectral import dilated_ase, ise, ise_procrustes, omni, uase, urlse

__all__ = ["METHOD_NAMES", "SKIPGRAM_METHODS", "embed_network"]

SPECTRAL_METHODS = (
    "uase",
    "dilated-ase",
    "urlse",
    "ise",
    "ise-procrustes",
    "omni",
)
SKIPGRAM_METHODS = ("unfolded-node2vec", "independent-node2vec")
METHOD_NAMES = SPECTRAL_METHODS + SKIPGRAM_METHODS


def embed_network(
    method: str,
    network: DynamicNetwork,
    d: int,
    seed: int = 0,
    gamma: float | None = None,
    skipgram: SkipGramConfig | None = None,
) -> DynamicEmbedding:
    """Embed a network with the named method.

    ``gamma`` only applies to URLSE; ``skipgram`` supplies node2vec
    hyperparameters (its d and seed are overridden by the arguments here).
    """
    if method == "uase":
        return uase(network, d, seed)
    if method == "dilated-ase":
        return dilated_ase(network, d, seed)
    if method == "urlse":
        return urlse(network, d, gamma=gamma, seed=seed)
    if method == "ise":
        return ise(network, d, seed)
    if method == "ise-procrustes":
        return ise_procrustes(network, d, seed)
    if method == "omni":
        return omni(network, d, seed)
    if method in SKIPGRAM_METHODS:
        config = replace(skipgram or SkipGramConfig(), d=d, seed=seed)
        if method == "unfolded-node2vec":
            return unfolded_node2vec(network, config)
        return independent_node2vec(network, config)
    raise ValueError(f"unknown method {method!r}; expected one of {METHOD_NAMES}")

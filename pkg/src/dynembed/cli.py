"""Command-line driver: generate | embed | test | experiment | cluster."""

from __future__ import annotations

import csv
import os
import sys

import click
import numpy as np

from .experiments import (
    DissimilarityMatrix,
    ExperimentSpec,
    kmeans_time_clusters,
    run_experiment,
    temporal_dissimilarity,
)
from .generators import PRESET_NAMES, SystemPreset, build_preset, sample_network
from .io import load_edge_list, read_embedding, write_edge_list, write_embedding, write_report
from .methods import METHOD_NAMES, embed_network
from .skipgram import SkipGramConfig
from .testing import SpatialTestSpec, TemporalTestSpec, spatial_test, temporal_test


def _parse_node_set(text: str, n: int) -> np.ndarray:
    """Node-set syntax: 'all', or comma-separated ints and inclusive 'a..b' ranges."""
    if text.strip().lower() == "all":
        return np.arange(n)
    out: list[int] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ".." in token:
            lo, hi = token.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(token))
    if not out:
        raise click.ClickException(f"empty node set {text!r}")
    return np.array(out)


def _parse_gamma(_ctx, _param, value):
    if value is None or value == "auto":
        return None
    try:
        return float(value)
    except ValueError:
        raise click.BadParameter("expected 'auto' or a number")


def _default_threads() -> int:
    return int(os.environ.get("DYNEMBED_THREADS", "1"))


def _fail(exc: Exception) -> None:
    raise click.ClickException(str(exc))


@click.group()
def main():
    """Stable dynamic network embedding and stability testing."""


@main.command()
@click.option("--preset", type=click.Choice(PRESET_NAMES), required=True)
@click.option("--n", type=click.IntRange(min=1), required=True, help="Node count.")
@click.option("--t", "--T", "T", type=click.IntRange(min=1), default=2,
              help="Snapshot count.")
@click.option("--k", type=click.IntRange(min=1), default=8,
              help="Community count of the k-community preset.")
@click.option("--p", "p_within", default=None,
              help="Within-community probabilities for k-community "
                   "(single value or comma list of length K).")
@click.option("--exponent", type=float, default=3.0,
              help="Power-law tail exponent of the power presets.")
@click.option("--min-weight", type=float, default=4.0,
              help="Minimum node weight of the power presets.")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def generate(preset, n, T, k, p_within, exponent, min_weight, seed, out):
    """Sample a preset system and write it as a temporal edge list."""
    if p_within is None:
        p = (0.5,) * k
    else:
        values = [float(x) for x in p_within.split(",")]
        p = tuple(values) * k if len(values) == 1 else tuple(values)
        if len(p) != k:
            _fail(ValueError(f"--p needs 1 or {k} values, got {len(values)}"))
    try:
        system = SystemPreset(
            name=preset, n=n, T=T, seed=seed, p_within=p,
            power_exponent=exponent, min_weight=min_weight,
        )
        network = sample_network(build_preset(system), seed)
        write_edge_list(network, out)
    except ValueError as exc:
        _fail(exc)
    click.echo(f"wrote {out}: n={network.n} T={network.T}")


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Temporal edge list (.tel).")
@click.option("--method", type=click.Choice(METHOD_NAMES), required=True)
@click.option("--d", type=click.IntRange(min=1), required=True)
@click.option("--gamma", callback=_parse_gamma, default="auto",
              help="URLSE regularizer; 'auto' = average dilated degree.")
@click.option("--seed", type=int, default=0)
@click.option("--delimiter", default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--walks-per-node", type=click.IntRange(min=1), default=10)
@click.option("--walk-length", type=click.IntRange(min=1), default=80)
@click.option("--window", type=click.IntRange(min=1), default=10)
@click.option("--negatives", type=click.IntRange(min=1), default=5)
@click.option("--epochs", type=click.IntRange(min=0), default=5)
@click.option("--learning-rate", type=float, default=0.025)
@click.option("--p-return", type=float, default=1.0)
@click.option("--q-inout", type=float, default=1.0)
def embed(in_path, method, d, gamma, seed, delimiter, fmt, out, walks_per_node,
          walk_length, window, negatives, epochs, learning_rate, p_return, q_inout):
    """Embed a temporal edge list and write the embedding."""
    try:
        network = load_edge_list(in_path, delimiter)
        config = SkipGramConfig(
            d=d, walks_per_node=walks_per_node, walk_length=walk_length,
            window=window, negatives_per_positive=negatives, epochs=epochs,
            learning_rate_initial=learning_rate, p_return=p_return,
            q_inout=q_inout, seed=seed,
        )
        embedding = embed_network(
            method, network, d, seed=seed, gamma=gamma, skipgram=config
        )
        write_embedding(embedding, out, fmt)
    except ValueError as exc:
        _fail(exc)
    click.echo(
        f"wrote {out}: n={embedding.n} T={embedding.T} d={embedding.d} "
        f"anchor_rows={embedding.anchor.shape[0]}"
    )


@main.group()
def test():
    """Paired displacement stability tests on a saved embedding."""


@test.command("temporal")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Embedding file from `dynembed embed`.")
@click.option("--nodes", default="all", help="'all', ints and a..b ranges.")
@click.option("--tc", type=click.IntRange(min=1), required=True,
              help="Proposed changepoint (0-based snapshot index).")
@click.option("--r1", type=click.IntRange(min=1), default=1)
@click.option("--r2", type=click.IntRange(min=1), default=1)
@click.option("--nsim", type=click.IntRange(min=1), default=1000)
@click.option("--seed", type=int, default=0)
def test_temporal(in_path, nodes, tc, r1, r2, nsim, seed):
    """Test for a temporal change of a node set at tc."""
    try:
        embedding = read_embedding(in_path)
        spec = TemporalTestSpec(
            nodes=_parse_node_set(nodes, embedding.n), t_c=tc, r1=r1, r2=r2,
            n_sim=nsim,
        )
        result = temporal_test(embedding, spec, seed)
    except ValueError as exc:
        _fail(exc)
    click.echo(f"t_obs={result.t_obs!r} p_hat={result.p_hat!r}")


@test.command("spatial")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--set1", required=True, help="First node set (ints, a..b ranges).")
@click.option("--set2", required=True, help="Second node set, disjoint from set1.")
@click.option("--t", "times", multiple=True, type=int, required=True,
              help="Time point(s); repeat for a window.")
@click.option("--nsim", type=click.IntRange(min=1), default=1000)
@click.option("--seed", type=int, default=0)
def test_spatial(in_path, set1, set2, times, nsim, seed):
    """Test whether two node sets separate at the given time point(s)."""
    try:
        embedding = read_embedding(in_path)
        spec = SpatialTestSpec(
            set1=_parse_node_set(set1, embedding.n),
            set2=_parse_node_set(set2, embedding.n),
            times=times,
            n_sim=nsim,
        )
        result = spatial_test(embedding, spec, seed)
    except ValueError as exc:
        _fail(exc)
    click.echo(f"t_obs={result.t_obs!r} p_hat={result.p_hat!r}")


@main.command()
@click.option("--preset", type=click.Choice(PRESET_NAMES), required=True)
@click.option("--method", type=click.Choice(METHOD_NAMES), required=True)
@click.option("--level", type=click.Choice(["graph", "community", "node"]),
              default="graph")
@click.option("--test", "test_kind", type=click.Choice(["temporal", "spatial"]),
              default="temporal")
@click.option("--n", type=click.IntRange(min=1), default=200)
@click.option("--t", "--T", "T", type=click.IntRange(min=1), default=2)
@click.option("--d", type=click.IntRange(min=1), default=None,
              help="Embedding dimension; defaults to the preset rank.")
@click.option("--gamma", callback=_parse_gamma, default="auto")
@click.option("--community", type=click.IntRange(min=0), default=0)
@click.option("--replicates", type=click.IntRange(min=1), default=200)
@click.option("--nsim", type=click.IntRange(min=1), default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--threads", type=click.IntRange(min=1), default=_default_threads)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def experiment(preset, method, level, test_kind, n, T, d, gamma, community,
               replicates, nsim, seed, threads, out):
    """Replicated p-value study of a method on a preset system."""
    try:
        spec = ExperimentSpec(
            preset=SystemPreset(name=preset, n=n, T=T),
            method=method, level=level, test_kind=test_kind, d=d, gamma=gamma,
            community=community, replicates=replicates, n_sim=nsim,
            master_seed=seed,
        )
        report = run_experiment(spec, workers=threads)
    except ValueError as exc:
        _fail(exc)
    if out:
        write_report(report, out)
        click.echo(f"wrote {out}")
    click.echo(
        f"decision={report.ks_decision} power_at_5pct={report.power_at_5pct:.3f} "
        f"ks={report.ks_statistic:.4f} wall_time={report.wall_time:.1f}s"
    )


@main.command()
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@click.option("--nodes", default="all")
@click.option("--k", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def cluster(in_path, nodes, k, seed, out):
    """k-means clustering of embedding time points via the dissimilarity matrix."""
    try:
        embedding = read_embedding(in_path)
        node_set = _parse_node_set(nodes, embedding.n)
        R = temporal_dissimilarity(embedding, node_set)
        labels = kmeans_time_clusters(R, k, seed)
    except ValueError as exc:
        _fail(exc)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "label"])
        for t, label in enumerate(labels):
            writer.writerow([t, int(label)])
    click.echo(f"wrote {out}: {k} clusters over {embedding.T} time points")


if __name__ == "__main__":
    sys.exit(main())

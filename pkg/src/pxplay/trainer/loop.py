"""Supervised training loop: permuted batches, annealed Adam, periodic eval."""

import json
import time
from dataclasses import dataclass, field

import numpy as np

from ..datapipe import DatasetManifest
from ..datapipe.view import DatasetView
from ..errors import ArgumentError, NonFiniteLossError
from ..models import ArchitectureSpec, Checkpoint, backward, forward, init_params
from ..models.arch import block_shapes
from ..tensorcore import AdamState, adam_step, softmax_cross_entropy


@dataclass(frozen=True)
class TrainConfig:
    base_lr: float = 1e-4
    anneal_factor: float = 0.95
    anneal_every: int = 5000
    l2: float = 1e-7
    batch_size: int = 25
    epochs: int = 2
    eval_every: int = 500
    seed: int = 0
    determinism: bool = False

    def __post_init__(self):
        if min(self.base_lr, self.anneal_every, self.batch_size, self.epochs,
               self.eval_every) <= 0 or self.l2 < 0:
            raise ArgumentError("training config values must be positive")
        if not 0 < self.anneal_factor <= 1:
            raise ArgumentError("anneal_factor must be in (0, 1]")


def lr_at(iteration: int, config: TrainConfig) -> float:
    """Piecewise-constant schedule: base * factor^floor(it / every)."""
    if iteration < 0:
        raise ArgumentError("iteration must be >= 0")
    return config.base_lr * config.anneal_factor ** (iteration // config.anneal_every)


class BatchSampler:
    """Uniform without replacement inside epoch-wide permutations spanning all
    training episodes; one epoch touches every sample exactly once."""

    def __init__(self, samples, batch_size: int, rng: np.random.Generator):
        if not samples:
            raise ArgumentError("dataset is empty")
        self.samples = samples
        self.batch_size = batch_size
        self.rng = rng
        self._order = []
        self._pos = 0

    @property
    def batches_per_epoch(self) -> int:
        return (len(self.samples) + self.batch_size - 1) // self.batch_size

    def next_batch(self):
        if self._pos >= len(self._order):
            self._order = self.rng.permutation(len(self.samples))
            self._pos = 0
        idx = self._order[self._pos : self._pos + self.batch_size]
        self._pos += len(idx)
        return [self.samples[i] for i in idx]


@dataclass
class TrainLog:
    records: list = field(default_factory=list)

    def add(self, **kwargs):
        self.records.append(kwargs)

    def to_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def loss_trace(self):
        return [r["loss"] for r in self.records if "loss" in r]


def top_n_hits(logits: np.ndarray, labels: np.ndarray, n: int) -> np.ndarray:
    """True where the label ranks within the n highest logits (ties resolved
    toward lower class ids)."""
    order = np.argsort(-logits, axis=1, kind="stable")
    return (order[:, :n] == labels[:, None]).any(axis=1)


def evaluate_topn(spec, params, view: DatasetView, role: str,
                  ns=(1, 3, 5), batch_size: int = 64):
    """Top-n accuracies over every sample of a role, in infer mode."""
    samples = view.samples(role)
    hits = {n: 0 for n in ns}
    for start in range(0, len(samples), batch_size):
        chunk = samples[start : start + batch_size]
        stacks, labels = view.batch(role, chunk)
        logits = forward(spec, params, stacks, mode="infer")
        for n in ns:
            hits[n] += int(top_n_hits(logits, labels, n).sum())
    total = max(1, len(samples))
    return {n: hits[n] / total for n in ns}


@dataclass
class TrainResult:
    final: Checkpoint
    best: Checkpoint
    log: TrainLog


def train(manifest: DatasetManifest, spec: ArchitectureSpec,
          config: TrainConfig, progress=None) -> TrainResult:
    """Run the full supervised loop over the manifest's train split.

    Per iteration: assemble a permuted batch of stacks, forward in train mode,
    mean softmax loss, backward, one Adam step per parameter block with the
    annealed learning rate and L2 penalty. Every eval_every iterations (and at
    the end) computes top-1/3/5 validation accuracy in infer mode; the best
    top-1 snapshot is kept alongside the final state. A non-finite loss aborts
    with the offending iteration and sample ids.
    """
    view = DatasetView(manifest, frame_count=spec.frame_count)
    sampler = BatchSampler(
        view.samples("train"), config.batch_size, np.random.default_rng(config.seed)
    )
    dropout_rng = np.random.default_rng(config.seed + 1)

    params = init_params(spec, seed=config.seed)
    adam = {k: AdamState.fresh(v.shape) for k, v in params.items()}
    assert set(params) == set(block_shapes(spec))

    log = TrainLog()
    total_iterations = config.epochs * sampler.batches_per_epoch
    has_val = len(manifest.episode_paths("val")) > 0
    best_top1 = -1.0
    best_params = {k: v.copy() for k, v in params.items()}
    best_iteration = 0
    t0 = time.monotonic()

    def snapshot(p, it):
        return Checkpoint(
            spec=spec,
            params={k: v.copy() for k, v in p.items()},
            adam=None,
            iteration=it,
            mean_hash=manifest.mean_image_sha256,
        )

    for it in range(total_iterations):
        batch_ids = sampler.next_batch()
        stacks, labels = view.batch("train", batch_ids)
        logits, cache = forward(spec, params, stacks, mode="train",
                                rng=dropout_rng, want_cache=True)
        losses, _, dlogits = softmax_cross_entropy(logits, labels)
        loss = float(np.mean(losses))
        if not np.isfinite(loss):
            raise NonFiniteLossError(it, batch_ids)
        grads, _ = backward(spec, params, cache, dlogits / np.float32(len(batch_ids)))
        lr = lr_at(it, config)
        for name in params:
            params[name], adam[name] = adam_step(
                params[name], grads[name], adam[name], lr=lr, l2=config.l2
            )

        record = {
            "iteration": it,
            "loss": loss,
            "lr": lr,
            "elapsed_s": 0.0 if config.determinism else round(time.monotonic() - t0, 3),
        }
        if has_val and ((it + 1) % config.eval_every == 0 or it == total_iterations - 1):
            accs = evaluate_topn(spec, params, view, "val")
            record.update(
                val_top1=accs[1], val_top3=accs[3], val_top5=accs[5]
            )
            if accs[1] > best_top1:
                best_top1 = accs[1]
                best_params = {k: v.copy() for k, v in params.items()}
                best_iteration = it + 1
        log.add(**record)
        if progress is not None:
            progress(record)

    final = Checkpoint(
        spec=spec,
        params=params,
        adam=adam,
        iteration=total_iterations,
        mean_hash=manifest.mean_image_sha256,
    )
    best = snapshot(best_params, best_iteration) if best_top1 >= 0 else snapshot(params, total_iterations)
    return TrainResult(final=final, best=best, log=log)

"""Command implementations wiring the modules together (the CLI is a shell
around these; tests call them directly)."""

import dataclasses
import json
from pathlib import Path

import numpy as np

from .arena import (
    ACTION_NAMES,
    CPU_LEVELS,
    CpuPolicy,
    DriftMoverPolicy,
    ExpertPolicy,
    VelocityProbePolicy,
)
from .config import RunConfig
from .datapipe import (
    DatasetManifest,
    StackSpec,
    class_histogram,
    compute_mean_image,
    default_classes,
    file_sha256,
    load_episode,
    load_manifest,
    make_stack,
    record_episode,
    save_manifest,
    save_mean_image,
    split_by_episode,
)
from .errors import ArgumentError
from .evaluator import (
    collect_logits,
    confusion,
    export_report,
    predicted_class,
    run_series,
    saliency,
)
from .models import load_checkpoint, make_spec, save_checkpoint
from .policy import AgentConfig, AgentPolicy, BiasVector, compute_bias, fpr_ratio
from .tensorcore import softmax
from .trainer import top_n_hits, train


def _write_json(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_record(config: RunConfig, out_dir=None) -> Path:
    """Record demonstration episodes plus manifest, mean image, histogram."""
    out = Path(out_dir if out_dir is not None else config.data_dir)
    out.mkdir(parents=True, exist_ok=True)
    if config.record_mode == "probe":
        c = dataclasses.replace(config.arena, attack_range=0.0, special_range=0.0)
    elif config.record_mode == "expert":
        c = config.arena
    else:
        raise ArgumentError(f"unknown record_mode {config.record_mode!r}")

    names = []
    for i in range(config.episodes):
        name = f"ep_{i:04d}.pxep"
        if config.record_mode == "probe":
            p1 = VelocityProbePolicy(0)
            p2 = DriftMoverPolicy(1, seed=config.seed + 50_000 + i, c=c)
        else:
            p1 = ExpertPolicy(0, seed=config.seed + 10_000 + i, c=c)
            p2 = CpuPolicy(1, CPU_LEVELS[config.record_cpu_level],
                           seed=config.seed + 20_000 + i, c=c)
        record_episode(config.seed + i, p1, p2, config.tick_limit, out / name, c)
        names.append(name)

    roles = split_by_episode(names, config.val_fraction, config.seed)
    spec = make_spec(config.preset, config.variant, config.class_count,
                     config.frame_count)
    h, w = spec.input_hw
    train_paths = [out / n for n in names if roles[n] == "train"]
    mean = compute_mean_image(train_paths, h, w)
    save_mean_image(out / "mean_image.f32", mean)

    episodes = []
    for name in names:
        ep = load_episode(out / name)
        episodes.append({"path": name, "role": roles[name], "frames": ep.frame_count})
    manifest = DatasetManifest(
        base_dir=out,
        classes=default_classes()[: config.class_count],
        resolution=(h, w),
        stack_offsets=tuple(config.stack_offsets),
        mean_image_path="mean_image.f32",
        mean_image_sha256=file_sha256(out / "mean_image.f32"),
        episodes=episodes,
    )
    save_manifest(out / "manifest.json", manifest)

    hist = {}
    for role in ("train", "val"):
        counts, freqs = class_histogram(manifest, role)
        hist[role] = {
            "counts": {ACTION_NAMES[i]: int(c) for i, c in enumerate(counts)},
            "frequencies": {ACTION_NAMES[i]: float(f) for i, f in enumerate(freqs)},
            "total": int(counts.sum()),
        }
    _write_json(out / "histogram.json", hist)
    return out / "manifest.json"


def cmd_train(config: RunConfig, data_dir=None, out_dir=None, progress=None) -> dict:
    """Train per the manifest; writes checkpoint.pxpl, best.pxpl, trainlog.jsonl."""
    data = Path(data_dir if data_dir is not None else config.data_dir)
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = load_manifest(data / "manifest.json")
    if manifest.class_count != config.class_count:
        raise ArgumentError(
            f"manifest has {manifest.class_count} classes, config wants {config.class_count}"
        )
    spec = make_spec(config.preset, config.variant, config.class_count,
                     config.frame_count)
    result = train(manifest, spec, config.train_config(), progress=progress)
    save_checkpoint(out / "checkpoint.pxpl", result.final)
    save_checkpoint(out / "best.pxpl", result.best)
    result.log.to_jsonl(out / "trainlog.jsonl")
    last_eval = next(
        (r for r in reversed(result.log.records) if "val_top1" in r), {}
    )
    summary = {
        "iterations": result.final.iteration,
        "final_loss": result.log.records[-1]["loss"] if result.log.records else None,
        "val_top1": last_eval.get("val_top1"),
        "val_top3": last_eval.get("val_top3"),
        "val_top5": last_eval.get("val_top5"),
        "best_iteration": result.best.iteration,
    }
    _write_json(out / "train_summary.json", summary)
    return summary


def cmd_eval(config: RunConfig, data_dir=None, checkpoint=None, out_dir=None) -> dict:
    """Validation accuracies, confusion matrices, and the tuned bias vector.

    The bias lands next to the manifest (bias.json) so live play and later
    evaluations share it; the metric report lands in out_dir.
    """
    data = Path(data_dir if data_dir is not None else config.data_dir)
    out = Path(out_dir if out_dir is not None else config.out_dir)
    manifest = load_manifest(data / "manifest.json")
    ckpt = load_checkpoint(checkpoint)
    spec = ckpt.spec

    logits, labels = collect_logits(spec, ckpt.params, manifest, "val")
    accs = {n: float(top_n_hits(logits, labels, n).mean()) for n in (1, 3, 5)}
    cm = confusion(spec, ckpt.params, manifest, "val")

    scores = softmax(logits)
    bias = compute_bias(scores, labels)
    ratio_before = fpr_ratio(scores, labels, np.ones(spec.class_count))
    ratio_after = fpr_ratio(scores, labels, bias.b)
    class_names = [name for _, name in manifest.classes]
    _write_json(
        data / "bias.json",
        {
            "bias": bias.to_named_dict(class_names),
            "provenance": bias.provenance,
            "degenerate": bias.degenerate,
        },
    )

    metrics = {
        "val_top1": accs[1],
        "val_top3": accs[3],
        "val_top5": accs[5],
        "fpr_ratio_unbiased": ratio_before,
        "fpr_ratio_biased": ratio_after,
    }
    export_report(out, metrics=metrics, confusion=cm)
    return metrics


def load_bias(data_dir, class_names) -> BiasVector | None:
    path = Path(data_dir) / "bias.json"
    if not path.exists():
        return None
    doc = json.loads(path.read_text(encoding="utf-8"))
    return BiasVector.from_named_dict(doc["bias"], class_names,
                                      provenance=doc.get("provenance", "computed"))


def agent_factory(config: RunConfig, manifest: DatasetManifest, ckpt, bias=None):
    """Factory of fresh AgentPolicy instances (one per match seed)."""
    from .datapipe import load_mean_image

    mean = load_mean_image(manifest.mean_path)
    stack_spec = StackSpec(tuple(manifest.stack_offsets)[: ckpt.spec.frame_count])
    agent_cfg = AgentConfig(
        class_count=ckpt.spec.class_count,
        top_k=config.top_k,
        bias=bias,
        stack_spec=stack_spec,
    )

    def factory(seed: int) -> AgentPolicy:
        return AgentPolicy(0, ckpt.spec, ckpt.params, mean, agent_cfg,
                           seed=seed, c=config.arena)

    return factory


def cmd_play(config: RunConfig, data_dir=None, checkpoint=None, out_dir=None) -> dict:
    """Seeded live-match series of the trained agent vs a leveled CPU."""
    data = Path(data_dir if data_dir is not None else config.data_dir)
    out = Path(out_dir if out_dir is not None else config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = load_manifest(data / "manifest.json")
    ckpt = load_checkpoint(checkpoint)
    class_names = [name for _, name in manifest.classes]
    bias = load_bias(data, class_names) if config.use_bias else None
    factory = agent_factory(config, manifest, ckpt, bias=bias)
    series = run_series(factory, config.play_cpu_level, config.games, config.seed,
                        tick_limit=config.play_tick_limit, c=config.arena)
    doc = series.to_dict()
    doc["cpu_level"] = config.play_cpu_level
    doc["biased"] = bias is not None
    _write_json(out / "series.json", doc)
    return doc


def cmd_saliency(config: RunConfig, data_dir=None, checkpoint=None,
                 episode=None, start_tick: int = 0, count: int = 8,
                 out_dir=None) -> dict:
    """Saliency map sequence for a replayed episode segment."""
    data = Path(data_dir if data_dir is not None else config.data_dir)
    out = Path(out_dir if out_dir is not None else config.out_dir)
    manifest = load_manifest(data / "manifest.json")
    ckpt = load_checkpoint(checkpoint)
    from .datapipe import load_mean_image

    mean = load_mean_image(manifest.mean_path)
    stack_spec = StackSpec(tuple(manifest.stack_offsets)[: ckpt.spec.frame_count])
    episode_path = Path(episode) if episode is not None else manifest.episode_paths("val")[0]
    ep = load_episode(episode_path)

    maps_list = []
    for t in range(start_tick, min(start_tick + count, ep.frame_count)):
        stack = make_stack(ep, t, stack_spec, mean)
        cls = predicted_class(ckpt.spec, ckpt.params, stack)
        maps = saliency(ckpt.spec, ckpt.params, stack, cls)
        maps_list.append((f"t{t:05d}_c{cls}", maps))
    doc = export_report(
        out,
        metrics={"episode": str(episode_path.name), "start_tick": start_tick,
                 "frames": len(maps_list)},
        saliency_maps=maps_list,
    )
    return doc

"""Central-difference gradient verification for arbitrary parameter dicts."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericError


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-8)


@dataclass
class GradCheckReport:
    """Per-block and overall worst relative error between analytic and numeric."""

    max_relative_error: float
    block_errors: dict[str, float] = field(default_factory=dict)
    sampled_coords: int = 0
    skipped_coords: int = 0

    def ok(self, tol: float) -> bool:
        return self.max_relative_error < tol


def finite_diff_check(
    loss_and_grads,
    params: dict[str, np.ndarray],
    n_samples: int = 200,
    h: float = 1e-2,
    rng: np.random.Generator | None = None,
    loss_fn=None,
) -> GradCheckReport:
    """Compare analytic gradients against central finite differences.

    loss_and_grads(params) must return (loss, grads) or (loss, grads,
    signature). Coordinates are sampled across all blocks, perturbed by +-h in
    place (restored afterwards), and scored as
    |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).

    Central differences only estimate the derivative where the loss is smooth
    over [x-h, x+h]. Two guards discard coordinates where that fails:

      - if the closure supplies a signature of the discrete activation
        pattern (relu masks, pool argmaxes) and it differs between the two
        perturbed evaluations, the interval straddles a kink;
      - if the h and h/2 estimates disagree with each other, the value is
        float32-noise dominated.

    Discarded coordinates are resampled and counted in skipped_coords. A wrong
    gradient formula still fails: there the numeric estimates agree with each
    other (and the pattern is constant) but disagree with the analytic value.

    loss_fn, when given, is a cheaper params -> (loss, signature) used for the
    perturbed evaluations so the backward pass is not recomputed needlessly.
    It may accept a second argument (block_name, flat_index) naming the one
    coordinate that changed since the previous call, letting shadow evaluators
    keep incremental state.
    """
    import inspect

    rng = rng or np.random.default_rng(0)
    base = loss_and_grads(params)
    base_loss, grads = base[0], base[1]
    if not np.isfinite(base_loss):
        raise NumericError(f"loss is not finite: {base_loss}")

    if loss_fn is None:
        def loss_fn(p):
            out = loss_and_grads(p)
            return out[0], (out[2] if len(out) > 2 else None)

    wants_changed = len(inspect.signature(loss_fn).parameters) >= 2

    names = sorted(params)
    sizes = [params[name].size for name in names]
    total = sum(sizes)
    offsets = np.cumsum([0] + sizes)
    n = min(n_samples, total)

    # small domains get an exact permutation; big ones draw lazily with dedupe
    if total <= 4 * n:
        order = iter(rng.permutation(total))
        seen = None
    else:
        order = None
        seen = set()

    def next_coord():
        if order is not None:
            nxt = next(order, None)
            return None if nxt is None else int(nxt)
        for _ in range(64):
            cand = int(rng.integers(total))
            if cand not in seen:
                seen.add(cand)
                return cand
        return None

    def probe(name, arr, idx, step):
        changed = (name, idx)
        old = arr[idx]
        arr[idx] = old + step
        loss_plus, sig_plus = loss_fn(params, changed) if wants_changed else loss_fn(params)
        arr[idx] = old - step
        loss_minus, sig_minus = loss_fn(params, changed) if wants_changed else loss_fn(params)
        arr[idx] = old
        if not (np.isfinite(loss_plus) and np.isfinite(loss_minus)):
            raise NumericError("perturbed loss is not finite")
        est = (float(loss_plus) - float(loss_minus)) / (2.0 * step)
        return est, (sig_plus is not None and sig_plus != sig_minus)

    block_errors = {name: 0.0 for name in names}
    accepted = 0
    skipped = 0
    while accepted < n and skipped < 8 * n:
        flat_idx = next_coord()
        if flat_idx is None:
            break
        b = int(np.searchsorted(offsets, flat_idx, side="right") - 1)
        name = names[b]
        idx = int(flat_idx - offsets[b])
        arr = params[name].reshape(-1)
        analytic = float(grads[name].reshape(-1)[idx])
        est1, crossed = probe(name, arr, idx, h)
        if crossed:
            skipped += 1
            continue
        rel = _rel(analytic, est1)
        if rel >= 1e-2:
            est2, crossed2 = probe(name, arr, idx, h / 2)
            if crossed2 or _rel(est1, est2) >= 1e-2:
                skipped += 1
                continue
        block_errors[name] = max(block_errors[name], rel)
        accepted += 1

    return GradCheckReport(
        max_relative_error=max(block_errors.values()) if block_errors else 0.0,
        block_errors=block_errors,
        sampled_coords=accepted,
        skipped_coords=skipped,
    )

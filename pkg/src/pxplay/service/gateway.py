"""The live simulation core: one clock, many droppable frame subscribers.

The clock task owns the arena: every tick it renders, picks player-1's action
from the current control source (human latch or model), steps physics, and
broadcasts one frame message. Mode switches change only the control source
between ticks, so the tick stream never skips or repeats. Slow clients lose
frames (bounded queues, drop-oldest), never stall the clock.
"""

import asyncio
import base64
import json
from pathlib import Path

import numpy as np

from ..arena import (
    ACTION_NAMES,
    CPU_LEVELS,
    CpuPolicy,
    initial_state,
    render,
    step,
)
from ..config import RunConfig
from ..datapipe import Episode, StackSpec, downsample_nn, load_mean_image, write_episode
from ..models import load_checkpoint
from ..pipeline import load_bias
from ..policy import AgentConfig, FrameBuffer, act


class Gateway:
    def __init__(self, config: RunConfig, checkpoint=None, data_dir=None,
                 recordings_dir=None):
        self.config = config
        self.c = config.arena
        self.tick_hz = config.tick_hz
        self.class_names = ACTION_NAMES[: config.class_count]
        self.stream_tick = 0
        self.match_seed = config.seed
        self.state = initial_state(self.match_seed, self.c)
        self.latest_input = 0
        self.recordings_dir = Path(recordings_dir or Path(config.out_dir) / "recordings")
        self.recorder = None
        self.clients = set()
        self._stop = asyncio.Event()

        self.model = None
        self.display_hw = (64, 64)
        if checkpoint is not None:
            ckpt = load_checkpoint(checkpoint)
            if data_dir is None:
                raise ValueError("serving a checkpoint needs the dataset directory")
            from ..datapipe import load_manifest

            manifest = load_manifest(Path(data_dir) / "manifest.json")
            mean = load_mean_image(manifest.mean_path)
            bias = load_bias(data_dir, [n for _, n in manifest.classes]) if config.use_bias else None
            self.model = {
                "spec": ckpt.spec,
                "params": ckpt.params,
                "mean": mean,
                "config": AgentConfig(
                    class_count=ckpt.spec.class_count,
                    top_k=config.top_k,
                    bias=bias,
                    stack_spec=StackSpec(
                        tuple(manifest.stack_offsets)[: ckpt.spec.frame_count]
                    ),
                ),
                "rng": np.random.default_rng(config.seed + 777),
            }
            self.display_hw = ckpt.spec.input_hw
            self.buffer = FrameBuffer(capacity=self.model["config"].stack_spec.span + 1)
        self.mode = "agent" if self.model else "human"
        self.cpu = self._fresh_cpu()

    # -- match lifecycle -----------------------------------------------------

    def _fresh_cpu(self):
        return CpuPolicy(1, CPU_LEVELS[self.config.play_cpu_level],
                         seed=self.match_seed * 31 + 7, c=self.c)

    def _fresh_match(self):
        self.match_seed += 1
        self.state = initial_state(self.match_seed, self.c)
        self.cpu = self._fresh_cpu()
        if self.model:
            self.buffer = FrameBuffer(capacity=self.model["config"].stack_spec.span + 1)

    # -- clock ---------------------------------------------------------------

    def tick_once(self) -> list:
        """Advance one tick; returns the JSON-ready messages it produced."""
        native = render(self.state, c=self.c)
        h, w = self.display_hw
        display = downsample_nn(native, h, w)

        scores = None
        model_action = None
        if self.model and self.mode in ("agent", "takeover"):
            pre = display.astype(np.float32) - self.model["mean"]
            self.buffer.push(pre, self.stream_tick)
            model_action, raw_scores = act(
                self.model["spec"], self.model["params"], self.buffer,
                self.model["config"], self.model["rng"],
            )
            scores = [float(s) for s in raw_scores]

        if self.mode == "agent":
            a1 = model_action if model_action is not None else 0
        else:  # human or takeover: the latched client input drives
            a1 = self.latest_input
        a2 = self.cpu(self.state)

        if self.recorder is not None:
            self.recorder["frames"].append(native)
            self.recorder["labels"].append(a1)
            self.recorder["stamps"].append(self.stream_tick)

        prev = self.state
        self.state = step(self.state, a1, a2, self.c)

        messages = [{
            "type": "frame",
            "tick": self.stream_tick,
            "rgb_base64": base64.b64encode(display.tobytes()).decode("ascii"),
            "scores": scores,
            "mode": self.mode,
        }]
        for i in (0, 1):
            if self.state.fighters[i].stocks < prev.fighters[i].stocks:
                messages.append({
                    "type": "match_event",
                    "event": "ko",
                    "payload": {"victim": i, "tick": self.stream_tick},
                })
        if self.state.match_over:
            damage = [f.damage_percent for f in self.state.fighters]
            stocks = [f.stocks for f in self.state.fighters]
            messages.append({
                "type": "match_event",
                "event": "end",
                "payload": {"tick": self.stream_tick, "stocks": stocks,
                            "damage": damage},
            })
            self._fresh_match()
        self.stream_tick += 1
        return messages

    async def run(self):
        loop = asyncio.get_running_loop()
        next_t = loop.time()
        while not self._stop.is_set():
            self.broadcast(self.tick_once())
            next_t += 1.0 / self.tick_hz
            delay = next_t - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)
            else:
                next_t = loop.time()  # fell behind; never busy-spin to catch up
                await asyncio.sleep(0)

    def stop(self):
        self._stop.set()

    # -- clients ---------------------------------------------------------------

    def hello_message(self) -> dict:
        return {
            "type": "hello",
            "classes": self.class_names,
            "resolution": list(self.display_hw),
            "mode": self.mode,
            "tick_hz": self.tick_hz,
        }

    def subscribe(self) -> asyncio.Queue:
        q = asyncio.Queue(maxsize=8)
        self.clients.add(q)
        return q

    def unsubscribe(self, q) -> None:
        self.clients.discard(q)
        if not self.clients:
            self.latest_input = 0  # nobody holds a key anymore

    def broadcast(self, messages) -> None:
        for msg in messages:
            text = json.dumps(msg)
            for q in self.clients:
                if q.full():
                    try:
                        q.get_nowait()  # drop the oldest frame for this client
                    except asyncio.QueueEmpty:
                        pass
                q.put_nowait(text)

    # -- message handling --------------------------------------------------------

    def handle_input(self, msg) -> None:
        if not 0 <= msg.class_id < len(self.class_names):
            raise ValueError(f"class_id {msg.class_id} out of range")
        self.latest_input = int(msg.class_id)

    def handle_mode(self, msg) -> None:
        if msg.mode == "agent" and not self.model:
            raise ValueError("no checkpoint loaded; agent mode unavailable")
        self.mode = msg.mode

    def handle_record(self, msg) -> dict | None:
        if msg.action == "start":
            if self.recorder is not None:
                raise ValueError("already recording")
            name = Path(msg.path or f"recording_{self.stream_tick}.pxep").name
            self.recordings_dir.mkdir(parents=True, exist_ok=True)
            self.recorder = {"path": self.recordings_dir / name,
                             "frames": [], "labels": [], "stamps": []}
            return None
        if self.recorder is None:
            raise ValueError("not recording")
        rec, self.recorder = self.recorder, None
        if not rec["frames"]:
            raise ValueError("recording captured no frames")
        ep = Episode(
            width=self.c.native_width,
            height=self.c.native_height,
            tick_rate=self.c.tick_rate,
            frames=np.stack(rec["frames"]),
            labels=np.asarray(rec["labels"], dtype=np.uint8),
            stamps=np.asarray(rec["stamps"], dtype=np.uint32),
        )
        write_episode(rec["path"], ep)
        return {"path": str(rec["path"]), "frames": ep.frame_count}

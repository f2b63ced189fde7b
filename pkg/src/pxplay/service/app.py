"""FastAPI application: websocket gateway, small REST surface, static UI."""

import asyncio
import contextlib
import json
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from ..config import RunConfig
from .gateway import Gateway
from .schemas import HealthResponse, MetaResponse, parse_client_message


def create_app(config: RunConfig, checkpoint=None, data_dir=None,
               recordings_dir=None) -> FastAPI:
    gateway = Gateway(config, checkpoint=checkpoint, data_dir=data_dir,
                      recordings_dir=recordings_dir)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        clock = asyncio.create_task(gateway.run())
        yield
        gateway.stop()
        clock.cancel()
        with contextlib.suppress(asyncio.CancelledError):
            await clock

    app = FastAPI(title="pxplay gateway", lifespan=lifespan)
    app.state.gateway = gateway

    @app.get("/api/health", response_model=HealthResponse)
    def health():
        return HealthResponse()

    @app.get("/api/meta", response_model=MetaResponse)
    def meta():
        return MetaResponse(
            classes=gateway.class_names,
            resolution=gateway.display_hw,
            mode=gateway.mode,
            tick=gateway.stream_tick,
            tick_hz=gateway.tick_hz,
            has_model=gateway.model is not None,
            recording=gateway.recorder is not None,
        )

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        await ws.send_text(json.dumps(gateway.hello_message()))
        queue = gateway.subscribe()

        async def pump():
            while True:
                await ws.send_text(await queue.get())

        sender = asyncio.create_task(pump())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = parse_client_message(json.loads(text))
                    if msg.type == "input":
                        gateway.handle_input(msg)
                    elif msg.type == "mode":
                        gateway.handle_mode(msg)
                    else:
                        gateway.handle_record(msg)
                except (ValueError, json.JSONDecodeError) as exc:
                    await ws.send_text(json.dumps(
                        {"type": "error", "message": str(exc)}
                    ))
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            gateway.unsubscribe(queue)

    ui_dir = Path(config.ui_dir)
    if ui_dir.is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

import json
import socket

from refocus.cli import main
from refocus.events import read_events


def test_serve_with_scripted_fixtures_exits_zero_and_logs(tmp_path):
    sim = tmp_path / "sim"
    assert main(["simulate", "--seed", "13", "--duration", "8", "--mode", "auto",
                 "--parts", "mindless,alerting,control", "--out", str(sim),
                 "--no-landmarks"]) == 0
    export = tmp_path / "console-export.jsonl"
    code = main([
        "serve", "--mode", "auto", "--parts", "mindless,alerting,control",
        "--part-duration", "8", "--time-scale", "10", "--blinded",
        "--seed", "13", "--log-dir", str(tmp_path), "--session-id", "cli",
        "--fixtures", str(sim), "--export", str(export), "--wait-timeout", "15",
    ])
    assert code == 0
    log_path = tmp_path / "session-cli.events.jsonl"
    events = read_events(log_path)
    types = [e.type for e in events]
    assert types.count("mode_set") == 3
    assert "session_end" in types and "condition_reveal" in types
    # the scripted console's export equals the log byte for byte
    assert export.read_text() == log_path.read_text()


def test_serve_port_in_use_is_a_data_error(tmp_path, capsys):
    blocker = socket.socket()
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        code = main(["serve", "--port", str(port), "--log-dir", str(tmp_path),
                     "--session-id", "busy", "--wait-timeout", "1"])
    finally:
        blocker.close()
    assert code == 2
    assert "serve:" in capsys.readouterr().err


def test_log_dir_env_var_override(tmp_path, monkeypatch):
    env_dir = tmp_path / "from-env"
    monkeypatch.setenv("REFOCUS_LOG_DIR", str(env_dir))
    # no roles connect: the session aborts after the wait timeout but
    # still writes its (error-bearing) log to the env-provided directory
    code = main(["serve", "--mode", "manual", "--parts", "mindless",
                 "--part-duration", "1", "--time-scale", "10",
                 "--session-id", "envtest", "--wait-timeout", "0.3"])
    assert code == 0
    events = read_events(env_dir / "session-envtest.events.jsonl")
    assert any(e.type == "error" for e in events)
    assert any(e.type == "session_end" for e in events)


def test_disconnect_mid_part_marks_degraded(tmp_path):
    import asyncio

    from refocus.control import ControlServer, Message, ServerConfig, encode

    async def scenario():
        from websockets.asyncio.client import connect

        config = ServerConfig(mode="manual", parts=("mindless",), part_duration=20.0,
                              time_scale=10.0, log_dir=tmp_path, session_id="drop",
                              wait_timeout=10.0)
        server = ControlServer(config)
        task = asyncio.create_task(server.run())
        while server.port is None:
            await asyncio.sleep(0.01)
        url = f"ws://127.0.0.1:{server.port}"
        async with connect(url) as sensor:
            await sensor.send(encode(Message("hello", 0.0, 1, {"role": "sensor"})))
            async with connect(url) as client:
                await client.send(encode(Message("hello", 0.0, 1, {"role": "client"})))
                await asyncio.sleep(0.4)  # part 0 is running
            # client socket just dropped mid-part
            await asyncio.sleep(0.3)
        await asyncio.wait_for(task, timeout=30.0)
        return server.log.path

    log_path = asyncio.run(scenario())
    events = read_events(log_path)
    degraded = [e for e in events if e.type == "error"
                and "disconnected" in e.payload.get("reason", "")]
    assert degraded
    assert degraded[0].payload.get("part") == 0

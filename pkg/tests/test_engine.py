import numpy as np

from refocus.audio import (
    ALERT,
    AudioEngine,
    EffectMailbox,
    Mindless,
    PerturbationPattern,
    chunk_stream,
)

from oracles import fft_peak_hz

SR = 16_000


def tone_chunks(freq=440.0, seconds=1.0, amplitude=0.5):
    t = np.arange(int(SR * seconds)) / SR
    return list(chunk_stream(amplitude * np.sin(2 * np.pi * freq * t), SR))


def test_none_is_bitexact_passthrough():
    engine = AudioEngine(SR)
    for chunk in tone_chunks(seconds=0.25):
        out = engine.process(chunk, None)
        assert out.samples is chunk.samples or np.array_equal(out.samples, chunk.samples)


def test_volume_halve_dispatch():
    engine = AudioEngine(SR)
    chunk = tone_chunks(seconds=0.0625)[0]
    out = engine.process(chunk, Mindless(PerturbationPattern.VOLUME_HALVE))
    np.testing.assert_allclose(out.samples, chunk.samples * 0.5)


def test_pitch_dispatch_shifts_up():
    engine = AudioEngine(SR)
    effect = Mindless(PerturbationPattern.PITCH_UP)
    out = np.concatenate(
        [engine.process(c, effect).samples for c in tone_chunks(seconds=1.5)]
    )
    peak = fft_peak_hz(out[SR // 2 :], SR)
    assert abs(peak - 493.883) / 493.883 < 0.01


def test_alert_on_silence_is_pure_beep():
    engine = AudioEngine(SR)
    chunks = list(chunk_stream(np.zeros(SR // 4), SR))
    outs = [engine.process(c, ALERT) for c in chunks]
    combined = np.concatenate([o.samples for o in outs])
    burst = combined[: int(0.1 * SR)]
    tail = combined[int(0.1 * SR) + 16 :]
    assert np.max(np.abs(burst)) > 0.4
    assert np.all(tail == 0.0)
    peak = fft_peak_hz(burst, SR)
    assert abs(peak - 1000.0) < 25.0


def test_alert_timer_follows_sample_clock():
    engine = AudioEngine(SR)
    chunks = list(chunk_stream(np.zeros(4 * SR), SR))
    outs = [engine.process(c, ALERT) for c in chunks]
    # second burst appears exactly at the 3 s chunk (start_index 48000)
    at_3s = [o for o in outs if o.start_index == 3 * SR][0]
    assert np.max(np.abs(at_3s.samples)) > 0.4
    quiet = [o for o in outs if o.start_index == SR][0]
    assert np.all(quiet.samples == 0.0)


def test_alert_restarts_when_retriggered():
    engine = AudioEngine(SR)
    chunks = list(chunk_stream(np.zeros(SR), SR))
    engine.process(chunks[0], ALERT)
    engine.process(chunks[1], None)  # deactivate
    out = engine.process(chunks[8], ALERT)  # reactivate: burst starts again
    assert np.max(np.abs(out.samples)) > 0.4


def test_every_effect_preserves_length_and_bounds():
    engine = AudioEngine(SR)
    effects = [None, ALERT] + [Mindless(p) for p in PerturbationPattern]
    loud = list(chunk_stream(np.clip(np.sin(np.arange(SR) * 0.3) * 1.0, -1, 1), SR))
    for effect in effects:
        for chunk in loud:
            out = engine.process(chunk, effect)
            assert len(out) == len(chunk)
            assert np.all(out.samples <= 1.0) and np.all(out.samples >= -1.0)


def test_identical_streams_and_schedules_give_identical_output():
    def run():
        engine = AudioEngine(SR)
        outs = []
        for index, chunk in enumerate(tone_chunks(seconds=1.0)):
            effect = Mindless(PerturbationPattern.PITCH_DOWN) if (index // 4) % 2 == 0 else None
            outs.append(engine.process(chunk, effect).samples.copy())
        return np.concatenate(outs)

    np.testing.assert_array_equal(run(), run())


def test_effect_mailbox_snapshot():
    mailbox = EffectMailbox()
    assert mailbox.snapshot() is None
    mailbox.publish(ALERT)
    assert mailbox.snapshot() is ALERT

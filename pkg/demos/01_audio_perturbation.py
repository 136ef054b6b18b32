"""Audio perturbation walkthrough.

Runs a pure tone through each of the four perturbation patterns and the
beep alert, then verifies what came out by locating the dominant FFT
peak. Writes the processed audio to WAV files next to this script.
"""
from pathlib import Path

import numpy as np

from refocus.audio import (
    ALERT,
    AudioEngine,
    Mindless,
    PerturbationPattern,
    chunk_stream,
    write_wav,
)

SR = 16_000
OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)


def peak_hz(signal):
    spectrum = np.abs(np.fft.rfft(signal * np.hanning(len(signal))))
    return np.argmax(spectrum) * SR / len(signal)


def run_through_engine(samples, effect):
    engine = AudioEngine(SR)
    return np.concatenate([engine.process(c, effect).samples for c in chunk_stream(samples, SR)])


t = np.arange(2 * SR) / SR
tone = 0.5 * np.sin(2 * np.pi * 440.0 * t)
print(f"input: 440 Hz tone, 2 s, peak measured at {peak_hz(tone):.1f} Hz")
print()

for pattern in PerturbationPattern:
    out = run_through_engine(tone, Mindless(pattern))
    steady = out[SR // 2 :]
    rms_in = np.sqrt(np.mean(tone**2))
    rms_out = np.sqrt(np.mean(steady**2))
    print(f"{pattern.value:14s} -> peak {peak_hz(steady):7.1f} Hz, "
          f"rms {rms_out:.3f} (input {rms_in:.3f})")
    write_wav(OUT / f"{pattern.value}.wav", out, SR)

print()
print("alert: beep overlay on silence, 0.1 s burst every 3 s")
silence = np.zeros(7 * SR)
beeped = run_through_engine(silence, ALERT)
loud_samples = np.flatnonzero(np.abs(beeped) > 0.1)
onsets = loud_samples[np.flatnonzero(np.diff(loud_samples, prepend=-SR) > SR // 2)]
print(f"burst onsets at {[float(round(i / SR, 2)) for i in onsets]} s")
write_wav(OUT / "alert.wav", beeped, SR)

print()
print(f"wrote processed audio to {OUT}/")

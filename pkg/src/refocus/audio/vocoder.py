"""Streaming pitch shifter: phase-vocoder time stretch plus resampling.

Shifting by ratio r works in two stages that share one pass:

1. time-stretch the input by r with a phase vocoder (analysis hop of
   `hop` samples, synthesis hop of r*hop, per-bin phase accumulation),
2. read the stretched signal back at step r with linear interpolation,
   which scales all frequencies by r and restores the original duration.

The shifter is driven chunk by chunk and always returns exactly as many
samples as it was given, so stream latency is constant. Until the
analysis window has filled (about window + hop samples), the wet path
has nothing to emit and the input is passed through dry; a short linear
crossfade hides the splice.
"""
from __future__ import annotations

import numpy as np

from .chunks import AudioChunk

MIN_RATIO = 0.5
MAX_RATIO = 2.0

DEFAULT_WINDOW = 1024
DEFAULT_HOP = 256

_CROSSFADE = 64  # samples blended at the dry-to-wet splice


def check_ratio(ratio: float) -> float:
    ratio = float(ratio)
    if not np.isfinite(ratio) or not (MIN_RATIO <= ratio <= MAX_RATIO):
        raise ValueError(f"pitch ratio must lie in [{MIN_RATIO}, {MAX_RATIO}], got {ratio!r}")
    return ratio


class PitchShifter:
    """Stateful shifter for one stream at one fixed ratio.

    State covers the analysis ring buffer, per-bin accumulated phase and
    the overlap-add accumulators, so consecutive chunks join without
    frame-boundary artifacts. reset() returns the shifter to its
    initial state; identical input streams then produce identical
    output streams.
    """

    def __init__(
        self,
        ratio: float,
        sample_rate: int,
        window: int = DEFAULT_WINDOW,
        hop: int = DEFAULT_HOP,
    ):
        self.ratio = check_ratio(ratio)
        self.sample_rate = sample_rate
        self.window = window
        self.hop = hop
        self.syn_hop = self.ratio * hop
        self.win = np.hanning(window + 1)[:window]
        self.win_sq = self.win * self.win
        self.omega = 2.0 * np.pi * np.arange(window // 2 + 1) / window  # rad/sample per bin
        self.reset()

    def reset(self) -> None:
        n_bins = self.window // 2 + 1
        self.prev_phase = np.zeros(n_bins)
        self.acc_phase = np.zeros(n_bins)
        self.first_frame = True
        self.in_buf = np.zeros(0)
        self.ola_num = np.zeros(0)
        self.ola_den = np.zeros(0)
        self.ola_off = 0  # absolute stretched index of ola_num[0]
        self.syn_pos = 0.0  # absolute stretched position of the next synthesis frame
        self.res_pos = 0.0  # absolute stretched position of the resampler
        self.warm = False

    def _grow(self, upto: int) -> None:
        need = upto - self.ola_off - len(self.ola_num)
        if need > 0:
            self.ola_num = np.concatenate([self.ola_num, np.zeros(need)])
            self.ola_den = np.concatenate([self.ola_den, np.zeros(need)])

    def _analyze_pending(self) -> None:
        while len(self.in_buf) >= self.window:
            frame = self.in_buf[: self.window] * self.win
            spectrum = np.fft.rfft(frame)
            magnitude = np.abs(spectrum)
            phase = np.angle(spectrum)
            if self.first_frame:
                self.acc_phase = phase.copy()
                self.first_frame = False
            else:
                # deviation of the measured phase advance from the bin center,
                # wrapped to (-pi, pi], gives the true per-sample frequency
                delta = phase - self.prev_phase - self.omega * self.hop
                delta = (delta + np.pi) % (2.0 * np.pi) - np.pi
                instantaneous = self.omega + delta / self.hop
                self.acc_phase = self.acc_phase + instantaneous * self.syn_hop
            self.prev_phase = phase
            synth = np.fft.irfft(magnitude * np.exp(1j * self.acc_phase)) * self.win
            pos = int(round(self.syn_pos))
            self._grow(pos + self.window)
            i0 = pos - self.ola_off
            self.ola_num[i0 : i0 + self.window] += synth
            self.ola_den[i0 : i0 + self.window] += self.win_sq
            self.syn_pos += self.syn_hop
            self.in_buf = self.in_buf[self.hop :]

    def process(self, chunk: AudioChunk) -> AudioChunk:
        """Shift one chunk; output length equals input length."""
        x = chunk.samples
        n_out = len(x)
        self.in_buf = np.concatenate([self.in_buf, x])
        self._analyze_pending()

        # stretched samples before the next frame position are final
        final_upto = int(round(self.syn_pos))
        wet = []
        while len(wet) < n_out:
            lo = int(np.floor(self.res_pos))
            if lo + 1 >= final_upto:
                break
            i0 = lo - self.ola_off
            frac = self.res_pos - lo
            d0 = self.ola_den[i0]
            d1 = self.ola_den[i0 + 1]
            s0 = self.ola_num[i0] / d0 if d0 > 1e-9 else 0.0
            s1 = self.ola_num[i0 + 1] / d1 if d1 > 1e-9 else 0.0
            wet.append(s0 + frac * (s1 - s0))
            self.res_pos += self.ratio

        out = np.empty(n_out)
        deficit = n_out - len(wet)
        if deficit > 0:
            out[:deficit] = x[:deficit]  # warm-up: wet path not filled yet
            out[deficit:] = wet
            if wet and not self.warm:
                fade = min(_CROSSFADE, len(wet))
                ramp = np.linspace(0.0, 1.0, fade, endpoint=False)
                seg = slice(deficit, deficit + fade)
                out[seg] = (1.0 - ramp) * x[seg] + ramp * out[seg]
        else:
            out[:] = wet
        if wet:
            self.warm = True

        drop = int(np.floor(self.res_pos)) - self.ola_off
        if drop > 0:
            self.ola_num = self.ola_num[drop:]
            self.ola_den = self.ola_den[drop:]
            self.ola_off += drop

        return chunk.replace_samples(np.clip(out, -1.0, 1.0))


def pitch_shift(state: PitchShifter, chunk: AudioChunk, ratio: float) -> AudioChunk:
    """Shift one chunk through an existing shifter state.

    The ratio is validated against the state it was created with; a
    shifter holds exactly one ratio for its lifetime.
    """
    check_ratio(ratio)
    if abs(ratio - state.ratio) > 1e-12:
        raise ValueError("shifter state was initialized for a different ratio")
    if chunk.sample_rate != state.sample_rate:
        raise ValueError("shifter state was initialized for a different sample rate")
    return state.process(chunk)

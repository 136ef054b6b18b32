"""16-bit mono PCM WAV input and output for the offline path.

Sample values map int16 <-> float as s/32768, which round-trips every
int16 exactly: quantization error only enters for floats produced by
processing.
"""
from __future__ import annotations

import wave
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from ..errors import UnsupportedFormat
from .chunks import AudioChunk, chunk_stream

_SCALE = 32768.0


def int16_to_float(raw: np.ndarray) -> np.ndarray:
    return raw.astype(np.float64) / _SCALE


def float_to_int16(samples: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(samples * _SCALE), -32768, 32767).astype(np.int16)


def read_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Read a whole 16-bit mono WAV file as floats in [-1, 1]."""
    with wave.open(str(path), "rb") as wav:
        if wav.getnchannels() != 1:
            raise UnsupportedFormat(f"{path}: expected mono, got {wav.getnchannels()} channels")
        if wav.getsampwidth() != 2:
            raise UnsupportedFormat(f"{path}: expected 16-bit PCM, got {8 * wav.getsampwidth()}-bit")
        rate = wav.getframerate()
        raw = np.frombuffer(wav.readframes(wav.getnframes()), dtype="<i2")
    return int16_to_float(raw), rate


def write_wav(path: str | Path, samples: np.ndarray, sample_rate: int) -> None:
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(sample_rate)
        wav.writeframes(float_to_int16(np.asarray(samples)).astype("<i2").tobytes())


def read_pcm(path: str | Path) -> Iterator[AudioChunk]:
    """Stream a WAV file as standard chunks (zero-padded, flagged tail)."""
    samples, rate = read_wav(path)
    yield from chunk_stream(samples, rate)


def write_pcm(path: str | Path, chunks: Iterable[AudioChunk], sample_rate: int | None = None) -> None:
    """Write chunks losslessly, trimming the padded tail of a partial chunk."""
    parts = []
    rate = sample_rate
    for chunk in chunks:
        if rate is None:
            rate = chunk.sample_rate
        elif chunk.sample_rate != rate:
            raise UnsupportedFormat("chunks disagree on sample rate")
        parts.append(chunk.valid_samples())
    if rate is None:
        raise UnsupportedFormat("no chunks to write")
    write_wav(path, np.concatenate(parts) if parts else np.zeros(0), rate)

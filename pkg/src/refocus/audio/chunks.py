"""Fixed-size mono sample buffers, the unit of real-time processing.

The stream is cut into CHUNKS_PER_SECOND equal chunks per second
(62.5 ms at the default rate), which is also the granularity at which
effect changes take hold.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

DEFAULT_SAMPLE_RATE = 16_000
CHUNKS_PER_SECOND = 16


def chunk_length(sample_rate: int = DEFAULT_SAMPLE_RATE) -> int:
    return sample_rate // CHUNKS_PER_SECOND


@dataclass
class AudioChunk:
    """A mono buffer of float samples in [-1, 1].

    start_index is the absolute offset of the first sample from the
    beginning of the stream. valid_length < len(samples) marks a
    zero-padded final chunk; writers must trim the padding.
    """

    samples: np.ndarray
    sample_rate: int = DEFAULT_SAMPLE_RATE
    start_index: int = 0
    valid_length: int | None = field(default=None)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("chunk samples must be one-dimensional")
        if self.sample_rate <= 0:
            raise ValueError("sample rate must be positive")
        if self.valid_length is not None and not 0 <= self.valid_length <= len(self.samples):
            raise ValueError("valid_length out of range")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    @property
    def start_time(self) -> float:
        return self.start_index / self.sample_rate

    @property
    def is_partial(self) -> bool:
        return self.valid_length is not None and self.valid_length < len(self.samples)

    def valid_samples(self) -> np.ndarray:
        if self.valid_length is None:
            return self.samples
        return self.samples[: self.valid_length]

    def replace_samples(self, samples: np.ndarray) -> "AudioChunk":
        if len(samples) != len(self.samples):
            raise ValueError("replacement must preserve chunk length")
        return AudioChunk(samples, self.sample_rate, self.start_index, self.valid_length)

    def check_amplitude(self) -> None:
        if len(self.samples) and (np.max(np.abs(self.samples)) > 1.0 + 1e-12):
            raise ValueError("samples exceed [-1, 1]")


def chunk_stream(
    samples: np.ndarray,
    sample_rate: int = DEFAULT_SAMPLE_RATE,
    start_index: int = 0,
) -> Iterator[AudioChunk]:
    """Cut a sample array into stream chunks, zero-padding the tail.

    The final chunk carries valid_length when the input does not divide
    evenly, so a writer can reproduce the input exactly.
    """
    samples = np.asarray(samples, dtype=np.float64)
    size = chunk_length(sample_rate)
    for off in range(0, len(samples), size):
        piece = samples[off : off + size]
        if len(piece) < size:
            padded = np.zeros(size)
            padded[: len(piece)] = piece
            yield AudioChunk(padded, sample_rate, start_index + off, valid_length=len(piece))
        else:
            yield AudioChunk(piece, sample_rate, start_index + off)


def assemble(chunks: Iterable[AudioChunk]) -> np.ndarray:
    """Concatenate chunks back into one array, dropping tail padding."""
    return np.concatenate([c.valid_samples() for c in chunks]) if chunks else np.zeros(0)

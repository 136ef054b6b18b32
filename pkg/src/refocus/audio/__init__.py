from .beep import BeepSpec, synthesize_beep
from .chunks import CHUNKS_PER_SECOND, DEFAULT_SAMPLE_RATE, AudioChunk, assemble, chunk_length, chunk_stream
from .effects import ALERT, Alert, Effect, Mindless, PerturbationPattern, apply_gain, effect_from_wire, effect_to_wire
from .engine import AudioEngine, EffectMailbox, process_chunk
from .pcm import read_pcm, read_wav, write_pcm, write_wav
from .vocoder import PitchShifter, pitch_shift

__all__ = [
    "ALERT",
    "Alert",
    "AudioChunk",
    "AudioEngine",
    "BeepSpec",
    "CHUNKS_PER_SECOND",
    "DEFAULT_SAMPLE_RATE",
    "Effect",
    "EffectMailbox",
    "Mindless",
    "PerturbationPattern",
    "PitchShifter",
    "apply_gain",
    "assemble",
    "chunk_length",
    "chunk_stream",
    "effect_from_wire",
    "effect_to_wire",
    "pitch_shift",
    "process_chunk",
    "read_pcm",
    "read_wav",
    "synthesize_beep",
    "write_pcm",
    "write_wav",
]

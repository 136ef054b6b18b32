import pytest
from hypothesis import given, strategies as st

from refocus.control.messages import MESSAGE_TYPES, Message, decode, encode
from refocus.errors import DecodeError


def test_round_trip_example():
    msg = Message("activate", 100.0, 7, {"episode": 3})
    assert decode(encode(msg)) == msg


@pytest.mark.parametrize("type_", sorted(MESSAGE_TYPES))
def test_round_trip_every_type(type_):
    payload = {
        "role": "client",
        "episode": 1,
        "state": "distracted",
        "mark": "refocus",
        "yaw": 1.5,
        "pitch": -2.5,
        "mode": "mindless",
        "order": ["mindless", "control"],
        "reason": "because",
    }
    needed = {k: payload[k] for k in MESSAGE_TYPES[type_]}
    msg = Message(type_, 12.25, 3, needed)
    assert decode(encode(msg)) == msg


def test_unknown_type_is_decode_error():
    with pytest.raises(DecodeError) as err:
        decode('{"type": "mystery", "t": 0.0, "seq": 1, "payload": {}}')
    assert "mystery" in str(err.value)


def test_missing_payload_field_names_the_field():
    with pytest.raises(DecodeError) as err:
        decode('{"type": "attention_state", "t": 0.0, "seq": 1, "payload": {}}')
    assert "state" in str(err.value)


def test_malformed_json_carries_offset():
    with pytest.raises(DecodeError) as err:
        decode('{"type": "hello", ')
    assert err.value.offset > 0


def test_non_object_frame_rejected():
    with pytest.raises(DecodeError):
        decode("[1, 2, 3]")


def test_bad_enum_values_rejected():
    with pytest.raises(DecodeError):
        decode('{"type": "hello", "t": 0, "seq": 1, "payload": {"role": "wizard"}}')
    with pytest.raises(DecodeError):
        decode('{"type": "annotation", "t": 0, "seq": 1, "payload": {"mark": "pause"}}')


def test_bytes_frames_are_accepted():
    msg = Message("session_end", 5.0, 2, {})
    assert decode(encode(msg).encode("utf-8")) == msg


_payload_values = st.one_of(
    st.integers(min_value=-1_000_000, max_value=1_000_000),
    st.floats(allow_nan=False, allow_infinity=False, width=32),
    st.text(max_size=20),
    st.booleans(),
)


@given(
    type_=st.sampled_from(sorted(MESSAGE_TYPES)),
    t=st.floats(min_value=0, max_value=1e7, allow_nan=False),
    seq=st.integers(min_value=0, max_value=2**31),
    extra=st.dictionaries(st.text(min_size=1, max_size=10), _payload_values, max_size=4),
)
def test_round_trip_property(type_, t, seq, extra):
    base = {
        "role": "sensor",
        "episode": 0,
        "state": "attentive",
        "mark": "distraction_start",
        "yaw": 0.0,
        "pitch": 0.0,
        "mode": "control",
        "order": [],
        "reason": "x",
    }
    payload = dict(extra)
    payload.update({k: base[k] for k in MESSAGE_TYPES[type_]})
    msg = Message(type_, t, seq, payload)
    assert decode(encode(msg)) == msg

from pathlib import Path

import numpy as np
import pytest

from evtcodec.coo import coo_decode, coo_encode
from evtcodec.encoders import encode
from evtcodec.errors import FormatError
from evtcodec.events import GEN1, EventStream, SensorGeometry, TimeWindow
from evtcodec.formats import (
    decode_etn,
    decode_evb,
    encode_eco,
    encode_etn,
    encode_evb,
    grayscale,
    read_coo,
    read_events,
    read_tensor,
    write_coo,
    write_events,
    write_pgm,
    write_tensor,
)
from evtcodec.tensor import FormatTag, count_nonzeros

from conftest import make_stream, random_chunk, random_tensor

DATA = Path(__file__).parent / "data"


def test_csv_example(tmp_path):
    p = tmp_path / "ev.csv"
    p.write_text("t_us,x,y,p\n0,1,2,1\n5,1,2,-1\n")
    s = read_events(p, geometry=SensorGeometry(4, 4))
    assert list(s) == [(0, 1, 2, 1), (5, 1, 2, -1)]


def test_csv_zero_polarity_normalized(tmp_path):
    p = tmp_path / "ev.csv"
    p.write_text("t_us,x,y,p\n0,1,2,0\n3,0,0,1\n")
    assert read_events(p, geometry=SensorGeometry(4, 4)).p.tolist() == [-1, 1]


@pytest.mark.parametrize(
    "body, where",
    [
        ("0,1,2,1\n5,1,2,2\n", ":3:"),
        ("5,1,2,1\n4,1,2,1\n", ":3:"),
        ("0,9,2,1\n", ":2:"),
        ("0,1,2\n", ":2:"),
        ("0,a,2,1\n", ":2:"),
    ],
)
def test_csv_errors_name_line(tmp_path, body, where):
    p = tmp_path / "ev.csv"
    p.write_text("t_us,x,y,p\n" + body)
    with pytest.raises(FormatError, match=where):
        read_events(p, geometry=SensorGeometry(4, 4))


def test_csv_requires_header_and_geometry(tmp_path):
    p = tmp_path / "ev.csv"
    p.write_text("0,1,2,1\n")
    with pytest.raises(FormatError):
        read_events(p, geometry=SensorGeometry(4, 4))
    p.write_text("t_us,x,y,p\n0,1,2,1\n")
    with pytest.raises(FormatError):
        read_events(p)


def test_csv_roundtrip(tmp_path, rng):
    s, _ = random_chunk(rng, 500)
    write_events(tmp_path / "a.csv", s)
    assert read_events(tmp_path / "a.csv", geometry=s.geometry) == s


def test_golden_evb():
    blob = (DATA / "events.evb").read_bytes()
    s = decode_evb(blob)
    assert s.geometry == SensorGeometry(4, 4)
    assert list(s) == [(0, 1, 2, 1), (5, 1, 2, -1), (7, 3, 0, 1)]
    assert encode_evb(s) == blob


def test_evb_roundtrip_and_detection(tmp_path, rng):
    s, _ = random_chunk(rng, 1000, w=304, h=240)
    path = tmp_path / "no_extension"
    write_events(path, s, "evb")
    assert read_events(path) == s
    assert encode_evb(read_events(path)) == path.read_bytes()


def test_evb_empty_stream():
    s = EventStream.empty(SensorGeometry(3, 2))
    assert decode_evb(encode_evb(s)) == s


@pytest.mark.parametrize(
    "mutate",
    [
        lambda b: b"EVB2" + b[4:],
        lambda b: b[:-1],
        lambda b: b + b"\0" * 16,
        lambda b: b[:24] + b"\x09" + b[25:],  # x=9 on a 4x4 sensor
        lambda b: b[:28] + b"\x00" + b[29:],  # polarity 0
        lambda b: b[:29] + b"\x01" + b[30:],  # non-zero padding
    ],
)
def test_evb_rejects_bad_input(mutate):
    blob = (DATA / "events.evb").read_bytes()
    with pytest.raises(FormatError):
        decode_evb(mutate(blob))


def test_evb_rejects_unordered_timestamps():
    blob = bytearray((DATA / "events.evb").read_bytes())
    blob[16 + 32] = 0x04  # third event t=7 -> 4, earlier than 5
    with pytest.raises(FormatError, match="precedes"):
        decode_evb(bytes(blob))


def test_evb_geometry_mismatch_rejected():
    with pytest.raises(FormatError):
        read_events(DATA / "events.evb", geometry=GEN1)


def test_vendor_stub(tmp_path):
    p = tmp_path / "rec.dat"
    p.write_bytes(b"% header\n")
    with pytest.raises(FormatError, match="convert"):
        read_events(p)


def test_golden_etn():
    blob = (DATA / "vtei_2x2.etn").read_bytes()
    t = decode_etn(blob)
    assert t.format_tag is FormatTag.VTEI and t.dims == (1, 2, 2)
    assert t.data.ravel().tolist() == [1, 0, 0, -1]
    assert t.window == TimeWindow(0, 10, 1)
    assert encode_etn(t) == blob


@pytest.mark.parametrize("tag", list(FormatTag))
def test_etn_roundtrip(tmp_path, tag, rng):
    t = random_tensor(rng, tag, SensorGeometry(13, 7), 3, 0.3)
    write_tensor(tmp_path / "t.etn", t)
    back = read_tensor(tmp_path / "t.etn")
    assert back == t
    assert back.data.tobytes() == t.data.tobytes()


def test_etn_empty_tensor_roundtrip(rng):
    t = random_tensor(rng, "vtei", SensorGeometry(5, 5), 2, 0.0)
    assert decode_etn(encode_etn(t)) == t


def test_etn_rejects_truncation_and_dtype_mismatch():
    blob = (DATA / "vtei_2x2.etn").read_bytes()
    with pytest.raises(FormatError):
        decode_etn(blob[:-1])
    with pytest.raises(FormatError):
        decode_etn(blob[:4] + b"\x02" + blob[5:])  # float32 dtype for a VTEI tensor
    with pytest.raises(FormatError):
        decode_etn(b"ETN0" + blob[4:])


def test_golden_coo():
    blob = (DATA / "vtei_gen1.coo").read_bytes()
    buf = read_coo(DATA / "vtei_gen1.coo")
    assert buf.payload == bytes([0x05, 0x06, 0x14])
    t = coo_decode(buf)
    assert t.data[2, 3, 5] == 1 and count_nonzeros(t) == 1
    assert encode_eco(coo_encode(t)) == blob


def test_coo_file_roundtrip(tmp_path, rng):
    s, w = random_chunk(rng, 2000, w=304, h=240)
    for tag in FormatTag:
        buf = coo_encode(encode(s, w, tag))
        write_coo(tmp_path / "c.coo", buf)
        assert read_coo(tmp_path / "c.coo") == buf


def test_grayscale_mapping_and_pgm(tmp_path):
    t = decode_etn((DATA / "vtei_2x2.etn").read_bytes())
    assert grayscale(t, 0).ravel().tolist() == [255, 128, 128, 0]
    write_pgm(tmp_path / "a.pgm", t, 0)
    assert (tmp_path / "a.pgm").read_bytes() == b"P5\n2 2\n255\n" + bytes([255, 128, 128, 0])

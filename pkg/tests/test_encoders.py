import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evtcodec.encoders import encode, encode_mdes, encode_shist, encode_voxel, encode_vtei
from evtcodec.errors import EncodeError
from evtcodec.events import EventStream, SensorGeometry, TimeWindow
from evtcodec.tensor import DenseTensor, FormatTag, count_nonzeros

from conftest import make_stream, random_chunk
from oracles import ORACLES

TWO = [(1, 0, 0, 1), (2, 0, 0, -1)]


def test_vtei_last_event_wins(backend):
    t = encode_vtei(make_stream(TWO), TimeWindow(0, 2, 1), backend=backend)
    assert t.dims == (1, 4, 4)
    assert t.data[0, 0, 0] == -1
    assert count_nonzeros(t) == 1


def test_vtei_equal_timestamps_resolve_by_order(backend):
    s = make_stream([(5, 1, 1, 1), (5, 1, 1, -1), (5, 2, 2, -1), (5, 2, 2, 1)])
    t = encode_vtei(s, TimeWindow(0, 10, 2), backend=backend)
    assert t.data[1, 1, 1] == -1 and t.data[1, 2, 2] == 1


def test_vtei_single_event(backend):
    s = make_stream([(10_000, 3, 2, 1)], w=8, h=8)
    t = encode_vtei(s, TimeWindow(0, 50_000, 5), backend=backend)
    assert t.data[1, 2, 3] == 1
    assert count_nonzeros(t) == 1


@pytest.mark.parametrize("fmt, chans", [("vtei", 5), ("shist", 10), ("mdes", 5), ("voxel", 10)])
def test_empty_chunk_is_all_zero(backend, fmt, chans):
    t = encode(EventStream.empty(SensorGeometry(6, 3)), TimeWindow(0, 50_000, 5), fmt, backend=backend)
    assert t.dims == (chans, 3, 6)
    assert count_nonzeros(t) == 0


def test_shist_two_events(backend):
    t = encode_shist(make_stream(TWO), TimeWindow(0, 2, 1), backend=backend)
    assert t.data[0, 0, 0] == 1  # negative group
    assert t.data[1, 0, 0] == 1  # positive group
    assert count_nonzeros(t) == 2


def test_shist_saturates(backend):
    s = make_stream([(7, 1, 1, 1)] * 300)
    t = encode_shist(s, TimeWindow(0, 10, 1), backend=backend)
    assert t.data[1, 1, 1] == 255
    assert t.data.dtype == np.uint8


def test_mdes_sub_window_membership(backend):
    w = TimeWindow(0, 50_000, 5)
    early = encode_mdes(make_stream([(10_000, 1, 1, 1)]), w, backend=backend)
    assert early.data[:, 1, 1].tolist() == [1, 0, 0, 0, 0]
    late = encode_mdes(make_stream([(50_000, 1, 1, -1)]), w, backend=backend)
    assert late.data[:, 1, 1].tolist() == [-1] * 5
    # sub-window starts 25000, 37500, 43750, 46875 are inclusive
    edges = encode_mdes(make_stream([(43_750, 0, 0, 1), (46_874, 1, 0, 1)]), w, backend=backend)
    assert edges.data[:, 0, 0].tolist() == [1, 1, 1, 1, 0]
    assert edges.data[:, 0, 1].tolist() == [1, 1, 1, 1, 0]


def test_mdes_bins_share_the_last_event(backend):
    s = make_stream([(1_000, 0, 0, -1), (49_000, 0, 0, 1)])
    t = encode_mdes(s, TimeWindow(0, 50_000, 5), backend=backend)
    assert t.data[:, 0, 0].tolist() == [1, 1, 1, 1, 1]


def test_voxel_mid_window(backend):
    t = encode_voxel(make_stream([(1, 0, 0, 1)]), TimeWindow(0, 2, 2), backend=backend)
    assert t.data[2:, 0, 0].tolist() == [0.5, 0.5]
    assert t.data[:2].sum() == 0


def test_voxel_at_window_start(backend):
    t = encode_voxel(make_stream([(0, 2, 1, -1)]), TimeWindow(0, 50_000, 5), backend=backend)
    assert t.data[0, 1, 2] == 1.0
    assert count_nonzeros(t) == 1


def test_voxel_needs_two_bins():
    with pytest.raises(EncodeError):
        encode_voxel(make_stream(TWO), TimeWindow(0, 2, 1))


def test_events_outside_window_rejected():
    with pytest.raises(EncodeError):
        encode_vtei(make_stream([(60_000, 0, 0, 1)]), TimeWindow(0, 50_000, 5))


def test_events_outside_geometry_rejected():
    s = make_stream([(0, 7, 0, 1)], w=8, h=8)
    small = EventStream(SensorGeometry(4, 4), s.t, s.x, s.y, s.p)  # bypass validation
    with pytest.raises(EncodeError):
        encode_vtei(small, TimeWindow(0, 10, 1))


def test_tensor_dims_checked():
    with pytest.raises(ValueError):
        DenseTensor(np.zeros((2, 4, 4), np.int8), FormatTag.VTEI, TimeWindow(0, 1, 1), SensorGeometry(4, 4))


@pytest.mark.parametrize("fmt", ["vtei", "shist", "mdes", "voxel"])
def test_against_oracle_small_random(backend, fmt):
    rng = np.random.default_rng(7)
    for _ in range(40):
        bins = int(rng.integers(2 if fmt == "voxel" else 1, 6))
        stream, window = random_chunk(rng, int(rng.integers(0, 400)), w=6, h=5, bins=bins, t_end=int(rng.integers(1, 1000)))
        got = encode(stream, window, fmt, backend=backend).data
        want = ORACLES[fmt](list(stream), window.t_start, window.t_end, bins, 5, 6)
        if fmt == "voxel":
            np.testing.assert_allclose(got, want, rtol=1e-6, atol=1e-6)
        else:
            np.testing.assert_array_equal(got, want)


event_lists = st.lists(
    st.tuples(st.integers(0, 1000), st.integers(0, 7), st.integers(0, 7), st.sampled_from([-1, 1])),
    max_size=120,
).map(lambda evs: sorted(evs, key=lambda e: e[0]))


@settings(max_examples=60)
@given(event_lists, st.integers(2, 6))
def test_properties(events, bins):
    s = make_stream(events, 8, 8)
    w = TimeWindow(0, 1000, bins)
    vtei, mdes = encode_vtei(s, w), encode_mdes(s, w)
    shist, vox = encode_shist(s, w), encode_voxel(s, w)

    assert set(np.unique(vtei.data)) <= {-1, 0, 1}
    assert set(np.unique(mdes.data)) <= {-1, 0, 1}
    assert count_nonzeros(vtei) <= len(events)
    assert int(shist.data.sum(dtype=np.int64)) == len(events)
    assert np.isclose(float(vox.data.sum(dtype=np.float64)), len(events), rtol=1e-4, atol=1e-4)
    assert (vox.data >= 0).all()

    neg = s.negated()
    assert np.array_equal(encode_vtei(neg, w).data, -vtei.data)
    assert np.array_equal(encode_mdes(neg, w).data, -mdes.data)
    for enc, orig in ((encode_shist, shist), (encode_voxel, vox)):
        flipped = enc(neg, w).data
        assert np.array_equal(flipped[:bins], orig.data[bins:])
        assert np.array_equal(flipped[bins:], orig.data[:bins])

    again = encode_voxel(s, w)
    assert again.data.tobytes() == vox.data.tobytes()


def test_vtei_nonzero_iff_event_in_cell(rng):
    stream, window = random_chunk(rng, 3000, bins=4)
    t = encode_vtei(stream, window).data
    hit = np.zeros_like(t, dtype=bool)
    for e in stream:
        b = min((e.t - window.t_start) * 4 // window.length, 3)
        hit[b, e.y, e.x] = True
    assert np.array_equal(t != 0, hit)

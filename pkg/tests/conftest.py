import numpy as np
import pytest

from evtcodec import available_backends
from evtcodec.events import EventStream, SensorGeometry, TimeWindow
from evtcodec.tensor import DenseTensor, FormatTag, channels_for

from oracles import random_events


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_stream(events, w=4, h=4):
    return EventStream.from_events(SensorGeometry(w, h), events)


def random_chunk(rng, n, w=16, h=16, bins=5, t_start=0, t_end=50_000):
    t, x, y, p = random_events(rng, n, w, h, t_start, t_end)
    stream = EventStream.from_arrays(SensorGeometry(w, h), t, x, y, p)
    return stream, TimeWindow(t_start, t_end, bins)


def random_tensor(rng, tag, geometry, bins, density):
    tag = FormatTag.parse(tag)
    shape = (channels_for(tag, bins), geometry.height, geometry.width)
    mask = rng.random(shape) < density
    if tag.signed:
        data = (mask * rng.choice(np.array([-1, 1], np.int8), shape)).astype(np.int8)
    elif tag is FormatTag.SHIST:
        data = (mask * rng.integers(1, 256, shape)).astype(np.uint8)
    else:
        data = (mask * rng.uniform(1e-3, 40.0, shape)).astype(np.float32)
    return DenseTensor(data, tag, TimeWindow(0, 50_000, bins), geometry)


# acceptance criteria report: test_acceptance appends (number, title, passed, detail)
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, status, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{status}] {num:>2}. {title}: {detail}")

"""Event-camera stream encoders, COO codec, augmentations and benchmarks."""

from ._backend import BACKEND, available_backends
from .augment import (
    AugSequenceDraw,
    RpsBranch,
    RpsConfig,
    apply_sequence,
    draw_sequence,
    hflip,
    rps_apply,
    rps_draw,
    zoom_out,
)
from .bench import BenchSummary, EncodingReport, bench_corpus, compute_sizes, measure_encode
from .coo import CooBuffer, CooLayout, coo_decode, coo_encode, layout_for
from .encoders import encode, encode_mdes, encode_shist, encode_voxel, encode_vtei
from .errors import (
    AugmentError,
    CodecError,
    EncodeError,
    EventError,
    EvtCodecError,
    FormatError,
    OutOfWindowError,
)
from .events import GEN1, Event, EventStream, SensorGeometry, TimeWindow, assign_bin, chunk_stream
from .formats import read_coo, read_events, read_tensor, write_coo, write_events, write_tensor
from .synth import synth_events
from .tensor import DenseTensor, DType, FormatTag, count_nonzeros

__version__ = "0.1.0"

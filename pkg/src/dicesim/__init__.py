"""Deterministic behavioral twin of an FPGA digital dice unit.

The package mirrors the synthesized design register for register: the
xorshift generator, the tilt debounce vote, the dice-selection state
machine, the display pipeline, the keep-awake toggler and the UART
transmitter all advance on the same clock-domain tick schedule as the
hardware, so every logged artifact is reproducible bit for bit.
"""

from .device import (
    DEFAULT_ADC_SEED,
    DICE_TABLE,
    SUPPORTED_DICE,
    Device,
    DeviceConfig,
    DeviceInputs,
    SyntheticAdc,
)
from .display import DisplayMux, bcd_select, glyph, pack_word, render_word
from .prng import (
    FEEDBACK,
    MASK32,
    STATELESS,
    PrngState,
    feedback_state,
    next_rand,
    seed_shift,
    xorshift_inverse,
    xorshift_step,
)
from .stats import (
    BiasReport,
    Histogram,
    UniformityReport,
    chi_square,
    critical_value,
    modulo_bias,
    raw_histogram,
    tally,
    uniformity_report,
)
from .timing import HALF_PERIODS, SYSCLK_HZ, Scheduler, TickEvent, frequency_of
from .trace import ReplayConfig, RunLog, load_trace, parse_trace, replay
from .uart import UartChannel, decode_stream, encode_frame, payload_pack

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ADC_SEED",
    "DICE_TABLE",
    "SUPPORTED_DICE",
    "Device",
    "DeviceConfig",
    "DeviceInputs",
    "SyntheticAdc",
    "DisplayMux",
    "bcd_select",
    "glyph",
    "pack_word",
    "render_word",
    "FEEDBACK",
    "MASK32",
    "STATELESS",
    "PrngState",
    "feedback_state",
    "next_rand",
    "seed_shift",
    "xorshift_inverse",
    "xorshift_step",
    "BiasReport",
    "Histogram",
    "UniformityReport",
    "chi_square",
    "critical_value",
    "modulo_bias",
    "raw_histogram",
    "tally",
    "uniformity_report",
    "HALF_PERIODS",
    "SYSCLK_HZ",
    "Scheduler",
    "TickEvent",
    "frequency_of",
    "ReplayConfig",
    "RunLog",
    "load_trace",
    "parse_trace",
    "replay",
    "UartChannel",
    "decode_stream",
    "encode_frame",
    "payload_pack",
    "__version__",
]

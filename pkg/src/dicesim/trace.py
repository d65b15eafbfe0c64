"""Stimulus traces and deterministic replay.

Trace format: one event per line, ``<t_us> <SIGNAL> <value>``, with ``#``
comments and blank lines ignored. Signals are TILT, BTNU, BTND, RESET
(binary levels) and ADC (a one-shot 16-bit sample). Timestamps must be
non-decreasing; simultaneous events apply in file order.

Replay semantics: switch levels hold between events and are sampled at tick
boundaries, so pulses that fit between two polls of the same clock are
invisible. Each HZ10 tick consumes the most recent ADC event since the
previous tick, or draws from the synthetic LCG source when none arrived.
RESET 1 asserts the asynchronous reset (clock dividers clear and hold, the
device registers return to reset values); RESET 0 releases it and counting
restarts from zero. Replay is a pure function of the trace and the config:
two runs produce byte-identical logs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from io import StringIO

import csv

from .device import (
    Device,
    DeviceConfig,
    DEFAULT_ADC_SEED,
    SyntheticAdc,
    held_value,
    live_digits,
    set_digits,
)
from .display import DisplayMux, bcd_select, render_word
from .prng import MODES, STATELESS
from .timing import HZ10, HZ1000, HZ500, RISING, S5, Scheduler
from .uart import UartChannel, payload_pack

SIGNALS = ("TILT", "BTNU", "BTND", "RESET", "ADC")
LEVEL_SIGNALS = ("TILT", "BTNU", "BTND")

CYCLES_PER_US = 12
US_PER_SECOND = 1_000_000


class TraceParseError(ValueError):
    """Malformed trace text; the message names the line and field."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class TraceEvent:
    t_us: int
    signal: str
    value: int


def parse_trace(text: str) -> list[TraceEvent]:
    """Parse trace text into an event list, enforcing order and ranges."""
    events: list[TraceEvent] = []
    last_t = -1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 3:
            raise TraceParseError(line_no, f"expected 3 fields (t_us SIGNAL value), got {len(fields)}")
        t_text, signal, v_text = fields
        try:
            t_us = int(t_text)
        except ValueError:
            raise TraceParseError(line_no, f"bad timestamp {t_text!r}") from None
        if t_us < 0:
            raise TraceParseError(line_no, f"negative timestamp {t_us}")
        if t_us < last_t:
            raise TraceParseError(line_no, f"timestamp {t_us} goes backwards (previous {last_t})")
        if signal not in SIGNALS:
            raise TraceParseError(line_no, f"unknown signal {signal!r} (expected one of {', '.join(SIGNALS)})")
        try:
            value = int(v_text)
        except ValueError:
            raise TraceParseError(line_no, f"bad value {v_text!r}") from None
        if signal == "ADC":
            if not 0 <= value <= 0xFFFF:
                raise TraceParseError(line_no, f"bad ADC value {value} (must be 0..65535)")
        elif value not in (0, 1):
            raise TraceParseError(line_no, f"bad {signal} value {value} (must be 0 or 1)")
        events.append(TraceEvent(t_us, signal, value))
        last_t = t_us
    return events


def load_trace(path) -> list[TraceEvent]:
    """Read and parse a trace file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_trace(fh.read())


# ======================================================================
#  replay
# ======================================================================

@dataclass
class ReplayConfig:
    prng_mode: str = STATELESS
    intuitive_tilt: bool = False
    duration_us: int | None = None  # default: last event time + one second
    adc_seed: int = DEFAULT_ADC_SEED


@dataclass
class RunLog:
    """Everything a replay records. Lists hold (t_us, ...) tuples."""

    settled_rolls: list = field(default_factory=list)   # (t_us, diceval, out)
    uart_bytes: list = field(default_factory=list)      # (t_us, byte)
    display_words: list = field(default_factory=list)   # (t_us, word)
    onpin_edges: list = field(default_factory=list)     # (t_us, level)
    uart_waveform: list = field(default_factory=list)   # (t_us, tx level)
    final_state: dict = field(default_factory=dict)


def replay(events: list[TraceEvent], config: ReplayConfig | None = None, on_tick=None) -> RunLog:
    """Replay a trace through the full device and collect the run log.

    A settled roll is recorded at each false-to-true upright transition,
    capturing the held digits and the diceval that computed them. on_tick,
    when given, is called as on_tick(t_us, tick_event, device) after every
    rising-edge dispatch (a probe hook for tests; it must not mutate).
    """
    cfg = config or ReplayConfig()
    if cfg.prng_mode not in MODES:
        raise ValueError(f"unknown PRNG mode: {cfg.prng_mode!r}")
    last_event_t = events[-1].t_us if events else 0
    for prev, nxt in zip(events, events[1:]):
        if nxt.t_us < prev.t_us:
            raise ValueError("trace events are not time-ordered")
    duration_us = cfg.duration_us if cfg.duration_us is not None else last_event_t + US_PER_SECOND
    if duration_us < last_event_t:
        raise ValueError(f"duration {duration_us} us ends before the last trace event at {last_event_t} us")

    sched = Scheduler()
    dev = Device(DeviceConfig(cfg.prng_mode, cfg.intuitive_tilt))
    uart = UartChannel()
    mux = DisplayMux()
    adc_src = SyntheticAdc(cfg.adc_seed)
    log = RunLog()

    levels = {name: 0 for name in LEVEL_SIGNALS}
    state = {
        "reset": 0,
        "adc_pending": None,
        "origin": 0,     # absolute cycle where the scheduler's index 0 sits
        "now": 0,        # absolute cycles processed so far
        "word": None,    # last display word
        "tx": 1,         # last uart tx level
    }

    def display_word() -> int:
        return bcd_select(dev.selection.setmode, set_digits(dev.selection), live_digits(dev.roll))

    def note_display(t_us: int) -> None:
        word = display_word()
        if word != state["word"]:
            state["word"] = word
            log.display_words.append((t_us, word))

    def dispatch(tick, abs_cycle: int) -> None:
        t_us = abs_cycle // CYCLES_PER_US
        if tick.edge != RISING:
            return
        if tick.domain == HZ10:
            sample = state["adc_pending"]
            if sample is None:
                sample = adc_src.next()
            state["adc_pending"] = None
            was_upright = dev.tilt.upright
            dev.hz10_tick(levels["TILT"], levels["BTNU"], levels["BTND"], sample, sysclk_index=abs_cycle)
            if dev.tilt.upright and not was_upright:
                log.settled_rolls.append((t_us, dev.roll.held_diceval, held_value(dev.roll)))
            note_display(t_us)
        elif tick.domain == S5:
            before = dev.power.onsig
            dev.s5_tick(rstn=True)
            if dev.power.onsig != before:
                log.onpin_edges.append((t_us, dev.power.onsig))
        elif tick.domain == HZ1000:
            tx_state = uart.edge(payload_pack(dev.roll.huns, dev.roll.tens))
            if tx_state.ap_valid:
                log.uart_bytes.append((t_us, tx_state.shift_data))
            if tx_state.tx_level != state["tx"]:
                state["tx"] = tx_state.tx_level
                log.uart_waveform.append((t_us, tx_state.tx_level))
        elif tick.domain == HZ500:
            word = state["word"] if state["word"] is not None else display_word()
            mux.step(word, dev.tilt.upright)
        if on_tick is not None:
            on_tick(t_us, tick, dev)

    def run_to(target_cycle: int) -> None:
        if target_cycle < state["now"]:
            raise ValueError("replay cannot move backwards in time")
        if state["reset"]:
            state["now"] = target_cycle
            return
        span = target_cycle - state["now"]
        if span:
            for tick in sched.advance(span):
                dispatch(tick, state["origin"] + tick.sysclk_index)
            state["now"] = target_cycle

    def apply_event(ev: TraceEvent) -> None:
        if ev.signal == "ADC":
            state["adc_pending"] = ev.value
        elif ev.signal == "RESET":
            if ev.value == 1 and not state["reset"]:
                state["reset"] = 1
                sched.reset()
                dev.reset()
                uart.reset()
                mux.reset()
                state["adc_pending"] = None
                note_display(ev.t_us)
                if state["tx"] != 1:
                    state["tx"] = 1
                    log.uart_waveform.append((ev.t_us, 1))
            elif ev.value == 0 and state["reset"]:
                state["reset"] = 0
                state["origin"] = ev.t_us * CYCLES_PER_US
        else:
            levels[ev.signal] = ev.value

    note_display(0)
    log.uart_waveform.append((0, 1))
    for ev in events:
        run_to(ev.t_us * CYCLES_PER_US)
        apply_event(ev)
    run_to(duration_us * CYCLES_PER_US)

    log.final_state = {
        "t_us": duration_us,
        "seed": dev.seed,
        "prng": {"mode": dev.prng.mode, "rand_reg": dev.prng.rand_reg},
        "rand": dev.rand,
        "tilt": {"window": dev.tilt.window, "sumtilt": dev.tilt.sumtilt, "upright": dev.tilt.upright},
        "selection": {
            "setmode": dev.selection.setmode,
            "dselect": dev.selection.dselect,
            "diceval": dev.selection.diceval,
            "set_digits": list(set_digits(dev.selection)),
            "keepon": dev.selection.keepon,
        },
        "roll": {
            "out": dev.roll.out,
            "held_diceval": dev.roll.held_diceval,
            "live": list(live_digits(dev.roll)),
            "held": [dev.roll.thou_held, dev.roll.huns_held, dev.roll.tens_held, dev.roll.ones_held],
        },
        "power": {"onsig": dev.power.onsig, "clk5": dev.power.clk5},
        "uart": {"fsm": uart.tx.fsm, "ready": uart.ready, "tx_level": uart.tx.tx_level},
        "display": {
            "word": state["word"],
            "render": render_word(state["word"]) if state["word"] is not None else "",
            "digit_codes": list(mux.digit_codes),
        },
        "levels": dict(levels),
        "reset": state["reset"],
    }
    return log


# ======================================================================
#  log serialization
# ======================================================================

_KIND_RANK = {"ROLL": 0, "UART": 1, "DISPLAY": 2, "ONPIN": 3}
LOG_COLUMNS = ("record", "t_us", "dice_sides", "roll", "byte", "word", "level")


def _merged_records(log: RunLog) -> list[dict]:
    rows: list[dict] = []
    for t_us, diceval, out in log.settled_rolls:
        rows.append({"record": "ROLL", "t_us": t_us, "dice_sides": diceval, "roll": out})
    for t_us, byte in log.uart_bytes:
        rows.append({"record": "UART", "t_us": t_us, "byte": f"{byte:02x}"})
    for t_us, word in log.display_words:
        rows.append({"record": "DISPLAY", "t_us": t_us, "word": f"{word:04x}"})
    for t_us, level in log.onpin_edges:
        rows.append({"record": "ONPIN", "t_us": t_us, "level": level})
    rows.sort(key=lambda r: (r["t_us"], _KIND_RANK[r["record"]]))
    return rows


def emit_log(log: RunLog, fmt: str = "csv") -> str:
    """Serialize the merged record stream; csv and jsonl carry identical
    field values in identical order."""
    rows = _merged_records(log)
    if fmt == "csv":
        buf = StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(LOG_COLUMNS)
        for row in rows:
            writer.writerow([row.get(col, "") for col in LOG_COLUMNS])
        return buf.getvalue()
    if fmt == "jsonl":
        lines = [json.dumps(row, separators=(",", ":")) for row in rows]
        return "\n".join(lines) + ("\n" if lines else "")
    raise ValueError(f"unknown log format: {fmt!r} (expected csv or jsonl)")


def emit_uart_csv(log: RunLog) -> str:
    """UART byte log as t_us,byte_hex lines."""
    lines = ["t_us,byte_hex"]
    for t_us, byte in log.uart_bytes:
        lines.append(f"{t_us},{byte:02x}")
    return "\n".join(lines) + "\n"


def emit_uart_bits_csv(log: RunLog) -> str:
    """UART line-level waveform as t_us,level lines."""
    lines = ["t_us,level"]
    for t_us, level in log.uart_waveform:
        lines.append(f"{t_us},{level}")
    return "\n".join(lines) + "\n"


def emit_state_json(log: RunLog) -> str:
    """Final device snapshot as stable-keyed JSON."""
    return json.dumps(log.final_state, indent=2, sort_keys=True) + "\n"

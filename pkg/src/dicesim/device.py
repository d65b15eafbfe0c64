"""Control logic of the dice unit: tilt debounce, selection FSM, roll pipeline,
keep-awake toggler, and the composite Device register file.

Per-tick semantics at an HZ10 rising edge: the seed register shifts in the
ADC sample, the PRNG output for the tick is computed, the tilt window
updates, the selection FSM acts on the fresh upright level, and the roll
pipeline computes or holds the display digits. The debounce keeps the
as-built one-tick lag: upright is judged from the window as it was before
the new sample shifted in.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import kernels
from .prng import (
    FEEDBACK,
    MASK32,
    MODES,
    STATELESS,
    PrngState,
    seed_shift,
    xorshift_step,
)
from .timing import HZ10, RISING, S5, TickEvent

# dselect -> (diceval, thou, huns, tens, ones display codes)
DICE_TABLE = {
    0: (2, 0xD, 0x2, 0xF, 0xF),
    1: (4, 0xD, 0x4, 0xF, 0xF),
    2: (6, 0xD, 0x6, 0xF, 0xF),
    3: (8, 0xD, 0x8, 0xF, 0xF),
    4: (10, 0xD, 0x1, 0x0, 0xF),
    5: (12, 0xD, 0x1, 0x2, 0xF),
    6: (20, 0xD, 0x2, 0x0, 0xF),
    7: (100, 0xD, 0x1, 0x0, 0x0),
}

SUPPORTED_DICE = (2, 4, 6, 8, 10, 12, 20, 100)

WINDOW_BITS = 10
WINDOW_MASK = (1 << WINDOW_BITS) - 1
UPRIGHT_THRESHOLD = 7

DEFAULT_ADC_SEED = 12345


def dice_table(dselect: int) -> tuple[int, int, int, int, int]:
    """(diceval, thou, huns, tens, ones) codes for a selector value."""
    if dselect not in DICE_TABLE:
        raise ValueError(f"dselect out of range 0..7: {dselect}")
    return DICE_TABLE[dselect]


# ======================================================================
#  tilt debounce
# ======================================================================

@dataclass
class TiltState:
    """Ten-sample shift window plus the derived upright level."""

    window: int = 0
    sumtilt: int = 0
    upright: bool = False


def tilt_update(state: TiltState, sample: int, intuitive: bool = False) -> TiltState:
    """Shift one tilt sample into the window and re-judge upright.

    Faithful mode counts the window as it was before this sample shifted in
    (the as-built blocking read), so a change of posture needs one extra tick
    to register. The intuitive flag counts the post-shift window instead.
    """
    window = ((state.window << 1) | (1 if sample else 0)) & WINDOW_MASK
    basis = window if intuitive else state.window
    total = basis.bit_count()
    return TiltState(window, total, total >= UPRIGHT_THRESHOLD)


# ======================================================================
#  dice selection FSM
# ======================================================================

@dataclass
class SelectionState:
    """Selector, its dice table row, the display mode, and the keep-awake arm."""

    setmode: bool = False
    dselect: int = 0
    diceval: int = 2
    thou_set: int = 0
    huns_set: int = 0
    tens_set: int = 0
    ones_set: int = 0
    keepon: bool = True
    btn_up_latch: int = 0
    btn_down_latch: int = 0


def selection_update(state: SelectionState, upright: bool, btn_up: int, btn_down: int) -> SelectionState:
    """One HZ10 tick of the selection FSM.

    The button latches re-fire every tick (no edge detector), so holding a
    button steps the selector once per tick. Both buttons together disarm
    keep-awake and change nothing else. While not upright only setmode drops;
    the selector and dice table row hold.
    """
    s = replace(state, btn_up_latch=1 if btn_up else 0, btn_down_latch=1 if btn_down else 0)
    if upright:
        if s.btn_up_latch and s.btn_down_latch:
            s.keepon = False
        elif s.btn_up_latch:
            s.setmode = True
            s.dselect = 0 if s.dselect == 7 else s.dselect + 1
        elif s.btn_down_latch:
            s.setmode = True
            s.dselect = 7 if s.dselect == 0 else s.dselect - 1
        (s.diceval, s.thou_set, s.huns_set, s.tens_set, s.ones_set) = dice_table(s.dselect)
    else:
        s.setmode = False
    return s


def set_digits(state: SelectionState) -> tuple[int, int, int, int]:
    return (state.thou_set, state.huns_set, state.tens_set, state.ones_set)


# ======================================================================
#  roll pipeline
# ======================================================================

@dataclass
class RollState:
    """Live display digits plus the held copy that freezes while upright."""

    out: int = 0
    held_diceval: int = 2
    thou: int = 0
    huns: int = 0
    tens: int = 0
    ones: int = 0
    thou_held: int = 0
    huns_held: int = 0
    tens_held: int = 0
    ones_held: int = 0


def roll_update(state: RollState, rand_word: int, diceval: int, upright: bool) -> RollState:
    """One HZ10 tick of the roll pipeline.

    Not upright: compute out = (rand mod diceval) + 1, split it into display
    digits shifted one place left (units land in the tens position, ones gets
    the blank code), and refresh both the live and the held digits. Upright:
    the live digits copy the held ones, freezing the display.
    """
    if upright:
        return replace(
            state,
            thou=state.thou_held,
            huns=state.huns_held,
            tens=state.tens_held,
            ones=state.ones_held,
        )
    if diceval <= 0:
        raise ValueError(f"diceval must be positive: {diceval}")
    out = ((rand_word & MASK32) % diceval) + 1
    tens = out % 10
    huns = (out // 10) % 10
    thou = out // 100
    return RollState(
        out=out,
        held_diceval=diceval,
        thou=thou,
        huns=huns,
        tens=tens,
        ones=0xF,
        thou_held=thou,
        huns_held=huns,
        tens_held=tens,
        ones_held=0xF,
    )


def live_digits(state: RollState) -> tuple[int, int, int, int]:
    return (state.thou, state.huns, state.tens, state.ones)


def held_value(state: RollState) -> int:
    """Roll value encoded in the held digits."""
    return state.thou_held * 100 + state.huns_held * 10 + state.tens_held


# ======================================================================
#  keep-awake
# ======================================================================

@dataclass
class PowerState:
    """Keep-awake outputs: onsig drives onpin, clk5 drives led0."""

    onsig: int = 0
    clk5: int = 0


def keepawake_update(state: PowerState, keepon: bool, rstn: bool = True) -> PowerState:
    """One S5 rising edge of the keep-awake block.

    The block has no asynchronous reset; it samples rstn only here. Armed, it
    toggles both outputs each edge; disarmed it drives both low.
    """
    if not rstn:
        return PowerState(1, 0)
    if keepon:
        return PowerState(state.onsig ^ 1, state.clk5 ^ 1)
    return PowerState(0, 0)


# ======================================================================
#  synthetic ADC source
# ======================================================================

class SyntheticAdc:
    """Deterministic stand-in for ADC noise when a trace supplies no samples.

    32-bit LCG: state' = (1664525 * state + 1013904223) mod 2**32; each
    sample is the top 16 bits of the state. Default seed is 12345.
    """

    def __init__(self, seed: int = DEFAULT_ADC_SEED) -> None:
        self.state = seed & MASK32

    def next(self) -> int:
        self.state = (kernels.LCG_MULT * self.state + kernels.LCG_INC) & MASK32
        return (self.state >> 16) & 0xFFFF


# ======================================================================
#  composite device
# ======================================================================

@dataclass
class DeviceConfig:
    prng_mode: str = STATELESS
    intuitive_tilt: bool = False


@dataclass
class DeviceInputs:
    tilt: int = 0
    btn_up: int = 0
    btn_down: int = 0
    adc: int = 0


@dataclass(frozen=True)
class DeviceOutputs:
    onpin: int
    led1: int
    led0: int
    dp: int


class Device:
    """Register file of the dice unit, stepped by clock-domain tick events.

    The keep-awake block survives reset (no reset wiring there); everything
    else returns to its documented reset value. In FEEDBACK mode the rand
    register advances once per sysclk rising edge between ticks, latching
    from the first nonzero seed value it observes.
    """

    def __init__(self, config: DeviceConfig | None = None) -> None:
        self.config = config or DeviceConfig()
        if self.config.prng_mode not in MODES:
            raise ValueError(f"unknown PRNG mode: {self.config.prng_mode!r}")
        self.power = PowerState()
        self.roll = RollState()
        self._clear_registers()

    def _clear_registers(self) -> None:
        self.seed = 0
        self.prng = PrngState(self.config.prng_mode, 0)
        self.tilt = TiltState()
        self.selection = SelectionState()
        self.rand = 0
        self._rand_cycle = 0

    def reset(self) -> None:
        """Asynchronous reset: clears everything except keep-awake and the
        held roll digits (neither has a reset branch)."""
        held = self.roll
        self._clear_registers()
        self.roll = replace(held, thou=0, huns=0, tens=0, ones=0)

    def _rand_for_tick(self, sysclk_index: int) -> int:
        if self.config.prng_mode == STATELESS:
            return xorshift_step(self.seed)
        if self.prng.rand_reg == 0:
            if self.seed == 0:
                self._rand_cycle = sysclk_index
                return 0
            # first nonzero seed observed: latch and take one step
            self.prng = PrngState(FEEDBACK, xorshift_step(self.seed))
            self._rand_cycle = sysclk_index
            return self.prng.rand_reg
        steps = sysclk_index - self._rand_cycle
        if steps < 0:
            raise ValueError(f"sysclk index moved backwards: {sysclk_index} < {self._rand_cycle}")
        self.prng = PrngState(FEEDBACK, kernels.advance_feedback(self.prng.rand_reg, steps))
        self._rand_cycle = sysclk_index
        return self.prng.rand_reg

    def hz10_tick(self, tilt: int, btn_up: int, btn_down: int, adc: int, sysclk_index: int = 0) -> None:
        """One HZ10 rising edge: seed shift, PRNG, debounce, selection, roll."""
        self.seed = seed_shift(self.seed, adc)
        self.rand = self._rand_for_tick(sysclk_index)
        self.tilt = tilt_update(self.tilt, tilt, self.config.intuitive_tilt)
        self.selection = selection_update(self.selection, self.tilt.upright, btn_up, btn_down)
        self.roll = roll_update(self.roll, self.rand, self.selection.diceval, self.tilt.upright)

    def s5_tick(self, rstn: bool = True) -> None:
        """One S5 rising edge: keep-awake toggler."""
        self.power = keepawake_update(self.power, self.selection.keepon, rstn)

    def step(self, tick: TickEvent, inputs: DeviceInputs) -> None:
        """Dispatch one scheduler event. Falling edges and the domains this
        block does not consume are no-ops; unknown domains are rejected."""
        if tick.domain not in ("HZ1000", "HZ1500", "HZ500", HZ10, S5):
            raise ValueError(f"unknown clock domain: {tick.domain!r}")
        if tick.edge != RISING:
            return
        if tick.domain == HZ10:
            self.hz10_tick(inputs.tilt, inputs.btn_up, inputs.btn_down, inputs.adc, tick.sysclk_index)
        elif tick.domain == S5:
            self.s5_tick(rstn=True)

    def outputs(self, tilt_level: int = 0) -> DeviceOutputs:
        """Pin view: onpin = onsig, led1 mirrors the raw tilt input, led0 =
        clk5, dp = upright (active-low; the colon is lit when not upright)."""
        return DeviceOutputs(
            onpin=self.power.onsig,
            led1=1 if tilt_level else 0,
            led0=self.power.clk5,
            dp=1 if self.tilt.upright else 0,
        )

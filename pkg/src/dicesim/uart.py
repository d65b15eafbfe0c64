"""UART transmit path: 8N1 at 1000 baud, LSB first, plus a stream decoder.

The transmitter is clocked by HZ1000, so one FSM step is one bit period. A
frame is exactly ten periods: start (0), eight data bits LSB first, stop (1).
ap_valid is asserted for the single stop period. The ready gate toggles every
HZ1000 edge, so at most one frame can start per 2 ms; a running frame ignores
ready until it returns to IDLE.

The payload is the two live rand digits packed as huns*16 + tens, which is
why a transmitted roll of 16 reads as hex 0x16 on the wire.
"""

from __future__ import annotations

from dataclasses import dataclass

IDLE = "IDLE"
START = "START"
TRANSFER = "TRANSFER"
STOP = "STOP"

FRAME_BITS = 10


def payload_pack(huns: int, tens: int) -> int:
    """Pack the two display digits into the wire byte."""
    return ((huns & 0xF) << 4) | (tens & 0xF)


@dataclass(frozen=True)
class UartTxState:
    """Transmitter state after an HZ1000 edge; tx_level is the bit driven for
    the following bit period."""

    fsm: str = IDLE
    bit_index: int = 0
    shift_data: int = 0
    ap_valid: bool = False
    tx_level: int = 1


def tx_step(state: UartTxState, ap_ready: bool, data: int) -> UartTxState:
    """Advance the transmitter by one HZ1000 rising edge.

    data is sampled only on the IDLE exit edge; changing it mid-frame has no
    effect on the frame already in flight.
    """
    if state.fsm == IDLE:
        if ap_ready:
            return UartTxState(START, 0, data & 0xFF, False, 0)
        return UartTxState(IDLE, 0, state.shift_data, False, 1)
    if state.fsm == START:
        return UartTxState(TRANSFER, 1, state.shift_data, False, state.shift_data & 1)
    if state.fsm == TRANSFER:
        bit = (state.shift_data >> state.bit_index) & 1
        if state.bit_index == 7:
            return UartTxState(STOP, 0, state.shift_data, False, bit)
        return UartTxState(TRANSFER, state.bit_index + 1, state.shift_data, False, bit)
    if state.fsm == STOP:
        return UartTxState(IDLE, 0, state.shift_data, True, 1)
    raise ValueError(f"unknown transmitter state: {state.fsm!r}")


def uart_ready_gate(ready: int, rstn: bool = True) -> int:
    """Ready toggler: flips every HZ1000 edge, clears while reset is low."""
    if not rstn:
        return 0
    return ready ^ 1


def encode_frame(byte: int) -> list[int]:
    """Ten-bit frame for one byte: start, data LSB first, stop."""
    if not 0 <= byte <= 0xFF:
        raise ValueError(f"byte out of range 0..255: {byte}")
    return [0] + [(byte >> k) & 1 for k in range(8)] + [1]


@dataclass(frozen=True)
class DecodedFrame:
    offset: int
    byte: int


@dataclass(frozen=True)
class FramingError:
    offset: int
    kind: str
    message: str


def decode_stream(bits) -> tuple[list[DecodedFrame], list[FramingError]]:
    """Decode an idle-high bit stream sampled at the bit rate.

    High bits are idle. A low bit opens a frame: eight data bits LSB first,
    then a stop bit that must be high. A low stop bit is reported with its
    offsets and scanning resumes at the next high bit; a frame running past
    the end of the stream is reported as truncated. An all-ones stream yields
    no frames and no errors.
    """
    seq = []
    for b in bits:
        if isinstance(b, str):
            if b not in "01":
                raise ValueError(f"bit stream may only contain 0 and 1: {b!r}")
            seq.append(1 if b == "1" else 0)
        else:
            seq.append(1 if b else 0)
    frames: list[DecodedFrame] = []
    errors: list[FramingError] = []
    i = 0
    n = len(seq)
    while i < n:
        if seq[i]:
            i += 1
            continue
        if i + FRAME_BITS > n:
            errors.append(FramingError(i, "truncated",
                                       f"frame starting at bit {i} runs past the end of the stream"))
            break
        byte = 0
        for k in range(8):
            byte |= seq[i + 1 + k] << k
        if seq[i + 9]:
            frames.append(DecodedFrame(i, byte))
            i += FRAME_BITS
        else:
            errors.append(FramingError(i, "bad_stop",
                                       f"frame starting at bit {i}: stop bit low at bit {i + 9}"))
            i += FRAME_BITS
            while i < n and not seq[i]:
                i += 1
    return frames, errors


class UartChannel:
    """Transmit FSM plus the ready toggler, stepped at HZ1000 rising edges."""

    def __init__(self) -> None:
        self.tx = UartTxState()
        self.ready = 0

    def reset(self) -> None:
        self.tx = UartTxState()
        self.ready = 0

    def edge(self, data: int) -> UartTxState:
        """One HZ1000 rising edge; the FSM samples ready before it toggles."""
        self.tx = tx_step(self.tx, bool(self.ready), data)
        self.ready = uart_ready_gate(self.ready)
        return self.tx

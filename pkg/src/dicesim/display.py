"""Seven-segment display pipeline: digit-set selection with leading-zero
blanking, glyph lookup, and the four-digit multiplex scanner.

Digit codes are 4-bit: 0..9 are numerals, 0xD is the lowercase 'd' of the
dice legend, 0xF is blank (codes 0xA, 0xB, 0xC, 0xE also render blank).
Segment words are active-low with bit 0 = segment a through bit 6 = segment
g; anodes are one-cold and the board's anode bus is hooked up reversed, so
logical digit 0 (thousands) drives physical anode 3.
"""

from __future__ import annotations

from dataclasses import dataclass

BLANK = 0xF
DCODE = 0xD

# code -> active-low gfedcba segment word
GLYPHS = {
    0x0: 0x40,
    0x1: 0x79,
    0x2: 0x24,
    0x3: 0x30,
    0x4: 0x19,
    0x5: 0x12,
    0x6: 0x02,
    0x7: 0x78,
    0x8: 0x00,
    0x9: 0x10,
    0xD: 0x21,
    0xF: 0x7F,
}

GLYPH_BLANK = 0x7F


def glyph(code: int) -> int:
    """Active-low segment word for a digit code (unmapped codes render blank)."""
    return GLYPHS.get(code & 0xF, GLYPH_BLANK)


def pack_word(thou: int, huns: int, tens: int, ones: int) -> int:
    """Pack four digit codes into a 16-bit word, thousands in bits 15:12."""
    return ((thou & 0xF) << 12) | ((huns & 0xF) << 8) | ((tens & 0xF) << 4) | (ones & 0xF)


def unpack_word(word: int) -> tuple[int, int, int, int]:
    return ((word >> 12) & 0xF, (word >> 8) & 0xF, (word >> 4) & 0xF, word & 0xF)


def bcd_select(setmode: bool, set_digits: tuple[int, int, int, int],
               rand_digits: tuple[int, int, int, int]) -> int:
    """Choose and blank the display word for the current mode.

    setmode passes the selection codes through untouched. Rand mode blanks
    leading zeros cascading from the thousands digit; the ones digit blanks
    on zero independently of the rest.
    """
    if setmode:
        return pack_word(*set_digits)
    thou, huns, tens, ones = rand_digits
    thou_out = BLANK if thou == 0 else thou
    huns_out = BLANK if (huns == 0 and thou == 0) else huns
    tens_out = BLANK if (tens == 0 and huns == 0 and thou == 0) else tens
    ones_out = BLANK if ones == 0 else ones
    return pack_word(thou_out, huns_out, tens_out, ones_out)


def render_word(word: int) -> str:
    """Four-character text form of a display word ('d' for 0xD, space for blank)."""
    chars = []
    for code in unpack_word(word):
        if code <= 9:
            chars.append(str(code))
        elif code == DCODE:
            chars.append("d")
        else:
            chars.append(" ")
    return "".join(chars)


@dataclass(frozen=True)
class DisplayFrame:
    """One multiplex frame: which digit is driven and with what levels."""

    active_digit: int
    segment_bits: int
    dp_bit: int
    anode_bits: int


class DisplayMux:
    """HZ500 scanner over the four digit positions.

    Each step latches the incoming display word, advances the active
    position, and emits the frame for it. Reset latches 'dddd' (the power-on
    legend) and restarts the scan at position 0.
    """

    def __init__(self) -> None:
        self.reset()

    def reset(self) -> None:
        self.digit_codes = (DCODE, DCODE, DCODE, DCODE)
        self._pos = 0

    def frame(self, pos: int, upright: bool) -> DisplayFrame:
        """Frame for one position from the latched codes (no state change)."""
        if not 0 <= pos <= 3:
            raise ValueError(f"digit position out of range 0..3: {pos}")
        return DisplayFrame(
            active_digit=pos,
            segment_bits=glyph(self.digit_codes[pos]),
            dp_bit=1 if upright else 0,
            anode_bits=0xF ^ (1 << (3 - pos)),
        )

    def step(self, bcd_word: int, upright: bool) -> DisplayFrame:
        """One HZ500 rising edge: latch the word, scan to the next digit."""
        self.digit_codes = unpack_word(bcd_word)
        pos = self._pos
        self._pos = (pos + 1) % 4
        return self.frame(pos, upright)

"""Command line interface.

Subcommands: simulate (replay a trace), rolls (generate face values), stats
(uniformity verdicts and exact bias reports), uart (frame encode/decode).
Every subcommand is deterministic given its flags; default seeds are
documented constants, never wall-clock entropy.

Exit codes: 0 success (and analysis pass), 1 I/O failure, 2 usage or
validation error, 3 analysis failure (uniformity rejected, framing errors).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import kernels, stats
from .device import DEFAULT_ADC_SEED, SUPPORTED_DICE
from .prng import FEEDBACK, MASK32, STATELESS
from .trace import (
    ReplayConfig,
    TraceParseError,
    emit_log,
    emit_state_json,
    emit_uart_bits_csv,
    emit_uart_csv,
    load_trace,
    replay,
)
from .uart import decode_stream, encode_frame

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_ANALYSIS = 3

DEFAULT_ROLL_SEED = 1


def _write_atomic(path: Path, text: str) -> None:
    # temp file in the same directory, then rename over the target
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


# ======================================================================
#  simulate
# ======================================================================

def cmd_simulate(args) -> int:
    try:
        events = load_trace(args.trace)
    except OSError as exc:
        return _fail(f"cannot read trace: {exc}", EXIT_IO)
    except TraceParseError as exc:
        return _fail(f"malformed trace: {exc}", EXIT_USAGE)
    config = ReplayConfig(
        prng_mode=args.prng_mode,
        intuitive_tilt=args.intuitive_tilt,
        duration_us=args.duration_us,
        adc_seed=args.adc_seed,
    )
    try:
        log = replay(events, config)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        log_name = "log.csv" if args.format == "csv" else "log.jsonl"
        _write_atomic(out_dir / log_name, emit_log(log, args.format))
        _write_atomic(out_dir / "uart.csv", emit_uart_csv(log))
        _write_atomic(out_dir / "state.json", emit_state_json(log))
        if args.uart_bits:
            _write_atomic(out_dir / "uart_bits.csv", emit_uart_bits_csv(log))
    except OSError as exc:
        return _fail(f"cannot write outputs: {exc}", EXIT_IO)
    print(
        f"replayed {len(events)} events: {len(log.settled_rolls)} settled rolls, "
        f"{len(log.uart_bytes)} uart bytes, {len(log.display_words)} display words, "
        f"{len(log.onpin_edges)} onpin edges -> {out_dir}"
    )
    return EXIT_OK


# ======================================================================
#  rolls
# ======================================================================

def cmd_rolls(args) -> int:
    if args.sides not in SUPPORTED_DICE:
        supported = ", ".join(str(d) for d in SUPPORTED_DICE)
        return _fail(f"unsupported die d{args.sides} (supported: {supported})", EXIT_USAGE)
    if args.count < 1:
        return _fail(f"count must be positive: {args.count}", EXIT_USAGE)
    seed = args.seed & MASK32
    if args.mode == FEEDBACK and seed == 0:
        return _fail("feedback mode needs a nonzero seed (zero never leaves the zero orbit)", EXIT_USAGE)
    if args.mode == FEEDBACK:
        words = kernels.feedback_sequence(seed, args.count)
    else:
        # as-built pipeline: the seed value seeds the synthetic ADC source
        words = kernels.stateless_sequence(seed, args.count)
    faces = (words % np.uint32(args.sides)) + np.uint32(1)
    text = "roll\n" + "\n".join(str(int(v)) for v in faces) + "\n"
    if args.out:
        try:
            _write_atomic(Path(args.out), text)
        except OSError as exc:
            return _fail(f"cannot write rolls: {exc}", EXIT_IO)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ======================================================================
#  stats
# ======================================================================

def _read_rolls(path: Path) -> list[int]:
    rolls: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line_no == 1 and not line.lstrip("-").isdigit():
                continue  # header
            try:
                rolls.append(int(line))
            except ValueError:
                raise ValueError(f"line {line_no}: bad roll value {line!r}") from None
    return rolls


def cmd_stats(args) -> int:
    if args.bias is not None:
        if args.bias < 1:
            return _fail(f"die must have at least 1 side: {args.bias}", EXIT_USAGE)
        if not 1 <= args.bits <= 64:
            return _fail(f"bits out of range 1..64: {args.bits}", EXIT_USAGE)
        report = stats.modulo_bias(args.bias, args.bits)
        print(f"exact preimage counts of (word mod {report.dice_sides}) + 1 "
              f"over the 2^{report.domain_bits} domain")
        print(f"quotient {report.quotient}, remainder {report.remainder}, "
              f"worst-case ratio {report.ratio:.12f}")
        for face, count in enumerate(report.counts, start=1):
            print(f"face {face},{count}")
        return EXIT_OK
    if not args.rolls or args.sides is None:
        return _fail("stats needs either --bias D or both --rolls FILE and --sides D", EXIT_USAGE)
    try:
        rolls = _read_rolls(Path(args.rolls))
    except OSError as exc:
        return _fail(f"cannot read rolls: {exc}", EXIT_IO)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        hist = stats.tally(rolls, args.sides)
        report = stats.uniformity_report(hist, float(args.alpha))
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    if args.out:
        try:
            _write_atomic(Path(args.out), stats.histogram_csv(hist))
        except OSError as exc:
            return _fail(f"cannot write histogram: {exc}", EXIT_IO)
    sys.stdout.write(stats.ascii_chart(hist))
    verdict = "PASS" if report.passed else "FAIL"
    print(f"chi-square {report.statistic:.4f}, df {report.df}, "
          f"critical {report.critical} at alpha {report.alpha}: {verdict}")
    return EXIT_OK if report.passed else EXIT_ANALYSIS


# ======================================================================
#  uart
# ======================================================================

def _parse_hex_bytes(tokens: list[str]) -> list[int]:
    values: list[int] = []
    for token in tokens:
        text = token.lower().removeprefix("0x")
        if not text or any(c not in "0123456789abcdef" for c in text):
            raise ValueError(f"bad hex byte token {token!r}")
        if len(text) <= 2:
            values.append(int(text, 16))
        elif len(text) % 2 == 0:
            values.extend(int(text[i:i + 2], 16) for i in range(0, len(text), 2))
        else:
            raise ValueError(f"odd-length hex string {token!r}")
    return values


def cmd_uart(args) -> int:
    if args.action == "encode":
        try:
            values = _parse_hex_bytes(args.data)
        except ValueError as exc:
            return _fail(str(exc), EXIT_USAGE)
        if not values:
            return _fail("nothing to encode", EXIT_USAGE)
        bits = []
        for value in values:
            bits.extend(encode_frame(value))
        print("".join(str(b) for b in bits))
        return EXIT_OK
    # decode
    stream = "".join(args.data)
    try:
        frames, errors = decode_stream(stream)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    if frames:
        print(" ".join(f"{f.byte:02x}" for f in frames))
    for err in errors:
        print(f"framing error: {err.message}", file=sys.stderr)
    return EXIT_ANALYSIS if errors else EXIT_OK


# ======================================================================
#  parser and entry point
# ======================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dicesim",
        description="Bit-faithful simulator and statistics toolkit for the FPGA dice unit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="replay a stimulus trace through the full device")
    p_sim.add_argument("--trace", required=True, help="trace file (t_us SIGNAL value lines)")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--duration-us", type=int, default=None,
                       help="simulated length in us (default: last event + 1s)")
    p_sim.add_argument("--prng-mode", choices=(STATELESS, FEEDBACK), default=STATELESS,
                       help="stateless is the as-built wiring (default)")
    p_sim.add_argument("--intuitive-tilt", action="store_true",
                       help="count the debounce window after the new sample (not as built)")
    p_sim.add_argument("--adc-seed", type=int, default=DEFAULT_ADC_SEED,
                       help="seed of the synthetic ADC source (default 12345)")
    p_sim.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p_sim.add_argument("--uart-bits", action="store_true", help="also write the tx waveform")
    p_sim.set_defaults(func=cmd_simulate)

    p_rolls = sub.add_parser("rolls", help="generate die rolls")
    p_rolls.add_argument("--sides", type=int, required=True,
                         help=f"die to roll, one of {', '.join(str(d) for d in SUPPORTED_DICE)}")
    p_rolls.add_argument("--count", type=int, required=True, help="number of rolls")
    p_rolls.add_argument("--mode", choices=(FEEDBACK, STATELESS), default=FEEDBACK,
                         help="feedback: free-running generator from --seed (default); "
                              "stateless: as-built pipeline fed by the synthetic ADC source, "
                              "--seed seeds that source")
    p_rolls.add_argument("--seed", type=int, default=DEFAULT_ROLL_SEED,
                         help="generator seed (default 1; feedback mode rejects 0)")
    p_rolls.add_argument("--out", default=None, help="output CSV (default stdout)")
    p_rolls.set_defaults(func=cmd_rolls)

    p_stats = sub.add_parser("stats", help="uniformity verdicts and exact bias reports")
    p_stats.add_argument("--rolls", default=None, help="CSV of face values (one per line)")
    p_stats.add_argument("--sides", type=int, default=None, help="die the rolls came from")
    p_stats.add_argument("--alpha", choices=("0.05", "0.01", "0.001"), default="0.05")
    p_stats.add_argument("--out", default=None, help="write the histogram CSV here")
    p_stats.add_argument("--bias", type=int, default=None,
                         help="print the exact modulo-bias report for this die instead")
    p_stats.add_argument("--bits", type=int, default=32,
                         help="input domain width for --bias (default 32)")
    p_stats.set_defaults(func=cmd_stats)

    p_uart = sub.add_parser("uart", help="encode bytes to frames or decode a bit stream")
    p_uart.add_argument("action", choices=("encode", "decode"))
    p_uart.add_argument("data", nargs="+",
                        help="encode: hex bytes; decode: a 0/1 bit stream")
    p_uart.set_defaults(func=cmd_uart)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

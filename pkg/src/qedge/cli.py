"""Command-line front end: edge detection runs and circuit dumps.

Exit codes: 0 success, 2 reference mismatch, 64 bad flags, 65 qubit budget
exceeded, 66 unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .arithmetic import (
    AdderLayout,
    build_abs_subtractor,
    build_ladder_shift,
    build_qrca,
    build_s2c,
)
from .codec import load_pgm, reduce_bit_depth, write_pgm
from .pipeline import ConsistencyError, PipelineConfig, run
from .reference import reference_edge_map
from .registers import RegisterRef
from .sim import CapacityError, Circuit, gate_stats, mc_decomposition_depth
from .thresholding import Threshold, build_ftpo, build_qpa

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_USAGE = 64
EXIT_CAPACITY = 65
EXIT_NOINPUT = 66

CIRCUIT_NAMES = ("qrca", "s2c", "abs-sub", "ladder", "ftpo", "qpa")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunReport:
    n: int
    q: int
    mode: str
    threshold: int
    threshold_bits: str
    qubit_count: int
    gate_total: int
    multi_controlled_count: int
    max_control_arity: int
    depth: int
    edge_pixel_count: int
    wall_time_ms: float
    oracle_match: bool | None = None

    def to_text(self) -> str:
        pairs = [
            ("n", self.n),
            ("q", self.q),
            ("mode", self.mode),
            ("threshold", self.threshold),
            ("threshold_bits", self.threshold_bits),
            ("qubit_count", self.qubit_count),
            ("gate_total", self.gate_total),
            ("multi_controlled_count", self.multi_controlled_count),
            ("max_control_arity", self.max_control_arity),
            ("depth", self.depth),
            ("edge_pixel_count", self.edge_pixel_count),
            ("wall_time_ms", f"{self.wall_time_ms:.3f}"),
        ]
        if self.oracle_match is not None:
            pairs.append(("oracle_match", "true" if self.oracle_match else "false"))
        lines = [f"{key}={value}" for key, value in pairs]
        payload = {key: value for key, value in pairs}
        lines.append("json=" + json.dumps(payload, sort_keys=True))
        return "\n".join(lines) + "\n"


def build_parser() -> _Parser:
    parser = _Parser(prog="qedge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    detect = sub.add_parser("detect", help="run edge detection on a PGM image")
    detect.add_argument("--input", required=True, help="input PGM (P2 or P5)")
    detect.add_argument("--threshold", required=True,
                        help="decimal integer, or binary string of width q (MSB first)")
    detect.add_argument("--output", required=True, help="edge map PGM path")
    detect.add_argument("--mode", choices=["per-direction", "composite"],
                        default="per-direction")
    detect.add_argument("--reset", choices=["unitary", "hybrid"],
                        default="unitary")
    detect.add_argument("--bit-depth", type=int, default=None,
                        help="downsample intensities to this many bits")
    detect.add_argument("--reference", action="store_true",
                        help="also run the classical reference and compare")
    detect.add_argument("--stats", default=None,
                        help="write the run report here instead of stdout")
    detect.add_argument("--tol", type=float, default=1e-9,
                        help="amplitude readout tolerance")

    circuit = sub.add_parser("circuit", help="print a builder's gate listing")
    circuit.add_argument("--circuit", required=True, choices=CIRCUIT_NAMES)
    circuit.add_argument("--width", type=int, default=None,
                         help="register width in qubits")
    circuit.add_argument("--threshold", default=None,
                         help="threshold for ftpo/qpa (binary string or decimal)")
    circuit.add_argument("--direction", choices=["up", "down"], default="up")
    return parser


def _format_gate(index: int, gate) -> str:
    ctrl = ""
    if gate.controls:
        ctrl = " ctrl(" + ",".join(
            f"{'+' if pol else '-'}q{q}" for q, pol in gate.controls) + ")"
    return f"{index:4d}  {gate.kind.upper()} q{gate.target}{ctrl}"


def _print_circuit(circ: Circuit) -> None:
    print(f"circuit {circ.name or '<unnamed>'} on {circ.num_qubits} qubits")
    for i, gate in enumerate(circ.gates):
        print(_format_gate(i, gate))
    stats = gate_stats(circ)
    for key, value in stats.items():
        print(f"{key}={value}")
    print(f"decomposition_depth={mc_decomposition_depth(circ)}")


def _cmd_detect(ns) -> int:
    try:
        image = load_pgm(ns.input)
    except (OSError, ValueError) as exc:
        print(f"qedge: cannot read {ns.input}: {exc}", file=sys.stderr)
        return EXIT_NOINPUT
    if ns.bit_depth is not None:
        try:
            image = reduce_bit_depth(image, ns.bit_depth)
        except ValueError as exc:
            print(f"qedge: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        threshold = Threshold.parse(ns.threshold, image.bit_depth)
    except ValueError as exc:
        print(f"qedge: error: bad threshold: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        config = PipelineConfig(threshold=threshold, mode=ns.mode,
                                reset_strategy=ns.reset, tol=ns.tol)
    except ValueError as exc:
        print(f"qedge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        edge, stats = run(image, config)
    except CapacityError as exc:
        print(f"qedge: error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ConsistencyError as exc:
        print(f"qedge: internal consistency failure: {exc}", file=sys.stderr)
        return 1

    write_pgm(edge, ns.output)
    oracle_match = None
    if ns.reference:
        oracle_match = bool(
            np.array_equal(reference_edge_map(image, threshold).edge, edge.bits)
        )
    report = RunReport(
        n=image.side_log2, q=image.bit_depth, mode=config.mode,
        threshold=threshold.value, threshold_bits=threshold.bits,
        qubit_count=stats.qubit_count, gate_total=stats.gate_total,
        multi_controlled_count=stats.multi_controlled_count,
        max_control_arity=stats.max_control_arity, depth=stats.depth,
        edge_pixel_count=edge.count(), wall_time_ms=stats.wall_time_ms,
        oracle_match=oracle_match,
    )
    text = report.to_text()
    if ns.stats:
        with open(ns.stats, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if oracle_match is False:
        print("qedge: edge map disagrees with the classical reference",
              file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _parse_dump_threshold(ns) -> Threshold:
    if ns.threshold is None:
        raise ValueError("--threshold is required for this circuit")
    return Threshold.parse(ns.threshold, ns.width)


def _cmd_circuit_dump(ns) -> int:
    try:
        name = ns.circuit
        if name == "qrca":
            width = ns.width or 3
            a = RegisterRef("a", tuple(range(width)))
            b = RegisterRef("b", tuple(range(width, 2 * width)))
            circ = build_qrca(AdderLayout(a, b, 2 * width, 2 * width + 1))
        elif name == "s2c":
            width = ns.width or 4
            circ = build_s2c(RegisterRef("y", tuple(range(width))))
        elif name == "abs-sub":
            width = ns.width or 4
            a = RegisterRef("a", tuple(range(width)))
            b = RegisterRef("b", tuple(range(width, 2 * width)))
            circ = build_abs_subtractor(a, b, 2 * width, 2 * width + 1)
        elif name == "ladder":
            width = ns.width or 3
            circ = build_ladder_shift(RegisterRef("pos", tuple(range(width))),
                                      ns.direction)
        elif name == "ftpo":
            threshold = _parse_dump_threshold(ns)
            circ = build_ftpo(threshold,
                              RegisterRef("s", tuple(range(threshold.width))))
        else:  # qpa
            threshold = _parse_dump_threshold(ns)
            circ = build_qpa(threshold,
                             RegisterRef("s", tuple(range(threshold.width))),
                             threshold.width)
    except ValueError as exc:
        print(f"qedge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _print_circuit(circ)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.command == "detect":
        return _cmd_detect(ns)
    return _cmd_circuit_dump(ns)


if __name__ == "__main__":
    sys.exit(main())

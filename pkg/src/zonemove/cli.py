"""Command-line interface.

Exit codes: 0 ok, 1 I/O failure, 2 bad input or compilation error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import benchgen
from .circuit import gate_count, parse_circuit, serialize_circuit
from .errors import ZoneMoveError
from .fidelity import dump_report, report_to_dict, reports_to_csv, reports_to_markdown
from .hardware import DEFAULT_PARAMS, Mode, default_geometry, load_hardware_config
from .pipeline import CompileConfig, run
from .scheduler import dump_schedule
from .stages import DEFAULT_ALPHA
from .verify import verify_schedule

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2, 3


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_generate(args) -> int:
    try:
        spec = benchgen.spec_from_name(
            args.bench, args.qubits, args.seed, probability=args.probability, num_strings=args.strings
        )
        circuit = benchgen.generate(spec)
    except ZoneMoveError as exc:
        _err(str(exc))
        return EXIT_INPUT
    text = serialize_circuit(circuit) + "\n"
    try:
        _write(args.output, text)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(
        f"{args.bench} n={args.qubits} seed={args.seed}: "
        f"{len(circuit.blocks)} blocks, {gate_count(circuit)} gates",
        file=sys.stderr,
    )
    return EXIT_OK


def _compile_one(circuit_path: str, config: CompileConfig, timing: bool):
    """Compile one file; returns (schedule_text, report_doc). Raises on failure."""
    circuit = parse_circuit(Path(circuit_path).read_text(encoding="utf-8"))
    if config.hw_path:
        params, layout = load_hardware_config(
            Path(config.hw_path).read_text(encoding="utf-8"), circuit.num_qubits
        )
    else:
        params, layout = DEFAULT_PARAMS, default_geometry(max(circuit.num_qubits, 1))
    res = run(circuit, config, params, layout)
    extra = {
        "circuit": Path(circuit_path).stem,
        "num_qubits": circuit.num_qubits,
        "mode": config.mode.value,
        "n_aods": config.n_aods,
        "alpha": config.alpha,
    }
    if timing:
        extra["T_comp_ms"] = res.t_comp * 1e3
    doc = report_to_dict(res.report, **extra)
    return dump_schedule(res.schedule), doc, res.t_comp


def _summary(doc: dict, t_comp: float) -> str:
    return (
        f"{doc['circuit']} [{doc['mode']}, {doc['n_aods']} AOD]: fidelity {doc['total']:.6f} "
        f"(cz {doc['f_cz']:.4f}, exc {doc['f_exc']:.4f}, trans {doc['f_trans']:.4f}, "
        f"dec {doc['f_dec']:.4f}), T_exe {doc['T_exe_us']:.2f} us, "
        f"S={doc['S']}, N_trans={doc['N_trans']}, T_comp {t_comp * 1e3:.1f} ms"
    )


def cmd_compile(args) -> int:
    config = CompileConfig(
        mode=Mode(args.mode),
        n_aods=args.aods,
        alpha=args.alpha,
        hw_path=args.hw,
        include_1q=args.include_1q,
    )
    src = Path(args.circuit)
    if src.is_dir():
        return _compile_dir(src, args, config)
    try:
        sched_text, doc, t_comp = _compile_one(str(src), config, args.timing)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except (ZoneMoveError, ValueError) as exc:
        _err(f"{src}: {exc}")
        return EXIT_INPUT
    try:
        if args.output:
            _write(args.output, sched_text)
        if args.report:
            _write(args.report, dump_report(doc))
        if args.csv:
            _write(args.csv, reports_to_csv([doc]))
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    print(_summary(doc, t_comp), file=sys.stderr)
    return EXIT_OK


def _compile_dir(src: Path, args, config: CompileConfig) -> int:
    files = sorted(p for p in src.glob("*.json"))
    out_dir = Path(args.output) if args.output else src
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    status = EXIT_OK
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        futures = {f: pool.submit(_compile_one, str(f), config, args.timing) for f in files}
        for f, fut in futures.items():
            try:
                sched_text, doc, t_comp = fut.result()
                (out_dir / f"{f.stem}.{config.mode.value}.schedule.json").write_text(sched_text)
                (out_dir / f"{f.stem}.{config.mode.value}.report.json").write_text(dump_report(doc))
            except OSError as exc:
                _err(f"{f}: {exc}")
                status = max(status, EXIT_IO)
                continue
            except (ZoneMoveError, ValueError) as exc:
                _err(f"{f}: {exc}")
                status = EXIT_INPUT
                continue
            print(_summary(doc, t_comp), file=sys.stderr)
    return status


def cmd_verify(args) -> int:
    try:
        doc = json.loads(Path(args.schedule).read_text(encoding="utf-8"))
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except json.JSONDecodeError as exc:
        _err(f"{args.schedule}: not valid JSON: {exc}")
        return EXIT_INPUT
    violations = verify_schedule(doc)
    if violations:
        for v in violations:
            print(v)
        print(f"{len(violations)} violation(s)", file=sys.stderr)
        return EXIT_VERIFY
    print(f"{args.schedule}: ok", file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    docs = []
    try:
        for path in args.reports:
            docs.append(json.loads(Path(path).read_text(encoding="utf-8")))
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    except json.JSONDecodeError as exc:
        _err(f"not valid JSON: {exc}")
        return EXIT_IO
    if args.format == "csv":
        text = reports_to_csv(docs)
    elif args.format == "md":
        text = reports_to_markdown(docs)
    else:
        text = json.dumps(docs, indent=2, sort_keys=True) + "\n"
    try:
        _write(args.output, text)
    except OSError as exc:
        _err(str(exc))
        return EXIT_IO
    return EXIT_OK


def _alpha(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("alpha must lie strictly between 0 and 1")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zonemove", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a benchmark circuit")
    g.add_argument("--bench", required=True, help="qaoa-regular<d>, qaoa-random, bv, vqe, qsim, qft")
    g.add_argument("--qubits", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--probability", type=float, default=None, help="pair (qaoa-random) or support (qsim) probability")
    g.add_argument("--strings", type=int, default=10, help="Pauli strings for qsim")
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("compile", help="compile a circuit (or a directory of circuits)")
    c.add_argument("circuit")
    c.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.WITH_STORAGE.value)
    c.add_argument("--aods", type=_positive, default=1)
    c.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)
    c.add_argument("--hw", default=None, help="hardware config JSON")
    c.add_argument("--include-1q", action="store_true")
    c.add_argument("--timing", action="store_true", help="store T_comp_ms in the report")
    c.add_argument("-o", "--output", default=None, help="schedule JSON (output directory for a directory input)")
    c.add_argument("--report", default=None, help="report JSON")
    c.add_argument("--csv", default=None, help="report as a one-row CSV")
    c.add_argument("--jobs", type=_positive, default=None, help="worker processes for directory input")
    c.set_defaults(func=cmd_compile)

    v = sub.add_parser("verify", help="replay a schedule and check it")
    v.add_argument("schedule")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("report", help="tabulate report files")
    r.add_argument("reports", nargs="*")
    r.add_argument("--format", choices=["csv", "md", "json"], default="csv")
    r.add_argument("-o", "--output", default=None)
    r.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point: ``wavegate {simulate,compile,verify,density,wdyn}``.

Exit codes: 0 success, 1 parse or validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .circuit import format_gate, parse_circuit
from .compiler import compile_circuit
from .density import PhaseEnsembleSpec
from .errors import CircuitSyntaxError, WavegateError
from .observables import SpinObservable
from .runner import VERIFY_TOL, density_run, simulate, verify, wdyn_run
from .state import ComplexState

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _read_circuit(path: str):
    text = Path(path).read_text(encoding="utf-8")
    return parse_circuit(text)


def _read_input(spec: str | None, mq: int) -> ComplexState | None:
    if spec is None:
        return None
    if spec.strip().lstrip("+").isdigit():
        return ComplexState.basis(int(spec), mq)
    data = json.loads(Path(spec).read_text(encoding="utf-8"))
    amps = [complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in data]
    if len(amps) != 2**mq:
        raise WavegateError(f"input has {len(amps)} amplitudes, circuit needs {2**mq}")
    return ComplexState.from_amplitudes(amps)


def _read_pbar(spec: str) -> list[float]:
    path = Path(spec)
    text = path.read_text(encoding="utf-8") if path.is_file() else spec
    text = text.strip()
    if text.startswith("["):
        return [float(x) for x in json.loads(text)]
    return [float(x) for x in text.replace(",", " ").split()]


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def cmd_simulate(args) -> int:
    circuit = _read_circuit(args.file)
    state = _read_input(args.input, circuit.mq)
    obs = None
    if args.observables:
        obs = [SpinObservable.parse(o) for o in args.observables.split(",") if o.strip()]
    res = simulate(circuit, state, obs)
    lines = [f"channels: {circuit.n_c}   compiled gates: {res.gate_count}", "",
             f"{'ch':>4}  {'re':>12}  {'im':>12}  {'prob':>10}"]
    for a, (z, p) in enumerate(zip(res.amplitudes, res.probabilities), start=1):
        lines.append(f"{a:>4}  {z.real:>12.8f}  {z.imag:>12.8f}  {p:>10.8f}")
    lines.append("")
    lines += [f"<{k}> = {v:+.8f}" for k, v in res.expectations.items()]
    _emit(args, res.to_json(), lines)
    return EXIT_OK


def cmd_compile(args) -> int:
    circuit = _read_circuit(args.file)
    gates = compile_circuit(circuit)
    texts = [format_gate(g) for g in gates]
    counts = Counter(type(g).__name__ for g in gates)
    payload = {"qubits": circuit.mq, "gates": texts, "gate_count": len(gates), "counts": dict(counts)}
    lines = texts + ["", f"# {len(gates)} gates: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = _read_circuit(args.file)
    dev = verify(circuit)
    ok = dev <= VERIFY_TOL
    print(f"max deviation: {dev:.3e} ({'ok' if ok else 'FAIL'}, tolerance {VERIFY_TOL:g})")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_density(args) -> int:
    circuit = _read_circuit(args.file)
    spec = PhaseEnsembleSpec(tuple(_read_pbar(args.pbar)), args.mode, args.samples, args.seed)
    res = density_run(circuit, spec)
    lines = [f"samples: {res.samples}   seed: {res.seed}   compiled gates: {res.gate_count}", "",
             f"{'ch':>4}  {'rho_aa':>12}"]
    lines += [f"{a:>4}  {d:>12.8f}" for a, d in enumerate(res.diagonal, start=1)]
    lines += ["", f"max |off-diagonal|: {res.max_offdiag:.6e}"]
    _emit(args, res.to_json(), lines)
    return EXIT_OK


def cmd_wdyn(args) -> int:
    circuit = _read_circuit(args.file)
    state = _read_input(args.input, circuit.mq)
    res = wdyn_run(circuit, args.seed, state, compatible=not args.incompatible)
    lines = [f"{'gate':<28} {'compatible':>10}  {'antilinear':>10}"]
    lines += [f"{g:<28} {str(ok):>10}  {a:>10.3e}" for g, ok, a in res.verdicts]
    lines += ["", f"norm drift: {res.norm_drift:.3e}   seed: {res.seed}"]
    _emit(args, res.to_json(), lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wavegate", description="Correlation-gate circuit simulator")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="state-vector run")
    s.add_argument("file")
    s.add_argument("--input", help="input channel (1-based) or JSON file of amplitudes")
    s.add_argument("--observables", help="comma list such as s1,s2,s1s2")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("compile", help="lower to correlation gates")
    c.add_argument("file")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_compile)

    v = sub.add_parser("verify", help="compare compiled product with the tensor-product oracle")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("density", help="random-phase ensemble run")
    d.add_argument("file")
    d.add_argument("--pbar", required=True, help="file or inline list of input intensities")
    d.add_argument("--samples", type=int, required=True)
    d.add_argument("--seed", type=int, required=True)
    d.add_argument("--mode", choices=("uniform", "fixed"), default="uniform")
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_density)

    w = sub.add_parser("wdyn", help="stochastic-phase run in the real picture")
    w.add_argument("file")
    w.add_argument("--seed", type=int, required=True)
    w.add_argument("--input", help="input channel (1-based) or JSON file of amplitudes")
    w.add_argument("--incompatible", action="store_true",
                   help="beam splits rotate real and imaginary parts independently")
    w.add_argument("--json", action="store_true")
    w.set_defaults(func=cmd_wdyn)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CircuitSyntaxError as exc:
        print(f"{args.file}:{exc.line}:{exc.column}: {exc.message}", file=sys.stderr)
    except (WavegateError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Batch experiment runner.

    qencode run --protocol p1 --n 4 --logical random --seed 7 --trials 20
    qencode run --protocol shor --errors exhaustive-pauli
    qencode verify phases

Reports are JSON (``"schema": 1``) or a flat CSV of the per-trial rows. The
default output directory comes from ``QENCODE_OUTPUT_DIR`` (else the
working directory). Exit status: 0 if every tolerance holds, 1 on a
tolerance violation (the report is still written), 2 on bad arguments or
an unwritable output path.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import itertools
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, codes, protocols, verify
from .codes import ErrorSpec
from .errors import InvalidArgumentError
from .statevec import LogicalAmplitudes

SCHEMA = 1
OUTPUT_DIR_ENV = "QENCODE_OUTPUT_DIR"
DEFAULT_TOL = {"p1": 1e-12, "p2": 1e-12, "cnot": 1e-12, "shor": 1e-10}


@dataclass
class ExperimentConfig:
    protocol: str
    n_appended: Optional[int] = None
    logical: str = "random"
    alpha: Optional[str] = None
    beta: Optional[str] = None
    seed: int = 0
    errors: str = "none"
    trials: int = 1
    branch: str = "sampled"
    tol: Optional[float] = None
    output: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        if self.protocol not in DEFAULT_TOL:
            raise InvalidArgumentError(f"unknown protocol {self.protocol!r}")
        if self.protocol == "shor":
            if self.n_appended not in (None, 8):
                raise InvalidArgumentError("shor always uses 9 qubits (N = 8)")
            self.n_appended = 8
        elif self.n_appended is None:
            raise InvalidArgumentError(f"--n is required for {self.protocol}")
        n = self.n_appended
        if self.protocol == "p1" and (n < 2 or n % 2):
            raise InvalidArgumentError(f"p1 needs an even N >= 2, got {n}")
        if self.protocol == "p2" and (n < 3 or n % 2 == 0):
            raise InvalidArgumentError(f"p2 needs an odd N >= 3, got {n}")
        if self.protocol == "cnot" and n < 1:
            raise InvalidArgumentError("cnot needs N >= 1")
        if self.logical not in ("random", "explicit"):
            raise InvalidArgumentError("logical must be 'random' or 'explicit'")
        if self.logical == "explicit":
            self.logical_amplitudes()
        if self.trials < 1:
            raise InvalidArgumentError("trials must be >= 1")
        if self.branch not in ("sampled", "0", "1", "both"):
            raise InvalidArgumentError(f"unknown branch mode {self.branch!r}")
        if self.format not in ("json", "csv"):
            raise InvalidArgumentError("format must be json or csv")
        if self.tol is None:
            self.tol = DEFAULT_TOL[self.protocol]
        parse_errors(self.errors, self.protocol, self.block_size)

    @property
    def block_size(self):
        return {"p1": self.n_appended + 1, "cnot": self.n_appended + 1,
                "p2": self.n_appended, "shor": 9}[self.protocol]

    def logical_amplitudes(self) -> LogicalAmplitudes:
        try:
            a, b = complex(self.alpha.replace(" ", "")), complex(self.beta.replace(" ", ""))
        except (AttributeError, ValueError):
            raise InvalidArgumentError("explicit logical input needs --alpha and --beta") from None
        return LogicalAmplitudes(a, b)

    def canonical(self) -> dict:
        d = asdict(self)
        d.pop("output")
        return d

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream keyed on (seed, index); independent of execution order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def parse_errors(text: str, protocol: str, block_size: int) -> list:
    """Expand an error descriptor into a list of error cases (lists of ErrorSpec).

    ``none``; ``exhaustive-x`` (repetition codes: every X-subset below half
    the block); ``exhaustive-pauli`` (Shor: every single X/Y/Z);
    ``random-unitary:COUNT:SEED`` (Shor: COUNT unitaries cycling over the
    nine positions); or an explicit list such as ``X@3,Z@1``.
    """
    text = text.strip()
    if text == "none":
        return [[]]
    shor = protocol == "shor"
    if text == "exhaustive-x":
        if shor:
            raise InvalidArgumentError("use exhaustive-pauli for the Shor code")
        cases = []
        for k in range(block_size // 2 + 1):
            cases += [[ErrorSpec(q, "X") for q in c]
                      for c in itertools.combinations(range(block_size), k)]
        return cases
    if text == "exhaustive-pauli":
        if not shor:
            raise InvalidArgumentError("exhaustive-pauli applies to the Shor code; use exhaustive-x")
        return [[]] + [[ErrorSpec(q, k)] for q in range(9) for k in "XYZ"]
    if text.startswith("random-unitary"):
        if not shor:
            raise InvalidArgumentError("random-unitary applies to the Shor code")
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidArgumentError("random-unitary needs COUNT:SEED")
        count, seed = int(parts[1]), int(parts[2])
        return [[ErrorSpec.random_unitary(i % 9, trial_rng(seed, i))] for i in range(count)]
    cases = []
    for item in text.split(","):
        kind, _, q = item.strip().partition("@")
        if kind not in ("X", "Y", "Z") or not q.isdigit() or int(q) >= block_size:
            raise InvalidArgumentError(f"bad error item {item!r}")
        cases.append(ErrorSpec(int(q), kind))
    return [cases]


def _encode(config: ExperimentConfig, l, rng):
    n = config.n_appended
    if config.protocol == "p1":
        return [protocols.encode_protocol1(l, n)]
    if config.protocol == "cnot":
        return [protocols.encode_cnot_baseline(l, n)]
    if config.protocol == "shor":
        return [protocols.shor_encode(l)]
    if config.branch == "both":
        return list(protocols.encode_protocol2(l, n, "both"))
    if config.branch == "sampled":
        return [protocols.encode_protocol2(l, n, "sampled", rng=rng)]
    return [protocols.encode_protocol2(l, n, int(config.branch))]


def _complex(z):
    return [float(np.real(z)), float(np.imag(z))]


def run_trial(config: ExperimentConfig, index: int, error_cases: list) -> list:
    rng = trial_rng(config.seed, index)
    l = (LogicalAmplitudes.random(rng) if config.logical == "random"
         else config.logical_amplitudes())
    code = "shor" if config.protocol == "shor" else "repetition"
    rows = []
    for branch_index, (state, report) in enumerate(_encode(config, l, rng)):
        for case_index, case in enumerate(error_cases):
            s = state
            for e in case:
                s = codes.apply_error(s, e)
            syndrome = None
            if case:
                if code == "shor":
                    syndrome, s = codes.shor_correct(s, rng)
                else:
                    syndrome, s = codes.repetition_correct(s, range(s.n_qubits), rng)
            fid = codes.logical_fidelity(s, l, code)
            rows.append({
                "trial": index,
                "branch": branch_index,
                "case": case_index,
                "logical": {"alpha": _complex(l.alpha), "beta": _complex(l.beta)},
                "encoding": report.to_dict(),
                "errors": [e.to_dict() for e in case],
                "syndrome": None if syndrome is None else syndrome.to_dict(),
                "fidelity": fid,
                "passed": fid >= 1 - config.tol and report.fidelity_to_target >= 1 - config.tol,
            })
    return rows


def aggregate(rows: list) -> dict:
    fids = [r["fidelity"] for r in rows]
    return {
        "rows": len(rows),
        "passed": sum(r["passed"] for r in rows),
        "failed": sum(not r["passed"] for r in rows),
        "min_fidelity": min(fids),
        "mean_fidelity": math.fsum(fids) / len(fids),
        "entangling_pulse_counts": sorted({r["encoding"]["entangling_pulse_count"] for r in rows}),
        "residual_phases": sorted({r["encoding"]["residual_phase"] for r in rows}),
        "all_passed": all(r["passed"] for r in rows),
    }


def run(config: ExperimentConfig) -> dict:
    """Execute every trial and return the report dict (no I/O)."""
    cases = parse_errors(config.errors, config.protocol, config.block_size)
    rows = []
    for i in range(config.trials):
        rows.extend(run_trial(config, i, cases))
    rows.sort(key=lambda r: (r["trial"], r["branch"], r["case"]))
    return {
        "schema": SCHEMA,
        "artifact": "qencode",
        "version": __version__,
        "config": config.canonical(),
        "config_hash": config.digest(),
        "seed": config.seed,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "rows": rows,
        "aggregate": aggregate(rows),
    }


CSV_FIELDS = (
    "trial", "branch", "case", "alpha_re", "alpha_im", "beta_re", "beta_im", "protocol",
    "n_appended", "entangling_pulse_count", "residual_phase", "measurement_outcome",
    "measurement_probability", "encoding_fidelity", "errors", "corrections", "fidelity", "passed",
)


def csv_rows(report: dict):
    for r in report["rows"]:
        enc, meas = r["encoding"], r["encoding"]["measurement"] or {}
        yield {
            "trial": r["trial"], "branch": r["branch"], "case": r["case"],
            "alpha_re": repr(r["logical"]["alpha"][0]), "alpha_im": repr(r["logical"]["alpha"][1]),
            "beta_re": repr(r["logical"]["beta"][0]), "beta_im": repr(r["logical"]["beta"][1]),
            "protocol": enc["protocol"], "n_appended": enc["n_appended"],
            "entangling_pulse_count": enc["entangling_pulse_count"],
            "residual_phase": repr(enc["residual_phase"]),
            "measurement_outcome": meas.get("outcome", ""),
            "measurement_probability": repr(meas["probability"]) if meas else "",
            "encoding_fidelity": repr(enc["fidelity_to_target"]),
            "errors": " ".join(f"{e['kind']}@{e['qubit']}" for e in r["errors"]),
            "corrections": " ".join(f"{p}@{q}" for q, p in (r["syndrome"] or {}).get("corrections", [])),
            "fidelity": repr(r["fidelity"]), "passed": r["passed"],
        }


def dumps_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_report(report: dict, path: Path, fmt: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(dumps_json(report))
        return
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
        writer.writeheader()
        writer.writerows(csv_rows(report))


def default_path(stem: str, fmt: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{stem}.{fmt}"


def _fmt(x):
    if isinstance(x, float):
        return f"{x:+.17g}" if math.isfinite(x) else str(x)
    return str(x)


def print_verify(result: dict, out=None):
    out = out or sys.stdout
    rows = result["rows"]
    keys = [k for k in rows[0] if k != "passed"] + ["passed"]
    print(f"verify {result['scope']}", file=out)
    for r in rows:
        print("  " + "  ".join(f"{k}={_fmt(r.get(k))}" for k in keys), file=out)
    print(f"{result['scope']}: {'PASS' if result['passed'] else 'FAIL'}", file=out)


def build_parser():
    parser = argparse.ArgumentParser(prog="qencode", description="collective-pulse encoding experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an encoding / error-correction experiment")
    r.add_argument("--protocol", required=True, choices=sorted(DEFAULT_TOL))
    r.add_argument("--n", type=int, dest="n_appended", help="number of appended qubits N")
    r.add_argument("--logical", default="random", choices=("random", "explicit"))
    r.add_argument("--alpha", help="complex amplitude, e.g. 0.6 or 0.3+0.1j")
    r.add_argument("--beta")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--errors", default="none",
                   help="none | exhaustive-x | exhaustive-pauli | random-unitary:COUNT:SEED | X@3,Z@1")
    r.add_argument("--trials", type=int, default=1)
    r.add_argument("--branch", default="sampled", choices=("sampled", "0", "1", "both"))
    r.add_argument("--tol", type=float)
    r.add_argument("--output", help=f"report path (default: ${OUTPUT_DIR_ENV} or cwd)")
    r.add_argument("--format", default="json", choices=("json", "csv"))

    v = sub.add_parser("verify", help="oracle and phase self-checks")
    v.add_argument("scope", choices=sorted(verify.SCOPES))
    v.add_argument("--output", help="also write the result as JSON")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        result = verify.SCOPES[args.scope]()
        print_verify(result)
        if args.output:
            try:
                write_report({"schema": SCHEMA, "version": __version__, **result},
                             Path(args.output), "json")
            except OSError as exc:
                print(f"qencode: cannot write {args.output}: {exc}", file=sys.stderr)
                return 2
        return 0 if result["passed"] else 1

    fields = {k: v for k, v in vars(args).items() if k != "command"}
    try:
        config = ExperimentConfig(**fields)
    except InvalidArgumentError as exc:
        print(f"qencode: {exc}", file=sys.stderr)
        return 2
    report = run(config)
    path = (Path(config.output) if config.output
            else default_path(f"qencode-{config.protocol}-{config.digest()[:12]}", config.format))
    try:
        write_report(report, path, config.format)
    except OSError as exc:
        print(f"qencode: cannot write {path}: {exc}", file=sys.stderr)
        return 2
    agg = report["aggregate"]
    print(f"{config.protocol}: {agg['passed']}/{agg['rows']} within tol {config.tol:g}, "
          f"min fidelity {agg['min_fidelity']:.17g}, "
          f"entangling pulses {agg['entangling_pulse_counts']} -> {path}")
    return 0 if agg["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())

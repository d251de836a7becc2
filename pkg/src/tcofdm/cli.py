"""Command-line front end for BER sweeps.

    python -m tcofdm --scenario awgn --ebn0 0:5:0.5 --iterations 5 --out ber.csv

Every flag can also be given in a flat ``key = value`` config file
(``--config FILE``); keys are the flag names without the leading dashes.
Flags on the command line override the file.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from tcofdm.sim import SCENARIO_KINDS, ScenarioConfig, emit_results, run_sweep

log = logging.getLogger("tcofdm")

# flag name -> (ScenarioConfig field, parser)
_FIELDS = {
    "scenario": ("scenario_kind", str),
    "k-factor": ("k_factor", float),
    "phase-angle-deg": ("phase_angle_deg", float),
    "ebn0": ("ebn0_points_db", None),
    "iterations": ("iterations", int),
    "block-size": ("block_size", int),
    "fft": ("fft_length", int),
    "seed": ("seed", int),
    "min-errors": ("min_errors", int),
    "max-bits": ("max_bits", lambda s: int(float(s))),
    "sample-rate-hz": ("sample_rate_hz", float),
    "carrier-hz": ("carrier_hz", float),
    "speed-kmh": ("speed_kmh", float),
    "noise-code-rate": ("noise_code_rate", Fraction),
    "schedule": ("decoder_schedule", str),
    "uncoded": ("uncoded", None),
}


def parse_ebn0(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (stop inclusive) or a comma-separated list, in dB."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"bad Eb/N0 range {text!r}; expected start:stop:step")
        start, stop, step = parts
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise ValueError(f"empty Eb/N0 range {text!r}")
        return tuple(round(start + i * step, 10) for i in range(n))
    return tuple(float(p) for p in text.split(",") if p.strip())


def _parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def read_config_file(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in _FIELDS and key not in ("out", "workers"):
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tcofdm", description="Turbo-coded OFDM BER sweep")
    p.add_argument("--config", help="key = value file mirroring the flags")
    p.add_argument("--scenario", choices=SCENARIO_KINDS)
    p.add_argument("--k-factor")
    p.add_argument("--phase-angle-deg")
    p.add_argument("--ebn0", help="start:stop:step in dB (stop inclusive) or a comma list")
    p.add_argument("--iterations")
    p.add_argument("--block-size")
    p.add_argument("--fft")
    p.add_argument("--seed")
    p.add_argument("--min-errors")
    p.add_argument("--max-bits")
    p.add_argument("--sample-rate-hz")
    p.add_argument("--carrier-hz")
    p.add_argument("--speed-kmh")
    p.add_argument("--noise-code-rate", help="code rate used for noise calibration, e.g. 1/3")
    p.add_argument("--schedule", choices=("ring", "full"))
    p.add_argument("--uncoded", action="store_const", const="true", help="bypass the FEC")
    p.add_argument("--workers", help="parallel worker processes")
    p.add_argument("--out", help="CSV destination (plot scripts are written next to it)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_settings(settings: dict[str, str]) -> ScenarioConfig:
    kwargs = {}
    for key, value in settings.items():
        if key not in _FIELDS:
            continue
        field, conv = _FIELDS[key]
        if key == "ebn0":
            kwargs[field] = parse_ebn0(value)
        elif key == "uncoded":
            kwargs[field] = _parse_bool(value)
        else:
            kwargs[field] = conv(value)
    return ScenarioConfig(**kwargs)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    settings: dict[str, str] = {}
    try:
        if args.config:
            settings.update(read_config_file(args.config))
        for key in list(_FIELDS) + ["out", "workers"]:
            value = getattr(args, key.replace("-", "_"))
            if value is not None:
                settings[key] = value
        config = config_from_settings(settings)
    except (OSError, ValueError) as exc:
        parser.error(str(exc))
    out = settings.get("out", "ber.csv")
    workers = int(settings.get("workers", 1))
    log.info("running %s at %s dB", config.label, config.ebn0_points_db)
    records = run_sweep(config, workers=workers)
    for r in records:
        print(f"{r.scenario:32s} {r.ebn0_db:7.2f} dB  it={r.iterations}  "
              f"bits={r.bits:<10d} errors={r.errors:<8d} ber={r.ber:.3e}")
    try:
        paths = emit_results(records, out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for p in paths:
        log.info("wrote %s", p)
    return 0


if __name__ == "__main__":
    sys.exit(main())

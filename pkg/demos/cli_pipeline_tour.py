"""Driving the verification pipeline through its JSON config interface.

Everything the library checks is reachable from `fracspec <config.json>`.
This script writes a few configs, invokes the same entry point the console
script uses, and lists what lands in the output directory.

Run as: python3 demos/cli_pipeline_tour.py
"""

import json
import tempfile
from pathlib import Path

from fracgap.cli import run

workdir = Path(tempfile.mkdtemp(prefix="fracspec_tour_"))
print(f"working under {workdir}\n")


def launch(name: str, config: dict) -> None:
    path = workdir / f"{name}.json"
    path.write_text(json.dumps(config, indent=2) + "\n")
    print(f"--- fracspec {path.name} ---")
    code = run(str(path))
    out = Path(config["output_dir"])
    files = sorted(p.name for p in out.iterdir()) if out.is_dir() else []
    print(f"exit code {code}; wrote {files}\n")


# ---------------------------------------------------------------------------
# 1. Spectrum of the free operator at alpha = 1.5. The resolved config is
#    echoed to config_echo.json so a run is reproducible from its outputs.
launch("spectrum_free", {
    "command": "spectrum",
    "alpha": 1.5,
    "N": 256,
    "output_dir": str(workdir / "out_spectrum"),
})

# ---------------------------------------------------------------------------
# 2. Gap bounds for a quadratic well. Both the variational route and the
#    eigenvalue route land in gap_report.json.
launch("gap_well", {
    "command": "gap",
    "alpha": 1.5,
    "N": 256,
    "potential": {"kind": "power_well", "kappa": 5.0, "p": 2.0},
    "output_dir": str(workdir / "out_gap"),
})

# ---------------------------------------------------------------------------
# 3. A small random campaign over piecewise linear test functions; each draw
#    gets its own witness certificate file.
launch("poincare_small", {
    "command": "poincare",
    "alpha": 1.3,
    "poincare": {"n_functions": 5, "seed": 42},
    "output_dir": str(workdir / "out_poincare"),
})

# ---------------------------------------------------------------------------
# 4. The compression scan below alpha = 1, where no uniform constant exists.
launch("counterexample_half", {
    "command": "counterexample",
    "alpha": 0.5,
    "output_dir": str(workdir / "out_counter"),
})

# ---------------------------------------------------------------------------
# 5. Config validation happens before any work: unknown keys, out-of-range
#    alpha, and malformed JSON all exit 2 with a message on stderr.
bad = workdir / "bad.json"
bad.write_text(json.dumps({"command": "poincare", "alpha": 0.9}) + "\n")
print("--- fracspec bad.json (alpha outside (1, 2) for poincare) ---")
code = run(str(bad))
print(f"exit code {code} (config error)\n")

# ---------------------------------------------------------------------------
# 6. Seed override: --seed replaces both mc.seed and poincare.seed, and the
#    echo records what actually ran.
cfg_path = workdir / "seeded.json"
cfg_path.write_text(json.dumps({
    "command": "simulate",
    "alpha": 1.0,
    "mc": {"n_paths": 2000, "n_steps": 64, "n_points": 9},
    "output_dir": str(workdir / "out_seeded"),
}) + "\n")
print("--- fracspec seeded.json --seed 999 --quiet ---")
code = run(str(cfg_path), seed=999, quiet=True)
echo = json.loads((workdir / "out_seeded" / "config_echo.json").read_text())
print(f"exit code {code}; echoed mc.seed = {echo['mc']['seed']}, "
      f"poincare.seed = {echo['poincare']['seed']}")

"""
Benchmarks from the command line
================================

The ``momapf`` command generates instances, solves one file, or runs a
manifest of instances times solver configurations into a CSV plus a
per-cell summary. This script drives it end to end in a scratch directory.
"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

from momapf import random_grid, render_map

work = Path(tempfile.mkdtemp(prefix="momapf-demo-"))
(work / "room.map").write_text(render_map(random_grid(6, 6, 0.2, seed=4)))


def run(*args):
    cmd = [sys.executable, "-m", "momapf", *args]
    print("$ momapf", " ".join(args))
    print(subprocess.run(cmd, check=True, capture_output=True, text=True, cwd=work).stdout)


run("gen", "--map", "room.map", "--agents", "3", "--objectives", "2",
    "--count", "4", "--seed", "1", "--out", "instances")
first = sorted((work / "instances").glob("*.json"))[0]
run("solve", "--instance", str(first), "--alg", "momstar", "--w", "1", "--out", "sol.json")
sol = json.loads((work / "sol.json").read_text())
print("first solution cost:", sol["solutions"][0]["cost"])

(work / "manifest.json").write_text(json.dumps({
    "instances": ["instances/*.json"],
    "configs": [
        {"algorithm": "momstar", "w": "1", "time_limit": 30},
        {"algorithm": "momstar", "w": "1.5", "time_limit": 30},
        {"algorithm": "namoa", "w": "1", "time_limit": 30},
    ],
}))
run("bench", "--manifest", "manifest.json", "--out", "bench.csv")
print((work / "bench.summary.csv").read_text())

# Running the same manifest again finds every row already present and
# leaves both files untouched.
before = (work / "bench.csv").read_bytes()
run("bench", "--manifest", "manifest.json", "--out", "bench.csv")
assert (work / "bench.csv").read_bytes() == before
print("outputs in", work)

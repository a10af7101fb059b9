# Driving the command line tool from Python
#
# The lebdecomp command reads a JSON problem file and writes a JSON report.
# Exit codes: 0 success, 2 bad input, 3 a verification check failed.

# %%
import json
import subprocess
import sys
import tempfile
from pathlib import Path

tmp = Path(tempfile.mkdtemp())
problem = tmp / "problem.json"
problem.write_text(json.dumps({
    "atoms": ["a", "b", "c"],
    "mu": {"a": 1, "b": "1/2", "c": 0},
    "nu": {"a": 2, "b": 0, "c": 0.25},
}))


def run(*args):
    cmd = [sys.executable, "-m", "lebdecomp.cli", *map(str, args)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


# %%
code, out, _ = run(problem, "--no-timing")
print("exit", code)
print(out)

# %%
# Same problem in floating point.
code, out, _ = run(problem, "--backend", "float")
report = json.loads(out)
print("exit", code, " nu_s", report["nu_s"], " took", report["duration_seconds"], "s")

# %%
# A negative weight is rejected before any work is done.
bad = tmp / "bad.json"
bad.write_text(json.dumps({"atoms": ["a"], "mu": {"a": -1}, "nu": {"a": 1}}))
code, _, err = run(bad)
print("exit", code, err.strip())

# %%
# Forms mode takes two matrices.
forms = tmp / "forms.json"
forms.write_text(json.dumps({"a": [[1, 0], [0, 0]], "b": [[2, 1], [1, 1]]}))
code, out, _ = run("--mode", "forms", forms)
print("exit", code, " b_a", json.loads(out)["b_a"])

# %%
# A directory of problems can be processed in one call. The exit code is the
# worst one seen across the batch.
batch = tmp / "batch"
batch.mkdir()
for i, w in enumerate((1, 2, 3)):
    (batch / f"p{i}.json").write_text(json.dumps({"atoms": ["x", "y"], "mu": {"x": w, "y": 0}, "nu": {"x": 1, "y": w}}))
code, _, _ = run("--batch", batch, "--out", tmp / "reports", "--no-timing")
print("batch exit", code, sorted(p.name for p in (tmp / "reports").iterdir()))

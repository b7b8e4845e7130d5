"""Compare the compiled and pure-Python polynomial kernels.

Each workload runs in a fresh interpreter per backend, selected through
``CURVLIE_PURE_PYTHON``, so import-time dispatch is exercised exactly as in
normal use.

    python benchmarks/bench_kernels.py [--repeat N] [--workload NAME ...]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "multiply": """
from curvlie.poly import VariableTable, parse_polynomial
t = VariableTable(["x", "y", "z", "w"])
p = parse_polynomial("(x + 2*y - 3*z + w + 1)^9", t)
q = parse_polynomial("(x - y + z - 5*w - 2)^9", t)
def work():
    p * q
""",
    "cyclic5": """
from curvlie.groebner import buchberger
from curvlie.poly import VariableTable, parse_polynomial
t = VariableTable(["a", "b", "c", "d", "e"])
gens = [parse_polynomial(s, t) for s in (
    "a + b + c + d + e",
    "a*b + b*c + c*d + d*e + e*a",
    "a*b*c + b*c*d + c*d*e + d*e*a + e*a*b",
    "a*b*c*d + b*c*d*e + c*d*e*a + d*e*a*b + e*a*b*c",
    "a*b*c*d*e - 1",
)]
def work():
    buchberger(gens, "grevlex")
""",
    "katsura6": """
from curvlie.groebner import buchberger
from curvlie.poly import VariableTable, parse_polynomial
n = 6
names = [f"u{i}" for i in range(n + 1)]
t = VariableTable(names)
u = lambda i: names[abs(i)]
text = [" + ".join(("2*" if i else "") + u(i) for i in range(n + 1)) + " - 1"]
for m in range(n):
    text.append(" + ".join(f"{u(l)}*{u(m - l)}" for l in range(-n, n + 1) if abs(m - l) <= n) + f" - {u(m)}")
gens = [parse_polynomial(s, t) for s in text]
def work():
    buchberger(gens, "grevlex")
""",
    "einstein_e1_n": """
from curvlie.einstein import einstein_system_for_case
from curvlie.groebner import buchberger
gens = einstein_system_for_case("(E1,N)", 1).generators()
def work():
    buchberger(gens, "lex")
""",
}

RUNNER = """
import json, sys, time
from curvlie import kernels
{setup}
best = float("inf")
for _ in range({repeat}):
    t0 = time.perf_counter()
    work()
    best = min(best, time.perf_counter() - t0)
print(json.dumps({{"backend": kernels.BACKEND, "seconds": best}}))
"""


def run(workload: str, pure: bool, repeat: int) -> dict:
    env = dict(os.environ, CURVLIE_PURE_PYTHON="1" if pure else "0")
    code = RUNNER.format(setup=WORKLOADS[workload], repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True).stdout
    return json.loads(out.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--workload", action="append", choices=sorted(WORKLOADS))
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    rows = []
    for name in args.workload or list(WORKLOADS):
        compiled = run(name, False, args.repeat)
        python = run(name, True, args.repeat)
        rows.append({"workload": name, "compiled_backend": compiled["backend"],
                     "compiled_s": compiled["seconds"], "python_s": python["seconds"],
                     "speedup": python["seconds"] / compiled["seconds"]})
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'workload':<18}{'compiled':>10}{'python':>10}{'speedup':>9}")
    for r in rows:
        label = r["compiled_s"] if r["compiled_backend"] != "python" else float("nan")
        print(f"{r['workload']:<18}{label:>10.3f}{r['python_s']:>10.3f}{r['speedup']:>8.2f}x")
    if any(r["compiled_backend"] == "python" for r in rows):
        print("compiled extension not importable; both columns ran the fallback")
    return 0


if __name__ == "__main__":
    sys.exit(main())

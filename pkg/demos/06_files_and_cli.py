"""Instances on disk and the `kgl` command line.

An instance is one JSON object with four documents: the composition table,
the action, the bundle, and the kernel blocks (split into real and
imaginary parts). The CLI validates, classifies, checks, linearises and
reports on such files; exit code 0 means all checks passed, 1 means some
check failed, 2 means the input could not be used.

This script drives the same entry point in process, so its output is
exactly what the shell commands would print.
"""

import json
import tempfile
from pathlib import Path

from kgl.cli import main


def run(*argv):
    print(f"\n$ kgl {' '.join(argv)}")
    code = main(list(argv))
    print(f"[exit {code}]")
    return code


with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "instance.json"

    # Deterministic generated instance: structure, action, bundle, kernel.
    run("generate", "--family", "partial_bijections", "--seed", "3",
        "--mode", "psd_invariant", "--out", str(path))

    doc = json.loads(path.read_text())
    print("\ndocuments in the file:", sorted(doc))
    print("kernel entries stored:", len(doc["kernel"]["entries"]))

    run("validate", str(path))
    run("classify", str(path))
    run("check", "psd", str(path))
    run("check", "invariant", str(path))

    # The full report: axioms, classification, split, linearisations,
    # uniqueness, and the representation checks that apply.
    out = Path(tmp) / "report.json"
    code = run("report", str(path), "--out", str(out))
    report = json.loads(out.read_text())
    print(f"\nreport: {len(report['records'])} records, all passing: {code == 0}")
    for rec in report["records"][:6]:
        print(f"  [{rec['tag']}] {rec['name']}")
    print("  ...")

    # A failing check exits 1 and points at a witness: negating the kernel
    # keeps it Hermitian but destroys positivity.
    bad = dict(doc)
    bad["kernel"] = {"field": "complex", "entries": [
        {**e, "re": [[-v for v in row] for row in e["re"]],
         "im": [[-v for v in row] for row in e["im"]]}
        for e in doc["kernel"]["entries"]
    ]}
    bad_path = Path(tmp) / "bad.json"
    bad_path.write_text(json.dumps(bad))
    run("check", "psd", str(bad_path))

    # Unreadable input exits 2.
    run("validate", str(Path(tmp) / "missing.json"))

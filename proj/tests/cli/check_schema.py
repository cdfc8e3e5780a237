"""Runs every CLI command, validates each document against the shipped schema,
re-parses it, and checks exit codes and byte-identical reruns."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

tool, fixtures, schema_path = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
schema = json.loads(schema_path.read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

work = Path(tempfile.mkdtemp())
(work / "nonsymmetric.json").write_text('{"u": [0, 0], "B": [[1, 0.2], [0.3, 1]]}')
(work / "unknown_key.json").write_text('{"u": [0], "B": [[1]], "colour": 1}')
(work / "complex.json").write_text('{"u": [[0.1, 0.2]], "B": [[[1, 0.5]]]}')


def fx(name):
    return str(fixtures / name)


cases = [
    (["theta", "--params", fx("fermat.json")], 0),
    (["pmf", "--params", fx("standard.json")], 0),
    (["pmf", "--params", fx("divisor_point.json")], 3),
    (["moments", "--params", fx("fermat.json")], 0),
    (["moments", "--params", fx("standard.json"), "--d", "4"], 0),
    (["entropy", "--params", fx("standard.json")], 0),
    (["entropy", "--params", str(work / "complex.json")], 0),
    (["fit", "--mu", "[0]", "--sigma", "[[1]]"], 0),
    (["fit", "--mu", "[0, 0]", "--sigma", "[[1, 0], [0, 1]]", "--tol", "1e-10"], 0),
    (["fit", "--params", fx("ten_point_sample.json")], 0),
    (["fit", "--mu", "[0.3]", "--sigma", "[[0.05]]"], 3),
    (["fit", "--mu", "[0]", "--sigma", "[[-1]]"], 2),
    (["sample", "--count", "1000", "--seed", "42", "--params", fx("standard.json")], 0),
    (["map", "--params", fx("standard.json"), "--d", "3"], 0),
    (["cubic", "--params", str(work / "complex.json")], 0),
    (["kummer", "--params", fx("kummer.json")], 0),
    (["probe", "--params", fx("kummer.json"), "--trials", "20"], 0),
    (["probe", "--params", fx("standard.json"), "--trials", "20", "--seed", "3"], 0),
    (["verify", "--trials", "10"], 0),
    (["theta", "--params", str(work / "nonsymmetric.json")], 2),
    (["theta", "--params", str(work / "unknown_key.json")], 2),
    (["theta", "--params", fx("standard.json"), "--bogus", "1"], 2),
    (["nonsense"], 2),
    (["cubic", "--params", fx("kummer.json")], 2),
]

failures = 0
for args, expected in cases:
    runs = [subprocess.run([tool, *args], capture_output=True, text=True) for _ in range(2)]
    label = " ".join(args)
    problems = []
    if runs[0].returncode != expected:
        problems.append(f"exit {runs[0].returncode}, expected {expected}")
    if runs[0].stdout != runs[1].stdout:
        problems.append("output differs between identical runs")
    try:
        doc = json.loads(runs[0].stdout)
        errors = sorted(validator.iter_errors(doc), key=lambda e: e.path)
        if errors:
            problems.append("schema: " + errors[0].message)
        if json.loads(json.dumps(doc)) != doc:
            problems.append("document does not round-trip")
        if expected == 0 and "result" not in doc:
            problems.append("missing result")
        if expected != 0 and "error" not in doc and args[0] != "verify":
            problems.append("missing error object")
    except json.JSONDecodeError as e:
        problems.append(f"not JSON: {e}")
    status = "ok  " if not problems else "FAIL"
    print(f"{status} {label}" + ("" if not problems else ": " + "; ".join(problems)))
    failures += bool(problems)

out_file = work / "out.json"
code = subprocess.run([tool, "fit", "--mu", "[0]", "--sigma", "[[1]]", "--output", str(out_file)]).returncode
written = json.loads(out_file.read_text())
if code != 0 or list(validator.iter_errors(written)):
    print("FAIL --output")
    failures += 1
else:
    print("ok   --output")

sys.exit(1 if failures else 0)

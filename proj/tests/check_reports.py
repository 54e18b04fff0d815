"""Run representative commands and validate every report against the schema."""

import json
import subprocess
import sys

import jsonschema

E11 = ["--curve", "0,-1,1,0,0", "--conductor", "11"]

CASES = [
    (["invariants", *E11], 0),
    (["supersingular", *E11, "--search", "direct", "--min-prime", "5"], 0),
    (["classpoly", "--d", "23"], 0),
    (["classpoly", "--d", "5"], 1),
    (["bound", *E11, "--prime", "19", "--assume-surjective"], 0),
    (["bound", *E11, "--prime", "19", "--constant-exponent", "31"], 0),
    (["bound", *E11, "--auto"], 0),
    (["bound", *E11, "--prime", "23"], 1),
    (["bound", "--mode", "cm"], 0),
    (["bound", "--conductor", "11"], 0),
    (["bound", "--conductor", "11", "--threshold", "linear"], 0),
    (["bound", *E11, "--mode", "semistable"], 0),
    (["bound", *E11, "--mode", "effective"], 0),
    (["bound", "--conductor", "11", "--mode", "intro"], 0),
    (["bound", "--curve", "0,0,0,1,0", "--conductor", "64", "--prime", "7"], 0),
    (["verify", "--suite", "theta", "--xmax", "1000"], 0),
    (["verify", "--suite", "aux"], 0),
    (["verify", "--suite", "lemma1", "--lmax", "100"], 0),
]


def main():
    tool, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    bad = 0
    for args, want in CASES:
        proc = subprocess.run([tool, *args], capture_output=True, text=True)
        label = " ".join(args)
        if proc.returncode != want:
            print(f"FAIL {label}: exit {proc.returncode}, expected {want}\n{proc.stderr}")
            bad += 1
            continue
        report = json.loads(proc.stdout)
        again = json.loads(json.dumps(report))
        errors = [e.message for e in validator.iter_errors(report)]
        errors += [e.message for e in validator.iter_errors(again)]
        if again != report:
            errors.append("report changed across a dump/load cycle")
        if (want == 0) != (report["error"] is None):
            errors.append("error field disagrees with the exit code")
        if errors:
            print(f"FAIL {label}: " + "; ".join(errors[:5]))
            bad += 1
        else:
            print(f"ok   {label}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())

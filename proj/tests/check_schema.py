"""Run a spread of CLI commands and validate each report against docs/report.schema.json."""
import json
import subprocess
import sys

import jsonschema

lorentz, schema_path = sys.argv[1], sys.argv[2]
schema = json.load(open(schema_path))
commands = [
    ["catalog", "list"],
    ["catalog", "verify", "torus_quotient"],
    ["analyze", "builtin:desitter", "--at", "0,0,0,0", "--vector", "1,1,0,0"],
    ["classify", "builtin:schwarzschild_ef", "--submanifold", "horizon"],
    ["check", "builtin:desitter", "--condition", "P"],
    ["check", "builtin:flrw_dust", "--condition", "inclusions", "--points", "4"],
    ["check", "builtin:minkowski", "--condition", "temporal"],
    ["gs", "builtin:flrw_dust", "--submanifold", "sphere", "--at", "1,1", "--dir", "plus"],
    ["perturb", "builtin:null_H_demo", "--construction", "trapped", "--submanifold", "surface", "--nmax", "3"],
    ["perturb", "builtin:minkowski", "--construction", "trapped", "--submanifold", "sphere"],
    ["--timing", "geodesic", "builtin:desitter", "--from", "0,0,0,0", "--dir", "1,0.2,0,0", "--transport", "0,1,0,0"],
]
for cmd in commands:
    proc = subprocess.run([lorentz, *cmd], capture_output=True, text=True)
    if proc.returncode not in (0, 1):
        sys.exit(f"{cmd}: exit {proc.returncode}: {proc.stderr}")
    jsonschema.validate(json.loads(proc.stdout), schema)
    print("ok", " ".join(cmd))

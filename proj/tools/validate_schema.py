"""Validate fraclane JSON outputs against the shipped schemas.

usage: validate_schema.py SCHEMA_DIR FILE...
The schema is picked from each file's "schema" tag.
"""
import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource

TAGS = {
    "fraclane.config/1": "config.v1.schema.json",
    "fraclane.report/1": "report.v1.schema.json",
    "fraclane.sweep/1": "sweep.v1.schema.json",
}


def load_registry(schema_dir):
    docs = {name: json.loads((schema_dir / name).read_text()) for name in TAGS.values()}
    registry = Registry().with_resources((d["$id"], Resource.from_contents(d)) for d in docs.values())
    return docs, registry


def main(argv):
    schema_dir = pathlib.Path(argv[1])
    docs, registry = load_registry(schema_dir)
    bad = 0
    for path in argv[2:]:
        doc = json.loads(pathlib.Path(path).read_text())
        tag = doc.get("schema")
        if tag not in TAGS:
            print(f"{path}: unknown schema tag {tag!r}")
            bad += 1
            continue
        validator = jsonschema.Draft202012Validator(docs[TAGS[tag]], registry=registry)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors[:10]:
            print(f"{path}: /{'/'.join(map(str, e.path))}: {e.message}")
        bad += bool(errors)
        if not errors:
            print(f"{path}: valid {tag}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))

"""Validates a JSON document (file or stdin) against a schema file."""
import json
import sys

import jsonschema

schema = json.load(open(sys.argv[1]))
doc = json.load(open(sys.argv[2]) if len(sys.argv) > 2 else sys.stdin)
jsonschema.Draft202012Validator(schema).validate(doc)
print("valid")

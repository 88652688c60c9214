"""Regenerate the bundled ``marked`` custom-species document."""

import json
import sys
from pathlib import Path

from species_cohomology.species import MarkedSubsets, export_document

max_arity = int(sys.argv[1]) if len(sys.argv) > 1 else 6
doc = export_document(MarkedSubsets(), max_arity, name="marked")
out = Path(__file__).resolve().parents[1] / "src" / "species_cohomology" / "data" / "marked.json"
out.write_text(json.dumps(doc, separators=(",", ":")) + "\n")
print(f"wrote {out}")

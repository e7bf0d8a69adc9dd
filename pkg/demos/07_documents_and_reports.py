"""
Patch documents and reports
===========================

Patches are stored as JSON documents with exact rational coordinates.  The
``run`` pipeline behind the ``tilecorona report`` command validates a patch,
classifies its coronas and checks both sets of conditions.
"""

import os
import tempfile

from tilecorona import generate
from tilecorona.cli import RunConfig, run
from tilecorona.patch_io import load, save

doc = generate("hexagonal", 4).document(core_k=3)
path = os.path.join(tempfile.mkdtemp(), "hex.json")
save(doc, path)
back = load(path)
print("round trip exact:", back == doc, " faces:", len(back.faces))

report = run(RunConfig(input=path, k_max=3, core="document"))
print(report.to_text(timing=False))

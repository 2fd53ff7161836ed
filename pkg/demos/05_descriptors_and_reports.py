"""
Descriptor files, the faithfulness probe, and deterministic reports
===================================================================

Representations can come from JSON descriptors instead of code: either a
reference to a catalog entry or a list of generator images in the
canonical algebra basis.  Generator descriptors are validated on load;
for compact groups the one-parameter loops must close, which catches
perturbed generators that a small-angle sampling test would miss.

The faithfulness probe hunts for distinct tangent elements with equal
prolonged images.  For a representation with a kernel, the probe fails
with an explicit witness.  That failure is the documented, expected
outcome for such inputs: a prolongation can only be injective when the
representation itself is.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from lieprolong import (
    DescriptorError,
    catalog_entry,
    check_homomorphism,
    faithfulness_probe,
    load_representation,
)

# A generator descriptor for the angle-doubling map: one generator for
# the circle, sent to twice the rotation generator.
descriptor = {
    "name": "winding_from_file",
    "group": {"kind": "Circle", "dim": 2},
    "target_dim": 2,
    "map": {
        "kind": "generators",
        "generator_images": [[[0.0, 2.0], [-2.0, 0.0]]],
    },
}

rep = load_representation(descriptor)
print("loaded:", rep.name)
print("homomorphism check:", check_homomorphism(rep, 100, seed=12).verdict.value)

# Perturb the generator: exp(2*pi*D) no longer closes, so the loader
# rejects the descriptor and says which generator is at fault.
broken = json.loads(json.dumps(descriptor))
broken["map"]["generator_images"] = [[[0.0, 2.01], [-2.01, 0.0]]]
try:
    load_representation(broken)
except DescriptorError as exc:
    print("rejected perturbed generators:", exc.witness)

# Faithfulness: the identity-map representations pass; the angle
# doubler collides on the half turn and the probe reports exactly that.
print()
probe = faithfulness_probe(catalog_entry("gl_identity(2)").rep, 500, seed=12)
print("gl_identity(2):", probe.verdict.value,
      f"(closest images {probe.witness['min_image_separation']:.2e} apart)")

entry = catalog_entry("circle_winding_2")
probe = faithfulness_probe(entry.rep, 500, seed=12,
                           kernel_witness=entry.kernel_witness)
print("circle_winding_2:", probe.verdict.value,
      "-", probe.witness["kind"])

# The same checks run from the command line and emit canonical JSON:
# identical seeds give byte-identical reports, which makes the output
# diffable across machines and runs.
with tempfile.TemporaryDirectory() as scratch:
    path = Path(scratch) / "report.json"
    subprocess.run(
        [sys.executable, "-m", "lieprolong", "check",
         "--rep", "circle_rotation", "--suite", "homomorphism",
         "--seed", "42", "--output", str(path)],
        check=True,
    )
    document = json.loads(path.read_text())
    print()
    print("CLI verdicts:", [c["verdict"] for c in document["checks"]])

"""End-to-end walk through the command-line surface.

Writes a small PU dataset to LIBSVM files, then drives the CLI: train a
model, predict, evaluate against held-out labels, and export feature
importances.  Every command is also printed so the session can be
replayed in a shell.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from puforest import write_libsvm
from puforest.data_io import LabeledDataset

rng = np.random.default_rng(0)
workdir = Path(tempfile.mkdtemp(prefix="puforest_demo_"))


def make_split(n):
    x = rng.uniform(size=(n, 5))
    y = np.where(x[:, 1] + 0.2 * rng.normal(size=n) > 0.5, 1, -1)
    return x, y


x_train, y_train = make_split(400)
x_test, y_test = make_split(150)

paths = {
    "pos": workdir / "train_positives.svm",
    "unl": workdir / "train_unlabeled.svm",
    "test": workdir / "test_labeled.svm",
}
with open(paths["pos"], "w") as handle:
    write_libsvm(LabeledDataset(x_train[y_train == 1][:60], np.ones(60, int)), handle)
with open(paths["unl"], "w") as handle:
    write_libsvm(LabeledDataset(x_train, y_train), handle)  # labels ignored
with open(paths["test"], "w") as handle:
    write_libsvm(LabeledDataset(x_test, y_test), handle)

model = workdir / "model.puet"
predictions = workdir / "predictions.txt"
importances = workdir / "importance.csv"

commands = [
    [sys.executable, "-m", "puforest.cli", "train",
     "--method", "pu-et", "--risk", "nnpu", "--loss", "quadratic",
     "--trees", "50", "--prior", "0.5", "--seed", "7",
     "-p", str(paths["pos"]), "-u", str(paths["unl"]), "-o", str(model)],
    [sys.executable, "-m", "puforest.cli", "predict",
     "-m", str(model), "-d", str(paths["test"]), "-o", str(predictions)],
    [sys.executable, "-m", "puforest.cli", "evaluate",
     "-m", str(model), "-d", str(paths["test"]),
     "-p", str(paths["pos"]), "-u", str(paths["unl"])],
    [sys.executable, "-m", "puforest.cli", "importance",
     "-m", str(model), "-o", str(importances)],
]

for command in commands:
    shown = " ".join(c if " " not in c else repr(c) for c in command[2:])
    print("\n$ puforest %s" % shown.replace("puforest.cli ", ""))
    result = subprocess.run(command, capture_output=True, text=True)
    if result.stdout:
        print(result.stdout.rstrip())
    if result.returncode != 0:
        print(result.stderr.rstrip())
        sys.exit(result.returncode)

print("\nartifacts in %s:" % workdir)
for path in sorted(workdir.iterdir()):
    print("  %-24s %6d bytes" % (path.name, path.stat().st_size))

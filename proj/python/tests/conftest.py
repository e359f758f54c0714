import os
import sys
from pathlib import Path

build = os.environ.get("MOLFATE_BUILD_DIR")
if build:
    sys.path.insert(0, str(Path(build) / "python"))

MODEL_DIR = Path(os.environ.get("MOLFATE_MODEL_DIR", Path(__file__).resolve().parents[2] / "models"))

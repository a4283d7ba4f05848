import sys
from pathlib import Path

from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))  # make oracles.py importable

settings.register_profile("exact", deadline=None, max_examples=60)
settings.load_profile("exact")

import sys
from pathlib import Path

# the plot scripts are standalone files, not a package
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

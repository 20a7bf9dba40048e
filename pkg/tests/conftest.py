import pathlib
import sys

# make `pytest` work from a bare checkout, installed or not
sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import os
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[2]

DATA_DIR = Path(os.environ.get('GENUS_DATA_DIR', str(REPO_ROOT / 'data')))
DEFAULT_SEED = int(os.environ.get('GENUS_SEED', '0'))
DEFAULT_OUTPUT = os.environ.get('GENUS_OUTPUT', 'table')
SEARCH_BUDGET = int(os.environ.get('GENUS_SEARCH_BUDGET', '10000'))
LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO').upper()

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'


def data_dir(override=None) -> Path:
    """Data directory: explicit override, then GENUS_DATA_DIR read at call time, then <repo>/data."""
    if override:
        return Path(override)
    env = os.environ.get('GENUS_DATA_DIR')
    return Path(env) if env else DATA_DIR

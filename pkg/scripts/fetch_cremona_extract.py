"""
Download Cremona's allcurves tables and write the conductor <= 25000 extract used by
the ``cremona-25000`` bundle.

Usage:
    python scripts/fetch_cremona_extract.py
    python scripts/fetch_cremona_extract.py --bound 25000 --out data/cremona/allcurves.25000

The ranges come from the public ecdata repository. The written file starts with
``# source:`` and ``# coverage: 1-<bound>`` headers and is parsed once before it is
saved, so a truncated download never lands in the data directory.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import requests

REPO_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO_ROOT))

from backend.app.config import LOG_DATEFMT, LOG_FORMAT  # noqa: E402
from backend.app.services.cremona import parse_allcurves  # noqa: E402

logger = logging.getLogger('fetch_cremona_extract')

ECDATA_BASE = 'https://raw.githubusercontent.com/JohnCremona/ecdata/master/allcurves'
RANGE_WIDTH = 10000


def range_names(bound: int):
    """allcurves.00000-09999, allcurves.10000-19999, ... up to the range holding ``bound``."""
    for start in range(0, bound + 1, RANGE_WIDTH):
        yield f'allcurves.{start:05d}-{start + RANGE_WIDTH - 1:05d}'


def fetch_range(name: str) -> str:
    url = f'{ECDATA_BASE}/{name}'
    logger.info('Downloading %s', url)
    resp = requests.get(url, timeout=120)
    resp.raise_for_status()
    return resp.text


def build_extract(bound: int) -> str:
    lines = [
        f'# source: J. E. Cremona, ecdata allcurves tables ({ECDATA_BASE})',
        f'# coverage: 1-{bound}',
    ]
    for name in range_names(bound):
        for line in fetch_range(name).splitlines():
            parts = line.split()
            if parts and int(parts[0]) <= bound:
                lines.append(line.strip())
    return '\n'.join(lines) + '\n'


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument('--bound', type=int, default=25000)
    parser.add_argument('--out', default=str(REPO_ROOT / 'data' / 'cremona' / 'allcurves.25000'))
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, datefmt=LOG_DATEFMT)
    try:
        text = build_extract(args.bound)
    except requests.RequestException as e:
        logger.error('Download failed: %s', e)
        return 1

    db = parse_allcurves(text, source='download')
    if db.observed_range is None or db.observed_range[1] > args.bound:
        logger.error('Downloaded data does not match the requested bound')
        return 1
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding='utf-8')
    logger.info('Wrote %d curves over %d conductors to %s', db.record_count, len(db.by_conductor), out)
    return 0


if __name__ == '__main__':
    sys.exit(main())

"""
Entry point for the verification CLI.

    python backend/verify.py verify-mathieu
    python backend/verify.py weyl --type E8 --rotation --output json
"""
import logging
import os
import sys

from dotenv import load_dotenv
load_dotenv()

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from backend.app.cli import run
from backend.app.config import LOG_DATEFMT, LOG_FORMAT

logging.basicConfig(
    level=os.environ.get('LOG_LEVEL', 'INFO').upper(),
    format=LOG_FORMAT,
    datefmt=LOG_DATEFMT,
    stream=sys.stderr,
)

if __name__ == '__main__':
    sys.exit(run(sys.argv[1:]))

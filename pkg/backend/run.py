import logging
import os

from dotenv import load_dotenv
load_dotenv()

from app import create_app
from app.config import LOG_DATEFMT, LOG_FORMAT

logging.basicConfig(level=os.environ.get("LOG_LEVEL", "INFO").upper(), format=LOG_FORMAT, datefmt=LOG_DATEFMT)

app = create_app()

if __name__ == "__main__":
    app.run(host="0.0.0.0", port=int(os.environ.get("PORT", "5000")), debug=False, threaded=True)

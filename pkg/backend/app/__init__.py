import os
from flask import Flask
from .api import register_blueprints

def create_app(test_config=None):
    app = Flask(__name__)

    # Config
    app.config["GENUS_DATA_DIR"] = os.environ.get("GENUS_DATA_DIR")
    app.config["CREMONA_BUNDLE"] = os.environ.get("CREMONA_BUNDLE", "cremona-25000")
    app.config["JSON_SORT_KEYS"] = True
    if test_config:
        app.config.update(test_config)

    # Register Blueprints
    register_blueprints(app)

    @app.get("/api/health")
    def health():
        return {"ok": True}

    return app
